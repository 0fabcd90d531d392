//! Pushforward metric in generator coordinates, pencil split, contravariant
//! Christoffel symbols as exact rational functions, curvature and
//! pencil-linearity checks.
//!
//! Matrices over polynomials carry their variable count: `dim` coordinate
//! variables z1..zl (or t1..tl), optionally followed by lambda as an extra
//! polynomial variable of weighted degree kappa. Christoffel symbols only
//! differentiate the coordinate variables.
//!
//! All tensor identities are verified over a shared polynomial denominator
//! (cross-multiplied), so no gcd normalization happens inside the hot
//! loops; normalized `RationalFn` entries are produced once at the API
//! boundary.

use crate::arith::Coeff;
use crate::error::{Error, Result};
use crate::invariants::rewrite_in_generators;
use crate::lfourier::FourierPoly;
use crate::poly::MPoly;
use crate::ratfn::RationalFn;
use crate::rootsys::{RootSystem, WeightChoice};
use crate::weylgroup::WeylGroup;
use num_traits::Zero;

type P = MPoly<Coeff>;

/// Square matrix of polynomials plus shape info.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    pub n: usize,
    pub nvars: usize,
    pub entries: Vec<Vec<P>>,
}

impl PolyMatrix {
    pub fn new(entries: Vec<Vec<P>>) -> Self {
        let n = entries.len();
        let nvars = entries[0][0].nvars;
        for row in &entries {
            assert_eq!(row.len(), n);
            for e in row {
                assert_eq!(e.nvars, nvars);
            }
        }
        PolyMatrix { n, nvars, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> &P {
        &self.entries[i][j]
    }

    pub fn det(&self) -> P {
        poly_det(&self.entries)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn extend_vars(&self, nvars: usize) -> PolyMatrix {
        PolyMatrix::new(
            self.entries
                .iter()
                .map(|r| r.iter().map(|e| e.extend_vars(nvars)).collect())
                .collect(),
        )
    }

    pub fn to_frac(&self) -> FracMatrix {
        FracMatrix { n: self.n, nvars: self.nvars, num: self.entries.clone(), den: P::one(self.nvars) }
    }

    pub fn to_ratfn(&self) -> Vec<Vec<RationalFn>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|e| RationalFn::from_poly(e.clone())).collect())
            .collect()
    }
}

/// Matrix with a single shared polynomial denominator.
#[derive(Clone, Debug)]
pub struct FracMatrix {
    pub n: usize,
    pub nvars: usize,
    pub num: Vec<Vec<P>>,
    pub den: P,
}

impl FracMatrix {
    pub fn entry_ratfn(&self, i: usize, j: usize) -> RationalFn {
        RationalFn::new(self.num[i][j].clone(), self.den.clone())
    }

    /// Cancels the gcd of all numerators with the denominator and makes the
    /// denominator monic. Chart Jacobian determinants introduce large
    /// spurious common factors; reducing once keeps every later contraction
    /// small.
    pub fn reduced(mut self) -> FracMatrix {
        let mut g = self.den.clone();
        for row in &self.num {
            for e in row {
                if g.is_constant() {
                    break;
                }
                if !e.is_zero() {
                    g = crate::ratfn::poly_gcd(&g, e);
                }
            }
        }
        if !g.is_constant() {
            self.den = self.den.div_exact(&g).unwrap();
            for row in self.num.iter_mut() {
                for e in row.iter_mut() {
                    if !e.is_zero() {
                        *e = e.div_exact(&g).unwrap();
                    }
                }
            }
        }
        let lc = self.den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inv();
            self.den = self.den.scale(&inv);
            for row in self.num.iter_mut() {
                for e in row.iter_mut() {
                    *e = e.scale(&inv);
                }
            }
        }
        self
    }

    pub fn to_ratfn(&self) -> Vec<Vec<RationalFn>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.entry_ratfn(i, j)).collect()).collect()
    }

    /// Exact evaluation of all entries; None if the denominator vanishes.
    pub fn eval(&self, point: &[Coeff]) -> Option<Vec<Vec<Coeff>>> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        let dinv = d.inv();
        Some(
            self.num
                .iter()
                .map(|row| row.iter().map(|p| p.eval(point).mul(&dinv)).collect())
                .collect(),
        )
    }
}

pub fn poly_det(m: &[Vec<P>]) -> P {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let nv = m[0][0].nvars;
    let mut det = P::zero(nv);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<P>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != col).map(|c| m[r][c].clone()).collect())
            .collect();
        let mut term = m[0][col].mul(&poly_det(&minor));
        if col % 2 == 1 {
            term = term.neg();
        }
        det = det.add(&term);
    }
    det
}

/// Adjugate: adj(m)_{ij} = (-1)^{i+j} det(minor_{ji}); m * adj = det * I.
pub fn poly_adjugate(m: &[Vec<P>]) -> Vec<Vec<P>> {
    let n = m.len();
    let nv = m[0][0].nvars;
    if n == 1 {
        return vec![vec![P::one(nv)]];
    }
    let mut adj = vec![vec![P::zero(nv); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<P>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let mut c = poly_det(&minor);
            if (i + j) % 2 == 1 {
                c = c.neg();
            }
            adj[i][j] = c;
        }
    }
    adj
}

/// g_lambda^{ij} = -D_r(z^i) a^{rs} D_s(z^j) as a Fourier polynomial, then
/// rewritten into the (z, lambda) polynomial ring. The sign implements the
/// paper's 1/(4 pi^2) prefactor under the normalized derivative convention.
pub fn pushforward_metric(
    zgens: &[FourierPoly],
    rs: &RootSystem,
    wc: &WeightChoice,
    group: &WeylGroup,
) -> Result<PolyMatrix> {
    let l = rs.rank;
    let mut entries = vec![vec![P::zero(l + 1); l]; l];
    let derivs: Vec<Vec<FourierPoly>> =
        zgens.iter().map(|z| (0..l).map(|r| z.normalized_derivative(r)).collect()).collect();
    for i in 0..l {
        for j in i..l {
            let mut gij = FourierPoly::zero(l);
            for r in 0..l {
                for s in 0..l {
                    if rs.a.at(r, s).is_zero() {
                        continue;
                    }
                    let t = derivs[i][r]
                        .mul(&derivs[j][s])
                        .scale(&Coeff::from_rat(rs.a.at(r, s).clone()));
                    gij = gij.add(&t);
                }
            }
            gij = gij.neg();
            let p = rewrite_in_generators(&gij, zgens, rs, wc, group)
                .map_err(|e| Error::RewriteFailure(e.to_string()))?;
            entries[i][j] = p.clone();
            entries[j][i] = p;
        }
    }
    let m = PolyMatrix::new(entries);
    // Entries are homogeneous of degree theta_i + theta_j under
    // deg z_r = theta_r, deg lambda = kappa.
    let mut weights = wc.theta.clone();
    weights.push(wc.kappa.clone());
    for i in 0..l {
        for j in 0..l {
            if let Some(d) = m.entries[i][j]
                .weighted_degree(&weights)
                .map_err(|(a, b)| Error::Other(format!("inhomogeneous metric entry: {a} vs {b}")))?
            {
                assert_eq!(d, &wc.theta[i] + &wc.theta[j], "metric degree mismatch");
            }
        }
    }
    Ok(m)
}

/// Splits G(z, lambda) = g(z) + lambda eta(z). Errors when a lambda^2 or
/// higher term survives, or when eta is degenerate.
pub fn split_pencil(g_lambda: &PolyMatrix) -> Result<(PolyMatrix, PolyMatrix)> {
    let l = g_lambda.n;
    let lam = g_lambda.nvars - 1;
    let mut offenders = Vec::new();
    for i in 0..l {
        for j in 0..l {
            if g_lambda.entries[i][j].degree_in(lam) > 1 {
                offenders.push(format!("({},{})", i + 1, j + 1));
            }
        }
    }
    if !offenders.is_empty() {
        return Err(Error::NotLinearInLambda(offenders.join(", ")));
    }
    let take = |k: usize| -> Vec<Vec<P>> {
        (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| {
                        let cs = g_lambda.entries[i][j].coeffs_in_var(lam);
                        cs.get(k)
                            .cloned()
                            .unwrap_or_else(|| P::zero(g_lambda.nvars))
                            .shrink_vars(lam)
                    })
                    .collect()
            })
            .collect()
    };
    let g = PolyMatrix::new(take(0));
    let eta = PolyMatrix::new(take(1));
    if eta.det().is_zero() {
        return Err(Error::DegenerateEta);
    }
    Ok((g, eta))
}

/// Christoffel symbols of a contravariant metric N/d over the shared
/// denominators cov_den = d * det(N)^2 and contra_den = d^2 * det(N)^2.
#[derive(Clone, Debug)]
pub struct ChristoffelPack {
    pub n: usize,
    pub dim: usize,
    /// cov_num[k][i][j] / cov_den = Gamma^k_{ij}.
    pub cov_num: Vec<Vec<Vec<P>>>,
    pub cov_den: P,
    /// contra_num[i][j][k] / contra_den = Gamma^{ij}_k = -g^{ir} Gamma^j_{rk}.
    pub contra_num: Vec<Vec<Vec<P>>>,
    pub contra_den: P,
    /// Covariant metric: lower_num / lower_den.
    pub lower_num: Vec<Vec<P>>,
    pub lower_den: P,
}

/// Builds the Christoffel pack of a contravariant metric given as N/d.
/// `dim` is the number of coordinate variables; trailing variables are
/// parameters.
pub fn christoffel_pack(m: &FracMatrix, dim: usize) -> Result<ChristoffelPack> {
    let n = m.n;
    let nv = m.nvars;
    let det_n = poly_det(&m.num);
    if det_n.is_zero() {
        return Err(Error::SingularMetric);
    }
    let adj = poly_adjugate(&m.num);
    // lower = (N/d)^{-1} = d * adj(N) / det(N).
    let lower_num: Vec<Vec<P>> =
        adj.iter().map(|row| row.iter().map(|e| e.mul(&m.den)).collect()).collect();
    let lower_den = det_n.clone();
    // d(lower)/dx^i = (dL * detN - L * d(detN)) / detN^2  =: dl / detN^2.
    let ddet: Vec<P> = (0..dim).map(|v| det_n.derivative(v)).collect();
    let mut dlow = vec![vec![vec![P::zero(nv); n]; n]; dim];
    for v in 0..dim {
        for i in 0..n {
            for j in i..n {
                let d = lower_num[i][j]
                    .derivative(v)
                    .mul(&det_n)
                    .sub(&lower_num[i][j].mul(&ddet[v]));
                dlow[v][i][j] = d.clone();
                dlow[v][j][i] = d;
            }
        }
    }
    // cov^k_{ij} = 1/2 sum_r (N^{kr}/d) * (dlow terms / detN^2)
    //           = cov_num / (d * detN^2).
    let half = Coeff::from_frac(1, 2);
    let mut cov_num = vec![vec![vec![P::zero(nv); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut s = P::zero(nv);
                for r in 0..n {
                    if m.num[k][r].is_zero() {
                        continue;
                    }
                    let mut inner = P::zero(nv);
                    if i < dim {
                        inner = inner.add(&dlow[i][j][r]);
                    }
                    if j < dim {
                        inner = inner.add(&dlow[j][i][r]);
                    }
                    if r < dim {
                        inner = inner.sub(&dlow[r][i][j]);
                    }
                    s = s.add(&m.num[k][r].mul(&inner));
                }
                let g = s.scale(&half);
                cov_num[k][i][j] = g.clone();
                cov_num[k][j][i] = g;
            }
        }
    }
    let det_n2 = det_n.mul(&det_n);
    let cov_den = m.den.mul(&det_n2);
    // contra^{ij}_k = -sum_r (N^{ir}/d) cov^j_{rk} = contra_num/(d^2 detN^2).
    let mut contra_num = vec![vec![vec![P::zero(nv); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = P::zero(nv);
                for r in 0..n {
                    if !m.num[i][r].is_zero() && !cov_num[j][r][k].is_zero() {
                        s = s.add(&m.num[i][r].mul(&cov_num[j][r][k]));
                    }
                }
                contra_num[i][j][k] = s.neg();
            }
        }
    }
    let contra_den = m.den.mul(&cov_den);
    Ok(ChristoffelPack {
        n,
        dim,
        cov_num,
        cov_den,
        contra_num,
        contra_den,
        lower_num,
        lower_den,
    })
}

/// Normalized rational-function Christoffel entries, for reports and
/// formula-level consumers.
#[derive(Clone, Debug)]
pub struct ChristoffelData {
    pub dim: usize,
    /// cov[k][i][j] = Gamma^k_{ij}.
    pub cov: Vec<Vec<Vec<RationalFn>>>,
    /// contra[i][j][k] = Gamma^{ij}_k.
    pub contra: Vec<Vec<Vec<RationalFn>>>,
    /// Covariant metric (inverse of the input).
    pub lower: Vec<Vec<RationalFn>>,
}

impl ChristoffelPack {
    pub fn normalize(&self) -> ChristoffelData {
        let n = self.n;
        let cov = (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| RationalFn::new(self.cov_num[k][i][j].clone(), self.cov_den.clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let contra = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| {
                                RationalFn::new(self.contra_num[i][j][k].clone(), self.contra_den.clone())
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let lower = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| RationalFn::new(self.lower_num[i][j].clone(), self.lower_den.clone()))
                    .collect()
            })
            .collect();
        ChristoffelData { dim: self.dim, cov, contra, lower }
    }
}

/// Christoffel data of a polynomial contravariant metric, normalized.
pub fn contravariant_christoffel(metric: &PolyMatrix, dim: usize) -> Result<ChristoffelData> {
    Ok(christoffel_pack(&metric.to_frac(), dim)?.normalize())
}

/// Checks the two defining relations of the contravariant connection:
/// d g^{ij}/d x^k = Gamma_k^{ij} + Gamma_k^{ji} and
/// g^{ie} Gamma_e^{jk} = g^{je} Gamma_e^{ik}, cross-multiplied.
pub fn christoffel_consistency(m: &FracMatrix, pack: &ChristoffelPack) -> bool {
    let n = m.n;
    // d(N_ij/d)/dx^k = (dN d - N dd)/d^2; compare with (K^{ij}_k + K^{ji}_k)/cden:
    // (dN d - N dd) * cden = (K + K') * d^2.
    let d2 = m.den.mul(&m.den);
    for i in 0..n {
        for j in 0..n {
            for k in 0..pack.dim {
                let dn = m.num[i][j]
                    .derivative(k)
                    .mul(&m.den)
                    .sub(&m.num[i][j].mul(&m.den.derivative(k)));
                let lhs = dn.mul(&pack.contra_den);
                let rhs = pack.contra_num[i][j][k].add(&pack.contra_num[j][i][k]).mul(&d2);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    // sum_e N^{ie} K^{jk}_e = sum_e N^{je} K^{ik}_e (common dens cancel).
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut lhs = P::zero(m.nvars);
                let mut rhs = P::zero(m.nvars);
                for e in 0..n {
                    lhs = lhs.add(&m.num[i][e].mul(&pack.contra_num[j][k][e]));
                    rhs = rhs.add(&m.num[j][e].mul(&pack.contra_num[i][k][e]));
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Assembles the Riemann tensor of the covariant metric and tests identical
/// vanishing.
pub fn curvature_is_zero(metric: &PolyMatrix, dim: usize) -> Result<bool> {
    curvature_is_zero_frac(&metric.to_frac(), dim)
}

pub fn curvature_is_zero_frac(m: &FracMatrix, dim: usize) -> Result<bool> {
    let pack = christoffel_pack(m, dim)?;
    Ok(riemann_vanishes(&pack))
}

fn riemann_vanishes(pack: &ChristoffelPack) -> bool {
    let n = pack.n;
    let dim = pack.dim;
    let cd = &pack.cov_den;
    let dcd: Vec<P> = (0..dim).map(|v| cd.derivative(v)).collect();
    // Gamma = c/cd. R^rho_{sigma mu nu} over cd^2:
    //   (dc_mu cd - c dcd_mu) - (dc_nu cd - c dcd_nu) + sum_e (c c - c c)
    for rho in 0..n {
        for sigma in 0..n {
            for mu in 0..dim {
                for nu in mu + 1..dim {
                    let c_nu_sig = &pack.cov_num[rho][nu][sigma];
                    let c_mu_sig = &pack.cov_num[rho][mu][sigma];
                    let mut r = c_nu_sig.derivative(mu).mul(cd).sub(&c_nu_sig.mul(&dcd[mu]));
                    r = r.sub(&c_mu_sig.derivative(nu).mul(cd).sub(&c_mu_sig.mul(&dcd[nu])));
                    for e in 0..n {
                        r = r.add(&pack.cov_num[rho][mu][e].mul(&pack.cov_num[e][nu][sigma]));
                        r = r.sub(&pack.cov_num[rho][nu][e].mul(&pack.cov_num[e][mu][sigma]));
                    }
                    if !r.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Verifies Gamma_{g + lambda eta} = Gamma_g + lambda Gamma_eta exactly,
/// with lambda a symbolic variable, by cross-multiplied comparison.
pub fn check_linearity(g: &PolyMatrix, eta: &PolyMatrix) -> Result<bool> {
    assert_eq!(g.nvars, eta.nvars);
    let l = g.n;
    let dim = g.nvars;
    let nv = dim + 1;
    let lam = P::var(nv, dim);
    let mut pencil_entries = vec![vec![P::zero(nv); l]; l];
    for i in 0..l {
        for j in 0..l {
            let ge = g.entries[i][j].extend_vars(nv);
            let ee = eta.entries[i][j].extend_vars(nv).mul(&lam);
            pencil_entries[i][j] = ge.add(&ee);
        }
    }
    let pencil = PolyMatrix::new(pencil_entries);
    let pk_m = christoffel_pack(&pencil.to_frac(), dim)?;
    let pk_g = christoffel_pack(&g.to_frac(), dim)?;
    let pk_e = christoffel_pack(&eta.to_frac(), dim)?;
    // K_m/D_m = K_g/D_g + lam K_e/D_e
    // <=> K_m D_g D_e = (K_g D_e + lam K_e D_g) D_m, all lifted to nv vars.
    let dg = pk_g.contra_den.extend_vars(nv);
    let de = pk_e.contra_den.extend_vars(nv);
    let dm = &pk_m.contra_den;
    let dg_de = dg.mul(&de);
    for i in 0..l {
        for j in 0..l {
            for k in 0..dim {
                let lhs = pk_m.contra_num[i][j][k].mul(&dg_de);
                let kg = pk_g.contra_num[i][j][k].extend_vars(nv).mul(&de);
                let ke = pk_e.contra_num[i][j][k].extend_vars(nv).mul(&dg).mul(&lam);
                let rhs = kg.add(&ke).mul(dm);
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::basic_generators;
    use crate::rootsys::{build_root_system, make_weight, Family};
    use crate::weylgroup::generate_group;

    fn poly(nvars: usize, terms: &[(i64, i64, &[u32])]) -> P {
        let mut p = P::zero(nvars);
        for (n, d, e) in terms {
            p.insert_add(e.to_vec(), Coeff::from_frac(*n, *d));
        }
        p
    }

    fn a2_pencil() -> (PolyMatrix, PolyMatrix) {
        let rs = build_root_system(Family::A, 2).unwrap();
        let wc = make_weight(&rs, &[0, 1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        split_pencil(&g_lam).unwrap()
    }

    #[test]
    fn a1_pushforward_matches_paper() {
        let rs = build_root_system(Family::A, 1).unwrap();
        let wc = make_weight(&rs, &[1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        // G = [-z1^2/2 + 2 lambda]
        let expect = poly(2, &[(-1, 2, &[2, 0]), (2, 1, &[0, 1])]);
        assert_eq!(g.entries[0][0], expect);
    }

    #[test]
    fn a2_pushforward_matches_paper() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let wc = make_weight(&rs, &[0, 1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        // [[-2/3 z1^2 + 2 z2, 3 lam - 1/3 z1 z2], [., 2 lam z1 - 2/3 z2^2]]
        assert_eq!(g.entries[0][0], poly(3, &[(-2, 3, &[2, 0, 0]), (2, 1, &[0, 1, 0])]));
        assert_eq!(g.entries[0][1], poly(3, &[(3, 1, &[0, 0, 1]), (-1, 3, &[1, 1, 0])]));
        assert_eq!(g.entries[1][1], poly(3, &[(2, 1, &[1, 0, 1]), (-2, 3, &[0, 2, 0])]));
        assert!(g.is_symmetric());
    }

    #[test]
    fn a2_split_matches_paper() {
        let (g, eta) = a2_pencil();
        // eta = [[0, 3], [3, 2 z1]]
        assert!(eta.entries[0][0].is_zero());
        assert_eq!(eta.entries[0][1], poly(2, &[(3, 1, &[0, 0])]));
        assert_eq!(eta.entries[1][1], poly(2, &[(2, 1, &[1, 0])]));
        // g = [[-2/3 z1^2 + 2 z2, -1/3 z1 z2], [., -2/3 z2^2]]
        assert_eq!(g.entries[0][0], poly(2, &[(-2, 3, &[2, 0]), (2, 1, &[0, 1])]));
        assert_eq!(g.entries[0][1], poly(2, &[(-1, 3, &[1, 1])]));
        assert_eq!(g.entries[1][1], poly(2, &[(-2, 3, &[0, 2])]));
    }

    #[test]
    fn c3_pushforward_and_split_match_paper() {
        let rs = build_root_system(Family::C, 3).unwrap();
        let wc = make_weight(&rs, &[0, 0, 1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        // Spot-check displayed entries: G11 = -y1^2 + 2 y2 + 12 lambda.
        assert_eq!(
            g_lam.entries[0][0],
            poly(4, &[(-1, 1, &[2, 0, 0, 0]), (2, 1, &[0, 1, 0, 0]), (12, 1, &[0, 0, 0, 1])])
        );
        let (g, eta) = split_pencil(&g_lam).unwrap();
        // eta11 = 12, eta12 = 8 y1, eta33 = -8 y1 y3 + 4 y2^2
        assert_eq!(eta.entries[0][0], poly(3, &[(12, 1, &[0, 0, 0])]));
        assert_eq!(eta.entries[0][1], poly(3, &[(8, 1, &[1, 0, 0])]));
        assert_eq!(eta.entries[2][2], poly(3, &[(-8, 1, &[1, 0, 1]), (4, 1, &[0, 2, 0])]));
        // g33 = -3 y3^2
        assert_eq!(g.entries[2][2], poly(3, &[(-3, 1, &[0, 0, 2])]));
    }

    #[test]
    fn b3_basic_generators_are_not_pencil() {
        let rs = build_root_system(Family::B, 3).unwrap();
        let wc = make_weight(&rs, &[1, 0, 0]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        assert!(matches!(split_pencil(&g_lam), Err(Error::NotLinearInLambda(_))));
    }

    #[test]
    fn christoffel_of_constant_metric_vanishes() {
        let eta = PolyMatrix::new(vec![vec![poly(1, &[(2, 1, &[0])])]]);
        let ch = contravariant_christoffel(&eta, 1).unwrap();
        assert!(ch.contra[0][0][0].is_zero());
    }

    #[test]
    fn christoffel_consistency_a2_eta() {
        let (_, eta) = a2_pencil();
        let m = eta.to_frac();
        let pack = christoffel_pack(&m, 2).unwrap();
        assert!(christoffel_consistency(&m, &pack));
    }

    #[test]
    fn christoffel_a1_g_value() {
        // g of A1: [-z1^2/2]; Gamma^{11}_1 = -z1/2.
        let g = PolyMatrix::new(vec![vec![poly(1, &[(-1, 2, &[2])])]]);
        let ch = contravariant_christoffel(&g, 1).unwrap();
        let expect = RationalFn::from_poly(poly(1, &[(-1, 2, &[1])]));
        assert_eq!(ch.contra[0][0][0], expect);
    }

    #[test]
    fn curvature_flat_and_nonflat() {
        let (g, eta) = a2_pencil();
        assert!(curvature_is_zero(&eta, 2).unwrap());
        assert!(curvature_is_zero(&g, 2).unwrap());
        // diag(1, z1) is not flat.
        let bad = PolyMatrix::new(vec![
            vec![poly(2, &[(1, 1, &[0, 0])]), P::zero(2)],
            vec![P::zero(2), poly(2, &[(1, 1, &[1, 0])])],
        ]);
        assert!(!curvature_is_zero(&bad, 2).unwrap());
    }

    #[test]
    fn linearity_holds_for_a2_pencil() {
        let (g, eta) = a2_pencil();
        assert!(check_linearity(&g, &eta).unwrap());
    }

    #[test]
    fn linearity_fails_for_non_pencil_pair() {
        // Replace eta's corner entry 2 z1 by 2 z2: no longer a flat pencil
        // with g, and the Christoffel affinity breaks.
        let (g, _) = a2_pencil();
        let eta_bad = PolyMatrix::new(vec![
            vec![P::zero(2), poly(2, &[(3, 1, &[0, 0])])],
            vec![poly(2, &[(3, 1, &[0, 0])]), poly(2, &[(2, 1, &[0, 1])])],
        ]);
        assert!(!check_linearity(&g, &eta_bad).unwrap());
    }

    #[test]
    fn constant_multiple_pencil_is_affine() {
        // (g, 2g) satisfies the affinity identity: scaling a metric by a
        // constant leaves covariant Christoffel symbols unchanged, so
        // Gamma_{g(1+2 lambda)} = (1+2 lambda) Gamma_g = Gamma_g + lambda
        // Gamma_{2g}. Recorded as a computed fact.
        let g = PolyMatrix::new(vec![vec![poly(1, &[(-1, 2, &[2])])]]);
        let g2 = PolyMatrix::new(vec![vec![poly(1, &[(-1, 1, &[2])])]]);
        assert!(check_linearity(&g, &g2).unwrap());
    }
}
