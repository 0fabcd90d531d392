//! Basic generators by Weyl orbit sums, rewriting invariants as polynomials
//! in generators and lambda, Jacobian determinants against the closed
//! product formula, and the leading-term verifications.

use crate::arith::{Coeff, RatMat};
use crate::error::{Error, Result};
use crate::lfourier::{FKey, FourierPoly};
use crate::poly::{MPoly, Ring};
use crate::rootsys::{RootSystem, WeightChoice};
use crate::weylgroup::{orbit, WeylGroup};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The basic generators y^1..y^l of the invariant lambda-Fourier ring.
#[derive(Clone, Debug)]
pub struct BasicGenerators {
    pub y: Vec<FourierPoly>,
    /// deg y^j = theta_j.
    pub degrees: Vec<BigRational>,
}

/// y^j = e^{-2 pi i theta_j c} * (1/N_j) sum_W e^{2 pi i (omega_j, sigma x)}:
/// one term per orbit element of omega_j, all coefficients 1.
pub fn basic_generators(
    rs: &RootSystem,
    wc: &WeightChoice,
    group: &WeylGroup,
) -> BasicGenerators {
    let l = rs.rank;
    let mut y = Vec::with_capacity(l);
    for j in 0..l {
        let (orb, _n) = orbit(group, &rs.fundamental_weights[j]);
        let mut p = FourierPoly::zero(l);
        for mu in &orb {
            // Frequency vector: coordinates of mu in the fundamental-weight
            // basis, (mu, alpha_r^vee) = sum_p mu_p gram_{pr}.
            let mut exp = vec![0i32; l];
            for r in 0..l {
                let mut s = BigRational::zero();
                for p_ in 0..l {
                    s += &mu[p_] * rs.coroot_gram.at(p_, r);
                }
                assert!(s.denom().is_one(), "orbit weight has non-integer coordinate");
                exp[r] = i64::try_from(s.numer().clone()).unwrap() as i32;
            }
            // lambda power: (omega_j - mu, omega)/kappa.
            let mut q = BigRational::zero();
            for p_ in 0..l {
                q += (&rs.fundamental_weights[j][p_] - &mu[p_])
                    * BigRational::from_integer(wc.marks[p_].into());
            }
            q /= &wc.kappa;
            assert!(q.denom().is_one() && !q.is_negative(), "lambda power {q} not in Z>=0");
            p.insert_add(FKey { lam: q, exp }, Coeff::one());
        }
        // Leading term e^{2 pi i x^j} with coefficient 1.
        let mut lead = vec![0i32; l];
        lead[j] = 1;
        assert_eq!(
            p.terms.get(&FKey { lam: BigRational::zero(), exp: lead }),
            Some(&Coeff::one()),
            "missing leading term in y^{}",
            j + 1
        );
        assert!(p.is_strict());
        debug_assert!(p.is_invariant(group, wc));
        assert_eq!(p.grade(wc).unwrap(), wc.theta[j]);
        y.push(p);
    }
    BasicGenerators { y, degrees: wc.theta.clone() }
}

/// Report of the leading-term theorem checks.
#[derive(Clone, Debug)]
pub struct LeadingTermReport {
    /// For each j in S: whether y^j|_{lambda=0} = e^{2 pi i x^j}.
    pub null_is_leading: Vec<(usize, bool)>,
    /// Whether prod_r (z^r|_0)^{m_r} is the single monomial e^{2 pi i (omega, x)}.
    pub product_identity: bool,
    pub pass: bool,
    pub witness: Option<String>,
}

pub fn verify_leading_terms(
    gens: &[FourierPoly],
    wc: &WeightChoice,
) -> LeadingTermReport {
    let l = gens.len();
    let mut null_is_leading = Vec::new();
    let mut pass = true;
    let mut witness = None;
    for &j in &wc.s_set {
        let mut lead = vec![0i32; l];
        lead[j] = 1;
        let expect = FourierPoly::exp_term(l, &lead);
        let got = gens[j].null_part();
        let ok = got == expect;
        if !ok && witness.is_none() {
            witness = Some(format!("z^{}|_0 = {:?}", j + 1, got));
        }
        pass &= ok;
        null_is_leading.push((j, ok));
    }
    // prod_r (z^r|_0)^{m_r} = e^{2 pi i (omega, x-hat)}, whose frequency
    // vector is the marks vector.
    let mut prod = FourierPoly::one(l);
    for (r, &m) in wc.marks.iter().enumerate() {
        for _ in 0..m {
            prod = prod.mul(&gens[r].null_part());
        }
    }
    let exp: Vec<i32> = wc.marks.iter().map(|&m| m as i32).collect();
    let product_identity = prod == FourierPoly::exp_term(l, &exp);
    if !product_identity && witness.is_none() {
        witness = Some(format!("product = {prod:?}"));
    }
    pass &= product_identity;
    LeadingTermReport { null_is_leading, product_identity, pass, witness }
}

/// Reduction context for rewriting invariants in generators.
struct RewriteOrder {
    theta: Vec<BigRational>,
    /// Positive functional l(b) = b . (C^{-1} 1) that strictly drops when a
    /// positive root combination is subtracted from a weight; used as the
    /// tie-break so each reduction step strictly decreases the leading key.
    lvec: Vec<BigRational>,
}

impl RewriteOrder {
    fn new(rs: &RootSystem) -> Self {
        let l = rs.rank;
        let c = RatMat::new(
            (0..l)
                .map(|s| (0..l).map(|r| BigRational::from_integer(rs.cartan[s][r].into())).collect())
                .collect(),
        );
        let cinv = c.inverse().expect("Cartan matrix invertible");
        let ones = vec![BigRational::one(); l];
        let lvec = cinv.mul_vec(&ones);
        RewriteOrder { theta: rs.a.mul_vec(&ones), lvec }
    }

    /// (weighted degree, height functional) of a dominant exponent vector.
    fn key(&self, wc: &WeightChoice, exp: &[i32]) -> (BigRational, BigRational, Vec<i32>) {
        let mut wdeg = BigRational::zero();
        let mut h = BigRational::zero();
        for (r, &e) in exp.iter().enumerate() {
            let er = BigRational::from_integer(e.into());
            wdeg += &wc.theta[r] * &er;
            h += &self.lvec[r] * &er;
        }
        let _ = &self.theta;
        (wdeg, h, exp.to_vec())
    }
}

/// Rewrites a strict, invariant, homogeneous element as an exact polynomial
/// in the generators and lambda (variables z1..zl, lambda last). The result
/// substitutes back to the input, term for term; this is checked before
/// returning. Inhomogeneous inputs are split by degree first.
pub fn rewrite_in_generators<R: Ring>(
    f: &FourierPoly<R>,
    gens: &[FourierPoly<R>],
    rs: &RootSystem,
    wc: &WeightChoice,
    group: &WeylGroup,
) -> Result<MPoly<R>> {
    let l = rs.rank;
    if !f.is_strict() {
        return Err(Error::NotInRing(format!("{:?}", f.resolution())));
    }
    if let Some(i) = f.invariance_witness(group, wc) {
        return Err(Error::NotInvariant(i + 1));
    }
    // Split by degree.
    let mut by_degree: std::collections::BTreeMap<BigRational, FourierPoly<R>> =
        std::collections::BTreeMap::new();
    for (k, c) in &f.terms {
        let d = FourierPoly::<R>::degree_of_key(k, wc);
        by_degree
            .entry(d)
            .or_insert_with(|| FourierPoly::zero(l))
            .insert_add(k.clone(), c.clone());
    }
    let order = RewriteOrder::new(rs);
    let mut out = MPoly::zero(l + 1);
    let mut pow_cache: Vec<Vec<FourierPoly<R>>> = gens.iter().map(|g| vec![g.clone()]).collect();
    for (_deg, mut rem) in by_degree {
        // Invariance of each homogeneous part follows from invariance of f
        // and degree preservation; still re-checked per reduction step below.
        while !rem.is_zero() {
            let best = rem
                .terms
                .keys()
                .filter(|k| k.exp.iter().all(|&e| e >= 0))
                .max_by_key(|k| order.key(wc, &k.exp))
                .cloned();
            let Some(key) = best else {
                return Err(Error::ReductionStall(format!("{rem:?}")));
            };
            let coeff = rem.terms.get(&key).unwrap().clone();
            assert!(key.lam.denom().is_one() && !key.lam.is_negative());
            let qk = u32::try_from(i64::try_from(key.lam.numer().clone()).unwrap()).unwrap();
            // Record the monomial coeff * lambda^q * prod z_j^{b_j}.
            let mut mono = vec![0u32; l + 1];
            for (j, &e) in key.exp.iter().enumerate() {
                mono[j] = e as u32;
            }
            mono[l] = qk;
            out.insert_add(mono, coeff.clone());
            // Subtract coeff * lambda^q * prod gens^{b}.
            let mut prod =
                FourierPoly::monomial(l, key.lam.clone(), &vec![0i32; l], coeff);
            for (j, &e) in key.exp.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(gen_pow(&mut pow_cache, gens, j, e as usize));
                }
            }
            rem = rem.sub(&prod);
            if let Some(i) = rem.invariance_witness(group, wc) {
                return Err(Error::NotInvariant(i + 1));
            }
        }
    }
    // Substitution check: the polynomial evaluates back to f exactly.
    let back = substitute_generators(&out, gens);
    if back != *f {
        return Err(Error::RewriteFailure("substitution check failed".into()));
    }
    Ok(out)
}

fn gen_pow<'a, R: Ring>(
    cache: &'a mut [Vec<FourierPoly<R>>],
    gens: &[FourierPoly<R>],
    j: usize,
    e: usize,
) -> &'a FourierPoly<R> {
    while cache[j].len() < e {
        let next = cache[j].last().unwrap().mul(&gens[j]);
        cache[j].push(next);
    }
    &cache[j][e - 1]
}

/// Evaluates a polynomial in (z1..zl, lambda) at the generator list.
pub fn substitute_generators<R: Ring>(
    p: &MPoly<R>,
    gens: &[FourierPoly<R>],
) -> FourierPoly<R> {
    let l = gens.len();
    assert_eq!(p.nvars, l + 1);
    let nv = gens[0].nvars;
    let mut out = FourierPoly::zero(nv);
    for (e, c) in &p.terms {
        let lam = BigRational::from_integer(e[l].into());
        let mut term = FourierPoly::monomial(nv, lam, &vec![0i32; nv], c.clone());
        for (j, &k) in e[..l].iter().enumerate() {
            for _ in 0..k {
                term = term.mul(&gens[j]);
            }
        }
        out = out.add(&term);
    }
    out
}

/// Jacobian determinant data: the symbolic determinant det(D_p z^j) under
/// the normalized derivative convention, checked against the closed product
/// formula and its lambda = 0 restriction.
#[derive(Clone, Debug)]
pub struct JacobianReport {
    pub det: FourierPoly,
    pub closed_form: FourierPoly,
    pub closed_form_null: FourierPoly,
}

pub fn jacobian_determinant(
    gens: &[FourierPoly],
    rs: &RootSystem,
    wc: &WeightChoice,
) -> Result<JacobianReport> {
    let l = rs.rank;
    let mat: Vec<Vec<FourierPoly>> = (0..l)
        .map(|p| (0..l).map(|j| gens[j].normalized_derivative(p)).collect())
        .collect();
    let det = fourier_det(&mat);

    // Closed form: by the half-sum identity the prefactor
    // e^{pi i sum_{a in Phi+}(a, x)} equals e^{2 pi i sum_j x^j}, so all
    // frequencies stay on the integer lattice.
    let all_ones = vec![1i32; l];
    let mut closed = FourierPoly::exp_term(l, &all_ones);
    let mut closed_null = closed.clone();
    for beta in &rs.positive_roots {
        let amb = rs.root_ambient(beta);
        let mut exp = vec![0i32; l];
        for r in 0..l {
            let v: BigRational = amb.iter().zip(&rs.coroots[r]).map(|(x, y)| x * y).sum();
            assert!(v.denom().is_one());
            exp[r] = -(i64::try_from(v.numer().clone()).unwrap() as i32);
        }
        let bw: BigRational = amb.iter().zip(&wc.omega).map(|(x, y)| x * y).sum();
        let q = &bw / &wc.kappa;
        assert!(q.denom().is_one() && !q.is_negative(), "(beta, omega)/kappa not in Z>=0");
        let factor = FourierPoly::one(l)
            .sub(&FourierPoly::monomial(l, q.clone(), &exp, Coeff::one()));
        closed = closed.mul(&factor);
        if bw.is_zero() {
            let nf = FourierPoly::one(l).sub(&FourierPoly::exp_term(l, &exp));
            closed_null = closed_null.mul(&nf);
        }
    }
    if det != closed || det.null_part() != closed_null {
        return Err(Error::MismatchWithClosedForm);
    }
    Ok(JacobianReport { det, closed_form: closed, closed_form_null: closed_null })
}

fn fourier_det(m: &[Vec<FourierPoly>]) -> FourierPoly {
    let n = m.len();
    let nv = m[0][0].nvars;
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = FourierPoly::zero(nv);
    for col in 0..n {
        let minor: Vec<Vec<FourierPoly>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != col).map(|c| m[r][c].clone()).collect())
            .collect();
        let mut term = m[0][col].mul(&fourier_det(&minor));
        if col % 2 == 1 {
            term = term.neg();
        }
        det = det.add(&term);
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rint;
    use crate::rootsys::{build_root_system, make_weight, Family};
    use crate::weylgroup::generate_group;

    fn setup(
        fam: Family,
        rank: usize,
        marks: &[i64],
    ) -> (RootSystem, WeightChoice, WeylGroup, BasicGenerators) {
        let rs = build_root_system(fam, rank).unwrap();
        let wc = make_weight(&rs, marks).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        (rs, wc, group, gens)
    }

    fn fterm(nv: usize, q: i64, exp: &[i32]) -> FourierPoly {
        FourierPoly::monomial(nv, rint(q), exp, Coeff::one())
    }

    #[test]
    fn a2_basic_generators_match_display() {
        let (_, _, _, gens) = setup(Family::A, 2, &[0, 1]);
        // y1 = e^{x1} + e^{x2-x1} + lambda e^{-x2}
        let y1 = fterm(2, 0, &[1, 0]).add(&fterm(2, 0, &[-1, 1])).add(&fterm(2, 1, &[0, -1]));
        assert_eq!(gens.y[0], y1);
        // y2 = e^{x2} + lambda e^{-x1} + lambda e^{x1-x2}
        let y2 = fterm(2, 0, &[0, 1]).add(&fterm(2, 1, &[-1, 0])).add(&fterm(2, 1, &[1, -1]));
        assert_eq!(gens.y[1], y2);
    }

    #[test]
    fn a1_basic_generator() {
        let (_, _, _, gens) = setup(Family::A, 1, &[1]);
        let y1 = fterm(1, 0, &[1]).add(&fterm(1, 1, &[-1]));
        assert_eq!(gens.y[0], y1);
    }

    #[test]
    fn a3_basic_generators_match_display() {
        let (_, _, _, gens) = setup(Family::A, 3, &[1, 0, 1]);
        let y1 = fterm(3, 0, &[1, 0, 0])
            .add(&fterm(3, 1, &[-1, 1, 0]))
            .add(&fterm(3, 2, &[0, 0, -1]))
            .add(&fterm(3, 1, &[0, -1, 1]));
        assert_eq!(gens.y[0], y1);
        let y2 = fterm(3, 0, &[0, 1, 0])
            .add(&fterm(3, 2, &[0, -1, 0]))
            .add(&fterm(3, 1, &[1, 0, -1]))
            .add(&fterm(3, 2, &[-1, 1, -1]))
            .add(&fterm(3, 1, &[-1, 0, 1]))
            .add(&fterm(3, 0, &[1, -1, 1]));
        assert_eq!(gens.y[1], y2);
        let y3 = fterm(3, 2, &[-1, 0, 0])
            .add(&fterm(3, 1, &[1, -1, 0]))
            .add(&fterm(3, 0, &[0, 0, 1]))
            .add(&fterm(3, 1, &[0, 1, -1]));
        assert_eq!(gens.y[2], y3);
    }

    #[test]
    fn g2_basic_generators_match_display() {
        let (_, _, _, gens) = setup(Family::G, 2, &[0, 1]);
        let y1 = fterm(2, 0, &[1, 0])
            .add(&fterm(2, 2, &[-1, 0]))
            .add(&fterm(2, 1, &[2, -1]))
            .add(&fterm(2, 1, &[-2, 1]))
            .add(&fterm(2, 2, &[1, -1]))
            .add(&fterm(2, 0, &[-1, 1]));
        assert_eq!(gens.y[0], y1);
        let y2 = fterm(2, 0, &[0, 1])
            .add(&fterm(2, 4, &[0, -1]))
            .add(&fterm(2, 3, &[3, -2]))
            .add(&fterm(2, 1, &[-3, 2]))
            .add(&fterm(2, 3, &[-3, 1]))
            .add(&fterm(2, 1, &[3, -1]));
        assert_eq!(gens.y[1], y2);
    }

    #[test]
    fn leading_terms_reports() {
        let (_, wc, _, gens) = setup(Family::A, 2, &[0, 1]);
        let rep = verify_leading_terms(&gens.y, &wc);
        assert!(rep.pass);
        assert_eq!(rep.null_is_leading, vec![(1, true)]);

        let (_, wc, _, gens) = setup(Family::A, 1, &[1]);
        assert!(verify_leading_terms(&gens.y, &wc).pass);

        // A3 with omega1+omega3: y1|0 * y3|0 = e^{2 pi i (x1+x3)}
        let (_, wc, _, gens) = setup(Family::A, 3, &[1, 0, 1]);
        let rep = verify_leading_terms(&gens.y, &wc);
        assert!(rep.pass);
        let prod = gens.y[0].null_part().mul(&gens.y[2].null_part());
        assert_eq!(prod, FourierPoly::exp_term(3, &[1, 0, 1]));
    }

    #[test]
    fn rewrite_round_trip_product() {
        let (rs, wc, group, gens) = setup(Family::A, 2, &[0, 1]);
        let f = gens.y[0].mul(&gens.y[1]);
        let p = rewrite_in_generators(&f, &gens.y, &rs, &wc, &group).unwrap();
        // z1 * z2 exactly
        let mut expect = MPoly::zero(3);
        expect.insert_add(vec![1, 1, 0], Coeff::one());
        assert_eq!(p, expect);
    }

    #[test]
    fn rewrite_a1_metric_entry() {
        let (rs, wc, group, gens) = setup(Family::A, 1, &[1]);
        // g11 = -D(y1) a^{11} D(y1), a^{11} = 1/2
        let d = gens.y[0].normalized_derivative(0);
        let g11 = d.mul(&d).scale(&Coeff::from_frac(-1, 2));
        let p = rewrite_in_generators(&g11, &gens.y, &rs, &wc, &group).unwrap();
        // -(1/2) z1^2 + 2 lambda
        let mut expect = MPoly::zero(2);
        expect.insert_add(vec![2, 0], Coeff::from_frac(-1, 2));
        expect.insert_add(vec![0, 1], Coeff::from_int(2));
        assert_eq!(p, expect);
    }

    #[test]
    fn rewrite_a2_offdiagonal_metric_entry() {
        let (rs, wc, group, gens) = setup(Family::A, 2, &[0, 1]);
        // g12 = -sum_{rs} D_r(y1) a^{rs} D_s(y2) = 3 lambda - (1/3) z1 z2
        let a = &rs.a;
        let mut g12 = FourierPoly::zero(2);
        for r in 0..2 {
            for s in 0..2 {
                let t = gens.y[0]
                    .normalized_derivative(r)
                    .mul(&gens.y[1].normalized_derivative(s))
                    .scale(&Coeff::from_rat(a.at(r, s).clone()));
                g12 = g12.add(&t);
            }
        }
        g12 = g12.neg();
        let p = rewrite_in_generators(&g12, &gens.y, &rs, &wc, &group).unwrap();
        let mut expect = MPoly::zero(3);
        expect.insert_add(vec![0, 0, 1], Coeff::from_int(3));
        expect.insert_add(vec![1, 1, 0], Coeff::from_frac(-1, 3));
        assert_eq!(p, expect);
    }

    #[test]
    fn rewrite_rejects_bad_inputs() {
        let (rs, wc, group, gens) = setup(Family::A, 2, &[0, 1]);
        let f = FourierPoly::exp_term(2, &[1, 0]);
        assert!(matches!(
            rewrite_in_generators(&f, &gens.y, &rs, &wc, &group),
            Err(Error::NotInvariant(_))
        ));
        let frac = FourierPoly::monomial(2, crate::arith::rat(1, 2), &[0, 0], Coeff::one());
        assert!(matches!(
            rewrite_in_generators(&frac, &gens.y, &rs, &wc, &group),
            Err(Error::NotInRing(_))
        ));
    }

    #[test]
    fn jacobian_a1() {
        let (rs, wc, _, gens) = setup(Family::A, 1, &[1]);
        let rep = jacobian_determinant(&gens.y, &rs, &wc).unwrap();
        let expect = fterm(1, 0, &[1]).sub(&fterm(1, 1, &[-1]));
        assert_eq!(rep.det, expect);
    }

    #[test]
    fn jacobian_a2_null_restriction() {
        let (rs, wc, _, gens) = setup(Family::A, 2, &[0, 1]);
        let rep = jacobian_determinant(&gens.y, &rs, &wc).unwrap();
        // J0 = e^{2 pi i (x1+x2)} (1 - e^{-2 pi i (2 x1 - x2)})
        let expect = fterm(2, 0, &[1, 1]).sub(&fterm(2, 0, &[-1, 2]));
        assert_eq!(rep.det.null_part(), expect);
        assert_eq!(rep.closed_form_null, expect);
    }

    #[test]
    fn jacobian_closed_form_all_small_cases() {
        for (fam, rank, marks) in [
            (Family::A, 1, vec![1i64]),
            (Family::A, 2, vec![0, 1]),
            (Family::G, 2, vec![0, 1]),
            (Family::A, 3, vec![1, 0, 1]),
            (Family::B, 3, vec![1, 0, 0]),
            (Family::C, 3, vec![0, 0, 1]),
        ] {
            let (rs, wc, _, gens) = setup(fam, rank, &marks);
            jacobian_determinant(&gens.y, &rs, &wc).unwrap();
        }
    }
}
