//! Degree spectrum d_alpha from the operator A = nabla^eta E, polynomial
//! charts z = P(t) putting eta into constant antidiagonal form, and exact
//! chart verification.
//!
//! Chart solving works through exact local jets: the gradient of a flat
//! coordinate is an eigenvector field of A, so Taylor coefficients of t(z)
//! at a generic rational base point are determined recursively by the flat
//! equation; the polynomial z = P(t) guaranteed by the theory is then
//! reconstructed from the jets by exact linear algebra and normalized by a
//! congruence transformation on the constant matrix eta(t).

use crate::arith::{Coeff, RatMat};
use crate::error::{Error, Result};
use crate::geometry::{christoffel_pack, ChristoffelPack, FracMatrix, PolyMatrix};
use crate::poly::MPoly;
use crate::rootsys::WeightChoice;
use crate::solver::rational_roots;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type P = MPoly<Coeff>;

/// Sorted degree spectrum with its complementary-degree involution.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSpectrum {
    /// d_1 <= d_2 <= ... <= d_l, all in (0, kappa).
    pub d: Vec<BigRational>,
    /// pairing[a] = a* with d_a + d_{a*} = kappa; equals l-1-a after sorting.
    pub pairing: Vec<usize>,
}

/// The operator A = nabla^eta E acting on gradient vectors, as a matrix of
/// rational functions over z. Differentiating the homogeneity relation
/// sum theta_k z^k d_k t = d t and using the flat equation gives
///   sum_m (sum_k theta_k z^k Gamma^m_{jk} + theta_j delta^m_j) xi_m = d xi_j,
/// so row j, column m holds A^m_j.
pub fn a_matrix(pack: &ChristoffelPack, wc: &WeightChoice, nvars: usize) -> FracMatrix {
    let l = pack.n;
    let mut num = vec![vec![P::zero(nvars); l]; l];
    for j in 0..l {
        for m in 0..l {
            let mut s = P::zero(nvars);
            for k in 0..l {
                if pack.cov_num[m][j][k].is_zero() {
                    continue;
                }
                let zk = P::var(nvars, k).scale(&Coeff::from_rat(wc.theta[k].clone()));
                s = s.add(&zk.mul(&pack.cov_num[m][j][k]));
            }
            if j == m {
                s = s.add(&pack.cov_den.scale(&Coeff::from_rat(wc.theta[j].clone())));
            }
            num[j][m] = s;
        }
    }
    FracMatrix { n: l, nvars, num, den: pack.cov_den.clone() }
}

fn nth_prime(n: usize) -> i64 {
    let mut count = 0;
    let mut cand = 1i64;
    loop {
        cand += 1;
        if (2..cand).take_while(|p| p * p <= cand).all(|p| cand % p != 0) {
            count += 1;
            if count > n {
                return cand;
            }
        }
    }
}

/// Deterministic base-point sequence: consecutive primes per attempt.
pub fn base_point(attempt: usize, l: usize) -> Vec<Coeff> {
    (0..l).map(|i| Coeff::from_int(nth_prime(attempt * l + i))).collect()
}

/// Characteristic polynomial coefficients (ascending powers) of a rational
/// matrix, computed exactly.
fn charpoly(m: &[Vec<Coeff>]) -> Vec<BigRational> {
    let n = m.len();
    // Build xI - M over MPoly in one variable.
    let mut mat = vec![vec![P::zero(1); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut e = P::constant(1, m[i][j].neg());
            if i == j {
                e = e.add(&P::var(1, 0));
            }
            mat[i][j] = e;
        }
    }
    let det = crate::geometry::poly_det(&mat);
    let mut out = vec![BigRational::zero(); n + 1];
    for (e, c) in &det.terms {
        out[e[0] as usize] = c.as_rational().expect("rational charpoly").clone();
    }
    out
}

fn rank_of(mat: &RatMat) -> usize {
    let mut a = mat.data.clone();
    let (rows, cols) = (mat.rows, mat.cols);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pv = a[row][col].clone();
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = &a[r][col] / &pv;
                for c in col..cols {
                    let t = &a[row][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

/// Computes the degree spectrum of eta: builds A(z), evaluates its
/// characteristic polynomial at three generic rational points, asserts
/// point-independence, extracts rational eigenvalues, and checks
/// positivity, diagonalizability, and the complementary-degree pairing.
pub fn degree_spectrum(eta: &PolyMatrix, wc: &WeightChoice) -> Result<DegreeSpectrum> {
    let l = eta.n;
    let pack = christoffel_pack(&eta.to_frac(), l)?;
    let a = a_matrix(&pack, wc, l);
    let mut charpolys: Vec<Vec<BigRational>> = Vec::new();
    let mut sample_mats: Vec<Vec<Vec<Coeff>>> = Vec::new();
    let mut attempt = 0;
    while charpolys.len() < 3 {
        let pt = base_point(attempt, l);
        attempt += 1;
        if attempt > 50 {
            return Err(Error::BadBasePoint("no valid sample points".into()));
        }
        let Some(vals) = a.eval(&pt) else { continue };
        charpolys.push(charpoly(&vals));
        sample_mats.push(vals);
    }
    if charpolys[1] != charpolys[0] || charpolys[2] != charpolys[0] {
        return Err(Error::NonConstantSpectrum);
    }
    let roots = rational_roots(&charpolys[0])?
        .ok_or_else(|| Error::NonRationalEigenvalue("residual factor of charpoly".into()))?;
    let mut d = roots;
    if d.len() != l {
        return Err(Error::NonRationalEigenvalue("charpoly does not split over Q".into()));
    }
    d.sort();
    if let Some(bad) = d.iter().find(|x| !x.is_positive()) {
        return Err(Error::NonPositiveDegree(bad.to_string()));
    }
    // Diagonalizability: geometric multiplicity equals algebraic at each
    // sample point.
    let mut mults: Vec<(BigRational, usize)> = Vec::new();
    for v in &d {
        match mults.last_mut() {
            Some((val, m)) if val == v => *m += 1,
            _ => mults.push((v.clone(), 1)),
        }
    }
    for vals in &sample_mats {
        for (val, m) in &mults {
            let mut shifted = vals.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = row[i].sub(&Coeff::from_rat(val.clone()));
            }
            let data: Vec<Vec<BigRational>> = shifted
                .iter()
                .map(|r| r.iter().map(|c| c.as_rational().unwrap().clone()).collect())
                .collect();
            let rank = rank_of(&RatMat::new(data));
            if rank != l - m {
                return Err(Error::NotDiagonalizable);
            }
        }
    }
    // Pairing d_a + d_{l+1-a} = kappa.
    let mut pairing = vec![0usize; l];
    for alpha in 0..l {
        let partner = l - 1 - alpha;
        if &d[alpha] + &d[partner] != wc.kappa {
            return Err(Error::Other(format!(
                "degree pairing fails: {} + {} != kappa",
                d[alpha], d[partner]
            )));
        }
        pairing[alpha] = partner;
    }
    Ok(DegreeSpectrum { d, pairing })
}

/// A polynomial chart z^r = P^r(t1..tl) with per-coordinate degrees and the
/// constant form eta takes in it.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatChart {
    pub p: Vec<P>,
    /// deg t_alpha; ascending for solved charts, the source's order for
    /// catalog charts.
    pub degrees: Vec<BigRational>,
    /// The constant matrix eta^{alpha beta}(t).
    pub eta_normal: Vec<Vec<Coeff>>,
    pub kappa: BigRational,
}

impl FlatChart {
    pub fn rank(&self) -> usize {
        self.p.len()
    }

    /// Jacobian dP^r/dt^alpha as a polynomial matrix (rows r, cols alpha).
    pub fn jacobian(&self) -> Vec<Vec<P>> {
        let l = self.rank();
        (0..l).map(|r| (0..l).map(|a| self.p[r].derivative(a)).collect()).collect()
    }

    /// Field extension used by the chart (0 when rational).
    pub fn field_d(&self) -> u64 {
        for row in &self.p {
            let d = row.field_d();
            if d != 0 {
                return d;
            }
        }
        0
    }
}

/// Exact check that (dP/dt) eta_normal (dP/dt)^T = eta(P(t)) entrywise, the
/// implicit form of the flat equation. Returns the first failing entry.
pub fn verify_chart(chart: &FlatChart, eta: &PolyMatrix) -> Result<(bool, Option<String>)> {
    let l = chart.rank();
    assert_eq!(eta.n, l);
    let jac = chart.jacobian();
    if crate::geometry::poly_det(&jac).is_zero() {
        return Err(Error::SingularChartJacobian);
    }
    // Weighted homogeneity of each P^r: degree theta_r is implied by the
    // weighted degrees of eta; here we only demand internal consistency.
    for r in 0..l {
        if chart.p[r].weighted_degree(&chart.degrees).is_err() {
            return Ok((false, Some(format!("P^{} is not weighted-homogeneous", r + 1))));
        }
    }
    for i in 0..l {
        for j in i..l {
            let mut lhs = P::zero(l);
            for a in 0..l {
                for b in 0..l {
                    if chart.eta_normal[a][b].is_zero() {
                        continue;
                    }
                    lhs = lhs.add(
                        &jac[i][a].mul(&jac[j][b]).scale(&chart.eta_normal[a][b]),
                    );
                }
            }
            let rhs = eta.entries[i][j].subst(&chart.p);
            if lhs != rhs {
                return Ok((
                    false,
                    Some(format!("entry ({},{}): {:?} != {:?}", i + 1, j + 1, lhs, rhs)),
                ));
            }
        }
    }
    Ok((true, None))
}

fn mul_trunc(a: &P, b: &P, maxdeg: u32) -> P {
    let mut out = P::zero(a.nvars);
    for (e1, c1) in &a.terms {
        let d1: u32 = e1.iter().sum();
        if d1 > maxdeg {
            continue;
        }
        for (e2, c2) in &b.terms {
            let d2: u32 = e2.iter().sum();
            if d1 + d2 > maxdeg {
                continue;
            }
            let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            out.insert_add(e, c1.mul(c2));
        }
    }
    out
}

/// 1/p as a power series up to maxdeg; p(0) must be nonzero.
fn series_inv(p: &P, maxdeg: u32) -> P {
    let c0 = p.constant_part().cloned().expect("series_inv at a pole");
    let c0inv = c0.inv();
    // p = c0 (1 - u), 1/p = (1/c0) sum u^k.
    let u = P::constant(p.nvars, c0).sub(p).scale(&c0inv);
    let mut acc = P::one(p.nvars);
    let mut upow = P::one(p.nvars);
    for _ in 0..maxdeg {
        upow = mul_trunc(&upow, &u, maxdeg);
        if upow.is_zero() {
            break;
        }
        acc = acc.add(&upow);
    }
    acc.scale(&c0inv)
}

/// p(z0 + w) as a polynomial in w.
fn shift_poly(p: &P, z0: &[Coeff]) -> P {
    let n = p.nvars;
    let images: Vec<P> = (0..n)
        .map(|i| P::var(n, i).add(&P::constant(n, z0[i].clone())))
        .collect();
    p.subst(&images)
}

/// Gradient-eigenvector seeds and Taylor jets of flat coordinates of eta at
/// a base point.
struct Jets {
    /// Per coordinate: degree, gradient seed, and t-series (truncated).
    degrees: Vec<BigRational>,
    series: Vec<P>,
}

/// Eigenvector seeds of A(z0) per sorted eigenvalue (deterministic RREF
/// nullspace bases); these are the gradients of the homogeneous flat
/// coordinates at z0.
fn seed_gradients(
    eta: &PolyMatrix,
    spectrum: &DegreeSpectrum,
    wc: &WeightChoice,
    z0: &[Coeff],
) -> Result<Vec<(BigRational, Vec<BigRational>)>> {
    let l = eta.n;
    let pack = christoffel_pack(&eta.to_frac(), l)?;
    if pack.cov_den.eval(z0).is_zero() {
        return Err(Error::BadBasePoint("Christoffel denominator vanishes".into()));
    }
    let a_frac = a_matrix(&pack, wc, l);
    let a_vals = a_frac.eval(z0).ok_or_else(|| Error::BadBasePoint("A denominator zero".into()))?;
    let a_rat: Vec<Vec<BigRational>> = a_vals
        .iter()
        .map(|r| r.iter().map(|c| c.as_rational().unwrap().clone()).collect())
        .collect();
    let mut seeds: Vec<(BigRational, Vec<BigRational>)> = Vec::new();
    let mut distinct: Vec<BigRational> = Vec::new();
    for v in &spectrum.d {
        if !distinct.contains(v) {
            distinct.push(v.clone());
        }
    }
    for val in &distinct {
        let mut m = a_rat.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = &row[i] - val;
        }
        let basis = nullspace(&m);
        let mult = spectrum.d.iter().filter(|x| *x == val).count();
        if basis.len() != mult {
            return Err(Error::NotDiagonalizable);
        }
        for b in basis {
            seeds.push((val.clone(), b));
        }
    }
    seeds.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(seeds)
}

/// The constant matrix C^{ab} = grad t_a . eta(z0) . grad t_b of eta in the
/// seeded flat coordinates.
fn constant_form(eta: &PolyMatrix, z0: &[Coeff], seeds: &[(BigRational, Vec<BigRational>)]) -> Vec<Vec<Coeff>> {
    let l = eta.n;
    let eta0: Vec<Vec<Coeff>> =
        eta.entries.iter().map(|row| row.iter().map(|e| e.eval(z0)).collect()).collect();
    let mut c = vec![vec![Coeff::zero(); l]; l];
    for a in 0..l {
        for b in 0..l {
            let mut s = Coeff::zero();
            for i in 0..l {
                for j in 0..l {
                    if eta0[i][j].is_zero() {
                        continue;
                    }
                    s = s.add(
                        &Coeff::from_rat(seeds[a].1[i].clone())
                            .mul(&eta0[i][j])
                            .mul(&Coeff::from_rat(seeds[b].1[j].clone())),
                    );
                }
            }
            c[a][b] = s;
        }
    }
    c
}

fn flat_coordinate_jets(
    eta: &PolyMatrix,
    seeds: &[(BigRational, Vec<BigRational>)],
    wc: &WeightChoice,
    z0: &[Coeff],
    order: u32,
) -> Result<Jets> {
    let l = eta.n;
    let pack = christoffel_pack(&eta.to_frac(), l)?;
    let den0 = pack.cov_den.eval(z0);
    if den0.is_zero() {
        return Err(Error::BadBasePoint("Christoffel denominator vanishes".into()));
    }
    // Gamma^k_{ij}(z0 + w) as series.
    let den_shift = shift_poly(&pack.cov_den, z0);
    let den_inv = series_inv(&den_shift, order);
    let mut gamma = vec![vec![vec![P::zero(l); l]; l]; l];
    for k in 0..l {
        for i in 0..l {
            for j in i..l {
                if pack.cov_num[k][i][j].is_zero() {
                    continue;
                }
                let s = mul_trunc(&shift_poly(&pack.cov_num[k][i][j], z0), &den_inv, order);
                gamma[k][i][j] = s.clone();
                gamma[k][j][i] = s;
            }
        }
    }
    // Build each t-series.
    let mut series = Vec::with_capacity(l);
    let mut degrees = Vec::with_capacity(l);
    for (d, xi) in seeds {
        let mut t = P::zero(l);
        // Constant term from homogeneity: t(z0) = (1/d) sum theta_j z0_j xi_j.
        let mut t0 = Coeff::zero();
        for j in 0..l {
            t0 = t0.add(
                &z0[j]
                    .mul(&Coeff::from_rat(&wc.theta[j] / d))
                    .mul(&Coeff::from_rat(xi[j].clone())),
            );
        }
        t = t.add(&P::constant(l, t0));
        for j in 0..l {
            t = t.add(&P::var(l, j).scale(&Coeff::from_rat(xi[j].clone())));
        }
        // Fill total degree n = 2..=order via the flat equation.
        for n in 2..=order {
            // H_{ij} = sum_k Gamma^k_{ij} d_k(t), needed to order n-2.
            let grads: Vec<P> = (0..l).map(|k| t.derivative(k)).collect();
            let mut filled: std::collections::BTreeMap<Vec<u32>, Coeff> = Default::default();
            for i in 0..l {
                for j in i..l {
                    let mut h = P::zero(l);
                    for k in 0..l {
                        if gamma[k][i][j].is_zero() || grads[k].is_zero() {
                            continue;
                        }
                        h = h.add(&mul_trunc(&gamma[k][i][j], &grads[k], n - 2));
                    }
                    // Coefficients of w^m with m = q + e_i + e_j, |q| = n-2.
                    for (q, hc) in &h.terms {
                        if q.iter().sum::<u32>() != n - 2 {
                            continue;
                        }
                        let mut m = q.clone();
                        m[i] += 1;
                        m[j] += 1;
                        let mi = m[i];
                        let mj = if i == j { m[j] - 1 } else { m[j] };
                        let factor = Coeff::from_frac((mi as i64) * (mj as i64), 1);
                        let c = hc.div(&factor);
                        match filled.get(&m) {
                            Some(prev) => {
                                if prev != &c {
                                    return Err(Error::Other(
                                        "flat-equation jet inconsistency".into(),
                                    ));
                                }
                            }
                            None => {
                                filled.insert(m, c);
                            }
                        }
                    }
                }
            }
            for (m, c) in filled {
                t.insert_add(m, c);
            }
        }
        series.push(t);
        degrees.push(d.clone());
    }
    Ok(Jets { degrees, series })
}

/// RREF nullspace basis over Q, deterministic.
fn nullspace(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows = m.len();
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pv = a[row][col].clone();
        for c in 0..cols {
            a[row][c] /= &pv;
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..cols {
                    let t = &a[row][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Enumerates exponent vectors e with sum d_alpha e_alpha = target.
fn weighted_monomials(degrees: &[BigRational], target: &BigRational) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut exp = vec![0u32; degrees.len()];
    fn rec(
        degrees: &[BigRational],
        target: &BigRational,
        idx: usize,
        exp: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if target.is_negative() {
            return;
        }
        if idx == degrees.len() {
            if target.is_zero() {
                out.push(exp.clone());
            }
            return;
        }
        let max: u32 = (target / &degrees[idx]).to_integer().try_into().unwrap_or(0);
        for k in 0..=max {
            exp[idx] = k;
            let rem = target - &degrees[idx] * BigRational::from_integer(k.into());
            rec(degrees, &rem, idx + 1, exp, out);
        }
        exp[idx] = 0;
    }
    rec(degrees, target, 0, &mut exp, &mut out);
    out.sort();
    out
}

/// Solves for the polynomial chart z = P(t) of eta with the given spectrum.
/// The result has eta in unit antidiagonal form; coefficients live in Q or
/// the single quadratic extension demanded by normalization (escalation
/// order sqrt 2, sqrt 3, sqrt 5).
pub fn solve_chart(
    eta: &PolyMatrix,
    spectrum: &DegreeSpectrum,
    wc: &WeightChoice,
) -> Result<FlatChart> {
    let l = eta.n;
    // Jet order: enough to pin down the highest-degree chart polynomial.
    let max_mono_deg: u32 = (0..l)
        .flat_map(|r| {
            weighted_monomials(&spectrum.d, &wc.theta[r])
                .into_iter()
                .map(|e| e.iter().sum::<u32>())
        })
        .max()
        .unwrap_or(1);
    // The unit antidiagonal form is reached through an exact congruence of
    // the constant matrix eta(t); whether that works over Q(sqrt d) with
    // small d depends on the square classes at the base point. Base points
    // are enumerated densely and checked cheaply before the jet expansion.
    let mut last_obstruction: Option<Error> = None;
    for attempt in 0..2000 {
        let z0 = dense_point(attempt, l);
        if eta.det().eval(&z0).is_zero() {
            continue;
        }
        let seeds = match seed_gradients(eta, spectrum, wc, &z0) {
            Ok(s) => s,
            Err(Error::BadBasePoint(_)) => continue,
            Err(e) => return Err(e),
        };
        let c = constant_form(eta, &z0, &seeds);
        match build_normalizer(&c, &seeds.iter().map(|(d, _)| d.clone()).collect::<Vec<_>>(), wc) {
            Ok(_) => {}
            Err(e @ Error::NoChartInField(_)) => {
                last_obstruction = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        }
        let mut order = max_mono_deg + 2;
        let (jets, p_raw) = loop {
            let jets = flat_coordinate_jets(eta, &seeds, wc, &z0, order)?;
            match reconstruct_chart(&jets, wc, &z0, order) {
                Ok(p_raw) => break (jets, p_raw),
                Err(Error::UnderdeterminedNormalization(_)) if order < max_mono_deg + 8 => {
                    order += 2;
                }
                Err(e) => return Err(e),
            }
        };
        let chart = normalize_chart(&c, &jets, p_raw, wc)?;
        let (ok, witness) = verify_chart(&chart, eta)?;
        if !ok {
            return Err(Error::Other(format!(
                "solved chart failed verification: {}",
                witness.unwrap_or_default()
            )));
        }
        return Ok(chart);
    }
    Err(last_obstruction
        .unwrap_or_else(|| Error::BadBasePoint("no usable base point for chart solving".into())))
}

/// Dense deterministic enumeration of small integer points.
fn dense_point(attempt: usize, l: usize) -> Vec<Coeff> {
    // Level L covers the cube [-L, L]^l; enumerate levels outward.
    let mut idx = attempt;
    let mut level = 1usize;
    loop {
        let side = 2 * level + 1;
        let count = side.pow(l as u32);
        if idx < count {
            let mut coords = Vec::with_capacity(l);
            let mut k = idx;
            for _ in 0..l {
                let digit = (k % side) as i64 - level as i64;
                coords.push(Coeff::from_int(digit));
                k /= side;
            }
            return coords;
        }
        idx -= count;
        level += 1;
    }
}

/// Linear reconstruction of P^r from the jets.
fn reconstruct_chart(jets: &Jets, wc: &WeightChoice, z0: &[Coeff], order: u32) -> Result<Vec<P>> {
    let l = jets.series.len();
    let mut out = Vec::with_capacity(l);
    // Precompute truncated powers of each t-series.
    let max_pow: u32 = order;
    let mut powers: Vec<Vec<P>> = Vec::with_capacity(l);
    for s in &jets.series {
        let mut v = vec![P::one(l)];
        for k in 1..=max_pow {
            v.push(mul_trunc(&v[(k - 1) as usize], s, order));
        }
        powers.push(v);
    }
    for r in 0..l {
        let monos = weighted_monomials(&jets.degrees, &wc.theta[r]);
        if monos.is_empty() {
            return Err(Error::Other(format!("no admissible monomials for z^{}", r + 1)));
        }
        // Column for each monomial: series of T^e(w).
        let cols: Vec<P> = monos
            .iter()
            .map(|e| {
                let mut acc = P::one(l);
                for (alpha, &k) in e.iter().enumerate() {
                    if k > 0 {
                        acc = mul_trunc(&acc, &powers[alpha][k as usize], order);
                    }
                }
                acc
            })
            .collect();
        // Right-hand side: z0_r + w_r.
        let mut rhs = P::constant(l, z0[r].clone());
        rhs = rhs.add(&P::var(l, r));
        // Collect the union of multi-indices.
        let mut keys: std::collections::BTreeSet<Vec<u32>> = Default::default();
        for c in &cols {
            keys.extend(c.terms.keys().cloned());
        }
        keys.extend(rhs.terms.keys().cloned());
        let keys: Vec<Vec<u32>> = keys.into_iter().collect();
        let mut mat: Vec<Vec<Coeff>> = Vec::with_capacity(keys.len());
        let mut b: Vec<Coeff> = Vec::with_capacity(keys.len());
        for k in &keys {
            mat.push(cols.iter().map(|c| c.terms.get(k).cloned().unwrap_or_else(Coeff::zero)).collect());
            b.push(rhs.terms.get(k).cloned().unwrap_or_else(Coeff::zero));
        }
        let sol = solve_linear_unique(&mat, &b)?;
        let mut p = P::zero(l);
        for (e, c) in monos.iter().zip(sol) {
            p.insert_add(e.clone(), c);
        }
        out.push(p);
    }
    Ok(out)
}

/// Unique solution of an overdetermined consistent linear system; errors on
/// underdetermined or inconsistent input.
fn solve_linear_unique(mat: &[Vec<Coeff>], b: &[Coeff]) -> Result<Vec<Coeff>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<Coeff>> = mat
        .iter()
        .zip(b)
        .map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect())
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pv = a[row][col].inv();
        for c in col..=cols {
            a[row][c] = a[row][c].mul(&pv);
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=cols {
                    let t = a[row][c].mul(&f);
                    a[r][c] = a[r][c].sub(&t);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row >= rows {
            break;
        }
    }
    if pivots.len() < cols {
        return Err(Error::UnderdeterminedNormalization(format!(
            "{} of {} chart coefficients pinned",
            pivots.len(),
            cols
        )));
    }
    for r in row..rows {
        if !a[r][cols].is_zero() {
            return Err(Error::Other("inconsistent chart reconstruction".into()));
        }
    }
    let mut sol = vec![Coeff::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = a[r][cols].clone();
    }
    Ok(sol)
}

/// sign, squarefree part and square cofactor of a nonzero rational:
/// q = sign * sf * (f)^2 with sf a positive squarefree integer.
fn squarefree_split(q: &BigRational) -> Result<(i32, u64, BigRational)> {
    let sign = if q.is_negative() { -1 } else { 1 };
    let n = (q.numer() * q.denom()).abs();
    let mut m = n.clone();
    let mut sf = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            sf *= &p;
        }
        for _ in 0..e / 2 {
            f *= &p;
        }
        p += 1u32;
        if p > BigInt::from(2_000_000) {
            return Err(Error::NoChartInField(format!("cannot factor {n}")));
        }
    }
    if m > BigInt::one() {
        sf *= &m;
    }
    let sf_u: u64 = u64::try_from(sf).map_err(|_| Error::NoChartInField("huge squarefree part".into()))?;
    // q = sign * sf * (f/denom)^2
    let fq = BigRational::new(f, q.denom().clone());
    Ok((sign, sf_u, fq))
}

/// Normalizes the raw solved chart so eta becomes the unit antidiagonal.
/// Builds T with T C T^T equal to the unit antidiagonal, block by block
/// over the degree grading; reports the quadratic extension used.
fn build_normalizer(
    c: &[Vec<Coeff>],
    degrees: &[BigRational],
    wc: &WeightChoice,
) -> Result<(Vec<Vec<Coeff>>, u64)> {
    let l = degrees.len();
    // Complementary-degree support.
    for a in 0..l {
        for b in 0..l {
            if &degrees[a] + &degrees[b] != wc.kappa && !c[a][b].is_zero() {
                return Err(Error::Other("eta(t) violates degree pairing".into()));
            }
        }
    }
    let mut t_mat = vec![vec![Coeff::zero(); l]; l];
    let mut field_d: u64 = 0;
    // Degree blocks (contiguous in the ascending order).
    let mut blocks: Vec<(BigRational, Vec<usize>)> = Vec::new();
    for (i, d) in degrees.iter().enumerate() {
        match blocks.last_mut() {
            Some((val, idxs)) if val == d => idxs.push(i),
            _ => blocks.push((d.clone(), vec![i])),
        }
    }
    let half_kappa = &wc.kappa / BigRational::from_integer(2.into());
    for (d, idxs) in &blocks {
        if *d > half_kappa {
            continue; // handled with its partner
        }
        if *d == half_kappa {
            // Self-paired symmetric block: congruence to the reversed
            // identity J_m.
            let m = idxs.len();
            let s: Vec<Vec<Coeff>> =
                idxs.iter().map(|&a| idxs.iter().map(|&b| c[a][b].clone()).collect()).collect();
            let (tb, d_needed) = self_paired_normalizer(&s, field_d)?;
            if d_needed != 0 {
                field_d = d_needed;
            }
            for a in 0..m {
                for b in 0..m {
                    t_mat[idxs[a]][idxs[b]] = tb[a][b].clone();
                }
            }
        } else {
            // Paired blocks: T = I on the lower block; solve the upper one.
            let partner = blocks
                .iter()
                .find(|(pd, _)| pd == &(&wc.kappa - d))
                .ok_or_else(|| Error::Other("missing partner degree block".into()))?;
            let rows = idxs;
            let cols = &partner.1;
            let m = rows.len();
            if cols.len() != m {
                return Err(Error::Other("partner block size mismatch".into()));
            }
            for &i in rows.iter() {
                t_mat[i][i] = Coeff::one();
            }
            // Want (T C T^T)[row_a, col_b'] = delta_{b', m-1-a}: with T = I
            // on rows, T_cols[x][y] = (C_block^{-1})[y][m-1-x].
            let cblock: Vec<Vec<Coeff>> =
                rows.iter().map(|&i| cols.iter().map(|&j| c[i][j].clone()).collect()).collect();
            let cinv = invert_constant_matrix(&cblock)
                .ok_or_else(|| Error::Other("degenerate pairing block".into()))?;
            for a in 0..m {
                for b in 0..m {
                    t_mat[cols[a]][cols[b]] = cinv[b][m - 1 - a].clone();
                }
            }
        }
    }
    // Sanity: T C T^T = unit antidiagonal.
    for a in 0..l {
        for b in 0..l {
            let mut s = Coeff::zero();
            for i in 0..l {
                for j in 0..l {
                    if t_mat[a][i].is_zero() || c[i][j].is_zero() || t_mat[b][j].is_zero() {
                        continue;
                    }
                    s = s.add(&t_mat[a][i].mul(&c[i][j]).mul(&t_mat[b][j]));
                }
            }
            let expect = if a + b == l - 1 { Coeff::one() } else { Coeff::zero() };
            if s != expect {
                return Err(Error::Other(format!("normalization failed at ({a},{b}): {s:?}")));
            }
        }
    }
    Ok((t_mat, field_d))
}

fn normalize_chart(c: &[Vec<Coeff>], jets: &Jets, p_raw: Vec<P>, wc: &WeightChoice) -> Result<FlatChart> {
    let l = jets.series.len();
    let (t_mat, _field_d) = build_normalizer(c, &jets.degrees, wc)?;
    // New chart: P(t_old) with t_old = T^{-1} t_new.
    let tinv = invert_constant_matrix(&t_mat).ok_or_else(|| Error::Other("singular normalizer".into()))?;
    let images: Vec<P> = (0..l)
        .map(|a| {
            let mut s = P::zero(l);
            for b in 0..l {
                if !tinv[a][b].is_zero() {
                    s = s.add(&P::var(l, b).scale(&tinv[a][b]));
                }
            }
            s
        })
        .collect();
    let mut p_new: Vec<P> = p_raw.iter().map(|p| p.subst(&images)).collect();
    // Residual scaling normalization: s_a on t_a with s_a s_{a*} = 1. Make
    // the first scan-order coefficient with unequal pair exponents equal to
    // one when the exponent gap is 1, otherwise just positive.
    let eta_n: Vec<Vec<Coeff>> = (0..l)
        .map(|a| {
            (0..l)
                .map(|b| if a + b == l - 1 { Coeff::one() } else { Coeff::zero() })
                .collect()
        })
        .collect();
    for alpha in 0..l {
        let astar = l - 1 - alpha;
        if alpha > astar {
            continue;
        }
        let mut chosen: Option<Coeff> = None;
        'scan: for p in &p_new {
            for (e, coeff) in p.sorted_terms() {
                let gap = e[alpha] as i64 - e[astar] as i64;
                if gap == 0 {
                    continue;
                }
                if alpha == astar && gap % 2 == 0 {
                    continue;
                }
                // coefficient scales by s^gap under t_alpha -> s t_alpha,
                // t_astar -> t_astar / s.
                let s = if alpha == astar {
                    // only signs available
                    if is_positive_coeff(coeff) {
                        Coeff::one()
                    } else {
                        Coeff::from_int(-1)
                    }
                } else if gap.abs() == 1 {
                    if gap == 1 {
                        coeff.inv()
                    } else {
                        coeff.clone()
                    }
                } else if is_positive_coeff(coeff) {
                    Coeff::one()
                } else {
                    Coeff::from_int(-1)
                };
                chosen = Some(s);
                break 'scan;
            }
        }
        if let Some(s) = chosen {
            if s.is_one() {
                continue;
            }
            let mut scale_images: Vec<P> = (0..l).map(|b| P::var(l, b)).collect();
            scale_images[alpha] = P::var(l, alpha).scale(&s);
            if astar != alpha {
                scale_images[astar] = P::var(l, astar).scale(&s.inv());
            }
            // Note: rescaling t_alpha -> s t_alpha changes P(t) by
            // substituting back t_alpha/s... we apply the inverse images.
            let inv_images: Vec<P> = (0..l)
                .map(|b| {
                    if b == alpha {
                        P::var(l, b).scale(&s.inv())
                    } else if b == astar && astar != alpha {
                        P::var(l, b).scale(&s)
                    } else {
                        P::var(l, b)
                    }
                })
                .collect();
            p_new = p_new.iter().map(|p| p.subst(&inv_images)).collect();
            let _ = scale_images;
        }
    }
    Ok(FlatChart {
        p: p_new,
        degrees: jets.degrees.clone(),
        eta_normal: eta_n,
        kappa: wc.kappa.clone(),
    })
}

fn is_positive_coeff(c: &Coeff) -> bool {
    if !c.a.is_zero() {
        c.a.is_positive()
    } else {
        c.b.is_positive()
    }
}

/// Exact inverse of a constant coefficient matrix.
pub fn invert_constant_matrix(m: &[Vec<Coeff>]) -> Option<Vec<Vec<Coeff>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<Coeff>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let pv = a[col][col].inv();
        for j in 0..n {
            a[col][j] = a[col][j].mul(&pv);
            inv[col][j] = inv[col][j].mul(&pv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = a[col][j].mul(&f);
                    a[r][j] = a[r][j].sub(&t);
                    let t = inv[col][j].mul(&f);
                    inv[r][j] = inv[r][j].sub(&t);
                }
            }
        }
    }
    Some(inv)
}

/// Congruence transform of a symmetric rational block to the reversed
/// identity J_m, tracking the single quadratic extension needed (escalation
/// candidates: sqrt 2, sqrt 3, sqrt 5). Built from an exact symmetric
/// diagonalization followed by hyperbolic pairs: a (+, -) diagonal pair
/// (q, q') with -qq' = d s^2 spans a hyperbolic plane over Q(sqrt d), which
/// needs no square roots of the individual pivots.
fn self_paired_normalizer(s: &[Vec<Coeff>], field_in: u64) -> Result<(Vec<Vec<Coeff>>, u64)> {
    let m = s.len();
    // Symmetric congruence diagonalization over Q: U S U^T = D.
    let mut a: Vec<Vec<BigRational>> = s
        .iter()
        .map(|r| r.iter().map(|c| c.as_rational().expect("rational block").clone()).collect())
        .collect();
    let mut u: Vec<Vec<BigRational>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for i in 0..m {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..m).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
                u.swap(i, j);
            } else if let Some(j) = (i + 1..m).find(|&j| !a[i][j].is_zero()) {
                // row/col i += row/col j makes the diagonal nonzero.
                for c in 0..m {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for r in 0..m {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
                for c in 0..m {
                    let t = u[j][c].clone();
                    u[i][c] += t;
                }
            } else {
                return Err(Error::Other("degenerate self-paired block".into()));
            }
        }
        let piv = a[i][i].clone();
        for r in i + 1..m {
            if a[r][i].is_zero() {
                continue;
            }
            let f = &a[r][i] / &piv;
            for c in 0..m {
                let t = &a[i][c] * &f;
                a[r][c] -= t;
                let t = &u[i][c] * &f;
                u[r][c] -= t;
            }
            for rr in 0..m {
                let t = &a[rr][i] * &f;
                a[rr][r] -= t;
            }
        }
    }
    let q: Vec<BigRational> = (0..m).map(|i| a[i][i].clone()).collect();
    let signs: Vec<i32> = q.iter().map(|x| if x.is_negative() { -1 } else { 1 }).collect();
    let plus = signs.iter().filter(|&&s| s > 0).count();
    if plus != m.div_ceil(2) {
        return Err(Error::NoChartInField(format!(
            "signature ({plus}+, {}-) does not match the antidiagonal form",
            m - plus
        )));
    }
    let allowed = |d: u64, current: u64| -> bool {
        d == 1 || ((d == 2 || d == 3 || d == 5) && (current == 0 || current == d))
    };
    let mut field_d = field_in;
    let mut used = vec![false; m];
    // pair_rows[k] = (i_plus, i_minus) feeding final positions (k, m-1-k).
    let mut pair_rows: Vec<(usize, usize)> = Vec::new();
    for _ in 0..m / 2 {
        let mut picked = None;
        'search: for i in 0..m {
            if used[i] || signs[i] < 0 {
                continue;
            }
            for j in 0..m {
                if used[j] || signs[j] > 0 {
                    continue;
                }
                let (_, sf, _) = squarefree_split(&(-(&q[i] * &q[j])))?;
                if allowed(sf, field_d) {
                    if sf != 1 {
                        field_d = sf;
                    }
                    picked = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = picked else {
            return Err(Error::NoChartInField(
                "no hyperbolic pair over sqrt(2), sqrt(3), sqrt(5)".into(),
            ));
        };
        used[i] = true;
        used[j] = true;
        pair_rows.push((i, j));
    }
    let mut middle: Option<(usize, Coeff)> = None;
    if m % 2 == 1 {
        let c = (0..m).find(|&i| !used[i]).unwrap();
        let (sign, sf, f) = squarefree_split(&q[c])?;
        if sign < 0 {
            return Err(Error::NoChartInField("negative middle entry".into()));
        }
        if !allowed(sf, field_d) {
            return Err(Error::NoChartInField(format!("middle entry needs sqrt({sf})")));
        }
        let scale = if sf == 1 {
            Coeff::from_rat(f.recip())
        } else {
            field_d = sf;
            // 1/(f sqrt(sf)) = sqrt(sf)/(f sf).
            Coeff::quad(BigRational::zero(), (f * BigInt::from(sf)).recip(), sf)
        };
        middle = Some((c, scale));
    }
    // Assemble the block transform in the diagonalized basis.
    let mut pair_t = vec![vec![Coeff::zero(); m]; m];
    for (k, &(i, j)) in pair_rows.iter().enumerate() {
        // <q_i, q_j> with -q_i q_j = d s^2. Isotropic rows:
        // u = e_i + x e_j with x = s sqrt(d)/q_j, w = (e_i - x e_j)/(2 q_i).
        let (_, sf, s_cof) = squarefree_split(&(-(&q[i] * &q[j])))?;
        let x = if sf == 1 {
            Coeff::from_rat(&s_cof / &q[j])
        } else {
            Coeff::quad(BigRational::zero(), &s_cof / &q[j], sf)
        };
        pair_t[k][i] = Coeff::one();
        pair_t[k][j] = x.clone();
        let half_qi = Coeff::from_rat((&q[i] + &q[i]).recip());
        pair_t[m - 1 - k][i] = half_qi.clone();
        pair_t[m - 1 - k][j] = x.neg().mul(&half_qi);
    }
    if let Some((c, scale)) = middle {
        pair_t[m / 2][c] = scale;
    }
    // Total transform: pair_t * U.
    let mut total = vec![vec![Coeff::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut acc = Coeff::zero();
            for k in 0..m {
                if pair_t[i][k].is_zero() || u[k][j].is_zero() {
                    continue;
                }
                acc = acc.add(&pair_t[i][k].mul(&Coeff::from_rat(u[k][j].clone())));
            }
            total[i][j] = acc;
        }
    }
    Ok((total, field_d))
}

/// Exhibits a linear, degree-preserving, eta-preserving transformation L
/// with  to.p[r](t) = from.p[r](L t)  for all r, if one exists over the
/// charts' field. Unknown entries only connect equal-degree coordinates.
pub fn connecting_transformation(
    from: &FlatChart,
    to: &FlatChart,
    field_d: u64,
) -> Result<Option<Vec<Vec<Coeff>>>> {
    use crate::poly::UPoly;
    let l = from.rank();
    assert_eq!(to.rank(), l);
    // Unknown slots.
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for a in 0..l {
        for b in 0..l {
            if from.degrees[a] == to.degrees[b] {
                slots.push((a, b));
            }
        }
    }
    let m = slots.len();
    let slot_of = |a: usize, b: usize| slots.iter().position(|&(x, y)| (x, y) == (a, b));
    // L as symbolic linear forms: image of from-variable a is
    // sum_b L_{ab} t_b.
    let lt: Vec<MPoly<UPoly>> = (0..l)
        .map(|a| {
            let mut s: MPoly<UPoly> = MPoly::zero(l);
            for b in 0..l {
                if let Some(idx) = slot_of(a, b) {
                    let mut e = vec![0u32; l];
                    e[b] = 1;
                    s.insert_add(e, MPoly::var(m, idx));
                }
            }
            s
        })
        .collect();
    let mut eqs: Vec<UPoly> = Vec::new();
    for r in 0..l {
        // from.p[r](L t) - to.p[r](t) = 0 coefficientwise.
        let mut acc: MPoly<UPoly> = MPoly::zero(l);
        for (e, c) in &from.p[r].terms {
            let mut term: MPoly<UPoly> = MPoly::constant(l, MPoly::constant(m, c.clone()));
            for (a, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&lt[a]);
                }
            }
            acc = acc.add(&term);
        }
        for (e, c) in &to.p[r].terms {
            acc.insert_add(e.clone(), MPoly::constant(m, c.clone()).neg());
        }
        eqs.extend(acc.terms.values().cloned());
    }
    // eta preservation: L etaN_from L^T = etaN_to.
    for a in 0..l {
        for b in a..l {
            let mut s: UPoly = MPoly::zero(m);
            for i in 0..l {
                for j in 0..l {
                    if from.eta_normal[i][j].is_zero() {
                        continue;
                    }
                    if let (Some(si), Some(sj)) = (slot_of(i, a), slot_of(j, b)) {
                        let prod = MPoly::var(m, si)
                            .mul(&MPoly::var(m, sj))
                            .scale(&from.eta_normal[i][j]);
                        s = s.add(&prod);
                    }
                }
            }
            s.insert_add(vec![0; m], to.eta_normal[a][b].neg());
            eqs.push(s);
        }
    }
    match crate::solver::solve_system(&eqs, m, field_d) {
        Ok(sols) => {
            let Some(sol) = sols.into_iter().next() else { return Ok(None) };
            let mut lmat = vec![vec![Coeff::zero(); l]; l];
            for (idx, &(a, b)) in slots.iter().enumerate() {
                lmat[a][b] = sol[idx].clone();
            }
            Ok(Some(lmat))
        }
        Err(Error::NonRationalSolution(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::geometry::{pushforward_metric, split_pencil};
    use crate::invariants::basic_generators;
    use crate::rootsys::{build_root_system, make_weight, Family};
    use crate::weylgroup::generate_group;

    fn pencil_for(fam: Family, rank: usize, marks: &[i64]) -> (PolyMatrix, PolyMatrix, WeightChoice) {
        let rs = build_root_system(fam, rank).unwrap();
        let wc = make_weight(&rs, marks).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        let (g, eta) = split_pencil(&g_lam).unwrap();
        (g, eta, wc)
    }

    #[test]
    fn a2_spectrum() {
        let (_, eta, wc) = pencil_for(Family::A, 2, &[0, 1]);
        let spec = degree_spectrum(&eta, &wc).unwrap();
        assert_eq!(spec.d, vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(spec.pairing, vec![1, 0]);
    }

    #[test]
    fn c3_spectrum_is_triple_one() {
        let (_, eta, wc) = pencil_for(Family::C, 3, &[0, 0, 1]);
        let spec = degree_spectrum(&eta, &wc).unwrap();
        assert_eq!(spec.d, vec![rat(1, 1), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn a1_solved_chart_is_paper_chart() {
        let (_, eta, wc) = pencil_for(Family::A, 1, &[1]);
        let spec = degree_spectrum(&eta, &wc).unwrap();
        assert_eq!(spec.d, vec![rat(1, 2)]);
        let chart = solve_chart(&eta, &spec, &wc).unwrap();
        // z = sqrt(2) t
        let mut expect = P::zero(1);
        expect.insert_add(vec![1], Coeff::sqrt_d(2));
        assert_eq!(chart.p[0], expect);
    }

    #[test]
    fn a2_solved_chart_verifies_and_connects_to_paper() {
        let (_, eta, wc) = pencil_for(Family::A, 2, &[0, 1]);
        let spec = degree_spectrum(&eta, &wc).unwrap();
        let chart = solve_chart(&eta, &spec, &wc).unwrap();
        assert!(verify_chart(&chart, &eta).unwrap().0);
        // Paper chart: z1 = 3 t1, z2 = t2 + 3/2 t1^2.
        let mut p1 = P::zero(2);
        p1.insert_add(vec![1, 0], Coeff::from_int(3));
        let mut p2 = P::zero(2);
        p2.insert_add(vec![0, 1], Coeff::one());
        p2.insert_add(vec![2, 0], Coeff::from_frac(3, 2));
        let paper = FlatChart {
            p: vec![p1, p2],
            degrees: vec![rat(1, 3), rat(2, 3)],
            eta_normal: vec![
                vec![Coeff::zero(), Coeff::one()],
                vec![Coeff::one(), Coeff::zero()],
            ],
            kappa: rat(1, 1),
        };
        assert!(verify_chart(&paper, &eta).unwrap().0);
        let conn = connecting_transformation(&chart, &paper, 0).unwrap();
        assert!(conn.is_some(), "no connecting transformation found");
    }

    #[test]
    fn c3_paper_chart_verifies() {
        let (_, eta, wc) = pencil_for(Family::C, 3, &[0, 0, 1]);
        // y1 = 2 sqrt3 t2; y2 = 4 t2^2 - 4 t1 t3;
        // y3 = (8 sqrt3/9)(t1^3 + t2^3 + t3^3 - 3 t1 t2 t3).
        let s3 = Coeff::sqrt_d(3);
        let mut p1 = P::zero(3);
        p1.insert_add(vec![0, 1, 0], s3.scale(&rat(2, 1)));
        let mut p2 = P::zero(3);
        p2.insert_add(vec![0, 2, 0], Coeff::from_int(4));
        p2.insert_add(vec![1, 0, 1], Coeff::from_int(-4));
        let mut p3 = P::zero(3);
        let c83 = s3.scale(&rat(8, 9));
        p3.insert_add(vec![3, 0, 0], c83.clone());
        p3.insert_add(vec![0, 3, 0], c83.clone());
        p3.insert_add(vec![0, 0, 3], c83.clone());
        p3.insert_add(vec![1, 1, 1], c83.scale(&rat(-3, 1)));
        let chart = FlatChart {
            p: vec![p1, p2, p3],
            degrees: vec![rat(1, 1), rat(1, 1), rat(1, 1)],
            eta_normal: (0..3)
                .map(|a| {
                    (0..3)
                        .map(|b| if a + b == 2 { Coeff::one() } else { Coeff::zero() })
                        .collect()
                })
                .collect(),
            kappa: rat(2, 1),
        };
        let (ok, witness) = verify_chart(&chart, &eta).unwrap();
        assert!(ok, "{witness:?}");
    }

    #[test]
    fn c3_solved_chart_verifies() {
        let (_, eta, wc) = pencil_for(Family::C, 3, &[0, 0, 1]);
        let spec = degree_spectrum(&eta, &wc).unwrap();
        let chart = solve_chart(&eta, &spec, &wc).unwrap();
        assert!(verify_chart(&chart, &eta).unwrap().0);
    }

    #[test]
    fn perturbed_chart_fails() {
        let (_, eta, _) = pencil_for(Family::A, 2, &[0, 1]);
        let mut p1 = P::zero(2);
        p1.insert_add(vec![1, 0], Coeff::from_int(3));
        let mut p2 = P::zero(2);
        p2.insert_add(vec![0, 1], Coeff::one());
        p2.insert_add(vec![2, 0], Coeff::from_frac(1, 5));
        let chart = FlatChart {
            p: vec![p1, p2],
            degrees: vec![rat(1, 3), rat(2, 3)],
            eta_normal: vec![
                vec![Coeff::zero(), Coeff::one()],
                vec![Coeff::one(), Coeff::zero()],
            ],
            kappa: rat(1, 1),
        };
        assert!(!verify_chart(&chart, &eta).unwrap().0);
    }
}
