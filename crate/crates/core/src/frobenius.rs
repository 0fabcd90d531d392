//! Frobenius data in flat coordinates: the intersection form g(t), its
//! Christoffel symbols via the key formula, structure constants, the
//! potential, unit and Euler fields, and the full axiom verification.
//!
//! Everything is exact. The heavy identity checks run over shared
//! polynomial denominators; normalized rational functions are produced for
//! the report-facing fields.

use crate::arith::Coeff;
use crate::error::{Error, Result};
use crate::flatcoords::FlatChart;
use crate::geometry::{christoffel_pack, poly_adjugate, poly_det, FracMatrix, PolyMatrix};
use crate::poly::MPoly;
use crate::ratfn::RationalFn;
use crate::rootsys::WeightChoice;
use num_rational::BigRational;

type P = MPoly<Coeff>;

/// The intersection form in the chart: g^{ab}(t) = (dt/dz) g(P(t)) (dt/dz)^T
/// with dt/dz the inverse chart Jacobian, over the common denominator
/// det(dP/dt)^2.
pub fn metric_in_chart(g: &PolyMatrix, chart: &FlatChart) -> Result<FracMatrix> {
    let l = chart.rank();
    let jac = chart.jacobian();
    let det = poly_det(&jac);
    if det.is_zero() {
        return Err(Error::SingularChartJacobian);
    }
    let adj = poly_adjugate(&jac);
    // (J^{-1})_{a r} = adj[a][r] / det, row index a = chart coordinate.
    let g_comp: Vec<Vec<P>> = g
        .entries
        .iter()
        .map(|row| row.iter().map(|e| e.subst(&chart.p)).collect())
        .collect();
    let mut num = vec![vec![P::zero(l); l]; l];
    for a in 0..l {
        for b in a..l {
            let mut s = P::zero(l);
            for r in 0..l {
                for q in 0..l {
                    if g_comp[r][q].is_zero() {
                        continue;
                    }
                    s = s.add(&adj[a][r].mul(&g_comp[r][q]).mul(&adj[b][q]));
                }
            }
            num[a][b] = s.clone();
            num[b][a] = s;
        }
    }
    let den = det.mul(&det);
    let m = FracMatrix { n: l, nvars: l, num, den }.reduced();
    // Weighted homogeneity: deg g^{ab} = d_a + d_b.
    let dden = m.den.weighted_degree(&chart.degrees).map_err(|_| {
        Error::Other("inhomogeneous chart Jacobian determinant".into())
    })?;
    for a in 0..l {
        for b in 0..l {
            if let Ok(Some(dn)) = m.num[a][b].weighted_degree(&chart.degrees) {
                let expect = &chart.degrees[a] + &chart.degrees[b] + dden.clone().unwrap();
                if dn != expect {
                    return Err(Error::Other(format!(
                        "chart metric degree mismatch at ({a},{b})"
                    )));
                }
            }
        }
    }
    Ok(m)
}

/// Christoffel symbols by the key formula,
/// Gamma_a^{bc} = d_c/(d_b + d_c) * d g^{bc} / d t^a,
/// over the denominator den(g)^2. Indexing: num[b][c][a].
pub struct KeyChristoffel {
    pub num: Vec<Vec<Vec<P>>>,
    pub den: P,
}

pub fn christoffel_key(g_t: &FracMatrix, degrees: &[BigRational]) -> KeyChristoffel {
    let l = g_t.n;
    let dden: Vec<P> = (0..l).map(|a| g_t.den.derivative(a)).collect();
    let mut num = vec![vec![vec![P::zero(l); l]; l]; l];
    for b in 0..l {
        for c in 0..l {
            let ratio = Coeff::from_rat(&degrees[c] / (&degrees[b] + &degrees[c]));
            for a in 0..l {
                let dn = g_t.num[b][c]
                    .derivative(a)
                    .mul(&g_t.den)
                    .sub(&g_t.num[b][c].mul(&dden[a]));
                num[b][c][a] = dn.scale(&ratio);
            }
        }
    }
    reduce_key(KeyChristoffel { num, den: g_t.den.mul(&g_t.den) })
}

/// Shared-denominator reduction for the three-index arrays.
fn reduce_key(mut key: KeyChristoffel) -> KeyChristoffel {
    let mut g = key.den.clone();
    for a in key.num.iter().flatten().flatten() {
        if g.is_constant() {
            break;
        }
        if !a.is_zero() {
            g = crate::ratfn::poly_gcd(&g, a);
        }
    }
    if !g.is_constant() {
        key.den = key.den.div_exact(&g).unwrap();
        for a in key.num.iter_mut().flatten().flatten() {
            if !a.is_zero() {
                *a = a.div_exact(&g).unwrap();
            }
        }
    }
    let lc = key.den.leading_coeff();
    if !lc.is_one() {
        let inv = lc.inv();
        key.den = key.den.scale(&inv);
        for a in key.num.iter_mut().flatten().flatten() {
            *a = a.scale(&inv);
        }
    }
    key
}

/// Cross-check: the key-formula symbols equal the Levi-Civita symbols of
/// g_t computed directly from the metric.
pub fn key_formula_consistent(g_t: &FracMatrix, key: &KeyChristoffel) -> Result<bool> {
    let pack = christoffel_pack(g_t, g_t.nvars)?;
    let l = g_t.n;
    for b in 0..l {
        for c in 0..l {
            for a in 0..l {
                // key.num/key.den == pack.contra_num[b][c][a]/pack.contra_den
                let lhs = key.num[b][c][a].mul(&pack.contra_den);
                let rhs = pack.contra_num[b][c][a].mul(&key.den);
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Structure constants c^g_{ab} = (kappa/d_rho) eta_{a nu} eta_{b rho}
/// eta^{g zeta} Gamma^{nu rho}_zeta, over the key denominator.
/// Indexing: num[a][b][g].
pub struct StructureConstants {
    pub num: Vec<Vec<Vec<P>>>,
    pub den: P,
}

pub fn structure_constants(
    key: &KeyChristoffel,
    eta_normal: &[Vec<Coeff>],
    degrees: &[BigRational],
    kappa: &BigRational,
) -> StructureConstants {
    let l = key.num.len();
    let eta_lower = crate::flatcoords::invert_constant_matrix(eta_normal)
        .expect("eta normal form invertible");
    let mut num = vec![vec![vec![P::zero(l); l]; l]; l];
    for a in 0..l {
        for b in 0..l {
            for g in 0..l {
                let mut s = P::zero(l);
                for nu in 0..l {
                    if eta_lower[a][nu].is_zero() {
                        continue;
                    }
                    for rho in 0..l {
                        if eta_lower[b][rho].is_zero() {
                            continue;
                        }
                        let factor = Coeff::from_rat(kappa / &degrees[rho])
                            .mul(&eta_lower[a][nu])
                            .mul(&eta_lower[b][rho]);
                        for zeta in 0..l {
                            if eta_normal[g][zeta].is_zero()
                                || key.num[nu][rho][zeta].is_zero()
                            {
                                continue;
                            }
                            s = s.add(
                                &key.num[nu][rho][zeta]
                                    .scale(&factor.mul(&eta_normal[g][zeta])),
                            );
                        }
                    }
                }
                num[a][b][g] = s;
            }
        }
    }
    let k = reduce_key(KeyChristoffel { num, den: key.den.clone() });
    StructureConstants { num: k.num, den: k.den }
}

/// The potential, reconstructed by the double Euler-operator formula:
/// M_{mu sigma} = eta_{mu a} eta_{sigma b} kappa/(d_a + d_b) g^{ab};
/// d_b F = sum_a d_a t^a M_{ab} / (2 kappa - d_b); F = sum_b d_b t^b d_b F / (2 kappa).
pub fn potential(
    g_t: &FracMatrix,
    eta_normal: &[Vec<Coeff>],
    degrees: &[BigRational],
    kappa: &BigRational,
) -> Result<RationalFn> {
    let l = g_t.n;
    let eta_lower = crate::flatcoords::invert_constant_matrix(eta_normal)
        .expect("eta normal form invertible");
    // M over the common denominator den(g).
    let mut m_num = vec![vec![P::zero(l); l]; l];
    for mu in 0..l {
        for sigma in 0..l {
            let mut s = P::zero(l);
            for a in 0..l {
                if eta_lower[mu][a].is_zero() {
                    continue;
                }
                for b in 0..l {
                    if eta_lower[sigma][b].is_zero() || g_t.num[a][b].is_zero() {
                        continue;
                    }
                    let factor = Coeff::from_rat(kappa / (&degrees[a] + &degrees[b]))
                        .mul(&eta_lower[mu][a])
                        .mul(&eta_lower[sigma][b]);
                    s = s.add(&g_t.num[a][b].scale(&factor));
                }
            }
            m_num[mu][sigma] = s;
        }
    }
    for mu in 0..l {
        for sigma in mu + 1..l {
            if m_num[mu][sigma] != m_num[sigma][mu] {
                return Err(Error::IntegrabilityFailure(format!(
                    "M[{mu}][{sigma}] asymmetric"
                )));
            }
        }
    }
    // Total symmetry of third derivatives: d_c (M_{ab}/den) symmetric under
    // (a, b, c) permutations; cross-multiplied check of the (b c) swap.
    let dden: Vec<P> = (0..l).map(|c| g_t.den.derivative(c)).collect();
    let dm = |a: usize, b: usize, c: usize| -> P {
        m_num[a][b].derivative(c).mul(&g_t.den).sub(&m_num[a][b].mul(&dden[c]))
    };
    for a in 0..l {
        for b in 0..l {
            for c in b + 1..l {
                if dm(a, b, c) != dm(a, c, b) {
                    return Err(Error::IntegrabilityFailure(format!(
                        "dM[{a}{b}]/dt^{c} != dM[{a}{c}]/dt^{b}"
                    )));
                }
            }
        }
    }
    // dF_b = sum_a d_a t^a M_{ab} / (2 kappa - d_b), over den.
    let two_kappa = kappa + kappa;
    let mut df: Vec<RationalFn> = Vec::with_capacity(l);
    for b in 0..l {
        let mut s = P::zero(l);
        for a in 0..l {
            if m_num[a][b].is_zero() {
                continue;
            }
            let ta = P::var(l, a).scale(&Coeff::from_rat(degrees[a].clone()));
            s = s.add(&ta.mul(&m_num[a][b]));
        }
        let scale = Coeff::from_rat((BigRational::from_integer(1.into()) / (&two_kappa - &degrees[b])).clone());
        df.push(RationalFn::new(s.scale(&scale), g_t.den.clone()));
    }
    let mut f = RationalFn::zero(l);
    for b in 0..l {
        let tb = RationalFn::from_poly(P::var(l, b).scale(&Coeff::from_rat(&degrees[b] / &two_kappa)));
        f = f.add(&tb.mul(&df[b]));
    }
    // Consistency: the second derivatives reproduce M.
    for mu in 0..l {
        for sigma in mu..l {
            let second = f.derivative(mu).derivative(sigma);
            let m_entry = RationalFn::new(m_num[mu][sigma].clone(), g_t.den.clone());
            if second != m_entry {
                return Err(Error::IntegrabilityFailure(format!(
                    "d2F/dt{mu} dt{sigma} does not match M"
                )));
            }
        }
    }
    Ok(f)
}

/// Unit field data: omega_e components e_a = -(1/kappa) sum_r m_r
/// (dP^r/dt^a)/P^r, the raised unit e^a, the Euler field (d_a/kappa) t^a,
/// and the compact d-log form for reports.
pub struct UnitEuler {
    pub omega_e: Vec<RationalFn>,
    pub unit: Vec<RationalFn>,
    pub euler: Vec<P>,
    pub eflat: String,
}

pub fn unit_and_euler(chart: &FlatChart, wc: &WeightChoice) -> UnitEuler {
    let l = chart.rank();
    let jac = chart.jacobian();
    let kinv = Coeff::from_rat(wc.kappa.recip());
    let mut omega_e: Vec<RationalFn> = Vec::with_capacity(l);
    for a in 0..l {
        let mut s = RationalFn::zero(l);
        for (r, &m) in wc.marks.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let term = RationalFn::new(
                jac[r][a].scale(&Coeff::from_int(m)),
                chart.p[r].clone(),
            );
            s = s.add(&term);
        }
        omega_e.push(s.scale(&kinv).neg());
    }
    let mut unit = Vec::with_capacity(l);
    for a in 0..l {
        let mut s = RationalFn::zero(l);
        for b in 0..l {
            if chart.eta_normal[a][b].is_zero() {
                continue;
            }
            s = s.add(&omega_e[b].scale(&chart.eta_normal[a][b]));
        }
        unit.push(s);
    }
    let euler: Vec<P> = (0..l)
        .map(|a| P::var(l, a).scale(&Coeff::from_rat(&chart.degrees[a] / &wc.kappa)))
        .collect();
    let mut parts: Vec<String> = Vec::new();
    for (r, &m) in wc.marks.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let coeff = BigRational::from_integer(m.into()) / &wc.kappa;
        if coeff == BigRational::from_integer(1.into()) {
            parts.push(format!("d log z{}", r + 1));
        } else {
            parts.push(format!("{} d log z{}", coeff, r + 1));
        }
    }
    let eflat = format!("-({})", parts.join(" + "));
    UnitEuler { omega_e, unit, euler, eflat }
}

/// Everything the report needs, normalized, plus the raw fraction data the
/// verifier uses.
pub struct FrobeniusData {
    pub degrees: Vec<BigRational>,
    pub kappa: BigRational,
    pub eta_normal: Vec<Vec<Coeff>>,
    pub g_t: Vec<Vec<RationalFn>>,
    /// Gamma^{ab}_c as normalized rational functions, indexed [a][b][c].
    pub gamma: Vec<Vec<Vec<RationalFn>>>,
    /// c^g_{ab} indexed [a][b][g].
    pub c: Vec<Vec<Vec<RationalFn>>>,
    pub potential: RationalFn,
    pub unit: Vec<RationalFn>,
    pub omega_e: Vec<RationalFn>,
    pub euler: Vec<P>,
    pub eflat: String,
    // Fraction-form internals for the verifier.
    pub(crate) g_frac: FracMatrix,
    pub(crate) key: KeyChristoffel,
    pub(crate) sc: StructureConstants,
}

/// Runs the full chart-side pipeline.
pub fn build_frobenius(
    g: &PolyMatrix,
    chart: &FlatChart,
    wc: &WeightChoice,
) -> Result<FrobeniusData> {
    let l = chart.rank();
    let g_frac = metric_in_chart(g, chart)?;
    let key = christoffel_key(&g_frac, &chart.degrees);
    let sc = structure_constants(&key, &chart.eta_normal, &chart.degrees, &wc.kappa);
    let f = potential(&g_frac, &chart.eta_normal, &chart.degrees, &wc.kappa)?;
    let ue = unit_and_euler(chart, wc);
    let g_t = g_frac.to_ratfn();
    let gamma = (0..l)
        .map(|a| {
            (0..l)
                .map(|b| {
                    (0..l)
                        .map(|c| RationalFn::new(key.num[a][b][c].clone(), key.den.clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let c = (0..l)
        .map(|a| {
            (0..l)
                .map(|b| {
                    (0..l)
                        .map(|g_| RationalFn::new(sc.num[a][b][g_].clone(), sc.den.clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(FrobeniusData {
        degrees: chart.degrees.clone(),
        kappa: wc.kappa.clone(),
        eta_normal: chart.eta_normal.clone(),
        g_t,
        gamma,
        c,
        potential: f,
        unit: ue.unit,
        omega_e: ue.omega_e,
        euler: ue.euler,
        eflat: ue.eflat,
        g_frac,
        key,
        sc,
    })
}

/// The seven generalized-Frobenius-manifold checks, all exact.
#[derive(Clone, Debug)]
pub struct GfmReport {
    pub checks: Vec<(String, bool)>,
}

impl GfmReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn witness(&self) -> Option<&str> {
        self.checks.iter().find(|(_, ok)| !ok).map(|(name, _)| name.as_str())
    }
}

pub fn verify_gfm(data: &FrobeniusData) -> GfmReport {
    let l = data.degrees.len();
    let mut checks = Vec::new();
    let kappa = &data.kappa;
    let d = &data.degrees;
    let sc = &data.sc;

    // (1) WDVV associativity: sum_e c^e_{ab} c^d_{eg} = sum_e c^e_{gb} c^d_{ea}.
    let mut wdvv = true;
    'w: for a in 0..l {
        for b in 0..l {
            for g in 0..l {
                for dd in 0..l {
                    let mut lhs = P::zero(l);
                    let mut rhs = P::zero(l);
                    for e in 0..l {
                        lhs = lhs.add(&sc.num[a][b][e].mul(&sc.num[e][g][dd]));
                        rhs = rhs.add(&sc.num[g][b][e].mul(&sc.num[e][a][dd]));
                    }
                    if lhs != rhs {
                        wdvv = false;
                        break 'w;
                    }
                }
            }
        }
    }
    checks.push(("WDVV associativity".to_string(), wdvv));

    // (2) Unity: e^a c^g_{ab} = delta^g_b (rational-function arithmetic).
    let mut unity = true;
    'u: for b in 0..l {
        for g in 0..l {
            let mut s = RationalFn::zero(l);
            for a in 0..l {
                s = s.add(&data.unit[a].mul(&data.c[a][b][g]));
            }
            let expect = if b == g { RationalFn::one(l) } else { RationalFn::zero(l) };
            if s != expect {
                unity = false;
                break 'u;
            }
        }
    }
    checks.push(("two-sided unity".to_string(), unity));

    // (3) Quasi-homogeneity of c: sum_e (d_e/kappa) t^e d_e c^g_{ab}
    //     = (1 - d_a/kappa - d_b/kappa + d_g/kappa) c^g_{ab}.
    let dden: Vec<P> = (0..l).map(|e| sc.den.derivative(e)).collect();
    let mut quasi = true;
    'q: for a in 0..l {
        for b in 0..l {
            for g in 0..l {
                let mut lhs = P::zero(l);
                for e in 0..l {
                    let te = P::var(l, e).scale(&Coeff::from_rat(&d[e] / kappa));
                    let dc = sc.num[a][b][g]
                        .derivative(e)
                        .mul(&sc.den)
                        .sub(&sc.num[a][b][g].mul(&dden[e]));
                    lhs = lhs.add(&te.mul(&dc));
                }
                let w = BigRational::from_integer(1.into()) - &d[a] / kappa - &d[b] / kappa
                    + &d[g] / kappa;
                let rhs = sc.num[a][b][g].scale(&Coeff::from_rat(w)).mul(&sc.den);
                if lhs != rhs {
                    quasi = false;
                    break 'q;
                }
            }
        }
    }
    checks.push(("quasi-homogeneity of c".to_string(), quasi));

    // (4) (1 - d_a/kappa - d_b/kappa) eta_{ab} = 0.
    let eta_lower = crate::flatcoords::invert_constant_matrix(&data.eta_normal).unwrap();
    let degree_support = check_eta_degree_support(&eta_lower, d, kappa);
    checks.push(("eta degree support".to_string(), degree_support));

    // (5) Intersection form: g^{ab} = sum_g (d_g t^g / d_b) Gamma^{ab}_g.
    let mut inter = true;
    'i: for a in 0..l {
        for b in 0..l {
            let mut lhs = P::zero(l);
            for g in 0..l {
                let tg = P::var(l, g).scale(&Coeff::from_rat(&d[g] / &d[b]));
                lhs = lhs.add(&tg.mul(&data.key.num[a][b][g]));
            }
            // key den = den(g)^2; g^{ab} = num/den: compare lhs/den^2 with num/den.
            let rhs = data.g_frac.num[a][b].mul(&data.g_frac.den);
            if lhs != rhs {
                inter = false;
                break 'i;
            }
        }
    }
    checks.push(("intersection form identity".to_string(), inter));

    // (6) L_E~ F = 2F.
    let mut lie_f = RationalFn::zero(l);
    for e in 0..l {
        let te = RationalFn::from_poly(P::var(l, e).scale(&Coeff::from_rat(&d[e] / kappa)));
        lie_f = lie_f.add(&te.mul(&data.potential.derivative(e)));
    }
    let two_f = data.potential.scale(&Coeff::from_int(2));
    checks.push(("L_E F = 2F".to_string(), lie_f == two_f));

    // (7) [E~, e] = -e.
    let mut lie_e = true;
    for a in 0..l {
        let mut s = RationalFn::zero(l);
        for b in 0..l {
            let tb = RationalFn::from_poly(P::var(l, b).scale(&Coeff::from_rat(&d[b] / kappa)));
            s = s.add(&tb.mul(&data.unit[a].derivative(b)));
        }
        // - e^b d_b E^a = -(d_a/kappa) e^a; total must equal -e^a.
        let scale = Coeff::from_rat(&d[a] / kappa);
        let expect = data.unit[a].scale(&scale).sub(&data.unit[a]);
        if s != expect {
            lie_e = false;
            break;
        }
    }
    checks.push(("L_E e = -e".to_string(), lie_e));

    GfmReport { checks }
}

/// Check (4) in isolation: eta_{ab} vanishes unless d_a + d_b = kappa.
pub fn check_eta_degree_support(
    eta_lower: &[Vec<Coeff>],
    degrees: &[BigRational],
    kappa: &BigRational,
) -> bool {
    let l = degrees.len();
    for a in 0..l {
        for b in 0..l {
            if &degrees[a] + &degrees[b] != *kappa && !eta_lower[a][b].is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::flatcoords::FlatChart;
    use crate::geometry::{pushforward_metric, split_pencil};
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

    fn antidiag(l: usize) -> Vec<Vec<Coeff>> {
        (0..l)
            .map(|a| {
                (0..l)
                    .map(|b| if a + b == l - 1 { Coeff::one() } else { Coeff::zero() })
                    .collect()
            })
            .collect()
    }

    fn a1_setup() -> (PolyMatrix, FlatChart, WeightChoice) {
        let rs = build_root_system(Family::A, 1).unwrap();
        let wc = make_weight(&rs, &[1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        let (g, _) = split_pencil(&g_lam).unwrap();
        let mut p1 = P::zero(1);
        p1.insert_add(vec![1], Coeff::sqrt_d(2));
        let chart = FlatChart {
            p: vec![p1],
            degrees: vec![rat(1, 2)],
            eta_normal: antidiag(1),
            kappa: rat(1, 1),
        };
        (g, chart, wc)
    }

    fn a2_setup() -> (PolyMatrix, FlatChart, WeightChoice) {
        let rs = build_root_system(Family::A, 2).unwrap();
        let wc = make_weight(&rs, &[0, 1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        let (g, _) = split_pencil(&g_lam).unwrap();
        // Paper chart: z1 = 3 t1, z2 = t2 + 3/2 t1^2.
        let p1 = poly(2, &[(3, 1, &[1, 0])]);
        let p2 = poly(2, &[(1, 1, &[0, 1]), (3, 2, &[2, 0])]);
        let chart = FlatChart {
            p: vec![p1, p2],
            degrees: vec![rat(1, 3), rat(2, 3)],
            eta_normal: antidiag(2),
            kappa: rat(1, 1),
        };
        (g, chart, wc)
    }

    #[test]
    fn a1_metric_potential_unit() {
        let (g, chart, wc) = a1_setup();
        let data = build_frobenius(&g, &chart, &wc).unwrap();
        // g11(t) = -t^2/2
        assert_eq!(data.g_t[0][0], RationalFn::from_poly(poly(1, &[(-1, 2, &[2])])));
        // Gamma_1^{11} = -t/2 by the key formula.
        assert_eq!(data.gamma[0][0][0], RationalFn::from_poly(poly(1, &[(-1, 2, &[1])])));
        // F = -t^4/24.
        assert_eq!(data.potential, RationalFn::from_poly(poly(1, &[(-1, 24, &[4])])));
        // e = -(1/t) d_1; E~ = (1/2) t d_1.
        let expect_e = RationalFn::new(poly(1, &[(-1, 1, &[0])]), poly(1, &[(1, 1, &[1])]));
        assert_eq!(data.unit[0], expect_e);
        assert_eq!(data.euler[0], poly(1, &[(1, 2, &[1])]));
        // The unit contraction fixes c^1_{11} = -t.
        assert_eq!(data.c[0][0][0], RationalFn::from_poly(poly(1, &[(-1, 1, &[1])])));
        assert!(verify_gfm(&data).pass());
    }

    #[test]
    fn a2_metric_in_chart_matches_paper() {
        let (g, chart, _) = a2_setup();
        let m = metric_in_chart(&g, &chart).unwrap();
        let r = m.to_ratfn();
        // g11 = (1/9)(2 t2 - 3 t1^2)
        assert_eq!(
            r[0][0],
            RationalFn::from_poly(poly(2, &[(2, 9, &[0, 1]), (-1, 3, &[2, 0])]))
        );
        // g12 = -t1 t2 + t1^3/2
        assert_eq!(
            r[0][1],
            RationalFn::from_poly(poly(2, &[(-1, 1, &[1, 1]), (1, 2, &[3, 0])]))
        );
        // g22 = -(1/6)(2 t2 - 3 t1^2)^2
        assert_eq!(
            r[1][1],
            RationalFn::from_poly(poly(
                2,
                &[(-2, 3, &[0, 2]), (2, 1, &[2, 1]), (-3, 2, &[4, 0])]
            ))
        );
    }

    #[test]
    fn a2_potential_and_unit_match_paper() {
        let (g, chart, wc) = a2_setup();
        let data = build_frobenius(&g, &chart, &wc).unwrap();
        // F = t2^3/18 - t1^2 t2^2/4 + t1^4 t2/8 - 3 t1^6/80.
        let expect = RationalFn::from_poly(poly(
            2,
            &[(1, 18, &[0, 3]), (-1, 4, &[2, 2]), (1, 8, &[4, 1]), (-3, 80, &[6, 0])],
        ));
        assert_eq!(data.potential, expect);
        // e = -2/(2 t2 + 3 t1^2) d1 - 6 t1/(2 t2 + 3 t1^2) d2.
        let den = poly(2, &[(2, 1, &[0, 1]), (3, 1, &[2, 0])]);
        assert_eq!(data.unit[0], RationalFn::new(poly(2, &[(-2, 1, &[0, 0])]), den.clone()));
        assert_eq!(data.unit[1], RationalFn::new(poly(2, &[(-6, 1, &[1, 0])]), den));
        assert_eq!(data.eflat, "-(d log z2)");
    }

    #[test]
    fn a2_key_formula_consistent_and_gfm_passes() {
        let (g, chart, wc) = a2_setup();
        let data = build_frobenius(&g, &chart, &wc).unwrap();
        assert!(key_formula_consistent(&data.g_frac, &data.key).unwrap());
        let report = verify_gfm(&data);
        assert!(report.pass(), "failed: {:?}", report.witness());
        // Cor. unit-1 contraction: e_a Gamma_g^{ab} = (1/kappa) d_b delta_g^b
        // and e_a g^{ab} = (1/kappa) d_b t^b.
        let l = 2;
        for b in 0..l {
            let mut s = RationalFn::zero(l);
            for a in 0..l {
                s = s.add(&data.omega_e[a].mul(&data.g_t[a][b]));
            }
            let expect = RationalFn::from_poly(
                P::var(l, b).scale(&Coeff::from_rat(&data.degrees[b] / &data.kappa)),
            );
            assert_eq!(s, expect);
            for g_ in 0..l {
                let mut s = RationalFn::zero(l);
                for a in 0..l {
                    s = s.add(&data.omega_e[a].mul(&data.gamma[a][b][g_]));
                }
                let expect = if g_ == b {
                    RationalFn::from_poly(P::constant(
                        l,
                        Coeff::from_rat(&data.degrees[b] / &data.kappa),
                    ))
                } else {
                    RationalFn::zero(l)
                };
                assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn gamma_symmetry_relation() {
        // (1/d_c) Gamma^{bc}_a = (1/d_b) Gamma^{cb}_a.
        let (g, chart, wc) = a2_setup();
        let data = build_frobenius(&g, &chart, &wc).unwrap();
        let l = 2;
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    let lhs = data.gamma[b][c][a].scale(&Coeff::from_rat(data.degrees[c].recip()));
                    let rhs = data.gamma[c][b][a].scale(&Coeff::from_rat(data.degrees[b].recip()));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn degree_support_negative_control() {
        // With the identity in place of the antidiagonal eta for A2's
        // degrees (1/3, 2/3), the degree-support condition fails.
        let bad = vec![
            vec![Coeff::one(), Coeff::zero()],
            vec![Coeff::zero(), Coeff::one()],
        ];
        assert!(!check_eta_degree_support(&bad, &[rat(1, 3), rat(2, 3)], &rat(1, 1)));
        let good = vec![
            vec![Coeff::zero(), Coeff::one()],
            vec![Coeff::one(), Coeff::zero()],
        ];
        assert!(check_eta_degree_support(&good, &[rat(1, 3), rat(2, 3)], &rat(1, 1)));
    }

    #[test]
    fn flat_pencil_gamma_properties() {
        // dGamma_g^{ab}/dt^d symmetric in (g, d) and the GammaGamma
        // commutation of the flat pencil, on A2.
        let (g, chart, wc) = a2_setup();
        let data = build_frobenius(&g, &chart, &wc).unwrap();
        let l = 2;
        for a in 0..l {
            for b in 0..l {
                for g_ in 0..l {
                    for dd in 0..l {
                        assert_eq!(
                            data.gamma[a][b][g_].derivative(dd),
                            data.gamma[a][b][dd].derivative(g_)
                        );
                    }
                }
            }
        }
        for a in 0..l {
            for b in 0..l {
                for g_ in 0..l {
                    for dd in 0..l {
                        let mut lhs = RationalFn::zero(l);
                        let mut rhs = RationalFn::zero(l);
                        for e in 0..l {
                            lhs = lhs.add(&data.gamma[a][b][e].mul(&data.gamma[e][g_][dd]));
                            rhs = rhs.add(&data.gamma[a][g_][e].mul(&data.gamma[e][b][dd]));
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
