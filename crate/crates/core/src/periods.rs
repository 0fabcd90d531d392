//! Truncated period series v^a(z, rho) = rho^{d_a/kappa} h^a(z, rho) via
//! the triangular recursion on gradient coefficients, and residual checks
//! of the flatness and homogeneity equations at small rho.
//!
//! The recursion and all series coefficients are exact (rationals or the
//! chart's quadratic extension); floating point enters only when residual
//! magnitudes are reported.

use crate::arith::Coeff;
use crate::error::{Error, Result};
use crate::flatcoords::{invert_constant_matrix, FlatChart};
use crate::geometry::{christoffel_pack, PolyMatrix};
use crate::monodromy::polynomial_inverse;
use crate::poly::MPoly;
use crate::rootsys::WeightChoice;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

type P = MPoly<Coeff>;

#[derive(Clone, Debug)]
pub struct PeriodSeries {
    /// Flat coordinate index alpha (0-based) and its degree.
    pub alpha: usize,
    pub degree: BigRational,
    /// Gradient coefficient vectors xi_0 .. xi_K.
    pub xi: Vec<Vec<Coeff>>,
    pub base_point: Vec<BigRational>,
}

pub struct PeriodData {
    pub series: Vec<PeriodSeries>,
    /// Gamma^k_{ij} of eta + rho g at z0: series coefficients in rho
    /// (index [m][k][i][j]) and the exact rational form (numerator
    /// polynomials in rho over a common denominator).
    gamma_series: Vec<Vec<Vec<Vec<Coeff>>>>,
    gamma_num: Vec<Vec<Vec<P>>>,
    gamma_den: P,
    theta: Vec<BigRational>,
    kappa: BigRational,
    z0: Vec<Coeff>,
    order: usize,
}

/// Expands the period series of every flat coordinate at the rational base
/// point z0 to order K. The chart must be exactly invertible at z0 (its
/// polynomial inverse supplies xi_0 and the eigencheck data).
pub fn period_series(
    g: &PolyMatrix,
    eta: &PolyMatrix,
    chart: &FlatChart,
    wc: &WeightChoice,
    z0: &[BigRational],
    order: usize,
) -> Result<PeriodData> {
    let l = eta.n;
    assert_eq!(z0.len(), l);
    let z0c: Vec<Coeff> = z0.iter().map(|x| Coeff::from_rat(x.clone())).collect();
    if eta.det().eval(&z0c).is_zero() {
        return Err(Error::BadBasePoint("eta degenerate at z0".into()));
    }
    // t0 via the exact polynomial inverse of the chart.
    let inverse = polynomial_inverse(chart, &wc.theta).ok_or_else(|| {
        Error::BadBasePoint(
            "chart is not polynomially invertible; pick a case with a polynomial inverse".into(),
        )
    })?;
    let t0: Vec<Coeff> = inverse.iter().map(|q| q.eval(&z0c)).collect();
    // xi_0^alpha = row alpha of (dP/dt)^{-1} at t0.
    let jac = chart.jacobian();
    let jac0: Vec<Vec<Coeff>> =
        jac.iter().map(|row| row.iter().map(|p| p.eval(&t0)).collect()).collect();
    let jinv = invert_constant_matrix(&jac0)
        .ok_or_else(|| Error::BadBasePoint("chart Jacobian singular at z0".into()))?;

    // Christoffel symbols of eta + rho g, evaluated at z = z0, rho symbolic.
    let nv = l + 1;
    let mut pencil = vec![vec![P::zero(nv); l]; l];
    let rho = P::var(nv, l);
    for i in 0..l {
        for j in 0..l {
            pencil[i][j] = eta.entries[i][j]
                .extend_vars(nv)
                .add(&g.entries[i][j].extend_vars(nv).mul(&rho));
        }
    }
    let pack = christoffel_pack(&PolyMatrix::new(pencil).to_frac(), l)?;
    // Partial evaluation z -> z0, keeping rho as the single variable.
    let images: Vec<P> = z0c
        .iter()
        .map(|c| P::constant(1, c.clone()))
        .chain([P::var(1, 0)])
        .collect();
    let gamma_den = pack.cov_den.subst(&images);
    if gamma_den.eval(&[Coeff::zero()]).is_zero() {
        return Err(Error::BadBasePoint("Christoffel denominator vanishes at rho = 0".into()));
    }
    let mut gamma_num = vec![vec![vec![P::zero(1); l]; l]; l];
    for k in 0..l {
        for i in 0..l {
            for j in 0..l {
                gamma_num[k][i][j] = pack.cov_num[k][i][j].subst(&images);
            }
        }
    }
    // rho-series of Gamma to the requested order.
    let den_inv = univar_series_inv(&gamma_den, order as u32);
    let mut gamma_series = vec![vec![vec![vec![Coeff::zero(); l]; l]; l]; order + 1];
    for k in 0..l {
        for i in 0..l {
            for j in 0..l {
                let s = univar_mul_trunc(&gamma_num[k][i][j], &den_inv, order as u32);
                for (e, c) in &s.terms {
                    gamma_series[e[0] as usize][k][i][j] = c.clone();
                }
            }
        }
    }
    // A_m matrices: A_m[j][mm] = sum_k theta_k z0^k Gamma^mm_{jk} (series
    // coefficient m), plus theta_j delta at m = 0.
    let mut a_mats: Vec<Vec<Vec<Coeff>>> = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut a = vec![vec![Coeff::zero(); l]; l];
        for j in 0..l {
            for mm in 0..l {
                let mut s = Coeff::zero();
                for k in 0..l {
                    if gamma_series[m][mm][j][k].is_zero() {
                        continue;
                    }
                    s = s.add(
                        &z0c[k]
                            .mul(&Coeff::from_rat(wc.theta[k].clone()))
                            .mul(&gamma_series[m][mm][j][k]),
                    );
                }
                if m == 0 && j == mm {
                    s = s.add(&Coeff::from_rat(wc.theta[j].clone()));
                }
                a[j][mm] = s;
            }
        }
        a_mats.push(a);
    }
    // Recursion per flat coordinate.
    let mut series = Vec::with_capacity(l);
    for alpha in 0..l {
        let d = &chart.degrees[alpha];
        let xi0: Vec<Coeff> = (0..l).map(|r| jinv[alpha][r].clone()).collect();
        // Exact eigencheck: (A_0 - d) xi_0 = 0.
        for j in 0..l {
            let mut s = Coeff::zero();
            for mm in 0..l {
                s = s.add(&a_mats[0][j][mm].mul(&xi0[mm]));
            }
            s = s.sub(&xi0[j].mul(&Coeff::from_rat(d.clone())));
            if !s.is_zero() {
                return Err(Error::Other(format!(
                    "xi_0 of t^{} is not an eigenvector of A(z0)",
                    alpha + 1
                )));
            }
        }
        let mut xi: Vec<Vec<Coeff>> = vec![xi0];
        for k in 1..=order {
            // (A_0 - d - k kappa) xi_k = -sum_{m=1}^{k} A_m xi_{k-m}.
            let shift = d + &wc.kappa * BigRational::from_integer((k as i64).into());
            let mut mat: Vec<Vec<Coeff>> = a_mats[0].clone();
            for (j, row) in mat.iter_mut().enumerate() {
                row[j] = row[j].sub(&Coeff::from_rat(shift.clone()));
            }
            let mut rhs = vec![Coeff::zero(); l];
            for m in 1..=k.min(order) {
                for j in 0..l {
                    for mm in 0..l {
                        if a_mats[m][j][mm].is_zero() {
                            continue;
                        }
                        let t = a_mats[m][j][mm].mul(&xi[k - m][mm]);
                        rhs[j] = rhs[j].sub(&t);
                    }
                }
            }
            let sol = solve_square(&mat, &rhs).ok_or(Error::ResonantShift(k))?;
            xi.push(sol);
        }
        series.push(PeriodSeries {
            alpha,
            degree: d.clone(),
            xi,
            base_point: z0.to_vec(),
        });
    }
    Ok(PeriodData {
        series,
        gamma_series,
        gamma_num,
        gamma_den,
        theta: wc.theta.clone(),
        kappa: wc.kappa.clone(),
        z0: z0c,
        order,
    })
}

fn solve_square(mat: &[Vec<Coeff>], b: &[Coeff]) -> Option<Vec<Coeff>> {
    let n = mat.len();
    let mut a: Vec<Vec<Coeff>> = mat
        .iter()
        .zip(b)
        .map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let pv = a[col][col].inv();
        for c in col..=n {
            a[col][c] = a[col][c].mul(&pv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let t = a[col][c].mul(&f);
                    a[r][c] = a[r][c].sub(&t);
                }
            }
        }
    }
    Some((0..n).map(|r| a[r][n].clone()).collect())
}

fn univar_series_inv(p: &P, maxdeg: u32) -> P {
    let c0 = p.eval(&[Coeff::zero()]);
    let c0inv = c0.inv();
    let u = P::constant(1, c0).sub(p).scale(&c0inv);
    let mut acc = P::one(1);
    let mut upow = P::one(1);
    for _ in 0..maxdeg {
        upow = univar_mul_trunc(&upow, &u, maxdeg);
        if upow.is_zero() {
            break;
        }
        acc = acc.add(&upow);
    }
    acc.scale(&c0inv)
}

fn univar_mul_trunc(a: &P, b: &P, maxdeg: u32) -> P {
    let mut out = P::zero(1);
    for (e1, c1) in &a.terms {
        if e1[0] > maxdeg {
            continue;
        }
        for (e2, c2) in &b.terms {
            if e1[0] + e2[0] > maxdeg {
                continue;
            }
            out.insert_add(vec![e1[0] + e2[0]], c1.mul(c2));
        }
    }
    out
}

/// Residual summary at one sample value of rho.
#[derive(Clone, Debug)]
pub struct ResidualSample {
    pub rho: BigRational,
    /// max |flatness residual| over components and flat coordinates.
    pub flatness: f64,
    /// max |homogeneity residual| (gradient form).
    pub homogeneity: f64,
}

/// Evaluates the flatness system on the truncated series at z0 for each
/// sample rho, exactly, reporting float magnitudes (including the
/// rho^{d/kappa} prefactor of the period).
pub fn residual_check(data: &PeriodData, samples: &[BigRational]) -> Vec<ResidualSample> {
    let l = data.z0.len();
    let k_max = data.order;
    let mut out = Vec::new();
    for rho in samples {
        let rc = Coeff::from_rat(rho.clone());
        let mut worst_flat: f64 = 0.0;
        let mut worst_hom: f64 = 0.0;
        for s in &data.series {
            let prefactor = rho
                .to_f64()
                .unwrap_or(f64::NAN)
                .powf((&s.degree / &data.kappa).to_f64().unwrap_or(f64::NAN));
            // Xi(rho) and the exact H_{ij}(rho) of the truncated series.
            let mut xi_at = vec![Coeff::zero(); l];
            let mut rho_pow = Coeff::one();
            for k in 0..=k_max {
                for j in 0..l {
                    xi_at[j] = xi_at[j].add(&s.xi[k][j].mul(&rho_pow));
                }
                rho_pow = rho_pow.mul(&rc);
            }
            // H_{ij}(rho) = sum_{k<=K} rho^k sum_{m<=k} Gamma_m xi_{k-m};
            // these are the exact second derivatives of the truncated h.
            let mut h = vec![vec![Coeff::zero(); l]; l];
            let mut rho_pow = Coeff::one();
            for k in 0..=k_max {
                for i in 0..l {
                    for j in i..l {
                        let mut acc = Coeff::zero();
                        for m in 0..=k {
                            for kk in 0..l {
                                if data.gamma_series[m][kk][i][j].is_zero() {
                                    continue;
                                }
                                acc = acc
                                    .add(&data.gamma_series[m][kk][i][j].mul(&s.xi[k - m][kk]));
                            }
                        }
                        let v = acc.mul(&rho_pow);
                        h[i][j] = h[i][j].add(&v);
                        if i != j {
                            h[j][i] = h[j][i].add(&v);
                        }
                    }
                }
                rho_pow = rho_pow.mul(&rc);
            }
            // Flatness residual: H_{ij}(rho) - Gamma^k_{ij}(z0, rho) Xi_k.
            let den_val = data.gamma_den.eval(&[rc.clone()]);
            let den_inv = den_val.inv();
            for i in 0..l {
                for j in 0..l {
                    let mut exact = Coeff::zero();
                    for kk in 0..l {
                        let gv = data.gamma_num[kk][i][j].eval(&[rc.clone()]).mul(&den_inv);
                        exact = exact.add(&gv.mul(&xi_at[kk]));
                    }
                    let r = h[i][j].sub(&exact);
                    worst_flat = worst_flat.max((r.to_f64() * prefactor).abs());
                }
            }
            // Homogeneity residual, gradient form:
            // -kappa rho d_rho xi_j + sum_r theta_r z0^r H_{rj} - (d - theta_j) xi_j.
            for j in 0..l {
                let mut drho = Coeff::zero();
                let mut rho_pow = Coeff::one();
                for k in 1..=k_max {
                    rho_pow = rho_pow.mul(&rc);
                    drho = drho.add(
                        &s.xi[k][j]
                            .mul(&rho_pow)
                            .scale(&BigRational::from_integer((k as i64).into())),
                    );
                }
                let mut r = drho.scale(&(-&data.kappa));
                for rr in 0..l {
                    r = r.add(&data.z0[rr].mul(&Coeff::from_rat(data.theta[rr].clone())).mul(&h[rr][j]));
                }
                let w = &s.degree - &data.theta[j];
                r = r.sub(&xi_at[j].mul(&Coeff::from_rat(w)));
                worst_hom = worst_hom.max((r.to_f64() * prefactor).abs());
            }
        }
        out.push(ResidualSample { rho: rho.clone(), flatness: worst_flat, homogeneity: worst_hom });
    }
    out
}

/// Renders an exact coefficient as a decimal string with the requested
/// number of digits after the point.
pub fn decimal_string(c: &Coeff, digits: u32) -> String {
    let scale = num_bigint::BigInt::from(10u32).pow(digits);
    let mut value = &c.a * &scale;
    if !c.b.is_zero() {
        // b * sqrt(d) * 10^digits, rounded via integer sqrt of d*10^(2*digits).
        let d = num_bigint::BigInt::from(c.d);
        let root = (d * &scale * &scale).sqrt();
        value += &c.b * BigRational::from_integer(root);
    }
    let rounded = value.round().to_integer();
    let neg = rounded.is_negative();
    let abs = rounded.magnitude().to_string();
    let padded = if (abs.len() as u32) <= digits {
        format!("{}{}", "0".repeat((digits + 1 - abs.len() as u32) as usize), abs)
    } else {
        abs
    };
    let cut = padded.len() - digits as usize;
    format!("{}{}.{}", if neg { "-" } else { "" }, &padded[..cut], &padded[cut..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rint};
    use crate::flatcoords::FlatChart;
    use crate::geometry::{pushforward_metric, split_pencil};
    use crate::invariants::basic_generators;
    use crate::rootsys::{build_root_system, make_weight, Family};
    use crate::weylgroup::generate_group;

    fn antidiag(l: usize) -> Vec<Vec<Coeff>> {
        (0..l)
            .map(|a| {
                (0..l)
                    .map(|b| if a + b == l - 1 { Coeff::one() } else { Coeff::zero() })
                    .collect()
            })
            .collect()
    }

    fn a1_data() -> (PolyMatrix, PolyMatrix, FlatChart, WeightChoice) {
        let rs = build_root_system(Family::A, 1).unwrap();
        let wc = make_weight(&rs, &[1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        let (g, eta) = split_pencil(&g_lam).unwrap();
        let mut p1 = P::zero(1);
        p1.insert_add(vec![1], Coeff::sqrt_d(2));
        let chart = FlatChart {
            p: vec![p1],
            degrees: vec![rat(1, 2)],
            eta_normal: antidiag(1),
            kappa: rat(1, 1),
        };
        (g, eta, chart, wc)
    }

    fn a2_data() -> (PolyMatrix, PolyMatrix, FlatChart, WeightChoice) {
        let rs = build_root_system(Family::A, 2).unwrap();
        let wc = make_weight(&rs, &[0, 1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let gens = basic_generators(&rs, &wc, &group);
        let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
        let (g, eta) = split_pencil(&g_lam).unwrap();
        let mut p1 = P::zero(2);
        p1.insert_add(vec![1, 0], Coeff::from_int(3));
        let mut p2 = P::zero(2);
        p2.insert_add(vec![0, 1], Coeff::one());
        p2.insert_add(vec![2, 0], Coeff::from_frac(3, 2));
        let chart = FlatChart {
            p: vec![p1, p2],
            degrees: vec![rat(1, 3), rat(2, 3)],
            eta_normal: antidiag(2),
            kappa: rat(1, 1),
        };
        (g, eta, chart, wc)
    }

    #[test]
    fn a1_xi0_is_inverse_sqrt2() {
        let (g, eta, chart, wc) = a1_data();
        let data = period_series(&g, &eta, &chart, &wc, &[rint(3)], 4).unwrap();
        // xi_0 = dt/dz = 1/sqrt(2) = sqrt(2)/2.
        let expect = Coeff::quad(rint(0), rat(1, 2), 2);
        assert_eq!(data.series[0].xi[0][0], expect);
    }

    #[test]
    fn a2_xi0_is_paper_gradient() {
        let (g, eta, chart, wc) = a2_data();
        let data = period_series(&g, &eta, &chart, &wc, &[rint(2), rint(3)], 4).unwrap();
        assert_eq!(data.series[0].xi[0], vec![Coeff::from_frac(1, 3), Coeff::zero()]);
    }

    #[test]
    fn residual_decay_a1() {
        let (g, eta, chart, wc) = a1_data();
        let data = period_series(&g, &eta, &chart, &wc, &[rint(3)], 8).unwrap();
        let res = residual_check(&data, &[rat(1, 10), rat(1, 100)]);
        assert!(res[1].flatness < 1e-12, "flatness {}", res[1].flatness);
        assert!(res[1].homogeneity < 1e-10, "homogeneity {}", res[1].homogeneity);
        // Decay consistent with O(rho^{K+1}) within a factor of 10.
        let ratio = res[0].flatness / res[1].flatness.max(f64::MIN_POSITIVE);
        assert!(ratio > 1e8 && ratio < 1e10, "ratio {ratio}");
    }

    #[test]
    fn k0_truncation_residual_is_order_rho() {
        let (g, eta, chart, wc) = a1_data();
        let data = period_series(&g, &eta, &chart, &wc, &[rint(3)], 0).unwrap();
        let res = residual_check(&data, &[rat(1, 10), rat(1, 100)]);
        let ratio = res[0].flatness / res[1].flatness.max(f64::MIN_POSITIVE);
        assert!(ratio > 1.0 && ratio < 1e3, "ratio {ratio}");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&Coeff::from_frac(1, 3), 6), "0.333333");
        assert_eq!(decimal_string(&Coeff::from_frac(-5, 2), 3), "-2.500");
        // sqrt(2)/2 = 0.70710678...
        let c = Coeff::quad(rint(0), rat(1, 2), 2);
        assert_eq!(decimal_string(&c, 8), "0.70710678");
    }
}
