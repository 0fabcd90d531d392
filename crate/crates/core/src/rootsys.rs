//! Irreducible reduced root systems in Bourbaki conventions, and the
//! weight-dependent constants theta_j, kappa, S attached to a chosen weight.

use crate::arith::{rational_gcd, rint, RatMat};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G => "G",
        };
        write!(f, "{s}")
    }
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "G" => Ok(Family::G),
            other => Err(Error::UnsupportedFamilyRank(other.to_string(), 0)),
        }
    }
}

type Vect = Vec<BigRational>;

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn scale_vec(a: &[BigRational], c: &BigRational) -> Vect {
    a.iter().map(|x| x * c).collect()
}

fn add_vec(a: &[BigRational], b: &[BigRational]) -> Vect {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Root-system data for one irreducible family and rank. Simple roots live
/// in an ambient orthonormal frame chosen so the catalog examples come out
/// in the exact coordinates used there.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    /// Ambient dimension of the orthonormal frame.
    pub ambient: usize,
    /// Simple roots alpha_i as ambient vectors.
    pub simple_roots: Vec<Vect>,
    /// Coroots alpha_i^vee = 2 alpha_i / (alpha_i, alpha_i).
    pub coroots: Vec<Vect>,
    /// Cartan matrix c_sr = (alpha_s, alpha_r^vee).
    pub cartan: Vec<Vec<i64>>,
    /// Fundamental weights as coordinate vectors in the coroot basis.
    pub fundamental_weights: Vec<Vect>,
    /// Gram matrix (alpha_i^vee, alpha_j^vee).
    pub coroot_gram: RatMat,
    /// a^{ij} = coroot_gram^{-1}: the base contravariant metric.
    pub a: RatMat,
    /// Positive roots as integer coefficient vectors over the simple roots.
    pub positive_roots: Vec<Vec<i64>>,
}

impl RootSystem {
    /// Ambient vector of a positive root given by its simple-root coefficients.
    pub fn root_ambient(&self, coeffs: &[i64]) -> Vect {
        let mut v = vec![BigRational::zero(); self.ambient];
        for (c, alpha) in coeffs.iter().zip(&self.simple_roots) {
            let cr = rint(*c);
            v = add_vec(&v, &scale_vec(alpha, &cr));
        }
        v
    }

    /// Ambient vector from coroot-basis coordinates.
    pub fn from_coroot_coords(&self, coords: &[BigRational]) -> Vect {
        let mut v = vec![BigRational::zero(); self.ambient];
        for (c, cv) in coords.iter().zip(&self.coroots) {
            v = add_vec(&v, &scale_vec(cv, c));
        }
        v
    }
}

/// Builds the root-system data. Supported: A (rank >= 1), B (rank >= 2),
/// C (rank >= 2), D (rank >= 3), G (rank == 2).
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    let err = || Error::UnsupportedFamilyRank(family.to_string(), rank);
    let (ambient, simple_roots): (usize, Vec<Vect>) = match family {
        Family::A => {
            if rank < 1 {
                return Err(err());
            }
            let n = rank + 1;
            (n, (0..rank).map(|i| e_minus_e(n, i, i + 1)).collect())
        }
        Family::B => {
            if rank < 2 {
                return Err(err());
            }
            let mut roots: Vec<Vect> = (0..rank - 1).map(|i| e_minus_e(rank, i, i + 1)).collect();
            roots.push(unit(rank, rank - 1));
            (rank, roots)
        }
        Family::C => {
            if rank < 2 {
                return Err(err());
            }
            let mut roots: Vec<Vect> = (0..rank - 1).map(|i| e_minus_e(rank, i, i + 1)).collect();
            roots.push(scale_vec(&unit(rank, rank - 1), &rint(2)));
            (rank, roots)
        }
        Family::D => {
            if rank < 3 {
                return Err(err());
            }
            let mut roots: Vec<Vect> = (0..rank - 1).map(|i| e_minus_e(rank, i, i + 1)).collect();
            roots.push(add_vec(&unit(rank, rank - 2), &unit(rank, rank - 1)));
            (rank, roots)
        }
        Family::G => {
            if rank != 2 {
                return Err(err());
            }
            let a1 = e_minus_e(3, 0, 1);
            let a2 = vec![rint(-2), rint(1), rint(1)];
            (3, vec![a1, a2])
        }
    };

    let coroots: Vec<Vect> = simple_roots
        .iter()
        .map(|a| {
            let n2 = dot(a, a);
            scale_vec(a, &(rint(2) / n2))
        })
        .collect();

    let cartan: Vec<Vec<i64>> = simple_roots
        .iter()
        .map(|a| {
            coroots
                .iter()
                .map(|cv| {
                    let v = dot(a, cv);
                    assert!(v.denom().is_one(), "non-integer Cartan entry");
                    i64::try_from(v.numer().clone()).expect("Cartan entry fits i64")
                })
                .collect()
        })
        .collect();

    let coroot_gram = RatMat::new(
        coroots.iter().map(|x| coroots.iter().map(|y| dot(x, y)).collect()).collect(),
    );
    let a = coroot_gram.inverse().expect("coroot Gram matrix is invertible");

    // omega_j = sum_p a^{pj} alpha_p^vee; stored as coroot-basis coordinates.
    let fundamental_weights: Vec<Vect> =
        (0..rank).map(|j| (0..rank).map(|p| a.at(p, j).clone()).collect()).collect();

    let positive_roots = positive_roots_by_closure(&simple_roots, &coroots);

    let rs = RootSystem {
        family,
        rank,
        ambient,
        simple_roots,
        coroots,
        cartan,
        fundamental_weights,
        coroot_gram,
        a,
        positive_roots,
    };
    validate(&rs);
    Ok(rs)
}

fn unit(n: usize, i: usize) -> Vect {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v
}

fn e_minus_e(n: usize, i: usize, j: usize) -> Vect {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v[j] = -BigRational::one();
    v
}

/// All roots as the reflection closure of the simple roots; returns the
/// positive ones, expressed as integer combinations of simple roots.
fn positive_roots_by_closure(simple: &[Vect], coroots: &[Vect]) -> Vec<Vec<i64>> {
    // Work in simple-root coefficient space: reflections act by
    // sigma_j(coeffs of beta) = coeffs of beta - (beta, alpha_j^vee) e_j.
    let rank = simple.len();
    let mut seen: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..rank {
        let mut c = vec![0i64; rank];
        c[i] = 1;
        if seen.insert(c.clone()) {
            queue.push(c);
        }
    }
    while let Some(c) = queue.pop() {
        let beta: Vect = {
            let mut v = vec![BigRational::zero(); simple[0].len()];
            for (ci, alpha) in c.iter().zip(simple) {
                v = add_vec(&v, &scale_vec(alpha, &rint(*ci)));
            }
            v
        };
        for (j, cv) in coroots.iter().enumerate() {
            let pairing = dot(&beta, cv);
            assert!(pairing.denom().is_one());
            let k = i64::try_from(pairing.numer().clone()).unwrap();
            let mut c2 = c.clone();
            c2[j] -= k;
            if seen.insert(c2.clone()) {
                queue.push(c2);
            }
        }
    }
    let mut pos: Vec<Vec<i64>> =
        seen.into_iter().filter(|c| c.iter().all(|&x| x >= 0)).collect();
    pos.sort();
    pos
}

fn validate(rs: &RootSystem) {
    let l = rs.rank;
    // Cartan shape.
    for s in 0..l {
        assert_eq!(rs.cartan[s][s], 2);
        for r in 0..l {
            if r != s {
                assert!(rs.cartan[s][r] <= 0, "positive off-diagonal Cartan entry");
            }
        }
    }
    // (omega_i, alpha_j^vee) = delta_ij.
    for i in 0..l {
        let w = rs.from_coroot_coords(&rs.fundamental_weights[i]);
        for j in 0..l {
            let p = dot(&w, &rs.coroots[j]);
            let expect = if i == j { BigRational::one() } else { BigRational::zero() };
            assert_eq!(p, expect, "fundamental weight duality fails");
        }
    }
    // Half-sum of positive roots equals the sum of fundamental weights.
    let mut half_sum = vec![BigRational::zero(); rs.ambient];
    for c in &rs.positive_roots {
        half_sum = add_vec(&half_sum, &rs.root_ambient(c));
    }
    half_sum = scale_vec(&half_sum, &BigRational::new(1.into(), 2.into()));
    let mut wsum = vec![BigRational::zero(); rs.ambient];
    for j in 0..l {
        wsum = add_vec(&wsum, &rs.from_coroot_coords(&rs.fundamental_weights[j]));
    }
    assert_eq!(half_sum, wsum, "half-sum identity fails");
    // a * Gram = identity.
    assert_eq!(rs.a.mul(&rs.coroot_gram), RatMat::identity(l));
}

/// Returns the base contravariant metric a^{ij} = ((alpha_i^vee, alpha_j^vee))^{-1}.
pub fn base_contravariant_metric(rs: &RootSystem) -> RatMat {
    rs.a.clone()
}

/// A fixed weight omega = sum m_j omega_j and its derived constants.
#[derive(Clone, Debug)]
pub struct WeightChoice {
    pub marks: Vec<i64>,
    /// omega in the ambient frame.
    pub omega: Vect,
    /// omega's coordinates in the coroot basis; these equal theta.
    pub theta: Vec<BigRational>,
    pub kappa: BigRational,
    /// S = { r : m_r > 0 }.
    pub s_set: Vec<usize>,
}

/// Builds a WeightChoice, computing theta = a*m, kappa, and S exactly.
pub fn make_weight(rs: &RootSystem, marks: &[i64]) -> Result<WeightChoice> {
    if marks.len() != rs.rank {
        return Err(Error::Other(format!(
            "expected {} marks, got {}",
            rs.rank,
            marks.len()
        )));
    }
    if marks.iter().any(|&m| m < 0) {
        return Err(Error::Other("marks must be nonnegative".into()));
    }
    if marks.iter().all(|&m| m == 0) {
        return Err(Error::ZeroWeight);
    }
    let m_rat: Vec<BigRational> = marks.iter().map(|&m| rint(m)).collect();
    let theta = rs.a.mul_vec(&m_rat);
    let omega = rs.from_coroot_coords(&theta);
    // kappa = gcd over r of (omega, alpha_r) = m_r (alpha_r, alpha_r)/2,
    // zeros absorbed.
    let mut kappa = BigRational::zero();
    for (r, alpha) in rs.simple_roots.iter().enumerate() {
        let v = rint(marks[r]) * dot(alpha, alpha) / rint(2);
        assert!(!v.is_negative());
        kappa = rational_gcd(&kappa, &v);
    }
    assert!(kappa.is_positive());
    let s_set = (0..rs.rank).filter(|&r| marks[r] > 0).collect();
    Ok(WeightChoice { marks: marks.to_vec(), omega, theta, kappa, s_set })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn a2_conventions() {
        let rs = build_root_system(Family::A, 2).unwrap();
        // alpha1 = e1 - e2, alpha2 = e2 - e3
        assert_eq!(rs.simple_roots[0], vec![rint(1), rint(-1), rint(0)]);
        assert_eq!(rs.simple_roots[1], vec![rint(0), rint(1), rint(-1)]);
        // omega1 = 2/3 a1v + 1/3 a2v
        assert_eq!(rs.fundamental_weights[0], vec![rat(2, 3), rat(1, 3)]);
        // a = 1/3 [[2,1],[1,2]]
        let a = base_contravariant_metric(&rs);
        assert_eq!(a.data[0], vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(a.data[1], vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(rs.positive_roots.len(), 3);
    }

    #[test]
    fn c3_coroots_and_metric() {
        let rs = build_root_system(Family::C, 3).unwrap();
        assert_eq!(rs.coroots[0], vec![rint(1), rint(-1), rint(0)]);
        assert_eq!(rs.coroots[1], vec![rint(0), rint(1), rint(-1)]);
        assert_eq!(rs.coroots[2], vec![rint(0), rint(0), rint(1)]);
        let a = base_contravariant_metric(&rs);
        assert_eq!(
            a,
            RatMat::from_i64(&[&[1, 1, 1], &[1, 2, 2], &[1, 2, 3]])
        );
    }

    #[test]
    fn b3_metric_and_kappa() {
        let rs = build_root_system(Family::B, 3).unwrap();
        let a = base_contravariant_metric(&rs);
        assert_eq!(a.data[0], vec![rint(1), rint(1), rat(1, 2)]);
        assert_eq!(a.data[1], vec![rint(1), rint(2), rint(1)]);
        assert_eq!(a.data[2], vec![rat(1, 2), rint(1), rat(3, 4)]);
        // (B3, omega_3): kappa = 1/2 by the rational gcd convention
        let wc = make_weight(&rs, &[0, 0, 1]).unwrap();
        assert_eq!(wc.kappa, rat(1, 2));
        // (B3, omega_1): kappa = 1, theta = (1, 1, 1/2)
        let wc = make_weight(&rs, &[1, 0, 0]).unwrap();
        assert_eq!(wc.kappa, rint(1));
        assert_eq!(wc.theta, vec![rint(1), rint(1), rat(1, 2)]);
        assert_eq!(wc.s_set, vec![0]);
    }

    #[test]
    fn catalog_kappas_and_thetas() {
        let a1 = build_root_system(Family::A, 1).unwrap();
        assert_eq!(a1.cartan, vec![vec![2]]);
        let wc = make_weight(&a1, &[1]).unwrap();
        assert_eq!(wc.kappa, rint(1));
        assert_eq!(wc.theta, vec![rat(1, 2)]);

        let a2 = build_root_system(Family::A, 2).unwrap();
        let wc = make_weight(&a2, &[0, 1]).unwrap();
        assert_eq!(wc.kappa, rint(1));
        assert_eq!(wc.theta, vec![rat(1, 3), rat(2, 3)]);

        let c3 = build_root_system(Family::C, 3).unwrap();
        let wc = make_weight(&c3, &[0, 0, 1]).unwrap();
        assert_eq!(wc.kappa, rint(2));
        assert_eq!(wc.theta, vec![rint(1), rint(2), rint(3)]);

        let g2 = build_root_system(Family::G, 2).unwrap();
        let wc = make_weight(&g2, &[0, 1]).unwrap();
        assert_eq!(wc.kappa, rint(3));
        assert_eq!(wc.theta, vec![rint(3), rint(6)]);

        let a3 = build_root_system(Family::A, 3).unwrap();
        let wc = make_weight(&a3, &[1, 0, 1]).unwrap();
        assert_eq!(wc.kappa, rint(1));
        assert_eq!(wc.theta, vec![rint(1), rint(1), rint(1)]);
    }

    #[test]
    fn g2_paper_frame() {
        let rs = build_root_system(Family::G, 2).unwrap();
        assert_eq!(rs.coroots[1], vec![rat(-2, 3), rat(1, 3), rat(1, 3)]);
        let a = base_contravariant_metric(&rs);
        assert_eq!(a, RatMat::from_i64(&[&[2, 3], &[3, 6]]));
        assert_eq!(rs.positive_roots.len(), 6);
        // omega_1 = 2 a1v + 3 a2v, omega_2 = 3 a1v + 6 a2v
        assert_eq!(rs.fundamental_weights[0], vec![rint(2), rint(3)]);
        assert_eq!(rs.fundamental_weights[1], vec![rint(3), rint(6)]);
    }

    #[test]
    fn unsupported_pairs_error() {
        assert!(build_root_system(Family::G, 3).is_err());
        assert!(build_root_system(Family::D, 2).is_err());
        assert!(build_root_system(Family::A, 0).is_err());
        let a2 = build_root_system(Family::A, 2).unwrap();
        assert_eq!(make_weight(&a2, &[0, 0]).unwrap_err(), Error::ZeroWeight);
    }

    #[test]
    fn d_family_supported() {
        let d3 = build_root_system(Family::D, 3).unwrap();
        assert_eq!(d3.positive_roots.len(), 6); // isomorphic to A3
        let d4 = build_root_system(Family::D, 4).unwrap();
        assert_eq!(d4.positive_roots.len(), 12);
    }

    #[test]
    fn theta_equals_a_times_marks_random() {
        // theta = a*m exactly, over a deterministic spread of mark vectors.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for (fam, rank) in [
            (Family::A, 2),
            (Family::A, 3),
            (Family::B, 3),
            (Family::C, 3),
            (Family::G, 2),
            (Family::D, 4),
        ] {
            let rs = build_root_system(fam, rank).unwrap();
            for _ in 0..100 {
                let marks: Vec<i64> = (0..rank).map(|_| (next() % 5) as i64).collect();
                if marks.iter().all(|&m| m == 0) {
                    continue;
                }
                let wc = make_weight(&rs, &marks).unwrap();
                for j in 0..rank {
                    let omega_j = rs.from_coroot_coords(&rs.fundamental_weights[j]);
                    assert_eq!(wc.theta[j], super::dot(&omega_j, &wc.omega));
                }
            }
        }
    }
}
