//! Finite Weyl group enumeration as exact linear maps in the coroot basis,
//! orbits, stabilizer sizes, and Stab(omega).

use crate::arith::RatMat;
use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, WeightChoice};
use num_rational::BigRational;
use std::collections::{BTreeSet, VecDeque};

/// One group element. `matrix` maps coroot-basis coordinate vectors:
/// coords(sigma(v)) = M * coords(v). `word` is one shortest expression in
/// simple reflections found by the closure BFS.
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub matrix: RatMat,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    pub order: usize,
    /// Matrices of the simple reflections sigma_1..sigma_l.
    pub simple_reflections: Vec<RatMat>,
}

pub const DEFAULT_ORDER_CAP: usize = 1_000_000;

/// Matrix of sigma_j in the coroot basis: sigma_j(alpha_p^vee) =
/// alpha_p^vee - c_{jp} alpha_j^vee, so column p is e_p - c_{jp} e_j.
pub fn simple_reflection_matrix(rs: &RootSystem, j: usize) -> RatMat {
    let l = rs.rank;
    let mut m = RatMat::identity(l);
    for p in 0..l {
        let c = rs.cartan[j][p];
        m.data[j][p] = &m.data[j][p] - BigRational::from_integer(c.into());
    }
    m
}

/// Enumerates W(R) by breadth-first closure over the simple reflections.
pub fn generate_group(rs: &RootSystem) -> Result<WeylGroup> {
    generate_group_capped(rs, DEFAULT_ORDER_CAP)
}

pub fn generate_group_capped(rs: &RootSystem, cap: usize) -> Result<WeylGroup> {
    let gens: Vec<RatMat> = (0..rs.rank).map(|j| simple_reflection_matrix(rs, j)).collect();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut elements: Vec<WeylElement> = Vec::new();
    let mut queue: VecDeque<WeylElement> = VecDeque::new();
    let id = WeylElement { matrix: RatMat::identity(rs.rank), word: Vec::new() };
    seen.insert(id.matrix.key());
    queue.push_back(id);
    while let Some(el) = queue.pop_front() {
        for (j, g) in gens.iter().enumerate() {
            let m = g.mul(&el.matrix);
            if seen.insert(m.key()) {
                let mut word = vec![j];
                word.extend_from_slice(&el.word);
                if seen.len() > cap {
                    return Err(Error::GroupTooLarge { cap, reached: seen.len() });
                }
                queue.push_back(WeylElement { matrix: m, word });
            }
        }
        elements.push(el);
    }
    let order = elements.len();
    Ok(WeylGroup { elements, order, simple_reflections: gens })
}

impl WeylGroup {
    /// Classical order formula for the stated family, used as a cross-check.
    pub fn classical_order(rs: &RootSystem) -> usize {
        let l = rs.rank as u32;
        let fact = |n: u32| -> usize { (1..=n as usize).product::<usize>().max(1) };
        match rs.family {
            crate::rootsys::Family::A => fact(l + 1),
            crate::rootsys::Family::B | crate::rootsys::Family::C => (1usize << l) * fact(l),
            crate::rootsys::Family::D => (1usize << (l - 1)) * fact(l),
            crate::rootsys::Family::G => 12,
        }
    }
}

/// Orbit of a weight (given in coroot-basis coordinates) and its stabilizer
/// size N, with N * |orbit| = |W| verified by direct counting.
pub fn orbit(group: &WeylGroup, weight: &[BigRational]) -> (Vec<Vec<BigRational>>, usize) {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut orb = Vec::new();
    let mut stab = 0usize;
    for el in &group.elements {
        let img = el.matrix.mul_vec(weight);
        if img == weight {
            stab += 1;
        }
        let key: String = img.iter().map(|x| format!("{x};")).collect();
        if seen.insert(key) {
            orb.push(img);
        }
    }
    assert_eq!(stab * orb.len(), group.order, "orbit-stabilizer count");
    (orb, stab)
}

/// Stabilizer subgroup of the chosen weight, with the simple reflections it
/// contains. For a dominant weight these generate it.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    pub elements: Vec<RatMat>,
    pub order: usize,
    pub simple_generators: Vec<usize>,
}

pub fn stabilizer(group: &WeylGroup, wc: &WeightChoice) -> Stabilizer {
    let elements: Vec<RatMat> = group
        .elements
        .iter()
        .filter(|el| el.matrix.mul_vec(&wc.theta) == wc.theta)
        .map(|el| el.matrix.clone())
        .collect();
    let simple_generators: Vec<usize> =
        (0..wc.marks.len()).filter(|&i| wc.marks[i] == 0).collect();
    let order = elements.len();
    Stabilizer { elements, order, simple_generators }
}

/// Closure of a set of matrices; used to cross-check that the parabolic
/// generators produce the whole stabilizer.
pub fn closure_of(mats: &[RatMat], dim: usize) -> Vec<RatMat> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<RatMat> = VecDeque::new();
    let id = RatMat::identity(dim);
    seen.insert(id.key());
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for g in mats {
            let n = g.mul(&m);
            if seen.insert(n.key()) {
                queue.push_back(n);
            }
        }
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, make_weight, Family};

    #[test]
    fn group_orders_match_formulas() {
        for (fam, rank, expect) in [
            (Family::A, 1, 2),
            (Family::A, 2, 6),
            (Family::A, 3, 24),
            (Family::B, 3, 48),
            (Family::C, 3, 48),
            (Family::G, 2, 12),
            (Family::D, 4, 192),
        ] {
            let rs = build_root_system(fam, rank).unwrap();
            let w = generate_group(&rs).unwrap();
            assert_eq!(w.order, expect);
            assert_eq!(w.order, WeylGroup::classical_order(&rs));
        }
    }

    #[test]
    fn elements_preserve_coroot_gram() {
        let rs = build_root_system(Family::B, 3).unwrap();
        let w = generate_group(&rs).unwrap();
        for el in &w.elements {
            let mt = el.matrix.transpose();
            assert_eq!(mt.mul(&rs.coroot_gram).mul(&el.matrix), rs.coroot_gram);
        }
    }

    #[test]
    fn orbit_sizes() {
        let a2 = build_root_system(Family::A, 2).unwrap();
        let w = generate_group(&a2).unwrap();
        let (orb, n) = orbit(&w, &a2.fundamental_weights[0]);
        assert_eq!((orb.len(), n), (3, 2));

        let a1 = build_root_system(Family::A, 1).unwrap();
        let w1 = generate_group(&a1).unwrap();
        let (orb, n) = orbit(&w1, &a1.fundamental_weights[0]);
        assert_eq!((orb.len(), n), (2, 1));
        let neg: Vec<_> = a1.fundamental_weights[0].iter().map(|x| -x.clone()).collect();
        assert!(orb.contains(&neg));

        let b3 = build_root_system(Family::B, 3).unwrap();
        let wb = generate_group(&b3).unwrap();
        let (orb, n) = orbit(&wb, &b3.fundamental_weights[0]);
        assert_eq!((orb.len(), n), (6, 8));
    }

    #[test]
    fn stabilizers_are_parabolic() {
        // (A2, omega2) -> <sigma_1>, order 2
        let a2 = build_root_system(Family::A, 2).unwrap();
        let w = generate_group(&a2).unwrap();
        let wc = make_weight(&a2, &[0, 1]).unwrap();
        let st = stabilizer(&w, &wc);
        assert_eq!(st.order, 2);
        assert_eq!(st.simple_generators, vec![0]);

        // (B3, omega1) -> <sigma_2, sigma_3>, order 8
        let b3 = build_root_system(Family::B, 3).unwrap();
        let wb = generate_group(&b3).unwrap();
        let wc = make_weight(&b3, &[1, 0, 0]).unwrap();
        let st = stabilizer(&wb, &wc);
        assert_eq!(st.order, 8);
        assert_eq!(st.simple_generators, vec![1, 2]);

        // (A3, omega1 + omega3) -> <sigma_2>, order 2
        let a3 = build_root_system(Family::A, 3).unwrap();
        let wa = generate_group(&a3).unwrap();
        let wc = make_weight(&a3, &[1, 0, 1]).unwrap();
        let st = stabilizer(&wa, &wc);
        assert_eq!(st.order, 2);
        assert_eq!(st.simple_generators, vec![1]);
    }

    #[test]
    fn stabilizer_equals_parabolic_closure() {
        for (fam, rank, marks) in [
            (Family::A, 2, vec![0i64, 1]),
            (Family::B, 3, vec![1, 0, 0]),
            (Family::C, 3, vec![0, 0, 1]),
            (Family::A, 3, vec![1, 0, 1]),
            (Family::G, 2, vec![0, 1]),
        ] {
            let rs = build_root_system(fam, rank).unwrap();
            let w = generate_group(&rs).unwrap();
            let wc = make_weight(&rs, &marks).unwrap();
            let st = stabilizer(&w, &wc);
            let gens: Vec<RatMat> = st
                .simple_generators
                .iter()
                .map(|&i| simple_reflection_matrix(&rs, i))
                .collect();
            let closed = closure_of(&gens, rs.rank);
            assert_eq!(closed.len(), st.order);
            let keys: std::collections::BTreeSet<String> =
                st.elements.iter().map(|m| m.key()).collect();
            for m in &closed {
                assert!(keys.contains(&m.key()));
            }
        }
    }

    #[test]
    fn orbit_stabilizer_all_fundamental_weights() {
        for (fam, rank) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::G, 2)] {
            let rs = build_root_system(fam, rank).unwrap();
            let w = generate_group(&rs).unwrap();
            for j in 0..rank {
                let (orb, n) = orbit(&w, &rs.fundamental_weights[j]);
                assert_eq!(n * orb.len(), w.order);
            }
        }
    }
}
