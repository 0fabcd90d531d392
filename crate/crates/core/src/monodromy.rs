//! The monodromy upper bound Stab(omega) x| Z^l and a chart-based
//! triviality probe.
//!
//! The bound is exact; the probe is a heuristic classifier, never a claim:
//! EqualsBound is only set when the inverse chart is polynomial (so the
//! covering is trivial), ProperSubgroupPossible carries a concrete witness
//! (a nontrivial chart symmetry), anything else stays Undetermined.

use crate::arith::{Coeff, RatMat};
use crate::error::Result;
use crate::flatcoords::FlatChart;
use crate::poly::MPoly;
use crate::rootsys::WeightChoice;
use crate::weylgroup::{stabilizer, WeylGroup};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

type P = MPoly<Coeff>;

#[derive(Clone, Debug, PartialEq)]
pub enum Triviality {
    EqualsBound,
    ProperSubgroupPossible(String),
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct MonodromyBound {
    /// Simple reflections generating Stab(omega) (0-based indices).
    pub stab_generators: Vec<usize>,
    pub stab_order: usize,
    pub group_label: String,
    pub bound_statement: String,
    pub triviality: Triviality,
}

pub fn monodromy_bound(
    group: &WeylGroup,
    wc: &WeightChoice,
    chart: &FlatChart,
    theta: &[BigRational],
) -> Result<MonodromyBound> {
    let stab = stabilizer(group, wc);
    let label = group_label(&stab.elements);
    let l = wc.marks.len();
    let bound_statement = format!("Mono <= Stab(omega) x| Z^{l}");
    let triviality = if polynomial_inverse(chart, theta).is_some() {
        Triviality::EqualsBound
    } else if let Some(witness) = chart_symmetry_witness(chart) {
        if stab.order > 1 {
            Triviality::ProperSubgroupPossible(witness)
        } else {
            Triviality::Undetermined
        }
    } else {
        Triviality::Undetermined
    };
    Ok(MonodromyBound {
        stab_generators: stab.simple_generators,
        stab_order: stab.order,
        group_label: label,
        bound_statement,
        triviality,
    })
}

/// Attempts an exact polynomial inverse t^a = Q^a(z): unknown coefficients
/// over z-monomials of weighted degree d_a, matched after substituting
/// z = P(t). Returns the inverse polynomials on success.
pub fn polynomial_inverse(chart: &FlatChart, theta: &[BigRational]) -> Option<Vec<P>> {
    let l = chart.rank();
    let mut out = Vec::with_capacity(l);
    for alpha in 0..l {
        let monos = weighted_monomials(theta, &chart.degrees[alpha]);
        if monos.is_empty() {
            return None;
        }
        // Columns: each monomial prod_r P^r(t)^{e_r} expanded in t.
        let cols: Vec<P> = monos
            .iter()
            .map(|e| {
                let mut acc = P::one(l);
                for (r, &k) in e.iter().enumerate() {
                    for _ in 0..k {
                        acc = acc.mul(&chart.p[r]);
                    }
                }
                acc
            })
            .collect();
        let target = P::var(l, alpha);
        let mut keys: std::collections::BTreeSet<Vec<u32>> = Default::default();
        for c in &cols {
            keys.extend(c.terms.keys().cloned());
        }
        keys.extend(target.terms.keys().cloned());
        let rows: Vec<Vec<Coeff>> = keys
            .iter()
            .map(|k| cols.iter().map(|c| c.terms.get(k).cloned().unwrap_or_else(Coeff::zero)).collect())
            .collect();
        let rhs: Vec<Coeff> = keys
            .iter()
            .map(|k| target.terms.get(k).cloned().unwrap_or_else(Coeff::zero))
            .collect();
        let sol = solve_linear(&rows, &rhs)?;
        let mut q = P::zero(l);
        for (e, c) in monos.iter().zip(sol) {
            q.insert_add(e.clone(), c);
        }
        out.push(q);
    }
    Some(out)
}

/// Any consistent solution of a linear system (underdetermined allowed,
/// free variables set to zero); None if inconsistent.
fn solve_linear(mat: &[Vec<Coeff>], b: &[Coeff]) -> Option<Vec<Coeff>> {
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
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else { continue };
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
    for r in row..rows {
        if !a[r][cols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Coeff::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = a[r][cols].clone();
    }
    Some(sol)
}

fn weighted_monomials(weights: &[BigRational], target: &BigRational) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut exp = vec![0u32; weights.len()];
    fn rec(
        weights: &[BigRational],
        target: &BigRational,
        idx: usize,
        exp: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if target.is_negative() {
            return;
        }
        if idx == weights.len() {
            if target.is_zero() {
                out.push(exp.clone());
            }
            return;
        }
        let max: u32 = (target / &weights[idx]).to_integer().try_into().unwrap_or(0);
        for k in 0..=max {
            exp[idx] = k;
            let rem = target - &weights[idx] * BigRational::from_integer(k.into());
            rec(weights, &rem, idx + 1, exp, out);
        }
        exp[idx] = 0;
    }
    rec(weights, target, 0, &mut exp, &mut out);
    out.sort();
    out
}

/// Searches for a nontrivial linear, degree-preserving, eta-preserving L
/// with P o L = P among signed permutations inside equal-degree blocks.
/// Such an L is a nontrivial deck transformation of the chart covering.
pub fn chart_symmetry_witness(chart: &FlatChart) -> Option<String> {
    let l = chart.rank();
    // Group coordinates by degree.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<BigRational> = Vec::new();
    for a in 0..l {
        match seen.iter().position(|d| *d == chart.degrees[a]) {
            Some(k) => classes[k].push(a),
            None => {
                seen.push(chart.degrees[a].clone());
                classes.push(vec![a]);
            }
        }
    }
    let mut candidates: Vec<Vec<Vec<Coeff>>> = vec![vec![vec![Coeff::zero(); l]; l]];
    for class in &classes {
        let perms = signed_permutations(class.len());
        let mut next = Vec::new();
        for base in &candidates {
            for p in &perms {
                let mut m = base.clone();
                for (i, &a) in class.iter().enumerate() {
                    for (j, &b) in class.iter().enumerate() {
                        m[a][b] = p[i][j].clone();
                    }
                }
                next.push(m);
            }
        }
        candidates = next;
        if candidates.len() > 4096 {
            return None; // cap the search
        }
    }
    let identity: Vec<Vec<Coeff>> = (0..l)
        .map(|i| (0..l).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }).collect())
        .collect();
    for m in &candidates {
        if *m == identity {
            continue;
        }
        if !preserves_eta(m, &chart.eta_normal) {
            continue;
        }
        // P o L = P: substitute t_a -> sum_b L_{ab} t_b.
        let images: Vec<P> = (0..l)
            .map(|a| {
                let mut s = P::zero(l);
                for b in 0..l {
                    if !m[a][b].is_zero() {
                        s = s.add(&P::var(l, b).scale(&m[a][b]));
                    }
                }
                s
            })
            .collect();
        if chart.p.iter().all(|p| p.subst(&images) == *p) {
            let desc: Vec<String> = (0..l)
                .map(|a| {
                    let terms: Vec<String> = (0..l)
                        .filter(|&b| !m[a][b].is_zero())
                        .map(|b| format!("{}*t{}", m[a][b], b + 1))
                        .collect();
                    format!("t{} -> {}", a + 1, terms.join("+"))
                })
                .collect();
            return Some(desc.join(", "));
        }
    }
    None
}

fn signed_permutations(n: usize) -> Vec<Vec<Vec<Coeff>>> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = Vec::new();
    for p in perms(n) {
        for signbits in 0..(1u32 << n) {
            let mut m = vec![vec![Coeff::zero(); n]; n];
            for (i, &pi) in p.iter().enumerate() {
                let s = if signbits & (1 << i) != 0 { -1 } else { 1 };
                m[i][pi] = Coeff::from_int(s);
            }
            out.push(m);
        }
    }
    out
}

fn preserves_eta(m: &[Vec<Coeff>], eta: &[Vec<Coeff>]) -> bool {
    let l = m.len();
    for a in 0..l {
        for b in 0..l {
            let mut s = Coeff::zero();
            for i in 0..l {
                for j in 0..l {
                    if m[a][i].is_zero() || eta[i][j].is_zero() || m[b][j].is_zero() {
                        continue;
                    }
                    s = s.add(&m[a][i].mul(&eta[i][j]).mul(&m[b][j]));
                }
            }
            if s != eta[a][b] {
                return false;
            }
        }
    }
    true
}

/// Recognizes small groups by order and structure, for the report label.
pub fn group_label(elements: &[RatMat]) -> String {
    let n = elements.len();
    if n == 1 {
        return "trivial".to_string();
    }
    let mul = |a: &RatMat, b: &RatMat| a.mul(b);
    let id = RatMat::identity(elements[0].rows);
    let order_of = |m: &RatMat| -> usize {
        let mut acc = m.clone();
        let mut k = 1;
        while acc != id {
            acc = mul(&acc, m);
            k += 1;
        }
        k
    };
    let abelian = elements
        .iter()
        .enumerate()
        .all(|(i, a)| elements[i + 1..].iter().all(|b| mul(a, b) == mul(b, a)));
    let orders: Vec<usize> = elements.iter().map(order_of).collect();
    let max_order = *orders.iter().max().unwrap();
    if abelian {
        if max_order == n {
            return format!("Z{n}");
        }
        // Small abelian groups: report the exponent structure.
        if n == 4 && max_order == 2 {
            return "Z2 x Z2".to_string();
        }
        return format!("abelian order {n}");
    }
    // Dihedral test: an element of order n/2 plus an inverting involution.
    if n % 2 == 0 {
        let half = n / 2;
        if let Some(r_idx) = orders.iter().position(|&o| o == half) {
            let r = &elements[r_idx];
            let rinv = {
                let mut acc = r.clone();
                for _ in 0..half.saturating_sub(2) {
                    acc = mul(&acc, r);
                }
                acc
            };
            let has_inverter = elements
                .iter()
                .zip(&orders)
                .any(|(s, &o)| o == 2 && mul(&mul(s, r), s) == rinv);
            if has_inverter {
                if n == 6 {
                    return "S3".to_string();
                }
                return format!("D{half}");
            }
        }
    }
    format!("order {n}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
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

    #[test]
    fn a2_equals_bound() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let wc = make_weight(&rs, &[0, 1]).unwrap();
        let group = generate_group(&rs).unwrap();
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
        let b = monodromy_bound(&group, &wc, &chart, &wc.theta).unwrap();
        assert_eq!(b.stab_order, 2);
        assert_eq!(b.stab_generators, vec![0]);
        assert_eq!(b.group_label, "Z2");
        assert_eq!(b.triviality, Triviality::EqualsBound);
        assert_eq!(b.bound_statement, "Mono <= Stab(omega) x| Z^2");
    }

    #[test]
    fn g2_proper_subgroup_possible() {
        let rs = build_root_system(Family::G, 2).unwrap();
        let wc = make_weight(&rs, &[0, 1]).unwrap();
        let group = generate_group(&rs).unwrap();
        // Paper-order chart: z1 = -6 t1 t2, z2 = (729 t2^6 + 36 t1^2 t2^2)/4.
        let mut p1 = P::zero(2);
        p1.insert_add(vec![1, 1], Coeff::from_int(-6));
        let mut p2 = P::zero(2);
        p2.insert_add(vec![0, 6], Coeff::from_frac(729, 4));
        p2.insert_add(vec![2, 2], Coeff::from_int(9));
        let chart = FlatChart {
            p: vec![p1, p2],
            degrees: vec![rat(2, 1), rat(1, 1)],
            eta_normal: antidiag(2),
            kappa: rat(3, 1),
        };
        let b = monodromy_bound(&group, &wc, &chart, &wc.theta).unwrap();
        assert_eq!(b.stab_order, 2);
        assert!(matches!(b.triviality, Triviality::ProperSubgroupPossible(_)));
    }

    #[test]
    fn b3_stab_is_dihedral_order_8() {
        let rs = build_root_system(Family::B, 3).unwrap();
        let wc = make_weight(&rs, &[1, 0, 0]).unwrap();
        let group = generate_group(&rs).unwrap();
        let stab = crate::weylgroup::stabilizer(&group, &wc);
        assert_eq!(stab.order, 8);
        assert_eq!(group_label(&stab.elements), "D4");
    }

    #[test]
    fn c3_stab_is_s3() {
        let rs = build_root_system(Family::C, 3).unwrap();
        let wc = make_weight(&rs, &[0, 0, 1]).unwrap();
        let group = generate_group(&rs).unwrap();
        let stab = crate::weylgroup::stabilizer(&group, &wc);
        assert_eq!(stab.order, 6);
        assert_eq!(group_label(&stab.elements), "S3");
    }
}
