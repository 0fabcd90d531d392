//! Small exact polynomial-system solver over Q (optionally one quadratic
//! extension), used by the pencil search. Wu-style elimination: repeated
//! pseudo-reduction in one variable with leading-coefficient branching,
//! rational (and quadratic) root enumeration at the univariate base, and
//! verification of every candidate against the original system.

use crate::arith::Coeff;
use crate::error::{Error, Result};
use crate::poly::{MPoly, UPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// All solutions of the system over Q(sqrt(field_d)) (field_d = 0 for Q),
/// sorted by the canonical coefficient text. Every returned assignment is
/// verified against the input equations. Positive-dimensional solution sets
/// are reported as errors.
pub fn solve_system(eqs: &[UPoly], nvars: usize, field_d: u64) -> Result<Vec<Vec<Coeff>>> {
    let work: Vec<UPoly> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    let active: Vec<usize> = (0..nvars).collect();
    let mut sols = solve_rec(work, &active, nvars, field_d, 0)?;
    let mut verified: Vec<Vec<Coeff>> = Vec::new();
    'cand: for s in sols.drain(..) {
        for e in eqs {
            if !e.eval(&s).is_zero() {
                continue 'cand;
            }
        }
        if !verified.contains(&s) {
            verified.push(s);
        }
    }
    verified.sort_by_key(|s| s.iter().map(|c| c.canonical()).collect::<Vec<_>>());
    Ok(verified)
}

const MAX_DEPTH: usize = 64;

fn solve_rec(
    mut eqs: Vec<UPoly>,
    active: &[usize],
    nvars: usize,
    field_d: u64,
    depth: usize,
) -> Result<Vec<Vec<Coeff>>> {
    if depth > MAX_DEPTH {
        return Err(Error::Other("solver branch depth exceeded".into()));
    }
    eqs.retain(|e| !e.is_zero());
    eqs.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    eqs.dedup();
    if eqs.iter().any(|e| e.is_constant()) {
        return Ok(Vec::new());
    }
    if eqs.is_empty() {
        if active.is_empty() {
            return Ok(vec![vec![Coeff::zero(); nvars]]);
        }
        return Err(Error::Other(format!(
            "underdetermined system: {} free unknowns remain",
            active.len()
        )));
    }
    // Every equation now uses only active variables (invariant), and at
    // least one active variable occurs.
    let var = match active.iter().rev().find(|&&v| eqs.iter().any(|e| e.uses_var(v))) {
        Some(&v) => v,
        None => unreachable!("nonconstant equation must use an active variable"),
    };
    if active.iter().any(|&v| v != var && !eqs.iter().any(|e| e.uses_var(v))) {
        // Some other active variable is never constrained.
        return Err(Error::Other("underdetermined system: unused unknown".into()));
    }
    let rest_active: Vec<usize> = active.iter().copied().filter(|&v| v != var).collect();

    // Linear-solve shortcut: c * x_var + B with a constant nonzero c.
    for idx in 0..eqs.len() {
        if eqs[idx].degree_in(var) == 1 {
            let coeffs = eqs[idx].coeffs_in_var(var);
            if coeffs[1].is_constant() {
                let c = coeffs[1].constant_part().cloned().unwrap();
                let b = coeffs[0].clone();
                let reduced: Vec<UPoly> = eqs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != idx)
                    .map(|(_, e)| substitute_linear(e, var, &b, &c))
                    .collect();
                let sols = if reduced.iter().all(|e| e.is_zero()) && rest_active.is_empty() {
                    vec![vec![Coeff::zero(); nvars]]
                } else {
                    solve_rec(reduced, &rest_active, nvars, field_d, depth + 1)?
                };
                let mut out = Vec::new();
                for mut s in sols {
                    s[var] = b.eval(&s).neg().div(&c);
                    out.push(s);
                }
                return Ok(out);
            }
        }
    }

    // Univariate base case.
    if rest_active.is_empty() {
        let mut g = eqs[0].clone();
        for e in &eqs[1..] {
            g = univar_gcd(&g, e, var);
        }
        if g.is_constant() && !g.is_zero() {
            return Ok(Vec::new());
        }
        let roots = univariate_roots(&g, var, field_d)?;
        return Ok(roots
            .into_iter()
            .map(|r| {
                let mut s = vec![Coeff::zero(); nvars];
                s[var] = r;
                s
            })
            .collect());
    }

    // Wu reduction step in `var`.
    let pivot_idx = eqs
        .iter()
        .enumerate()
        .filter(|(_, e)| e.degree_in(var) > 0)
        .min_by_key(|(_, e)| e.degree_in(var))
        .map(|(i, _)| i)
        .unwrap();
    let f = eqs[pivot_idx].clone();
    let lc = f.coeffs_in_var(var).pop().unwrap();
    let mut changed = false;
    let reduced: Vec<UPoly> = eqs
        .iter()
        .enumerate()
        .map(|(k, g)| {
            if k == pivot_idx || g.degree_in(var) == 0 {
                g.clone()
            } else {
                changed = true;
                pseudo_rem_var(g, &f, var)
            }
        })
        .collect();
    let mut out;
    if changed {
        out = solve_rec(reduced, active, nvars, field_d, depth + 1)?;
    } else {
        // f is the only equation involving var. Solve the rest, then the
        // univariate instance of f at each partial solution.
        let rest: Vec<UPoly> = eqs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != pivot_idx)
            .map(|(_, e)| e.clone())
            .collect();
        let partials = solve_rec(rest, &rest_active, nvars, field_d, depth + 1)?;
        out = Vec::new();
        for s in partials {
            let uni = eval_except(&f, &s, var);
            if uni.is_zero() {
                return Err(Error::Other(
                    "underdetermined system: pivot vanishes at a partial solution".into(),
                ));
            }
            if !uni.uses_var(var) {
                continue;
            }
            for r in univariate_roots(&uni, var, field_d)? {
                let mut full = s.clone();
                full[var] = r;
                out.push(full);
            }
        }
        return Ok(out);
    }
    // Branch on lc(f) = 0: pseudo-reduction can drop such solutions. Under
    // lc = 0 the pivot's leading term vanishes, so replace f by its
    // truncation; this makes the branch strictly smaller.
    if !lc.is_constant() {
        let df = f.degree_in(var);
        let mut shift = vec![0u32; f.nvars];
        shift[var] = df;
        let lead = lc.mul(&MPoly::monomial(f.nvars, &shift, Coeff::one()));
        let truncated = f.sub(&lead);
        let mut branch: Vec<UPoly> = eqs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != pivot_idx)
            .map(|(_, e)| e.clone())
            .collect();
        branch.push(lc);
        branch.push(truncated);
        out.extend(solve_rec(branch, active, nvars, field_d, depth + 1)?);
    }
    Ok(out)
}

/// Substitutes x_var = -B/c into p (c a nonzero constant).
fn substitute_linear(p: &UPoly, var: usize, b: &UPoly, c: &Coeff) -> UPoly {
    let coeffs = p.coeffs_in_var(var);
    let x_val = b.scale(&c.inv().neg());
    let mut acc = MPoly::zero(p.nvars);
    for k in (0..coeffs.len()).rev() {
        acc = acc.mul(&x_val).add(&coeffs[k]);
    }
    acc
}

/// Evaluates all variables except `var` at the given point.
fn eval_except(p: &UPoly, point: &[Coeff], var: usize) -> UPoly {
    let mut out = MPoly::zero(p.nvars);
    for (e, c) in &p.terms {
        let mut val = c.clone();
        for (v, &k) in e.iter().enumerate() {
            if v != var && k > 0 {
                val = val.mul(&point[v].pow(k));
            }
        }
        let mut ne = vec![0u32; p.nvars];
        ne[var] = e[var];
        out.insert_add(ne, val);
    }
    out
}

fn pseudo_rem_var(g: &UPoly, f: &UPoly, var: usize) -> UPoly {
    let df = f.degree_in(var);
    let fc = f.coeffs_in_var(var);
    let lcf = &fc[df as usize];
    let mut r = g.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < df {
            break;
        }
        let rc = r.coeffs_in_var(var);
        let lcr = &rc[dr as usize];
        let mut shift = vec![0u32; g.nvars];
        shift[var] = dr - df;
        let xk = MPoly::monomial(g.nvars, &shift, Coeff::one());
        r = r.mul(lcf).sub(&lcr.mul(&xk).mul(f));
    }
    r
}

fn univar_gcd(a: &UPoly, b: &UPoly, var: usize) -> UPoly {
    let mut f = a.clone();
    let mut g = b.clone();
    while !g.is_zero() {
        if g.degree_in(var) == 0 {
            // Nonzero constant: coprime.
            return MPoly::constant(a.nvars, Coeff::one());
        }
        let r = rem_univar(&f, &g, var);
        f = g;
        g = r;
    }
    f
}

fn rem_univar(f: &UPoly, g: &UPoly, var: usize) -> UPoly {
    let dg = g.degree_in(var);
    let gc = g.coeffs_in_var(var);
    let lg = gc[dg as usize].constant_part().cloned().unwrap();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(var) >= dg && r.degree_in(var) > 0 {
        let dr = r.degree_in(var);
        let rc = r.coeffs_in_var(var);
        let lr = rc[dr as usize].constant_part().cloned().unwrap();
        let mut shift = vec![0u32; f.nvars];
        shift[var] = dr - dg;
        let m = MPoly::monomial(f.nvars, &shift, lr.div(&lg));
        r = r.sub(&m.mul(g));
        if dr == dg {
            break;
        }
    }
    r
}

/// All roots of a univariate polynomial in Q(sqrt(field_d)).
fn univariate_roots(p: &UPoly, var: usize, field_d: u64) -> Result<Vec<Coeff>> {
    let deg = p.degree_in(var) as usize;
    let mut coeffs: Vec<BigRational> = vec![BigRational::zero(); deg + 1];
    for (e, c) in &p.terms {
        let r = c
            .as_rational()
            .ok_or_else(|| Error::Other("irrational coefficients in eliminant".into()))?;
        coeffs[e[var] as usize] = r.clone();
    }
    let mut den = BigInt::one();
    for c in &coeffs {
        den = den.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &den).to_integer()).collect();
    let mut roots: Vec<Coeff> = Vec::new();
    let shift = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if shift > 0 {
        roots.push(Coeff::zero());
        ints.drain(..shift);
    }
    while ints.len() > 1 {
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        if a0.is_zero() {
            ints.remove(0);
            if !roots.contains(&Coeff::zero()) {
                roots.push(Coeff::zero());
            }
            continue;
        }
        let mut found = None;
        'outer: for pd in divisors(&a0.abs())? {
            for qd in divisors(&an.abs())? {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(&pd * BigInt::from(sign), qd.clone());
                    if eval_int_poly(&ints, &cand).is_zero() {
                        found = Some(cand);
                        break 'outer;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                roots.push(Coeff::from_rat(r.clone()));
                ints = deflate(&ints, &r);
            }
            None => break,
        }
    }
    if ints.len() == 3 {
        // Quadratic residual with no rational roots. It contributes roots
        // exactly when the discriminant is field_d times a rational square;
        // otherwise the roots lie outside Q(sqrt(field_d)) and the residual
        // is dropped as rootless in the working (real) field.
        let a = BigRational::from_integer(ints[2].clone());
        let b = BigRational::from_integer(ints[1].clone());
        let c = BigRational::from_integer(ints[0].clone());
        let disc = &b * &b - BigRational::from_integer(4.into()) * &a * &c;
        if field_d != 0 {
            if let Some(s) = sqrt_of_d_square(&disc, field_d) {
                let two_a = &a + &a;
                let base = -&b / &two_a;
                let scale = s / &two_a;
                roots.push(Coeff::quad(base.clone(), scale.clone(), field_d));
                roots.push(Coeff::quad(base, -scale, field_d));
            }
        }
        ints = vec![BigInt::one()];
    } else if ints.len() == 4 {
        // Cubic residual without rational roots is irreducible over Q, so
        // its roots have degree 3 and lie in no quadratic extension.
        ints = vec![BigInt::one()];
    }
    if ints.len() > 1 {
        // A degree >= 3 residual (or >= 4 over an extension) could still
        // hide roots of the working field via quadratic factors; report it
        // instead of guessing.
        let residual: Vec<String> = ints.iter().map(|c| c.to_string()).collect();
        return Err(Error::NonRationalSolution(format!(
            "residual factor with coefficients [{}] (ascending)",
            residual.join(", ")
        )));
    }
    Ok(roots)
}

/// All roots (with multiplicity) of a rational-coefficient polynomial given
/// by ascending coefficients, when it splits over Q; None when a
/// positive-degree factor without rational roots remains.
pub fn rational_roots(coeffs: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.is_empty() {
        return Err(Error::Other("roots of the zero polynomial".into()));
    }
    let mut den = BigInt::one();
    for x in &c {
        den = den.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = c.iter().map(|x| (x * &den).to_integer()).collect();
    let mut roots = Vec::new();
    while ints.len() > 1 {
        if ints[0].is_zero() {
            roots.push(BigRational::zero());
            ints.remove(0);
            continue;
        }
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let mut found = None;
        'outer: for pd in divisors(&a0)? {
            for qd in divisors(&an)? {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(&pd * BigInt::from(sign), qd.clone());
                    if eval_int_poly(&ints, &cand).is_zero() {
                        found = Some(cand);
                        break 'outer;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                roots.push(r.clone());
                ints = deflate(&ints, &r);
            }
            None => return Ok(None),
        }
    }
    roots.sort();
    Ok(Some(roots))
}

/// If disc = d * s^2 with rational s >= 0, returns s.
fn sqrt_of_d_square(disc: &BigRational, d: u64) -> Option<BigRational> {
    if disc.is_negative() {
        return None;
    }
    let q = disc / BigRational::from_integer(BigInt::from(d));
    let (num, den) = (q.numer().clone(), q.denom().clone());
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &sn * &sn == num && &sd * &sd == den {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

fn eval_int_poly(ints: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in ints.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Deflates by the root r (synthetic division over Q).
fn deflate(ints: &[BigInt], r: &BigRational) -> Vec<BigInt> {
    let n = ints.len();
    let mut out: Vec<BigRational> = vec![BigRational::zero(); n - 1];
    let mut carry = BigRational::zero();
    for k in (1..n).rev() {
        let c = BigRational::from_integer(ints[k].clone()) + &carry;
        out[k - 1] = c.clone();
        carry = c * r;
    }
    let mut den = BigInt::one();
    for c in &out {
        den = den.lcm(c.denom());
    }
    out.iter().map(|c| (c * &den).to_integer()).collect()
}

/// Divisors of a positive integer by trial division; the pencil systems
/// keep coefficients small.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    if n.is_zero() {
        return Ok(vec![BigInt::one()]);
    }
    let mut m = n.clone();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            let mut e = 0;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            factors.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
        if p > BigInt::from(2_000_000) {
            break;
        }
    }
    if m > BigInt::one() {
        if m > BigInt::from(4_000_000_000_000u64) {
            return Err(Error::Other(format!("cannot factor {n} for root enumeration")));
        }
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pe);
                pe *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    Ok(divs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn upoly(nvars: usize, terms: &[(i64, &[u32])]) -> UPoly {
        let mut p = MPoly::zero(nvars);
        for (c, e) in terms {
            p.insert_add(e.to_vec(), Coeff::from_int(*c));
        }
        p
    }

    #[test]
    fn linear_system() {
        // x + y - 3 = 0, x - y - 1 = 0 => (2, 1)
        let e1 = upoly(2, &[(1, &[1, 0]), (1, &[0, 1]), (-3, &[0, 0])]);
        let e2 = upoly(2, &[(1, &[1, 0]), (-1, &[0, 1]), (-1, &[0, 0])]);
        let sols = solve_system(&[e1, e2], 2, 0).unwrap();
        assert_eq!(sols, vec![vec![Coeff::from_int(2), Coeff::from_int(1)]]);
    }

    #[test]
    fn univariate_cubic() {
        // (x-1)(x+2)(2x-3) = 2x^3 - x^2 - 7x + 6
        let e = upoly(1, &[(2, &[3]), (-1, &[2]), (-7, &[1]), (6, &[0])]);
        let sols = solve_system(&[e], 1, 0).unwrap();
        let vals: Vec<Coeff> = sols.into_iter().map(|mut s| s.pop().unwrap()).collect();
        assert!(vals.contains(&Coeff::from_int(1)));
        assert!(vals.contains(&Coeff::from_int(-2)));
        assert!(vals.contains(&Coeff::from_rat(rat(3, 2))));
        assert_eq!(vals.len(), 3);
    }

    #[test]
    fn coupled_quadratic() {
        // x^2 - y = 0, y^2 - x = 0 over Q: (0,0) and (1,1).
        let e1 = upoly(2, &[(1, &[2, 0]), (-1, &[0, 1])]);
        let e2 = upoly(2, &[(1, &[0, 2]), (-1, &[1, 0])]);
        let sols = solve_system(&[e1, e2], 2, 0).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.contains(&vec![Coeff::zero(), Coeff::zero()]));
        assert!(sols.contains(&vec![Coeff::from_int(1), Coeff::from_int(1)]));
    }

    #[test]
    fn nonlinear_with_lc_branch() {
        // x*y - 1 = 0, x^2 - 1 = 0: solutions (1,1), (-1,-1).
        let e1 = upoly(2, &[(1, &[1, 1]), (-1, &[0, 0])]);
        let e2 = upoly(2, &[(1, &[2, 0]), (-1, &[0, 0])]);
        let sols = solve_system(&[e1, e2], 2, 0).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.contains(&vec![Coeff::from_int(1), Coeff::from_int(1)]));
        assert!(sols.contains(&vec![Coeff::from_int(-1), Coeff::from_int(-1)]));
    }

    #[test]
    fn quadratic_extension_roots() {
        // x^2 - 3 = 0 over Q(sqrt 3)
        let e = upoly(1, &[(1, &[2]), (-3, &[0])]);
        let sols = solve_system(&[e.clone()], 1, 3).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.contains(&vec![Coeff::sqrt_d(3)]));
        // Over Q (or the wrong extension) the residual is rootless.
        assert!(solve_system(&[e.clone()], 1, 0).unwrap().is_empty());
        assert!(solve_system(&[e], 1, 2).unwrap().is_empty());
    }

    #[test]
    fn inconsistent_and_empty() {
        let e = upoly(1, &[(1, &[0])]);
        assert!(solve_system(&[e], 1, 0).unwrap().is_empty());
        let none: Vec<UPoly> = vec![];
        assert_eq!(solve_system(&none, 0, 0).unwrap(), vec![Vec::<Coeff>::new()]);
    }
}
