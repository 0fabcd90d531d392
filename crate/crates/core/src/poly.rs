//! Sparse multivariate polynomials over an exact coefficient ring.
//!
//! The engine needs two instantiations: `MPoly<Coeff>` for all concrete
//! symbolic data (invariants rewritten in generators, metrics, charts), and
//! coefficients that are themselves polynomials in the undetermined ansatz
//! constants of the pencil solver (`FourierPoly<UPoly>`).

use crate::arith::Coeff;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// Minimal exact commutative ring interface. No zero/one constructors:
/// coefficient rings may carry an arity (number of unknowns), so neutral
/// elements are built by whoever knows the context.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplication by a small nonnegative integer (derivative weights).
    fn mul_u32(&self, k: u32) -> Self {
        let mut acc = self.sub_ref(self);
        for _ in 0..k {
            acc = acc.add_ref(self);
        }
        acc
    }
}

impl Ring for Coeff {
    fn is_zero(&self) -> bool {
        Coeff::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn mul_u32(&self, k: u32) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }
}

/// Sparse polynomial; key = exponent vector of fixed length `nvars`.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly<R: Ring> {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, R>,
}

/// Polynomial in the pencil solver's unknowns, over Q(sqrt d).
pub type UPoly = MPoly<Coeff>;

impl<R: Ring> MPoly<R> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn monomial(nvars: usize, exp: &[u32], c: R) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exp.to_vec(), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_part(&self) -> Option<&R> {
        self.terms.get(&vec![0; self.nvars])
    }

    pub fn insert_add(&mut self, exp: Vec<u32>, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(old) => {
                let s = old.add_ref(&c);
                if s.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert_add(e.clone(), c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg_ref());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn scale_coeff(&self, c: &R) -> Self {
        let mut out = MPoly::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            let w = v.mul_ref(c);
            if !w.is_zero() {
                out.terms.insert(e.clone(), w);
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.insert_add(e2, c.mul_u32(e[var]));
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// Coefficient polynomials by the power of one variable, constant in it.
    pub fn coeffs_in_var(&self, var: usize) -> Vec<MPoly<R>> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].insert_add(e2, c.clone());
        }
        out
    }

    /// Appends extra variables (exponent 0 everywhere).
    pub fn extend_vars(&self, new_nvars: usize) -> MPoly<R> {
        assert!(new_nvars >= self.nvars);
        let mut out = MPoly::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(new_nvars, 0);
            out.terms.insert(e2, c.clone());
        }
        out
    }

    /// Drops trailing variables, which must not occur.
    pub fn shrink_vars(&self, new_nvars: usize) -> MPoly<R> {
        assert!(new_nvars <= self.nvars);
        let mut out = MPoly::zero(new_nvars);
        for (e, c) in &self.terms {
            assert!(e[new_nvars..].iter().all(|&x| x == 0), "variable in use");
            out.terms.insert(e[..new_nvars].to_vec(), c.clone());
        }
        out
    }

    /// Weighted degree of each monomial must agree; returns it, or the two
    /// differing degrees.
    pub fn weighted_degree(
        &self,
        weights: &[BigRational],
    ) -> std::result::Result<Option<BigRational>, (BigRational, BigRational)> {
        let mut deg: Option<BigRational> = None;
        for e in self.terms.keys() {
            let d: BigRational = e
                .iter()
                .zip(weights)
                .map(|(&k, w)| w * BigRational::from_integer(k.into()))
                .sum();
            match &deg {
                None => deg = Some(d),
                Some(d0) if *d0 == d => {}
                Some(d0) => return Err((d0.clone(), d)),
            }
        }
        Ok(deg)
    }

    /// Canonical term enumeration: graded-lex ascending.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &R)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(e1, _), (e2, _)| {
            let d1: u32 = e1.iter().sum();
            let d2: u32 = e2.iter().sum();
            d1.cmp(&d2).then_with(|| e1.cmp(e2))
        });
        v
    }
}

impl MPoly<Coeff> {
    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coeff::one())
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Self::monomial(nvars, &e, Coeff::one())
    }

    pub fn from_rat_const(nvars: usize, r: BigRational) -> Self {
        Self::constant(nvars, Coeff::from_rat(r))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.scale_coeff(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MPoly::one(self.nvars);
        let mut k = 0;
        while k < e {
            acc = acc.mul(self);
            k += 1;
        }
        acc
    }

    /// Substitutes the given polynomials for the variables.
    pub fn subst(&self, images: &[MPoly<Coeff>]) -> MPoly<Coeff> {
        assert_eq!(images.len(), self.nvars);
        let out_vars = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = MPoly::zero(out_vars);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(out_vars, c.clone());
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[v].pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Coeff::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&point[v].pow(k));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn lead_key(e: &[u32]) -> (u32, Vec<u32>) {
        (e.iter().sum(), e.to_vec())
    }

    /// Leading term under graded-lex (max).
    pub fn leading_term(&self) -> Option<(Vec<u32>, Coeff)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| Self::lead_key(e))
            .map(|(e, c)| (e.clone(), c.clone()))
    }

    pub fn leading_coeff(&self) -> Coeff {
        self.leading_term().map(|(_, c)| c).unwrap_or_else(Coeff::zero)
    }

    /// Scales so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().inv())
    }

    /// Exact division; None when `self` is not a multiple of `g`.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        assert_eq!(self.nvars, g.nvars);
        assert!(!g.is_zero());
        let (ge, gc) = g.leading_term().unwrap();
        let gcinv = gc.inv();
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while !rem.is_zero() {
            let (re, rc) = rem.leading_term().unwrap();
            if re.iter().zip(&ge).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(&ge).map(|(a, b)| a - b).collect();
            let qm = MPoly::monomial(self.nvars, &qe, rc.mul(&gcinv));
            rem = rem.sub(&qm.mul(g));
            quot = quot.add(&qm);
        }
        Some(quot)
    }

    /// The field extension discriminant used by any coefficient (0 if all
    /// rational).
    pub fn field_d(&self) -> u64 {
        self.terms.values().map(|c| c.d).find(|&d| d != 0).unwrap_or(0)
    }
}

impl<R: Ring> Ring for MPoly<R> {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
}

impl<R: Ring> fmt::Debug for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .iter()
            .map(|(e, c)| format!("{:?}*x^{:?}", c, e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p_of(s: &[(i64, &[u32])], nvars: usize) -> MPoly<Coeff> {
        let mut p = MPoly::zero(nvars);
        for (c, e) in s {
            p.insert_add(e.to_vec(), Coeff::from_int(*c));
        }
        p
    }

    #[test]
    fn mul_and_derivative() {
        // (x+y)^2 = x^2 + 2xy + y^2
        let xy = p_of(&[(1, &[1, 0]), (1, &[0, 1])], 2);
        let sq = xy.mul(&xy);
        assert_eq!(sq, p_of(&[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2])], 2));
        assert_eq!(sq.derivative(0), p_of(&[(2, &[1, 0]), (2, &[0, 1])], 2));
    }

    #[test]
    fn exact_division() {
        let xy = p_of(&[(1, &[1, 0]), (1, &[0, 1])], 2);
        let d = p_of(&[(1, &[1, 0]), (-1, &[0, 1])], 2);
        let prod = xy.mul(&d); // x^2 - y^2
        assert_eq!(prod.div_exact(&xy).unwrap(), d);
        assert!(prod.div_exact(&p_of(&[(1, &[1, 0]), (2, &[0, 1])], 2)).is_none());
    }

    #[test]
    fn weighted_degree_check() {
        let p = p_of(&[(1, &[3, 0]), (2, &[1, 1])], 2);
        let w = vec![rat(1, 3), rat(2, 3)];
        assert_eq!(p.weighted_degree(&w).unwrap(), Some(rat(1, 1)));
    }
}
