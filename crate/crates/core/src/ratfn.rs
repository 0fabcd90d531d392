//! Rational functions num/den over `MPoly<Coeff>` with unique normal forms.
//!
//! Normal form: gcd(num, den) = 1 and the graded-lex leading coefficient of
//! den is 1. Arithmetic keeps results normalized, so equality is structural.

use crate::arith::Coeff;
use crate::poly::MPoly;

type P = MPoly<Coeff>;

/// Multivariate gcd by primitive polynomial remainder sequences.
pub fn poly_gcd(f: &P, g: &P) -> P {
    assert_eq!(f.nvars, g.nvars);
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    // Main variable: the highest-index variable occurring in either.
    let var = (0..f.nvars).rev().find(|&v| f.uses_var(v) || g.uses_var(v));
    let Some(var) = var else {
        return MPoly::one(f.nvars); // both nonzero constants
    };
    if !f.uses_var(var) {
        // var occurs only in g: gcd divides f, so it is free of var.
        return gcd_with_content(f, &content_in_var(g, var));
    }
    if !g.uses_var(var) {
        return gcd_with_content(g, &content_in_var(f, var));
    }
    let cf = content_in_var(f, var);
    let cg = content_in_var(g, var);
    let c = poly_gcd(&cf, &cg);
    let mut a = f.div_exact(&cf).unwrap();
    let mut b = g.div_exact(&cg).unwrap();
    if a.degree_in(var) < b.degree_in(var) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            break;
        }
        let rp = r.div_exact(&content_in_var(&r, var)).unwrap();
        a = b;
        b = rp;
        if !b.uses_var(var) {
            // Coprime in the main variable.
            return c.monic();
        }
        if a.degree_in(var) < b.degree_in(var) {
            std::mem::swap(&mut a, &mut b);
        }
    }
    c.mul(&b).monic()
}

/// gcd(f, c) where c is free of f's main variable: recurse on contents.
fn gcd_with_content(f: &P, c: &P) -> P {
    let var = (0..f.nvars).rev().find(|&v| f.uses_var(v));
    match var {
        None => {
            if f.is_zero() {
                c.monic()
            } else {
                MPoly::one(f.nvars)
            }
        }
        Some(v) => poly_gcd(&content_in_var(f, v), c),
    }
}

/// gcd of the coefficients of f viewed as a polynomial in `var`.
fn content_in_var(f: &P, var: usize) -> P {
    let coeffs = f.coeffs_in_var(var);
    let mut c = MPoly::zero(f.nvars);
    for co in coeffs {
        if co.is_zero() {
            continue;
        }
        c = if c.is_zero() { co.monic() } else { poly_gcd(&c, &co) };
        if c.is_constant() {
            return MPoly::one(f.nvars);
        }
    }
    c
}

/// Pseudo-remainder of a by b in `var`: lc(b)^(da-db+1) * a mod b.
fn pseudo_rem(a: &P, b: &P, var: usize) -> P {
    let db = b.degree_in(var);
    assert!(db > 0);
    let bc = b.coeffs_in_var(var);
    let lcb = &bc[db as usize];
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < db {
            break;
        }
        let rc = r.coeffs_in_var(var);
        let lcr = &rc[dr as usize];
        // r <- lcb * r - lcr * x^(dr-db) * b
        let mut shift = vec![0u32; a.nvars];
        shift[var] = dr - db;
        let xk = MPoly::monomial(a.nvars, &shift, Coeff::one());
        r = r.mul(lcb).sub(&lcr.mul(&xk).mul(b));
    }
    r
}

/// Rational function in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFn {
    pub num: P,
    pub den: P,
}

impl RationalFn {
    pub fn new(num: P, den: P) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RationalFn { num, den };
        r.normalize();
        r
    }

    pub fn from_poly(p: P) -> Self {
        let n = p.nvars;
        RationalFn { num: p, den: MPoly::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFn { num: MPoly::zero(nvars), den: MPoly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        RationalFn { num: MPoly::one(nvars), den: MPoly::one(nvars) }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one(self.num.nvars);
            return;
        }
        if !self.den.is_constant() {
            let g = poly_gcd(&self.num, &self.den);
            if !g.is_constant() {
                self.num = self.num.div_exact(&g).unwrap();
                self.den = self.den.div_exact(&g).unwrap();
            }
        }
        let lc = self.den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inv();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RationalFn::new(self.num.add(&o.num), self.den.clone());
        }
        RationalFn::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RationalFn::new(self.num.sub(&o.num), self.den.clone());
        }
        RationalFn::new(
            self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RationalFn::zero(self.nvars());
        }
        RationalFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero rational function");
        RationalFn::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero());
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return RationalFn::zero(self.nvars());
        }
        RationalFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let n = self.num.derivative(var).mul(&self.den).sub(&self.num.mul(&self.den.derivative(var)));
        RationalFn::new(n, self.den.mul(&self.den))
    }

    /// Substitutes polynomials for the variables.
    pub fn subst(&self, images: &[P]) -> Self {
        RationalFn::new(self.num.subst(images), self.den.subst(images))
    }

    pub fn extend_vars(&self, n: usize) -> Self {
        RationalFn { num: self.num.extend_vars(n), den: self.den.extend_vars(n) }
    }

    /// Exact evaluation; None if the denominator vanishes.
    pub fn eval(&self, point: &[Coeff]) -> Option<Coeff> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point).div(&d))
    }

    pub fn as_poly(&self) -> Option<P> {
        if !self.den.is_constant() {
            return None;
        }
        let c = self.den.leading_coeff();
        Some(self.num.scale(&c.inv()))
    }
}

impl std::fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_polynomial() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_of(s: &[(i64, &[u32])], nvars: usize) -> P {
        let mut p = MPoly::zero(nvars);
        for (c, e) in s {
            p.insert_add(e.to_vec(), Coeff::from_int(*c));
        }
        p
    }

    #[test]
    fn gcd_of_products() {
        // gcd((x+y)^2 (x-y), (x+y)(x-y)^2) = (x+y)(x-y) up to scale
        let a = p_of(&[(1, &[1, 0]), (1, &[0, 1])], 2);
        let b = p_of(&[(1, &[1, 0]), (-1, &[0, 1])], 2);
        let f = a.mul(&a).mul(&b);
        let g = a.mul(&b).mul(&b);
        let d = poly_gcd(&f, &g);
        let expect = a.mul(&b).monic();
        assert_eq!(d, expect);
    }

    #[test]
    fn gcd_coprime() {
        let a = p_of(&[(1, &[1, 0]), (1, &[0, 1])], 2);
        let b = p_of(&[(1, &[1, 0]), (2, &[0, 1])], 2);
        assert!(poly_gcd(&a, &b).is_constant());
    }

    #[test]
    fn normal_form_cancellation() {
        // (x^2-y^2)/(x-y) == x+y
        let num = p_of(&[(1, &[2, 0]), (-1, &[0, 2])], 2);
        let den = p_of(&[(1, &[1, 0]), (-1, &[0, 1])], 2);
        let r = RationalFn::new(num, den);
        assert!(r.is_polynomial());
        assert_eq!(r.num, p_of(&[(1, &[1, 0]), (1, &[0, 1])], 2));
    }

    #[test]
    fn arithmetic_identities() {
        let x = RationalFn::from_poly(p_of(&[(1, &[1, 0])], 2));
        let y = RationalFn::from_poly(p_of(&[(1, &[0, 1])], 2));
        let f = x.div(&y); // x/y
        let g = y.div(&x); // y/x
        let s = f.mul(&g); // 1
        assert_eq!(s, RationalFn::one(2));
        let h = f.add(&g).sub(&f).sub(&g);
        assert!(h.is_zero());
        // d/dx (x/y) = 1/y
        assert_eq!(f.derivative(0), y.inv());
    }
}
