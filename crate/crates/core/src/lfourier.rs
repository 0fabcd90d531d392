//! The extended lambda-Fourier ring: exact sparse arithmetic on linear
//! combinations of monomials lambda^q e^{2 pi i a.x}, q a nonnegative
//! rational, a an integer vector, with grading, normalized derivatives,
//! Weyl pullback and lambda = 0 restriction.
//!
//! The strict ring A has integer lambda exponents; rational exponents are
//! permitted so intermediate Weyl pullbacks of non-invariant monomials stay
//! representable.

use crate::arith::Coeff;
use crate::error::{Error, Result};
use crate::poly::Ring;
use crate::rootsys::WeightChoice;
use crate::weylgroup::WeylGroup;
use crate::arith::RatMat;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Term key: lambda exponent and integer frequency vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FKey {
    pub lam: BigRational,
    pub exp: Vec<i32>,
}

impl FKey {
    fn graded_lex(a: &[i32], b: &[i32]) -> std::cmp::Ordering {
        let da: i64 = a.iter().map(|&x| x as i64).sum();
        let db: i64 = b.iter().map(|&x| x as i64).sum();
        da.cmp(&db).then_with(|| a.cmp(b))
    }
}

impl Ord for FKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lam.cmp(&other.lam).then_with(|| FKey::graded_lex(&self.exp, &other.exp))
    }
}

impl PartialOrd for FKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse element of the extended lambda-Fourier ring.
#[derive(Clone, PartialEq)]
pub struct FourierPoly<R: Ring = Coeff> {
    pub nvars: usize,
    pub terms: BTreeMap<FKey, R>,
}

impl<R: Ring> FourierPoly<R> {
    pub fn zero(nvars: usize) -> Self {
        FourierPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(nvars: usize, lam: BigRational, exp: &[i32], c: R) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(FKey { lam, exp: exp.to_vec() }, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert_add(&mut self, key: FKey, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(old) => {
                let s = old.add_ref(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert_add(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert_add(k.clone(), c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), c.neg_ref());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = Self::zero(self.nvars);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let key = FKey {
                    lam: &k1.lam + &k2.lam,
                    exp: k1.exp.iter().zip(&k2.exp).map(|(a, b)| a + b).collect(),
                };
                out.insert_add(key, c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn scale_coeff(&self, c: &R) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            let w = v.mul_ref(c);
            if !w.is_zero() {
                out.terms.insert(k.clone(), w);
            }
        }
        out
    }

    /// D_j = (1/2 pi i) d/dx^j: multiplies each term by its j-th frequency.
    pub fn normalized_derivative(&self, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, c) in &self.terms {
            let aj = k.exp[j];
            if aj == 0 {
                continue;
            }
            let m = if aj > 0 {
                c.mul_u32(aj as u32)
            } else {
                c.mul_u32((-aj) as u32).neg_ref()
            };
            out.insert_add(k.clone(), m);
        }
        out
    }

    /// Keeps exactly the lambda^0 terms.
    pub fn null_part(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, c) in &self.terms {
            if k.lam.is_zero() {
                out.terms.insert(k.clone(), c.clone());
            }
        }
        out
    }

    /// Coefficient of a given integer lambda power, as a lambda-free element.
    pub fn lambda_coefficient(&self, q: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, c) in &self.terms {
            if &k.lam == q {
                out.terms.insert(FKey { lam: BigRational::zero(), exp: k.exp.clone() }, c.clone());
            }
        }
        out
    }

    /// Membership in the strict ring A: every lambda exponent a nonnegative
    /// integer.
    pub fn is_strict(&self) -> bool {
        self.terms.keys().all(|k| k.lam.denom().is_one() && !k.lam.is_negative())
    }

    /// Smallest positive integer N with N*lam integral for all terms.
    pub fn resolution(&self) -> num_bigint::BigInt {
        let mut r = num_bigint::BigInt::one();
        for k in self.terms.keys() {
            r = r.lcm(k.lam.denom());
        }
        r
    }

    pub fn degree_of_key(key: &FKey, wc: &WeightChoice) -> BigRational {
        let mut d = &key.lam * &wc.kappa;
        for (a, th) in key.exp.iter().zip(&wc.theta) {
            d += th * BigRational::from_integer((*a).into());
        }
        d
    }

    /// The common degree of all terms; errors on inhomogeneous input with
    /// both witnesses.
    pub fn grade(&self, wc: &WeightChoice) -> Result<BigRational> {
        let mut deg: Option<BigRational> = None;
        for k in self.terms.keys() {
            let d = Self::degree_of_key(k, wc);
            match &deg {
                None => deg = Some(d),
                Some(d0) if *d0 == d => {}
                Some(d0) => {
                    return Err(Error::Inhomogeneous(d0.to_string(), d.to_string()));
                }
            }
        }
        deg.ok_or_else(|| Error::Other("grade of zero element".into()))
    }

    /// Pullback f -> f o sigma for sigma given by its coroot-basis matrix.
    /// May produce negative lambda exponents for non-invariant inputs; the
    /// caller decides whether that is an error.
    pub fn weyl_pullback_raw(&self, m: &RatMat, wc: &WeightChoice) -> Self {
        // x~ = M x + c*(sigma(omega)-omega); so e^{2 pi i a.x~} picks up
        // exponent M^T a and a c-frequency a.(M theta - theta).
        let l = self.nvars;
        let mtheta = m.mul_vec(&wc.theta);
        let w: Vec<BigRational> = mtheta.iter().zip(&wc.theta).map(|(a, b)| a - b).collect();
        let mut out = Self::zero(l);
        for (k, c) in &self.terms {
            let mut new_exp = vec![0i32; l];
            for p in 0..l {
                let mut s = BigRational::zero();
                for r in 0..l {
                    if k.exp[r] != 0 {
                        s += m.at(r, p) * BigRational::from_integer(k.exp[r].into());
                    }
                }
                assert!(s.denom().is_one(), "Weyl image has non-integer frequency");
                new_exp[p] = i64::try_from(s.numer().clone()).unwrap() as i32;
            }
            let mut shift = BigRational::zero();
            for r in 0..l {
                if k.exp[r] != 0 {
                    shift += &w[r] * BigRational::from_integer(k.exp[r].into());
                }
            }
            // c-frequency shift (mu, sigma(omega)-omega) becomes a lambda
            // increment of -shift/kappa.
            let lam = &k.lam - shift / &wc.kappa;
            out.insert_add(FKey { lam, exp: new_exp }, c.clone());
        }
        out
    }

    /// Checked pullback: negative lambda exponents are reported.
    pub fn weyl_pullback(&self, m: &RatMat, wc: &WeightChoice) -> Result<Self> {
        let out = self.weyl_pullback_raw(m, wc);
        if let Some(k) = out.terms.keys().find(|k| k.lam.is_negative()) {
            return Err(Error::NegativeLambdaExponent(k.lam.to_string()));
        }
        Ok(out)
    }

    /// True iff f is fixed by every simple reflection (these generate W;
    /// translation invariance is automatic for integer frequency vectors).
    pub fn is_invariant(&self, group: &WeylGroup, wc: &WeightChoice) -> bool {
        group
            .simple_reflections
            .iter()
            .all(|m| self.weyl_pullback_raw(m, wc) == *self)
    }

    /// First simple reflection that moves f, if any.
    pub fn invariance_witness(&self, group: &WeylGroup, wc: &WeightChoice) -> Option<usize> {
        group
            .simple_reflections
            .iter()
            .position(|m| self.weyl_pullback_raw(m, wc) != *self)
    }
}

impl FourierPoly<Coeff> {
    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, BigRational::zero(), &vec![0; nvars], Coeff::one())
    }

    /// e^{2 pi i a.x}
    pub fn exp_term(nvars: usize, exp: &[i32]) -> Self {
        Self::monomial(nvars, BigRational::zero(), exp, Coeff::one())
    }

    /// lambda^q
    pub fn lambda_pow(nvars: usize, q: BigRational) -> Self {
        Self::monomial(nvars, q, &vec![0; nvars], Coeff::one())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.scale_coeff(c)
    }

    pub fn field_d(&self) -> u64 {
        self.terms.values().map(|c| c.d).find(|&d| d != 0).unwrap_or(0)
    }

    fn check_compat(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::Other("rank mismatch in ring operation".into()));
        }
        let (d1, d2) = (self.field_d(), o.field_d());
        if d1 != 0 && d2 != 0 && d1 != d2 {
            return Err(Error::FieldMismatch(d1, d2));
        }
        Ok(())
    }

    /// Validated ring operations, for callers mixing unknown inputs.
    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check_compat(o)?;
        Ok(self.add(o))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check_compat(o)?;
        Ok(self.mul(o))
    }

    /// Maps coefficients into constants of a polynomial ring in `n` unknowns.
    pub fn promote(&self, n: usize) -> FourierPoly<crate::poly::UPoly> {
        let mut out = FourierPoly::zero(self.nvars);
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), crate::poly::MPoly::constant(n, c.clone()));
        }
        out
    }
}

impl<R: Ring> fmt::Debug for FourierPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{:?} * lam^{} * X{:?}", c, k.lam, k.exp))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rint};
    use crate::rootsys::{build_root_system, make_weight, Family};
    use crate::weylgroup::generate_group;

    fn a1_setup() -> (crate::rootsys::RootSystem, WeightChoice, WeylGroup) {
        let rs = build_root_system(Family::A, 1).unwrap();
        let wc = make_weight(&rs, &[1]).unwrap();
        let w = generate_group(&rs).unwrap();
        (rs, wc, w)
    }

    /// y1 for A1: e^{2 pi i x} + lambda e^{-2 pi i x}.
    fn a1_y1() -> FourierPoly {
        FourierPoly::exp_term(1, &[1])
            .add(&FourierPoly::monomial(1, rint(1), &[-1], Coeff::one()))
    }

    #[test]
    fn ring_op_examples() {
        // (e^{2 pi i x}) * (lambda e^{-2 pi i x}) = lambda
        let e = FourierPoly::exp_term(1, &[1]);
        let le = FourierPoly::monomial(1, rint(1), &[-1], Coeff::one());
        assert_eq!(e.mul(&le), FourierPoly::lambda_pow(1, rint(1)));
        // (y1 of A1)^2 = e^{4 pi i x} + 2 lambda + lambda^2 e^{-4 pi i x}
        let y = a1_y1();
        let mut expect = FourierPoly::exp_term(1, &[2]);
        expect = expect.add(&FourierPoly::lambda_pow(1, rint(1)).scale(&Coeff::from_int(2)));
        expect = expect.add(&FourierPoly::monomial(1, rint(2), &[-2], Coeff::one()));
        assert_eq!(y.pow(2), expect);
        // f + (-f) = 0
        assert!(y.add(&y.neg()).is_zero());
    }

    #[test]
    fn grading() {
        let (_, wc, _) = a1_setup();
        // deg lambda = kappa = 1
        assert_eq!(FourierPoly::lambda_pow(1, rint(1)).grade(&wc).unwrap(), rint(1));
        let y = a1_y1();
        assert_eq!(y.grade(&wc).unwrap(), rat(1, 2));

        // A2 with omega2: deg y1 = 1/3; e^{2 pi i x1} + lambda inhomogeneous
        let rs = build_root_system(Family::A, 2).unwrap();
        let wc2 = make_weight(&rs, &[0, 1]).unwrap();
        let f = FourierPoly::exp_term(2, &[1, 0]).add(&FourierPoly::lambda_pow(2, rint(1)));
        match f.grade(&wc2) {
            Err(Error::Inhomogeneous(a, b)) => {
                assert_eq!((a.as_str(), b.as_str()), ("1/3", "1"));
            }
            other => panic!("expected inhomogeneous, got {other:?}"),
        }
    }

    #[test]
    fn normalized_derivative_examples() {
        let y = a1_y1();
        // D(e + lambda e^-) = e - lambda e^-
        let d = y.normalized_derivative(0);
        let expect = FourierPoly::exp_term(1, &[1])
            .sub(&FourierPoly::monomial(1, rint(1), &[-1], Coeff::one()));
        assert_eq!(d, expect);
        // D(lambda) = 0
        assert!(FourierPoly::lambda_pow(1, rint(1)).normalized_derivative(0).is_zero());
        // -D(y1) * 1/2 * D(y1) = -y1^2/2 + 2 lambda  (the A1 metric entry)
        let g = d.mul(&d).scale(&Coeff::from_frac(-1, 2));
        let expect = a1_y1()
            .pow(2)
            .scale(&Coeff::from_frac(-1, 2))
            .add(&FourierPoly::lambda_pow(1, rint(1)).scale(&Coeff::from_int(2)));
        assert_eq!(g, expect);
    }

    #[test]
    fn pullback_and_invariance() {
        let (_, wc, w) = a1_setup();
        // sigma_1: e^{2 pi i x} -> lambda e^{-2 pi i x}
        let e = FourierPoly::exp_term(1, &[1]);
        let img = e.weyl_pullback(&w.simple_reflections[0], &wc).unwrap();
        assert_eq!(img, FourierPoly::monomial(1, rint(1), &[-1], Coeff::one()));
        // identity fixes everything
        let y = a1_y1();
        assert_eq!(y.weyl_pullback_raw(&crate::arith::RatMat::identity(1), &wc), y);
        assert!(y.is_invariant(&w, &wc));
        // lambda is invariant
        assert!(FourierPoly::lambda_pow(1, rint(1)).is_invariant(&w, &wc));

        // e^{2 pi i x1} alone is not invariant in A2
        let rs = build_root_system(Family::A, 2).unwrap();
        let wc2 = make_weight(&rs, &[0, 1]).unwrap();
        let w2 = generate_group(&rs).unwrap();
        assert!(!FourierPoly::exp_term(2, &[1, 0]).is_invariant(&w2, &wc2));
    }

    #[test]
    fn null_part_is_projection() {
        let y = a1_y1();
        let n = y.null_part();
        assert_eq!(n, FourierPoly::exp_term(1, &[1]));
        assert_eq!(n.null_part(), n);
        // lambda * f has empty null part for f in A
        let lf = FourierPoly::lambda_pow(1, rint(1)).mul(&y);
        assert!(lf.null_part().is_zero());
    }

    #[test]
    fn field_mismatch_is_reported() {
        let f = FourierPoly::exp_term(1, &[1]).scale(&Coeff::sqrt_d(2));
        let g = FourierPoly::exp_term(1, &[1]).scale(&Coeff::sqrt_d(3));
        assert!(matches!(f.checked_mul(&g), Err(Error::FieldMismatch(2, 3))));
        assert!(f.checked_add(&f).is_ok());
    }
}
