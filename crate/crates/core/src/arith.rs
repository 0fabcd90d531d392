//! Exact scalar arithmetic: rationals, real quadratic extensions Q(sqrt(d)),
//! and dense rational matrices.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// gcd on nonnegative rationals: gcd(a/b, c/d) = gcd(ad, cb)/(bd).
/// Zero is absorbing: gcd(0, q) = q.
pub fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    BigRational::new(num, a.denom() * b.denom())
}

/// An element a + b*sqrt(d) of Q or of a real quadratic field Q(sqrt(d)).
///
/// Normal form: d == 0 exactly when b == 0, so plain rationals always
/// collapse to the same representation regardless of how they were produced.
/// Mixing two distinct nonzero d values is a caller bug (the engine fixes a
/// single extension per case) and panics; the public ring operations in
/// `lfourier` check compatibility first and report `FieldMismatch`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { a: BigRational::zero(), b: BigRational::zero(), d: 0 }
    }

    pub fn one() -> Self {
        Coeff { a: BigRational::one(), b: BigRational::zero(), d: 0 }
    }

    pub fn from_rat(a: BigRational) -> Self {
        Coeff { a, b: BigRational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rint(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rat(rat(n, d))
    }

    /// a + b*sqrt(d), normalized.
    pub fn quad(a: BigRational, b: BigRational, d: u64) -> Self {
        let mut c = Coeff { a, b, d };
        c.normalize();
        c
    }

    pub fn sqrt_d(d: u64) -> Self {
        Coeff::quad(BigRational::zero(), BigRational::one(), d)
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.d = 0;
        } else if self.d == 0 {
            panic!("nonzero sqrt part with d = 0");
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn join_d(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("field mismatch: sqrt({d1}) vs sqrt({d2})"),
        }
    }

    /// Checked field compatibility, for API-boundary validation.
    pub fn compatible(&self, other: &Self) -> Result<()> {
        match (self.d, other.d) {
            (0, _) | (_, 0) => Ok(()),
            (d1, d2) if d1 == d2 => Ok(()),
            (d1, d2) => Err(Error::FieldMismatch(d1, d2)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let d = self.join_d(o);
        Coeff::quad(&self.a + &o.a, &self.b + &o.b, d)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let d = self.join_d(o);
        Coeff::quad(&self.a - &o.a, &self.b - &o.b, d)
    }

    pub fn neg(&self) -> Self {
        Coeff { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.join_d(o);
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &o.a + &self.b * &o.b * &dd;
        let b = &self.a * &o.b + &self.b * &o.a;
        Coeff::quad(a, b, d)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Coeff::quad(&self.a * r, &self.b * r, self.d)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.b.is_zero() {
            return Coeff::from_rat(self.a.recip());
        }
        let dd = BigRational::from_integer(BigInt::from(self.d));
        // (a - b sqrt d) / (a^2 - b^2 d); the norm is nonzero since d is not
        // a perfect square.
        let norm = &self.a * &self.a - &self.b * &self.b * &dd;
        assert!(!norm.is_zero(), "zero norm in Q(sqrt({}))", self.d);
        Coeff::quad(&self.a / &norm, -(&self.b / &norm), self.d)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Coeff::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Numeric value as f64 (for the periods module's residual reports).
    pub fn to_f64(&self) -> f64 {
        let fa = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return fa;
        }
        fa + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Canonical text form: "3/5", "-2", "1+2*sqrt(3)", "-1/2*sqrt(2)".
    pub fn canonical(&self) -> String {
        fn rat_str(r: &BigRational) -> String {
            if r.denom().is_one() {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        if self.b.is_zero() {
            return rat_str(&self.a);
        }
        let root = if self.b.abs().is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", rat_str(&self.b.abs()), self.d)
        };
        let signed_root = if self.b.is_negative() { format!("-{root}") } else { root };
        if self.a.is_zero() {
            signed_root
        } else if self.b.is_negative() {
            format!("{}{}", rat_str(&self.a), signed_root)
        } else {
            format!("{}+{}", rat_str(&self.a), signed_root)
        }
    }

    /// Parses the canonical text form.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Other(format!("cannot parse coefficient {s:?}"));
        // Split into at most two signed parts at a '+' or '-' that is not
        // the leading sign.
        let mut parts: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                parts.push(cur.clone());
                cur.clear();
                if ch == '-' {
                    cur.push('-');
                }
            } else {
                cur.push(ch);
            }
        }
        parts.push(cur);
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        let mut d: u64 = 0;
        for p in &parts {
            let p = p.trim();
            if p.is_empty() {
                continue;
            }
            if let Some(idx) = p.find("sqrt(") {
                let close = p.rfind(')').ok_or_else(bad)?;
                let dv: u64 = p[idx + 5..close].parse().map_err(|_| bad())?;
                if d != 0 && d != dv {
                    return Err(bad());
                }
                d = dv;
                let coef = p[..idx].trim_end_matches('*').trim();
                let bv = match coef {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    c => BigRational::from_str(c).map_err(|_| bad())?,
                };
                b = &b + bv;
            } else {
                a = &a + BigRational::from_str(p).map_err(|_| bad())?;
            }
        }
        Ok(Coeff::quad(a, b, d))
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

/// Dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigRational>>,
}

impl RatMat {
    pub fn new(data: Vec<Vec<BigRational>>) -> Self {
        let rows = data.len();
        let cols = if rows == 0 { 0 } else { data[0].len() };
        for r in &data {
            assert_eq!(r.len(), cols, "ragged matrix");
        }
        RatMat { rows, cols, data }
    }

    pub fn from_i64(data: &[&[i64]]) -> Self {
        RatMat::new(data.iter().map(|r| r.iter().map(|&x| rint(x)).collect()).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMat::new(vec![vec![BigRational::zero(); cols]; rows])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zero(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i][j]
    }

    pub fn transpose(&self) -> Self {
        let mut out = RatMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn mul(&self, o: &RatMat) -> RatMat {
        assert_eq!(self.cols, o.rows);
        let mut out = RatMat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut s = BigRational::zero();
                for k in 0..self.cols {
                    if !self.data[i][k].is_zero() && !o.data[k][j].is_zero() {
                        s += &self.data[i][k] * &o.data[k][j];
                    }
                }
                out.data[i][j] = s;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigRational::zero();
                for k in 0..self.cols {
                    if !self.data[i][k].is_zero() && !v[k].is_zero() {
                        s += &self.data[i][k] * &v[k];
                    }
                }
                s
            })
            .collect()
    }

    /// Gauss-Jordan inverse. Panics if not square; returns None when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = RatMat::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &a[col][j] * &f;
                        a[r][j] -= t;
                        let t = &inv[col][j] * &f;
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Some(RatMat::new(inv))
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                a.swap(col, pivot);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if !a[r][col].is_zero() {
                    let f = &a[r][col] / &p;
                    for j in col..n {
                        let t = &a[col][j] * &f;
                        a[r][j] -= t;
                    }
                }
            }
        }
        det
    }

    /// A canonical serialization usable as a dedup key.
    pub fn key(&self) -> String {
        let mut s = String::new();
        for row in &self.data {
            for e in row {
                s.push_str(&format!("{}/{};", e.numer(), e.denom()));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_field_arithmetic() {
        let x = Coeff::quad(rint(1), rint(2), 3); // 1 + 2 sqrt 3
        let y = Coeff::quad(rint(-1), rint(2), 3);
        let p = x.mul(&y); // (2 sqrt3)^2 - 1 = 11
        assert_eq!(p, Coeff::from_int(11));
        let inv = x.inv();
        assert!(x.mul(&inv).is_one());
        assert_eq!(Coeff::parse("1+2*sqrt(3)").unwrap(), x);
        assert_eq!(Coeff::parse(&y.canonical()).unwrap(), y);
        assert_eq!(Coeff::parse("-5/3").unwrap(), Coeff::from_frac(-5, 3));
    }

    #[test]
    fn rational_gcd_convention() {
        assert_eq!(rational_gcd(&rat(1, 2), &rat(3, 4)), rat(1, 4));
        assert_eq!(rational_gcd(&rint(0), &rat(5, 7)), rat(5, 7));
        assert_eq!(rational_gcd(&rint(4), &rint(6)), rint(2));
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let m = RatMat::from_i64(&[&[2, -1, 0], &[-1, 2, -2], &[0, -2, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMat::identity(3));
        assert_eq!(m.det(), rint(4));
    }
}
