//! Canonical text serializations and parsers for the exact types.
//!
//! Polynomial terms are sorted by (lambda power, then graded-lex on the
//! remaining exponents); coefficients render as "3/5" or "1+2*sqrt(3)".
//! The emitted strings are valid inputs to the expression parser, so every
//! report field round-trips.

use crate::arith::Coeff;
use crate::error::{Error, Result};
use crate::lfourier::{FKey, FourierPoly};
use crate::poly::MPoly;
use crate::ratfn::RationalFn;
use num_bigint::BigInt;
use num_rational::BigRational;

type P = MPoly<Coeff>;

/// Variable-name convention for a polynomial ring: z1..zl or t1..tl, with
/// an optional trailing lambda.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VarSet {
    Z,
    T,
    /// z1..zl plus lambda as the last variable.
    ZLambda,
    /// y1..yl plus lambda as the last variable (pencil corrections).
    YLambda,
}

impl VarSet {
    pub fn names(&self, nvars: usize) -> Vec<String> {
        match self {
            VarSet::Z => (1..=nvars).map(|i| format!("z{i}")).collect(),
            VarSet::T => (1..=nvars).map(|i| format!("t{i}")).collect(),
            VarSet::ZLambda => {
                let mut v: Vec<String> = (1..nvars).map(|i| format!("z{i}")).collect();
                v.push("lam".to_string());
                v
            }
            VarSet::YLambda => {
                let mut v: Vec<String> = (1..nvars).map(|i| format!("y{i}")).collect();
                v.push("lam".to_string());
                v
            }
        }
    }
}

fn coeff_factor(c: &Coeff) -> String {
    let s = c.canonical();
    if s.contains('+') || (s.contains('-') && !s.starts_with('-')) || s.contains("sqrt") {
        format!("({s})")
    } else {
        s
    }
}

/// Canonical polynomial text: terms sorted by (lambda power when present,
/// graded-lex), joined with " + ".
pub fn mpoly_string(p: &P, vars: VarSet) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let names = vars.names(p.nvars);
    let lam_idx = match vars {
        VarSet::ZLambda | VarSet::YLambda => Some(p.nvars - 1),
        _ => None,
    };
    let mut terms: Vec<(&Vec<u32>, &Coeff)> = p.terms.iter().collect();
    terms.sort_by_key(|(e, _)| {
        let lam = lam_idx.map(|i| e[i]).unwrap_or(0);
        let rest: Vec<u32> =
            e.iter().enumerate().filter(|(i, _)| Some(*i) != lam_idx).map(|(_, &x)| x).collect();
        let deg: u32 = rest.iter().sum();
        (lam, deg, rest)
    });
    let rendered: Vec<String> = terms
        .iter()
        .map(|(e, c)| {
            let has_vars = e.iter().any(|&k| k > 0);
            let mut parts = if c.is_one() && has_vars { vec![] } else { vec![coeff_factor(c)] };
            if let Some(i) = lam_idx {
                if e[i] > 0 {
                    parts.push(if e[i] == 1 {
                        "lam".to_string()
                    } else {
                        format!("lam^{}", e[i])
                    });
                }
            }
            for (i, &k) in e.iter().enumerate() {
                if Some(i) == lam_idx || k == 0 {
                    continue;
                }
                parts.push(if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) });
            }
            parts.join("*")
        })
        .collect();
    rendered.join(" + ")
}

/// Canonical rational-function text: "num" or "(num) / (den)".
pub fn ratfn_string(r: &RationalFn, vars: VarSet) -> String {
    if r.is_polynomial() {
        mpoly_string(&r.num, vars)
    } else {
        format!("({}) / ({})", mpoly_string(&r.num, vars), mpoly_string(&r.den, vars))
    }
}

/// Canonical Fourier polynomial lines: "coeff * lam^q * X[a1,...,al]".
pub fn fourier_lines(f: &FourierPoly) -> Vec<String> {
    f.terms
        .iter()
        .map(|(k, c)| {
            let exps: Vec<String> = k.exp.iter().map(|a| a.to_string()).collect();
            format!("{} * lam^{} * X[{}]", c.canonical(), k.lam, exps.join(","))
        })
        .collect()
}

pub fn fourier_string(f: &FourierPoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    fourier_lines(f).join(" + ")
}

pub fn parse_fourier(s: &str, nvars: usize) -> Result<FourierPoly> {
    let s = s.trim();
    let mut out = FourierPoly::zero(nvars);
    if s == "0" {
        return Ok(out);
    }
    for term in s.split(" + ") {
        let parts: Vec<&str> = term.split('*').map(|p| p.trim()).collect();
        // coeff * lam^q * X[...] with the coefficient possibly containing
        // '*' inside "a*sqrt(d)"; rejoin by locating the lam^ and X[ parts.
        let xi = parts
            .iter()
            .position(|p| p.starts_with("X["))
            .ok_or_else(|| Error::Other(format!("bad fourier term {term:?}")))?;
        let li = parts
            .iter()
            .position(|p| p.starts_with("lam^"))
            .ok_or_else(|| Error::Other(format!("bad fourier term {term:?}")))?;
        let coeff = Coeff::parse(&parts[..li].join("*"))?;
        let lam: BigRational = parts[li][4..]
            .parse::<BigRational>()
            .map_err(|_| Error::Other(format!("bad lambda power in {term:?}")))?;
        let inner = parts[xi]
            .strip_prefix("X[")
            .and_then(|p| p.strip_suffix(']'))
            .ok_or_else(|| Error::Other(format!("bad exponent vector in {term:?}")))?;
        let exp: Vec<i32> = inner
            .split(',')
            .map(|x| x.trim().parse::<i32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Other(format!("bad exponent vector in {term:?}")))?;
        if exp.len() != nvars {
            return Err(Error::Other("wrong exponent vector length".into()));
        }
        out.insert_add(FKey { lam, exp }, coeff);
    }
    Ok(out)
}

/// Expression parser producing an exact rational function over the named
/// variables. Accepts integers, rationals, sqrt(n), + - * / ^ and
/// parentheses; the canonical outputs above are valid inputs.
pub fn parse_ratfn(src: &str, vars: VarSet, nvars: usize) -> Result<RationalFn> {
    let names = vars.names(nvars);
    let mut p = Parser { src: src.as_bytes(), pos: 0, names, nvars };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Other(format!(
            "trailing input at byte {} of {src:?}",
            p.pos
        )));
    }
    Ok(r)
}

/// Polynomial wrapper around the expression parser.
pub fn parse_mpoly(src: &str, vars: VarSet, nvars: usize) -> Result<P> {
    let r = parse_ratfn(src, vars, nvars)?;
    r.as_poly().ok_or_else(|| Error::Other(format!("not a polynomial: {src:?}")))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: Vec<String>,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    acc = acc.div(&d);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalFn> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::Other("bad exponent".into()))?;
            let mut acc = RationalFn::one(self.nvars);
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RationalFn> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Other("expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(RationalFn::from_poly(P::constant(
                    self.nvars,
                    Coeff::from_rat(BigRational::from_integer(n)),
                )))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                if name == "sqrt" {
                    if self.peek() != Some(b'(') {
                        return Err(Error::Other("expected '(' after sqrt".into()));
                    }
                    self.pos += 1;
                    self.skip_ws();
                    let ds = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let d: u64 = std::str::from_utf8(&self.src[ds..self.pos])
                        .unwrap()
                        .parse()
                        .map_err(|_| Error::Other("bad sqrt argument".into()))?;
                    if self.peek() != Some(b')') {
                        return Err(Error::Other("expected ')' after sqrt".into()));
                    }
                    self.pos += 1;
                    return Ok(RationalFn::from_poly(P::constant(self.nvars, Coeff::sqrt_d(d))));
                }
                let idx = self
                    .names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| Error::Other(format!("unknown variable {name:?}")))?;
                Ok(RationalFn::from_poly(P::var(self.nvars, idx)))
            }
            other => Err(Error::Other(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rint};

    #[test]
    fn mpoly_round_trip() {
        let src = "2*z2 + -2/3*z1^2 + 3*lam";
        let p = parse_mpoly(src, VarSet::ZLambda, 3).unwrap();
        let s = mpoly_string(&p, VarSet::ZLambda);
        assert_eq!(s, "2*z2 + -2/3*z1^2 + 3*lam");
        let p2 = parse_mpoly(&s, VarSet::ZLambda, 3).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn ratfn_round_trip_with_sqrt() {
        let src = "(t1^4) / (2916*t2^2)";
        let r = parse_ratfn(src, VarSet::T, 2).unwrap();
        let s = ratfn_string(&r, VarSet::T);
        let r2 = parse_ratfn(&s, VarSet::T, 2).unwrap();
        assert_eq!(r, r2);
        let q = parse_ratfn("2*sqrt(3)*t2 - t1/3", VarSet::T, 2).unwrap();
        let q2 = parse_ratfn(&ratfn_string(&q, VarSet::T), VarSet::T, 2).unwrap();
        assert_eq!(q, q2);
    }

    #[test]
    fn fourier_round_trip() {
        let f = FourierPoly::exp_term(2, &[1, -1])
            .add(&FourierPoly::monomial(2, rat(3, 2), &[0, 2], Coeff::from_int(-2)));
        let s = fourier_string(&f);
        let f2 = parse_fourier(&s, 2).unwrap();
        assert_eq!(f, f2);
        let _ = rint(0);
    }

    #[test]
    fn expression_arithmetic() {
        let r = parse_ratfn("(z1 + z2)^2 - z1^2 - 2*z1*z2", VarSet::Z, 2).unwrap();
        let expect = parse_ratfn("z2^2", VarSet::Z, 2).unwrap();
        assert_eq!(r, expect);
    }
}
