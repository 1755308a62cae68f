//! Exact scalars: Gaussian rationals extended by square roots of square-free
//! positive integers.
//!
//! A [`RadScalar`] is a finite sum `Σ c_d·√d` where every radicand `d` is
//! square-free and every coefficient `c_d` is a Gaussian rational. The key
//! `d = 1` carries the plain (Gaussian) rational part. Distinct square-free
//! radicals are linearly independent over ℚ(i), so the sorted term list is a
//! canonical form and structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("square root of a negative rational {0}")]
    NegativeSqrt(Rational),
    #[error("unsupported inverse of {0}: only nonzero single-radical scalars can be inverted")]
    UnsupportedInverse(RadScalar),
    #[error("radicand {0} does not fit in 64 bits")]
    RadicandOverflow(BigUint),
    #[error("malformed scalar at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// `re + im·i` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gaussian { re, im: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, other: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    fn mul(&self, other: &Gaussian) -> Gaussian {
        if self.im.is_zero() && other.im.is_zero() {
            return Gaussian::real(&self.re * &other.re);
        }
        Gaussian { re: &self.re * &other.re - &self.im * &other.im, im: &self.re * &other.im + &self.im * &other.re }
    }

    fn scale(&self, q: &Rational) -> Gaussian {
        Gaussian { re: &self.re * q, im: &self.im * q }
    }

    fn neg(&self) -> Gaussian {
        Gaussian { re: -&self.re, im: -&self.im }
    }

    fn conj(&self) -> Gaussian {
        Gaussian { re: self.re.clone(), im: -&self.im }
    }

    fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// Exact element of ℚ(i, √2, √3, √5, …).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RadScalar {
    // sorted by radicand, square-free keys, no zero coefficients
    terms: Vec<(u64, Gaussian)>,
}

/// Splits `n` as `s²·d` with `d` square-free.
pub fn square_free_decompose(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "square-free decomposition of zero");
    let mut s = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, d * n)
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl RadScalar {
    pub fn zero() -> Self {
        RadScalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        RadScalar { terms: vec![(1, Gaussian::new(Rational::zero(), Rational::one()))] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_gaussian(Gaussian::real(q))
    }

    pub fn from_gaussian(g: Gaussian) -> Self {
        Self::monomial(1, g)
    }

    /// `c·√d` for square-free `d`; `d` is reduced if it is not square-free.
    pub fn monomial(d: u64, c: Gaussian) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let (s, d) = square_free_decompose(d);
        let c = if s == 1 { c } else { c.scale(&rat(s as i64)) };
        RadScalar { terms: vec![(d, c)] }
    }

    /// `√n` for a nonnegative integer.
    pub fn sqrt_int(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        Self::monomial(n, Gaussian::real(Rational::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Gaussian)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The value as a plain rational, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(1, c)] if c.im.is_zero() => Some(c.re.clone()),
            _ => None,
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.im.is_zero())
    }

    pub fn conj(&self) -> Self {
        RadScalar { terms: self.terms.iter().map(|(d, c)| (*d, c.conj())).collect() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadScalar { terms: self.terms.iter().map(|(d, c)| (*d, c.scale(q))).collect() }
    }

    fn from_unsorted(mut raw: Vec<(u64, Gaussian)>) -> Self {
        raw.sort_by_key(|(d, _)| *d);
        let mut terms: Vec<(u64, Gaussian)> = Vec::with_capacity(raw.len());
        for (d, c) in raw {
            match terms.last_mut() {
                Some((ld, lc)) if *ld == d => *lc = lc.add(&c),
                _ => terms.push((d, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        RadScalar { terms }
    }

    fn add_ref(&self, other: &RadScalar) -> RadScalar {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (da, ca) = &self.terms[i];
            let (db, cb) = &other.terms[j];
            match da.cmp(db) {
                Ordering::Less => {
                    terms.push((*da, ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push((*db, cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca.add(cb);
                    if !c.is_zero() {
                        terms.push((*da, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        RadScalar { terms }
    }

    fn mul_ref(&self, other: &RadScalar) -> RadScalar {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (da, ca) in &self.terms {
            for (db, cb) in &other.terms {
                // √a·√b = g·√((a/g)(b/g)), g = gcd(a, b); the cofactor stays square-free
                let g = da.gcd(db);
                let d = (da / g).checked_mul(db / g).expect("radicand overflow");
                let mut c = ca.mul(cb);
                if g != 1 {
                    c = c.scale(&rat(g as i64));
                }
                raw.push((d, c));
            }
        }
        Self::from_unsorted(raw)
    }

    /// Sign of a real scalar, `None` when an imaginary part is present.
    ///
    /// Refines rational enclosures of every radical until the enclosure of the
    /// sum excludes zero; a nonzero term list is never numerically zero.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        if self.terms.is_empty() {
            return Some(Ordering::Equal);
        }
        let mut bits = 24u32;
        loop {
            let (lo, hi) = self.real_enclosure(bits);
            if lo.is_positive() {
                return Some(Ordering::Greater);
            }
            if hi.is_negative() {
                return Some(Ordering::Less);
            }
            bits *= 2;
        }
    }

    fn real_enclosure(&self, bits: u32) -> (Rational, Rational) {
        let scale = BigUint::one() << (2 * bits);
        let denom = BigInt::one() << bits;
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (d, c) in &self.terms {
            let (rlo, rhi) = if *d == 1 {
                (Rational::one(), Rational::one())
            } else {
                let s = (BigUint::from(*d) * &scale).sqrt();
                let s = BigInt::from(s);
                (Rational::new(s.clone(), denom.clone()), Rational::new(s + 1, denom.clone()))
            };
            if c.re.is_negative() {
                lo += &c.re * &rhi;
                hi += &c.re * &rlo;
            } else {
                lo += &c.re * &rlo;
                hi += &c.re * &rhi;
            }
        }
        (lo, hi)
    }

    /// True for real scalars that are `>= 0`.
    pub fn is_nonneg_real(&self) -> bool {
        matches!(self.real_sign(), Some(Ordering::Greater | Ordering::Equal))
    }

    pub fn is_positive_real(&self) -> bool {
        self.real_sign() == Some(Ordering::Greater)
    }

    /// Floating-point approximation of the real and imaginary parts.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (d, c) in &self.terms {
            let r = (*d as f64).sqrt();
            re += c.re.to_f64().unwrap_or(f64::NAN) * r;
            im += c.im.to_f64().unwrap_or(f64::NAN) * r;
        }
        (re, im)
    }
}

/// `√q` for a nonnegative rational, written as `(s/den)·√d` with `d`
/// square-free, using `√(p/den) = √(p·den)/den`.
pub fn sqrt_nonneg_rational(q: &Rational) -> Result<RadScalar, ScalarError> {
    if q.is_negative() {
        return Err(ScalarError::NegativeSqrt(q.clone()));
    }
    if q.is_zero() {
        return Ok(RadScalar::zero());
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    let radicand = num * den;
    let r = radicand.to_u64().ok_or_else(|| ScalarError::RadicandOverflow(radicand.clone()))?;
    let (s, d) = square_free_decompose(r);
    let coeff = Rational::new(BigInt::from(s), BigInt::from(den.clone()));
    Ok(RadScalar { terms: vec![(d, Gaussian::real(coeff))] })
}

/// Inverse of a nonzero scalar with a single radical term.
pub fn invert_monoradical(x: &RadScalar) -> Result<RadScalar, ScalarError> {
    match x.terms.as_slice() {
        [(d, c)] => {
            // 1/(c√d) = conj(c)·√d / (|c|²·d)
            let denom = c.norm_sq() * rat(*d as i64);
            let inv = c.conj().scale(&denom.recip());
            Ok(RadScalar { terms: vec![(*d, inv)] })
        }
        _ => Err(ScalarError::UnsupportedInverse(x.clone())),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a RadScalar> for &'a RadScalar {
            type Output = RadScalar;
            fn $method(self, rhs: &'a RadScalar) -> RadScalar {
                let f: fn(&RadScalar, &RadScalar) -> RadScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<RadScalar> for RadScalar {
            type Output = RadScalar;
            fn $method(self, rhs: RadScalar) -> RadScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a RadScalar> for RadScalar {
            type Output = RadScalar;
            fn $method(self, rhs: &'a RadScalar) -> RadScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b));
forward_binop!(Sub, sub, |a, b| a.add_ref(&-b));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));

impl Neg for &RadScalar {
    type Output = RadScalar;
    fn neg(self) -> RadScalar {
        RadScalar { terms: self.terms.iter().map(|(d, c)| (*d, c.neg())).collect() }
    }
}

impl Neg for RadScalar {
    type Output = RadScalar;
    fn neg(self) -> RadScalar {
        -&self
    }
}

impl AddAssign<&RadScalar> for RadScalar {
    fn add_assign(&mut self, rhs: &RadScalar) {
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&RadScalar> for RadScalar {
    fn sub_assign(&mut self, rhs: &RadScalar) {
        *self = self.add_ref(&-rhs);
    }
}

impl MulAssign<&RadScalar> for RadScalar {
    fn mul_assign(&mut self, rhs: &RadScalar) {
        *self = self.mul_ref(rhs);
    }
}

impl From<i64> for RadScalar {
    fn from(n: i64) -> Self {
        RadScalar::from_int(n)
    }
}

impl From<Rational> for RadScalar {
    fn from(q: Rational) -> Self {
        RadScalar::from_rational(q)
    }
}

impl std::iter::Sum for RadScalar {
    fn sum<I: Iterator<Item = RadScalar>>(iter: I) -> Self {
        iter.fold(RadScalar::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for RadScalar {
    /// Prints in the scalar literal grammar, e.g. `1/2 + 3*sqrt(2) - 1/3*i*sqrt(5)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.terms {
            for (part, imag) in [(&c.re, false), (&c.im, true)] {
                if part.is_zero() {
                    continue;
                }
                let neg = part.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { '-' } else { '+' })?;
                }
                first = false;
                let mag = part.abs();
                let mut pieces = Vec::new();
                if !(mag.is_one() && (imag || *d != 1)) {
                    pieces.push(fmt_rational(&mag));
                }
                if imag {
                    pieces.push("i".to_string());
                }
                if *d != 1 {
                    pieces.push(format!("sqrt({d})"));
                }
                write!(f, "{}", pieces.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parser for scalar literals.
///
/// Accepts `scalar ::= ['-'] term (('+'|'-') term)*` with
/// `term ::= factor ('*' factor)*` and
/// `factor ::= int ('/' posint)? | 'i' | 'sqrt(' posint ')'`.
/// Radicands are reduced to square-free form on parse.
pub(crate) struct ScalarParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        ScalarParser { src: src.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> ScalarError {
        ScalarError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_uint(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse::<BigInt>().expect("digits parse"))
    }

    fn parse_factor(&mut self) -> Result<RadScalar, ScalarError> {
        match self.peek() {
            Some(b'i') => {
                self.pos += 1;
                Ok(RadScalar::i())
            }
            Some(b's') => {
                if !self.src[self.pos..].starts_with(b"sqrt(") {
                    return Err(self.err("expected `sqrt(`"));
                }
                self.pos += 5;
                let n = self.parse_uint()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                sqrt_nonneg_rational(&Rational::from_integer(n))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_uint()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.parse_uint()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(RadScalar::from_rational(Rational::new(num, den)))
                } else {
                    Ok(RadScalar::from_rational(Rational::from_integer(num)))
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse_term(&mut self) -> Result<RadScalar, ScalarError> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.parse_factor()?;
        }
        Ok(acc)
    }

    pub(crate) fn parse_scalar(&mut self) -> Result<RadScalar, ScalarError> {
        let mut acc = RadScalar::zero();
        let mut sign_neg = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign_neg = true;
        }
        loop {
            let t = self.parse_term()?;
            if sign_neg {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                Some(b'+') => sign_neg = false,
                Some(b'-') => sign_neg = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(acc)
    }

    pub(crate) fn finish(&mut self) -> Result<(), ScalarError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.err(format!("trailing `{}`", c as char))),
        }
    }
}

impl FromStr for RadScalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ScalarParser::new(s);
        let v = p.parse_scalar()?;
        p.finish()?;
        Ok(v)
    }
}

/// Parses `int ('/' posint)?`, with an optional leading minus.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let v: RadScalar = s.parse()?;
    v.as_rational().ok_or_else(|| ScalarError::Parse { pos: 0, msg: format!("`{s}` is not a rational literal") })
}
