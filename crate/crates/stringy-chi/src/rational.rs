//! Exact coefficient field: rational functions in the genus variable `y`.
//!
//! [`YPolynomial`] is a dense univariate polynomial over arbitrary-precision
//! rationals; [`YRational`] is a quotient of two of them kept in canonical
//! form.  All arithmetic is exact — there are no floats anywhere in the
//! crate — and equality of canonical representations is equality of values.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Convenience: arbitrary-precision rational `n/d`.
pub fn bigrat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience: arbitrary-precision integer rational.
pub fn bigint_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn fmt_bigrat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense univariate polynomial in `y` over `BigRational`.
///
/// # Invariants
/// * `coeffs` is in ascending degree order and never has a trailing zero;
///   the zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct YPolynomial {
    coeffs: Vec<BigRational>,
}

impl YPolynomial {
    pub fn zero() -> Self {
        YPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        YPolynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = YPolynomial { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The variable `y` itself.
    pub fn y() -> Self {
        YPolynomial { coeffs: vec![BigRational::zero(), BigRational::one()] }
    }

    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = YPolynomial { coeffs };
        p.trim();
        p
    }

    /// Ascending integer coefficients; handy in tests and tables.
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        YPolynomial::from_coeffs(coeffs.iter().map(|&c| bigint_rat(c)).collect())
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `y^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = self.coeff(k);
            if let Some(o) = other.coeffs.get(k) {
                c += o;
            }
            coeffs.push(c);
        }
        YPolynomial::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        YPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return YPolynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        YPolynomial::from_coeffs(coeffs)
    }

    /// In-place `self += a * b`; the workhorse of graded-ring products.
    pub fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let n = a.coeffs.len() + b.coeffs.len() - 1;
        if self.coeffs.len() < n {
            self.coeffs.resize(n, BigRational::zero());
        }
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, z) in b.coeffs.iter().enumerate() {
                if !z.is_zero() {
                    self.coeffs[i + j] += x * z;
                }
            }
        }
        self.trim();
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return YPolynomial::zero();
        }
        YPolynomial { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = YPolynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, y0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * y0 + c;
        }
        acc
    }

    /// Long division: returns `(quotient, remainder)`.  Panics on a zero
    /// divisor — callers guard that themselves.
    pub fn div_rem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "polynomial division by zero");
        if self.coeffs.len() < div.coeffs.len() {
            return (YPolynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dlen = div.coeffs.len();
        let lead = div.leading();
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![BigRational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dlen - 1] / &lead;
            if !c.is_zero() {
                for (j, d) in div.coeffs.iter().enumerate() {
                    let t = &c * d;
                    rem[k + j] -= t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dlen - 1);
        (YPolynomial::from_coeffs(quot), YPolynomial::from_coeffs(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, div: &Self) -> Self {
        let (q, r) = self.div_rem(div);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic Euclidean gcd; gcd with zero is the other argument made monic,
    /// and gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    fn into_monic(mut self) -> Self {
        if self.is_zero() {
            return self;
        }
        let lead = self.leading();
        if !lead.is_one() {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
        }
        self
    }
}

impl fmt::Display for YPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{}", fmt_bigrat(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", fmt_bigrat(&a))?;
                }
                if k == 1 {
                    write!(f, "y")?;
                } else {
                    write!(f, "y^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Reduced rational function in `y`.
///
/// # Invariants
/// * `den` is nonzero and monic.
/// * `gcd(num, den) = 1`; the zero value is `0/1`.
///
/// Because the form is canonical, derived equality compares values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YRational {
    num: YPolynomial,
    den: YPolynomial,
}

impl Default for YRational {
    fn default() -> Self {
        YRational::zero()
    }
}

impl YRational {
    pub fn zero() -> Self {
        YRational { num: YPolynomial::zero(), den: YPolynomial::one() }
    }

    pub fn one() -> Self {
        YRational { num: YPolynomial::one(), den: YPolynomial::one() }
    }

    pub fn y() -> Self {
        YRational { num: YPolynomial::y(), den: YPolynomial::one() }
    }

    pub fn from_int(n: i64) -> Self {
        YRational::from_polynomial(YPolynomial::from_int_coeffs(&[n]))
    }

    pub fn from_bigrat(c: BigRational) -> Self {
        YRational::from_polynomial(YPolynomial::constant(c))
    }

    pub fn from_polynomial(num: YPolynomial) -> Self {
        YRational { num, den: YPolynomial::one() }
    }

    /// Canonicalizing constructor; errors on a zero denominator.
    pub fn new(num: YPolynomial, den: YPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(mut num: YPolynomial, mut den: YPolynomial) -> Self {
        if num.is_zero() {
            return YRational::zero();
        }
        if !den.is_one() {
            let g = num.gcd(&den);
            if g.degree() > 0 {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
            let lead = den.leading();
            if !lead.is_one() {
                let inv = BigRational::one() / lead;
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        YRational { num, den }
    }

    pub fn numerator(&self) -> &YPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &YPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Borrow the value as a polynomial when the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&YPolynomial> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return YRational { num: self.num.add(&other.num), den: YPolynomial::one() };
        }
        let num =
            self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduced(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        YRational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return YRational::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return YRational { num: self.num.mul(&other.num), den: YPolynomial::one() };
        }
        // Cross-reduction keeps intermediate gcds small and, for reduced
        // inputs, yields the canonical form directly.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = if g1.degree() > 0 { self.num.div_exact(&g1) } else { self.num.clone() };
        let d2 = if g1.degree() > 0 { other.den.div_exact(&g1) } else { other.den.clone() };
        let n2 = if g2.degree() > 0 { other.num.div_exact(&g2) } else { other.num.clone() };
        let d1 = if g2.degree() > 0 { self.den.div_exact(&g2) } else { self.den.clone() };
        Self::reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return YRational::zero();
        }
        YRational { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        // num and den are coprime, so powers stay canonical.
        YRational { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Exact evaluation; errors at poles of the reduced form.
    pub fn eval_at_y(&self, y0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(y0);
        if d.is_zero() {
            return Err(Error::PoleAt(fmt_bigrat(y0)));
        }
        Ok(self.num.eval(y0) / d)
    }

    /// Serialize as two ascending coefficient lists of `(numer, denom)`
    /// integer pairs.
    pub fn to_coeff_pairs(&self) -> (Vec<(BigInt, BigInt)>, Vec<(BigInt, BigInt)>) {
        let conv = |p: &YPolynomial| {
            p.coeffs().iter().map(|c| (c.numer().clone(), c.denom().clone())).collect()
        };
        (conv(&self.num), conv(&self.den))
    }

    /// Inverse of [`to_coeff_pairs`]; canonicalizes on the way in.
    pub fn from_coeff_pairs(
        num: &[(BigInt, BigInt)],
        den: &[(BigInt, BigInt)],
    ) -> Result<Self> {
        let conv = |pairs: &[(BigInt, BigInt)]| -> Result<YPolynomial> {
            let mut coeffs = Vec::with_capacity(pairs.len());
            for (n, d) in pairs {
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                coeffs.push(BigRational::new(n.clone(), d.clone()));
            }
            Ok(YPolynomial::from_coeffs(coeffs))
        };
        YRational::new(conv(num)?, conv(den)?)
    }
}

impl fmt::Display for YRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num_s = self.num.to_string();
        let den_s = self.den.to_string();
        let wrap = |s: &str| -> String {
            if s.contains('+') || (s.len() > 1 && s[1..].contains('-')) || s.starts_with('-') {
                format!("({s})")
            } else {
                s.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&num_s), wrap(&den_s))
    }
}
