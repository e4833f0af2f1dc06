//! p-adic numbers at capped absolute precision.
//!
//! A [`PadicNumber`] is either `u * p^v + O(p^a)` with `u` a unit known
//! modulo `p^(a - v)`, or the value `O(p^a)` that is indistinguishable from
//! zero at its precision. Every value carries its own absolute precision `a`,
//! which never exceeds the precision `N` of its [`PadicContext`].

mod series;
mod text;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use series::{exp_small, log_one_unit, one_unit_part, pow_zp, teichmuller};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of `p` in `n`; `n` must be nonzero.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Splits a nonzero integer as `p^v * rest` with `p` not dividing `rest`.
pub(crate) fn split_p_big(x: &BigInt, p: u64) -> (i64, BigInt) {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut rest = x.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

/// The prime and the absolute precision cap `N`: all values live modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicContext {
    p: u64,
    precision: u32,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if precision == 0 {
            return Err(Error::InvalidPrecision(precision));
        }
        Ok(PadicContext { p, precision })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Same prime, different cap.
    pub fn with_precision(&self, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be positive");
        PadicContext { p: self.p, precision }
    }

    pub(crate) fn cap(&self) -> i64 {
        self.precision as i64
    }

    pub fn prime_power(&self, e: u32) -> BigUint {
        num_traits::pow(BigUint::from(self.p), e as usize)
    }

    /// `O(p^N)`.
    pub fn zero(&self) -> PadicNumber {
        PadicNumber::zero_with(*self, self.cap())
    }

    pub fn one(&self) -> PadicNumber {
        self.integer(1)
    }

    pub fn integer(&self, n: impl Into<BigInt>) -> PadicNumber {
        PadicNumber::assemble(*self, n.into(), 0, self.cap())
    }

    /// Embeds an exact rational, known to the full cap.
    pub fn rational(&self, r: &BigRational) -> PadicNumber {
        if r.numer().is_zero() {
            return self.zero();
        }
        let (vn, num) = split_p_big(r.numer(), self.p);
        let (vd, den) = split_p_big(r.denom(), self.p);
        let val = vn - vd;
        if val >= self.cap() {
            return self.zero();
        }
        let rel = (self.cap() - val) as u32;
        let modulus = BigInt::from(self.prime_power(rel));
        let inv = den
            .mod_floor(&modulus)
            .modinv(&modulus)
            .expect("denominator is prime to p");
        let unit = (num * inv).mod_floor(&modulus);
        PadicNumber::assemble(*self, unit, val, self.cap())
    }

    /// The exact power `p^e` (for any sign of `e`).
    pub fn p_power(&self, e: i64) -> PadicNumber {
        PadicNumber::assemble(*self, BigInt::one(), e, self.cap())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct UnitPart {
    valuation: i64,
    /// Unit representative in `[1, p^(absprec - valuation))`, prime to `p`.
    unit: BigUint,
}

/// A p-adic number with explicit valuation and absolute precision.
#[derive(Clone, Debug)]
pub struct PadicNumber {
    ctx: PadicContext,
    absprec: i64,
    unit: Option<UnitPart>,
}

impl PadicNumber {
    pub(crate) fn zero_with(ctx: PadicContext, absprec: i64) -> Self {
        PadicNumber {
            ctx,
            absprec: absprec.min(ctx.cap()),
            unit: None,
        }
    }

    /// Normalizes `x * p^val + O(p^absprec)`, capping the precision at `N`.
    pub(crate) fn assemble(ctx: PadicContext, x: BigInt, val: i64, absprec: i64) -> Self {
        let absprec = absprec.min(ctx.cap());
        if x.is_zero() || val >= absprec {
            return Self::zero_with(ctx, absprec);
        }
        let (extra, rest) = split_p_big(&x, ctx.p);
        let val = val + extra;
        if val >= absprec {
            return Self::zero_with(ctx, absprec);
        }
        let rel = (absprec - val) as u32;
        let modulus = BigInt::from(ctx.prime_power(rel));
        let unit = rest
            .mod_floor(&modulus)
            .to_biguint()
            .expect("mod_floor is non-negative");
        PadicNumber {
            ctx,
            absprec,
            unit: Some(UnitPart {
                valuation: val,
                unit,
            }),
        }
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    /// The value is known modulo `p^absolute_precision()`.
    pub fn absolute_precision(&self) -> i64 {
        self.absprec
    }

    /// `None` when the value is zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        self.unit.as_ref().map(|u| u.valuation)
    }

    /// Number of known unit digits; 0 for values that are zero to precision.
    pub fn relative_precision(&self) -> i64 {
        match &self.unit {
            Some(u) => self.absprec - u.valuation,
            None => 0,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        self.unit.as_ref().map(|u| &u.unit)
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.unit.is_none()
    }

    /// Integer `X` and shift `v` with value `X * p^v`; zero gives `(0, absprec)`.
    pub(crate) fn scaled_parts(&self) -> (BigInt, i64) {
        match &self.unit {
            Some(u) => (BigInt::from(u.unit.clone()), u.valuation),
            None => (BigInt::zero(), self.absprec),
        }
    }

    /// Re-homes the value in a context with the same prime and another cap.
    /// Absolute precision is kept, or lowered to the new cap.
    pub fn with_context(&self, ctx: PadicContext) -> Self {
        assert_eq!(ctx.p, self.ctx.p, "cannot move a value between primes");
        let (x, v) = self.scaled_parts();
        Self::assemble(ctx, x, v, self.absprec)
    }

    /// Lowers the absolute precision to at most `absprec`.
    pub fn truncate(&self, absprec: i64) -> Self {
        let (x, v) = self.scaled_parts();
        Self::assemble(self.ctx, x, v, self.absprec.min(absprec))
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "(p={}, N={}) vs (p={}, N={})",
                self.ctx.p, self.ctx.precision, other.ctx.p, other.ctx.precision
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(&other.try_inv()?))
    }

    pub fn try_inv(&self) -> Result<Self> {
        let u = self.unit.as_ref().ok_or(Error::DivisionByZero)?;
        let rel = self.absprec - u.valuation;
        let modulus = self.ctx.prime_power(rel as u32);
        let inv = u
            .unit
            .modinv(&modulus)
            .expect("unit part is prime to p");
        Ok(Self::assemble(
            self.ctx,
            BigInt::from(inv),
            -u.valuation,
            -u.valuation + rel,
        ))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let absprec = self.absprec.min(other.absprec);
        match (&self.unit, &other.unit) {
            (None, None) => Self::zero_with(self.ctx, absprec),
            (Some(_), None) => self.truncate(absprec),
            (None, Some(_)) => other.truncate(absprec),
            (Some(a), Some(b)) => {
                let m = a.valuation.min(b.valuation);
                let p = BigUint::from(self.ctx.p);
                let xa = &a.unit * num_traits::pow(p.clone(), (a.valuation - m) as usize);
                let xb = &b.unit * num_traits::pow(p, (b.valuation - m) as usize);
                Self::assemble(self.ctx, BigInt::from(xa + xb), m, absprec)
            }
        }
    }

    fn neg_ref(&self) -> Self {
        match &self.unit {
            None => self.clone(),
            Some(u) => {
                let modulus = self.ctx.prime_power((self.absprec - u.valuation) as u32);
                PadicNumber {
                    ctx: self.ctx,
                    absprec: self.absprec,
                    unit: Some(UnitPart {
                        valuation: u.valuation,
                        unit: modulus - &u.unit,
                    }),
                }
            }
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        match (&self.unit, &other.unit) {
            (None, None) => Self::zero_with(self.ctx, self.absprec + other.absprec),
            (None, Some(b)) => Self::zero_with(self.ctx, self.absprec + b.valuation),
            (Some(a), None) => Self::zero_with(self.ctx, other.absprec + a.valuation),
            (Some(a), Some(b)) => {
                let val = a.valuation + b.valuation;
                let rel = (self.absprec - a.valuation).min(other.absprec - b.valuation);
                Self::assemble(
                    self.ctx,
                    BigInt::from(&a.unit * &b.unit),
                    val,
                    val + rel,
                )
            }
        }
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow_u64(&self, mut e: u64) -> Self {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Number of p-adic digits on which `self` and `other` provably agree:
    /// the absolute precision of the difference when it is zero to
    /// precision, otherwise the valuation of the difference.
    pub fn agreement(&self, other: &Self) -> i64 {
        let d = self - other;
        match d.valuation() {
            Some(v) => v,
            None => d.absprec,
        }
    }

    /// The unit digits in base p, least significant first.
    pub fn unit_digits(&self) -> Vec<u64> {
        let Some(u) = &self.unit else {
            return Vec::new();
        };
        let n = (self.absprec - u.valuation) as usize;
        let p = BigUint::from(self.ctx.p);
        let mut rest = u.unit.clone();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let (q, r) = rest.div_rem(&p);
            out.push(r.to_u64().expect("digit below p"));
            rest = q;
        }
        out
    }

    /// Residue modulo p of a value with non-negative valuation.
    pub fn residue(&self) -> Option<u64> {
        match &self.unit {
            None if self.absprec >= 1 => Some(0),
            None => None,
            Some(u) if u.valuation > 0 => Some(0),
            Some(u) if u.valuation == 0 => {
                Some((&u.unit % BigUint::from(self.ctx.p)).to_u64().unwrap())
            }
            Some(_) => None,
        }
    }

    /// Symmetric integer representative modulo `p^a` of an integral value.
    pub fn small_integer(&self) -> Option<BigInt> {
        let (x, v) = self.scaled_parts();
        if v < 0 || self.absprec < 0 {
            return None;
        }
        let modulus = BigInt::from(self.ctx.prime_power(self.absprec as u32));
        let mut n = (x * BigInt::from(self.ctx.prime_power(v as u32))).mod_floor(&modulus);
        if &n * 2 > modulus {
            n -= &modulus;
        }
        Some(n)
    }
}

impl PartialEq for PadicNumber {
    /// Equality at the common precision: the difference is zero to
    /// `min(absolute precisions)`. Not transitive across precisions.
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p == other.ctx.p && (self - other).is_zero_to_precision()
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render(self))
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_ref()
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_ref()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            /// Panics if the operands live in different contexts.
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                self.check_ctx(rhs).expect("p-adic operands from different contexts");
                let f: fn(&PadicNumber, &PadicNumber) -> PadicNumber = $body;
                f(self, rhs)
            }
        }
        impl $tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                (&self).$method(rhs)
            }
        }
        impl $tr<PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_unchecked(b));
binop!(Sub, sub, |a, b| a.add_unchecked(&b.neg_ref()));
binop!(Mul, mul, |a, b| a.mul_unchecked(b));
binop!(Div, div, |a, b| a
    .mul_unchecked(&b.try_inv().expect("division by a value that is zero to precision")));

pub use text::parse;
