//! Teichmüller lifts and the logarithm/exponential series.
//!
//! The series are summed on integer representatives modulo `p^(a + e)`,
//! where `a` is the absolute precision of the argument and `e` covers the
//! largest power of `p` in any denominator, so the result keeps the full
//! precision `a` of its input.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{valuation_u64, PadicContext, PadicNumber};
use crate::error::{Error, Result};

type LiftTable = HashMap<(u64, u32), Vec<Option<BigInt>>>;

fn lift_table() -> &'static RwLock<LiftTable> {
    static TABLE: OnceLock<RwLock<LiftTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `ω(a)`: the (p-1)-th root of unity congruent to `a` mod p, obtained by
/// iterating `x -> x^p` to its fixed point modulo `p^N`. Lifts are memoized
/// per `(p, N)`.
pub fn teichmuller(a: i64, ctx: PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    let r = a.rem_euclid(p as i64) as usize;
    if r == 0 {
        return Err(Error::Domain(format!(
            "Teichmüller lift of {a}, which is divisible by {p}"
        )));
    }
    let key = (p, ctx.precision());
    let cached = lift_table()
        .read()
        .expect("lift table poisoned")
        .get(&key)
        .and_then(|row| row[r].clone());
    let x = match cached {
        Some(x) => x,
        None => {
            let modulus = BigInt::from(ctx.prime_power(ctx.precision()));
            let exponent = BigInt::from(p);
            let mut x = BigInt::from(r);
            loop {
                let next = x.modpow(&exponent, &modulus);
                if next == x {
                    break;
                }
                x = next;
            }
            let mut table = lift_table().write().expect("lift table poisoned");
            table.entry(key).or_insert_with(|| vec![None; p as usize])[r] = Some(x.clone());
            x
        }
    };
    Ok(PadicNumber::assemble(ctx, x, 0, ctx.cap()))
}

/// `x / ω(x mod p)` for a unit `x`; always congruent to 1 mod p.
pub fn one_unit_part(x: &PadicNumber) -> Result<PadicNumber> {
    if x.valuation() != Some(0) {
        return Err(Error::Domain("one-unit part of a non-unit".into()));
    }
    let r = x.residue().expect("unit has a residue");
    let omega = teichmuller(r as i64, x.context())?;
    x.try_div(&omega)
}

/// Valuation and absolute precision of `u - 1`, checking `u ≡ 1 mod p`.
fn one_unit_offset(u: &PadicNumber, what: &str) -> Result<PadicNumber> {
    let x = u - &u.context().one();
    match x.valuation() {
        Some(v) if v >= 1 => Ok(x),
        None if x.absolute_precision() >= 1 => Ok(x),
        _ => Err(Error::Domain(format!("{what}: argument is not congruent to 1 mod p"))),
    }
}

fn floor_log(n: u64, p: u64) -> i64 {
    let mut e = 0;
    let mut q = n / p;
    while q > 0 {
        e += 1;
        q /= p;
    }
    e
}

/// `log(u) = Σ (-1)^(n+1) (u-1)^n / n` for `u ≡ 1 mod p`.
///
/// Term `n` has valuation at least `n·v(u-1) - ⌊log_p n⌋`; summation stops at
/// the first `n` where that bound reaches the precision of `u - 1`.
pub fn log_one_unit(u: &PadicNumber) -> Result<PadicNumber> {
    let ctx = u.context();
    let x = one_unit_offset(u, "log")?;
    let a = x.absolute_precision();
    let Some(v) = x.valuation() else {
        return Ok(PadicNumber::zero_with(ctx, a));
    };
    let p = ctx.p();
    let mut last = 0u64;
    while (last + 1) as i64 * v - floor_log(last + 1, p) < a {
        last += 1;
    }
    let e = floor_log(last.max(1), p);
    let modulus = BigInt::from(ctx.prime_power((a + e) as u32));
    let (xu, xv) = x.scaled_parts();
    let big_x = xu * BigInt::from(ctx.prime_power(xv as u32));
    let mut power = BigInt::one();
    let mut total = BigInt::zero();
    for n in 1..=last {
        power = (&power * &big_x).mod_floor(&modulus);
        let vn = valuation_u64(n, p);
        let cofactor = BigInt::from(n / p.pow(vn));
        let inv = cofactor.modinv(&modulus).expect("cofactor prime to p");
        let term = &power * inv * BigInt::from(ctx.prime_power((e - vn as i64) as u32));
        if n % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
        total = total.mod_floor(&modulus);
    }
    Ok(PadicNumber::assemble(ctx, total, -e, a))
}

/// `exp(x) = Σ x^n / n!` for `v(x) ≥ 1`.
///
/// Uses `v(n!) ≤ (n-1)/(p-1)`: term `n` has valuation at least
/// `n·v(x) - (n-1)/(p-1)`, which grows without bound because `p ≥ 3`.
pub fn exp_small(x: &PadicNumber) -> Result<PadicNumber> {
    let ctx = x.context();
    let a = x.absolute_precision();
    let v = match x.valuation() {
        Some(v) if v >= 1 => v,
        None if a >= 1 => return Ok(PadicNumber::assemble(ctx, BigInt::one(), 0, a)),
        _ => return Err(Error::Domain("exp: argument must have valuation at least 1".into())),
    };
    let p = ctx.p() as i64;
    let mut last = 0i64;
    while (last + 1) * v * (p - 1) - last < a * (p - 1) {
        last += 1;
    }
    let mut factorials = vec![BigUint::one()];
    for n in 1..=last as u64 {
        let next = factorials.last().unwrap() * n;
        factorials.push(next);
    }
    let full = factorials.last().unwrap().clone();
    let d: i64 = (1..=last as u64).map(|n| valuation_u64(n, p as u64) as i64).sum();
    let modulus = BigInt::from(ctx.prime_power((a + d) as u32));
    let (xu, xv) = x.scaled_parts();
    let big_x = xu * BigInt::from(ctx.prime_power(xv as u32));
    let mut power = BigInt::one();
    let mut total = BigInt::zero();
    for (n, fact) in factorials.iter().enumerate() {
        if n > 0 {
            power = (&power * &big_x).mod_floor(&modulus);
        }
        total += &power * BigInt::from(&full / fact);
    }
    let cofactor = BigInt::from(full / ctx.prime_power(d as u32));
    let inv = cofactor.modinv(&modulus).expect("cofactor prime to p");
    let total = (total.mod_floor(&modulus) * inv).mod_floor(&modulus);
    Ok(PadicNumber::assemble(ctx, total, -d, a))
}

/// `u^s = exp(s · log u)` for a one-unit `u` and a p-adic integer `s`.
pub fn pow_zp(u: &PadicNumber, s: &PadicNumber) -> Result<PadicNumber> {
    one_unit_offset(u, "pow_zp")?;
    match s.valuation() {
        Some(v) if v < 0 => {
            return Err(Error::Domain("pow_zp: exponent is not a p-adic integer".into()))
        }
        None if s.absolute_precision() < 0 => {
            return Err(Error::Domain("pow_zp: exponent precision is negative".into()))
        }
        _ => {}
    }
    let t = s.try_mul(&log_one_unit(u)?)?;
    exp_small(&t)
}
