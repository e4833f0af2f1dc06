//! Exact Bernoulli numbers and polynomials, and generalized Bernoulli
//! numbers `B_{n,χ}` for Teichmüller characters evaluated in Q_p.
//!
//! Conventions: `B_1 = -1/2`, while the trivial character has conductor 1
//! and so `B_{1,1} = B_1(1) = +1/2`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::characters::TeichCharacter;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};

pub type ExactRational = BigRational;

/// Largest index served by [`bernoulli_number`].
pub const DEFAULT_CEILING: usize = 2000;

fn table() -> &'static RwLock<Vec<BigRational>> {
    static TABLE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

fn extend_to(n: usize) {
    let mut t = table().write().expect("bernoulli table poisoned");
    while t.len() <= n {
        let m = t.len();
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0, solved for B_m.
        if m > 1 && m % 2 == 1 {
            t.push(BigRational::zero());
            continue;
        }
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, b) in t.iter().enumerate() {
            if !b.is_zero() {
                acc += b * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        t.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
}

/// `B_n` with the ceiling [`DEFAULT_CEILING`].
pub fn bernoulli_number(n: usize) -> Result<ExactRational> {
    bernoulli_number_with_ceiling(n, DEFAULT_CEILING)
}

pub fn bernoulli_number_with_ceiling(n: usize, ceiling: usize) -> Result<ExactRational> {
    if n > ceiling {
        return Err(Error::AboveCeiling { n, ceiling });
    }
    {
        let t = table().read().expect("bernoulli table poisoned");
        if let Some(b) = t.get(n) {
            return Ok(b.clone());
        }
    }
    extend_to(n);
    Ok(table().read().expect("bernoulli table poisoned")[n].clone())
}

/// Coefficients of `B_n(x) = Σ C(n,k) B_k x^(n-k)`, indexed by the power of `x`.
pub fn bernoulli_polynomial(n: usize) -> Result<Vec<ExactRational>> {
    let mut coeffs = vec![BigRational::zero(); n + 1];
    let mut binom = BigInt::one();
    for k in 0..=n {
        coeffs[n - k] = bernoulli_number(k)? * BigRational::from_integer(binom.clone());
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    Ok(coeffs)
}

/// `true` when p divides the numerator of `B_n`.
pub fn numerator_divisible(n: usize, p: u64) -> Result<bool> {
    let b = bernoulli_number(n)?;
    Ok(!b.numer().is_zero() && b.numer().mod_floor(&BigInt::from(p)).is_zero())
}

/// Renders as `num/den`, always with an explicit denominator.
pub fn render(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `B_{n,χ} = f^(n-1) Σ_{a=1}^{f} χ(a) B_n(a/f)` in Q_p, `f` the conductor.
///
/// For `f = p` the sum is regrouped as `Σ_k C(n,k) B_k p^(k-1) Σ_a χ(a) a^(n-k)`,
/// whose terms all have valuation at least -1.
pub fn generalized_bernoulli(
    n: usize,
    chi: &TeichCharacter,
    ctx: PadicContext,
) -> Result<PadicNumber> {
    if n == 0 {
        return Err(Error::Domain("generalized Bernoulli number of index 0".into()));
    }
    if chi.p() != ctx.p() {
        return Err(Error::ContextMismatch(format!(
            "character mod {} in a {}-adic context",
            chi.p(),
            ctx.p()
        )));
    }
    let parity_ok = (chi.parity() == 1) == n.is_multiple_of(2);
    if chi.is_trivial() {
        if n == 1 {
            return Ok(ctx.rational(&BigRational::new(1.into(), 2.into())));
        }
        return Ok(ctx.rational(&bernoulli_number(n)?));
    }
    if !parity_ok {
        return Ok(ctx.zero());
    }
    let p = ctx.p();
    let work = ctx.with_precision(ctx.precision() + 2);
    let values: Vec<PadicNumber> = (1..p as i64).map(|a| chi.eval(a, work)).collect();
    // power_sums[m] = Σ_a χ(a) a^m
    let mut powers: Vec<PadicNumber> = values.clone();
    let mut power_sums = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m > 0 {
            for (a, x) in powers.iter_mut().enumerate() {
                *x = &*x * work.integer(a as i64 + 1);
            }
        }
        power_sums.push(powers.iter().fold(work.zero(), |acc, x| acc + x));
    }
    let p_big = BigInt::from(p);
    let mut total = work.zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        let bk = bernoulli_number(k)?;
        if !bk.is_zero() {
            let scale = if k == 0 {
                BigRational::new(BigInt::one(), p_big.clone())
            } else {
                BigRational::from_integer(num_traits::pow(p_big.clone(), k - 1))
            };
            let coeff = bk * BigRational::from_integer(binom.clone()) * scale;
            total = total + work.rational(&coeff) * &power_sums[n - k];
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    Ok(total.with_context(ctx))
}
