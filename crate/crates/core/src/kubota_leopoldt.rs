//! The Kubota–Leopoldt p-adic L-function, branch by branch.
//!
//! On the branch `ω^j` (j even) the function `s ↦ L_p(s, ω^j)` satisfies
//!
//! ```text
//! L_p(1-n, ω^j) = -(1 - χ(p) p^(n-1)) B_{n,χ} / n,    χ = ω^(j-n),  n ≥ 1,
//! ```
//!
//! and is evaluated at any `s ∈ Z_p` by the convergent series
//!
//! ```text
//! L_p(s, ω^j) = 1/(p (s-1)) Σ_{a=1, p∤a}^{p} ω^j(a) <a>^(1-s) Σ_{m≥0} C(1-s, m) (p/a)^m B_m.
//! ```
//!
//! On weight space, `ζ_p(w)` for `w = ω^j <·>^s` is `L_p(1-s, ω^j)`; at an
//! arithmetic point `z^k ω^i` this is `-(1 - ω^i(p) p^(k-1)) B_{k,ω^i} / k`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::bernoulli::{bernoulli_number, generalized_bernoulli, numerator_divisible};
use crate::characters::TeichCharacter;
use crate::error::{Error, Result};
use crate::padic::{log_one_unit, pow_zp, teichmuller, valuation_u64, PadicContext, PadicNumber};
use crate::weight::WeightPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Interpolation,
    Series,
}

/// A value of `L_p(s, ω^j)` together with how it was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct LValue {
    pub value: PadicNumber,
    pub branch: u64,
    pub argument: PadicNumber,
    pub route: Route,
    pub precision_achieved: u32,
}

impl LValue {
    fn new(value: PadicNumber, branch: u64, argument: PadicNumber, route: Route) -> Self {
        let cap = value.context().precision() as i64;
        let precision_achieved = value.absolute_precision().clamp(0, cap) as u32;
        LValue {
            value,
            branch,
            argument,
            route,
            precision_achieved,
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.value.is_zero_to_precision()
    }
}

fn even_branch(p: u64, j: i64) -> Result<u64> {
    let r = j.rem_euclid((p - 1) as i64);
    if r % 2 != 0 {
        return Err(Error::OddBranch { p, branch: j });
    }
    Ok(r as u64)
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

/// `L_p(1-n, ω^j)` from generalized Bernoulli numbers.
pub fn lp_interpolation(n: u32, j: i64, ctx: PadicContext) -> Result<LValue> {
    if n == 0 {
        return Err(Error::Domain("interpolation points are 1-n with n >= 1".into()));
    }
    let p = ctx.p();
    let branch = even_branch(p, j)?;
    let chi = TeichCharacter::new(p, branch as i64 - n as i64);
    let guard = 4 + valuation_u64(n as u64, p);
    let work = ctx.with_precision(ctx.precision() + guard);
    let euler = if chi.is_trivial() {
        work.one() - work.p_power(n as i64 - 1)
    } else {
        work.one()
    };
    let b = generalized_bernoulli(n as usize, &chi, work)?;
    let value = -(euler * b).try_div(&work.integer(n))?;
    Ok(LValue::new(
        value.with_context(ctx),
        branch,
        ctx.integer(1 - n as i64),
        Route::Interpolation,
    ))
}

enum Argument<'a> {
    Integer(i64),
    Padic(&'a PadicNumber),
}

/// `L_p(s, ω^j)` by the convergent series, for `s` a p-adic integer.
pub fn lp_series(s: &PadicNumber, j: i64, ctx: PadicContext) -> Result<LValue> {
    if s.p() != ctx.p() {
        return Err(Error::ContextMismatch("argument and context primes differ".into()));
    }
    series(Argument::Padic(s), j, ctx)
}

/// [`lp_series`] at an integer argument, which is known exactly and so
/// carries no precision loss of its own.
pub fn lp_series_at_integer(s: i64, j: i64, ctx: PadicContext) -> Result<LValue> {
    series(Argument::Integer(s), j, ctx)
}

fn series(arg: Argument<'_>, j: i64, ctx: PadicContext) -> Result<LValue> {
    let p = ctx.p();
    let branch = even_branch(p, j)?;
    let n = ctx.cap();

    // v(s - 1), or None when s is 1 to the available precision
    let (shift, argument) = match &arg {
        Argument::Integer(s) => {
            let d = s - 1;
            let v = (d != 0).then(|| valuation_u64(d.unsigned_abs(), p) as i64);
            (v, ctx.integer(*s))
        }
        Argument::Padic(s) => {
            if s.valuation().is_some_and(|v| v < 0) {
                return Err(Error::Domain("L_p series needs s in Z_p".into()));
            }
            let d = *s - &ctx.one();
            (d.valuation(), (*s).clone())
        }
    };

    let Some(shift) = shift else {
        if branch == 0 {
            return Err(Error::Pole);
        }
        return series_at_one(&arg, branch, argument, ctx);
    };

    let mut guard = 3 + shift;
    let mut attempts = 0;
    loop {
        let work = ctx.with_precision((n + guard) as u32);
        let s_w = match &arg {
            Argument::Integer(s) => work.integer(*s),
            Argument::Padic(s) => s.with_context(work),
        };
        let x = work.one() - &s_w;
        // Term m of the inner sum has valuation ≥ m - 1; the prefactor
        // 1/(p (s-1)) costs 1 + shift digits.
        let terms = (n + 2 + shift) as usize;
        let mut binom = Vec::with_capacity(terms);
        binom.push(work.one());
        for m in 1..terms {
            let prev: &PadicNumber = &binom[m - 1];
            let next = (prev * (&x - &work.integer(m as i64 - 1))).try_div(&work.integer(m as i64))?;
            binom.push(next);
        }
        let bern: Vec<PadicNumber> = (0..terms)
            .map(|m| bernoulli_number(m).map(|b| work.rational(&b)))
            .collect::<Result<_>>()?;
        let coeffs: Vec<PadicNumber> = binom.iter().zip(&bern).map(|(c, b)| c * b).collect();

        let mut total = work.zero();
        for a in 1..p as i64 {
            let omega = teichmuller(a, work)?;
            let bracket = work.integer(a).try_div(&omega)?;
            let twist = omega.pow_u64(branch);
            let ratio = work.integer(p).try_div(&work.integer(a))?;
            let mut ratio_pow = work.one();
            let mut inner = work.zero();
            for c in &coeffs {
                inner = inner + c * &ratio_pow;
                ratio_pow = &ratio_pow * &ratio;
            }
            total = total + twist * pow_zp(&bracket, &x)? * inner;
        }
        let denom = work.integer(p) * (&s_w - &work.one());
        let value = total.try_div(&denom)?.with_context(ctx);
        let out = LValue::new(value, branch, argument.clone(), Route::Series);

        attempts += 1;
        let exact_arg = matches!(arg, Argument::Integer(_));
        if out.precision_achieved as i64 >= n || !exact_arg || attempts >= 4 {
            if out.precision_achieved == 0 {
                return Err(Error::PrecisionBudget(format!(
                    "series for branch {branch} recovered no p-adic digits"
                )));
            }
            return Ok(out);
        }
        guard += 4;
    }
}

/// `L_p(1, ω^j)` for `j ≠ 0`: the series sum vanishes at `s = 1`, so the
/// value is its derivative there,
/// `(1/p) Σ_a ω^j(a) (-log<a> - Σ_{m≥1} (-1)^(m-1) (p/a)^m B_m / m)`.
fn series_at_one(
    arg: &Argument<'_>,
    branch: u64,
    argument: PadicNumber,
    ctx: PadicContext,
) -> Result<LValue> {
    let p = ctx.p();
    let n = ctx.cap();
    let work = ctx.with_precision((n + 4) as u32);
    let mut terms = 1u64;
    while terms as i64 - 1 - floor_log(terms, p) < n + 2 {
        terms += 1;
    }
    let mut coeffs = Vec::with_capacity(terms as usize);
    for m in 1..terms {
        let b = work.rational(&bernoulli_number(m as usize)?);
        let c = b.try_div(&work.integer(m as i64))?;
        coeffs.push(if m % 2 == 1 { c } else { -c });
    }
    let mut total = work.zero();
    for a in 1..p as i64 {
        let omega = teichmuller(a, work)?;
        let bracket = work.integer(a).try_div(&omega)?;
        let ratio = work.integer(p).try_div(&work.integer(a))?;
        let mut ratio_pow = ratio.clone();
        let mut inner = log_one_unit(&bracket)?;
        for c in &coeffs {
            inner = inner + c * &ratio_pow;
            ratio_pow = &ratio_pow * &ratio;
        }
        total = total - omega.pow_u64(branch) * inner;
    }
    let mut value = total.try_div(&work.integer(p))?.with_context(ctx);
    if let Argument::Padic(s) = arg {
        // L_p is a power series in (1+p)^s - 1 with integral coefficients
        let d = *s - &ctx.one();
        value = value.truncate(d.absolute_precision() + 1);
    }
    let out = LValue::new(value, branch, argument, Route::Series);
    if out.precision_achieved == 0 {
        return Err(Error::PrecisionBudget("argument too close to 1 to resolve".into()));
    }
    Ok(out)
}

/// `ζ_p(w) = L_p(1-s, ω^j)`, defined away from the trivial weight.
pub fn zeta_weight(w: &WeightPoint, ctx: PadicContext) -> Result<LValue> {
    if w.is_trivial() {
        return Err(Error::Pole);
    }
    match w.classical_coordinates() {
        Some(c) => lp_series_at_integer(1 - c.k, w.branch() as i64, ctx),
        None => {
            let arg = ctx.one() - &w.coordinate().with_context(ctx);
            lp_series(&arg, w.branch() as i64, ctx)
        }
    }
}

/// One even branch `j ∈ {2, …, p-3}` and whether p divides the numerator of `B_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchRecord {
    pub p: u64,
    pub branch: u64,
    pub bernoulli_numerator_divisible: bool,
}

/// Exact Bernoulli data for every nontrivial even branch of p.
pub fn branch_records(p: u64) -> Result<Vec<BranchRecord>> {
    if p < 3 || !crate::padic::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    (2..p.saturating_sub(2))
        .step_by(2)
        .map(|j| {
            Ok(BranchRecord {
                p,
                branch: j,
                bernoulli_numerator_divisible: numerator_divisible(j as usize, p)?,
            })
        })
        .collect()
}

/// A branch carrying a zero of ζ_p, with the series value used to confirm it.
#[derive(Clone, Debug, Serialize)]
pub struct IrregularBranch {
    pub branch: u64,
    pub witness: LValue,
}

/// Branches on which ζ_p vanishes somewhere (Kummer: `p | num(B_j)`).
///
/// Each hit is confirmed on the series route: the whole branch is then
/// divisible by p, so `L_p(0, ω^j)` must have positive valuation.
pub fn irregular_scan(ctx: PadicContext) -> Result<Vec<IrregularBranch>> {
    let mut hits = Vec::new();
    for rec in branch_records(ctx.p())? {
        if !rec.bernoulli_numerator_divisible {
            continue;
        }
        let witness = lp_series_at_integer(0, rec.branch as i64, ctx)?;
        if witness.value.valuation().is_some_and(|v| v < 1) {
            return Err(Error::InternalCheck(format!(
                "p = {} divides B_{} but L_p(0, omega^{}) is a unit",
                ctx.p(),
                rec.branch,
                rec.branch
            )));
        }
        hits.push(IrregularBranch {
            branch: rec.branch,
            witness,
        });
    }
    Ok(hits)
}

/// `1 - (1+p)^n`: clears the pole of the trivial branch at `1-n`.
pub fn pole_factor(n: u32, ctx: PadicContext) -> PadicNumber {
    let u = BigInt::from(1 + ctx.p());
    ctx.one() - ctx.integer(num_traits::pow(u, n as usize))
}
