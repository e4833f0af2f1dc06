//! Truncated q-expansions `a_0 + a_1 q + … + a_M q^M` with p-adic
//! coefficients, the Hecke operators `T_l`, `U_p`, and `θ = q d/dq`.

use serde::Serialize;

use crate::characters::TeichCharacter;
use crate::error::{Error, Result};
use crate::kubota_leopoldt::zeta_weight;
use crate::padic::{is_prime, PadicContext, PadicNumber};
use crate::weight::{check_admissible, TwinConvention, WeightPoint};

/// A truncated q-expansion tagged with its weight `k` and nebentypus `ω^i`.
#[derive(Clone, Debug)]
pub struct QExpansion {
    ctx: PadicContext,
    weight: i64,
    char_exponent: u64,
    coeffs: Vec<PadicNumber>,
}

impl QExpansion {
    pub fn new(
        ctx: PadicContext,
        weight: i64,
        char_exponent: i64,
        coeffs: Vec<PadicNumber>,
    ) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a q-expansion needs at least a_0".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.context().p() != ctx.p()) {
            return Err(Error::ContextMismatch(format!(
                "{}-adic coefficient in a {}-adic expansion",
                c.p(),
                ctx.p()
            )));
        }
        let coeffs = coeffs.into_iter().map(|c| c.with_context(ctx)).collect();
        Ok(QExpansion {
            ctx,
            weight,
            char_exponent: TeichCharacter::new(ctx.p(), char_exponent).exponent(),
            coeffs,
        })
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn character(&self) -> TeichCharacter {
        TeichCharacter::new(self.ctx.p(), self.char_exponent as i64)
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&PadicNumber> {
        self.coeffs.get(n)
    }

    /// The truncation order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn truncate(&self, m: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(m + 1);
        out
    }

    pub fn with_coeff(mut self, n: usize, value: PadicNumber) -> Self {
        self.coeffs[n] = value.with_context(self.ctx);
        self
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a = &*a * c;
        }
        out
    }

    /// First index `n ≤ min(M, M')` with `a_n ≠ b_n` at the carried precision.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    /// `ε(l) l^(k-1)`, the lower coefficient of the `l`-Euler factor.
    fn nebentypus_factor(&self, l: u64) -> PadicNumber {
        let eps = self.character().eval(l as i64, self.ctx);
        eps * int_power(self.ctx, l, self.weight - 1)
    }

    /// `a_n(T_l f) = a_(nl) + ε(l) l^(k-1) a_(n/l)`, truncated to `⌊M/l⌋`.
    pub fn hecke_tl(&self, l: u64) -> Result<Self> {
        if !is_prime(l) {
            return Err(Error::Domain(format!("T_l needs l prime, got {l}")));
        }
        if l == self.ctx.p() {
            return Err(Error::Domain(format!("T_{l} requested at l = p; use U_p")));
        }
        let l = l as usize;
        let m = self.order() / l;
        let factor = self.nebentypus_factor(l as u64);
        let coeffs = (0..=m)
            .map(|n| {
                let up = self.coeffs[n * l].clone();
                if n % l == 0 {
                    up + &factor * &self.coeffs[n / l]
                } else {
                    up
                }
            })
            .collect();
        Ok(QExpansion { coeffs, ..self.clone() })
    }

    /// `a_n(U_p f) = a_(np)`, truncated to `⌊M/p⌋`.
    pub fn hecke_up(&self) -> Self {
        let p = self.ctx.p() as usize;
        let coeffs = (0..=self.order() / p).map(|n| self.coeffs[n * p].clone()).collect();
        QExpansion { coeffs, ..self.clone() }
    }

    /// `a_n ↦ n^r a_n`; raises the weight by `2r`.
    pub fn theta_pow(&self, r: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a * self.ctx.integer(n as u64).pow_u64(r as u64))
            .collect();
        QExpansion {
            coeffs,
            weight: self.weight + 2 * r as i64,
            ..self.clone()
        }
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ctx.p() != other.ctx.p() {
            return Err(Error::ContextMismatch("q-expansions over different primes".into()));
        }
        let m = self.order().min(other.order());
        let coeffs = (0..=m)
            .map(|n| {
                (0..=n).fold(self.ctx.zero(), |acc, u| {
                    acc + &self.coeffs[u] * &other.coeffs[n - u]
                })
            })
            .collect();
        Ok(QExpansion {
            ctx: self.ctx,
            weight: self.weight + other.weight,
            char_exponent: self.character().compose(&other.character())?.exponent(),
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ctx.p() != other.ctx.p() {
            return Err(Error::ContextMismatch("q-expansions over different primes".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(QExpansion { coeffs, ..self.clone() })
    }

    /// One line per coefficient: `n TAB valuation TAB unit digits TAB O(p^N)`.
    /// Digits are base p, least significant first; a coefficient that is zero
    /// to precision prints `inf` and `-`.
    pub fn dump(&self) -> String {
        let p = self.ctx.p();
        let mut out = String::new();
        for (n, a) in self.coeffs.iter().enumerate() {
            let (v, digits) = match a.valuation() {
                Some(v) => (
                    v.to_string(),
                    a.unit_digits()
                        .iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                None => ("inf".to_string(), "-".to_string()),
            };
            out.push_str(&format!("{n}\t{v}\t{digits}\tO({p}^{})\n", a.absolute_precision()));
        }
        out
    }
}

/// `l^e` for any integer `e`, `l` prime to p.
fn int_power(ctx: PadicContext, l: u64, e: i64) -> PadicNumber {
    let x = ctx.integer(l).pow_u64(e.unsigned_abs());
    if e >= 0 {
        x
    } else {
        x.try_inv().expect("l is prime to p")
    }
}

fn smallest_prime_factors(m: usize) -> Vec<usize> {
    let mut spf = vec![0usize; m + 1];
    for n in 2..=m {
        if spf[n] == 0 {
            for k in (n..=m).step_by(n) {
                if spf[k] == 0 {
                    spf[k] = n;
                }
            }
        }
    }
    spf
}

pub fn primes_up_to(m: u64) -> Vec<u64> {
    (2..=m).filter(|&n| is_prime(n)).collect()
}

/// Coefficients `a_1..a_M` of a normalized multiplicative series from its
/// values on prime powers; `a_0` is left at zero.
fn multiplicative(
    ctx: PadicContext,
    m: usize,
    mut prime_powers: impl FnMut(u64, usize) -> Vec<PadicNumber>,
) -> Vec<PadicNumber> {
    let spf = smallest_prime_factors(m);
    let mut a = vec![ctx.zero(); m + 1];
    if m >= 1 {
        a[1] = ctx.one();
    }
    let primes: Vec<usize> = (2..=m).filter(|&n| spf[n] == n).collect();
    for l in primes {
        let mut r = 0;
        let mut q = 1;
        while q <= m / l {
            q *= l;
            r += 1;
        }
        // powers[t] = a_(l^t), t = 0..=r
        let powers = prime_powers(l as u64, r);
        let mut q = 1;
        for x in powers.into_iter().skip(1) {
            q *= l;
            a[q] = x;
        }
    }
    for n in 2..=m {
        let l = spf[n];
        let mut q = 1;
        let mut rest = n;
        while rest % l == 0 {
            rest /= l;
            q *= l;
        }
        if rest != 1 {
            a[n] = &a[q] * &a[rest];
        }
    }
    a
}

/// The critical Eisenstein series of weight `k` and character `ε = ω^i`:
/// `a_l = ε(l) + l^(k-1)` for `l ≠ p`, `a_p = p^(k-1)`.
pub fn eisenstein_critical(k: i64, i: i64, m: usize, ctx: PadicContext) -> Result<QExpansion> {
    let p = ctx.p();
    check_admissible(p, k, i)?;
    let eps = TeichCharacter::new(p, i);
    let coeffs = multiplicative(ctx, m, |l, r| {
        let mut out = vec![ctx.one()];
        if l == p {
            let pk = ctx.integer(p).pow_u64(k as u64 - 1);
            for t in 1..=r {
                out.push(&out[t - 1] * &pk);
            }
            return out;
        }
        let lk = ctx.integer(l).pow_u64(k as u64 - 1);
        let e = eps.eval(l as i64, ctx);
        let al = &e + &lk;
        let lower = e * lk;
        for t in 1..=r {
            let mut next = &al * &out[t - 1];
            if t >= 2 {
                next = next - &lower * &out[t - 2];
            }
            out.push(next);
        }
        out
    });
    QExpansion::new(ctx, k, i, coeffs)
}

#[derive(Clone, Debug)]
pub struct OrdinaryEisenstein {
    pub series: QExpansion,
    /// Set for the trivial weight, where the series is the constant 1.
    pub degenerate: bool,
}

/// The ordinary Eisenstein series at a classical weight `w`:
/// `a_0 = ζ_p(w)/2`, `a_p = 1`, `a_l = 1 + w(l)/l`.
pub fn eisenstein_ordinary(w: &WeightPoint, m: usize, ctx: PadicContext) -> Result<OrdinaryEisenstein> {
    let c = w
        .classical_coordinates()
        .ok_or_else(|| Error::Domain("ordinary Eisenstein series needs a classical weight".into()))?;
    if w.is_trivial() {
        let mut coeffs = vec![ctx.zero(); m + 1];
        coeffs[0] = ctx.one();
        return Ok(OrdinaryEisenstein {
            series: QExpansion::new(ctx, 0, 0, coeffs)?,
            degenerate: true,
        });
    }
    let p = ctx.p();
    let mut coeffs = multiplicative(ctx, m, |l, r| {
        if l == p {
            return vec![ctx.one(); r + 1];
        }
        let x = w.eval_classical(l as i64, ctx).expect("classical weight")
            * int_power(ctx, l, -1);
        let mut out = vec![ctx.one()];
        let mut xt = ctx.one();
        for t in 1..=r {
            xt = &xt * &x;
            let next = &out[t - 1] + &xt;
            out.push(next);
        }
        out
    });
    let zeta = zeta_weight(w, ctx)?;
    coeffs[0] = zeta.value.try_div(&ctx.integer(2))?;
    Ok(OrdinaryEisenstein {
        series: QExpansion::new(ctx, c.k, c.i as i64, coeffs)?,
        degenerate: false,
    })
}

/// Outcome of comparing `T f` with `λ f` for one operator.
#[derive(Clone, Debug, Serialize)]
pub struct OperatorCheck {
    pub operator: String,
    pub eigenvalue: PadicNumber,
    pub passed: bool,
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigensystemReport {
    pub normalized: bool,
    pub operators: Vec<OperatorCheck>,
}

impl EigensystemReport {
    pub fn passed(&self) -> bool {
        self.normalized && self.operators.iter().all(|o| o.passed)
    }
}

/// Checks `T_l f = a_l f` for primes `l ≤ primes_bound`, `l ≠ p`, and
/// `U_p f = a_p f`, each on its own truncation.
pub fn verify_eigensystem(f: &QExpansion, primes_bound: u64) -> EigensystemReport {
    let ctx = f.context();
    let p = ctx.p();
    let mut operators = Vec::new();
    let mut check = |name: String, image: QExpansion, eigenvalue: PadicNumber| {
        let expected = f.truncate(image.order()).scale(&eigenvalue);
        let first_failure = image.first_difference(&expected);
        operators.push(OperatorCheck {
            operator: name,
            eigenvalue,
            passed: first_failure.is_none(),
            first_failure,
        });
    };
    for l in primes_up_to(primes_bound) {
        if l == p || l as usize > f.order() {
            continue;
        }
        let image = f.hecke_tl(l).expect("l is a prime different from p");
        check(format!("T_{l}"), image, f.coeffs[l as usize].clone());
    }
    if p as usize <= f.order() {
        check("U_p".into(), f.hecke_up(), f.coeffs[p as usize].clone());
    }
    EigensystemReport {
        normalized: f.coeff(1).is_some_and(|a| a == &ctx.one()),
        operators,
    }
}

/// One candidate character for the twin weight `z^(2-k) ε^(∓1)`.
#[derive(Clone, Debug, Serialize)]
pub struct ConventionOutcome {
    pub convention: TwinConvention,
    pub twin_weight: i64,
    pub twin_char_exponent: u64,
    pub twin_branch: u64,
    pub coefficients_match: bool,
    pub first_mismatch: Option<usize>,
    pub eigenvalues_match: bool,
    pub constant_terms_vanish: bool,
}

impl ConventionOutcome {
    pub fn matches(&self) -> bool {
        self.coefficients_match && self.eigenvalues_match && self.constant_terms_vanish
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwinCheckReport {
    pub outcomes: Vec<ConventionOutcome>,
    pub matching: Vec<TwinConvention>,
}

/// Compares `θ^(k-1) E^ord_(w*)` with `E^crit_w` for both twin conventions.
///
/// Fails with [`Error::InternalCheck`] when neither convention matches.
pub fn theta_twin_check(k: i64, i: i64, m: usize, ctx: PadicContext) -> Result<TwinCheckReport> {
    let p = ctx.p();
    let crit = eisenstein_critical(k, i, m, ctx)?;
    let w = WeightPoint::classical(k, i, ctx)?;
    let mut outcomes = Vec::new();
    for convention in [TwinConvention::InverseCharacter, TwinConvention::SameCharacter] {
        let twin = w
            .twin(convention)
            .ok_or_else(|| Error::InternalCheck("twin of a classical weight".into()))?;
        let ord = eisenstein_ordinary(&twin, m, ctx)?.series;
        let lifted = ord.theta_pow((k - 1) as u32);
        let first_mismatch = lifted.coeffs[1..]
            .iter()
            .zip(&crit.coeffs[1..])
            .position(|(a, b)| a != b)
            .map(|n| n + 1);
        let eigenvalues_match = primes_up_to(m as u64).into_iter().all(|l| {
            let scale = ctx.integer(l).pow_u64((k - 1) as u64);
            scale * &ord.coeffs[l as usize] == crit.coeffs[l as usize]
        });
        let tw = twin.classical_coordinates().expect("classical twin");
        outcomes.push(ConventionOutcome {
            convention,
            twin_weight: tw.k,
            twin_char_exponent: tw.i,
            twin_branch: twin.branch(),
            coefficients_match: first_mismatch.is_none(),
            first_mismatch,
            eigenvalues_match,
            constant_terms_vanish: lifted.coeffs[0].is_zero_to_precision()
                && crit.coeffs[0].is_zero_to_precision(),
        });
    }
    let matching: Vec<_> = outcomes
        .iter()
        .filter(|o| o.matches())
        .map(|o| o.convention)
        .collect();
    if matching.is_empty() {
        return Err(Error::InternalCheck(format!(
            "theta^{} twin identity fails for both conventions at p = {p}, k = {k}, i = {i}",
            k - 1
        )));
    }
    Ok(TwinCheckReport { outcomes, matching })
}
