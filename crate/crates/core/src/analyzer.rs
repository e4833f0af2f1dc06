//! Analysis of a critical Eisenstein point `x_w`, `w = z^k ε`, and batch
//! scans over ranges of `(p, k, i)`.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::bernoulli::generalized_bernoulli;
use crate::characters::TeichCharacter;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::kubota_leopoldt::{irregular_scan, zeta_weight, IrregularBranch, LValue};
use crate::lfunction_orders::selmer_dims;
use crate::padic::{is_prime, PadicContext, PadicNumber};
use crate::qexp::{
    eisenstein_critical, eisenstein_ordinary, theta_twin_check, verify_eigensystem,
};
use crate::weight::{check_admissible, TwinConvention, WeightPoint};

pub const DEFAULT_PRECISION: u32 = 20;
pub const DEFAULT_TERMS: usize = 200;
pub const MAX_PRECISION: u32 = 400;
pub const MAX_TERMS: usize = 20_000;
pub const MAX_PRIME: u64 = 2000;
/// Hecke operators `T_l` are checked for every prime `l` up to this bound.
pub const EIGEN_PRIME_BOUND: u64 = 20;

const SMOOTH_REASON: &str =
    "the eigencurve is smooth at every critical Eisenstein point with k >= 2 and (k, eps) != (2, 1)";
const DEGREE_NOTE: &str = "deg kappa at x_w = deg kappa at y_{w*}";

#[derive(Clone, Debug, Serialize)]
pub struct SmoothVerdict {
    pub holds: bool,
    pub reason: &'static str,
}

/// Whether the weight map is étale at `x_w`, i.e. whether `ζ_p(w*) ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EtaleVerdict {
    /// p is regular, so ζ_p has no zeros at all.
    EtaleProvably,
    /// `ζ_p(w*)` is nonzero modulo `p^precision`.
    EtaleAtPrecision { precision: u32 },
    /// `ζ_p(w*)` is zero modulo `p^precision`; étaleness is undecided.
    ZeroToPrecision { precision: u32 },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Checks {
    pub eigensystem_crit: bool,
    pub eigensystem_ord: bool,
    pub theta_twin: bool,
    pub zeta_constant_term: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.eigensystem_crit && self.eigensystem_ord && self.theta_twin && self.zeta_constant_term
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalPointReport {
    pub p: u64,
    pub k: i64,
    pub i: u64,
    pub precision: u32,
    pub qexp_terms: usize,
    pub slope: i64,
    pub up_eigenvalue: PadicNumber,
    pub twin: WeightPoint,
    pub zeta_twin: LValue,
    pub verdict_smooth: SmoothVerdict,
    pub verdict_etale: EtaleVerdict,
    pub degree_note: &'static str,
    pub selmer_dims: (u32, u32),
    pub galois_local: String,
    pub twin_conventions: Vec<TwinConvention>,
    pub checks: Checks,
}

fn check_limits(p: u64, precision: u32, terms: usize) -> Result<PadicContext> {
    if p > MAX_PRIME {
        return Err(Error::Inadmissible(format!("p = {p} exceeds the ceiling {MAX_PRIME}")));
    }
    if precision > MAX_PRECISION {
        return Err(Error::Inadmissible(format!(
            "precision {precision} exceeds the ceiling {MAX_PRECISION}"
        )));
    }
    if terms > MAX_TERMS {
        return Err(Error::Inadmissible(format!(
            "{terms} q-expansion terms exceed the ceiling {MAX_TERMS}"
        )));
    }
    if !is_prime(p) || p < 3 {
        return Err(Error::InvalidPrime(p));
    }
    PadicContext::new(p, precision)
}

/// Full report for `x_w`, `w = z^k ω^i`, at precision `N` with `M` terms.
pub fn analyze_point(p: u64, k: i64, i: i64, precision: u32, terms: usize) -> Result<CriticalPointReport> {
    let ctx = check_limits(p, precision, terms)?;
    check_admissible(p, k, i)?;
    let regular = irregular_scan(ctx)?.is_empty();
    analyze_in(ctx, k, i, terms, regular)
}

fn analyze_in(ctx: PadicContext, k: i64, i: i64, terms: usize, regular: bool) -> Result<CriticalPointReport> {
    let p = ctx.p();
    check_admissible(p, k, i)?;
    let slope = k - 1;
    if slope >= ctx.precision() as i64 {
        return Err(Error::PrecisionBudget(format!(
            "U_p eigenvalue p^{slope} is zero modulo p^{}; raise the precision above {slope}",
            ctx.precision()
        )));
    }
    let up_eigenvalue = ctx.integer(p).pow_u64(slope as u64);
    if up_eigenvalue.valuation() != Some(slope) {
        return Err(Error::InternalCheck("v(U_p) differs from the slope".into()));
    }

    let w = WeightPoint::classical(k, i, ctx)?;
    let twin = w
        .twin(TwinConvention::InverseCharacter)
        .ok_or_else(|| Error::InternalCheck("twin weight is not classical".into()))?;
    let zeta_twin = zeta_weight(&twin, ctx)?;
    let verdict_etale = if regular {
        if zeta_twin.is_zero_to_precision() {
            return Err(Error::InternalCheck(format!(
                "p = {p} is regular but zeta_p(w*) vanishes to precision"
            )));
        }
        EtaleVerdict::EtaleProvably
    } else if zeta_twin.is_zero_to_precision() {
        EtaleVerdict::ZeroToPrecision {
            precision: zeta_twin.precision_achieved,
        }
    } else {
        EtaleVerdict::EtaleAtPrecision {
            precision: zeta_twin.precision_achieved,
        }
    };

    let crit = eisenstein_critical(k, i, terms, ctx)?;
    let ord = eisenstein_ordinary(&w, terms, ctx)?.series;
    let eigensystem_crit = verify_eigensystem(&crit, EIGEN_PRIME_BOUND).passed()
        && crit.coeff(p as usize).is_none_or(|a| a == &up_eigenvalue);
    let eigensystem_ord = verify_eigensystem(&ord, EIGEN_PRIME_BOUND).passed();
    let twin_report = theta_twin_check(k, i, terms, ctx)?;

    // 2 a_0(E^ord_w) against -(1 - ε(p) p^(k-1)) B_{k,ε} / k
    let eps = TeichCharacter::new(p, i);
    let b = generalized_bernoulli(k as usize, &eps, ctx.with_precision(ctx.precision() + 4))?;
    let euler = if eps.is_trivial() {
        ctx.one() - ctx.integer(p).pow_u64(slope as u64)
    } else {
        ctx.one()
    };
    let expected = -(euler * b.with_context(ctx)).try_div(&ctx.integer(k))?;
    let zeta_constant_term = ord.coeffs()[0].clone() * ctx.integer(2) == expected;

    Ok(CriticalPointReport {
        p,
        k,
        i: eps.exponent(),
        precision: ctx.precision(),
        qexp_terms: terms,
        slope,
        up_eigenvalue,
        twin,
        zeta_twin,
        verdict_smooth: SmoothVerdict {
            holds: true,
            reason: SMOOTH_REASON,
        },
        verdict_etale,
        degree_note: DEGREE_NOTE,
        selmer_dims: selmer_dims(p, k, i)?,
        galois_local: format!(
            "extension of {eps} * u^-1 by cyclotomic^({}) * u, u unramified with u(Frob_p) = U_p / p^{slope} = 1",
            1 - k
        ),
        twin_conventions: twin_report.matching,
        checks: Checks {
            eigensystem_crit,
            eigensystem_ord,
            theta_twin: true,
            zeta_constant_term,
        },
    })
}

impl CriticalPointReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let eps = TeichCharacter::new(self.p, self.i as i64);
        let _ = writeln!(s, "critical Eisenstein point p = {}, k = {}, eps = {eps}", self.p, self.k);
        let _ = writeln!(s, "  slope            {}", self.slope);
        let _ = writeln!(s, "  U_p eigenvalue   {}", self.up_eigenvalue);
        let _ = writeln!(s, "  twin branch      {}", self.twin.branch());
        let _ = writeln!(s, "  zeta_p(w*)       {}", self.zeta_twin.value);
        let _ = writeln!(s, "  smooth           {}", self.verdict_smooth.holds);
        let _ = writeln!(s, "  etale            {:?}", self.verdict_etale);
        let _ = writeln!(s, "  degree           {}", self.degree_note);
        let _ = writeln!(s, "  selmer dims      {:?}", self.selmer_dims);
        let _ = writeln!(s, "  local Galois     {}", self.galois_local);
        let _ = writeln!(s, "  twin conventions {:?}", self.twin_conventions);
        let _ = writeln!(s, "  checks           {:?}", self.checks);
        s
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub p_from: u64,
    pub p_to: u64,
    pub k_from: i64,
    pub k_to: i64,
    pub irregular_only: bool,
    /// Pick `i` so that `ζ_p(w*)` lies on this branch.
    pub twin_branch: Option<i64>,
    pub precision: u32,
    pub terms: usize,
    pub execution: Execution,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            p_from: 3,
            p_to: 3,
            k_from: 3,
            k_to: 10,
            irregular_only: false,
            twin_branch: None,
            precision: DEFAULT_PRECISION,
            terms: DEFAULT_TERMS,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum ScanRecord {
    IrregularBranch {
        p: u64,
        #[serde(flatten)]
        branch: IrregularBranch,
    },
    Point(Box<CriticalPointReport>),
}

/// Runs the scan. Records are ordered by p, with the irregular branches of
/// each prime before its points, and points sorted by `(k, i)`.
pub fn scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let primes: Vec<u64> = (cfg.p_from.max(3)..=cfg.p_to).filter(|&p| is_prime(p)).collect();
    for &p in &primes {
        check_limits(p, cfg.precision, cfg.terms)?;
    }
    if let Some(j) = cfg.twin_branch {
        if j % 2 != 0 {
            return Err(Error::OddBranch { p: cfg.p_from, branch: j });
        }
    }

    let irregular: Vec<Vec<IrregularBranch>> = cfg
        .execution
        .map(primes.clone(), |p| irregular_scan(PadicContext::new(p, cfg.precision)?))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut tuples = Vec::new();
    if !cfg.irregular_only {
        for (&p, hits) in primes.iter().zip(&irregular) {
            let m = (p - 1) as i64;
            for k in cfg.k_from..=cfg.k_to {
                let candidates: Vec<i64> = match cfg.twin_branch {
                    Some(j) => vec![(2 - k - j).rem_euclid(m)],
                    None => (0..m).collect(),
                };
                for i in candidates {
                    if check_admissible(p, k, i).is_ok() {
                        tuples.push((p, k, i, hits.is_empty()));
                    }
                }
            }
        }
    }
    let points: Vec<CriticalPointReport> = cfg
        .execution
        .map(tuples, |(p, k, i, regular)| {
            analyze_in(PadicContext::new(p, cfg.precision)?, k, i, cfg.terms, regular)
        })
        .into_iter()
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    let mut points = points.into_iter().peekable();
    for (p, hits) in primes.into_iter().zip(irregular) {
        for branch in hits {
            out.push(ScanRecord::IrregularBranch { p, branch });
        }
        while let Some(r) = points.next_if(|r| r.p == p) {
            out.push(ScanRecord::Point(Box::new(r)));
        }
    }
    Ok(out)
}

/// Writes records as JSON lines.
pub fn write_json_lines(records: &[ScanRecord], mut out: impl Write) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
