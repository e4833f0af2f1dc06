//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use eiscurve::analyzer::{analyze_point, scan, write_json_lines, EtaleVerdict, ScanConfig, ScanRecord};
use eiscurve::exec::Execution;
use eiscurve::kubota_leopoldt::{
    irregular_scan, lp_interpolation, lp_series_at_integer, pole_factor, zeta_weight,
};
use eiscurve::lfunction_orders::selmer_dims;
use eiscurve::padic::{is_prime, valuation_u64, PadicContext};
use eiscurve::qexp::{eisenstein_critical, eisenstein_ordinary, theta_twin_check, verify_eigensystem};
use eiscurve::weight::{check_admissible, TwinConvention, WeightPoint};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn even_branches(p: u64) -> impl Iterator<Item = i64> {
    (0..(p - 1) as i64).step_by(2)
}

fn admissible(p: u64, ks: impl IntoIterator<Item = i64>) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for k in ks {
        for i in 0..(p - 1) as i64 {
            if check_admissible(p, k, i).is_ok() {
                out.push((k, i));
            }
        }
    }
    out
}

/// Two routes to `L_p(1-n, ω^j)` agree to 15 digits at N = 20.
fn criterion_1() -> Outcome {
    let mut cases = 0;
    let mut worst = i64::MAX;
    for p in [5u64, 7, 11, 13] {
        let ctx = PadicContext::new(p, 20).unwrap();
        for j in even_branches(p) {
            for n in 1..=20u32 {
                let a = lp_series_at_integer(1 - n as i64, j, ctx).map_err(|e| e.to_string())?;
                let b = lp_interpolation(n, j, ctx).map_err(|e| e.to_string())?;
                let agree = a.value.agreement(&b.value);
                ensure(agree >= 15, || format!("p={p} j={j} n={n}: {agree} digits"))?;
                worst = worst.min(agree);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, minimum agreement {worst} digits"))
}

/// Kummer congruences: on a branch `j ≠ 0` all values `L_p(1-n, ω^j)` are
/// integral and congruent mod p; on `j = 0` the same holds after clearing
/// the pole with `1 - (1+p)^n`.
fn criterion_2() -> Outcome {
    let mut pairs = 0;
    for p in [5u64, 7, 11, 13] {
        let ctx = PadicContext::new(p, 20).unwrap();
        for j in even_branches(p) {
            let values: Vec<_> = (1..=20u32)
                .map(|n| {
                    let v = lp_interpolation(n, j, ctx).unwrap().value;
                    if j == 0 {
                        v * pole_factor(n, ctx)
                    } else {
                        v
                    }
                })
                .collect();
            for (a, x) in values.iter().enumerate() {
                ensure(x.valuation().is_none_or(|v| v >= 0), || {
                    format!("p={p} j={j} n={}: not integral", a + 1)
                })?;
                for (b, y) in values.iter().enumerate().skip(a + 1) {
                    let d = x.clone() - y;
                    ensure(d.valuation().is_none_or(|v| v >= 1), || {
                        format!("p={p} j={j}: n={} and n={} differ mod p", a + 1, b + 1)
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} congruent pairs, 0 failures"))
}

/// Akiyama–Tanigawa: `B_n` (with `B_1 = +1/2`) as the first entry of the
/// n-th row of the transformed sequence `1, 1/2, 1/3, …`.
fn bernoulli_oracle(max: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(max + 1);
    let mut out = Vec::with_capacity(max + 1);
    for m in 0..=max {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
        out.push(a[0].clone());
    }
    out
}

/// Irregular pairs below 200, checked against an independent Bernoulli oracle.
fn criterion_3() -> Outcome {
    let oracle_b = bernoulli_oracle(200);
    let mut oracle = BTreeSet::new();
    for p in (3..200u64).filter(|&p| is_prime(p)) {
        for j in (2..p.saturating_sub(2)).step_by(2) {
            let num = oracle_b[j as usize].numer().clone();
            if !num.is_zero() && (num % BigInt::from(p)).is_zero() {
                oracle.insert((p, j));
            }
        }
    }
    let cfg = ScanConfig {
        p_from: 3,
        p_to: 199,
        irregular_only: true,
        ..ScanConfig::default()
    };
    let found: BTreeSet<(u64, u64)> = scan(&cfg)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter_map(|r| match r {
            ScanRecord::IrregularBranch { p, branch } => Some((p, branch.branch)),
            ScanRecord::Point(_) => None,
        })
        .collect();
    let listed: BTreeSet<(u64, u64)> = [
        (37, 32),
        (59, 44),
        (67, 58),
        (101, 68),
        (103, 24),
        (131, 22),
        (149, 130),
        (157, 62),
        (157, 110),
    ]
    .into_iter()
    .collect();
    ensure(found == oracle, || format!("scan {found:?} != oracle {oracle:?}"))?;
    ensure(found == listed, || format!("scan {found:?} != expected {listed:?}"))?;
    Ok(format!("{} pairs, matching the exact-numerator oracle", found.len()))
}

/// Critical and ordinary Eisenstein series are Hecke eigenforms, with
/// `U_p`-eigenvalues `p^(k-1)` and 1.
fn criterion_4() -> Outcome {
    let mut forms = 0;
    for p in [5u64, 7] {
        let ctx = PadicContext::new(p, 20).unwrap();
        for (k, i) in admissible(p, 3..=8) {
            let crit = eisenstein_critical(k, i, 200, ctx).map_err(|e| e.to_string())?;
            let w = WeightPoint::classical(k, i, ctx).unwrap();
            let ord = eisenstein_ordinary(&w, 200, ctx).map_err(|e| e.to_string())?.series;
            for (name, f, up) in [
                ("crit", &crit, ctx.integer(p).pow_u64(k as u64 - 1)),
                ("ord", &ord, ctx.one()),
            ] {
                let r = verify_eigensystem(f, 20);
                ensure(r.passed(), || format!("p={p} k={k} i={i} {name}: {r:?}"))?;
                let u = r.operators.iter().find(|o| o.operator == "U_p").unwrap();
                ensure(u.eigenvalue == up, || format!("p={p} k={k} i={i} {name}: U_p eigenvalue"))?;
                forms += 1;
            }
        }
    }
    Ok(format!("{forms} eigenforms, all T_l (l <= 20) and U_p exact"))
}

/// `n^(k-1) a_n(E^ord_(w*)) = a_n(E^crit_w)` for quadratic or trivial ε.
fn criterion_5() -> Outcome {
    let mut cases = Vec::new();
    for p in [5u64, 7] {
        let half = ((p - 1) / 2) as i64;
        for i in [0, half] {
            for k in [3i64, 4, 5, 6, 7, 8] {
                if (k % 2 == 0 || i % 2 == 1) && check_admissible(p, k, i).is_ok() {
                    cases.push((p, k, i));
                }
            }
        }
    }
    for &(p, k, i) in &cases {
        let ctx = PadicContext::new(p, 20).unwrap();
        let crit = eisenstein_critical(k, i, 200, ctx).unwrap();
        let w = WeightPoint::classical(k, i, ctx).unwrap();
        let twin = w.twin(TwinConvention::InverseCharacter).unwrap();
        let ord = eisenstein_ordinary(&twin, 200, ctx).unwrap().series;
        for n in 1..=200usize {
            let lhs = ctx.integer(n as u64).pow_u64(k as u64 - 1) * &ord.coeffs()[n];
            ensure(lhs == crit.coeffs()[n], || format!("p={p} k={k} i={i}: a_{n}"))?;
        }
        let lifted = ord.theta_pow(k as u32 - 1);
        ensure(
            lifted.coeffs()[0].is_zero_to_precision() && crit.coeffs()[0].is_zero_to_precision(),
            || format!("p={p} k={k} i={i}: constant terms"),
        )?;
        let r = theta_twin_check(k, i, 200, ctx).map_err(|e| e.to_string())?;
        ensure(r.matching.len() == 2, || format!("p={p} k={k} i={i}: {:?}", r.matching))?;
    }
    Ok(format!("{} cases, n <= 200, constant terms annihilated", cases.len()))
}

/// Selmer dimensions `(1, 0)` from the parity rule.
fn criterion_6() -> Outcome {
    let mut count = 0;
    for p in [3u64, 5, 7, 11, 13, 37] {
        for (k, i) in admissible(p, 2..=20) {
            let d = selmer_dims(p, k, i).map_err(|e| e.to_string())?;
            ensure(d == (1, 0), || format!("p={p} k={k} i={i}: {d:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} admissible (p, k, i), all (1, 0)"))
}

/// Verdicts. For regular p the twin value is a unit, except on the twin
/// branch 0 where the pole of ζ_p at `s = 1` forces `v = -1 - v(k-2)`.
fn criterion_7() -> Outcome {
    let mut points = 0;
    for p in [5u64, 7, 11, 13] {
        for (k, i) in admissible(p, 2..=10) {
            let r = analyze_point(p, k, i, 20, 200).map_err(|e| format!("p={p} k={k} i={i}: {e}"))?;
            ensure(r.verdict_smooth.holds, || format!("p={p} k={k} i={i}: not smooth"))?;
            ensure(r.verdict_etale == EtaleVerdict::EtaleProvably, || {
                format!("p={p} k={k} i={i}: {:?}", r.verdict_etale)
            })?;
            ensure(r.checks.all(), || format!("p={p} k={k} i={i}: {:?}", r.checks))?;
            let v = r.zeta_twin.value.valuation();
            let expected = if r.twin.branch() == 0 {
                -1 - valuation_u64((k - 2) as u64, p) as i64
            } else {
                0
            };
            ensure(v == Some(expected), || format!("p={p} k={k} i={i}: v = {v:?}, expected {expected}"))?;
            points += 1;
        }
    }

    let i = (2 - 4 - 32i64).rem_euclid(36);
    let r = analyze_point(37, 4, i, 20, 200).map_err(|e| e.to_string())?;
    let hi = analyze_point(37, 4, i, 30, 200).map_err(|e| e.to_string())?;
    ensure(r.twin.branch() == 32, || "p=37 twin branch".into())?;
    let qualified = matches!(
        r.verdict_etale,
        EtaleVerdict::EtaleAtPrecision { .. } | EtaleVerdict::ZeroToPrecision { .. }
    );
    ensure(qualified, || format!("p=37: {:?}", r.verdict_etale))?;
    let overlap = r.zeta_twin.value.absolute_precision();
    let agree = r
        .zeta_twin
        .value
        .agreement(&hi.zeta_twin.value.with_context(r.zeta_twin.value.context()));
    ensure(agree >= overlap, || format!("p=37: N+10 recomputation agrees to {agree} of {overlap}"))?;
    Ok(format!(
        "{points} regular points etale, p=37 branch 32 {:?} with v = {:?}, N+10 agreement {agree}",
        r.verdict_etale,
        r.zeta_twin.value.valuation()
    ))
}

/// `ζ_p(w) ≠ 0` at every classical weight `z^k ω^i`, `1 ≤ k ≤ 10`.
fn criterion_8() -> Outcome {
    let mut count = 0;
    for p in [5u64, 7, 11, 13, 37] {
        let ctx = PadicContext::new(p, 20).unwrap();
        for k in 1..=10i64 {
            for i in 0..(p - 1) as i64 {
                if (k + i) % 2 != 0 {
                    continue;
                }
                let w = WeightPoint::classical(k, i, ctx).unwrap();
                let z = zeta_weight(&w, ctx).map_err(|e| e.to_string())?;
                ensure(!z.is_zero_to_precision(), || format!("p={p} k={k} i={i}: zeta vanishes"))?;
                let ord = eisenstein_ordinary(&w, 10, ctx).map_err(|e| e.to_string())?;
                ensure(!ord.series.coeffs()[0].is_zero_to_precision(), || {
                    format!("p={p} k={k} i={i}: constant term vanishes")
                })?;
                count += 1;
            }
        }
    }
    // the witnesses of irregularity are nonzero as well
    let hits = irregular_scan(PadicContext::new(37, 20).unwrap()).map_err(|e| e.to_string())?;
    ensure(hits.iter().all(|h| !h.witness.is_zero_to_precision()), || "p=37 witness".into())?;
    Ok(format!("{count} classical weights, all nonzero"))
}

/// Two scans with the same flags write byte-identical JSON lines.
fn criterion_9() -> Outcome {
    let run = |execution| -> Result<Vec<u8>, String> {
        let cfg = ScanConfig {
            p_from: 5,
            p_to: 31,
            execution,
            ..ScanConfig::default()
        };
        let mut buf = Vec::new();
        let records = scan(&cfg).map_err(|e| e.to_string())?;
        write_json_lines(&records, &mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let a = run(Execution::Parallel)?;
    let b = run(Execution::Parallel)?;
    ensure(a == b, || "parallel runs differ".into())?;
    let lines = a.iter().filter(|&&c| c == b'\n').count();
    Ok(format!("{lines} lines, {} bytes, identical", a.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("two-route L_p agreement", criterion_1),
        ("Kummer congruences", criterion_2),
        ("irregular pairs below 200", criterion_3),
        ("Hecke eigensystems", criterion_4),
        ("theta twin identity", criterion_5),
        ("Selmer dimensions", criterion_6),
        ("verdict suite", criterion_7),
        ("classical nonvanishing", criterion_8),
        ("scan determinism", criterion_9),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({secs:.1}s)", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} ({secs:.1}s)", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
