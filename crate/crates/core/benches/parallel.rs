use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use eiscurve::analyzer::{scan, ScanConfig};
use eiscurve::exec::Execution;
use eiscurve::kubota_leopoldt::lp_series_at_integer;
use eiscurve::padic::PadicContext;

fn bench_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_p5_to_13");
    group.sample_size(10);
    for (name, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let cfg = ScanConfig {
            p_from: 5,
            p_to: 13,
            k_from: 3,
            k_to: 6,
            terms: 100,
            execution,
            ..ScanConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| black_box(scan(cfg).unwrap()))
        });
    }
    group.finish();
}

// The two-route grid of L_p values on one prime, mapped over branches.
fn bench_lp_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp_grid_p13");
    group.sample_size(10);
    let ctx = PadicContext::new(13, 20).unwrap();
    let jobs: Vec<(i64, i64)> = (0..12)
        .step_by(2)
        .flat_map(|j| (1..=10).map(move |n| (j, 1 - n)))
        .collect();
    for (name, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(name, |b| {
            b.iter(|| {
                execution.map(jobs.clone(), |(j, s)| lp_series_at_integer(s, j, ctx).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_scan, bench_lp_grid);
criterion_main!(benches);
