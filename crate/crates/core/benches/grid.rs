use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hypercert::certify::ConditionSet;
use hypercert::exec::Execution;
use hypercert::hypergeom::{HypergeomParams, SeriesOptions};
use hypercert::scan::{run_scan, Range, ScanSpec};
use hypercert::verify::{verify_on_disk_with, DiskGrid, FunctionalKind, Target};

const SCHEDULES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn grid_verification(c: &mut Criterion) {
    let p = HypergeomParams::new(0.1, 0.1, 5.0).unwrap();
    let grid = DiskGrid::geometric(16, 128, 0.99).unwrap();
    let opts = SeriesOptions::default();
    let mut group = c.benchmark_group("verify_exp_convex_16x128");
    for (name, exec) in SCHEDULES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                verify_on_disk_with(
                    FunctionalKind::ExpConvex,
                    &p,
                    Target::ExpDisk,
                    &grid,
                    &opts,
                    exec,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn h2_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_h2_11x11x11");
    group.sample_size(20);
    for (name, exec) in SCHEDULES {
        let mut spec = ScanSpec::new(
            ConditionSet::H2,
            Range::new(-4.0, 0.0, 11).unwrap(),
            Range::new(0.0, 2.0, 11).unwrap(),
            Range::new(5.0, 15.0, 11).unwrap(),
        );
        spec.execution = exec;
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_scan(&spec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, grid_verification, h2_scan);
criterion_main!(benches);
