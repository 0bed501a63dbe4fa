use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bvlift::convergence::{make_family, run_experiment, FamilyParams, ReportConfig};
use bvlift::generators;
use bvlift::integrand::registry;
use bvlift::lifting::{lifting_convergence_report, TestFunction};
use bvlift::{Execution, QuadratureSpec};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn experiment(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_experiment");
    group.sample_size(10);
    let params = FamilyParams { base: Some(generators::three_steps()), ..FamilyParams::default() };
    let fam = make_family("mollified", &params).unwrap();
    for (label, mode) in modes() {
        let cfg = ReportConfig {
            integrands: ["area", "nonconvex", "ygrowth-2"]
                .iter()
                .map(|n| registry(n).unwrap())
                .collect(),
            k: Some(0.5),
            quadrature: QuadratureSpec::default().with_execution(mode),
            ..ReportConfig::default()
        };
        group.bench_with_input(BenchmarkId::new("mollified_three_steps", label), &cfg, |b, cfg| {
            b.iter(|| run_experiment(&fam, cfg).unwrap())
        });
    }
    group.finish();
}

fn lifting(c: &mut Criterion) {
    let mut group = c.benchmark_group("lifting_report");
    group.sample_size(10);
    let fam = make_family("oscillation", &FamilyParams::default()).unwrap();
    let members: Vec<_> = fam.index_range().iter().map(|&j| (j, fam.member(j).unwrap())).collect();
    let dict = TestFunction::random_bumps(10, fam.limit().domain(), 0.0, 1.0, 1, 5);
    for (label, mode) in modes() {
        let q = QuadratureSpec::default().with_execution(mode);
        group.bench_function(BenchmarkId::new("oscillation", label), |b| {
            b.iter(|| lifting_convergence_report(&members, fam.limit(), &dict, &q).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, experiment, lifting);
criterion_main!(benches);
