use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lifshitz_core::{DielectricModel, Execution, LifshitzEngine, PlanarScenario};

fn engines() -> [(&'static str, LifshitzEngine); 2] {
    [
        ("sequential", LifshitzEngine::with_execution(Execution::Sequential)),
        ("parallel", LifshitzEngine::with_execution(Execution::Parallel)),
    ]
}

fn matsubara_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("free_energy");
    let drude = DielectricModel::drude_ev(9.0, 0.035).unwrap();
    let cases = [
        ("drude_1um_300K", PlanarScenario::new(drude.clone(), DielectricModel::Vacuum, 1e-6, 300.0).unwrap()),
        ("drude_100nm_300K", PlanarScenario::new(drude, DielectricModel::Vacuum, 1e-7, 300.0).unwrap()),
    ];
    for (label, scenario) in &cases {
        for (mode, engine) in engines() {
            group.bench_with_input(BenchmarkId::new(mode, label), scenario, |b, s| {
                b.iter(|| engine.free_energy(black_box(s), 1e-8).unwrap())
            });
        }
    }
    group.finish();
}

fn zero_temperature(c: &mut Criterion) {
    let mut group = c.benchmark_group("free_energy_zero_t");
    let scenario = PlanarScenario::new(DielectricModel::IdealMetal, DielectricModel::Vacuum, 1e-6, 0.0).unwrap();
    for (mode, engine) in engines() {
        group.bench_function(mode, |b| b.iter(|| engine.free_energy_zero_t(black_box(&scenario), 1e-8).unwrap()));
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = matsubara_sum, zero_temperature
}
criterion_main!(benches);
