//! Monte Carlo trial throughput: the batched `run_trials` entry point (rayon
//! under the default `parallel` feature) against a plain sequential loop over
//! the same seeded trials.

use bellman_constant::hardy::{self, RandomStepConfig};
use bellman_constant::kernel::Exponents;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn trials_sequential(base_seed: u64, n: usize, cfg: &RandomStepConfig, exps: &Exponents) -> usize {
    (0..n as u64)
        .map(|i| {
            let h = hardy::random_step(base_seed + i, cfg);
            match hardy::check_inequality(&h, exps) {
                Ok(hardy::TrialVerdict::Evaluated(o)) => usize::from(o.passes()),
                _ => 0,
            }
        })
        .sum()
}

fn bench_trials(c: &mut Criterion) {
    let exps = Exponents::new(2.0, 1.5).unwrap();
    let cfg = RandomStepConfig::default();
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    for n in [32usize, 128] {
        group.bench_with_input(BenchmarkId::new("parallel_path", n), &n, |b, &n| {
            b.iter(|| hardy::run_trials(0, n, &cfg, &exps).len())
        });
        group.bench_with_input(BenchmarkId::new("sequential_baseline", n), &n, |b, &n| {
            b.iter(|| trials_sequential(0, n, &cfg, &exps))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_trials);
criterion_main!(benches);
