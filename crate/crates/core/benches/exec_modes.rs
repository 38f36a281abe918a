//! Sequential vs. parallel batch analysis.
//!
//! The workload is a batch of independent machines (satisfiability families
//! at two degrees, a pumping chain, and the quadratic transfer loop), each
//! of which gets a full termination-length analysis. The two benchmarks
//! differ only in [`ExecMode`]; their results are asserted identical once
//! before timing.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyvass::analysis::AnalysisOptions;
use polyvass::generators::{canonical_unsat, gen_example1, gen_pumper, gen_sat, CnfFormula};
use polyvass::model::CounterVass;
use polyvass::par::{batch_length_growth, ExecMode};

fn workload() -> Vec<CounterVass> {
    let sat = CnfFormula::new(2, vec![[1, 2, -1], [-1, -2, 2]]).unwrap();
    let mut machines = Vec::new();
    for k in 2..=3 {
        machines.push(gen_sat(&sat, k));
        machines.push(gen_sat(&canonical_unsat(), k));
    }
    machines.push(gen_pumper(&[1, 2, 3]).vass);
    machines.push(gen_example1());
    machines
}

fn bench_modes(c: &mut Criterion) {
    let machines = workload();
    let opts = AnalysisOptions::default();
    assert_eq!(
        batch_length_growth(&machines, &opts, ExecMode::Sequential),
        batch_length_growth(&machines, &opts, ExecMode::Parallel),
        "modes must agree before we time them"
    );
    let mut group = c.benchmark_group("batch_length_growth");
    group.sample_size(10);
    for mode in [ExecMode::Sequential, ExecMode::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{mode:?}")),
            &mode,
            |b, &mode| b.iter(|| batch_length_growth(&machines, &opts, mode)),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_modes);
criterion_main!(benches);
