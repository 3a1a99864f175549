use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use prstirling::identities::{run_suite, Execution, Grid, IdentityId};

fn suite(c: &mut Criterion) {
    let grid = Grid::desk().with_n_max(7);
    let cases = [
        ("three_formula", vec![IdentityId::T2_1VsT2_2, IdentityId::T2_1VsT2_3]),
        ("recurrence", vec![IdentityId::T2_8]),
        ("dobinski", vec![IdentityId::T2_7]),
    ];
    let mut group = c.benchmark_group("verify_suite");
    group.sample_size(10);
    for (name, ids) in &cases {
        for (mode, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(*name, mode), ids, |b, ids| {
                b.iter(|| run_suite(&grid, ids, execution).expect("suite runs"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suite);
criterion_main!(benches);
