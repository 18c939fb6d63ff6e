use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use zeta_forge::algebra::{shuffle_words, stuffle};
use zeta_forge::solver::solve_through;
use zeta_forge::{generate_l, IndexWord, SolverConfig};

fn products(c: &mut Criterion) {
    let u = IndexWord::new(vec![3, 1, 2, 1]).unwrap();
    let v = IndexWord::new(vec![2, 2, 1]).unwrap();
    c.bench_function("stuffle (3,1,2,1)*(2,2,1)", |b| b.iter(|| stuffle(black_box(&u), black_box(&v))));
    c.bench_function("shuffle (3,1,2,1)*(2,2,1)", |b| {
        b.iter(|| shuffle_words(black_box(&u), black_box(&v)))
    });
}

fn lyndon(c: &mut Criterion) {
    c.bench_function("lyndon set weight 28", |b| b.iter(|| generate_l(black_box(28))));
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for jobs in [1, 4] {
        let config = SolverConfig::default().with_jobs(jobs);
        group.bench_function(format!("through weight 10, {jobs} jobs"), |b| {
            b.iter(|| solve_through(10, &config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, products, lyndon, solve);
criterion_main!(benches);
