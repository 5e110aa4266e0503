use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quiverlab::*;

fn dv(v: &[i64]) -> DimVector {
    DimVector::new(v.to_vec()).unwrap()
}

fn d4_tilde() -> Quiver {
    Quiver::from_edges(5, &[(1, 0), (2, 0), (3, 0), (4, 0)])
}

fn roots(c: &mut Criterion) {
    let q = d4_tilde();
    c.bench_function("classify_root d4~ (4,2,2,2,2)", |b| {
        b.iter(|| classify_root(&q, black_box(&[4, 2, 2, 2, 2])))
    });
    c.bench_function("positive_roots_up_to kronecker3 (6,6)", |b| {
        let k = Quiver::kronecker(3);
        b.iter(|| positive_roots_up_to(&k, black_box(&dv(&[6, 6]))))
    });
}

fn sigma(c: &mut Criterion) {
    let mut group = c.benchmark_group("in_sigma");
    let q = d4_tilde();
    for k in 1..=3 {
        let alpha = dv(&[2 * k, k, k, k, k]);
        group.bench_with_input(BenchmarkId::new("d4~ k*delta", k), &alpha, |b, a| {
            b.iter(|| in_sigma(&q, &Weight::zeros(5), a))
        });
    }
    group.finish();
}

fn darboux_bench(c: &mut Criterion) {
    let algebra = SemisimpleAlgebra::new(vec![1, 2, 2]).unwrap();
    let module =
        Bimodule::new(&algebra, vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 0]]).unwrap();
    let standard = BalancedForm::standard(&module).unwrap();
    let mut g = BTreeMap::new();
    for (i, row) in module.multiplicities().iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            if m > 0 {
                let mut t = QMatrix::identity(m);
                if m > 1 {
                    t[(0, 1)] = rational::ratio(1, 2);
                }
                g.insert((i, j), t);
            }
        }
    }
    let form = standard.transformed(&module, &g).unwrap();
    let s = maximal_isotropic(&module, &form);
    c.bench_function("darboux dim 22", |b| {
        b.iter(|| darboux(&module, &form, black_box(&s)).unwrap())
    });
}

fn solve(c: &mut Criterion) {
    let q = Quiver::kronecker(3);
    let cfg = SolverConfig::default();
    c.bench_function("solve_multistart kronecker3 (2,2)", |b| {
        b.iter(|| {
            solve_multistart(&q, &dv(&[2, 2]), &Weight::zeros(2), black_box(7), 8, &cfg).unwrap()
        })
    });
}

criterion_group!(benches, roots, sigma, darboux_bench, solve);
criterion_main!(benches);
