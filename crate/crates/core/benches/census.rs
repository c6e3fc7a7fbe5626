use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matwaring::oracle::{census, CensusSpec};
use matwaring::poly::count_points_superelliptic_with;
use matwaring::{Engine, Execution, FieldCtx, Mat, Poly};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn census_cells(c: &mut Criterion) {
    let spec = CensusSpec {
        primes: vec![5, 7, 11],
        degrees: vec![1],
        sizes: vec![2],
        exponents: vec![2, 3],
    };
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| census(&spec, exec)));
    }
    group.finish();
}

fn batch_decomposition(c: &mut Criterion) {
    let f = FieldCtx::prime(101).unwrap();
    let engine = Engine::new(&f, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut group = c.benchmark_group("decompose_batch");
    group.sample_size(10);
    for n in [2usize, 4] {
        let mats: Vec<Mat> = (0..200)
            .map(|_| {
                let data = (0..n * n).map(|_| f.elem(rng.gen_range(0..101))).collect();
                Mat::from_vec(n, data).unwrap()
            })
            .collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &mats, |b, mats| {
                b.iter(|| engine.decompose_batch(mats, exec))
            });
        }
    }
    group.finish();
}

fn point_counts(c: &mut Criterion) {
    let f = FieldCtx::prime(1_000_003).unwrap();
    let g = Poly::from_ints(&f, &[3, 1, 0, 1]);
    let mut group = c.benchmark_group("count_points");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| count_points_superelliptic_with(&f, 2, &g, exec)));
    }
    group.finish();
}

criterion_group!(benches, census_cells, batch_decomposition, point_counts);
criterion_main!(benches);
