//! Benchmark the data-parallel determinant assembly against the sequential
//! path on a representative correlation sweep.

use criterion::{criterion_group, criterion_main, Criterion};
use icorr::det::{det_series, SeriesMatrix};
use icorr::special::{matrix_element, ElementCtx, MatrixElementFamily};

const DIM: usize = 5;
const ORDER: i64 = 28;

fn entry(i: usize, j: usize) -> Result<icorr::SeriesK, icorr::SeriesError> {
    let idx = i as i64 - j as i64;
    matrix_element(MatrixElementFamily::FwOdd, idx, &ElementCtx::fw(5), ORDER)
}

fn sequential(c: &mut Criterion) {
    c.bench_function("c05_determinant_sequential", |b| {
        b.iter(|| {
            let m = SeriesMatrix::from_fn(DIM, entry).unwrap();
            det_series(&m).unwrap()
        })
    });
}

#[cfg(feature = "parallel")]
fn parallel(c: &mut Criterion) {
    c.bench_function("c05_determinant_parallel", |b| {
        b.iter(|| {
            let m = SeriesMatrix::from_fn_par(DIM, entry).unwrap();
            det_series(&m).unwrap()
        })
    });
}

#[cfg(not(feature = "parallel"))]
fn parallel(_c: &mut Criterion) {}

criterion_group! {
    name = sweep;
    config = Criterion::default().sample_size(10);
    targets = sequential, parallel
}
criterion_main!(sweep);
