#![allow(dead_code)]

use kscope::{c64, ComplexMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

pub fn dense(a: &ComplexMatrix) -> DMatrix<c64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

pub fn from_dense(m: &DMatrix<c64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn norm2(m: &DMatrix<c64>) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

pub fn smin(m: &DMatrix<c64>) -> f64 {
    m.clone().svd(false, false).singular_values.min()
}

pub fn complex() -> impl Strategy<Value = c64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c64::new(a, b))
}

pub fn vector(n: usize) -> impl Strategy<Value = Vec<c64>> {
    prop::collection::vec(complex(), n).prop_filter("nonzero", |v| {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6
    })
}

/// Square matrix of dimension `lo..=hi` with entries in the unit square and
/// an upper triangle scaled by up to `skew`.
pub fn matrix(lo: usize, hi: usize, skew: f64) -> impl Strategy<Value = ComplexMatrix> {
    (lo..=hi, 0.0..=skew).prop_flat_map(|(n, s)| {
        prop::collection::vec(complex(), n * n).prop_map(move |v| {
            ComplexMatrix::from_fn(n, n, |i, j| {
                if j > i {
                    v[i * n + j] * (1.0 + s)
                } else {
                    v[i * n + j]
                }
            })
        })
    })
}

/// Matrix together with a starting vector of the same dimension.
pub fn matrix_and_vector(
    lo: usize,
    hi: usize,
    skew: f64,
) -> impl Strategy<Value = (ComplexMatrix, Vec<c64>)> {
    matrix(lo, hi, skew).prop_flat_map(|a| {
        let n = a.rows();
        (Just(a), vector(n))
    })
}
