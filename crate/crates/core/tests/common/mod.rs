//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvi_core::{DenseTensor, SquareTensor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// a_1111 = a_2222 = 1, all other entries zero.
pub fn diag_quartic() -> SquareTensor {
    SquareTensor::from_entries(4, 2, &[(vec![0, 0, 0, 0], 1.0), (vec![1, 1, 1, 1], 1.0)]).unwrap()
}

/// a_1111 = a_2222 = a_2112 = 1, a_1122 = -1.
pub fn twisted_quartic() -> SquareTensor {
    SquareTensor::from_entries(
        4,
        2,
        &[
            (vec![0, 0, 0, 0], 1.0),
            (vec![1, 1, 1, 1], 1.0),
            (vec![1, 0, 0, 1], 1.0),
            (vec![0, 0, 1, 1], -1.0),
        ],
    )
    .unwrap()
}

pub fn random_square(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> SquareTensor {
    let len = dim.pow(order as u32);
    let entries = uniform_vec(rng, len, -1.0, 1.0);
    SquareTensor::new(DenseTensor::new(vec![dim; order], entries).unwrap()).unwrap()
}

/// Every multi-index of the given shape, row-major, built with a cartesian product.
pub fn all_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    if dims.is_empty() {
        return vec![vec![]];
    }
    dims.iter().map(|&d| 0..d).multi_cartesian_product().collect()
}

/// Row-major entry lookup computed from scratch.
pub fn entry(t: &DenseTensor, idx: &[usize]) -> f64 {
    let mut off = 0;
    for (i, &d) in idx.iter().zip(t.dims()) {
        off = off * d + i;
    }
    t.entries()[off]
}

/// Brute-force `A x^{m-1}`.
pub fn apply_power_oracle(a: &SquareTensor, x: &[f64]) -> Vec<f64> {
    let t = a.as_dense();
    let mut out = vec![0.0; a.dim()];
    for idx in all_indices(t.dims()) {
        let w: f64 = idx[1..].iter().map(|&j| x[j]).product();
        out[idx[0]] += entry(t, &idx) * w;
    }
    out
}

/// Brute-force `A x^m`.
pub fn form_oracle(a: &SquareTensor, x: &[f64]) -> f64 {
    let t = a.as_dense();
    all_indices(t.dims())
        .into_iter()
        .map(|idx| entry(t, &idx) * idx.iter().map(|&j| x[j]).product::<f64>())
        .sum()
}

/// Brute-force multilinear form `sum A[i_1..i_m] u_1[i_1] ... u_m[i_m]`.
pub fn multilinear_oracle(t: &DenseTensor, us: &[&[f64]]) -> f64 {
    all_indices(t.dims())
        .into_iter()
        .map(|idx| entry(t, &idx) * idx.iter().zip(us).map(|(&i, u)| u[i]).product::<f64>())
        .sum()
}

/// Central finite-difference gradient.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            (f(&xp) - f(&xm)) / (2.0 * h)
        })
        .collect()
}

/// Symmetric order-4 tensor with small off-diagonal mass and a dominant diagonal.
pub fn dominant_symmetric_quartic(rng: &mut ChaCha8Rng, dim: usize) -> SquareTensor {
    let raw = random_square(rng, 4, dim).scaled(0.05);
    let sym = raw.symmetrize().unwrap();
    let mut dense = sym.into_dense();
    for i in 0..dim {
        let off: f64 = all_indices(&[dim; 3])
            .into_iter()
            .filter(|r| !(r[0] == i && r[1] == i && r[2] == i))
            .map(|r| entry(&dense, &[i, r[0], r[1], r[2]]).abs())
            .sum();
        dense.set(&[i, i, i, i], 1.0 + off).unwrap();
    }
    SquareTensor::new(dense).unwrap()
}

/// Monotone matrix `B^T B + 0.5 I + (C - C^T)`.
pub fn random_monotone_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let c = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let m = b.transpose() * &b + DMatrix::identity(n, n) * 0.5 + (&c - c.transpose());
    (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect()
}

/// Solves `x >= 0, Mx + q >= 0, x^T (Mx + q) = 0` by trying every support pattern.
pub fn lcp_enumerate(m: &[Vec<f64>], q: &[f64]) -> Option<Vec<f64>> {
    let n = q.len();
    let feas = 1e-10;
    for mask in 0u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut x = vec![0.0; n];
        if !support.is_empty() {
            let k = support.len();
            let sub = DMatrix::from_fn(k, k, |r, c| m[support[r]][support[c]]);
            let rhs = DVector::from_fn(k, |r, _| -q[support[r]]);
            let Some(sol) = sub.lu().solve(&rhs) else { continue };
            for (r, &i) in support.iter().enumerate() {
                x[i] = sol[r];
            }
        }
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] * x[j]).sum::<f64>() + q[i]).collect();
        if x.iter().all(|&v| v >= -feas) && w.iter().all(|&v| v >= -feas) {
            return Some(x);
        }
    }
    None
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
