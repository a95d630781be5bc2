//! Dense real tensors and the multilinear contractions built on them.
//!
//! Entries are stored row-major (last index fastest) with 0-based indices.
//! For an m-order n-dimensional tensor `A` the two central maps are
//!
//! * `A x^{m-1}`: the vector whose i-th component is
//!   `sum a[i, i2, .., im] * x[i2] * .. * x[im]`, and
//! * `A x^m = <x, A x^{m-1}>`, the homogeneous form of degree m.

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest order accepted by [`SquareTensor::symmetrize`].
pub const MAX_SYMMETRIZE_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    strides: Vec<usize>,
    entries: Vec<f64>,
}

fn row_major_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    strides
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, entries: Vec<f64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Precondition("tensor order must be positive".into()));
        }
        if let Some(k) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Precondition(format!("mode {k} has zero dimension")));
        }
        let expected: usize = dims.iter().product();
        if entries.len() != expected {
            return Err(Error::EntryCount {
                dims,
                expected,
                got: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("tensor entry {pos}")));
        }
        let strides = row_major_strides(&dims);
        Ok(Self {
            dims,
            strides,
            entries,
        })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let len = dims.iter().product();
        Self::new(dims, vec![0.0; len])
    }

    /// Builds a tensor by evaluating `f` at every multi-index in row-major order.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let entries = MultiIndex::new(&dims).map(|idx| f(&idx)).collect();
        Self::new(dims, entries)
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn offset(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.order() {
            return Err(Error::dims(self.order(), idx.len(), "index length"));
        }
        let mut off = 0;
        for (k, (&i, &d)) in idx.iter().zip(&self.dims).enumerate() {
            if i >= d {
                return Err(Error::Precondition(format!(
                    "index {i} out of range for mode {k} of size {d}"
                )));
            }
            off += i * self.strides[k];
        }
        Ok(off)
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.entries[self.offset(idx)?])
    }

    pub fn set(&mut self, idx: &[usize], value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("entry {idx:?}")));
        }
        let off = self.offset(idx)?;
        self.entries[off] = value;
        Ok(())
    }

    /// Iterates over `(multi-index, value)` pairs in storage order.
    pub fn indexed_entries(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        MultiIndex::new(&self.dims).zip(self.entries.iter().copied())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dims: self.dims.clone(),
            strides: self.strides.clone(),
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    /// Contracts every mode except `keep` against the matching vector in
    /// `vectors`; `vectors[keep]` is ignored and may be empty.
    ///
    /// Modes are reduced from the last to the first, each reduction summing
    /// in increasing index order.
    pub fn contract_except(&self, keep: usize, vectors: &[&[f64]]) -> Result<Vec<f64>> {
        let m = self.order();
        if keep >= m {
            return Err(Error::Precondition(format!(
                "mode {keep} out of range for order {m}"
            )));
        }
        if vectors.len() != m {
            return Err(Error::WrongVectorCount {
                expected: m,
                got: vectors.len(),
            });
        }
        for (k, v) in vectors.iter().enumerate() {
            if k != keep && v.len() != self.dims[k] {
                return Err(Error::dims(self.dims[k], v.len(), "contraction vector"));
            }
        }

        let mut data = std::borrow::Cow::Borrowed(self.entries.as_slice());
        let mut dims = self.dims.clone();
        for mode in (0..m).rev() {
            if mode == keep {
                continue;
            }
            let reduced = contract_mode(&data, &dims, mode, vectors[mode]);
            dims.remove(mode);
            data = std::borrow::Cow::Owned(reduced);
        }
        Ok(data.into_owned())
    }

    /// `B u^2 .. u^m`: contracts modes 2..m, leaving a vector over mode 1.
    pub fn contract_trailing(&self, vectors: &[&[f64]]) -> Result<Vec<f64>> {
        let m = self.order();
        if vectors.len() + 1 != m {
            return Err(Error::WrongVectorCount {
                expected: m - 1,
                got: vectors.len(),
            });
        }
        let mut all: Vec<&[f64]> = Vec::with_capacity(m);
        all.push(&[]);
        all.extend_from_slice(vectors);
        self.contract_except(0, &all)
    }

    /// Full contraction against one vector per mode.
    pub fn contract_all(&self, vectors: &[&[f64]]) -> Result<f64> {
        let head = self.contract_except(0, vectors)?;
        Ok(dot(vectors[0], &head))
    }
}

/// Sums mode `mode` of a row-major block against `u`.
fn contract_mode(data: &[f64], dims: &[usize], mode: usize, u: &[f64]) -> Vec<f64> {
    let inner: usize = dims[mode + 1..].iter().product();
    let outer: usize = dims[..mode].iter().product();
    let r = dims[mode];
    let mut out = vec![0.0; outer * inner];
    for o in 0..outer {
        let dst = &mut out[o * inner..(o + 1) * inner];
        for (t, &ut) in u.iter().enumerate().take(r) {
            let src = &data[(o * r + t) * inner..(o * r + t + 1) * inner];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d += s * ut;
            }
        }
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Row-major enumeration of all multi-indices for a shape.
#[derive(Debug, Clone)]
pub struct MultiIndex {
    dims: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MultiIndex {
    pub fn new(dims: &[usize]) -> Self {
        let next = if dims.iter().all(|&d| d > 0) {
            Some(vec![0; dims.len()])
        } else {
            None
        };
        Self {
            dims: dims.to_vec(),
            next,
        }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.dims[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

/// An m-order tensor whose modes all have the same dimension n.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareTensor(DenseTensor);

impl SquareTensor {
    pub fn new(tensor: DenseTensor) -> Result<Self> {
        let n = tensor.dims()[0];
        if tensor.dims().iter().any(|&d| d != n) {
            return Err(Error::NotSquare(tensor.dims().to_vec()));
        }
        Ok(Self(tensor))
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        Self::new(DenseTensor::zeros(vec![dim; order])?)
    }

    /// Builds a tensor from 0-based `(index, value)` pairs; later duplicates overwrite.
    pub fn from_entries(order: usize, dim: usize, entries: &[(Vec<usize>, f64)]) -> Result<Self> {
        let mut t = DenseTensor::zeros(vec![dim; order])?;
        for (idx, v) in entries {
            t.set(idx, *v)?;
        }
        Ok(Self(t))
    }

    /// The order-2 tensor with the entries of a row-major matrix.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::dims(n, row.len(), "matrix row"));
            }
            entries.extend_from_slice(row);
        }
        Self::new(DenseTensor::new(vec![n, n], entries)?)
    }

    pub fn identity_matrix(n: usize) -> Self {
        let t = DenseTensor::from_fn(vec![n, n], |ij| if ij[0] == ij[1] { 1.0 } else { 0.0 })
            .expect("identity shape is valid");
        Self(t)
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn dim(&self) -> usize {
        self.0.dims()[0]
    }

    pub fn as_dense(&self) -> &DenseTensor {
        &self.0
    }

    pub fn into_dense(self) -> DenseTensor {
        self.0
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        self.0.get(idx)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.scaled(factor))
    }

    fn check_vector(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::dims(self.dim(), x.len(), "vector length"));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("input vector".into()));
        }
        Ok(())
    }

    /// `A x^{m-1}`.
    pub fn apply_power(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_vector(x)?;
        let vectors = vec![x; self.order() - 1];
        self.0.contract_trailing(&vectors)
    }

    /// `A x^m`, computed as `<x, A x^{m-1}>`.
    pub fn form_value(&self, x: &[f64]) -> Result<f64> {
        let ax = self.apply_power(x)?;
        Ok(dot(x, &ax))
    }

    /// `<A x^{m-1} - A y^{m-1}, x - y>`.
    pub fn pairing(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let ax = self.apply_power(x)?;
        let ay = self.apply_power(y)?;
        Ok(ax
            .iter()
            .zip(&ay)
            .zip(x.iter().zip(y))
            .map(|((a, b), (xi, yi))| (a - b) * (xi - yi))
            .sum())
    }

    /// Averages every entry over all permutations of its index tuple.
    pub fn symmetrize(&self) -> Result<Self> {
        let m = self.order();
        if m > MAX_SYMMETRIZE_ORDER {
            return Err(Error::OrderTooLarge(m));
        }
        let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
        let count = perms.len() as f64;
        let mut permuted = vec![0; m];
        let t = DenseTensor::from_fn(self.0.dims().to_vec(), |idx| {
            let mut sum = 0.0;
            for p in &perms {
                for (slot, &src) in permuted.iter_mut().zip(p) {
                    *slot = idx[src];
                }
                sum += self.0.entries[offset_unchecked(&self.0.strides, &permuted)];
            }
            sum / count
        })?;
        Ok(Self(t))
    }

    /// True iff entries related by an index permutation differ by at most `tol`.
    ///
    /// Orders above [`MAX_SYMMETRIZE_ORDER`] are checked against all
    /// transpositions instead of all permutations.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let m = self.order();
        let perms: Vec<Vec<usize>> = if m <= MAX_SYMMETRIZE_ORDER {
            (0..m).permutations(m).collect()
        } else {
            (0..m)
                .tuple_combinations()
                .map(|(a, b)| {
                    let mut p: Vec<usize> = (0..m).collect();
                    p.swap(a, b);
                    p
                })
                .collect()
        };
        let mut permuted = vec![0; m];
        for (idx, v) in self.0.indexed_entries() {
            for p in &perms {
                for (slot, &src) in permuted.iter_mut().zip(p) {
                    *slot = idx[src];
                }
                let w = self.0.entries[offset_unchecked(&self.0.strides, &permuted)];
                if (v - w).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// For order 2, the matrix rows.
    pub fn to_matrix(&self) -> Result<Vec<Vec<f64>>> {
        if self.order() != 2 {
            return Err(Error::OrderRequirement {
                required: "2",
                actual: self.order(),
            });
        }
        Ok(self
            .0
            .entries
            .chunks(self.dim())
            .map(|row| row.to_vec())
            .collect())
    }
}

fn offset_unchecked(strides: &[usize], idx: &[usize]) -> usize {
    strides.iter().zip(idx).map(|(s, i)| s * i).sum()
}

impl TryFrom<DenseTensor> for SquareTensor {
    type Error = Error;

    fn try_from(t: DenseTensor) -> Result<Self> {
        Self::new(t)
    }
}
