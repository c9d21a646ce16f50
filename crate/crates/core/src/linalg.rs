//! Sparse symmetric and skinny dense kernels.
//!
//! Every n×n quantity in the solvers (Z, S, C, gradients) is stored only on a
//! [`SparsityPattern`] Ω that always contains the diagonal. Every n×r quantity
//! (X, Y, U, ...) is a dense row-major [`Factor`]. None of the kernels here
//! materialize an n×n dense matrix.

use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Set of unordered index pairs `{i, j}` with `i <= j`, diagonal always included.
///
/// Entries are kept sorted (row-major over the upper triangle) so iteration
/// order is stable across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityPattern {
    n: usize,
    entries: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    diag: Vec<usize>,
}

impl SparsityPattern {
    /// Builds a pattern from arbitrary (possibly repeated, possibly lower
    /// triangular) pairs. The diagonal is added automatically.
    pub fn new<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut entries: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "pattern index ({i}, {j}) out of range for n = {n}"
                )));
            }
            entries.push((i.min(j), i.max(j)));
        }
        entries.sort_unstable();
        entries.dedup();
        let index: HashMap<_, _> = entries.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let diag = (0..n).map(|i| index[&(i, i)]).collect();
        Ok(SparsityPattern {
            n,
            entries,
            index,
            diag,
        })
    }

    pub fn diagonal(n: usize) -> Self {
        Self::new(n, std::iter::empty()).expect("diagonal pattern is always valid")
    }

    pub fn full(n: usize) -> Self {
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::new(n, pairs).expect("full pattern is always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Position of `{i, j}` in the value array, if present.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.position(i, j).is_some()
    }

    pub fn diag_positions(&self) -> &[usize] {
        &self.diag
    }

    /// Number of off-diagonal unordered pairs.
    pub fn off_diagonal_len(&self) -> usize {
        self.entries.len() - self.n
    }
}

/// Symmetric n×n matrix stored on a shared pattern. Off-pattern entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSparse {
    pattern: Arc<SparsityPattern>,
    values: Vec<f64>,
}

impl SymSparse {
    pub fn zeros(pattern: Arc<SparsityPattern>) -> Self {
        let values = vec![0.0; pattern.len()];
        SymSparse { pattern, values }
    }

    pub fn new(pattern: Arc<SparsityPattern>, values: Vec<f64>) -> Result<Self> {
        if values.len() != pattern.len() {
            return Err(Error::dim("SymSparse::new", pattern.len(), values.len()));
        }
        Ok(SymSparse { pattern, values })
    }

    /// Builds from `(i, j, v)` triplets; the pattern is the triplet support plus
    /// the diagonal. Repeated pairs are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let pattern = Arc::new(SparsityPattern::new(
            n,
            triplets.iter().map(|&(i, j, _)| (i, j)),
        )?);
        let mut m = SymSparse::zeros(pattern);
        for &(i, j, v) in triplets {
            let k = m.pattern.position(i, j).expect("triplet in its own pattern");
            m.values[k] += v;
        }
        Ok(m)
    }

    /// Restricts a dense symmetric matrix (given by a closure) to `pattern`.
    pub fn from_fn<F>(pattern: Arc<SparsityPattern>, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> f64,
    {
        let values = pattern.entries().iter().map(|&(i, j)| f(i, j)).collect();
        SymSparse { pattern, values }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let pattern = Arc::new(SparsityPattern::diagonal(values.len()));
        let mut m = SymSparse::zeros(pattern);
        for (i, &v) in values.iter().enumerate() {
            let k = m.pattern.diag[i];
            m.values[k] = v;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.pattern.n
    }

    pub fn pattern(&self) -> &Arc<SparsityPattern> {
        &self.pattern
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pattern
            .position(i, j)
            .map(|k| self.values[k])
            .unwrap_or(0.0)
    }

    /// Sets `{i, j}`; fails if the pair is outside the pattern.
    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        match self.pattern.position(i, j) {
            Some(k) => {
                self.values[k] = v;
                Ok(())
            }
            None => Err(Error::InvalidInput(format!(
                "entry ({i}, {j}) is outside the sparsity pattern"
            ))),
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        self.pattern.diag.iter().map(|&k| self.values[k]).collect()
    }

    pub fn add_to_diag(&mut self, d: &[f64]) {
        for (i, &k) in self.pattern.diag.iter().enumerate() {
            self.values[k] += d[i];
        }
    }

    pub fn trace(&self) -> f64 {
        self.pattern.diag.iter().map(|&k| self.values[k]).sum()
    }

    /// Σ_ij A_ij B_ij over the full symmetric matrices.
    pub fn dot(&self, other: &SymSparse) -> f64 {
        self.check_same(other);
        self.pattern
            .entries
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(&(i, j), (a, b))| if i == j { a * b } else { 2.0 * a * b })
            .sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    pub fn scale(&mut self, alpha: f64) {
        self.values.iter_mut().for_each(|v| *v *= alpha);
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &SymSparse) {
        self.check_same(other);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += alpha * b;
        }
    }

    pub fn linear_combination(&self, alpha: f64, other: &SymSparse, beta: f64) -> SymSparse {
        self.check_same(other);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        SymSparse {
            pattern: self.pattern.clone(),
            values,
        }
    }

    /// Same values moved onto a superset pattern.
    pub fn with_pattern(&self, pattern: Arc<SparsityPattern>) -> Result<SymSparse> {
        if pattern.n != self.n() {
            return Err(Error::dim("SymSparse::with_pattern", self.n(), pattern.n));
        }
        let mut out = SymSparse::zeros(pattern);
        for (&(i, j), &v) in self.pattern.entries.iter().zip(&self.values) {
            if v == 0.0 {
                continue;
            }
            out.set(i, j, v)?;
        }
        Ok(out)
    }

    /// Row sums `A·1` of the symmetric expansion.
    pub fn row_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        for (&(i, j), &v) in self.pattern.entries.iter().zip(&self.values) {
            out[i] += v;
            if i != j {
                out[j] += v;
            }
        }
        out
    }

    /// `A·x` for a vector.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n(), "matvec dimension");
        let mut out = vec![0.0; self.n()];
        for (&(i, j), &v) in self.pattern.entries.iter().zip(&self.values) {
            out[i] += v * x[j];
            if i != j {
                out[j] += v * x[i];
            }
        }
        out
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n(), "quad_form dimension");
        self.pattern
            .entries
            .iter()
            .zip(&self.values)
            .map(|(&(i, j), &v)| {
                if i == j {
                    v * x[i] * x[i]
                } else {
                    2.0 * v * x[i] * x[j]
                }
            })
            .sum()
    }

    /// Dense row-major copy; test and small-n use only.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut d = vec![vec![0.0; n]; n];
        for (&(i, j), &v) in self.pattern.entries.iter().zip(&self.values) {
            d[i][j] = v;
            d[j][i] = v;
        }
        d
    }

    fn check_same(&self, other: &SymSparse) {
        assert!(
            Arc::ptr_eq(&self.pattern, &other.pattern) || self.pattern == other.pattern,
            "SymSparse operands must share a sparsity pattern"
        );
    }
}

/// Symmetric cost `sparse + shift·11ᵀ`. The rank-one shift is never densified.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedSym {
    pub sparse: SymSparse,
    pub shift: f64,
}

impl ShiftedSym {
    pub fn unshifted(sparse: SymSparse) -> Self {
        ShiftedSym { sparse, shift: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.sparse.n()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = self.sparse.matvec(x);
        if self.shift != 0.0 {
            let s = self.shift * x.iter().sum::<f64>();
            out.iter_mut().for_each(|o| *o += s);
        }
        out
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let sum: f64 = x.iter().sum();
        self.sparse.quad_form(x) + self.shift * sum * sum
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sparse.get(i, j) + self.shift
    }

    /// Materializes the cost on `pattern`. A nonzero shift touches every entry,
    /// so callers that keep it must pass the full pattern.
    pub fn on_pattern(&self, pattern: Arc<SparsityPattern>) -> Result<SymSparse> {
        let mut out = self.sparse.with_pattern(pattern)?;
        if self.shift != 0.0 {
            out.values_mut().iter_mut().for_each(|v| *v += self.shift);
        }
        Ok(out)
    }

    /// Pattern on which the cost is exactly representable.
    pub fn natural_pattern(&self) -> Arc<SparsityPattern> {
        if self.shift == 0.0 {
            self.sparse.pattern().clone()
        } else {
            Arc::new(SparsityPattern::full(self.n()))
        }
    }
}

/// Dense row-major n×r matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    n: usize,
    r: usize,
    data: Vec<f64>,
}

impl Factor {
    pub fn zeros(n: usize, r: usize) -> Self {
        Factor {
            n,
            r,
            data: vec![0.0; n * r],
        }
    }

    pub fn from_vec(n: usize, r: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * r {
            return Err(Error::dim("Factor::from_vec", n * r, data.len()));
        }
        Ok(Factor { n, r, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let r = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * r);
        for row in rows {
            if row.len() != r {
                return Err(Error::dim("Factor::from_rows", r, row.len()));
            }
            data.extend_from_slice(row);
        }
        Ok(Factor { n, r, data })
    }

    pub fn column_vector(x: &[f64]) -> Self {
        Factor {
            n: x.len(),
            r: 1,
            data: x.to_vec(),
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, r: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * r);
        for i in 0..n {
            for j in 0..r {
                data.push(f(i, j));
            }
        }
        Factor { n, r, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n, self.r)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.r + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.r + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.r..(i + 1) * self.r]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.r..(i + 1) * self.r]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Factor) -> f64 {
        assert_eq!(self.shape(), other.shape(), "Factor::dot shape");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&mut self, alpha: f64) {
        self.data.iter_mut().for_each(|v| *v *= alpha);
    }

    pub fn scaled(&self, alpha: f64) -> Factor {
        let mut out = self.clone();
        out.scale(alpha);
        out
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &Factor) {
        assert_eq!(self.shape(), other.shape(), "Factor::axpy shape");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn sub(&self, other: &Factor) -> Factor {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// `‖self − other‖_F` without allocating.
    pub fn distance(&self, other: &Factor) -> f64 {
        assert_eq!(self.shape(), other.shape(), "Factor::distance shape");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Gram matrix `selfᵀ·other` (r×r, row-major).
    pub fn gram_with(&self, other: &Factor) -> Vec<f64> {
        assert_eq!(self.shape(), other.shape(), "Factor::gram_with shape");
        let r = self.r;
        let mut g = vec![0.0; r * r];
        for i in 0..self.n {
            let a = self.row(i);
            let b = other.row(i);
            for p in 0..r {
                let ap = a[p];
                if ap == 0.0 {
                    continue;
                }
                for q in 0..r {
                    g[p * r + q] += ap * b[q];
                }
            }
        }
        g
    }

    /// `self · m` for a row-major r×c matrix `m`.
    pub fn mul_small(&self, m: &[f64], cols: usize) -> Factor {
        assert_eq!(m.len(), self.r * cols, "Factor::mul_small shape");
        let mut out = Factor::zeros(self.n, cols);
        for i in 0..self.n {
            let a = self.row(i);
            let o = &mut out.data[i * cols..(i + 1) * cols];
            for (p, &ap) in a.iter().enumerate() {
                if ap == 0.0 {
                    continue;
                }
                let mrow = &m[p * cols..(p + 1) * cols];
                for (ov, mv) in o.iter_mut().zip(mrow) {
                    *ov += ap * mv;
                }
            }
        }
        out
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> Factor {
        let k = k.min(self.r);
        Factor::from_fn(self.n, k, |i, j| self.get(i, j))
    }
}

/// `S·Y` with the symmetric expansion of `S`.
pub fn sym_spmm(s: &SymSparse, y: &Factor) -> Result<Factor> {
    if s.n() != y.n() {
        return Err(Error::dim("sym_spmm", s.n(), y.n()));
    }
    let r = y.r();
    let mut out = Factor::zeros(y.n(), r);
    for (&(i, j), &v) in s.pattern.entries.iter().zip(&s.values) {
        if v == 0.0 {
            continue;
        }
        for c in 0..r {
            out.data[i * r + c] += v * y.data[j * r + c];
        }
        if i != j {
            for c in 0..r {
                out.data[j * r + c] += v * y.data[i * r + c];
            }
        }
    }
    Ok(out)
}

/// `(S + shift·11ᵀ)·Y`.
pub fn shifted_spmm(c: &ShiftedSym, y: &Factor) -> Result<Factor> {
    let mut out = sym_spmm(&c.sparse, y)?;
    if c.shift != 0.0 {
        let r = y.r();
        let mut colsum = vec![0.0; r];
        for i in 0..y.n() {
            for (cs, v) in colsum.iter_mut().zip(y.row(i)) {
                *cs += v;
            }
        }
        for i in 0..y.n() {
            for (o, cs) in out.row_mut(i).iter_mut().zip(&colsum) {
                *o += c.shift * cs;
            }
        }
    }
    Ok(out)
}

/// Diagonal of `A·Bᵀ` via row inner products.
pub fn row_inner(a: &Factor, b: &Factor) -> Result<Vec<f64>> {
    if a.shape() != b.shape() {
        return Err(Error::dim("row_inner", a.n() * a.r(), b.n() * b.r()));
    }
    Ok((0..a.n())
        .map(|i| a.row(i).iter().zip(b.row(i)).map(|(x, y)| x * y).sum())
        .collect())
}

/// Symmetrized restriction `((XYᵀ + YXᵀ)/2)_Ω`.
pub fn project_pattern(x: &Factor, y: &Factor, pattern: &Arc<SparsityPattern>) -> Result<SymSparse> {
    if x.shape() != y.shape() {
        return Err(Error::dim("project_pattern", x.n() * x.r(), y.n() * y.r()));
    }
    if x.n() != pattern.n() {
        return Err(Error::dim("project_pattern", pattern.n(), x.n()));
    }
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(p, q)| p * q).sum() };
    let values = pattern
        .entries()
        .iter()
        .map(|&(i, j)| {
            if i == j {
                dot(x.row(i), y.row(i))
            } else {
                0.5 * (dot(x.row(i), y.row(j)) + dot(x.row(j), y.row(i)))
            }
        })
        .collect();
    Ok(SymSparse {
        pattern: pattern.clone(),
        values,
    })
}

/// Outcome of a power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `‖Y‖₂` by power iteration on the r×r Gram matrix `YᵀY`, started from the
/// normalized all-ones vector.
pub fn spectral_norm(y: &Factor, tol: f64, max_iter: usize) -> SpectralEstimate {
    let r = y.r();
    if r == 0 || y.n() == 0 {
        return SpectralEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let gram = y.gram_with(y);
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..r)
            .map(|p| (0..r).map(|q| gram[p * r + q] * v[q]).sum())
            .collect()
    };
    let trace: f64 = (0..r).map(|p| gram[p * r + p]).sum();
    if trace == 0.0 {
        return SpectralEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let start = vec![1.0 / (r as f64).sqrt(); r];
    let est = power_iterate(apply, start, tol, max_iter, || {
        // all-ones happened to be orthogonal to the range; fall back to the
        // coordinate with the heaviest Gram diagonal.
        let best = (0..r)
            .max_by(|&a, &b| gram[a * r + a].total_cmp(&gram[b * r + b]))
            .unwrap_or(0);
        let mut e = vec![0.0; r];
        e[best] = 1.0;
        e
    });
    SpectralEstimate {
        value: est.value.max(0.0).sqrt(),
        ..est
    }
}

/// Largest |eigenvalue| of a symmetric cost, by power iteration on its square.
pub fn sym_spectral_norm(c: &ShiftedSym, tol: f64, max_iter: usize) -> SpectralEstimate {
    let n = c.n();
    if n == 0 {
        return SpectralEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_5eed);
    let mut start: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&mut start);
    let apply = |v: &[f64]| c.matvec(&c.matvec(v));
    let est = power_iterate(apply, start, tol, max_iter, || {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        e
    });
    SpectralEstimate {
        value: est.value.max(0.0).sqrt(),
        ..est
    }
}

/// Smallest eigenvalue of a symmetric cost, by power iteration on the PSD
/// operator `‖C‖I − C`.
pub fn sym_min_eigenvalue(c: &ShiftedSym, tol: f64, max_iter: usize) -> SpectralEstimate {
    let n = c.n();
    let norm = sym_spectral_norm(c, tol, max_iter);
    if n == 0 || norm.value == 0.0 {
        return norm;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_5eef);
    let mut start: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&mut start);
    let apply = |v: &[f64]| {
        let cv = c.matvec(v);
        v.iter().zip(cv).map(|(a, b)| norm.value * a - b).collect()
    };
    let est = power_iterate(apply, start, tol, max_iter, || {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        e
    });
    SpectralEstimate {
        value: norm.value - est.value,
        iterations: norm.iterations + est.iterations,
        converged: norm.converged && est.converged,
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Power iteration for a PSD operator; returns the dominant eigenvalue estimate.
fn power_iterate<A, F>(apply: A, start: Vec<f64>, tol: f64, max_iter: usize, fallback: F) -> SpectralEstimate
where
    A: Fn(&[f64]) -> Vec<f64>,
    F: FnOnce() -> Vec<f64>,
{
    let mut v = start;
    let mut lambda = 0.0;
    let mut fallback = Some(fallback);
    for it in 1..=max_iter.max(1) {
        let mut w = apply(&v);
        let norm = normalize(&mut w);
        if norm == 0.0 {
            match fallback.take() {
                Some(f) => {
                    v = f();
                    continue;
                }
                None => {
                    return SpectralEstimate {
                        value: 0.0,
                        iterations: it,
                        converged: true,
                    }
                }
            }
        }
        let change = (norm - lambda).abs();
        lambda = norm;
        v = w;
        if change <= tol * lambda {
            return SpectralEstimate {
                value: lambda,
                iterations: it,
                converged: true,
            };
        }
    }
    SpectralEstimate {
        value: lambda,
        iterations: max_iter,
        converged: false,
    }
}
