//! Turning relaxed or factored solutions into ±1 vectors.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::constraints::sign;
use crate::error::{Error, Result};
use crate::linalg::{Factor, ShiftedSym, SymSparse};
use crate::sdr::sym_eigen;

/// Default cap on the number of leading columns scanned by
/// [`hyperplane_round`].
pub const DEFAULT_MAX_COLUMNS: usize = 64;

/// `F = QΛ^{1/2}` from the eigendecomposition of `Z`, columns ordered by
/// decreasing `|λ|`. Negative eigenvalues are clamped to zero; the number of
/// clamped eigenvalues is returned alongside.
pub fn factor_from_eig(z: &DMatrix<f64>) -> Result<(Factor, usize)> {
    let n = z.nrows();
    let eig = sym_eigen(z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .abs()
            .total_cmp(&eig.eigenvalues[a].abs())
            .then(a.cmp(&b))
    });
    let clamped = eig.eigenvalues.iter().filter(|&&l| l < 0.0).count();
    let mut f = Factor::zeros(n, n);
    for (col, &j) in order.iter().enumerate() {
        let s = eig.eigenvalues[j].max(0.0).sqrt();
        for i in 0..n {
            f.set(i, col, eig.eigenvectors[(i, j)] * s);
        }
    }
    Ok((f, clamped))
}

/// `F = UΣ^{1/2}` from the thin SVD of `X`, singular values decreasing.
pub fn factor_from_svd(x: &Factor) -> Factor {
    let (n, r) = x.shape();
    let m = DMatrix::from_row_slice(n, r, x.data());
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors were requested");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });
    let mut f = Factor::zeros(n, r);
    for (col, &j) in order.iter().enumerate() {
        let s = svd.singular_values[j].sqrt();
        for i in 0..n {
            f.set(i, col, u[(i, j)] * s);
        }
    }
    f
}

/// Randomized hyperplane rounding: for each width `k` up to
/// `min(cols, max_columns)` and each trial, `x = sign(F_k z)` with
/// `z ~ N(0, I_k)`. Returns the `x` with the smallest `xᵀCx` and that value.
pub fn hyperplane_round(
    f: &Factor,
    c: &ShiftedSym,
    trials: usize,
    seed: u64,
    max_columns: usize,
) -> Result<(Vec<f64>, f64)> {
    if trials == 0 {
        return Err(Error::InvalidInput("rounding needs at least one trial".into()));
    }
    if f.n() != c.n() {
        return Err(Error::dim("hyperplane_round", c.n(), f.n()));
    }
    let n = f.n();
    let cols = f.r().min(max_columns.max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for k in 1..=cols {
        for _ in 0..trials {
            let z: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
            let x: Vec<f64> = (0..n)
                .map(|i| sign(f.row(i)[..k].iter().zip(&z).map(|(a, b)| a * b).sum()))
                .collect();
            let v = c.quad_form(&x);
            if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                best = Some((x, v));
            }
        }
    }
    Ok(best.unwrap_or_else(|| {
        let x = vec![1.0; n];
        let v = c.quad_form(&x);
        (x, v)
    }))
}

/// Entrywise sign with `sign(0) = +1`.
pub fn sign_round(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| sign(v)).collect()
}

/// Total weight of edges crossing the partition `x`: `(1ᵀA1 − xᵀAx)/4`.
pub fn cut_value(a: &SymSparse, x: &[f64]) -> Result<f64> {
    if x.len() != a.n() {
        return Err(Error::dim("cut_value", a.n(), x.len()));
    }
    if let Some(bad) = x.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidInput(format!(
            "cut_value needs a ±1 vector, found entry {bad}"
        )));
    }
    let ones = vec![1.0; x.len()];
    Ok((a.quad_form(&ones) - a.quad_form(x)) / 4.0)
}
