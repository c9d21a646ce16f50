//! Factor constraint sets and their (generalized) projections.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, Factor};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintSet {
    /// Entries in {−1, +1}.
    Binary,
    /// Every column has unit ℓ₂ norm.
    UnitNormColumn,
    /// Every row has unit ℓ₂ norm.
    UnitNormRow,
    /// Entrywise nonnegative.
    Nonnegative,
    /// No constraint.
    Free,
}

/// Projection output. `degenerate` counts zero rows/columns that had no unique
/// projection and were replaced by the first coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub value: Factor,
    pub degenerate: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedProjection {
    pub y: Factor,
    pub iterations: usize,
    pub converged: bool,
    /// Weighted objective `½⟨YH, Y⟩ − ⟨Ŷ, Y⟩` after each inner iterate
    /// (first entry is the starting point).
    pub objective: Vec<f64>,
}

/// Entrywise sign with `sign(0) = +1`.
pub fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

impl ConstraintSet {
    pub fn is_convex(self) -> bool {
        matches!(self, ConstraintSet::Nonnegative | ConstraintSet::Free)
    }

    pub fn contains(self, m: &Factor) -> bool {
        match self {
            ConstraintSet::Binary => m.data().iter().all(|&v| v == 1.0 || v == -1.0),
            ConstraintSet::Nonnegative => m.data().iter().all(|&v| v >= 0.0),
            ConstraintSet::Free => true,
            ConstraintSet::UnitNormRow => {
                (0..m.n()).all(|i| (norm(m.row(i)) - 1.0).abs() <= NORM_TOL)
            }
            ConstraintSet::UnitNormColumn => {
                (0..m.r()).all(|j| (norm(&m.column(j)) - 1.0).abs() <= NORM_TOL)
            }
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(self, m: &Factor) -> Projection {
        let mut value = m.clone();
        let mut degenerate = 0;
        match self {
            ConstraintSet::Binary => value.data_mut().iter_mut().for_each(|v| *v = sign(*v)),
            ConstraintSet::Nonnegative => value.data_mut().iter_mut().for_each(|v| *v = v.max(0.0)),
            ConstraintSet::Free => {}
            ConstraintSet::UnitNormRow => {
                for i in 0..value.n() {
                    if !normalize_or_fallback(value.row_mut(i)) {
                        degenerate += 1;
                    }
                }
            }
            ConstraintSet::UnitNormColumn => {
                for j in 0..value.r() {
                    let mut col = value.column(j);
                    if !normalize_or_fallback(&mut col) {
                        degenerate += 1;
                    }
                    for (i, v) in col.into_iter().enumerate() {
                        value.set(i, j, v);
                    }
                }
            }
        }
        Projection { value, degenerate }
    }

    /// Minimizes `Tr((Y − ŶH⁻¹) H (Y − ŶH⁻¹)ᵀ)` over the set, with `H = ρ(I + XᵀX)`.
    ///
    /// For r = 1, H is a scalar and the answer is the plain projection of Ŷ/H.
    /// Otherwise projected gradient descent with step `1/λ_max(H)`, started from
    /// the projected unconstrained minimizer.
    pub fn generalized_project(
        self,
        y_hat: &Factor,
        x: &Factor,
        rho: f64,
        tol: f64,
        max_iter: usize,
    ) -> Result<GeneralizedProjection> {
        if !(rho > 0.0) {
            return Err(Error::InvalidInput(format!("rho must be positive, got {rho}")));
        }
        if y_hat.shape() != x.shape() {
            return Err(Error::dim("generalized_project", x.n() * x.r(), y_hat.n() * y_hat.r()));
        }
        let r = x.r();
        let mut h = x.gram_with(x);
        for p in 0..r {
            for q in 0..r {
                h[p * r + q] *= rho;
            }
            h[p * r + p] += rho;
        }
        let objective = |y: &Factor| -> f64 {
            let yh = y.mul_small(&h, r);
            0.5 * yh.dot(y) - y_hat.dot(y)
        };

        if r == 1 {
            let y = self.project(&y_hat.scaled(1.0 / h[0])).value;
            let obj = objective(&y);
            return Ok(GeneralizedProjection {
                y,
                iterations: 0,
                converged: true,
                objective: vec![obj],
            });
        }

        let h_inv = DMatrix::from_row_slice(r, r, &h)
            .cholesky()
            .ok_or_else(|| Error::InvalidInput("H is not positive definite".into()))?
            .inverse();
        // Row-major copy of the (symmetric) inverse.
        let h_inv: Vec<f64> = (0..r * r).map(|k| h_inv[(k / r, k % r)]).collect();
        let mut y = self.project(&y_hat.mul_small(&h_inv, r)).value;
        let mut history = vec![objective(&y)];
        if self == ConstraintSet::Free {
            return Ok(GeneralizedProjection {
                y,
                iterations: 0,
                converged: true,
                objective: history,
            });
        }

        let sigma = spectral_norm(x, 1e-12, 10_000);
        let sigma_sq = if sigma.converged {
            sigma.value * sigma.value * (1.0 + 1e-8)
        } else {
            x.frobenius().powi(2)
        };
        let step = 1.0 / (rho * (1.0 + sigma_sq));

        for it in 1..=max_iter {
            let mut grad = y.mul_small(&h, r);
            grad.axpy(-1.0, y_hat);
            let mut trial = y.clone();
            trial.axpy(-step, &grad);
            let next = self.project(&trial).value;
            let change = next.distance(&y);
            let obj = objective(&next);
            // Projected steps with step 1/L never increase the objective; an
            // increase beyond round-off means the step size estimate is off.
            let prev = *history.last().expect("history is non-empty");
            let stalled = obj > prev + 1e-14 * (1.0 + prev.abs());
            if !stalled {
                y = next;
                history.push(obj);
            }
            if stalled || change <= tol * y.frobenius().max(1.0) {
                return Ok(GeneralizedProjection {
                    y,
                    iterations: it,
                    converged: true,
                    objective: history,
                });
            }
        }
        Ok(GeneralizedProjection {
            y,
            iterations: max_iter,
            converged: false,
            objective: history,
        })
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Scales `v` to unit norm; a zero vector becomes `e₁` and returns false.
fn normalize_or_fallback(v: &mut [f64]) -> bool {
    let nrm = norm(v);
    if nrm > 0.0 {
        v.iter_mut().for_each(|x| *x /= nrm);
        true
    } else {
        v.iter_mut().for_each(|x| *x = 0.0);
        if let Some(first) = v.first_mut() {
            *first = 1.0;
        }
        false
    }
}
