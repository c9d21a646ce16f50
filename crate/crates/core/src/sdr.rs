//! Douglas–Rachford splitting on the semidefinite relaxation
//! `min Tr(CZ) s.t. A(Z) = b, Z ⪰ 0`, split as `g₁ + g₂ + g₃` (linear,
//! affine indicator, PSD indicator) with one dense block per term.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::diagnostics::TraceRow;
use crate::error::{Error, Result};
use crate::linalg::ShiftedSym;
use crate::linmaps::{LinearMap, MapKind};

/// How the consensus point is formed from the three prox outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrsVariant {
    /// `Y = mean(X_i)`. Keeps `ΣZ_i` fixed, so it has no fixed point on
    /// constrained problems; kept for comparison.
    Literal,
    /// `Y = mean(2X_i − Z_i)`, the standard consensus Douglas–Rachford step.
    Reflected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrsConfig {
    /// Prox step `t`.
    pub t: f64,
    /// Relaxation `ρ` in `Z_i += ρ(Y − X_i)`.
    pub relax: f64,
    pub eps: f64,
    pub max_iter: usize,
    /// Largest accepted order n.
    pub max_n: usize,
    pub variant: DrsVariant,
}

impl Default for DrsConfig {
    fn default() -> Self {
        DrsConfig {
            t: 1.0,
            relax: 1.0,
            eps: 1e-5,
            max_iter: 20_000,
            max_n: 3000,
            variant: DrsVariant::Reflected,
        }
    }
}

impl DrsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) || !(self.relax > 0.0) || !(self.eps > 0.0) {
            return Err(Error::InvalidInput(format!(
                "t, relaxation and eps must be positive (t={}, relax={}, eps={})",
                self.t, self.relax, self.eps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrsState {
    pub z: [DMatrix<f64>; 3],
    pub t: f64,
    pub relax: f64,
    pub k: usize,
}

impl DrsState {
    pub fn zeros(n: usize, cfg: &DrsConfig) -> Self {
        let zero = DMatrix::zeros(n, n);
        DrsState {
            z: [zero.clone(), zero.clone(), zero],
            t: cfg.t,
            relax: cfg.relax,
            k: 0,
        }
    }
}

/// Dense copy of a (shifted) sparse cost.
pub fn dense_cost(c: &ShiftedSym) -> DMatrix<f64> {
    let n = c.n();
    let mut m = DMatrix::from_element(n, n, c.shift);
    for (&(i, j), &v) in c.sparse.pattern().entries().iter().zip(c.sparse.values()) {
        m[(i, j)] += v;
        if i != j {
            m[(j, i)] += v;
        }
    }
    m
}

/// `prox_{t⟨C,·⟩}(Z) = Z − tC`.
pub fn prox_linear(z: &DMatrix<f64>, t: f64, c: &DMatrix<f64>) -> DMatrix<f64> {
    z - c * t
}

/// Euclidean projection onto `{A(Z) = b}`.
pub fn prox_affine(z: &DMatrix<f64>, map: &LinearMap) -> Result<DMatrix<f64>> {
    let n = z.nrows();
    if map.n() != n {
        return Err(Error::dim("prox_affine", map.n(), n));
    }
    let mut out = z.clone();
    match map.kind() {
        MapKind::Diag => {
            for (i, &b) in map.rhs().iter().enumerate() {
                out[(i, i)] = b;
            }
        }
        MapKind::Trace => {
            let shift = (map.rhs()[0] - z.trace()) / n as f64;
            for i in 0..n {
                out[(i, i)] += shift;
            }
        }
        MapKind::None => {
            return Err(Error::InvalidInput(
                "the relaxation baseline needs a diagonal or trace constraint".into(),
            ))
        }
    }
    Ok(out)
}

/// Symmetric eigendecomposition of `(Z + Zᵀ)/2`.
pub fn sym_eigen(z: &DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let sym = (z + z.transpose()) * 0.5;
    SymmetricEigen::try_new(sym, f64::EPSILON, 100_000).ok_or_else(|| {
        Error::Eigen(format!(
            "symmetric eigensolver did not converge on a {}x{} matrix",
            z.nrows(),
            z.ncols()
        ))
    })
}

/// Projection onto the PSD cone: negative eigenvalues set to zero.
pub fn prox_psd(z: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = sym_eigen(z)?;
    let mut q = eig.eigenvectors.clone();
    for (j, &l) in eig.eigenvalues.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        q.column_mut(j).scale_mut(s);
    }
    Ok(&q * q.transpose())
}

/// One sweep: `X_i = prox(Z_i)`, consensus `Y`, `Z_i += ρ(Y − X_i)`.
/// Returns `(Y, X)`.
pub fn drs_step(
    state: &mut DrsState,
    c: &DMatrix<f64>,
    map: &LinearMap,
    variant: DrsVariant,
) -> Result<(DMatrix<f64>, [DMatrix<f64>; 3])> {
    let x = [
        prox_linear(&state.z[0], state.t, c),
        prox_affine(&state.z[1], map)?,
        prox_psd(&state.z[2])?,
    ];
    let y = match variant {
        DrsVariant::Literal => (&x[0] + &x[1] + &x[2]) / 3.0,
        DrsVariant::Reflected => {
            (&x[0] * 2.0 - &state.z[0] + &x[1] * 2.0 - &state.z[1] + &x[2] * 2.0 - &state.z[2])
                / 3.0
        }
    };
    for (zi, xi) in state.z.iter_mut().zip(&x) {
        *zi += (&y - xi) * state.relax;
    }
    state.k += 1;
    Ok((y, x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrsResult {
    /// Average of the three prox outputs of the last sweep.
    pub y: DMatrix<f64>,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
    pub iterations: usize,
    pub objective: f64,
    /// `‖A(Y) − b‖_∞`.
    pub affine_violation: f64,
    /// `max(0, −λ_min(Y))`.
    pub psd_violation: f64,
}

pub fn solve(c: &DMatrix<f64>, map: &LinearMap, cfg: &DrsConfig) -> Result<DrsResult> {
    cfg.validate()?;
    let n = c.nrows();
    if c.ncols() != n {
        return Err(Error::dim("sdr::solve", n, c.ncols()));
    }
    if n > cfg.max_n {
        return Err(Error::InvalidInput(format!(
            "relaxation baseline is dense: n = {n} exceeds the limit of {}",
            cfg.max_n
        )));
    }
    if map.kind() == MapKind::None {
        return Err(Error::InvalidInput(
            "the relaxation baseline needs a diagonal or trace constraint".into(),
        ));
    }
    let mut state = DrsState::zeros(n, cfg);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut sol = DMatrix::zeros(n, n);
    while state.k < cfg.max_iter {
        let prev = state.z.clone();
        let (_, x) = drs_step(&mut state, c, map, cfg.variant)?;
        sol = (&x[0] + &x[1] + &x[2]) / 3.0;
        let change = prev
            .iter()
            .zip(&state.z)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let gap = x.iter().map(|xi| (xi - &sol).norm()).fold(0.0, f64::max);
        let obj = c.dot(&sol);
        trace.push(TraceRow {
            k: state.k,
            primal_residual: change,
            dual_residual: gap,
            rho: state.relax,
            objective: obj,
            lagrangian: obj,
            dual_norm: state.z.iter().map(|z| z.norm_squared()).sum::<f64>().sqrt(),
        });
        if !change.is_finite() {
            return Err(Error::InvalidInput(format!(
                "relaxation iterates diverged at iteration {}",
                state.k
            )));
        }
        // The averaged point is only as feasible as the blocks agree.
        if change <= cfg.eps && gap <= cfg.eps && affine_violation(&sol, map) <= cfg.eps {
            converged = true;
            break;
        }
    }
    let affine_violation = affine_violation(&sol, map);
    let psd_violation = (-sym_eigen(&sol)?.eigenvalues.min()).max(0.0);
    Ok(DrsResult {
        objective: c.dot(&sol),
        y: sol,
        trace,
        converged,
        iterations: state.k,
        affine_violation,
        psd_violation,
    })
}

/// `‖A(Z) − b‖_∞` for a dense matrix.
pub fn affine_violation(z: &DMatrix<f64>, map: &LinearMap) -> f64 {
    let b = map.rhs();
    match map.kind() {
        MapKind::Diag => (0..z.nrows())
            .map(|i| (z[(i, i)] - b[i]).abs())
            .fold(0.0, f64::max),
        MapKind::Trace => (z.trace() - b[0]).abs(),
        MapKind::None => 0.0,
    }
}
