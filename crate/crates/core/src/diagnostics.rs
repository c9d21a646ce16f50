//! Augmented Lagrangian evaluation, descent constants, monotone-descent
//! checks and a log-linear rate fit.

use serde::Serialize;

use crate::admm_matrix::{MatrixAdmmState, Objective};
use crate::admm_vector::{VectorAdmmState, VectorObjective};
use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::linalg::{project_pattern, SymSparse};

/// One outer iteration of a solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    /// 1-based iteration counter.
    pub k: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// Penalty used during this iteration.
    pub rho: f64,
    pub objective: f64,
    /// Augmented Lagrangian after the dual/penalty update.
    pub lagrangian: f64,
    /// Frobenius norm of the dual variables after the update.
    pub dual_norm: f64,
}

/// `f(Z) + δ_C(Y) + ⟨U, X−Y⟩ + ⟨S, Z−XYᵀ⟩ + ρ/2‖X−Y‖² + ρ/2‖Z−XYᵀ‖²`,
/// with the `XYᵀ` terms taken on Ω. Returns `+∞` when `Y ∉ C`.
pub fn auglag_matrix(state: &MatrixAdmmState, obj: &Objective, set: ConstraintSet) -> f64 {
    if !set.contains(&state.y) {
        return f64::INFINITY;
    }
    obj.value(&state.z) + coupling_terms(state)
}

/// Same as [`auglag_matrix`] with `f` replaced by its linearization at `z_lin`
/// (gradient `grad`).
pub fn auglag_matrix_linearized(
    state: &MatrixAdmmState,
    obj: &Objective,
    set: ConstraintSet,
    z_lin: &SymSparse,
    grad: &SymSparse,
) -> f64 {
    if !set.contains(&state.y) {
        return f64::INFINITY;
    }
    let diff = state.z.linear_combination(1.0, z_lin, -1.0);
    obj.value(z_lin) + grad.dot(&diff) + coupling_terms(state)
}

fn coupling_terms(state: &MatrixAdmmState) -> f64 {
    let xy = project_pattern(&state.x, &state.y, state.z.pattern())
        .expect("state shapes are consistent");
    let gap = state.z.linear_combination(1.0, &xy, -1.0);
    let xmy = state.x.sub(&state.y);
    state.u.dot(&xmy)
        + state.s.dot(&gap)
        + 0.5 * state.rho * xmy.dot(&xmy)
        + 0.5 * state.rho * gap.frobenius_sq()
}

/// `g(x) + δ_C(y) + ⟨u, x−y⟩ + ρ/2‖x−y‖²`.
pub fn auglag_vector(state: &VectorAdmmState, obj: &VectorObjective, set: ConstraintSet) -> f64 {
    if !set.contains(&crate::Factor::column_vector(&state.y)) {
        return f64::INFINITY;
    }
    let mut inner = 0.0;
    let mut sq = 0.0;
    for ((x, y), u) in state.x.iter().zip(&state.y).zip(&state.u) {
        let d = x - y;
        inner += u * d;
        sq += d * d;
    }
    obj.value(&state.x) + inner + 0.5 * state.rho * sq
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryConstants {
    /// Smallest eigenvalue of the (X, Z) Hessian divided by ρ.
    pub sigma_max: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Vector-form descent constant when g is only L_g-smooth.
    pub c_vector_nonconvex: f64,
    /// Vector-form descent constant when g is H_g-strongly convex.
    pub c_vector_strongly_convex: f64,
    /// `ρσ_max > L_f`.
    pub matrix_condition: bool,
    /// `c_vector_nonconvex > 0` and `ρ > L_g`.
    pub vector_condition: bool,
    /// `(ρ + H_g)/2 ≥ L_g²/ρ` and `ρ > L_g` (constant penalty).
    pub linear_rate_condition: bool,
}

/// Descent-lemma constants for the current iterate. `rho_next` is the penalty
/// of the following iteration (equal to `rho` for a constant schedule).
pub fn theory_constants(
    sigma_y: f64,
    rho: f64,
    rho_next: f64,
    l_f: f64,
    l_g: f64,
    h_g: f64,
) -> TheoryConstants {
    let s2 = sigma_y * sigma_y;
    let sigma_max = 1.0 - ((s2 * s2 + 4.0 * s2).sqrt() - s2) / 2.0;
    let c1 = rho / 2.0 * sigma_max;
    let dual_term = l_g * l_g * (rho_next + rho) / (2.0 * rho * rho);
    let c_vector_nonconvex = (rho - 3.0 * l_g) / 2.0 - dual_term;
    let c_vector_strongly_convex = (rho + h_g) / 2.0 - dual_term;
    TheoryConstants {
        sigma_max,
        c1,
        c2: c1 - l_f / 2.0,
        c3: rho / 2.0,
        c_vector_nonconvex,
        c_vector_strongly_convex,
        matrix_condition: rho * sigma_max > l_f,
        vector_condition: c_vector_nonconvex > 0.0 && rho > l_g,
        linear_rate_condition: (rho + h_g) / 2.0 >= l_g * l_g / rho && rho > l_g,
    }
}

/// Constant penalty at which the nonconvex vector-form descent constant
/// vanishes: the positive root of `ρ² − 3L_gρ − 2L_g² = 0`.
pub fn vector_penalty_threshold(l_g: f64) -> f64 {
    (3.0 + 17f64.sqrt()) / 2.0 * l_g
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentReport {
    pub violations: usize,
    /// Largest `L^{k+1} − L^k − slack` among violations (0 when none).
    pub worst_excess: f64,
    /// Indices `k` (into the input) where `values[k] > values[k-1] + slack`.
    pub violating_steps: Vec<usize>,
}

impl DescentReport {
    pub fn is_monotone(&self) -> bool {
        self.violations == 0
    }
}

pub fn descent_check(values: &[f64], slack: f64) -> DescentReport {
    descent_check_with(values, |_| slack)
}

/// Like [`descent_check`] with a per-step slack (e.g. inner-solver tolerance
/// that scales with the iterate).
pub fn descent_check_with<F: Fn(usize) -> f64>(values: &[f64], slack: F) -> DescentReport {
    let mut report = DescentReport {
        violations: 0,
        worst_excess: 0.0,
        violating_steps: Vec::new(),
    };
    for k in 1..values.len() {
        let excess = values[k] - values[k - 1];
        if excess > slack(k) {
            report.violations += 1;
            report.violating_steps.push(k);
            report.worst_excess = report.worst_excess.max(excess);
        }
    }
    report
}

/// Least-squares slope of `log(L^k − L*)` against `k`, over the points where
/// the gap is positive.
pub fn linear_rate_fit(values: &[f64], l_star: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .filter_map(|(k, &v)| {
            let gap = v - l_star;
            (gap > 0.0 && gap.is_finite()).then(|| (k as f64, gap.ln()))
        })
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "linear rate fit needs at least 3 points above L*, got {}",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// `L*` for [`linear_rate_fit`] when the optimum is unknown: the last trace
/// value minus one ulp-scale epsilon.
pub fn terminal_reference(values: &[f64]) -> Option<f64> {
    values
        .last()
        .map(|&v| v - f64::EPSILON * v.abs().max(1.0))
}
