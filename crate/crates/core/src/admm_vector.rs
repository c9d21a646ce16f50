//! Two-block ADMM on `min g(x) s.t. x = y, y ∈ C` (no linear constraints).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admm_matrix::SolverConfig;
use crate::constraints::ConstraintSet;
use crate::diagnostics::{auglag_vector, TraceRow};
use crate::error::{Error, Result};
use crate::linalg::{sym_spectral_norm, Factor, ShiftedSym};

const DENOM_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum VectorObjective {
    /// `g(x) = xᵀCx`.
    Quadratic {
        c: ShiftedSym,
        l_g: f64,
        /// Strong-convexity modulus, when known (`λ_min(2C)`).
        h_g: Option<f64>,
    },
    /// `g(x) = cᵀx`.
    LinearVec { c: Vec<f64> },
}

impl VectorObjective {
    /// Quadratic objective with `L_g = 2‖C‖₂` estimated once.
    pub fn quadratic(c: ShiftedSym) -> Self {
        let est = sym_spectral_norm(&c, 1e-12, 100_000);
        VectorObjective::Quadratic {
            c,
            l_g: 2.0 * est.value,
            h_g: None,
        }
    }

    pub fn with_strong_convexity(self, h: f64) -> Self {
        match self {
            VectorObjective::Quadratic { c, l_g, .. } => VectorObjective::Quadratic {
                c,
                l_g,
                h_g: Some(h),
            },
            other => other,
        }
    }

    pub fn linear(c: Vec<f64>) -> Self {
        VectorObjective::LinearVec { c }
    }

    pub fn n(&self) -> usize {
        match self {
            VectorObjective::Quadratic { c, .. } => c.n(),
            VectorObjective::LinearVec { c } => c.len(),
        }
    }

    pub fn lipschitz(&self) -> f64 {
        match self {
            VectorObjective::Quadratic { l_g, .. } => *l_g,
            VectorObjective::LinearVec { .. } => 0.0,
        }
    }

    pub fn strong_convexity(&self) -> Option<f64> {
        match self {
            VectorObjective::Quadratic { h_g, .. } => *h_g,
            VectorObjective::LinearVec { .. } => None,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            VectorObjective::Quadratic { c, .. } => c.quad_form(x),
            VectorObjective::LinearVec { c } => c.iter().zip(x).map(|(a, b)| a * b).sum(),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            VectorObjective::Quadratic { c, .. } => c.matvec(x).iter().map(|v| 2.0 * v).collect(),
            VectorObjective::LinearVec { c } => c.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorAdmmState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub rho: f64,
    pub k: usize,
}

impl VectorAdmmState {
    /// `x ~ U(−1, 1)` seeded, `y = proj(x)`, `u = 0`.
    pub fn initial(n: usize, set: ConstraintSet, rho: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y = set.project(&Factor::column_vector(&x)).value.into_data();
        VectorAdmmState {
            x,
            y,
            u: vec![0.0; n],
            rho,
            k: 0,
        }
    }
}

/// `y = proj(x + u/ρ)`.
pub fn update_y(state: &VectorAdmmState, set: ConstraintSet) -> Vec<f64> {
    let v: Vec<f64> = state
        .x
        .iter()
        .zip(&state.u)
        .map(|(x, u)| x + u / state.rho)
        .collect();
    set.project(&Factor::column_vector(&v)).value.into_data()
}

#[derive(Debug, Clone, PartialEq)]
pub struct XUpdate {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `‖(2C + ρI)x − (ρy − u)‖ / ‖ρy − u‖` at return.
    pub relative_residual: f64,
    /// CG hit nonpositive curvature (indefinite `2C + ρI`) and MINRES took over.
    pub indefinite: bool,
}

/// Solves `∇g(x) + u + ρ(x − y) = 0`. The quadratic case runs CG on
/// `(2C + ρI)x = ρy − u` from the previous `x`, switching to MINRES if the
/// system turns out to be indefinite.
pub fn update_x(
    state: &VectorAdmmState,
    obj: &VectorObjective,
    cg_tol: f64,
    cg_max: usize,
) -> Result<XUpdate> {
    let rho = state.rho;
    let n = state.x.len();
    if obj.n() != n {
        return Err(Error::dim("admm_vector::update_x", n, obj.n()));
    }
    match obj {
        VectorObjective::LinearVec { c } => Ok(XUpdate {
            x: (0..n).map(|i| state.y[i] - (c[i] + state.u[i]) / rho).collect(),
            iterations: 0,
            converged: true,
            relative_residual: 0.0,
            indefinite: false,
        }),
        VectorObjective::Quadratic { c, .. } => {
            let op = |v: &[f64]| -> Vec<f64> {
                c.matvec(v)
                    .iter()
                    .zip(v)
                    .map(|(cv, vi)| 2.0 * cv + rho * vi)
                    .collect()
            };
            let rhs: Vec<f64> = (0..n).map(|i| rho * state.y[i] - state.u[i]).collect();
            let cg = conjugate_gradient(&op, &rhs, &state.x, cg_tol, cg_max);
            if !cg.indefinite {
                return Ok(cg);
            }
            let mr = minres(&op, &rhs, &state.x, cg_tol, cg_max);
            Ok(XUpdate {
                indefinite: true,
                iterations: cg.iterations + mr.iterations,
                ..mr
            })
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual_norm<F: Fn(&[f64]) -> Vec<f64>>(op: &F, b: &[f64], x: &[f64]) -> f64 {
    let ax = op(x);
    ax.iter()
        .zip(b)
        .map(|(a, bb)| (bb - a) * (bb - a))
        .sum::<f64>()
        .sqrt()
}

fn conjugate_gradient<F: Fn(&[f64]) -> Vec<f64>>(
    op: &F,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> XUpdate {
    let bnorm = norm(b).max(DENOM_FLOOR);
    let mut x = x0.to_vec();
    let ax = op(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut it = 0;
    while rr.sqrt() > tol * bnorm && it < max_iter {
        let ap = op(&p);
        let curv = dot(&p, &ap);
        if curv <= 0.0 {
            return XUpdate {
                relative_residual: rr.sqrt() / bnorm,
                x,
                iterations: it,
                converged: false,
                indefinite: true,
            };
        }
        let alpha = rr / curv;
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..p.len() {
            p[i] = r[i] + beta * p[i];
        }
        it += 1;
    }
    let rel = residual_norm(op, b, &x) / bnorm;
    XUpdate {
        converged: rel <= tol,
        relative_residual: rel,
        x,
        iterations: it,
        indefinite: false,
    }
}

/// MINRES (Paige–Saunders) for symmetric, possibly indefinite systems.
fn minres<F: Fn(&[f64]) -> Vec<f64>>(
    op: &F,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> XUpdate {
    let n = b.len();
    let bnorm = norm(b).max(DENOM_FLOOR);
    let mut x = x0.to_vec();
    let ax = op(&x);
    let r0: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut beta = norm(&r0);
    let mut it = 0;
    if beta > tol * bnorm {
        let mut v_prev = vec![0.0; n];
        let mut v: Vec<f64> = r0.iter().map(|ri| ri / beta).collect();
        let mut w_prev = vec![0.0; n];
        let mut w_prev2 = vec![0.0; n];
        let (mut c_prev, mut s_prev) = (1.0, 0.0);
        let (mut c_prev2, mut s_prev2) = (1.0, 0.0);
        let mut eta = beta;
        let mut res = beta;
        while res > tol * bnorm && it < max_iter {
            let av = op(&v);
            let alpha = dot(&v, &av);
            let mut v_next: Vec<f64> = (0..n)
                .map(|i| av[i] - alpha * v[i] - beta * v_prev[i])
                .collect();
            let beta_next = norm(&v_next);
            if beta_next > 0.0 {
                v_next.iter_mut().for_each(|vi| *vi /= beta_next);
            }
            // Apply the two previous rotations to the new tridiagonal column.
            let eps_k = s_prev2 * beta;
            let delta_bar = c_prev2 * beta;
            let delta = c_prev * delta_bar + s_prev * alpha;
            let gamma_bar = -s_prev * delta_bar + c_prev * alpha;
            let gamma = gamma_bar.hypot(beta_next);
            if gamma == 0.0 {
                break;
            }
            let (c, s) = (gamma_bar / gamma, beta_next / gamma);
            let w: Vec<f64> = (0..n)
                .map(|i| (v[i] - delta * w_prev[i] - eps_k * w_prev2[i]) / gamma)
                .collect();
            for i in 0..n {
                x[i] += c * eta * w[i];
            }
            eta *= -s;
            res = eta.abs();
            w_prev2 = std::mem::replace(&mut w_prev, w);
            v_prev = std::mem::replace(&mut v, v_next);
            beta = beta_next;
            c_prev2 = c_prev;
            s_prev2 = s_prev;
            c_prev = c;
            s_prev = s;
            it += 1;
            if beta == 0.0 {
                break;
            }
        }
    }
    let rel = residual_norm(op, b, &x) / bnorm;
    XUpdate {
        converged: rel <= tol,
        relative_residual: rel,
        x,
        iterations: it,
        indefinite: false,
    }
}

/// `u += ρ(x − y)`, `ρ ← min(ρ_max, γρ)`.
pub fn dual_update(state: &mut VectorAdmmState, cfg: &SolverConfig) {
    let rho = state.rho;
    for i in 0..state.u.len() {
        state.u[i] += rho * (state.x[i] - state.y[i]);
    }
    state.rho = cfg.rho_max.min(cfg.gamma * rho);
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorProblem {
    pub objective: VectorObjective,
    pub set: ConstraintSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorSolveResult {
    pub state: VectorAdmmState,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
    pub iterations: usize,
    /// x steps where the inner solver missed its tolerance.
    pub inner_failures: usize,
    /// x steps where `2C + ρI` was found indefinite.
    pub indefinite_steps: usize,
    /// Largest CG relative residual over the run.
    pub worst_inner_residual: f64,
}

pub fn solve(problem: &VectorProblem, cfg: &SolverConfig) -> Result<VectorSolveResult> {
    let state = VectorAdmmState::initial(problem.objective.n(), problem.set, cfg.rho0, cfg.seed);
    solve_from(problem, cfg, state)
}

pub fn solve_from(
    problem: &VectorProblem,
    cfg: &SolverConfig,
    mut state: VectorAdmmState,
) -> Result<VectorSolveResult> {
    cfg.validate()?;
    let obj = &problem.objective;
    let set = problem.set;
    let mut trace = Vec::new();
    let mut inner_failures = 0;
    let mut indefinite_steps = 0;
    let mut worst_inner_residual: f64 = 0.0;
    let mut converged = false;
    let rel = |num: f64, den: f64| num / den.max(DENOM_FLOOR);
    while state.k < cfg.max_iter {
        let prev_x = state.x.clone();
        let prev_y = state.y.clone();
        state.y = update_y(&state, set);
        let xu = update_x(&state, obj, cfg.inner_tol, cfg.inner_max_iter)?;
        if !xu.converged {
            inner_failures += 1;
        }
        if xu.indefinite {
            indefinite_steps += 1;
        }
        worst_inner_residual = worst_inner_residual.max(xu.relative_residual);
        state.x = xu.x;
        let rho_used = state.rho;
        dual_update(&mut state, cfg);
        state.k += 1;

        let dist = |a: &[f64], b: &[f64]| {
            a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
        };
        let xn = norm(&state.x);
        let p = rel(dist(&state.x, &prev_x), xn).max(rel(dist(&state.y, &prev_y), norm(&state.y)));
        let d = rel(dist(&state.x, &state.y), xn);
        trace.push(TraceRow {
            k: state.k,
            primal_residual: p,
            dual_residual: d,
            rho: rho_used,
            objective: obj.value(&state.x),
            lagrangian: auglag_vector(&state, obj, set),
            dual_norm: norm(&state.u),
        });
        if !state.x.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "iterates diverged at iteration {}",
                state.k
            )));
        }
        if p.max(d) <= cfg.eps {
            converged = true;
            break;
        }
    }
    Ok(VectorSolveResult {
        iterations: state.k,
        state,
        trace,
        converged,
        inner_failures,
        indefinite_steps,
        worst_inner_residual,
    })
}
