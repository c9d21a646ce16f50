//! Linearized ADMM on `min f(Z) s.t. A(Z) = b, Z = (XYᵀ)_Ω, X = Y, Y ∈ C`.
//!
//! Each outer iteration updates `Y` by a generalized projection, then `(X, Z)`
//! in closed form through the multiplier `ν` of `A(Z) = b`, then the duals
//! `S, U` and the penalty `ρ`. Only `O(|Ω| + nr)` memory is used.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::ConstraintSet;
use crate::diagnostics::{auglag_matrix, auglag_matrix_linearized, TraceRow};
use crate::error::{Error, Result};
use crate::linalg::{project_pattern, row_inner, sym_spmm, Factor, SparsityPattern, SymSparse};
use crate::linmaps::{LinearMap, MapKind};

const DENOM_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `f(Z) = ⟨C, Z⟩`.
    LinearTrace(SymSparse),
    /// `f(Z) = Σ_{(i,j) ∈ Ω} (Z_ij − C_ij)²` over ordered pairs.
    PartialObsLs(SymSparse),
}

impl Objective {
    pub fn cost(&self) -> &SymSparse {
        match self {
            Objective::LinearTrace(c) | Objective::PartialObsLs(c) => c,
        }
    }

    /// Ω, the pattern every iterate `Z` lives on.
    pub fn pattern(&self) -> &Arc<SparsityPattern> {
        self.cost().pattern()
    }

    pub fn n(&self) -> usize {
        self.cost().n()
    }

    /// Lipschitz constant of ∇f.
    pub fn lipschitz(&self) -> f64 {
        match self {
            Objective::LinearTrace(_) => 0.0,
            Objective::PartialObsLs(_) => 2.0,
        }
    }

    pub fn value(&self, z: &SymSparse) -> f64 {
        match self {
            Objective::LinearTrace(c) => c.dot(z),
            Objective::PartialObsLs(c) => z.linear_combination(1.0, c, -1.0).frobenius_sq(),
        }
    }
}

/// `∇f(Z_prev)`.
pub fn linearized_gradient(obj: &Objective, z_prev: &SymSparse) -> Result<SymSparse> {
    if !Arc::ptr_eq(obj.pattern(), z_prev.pattern()) && obj.pattern() != z_prev.pattern() {
        return Err(Error::InvalidInput(
            "linearized_gradient: Z is not on the objective's pattern".into(),
        ));
    }
    Ok(match obj {
        Objective::LinearTrace(c) => c.clone(),
        Objective::PartialObsLs(c) => z_prev.linear_combination(2.0, c, -2.0),
    })
}

/// How the `Y` step reads `Z` outside the stored pattern Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OffPattern {
    /// `Z = (XYᵀ)_sym` off Ω, the value the `(X, Z)` step gives an
    /// unconstrained full `Z`. Keeps `H = ρ(I + XᵀX)` the exact Hessian.
    #[default]
    Implicit,
    /// `Z = 0` off Ω.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub rho0: f64,
    pub gamma: f64,
    pub rho_max: f64,
    pub eps: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub inner_tol: f64,
    pub inner_max_iter: usize,
    /// Record the linearized Lagrangian before and after each update group.
    pub record_groups: bool,
    pub off_pattern: OffPattern,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rho0: 1.0,
            gamma: 1.05,
            rho_max: 1e4,
            eps: 1e-3,
            max_iter: 1000,
            seed: 0,
            inner_tol: 1e-8,
            inner_max_iter: 200,
            record_groups: false,
            off_pattern: OffPattern::Implicit,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if !(self.rho0 > 0.0) || !self.rho0.is_finite() {
            return bad(format!("rho0 must be positive, got {}", self.rho0));
        }
        if !(self.gamma >= 1.0) || !self.gamma.is_finite() {
            return bad(format!("gamma must be at least 1, got {}", self.gamma));
        }
        if !(self.rho_max >= self.rho0) {
            return bad(format!(
                "rho_max ({}) must be at least rho0 ({})",
                self.rho_max, self.rho0
            ));
        }
        if !(self.eps > 0.0) {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.inner_tol > 0.0) {
            return bad(format!("inner tolerance must be positive, got {}", self.inner_tol));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixAdmmState {
    pub z: SymSparse,
    pub x: Factor,
    pub y: Factor,
    pub s: SymSparse,
    pub u: Factor,
    pub nu: Vec<f64>,
    pub rho: f64,
    pub k: usize,
}

impl MatrixAdmmState {
    /// Seeded random start: `X, Y ~ U(−1, 1)`, `Z = (XYᵀ)_Ω` with the diagonal
    /// set to `b` for a diagonal map, zero duals.
    pub fn initial(obj: &Objective, map: &LinearMap, r: usize, rho: f64, seed: u64) -> Result<Self> {
        let n = obj.n();
        if map.n() != n {
            return Err(Error::dim("MatrixAdmmState::initial", n, map.n()));
        }
        if r == 0 {
            return Err(Error::InvalidInput("factor width r must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Factor::from_fn(n, r, |_, _| rng.random_range(-1.0..1.0));
        let y = Factor::from_fn(n, r, |_, _| rng.random_range(-1.0..1.0));
        let mut z = project_pattern(&x, &y, obj.pattern())?;
        if map.kind() == MapKind::Diag {
            let pat = z.pattern().clone();
            let vals = z.values_mut();
            for (&p, &b) in pat.diag_positions().iter().zip(map.rhs()) {
                vals[p] = b;
            }
        }
        Ok(MatrixAdmmState {
            s: SymSparse::zeros(obj.pattern().clone()),
            u: Factor::zeros(n, r),
            nu: vec![0.0; map.m()],
            z,
            x,
            y,
            rho,
            k: 0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YUpdateInfo {
    pub iterations: usize,
    pub converged: bool,
}

/// `Y ← argmin_{Y∈C} L(Y)`, with `Ŷ = U + SX + ρ(X + ZX)` and `H = ρ(I + XᵀX)`.
pub fn update_y(
    state: &MatrixAdmmState,
    cfg: &SolverConfig,
    set: ConstraintSet,
) -> Result<(Factor, YUpdateInfo)> {
    let rho = state.rho;
    let mut y_hat = sym_spmm(&state.s, &state.x)?;
    y_hat.axpy(rho, &z_times_x(state, cfg.off_pattern)?);
    y_hat.axpy(rho, &state.x);
    y_hat.axpy(1.0, &state.u);
    let gp = set.generalized_project(&y_hat, &state.x, rho, cfg.inner_tol, cfg.inner_max_iter)?;
    Ok((
        gp.y,
        YUpdateInfo {
            iterations: gp.iterations,
            converged: gp.converged,
        },
    ))
}

/// `ZX` with `Z` extended off Ω according to `mode`. The implicit part is
/// `(sym(XYᵀ) − (XYᵀ)_Ω)X`, formed from r×r Gram matrices.
fn z_times_x(state: &MatrixAdmmState, mode: OffPattern) -> Result<Factor> {
    let x = &state.x;
    let y = &state.y;
    let mut zx = sym_spmm(&state.z, x)?;
    if mode == OffPattern::Implicit {
        let r = x.r();
        zx.axpy(-1.0, &sym_spmm(&project_pattern(x, y, state.z.pattern())?, x)?);
        zx.axpy(0.5, &x.mul_small(&y.gram_with(x), r));
        zx.axpy(0.5, &y.mul_small(&x.gram_with(x), r));
    }
    Ok(zx)
}

/// Multiplier of `A(Z) = b` in the `(X, Z)` step, using only `n×r` temporaries.
///
/// With `g₁ = rowsum(SY∘Y)`, `g₂ = rowsum(U∘Y)`, `g₃ = rowsum(GY∘Y)`,
/// `g₄ = rowsum(Y∘Y)`:
/// `h₁ = ρ(b − ρ⁻¹(g₁ − g₂) − g₄) + diag(G) + diag(S) + g₃ + g₁`, `h₂ = g₄ + 1`.
/// The diagonal map gives `ν = h₁/h₂`; the trace map sums both sides
/// (`Σh₂ = Tr(YYᵀ) + n`).
pub fn solve_nu(state: &MatrixAdmmState, g: &SymSparse, map: &LinearMap) -> Result<Vec<f64>> {
    let n = state.y.n();
    if map.n() != n {
        return Err(Error::dim("solve_nu", n, map.n()));
    }
    if map.kind() == MapKind::None {
        return Ok(Vec::new());
    }
    let rho = state.rho;
    let y = &state.y;
    let g1 = row_inner(&sym_spmm(&state.s, y)?, y)?;
    let g2 = row_inner(&state.u, y)?;
    let g3 = row_inner(&sym_spmm(g, y)?, y)?;
    let g4 = row_inner(y, y)?;
    let dg = g.diag();
    let ds = state.s.diag();
    let b = map.rhs();
    let h1 = |i: usize, bi: f64| {
        rho * (bi - ((g1[i] - g2[i]) / rho + g4[i])) + dg[i] + ds[i] + g3[i] + g1[i]
    };
    match map.kind() {
        MapKind::Diag => Ok((0..n).map(|i| h1(i, b[i]) / (g4[i] + 1.0)).collect()),
        MapKind::Trace => {
            // ρ·b enters once; the per-row h₁ would count it n times.
            let num: f64 = (0..n).map(|i| h1(i, 0.0)).sum::<f64>() + rho * b[0];
            let den: f64 = g4.iter().sum::<f64>() + n as f64;
            Ok(vec![num / den])
        }
        MapKind::None => unreachable!(),
    }
}

/// Closed-form `(X, Z)`: `B = −ρ⁻¹(G − A*(ν) + S)`, `D = ρ⁻¹(SY − U) + Y`,
/// `X = BY + D`, `Z = (XYᵀ)_Ω + B`.
pub fn update_xz(
    state: &MatrixAdmmState,
    g: &SymSparse,
    map: &LinearMap,
    nu: &[f64],
) -> Result<(Factor, SymSparse)> {
    let rho = state.rho;
    let mut bmat = g.linear_combination(-1.0 / rho, &state.s, -1.0 / rho);
    let adj = map.adjoint_diag(nu)?;
    bmat.add_to_diag(&adj.iter().map(|a| a / rho).collect::<Vec<_>>());

    let mut x = sym_spmm(&state.s, &state.y)?;
    x.axpy(-1.0, &state.u);
    x.scale(1.0 / rho);
    x.axpy(1.0, &state.y);
    x.axpy(1.0, &sym_spmm(&bmat, &state.y)?);

    let mut z = project_pattern(&x, &state.y, state.z.pattern())?;
    z.axpy(1.0, &bmat);
    Ok((x, z))
}

/// `S += ρ(Z − (XYᵀ)_Ω)`, `U += ρ(X − Y)`, `ρ ← min(ρ_max, γρ)`.
pub fn dual_update(state: &mut MatrixAdmmState, cfg: &SolverConfig) -> Result<()> {
    let rho = state.rho;
    let xy = project_pattern(&state.x, &state.y, state.z.pattern())?;
    state.s.axpy(rho, &state.z);
    state.s.axpy(-rho, &xy);
    state.u.axpy(rho, &state.x);
    state.u.axpy(-rho, &state.y);
    state.rho = cfg.rho_max.min(cfg.gamma * rho);
    Ok(())
}

/// Relative change `P` over `{Z, X, Y}` and feasibility gap `D`.
pub fn residuals(prev: &MatrixAdmmState, cur: &MatrixAdmmState) -> Result<(f64, f64)> {
    let rel = |num: f64, den: f64| num / den.max(DENOM_FLOOR);
    let dz = cur.z.linear_combination(1.0, &prev.z, -1.0).frobenius();
    let zn = cur.z.frobenius();
    let p = rel(dz, zn)
        .max(rel(cur.x.distance(&prev.x), cur.x.frobenius()))
        .max(rel(cur.y.distance(&prev.y), cur.y.frobenius()));
    let xy = project_pattern(&cur.x, &cur.y, cur.z.pattern())?;
    let gap = cur.z.linear_combination(1.0, &xy, -1.0).frobenius();
    let d = rel(gap, zn).max(rel(cur.x.distance(&cur.y), cur.x.frobenius()));
    Ok((p, d))
}

/// Objective, constraint map, factor set and width for one matrix-form solve.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProblem {
    pub objective: Objective,
    pub map: LinearMap,
    pub set: ConstraintSet,
    pub r: usize,
}

/// Linearized Lagrangian values around one iteration: before the `Y` step,
/// after it, after the `(X, Z)` step, and after the dual update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupValues {
    pub start: f64,
    pub after_y: f64,
    pub after_xz: f64,
    pub after_dual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub state: MatrixAdmmState,
    pub trace: Vec<TraceRow>,
    pub groups: Vec<GroupValues>,
    pub converged: bool,
    pub iterations: usize,
    /// Y steps whose inner projected-gradient loop hit its iteration cap.
    pub inner_failures: usize,
}

pub fn solve(problem: &MatrixProblem, cfg: &SolverConfig) -> Result<SolveResult> {
    let state = MatrixAdmmState::initial(
        &problem.objective,
        &problem.map,
        problem.r,
        cfg.rho0,
        cfg.seed,
    )?;
    solve_from(problem, cfg, state)
}

/// Runs the iteration from a given state.
pub fn solve_from(
    problem: &MatrixProblem,
    cfg: &SolverConfig,
    mut state: MatrixAdmmState,
) -> Result<SolveResult> {
    cfg.validate()?;
    let MatrixProblem {
        objective: obj,
        map,
        set,
        ..
    } = problem;
    if map.n() != obj.n() {
        return Err(Error::dim("admm_matrix::solve", obj.n(), map.n()));
    }
    let mut trace = Vec::new();
    let mut groups = Vec::new();
    let mut inner_failures = 0;
    let mut converged = false;
    while state.k < cfg.max_iter {
        let prev = state.clone();
        let g = linearized_gradient(obj, &state.z)?;
        let lin = |s: &MatrixAdmmState| auglag_matrix_linearized(s, obj, *set, &prev.z, &g);
        let start = if cfg.record_groups { lin(&state) } else { 0.0 };

        let (y, info) = update_y(&state, cfg, *set)?;
        if !info.converged {
            inner_failures += 1;
        }
        state.y = y;
        let after_y = if cfg.record_groups { lin(&state) } else { 0.0 };

        let nu = solve_nu(&state, &g, map)?;
        let (x, z) = update_xz(&state, &g, map, &nu)?;
        state.x = x;
        state.z = z;
        state.nu = nu;
        let after_xz = if cfg.record_groups { lin(&state) } else { 0.0 };

        let rho_used = state.rho;
        dual_update(&mut state, cfg)?;
        state.k += 1;
        if cfg.record_groups {
            groups.push(GroupValues {
                start,
                after_y,
                after_xz,
                after_dual: lin(&state),
            });
        }

        let (p, d) = residuals(&prev, &state)?;
        trace.push(TraceRow {
            k: state.k,
            primal_residual: p,
            dual_residual: d,
            rho: rho_used,
            objective: obj.value(&state.z),
            lagrangian: auglag_matrix(&state, obj, *set),
            dual_norm: (state.s.frobenius_sq() + state.u.dot(&state.u)).sqrt(),
        });
        let last = trace.last().expect("row was just pushed");
        let finite = [&state.x, &state.y, &state.u].iter().all(|f| f.is_finite())
            && [&state.z, &state.s].iter().all(|m| m.values().iter().all(|v| v.is_finite()))
            && last.objective.is_finite()
            && last.lagrangian.is_finite();
        if !finite {
            return Err(Error::InvalidInput(format!(
                "iterates diverged at iteration {} (rho = {rho_used}); try a larger rho0",
                state.k
            )));
        }
        if p.max(d) <= cfg.eps {
            converged = true;
            break;
        }
    }
    Ok(SolveResult {
        iterations: state.k,
        state,
        trace,
        groups,
        converged,
        inner_failures,
    })
}
