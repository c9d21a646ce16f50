//! Builders for MAX-CUT, community detection, image segmentation and
//! partially observed nonnegative factorization instances.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admm_matrix::{MatrixProblem, Objective};
use crate::admm_vector::{VectorObjective, VectorProblem};
use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::linalg::{sym_min_eigenvalue, sym_spectral_norm, Factor, ShiftedSym, SparsityPattern, SymSparse};
use crate::linmaps::LinearMap;

/// Default pixel budget for segmentation (the similarity matrix is dense).
pub const DEFAULT_PIXEL_BUDGET: usize = 1600;

/// Extra diagonal added by [`convexify`], relative to `‖C‖₂`.
pub const CONVEXIFY_MARGIN: f64 = 0.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Cost {
    /// `f(Z) = ⟨C, Z⟩`, `C` possibly carrying a rank-one `a·11ᵀ` shift.
    Linear(ShiftedSym),
    /// Least squares on the observed entries of `C`.
    PartialObs(SymSparse),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub name: String,
    pub cost: Cost,
    pub map: LinearMap,
    pub set: ConstraintSet,
    pub r: usize,
    /// Graph weights, when the instance came from a graph.
    pub adjacency: Option<SymSparse>,
    pub n: usize,
    /// Fraction of off-diagonal pairs stored in Ω.
    pub density: f64,
    pub warnings: Vec<String>,
}

impl ProblemInstance {
    /// Sets the factor width; binary instances switch to unit-norm rows when
    /// `r > 1`.
    pub fn with_width(mut self, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidInput("factor width r must be at least 1".into()));
        }
        self.r = r;
        if r > 1 && self.set == ConstraintSet::Binary {
            self.set = ConstraintSet::UnitNormRow;
        }
        if r == 1 && self.set == ConstraintSet::UnitNormRow {
            self.set = ConstraintSet::Binary;
        }
        Ok(self)
    }

    pub fn with_set(mut self, set: ConstraintSet) -> Self {
        self.set = set;
        self
    }

    /// The linear cost (dense shift kept symbolic).
    pub fn linear_cost(&self) -> Option<&ShiftedSym> {
        match &self.cost {
            Cost::Linear(c) => Some(c),
            Cost::PartialObs(_) => None,
        }
    }

    /// Matrix-form problem. A shifted cost is materialized on the full
    /// pattern, since `a·11ᵀ` touches every entry.
    pub fn matrix_problem(&self) -> Result<MatrixProblem> {
        let objective = match &self.cost {
            Cost::Linear(c) => Objective::LinearTrace(c.on_pattern(c.natural_pattern())?),
            Cost::PartialObs(c) => Objective::PartialObsLs(c.clone()),
        };
        Ok(MatrixProblem {
            objective,
            map: self.map.clone(),
            set: self.set,
            r: self.r,
        })
    }

    /// Vector-form problem `min xᵀCx, x ∈ C` (linear costs only).
    pub fn vector_problem(&self) -> Result<VectorProblem> {
        match &self.cost {
            Cost::Linear(c) => {
                let set = if self.set == ConstraintSet::UnitNormRow {
                    ConstraintSet::Binary
                } else {
                    self.set
                };
                let c = if set == ConstraintSet::Binary {
                    convexify(c)?
                } else {
                    c.clone()
                };
                Ok(VectorProblem {
                    objective: VectorObjective::quadratic(c),
                    set,
                })
            }
            Cost::PartialObs(_) => Err(Error::InvalidInput(
                "the vector solver needs a quadratic objective xᵀCx".into(),
            )),
        }
    }
}

/// `C + σI` with `σ` just large enough to make `xᵀCx` convex. On ±1 vectors
/// this changes the objective by the constant `σn` only.
pub fn convexify(c: &ShiftedSym) -> Result<ShiftedSym> {
    let n = c.n();
    let lo = sym_min_eigenvalue(c, 1e-12, 100_000);
    let norm = sym_spectral_norm(c, 1e-12, 100_000).value;
    let sigma = (-lo.value + CONVEXIFY_MARGIN * norm).max(0.0);
    if sigma == 0.0 {
        return Ok(c.clone());
    }
    let mut sparse = c.sparse.clone();
    sparse.add_to_diag(&vec![sigma; n]);
    Ok(ShiftedSym {
        sparse,
        shift: c.shift,
    })
}

fn off_diag_density(p: &SparsityPattern) -> f64 {
    let n = p.n();
    if n < 2 {
        return 0.0;
    }
    p.off_diagonal_len() as f64 / (n * (n - 1) / 2) as f64
}

fn check_graph(a: &SymSparse) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    for (&(i, j), &v) in a.pattern().entries().iter().zip(a.values()) {
        if i == j && v != 0.0 {
            return Err(Error::InvalidInput(format!(
                "adjacency has a nonzero diagonal entry at node {i}"
            )));
        }
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite weight on edge ({i}, {j})")));
        }
    }
    let negative = a.values().iter().filter(|&&v| v < 0.0).count();
    if negative > 0 {
        warnings.push(format!("{negative} edges have negative weight"));
    }
    Ok(warnings)
}

/// `C = (A − diag(A1))/4`, `diag(Z) = 1`, binary factor.
pub fn build_maxcut(a: &SymSparse) -> Result<ProblemInstance> {
    let warnings = check_graph(a)?;
    let n = a.n();
    let mut c = a.clone();
    let deg = a.row_sums();
    c.add_to_diag(&deg.iter().map(|d| -d).collect::<Vec<_>>());
    c.scale(0.25);
    Ok(ProblemInstance {
        name: "maxcut".into(),
        density: off_diag_density(a.pattern()),
        cost: Cost::Linear(ShiftedSym::unshifted(c)),
        map: LinearMap::diag(vec![1.0; n]),
        set: ConstraintSet::Binary,
        r: 1,
        adjacency: Some(a.clone()),
        n,
        warnings,
    })
}

/// Two balanced communities with within/between edge probabilities `p`/`q`.
/// Returns the adjacency and ±1 ground truth.
pub fn generate_sbm(n: usize, p: f64, q: f64, seed: u64) -> Result<(SymSparse, Vec<f64>)> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::InvalidInput(format!("SBM needs a positive even n, got {n}")));
    }
    if !(0.0 <= q && q < p && p <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "SBM needs 0 ≤ q < p ≤ 1, got p={p}, q={q}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut truth: Vec<f64> = (0..n).map(|i| if i < n / 2 { 1.0 } else { -1.0 }).collect();
    truth.shuffle(&mut rng);
    let mut trip = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let prob = if truth[i] == truth[j] { p } else { q };
            if rng.random_bool(prob) {
                trip.push((i, j, 1.0));
            }
        }
    }
    Ok((SymSparse::from_triplets(n, &trip)?, truth))
}

/// Erdős–Rényi `G(n, p)` with unit weights.
pub fn generate_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<SymSparse> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("edge probability must be in [0, 1], got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trip = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                trip.push((i, j, 1.0));
            }
        }
    }
    SymSparse::from_triplets(n, &trip)
}

/// `C = ((p+q)/2)·11ᵀ − A`, `diag(Z) = 1`, binary factor.
pub fn build_community(a: &SymSparse, p: f64, q: f64) -> Result<ProblemInstance> {
    community_with_shift(a, 0.5 * (p + q))
}

/// Community cost with unknown `p, q`: the shift is the mean entry
/// `1ᵀA1/n²`.
pub fn build_community_mean(a: &SymSparse) -> Result<ProblemInstance> {
    let n = a.n() as f64;
    let ones = vec![1.0; a.n()];
    community_with_shift(a, a.quad_form(&ones) / (n * n))
}

fn community_with_shift(a: &SymSparse, shift: f64) -> Result<ProblemInstance> {
    let warnings = check_graph(a)?;
    let n = a.n();
    let mut neg = a.clone();
    neg.scale(-1.0);
    Ok(ProblemInstance {
        name: "community".into(),
        density: off_diag_density(a.pattern()),
        cost: Cost::Linear(ShiftedSym { sparse: neg, shift }),
        map: LinearMap::diag(vec![1.0; n]),
        set: ConstraintSet::Binary,
        r: 1,
        adjacency: Some(a.clone()),
        n,
        warnings,
    })
}

/// RGB image with channels in `[0, 1]`, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[f64; 3]>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<[f64; 3]>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::dim("Image::new", width * height, pixels.len()));
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// Squared feature distance.
    Raw,
    /// `exp(−‖Δ‖²/σ²)`.
    Gaussian(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentationMode {
    MaxCut,
    /// Community cost with the mean-weight shift.
    Community,
}

/// Pixel-graph weights from features `[r, g, b, c·col, c·row]`.
pub fn segmentation_weights(image: &Image, c: f64, kernel: Kernel, max_pixels: usize) -> Result<SymSparse> {
    let n = image.width * image.height;
    if n == 0 {
        return Err(Error::InvalidInput("image is empty".into()));
    }
    if n > max_pixels {
        return Err(Error::InvalidInput(format!(
            "image has {n} pixels, over the budget of {max_pixels}"
        )));
    }
    if !(c >= 0.0) {
        return Err(Error::InvalidInput(format!("position weight c must be nonnegative, got {c}")));
    }
    if let Kernel::Gaussian(s) = kernel {
        if !(s > 0.0) {
            return Err(Error::InvalidInput(format!("kernel width must be positive, got {s}")));
        }
    }
    let feats: Vec<[f64; 5]> = (0..n)
        .map(|idx| {
            let (row, col) = (idx / image.width, idx % image.width);
            let [r, g, b] = image.pixels[idx];
            [r, g, b, c * col as f64, c * row as f64]
        })
        .collect();
    let pattern = Arc::new(SparsityPattern::full(n));
    Ok(SymSparse::from_fn(pattern, |i, j| {
        if i == j {
            return 0.0;
        }
        let d2: f64 = feats[i].iter().zip(&feats[j]).map(|(a, b)| (a - b) * (a - b)).sum();
        match kernel {
            Kernel::Raw => d2,
            Kernel::Gaussian(s) => (-d2 / (s * s)).exp(),
        }
    }))
}

pub fn build_segmentation(
    image: &Image,
    c: f64,
    kernel: Kernel,
    mode: SegmentationMode,
    max_pixels: usize,
) -> Result<ProblemInstance> {
    let a = segmentation_weights(image, c, kernel, max_pixels)?;
    let mut inst = match mode {
        SegmentationMode::MaxCut => build_maxcut(&a)?,
        SegmentationMode::Community => build_community_mean(&a)?,
    };
    inst.name = "segment".into();
    Ok(inst)
}

/// `f(Z) = Σ_Ω (Z − C)²`, no linear map, nonnegative factor of width `r`.
pub fn build_partialobs(c_obs: &SymSparse, r: usize) -> Result<ProblemInstance> {
    if r == 0 {
        return Err(Error::InvalidInput("factor width r must be at least 1".into()));
    }
    let n = c_obs.n();
    Ok(ProblemInstance {
        name: "factorize".into(),
        density: off_diag_density(c_obs.pattern()),
        cost: Cost::PartialObs(c_obs.clone()),
        map: LinearMap::none(n),
        set: ConstraintSet::Nonnegative,
        r,
        adjacency: None,
        n,
        warnings: Vec::new(),
    })
}

/// `C = WWᵀ` with `W ~ U(0, 1)^{n×rank}`, each off-diagonal pair observed with
/// probability `fraction` (the diagonal always).
pub fn generate_partialobs(n: usize, rank: usize, fraction: f64, seed: u64) -> Result<SymSparse> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidInput(format!(
            "observation fraction must be in [0, 1], got {fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = Factor::from_fn(n, rank, |_, _| rng.random_range(0.0..1.0));
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(fraction))
        .collect();
    let pattern = Arc::new(SparsityPattern::new(n, pairs)?);
    Ok(SymSparse::from_fn(pattern, |i, j| {
        w.row(i).iter().zip(w.row(j)).map(|(a, b)| a * b).sum()
    }))
}

/// `‖(Z − C)_Ω‖ / ‖C_Ω‖`.
pub fn relative_error(z: &SymSparse, c_obs: &SymSparse) -> Result<f64> {
    if z.pattern() != c_obs.pattern() {
        return Err(Error::InvalidInput(
            "relative_error: Z and C are on different patterns".into(),
        ));
    }
    let cn = c_obs.frobenius();
    if cn == 0.0 {
        return Err(Error::InvalidInput("relative_error: observed C is zero".into()));
    }
    Ok(z.linear_combination(1.0, c_obs, -1.0).frobenius() / cn)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_sum_cut(a: &SymSparse, x: &[f64]) -> f64 {
        a.pattern()
            .entries()
            .iter()
            .zip(a.values())
            .filter(|(&(i, j), _)| i != j && x[i] != x[j])
            .map(|(_, v)| v)
            .sum()
    }

    #[test]
    fn maxcut_examples() {
        let a = SymSparse::from_triplets(2, &[(0, 1, 1.0)]).unwrap();
        let p = build_maxcut(&a).unwrap();
        let c = p.linear_cost().unwrap();
        assert_eq!(c.sparse.to_dense(), vec![vec![-0.25, 0.25], vec![0.25, -0.25]]);
        let k3 = SymSparse::from_triplets(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let c = build_maxcut(&k3).unwrap().linear_cost().unwrap().clone();
        let best = (0..8)
            .map(|m| {
                let x: Vec<f64> = (0..3).map(|b| if m >> b & 1 == 1 { 1.0 } else { -1.0 }).collect();
                c.quad_form(&x)
            })
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, -2.0);
        let empty = SymSparse::from_triplets(3, &[]).unwrap();
        assert_eq!(build_maxcut(&empty).unwrap().linear_cost().unwrap().sparse.frobenius(), 0.0);
    }

    #[test]
    fn maxcut_cost_equals_edge_cut() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for seed in 0..20 {
            let n = rng.random_range(2..15);
            let a = generate_erdos_renyi(n, 0.4, seed).unwrap();
            let c = build_maxcut(&a).unwrap().linear_cost().unwrap().clone();
            for _ in 0..20 {
                let x: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
                assert!((-c.quad_form(&x) - edge_sum_cut(&a, &x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn maxcut_input_checks() {
        let loops = SymSparse::from_triplets(2, &[(0, 0, 1.0)]).unwrap();
        assert!(build_maxcut(&loops).is_err());
        let neg = SymSparse::from_triplets(2, &[(0, 1, -1.0)]).unwrap();
        assert_eq!(build_maxcut(&neg).unwrap().warnings.len(), 1);
    }

    #[test]
    fn width_switches_set() {
        let a = SymSparse::from_triplets(2, &[(0, 1, 1.0)]).unwrap();
        let p = build_maxcut(&a).unwrap().with_width(3).unwrap();
        assert_eq!(p.set, ConstraintSet::UnitNormRow);
        assert_eq!(p.with_width(1).unwrap().set, ConstraintSet::Binary);
    }

    #[test]
    fn sbm_examples() {
        let (a, truth) = generate_sbm(10, 1.0, 0.0, 3).unwrap();
        assert_eq!(truth.iter().sum::<f64>(), 0.0);
        for i in 0..10 {
            for j in 0..10 {
                let expect = if i != j && truth[i] == truth[j] { 1.0 } else { 0.0 };
                assert_eq!(a.get(i, j), expect);
            }
        }
        let (a1, t1) = generate_sbm(40, 0.3, 0.1, 5).unwrap();
        let (a2, t2) = generate_sbm(40, 0.3, 0.1, 5).unwrap();
        assert_eq!((a1, t1), (a2, t2));
        assert!(generate_sbm(5, 0.5, 0.1, 0).is_err());
        assert!(generate_sbm(6, 0.1, 0.5, 0).is_err());
    }

    #[test]
    fn sbm_equal_probabilities_edge_count() {
        // p = q is outside the generator's contract, so use G(n, p) directly.
        let n = 200;
        let a = generate_erdos_renyi(n, 0.3, 1).unwrap();
        let m = a.pattern().off_diagonal_len() as f64;
        let pairs = (n * (n - 1) / 2) as f64;
        let sd = (pairs * 0.3 * 0.7).sqrt();
        assert!((m - 0.3 * pairs).abs() < 5.0 * sd);
    }

    #[test]
    fn community_examples() {
        let a = SymSparse::from_triplets(2, &[(0, 1, 1.0)]).unwrap();
        let p = build_community(&a, 0.6, 0.2).unwrap();
        let c = p.linear_cost().unwrap();
        for (i, j, v) in [(0, 0, 0.4), (0, 1, -0.6), (1, 1, 0.4)] {
            assert!((c.get(i, j) - v).abs() < 1e-15);
        }
        let zero = SymSparse::from_triplets(3, &[]).unwrap();
        let c = build_community(&zero, 0.5, 0.3).unwrap().linear_cost().unwrap().clone();
        assert_eq!(c.quad_form(&[1.0, -1.0, 1.0]), 0.4);
        let m = build_community_mean(&a).unwrap();
        assert_eq!(m.linear_cost().unwrap().shift, 2.0 / 4.0);
    }

    #[test]
    fn community_matvec_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for seed in 0..10 {
            let n = rng.random_range(2..50);
            let a = generate_erdos_renyi(n, 0.3, seed).unwrap();
            let c = build_community(&a, 0.7, 0.1).unwrap().linear_cost().unwrap().clone();
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let fast = c.matvec(&v);
            for i in 0..n {
                let slow: f64 = (0..n).map(|j| (0.4 - a.get(i, j)) * v[j]).sum();
                assert!((fast[i] - slow).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn segmentation_examples() {
        let img = Image::new(2, 1, vec![[0.0; 3], [1.0; 3]]).unwrap();
        let a = segmentation_weights(&img, 1.0, Kernel::Raw, 100).unwrap();
        assert_eq!(a.get(0, 1), 4.0);
        let same = Image::new(2, 1, vec![[0.3, 0.2, 0.1]; 2]).unwrap();
        assert_eq!(segmentation_weights(&same, 0.0, Kernel::Raw, 100).unwrap().get(0, 1), 0.0);
        let g = segmentation_weights(&img, 1.0, Kernel::Gaussian(2.0), 100).unwrap();
        assert!((g.get(0, 1) - (-1.0f64).exp()).abs() < 1e-15);
        assert!(segmentation_weights(&img, 1.0, Kernel::Raw, 1).is_err());
        assert!(Image::new(2, 2, vec![[0.0; 3]; 3]).is_err());
    }

    #[test]
    fn uniform_image_community_shift() {
        let img = Image::new(3, 1, vec![[0.5; 3]; 3]).unwrap();
        let p = build_segmentation(&img, 0.0, Kernel::Gaussian(1.0), SegmentationMode::Community, 100).unwrap();
        let c = p.linear_cost().unwrap();
        // Off-diagonal weights are all 1; the mean is 6/9.
        assert!((c.shift - 6.0 / 9.0).abs() < 1e-15);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 6.0 / 9.0 } else { 6.0 / 9.0 - 1.0 };
                assert!((c.get(i, j) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn partialobs_examples() {
        let c = SymSparse::from_triplets(2, &[(0, 0, 1.0), (0, 1, 0.5), (1, 1, 2.0)]).unwrap();
        let p = build_partialobs(&c, 5).unwrap();
        let mp = p.matrix_problem().unwrap();
        assert_eq!(mp.objective.value(&c), 0.0);
        assert_eq!(p.set, ConstraintSet::Nonnegative);
        let mut z = c.clone();
        z.set(0, 1, 1.5).unwrap();
        assert_eq!(mp.objective.value(&z), 2.0);
        assert!(p.vector_problem().is_err());
    }

    #[test]
    fn relative_error_examples() {
        let c = generate_partialobs(6, 2, 0.5, 1).unwrap();
        assert_eq!(relative_error(&c, &c).unwrap(), 0.0);
        assert_eq!(relative_error(&SymSparse::zeros(c.pattern().clone()), &c).unwrap(), 1.0);
        let mut two = c.clone();
        two.scale(2.0);
        assert!((relative_error(&two, &c).unwrap() - 1.0).abs() < 1e-15);
        let zero = SymSparse::zeros(c.pattern().clone());
        assert!(relative_error(&c, &zero).is_err());
    }
}
