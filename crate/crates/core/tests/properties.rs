use std::sync::Arc;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lowrank_admm::admm_matrix::{self, MatrixAdmmState, Objective, SolverConfig};
use lowrank_admm::admm_vector::{self, VectorAdmmState, VectorObjective};
use lowrank_admm::cli::{parse_gset, write_gset};
use lowrank_admm::diagnostics::{auglag_matrix, auglag_vector, theory_constants};
use lowrank_admm::linalg::{project_pattern, row_inner, spectral_norm, sym_min_eigenvalue, sym_spmm};
use lowrank_admm::problems;
use lowrank_admm::rounding::{cut_value, hyperplane_round, sign_round};
use lowrank_admm::sdr;
use lowrank_admm::{ConstraintSet, Factor, LinearMap, ShiftedSym, SparsityPattern, SymSparse};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_pattern(n: usize, density: f64, rng: &mut ChaCha8Rng) -> Arc<SparsityPattern> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(density))
        .collect();
    Arc::new(SparsityPattern::new(n, pairs).unwrap())
}

fn random_sym(pat: &Arc<SparsityPattern>, rng: &mut ChaCha8Rng) -> SymSparse {
    SymSparse::from_fn(pat.clone(), |_, _| rng.random_range(-1.0..1.0))
}

fn random_factor(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Factor {
    Factor::from_fn(n, r, |_, _| rng.random_range(-1.0..1.0))
}

fn dense(s: &SymSparse) -> DMatrix<f64> {
    let rows = s.to_dense();
    DMatrix::from_fn(s.n(), s.n(), |i, j| rows[i][j])
}

fn dense_factor(f: &Factor) -> DMatrix<f64> {
    DMatrix::from_row_slice(f.n(), f.r(), f.data())
}

fn signs(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spmm_matches_dense(seed in any::<u64>(), n in 1usize..15, r in 1usize..5, density in 0.0f64..1.0) {
        let mut g = rng(seed);
        let s = random_sym(&random_pattern(n, density, &mut g), &mut g);
        let y = random_factor(n, r, &mut g);
        let fast = dense_factor(&sym_spmm(&s, &y).unwrap());
        let slow = dense(&s) * dense_factor(&y);
        prop_assert!((fast - slow).amax() <= 1e-12);
    }

    #[test]
    fn row_inner_exact_on_integers(seed in any::<u64>(), n in 1usize..12, r in 1usize..5) {
        let mut g = rng(seed);
        let a = Factor::from_fn(n, r, |_, _| g.random_range(-5i32..6) as f64);
        let b = Factor::from_fn(n, r, |_, _| g.random_range(-5i32..6) as f64);
        let d = dense_factor(&a) * dense_factor(&b).transpose();
        let got = row_inner(&a, &b).unwrap();
        for i in 0..n {
            prop_assert_eq!(got[i], d[(i, i)]);
        }
    }

    #[test]
    fn project_pattern_of_gram(seed in any::<u64>(), n in 1usize..12, r in 1usize..4, density in 0.0f64..1.0) {
        let mut g = rng(seed);
        let pat = random_pattern(n, density, &mut g);
        let x = random_factor(n, r, &mut g);
        let p = project_pattern(&x, &x, &pat).unwrap();
        let xx = dense_factor(&x) * dense_factor(&x).transpose();
        for &(i, j) in pat.entries() {
            prop_assert!((p.get(i, j) - xx[(i, j)]).abs() <= 1e-12);
        }
    }

    #[test]
    fn spectral_norm_column_invariance(seed in any::<u64>(), n in 2usize..12, r in 2usize..5) {
        let mut g = rng(seed);
        let y = random_factor(n, r, &mut g);
        let base = spectral_norm(&y, 1e-12, 10_000).value;
        let perm = Factor::from_fn(n, r, |i, j| y.get(i, (j + 1) % r));
        let flip = Factor::from_fn(n, r, |i, j| if j == 0 { -y.get(i, j) } else { y.get(i, j) });
        prop_assert!((spectral_norm(&perm, 1e-12, 10_000).value - base).abs() <= 1e-6 * base.max(1.0));
        prop_assert!((spectral_norm(&flip, 1e-12, 10_000).value - base).abs() <= 1e-6 * base.max(1.0));
    }

    #[test]
    fn min_eigenvalue_matches_dense(seed in any::<u64>(), n in 2usize..12) {
        let mut g = rng(seed);
        let s = random_sym(&Arc::new(SparsityPattern::full(n)), &mut g);
        let est = sym_min_eigenvalue(&ShiftedSym::unshifted(s.clone()), 1e-12, 200_000);
        let exact = dense(&s).symmetric_eigenvalues().min();
        prop_assert!((est.value - exact).abs() <= 1e-3 * (1.0 + exact.abs()), "{} vs {}", est.value, exact);
    }

    #[test]
    fn adjoint_identity(seed in any::<u64>(), n in 1usize..12) {
        let mut g = rng(seed);
        let z = random_sym(&random_pattern(n, 0.5, &mut g), &mut g);
        let b: Vec<f64> = (0..n).map(|_| g.random_range(0.5..2.0)).collect();
        for map in [LinearMap::diag(b.clone()), LinearMap::trace(n, 1.0)] {
            let nu: Vec<f64> = (0..map.m()).map(|_| g.random_range(-1.0..1.0)).collect();
            let lhs: f64 = map.adjoint_diag(&nu).unwrap().iter().zip(z.diag()).map(|(a, d)| a * d).sum();
            let rhs: f64 = nu.iter().zip(map.apply(&z).unwrap()).map(|(a, b)| a * b).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
            let back = map.apply(&map.adjoint(&nu).unwrap()).unwrap();
            let scale = if map.m() == 1 { n as f64 } else { 1.0 };
            for (a, v) in back.iter().zip(&nu) {
                prop_assert!((a - scale * v).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn projection_idempotent(seed in any::<u64>(), n in 1usize..10, r in 1usize..4) {
        let mut g = rng(seed);
        let m = random_factor(n, r, &mut g);
        for set in [
            ConstraintSet::Binary,
            ConstraintSet::Nonnegative,
            ConstraintSet::Free,
            ConstraintSet::UnitNormRow,
            ConstraintSet::UnitNormColumn,
        ] {
            let once = set.project(&m).value;
            let twice = set.project(&once).value;
            prop_assert!(set.contains(&once));
            prop_assert!(once.distance(&twice) <= 1e-12);
        }
    }

    #[test]
    fn generalized_projection_variational_inequality(seed in any::<u64>(), n in 1usize..8, r in 2usize..4) {
        let mut g = rng(seed);
        let x = random_factor(n, r, &mut g);
        let y_hat = random_factor(n, r, &mut g);
        let rho = g.random_range(0.5..3.0);
        let xd = dense_factor(&x);
        let h = (DMatrix::identity(r, r) + xd.transpose() * &xd) * rho;
        for set in [ConstraintSet::Nonnegative, ConstraintSet::Free] {
            let gp = set.generalized_project(&y_hat, &x, rho, 1e-13, 20_000).unwrap();
            for w in gp.objective.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-12);
            }
            // Gradient of ½⟨YH, Y⟩ − ⟨Ŷ, Y⟩ at Y*.
            let grad = dense_factor(&gp.y) * &h - dense_factor(&y_hat);
            for _ in 0..100 {
                let other = set.project(&random_factor(n, r, &mut g)).value;
                let diff = dense_factor(&other) - dense_factor(&gp.y);
                prop_assert!(grad.dot(&diff) >= -1e-8);
            }
        }
    }

    #[test]
    fn xz_update_feasible_and_recovers(seed in any::<u64>(), n in 2usize..12, r in 1usize..4) {
        let mut g = rng(seed);
        let pat = random_pattern(n, 0.4, &mut g);
        let grad = random_sym(&pat, &mut g);
        let st = MatrixAdmmState {
            z: random_sym(&pat, &mut g),
            x: random_factor(n, r, &mut g),
            y: random_factor(n, r, &mut g),
            s: random_sym(&pat, &mut g),
            u: random_factor(n, r, &mut g),
            nu: Vec::new(),
            rho: g.random_range(0.5..5.0),
            k: 0,
        };
        for map in [LinearMap::diag(vec![1.0; n]), LinearMap::trace(n, 2.0)] {
            let nu = admm_matrix::solve_nu(&st, &grad, &map).unwrap();
            let (x, z) = admm_matrix::update_xz(&st, &grad, &map, &nu).unwrap();
            prop_assert!(map.violation(&z).unwrap() <= 1e-10);
            // X = BY + D with B = −ρ⁻¹(G − A*ν + S), D = ρ⁻¹(SY − U) + Y.
            let adj = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(map.adjoint_diag(&nu).unwrap()));
            let b = -(dense(&grad) - adj + dense(&st.s)) / st.rho;
            let yd = dense_factor(&st.y);
            let d = (dense(&st.s) * &yd - dense_factor(&st.u)) / st.rho + &yd;
            prop_assert!((dense_factor(&x) - (b * &yd + d)).amax() <= 1e-12);
        }
    }

    #[test]
    fn auglag_matrix_matches_dense(seed in any::<u64>(), n in 2usize..12, r in 1usize..4) {
        let mut g = rng(seed);
        let pat = random_pattern(n, 0.5, &mut g);
        let c = random_sym(&pat, &mut g);
        let st = MatrixAdmmState {
            z: random_sym(&pat, &mut g),
            x: random_factor(n, r, &mut g),
            y: random_factor(n, r, &mut g),
            s: random_sym(&pat, &mut g),
            u: random_factor(n, r, &mut g),
            nu: Vec::new(),
            rho: g.random_range(0.5..5.0),
            k: 0,
        };
        let obj = Objective::LinearTrace(c.clone());
        let fast = auglag_matrix(&st, &obj, ConstraintSet::Free);
        let (xd, yd) = (dense_factor(&st.x), dense_factor(&st.y));
        let xy = &xd * yd.transpose();
        let mut gap = DMatrix::zeros(n, n);
        for &(i, j) in pat.entries() {
            let p = 0.5 * (xy[(i, j)] + xy[(j, i)]);
            gap[(i, j)] = st.z.get(i, j) - p;
            gap[(j, i)] = st.z.get(i, j) - p;
        }
        let xmy = &xd - &yd;
        let slow = dense(&c).dot(&dense(&st.z))
            + dense_factor(&st.u).dot(&xmy)
            + dense(&st.s).dot(&gap)
            + 0.5 * st.rho * xmy.norm_squared()
            + 0.5 * st.rho * gap.norm_squared();
        prop_assert!((fast - slow).abs() <= 1e-10 * (1.0 + slow.abs()));
    }

    #[test]
    fn auglag_vector_matches_direct(seed in any::<u64>(), n in 1usize..20) {
        let mut g = rng(seed);
        let c = random_sym(&Arc::new(SparsityPattern::full(n)), &mut g);
        let obj = VectorObjective::quadratic(ShiftedSym::unshifted(c.clone()));
        let st = VectorAdmmState {
            x: (0..n).map(|_| g.random_range(-1.0..1.0)).collect(),
            y: signs(n, &mut g),
            u: (0..n).map(|_| g.random_range(-1.0..1.0)).collect(),
            rho: 2.0,
            k: 0,
        };
        let xv = nalgebra::DVector::from_vec(st.x.clone());
        let d = &xv - nalgebra::DVector::from_vec(st.y.clone());
        let slow = (xv.transpose() * dense(&c) * &xv)[0]
            + nalgebra::DVector::from_vec(st.u.clone()).dot(&d)
            + d.norm_squared();
        prop_assert!((auglag_vector(&st, &obj, ConstraintSet::Binary) - slow).abs() <= 1e-10 * (1.0 + slow.abs()));
    }

    #[test]
    fn sigma_max_in_unit_interval_and_decreasing(a in 0.0f64..50.0, b in 0.0f64..50.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let s_lo = theory_constants(lo, 1.0, 1.0, 0.0, 1.0, 0.0).sigma_max;
        let s_hi = theory_constants(hi, 1.0, 1.0, 0.0, 1.0, 0.0).sigma_max;
        prop_assert!(s_lo > 0.0 && s_lo <= 1.0 && s_hi > 0.0);
        prop_assert!(s_hi <= s_lo);
    }

    #[test]
    fn vector_dual_change_bounded(seed in any::<u64>(), n in 2usize..20) {
        let mut g = rng(seed);
        let c = random_sym(&Arc::new(SparsityPattern::full(n)), &mut g);
        let obj = VectorObjective::quadratic(ShiftedSym::unshifted(c));
        let l_g = obj.lipschitz();
        let cfg = SolverConfig { rho0: 4.0 * l_g, gamma: 1.0, rho_max: 4.0 * l_g, inner_tol: 1e-13, inner_max_iter: 500, ..SolverConfig::default() };
        let mut st = VectorAdmmState::initial(n, ConstraintSet::Binary, cfg.rho0, seed);
        for k in 0..30 {
            st.y = admm_vector::update_y(&st, ConstraintSet::Binary);
            let xu = admm_vector::update_x(&st, &obj, cfg.inner_tol, cfg.inner_max_iter).unwrap();
            let (x_prev, u_prev) = (st.x.clone(), st.u.clone());
            st.x = xu.x;
            admm_vector::dual_update(&mut st, &cfg);
            let du: f64 = st.u.iter().zip(&u_prev).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let dx: f64 = st.x.iter().zip(&x_prev).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            // The first step compares against the arbitrary initial x.
            if k > 0 {
                prop_assert!(du <= l_g * (1.0 + 1e-6) * dx + 1e-8, "k {k}: {du} > {l_g}·{dx}");
            }
            // ∇g(x) + u = 0 after the dual update.
            let grad = obj.gradient(&st.x);
            let res: f64 = grad.iter().zip(&st.u).map(|(a, b)| (a + b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(res <= 1e-8 * (1.0 + cfg.rho0 * st.x.iter().map(|v| v * v).sum::<f64>().sqrt()));
        }
    }

    #[test]
    fn prox_psd_projects(seed in any::<u64>(), n in 1usize..12) {
        let mut g = rng(seed);
        let m = DMatrix::from_fn(n, n, |_, _| g.random_range(-1.0..1.0));
        let z = (&m + m.transpose()) * 0.5;
        let p = sdr::prox_psd(&z).unwrap();
        prop_assert!(p.clone().symmetric_eigenvalues().min() >= -1e-10);
        prop_assert!((sdr::prox_psd(&p).unwrap() - &p).amax() <= 1e-10);
        let a = sdr::prox_affine(&z, &LinearMap::trace(n, 1.0)).unwrap();
        prop_assert!((a.trace() - 1.0).abs() <= 1e-12);
        let d = sdr::prox_affine(&z, &LinearMap::diag(vec![1.0; n])).unwrap();
        prop_assert!((0..n).all(|i| d[(i, i)] == 1.0));
    }

    #[test]
    fn cut_equals_negative_quadratic(seed in any::<u64>(), n in 2usize..20, p in 0.1f64..0.9) {
        let mut g = rng(seed);
        let a = problems::generate_erdos_renyi(n, p, seed).unwrap();
        let inst = problems::build_maxcut(&a).unwrap();
        let c = inst.linear_cost().unwrap();
        let x = signs(n, &mut g);
        let direct: f64 = a.pattern().entries().iter().zip(a.values())
            .filter(|(&(i, j), _)| i != j && x[i] != x[j])
            .map(|(_, w)| w)
            .sum();
        let cut = cut_value(&a, &x).unwrap();
        prop_assert!((cut + c.quad_form(&x)).abs() <= 1e-12);
        prop_assert!((cut - direct).abs() <= 1e-12);
    }

    #[test]
    fn convexify_shifts_by_constant_on_signs(seed in any::<u64>(), n in 2usize..16) {
        let mut g = rng(seed);
        let a = problems::generate_erdos_renyi(n, 0.5, seed).unwrap();
        let c = problems::build_maxcut(&a).unwrap().linear_cost().unwrap().clone();
        let cv = problems::convexify(&c).unwrap();
        let lo = dense(&cv.sparse).symmetric_eigenvalues().min();
        prop_assert!(lo >= -1e-6);
        let x1 = signs(n, &mut g);
        let x2 = signs(n, &mut g);
        let d1 = cv.quad_form(&x1) - c.quad_form(&x1);
        let d2 = cv.quad_form(&x2) - c.quad_form(&x2);
        prop_assert!((d1 - d2).abs() <= 1e-9);
    }

    #[test]
    fn hyperplane_no_worse_than_first_column(seed in any::<u64>(), n in 2usize..15, r in 1usize..5) {
        let mut g = rng(seed);
        let a = problems::generate_erdos_renyi(n, 0.5, seed).unwrap();
        let c = problems::build_maxcut(&a).unwrap().linear_cost().unwrap().clone();
        let f = random_factor(n, r, &mut g);
        let (x, v) = hyperplane_round(&f, &c, 5, seed, 64).unwrap();
        prop_assert!(x.iter().all(|&s| s == 1.0 || s == -1.0));
        prop_assert!((c.quad_form(&x) - v).abs() <= 1e-12);
        let first = sign_round(&f.column(0));
        prop_assert!(v <= c.quad_form(&first) + 1e-12);
        prop_assert_eq!(hyperplane_round(&f, &c, 5, seed, 64).unwrap(), (x, v));
    }

    #[test]
    fn community_matvec_matches_dense(seed in any::<u64>(), half in 1usize..25) {
        let n = 2 * half;
        let mut g = rng(seed);
        let (a, _) = problems::generate_sbm(n, 0.6, 0.2, seed).unwrap();
        let inst = problems::build_community(&a, 0.6, 0.2).unwrap();
        let c = inst.linear_cost().unwrap();
        let v: Vec<f64> = (0..n).map(|_| g.random_range(-1.0..1.0)).collect();
        let dense_c = DMatrix::from_fn(n, n, |i, j| 0.4 - a.get(i, j));
        let expect = dense_c * nalgebra::DVector::from_vec(v.clone());
        for (got, e) in c.matvec(&v).iter().zip(expect.iter()) {
            prop_assert!((got - e).abs() <= 1e-10);
        }
    }

    #[test]
    fn sbm_symmetric_zero_diagonal_deterministic(seed in any::<u64>(), half in 1usize..20) {
        let n = 2 * half;
        let (a, truth) = problems::generate_sbm(n, 0.5, 0.1, seed).unwrap();
        prop_assert!(a.diag().iter().all(|&d| d == 0.0));
        prop_assert!(a.values().iter().all(|&w| w == 0.0 || w == 1.0));
        prop_assert_eq!(truth.len(), n);
        prop_assert_eq!(problems::generate_sbm(n, 0.5, 0.1, seed).unwrap(), (a, truth));
    }

    #[test]
    fn partialobs_objective_convex(seed in any::<u64>(), n in 2usize..12, alpha in 0.0f64..1.0) {
        let mut g = rng(seed);
        let c = problems::generate_partialobs(n, 2, 0.5, seed).unwrap();
        let obj = Objective::PartialObsLs(c.clone());
        let z1 = random_sym(c.pattern(), &mut g);
        let z2 = random_sym(c.pattern(), &mut g);
        let mix = z1.linear_combination(alpha, &z2, 1.0 - alpha);
        prop_assert!(obj.value(&mix) <= alpha * obj.value(&z1) + (1.0 - alpha) * obj.value(&z2) + 1e-12);
    }

    #[test]
    fn gset_round_trip(seed in any::<u64>(), n in 2usize..30, p in 0.0f64..1.0) {
        let mut g = rng(seed);
        let a = problems::generate_erdos_renyi(n, p, seed).unwrap();
        let weighted = SymSparse::from_fn(a.pattern().clone(), |i, j| {
            if i == j { 0.0 } else { (g.random_range(1i32..20) as f64) * a.get(i, j) }
        });
        let text = write_gset(&weighted);
        let back = parse_gset(&text).unwrap();
        prop_assert_eq!(write_gset(&back), text);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(back.get(i, j), weighted.get(i, j));
            }
        }
    }

    #[test]
    fn matrix_solver_deterministic(seed in 0u64..1000) {
        let a = problems::generate_erdos_renyi(10, 0.4, seed).unwrap();
        let inst = problems::build_maxcut(&a).unwrap().with_width(3).unwrap();
        let problem = inst.matrix_problem().unwrap();
        let cfg = SolverConfig { seed, max_iter: 50, ..SolverConfig::default() };
        let r1 = admm_matrix::solve(&problem, &cfg).unwrap();
        let r2 = admm_matrix::solve(&problem, &cfg).unwrap();
        prop_assert_eq!(r1.trace, r2.trace);
    }
}
