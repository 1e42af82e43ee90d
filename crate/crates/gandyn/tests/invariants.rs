//! Cross-module invariants: analytic equilibrium blocks against
//! finite-difference oracles, structural properties of the coupled
//! Jacobians, and conservation/monotonicity laws along trajectories.

use gandyn::dynamics::{integrate, integrate_system, IntegratorCfg, MonitorSpec};
use gandyn::losses::{logistic_loss, wgan_loss};
use gandyn::numkit::{eig_general, unvec, CounterRng, Mat};
use gandyn::stability::{
    assemble_equilibrium_jacobian, numeric_jacobian, project_equilibrium_subspace,
    to_bundle_orientation,
};
use gandyn::systems::{
    feature_linear_gaussian, gan_lq_nd, scalar_wgan_lq, uniform_2d, wgan_lq_nd, GanSystem,
    JacobianBundle, LqMode, ParamPoint,
};
use std::sync::Arc;

fn rel_err(a: &Mat, b: &Mat) -> f64 {
    a.sub(b).frobenius() / b.frobenius().max(1.0)
}

/// The master cross-check: for every closed-form/quadrature system with
/// analytic blocks, the FD Jacobian of the field at equilibrium matches
/// the assembled [[2f″K_DD, f′K_DG], [−f′K_DGᵀ, 0]] (in bundle
/// orientation) to 1e-5 relative.
#[test]
fn analytic_blocks_match_fd_jacobian() {
    let sigma2 = Mat::from_rows(&[vec![1.4, 0.3], vec![0.3, 0.8]]);
    let systems: Vec<Arc<dyn GanSystem>> = vec![
        uniform_2d(logistic_loss()).unwrap(),
        uniform_2d(wgan_loss()).unwrap(),
        scalar_wgan_lq(1.3).unwrap(),
        wgan_lq_nd(&sigma2, &[0.4, -0.2]).unwrap(),
        gan_lq_nd(
            &Mat::diag(&[1.7]),
            &[0.6],
            logistic_loss(),
            LqMode::Quadrature { nodes: 64 },
        )
        .unwrap(),
        gandyn::systems::redundant_wrap(uniform_2d(logistic_loss()).unwrap(), &[0], &[]).unwrap(),
    ];
    for sys in systems {
        let bundle = sys.analytic_blocks().expect("blocks");
        let j_analytic = assemble_equilibrium_jacobian(&bundle);
        let j_fd = numeric_jacobian(|p| sys.field(p), &sys.equilibrium(), None).unwrap();
        let mapped = to_bundle_orientation(&j_fd, sys.n_d());
        let err = rel_err(&mapped, &j_analytic);
        assert!(err <= 1e-5, "{}: rel err {err}", sys.name());
    }
}

/// Monte-carlo variant of the master cross-check at 3·SE scale: the
/// common-random-numbers construction makes the FD estimate very tight,
/// so a fixed small relative gate is adequate here (the full 3·SE
/// machinery runs in the acceptance suite).
#[test]
fn monte_carlo_blocks_match_fd_jacobian() {
    let sigma = Mat::from_rows(&[vec![1.2, 0.25], vec![0.25, 0.8]]);
    let sys = gan_lq_nd(
        &sigma,
        &[0.3, -0.5],
        logistic_loss(),
        LqMode::MonteCarlo {
            seed: 7,
            n_samples: 400_000,
        },
    )
    .unwrap();
    let bundle = sys.analytic_blocks().unwrap();
    let j_analytic = assemble_equilibrium_jacobian(&bundle);
    let j_fd = numeric_jacobian(|p| sys.field(p), &sys.equilibrium(), None).unwrap();
    let err = rel_err(&to_bundle_orientation(&j_fd, sys.n_d()), &j_analytic);
    assert!(err < 5e-3, "rel err {err}");
}

#[test]
fn feature_linear_blocks_match_fd_jacobian() {
    let sys = feature_linear_gaussian(1.5, logistic_loss(), 31, 400_000).unwrap();
    let bundle = sys.analytic_blocks().unwrap();
    let j_analytic = assemble_equilibrium_jacobian(&bundle);
    let j_fd = numeric_jacobian(|p| sys.field(p), &sys.equilibrium(), None).unwrap();
    let err = rel_err(&to_bundle_orientation(&j_fd, sys.n_d()), &j_analytic);
    assert!(err < 1e-2, "rel err {err}");
}

/// At equilibrium the (D,G) and (G,D) off-diagonal blocks of the field
/// Jacobian are negative transposes of one another.
#[test]
fn antisymmetric_coupling_at_equilibrium() {
    let systems: Vec<Arc<dyn GanSystem>> = vec![
        uniform_2d(logistic_loss()).unwrap(),
        uniform_2d(wgan_loss()).unwrap(),
        scalar_wgan_lq(1.0).unwrap(),
        gan_lq_nd(
            &Mat::identity(1),
            &[0.0],
            logistic_loss(),
            LqMode::Quadrature { nodes: 64 },
        )
        .unwrap(),
    ];
    for sys in systems {
        let j = numeric_jacobian(|p| sys.field(p), &sys.equilibrium(), None).unwrap();
        let nd = sys.n_d();
        let ng = sys.n_g();
        let dg = j.block(0, nd, nd, ng);
        let gd = j.block(nd, 0, ng, nd);
        let defect = dg.add(&gd.transpose()).frobenius();
        assert!(defect < 1e-6, "{}: defect {defect}", sys.name());
    }
}

/// Initialized in the eigenbasis of Σ, the n-dimensional WGAN flow keeps
/// W₂ and A simultaneously diagonalized by U (≤ 1e-8 leakage).
#[test]
fn wgan_nd_eigenspace_closure() {
    let sigma = Mat::from_rows(&[vec![1.5, 0.4], vec![0.4, 0.9]]);
    let sys = wgan_lq_nd(&sigma, &[0.0, 0.0]).unwrap();
    let e = gandyn::numkit::eig_sym(&sigma).unwrap();
    let u = e.eigenvectors.clone();
    // A(0) = U diag(0.8·√λ₁, 1.1·√λ₂) Uᵀ, W₂(0) = 0
    let lam0 = Mat::diag(&[0.8 * e.eigenvalues[0].sqrt(), 1.1 * e.eigenvalues[1].sqrt()]);
    let a0 = u.matmul(&lam0).matmul(&u.transpose());
    let mut theta_g = gandyn::numkit::vec_mat(&a0).entries;
    theta_g.extend([0.0, 0.0]);
    let x0 = ParamPoint::new(vec![0.0; 6], theta_g);
    let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 10.0);
    let run = integrate_system(sys.as_ref(), &x0, &cfg, &[], &[], &[]).unwrap();
    let mut worst = 0.0f64;
    for state in &run.trajectory.states {
        for block in [&state.theta_d[..4], &state.theta_g[..4]] {
            let m = unvec(block, 2, 2);
            let rotated = u.transpose().matmul(&m).matmul(&u);
            worst = worst.max(rotated[(0, 1)].abs()).max(rotated[(1, 0)].abs());
        }
    }
    assert!(worst <= 1e-8, "off-diagonal leakage {worst}");
}

/// Integrating the scalar WGAN forward for T and then the negated field
/// for T returns to the start within 1e-8.
#[test]
fn time_reversal_on_center_orbit() {
    let sys = scalar_wgan_lq(1.0).unwrap();
    let x0 = ParamPoint::new(vec![0.0, 0.0], vec![0.9, 0.0]);
    let t_half = 1.5;
    let cfg = IntegratorCfg::adaptive(1e-11, 1e-13, t_half);
    let fwd = integrate_system(sys.as_ref(), &x0, &cfg, &[], &[], &[]).unwrap();
    let mid = fwd.trajectory.last_state().unwrap().clone();
    let back = integrate(
        |p| {
            let f = sys.field(p)?;
            Ok(ParamPoint::new(
                f.theta_d.iter().map(|v| -v).collect(),
                f.theta_g.iter().map(|v| -v).collect(),
            ))
        },
        &mid,
        &cfg,
        &[],
        &[],
        &[],
    )
    .unwrap();
    let d = back.trajectory.last_state().unwrap().distance(&x0);
    assert!(d <= 1e-8, "return distance {d}");
}

/// Along the linearized projected GAN flow, ½‖γ‖² is non-increasing and
/// never flat for 20 consecutive accepted steps away from equilibrium
/// (the invariance-principle behaviour: the energy derivative vanishes
/// only at isolated instants).
#[test]
fn lasalle_energy_monitor_on_linearized_projected_flow() {
    let sys = uniform_2d(logistic_loss()).unwrap();
    let split = project_equilibrium_subspace(&sys.analytic_blocks().unwrap(), None).unwrap();
    let j = assemble_equilibrium_jacobian(&split.projected);
    let field = move |p: &ParamPoint| -> gandyn::error::Result<ParamPoint> {
        let v = j.matvec(&p.concat());
        Ok(ParamPoint::from_concat(1, 1, &v))
    };
    let x0 = ParamPoint::new(vec![0.3], vec![-0.2]);
    let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 120.0);
    let run = integrate(
        field,
        &x0,
        &cfg,
        &[],
        &[MonitorSpec::RadiusSq {
            name: "energy".into(),
            center: ParamPoint::new(vec![0.0], vec![0.0]),
            coords: None,
        }],
        &[],
    )
    .unwrap();
    let energy = run.trajectory.monitor("energy").unwrap();
    let mut flat_run = 0usize;
    let mut worst_flat = 0usize;
    for (k, w) in energy.windows(2).enumerate() {
        assert!(w[1] <= w[0] + 1e-9, "energy increased at step {k}");
        // count consecutive steps with negligible decrease away from 0
        if w[0] - w[1] <= 1e-14 * w[0].max(1e-300) && w[0] > 1e-12 {
            flat_run += 1;
            worst_flat = worst_flat.max(flat_run);
        } else {
            flat_run = 0;
        }
    }
    assert!(worst_flat < 20, "energy flat for {worst_flat} consecutive steps");
}

/// Hessian identifications behind the equilibrium-subspace analysis,
/// checked by finite differences on the uniform system:
/// ∇²_{θ_D} E_data[D²] = 2K_DD and ∇²_{θ_G} ‖E_data∇D − E_gen∇D‖² = 2K_DGᵀK_DG.
#[test]
fn hessian_identifications_on_uniform_system() {
    let quad = gandyn::numkit::gauss_legendre(64).unwrap();
    // E_data[D²] as a function of w₂: ∫ (w₂x²)² /2 dx = w₂²/5
    let e_d2 = |w2: f64| -> f64 { 0.5 * quad.integrate(|x| (w2 * x * x) * (w2 * x * x)) };
    let h = 1e-4;
    let hess_d = (e_d2(h) - 2.0 * e_d2(0.0) + e_d2(-h)) / (h * h);
    assert!((hess_d - 2.0 * 0.2).abs() < 1e-8, "got {hess_d}");
    // ‖E_data[x²] − E_{p_a}[x²]‖² as a function of a at a⋆ = 1
    let gap_sq = |a: f64| -> f64 {
        let data = 0.5 * quad.integrate(|x| x * x);
        let gen = 0.5 * quad.integrate(|z| (a * z) * (a * z));
        (data - gen) * (data - gen)
    };
    let hess_g = (gap_sq(1.0 + h) - 2.0 * gap_sq(1.0) + gap_sq(1.0 - h)) / (h * h);
    let want = 2.0 * (2.0 / 3.0) * (2.0 / 3.0);
    assert!((hess_g - want).abs() < 1e-6, "got {hess_g} want {want}");
}

/// Null-space structure of the n ≥ 2 linear-quadratic system: the vec
/// parametrization duplicates the quadratic discriminator coefficients
/// (antisymmetric W₂ directions) and the generator carries an exact
/// rotation redundancy (A ↦ AR leaves AAᵀ fixed, so null(K_DG) ⊇
/// {KΣ^{−1/2} : K antisymmetric}). The full equilibrium Jacobian
/// therefore has exactly n(n−1) zero eigenvalues, all of which the
/// projection removes; the projected Jacobian is Hurwitz.
#[test]
fn lq_nd_equilibrium_manifold_structure() {
    use gandyn::stability::{hurwitz_check, null_inclusion_defect};
    for n in [2usize, 3] {
        let sigma = Mat::from_fn(n, n, |i, j| if i == j { 1.0 + i as f64 } else { 0.2 });
        let mu: Vec<f64> = (0..n).map(|i| 0.3 * i as f64).collect();
        let sys = gan_lq_nd(
            &sigma,
            &mu,
            logistic_loss(),
            LqMode::MonteCarlo {
                seed: 1,
                n_samples: 100,
            },
        )
        .unwrap();
        let bundle = sys.analytic_blocks().unwrap();
        let j = assemble_equilibrium_jacobian(&bundle);
        let report = hurwitz_check(&j, Some(1e-9)).unwrap();
        assert_eq!(report.zero_count, n * (n - 1), "n={n}");
        assert!(!report.hurwitz);
        // a rotation tangent is annihilated by K_DG
        let half_inv = {
            let e = gandyn::numkit::eig_sym(&sigma).unwrap();
            let inv = Mat::diag(
                &e.eigenvalues
                    .iter()
                    .map(|l| 1.0 / l.sqrt())
                    .collect::<Vec<_>>(),
            );
            e.eigenvectors
                .matmul(&inv)
                .matmul(&e.eigenvectors.transpose())
        };
        let mut k = Mat::zeros(n, n);
        k[(0, 1)] = 1.0;
        k[(1, 0)] = -1.0;
        let v = k.matmul(&half_inv);
        let mut dir = gandyn::numkit::vec_mat(&v).entries;
        dir.extend(vec![0.0; n]);
        let image = bundle.k_dg.matvec(&dir);
        assert!(
            gandyn::numkit::mat::norm(&image) < 1e-10,
            "rotation tangent not annihilated (n={n})"
        );
        // projection restores exponential stability
        let split = project_equilibrium_subspace(&bundle, None).unwrap();
        let proj = hurwitz_check(&assemble_equilibrium_jacobian(&split.projected), None).unwrap();
        assert!(proj.hurwitz, "n={n}");
        assert!(null_inclusion_defect(&bundle, None).unwrap() < 1e-10);
    }
}

/// Post-hoc event scan: return-to-start fires for the orbiting WGAN
/// uniform system and never for the converging logistic one.
#[test]
fn detect_events_classifies_center_vs_spiral() {
    use gandyn::dynamics::{detect_events, EventSpec};
    let x0 = ParamPoint::new(vec![0.2], vec![0.8]);
    let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 40.0);
    // chord-distance scan on recorded rows: the WGAN orbit passes within
    // interpolation error of its start, the logistic spiral stays away
    let spec = vec![EventSpec::ReturnToStart {
        tol: 0.02,
        t_min: 1.0,
        halt: false,
    }];
    let wgan = uniform_2d(wgan_loss()).unwrap();
    let run_w = integrate_system(wgan.as_ref(), &x0, &cfg, &[], &[], &[]).unwrap();
    let ev_w = detect_events(&run_w.trajectory, &spec);
    assert!(ev_w.iter().any(|e| e.kind == "return_to_start"));
    let logistic = uniform_2d(logistic_loss()).unwrap();
    let run_l = integrate_system(logistic.as_ref(), &x0, &cfg, &[], &[], &[]).unwrap();
    let ev_l = detect_events(&run_l.trajectory, &spec);
    assert!(ev_l.iter().all(|e| e.kind != "return_to_start"));
}

/// The damped-block assembly matches the FD Jacobian of the regularized
/// logistic uniform field for small η (in bundle orientation).
#[test]
fn regularized_blocks_match_fd_logistic() {
    use gandyn::dynamics::regularize;
    use gandyn::stability::assemble_regularized_jacobian;
    let base = uniform_2d(logistic_loss()).unwrap();
    let bundle = base.analytic_blocks().unwrap();
    for eta in [0.05, 0.2] {
        let reg = regularize(base.clone(), eta).unwrap();
        let j_fd = numeric_jacobian(|p| reg.field(p), &base.equilibrium(), None).unwrap();
        let j_blocks = assemble_regularized_jacobian(&bundle, eta).unwrap();
        let err = j_blocks
            .sub(&to_bundle_orientation(&j_fd, 1))
            .max_abs();
        assert!(err < 1e-5, "eta={eta}: max entry deviation {err}");
    }
}

/// Projected regularized WGAN n=2 bundle is Hurwitz at η = 0.1.
#[test]
fn wgan_nd_projected_regularized_hurwitz() {
    use gandyn::stability::check_regularized_wgan_bounds;
    let sigma = Mat::from_rows(&[vec![1.3, 0.2], vec![0.2, 0.7]]);
    let sys = wgan_lq_nd(&sigma, &[0.1, -0.3]).unwrap();
    let split = project_equilibrium_subspace(&sys.analytic_blocks().unwrap(), None).unwrap();
    assert!(split.wgan_path);
    let (report, bounds) = check_regularized_wgan_bounds(&split.projected, 0.1).unwrap();
    assert!(report.hurwitz, "abscissa {}", report.spectral_abscissa);
    let complex = bounds.iter().find(|b| b.name == "complex_branch").unwrap();
    assert!(complex.satisfied);
}

/// Parallel batch reductions are order-preserving, so the batched FD
/// oracle is byte-identical at any thread count.
#[test]
fn monte_carlo_fd_oracle_is_parallelism_invariant() {
    let sigma = Mat::diag(&[1.0, 2.0]);
    let sys = gan_lq_nd(
        &sigma,
        &[0.5, 0.0],
        logistic_loss(),
        LqMode::MonteCarlo {
            seed: 5,
            n_samples: 50_000,
        },
    )
    .unwrap();
    let eq = sys.equilibrium();
    let (mean_default, se_default) = sys.fd_jacobian_batched(&eq, 25).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let (mean_single, se_single) = pool.install(|| sys.fd_jacobian_batched(&eq, 25).unwrap());
    assert_eq!(mean_default.entries, mean_single.entries);
    assert_eq!(se_default.entries, se_single.entries);
}

/// Randomized structural property: with J_DD ⪯ 0 every eigenvalue of
/// [[J_DD, J_DG], [−J_DGᵀ, 0]] has Re ≤ 0.
#[test]
fn skew_coupled_structure_is_weakly_stable() {
    let rng = CounterRng::new(20_26);
    for case in 0..60usize {
        let nd = 1 + case % 3;
        let ng = 1 + (case / 3) % 3;
        let base = (case * 977) as u64;
        // PSD K_DD (possibly singular), arbitrary K_DG, f2 ≤ 0
        let a = Mat::from_fn(nd, nd, |i, j| rng.gaussian(base + (i * nd + j) as u64));
        let rank_drop = case % 2 == 0;
        let mut k_dd = a.matmul(&a.transpose());
        if rank_drop && nd > 1 {
            // zero out the last row/column pair to force singularity
            let v = Mat::from_fn(nd, nd, |i, j| {
                if i == nd - 1 || j == nd - 1 {
                    0.0
                } else {
                    k_dd[(i, j)]
                }
            });
            k_dd = v;
        }
        let k_dg = Mat::from_fn(nd, ng, |i, j| rng.gaussian(base + 400 + (i * ng + j) as u64));
        let f2 = -0.1 - 0.4 * rng.uniform(base + 900);
        let bundle = JacobianBundle {
            k_dd,
            k_dg,
            f1: 0.7,
            f2,
        };
        let j = assemble_equilibrium_jacobian(&bundle);
        let s = eig_general(&j).unwrap();
        let abscissa = s.spectral_abscissa();
        assert!(abscissa <= 1e-8, "case {case}: abscissa {abscissa}");
    }
}
