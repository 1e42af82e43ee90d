//! The twelve verification criteria. Each returns its check lines;
//! tolerances are pinned here, in code.

use super::{CheckLine, CriterionCtx};
use crate::dynamics::{
    fit_exponential_rate, integrate_system, regularize, unroll1, EventSpec, IntegratorCfg,
    MonitorSpec,
};
use crate::error::{Error, Result};
use crate::losses::{logistic_loss, wgan_loss};
use crate::numkit::{eig_sym, gaussian_fourth_moment_matrix, CounterRng, Mat};
use crate::stability::{
    assemble_equilibrium_jacobian, assemble_regularized_jacobian, build_regularized_certificate,
    check_skew_block_bounds, check_equilibrium_bounds, check_regularized_wgan_bounds, hurwitz_check,
    numeric_jacobian, project_equilibrium_subspace, to_bundle_orientation,
    verify_multiple_equilibria_convergence,
};
use crate::systems::{
    concavity_probe, dirac_linear, gan_lq_nd, redundant_wrap_with_lift, scalar_wgan_lq,
    uniform_2d, GanSystem, LqMode, ParamPoint, ProbeMode,
};
use std::sync::Arc;

fn mat_close(label: &str, got: &Mat, want: &Mat, tol: f64) -> CheckLine {
    let mut worst = 0.0f64;
    for (a, b) in got.entries.iter().zip(&want.entries) {
        worst = worst.max((a - b).abs());
    }
    CheckLine::le(format!("{label} (max entry deviation)"), worst, tol)
}

/// Random orthogonal matrix by Gram–Schmidt on counter-keyed Gaussians.
fn random_orthogonal(rng: &CounterRng, base: u64, n: usize) -> Mat {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<f64> = (0..n)
            .map(|i| rng.gaussian(base + (j * n + i) as u64))
            .collect();
        for c in &cols {
            let d = crate::numkit::mat::dot(c, &v);
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= d * ci;
            }
        }
        let nv = crate::numkit::mat::norm(&v);
        for vi in v.iter_mut() {
            *vi /= nv;
        }
        cols.push(v);
    }
    Mat::from_fn(n, n, |i, j| cols[j][i])
}

/// Random SPD matrix with eigenvalues in [lo, hi] (condition ≤ hi/lo).
fn random_spd(rng: &CounterRng, base: u64, n: usize, lo: f64, hi: f64) -> Mat {
    let u = random_orthogonal(rng, base, n);
    let lams: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * rng.uniform(base + 10_000 + i as u64))
        .collect();
    u.matmul(&Mat::diag(&lams)).matmul(&u.transpose()).symmetrize()
}

// ---------------------------------------------------------------------------
// 1. WGAN limit cycle
// ---------------------------------------------------------------------------

pub fn c01_wgan_limit_cycle(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let sys = scalar_wgan_lq(1.0)?;
    let x0 = ParamPoint::new(vec![0.0, 0.0], vec![0.9, 0.0]);
    let center = ParamPoint::new(vec![0.0, 0.0], vec![1.0, 0.0]);
    let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 12.0);

    // pass 1: locate the first w₂ = 0 down-crossing
    let section = EventSpec::SectionCrossing {
        coord: 0,
        level: 0.0,
        direction: -1,
    };
    let probe = integrate_system(sys.as_ref(), &x0, &cfg, std::slice::from_ref(&section), &[], &[])?;
    let t_cross = probe
        .events
        .iter()
        .find(|e| e.kind == "section_crossing")
        .ok_or_else(|| Error::numeric("no section crossing found"))?
        .t;

    // pass 2: sample T ± offsets and 2T; collect monotonicity violations
    let mut samples = vec![2.0 * t_cross];
    let n_offsets = 100;
    for i in 1..=n_offsets {
        let tau = t_cross * i as f64 / (n_offsets + 1) as f64;
        samples.push(t_cross - tau);
        samples.push(t_cross + tau);
    }
    let radius_event = EventSpec::RadiusMonotonicityViolation {
        center: center.clone(),
        coords: Some(vec![0, 2]),
        guard_coord: Some(0),
        guard_positive: true,
        slack: 0.0,
    };
    let monitors = vec![MonitorSpec::RadiusSq {
        name: "radius_sq".into(),
        center: center.clone(),
        coords: Some(vec![0, 2]),
    }];
    let run = integrate_system(
        sys.as_ref(),
        &x0,
        &cfg,
        &[section, radius_event],
        &monitors,
        &samples,
    )?;

    let mut checks = Vec::new();
    checks.push(CheckLine::ge("a(T) exceeds 1.1", {
        let i = run.trajectory.nearest_index(t_cross).unwrap();
        run.trajectory.states[i].theta_g[0]
    }, 1.1));

    // (a) radius never decreases while w₂ > 0
    let max_violation = run
        .events
        .iter()
        .filter(|e| e.kind == "radius_monotonicity_violation")
        .map(|e| e.value)
        .fold(0.0f64, f64::max);
    checks.push(CheckLine::le(
        "radius monotonicity max violation while w2>0",
        max_violation,
        1e-9,
    ));

    // (b) return to start at t = 2T
    let i2t = run.trajectory.nearest_index(2.0 * t_cross).unwrap();
    let d2t = run.trajectory.states[i2t].distance(&x0);
    checks.push(CheckLine::le("distance to start at t=2T", d2t, 1e-6));

    // (c) retracing symmetry at the sampled offsets
    let mut worst = 0.0f64;
    for i in 1..=n_offsets {
        let tau = t_cross * i as f64 / (n_offsets + 1) as f64;
        let ip = run.trajectory.nearest_index(t_cross + tau).unwrap();
        let im = run.trajectory.nearest_index(t_cross - tau).unwrap();
        let sp = &run.trajectory.states[ip];
        let sm = &run.trajectory.states[im];
        worst = worst.max((sp.theta_d[0] + sm.theta_d[0]).abs());
        worst = worst.max((sp.theta_g[0] - sm.theta_g[0]).abs());
    }
    checks.push(CheckLine::le(
        "retracing symmetry worst deviation (100 offsets)",
        worst,
        1e-7,
    ));

    let names = sys.param_names();
    ctx.write_artifact(
        "c01_orbit.csv",
        &run.trajectory.to_csv(
            &names,
            &[
                format!("gandyn {} seed={}", crate::ARTIFACT_VERSION, ctx.seed),
                "criterion=1 system=scalar_wgan_lq sigma=1".into(),
            ],
        ),
    )?;
    ctx.write_artifact(
        "c01_events.json",
        &serde_json::to_string_pretty(&run.events).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 2. GAN local stability
// ---------------------------------------------------------------------------

pub fn c02_gan_local_stability(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let sys = uniform_2d(logistic_loss())?;
    let bundle = sys.analytic_blocks().unwrap();
    let stated = Mat::from_rows(&[vec![-0.1, 1.0 / 3.0], vec![-1.0 / 3.0, 0.0]]);

    let mut checks = Vec::new();
    let j_analytic = assemble_equilibrium_jacobian(&bundle);
    checks.push(mat_close("analytic jacobian equals stated", &j_analytic, &stated, 1e-6));
    let j_fd = numeric_jacobian(|p| sys.field(p), &sys.equilibrium(), None)?;
    checks.push(mat_close(
        "fd jacobian (bundle orientation) equals stated",
        &to_bundle_orientation(&j_fd, 1),
        &stated,
        1e-6,
    ));

    let (report, bounds) = check_equilibrium_bounds(&bundle)?;
    checks.push(CheckLine::boolean("jacobian is hurwitz", report.hurwitz));
    let complex = bounds.iter().find(|b| b.name == "complex_branch").unwrap();
    checks.push(CheckLine::approx(
        "complex-branch bound value",
        complex.bound_value,
        -0.05,
        1e-12,
    ));
    checks.push(CheckLine::le(
        "complex-branch bound margin (equality case)",
        complex.worst_margin.abs(),
        1e-9,
    ));

    // empirical decay rate from (0.2, 0.8)
    let x0 = ParamPoint::new(vec![0.2], vec![0.8]);
    let eq = sys.equilibrium();
    let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 300.0);
    let run = integrate_system(sys.as_ref(), &x0, &cfg, &[], &[MonitorSpec::FieldNorm], &[])?;
    let rate = fit_exponential_rate(&run.trajectory, &eq, (60.0, 300.0))?;
    checks.push(CheckLine::approx("empirical decay rate", rate, 0.05, 0.005));

    ctx.write_artifact(
        "c02_stability.json",
        &serde_json::to_string_pretty(&report).unwrap(),
    )?;
    let names = sys.param_names();
    ctx.write_artifact(
        "c02_trajectory.csv",
        &run.trajectory.to_csv(
            &names,
            &[
                format!("gandyn {} seed={}", crate::ARTIFACT_VERSION, ctx.seed),
                "criterion=2 system=uniform_2d loss=logistic".into(),
            ],
        ),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 3. Regularizer stabilizes WGAN
// ---------------------------------------------------------------------------

pub fn c03_regularizer_stabilizes_wgan(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let base = uniform_2d(wgan_loss())?;
    let bundle = base.analytic_blocks().unwrap();
    let eta = 0.5;
    let reg = regularize(base.clone(), eta)?;
    let eq = base.equilibrium();
    let mut checks = Vec::new();

    // FD Jacobian of the regularized field equals the stated matrix
    let stated_field = Mat::from_rows(&[vec![0.0, -2.0 / 3.0], vec![2.0 / 3.0, -4.0 / 9.0]]);
    let j_fd = numeric_jacobian(|p| reg.field(p), &eq, None)?;
    checks.push(mat_close(
        "fd regularized jacobian equals stated",
        &j_fd,
        &stated_field,
        1e-6,
    ));
    // damped-block assembly agrees with FD up to orientation
    let j_blocks = assemble_regularized_jacobian(&bundle, eta)?;
    checks.push(mat_close(
        "damped blocks equal fd (bundle orientation)",
        &j_blocks,
        &to_bundle_orientation(&j_fd, 1),
        1e-6,
    ));

    let (report, bounds) = check_regularized_wgan_bounds(&bundle, eta)?;
    checks.push(CheckLine::boolean("regularized jacobian hurwitz", report.hurwitz));
    let complex = bounds.iter().find(|b| b.name == "complex_branch").unwrap();
    checks.push(CheckLine::approx(
        "Re(lambda) equals complex-branch bound -2/9",
        report.spectral_abscissa,
        complex.bound_value,
        1e-9,
    ));
    checks.push(CheckLine::approx(
        "complex-branch bound value",
        complex.bound_value,
        -2.0 / 9.0,
        1e-12,
    ));

    // empirical decay rate 2/9 ± 10%
    let x0 = ParamPoint::new(vec![0.2], vec![0.8]);
    let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 60.0);
    let run = integrate_system(reg.as_ref(), &x0, &cfg, &[], &[], &[])?;
    let rate = fit_exponential_rate(&run.trajectory, &eq, (5.0, 50.0))?;
    checks.push(CheckLine::approx(
        "empirical decay rate",
        rate,
        2.0 / 9.0,
        2.0 / 90.0,
    ));

    // η = 0 control keeps orbiting: distance stays above 0.05 on [0, 200]
    let cfg0 = IntegratorCfg::adaptive(1e-10, 1e-12, 200.0);
    let run0 = integrate_system(base.as_ref(), &x0, &cfg0, &[], &[], &[])?;
    let min_d = run0
        .trajectory
        .states
        .iter()
        .map(|s| s.distance(&eq))
        .fold(f64::INFINITY, f64::min);
    checks.push(CheckLine::ge("eta=0 control min distance", min_d, 0.05));

    ctx.write_artifact(
        "c03_stability.json",
        &serde_json::to_string_pretty(&report).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 4. LQ Gaussian GAN (monte-carlo FD oracle)
// ---------------------------------------------------------------------------

pub fn c04_lq_gaussian_gan(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let rng = CounterRng::new(ctx.seed ^ 0x4c51);
    let mut checks = Vec::new();
    for n in 1..=3usize {
        let base = (n * 100_000) as u64;
        let sigma = random_spd(&rng, base, n, 1.0, 8.0); // condition ≤ 8
        let mut mu: Vec<f64> = (0..n).map(|i| rng.gaussian(base + 777 + i as u64)).collect();
        let mu_norm = crate::numkit::mat::norm(&mu);
        if mu_norm > 2.0 {
            for v in mu.iter_mut() {
                *v *= 2.0 / mu_norm;
            }
        }
        let sys = gan_lq_nd(
            &sigma,
            &mu,
            logistic_loss(),
            LqMode::MonteCarlo {
                seed: ctx.seed + n as u64,
                n_samples: 1_000_000,
            },
        )?;
        let bundle = sys.analytic_blocks().unwrap();
        let j_analytic = assemble_equilibrium_jacobian(&bundle);
        let (j_mc, se) = sys.fd_jacobian_batched(&sys.equilibrium(), 100)?;
        let j_mc_oriented = to_bundle_orientation(&j_mc, sys.n_d());
        let se_oriented = se; // magnitudes unchanged by the sign map
        let floor = 1e-7 * j_analytic.frobenius().max(1.0);
        let mut worst_ratio = 0.0f64;
        for i in 0..j_analytic.rows {
            for jx in 0..j_analytic.cols {
                let dev = (j_analytic[(i, jx)] - j_mc_oriented[(i, jx)]).abs();
                let tol = 3.0 * se_oriented[(i, jx)] + floor;
                worst_ratio = worst_ratio.max(dev / tol);
            }
        }
        checks.push(CheckLine::le(
            format!("n={n}: |analytic − mc-fd| / (3·SE + floor) worst entry"),
            worst_ratio,
            1.0,
        ));
        // field at equilibrium vanishes exactly (common random numbers)
        let f_eq = sys.field(&sys.equilibrium())?;
        checks.push(CheckLine::le(
            format!("n={n}: field norm at equilibrium"),
            f_eq.norm(),
            1e-10,
        ));
        // projected Jacobian Hurwitz + equilibrium branch bounds
        let split = project_equilibrium_subspace(&bundle, None)?;
        let (report, bounds) = check_equilibrium_bounds(&split.projected)?;
        checks.push(CheckLine::boolean(
            format!("n={n}: projected jacobian hurwitz"),
            report.hurwitz,
        ));
        checks.push(CheckLine::boolean(
            format!("n={n}: equilibrium spectral bounds hold"),
            bounds.iter().all(|b| b.satisfied),
        ));
    }
    ctx.write_artifact(
        "c04_summary.json",
        &serde_json::to_string_pretty(&checks).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 5. Moment-matrix positivity
// ---------------------------------------------------------------------------

/// Positivity of the Gaussian block moment matrix, in the sharp form
/// that actually holds: for n ≥ 2 the vec parametrization duplicates
/// every off-diagonal product, so exactly n(n−1)/2 antisymmetric
/// directions are annihilated (xᵀUx ≡ 0 identically there); the matrix is
/// strictly positive definite on the complementary symmetric⊕linear
/// subspace, and fully positive definite for n = 1.
pub fn c05_moment_matrix_positivity(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let rng = CounterRng::new(ctx.seed ^ 0x3535);
    let mut checks = Vec::new();
    let std_case = gaussian_fourth_moment_matrix(&[0.0], &Mat::identity(1))?;
    checks.push(CheckLine::boolean(
        "n=1 standard case equals [[3,0],[0,1]] exactly",
        std_case.entries == vec![3.0, 0.0, 0.0, 1.0],
    ));
    let mut min_eig_n1 = f64::INFINITY;
    let mut min_restricted = f64::INFINITY;
    let mut zero_counts_match = true;
    for case in 0..50usize {
        let n = 1 + case % 3;
        let base = (case * 1000) as u64;
        let sigma = random_spd(&rng, base, n, 0.3, 3.0);
        let mu: Vec<f64> = (0..n)
            .map(|i| 1.5 * rng.gaussian(base + 555 + i as u64))
            .collect();
        let m = gaussian_fourth_moment_matrix(&mu, &sigma)?;
        let e = eig_sym(&m)?;
        let scale = e.eigenvalues[0].max(1.0);
        if n == 1 {
            min_eig_n1 = min_eig_n1.min(*e.eigenvalues.last().unwrap());
        }
        let zeros = e
            .eigenvalues
            .iter()
            .filter(|&&l| l.abs() <= 1e-11 * scale)
            .count();
        zero_counts_match &= zeros == n * (n - 1) / 2;
        let s = crate::numkit::symmetric_restriction_basis(n);
        let restricted = s.transpose().matmul(&m).matmul(&s);
        let er = eig_sym(&restricted)?;
        min_restricted = min_restricted.min(*er.eigenvalues.last().unwrap() / scale);
    }
    checks.push(CheckLine::ge(
        "n=1 draws: min eigenvalue (strict PD)",
        min_eig_n1,
        1e-12,
    ));
    checks.push(CheckLine::boolean(
        "zero eigenvalues are exactly the n(n-1)/2 structural duplicates",
        zero_counts_match,
    ));
    checks.push(CheckLine::ge(
        "min eigenvalue of symmetric restriction (relative)",
        min_restricted,
        1e-9,
    ));
    ctx.write_artifact(
        "c05_summary.json",
        &serde_json::to_string_pretty(&checks).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 6. Skew-block bound sweep
// ---------------------------------------------------------------------------

pub fn c06_skew_block_sweep(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let rng = CounterRng::new(ctx.seed ^ 0xab0d);
    let mut all_hurwitz = true;
    let mut all_bounds = true;
    for case in 0..200usize {
        let n = 2 + case % 4; // ≤ 5
        let m = 1 + case % n;
        let base = (case * 4096) as u64;
        let q = random_spd(&rng, base, n, 0.5, 4.0);
        let p = Mat::from_fn(n, m, |i, j| rng.gaussian(base + 2048 + (i * m + j) as u64));
        let (report, bounds) = check_skew_block_bounds(&q, &p)?;
        all_hurwitz &= report.hurwitz;
        all_bounds &= bounds.iter().all(|b| b.satisfied);
    }
    let mut checks = vec![
        CheckLine::boolean("200 random instances all hurwitz", all_hurwitz),
        CheckLine::boolean("both bounds hold on every instance", all_bounds),
    ];
    // closed-form equality instances
    let (r1, _) = check_skew_block_bounds(&Mat::identity(1), &Mat::identity(1))?;
    checks.push(CheckLine::approx(
        "Q=P=[[1]]: Re(lambda)",
        r1.spectral_abscissa,
        -0.5,
        1e-9,
    ));
    let (r2, _) = check_skew_block_bounds(&Mat::diag(&[2.0]), &Mat::identity(1))?;
    checks.push(CheckLine::approx(
        "Q=[[2]],P=[[1]]: Re(lambda)",
        r2.spectral_abscissa,
        -1.0,
        1e-9,
    ));
    ctx.write_artifact(
        "c06_summary.json",
        &serde_json::to_string_pretty(&checks).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 7. Equilibrium-subspace projection
// ---------------------------------------------------------------------------

pub fn c07_subspace_projection(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let base = uniform_2d(logistic_loss())?;
    let kappa = 0.4;
    let wrapped = redundant_wrap_with_lift(base, &[0], &[], kappa)?;
    let bundle = wrapped.analytic_blocks().unwrap();
    let mut checks = Vec::new();

    // full 3×3 Jacobian: exactly one zero eigenvalue
    let j_full = assemble_equilibrium_jacobian(&bundle);
    let report = hurwitz_check(&j_full, Some(1e-10))?;
    checks.push(CheckLine::boolean(
        "full jacobian has exactly one zero eigenvalue",
        report.zero_count == 1,
    ));

    // projected 2×2: Hurwitz with abscissa −0.05 ± 1e-6
    let split = project_equilibrium_subspace(&bundle, None)?;
    let j_proj = assemble_equilibrium_jacobian(&split.projected);
    let proj_report = hurwitz_check(&j_proj, None)?;
    checks.push(CheckLine::boolean(
        "projected jacobian hurwitz",
        proj_report.hurwitz,
    ));
    checks.push(CheckLine::approx(
        "projected spectral abscissa",
        proj_report.spectral_abscissa,
        -0.05,
        1e-6,
    ));

    // trajectory convergence onto the subspace with linear drift scaling
    let x_full = ParamPoint::new(vec![0.05, -0.03], vec![0.9]);
    let x_half = ParamPoint::new(vec![0.025, -0.015], vec![0.95]);
    let r_full = verify_multiple_equilibria_convergence(&wrapped, &x_full, 400.0)?;
    let r_half = verify_multiple_equilibria_convergence(&wrapped, &x_half, 400.0)?;
    checks.push(CheckLine::le(
        "final distance to equilibrium subspace",
        r_full.subspace_distance.max(r_half.subspace_distance),
        1e-6,
    ));
    let ratio = r_full.gamma_displacement / r_half.gamma_displacement;
    checks.push(CheckLine::approx(
        "gamma drift ratio under 2x initial shrink",
        ratio,
        2.0,
        0.4,
    ));

    // distance-to-subspace decays at the projected rate (±15%)
    let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 300.0);
    let run = integrate_system(&*wrapped, &x_full, &cfg, &[], &[], &[])?;
    let mut ts = Vec::new();
    let mut logd = Vec::new();
    for (i, &t) in run.trajectory.times.iter().enumerate() {
        if !(40.0..=280.0).contains(&t) {
            continue;
        }
        let d = wrapped.distance_to_subspace(&run.trajectory.states[i]);
        if d > 0.0 {
            ts.push(t);
            logd.push(d.ln());
        }
    }
    let nn = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / nn;
    let lm = logd.iter().sum::<f64>() / nn;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, l) in ts.iter().zip(&logd) {
        num += (t - tm) * (l - lm);
        den += (t - tm) * (t - tm);
    }
    let rate = -(num / den);
    checks.push(CheckLine::approx(
        "distance-to-subspace decay rate",
        rate,
        0.05,
        0.0075,
    ));

    ctx.write_artifact(
        "c07_summary.json",
        &serde_json::to_string_pretty(&checks).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 8. Lyapunov certificate
// ---------------------------------------------------------------------------

pub fn c08_lyapunov_certificate(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let base = uniform_2d(logistic_loss())?;
    let bundle = base.analytic_blocks().unwrap();
    let split = project_equilibrium_subspace(&bundle, None)?;
    let eta = 0.5;
    let cert = build_regularized_certificate(&split, eta)?;
    let mut checks = Vec::new();
    checks.push(mat_close("P equals diag(0.9, 1)", &cert.p, &Mat::diag(&[0.9, 1.0]), 1e-12));
    checks.push(CheckLine::ge(
        "Q min eigenvalue (positive definite)",
        cert.q_min_eigenvalue,
        1e-12,
    ));
    checks.push(CheckLine::le("certificate residual", cert.residual, 1e-10));

    // nonlinear xᵀPx monitor non-increasing from radius 0.1 (slack 1e-9)
    let reg = regularize(base.clone(), eta)?;
    let eq = base.equilibrium();
    let p_full = cert.p.clone(); // projection is the identity here
    let mut worst_increase = f64::NEG_INFINITY;
    for k in 0..8 {
        let ang = std::f64::consts::TAU * k as f64 / 8.0;
        let x0 = ParamPoint::new(vec![0.1 * ang.cos()], vec![1.0 + 0.1 * ang.sin()]);
        let monitors = vec![MonitorSpec::QuadForm {
            name: "lyapunov".into(),
            p: p_full.clone(),
            center: eq.clone(),
        }];
        let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 80.0);
        let run = integrate_system(reg.as_ref(), &x0, &cfg, &[], &monitors, &[])?;
        let vals = run.trajectory.monitor("lyapunov").unwrap();
        for w in vals.windows(2) {
            worst_increase = worst_increase.max(w[1] - w[0]);
        }
    }
    checks.push(CheckLine::le(
        "nonlinear xPx max increase along 8 rays from radius 0.1",
        worst_increase,
        1e-9,
    ));

    // η above the threshold 5 is rejected with a precondition error
    let rejected = matches!(
        build_regularized_certificate(&split, 5.1),
        Err(Error::Precondition(_))
    );
    checks.push(CheckLine::boolean("eta=5.1 rejected (threshold 5)", rejected));

    ctx.write_artifact(
        "c08_certificate.json",
        &serde_json::to_string_pretty(&cert).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 9. Non-Hurwitz counterexamples
// ---------------------------------------------------------------------------

pub fn c09_non_hurwitz_counterexamples(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let mut checks = Vec::new();

    // dirac: spectrum ±f′(0)i and non-convergent orbit
    let dirac = dirac_linear(logistic_loss());
    let j = dirac.jacobian_at(&dirac.equilibrium());
    let report = hurwitz_check(&j, None)?;
    checks.push(CheckLine::boolean("dirac jacobian not hurwitz", !report.hurwitz));
    let worst_re = report
        .spectrum
        .iter()
        .map(|&(re, _)| re.abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckLine::le("dirac |Re(lambda)|", worst_re, 1e-10));
    let im_match = report
        .spectrum
        .iter()
        .map(|&(_, im)| (im.abs() - 0.5).abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckLine::le("dirac |Im(lambda)| − 1/2", im_match, 1e-10));
    let x0 = ParamPoint::new(vec![0.1], vec![0.1]);
    let cfg = IntegratorCfg::adaptive(1e-10, 1e-12, 200.0);
    let run = integrate_system(dirac.as_ref(), &x0, &cfg, &[], &[], &[])?;
    let min_d = run
        .trajectory
        .states
        .iter()
        .map(|s| s.norm())
        .fold(f64::INFINITY, f64::min);
    checks.push(CheckLine::ge("dirac orbit min distance to origin", min_d, 0.05));

    // WGAN uniform η = 0: spectrum ±(2/3)i
    let wgan = uniform_2d(wgan_loss())?;
    let jw = assemble_equilibrium_jacobian(&wgan.analytic_blocks().unwrap());
    let rw = hurwitz_check(&jw, None)?;
    checks.push(CheckLine::boolean("wgan uniform eta=0 not hurwitz", !rw.hurwitz));
    let worst_re = rw
        .spectrum
        .iter()
        .map(|&(re, _)| re.abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckLine::le("wgan |Re(lambda)|", worst_re, 1e-10));
    let im_match = rw
        .spectrum
        .iter()
        .map(|&(_, im)| (im.abs() - 2.0 / 3.0).abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckLine::le("wgan |Im(lambda)| − 2/3", im_match, 1e-10));

    ctx.write_artifact(
        "c09_summary.json",
        &serde_json::to_string_pretty(&checks).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 10. Transform equilibrium preservation and unrolled relation
// ---------------------------------------------------------------------------

pub fn c10_transform_preservation(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let systems: Vec<Arc<dyn GanSystem>> = vec![
        uniform_2d(logistic_loss())?,
        uniform_2d(wgan_loss())?,
        scalar_wgan_lq(1.0)?,
        dirac_linear(logistic_loss()),
        gan_lq_nd(
            &Mat::identity(1),
            &[0.0],
            logistic_loss(),
            LqMode::Quadrature { nodes: 64 },
        )?,
    ];
    let mut worst = 0.0f64;
    for sys in &systems {
        for eta in [0.25, 0.5] {
            let reg = regularize(sys.clone(), eta)?;
            let unr = unroll1(sys.clone(), eta)?;
            for eq in sys.equilibria() {
                worst = worst.max(reg.field(&eq)?.norm());
                worst = worst.max(unr.field(&eq)?.norm());
            }
        }
    }
    let mut checks = vec![CheckLine::le(
        "worst field norm at registered equilibria (both transforms)",
        worst,
        1e-8,
    )];

    // Richardson slope ≥ 1.9 on logistic uniform probes
    let base = uniform_2d(logistic_loss())?;
    let mut worst_slope = f64::INFINITY;
    for p in [
        ParamPoint::new(vec![0.2], vec![0.8]),
        ParamPoint::new(vec![-0.15], vec![1.25]),
        ParamPoint::new(vec![0.1], vec![1.05]),
    ] {
        let diff = |eta: f64| -> Result<f64> {
            let reg = regularize(base.clone(), eta)?;
            let unr = unroll1(base.clone(), eta)?;
            let fr = reg.field(&p)?;
            let fu = unr.field(&p)?;
            Ok(crate::numkit::mat::norm(&crate::numkit::mat::sub_vec(
                &fr.theta_g,
                &fu.theta_g,
            )))
        };
        let slope = (diff(0.08)? / diff(0.04)?).log2();
        worst_slope = worst_slope.min(slope);
    }
    checks.push(CheckLine::ge(
        "richardson slope of reg-vs-unrolled difference",
        worst_slope,
        1.9,
    ));

    ctx.write_artifact(
        "c10_summary.json",
        &serde_json::to_string_pretty(&checks).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 11. Concavity probe
// ---------------------------------------------------------------------------

pub fn c11_concavity_probe(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let gh64 = ProbeMode::GaussHermite { nodes: 64 };
    let gh96 = ProbeMode::GaussHermite { nodes: 96 };
    let mut checks = Vec::new();
    let gen = [0.1, 0.7, 0.2];

    let logistic = logistic_loss();
    for w1 in [0.1, 0.01] {
        let w = [0.0, w1];
        for j in [0usize, 2] {
            let v = concavity_probe(&logistic, &w, &gen, j, gh64)?;
            checks.push(CheckLine::le(
                format!("logistic w1={w1} j={j}: d2V/da_j2"),
                v,
                0.0,
            ));
            let v2 = concavity_probe(&logistic, &w, &gen, j, gh96)?;
            checks.push(CheckLine::le(
                format!("logistic w1={w1} j={j}: quadrature error"),
                (v - v2).abs(),
                1e-4,
            ));
        }
    }

    let wgan = wgan_loss();
    let w = [0.0, 0.0, 0.5];
    for j in 0..=2usize {
        let v = concavity_probe(&wgan, &w, &gen, j, gh64)?;
        checks.push(CheckLine::le(format!("wgan w2=0.5 j={j}: d2V/da_j2"), v, 0.0));
    }
    // all-zero discriminator: exactly zero
    let zero = concavity_probe(&logistic, &[0.0, 0.0], &gen, 1, gh64)?;
    checks.push(CheckLine::approx("zero discriminator gives 0", zero, 0.0, 0.0));

    ctx.write_artifact(
        "c11_summary.json",
        &serde_json::to_string_pretty(&checks).unwrap(),
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 12. Determinism
// ---------------------------------------------------------------------------

pub fn c12_determinism(ctx: &CriterionCtx) -> Result<Vec<CheckLine>> {
    let root = match &ctx.outdir {
        Some(dir) => dir.clone(),
        None => std::env::temp_dir().join(format!("gandyn_acceptance_{}", std::process::id())),
    };
    let dir_a = root.join("replica_a");
    let dir_b = root.join("replica_b");
    for d in [&dir_a, &dir_b] {
        if d.exists() {
            std::fs::remove_dir_all(d)?;
        }
        std::fs::create_dir_all(d)?;
    }
    let bytes_a = super::artifact_fingerprint(ctx.seed, &dir_a)?;
    let bytes_b = super::artifact_fingerprint(ctx.seed, &dir_b)?;
    let identical = bytes_a == bytes_b;
    if ctx.outdir.is_none() {
        let _ = std::fs::remove_dir_all(&root);
    }
    Ok(vec![
        CheckLine::boolean("two full runs produce byte-identical artifacts", identical),
        CheckLine::ge(
            "artifact bytes compared",
            bytes_a.len() as f64,
            1000.0,
        ),
    ])
}
