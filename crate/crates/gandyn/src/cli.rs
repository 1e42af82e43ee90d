//! Command implementations behind the `gandyn` binary: simulate,
//! streamline, stability, acceptance.
//!
//! Exit codes: 0 success, 1 acceptance failure, 2 config/usage error,
//! 3 numeric failure.

use crate::config::{config_hash, parse_config, ExperimentConfig, StreamlineConfig};
use crate::dynamics::{
    discrete_steps, fmt_f64, integrate_system, DiscreteCfg, EventSpec, IntegratorCfg, Method,
    MonitorSpec,
};
use crate::error::{Error, Result};
use crate::stability::{
    assemble_equilibrium_jacobian, build_regularized_certificate, check_equilibrium_bounds,
    check_regularized_wgan_bounds, hurwitz_check, numeric_jacobian, project_equilibrium_subspace,
    spectrum_pairs, to_bundle_orientation, ProjectionReport, StabilityReport,
};
use crate::systems::{GanSystem, ParamPoint};
use crate::ARTIFACT_VERSION;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub struct CommonArgs {
    pub config_path: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

struct LoadedRun {
    cfg: ExperimentConfig,
    system: Arc<dyn GanSystem>,
    seed: u64,
    hash: String,
    outdir: PathBuf,
    prefix: String,
}

/// OUTPUT_DIR environment fallback for the output directory.
pub const OUTPUT_DIR_ENV: &str = "GANDYN_OUTPUT_DIR";

fn load(args: &CommonArgs) -> Result<LoadedRun> {
    let text = std::fs::read_to_string(&args.config_path)
        .map_err(|e| Error::Config(format!("cannot read config: {e}")))?;
    let cfg = parse_config(&text)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let system = cfg.transform.apply(cfg.system.build(seed)?)?;
    let hash = config_hash(&text);
    let outdir = args
        .out_dir
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var(OUTPUT_DIR_ENV).ok().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let prefix = cfg
        .output
        .prefix
        .clone()
        .unwrap_or_else(|| system.name().replace('+', "_"));
    Ok(LoadedRun {
        cfg,
        system,
        seed,
        hash,
        outdir,
        prefix,
    })
}

fn meta_lines(run: &LoadedRun) -> Vec<String> {
    vec![
        format!("gandyn {ARTIFACT_VERSION}"),
        format!("config_hash={}", run.hash),
        format!("seed={}", run.seed),
        format!("system={}", run.system.name()),
    ]
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

/// `simulate`: integrate or discrete-step the configured system, write
/// trajectory CSV and events JSON.
pub fn cmd_simulate(args: &CommonArgs) -> Result<()> {
    let run = load(args)?;
    let rc = run
        .cfg
        .run
        .as_ref()
        .ok_or_else(|| Error::Config("simulate requires a [run] section".into()))?;
    let x0 = ParamPoint::new(rc.x0_d.clone(), rc.x0_g.clone());
    let monitors: Vec<MonitorSpec> = rc
        .monitors
        .iter()
        .map(|m| m.to_spec())
        .collect::<Result<_>>()?;
    let events: Vec<EventSpec> = rc.events.iter().map(|e| e.to_spec()).collect::<Result<_>>()?;
    match rc.kind.as_str() {
        "integrate" => {
            let t_max = rc
                .t_max
                .ok_or_else(|| Error::Config("run.t_max is required".into()))?;
            if !(t_max > 0.0) {
                return Err(Error::Config("run.t_max must be > 0".into()));
            }
            let require_pos = |v: Option<f64>, what: &str| -> Result<f64> {
                match v {
                    Some(x) if x > 0.0 => Ok(x),
                    Some(_) => Err(Error::Config(format!("run.{what} must be > 0"))),
                    None => Err(Error::Config(format!("run.{what} required"))),
                }
            };
            let cfg = match rc.method.as_deref() {
                None | Some("dopri") => IntegratorCfg {
                    method: Method::DormandPrince {
                        rtol: require_pos(rc.rtol, "rtol")?,
                        atol: require_pos(rc.atol, "atol")?,
                    },
                    t_max,
                    max_steps: 1_000_000,
                },
                Some("rk4") => IntegratorCfg {
                    method: Method::Rk4Fixed {
                        step: require_pos(rc.step, "step")?,
                    },
                    t_max,
                    max_steps: 10_000_000,
                },
                Some(other) => return Err(Error::Config(format!("unknown method '{other}'"))),
            };
            let result = integrate_system(
                run.system.as_ref(),
                &x0,
                &cfg,
                &events,
                &monitors,
                &rc.sample_times,
            )?;
            if result.is_failure() {
                return Err(Error::numeric(format!(
                    "integration failed: {:?}",
                    result.outcome
                )));
            }
            let names = run.system.param_names();
            write_file(
                &run.outdir,
                &format!("{}_trajectory.csv", run.prefix),
                &result.trajectory.to_csv(&names, &meta_lines(&run)),
            )?;
            write_file(
                &run.outdir,
                &format!("{}_trajectory.json", run.prefix),
                &serde_json::to_string_pretty(&result.trajectory).unwrap(),
            )?;
            write_file(
                &run.outdir,
                &format!("{}_events.json", run.prefix),
                &serde_json::to_string_pretty(&result.events).unwrap(),
            )?;
            println!(
                "simulate: {} rows, {} events -> {}",
                result.trajectory.len(),
                result.events.len(),
                run.outdir.display()
            );
        }
        "discrete" => {
            let dcfg = DiscreteCfg {
                alpha: rc
                    .alpha
                    .ok_or_else(|| Error::Config("run.alpha is required".into()))?,
                n_steps: rc
                    .n_steps
                    .ok_or_else(|| Error::Config("run.n_steps is required".into()))?,
                noise: rc.noise_std.map(|s| (run.seed, s)),
                divergence_norm: 1e6,
            };
            let traj = discrete_steps(run.system.as_ref(), &x0, &dcfg, &monitors)?;
            let names = run.system.param_names();
            write_file(
                &run.outdir,
                &format!("{}_trajectory.csv", run.prefix),
                &traj.to_csv(&names, &meta_lines(&run)),
            )?;
            println!(
                "simulate(discrete): {} rows -> {}",
                traj.len(),
                run.outdir.display()
            );
        }
        other => return Err(Error::Config(format!("unknown run kind '{other}'"))),
    }
    Ok(())
}

/// Evaluate the (possibly transformed) field over a 2-D grid and write
/// a CSV suitable for external streamline plotting.
pub fn streamline_grid(
    sys: &dyn GanSystem,
    sc: &StreamlineConfig,
    meta: &[String],
) -> Result<(String, usize)> {
    if sc.fixed_d.len() != sys.n_d() || sc.fixed_g.len() != sys.n_g() {
        return Err(Error::Config(
            "streamline: fixed_d/fixed_g must match system dims".into(),
        ));
    }
    let coord = |block: &str, idx: usize| -> Result<usize> {
        match block {
            "d" => {
                if idx >= sys.n_d() {
                    return Err(Error::Config("streamline index out of range".into()));
                }
                Ok(idx)
            }
            "g" => {
                if idx >= sys.n_g() {
                    return Err(Error::Config("streamline index out of range".into()));
                }
                Ok(sys.n_d() + idx)
            }
            other => Err(Error::Config(format!("streamline block must be d|g, got '{other}'"))),
        }
    };
    let ix = coord(&sc.x_block, sc.x_index)?;
    let iy = coord(&sc.y_block, sc.y_index)?;
    if ix == iy {
        return Err(Error::Config("streamline: the two free coordinates coincide".into()));
    }
    let mut base = sc.fixed_d.clone();
    base.extend_from_slice(&sc.fixed_g);
    let mut out = String::new();
    for m in meta {
        let _ = writeln!(out, "# {m}");
    }
    let _ = writeln!(out, "coord1,coord2,d_coord1,d_coord2");
    let mut nan_cells = 0usize;
    for i in 0..sc.x_n {
        let x = sc.x_min + (sc.x_max - sc.x_min) * i as f64 / (sc.x_n - 1).max(1) as f64;
        for j in 0..sc.y_n {
            let y = sc.y_min + (sc.y_max - sc.y_min) * j as f64 / (sc.y_n - 1).max(1) as f64;
            let mut v = base.clone();
            v[ix] = x;
            v[iy] = y;
            let p = ParamPoint::from_concat(sys.n_d(), sys.n_g(), &v);
            let (dx, dy) = match sys.field(&p) {
                Ok(f) => {
                    let fv = f.concat();
                    (fv[ix], fv[iy])
                }
                Err(_) => {
                    nan_cells += 1;
                    (f64::NAN, f64::NAN)
                }
            };
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(x),
                fmt_f64(y),
                fmt_f64(dx),
                fmt_f64(dy)
            );
        }
    }
    Ok((out, nan_cells))
}

pub fn cmd_streamline(args: &CommonArgs) -> Result<()> {
    let run = load(args)?;
    let sc = run
        .cfg
        .streamline
        .as_ref()
        .ok_or_else(|| Error::Config("streamline requires a [streamline] section".into()))?;
    let (csv, nan_cells) = streamline_grid(run.system.as_ref(), sc, &meta_lines(&run))?;
    write_file(&run.outdir, &format!("{}_grid.csv", run.prefix), &csv)?;
    if nan_cells > 0 {
        eprintln!("warning: {nan_cells} degenerate grid cells flagged NaN");
    }
    println!(
        "streamline: {}x{} grid -> {}",
        sc.x_n,
        sc.y_n,
        run.outdir.display()
    );
    Ok(())
}

/// Full stability report at the equilibrium. `reg_eta` analyzes the
/// gradient-regularized update's Jacobian instead of the plain one.
pub fn stability_report_for(
    sys: &dyn GanSystem,
    reg_eta: Option<f64>,
    want_certificate: bool,
) -> Result<(StabilityReport, Option<crate::stability::LyapunovCertificate>)> {
    let eq = sys.equilibrium();
    let assemble = |b: &crate::systems::JacobianBundle| -> Result<crate::numkit::Mat> {
        match reg_eta {
            Some(eta) => crate::stability::assemble_regularized_jacobian(b, eta),
            None => Ok(assemble_equilibrium_jacobian(b)),
        }
    };
    let j = match sys.analytic_blocks() {
        Some(b) => assemble(&b)?,
        None => {
            let j_fd = numeric_jacobian(|p| sys.field(p), &eq, None)?;
            to_bundle_orientation(&j_fd, sys.n_d())
        }
    };
    let mut report = hurwitz_check(&j, None)?;
    let mut certificate = None;
    if let Some(bundle) = sys.analytic_blocks() {
        let split = project_equilibrium_subspace(&bundle, None)?;
        let proj_j = assemble(&split.projected)?;
        let proj_report = hurwitz_check(&proj_j, None)?;
        let bounds = match (bundle.f2 == 0.0, reg_eta) {
            (true, Some(eta)) if eta > 0.0 => check_regularized_wgan_bounds(&split.projected, eta)?.1,
            (false, None) => check_equilibrium_bounds(&split.projected)?.1,
            _ => Vec::new(),
        };
        report.bounds = bounds;
        report.projection = Some(ProjectionReport {
            t_d: split.t_d.clone(),
            t_g: split.t_g.clone(),
            projected_spectrum: {
                let s = crate::numkit::eig_general(&proj_j)?;
                spectrum_pairs(&s)
            },
            projected_hurwitz: proj_report.hurwitz || split.trivially_stable,
            trivially_stable: split.trivially_stable,
            wgan_path: split.wgan_path,
        });
        if want_certificate && bundle.f2 != 0.0 {
            certificate = Some(build_regularized_certificate(&split, reg_eta.unwrap_or(0.0))?);
        }
    }
    Ok((report, certificate))
}

pub fn cmd_stability(args: &CommonArgs) -> Result<()> {
    let run = load(args)?;
    let want_certificate = run
        .cfg
        .stability
        .as_ref()
        .map(|s| s.certificate)
        .unwrap_or(false);
    // the regularize transform changes the equilibrium Jacobian; analyze
    // the base system with the regularized assembly in that case
    let reg_eta = match run.cfg.transform.kind.as_deref() {
        Some("regularize") => run.cfg.transform.eta,
        _ => run
            .cfg
            .stability
            .as_ref()
            .and_then(|s| s.certificate_eta)
            .filter(|_| want_certificate),
    };
    let base = run.cfg.system.build(run.seed)?;
    let (report, certificate) = stability_report_for(base.as_ref(), reg_eta, want_certificate)?;
    #[derive(serde::Serialize)]
    struct Out<'a> {
        version: &'a str,
        config_hash: &'a str,
        system: &'a str,
        report: &'a StabilityReport,
        certificate: &'a Option<crate::stability::LyapunovCertificate>,
    }
    let doc = Out {
        version: ARTIFACT_VERSION,
        config_hash: &run.hash,
        system: run.system.name(),
        report: &report,
        certificate: &certificate,
    };
    write_file(
        &run.outdir,
        &format!("{}_stability.json", run.prefix),
        &serde_json::to_string_pretty(&doc).unwrap(),
    )?;
    println!(
        "stability: hurwitz={} abscissa={:.6} -> {}",
        report.hurwitz,
        report.spectral_abscissa,
        run.outdir.display()
    );
    Ok(())
}

/// `acceptance`: run the verification suite; exit 0 iff everything passes.
pub fn cmd_acceptance(
    suite: &str,
    criterion: Option<&str>,
    seed: u64,
    out_dir: Option<&Path>,
) -> Result<bool> {
    if suite != "full" {
        return Err(Error::Config(format!(
            "unknown suite '{suite}' (available: full)"
        )));
    }
    let only: Option<Vec<usize>> = match criterion {
        Some(c) => {
            let id = c
                .parse::<usize>()
                .ok()
                .or_else(|| crate::acceptance::criterion_id_by_name(c))
                .ok_or_else(|| Error::Config(format!("unknown criterion '{c}'")))?;
            Some(vec![id])
        }
        None => None,
    };
    let report = crate::acceptance::run_suite(seed, out_dir, only.as_deref())?;
    for c in &report.criteria {
        println!("{}", c.summary_line());
        print!("{}", c.detail_lines());
    }
    println!(
        "acceptance: {}",
        if report.all_pass() { "ALL PASS" } else { "FAILURES" }
    );
    Ok(report.all_pass())
}
