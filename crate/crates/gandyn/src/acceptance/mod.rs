//! The end-to-end verification suite: every criterion runs at its
//! pinned tolerance and reports one pass/fail line per check. The
//! `acceptance` CLI subcommand and the `acceptance` integration test
//! both drive [`run_suite`].

mod criteria;

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// One comparison line of a criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub label: String,
    /// "≈" (|measured − expected| ≤ tolerance), "<=", ">=".
    pub op: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckLine {
    pub fn approx(label: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        CheckLine {
            label: label.into(),
            op: "≈".into(),
            measured,
            expected,
            tolerance: tol,
            pass: (measured - expected).abs() <= tol && measured.is_finite(),
        }
    }

    pub fn le(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        CheckLine {
            label: label.into(),
            op: "<=".into(),
            measured,
            expected: bound,
            tolerance: 0.0,
            pass: measured <= bound,
        }
    }

    pub fn ge(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        CheckLine {
            label: label.into(),
            op: ">=".into(),
            measured,
            expected: bound,
            tolerance: 0.0,
            pass: measured >= bound,
        }
    }

    pub fn boolean(label: impl Into<String>, ok: bool) -> Self {
        CheckLine {
            label: label.into(),
            op: "==".into(),
            measured: if ok { 1.0 } else { 0.0 },
            expected: 1.0,
            tolerance: 0.0,
            pass: ok,
        }
    }
}

/// Serializable portion of a criterion result (no wall-clock content,
/// so artifact files are byte-stable across runs).
#[derive(Clone, Debug, Serialize)]
pub struct CriterionArtifact {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub checks: Vec<CheckLine>,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub checks: Vec<CheckLine>,
    pub runtime_s: f64,
}

impl CriterionReport {
    fn artifact(&self) -> CriterionArtifact {
        CriterionArtifact {
            id: self.id,
            name: self.name.clone(),
            pass: self.pass,
            checks: self.checks.clone(),
        }
    }

    pub fn summary_line(&self) -> String {
        let n_pass = self.checks.iter().filter(|c| c.pass).count();
        format!(
            "criterion {:>2} [{}] {} ({:.2}s, {}/{} checks)",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.runtime_s,
            n_pass,
            self.checks.len()
        )
    }

    pub fn detail_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            match c.op.as_str() {
                "≈" => {
                    let _ = writeln!(
                        out,
                        "  [{mark}] {}: measured {:e} vs expected {:e} (tol {:e})",
                        c.label, c.measured, c.expected, c.tolerance
                    );
                }
                op => {
                    let _ = writeln!(
                        out,
                        "  [{mark}] {}: measured {:e} {op} {:e}",
                        c.label, c.measured, c.expected
                    );
                }
            }
        }
        out
    }
}

pub struct CriterionCtx {
    pub seed: u64,
    pub outdir: Option<PathBuf>,
}

impl CriterionCtx {
    /// Write a named artifact file when an output directory is set.
    pub fn write_artifact(&self, name: &str, contents: &str) -> Result<()> {
        if let Some(dir) = &self.outdir {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), contents)?;
        }
        Ok(())
    }
}

pub const CRITERION_NAMES: [&str; 12] = [
    "wgan limit cycle",
    "gan local stability",
    "regularizer stabilizes wgan",
    "lq gaussian gan",
    "moment matrix positivity",
    "skew block sweep",
    "equilibrium subspace projection",
    "lyapunov certificate",
    "non-hurwitz counterexamples",
    "transform equilibrium preservation",
    "concavity probe",
    "determinism",
];

pub fn criterion_id_by_name(name: &str) -> Option<usize> {
    CRITERION_NAMES
        .iter()
        .position(|n| n.eq_ignore_ascii_case(name))
        .map(|i| i + 1)
}

/// Run one criterion by id (1-based).
pub fn run_criterion(id: usize, seed: u64, outdir: Option<&Path>) -> Result<CriterionReport> {
    if !(1..=12).contains(&id) {
        return Err(Error::Config(format!("unknown criterion id {id}")));
    }
    let ctx = CriterionCtx {
        seed,
        outdir: outdir.map(|p| p.to_path_buf()),
    };
    let start = Instant::now();
    let (name, checks) = match id {
        1 => ("wgan limit cycle", criteria::c01_wgan_limit_cycle(&ctx)?),
        2 => ("gan local stability", criteria::c02_gan_local_stability(&ctx)?),
        3 => (
            "regularizer stabilizes wgan",
            criteria::c03_regularizer_stabilizes_wgan(&ctx)?,
        ),
        4 => ("lq gaussian gan", criteria::c04_lq_gaussian_gan(&ctx)?),
        5 => (
            "moment matrix positivity",
            criteria::c05_moment_matrix_positivity(&ctx)?,
        ),
        6 => ("skew block sweep", criteria::c06_skew_block_sweep(&ctx)?),
        7 => (
            "equilibrium subspace projection",
            criteria::c07_subspace_projection(&ctx)?,
        ),
        8 => (
            "lyapunov certificate",
            criteria::c08_lyapunov_certificate(&ctx)?,
        ),
        9 => (
            "non-hurwitz counterexamples",
            criteria::c09_non_hurwitz_counterexamples(&ctx)?,
        ),
        10 => (
            "transform equilibrium preservation",
            criteria::c10_transform_preservation(&ctx)?,
        ),
        11 => ("concavity probe", criteria::c11_concavity_probe(&ctx)?),
        12 => ("determinism", criteria::c12_determinism(&ctx)?),
        _ => unreachable!(),
    };
    let pass = checks.iter().all(|c| c.pass);
    let report = CriterionReport {
        id,
        name: name.into(),
        pass,
        checks,
        runtime_s: start.elapsed().as_secs_f64(),
    };
    ctx.write_artifact(
        &format!("criterion_{id:02}.json"),
        &serde_json::to_string_pretty(&report.artifact()).unwrap(),
    )?;
    Ok(report)
}

#[derive(Debug)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }
}

/// Run the full suite (or a selection) with one seed; artifacts land in
/// `outdir` when given.
pub fn run_suite(
    seed: u64,
    outdir: Option<&Path>,
    only: Option<&[usize]>,
) -> Result<SuiteReport> {
    let ids: Vec<usize> = match only {
        Some(ids) => ids.to_vec(),
        None => (1..=12).collect(),
    };
    let mut criteria = Vec::new();
    for id in ids {
        criteria.push(run_criterion(id, seed, outdir)?);
    }
    Ok(SuiteReport { criteria })
}

/// Run criteria 1..=11 into a directory and return the concatenated
/// bytes of every artifact file (sorted by name). Criterion 12 compares
/// two such runs.
pub fn artifact_fingerprint(seed: u64, dir: &Path) -> Result<Vec<u8>> {
    for id in 1..=11 {
        run_criterion(id, seed, Some(dir))?;
    }
    let mut names: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    names.sort();
    let mut bytes = Vec::new();
    for p in names {
        bytes.extend_from_slice(p.file_name().unwrap().to_string_lossy().as_bytes());
        bytes.push(0);
        bytes.extend(std::fs::read(&p)?);
    }
    Ok(bytes)
}
