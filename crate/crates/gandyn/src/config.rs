//! Declarative experiment configuration: one TOML document describes
//! one run. Unknown keys are rejected and physical parameters (σ, μ, η)
//! carry no implicit defaults.

use crate::dynamics::{EventSpec, MonitorSpec};
use crate::error::{Error, Result};
use crate::losses::loss_by_name;
use crate::numkit::Mat;
use crate::systems::{
    dirac_linear, feature_linear_gaussian, gan_lq_nd, redundant_wrap_with_lift, scalar_wgan_lq,
    uniform_2d, wgan_lq_nd, GanSystem, LqMode, ParamPoint,
};
use serde::Deserialize;
use std::sync::Arc;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub system: SystemConfig,
    #[serde(default)]
    pub transform: TransformConfig,
    pub run: Option<RunConfig>,
    pub streamline: Option<StreamlineConfig>,
    pub stability: Option<StabilityConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub name: String,
    pub loss: Option<String>,
    /// scalar_wgan_lq
    pub sigma: Option<f64>,
    /// wgan_lq_nd / gan_lq_nd: covariance rows
    pub sigma_mat: Option<Vec<Vec<f64>>>,
    pub mu: Option<Vec<f64>>,
    /// gan_lq_nd: "quadrature" | "monte-carlo"
    pub mode: Option<String>,
    pub nodes: Option<usize>,
    pub n_samples: Option<usize>,
    /// feature_linear_gaussian
    pub var: Option<f64>,
    /// redundant_wrap
    pub base: Option<Box<SystemConfig>>,
    pub dup_d: Option<Vec<usize>>,
    pub dup_g: Option<Vec<usize>>,
    pub lift_asymmetry: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    /// "none" | "regularize" | "unroll1"
    pub kind: Option<String>,
    pub eta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// "integrate" | "discrete"
    pub kind: String,
    pub x0_d: Vec<f64>,
    pub x0_g: Vec<f64>,
    pub t_max: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    /// "dopri" (default) | "rk4"
    pub method: Option<String>,
    pub step: Option<f64>,
    /// discrete: step size and count
    pub alpha: Option<f64>,
    pub n_steps: Option<usize>,
    pub noise_std: Option<f64>,
    #[serde(default)]
    pub sample_times: Vec<f64>,
    #[serde(default)]
    pub events: Vec<EventConfig>,
    #[serde(default)]
    pub monitors: Vec<MonitorConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventConfig {
    /// "convergence" | "section" | "radius_monotonicity" | "return_to_start"
    pub kind: String,
    pub target_d: Option<Vec<f64>>,
    pub target_g: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub window: Option<usize>,
    pub halt: Option<bool>,
    pub coord: Option<usize>,
    pub level: Option<f64>,
    pub direction: Option<i8>,
    pub coords: Option<Vec<usize>>,
    pub guard_coord: Option<usize>,
    pub guard_positive: Option<bool>,
    pub slack: Option<f64>,
    pub t_min: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    /// "field_norm" | "distance" | "radius_sq" | "quad_form"
    pub kind: String,
    pub name: Option<String>,
    pub center_d: Option<Vec<f64>>,
    pub center_g: Option<Vec<f64>>,
    pub coords: Option<Vec<usize>>,
    pub p: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamlineConfig {
    pub x_block: String,
    pub x_index: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub x_n: usize,
    pub y_block: String,
    pub y_index: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub y_n: usize,
    /// Values of the held-fixed coordinates (full coordinate vectors;
    /// the swept entries are overwritten per grid point).
    pub fixed_d: Vec<f64>,
    pub fixed_g: Vec<f64>,
}

impl StreamlineConfig {
    /// Default 41×41 grid over w₂ ∈ [−1,1] × a ∈ [0.2, 1.8] for a
    /// 2-parameter system.
    pub fn default_uniform_grid() -> Self {
        StreamlineConfig {
            x_block: "d".into(),
            x_index: 0,
            x_min: -1.0,
            x_max: 1.0,
            x_n: 41,
            y_block: "g".into(),
            y_index: 0,
            y_min: 0.2,
            y_max: 1.8,
            y_n: 41,
            fixed_d: vec![0.0],
            fixed_g: vec![1.0],
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityConfig {
    #[serde(default)]
    pub certificate: bool,
    pub certificate_eta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
    pub prefix: Option<String>,
}

fn mat_from_rows(rows: &[Vec<f64>], what: &str) -> Result<Mat> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Config(format!("{what}: ragged or empty matrix")));
    }
    Ok(Mat::from_rows(rows))
}

impl SystemConfig {
    fn loss(&self) -> Result<crate::losses::LossFn> {
        let name = self
            .loss
            .as_deref()
            .ok_or_else(|| Error::Config("system.loss is required".into()))?;
        loss_by_name(name).ok_or_else(|| Error::Config(format!("unknown loss '{name}'")))
    }

    pub fn build(&self, seed: u64) -> Result<Arc<dyn GanSystem>> {
        match self.name.as_str() {
            "scalar_wgan_lq" => {
                let sigma = self
                    .sigma
                    .ok_or_else(|| Error::Config("scalar_wgan_lq: sigma is required".into()))?;
                Ok(scalar_wgan_lq(sigma)?)
            }
            "wgan_lq_nd" => {
                let sigma = mat_from_rows(
                    self.sigma_mat
                        .as_ref()
                        .ok_or_else(|| Error::Config("wgan_lq_nd: sigma_mat is required".into()))?,
                    "sigma_mat",
                )?;
                let mu = self
                    .mu
                    .clone()
                    .ok_or_else(|| Error::Config("wgan_lq_nd: mu is required".into()))?;
                Ok(wgan_lq_nd(&sigma, &mu)?)
            }
            "gan_lq_nd" => {
                let sigma = mat_from_rows(
                    self.sigma_mat
                        .as_ref()
                        .ok_or_else(|| Error::Config("gan_lq_nd: sigma_mat is required".into()))?,
                    "sigma_mat",
                )?;
                let mu = self
                    .mu
                    .clone()
                    .ok_or_else(|| Error::Config("gan_lq_nd: mu is required".into()))?;
                let mode = match self.mode.as_deref() {
                    Some("quadrature") | None => LqMode::Quadrature {
                        nodes: self.nodes.unwrap_or(crate::numkit::DEFAULT_NODES),
                    },
                    Some("monte-carlo") => LqMode::MonteCarlo {
                        seed,
                        n_samples: self.n_samples.unwrap_or(100_000),
                    },
                    Some(other) => {
                        return Err(Error::Config(format!("gan_lq_nd: unknown mode '{other}'")))
                    }
                };
                Ok(gan_lq_nd(&sigma, &mu, self.loss()?, mode)?)
            }
            "uniform_2d" => Ok(uniform_2d(self.loss()?)?),
            "dirac_linear" => Ok(dirac_linear(self.loss()?)),
            "feature_linear_gaussian" => {
                let var = self.var.ok_or_else(|| {
                    Error::Config("feature_linear_gaussian: var is required".into())
                })?;
                Ok(feature_linear_gaussian(
                    var,
                    self.loss()?,
                    seed,
                    self.n_samples.unwrap_or(100_000),
                )?)
            }
            "redundant_wrap" => {
                let base = self
                    .base
                    .as_ref()
                    .ok_or_else(|| {
                        Error::Config("redundant_wrap: [system.base] is required".into())
                    })?
                    .build(seed)?;
                Ok(redundant_wrap_with_lift(
                    base,
                    self.dup_d.as_deref().unwrap_or(&[]),
                    self.dup_g.as_deref().unwrap_or(&[]),
                    self.lift_asymmetry.unwrap_or(0.0),
                )?)
            }
            other => Err(Error::Config(format!("unknown system '{other}'"))),
        }
    }
}

impl TransformConfig {
    pub fn apply(&self, sys: Arc<dyn GanSystem>) -> Result<Arc<dyn GanSystem>> {
        match self.kind.as_deref() {
            None | Some("none") => Ok(sys),
            Some("regularize") => {
                let eta = self
                    .eta
                    .ok_or_else(|| Error::Config("transform.eta is required".into()))?;
                Ok(crate::dynamics::regularize(sys, eta)?)
            }
            Some("unroll1") => {
                let eta = self
                    .eta
                    .ok_or_else(|| Error::Config("transform.eta is required".into()))?;
                Ok(crate::dynamics::unroll1(sys, eta)?)
            }
            Some(other) => Err(Error::Config(format!("unknown transform '{other}'"))),
        }
    }
}

impl EventConfig {
    pub fn to_spec(&self) -> Result<EventSpec> {
        let target = || -> Result<ParamPoint> {
            Ok(ParamPoint::new(
                self.target_d
                    .clone()
                    .ok_or_else(|| Error::Config("event: target_d required".into()))?,
                self.target_g
                    .clone()
                    .ok_or_else(|| Error::Config("event: target_g required".into()))?,
            ))
        };
        match self.kind.as_str() {
            "convergence" => Ok(EventSpec::Convergence {
                target: target()?,
                tol: self.tol.unwrap_or(1e-6),
                window: self.window.unwrap_or(20),
                halt: self.halt.unwrap_or(false),
            }),
            "section" => Ok(EventSpec::SectionCrossing {
                coord: self
                    .coord
                    .ok_or_else(|| Error::Config("section event: coord required".into()))?,
                level: self.level.unwrap_or(0.0),
                direction: self.direction.unwrap_or(0),
            }),
            "radius_monotonicity" => Ok(EventSpec::RadiusMonotonicityViolation {
                center: target()?,
                coords: self.coords.clone(),
                guard_coord: self.guard_coord,
                guard_positive: self.guard_positive.unwrap_or(true),
                slack: self.slack.unwrap_or(1e-9),
            }),
            "return_to_start" => Ok(EventSpec::ReturnToStart {
                tol: self.tol.unwrap_or(1e-6),
                t_min: self.t_min.unwrap_or(0.0),
                halt: self.halt.unwrap_or(false),
            }),
            other => Err(Error::Config(format!("unknown event kind '{other}'"))),
        }
    }
}

impl MonitorConfig {
    pub fn to_spec(&self) -> Result<MonitorSpec> {
        let center = || -> Result<ParamPoint> {
            Ok(ParamPoint::new(
                self.center_d
                    .clone()
                    .ok_or_else(|| Error::Config("monitor: center_d required".into()))?,
                self.center_g
                    .clone()
                    .ok_or_else(|| Error::Config("monitor: center_g required".into()))?,
            ))
        };
        match self.kind.as_str() {
            "field_norm" => Ok(MonitorSpec::FieldNorm),
            "distance" => Ok(MonitorSpec::DistanceTo {
                name: self.name.clone().unwrap_or_else(|| "distance".into()),
                target: center()?,
            }),
            "radius_sq" => Ok(MonitorSpec::RadiusSq {
                name: self.name.clone().unwrap_or_else(|| "radius_sq".into()),
                center: center()?,
                coords: self.coords.clone(),
            }),
            "quad_form" => Ok(MonitorSpec::QuadForm {
                name: self.name.clone().unwrap_or_else(|| "quad_form".into()),
                p: mat_from_rows(
                    self.p
                        .as_ref()
                        .ok_or_else(|| Error::Config("quad_form monitor: p required".into()))?,
                    "monitor p",
                )?,
                center: center()?,
            }),
            other => Err(Error::Config(format!("unknown monitor kind '{other}'"))),
        }
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    toml::from_str(text).map_err(|e| Error::Config(format!("TOML parse error: {e}")))
}

/// FNV-1a hash of the raw config text, stamped into output headers.
pub fn config_hash(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_simulate_config_parses() {
        let text = r#"
seed = 42
[system]
name = "uniform_2d"
loss = "logistic"
[run]
kind = "integrate"
x0_d = [0.2]
x0_g = [0.8]
t_max = 50.0
rtol = 1e-10
atol = 1e-12
"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.seed, 42);
        let sys = cfg.system.build(cfg.seed).unwrap();
        assert_eq!(sys.name(), "uniform_2d");
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"
[system]
name = "uniform_2d"
loss = "logistic"
frobnicate = 3
"#;
        assert!(parse_config(text).is_err());
    }

    #[test]
    fn missing_physical_parameter_rejected() {
        let text = r#"
[system]
name = "scalar_wgan_lq"
"#;
        let cfg = parse_config(text).unwrap();
        assert!(matches!(cfg.system.build(0), Err(Error::Config(_))));
    }

    #[test]
    fn wrapped_system_from_config() {
        let text = r#"
[system]
name = "redundant_wrap"
dup_d = [0]
lift_asymmetry = 0.4
[system.base]
name = "uniform_2d"
loss = "logistic"
"#;
        let cfg = parse_config(text).unwrap();
        let sys = cfg.system.build(0).unwrap();
        assert_eq!(sys.n_d(), 2);
        assert_eq!(sys.n_g(), 1);
    }

    #[test]
    fn config_hash_is_stable() {
        assert_eq!(config_hash("abc"), config_hash("abc"));
        assert_ne!(config_hash("abc"), config_hash("abd"));
    }
}
