//! Concrete two-player dynamical systems.
//!
//! Every system exposes the simultaneous-gradient vector field
//! `θ̇_D = +∇_{θ_D}V, θ̇_G = −∇_{θ_G}V` (discriminator ascends the
//! objective, generator descends it — the convention that reproduces
//! every closed-form ODE this crate checks against), its canonical
//! equilibrium, and, where derivable, analytic equilibrium Jacobian
//! blocks K_DD and K_DG.

pub mod dirac;
pub mod feature;
pub mod lq;
pub mod probe;
pub mod uniform;
pub mod wrap;

use crate::error::{Error, Result};
use crate::losses::LossFn;
use crate::numkit::mat::{norm, sub_vec, Mat};
use serde::{Deserialize, Serialize};

pub use dirac::dirac_linear;
pub use feature::{feature_linear, feature_linear_gaussian, FeatureLinear};
pub use lq::{gan_lq_nd, scalar_wgan_lq, wgan_lq_nd, GanLqNd, LqMode};
pub use probe::{concavity_probe, ProbeMode};
pub use uniform::uniform_2d;
pub use wrap::{redundant_wrap, redundant_wrap_with_lift, RedundantWrapped};

/// A point in the joint parameter space, partitioned by player.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub theta_d: Vec<f64>,
    pub theta_g: Vec<f64>,
}

impl ParamPoint {
    pub fn new(theta_d: Vec<f64>, theta_g: Vec<f64>) -> Self {
        ParamPoint { theta_d, theta_g }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.theta_d.len(), self.theta_g.len())
    }

    pub fn concat(&self) -> Vec<f64> {
        let mut v = self.theta_d.clone();
        v.extend_from_slice(&self.theta_g);
        v
    }

    pub fn from_concat(n_d: usize, n_g: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), n_d + n_g, "from_concat length mismatch");
        ParamPoint {
            theta_d: v[..n_d].to_vec(),
            theta_g: v[n_d..].to_vec(),
        }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.concat())
    }

    pub fn distance(&self, other: &ParamPoint) -> f64 {
        norm(&sub_vec(&self.concat(), &other.concat()))
    }

    pub fn is_finite(&self) -> bool {
        self.theta_d.iter().chain(&self.theta_g).all(|x| x.is_finite())
    }
}

/// How a system evaluates its expectation integrals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExpectationMode {
    ClosedForm,
    Quadrature { nodes: usize },
    MonteCarlo { seed: u64, n_samples: usize },
}

/// Equilibrium moment blocks plus the loss curvature they combine with.
///
/// `k_dd` is the PSD discriminator-gradient outer-product matrix;
/// `k_dg` the discriminator/generator coupling matrix in the positive
/// storage convention (the equilibrium Jacobian assembles as
/// `[[2f″(0)K_DD, f′(0)K_DG], [−f′(0)K_DGᵀ, 0]]`; the raw field's
/// generator axes are the mirror image, see
/// `stability::jacobian::to_bundle_orientation`).
#[derive(Clone, Debug)]
pub struct JacobianBundle {
    pub k_dd: Mat,
    pub k_dg: Mat,
    /// f′(0)
    pub f1: f64,
    /// f″(0)
    pub f2: f64,
}

impl JacobianBundle {
    pub fn n_d(&self) -> usize {
        self.k_dd.rows
    }

    pub fn n_g(&self) -> usize {
        self.k_dg.cols
    }

    /// J_DD = 2 f″(0) K_DD (symmetric, ⪯ 0 for concave-at-zero losses).
    pub fn j_dd(&self) -> Mat {
        self.k_dd.scale(2.0 * self.f2)
    }

    /// J_DG = f′(0) K_DG.
    pub fn j_dg(&self) -> Mat {
        self.k_dg.scale(self.f1)
    }

    /// J_GG vanishes for the realizable systems this crate builds.
    pub fn j_gg(&self) -> Mat {
        Mat::zeros(self.n_g(), self.n_g())
    }
}

/// A named two-player dynamical system.
pub trait GanSystem: Send + Sync {
    fn name(&self) -> &str;
    fn n_d(&self) -> usize;
    fn n_g(&self) -> usize;
    fn loss(&self) -> &LossFn;

    /// The ODE right-hand side (θ̇_D, θ̇_G) at a parameter point.
    fn field(&self, p: &ParamPoint) -> Result<ParamPoint>;

    /// The canonical equilibrium.
    fn equilibrium(&self) -> ParamPoint;

    /// All registered equilibria (defaults to the canonical one).
    fn equilibria(&self) -> Vec<ParamPoint> {
        vec![self.equilibrium()]
    }

    /// Analytic equilibrium blocks, when the system can derive them.
    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        None
    }

    fn expectation_mode(&self) -> ExpectationMode;

    /// Coordinate names, discriminator block then generator block.
    fn param_names(&self) -> (Vec<String>, Vec<String>);

    /// Analytic ∂(θ̇_D)/∂θ_G at an arbitrary point, when available.
    /// Transforms fall back to central differences otherwise.
    fn disc_field_jacobian_wrt_gen(&self, _p: &ParamPoint) -> Option<Mat> {
        None
    }

    fn check_point(&self, p: &ParamPoint) -> Result<()> {
        if p.theta_d.len() != self.n_d() || p.theta_g.len() != self.n_g() {
            return Err(Error::dim(format!(
                "{}: point dims {:?} do not match ({}, {})",
                self.name(),
                p.dims(),
                self.n_d(),
                self.n_g()
            )));
        }
        if !p.is_finite() {
            return Err(Error::precondition(format!(
                "{}: non-finite parameter point",
                self.name()
            )));
        }
        Ok(())
    }
}

/// Central-difference ∂(θ̇_D)/∂θ_G of a system's discriminator field,
/// the fallback used by the regularizer and unrolled transforms.
pub fn fd_disc_jacobian_wrt_gen(sys: &dyn GanSystem, p: &ParamPoint) -> Result<Mat> {
    let h = 1e-6 * norm(&p.theta_g).max(1.0);
    let mut out = Mat::zeros(sys.n_d(), sys.n_g());
    for j in 0..sys.n_g() {
        let mut plus = p.clone();
        plus.theta_g[j] += h;
        let mut minus = p.clone();
        minus.theta_g[j] -= h;
        let fp = sys.field(&plus)?;
        let fm = sys.field(&minus)?;
        for i in 0..sys.n_d() {
            out[(i, j)] = (fp.theta_d[i] - fm.theta_d[i]) / (2.0 * h);
        }
    }
    Ok(out)
}
