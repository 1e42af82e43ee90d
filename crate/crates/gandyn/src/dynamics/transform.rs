//! Field transforms that leave the discriminator update untouched and
//! modify only the generator update: the gradient-norm regularizer and
//! the 1-unrolled lookahead. Both preserve every base equilibrium.

use crate::error::{Error, Result};
use crate::losses::LossFn;
use crate::numkit::Mat;
use crate::systems::{fd_disc_jacobian_wrt_gen, ExpectationMode, GanSystem, JacobianBundle, ParamPoint};
use std::sync::Arc;

fn cross_derivative(base: &dyn GanSystem, p: &ParamPoint) -> Result<Mat> {
    match base.disc_field_jacobian_wrt_gen(p) {
        Some(m) => Ok(m),
        None => fd_disc_jacobian_wrt_gen(base, p),
    }
}

/// Generator update augmented with −η∇_{θ_G}‖∇_{θ_D}V‖², i.e. the extra
/// term −2η·(∂θ̇_D/∂θ_G)ᵀ·θ̇_D.
pub struct Regularized {
    base: Arc<dyn GanSystem>,
    eta: f64,
    name: String,
}

pub fn regularize(base: Arc<dyn GanSystem>, eta: f64) -> Result<Arc<Regularized>> {
    if eta < 0.0 {
        return Err(Error::precondition("regularize: eta must be >= 0"));
    }
    let name = format!("{}+reg", base.name());
    Ok(Arc::new(Regularized { base, eta, name }))
}

impl Regularized {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn base(&self) -> &Arc<dyn GanSystem> {
        &self.base
    }
}

impl GanSystem for Regularized {
    fn name(&self) -> &str {
        &self.name
    }

    fn n_d(&self) -> usize {
        self.base.n_d()
    }

    fn n_g(&self) -> usize {
        self.base.n_g()
    }

    fn loss(&self) -> &LossFn {
        self.base.loss()
    }

    fn field(&self, p: &ParamPoint) -> Result<ParamPoint> {
        let mut f = self.base.field(p)?;
        if self.eta == 0.0 {
            return Ok(f); // bitwise-identical to the base field
        }
        let c = cross_derivative(self.base.as_ref(), p)?;
        let correction = c.transpose().matvec(&f.theta_d);
        for (g, dc) in f.theta_g.iter_mut().zip(&correction) {
            *g -= 2.0 * self.eta * dc;
        }
        Ok(f)
    }

    fn equilibrium(&self) -> ParamPoint {
        self.base.equilibrium()
    }

    fn equilibria(&self) -> Vec<ParamPoint> {
        self.base.equilibria()
    }

    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        self.base.analytic_blocks()
    }

    fn expectation_mode(&self) -> ExpectationMode {
        self.base.expectation_mode()
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        self.base.param_names()
    }
}

/// Generator update computed against a discriminator advanced by one
/// gradient step of size η (the two-term expanded form): with
/// d = θ̇_D and g = θ̇_G,
///
///   g_unrolled(θ) = g(θ_D + η·d(θ), θ_G) − η·C(θ)ᵀ·d(θ_D + η·d(θ), θ_G)
///
/// where C = ∂d/∂θ_G at the current point. The discriminator field is
/// unchanged.
pub struct Unrolled {
    base: Arc<dyn GanSystem>,
    eta: f64,
    name: String,
}

pub fn unroll1(base: Arc<dyn GanSystem>, eta: f64) -> Result<Arc<Unrolled>> {
    if eta < 0.0 {
        return Err(Error::precondition("unroll1: eta must be >= 0"));
    }
    let name = format!("{}+unroll1", base.name());
    Ok(Arc::new(Unrolled { base, eta, name }))
}

impl GanSystem for Unrolled {
    fn name(&self) -> &str {
        &self.name
    }

    fn n_d(&self) -> usize {
        self.base.n_d()
    }

    fn n_g(&self) -> usize {
        self.base.n_g()
    }

    fn loss(&self) -> &LossFn {
        self.base.loss()
    }

    fn field(&self, p: &ParamPoint) -> Result<ParamPoint> {
        let f = self.base.field(p)?;
        if self.eta == 0.0 {
            return Ok(f);
        }
        let unrolled_d: Vec<f64> = p
            .theta_d
            .iter()
            .zip(&f.theta_d)
            .map(|(th, d)| th + self.eta * d)
            .collect();
        let p_plus = ParamPoint::new(unrolled_d, p.theta_g.clone());
        let f_plus = self.base.field(&p_plus)?;
        let c = cross_derivative(self.base.as_ref(), p)?;
        let correction = c.transpose().matvec(&f_plus.theta_d);
        let theta_g: Vec<f64> = f_plus
            .theta_g
            .iter()
            .zip(&correction)
            .map(|(g, dc)| g - self.eta * dc)
            .collect();
        Ok(ParamPoint::new(f.theta_d, theta_g))
    }

    fn equilibrium(&self) -> ParamPoint {
        self.base.equilibrium()
    }

    fn equilibria(&self) -> Vec<ParamPoint> {
        self.base.equilibria()
    }

    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        self.base.analytic_blocks()
    }

    fn expectation_mode(&self) -> ExpectationMode {
        self.base.expectation_mode()
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        self.base.param_names()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::{logistic_loss, wgan_loss};
    use crate::systems::{scalar_wgan_lq, uniform_2d};

    #[test]
    fn eta_zero_is_identity() {
        let base = uniform_2d(logistic_loss()).unwrap();
        let reg = regularize(base.clone(), 0.0).unwrap();
        let unr = unroll1(base.clone(), 0.0).unwrap();
        let p = ParamPoint::new(vec![0.31], vec![0.77]);
        let f0 = base.field(&p).unwrap();
        assert_eq!(reg.field(&p).unwrap(), f0);
        assert_eq!(unr.field(&p).unwrap(), f0);
    }

    #[test]
    fn wgan_uniform_regularized_closed_form() {
        // generator field becomes 2w₂a/3 + (4η/9)(a − a³)
        let base = uniform_2d(wgan_loss()).unwrap();
        for eta in [0.25, 0.5, 1.0] {
            let reg = regularize(base.clone(), eta).unwrap();
            for (w2, a) in [(0.2, 0.8), (-0.1, 1.2), (0.0, 0.6)] {
                let f = reg.field(&ParamPoint::new(vec![w2], vec![a])).unwrap();
                let want = 2.0 * w2 * a / 3.0 + (4.0 * eta / 9.0) * (a - a * a * a);
                assert!(
                    (f.theta_g[0] - want).abs() < 1e-8,
                    "eta={eta} w2={w2} a={a}: {} vs {want}",
                    f.theta_g[0]
                );
                // discriminator field unchanged
                assert!((f.theta_d[0] - (1.0 - a * a) / 3.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn equilibria_preserved_by_both_transforms() {
        let systems: Vec<Arc<dyn GanSystem>> = vec![
            uniform_2d(logistic_loss()).unwrap(),
            uniform_2d(wgan_loss()).unwrap(),
            scalar_wgan_lq(1.0).unwrap(),
        ];
        for sys in systems {
            for eta in [0.1, 0.5] {
                let reg = regularize(sys.clone(), eta).unwrap();
                let unr = unroll1(sys.clone(), eta).unwrap();
                for eq in sys.equilibria() {
                    assert!(reg.field(&eq).unwrap().norm() <= 1e-8, "{}", sys.name());
                    assert!(unr.field(&eq).unwrap().norm() <= 1e-8, "{}", sys.name());
                }
            }
        }
    }

    #[test]
    fn regularizer_inert_where_disc_gradient_vanishes() {
        // scalar WGAN LQ: disc field vanishes on the circle a²+b²=σ² with w₁...
        // use (w₂, w₁, a, b) = (0.3, 0, 1, 0): ẇ₂ = 0, ẇ₁ = 0
        let sys = scalar_wgan_lq(1.0).unwrap();
        let p = ParamPoint::new(vec![0.3, 0.0], vec![1.0, 0.0]);
        let d = sys.field(&p).unwrap().theta_d;
        assert!(crate::numkit::mat::norm(&d) < 1e-15);
        let reg = regularize(sys.clone(), 0.7).unwrap();
        assert_eq!(reg.field(&p).unwrap(), sys.field(&p).unwrap());
    }

    #[test]
    fn unrolled_matches_regularized_to_first_order() {
        // Richardson slope of ‖g_reg − g_unroll‖ in η should be ≥ 1.9.
        // The logistic system has a genuinely nonlinear discriminator
        // field, so the O(η²) difference is nonzero and measurable.
        let base = uniform_2d(logistic_loss()).unwrap();
        let probes = [
            ParamPoint::new(vec![0.2], vec![0.8]),
            ParamPoint::new(vec![-0.15], vec![1.25]),
        ];
        for p in &probes {
            let diff = |eta: f64| -> f64 {
                let reg = regularize(base.clone(), eta).unwrap();
                let unr = unroll1(base.clone(), eta).unwrap();
                let fr = reg.field(p).unwrap();
                let fu = unr.field(p).unwrap();
                crate::numkit::mat::norm(&crate::numkit::mat::sub_vec(
                    &fr.theta_g,
                    &fu.theta_g,
                ))
            };
            let d1 = diff(0.08);
            let d2 = diff(0.04);
            let slope = (d1 / d2).log2();
            assert!(slope >= 1.9, "slope {slope}");
        }
    }

    #[test]
    fn wgan_uniform_unrolled_equals_regularized_exactly() {
        // For the WGAN uniform system the discriminator field has no
        // w₂-dependence and the generator field is linear in w₂, so the
        // two transforms coincide for every η (difference identically 0
        // in exact arithmetic; the FD cross-derivative leaves ~1e-11
        // of cancellation roundoff).
        let base = uniform_2d(wgan_loss()).unwrap();
        for eta in [0.1, 0.5, 1.0] {
            let reg = regularize(base.clone(), eta).unwrap();
            let unr = unroll1(base.clone(), eta).unwrap();
            for (w2, a) in [(0.2, 0.8), (-0.3, 1.2)] {
                let p = ParamPoint::new(vec![w2], vec![a]);
                let fr = reg.field(&p).unwrap();
                let fu = unr.field(&p).unwrap();
                assert!((fr.theta_g[0] - fu.theta_g[0]).abs() < 1e-9);
            }
        }
    }
}
