//! Point-mass data at 0 with a linear discriminator θ_D·x and a
//! point-mass generator at θ_G. The equilibrium (0, 0) is unique but
//! not locally exponentially stable: the linearization is the pure
//! rotation [[0, −f′(0)], [f′(0), 0]].

use super::{ExpectationMode, GanSystem, ParamPoint};
use crate::error::Result;
use crate::losses::LossFn;
use crate::numkit::Mat;
use std::sync::Arc;

pub struct DiracLinear {
    loss: LossFn,
}

pub fn dirac_linear(loss: LossFn) -> Arc<DiracLinear> {
    Arc::new(DiracLinear { loss })
}

impl DiracLinear {
    /// Exact Jacobian of the field at an arbitrary point.
    pub fn jacobian_at(&self, p: &ParamPoint) -> Mat {
        let (d, g) = (p.theta_d[0], p.theta_g[0]);
        let f1 = self.loss.d1(-d * g);
        let f2 = self.loss.d2(-d * g);
        Mat::from_rows(&[
            vec![f2 * g * g, -f1 + f2 * d * g],
            vec![f1 - f2 * d * g, -f2 * d * d],
        ])
    }
}

impl GanSystem for DiracLinear {
    fn name(&self) -> &str {
        "dirac_linear"
    }

    fn n_d(&self) -> usize {
        1
    }

    fn n_g(&self) -> usize {
        1
    }

    fn loss(&self) -> &LossFn {
        &self.loss
    }

    fn field(&self, p: &ParamPoint) -> Result<ParamPoint> {
        self.check_point(p)?;
        // V = f(0) + f(−θ_D θ_G)
        let (d, g) = (p.theta_d[0], p.theta_g[0]);
        let fp = self.loss.d1(-d * g);
        Ok(ParamPoint::new(vec![-fp * g], vec![fp * d]))
    }

    fn equilibrium(&self) -> ParamPoint {
        ParamPoint::new(vec![0.0], vec![0.0])
    }

    fn expectation_mode(&self) -> ExpectationMode {
        ExpectationMode::ClosedForm
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        (vec!["theta_d".into()], vec!["theta_g".into()])
    }

    fn disc_field_jacobian_wrt_gen(&self, p: &ParamPoint) -> Option<Mat> {
        let (d, g) = (p.theta_d[0], p.theta_g[0]);
        let f1 = self.loss.d1(-d * g);
        let f2 = self.loss.d2(-d * g);
        Some(Mat::from_rows(&[vec![-f1 + f2 * d * g]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::logistic_loss;

    #[test]
    fn field_and_jacobian_at_origin() {
        let sys = dirac_linear(logistic_loss());
        let eq = sys.equilibrium();
        assert_eq!(sys.field(&eq).unwrap().concat(), vec![0.0, 0.0]);
        let j = sys.jacobian_at(&eq);
        assert_eq!(j.entries, vec![0.0, -0.5, 0.5, 0.0]);
    }

    #[test]
    fn orbits_conserve_radius() {
        // d/dt(θ_D² + θ_G²) = 0 exactly, so the field is tangent
        let sys = dirac_linear(logistic_loss());
        let p = ParamPoint::new(vec![0.1], vec![0.1]);
        let f = sys.field(&p).unwrap();
        let radial = p.theta_d[0] * f.theta_d[0] + p.theta_g[0] * f.theta_g[0];
        assert!(radial.abs() < 1e-16);
    }
}
