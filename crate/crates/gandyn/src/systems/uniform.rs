//! The 2-parameter uniform toy system: data uniform on [−1, 1],
//! latent uniform on [−1, 1], discriminator D(x) = w₂x², generator
//! G(z) = az. The generated density is uniform on [−|a|, |a|] (even in
//! a); trajectories are meant to live in a > 0.

use super::{ExpectationMode, GanSystem, JacobianBundle, ParamPoint};
use crate::error::{Error, Result};
use crate::losses::LossFn;
use crate::numkit::{gauss_legendre, Mat, QuadRule};
use std::sync::Arc;

pub struct Uniform2d {
    loss: LossFn,
    quad: QuadRule,
    nodes: usize,
}

pub fn uniform_2d(loss: LossFn) -> Result<Arc<Uniform2d>> {
    uniform_2d_with_nodes(loss, crate::numkit::DEFAULT_NODES)
}

pub fn uniform_2d_with_nodes(loss: LossFn, nodes: usize) -> Result<Arc<Uniform2d>> {
    Ok(Arc::new(Uniform2d {
        loss,
        quad: gauss_legendre(nodes)?,
        nodes,
    }))
}

impl GanSystem for Uniform2d {
    fn name(&self) -> &str {
        "uniform_2d"
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
        let w2 = p.theta_d[0];
        let a = p.theta_g[0];
        if a == 0.0 {
            return Err(Error::numeric(
                "uniform_2d: degenerate generator (a == 0)",
            ));
        }
        let f = &self.loss;
        // V = ½∫f(w₂x²)dx + ½∫f(−w₂(az)²)dz over [−1,1]²
        let dw2 = 0.5 * self.quad.integrate(|x| x * x * f.d1(w2 * x * x))
            - 0.5
                * self
                    .quad
                    .integrate(|z| (a * z) * (a * z) * f.d1(-w2 * a * a * z * z));
        let da = w2 * a * self.quad.integrate(|z| z * z * f.d1(-w2 * a * a * z * z));
        Ok(ParamPoint::new(vec![dw2], vec![da]))
    }

    fn equilibrium(&self) -> ParamPoint {
        ParamPoint::new(vec![0.0], vec![1.0])
    }

    fn equilibria(&self) -> Vec<ParamPoint> {
        vec![
            ParamPoint::new(vec![0.0], vec![1.0]),
            ParamPoint::new(vec![0.0], vec![-1.0]),
        ]
    }

    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        // K_DD = E_{U[−1,1]}[x⁴] = 1/5; K_DG = ∂_a E_{p_a}[x²]|_{a=1} = 2/3
        Some(JacobianBundle {
            k_dd: Mat::from_rows(&[vec![0.2]]),
            k_dg: Mat::from_rows(&[vec![2.0 / 3.0]]),
            f1: self.loss.f1_at_0,
            f2: self.loss.f2_at_0,
        })
    }

    fn expectation_mode(&self) -> ExpectationMode {
        ExpectationMode::Quadrature { nodes: self.nodes }
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        (vec!["w2".into()], vec!["a".into()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::{logistic_loss, wgan_loss};

    #[test]
    fn equilibrium_field_vanishes() {
        for loss in [logistic_loss(), wgan_loss()] {
            let sys = uniform_2d(loss).unwrap();
            for eq in sys.equilibria() {
                assert!(sys.field(&eq).unwrap().norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn wgan_field_closed_form() {
        // ẇ₂ = (1−a²)/3, ȧ = 2w₂a/3
        let sys = uniform_2d(wgan_loss()).unwrap();
        for (w2, a) in [(0.3, 0.7), (-0.2, 1.4), (0.0, 0.5)] {
            let f = sys.field(&ParamPoint::new(vec![w2], vec![a])).unwrap();
            assert!((f.theta_d[0] - (1.0 - a * a) / 3.0).abs() < 1e-13);
            assert!((f.theta_g[0] - 2.0 * w2 * a / 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_generator_is_an_error() {
        let sys = uniform_2d(wgan_loss()).unwrap();
        assert!(sys.field(&ParamPoint::new(vec![0.1], vec![0.0])).is_err());
    }

    #[test]
    fn field_even_in_a() {
        let sys = uniform_2d(logistic_loss()).unwrap();
        let fp = sys.field(&ParamPoint::new(vec![0.4], vec![0.8])).unwrap();
        let fm = sys.field(&ParamPoint::new(vec![0.4], vec![-0.8])).unwrap();
        assert!((fp.theta_d[0] - fm.theta_d[0]).abs() < 1e-14);
        assert!((fp.theta_g[0] + fm.theta_g[0]).abs() < 1e-14);
    }
}
