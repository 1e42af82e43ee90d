//! Feature-linear discriminators D(x) = θ_Dᵀφ(x) paired with a
//! reparametrized scalar generator family. Covers the non-realizable
//! analysis: the data distribution need not be expressible by the
//! generator, only the feature means must match at equilibrium.

use super::{ExpectationMode, GanSystem, JacobianBundle, ParamPoint};
use crate::error::{Error, Result};
use crate::losses::LossFn;
use crate::numkit::{CounterRng, Mat};
use std::sync::Arc;

type FeatureMap = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;
type DataSampler = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type GenSampler = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
type GenGrad = Arc<dyn Fn(f64, &[f64]) -> Vec<f64> + Send + Sync>;

pub struct FeatureLinear {
    name: String,
    loss: LossFn,
    k: usize,
    n_g: usize,
    phi: FeatureMap,
    /// Maps a standard-normal draw to a data sample.
    data_sample: DataSampler,
    /// Reparametrized generator sample x = G(z; θ_G).
    gen_sample: GenSampler,
    /// ∂G(z; θ_G)/∂θ_G.
    gen_grad: GenGrad,
    equilibrium_g: Vec<f64>,
    seed: u64,
    n_samples: usize,
    /// Closed-form blocks, when the instance has them (stock Gaussian case).
    exact_blocks: Option<JacobianBundle>,
}

#[allow(clippy::too_many_arguments)]
pub fn feature_linear(
    name: impl Into<String>,
    loss: LossFn,
    k: usize,
    n_g: usize,
    phi: FeatureMap,
    data_sample: DataSampler,
    gen_sample: GenSampler,
    gen_grad: GenGrad,
    equilibrium_g: Option<Vec<f64>>,
    seed: u64,
    n_samples: usize,
) -> Result<Arc<FeatureLinear>> {
    let equilibrium_g = equilibrium_g.ok_or_else(|| {
        Error::precondition(
            "feature_linear: equilibrium generator not provided and no moment-matching \
             solver is available for this family",
        )
    })?;
    if equilibrium_g.len() != n_g {
        return Err(Error::dim("feature_linear: equilibrium length mismatch"));
    }
    Ok(Arc::new(FeatureLinear {
        name: name.into(),
        loss,
        k,
        n_g,
        phi,
        data_sample,
        gen_sample,
        gen_grad,
        equilibrium_g,
        seed,
        n_samples,
        exact_blocks: None,
    }))
}

/// The stock non-realizable instance: data N(0, var), generator
/// N(0, a²), features φ(x) = (x², x). The equilibrium a⋆ = √var
/// matches both feature means; K_DD at equilibrium is the Isserlis
/// matrix [[3·var², 0], [0, var]] (the two measures coincide there),
/// and K_DG = ∂_a E_{p_a}[φ] = (2√var, 0)ᵀ.
///
/// The data stream reuses the latent stream (x = √var·z), so at a⋆
/// the two sides of the discriminator update cancel exactly.
pub fn feature_linear_gaussian(
    var: f64,
    loss: LossFn,
    seed: u64,
    n_samples: usize,
) -> Result<Arc<FeatureLinear>> {
    if !(var > 0.0) {
        return Err(Error::precondition("feature_linear_gaussian: var must be > 0"));
    }
    let a_star = var.sqrt();
    let f1 = loss.f1_at_0;
    let f2 = loss.f2_at_0;
    let sys = FeatureLinear {
        name: "feature_linear_gaussian".into(),
        loss,
        k: 2,
        n_g: 1,
        phi: Arc::new(|x| vec![x * x, x]),
        data_sample: Arc::new(move |z| a_star * z),
        gen_sample: Arc::new(|z, a| a[0] * z),
        gen_grad: Arc::new(|z, _| vec![z]),
        equilibrium_g: vec![a_star],
        seed,
        n_samples,
        exact_blocks: Some(JacobianBundle {
            k_dd: Mat::diag(&[3.0 * var * var, var]),
            k_dg: Mat::from_rows(&[vec![2.0 * a_star], vec![0.0]]),
            f1,
            f2,
        }),
    };
    Ok(Arc::new(sys))
}

impl FeatureLinear {
    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Monte-carlo estimate of the non-realizable K_DD:
    /// ½(E_data + E_gen⋆)[φφᵀ].
    pub fn kdd_monte_carlo(&self) -> Mat {
        let rng = CounterRng::new(self.seed);
        let mut acc = Mat::zeros(self.k, self.k);
        for s in 0..self.n_samples {
            let z = rng.gaussian(s as u64);
            for x in [
                (self.data_sample)(z),
                (self.gen_sample)(z, &self.equilibrium_g),
            ] {
                let phi = (self.phi)(x);
                for i in 0..self.k {
                    for j in 0..self.k {
                        acc[(i, j)] += 0.5 * phi[i] * phi[j];
                    }
                }
            }
        }
        acc.scale(1.0 / self.n_samples as f64)
    }
}

impl GanSystem for FeatureLinear {
    fn name(&self) -> &str {
        &self.name
    }

    fn n_d(&self) -> usize {
        self.k
    }

    fn n_g(&self) -> usize {
        self.n_g
    }

    fn loss(&self) -> &LossFn {
        &self.loss
    }

    fn field(&self, p: &ParamPoint) -> Result<ParamPoint> {
        self.check_point(p)?;
        let rng = CounterRng::new(self.seed);
        let f = &self.loss;
        let mut d_acc = vec![0.0; self.k];
        let mut g_acc = vec![0.0; self.n_g];
        for s in 0..self.n_samples {
            let z = rng.gaussian(s as u64);
            let x_data = (self.data_sample)(z);
            let x_gen = (self.gen_sample)(z, &p.theta_g);
            let phi_data = (self.phi)(x_data);
            let phi_gen = (self.phi)(x_gen);
            let d_data = Self::dot(&p.theta_d, &phi_data);
            let d_gen = Self::dot(&p.theta_d, &phi_gen);
            let fp_data = f.d1(d_data);
            let fp_gen = f.d1(-d_gen);
            for i in 0..self.k {
                d_acc[i] += fp_data * phi_data[i] - fp_gen * phi_gen[i];
            }
            // θ̇_G = −∇_G E_z[f(−θᵀφ(G(z;θ_G)))]
            //       = E_z[f′(−θᵀφ(G))·θᵀφ′(G)·∂G/∂θ_G]
            let dphi_dx = {
                // derivative of φ at x_gen by central differences of the map
                let h = 1e-6 * x_gen.abs().max(1.0);
                let pp = (self.phi)(x_gen + h);
                let pm = (self.phi)(x_gen - h);
                let mut v = vec![0.0; self.k];
                for i in 0..self.k {
                    v[i] = (pp[i] - pm[i]) / (2.0 * h);
                }
                v
            };
            let slope = Self::dot(&p.theta_d, &dphi_dx);
            let dgdtheta = (self.gen_grad)(z, &p.theta_g);
            for j in 0..self.n_g {
                g_acc[j] += fp_gen * slope * dgdtheta[j];
            }
        }
        let m = self.n_samples as f64;
        d_acc.iter_mut().for_each(|v| *v /= m);
        g_acc.iter_mut().for_each(|v| *v /= m);
        Ok(ParamPoint::new(d_acc, g_acc))
    }

    fn equilibrium(&self) -> ParamPoint {
        ParamPoint::new(vec![0.0; self.k], self.equilibrium_g.clone())
    }

    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        self.exact_blocks.clone()
    }

    fn expectation_mode(&self) -> ExpectationMode {
        ExpectationMode::MonteCarlo {
            seed: self.seed,
            n_samples: self.n_samples,
        }
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        (
            (0..self.k).map(|i| format!("theta_d_{i}")).collect(),
            (0..self.n_g).map(|i| format!("theta_g_{i}")).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::logistic_loss;

    #[test]
    fn stock_instance_equilibrium_and_blocks() {
        let sys = feature_linear_gaussian(1.5, logistic_loss(), 17, 200_000).unwrap();
        let eq = sys.equilibrium();
        assert!((eq.theta_g[0] - 1.5f64.sqrt()).abs() < 1e-15);
        // common random numbers make the discriminator update vanish exactly
        let f = sys.field(&eq).unwrap();
        assert!(f.norm() <= 1e-12, "field norm {}", f.norm());
        let b = sys.analytic_blocks().unwrap();
        assert!(b.k_dd.sub(&Mat::diag(&[6.75, 1.5])).frobenius() < 1e-12);
        assert!((b.k_dg[(0, 0)] - 2.0 * 1.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kdd_monte_carlo_matches_isserlis() {
        // realizable sub-case: data == generator pushforward at a⋆, so the
        // non-realizable ½(E+E) average reduces to the plain E[φφᵀ]
        let sys = feature_linear_gaussian(1.5, logistic_loss(), 23, 400_000).unwrap();
        let mc = sys.kdd_monte_carlo();
        let exact = Mat::diag(&[6.75, 1.5]);
        let rel = mc.sub(&exact).frobenius() / exact.frobenius();
        assert!(rel < 0.02, "relative error {rel}");
    }

    #[test]
    fn missing_equilibrium_is_an_error() {
        let r = feature_linear(
            "custom",
            logistic_loss(),
            2,
            1,
            Arc::new(|x| vec![x * x, x]),
            Arc::new(|z| z),
            Arc::new(|z, a| a[0] * z),
            Arc::new(|z, _| vec![z]),
            None,
            1,
            100,
        );
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
