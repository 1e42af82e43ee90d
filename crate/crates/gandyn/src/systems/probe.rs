//! Generator-concavity probe for polynomial discriminator/generator
//! pairs over a standard-normal latent: evaluates the second derivative
//! ∂²V/∂a_j² at a given coefficient point via its two-term expansion
//!
//!   −E_z[f′(−D(G)) · Σ_{i≥2} i(i−1)wᵢ G^{i−2} · z^{2j}]
//!   +E_z[f″(−D(G)) · (Σ_{i≥1} i wᵢ G^{i−1} · z^j)²]
//!
//! with D(x) = Σᵢ wᵢ xⁱ and G(z) = Σⱼ aⱼ zʲ.

use crate::error::{Error, Result};
use crate::losses::LossFn;
use crate::numkit::{gauss_hermite, CounterRng};

#[derive(Clone, Copy, Debug)]
pub enum ProbeMode {
    GaussHermite { nodes: usize },
    MonteCarlo { seed: u64, n_samples: usize },
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn concavity_probe(
    loss: &LossFn,
    w: &[f64],
    a: &[f64],
    j: usize,
    mode: ProbeMode,
) -> Result<f64> {
    if j >= a.len() {
        return Err(Error::dim("concavity_probe: j out of generator range"));
    }
    let integrand = |z: f64| -> f64 {
        let g = poly_eval(a, z);
        let d_of_g = poly_eval(w, g);
        // Σ_{i≥1} i wᵢ G^{i−1} and Σ_{i≥2} i(i−1) wᵢ G^{i−2}
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (i, &wi) in w.iter().enumerate().skip(1) {
            d1 += (i as f64) * wi * g.powi(i as i32 - 1);
            if i >= 2 {
                d2 += (i as f64) * (i as f64 - 1.0) * wi * g.powi(i as i32 - 2);
            }
        }
        let zj = z.powi(j as i32);
        let z2j = zj * zj;
        -loss.d1(-d_of_g) * d2 * z2j + loss.d2(-d_of_g) * (d1 * zj) * (d1 * zj)
    };
    match mode {
        ProbeMode::GaussHermite { nodes } => {
            Ok(gauss_hermite(nodes)?.gaussian_expectation(integrand))
        }
        ProbeMode::MonteCarlo { seed, n_samples } => {
            let rng = CounterRng::new(seed);
            let sum: f64 = (0..n_samples).map(|s| integrand(rng.gaussian(s as u64))).sum();
            Ok(sum / n_samples as f64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::{logistic_loss, wgan_loss};

    const GH: ProbeMode = ProbeMode::GaussHermite { nodes: 64 };

    #[test]
    fn logistic_linear_discriminator_is_concave_off_j1() {
        let loss = logistic_loss();
        let a = [0.1, 0.7, 0.2];
        for w1 in [0.1, 0.01] {
            let w = [0.0, w1];
            for j in [0usize, 2] {
                let v = concavity_probe(&loss, &w, &a, j, GH).unwrap();
                assert!(v < 0.0, "w1={w1} j={j}: {v}");
            }
        }
    }

    #[test]
    fn wgan_quadratic_discriminator_is_concave() {
        let loss = wgan_loss();
        let w = [0.0, 0.0, 0.5]; // w₂ > 0 only
        let a = [0.0, 1.0, 0.3];
        for j in 0..=2 {
            let v = concavity_probe(&loss, &w, &a, j, GH).unwrap();
            assert!(v < 0.0, "j={j}: {v}");
        }
    }

    #[test]
    fn zero_discriminator_gives_zero() {
        let loss = logistic_loss();
        let v = concavity_probe(&loss, &[0.0, 0.0, 0.0], &[0.0, 1.0], 1, GH).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn monte_carlo_agrees_with_quadrature() {
        let loss = logistic_loss();
        let w = [0.0, 0.2, 0.1];
        let a = [0.1, 0.8];
        let q = concavity_probe(&loss, &w, &a, 1, GH).unwrap();
        let m = concavity_probe(
            &loss,
            &w,
            &a,
            1,
            ProbeMode::MonteCarlo {
                seed: 9,
                n_samples: 400_000,
            },
        )
        .unwrap();
        assert!((q - m).abs() < 5e-3, "q={q} m={m}");
    }
}
