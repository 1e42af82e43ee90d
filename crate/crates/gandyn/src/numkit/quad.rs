//! Gauss–Legendre and Gauss–Hermite rules by Golub–Welsch: nodes are
//! the eigenvalues of the Jacobi recurrence matrix, weights come from
//! the first eigenvector components.

use super::eig::eig_sym;
use super::mat::Mat;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

pub const DEFAULT_NODES: usize = 64;

fn golub_welsch(offdiag: &[f64], mu0: f64) -> Result<QuadRule> {
    let n = offdiag.len() + 1;
    let mut j = Mat::zeros(n, n);
    for (i, &b) in offdiag.iter().enumerate() {
        j[(i, i + 1)] = b;
        j[(i + 1, i)] = b;
    }
    let e = eig_sym(&j)?;
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let q0 = e.eigenvectors[(0, k)];
            (e.eigenvalues[k], mu0 * q0 * q0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(QuadRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// n-point Gauss–Legendre rule on [−1, 1] (weight 1, total mass 2).
pub fn gauss_legendre(n: usize) -> Result<QuadRule> {
    assert!(n >= 1);
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            (k * k / (4.0 * k * k - 1.0)).sqrt()
        })
        .collect();
    golub_welsch(&off, 2.0)
}

/// n-point Gauss–Hermite rule for weight e^{−t²} (total mass √π).
pub fn gauss_hermite(n: usize) -> Result<QuadRule> {
    assert!(n >= 1);
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&off, std::f64::consts::PI.sqrt())
}

impl QuadRule {
    /// ∫_{−1}^{1} g(x) dx for a Gauss–Legendre rule.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }

    /// E_{z~N(0,1)}[g(z)] for a Gauss–Hermite rule (change of variable
    /// z = √2·t, normalization 1/√π).
    pub fn gaussian_expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        let c = 1.0 / std::f64::consts::PI.sqrt();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| c * w * g(std::f64::consts::SQRT_2 * t))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_polynomial_exactness() {
        let q = gauss_legendre(64).unwrap();
        assert!((q.integrate(|_| 1.0) - 2.0).abs() < 1e-13);
        assert!((q.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-13);
        assert!((q.integrate(|x| x.powi(4)) - 2.0 / 5.0).abs() < 1e-13);
        assert!(q.integrate(|x| x.powi(7)).abs() < 1e-13);
    }

    #[test]
    fn legendre_smooth_integrand() {
        let q = gauss_legendre(32).unwrap();
        // ∫ exp(x) over [−1,1] = e − 1/e
        let want = std::f64::consts::E - 1.0 / std::f64::consts::E;
        assert!((q.integrate(f64::exp) - want).abs() < 1e-13);
    }

    #[test]
    fn hermite_gaussian_moments() {
        let q = gauss_hermite(64).unwrap();
        assert!((q.gaussian_expectation(|_| 1.0) - 1.0).abs() < 1e-13);
        assert!(q.gaussian_expectation(|z| z).abs() < 1e-13);
        assert!((q.gaussian_expectation(|z| z * z) - 1.0).abs() < 1e-12);
        assert!((q.gaussian_expectation(|z| z.powi(4)) - 3.0).abs() < 1e-11);
        assert!((q.gaussian_expectation(|z| z.powi(6)) - 15.0).abs() < 1e-10);
    }
}
