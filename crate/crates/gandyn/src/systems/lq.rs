//! Linear-quadratic Gaussian systems: quadratic discriminator
//! `D(x) = xᵀW₂x + w₁ᵀx`, linear generator `G(z) = Az + b`, latent
//! z ~ N(0, I), data x ~ N(μ, Σ).
//!
//! Parameter layout is (vec W₂, w₁; vec A, b) with column-stacking.

use super::{ExpectationMode, GanSystem, JacobianBundle, ParamPoint};
use crate::error::{Error, Result};
use crate::losses::{wgan_loss, LossFn};
use crate::numkit::{
    commutation_matrix, gauss_hermite, gaussian_fourth_moment_matrix, kron, matrix_sqrt_spd,
    unvec, vec_mat, CounterRng, Mat, QuadRule,
};
use std::sync::Arc;

fn lq_param_names(n: usize) -> (Vec<String>, Vec<String>) {
    if n == 1 {
        return (
            vec!["w2".into(), "w1".into()],
            vec!["a".into(), "b".into()],
        );
    }
    let mut d = Vec::new();
    let mut g = Vec::new();
    for j in 0..n {
        for i in 0..n {
            d.push(format!("w2_{i}{j}"));
        }
    }
    for i in 0..n {
        d.push(format!("w1_{i}"));
    }
    for j in 0..n {
        for i in 0..n {
            g.push(format!("a_{i}{j}"));
        }
    }
    for i in 0..n {
        g.push(format!("b_{i}"));
    }
    (d, g)
}

/// K_DG for the LQ family in the positive storage convention:
/// `[[(I+T_{n,n})(Σ^{1/2}⊗I), μ⊗I + I⊗μ], [0, I]]`.
fn lq_kdg(sigma_half: &Mat, mu: &[f64]) -> Mat {
    let n = sigma_half.rows;
    let eye_n = Mat::identity(n);
    let t = commutation_matrix(n);
    let a_block = Mat::identity(n * n)
        .add(&t)
        .matmul(&kron(sigma_half, &eye_n));
    let mu_col = Mat::col(mu);
    let b_block = kron(&mu_col, &eye_n).add(&kron(&eye_n, &mu_col));
    Mat::from_blocks(
        &a_block,
        &b_block,
        &Mat::zeros(n, n * n),
        &eye_n,
    )
}

// ---------------------------------------------------------------------------
// scalar WGAN LQ: the printed 4-parameter orbit system
// ---------------------------------------------------------------------------

/// The scalar WGAN LQ system for N(0, σ²):
/// ẇ₂ = σ² − a² − b², ẇ₁ = −b, ȧ = 2w₂a, ḃ = 2w₂b + w₁.
pub struct ScalarWganLq {
    sigma: f64,
    loss: LossFn,
}

pub fn scalar_wgan_lq(sigma: f64) -> Result<Arc<ScalarWganLq>> {
    if !(sigma > 0.0) {
        return Err(Error::precondition("scalar_wgan_lq: sigma must be > 0"));
    }
    Ok(Arc::new(ScalarWganLq {
        sigma,
        loss: wgan_loss(),
    }))
}

impl GanSystem for ScalarWganLq {
    fn name(&self) -> &str {
        "scalar_wgan_lq"
    }

    fn n_d(&self) -> usize {
        2
    }

    fn n_g(&self) -> usize {
        2
    }

    fn loss(&self) -> &LossFn {
        &self.loss
    }

    fn field(&self, p: &ParamPoint) -> Result<ParamPoint> {
        self.check_point(p)?;
        let (w2, w1) = (p.theta_d[0], p.theta_d[1]);
        let (a, b) = (p.theta_g[0], p.theta_g[1]);
        Ok(ParamPoint::new(
            vec![self.sigma * self.sigma - a * a - b * b, -b],
            vec![2.0 * w2 * a, 2.0 * w2 * b + w1],
        ))
    }

    fn equilibrium(&self) -> ParamPoint {
        ParamPoint::new(vec![0.0, 0.0], vec![self.sigma, 0.0])
    }

    fn equilibria(&self) -> Vec<ParamPoint> {
        vec![
            self.equilibrium(),
            ParamPoint::new(vec![0.0, 0.0], vec![-self.sigma, 0.0]),
        ]
    }

    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        let s2 = self.sigma * self.sigma;
        Some(JacobianBundle {
            k_dd: Mat::diag(&[3.0 * s2 * s2, s2]),
            k_dg: Mat::from_rows(&[vec![2.0 * self.sigma, 0.0], vec![0.0, 1.0]]),
            f1: 1.0,
            f2: 0.0,
        })
    }

    fn expectation_mode(&self) -> ExpectationMode {
        ExpectationMode::ClosedForm
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        lq_param_names(1)
    }

    fn disc_field_jacobian_wrt_gen(&self, p: &ParamPoint) -> Option<Mat> {
        let (a, b) = (p.theta_g[0], p.theta_g[1]);
        Some(Mat::from_rows(&[vec![-2.0 * a, -2.0 * b], vec![0.0, -1.0]]))
    }
}

// ---------------------------------------------------------------------------
// n-dimensional WGAN LQ (closed form)
// ---------------------------------------------------------------------------

/// The n-dimensional WGAN LQ system for N(μ, Σ) with closed-form field:
/// Ẇ₂ = (Σ+μμᵀ) − (AAᵀ+bbᵀ), ẇ₁ = μ − b, Ȧ = (W₂+W₂ᵀ)A,
/// ḃ = (W₂+W₂ᵀ)b + w₁.
pub struct WganLqNd {
    n: usize,
    sigma: Mat,
    sigma_half: Mat,
    mu: Vec<f64>,
    second_moment: Mat, // Σ + μμᵀ
    loss: LossFn,
}

pub fn wgan_lq_nd(sigma: &Mat, mu: &[f64]) -> Result<Arc<WganLqNd>> {
    let sigma_half = matrix_sqrt_spd(sigma)?;
    let n = sigma.rows;
    if mu.len() != n {
        return Err(Error::dim("wgan_lq_nd: mu length mismatch"));
    }
    let mu_col = Mat::col(mu);
    let second_moment = sigma.add(&mu_col.matmul(&mu_col.transpose()));
    Ok(Arc::new(WganLqNd {
        n,
        sigma: sigma.clone(),
        sigma_half,
        mu: mu.to_vec(),
        second_moment,
        loss: wgan_loss(),
    }))
}

impl WganLqNd {
    fn split(&self, p: &ParamPoint) -> (Mat, Vec<f64>, Mat, Vec<f64>) {
        let n = self.n;
        let w2 = unvec(&p.theta_d[..n * n], n, n);
        let w1 = p.theta_d[n * n..].to_vec();
        let a = unvec(&p.theta_g[..n * n], n, n);
        let b = p.theta_g[n * n..].to_vec();
        (w2, w1, a, b)
    }

    pub fn sigma(&self) -> &Mat {
        &self.sigma
    }
}

impl GanSystem for WganLqNd {
    fn name(&self) -> &str {
        "wgan_lq_nd"
    }

    fn n_d(&self) -> usize {
        self.n * self.n + self.n
    }

    fn n_g(&self) -> usize {
        self.n * self.n + self.n
    }

    fn loss(&self) -> &LossFn {
        &self.loss
    }

    fn field(&self, p: &ParamPoint) -> Result<ParamPoint> {
        self.check_point(p)?;
        let n = self.n;
        let (w2, w1, a, b) = self.split(p);
        let b_col = Mat::col(&b);
        let w2_sym = w2.add(&w2.transpose());
        let dw2 = self
            .second_moment
            .sub(&a.matmul(&a.transpose()))
            .sub(&b_col.matmul(&b_col.transpose()));
        let dw1: Vec<f64> = self.mu.iter().zip(&b).map(|(m, bi)| m - bi).collect();
        let da = w2_sym.matmul(&a);
        let db: Vec<f64> = w2_sym
            .matvec(&b)
            .iter()
            .zip(&w1)
            .map(|(x, y)| x + y)
            .collect();
        let mut theta_d = vec_mat(&dw2).entries;
        theta_d.extend(dw1);
        let mut theta_g = vec_mat(&da).entries;
        theta_g.extend(db);
        let _ = n;
        Ok(ParamPoint::new(theta_d, theta_g))
    }

    fn equilibrium(&self) -> ParamPoint {
        let n = self.n;
        let mut theta_g = vec_mat(&self.sigma_half).entries;
        theta_g.extend(self.mu.iter().copied());
        ParamPoint::new(vec![0.0; n * n + n], theta_g)
    }

    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        let k_dd = gaussian_fourth_moment_matrix(&self.mu, &self.sigma).ok()?;
        Some(JacobianBundle {
            k_dd,
            k_dg: lq_kdg(&self.sigma_half, &self.mu),
            f1: 1.0,
            f2: 0.0,
        })
    }

    fn expectation_mode(&self) -> ExpectationMode {
        ExpectationMode::ClosedForm
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        lq_param_names(self.n)
    }

    fn disc_field_jacobian_wrt_gen(&self, p: &ParamPoint) -> Option<Mat> {
        // vec(Ẇ₂) depends on (vec A, b) through −vec(AAᵀ + bbᵀ); ẇ₁ through −b
        let n = self.n;
        let (_, _, a, b) = self.split(p);
        let eye = Mat::identity(n);
        let t = commutation_matrix(n);
        let da = Mat::identity(n * n).add(&t).matmul(&kron(&a, &eye)).scale(-1.0);
        let b_col = Mat::col(&b);
        let db = kron(&b_col, &eye).add(&kron(&eye, &b_col)).scale(-1.0);
        let top = Mat::from_blocks(&da, &db, &Mat::zeros(n, n * n), &eye.scale(-1.0));
        Some(top)
    }
}

// ---------------------------------------------------------------------------
// general-loss LQ GAN (quadrature for n = 1, monte-carlo for any n)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub enum LqMode {
    /// Gauss–Hermite quadrature; only available for n = 1.
    Quadrature { nodes: usize },
    /// Frozen-sample monte-carlo with common random numbers: the data
    /// stream reuses the latent stream through x = Σ^{1/2}z + μ, so at
    /// the realizable equilibrium the two sides cancel exactly.
    MonteCarlo { seed: u64, n_samples: usize },
}

pub struct GanLqNd {
    n: usize,
    sigma: Mat,
    sigma_half: Mat,
    mu: Vec<f64>,
    loss: LossFn,
    mode: LqMode,
    quad: Option<QuadRule>,
}

pub fn gan_lq_nd(sigma: &Mat, mu: &[f64], loss: LossFn, mode: LqMode) -> Result<Arc<GanLqNd>> {
    let sigma_half = matrix_sqrt_spd(sigma)?;
    let n = sigma.rows;
    if mu.len() != n {
        return Err(Error::dim("gan_lq_nd: mu length mismatch"));
    }
    let quad = match mode {
        LqMode::Quadrature { nodes } => {
            if n != 1 {
                return Err(Error::UnsupportedMode(
                    "gan_lq_nd: quadrature mode supports n = 1 only".into(),
                ));
            }
            Some(gauss_hermite(nodes)?)
        }
        LqMode::MonteCarlo { .. } => None,
    };
    Ok(Arc::new(GanLqNd {
        n,
        sigma: sigma.clone(),
        sigma_half,
        mu: mu.to_vec(),
        loss,
        mode,
        quad,
    }))
}

impl GanLqNd {
    pub fn mode(&self) -> LqMode {
        self.mode
    }

    pub fn n_samples(&self) -> usize {
        match self.mode {
            LqMode::MonteCarlo { n_samples, .. } => n_samples,
            _ => 0,
        }
    }

    fn split(&self, p: &ParamPoint) -> (Mat, Vec<f64>, Mat, Vec<f64>) {
        let n = self.n;
        (
            unvec(&p.theta_d[..n * n], n, n),
            p.theta_d[n * n..].to_vec(),
            unvec(&p.theta_g[..n * n], n, n),
            p.theta_g[n * n..].to_vec(),
        )
    }

    /// Accumulate the LQ field over one (x, z) pair into (d, g) slots.
    #[allow(clippy::too_many_arguments)]
    fn accumulate(
        &self,
        w2: &Mat,
        w1: &[f64],
        w2_sym: &Mat,
        x: &[f64],
        z: &[f64],
        gz: &[f64],
        d_acc: &mut [f64],
        g_acc: &mut [f64],
    ) {
        let n = self.n;
        let n2 = n * n;
        let dx = {
            let w2x = w2.matvec(x);
            crate::numkit::mat::dot(x, &w2x) + crate::numkit::mat::dot(w1, x)
        };
        let dg = {
            let w2g = w2.matvec(gz);
            crate::numkit::mat::dot(gz, &w2g) + crate::numkit::mat::dot(w1, gz)
        };
        let fp_x = self.loss.d1(dx);
        let fp_g = self.loss.d1(-dg);
        // vec(Ẇ₂) += vec(xxᵀ)f′(D(x)) − vec(GGᵀ)f′(−D(G))
        for q in 0..n {
            for p_i in 0..n {
                d_acc[q * n + p_i] += x[p_i] * x[q] * fp_x - gz[p_i] * gz[q] * fp_g;
            }
        }
        for i in 0..n {
            d_acc[n2 + i] += x[i] * fp_x - gz[i] * fp_g;
        }
        // generator ascent of f(−D(G)) folded to descent of V:
        // Ȧ += f′(−D(G))·(S·G + w₁) zᵀ, ḃ += f′(−D(G))·(S·G + w₁)
        let mut sg = w2_sym.matvec(gz);
        for i in 0..n {
            sg[i] += w1[i];
        }
        for q in 0..n {
            for p_i in 0..n {
                g_acc[q * n + p_i] += fp_g * sg[p_i] * z[q];
            }
        }
        for i in 0..n {
            g_acc[n2 + i] += fp_g * sg[i];
        }
    }

    /// Monte-carlo field averaged over the frozen sample range [lo, hi).
    /// The full field is the range [0, n_samples); equal sub-ranges give
    /// the batch means used for standard-error estimates.
    pub fn field_over_samples(&self, p: &ParamPoint, lo: usize, hi: usize) -> Result<ParamPoint> {
        let LqMode::MonteCarlo { seed, .. } = self.mode else {
            return Err(Error::UnsupportedMode(
                "field_over_samples requires monte-carlo mode".into(),
            ));
        };
        self.check_point(p)?;
        let n = self.n;
        let rng = CounterRng::new(seed);
        let (w2, w1, a, b) = self.split(p);
        let w2_sym = w2.add(&w2.transpose());
        let mut d_acc = vec![0.0; self.n_d()];
        let mut g_acc = vec![0.0; self.n_g()];
        let mut z = vec![0.0; n];
        for s in lo..hi {
            for (k, zk) in z.iter_mut().enumerate() {
                *zk = rng.gaussian((s * n + k) as u64);
            }
            // common random numbers: x is the equilibrium pushforward of z
            let x: Vec<f64> = self
                .sigma_half
                .matvec(&z)
                .iter()
                .zip(&self.mu)
                .map(|(v, m)| v + m)
                .collect();
            let mut gz = a.matvec(&z);
            for i in 0..n {
                gz[i] += b[i];
            }
            self.accumulate(&w2, &w1, &w2_sym, &x, &z, &gz, &mut d_acc, &mut g_acc);
        }
        let m = (hi - lo) as f64;
        d_acc.iter_mut().for_each(|v| *v /= m);
        g_acc.iter_mut().for_each(|v| *v /= m);
        Ok(ParamPoint::new(d_acc, g_acc))
    }

    /// Central-difference Jacobian of the monte-carlo field with a
    /// batch-means standard error: the sample range splits into equal
    /// batches, each batch yields an FD Jacobian, and the returned pair
    /// is (mean, per-entry SE). Batches run in parallel; the reduction
    /// preserves batch order, so results are identical at any thread
    /// count.
    pub fn fd_jacobian_batched(&self, point: &ParamPoint, batches: usize) -> Result<(Mat, Mat)> {
        use rayon::prelude::*;
        let LqMode::MonteCarlo { n_samples, .. } = self.mode else {
            return Err(Error::UnsupportedMode(
                "fd_jacobian_batched requires monte-carlo mode".into(),
            ));
        };
        let m = n_samples / batches;
        if m == 0 {
            return Err(Error::precondition("fd_jacobian_batched: too many batches"));
        }
        let dim = self.n_d() + self.n_g();
        let per_batch: Vec<Mat> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let lo = b * m;
                let field = |p: &ParamPoint| self.field_over_samples(p, lo, lo + m);
                crate::stability::numeric_jacobian(field, point, None)
            })
            .collect::<Result<_>>()?;
        let mut mean = Mat::zeros(dim, dim);
        for jb in &per_batch {
            mean = mean.add(jb);
        }
        mean = mean.scale(1.0 / batches as f64);
        let mut var = vec![0.0; dim * dim];
        for jb in &per_batch {
            for (v, (a, b)) in var.iter_mut().zip(jb.entries.iter().zip(&mean.entries)) {
                let d = a - b;
                *v += d * d;
            }
        }
        let se = Mat {
            rows: dim,
            cols: dim,
            entries: var
                .iter()
                .map(|v| (v / (batches as f64 - 1.0) / batches as f64).sqrt())
                .collect(),
        };
        Ok((mean, se))
    }

    fn field_quadrature(&self, p: &ParamPoint) -> Result<ParamPoint> {
        let quad = self.quad.as_ref().unwrap();
        let (w2m, w1v, am, bv) = self.split(p);
        let (w2, w1, a, b) = (w2m[(0, 0)], w1v[0], am[(0, 0)], bv[0]);
        let (mu, sig) = (self.mu[0], self.sigma[(0, 0)].sqrt());
        let f = &self.loss;
        let dw2 = quad.gaussian_expectation(|z| {
            let x = mu + sig * z;
            x * x * f.d1(w2 * x * x + w1 * x)
        }) - quad.gaussian_expectation(|z| {
            let g = a * z + b;
            g * g * f.d1(-(w2 * g * g + w1 * g))
        });
        let dw1 = quad.gaussian_expectation(|z| {
            let x = mu + sig * z;
            x * f.d1(w2 * x * x + w1 * x)
        }) - quad.gaussian_expectation(|z| {
            let g = a * z + b;
            g * f.d1(-(w2 * g * g + w1 * g))
        });
        let da = quad.gaussian_expectation(|z| {
            let g = a * z + b;
            f.d1(-(w2 * g * g + w1 * g)) * (2.0 * w2 * g + w1) * z
        });
        let db = quad.gaussian_expectation(|z| {
            let g = a * z + b;
            f.d1(-(w2 * g * g + w1 * g)) * (2.0 * w2 * g + w1)
        });
        Ok(ParamPoint::new(vec![dw2, dw1], vec![da, db]))
    }
}

impl GanSystem for GanLqNd {
    fn name(&self) -> &str {
        "gan_lq_nd"
    }

    fn n_d(&self) -> usize {
        self.n * self.n + self.n
    }

    fn n_g(&self) -> usize {
        self.n * self.n + self.n
    }

    fn loss(&self) -> &LossFn {
        &self.loss
    }

    fn field(&self, p: &ParamPoint) -> Result<ParamPoint> {
        match self.mode {
            LqMode::Quadrature { .. } => self.field_quadrature(p),
            LqMode::MonteCarlo { n_samples, .. } => self.field_over_samples(p, 0, n_samples),
        }
    }

    fn equilibrium(&self) -> ParamPoint {
        let n = self.n;
        let mut theta_g = vec_mat(&self.sigma_half).entries;
        theta_g.extend(self.mu.iter().copied());
        ParamPoint::new(vec![0.0; n * n + n], theta_g)
    }

    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        let k_dd = gaussian_fourth_moment_matrix(&self.mu, &self.sigma).ok()?;
        Some(JacobianBundle {
            k_dd,
            k_dg: lq_kdg(&self.sigma_half, &self.mu),
            f1: self.loss.f1_at_0,
            f2: self.loss.f2_at_0,
        })
    }

    fn expectation_mode(&self) -> ExpectationMode {
        match self.mode {
            LqMode::Quadrature { nodes } => ExpectationMode::Quadrature { nodes },
            LqMode::MonteCarlo { seed, n_samples } => ExpectationMode::MonteCarlo { seed, n_samples },
        }
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        lq_param_names(self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::logistic_loss;
    use crate::numkit::mat::norm;

    #[test]
    fn scalar_field_matches_printed_ode() {
        let sys = scalar_wgan_lq(1.0).unwrap();
        let eq = sys.equilibrium();
        assert!(sys.field(&eq).unwrap().norm() <= 1e-15);
        // (w₂,w₁,a,b) = (0,0,0.9,0) → (0.19, 0, 0, 0)
        let f = sys
            .field(&ParamPoint::new(vec![0.0, 0.0], vec![0.9, 0.0]))
            .unwrap();
        assert!((f.theta_d[0] - 0.19).abs() < 1e-15);
        assert_eq!(f.theta_d[1], 0.0);
        assert_eq!(f.theta_g, vec![0.0, 0.0]);
    }

    #[test]
    fn scalar_radius_rate_identity() {
        // d/dt[w₂² + (a−σ)²] == 2w₂(a−σ)² along the field with w₁ = b = 0
        let sigma = 1.3;
        let sys = scalar_wgan_lq(sigma).unwrap();
        for (w2, a) in [(0.2, 0.7), (-0.4, 1.5), (0.05, 1.01)] {
            let f = sys
                .field(&ParamPoint::new(vec![w2, 0.0], vec![a, 0.0]))
                .unwrap();
            let rate = 2.0 * w2 * f.theta_d[0] + 2.0 * (a - sigma) * f.theta_g[0];
            let want = 2.0 * w2 * (a - sigma) * (a - sigma);
            assert!((rate - want).abs() < 1e-12, "w2={w2} a={a}");
        }
    }

    #[test]
    fn nd_reduces_to_scalar_at_n1() {
        let scalar = scalar_wgan_lq(0.8).unwrap();
        let sigma = Mat::diag(&[0.64]);
        let nd = wgan_lq_nd(&sigma, &[0.0]).unwrap();
        let rng = CounterRng::new(5);
        for k in 0..50 {
            let p = ParamPoint::new(
                vec![rng.gaussian(4 * k), rng.gaussian(4 * k + 1)],
                vec![rng.gaussian(4 * k + 2), rng.gaussian(4 * k + 3)],
            );
            let fa = scalar.field(&p).unwrap();
            let fb = nd.field(&p).unwrap();
            assert!(fa.distance(&fb) < 1e-12);
        }
    }

    #[test]
    fn nd_equilibrium_and_blocks() {
        let sigma = Mat::from_rows(&[vec![1.0, 0.3], vec![0.3, 2.0]]);
        let mu = [0.5, -0.2];
        let sys = wgan_lq_nd(&sigma, &mu).unwrap();
        assert!(sys.field(&sys.equilibrium()).unwrap().norm() <= 1e-9);
        let b = sys.analytic_blocks().unwrap();
        assert_eq!(b.k_dd.rows, 6);
        assert_eq!(b.k_dg.rows, 6);
        assert_eq!(b.k_dg.cols, 6);
    }

    #[test]
    fn gan_lq_quadrature_blocks_n1_standard() {
        // n=1, σ=1, μ=0: K_DD = [[3,0],[0,1]], K_DG = [[2,0],[0,1]]
        let sys = gan_lq_nd(
            &Mat::identity(1),
            &[0.0],
            logistic_loss(),
            LqMode::Quadrature { nodes: 64 },
        )
        .unwrap();
        let b = sys.analytic_blocks().unwrap();
        assert!(b.k_dd.sub(&Mat::diag(&[3.0, 1.0])).frobenius() < 1e-12);
        assert!(b.k_dg.sub(&Mat::diag(&[2.0, 1.0])).frobenius() < 1e-12);
        assert!(sys.field(&sys.equilibrium()).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn gan_lq_quadrature_rejects_nd() {
        let err = gan_lq_nd(
            &Mat::identity(2),
            &[0.0, 0.0],
            logistic_loss(),
            LqMode::Quadrature { nodes: 64 },
        );
        assert!(matches!(err, Err(Error::UnsupportedMode(_))));
    }

    #[test]
    fn gan_lq_mc_equilibrium_exact_by_common_random_numbers() {
        let sigma = Mat::from_rows(&[vec![1.2, 0.2], vec![0.2, 0.9]]);
        let sys = gan_lq_nd(
            &sigma,
            &[0.4, -0.1],
            logistic_loss(),
            LqMode::MonteCarlo {
                seed: 11,
                n_samples: 2000,
            },
        )
        .unwrap();
        let f = sys.field(&sys.equilibrium()).unwrap();
        assert!(norm(&f.concat()) <= 1e-12);
    }

    #[test]
    fn gan_lq_mc_matches_quadrature_n1() {
        let loss = logistic_loss();
        let q = gan_lq_nd(
            &Mat::identity(1),
            &[0.3],
            loss.clone(),
            LqMode::Quadrature { nodes: 64 },
        )
        .unwrap();
        let mc = gan_lq_nd(
            &Mat::identity(1),
            &[0.3],
            loss,
            LqMode::MonteCarlo {
                seed: 3,
                n_samples: 400_000,
            },
        )
        .unwrap();
        let p = ParamPoint::new(vec![0.05, -0.1], vec![0.9, 0.35]);
        let fq = q.field(&p).unwrap();
        let fm = mc.field(&p).unwrap();
        assert!(fq.distance(&fm) < 5e-3, "distance {}", fq.distance(&fm));
    }

    #[test]
    fn scalar_analytic_cross_derivative_matches_fd() {
        let sys = scalar_wgan_lq(1.0).unwrap();
        let p = ParamPoint::new(vec![0.2, -0.3], vec![0.7, 0.4]);
        let analytic = sys.disc_field_jacobian_wrt_gen(&p).unwrap();
        let fd = super::super::fd_disc_jacobian_wrt_gen(sys.as_ref(), &p).unwrap();
        assert!(analytic.sub(&fd).frobenius() < 1e-8);
    }
}
