//! Quadratic Lyapunov certificates for the regularized system: in the
//! projected coordinates, P = diag(I + 2ηJ′_DD, I) and
//! Q = −(J′ᵀP + PJ′) comes out block diagonal; Q ≻ 0 certifies
//! exponential stability whenever η < 1/(2λmax(−J_DD)).

use super::jacobian::assemble_regularized_jacobian;
use super::projection::ProjectionSplit;
use crate::error::{Error, Result};
use crate::numkit::{eig_sym, lyapunov_residual, Mat};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovCertificate {
    pub p: Mat,
    pub q: Mat,
    /// ‖J′ᵀP + PJ′ + Q‖_F (≈ 0 by construction; recomputed as a check).
    pub residual: f64,
    pub p_min_eigenvalue: f64,
    pub q_min_eigenvalue: f64,
    /// Strict positivity of Q; false at η = 0, where Q is only PSD and
    /// the generator block cancels (the invariance-principle regime).
    pub q_positive_definite: bool,
    pub eta: f64,
    pub eta_threshold: f64,
    /// Radius within which the nonlinear xᵀPx monitor was observed
    /// monotone, when probed.
    pub neighborhood_radius: Option<f64>,
}

/// Build the certificate for a projected (full-rank) bundle.
pub fn build_regularized_certificate(
    split: &ProjectionSplit,
    eta: f64,
) -> Result<LyapunovCertificate> {
    let bundle = &split.projected;
    let j_dd = bundle.j_dd();
    // λmax(−J_DD) from the symmetric eigenvalues of J_DD
    let e = eig_sym(&j_dd)?;
    let lam_max_neg = -e.eigenvalues.last().copied().unwrap_or(0.0);
    let threshold = if lam_max_neg > 0.0 {
        1.0 / (2.0 * lam_max_neg)
    } else {
        f64::INFINITY
    };
    if eta >= threshold {
        return Err(Error::Precondition(format!(
            "regularized certificate requires eta < 1/(2 lambda_max(-J_DD)) = {threshold}; got {eta}"
        )));
    }
    if eta < 0.0 {
        return Err(Error::precondition("certificate: eta must be >= 0"));
    }
    let kd = bundle.n_d();
    let kg = bundle.n_g();
    let p = Mat::from_blocks(
        &Mat::identity(kd).add(&j_dd.scale(2.0 * eta)),
        &Mat::zeros(kd, kg),
        &Mat::zeros(kg, kd),
        &Mat::identity(kg),
    );
    let j = assemble_regularized_jacobian(bundle, eta)?;
    let q = j
        .transpose()
        .matmul(&p)
        .add(&p.matmul(&j))
        .scale(-1.0)
        .symmetrize();
    let residual = lyapunov_residual(&j, &p, &q.scale(-1.0).scale(-1.0));
    let p_min = *eig_sym(&p)?.eigenvalues.last().unwrap();
    let q_eigs = eig_sym(&q)?;
    let q_min = *q_eigs.eigenvalues.last().unwrap();
    let q_scale = q_eigs.eigenvalues[0].max(1e-300);
    Ok(LyapunovCertificate {
        p,
        q,
        residual,
        p_min_eigenvalue: p_min,
        q_min_eigenvalue: q_min,
        q_positive_definite: q_min > 1e-12 * q_scale,
        eta,
        eta_threshold: threshold,
        neighborhood_radius: None,
    })
}
