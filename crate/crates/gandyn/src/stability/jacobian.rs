//! Numeric and analytic equilibrium Jacobians.
//!
//! Orientation convention: bundles store K_DG positively and assemble
//! to `[[2f″(0)K_DD, f′(0)K_DG], [−f′(0)K_DGᵀ, 0]]`. The raw
//! gradient-flow field carries the mirror-image off-diagonal signs
//! (its ∂θ̇_D/∂θ_G is −f′(0)K_DG); the two are conjugate under
//! S = diag(I_D, −I_G), so spectra, Hurwitz verdicts, bounds and
//! certificates agree. [`to_bundle_orientation`] maps a field-side
//! Jacobian into bundle orientation for entrywise comparisons.

use crate::error::{Error, Result};
use crate::numkit::mat::norm;
use crate::numkit::Mat;
use crate::systems::{JacobianBundle, ParamPoint};

/// Central-difference Jacobian of a field over the concatenated
/// coordinates; entrywise error O(h²). Default h = 1e-5·max(1, ‖point‖).
pub fn numeric_jacobian<F>(field: F, point: &ParamPoint, h: Option<f64>) -> Result<Mat>
where
    F: Fn(&ParamPoint) -> Result<ParamPoint>,
{
    let (n_d, n_g) = point.dims();
    let n = n_d + n_g;
    let x = point.concat();
    let h = h.unwrap_or(1e-5 * norm(&x).max(1.0));
    let mut j = Mat::zeros(n, n);
    for col in 0..n {
        let mut xp = x.clone();
        xp[col] += h;
        let mut xm = x.clone();
        xm[col] -= h;
        let fp = field(&ParamPoint::from_concat(n_d, n_g, &xp))?.concat();
        let fm = field(&ParamPoint::from_concat(n_d, n_g, &xm))?.concat();
        for row in 0..n {
            let v = (fp[row] - fm[row]) / (2.0 * h);
            if !v.is_finite() {
                return Err(Error::numeric(format!(
                    "numeric_jacobian: non-finite entry at row {row}, perturbed coordinate {col}"
                )));
            }
            j[(row, col)] = v;
        }
    }
    Ok(j)
}

/// Conjugate a field-side Jacobian by S = diag(I_{n_d}, −I): negates the
/// two off-diagonal blocks, leaving the spectrum unchanged.
pub fn to_bundle_orientation(j: &Mat, n_d: usize) -> Mat {
    Mat::from_fn(j.rows, j.cols, |r, c| {
        let sr = if r < n_d { 1.0 } else { -1.0 };
        let sc = if c < n_d { 1.0 } else { -1.0 };
        sr * sc * j[(r, c)]
    })
}

/// The equilibrium Jacobian `[[2f″(0)K_DD, f′(0)K_DG], [−f′(0)K_DGᵀ, 0]]`.
pub fn assemble_equilibrium_jacobian(bundle: &JacobianBundle) -> Mat {
    let j_dd = bundle.j_dd();
    let j_dg = bundle.j_dg();
    Mat::from_blocks(
        &j_dd,
        &j_dg,
        &j_dg.transpose().scale(-1.0),
        &Mat::zeros(bundle.n_g(), bundle.n_g()),
    )
}

/// The regularized equilibrium Jacobian
/// `[[J_DD, J_DG], [−J_DGᵀ(I + 2ηJ_DD), −2ηJ_DGᵀJ_DG]]`.
pub fn assemble_regularized_jacobian(bundle: &JacobianBundle, eta: f64) -> Result<Mat> {
    if eta < 0.0 {
        return Err(Error::precondition(
            "assemble_regularized_jacobian: eta must be >= 0",
        ));
    }
    let j_dd = bundle.j_dd();
    let j_dg = bundle.j_dg();
    let damp = Mat::identity(bundle.n_d()).add(&j_dd.scale(2.0 * eta));
    let lower_left = j_dg.transpose().matmul(&damp).scale(-1.0);
    let lower_right = j_dg.transpose().matmul(&j_dg).scale(-2.0 * eta);
    Ok(Mat::from_blocks(&j_dd, &j_dg, &lower_left, &lower_right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::{logistic_loss, wgan_loss};
    use crate::systems::{uniform_2d, GanSystem};

    #[test]
    fn linear_field_recovered() {
        let a = Mat::from_fn(4, 4, |i, j| ((3 * i + 5 * j) as f64 * 0.41).sin());
        let field = |p: &ParamPoint| -> Result<ParamPoint> {
            Ok(ParamPoint::from_concat(2, 2, &a.matvec(&p.concat())))
        };
        let p = ParamPoint::new(vec![0.3, -0.2], vec![0.1, 0.9]);
        let j = numeric_jacobian(field, &p, None).unwrap();
        assert!(j.sub(&a).frobenius() < 1e-9);
    }

    #[test]
    fn scalar_wgan_subsystem_jacobian() {
        // (w₂, a) slice of the scalar WGAN at (0, 1): [[0, −2], [2, 0]]
        let field = |p: &ParamPoint| -> Result<ParamPoint> {
            let (w2, a) = (p.theta_d[0], p.theta_g[0]);
            Ok(ParamPoint::new(vec![1.0 - a * a], vec![2.0 * w2 * a]))
        };
        let j = numeric_jacobian(field, &ParamPoint::new(vec![0.0], vec![1.0]), None).unwrap();
        let want = Mat::from_rows(&[vec![0.0, -2.0], vec![2.0, 0.0]]);
        assert!(j.sub(&want).frobenius() < 1e-9);
    }

    #[test]
    fn uniform2d_fd_matches_assembled_in_bundle_orientation() {
        let sys = uniform_2d(logistic_loss()).unwrap();
        let j_fd = numeric_jacobian(|p| sys.field(p), &sys.equilibrium(), None).unwrap();
        // raw field orientation: [[−0.1, −1/3], [1/3, 0]]
        assert!((j_fd[(0, 1)] + 1.0 / 3.0).abs() < 1e-7);
        assert!((j_fd[(1, 0)] - 1.0 / 3.0).abs() < 1e-7);
        let j_assembled = assemble_equilibrium_jacobian(&sys.analytic_blocks().unwrap());
        // bundle orientation: [[−0.1, 1/3], [−1/3, 0]]
        let want = Mat::from_rows(&[vec![-0.1, 1.0 / 3.0], vec![-1.0 / 3.0, 0.0]]);
        assert!(j_assembled.sub(&want).frobenius() < 1e-12);
        let mapped = to_bundle_orientation(&j_fd, 1);
        assert!(mapped.sub(&j_assembled).frobenius() < 1e-6);
    }

    #[test]
    fn non_finite_field_names_offending_coordinate() {
        let field = |p: &ParamPoint| -> Result<ParamPoint> {
            let x = p.theta_d[0];
            Ok(ParamPoint::new(
                vec![if x > 0.05 { f64::NAN } else { x }],
                vec![p.theta_g[0]],
            ))
        };
        let err =
            numeric_jacobian(field, &ParamPoint::new(vec![0.0], vec![0.0]), Some(0.1)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("coordinate 0"), "message: {msg}");
    }

    #[test]
    fn wgan_assembly_is_skew() {
        let sys = uniform_2d(wgan_loss()).unwrap();
        let j = assemble_equilibrium_jacobian(&sys.analytic_blocks().unwrap());
        assert!(j.add(&j.transpose()).frobenius() < 1e-14);
        assert!((j[(0, 1)] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn regularized_assembly_cases() {
        let sys = uniform_2d(wgan_loss()).unwrap();
        let b = sys.analytic_blocks().unwrap();
        // eta = 0 reduces to the plain assembly
        let j0 = assemble_regularized_jacobian(&b, 0.0).unwrap();
        assert!(j0.sub(&assemble_equilibrium_jacobian(&b)).frobenius() < 1e-15);
        // eta = 0.5 in bundle orientation: [[0, 2/3], [−2/3, −4/9]]
        let j = assemble_regularized_jacobian(&b, 0.5).unwrap();
        let want = Mat::from_rows(&[vec![0.0, 2.0 / 3.0], vec![-2.0 / 3.0, -4.0 / 9.0]]);
        assert!(j.sub(&want).frobenius() < 1e-14);
    }
}
