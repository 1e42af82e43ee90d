//! Continuous Lyapunov equation `JᵀP + PJ = −Q` via the Kronecker
//! linear system `(I⊗Jᵀ + Jᵀ⊗I)·vec(P) = −vec(Q)`.
//!
//! The dense n⁴ formulation is deliberate: the crate only solves
//! equations with n ≤ ~40.

use super::kron::{kron, unvec, vec_mat};
use super::mat::Mat;
use crate::error::{Error, Result};

pub fn solve_lyapunov(j: &Mat, q: &Mat) -> Result<Mat> {
    if !j.is_square() || !q.is_square() || j.rows != q.rows {
        return Err(Error::dim("solve_lyapunov: J and Q must be square, same size"));
    }
    let n = j.rows;
    let jt = j.transpose();
    let lhs = kron(&Mat::identity(n), &jt).add(&kron(&jt, &Mat::identity(n)));
    let rhs = vec_mat(q).scale(-1.0);
    let p_vec = lhs.solve_mat(&rhs).map_err(|_| {
        Error::Singular(
            "Lyapunov Kronecker system singular (J not Hurwitz or has mirrored eigenvalues)"
                .into(),
        )
    })?;
    // symmetrize to kill roundoff asymmetry; P is symmetric in exact arithmetic
    Ok(unvec(&p_vec.entries, n, n).symmetrize())
}

/// ‖JᵀP + PJ + Q‖_F, the defect of a candidate solution.
pub fn lyapunov_residual(j: &Mat, p: &Mat, q: &Mat) -> f64 {
    j.transpose()
        .matmul(p)
        .add(&p.matmul(j))
        .add(q)
        .frobenius()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::eig::eig_sym;

    #[test]
    fn neg_identity_case() {
        // J = −I, Q = 2I ⇒ −2P = −2I ⇒ P = I
        let j = Mat::identity(3).scale(-1.0);
        let q = Mat::identity(3).scale(2.0);
        let p = solve_lyapunov(&j, &q).unwrap();
        assert!(p.sub(&Mat::identity(3)).frobenius() < 1e-12);
    }

    #[test]
    fn hurwitz_2x2_residual_and_pd() {
        let j = Mat::from_rows(&[vec![-1.0, 1.0], vec![-1.0, 0.0]]);
        let q = Mat::identity(2);
        let p = solve_lyapunov(&j, &q).unwrap();
        assert!(lyapunov_residual(&j, &p, &q) <= 1e-8 * q.frobenius());
        assert!(p.symmetry_defect() <= 1e-10);
        let e = eig_sym(&p).unwrap();
        assert!(e.eigenvalues.iter().all(|&l| l > 0.0), "P must be PD");
    }

    #[test]
    fn linearity_in_q() {
        let j = Mat::from_rows(&[vec![-2.0, 0.5], vec![0.0, -1.0]]);
        let q = Mat::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]);
        let p1 = solve_lyapunov(&j, &q).unwrap();
        let p2 = solve_lyapunov(&j, &q.scale(2.0)).unwrap();
        assert!(p2.sub(&p1.scale(2.0)).frobenius() < 1e-10);
    }

    #[test]
    fn mirrored_spectrum_is_singular() {
        // J with eigenvalues ±1 makes I⊗Jᵀ + Jᵀ⊗I singular
        let j = Mat::diag(&[1.0, -1.0]);
        assert!(solve_lyapunov(&j, &Mat::identity(2)).is_err());
    }
}
