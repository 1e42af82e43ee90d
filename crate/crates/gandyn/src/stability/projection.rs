//! Projection of the equilibrium Jacobian onto the subspace orthogonal
//! to the local equilibrium manifold.
//!
//! T_D collects the non-null eigenvector rows of K_DD (of K_DG·K_DGᵀ on
//! the WGAN path, selected by f″(0) = 0) and T_G the non-null
//! eigenvector rows of K_DGᵀK_DG. The projected bundle keeps the block
//! structure with K′_DD = T_D K_DD T_Dᵀ and K′_DG = T_D K_DG T_Gᵀ. When
//! either basis is empty, every nearby point is an equilibrium and the
//! verdict is trivially stable.

use crate::error::Result;
use crate::numkit::{null_space, Mat, NULL_TOL_DEFAULT};
use crate::systems::JacobianBundle;

#[derive(Clone, Debug)]
pub struct ProjectionSplit {
    /// Rows: the retained discriminator directions.
    pub t_d: Mat,
    /// Rows: the retained generator directions.
    pub t_g: Mat,
    pub projected: JacobianBundle,
    pub trivially_stable: bool,
    pub wgan_path: bool,
}

pub fn project_equilibrium_subspace(
    bundle: &JacobianBundle,
    tol: Option<f64>,
) -> Result<ProjectionSplit> {
    let tol = tol.unwrap_or(NULL_TOL_DEFAULT);
    let wgan_path = bundle.f2 == 0.0;
    let d_gram = if wgan_path {
        bundle.k_dg.matmul(&bundle.k_dg.transpose())
    } else {
        bundle.k_dd.clone()
    };
    let g_gram = bundle.k_dg.transpose().matmul(&bundle.k_dg);
    let t_d = null_space(&d_gram, tol)?.range;
    let t_g = null_space(&g_gram, tol)?.range;
    let trivially_stable = t_d.rows == 0 || t_g.rows == 0;
    let projected = JacobianBundle {
        k_dd: t_d.matmul(&bundle.k_dd).matmul(&t_d.transpose()),
        k_dg: t_d.matmul(&bundle.k_dg).matmul(&t_g.transpose()),
        f1: bundle.f1,
        f2: bundle.f2,
    };
    Ok(ProjectionSplit {
        t_d,
        t_g,
        projected,
        trivially_stable,
        wgan_path,
    })
}

/// Numerical check of the null-space inclusion the projection relies
/// on: every u with K_DD·u = 0 also satisfies uᵀK_DG = 0. Returns the
/// worst ‖uᵀK_DG‖ over the null basis.
pub fn null_inclusion_defect(bundle: &JacobianBundle, tol: Option<f64>) -> Result<f64> {
    let tol = tol.unwrap_or(NULL_TOL_DEFAULT);
    let null = null_space(&bundle.k_dd, tol)?.null;
    let mut worst: f64 = 0.0;
    for r in 0..null.rows {
        let u: Vec<f64> = (0..null.cols).map(|c| null[(r, c)]).collect();
        let v = bundle.k_dg.transpose().matvec(&u);
        worst = worst.max(crate::numkit::mat::norm(&v));
    }
    Ok(worst)
}
