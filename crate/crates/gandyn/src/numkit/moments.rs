//! Gaussian moment kernels: closed-form Isserlis (Wick) moments up to
//! order four, the block moment matrix used by the linear-quadratic
//! Jacobians, null spaces of PSD matrices, and the SPD square root.

use super::eig::eig_sym;
use super::mat::Mat;
use crate::error::{Error, Result};

/// E[xᵢxⱼ] for x ~ N(μ, Σ).
#[inline]
fn m2(mu: &[f64], sigma: &Mat, i: usize, j: usize) -> f64 {
    sigma[(i, j)] + mu[i] * mu[j]
}

/// E[xᵢxⱼxₖ] for x ~ N(μ, Σ), by the mean-shifted Isserlis expansion.
#[inline]
fn m3(mu: &[f64], sigma: &Mat, i: usize, j: usize, k: usize) -> f64 {
    mu[i] * mu[j] * mu[k]
        + mu[i] * sigma[(j, k)]
        + mu[j] * sigma[(i, k)]
        + mu[k] * sigma[(i, j)]
}

/// E[xᵢxⱼxₖxₗ] for x ~ N(μ, Σ): pair partitions plus mean terms.
#[inline]
fn m4(mu: &[f64], sigma: &Mat, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let pure_pairs =
        sigma[(i, j)] * sigma[(k, l)] + sigma[(i, k)] * sigma[(j, l)] + sigma[(i, l)] * sigma[(j, k)];
    let mean_pairs = mu[i] * mu[j] * sigma[(k, l)]
        + mu[i] * mu[k] * sigma[(j, l)]
        + mu[i] * mu[l] * sigma[(j, k)]
        + mu[j] * mu[k] * sigma[(i, l)]
        + mu[j] * mu[l] * sigma[(i, k)]
        + mu[k] * mu[l] * sigma[(i, j)];
    mu[i] * mu[j] * mu[k] * mu[l] + mean_pairs + pure_pairs
}

fn check_spd(sigma: &Mat, what: &str) -> Result<()> {
    if !sigma.is_square() {
        return Err(Error::dim(format!("{what}: sigma must be square")));
    }
    if sigma.symmetry_defect() > 1e-10 * sigma.frobenius().max(1.0) {
        return Err(Error::precondition(format!("{what}: sigma not symmetric")));
    }
    let e = eig_sym(sigma)?;
    let scale = e.eigenvalues.first().copied().unwrap_or(0.0).max(1.0);
    if e.eigenvalues.iter().any(|&l| l <= 1e-12 * scale) {
        return Err(Error::precondition(format!(
            "{what}: sigma not positive definite (min eigenvalue {:.3e})",
            e.eigenvalues.last().copied().unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

/// The (n²+n)×(n²+n) block moment matrix
/// `[[E(x⊗x)(x⊗x)ᵀ, E(x⊗x)xᵀ], [·ᵀ, E x xᵀ]]` for x ~ N(μ, Σ),
/// assembled in closed form. With column-stacking, `(x⊗x)` carries
/// `xᵢxⱼ` at position j·n+i.
///
/// For n ≥ 2 the vec parametrization duplicates each off-diagonal
/// product, so the matrix has exactly n(n−1)/2 structural zero
/// eigenvalues (the antisymmetric directions, on which xᵀUx ≡ 0). It is
/// strictly positive definite on the complementary symmetric⊕linear
/// subspace; see [`symmetric_restriction_basis`].
pub fn gaussian_fourth_moment_matrix(mu: &[f64], sigma: &Mat) -> Result<Mat> {
    check_spd(sigma, "gaussian_fourth_moment_matrix")?;
    let n = sigma.rows;
    if mu.len() != n {
        return Err(Error::dim("gaussian_fourth_moment_matrix: mu length mismatch"));
    }
    let n2 = n * n;
    let mut out = Mat::zeros(n2 + n, n2 + n);
    // index (p, q) of x⊗x at position q*n + p carries x_p x_q
    let pair = |idx: usize| (idx % n, idx / n);
    for r in 0..n2 {
        let (i, j) = pair(r);
        for c in 0..n2 {
            let (k, l) = pair(c);
            out[(r, c)] = m4(mu, sigma, i, j, k, l);
        }
        for c in 0..n {
            let v = m3(mu, sigma, i, j, c);
            out[(r, n2 + c)] = v;
            out[(n2 + c, r)] = v;
        }
    }
    for r in 0..n {
        for c in 0..n {
            out[(n2 + r, n2 + c)] = m2(mu, sigma, r, c);
        }
    }
    Ok(out)
}

/// Orthonormal basis (as columns) of the subspace on which the block
/// moment matrix is strictly positive definite: symmetric directions of
/// the vec(·) block plus the full linear block. Dimension
/// n(n+1)/2 + n of n² + n.
pub fn symmetric_restriction_basis(n: usize) -> Mat {
    let n2 = n * n;
    let dim = n2 + n;
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i..n {
            let mut v = vec![0.0; dim];
            if i == j {
                v[j * n + i] = 1.0;
            } else {
                v[j * n + i] = inv_sqrt2;
                v[i * n + j] = inv_sqrt2;
            }
            cols.push(v);
        }
    }
    for i in 0..n {
        let mut v = vec![0.0; dim];
        v[n2 + i] = 1.0;
        cols.push(v);
    }
    Mat::from_fn(dim, cols.len(), |r, c| cols[c][r])
}

/// The unique SPD square root `Σ^{1/2}`, via the symmetric
/// eigendecomposition `U Λ^{1/2} Uᵀ`.
pub fn matrix_sqrt_spd(sigma: &Mat) -> Result<Mat> {
    check_spd(sigma, "matrix_sqrt_spd")?;
    let e = eig_sym(&sigma.symmetrize())?;
    let sq = Mat::diag(&e.eigenvalues.iter().map(|l| l.sqrt()).collect::<Vec<_>>());
    let u = &e.eigenvectors;
    Ok(u.matmul(&sq).matmul(&u.transpose()).symmetrize())
}

/// Orthonormal basis pair of a symmetric PSD matrix: `null` spans the
/// eigenvectors with eigenvalue below `tol·max(1, λ_max)` and `range`
/// spans the rest. Both are returned with basis vectors as **rows**.
pub struct NullSplit {
    pub null: Mat,
    pub range: Mat,
    pub eigenvalues: Vec<f64>,
}

pub const NULL_TOL_DEFAULT: f64 = 1e-9;

pub fn null_space(m: &Mat, tol: f64) -> Result<NullSplit> {
    let e = eig_sym(m)?;
    let lam_max = e.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let cut = tol * lam_max.max(1.0);
    let n = m.rows;
    let mut null_rows = Vec::new();
    let mut range_rows = Vec::new();
    for (k, &l) in e.eigenvalues.iter().enumerate() {
        let row = e.eigenvectors.column(k);
        if l < cut {
            null_rows.push(row);
        } else {
            range_rows.push(row);
        }
    }
    let to_mat = |rows: Vec<Vec<f64>>| {
        if rows.is_empty() {
            Mat::zeros(0, n)
        } else {
            Mat::from_rows(&rows)
        }
    };
    Ok(NullSplit {
        null: to_mat(null_rows),
        range: to_mat(range_rows),
        eigenvalues: e.eigenvalues,
    })
}
