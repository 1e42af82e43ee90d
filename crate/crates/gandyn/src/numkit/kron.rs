//! Kronecker products and column-stacking vectorization.
//!
//! The convention throughout is column-major stacking, so the identity
//! `vec(A V Bᵀ) = (B ⊗ A) vec(V)` holds exactly; every Jacobian-block
//! formula in the crate is derived consistently with this choice.

use super::mat::Mat;

/// Kronecker product `a ⊗ b`, dims (a.rows·b.rows) × (a.cols·b.cols).
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == 0.0 {
                continue;
            }
            for p in 0..b.rows {
                for q in 0..b.cols {
                    out[(i * b.rows + p, j * b.cols + q)] = aij * b[(p, q)];
                }
            }
        }
    }
    out
}

/// Column-stacking vectorization: `vec(M)` as a column vector.
pub fn vec_mat(m: &Mat) -> Mat {
    let mut out = Mat::zeros(m.rows * m.cols, 1);
    for j in 0..m.cols {
        for i in 0..m.rows {
            out[(j * m.rows + i, 0)] = m[(i, j)];
        }
    }
    out
}

/// Inverse of [`vec_mat`]: reshape a length rows·cols column back into a matrix.
pub fn unvec(v: &[f64], rows: usize, cols: usize) -> Mat {
    assert_eq!(v.len(), rows * cols, "unvec length mismatch");
    Mat::from_fn(rows, cols, |i, j| v[j * rows + i])
}

/// The commutation matrix `T_{n,n}`: the n²×n² permutation with
/// `T · vec(V) = vec(Vᵀ)` for every n×n V.
pub fn commutation_matrix(n: usize) -> Mat {
    assert!(n >= 1);
    let mut t = Mat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            // vec(V) position of V[i][j] is j*n+i; vec(Vᵀ) position is i*n+j.
            t[(i * n + j, j * n + i)] = 1.0;
        }
    }
    t
}
