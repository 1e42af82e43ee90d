//! Self-contained dense linear algebra and probability kernels sized
//! for small systems (dimension ≤ ~200).

pub mod eig;
pub mod kron;
pub mod lyapunov;
pub mod mat;
pub mod moments;
pub mod quad;
pub mod rng;

pub use eig::{eig_general, eig_sym, Eigenvalue, Spectrum, SymEig};
pub use kron::{commutation_matrix, kron, unvec, vec_mat};
pub use lyapunov::{lyapunov_residual, solve_lyapunov};
pub use mat::Mat;
pub use moments::{
    gaussian_fourth_moment_matrix, matrix_sqrt_spd, null_space, symmetric_restriction_basis,
    NullSplit, NULL_TOL_DEFAULT,
};
pub use quad::{gauss_hermite, gauss_legendre, QuadRule, DEFAULT_NODES};
pub use rng::CounterRng;
