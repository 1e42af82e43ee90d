//! Equilibrium analysis: Jacobians, Hurwitz classification, projection
//! onto the complement of the equilibrium subspace, eigenvalue bounds,
//! Lyapunov certificates, and subspace-convergence verification.

pub mod bounds;
pub mod certificate;
pub mod jacobian;
pub mod multi_eq;
pub mod projection;
pub mod report;

pub use bounds::{
    check_skew_block_bounds, check_equilibrium_bounds, check_regularized_wgan_bounds, psd_extremes,
    BOUND_SLACK,
};
pub use certificate::{build_regularized_certificate, LyapunovCertificate};
pub use jacobian::{
    assemble_equilibrium_jacobian, assemble_regularized_jacobian, numeric_jacobian,
    to_bundle_orientation,
};
pub use multi_eq::{verify_multiple_equilibria_convergence, SubspaceConvergence};
pub use projection::{null_inclusion_defect, project_equilibrium_subspace, ProjectionSplit};
pub use report::{
    hurwitz_check, hurwitz_tol, report_from_spectrum, spectrum_pairs, BoundEntry,
    ProjectionReport, StabilityReport,
};
