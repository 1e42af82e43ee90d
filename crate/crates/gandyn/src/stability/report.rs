//! Hurwitz classification and the serializable stability report.

use crate::error::Result;
use crate::numkit::{eig_general, Mat, Spectrum};
use serde::Serialize;

/// One named eigenvalue-bound entry. `hard` distinguishes bounds the
/// theory asserts from recorded regression checks.
#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub bound_value: f64,
    pub satisfied: bool,
    pub hard: bool,
    /// Worst Re(λ) − bound margin over the eigenvalues the bound covers
    /// (negative or ~0 when satisfied); NaN when no eigenvalue is covered.
    pub worst_margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionReport {
    pub t_d: Mat,
    pub t_g: Mat,
    pub projected_spectrum: Vec<(f64, f64)>,
    pub projected_hurwitz: bool,
    pub trivially_stable: bool,
    pub wgan_path: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub spectrum: Vec<(f64, f64)>,
    pub hurwitz: bool,
    pub spectral_abscissa: f64,
    pub zero_count: usize,
    pub bounds: Vec<BoundEntry>,
    pub projection: Option<ProjectionReport>,
}

pub fn spectrum_pairs(s: &Spectrum) -> Vec<(f64, f64)> {
    s.eigenvalues.iter().map(|e| (e.re, e.im)).collect()
}

/// Default zero/Hurwitz tolerance: 1e-8·max(1, ‖J‖_F).
pub fn hurwitz_tol(j: &Mat) -> f64 {
    1e-8 * j.frobenius().max(1.0)
}

/// Classify a matrix: Hurwitz iff every eigenvalue satisfies
/// Re(λ) < −tol and no eigenvalue has |λ| < tol. Eigenvalues inside the
/// tol-disc count as zeros (center/degenerate, never "stable").
pub fn hurwitz_check(j: &Mat, tol: Option<f64>) -> Result<StabilityReport> {
    let tol = tol.unwrap_or_else(|| hurwitz_tol(j));
    let spectrum = eig_general(j)?;
    Ok(report_from_spectrum(&spectrum, tol))
}

pub fn report_from_spectrum(spectrum: &Spectrum, tol: f64) -> StabilityReport {
    let abscissa = spectrum.spectral_abscissa();
    let zero_count = spectrum
        .eigenvalues
        .iter()
        .filter(|e| e.modulus() < tol)
        .count();
    StabilityReport {
        spectrum: spectrum_pairs(spectrum),
        hurwitz: abscissa < -tol && zero_count == 0,
        spectral_abscissa: abscissa,
        zero_count,
        bounds: Vec::new(),
        projection: None,
    }
}
