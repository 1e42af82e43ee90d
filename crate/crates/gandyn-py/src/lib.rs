//! Python bindings: the stock systems, field evaluation, integration,
//! stability classification, and the core matrix kernels.
//!
//! Build with `cargo build --release -p gandyn-py`, then rename
//! `libgandyn_py.so` to `gandyn_py.so` somewhere on `sys.path`
//! (python/smoke_test.py does this automatically).

use gandyn::dynamics::{integrate_system, regularize, unroll1, IntegratorCfg};
use gandyn::losses::loss_by_name;
use gandyn::numkit::{self, Mat};
use gandyn::stability::{
    assemble_equilibrium_jacobian, hurwitz_check, numeric_jacobian, to_bundle_orientation,
};
use gandyn::systems::{
    dirac_linear, gan_lq_nd, scalar_wgan_lq, uniform_2d, wgan_lq_nd, GanSystem, LqMode,
    ParamPoint, ProbeMode,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::sync::Arc;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mat_from_py(rows: Vec<Vec<f64>>) -> PyResult<Mat> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(PyValueError::new_err("ragged or empty matrix"));
    }
    Ok(Mat::from_rows(&rows))
}

fn mat_to_py(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.rows).map(|i| m.row(i).to_vec()).collect()
}

fn loss_of(name: &str) -> PyResult<gandyn::losses::LossFn> {
    loss_by_name(name).ok_or_else(|| PyValueError::new_err(format!("unknown loss '{name}'")))
}

/// A named two-player dynamical system.
#[pyclass]
struct System {
    inner: Arc<dyn GanSystem>,
}

#[pymethods]
impl System {
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn dims(&self) -> (usize, usize) {
        (self.inner.n_d(), self.inner.n_g())
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        self.inner.param_names()
    }

    /// The ODE right-hand side (θ̇_D, θ̇_G) at a point.
    #[allow(clippy::type_complexity)]
    fn field(&self, theta_d: Vec<f64>, theta_g: Vec<f64>) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let f = self
            .inner
            .field(&ParamPoint::new(theta_d, theta_g))
            .map_err(err)?;
        Ok((f.theta_d, f.theta_g))
    }

    fn equilibrium(&self) -> (Vec<f64>, Vec<f64>) {
        let eq = self.inner.equilibrium();
        (eq.theta_d, eq.theta_g)
    }

    /// Central-difference Jacobian of the field at the equilibrium.
    fn numeric_jacobian(&self) -> PyResult<Vec<Vec<f64>>> {
        let j = numeric_jacobian(|p| self.inner.field(p), &self.inner.equilibrium(), None)
            .map_err(err)?;
        Ok(mat_to_py(&j))
    }

    /// The analytic equilibrium Jacobian assembled from the system's
    /// moment blocks, when available.
    fn analytic_jacobian(&self) -> Option<Vec<Vec<f64>>> {
        self.inner
            .analytic_blocks()
            .map(|b| mat_to_py(&assemble_equilibrium_jacobian(&b)))
    }

    /// (eigenvalues as (re, im) pairs, hurwitz verdict, spectral abscissa).
    #[allow(clippy::type_complexity)]
    fn stability(&self) -> PyResult<(Vec<(f64, f64)>, bool, f64)> {
        let j = match self.inner.analytic_blocks() {
            Some(b) => assemble_equilibrium_jacobian(&b),
            None => {
                let fd = numeric_jacobian(|p| self.inner.field(p), &self.inner.equilibrium(), None)
                    .map_err(err)?;
                to_bundle_orientation(&fd, self.inner.n_d())
            }
        };
        let r = hurwitz_check(&j, None).map_err(err)?;
        Ok((r.spectrum, r.hurwitz, r.spectral_abscissa))
    }

    /// Adaptive integration; returns (times, states) with states as
    /// concatenated coordinate rows.
    #[pyo3(signature = (x0_d, x0_g, t_max, rtol=1e-10, atol=1e-12))]
    fn integrate(
        &self,
        x0_d: Vec<f64>,
        x0_g: Vec<f64>,
        t_max: f64,
        rtol: f64,
        atol: f64,
    ) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
        let cfg = IntegratorCfg::adaptive(rtol, atol, t_max);
        let run = integrate_system(
            self.inner.as_ref(),
            &ParamPoint::new(x0_d, x0_g),
            &cfg,
            &[],
            &[],
            &[],
        )
        .map_err(err)?;
        if run.is_failure() {
            return Err(PyValueError::new_err(format!(
                "integration failed: {:?}",
                run.outcome
            )));
        }
        let states = run.trajectory.states.iter().map(|s| s.concat()).collect();
        Ok((run.trajectory.times, states))
    }

    /// Gradient-norm regularized variant (generator update gains
    /// −η∇_G‖∇_D V‖²).
    fn regularize(&self, eta: f64) -> PyResult<System> {
        Ok(System {
            inner: regularize(self.inner.clone(), eta).map_err(err)?,
        })
    }

    /// 1-unrolled lookahead variant.
    fn unroll1(&self, eta: f64) -> PyResult<System> {
        Ok(System {
            inner: unroll1(self.inner.clone(), eta).map_err(err)?,
        })
    }
}

#[pyfunction]
fn make_uniform_2d(loss: &str) -> PyResult<System> {
    Ok(System {
        inner: uniform_2d(loss_of(loss)?).map_err(err)?,
    })
}

#[pyfunction]
fn make_scalar_wgan_lq(sigma: f64) -> PyResult<System> {
    Ok(System {
        inner: scalar_wgan_lq(sigma).map_err(err)?,
    })
}

#[pyfunction]
fn make_dirac_linear(loss: &str) -> PyResult<System> {
    Ok(System {
        inner: dirac_linear(loss_of(loss)?),
    })
}

#[pyfunction]
fn make_wgan_lq_nd(sigma: Vec<Vec<f64>>, mu: Vec<f64>) -> PyResult<System> {
    Ok(System {
        inner: wgan_lq_nd(&mat_from_py(sigma)?, &mu).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (sigma, mu, loss, mode="quadrature", seed=0, n_samples=100_000))]
fn make_gan_lq_nd(
    sigma: Vec<Vec<f64>>,
    mu: Vec<f64>,
    loss: &str,
    mode: &str,
    seed: u64,
    n_samples: usize,
) -> PyResult<System> {
    let lq_mode = match mode {
        "quadrature" => LqMode::Quadrature { nodes: 64 },
        "monte-carlo" => LqMode::MonteCarlo { seed, n_samples },
        other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
    };
    Ok(System {
        inner: gan_lq_nd(&mat_from_py(sigma)?, &mu, loss_of(loss)?, lq_mode).map_err(err)?,
    })
}

#[pyfunction]
fn eig_general(m: Vec<Vec<f64>>) -> PyResult<Vec<(f64, f64)>> {
    let s = numkit::eig_general(&mat_from_py(m)?).map_err(err)?;
    Ok(s.eigenvalues.iter().map(|e| (e.re, e.im)).collect())
}

#[pyfunction]
fn eig_sym(m: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let e = numkit::eig_sym(&mat_from_py(m)?).map_err(err)?;
    Ok((e.eigenvalues, mat_to_py(&e.eigenvectors)))
}

#[pyfunction]
fn kron(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    Ok(mat_to_py(&numkit::kron(&mat_from_py(a)?, &mat_from_py(b)?)))
}

#[pyfunction]
fn commutation_matrix(n: usize) -> Vec<Vec<f64>> {
    mat_to_py(&numkit::commutation_matrix(n))
}

#[pyfunction]
fn solve_lyapunov(j: Vec<Vec<f64>>, q: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    Ok(mat_to_py(
        &numkit::solve_lyapunov(&mat_from_py(j)?, &mat_from_py(q)?).map_err(err)?,
    ))
}

#[pyfunction]
fn gaussian_fourth_moment_matrix(mu: Vec<f64>, sigma: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    Ok(mat_to_py(
        &numkit::gaussian_fourth_moment_matrix(&mu, &mat_from_py(sigma)?).map_err(err)?,
    ))
}

#[pyfunction]
fn loss_eval(name: &str, x: f64) -> PyResult<(f64, f64, f64)> {
    let f = loss_of(name)?;
    Ok((f.eval(x), f.d1(x), f.d2(x)))
}

/// ∂²V/∂a_j² for polynomial discriminator/generator coefficient vectors
/// over a standard-normal latent (64-node Gauss–Hermite).
#[pyfunction]
fn concavity_probe(loss: &str, w: Vec<f64>, a: Vec<f64>, j: usize) -> PyResult<f64> {
    gandyn::systems::concavity_probe(
        &loss_of(loss)?,
        &w,
        &a,
        j,
        ProbeMode::GaussHermite { nodes: 64 },
    )
    .map_err(err)
}

#[pymodule]
fn gandyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<System>()?;
    m.add_function(wrap_pyfunction!(make_uniform_2d, m)?)?;
    m.add_function(wrap_pyfunction!(make_scalar_wgan_lq, m)?)?;
    m.add_function(wrap_pyfunction!(make_dirac_linear, m)?)?;
    m.add_function(wrap_pyfunction!(make_wgan_lq_nd, m)?)?;
    m.add_function(wrap_pyfunction!(make_gan_lq_nd, m)?)?;
    m.add_function(wrap_pyfunction!(eig_general, m)?)?;
    m.add_function(wrap_pyfunction!(eig_sym, m)?)?;
    m.add_function(wrap_pyfunction!(kron, m)?)?;
    m.add_function(wrap_pyfunction!(commutation_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lyapunov, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_fourth_moment_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(loss_eval, m)?)?;
    m.add_function(wrap_pyfunction!(concavity_probe, m)?)?;
    Ok(())
}
