//! Discrete simultaneous-gradient stepping
//! θ_{k+1} = θ_k + α(h(θ_k) + ε_k), the update whose continuous limit
//! the rest of the crate analyzes. Optional zero-mean Gaussian noise
//! with a fixed seed demonstrates the stochastic-approximation form.

use super::trajectory::{MonitorSpec, Trajectory};
use crate::error::Result;
use crate::numkit::CounterRng;
use crate::systems::{GanSystem, ParamPoint};

pub struct DiscreteCfg {
    pub alpha: f64,
    pub n_steps: usize,
    /// Standard deviation of the per-coordinate Gaussian perturbation
    /// ε_k; None for the deterministic update.
    pub noise: Option<(u64, f64)>,
    /// Early-stop guard: flag and stop when ‖state‖ exceeds this.
    pub divergence_norm: f64,
}

impl DiscreteCfg {
    pub fn new(alpha: f64, n_steps: usize) -> Self {
        assert!(alpha > 0.0);
        DiscreteCfg {
            alpha,
            n_steps,
            noise: None,
            divergence_norm: 1e6,
        }
    }
}

/// Run simultaneous-gradient iterates; records times t_k = k·α so the
/// trajectory is comparable with the ODE flow.
pub fn discrete_steps(
    sys: &dyn GanSystem,
    x0: &ParamPoint,
    cfg: &DiscreteCfg,
    monitors: &[MonitorSpec],
) -> Result<Trajectory> {
    let names = monitors.iter().map(|m| m.name().to_string()).collect();
    let mut traj = Trajectory::new(names);
    let mut state = x0.clone();
    let dim = sys.n_d() + sys.n_g();
    let rng = cfg.noise.map(|(seed, _)| CounterRng::new(seed));
    for k in 0..=cfg.n_steps {
        let f = sys.field(&state)?;
        let mvals: Vec<f64> = monitors.iter().map(|m| m.eval(&state, &f)).collect();
        traj.push(k as f64 * cfg.alpha, state.clone(), &mvals);
        if state.norm() > cfg.divergence_norm {
            traj.flags.push("diverged".into());
            break;
        }
        if k == cfg.n_steps {
            break;
        }
        let mut step = f.concat();
        if let (Some(r), Some((_, std))) = (rng.as_ref(), cfg.noise) {
            for (i, s) in step.iter_mut().enumerate() {
                *s += std * r.gaussian((k * dim + i) as u64);
            }
        }
        let next = crate::numkit::mat::add_scaled(&state.concat(), &step, cfg.alpha);
        state = ParamPoint::from_concat(sys.n_d(), sys.n_g(), &next);
    }
    Ok(traj)
}
