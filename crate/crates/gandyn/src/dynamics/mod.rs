//! Numerical integration, discrete stepping, field transforms, event
//! detection and trajectory post-processing.
//!
//! Field evaluation is pure, so independent trajectories (grid sweeps)
//! can run in parallel with byte-identical results.

pub mod discrete;
pub mod integrate;
pub mod trajectory;
pub mod transform;

pub use discrete::{discrete_steps, DiscreteCfg};
pub use integrate::{integrate, Event, EventSpec, Integration, IntegratorCfg, Method, Outcome};
pub use trajectory::{fit_exponential_rate, fmt_f64, MonitorSpec, Trajectory};
pub use transform::{regularize, unroll1, Regularized, Unrolled};

use crate::error::Result;
use crate::systems::{GanSystem, ParamPoint};

/// Convenience wrapper: integrate a system's field.
pub fn integrate_system(
    sys: &dyn GanSystem,
    x0: &ParamPoint,
    cfg: &IntegratorCfg,
    events: &[EventSpec],
    monitors: &[MonitorSpec],
    sample_times: &[f64],
) -> Result<Integration> {
    integrate(|p| sys.field(p), x0, cfg, events, monitors, sample_times)
}

/// Post-hoc event scan over a recorded trajectory. Uses the recorded
/// samples directly (no dense refinement), which is adequate for the
/// windowed and monotonicity detectors it serves.
pub fn detect_events(traj: &Trajectory, specs: &[EventSpec]) -> Vec<Event> {
    let mut events = Vec::new();
    if traj.len() < 2 {
        return events;
    }
    let x0 = traj.states[0].concat();
    let dims = traj.states[0].dims();
    for spec in specs {
        match spec {
            EventSpec::Convergence {
                target,
                tol,
                window,
                ..
            } => {
                let mut counter = 0usize;
                for (i, s) in traj.states.iter().enumerate() {
                    if s.distance(target) < *tol {
                        counter += 1;
                    } else {
                        counter = 0;
                    }
                    if counter >= *window {
                        events.push(Event {
                            kind: "convergence".into(),
                            t: traj.times[i],
                            state: s.clone(),
                            value: s.distance(target),
                        });
                        break;
                    }
                }
            }
            EventSpec::SectionCrossing {
                coord,
                level,
                direction,
            } => {
                for i in 1..traj.len() {
                    let g0 = traj.states[i - 1].concat()[*coord] - level;
                    let g1 = traj.states[i].concat()[*coord] - level;
                    let crossing = match direction {
                        -1 => g0 > 0.0 && g1 <= 0.0,
                        1 => g0 < 0.0 && g1 >= 0.0,
                        _ => g0 * g1 < 0.0,
                    };
                    if crossing {
                        // linear interpolation of the crossing time
                        let frac = if g0 == g1 { 0.0 } else { g0 / (g0 - g1) };
                        let t = traj.times[i - 1] + frac * (traj.times[i] - traj.times[i - 1]);
                        events.push(Event {
                            kind: "section_crossing".into(),
                            t,
                            state: traj.states[i].clone(),
                            value: g1 + level,
                        });
                    }
                }
            }
            EventSpec::RadiusMonotonicityViolation {
                center,
                coords,
                guard_coord,
                guard_positive,
                slack,
            } => {
                let radius = |s: &ParamPoint| -> f64 {
                    let d = crate::numkit::mat::sub_vec(&s.concat(), &center.concat());
                    match coords {
                        Some(ix) => ix.iter().map(|&i| d[i] * d[i]).sum(),
                        None => d.iter().map(|x| x * x).sum(),
                    }
                };
                let guard = |s: &ParamPoint| -> bool {
                    match guard_coord {
                        Some(c) => {
                            let v = s.concat()[*c];
                            if *guard_positive {
                                v > 0.0
                            } else {
                                v < 0.0
                            }
                        }
                        None => true,
                    }
                };
                for i in 1..traj.len() {
                    if guard(&traj.states[i - 1]) && guard(&traj.states[i]) {
                        let dec = radius(&traj.states[i - 1]) - radius(&traj.states[i]);
                        if dec > *slack {
                            events.push(Event {
                                kind: "radius_monotonicity_violation".into(),
                                t: traj.times[i],
                                state: traj.states[i].clone(),
                                value: dec,
                            });
                        }
                    }
                }
            }
            EventSpec::ReturnToStart { tol, t_min, .. } => {
                // distance from x0 to the chord between consecutive rows,
                // so a close pass between samples still registers
                for i in 1..traj.len() {
                    if traj.times[i] <= *t_min {
                        continue;
                    }
                    let a = traj.states[i - 1].concat();
                    let b = traj.states[i].concat();
                    let ab = crate::numkit::mat::sub_vec(&b, &a);
                    let ax = crate::numkit::mat::sub_vec(&x0, &a);
                    let ab2 = crate::numkit::mat::dot(&ab, &ab);
                    let s = if ab2 > 0.0 {
                        (crate::numkit::mat::dot(&ab, &ax) / ab2).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    let closest = crate::numkit::mat::add_scaled(&a, &ab, s);
                    let d = crate::numkit::mat::norm(&crate::numkit::mat::sub_vec(
                        &closest, &x0,
                    ));
                    if d < *tol {
                        let t = traj.times[i - 1] + s * (traj.times[i] - traj.times[i - 1]);
                        events.push(Event {
                            kind: "return_to_start".into(),
                            t,
                            state: ParamPoint::from_concat(dims.0, dims.1, &closest),
                            value: d,
                        });
                        break;
                    }
                }
            }
        }
    }
    events
}
