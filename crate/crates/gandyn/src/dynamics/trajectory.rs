//! Time-stamped parameter trajectories with named monitor channels,
//! and their CSV/JSON serializations.

use crate::error::{Error, Result};
use crate::numkit::mat::{norm, sub_vec, Mat};
use crate::systems::ParamPoint;
use serde::Serialize;

/// A per-state scalar channel recorded alongside the trajectory.
#[derive(Clone, Debug)]
pub enum MonitorSpec {
    /// ‖field(state)‖.
    FieldNorm,
    /// ‖state − target‖.
    DistanceTo { name: String, target: ParamPoint },
    /// Squared radius Σ (xᵢ − cᵢ)² over selected concatenated coords
    /// (all coords when `coords` is None).
    RadiusSq {
        name: String,
        center: ParamPoint,
        coords: Option<Vec<usize>>,
    },
    /// Quadratic form (x − c)ᵀ P (x − c) over the concatenated coords.
    QuadForm {
        name: String,
        p: Mat,
        center: ParamPoint,
    },
}

impl MonitorSpec {
    pub fn name(&self) -> &str {
        match self {
            MonitorSpec::FieldNorm => "field_norm",
            MonitorSpec::DistanceTo { name, .. } => name,
            MonitorSpec::RadiusSq { name, .. } => name,
            MonitorSpec::QuadForm { name, .. } => name,
        }
    }

    pub fn eval(&self, state: &ParamPoint, field: &ParamPoint) -> f64 {
        match self {
            MonitorSpec::FieldNorm => field.norm(),
            MonitorSpec::DistanceTo { target, .. } => state.distance(target),
            MonitorSpec::RadiusSq { center, coords, .. } => {
                let d = sub_vec(&state.concat(), &center.concat());
                match coords {
                    Some(ix) => ix.iter().map(|&i| d[i] * d[i]).sum(),
                    None => d.iter().map(|x| x * x).sum(),
                }
            }
            MonitorSpec::QuadForm { p, center, .. } => {
                let d = sub_vec(&state.concat(), &center.concat());
                crate::numkit::mat::dot(&d, &p.matvec(&d))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ParamPoint>,
    /// Named channels, one value per state.
    pub monitors: Vec<(String, Vec<f64>)>,
    /// Integration flags ("diverged", "stopped_by_event", ...).
    pub flags: Vec<String>,
}

impl Trajectory {
    pub fn new(monitor_names: Vec<String>) -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            monitors: monitor_names.into_iter().map(|n| (n, Vec::new())).collect(),
            flags: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, state: ParamPoint, monitor_values: &[f64]) {
        assert_eq!(monitor_values.len(), self.monitors.len());
        self.times.push(t);
        self.states.push(state);
        for (chan, &v) in self.monitors.iter_mut().zip(monitor_values) {
            chan.1.push(v);
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&ParamPoint> {
        self.states.last()
    }

    pub fn monitor(&self, name: &str) -> Option<&[f64]> {
        self.monitors
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Index of the recorded time closest to `t`.
    pub fn nearest_index(&self, t: f64) -> Option<usize> {
        if self.times.is_empty() {
            return None;
        }
        let mut best = 0;
        let mut bd = f64::INFINITY;
        for (i, &ti) in self.times.iter().enumerate() {
            let d = (ti - t).abs();
            if d < bd {
                bd = d;
                best = i;
            }
        }
        Some(best)
    }

    /// CSV with '#'-prefixed metadata lines, a header row, then one row
    /// per state: t, each parameter by name, each monitor channel.
    /// Numbers print as shortest round-trip decimals.
    pub fn to_csv(&self, param_names: &(Vec<String>, Vec<String>), meta: &[String]) -> String {
        let mut out = String::new();
        for m in meta {
            out.push_str(&format!("# {m}\n"));
        }
        let mut header = vec!["t".to_string()];
        header.extend(param_names.0.iter().cloned());
        header.extend(param_names.1.iter().cloned());
        header.extend(self.monitors.iter().map(|(n, _)| n.clone()));
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.len() {
            let mut row = vec![fmt_f64(self.times[i])];
            for v in self.states[i].concat() {
                row.push(fmt_f64(v));
            }
            for (_, chan) in &self.monitors {
                row.push(fmt_f64(chan[i]));
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip decimal formatting (Rust's default f64 Display).
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 && v.is_sign_negative() {
        // normalize −0 so byte-identical outputs don't depend on its sign
        return "0".to_string();
    }
    format!("{v}")
}

/// Least-squares slope of log‖state − target‖ against t over a window;
/// the returned λ̂ is positive for exponential decay.
pub fn fit_exponential_rate(
    traj: &Trajectory,
    target: &ParamPoint,
    window: (f64, f64),
) -> Result<f64> {
    let mut ts = Vec::new();
    let mut logd = Vec::new();
    for (i, &t) in traj.times.iter().enumerate() {
        if t < window.0 || t > window.1 {
            continue;
        }
        let d = traj.states[i].distance(target);
        if d <= 0.0 {
            continue;
        }
        ts.push(t);
        logd.push(d.ln());
    }
    if ts.len() < 10 {
        return Err(Error::precondition(format!(
            "fit_exponential_rate: only {} samples in window, need at least 10",
            ts.len()
        )));
    }
    let n = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / n;
    let lm = logd.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, l) in ts.iter().zip(&logd) {
        num += (t - tm) * (l - lm);
        den += (t - tm) * (t - tm);
    }
    if den == 0.0 {
        return Err(Error::precondition("fit_exponential_rate: degenerate window"));
    }
    Ok(-(num / den))
}

/// Sanity helper used by tests: max norm defect of monotone decrease.
pub fn max_increase(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
        .max(f64::NEG_INFINITY)
}

pub fn field_norm(field: &ParamPoint) -> f64 {
    norm(&field.concat())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_shape_and_metadata() {
        let mut traj = Trajectory::new(vec!["field_norm".into()]);
        traj.push(0.0, ParamPoint::new(vec![1.0], vec![2.0]), &[0.5]);
        traj.push(0.25, ParamPoint::new(vec![0.5], vec![2.5]), &[0.25]);
        let csv = traj.to_csv(
            &(vec!["w2".into()], vec!["a".into()]),
            &["config_hash=abc".into()],
        );
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# config_hash=abc");
        assert_eq!(lines[1], "t,w2,a,field_norm");
        assert_eq!(lines[2], "0,1,2,0.5");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn rate_fit_on_synthetic_decay() {
        let mut traj = Trajectory::new(vec![]);
        let target = ParamPoint::new(vec![0.0], vec![0.0]);
        for k in 0..200 {
            let t = 0.1 * k as f64;
            let d = 3.0 * (-1.7 * t).exp();
            traj.push(t, ParamPoint::new(vec![d], vec![0.0]), &[]);
        }
        let rate = fit_exponential_rate(&traj, &target, (2.0, 18.0)).unwrap();
        assert!((rate - 1.7).abs() < 1e-9);
    }

    #[test]
    fn rate_fit_needs_samples() {
        let traj = Trajectory::new(vec![]);
        let target = ParamPoint::new(vec![0.0], vec![0.0]);
        assert!(fit_exponential_rate(&traj, &target, (0.0, 1.0)).is_err());
    }
}
