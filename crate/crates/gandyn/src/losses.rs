//! The concave outer function `f` of the two-player objective
//! `V = E_data[f(D(x))] + E_gen[f(−D(x))]`, with exact first and second
//! derivatives.
//!
//! Losses carry derivative code rather than autodiff because the
//! downstream Jacobian formulas need f′(0) and f″(0) to machine
//! precision.
//!
//! The alternative generator objective `V′ = −E_z[f(D(G(z)))]` is not
//! represented separately: its Jacobian at equilibrium coincides with
//! the standard update's, so every analysis here covers it.

use std::fmt;
use std::sync::Arc;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct LossFn {
    pub name: String,
    eval: ScalarFn,
    d1: ScalarFn,
    d2: ScalarFn,
    pub f1_at_0: f64,
    pub f2_at_0: f64,
}

impl fmt::Debug for LossFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LossFn")
            .field("name", &self.name)
            .field("f1_at_0", &self.f1_at_0)
            .field("f2_at_0", &self.f2_at_0)
            .finish()
    }
}

impl LossFn {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let d1 = Arc::new(d1);
        let d2 = Arc::new(d2);
        LossFn {
            name: name.into(),
            eval: Arc::new(eval),
            f1_at_0: d1(0.0),
            f2_at_0: d2(0.0),
            d1,
            d2,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    #[inline]
    pub fn d1(&self, x: f64) -> f64 {
        (self.d1)(x)
    }

    #[inline]
    pub fn d2(&self, x: f64) -> f64 {
        (self.d2)(x)
    }
}

/// σ(−x) = 1/(1+eˣ), evaluated without overflow for |x| up to ~700.
#[inline]
fn sigmoid_neg(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// The negated logistic loss f(x) = −log(1 + e^{−x}).
///
/// f′(x) = 1/(1+eˣ), f″(x) = −f′(x)(1−f′(x)); f′(0) = 1/2, f″(0) = −1/4.
pub fn logistic_loss() -> LossFn {
    LossFn::new(
        "logistic",
        |x| {
            // −log1p(e^{−x}) with the x < 0 branch rewritten to avoid overflow
            if x >= 0.0 {
                -(-x).exp().ln_1p()
            } else {
                x - x.exp().ln_1p()
            }
        },
        sigmoid_neg,
        |x| {
            let p = sigmoid_neg(x);
            -p * (1.0 - p)
        },
    )
}

/// The identity loss f(x) = x (the Wasserstein objective): f′ ≡ 1, f″ ≡ 0.
pub fn wgan_loss() -> LossFn {
    LossFn::new("wgan", |x| x, |_| 1.0, |_| 0.0)
}

pub fn loss_by_name(name: &str) -> Option<LossFn> {
    match name {
        "logistic" => Some(logistic_loss()),
        "wgan" => Some(wgan_loss()),
        _ => None,
    }
}

/// Verdict of the strict-concavity condition `f″(0) < 0 ∧ f′(0) ≠ 0`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StrictConcavityReport {
    pub holds: bool,
    pub reasons: Vec<String>,
}

pub fn check_strict_concavity(f: &LossFn) -> StrictConcavityReport {
    let mut reasons = Vec::new();
    if f.f2_at_0 >= 0.0 {
        reasons.push(format!("f''(0) = {} (needs f''(0) < 0)", f.f2_at_0));
    }
    if f.f1_at_0 == 0.0 {
        reasons.push("f'(0) = 0 (needs f'(0) != 0)".to_string());
    }
    StrictConcavityReport {
        holds: reasons.is_empty(),
        reasons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Central-difference consistency of d1/d2 with eval at probe points.
    fn check_derivatives(f: &LossFn) {
        let h = 1e-5;
        for k in 0..100 {
            let x = -5.0 + 10.0 * (k as f64) / 99.0;
            let fd1 = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            let fd2 = (f.eval(x + h) - 2.0 * f.eval(x) + f.eval(x - h)) / (h * h);
            assert!((fd1 - f.d1(x)).abs() < 1e-6, "{} d1 at {x}", f.name);
            assert!((fd2 - f.d2(x)).abs() < 1e-4, "{} d2 at {x}", f.name);
        }
        assert_eq!(f.f1_at_0, f.d1(0.0));
        assert_eq!(f.f2_at_0, f.d2(0.0));
    }

    #[test]
    fn logistic_values() {
        let f = logistic_loss();
        assert!((f.eval(0.0) + std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(f.f1_at_0, 0.5);
        assert_eq!(f.f2_at_0, -0.25);
        check_derivatives(&f);
    }

    #[test]
    fn logistic_stable_tails() {
        let f = logistic_loss();
        // asymptotics: f(30) = −log1p(e^{−30}) ≈ −9.36e-14, f(−30) ≈ −30
        assert!((f.eval(30.0) + 9.357622968840175e-14).abs() < 1e-18);
        assert!((f.eval(-30.0) + 30.0).abs() < 1e-12);
        // no overflow far out
        assert!(f.eval(700.0).is_finite());
        assert!(f.eval(-700.0).is_finite());
        assert!(f.d1(700.0).is_finite() && f.d2(-700.0).is_finite());
    }

    #[test]
    fn wgan_values() {
        let f = wgan_loss();
        assert_eq!(f.eval(3.7), 3.7);
        assert_eq!(f.f1_at_0, 1.0);
        assert_eq!(f.f2_at_0, 0.0);
        check_derivatives(&f);
    }

    #[test]
    fn strict_concavity_verdicts() {
        assert!(check_strict_concavity(&logistic_loss()).holds);
        let w = check_strict_concavity(&wgan_loss());
        assert!(!w.holds);
        assert!(w.reasons[0].contains("f''(0) = 0"));
        // f(x) = −x²: f′(0) = 0 fails the other half
        let sq = LossFn::new("negsquare", |x| -x * x, |x| -2.0 * x, |_| -2.0);
        let r = check_strict_concavity(&sq);
        assert!(!r.holds);
        assert!(r.reasons[0].contains("f'(0) = 0"));
        check_derivatives(&sq);
    }
}
