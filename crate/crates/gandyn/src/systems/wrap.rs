//! Redundant reparametrization: duplicated coordinates build systems
//! with an exact equilibrium subspace, the rank-deficient regime the
//! projection machinery handles.
//!
//! A duplicated base coordinate θᵢ is replaced by (uᵢ + vᵢ)/√2, so the
//! coordinate map is a partial isometry and the wrapped system's
//! nonzero spectrum equals the base spectrum. Points offset along
//! uᵢ − vᵢ with uᵢ + vᵢ fixed at the equilibrium value remain
//! equilibria.
//!
//! With the symmetric lift, the null coordinate (uᵢ − vᵢ)/√2 is exactly
//! conserved by the flow (both copies receive identical updates), so a
//! trajectory converges to the equilibrium whose subspace coordinate it
//! started with. An optional asymmetric lift (coefficient κ) weights
//! the two copies as (1±κ)/√2, which leaves the equilibrium set, the
//! zero-eigenvalue count and the projected spectrum unchanged but gives
//! the null coordinate the generic drift γ̇ = κ·(base component), i.e.
//! an exact displacement −κ·s₀ that scales linearly with the initial
//! offset.

use super::{ExpectationMode, GanSystem, JacobianBundle, ParamPoint};
use crate::error::{Error, Result};
use crate::losses::LossFn;
use crate::numkit::Mat;
use std::sync::Arc;

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub struct RedundantWrapped {
    base: Arc<dyn GanSystem>,
    dup_d: Vec<usize>,
    dup_g: Vec<usize>,
    lift_asymmetry: f64,
}

pub fn redundant_wrap(
    base: Arc<dyn GanSystem>,
    dup_d: &[usize],
    dup_g: &[usize],
) -> Result<Arc<RedundantWrapped>> {
    redundant_wrap_with_lift(base, dup_d, dup_g, 0.0)
}

pub fn redundant_wrap_with_lift(
    base: Arc<dyn GanSystem>,
    dup_d: &[usize],
    dup_g: &[usize],
    lift_asymmetry: f64,
) -> Result<Arc<RedundantWrapped>> {
    if dup_d.iter().any(|&i| i >= base.n_d()) || dup_g.iter().any(|&i| i >= base.n_g()) {
        return Err(Error::dim("redundant_wrap: duplication index out of range"));
    }
    Ok(Arc::new(RedundantWrapped {
        base,
        dup_d: dup_d.to_vec(),
        dup_g: dup_g.to_vec(),
        lift_asymmetry,
    }))
}

impl RedundantWrapped {
    pub fn base(&self) -> &Arc<dyn GanSystem> {
        &self.base
    }

    /// The n_base × n_wrapped coordinate map for one player block:
    /// pass-through rows, with duplicated slots reading (u + v)/√2.
    fn block_map(n_base: usize, dups: &[usize]) -> Mat {
        let mut m = Mat::zeros(n_base, n_base + dups.len());
        for i in 0..n_base {
            if let Some(pos) = dups.iter().position(|&d| d == i) {
                m[(i, i)] = INV_SQRT2;
                m[(i, n_base + pos)] = INV_SQRT2;
            } else {
                m[(i, i)] = 1.0;
            }
        }
        m
    }

    pub fn map_d(&self) -> Mat {
        Self::block_map(self.base.n_d(), &self.dup_d)
    }

    pub fn map_g(&self) -> Mat {
        Self::block_map(self.base.n_g(), &self.dup_g)
    }

    pub fn to_base(&self, p: &ParamPoint) -> ParamPoint {
        ParamPoint::new(
            self.map_d().matvec(&p.theta_d),
            self.map_g().matvec(&p.theta_g),
        )
    }

    /// Lift a base-block field component into the wrapped coordinates.
    fn lift_block(base_f: &[f64], dups: &[usize], kappa: f64) -> Vec<f64> {
        let n = base_f.len();
        let mut out = Vec::with_capacity(n + dups.len());
        for (i, &fi) in base_f.iter().enumerate() {
            if dups.contains(&i) {
                out.push((1.0 + kappa) * INV_SQRT2 * fi);
            } else {
                out.push(fi);
            }
        }
        for &i in dups {
            out.push((1.0 - kappa) * INV_SQRT2 * base_f[i]);
        }
        out
    }

    /// Orthonormal basis of the equilibrium subspace directions
    /// (one (e_u − e_v)/√2 vector per duplication), in wrapped
    /// concatenated coordinates.
    pub fn subspace_basis(&self) -> Vec<Vec<f64>> {
        let (nd, ng) = (self.n_d(), self.n_g());
        let base_nd = self.base.n_d();
        let base_ng = self.base.n_g();
        let mut basis = Vec::new();
        for (pos, &i) in self.dup_d.iter().enumerate() {
            let mut v = vec![0.0; nd + ng];
            v[i] = INV_SQRT2;
            v[base_nd + pos] = -INV_SQRT2;
            basis.push(v);
        }
        for (pos, &i) in self.dup_g.iter().enumerate() {
            let mut v = vec![0.0; nd + ng];
            v[nd + i] = INV_SQRT2;
            v[nd + base_ng + pos] = -INV_SQRT2;
            basis.push(v);
        }
        basis
    }

    /// Subspace coordinates γ_j = ⟨y − y⋆, basis_j⟩ of a wrapped point.
    pub fn gamma_coords(&self, p: &ParamPoint) -> Vec<f64> {
        let eq = self.equilibrium();
        let offset = crate::numkit::mat::sub_vec(&p.concat(), &eq.concat());
        self.subspace_basis()
            .iter()
            .map(|b| crate::numkit::mat::dot(b, &offset))
            .collect()
    }

    /// Distance of a wrapped point to the (affine) equilibrium subspace.
    pub fn distance_to_subspace(&self, p: &ParamPoint) -> f64 {
        let eq = self.equilibrium();
        let mut offset = crate::numkit::mat::sub_vec(&p.concat(), &eq.concat());
        for b in self.subspace_basis() {
            let c = crate::numkit::mat::dot(&b, &offset);
            for (o, bi) in offset.iter_mut().zip(&b) {
                *o -= c * bi;
            }
        }
        crate::numkit::mat::norm(&offset)
    }
}

impl GanSystem for RedundantWrapped {
    fn name(&self) -> &str {
        "redundant_wrap"
    }

    fn n_d(&self) -> usize {
        self.base.n_d() + self.dup_d.len()
    }

    fn n_g(&self) -> usize {
        self.base.n_g() + self.dup_g.len()
    }

    fn loss(&self) -> &LossFn {
        self.base.loss()
    }

    fn field(&self, p: &ParamPoint) -> Result<ParamPoint> {
        self.check_point(p)?;
        let base_f = self.base.field(&self.to_base(p))?;
        Ok(ParamPoint::new(
            Self::lift_block(&base_f.theta_d, &self.dup_d, self.lift_asymmetry),
            Self::lift_block(&base_f.theta_g, &self.dup_g, self.lift_asymmetry),
        ))
    }

    fn equilibrium(&self) -> ParamPoint {
        let base_eq = self.base.equilibrium();
        let embed = |theta: &[f64], dups: &[usize]| {
            let mut out = Vec::with_capacity(theta.len() + dups.len());
            for (i, &t) in theta.iter().enumerate() {
                if dups.contains(&i) {
                    out.push(t * INV_SQRT2);
                } else {
                    out.push(t);
                }
            }
            for &i in dups {
                out.push(theta[i] * INV_SQRT2);
            }
            out
        };
        ParamPoint::new(
            embed(&base_eq.theta_d, &self.dup_d),
            embed(&base_eq.theta_g, &self.dup_g),
        )
    }

    fn analytic_blocks(&self) -> Option<JacobianBundle> {
        let base = self.base.analytic_blocks()?;
        let md = self.map_d();
        let mg = self.map_g();
        Some(JacobianBundle {
            k_dd: md.transpose().matmul(&base.k_dd).matmul(&md),
            k_dg: md.transpose().matmul(&base.k_dg).matmul(&mg),
            f1: base.f1,
            f2: base.f2,
        })
    }

    fn expectation_mode(&self) -> ExpectationMode {
        self.base.expectation_mode()
    }

    fn param_names(&self) -> (Vec<String>, Vec<String>) {
        let (bd, bg) = self.base.param_names();
        let extend = |names: &[String], dups: &[usize]| {
            let mut out = names.to_vec();
            for &i in dups {
                out.push(format!("{}_dup", names[i]));
            }
            out
        };
        (extend(&bd, &self.dup_d), extend(&bg, &self.dup_g))
    }
}
