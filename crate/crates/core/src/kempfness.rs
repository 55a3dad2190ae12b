//! The Kempf–Ness functional `p(ρ) = Σ‖Xᵢ‖²` on conjugation orbits, its
//! gradient, and a monotone descent onto the critical set.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Family, GroupDescriptor, RepTuple};
use crate::invariants::{invariant_record, InvariantRecord};
use crate::linalg::decomp::eig_hermitian_part;
use crate::linalg::{CMat, DEFAULT_TOL};
use crate::retraction::retract_tuple;

pub const DEFAULT_MAX_ITER: usize = 100_000;
const MAX_HALVINGS: usize = 40;
/// Relative size of the rounding error in `p` after one step. Below it the
/// functional cannot tell steps apart, and `‖M‖` decides instead.
pub const P_NOISE: f64 = 16.0 * f64::EPSILON;

/// `Σ tr(XᵢXᵢ*)`.
pub fn kn_functional(rho: &RepTuple) -> Result<f64> {
    rho.expect_sl(DEFAULT_TOL)?;
    Ok(functional(rho.matrices()))
}

fn functional(ms: &[CMat]) -> f64 {
    ms.iter().map(|m| m.frobenius_norm().powi(2)).sum()
}

/// `M = Σ (XᵢXᵢ* − Xᵢ*Xᵢ)`. The derivative of `p` along
/// `ρ ↦ e^{hH}ρe^{−hH}` at `h = 0` is `2 Re tr(HM)`, so `M = 0` exactly at
/// critical points.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentResidual {
    pub m: CMat,
    pub norm: f64,
}

pub fn moment_residual(rho: &RepTuple) -> Result<MomentResidual> {
    rho.expect_sl(DEFAULT_TOL)?;
    Ok(moment(rho.matrices()))
}

fn moment(ms: &[CMat]) -> MomentResidual {
    let n = ms.first().map_or(0, CMat::n);
    let mut m = CMat::zeros(n);
    for x in ms {
        let xa = x.adjoint();
        m = &m + &(&(x * &xa) - &(&xa * x));
    }
    let norm = m.frobenius_norm();
    MomentResidual { m, norm }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowStep {
    pub iter: usize,
    pub p: f64,
    pub residual: f64,
    /// Step size that produced this iterate; 0 for the starting point.
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTrace {
    pub steps: Vec<FlowStep>,
    pub converged: bool,
}

impl FlowTrace {
    pub fn last(&self) -> &FlowStep {
        self.steps.last().expect("trace starts with the input")
    }

    pub fn iterations(&self) -> usize {
        self.last().iter
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,p,residual,step\n");
        for st in &self.steps {
            writeln!(s, "{},{:e},{:e},{:e}", st.iter, st.p, st.residual, st.step)
                .expect("writing to a String");
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct FlowResult {
    pub tuple: RepTuple,
    pub trace: FlowTrace,
}

impl FlowResult {
    /// Turns an unconverged flow into [`Error::NotConverged`].
    pub fn require_converged(self) -> Result<Self> {
        if self.trace.converged {
            Ok(self)
        } else {
            let last = self.trace.last();
            Err(Error::NotConverged {
                residual: last.residual,
                iterations: last.iter,
            })
        }
    }
}

/// Descends `p` along `ρ ← e^{−εM}·ρ·e^{εM}`.
///
/// Each step starts from `ε = 1/(4‖M‖ + 1)` and halves (at most 40 times)
/// until `p` drops. Changes of `p` within [`P_NOISE`]`·p` are rounding, so
/// such a step is accepted only if it lowers `‖M‖`. The flow stops when
/// `‖M‖ ≤ tol`, after `max_iter` steps, or when no step helps; only the first
/// counts as converged. An unconverged result is normal for orbits that are
/// not closed.
pub fn kn_flow(rho: &RepTuple, max_iter: usize, tol: f64) -> Result<FlowResult> {
    if !(tol > 0.0) {
        return Err(Error::BadParameter("flow tolerance must be positive".into()));
    }
    rho.expect_sl(DEFAULT_TOL)?;
    let n = rho.n();
    let mut xs: Vec<CMat> = rho.matrices().to_vec();
    let mut p = functional(&xs);
    let mut mr = moment(&xs);
    let mut steps = vec![FlowStep {
        iter: 0,
        p,
        residual: mr.norm,
        step: 0.0,
    }];
    let mut iter = 0;
    while mr.norm > tol && iter < max_iter {
        let eig = eig_hermitian_part(&mr.m);
        let mut eps = 1.0 / (4.0 * mr.norm + 1.0);
        let noise = P_NOISE * p;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            // I + U(e^{−εΛ} − 1)U* keeps the rounding proportional to ε‖M‖
            let left = &CMat::identity(n) + &eig.apply(|l| (-eps * l).exp_m1());
            let right = left.inverse()?;
            let cand: Vec<CMat> = xs.iter().map(|x| &(&left * x) * &right).collect();
            let pc = functional(&cand);
            if pc <= p + noise {
                let mc = moment(&cand);
                if pc < p - noise || mc.norm < mr.norm {
                    accepted = Some((cand, pc, mc));
                    break;
                }
            }
            eps *= 0.5;
        }
        let Some((cand, pc, mc)) = accepted else {
            break;
        };
        iter += 1;
        xs = cand;
        p = pc;
        mr = mc;
        steps.push(FlowStep {
            iter,
            p,
            residual: mr.norm,
            step: eps,
        });
    }
    let converged = mr.norm <= tol;
    Ok(FlowResult {
        tuple: RepTuple::from_parts(rho.descriptor(), xs),
        trace: FlowTrace { steps, converged },
    })
}

#[derive(Debug, Clone)]
pub struct CompositeResult {
    pub before: InvariantRecord,
    pub after: InvariantRecord,
    /// The flowed tuple retracted to time `t`.
    pub tuple: RepTuple,
    pub flow: FlowTrace,
}

/// Flows to the critical set, then applies the polar retraction at time `t`.
/// Both invariant records use the input's group label, so they are directly
/// comparable.
pub fn composite_retraction(
    rho: &RepTuple,
    t: f64,
    max_iter: usize,
    tol: f64,
) -> Result<CompositeResult> {
    let before = invariant_record(rho)?;
    let flowed = kn_flow(rho, max_iter, tol)?.require_converged()?;
    let moved = retract_tuple(&flowed.tuple, t)?;
    let relabeled = match rho.family() {
        Family::SU => moved.clone(),
        Family::SL => RepTuple::from_parts(GroupDescriptor::sl(rho.n()), moved.matrices().to_vec()),
    };
    let after = invariant_record(&relabeled)?;
    Ok(CompositeResult {
        before,
        after,
        tuple: moved,
        flow: flowed.trace,
    })
}
