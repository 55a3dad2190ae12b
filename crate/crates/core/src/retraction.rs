//! The polar retraction `φ_t(g) = g·(g*g)^{−t/2}` of `SL(n, ℂ)` onto `SU(n)`,
//! and its diagonal (torus) counterpart.

use crate::error::{Error, Result};
use crate::groups::{Family, GroupDescriptor, RepTuple};
use crate::linalg::decomp::{gram_power, refine_unitary};
use crate::linalg::{CMat, C64, DEFAULT_TOL};

fn check_time(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("retraction time {t} outside [0, 1]")))
    }
}

/// `φ_t(g)`. If `g = k·e^p` then `φ_t(g) = k·e^{(1−t)p}`.
pub fn phi(g: &CMat, t: f64) -> Result<CMat> {
    check_time(t)?;
    if !(g.det().norm() > DEFAULT_TOL) {
        return Err(Error::Singular);
    }
    if t == 0.0 {
        return Ok(g.clone());
    }
    let out = g * &gram_power(g, -0.5 * t)?;
    Ok(if t == 1.0 { refine_unitary(&out) } else { out })
}

/// Componentwise `φ_t`. The result carries the SU label at `t = 1` and
/// whenever the input already did.
pub fn retract_tuple(rho: &RepTuple, t: f64) -> Result<RepTuple> {
    check_time(t)?;
    let matrices = rho
        .matrices()
        .iter()
        .map(|g| phi(g, t))
        .collect::<Result<Vec<_>>>()?;
    let family = if t == 1.0 {
        Family::SU
    } else {
        rho.family()
    };
    Ok(RepTuple::from_parts(
        GroupDescriptor {
            family,
            n: rho.n(),
        },
        matrices,
    ))
}

/// Samples of `t ↦ φ_t(ρ)` on an even grid from 0 to 1.
#[derive(Debug, Clone)]
pub struct RetractionPath {
    pub samples: Vec<(f64, RepTuple)>,
}

impl RetractionPath {
    pub fn new(rho: &RepTuple, intervals: usize) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::BadParameter("need at least one interval".into()));
        }
        let samples = (0..=intervals)
            .map(|i| {
                let t = if i == intervals {
                    1.0
                } else {
                    i as f64 / intervals as f64
                };
                retract_tuple(rho, t).map(|tuple| (t, tuple))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RetractionPath { samples })
    }

    pub fn end(&self) -> &RepTuple {
        &self.samples.last().expect("nonempty path").1
    }
}

/// Torus retraction: each diagonal entry `z ↦ z·|z|^{−t}`.
pub fn abelian_retract(lambda: &[CMat], t: f64) -> Result<Vec<CMat>> {
    check_time(t)?;
    lambda
        .iter()
        .map(|m| {
            if !m.is_diagonal(0.0) {
                return Err(Error::NotDiagonal);
            }
            let d = m
                .diag()
                .into_iter()
                .enumerate()
                .map(|(index, z)| {
                    let r = z.norm();
                    if r == 0.0 {
                        Err(Error::ZeroEntry { index })
                    } else {
                        Ok(z * r.powf(-t))
                    }
                })
                .collect::<Result<Vec<C64>>>()?;
            Ok(CMat::from_diag(&d))
        })
        .collect()
}
