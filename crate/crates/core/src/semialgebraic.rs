//! Membership tests for the images of the trace maps.
//!
//! Every test returns a [`RegionVerdict`] carrying one signed margin per
//! defining inequality, so callers can see how far inside (or outside) a
//! point is, not just the yes/no answer.

use std::f64::consts::PI;

use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::RepTuple;
use crate::invariants::{su3_traces, u_coords, PQRecord, SU2Rank2Coords, SU2Rank3Coords, UCoords};
use crate::linalg::{unitary_eig, CMat, C64, DEFAULT_TOL};

/// Which side of zero a margin must lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    /// `value ≥ 0`
    NonNegative,
    /// `value ≤ 0`
    NonPositive,
    /// `value > 0`
    Positive,
    /// `value < 0`
    Negative,
}

impl Sense {
    pub fn holds(self, v: f64, tol: f64) -> bool {
        match self {
            Sense::NonNegative => v >= -tol,
            Sense::NonPositive => v <= tol,
            Sense::Positive => v > tol,
            Sense::Negative => v < -tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Margin {
    pub name: String,
    pub value: f64,
    pub sense: Sense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionVerdict {
    pub inside: bool,
    pub on_boundary: bool,
    pub margins: Vec<Margin>,
}

impl RegionVerdict {
    pub fn from_margins(margins: Vec<(&str, f64, Sense)>, tol: f64) -> Self {
        let margins: Vec<Margin> = margins
            .into_iter()
            .map(|(name, value, sense)| Margin {
                name: name.to_string(),
                value,
                sense,
            })
            .collect();
        RegionVerdict {
            inside: margins.iter().all(|m| m.sense.holds(m.value, tol)),
            on_boundary: margins.iter().any(|m| m.value.abs() <= tol),
            margins,
        }
    }

    pub fn margin(&self, name: &str) -> Option<f64> {
        self.margins.iter().find(|m| m.name == name).map(|m| m.value)
    }

    /// The most violated (or least satisfied) margin, signed so that negative
    /// means violated.
    pub fn worst(&self) -> f64 {
        self.margins
            .iter()
            .map(|m| match m.sense {
                Sense::NonNegative | Sense::Positive => m.value,
                Sense::NonPositive | Sense::Negative => -m.value,
            })
            .fold(f64::INFINITY, f64::min)
    }
}

struct MarginMap<'a>(&'a [Margin]);

impl Serialize for MarginMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for m in self.0 {
            map.serialize_entry(&m.name, &m.value)?;
        }
        map.end()
    }
}

impl Serialize for RegionVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RegionVerdict", 3)?;
        st.serialize_field("inside", &self.inside)?;
        st.serialize_field("on_boundary", &self.on_boundary)?;
        st.serialize_field("margins", &MarginMap(&self.margins))?;
        st.end()
    }
}

fn sigma3(x: f64, y: f64, z: f64) -> f64 {
    1.0 - x * x - y * y - z * z + 2.0 * x * y * z
}

/// `σ(a) = 1 − a₁² − a₂² − a₃² + 2a₁a₂a₃`.
pub fn sigma(a: &SU2Rank2Coords) -> f64 {
    sigma3(a.a1, a.a2, a.a3)
}

/// `a ∈ [−1, 1]³` and `σ(a) ∈ [0, 1]`.
pub fn in_su2_rank2_image(a: &SU2Rank2Coords, tol: f64) -> RegionVerdict {
    let s = sigma(a);
    RegionVerdict::from_margins(
        vec![
            ("1-|a1|", 1.0 - a.a1.abs(), Sense::NonNegative),
            ("1-|a2|", 1.0 - a.a2.abs(), Sense::NonNegative),
            ("1-|a3|", 1.0 - a.a3.abs(), Sense::NonNegative),
            ("sigma", s, Sense::NonNegative),
            ("1-sigma", 1.0 - s, Sense::NonNegative),
        ],
        tol,
    )
}

/// `θᵢ = arccos(aᵢ)/π`. Coordinates within [`DEFAULT_TOL`] outside
/// `[−1, 1]` are clamped.
pub fn theta(a: &SU2Rank2Coords) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (i, (&v, o)) in a.to_array().iter().zip(out.iter_mut()).enumerate() {
        if !(v.abs() <= 1.0 + DEFAULT_TOL) {
            return Err(Error::OutOfRange {
                name: format!("a{}", i + 1),
                value: v,
            });
        }
        *o = v.clamp(-1.0, 1.0).acos() / PI;
    }
    Ok(out)
}

/// The tetrahedron `θᵢ + θⱼ ≥ θ_k`, `θ₁ + θ₂ + θ₃ ≤ 2`.
pub fn tetrahedron_check(th: &[f64; 3], tol: f64) -> RegionVerdict {
    let [t1, t2, t3] = *th;
    RegionVerdict::from_margins(
        vec![
            ("t1+t2-t3", t1 + t2 - t3, Sense::NonNegative),
            ("t1+t3-t2", t1 + t3 - t2, Sense::NonNegative),
            ("t2+t3-t1", t2 + t3 - t1, Sense::NonNegative),
            ("2-sum", 2.0 - (t1 + t2 + t3), Sense::NonNegative),
        ],
        tol,
    )
}

/// Box constraints on all six coordinates, the three pairwise σ-conditions
/// on `(a_j, a_k, a_jk)`, and the σ-condition on `(a₁₂, a₁₃, a₂₃)`.
pub fn in_su2_rank3_image(c: &SU2Rank3Coords, tol: f64) -> RegionVerdict {
    let names = ["a1", "a2", "a3", "a12", "a13", "a23"];
    let box_names: Vec<String> = names.iter().map(|n| format!("1-|{n}|")).collect();
    let mut margins: Vec<(&str, f64, Sense)> = c
        .to_array()
        .iter()
        .zip(&box_names)
        .map(|(v, n)| (n.as_str(), 1.0 - v.abs(), Sense::NonNegative))
        .collect();
    let pairs = [
        ("sigma12", "1-sigma12", 0, 1),
        ("sigma13", "1-sigma13", 0, 2),
        ("sigma23", "1-sigma23", 1, 2),
    ];
    for (lo, hi, j, k) in pairs {
        let s = sigma3(c.a(j), c.a(k), c.a_pair(j, k));
        margins.push((lo, s, Sense::NonNegative));
        margins.push((hi, 1.0 - s, Sense::NonNegative));
    }
    let s = sigma3(c.a12, c.a13, c.a23);
    margins.push(("sigma_pairs", s, Sense::NonNegative));
    margins.push(("1-sigma_pairs", 1.0 - s, Sense::NonNegative));
    RegionVerdict::from_margins(margins, tol)
}

/// `|τ|⁴ − 8 Re(τ³) + 18|τ|² − 27`, which is minus the discriminant of the
/// characteristic polynomial of a matrix in SU(3) with trace `τ`.
pub fn su3_quartic(tau: C64) -> f64 {
    let n2 = tau.norm_sqr();
    n2 * n2 - 8.0 * (tau * tau * tau).re + 18.0 * n2 - 27.0
}

pub fn su3_alcove_check(tau: C64, tol: f64) -> RegionVerdict {
    RegionVerdict::from_margins(vec![("quartic", su3_quartic(tau), Sense::NonPositive)], tol)
}

/// `Δ = Q² + 12PQ + 18Q − 4P³ − 27`.
pub fn su3_delta(p: f64, q: f64) -> f64 {
    q * q + 12.0 * p * q + 18.0 * q - 4.0 * p * p * p - 27.0
}

pub fn su3_delta_complex(p: C64, q: C64) -> C64 {
    q * q + p * q * 12.0 + q * 18.0 - p * p * p * 4.0 - 27.0
}

/// `S₊`: each `τ_k = u_k + i·u_{−k}` in the single-matrix image, `Δ ≤ 0` and
/// `P² − 4Q < 0`. Inputs must already be realified.
pub fn in_s_plus(u: &UCoords, p: &PQRecord, tol: f64) -> Result<RegionVerdict> {
    let max_imag = u.max_imag().max(p.max_imag());
    if max_imag > 0.0 {
        return Err(Error::ComplexInput { max_imag });
    }
    let (pp, qq) = (p.p.re, p.q.re);
    let names = ["alcove1", "alcove2", "alcove3", "alcove4"];
    let mut margins: Vec<(&str, f64, Sense)> = u
        .pairs
        .iter()
        .zip(names)
        .map(|((a, b), n)| (n, su3_quartic(C64::new(a.re, b.re)), Sense::NonPositive))
        .collect();
    margins.push(("Delta", su3_delta(pp, qq), Sense::NonPositive));
    margins.push(("P2-4Q", pp * pp - 4.0 * qq, Sense::Negative));
    Ok(RegionVerdict::from_margins(margins, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BClass {
    BPlus,
    BZero,
    BMinus,
}

/// Sign of `u₅ = Im tr(X₁X₂X₁⁻¹X₂⁻¹)`, with a zero band of width `tol`.
pub fn classify_b(rho: &RepTuple, tol: f64) -> Result<BClass> {
    rho.expect_su(3, 2, DEFAULT_TOL)?;
    let u5 = u_coords(&su3_traces(rho)?).realify()?.u5.re;
    Ok(if u5 > tol {
        BClass::BPlus
    } else if u5 < -tol {
        BClass::BMinus
    } else {
        BClass::BZero
    })
}

/// Diagonalizes `X₁`, conjugates `X₂` into that basis as `Y`, and reports the
/// eigenvalue gaps of `X₁` and `|y₁₂y₂₃y₃₁ − y₁₃y₂₁y₃₂|`. Both must be
/// nonzero. The cyclic difference does not depend on the ordering or phases
/// of the eigenbasis, up to sign.
pub fn product_condition(rho: &RepTuple, tol: f64) -> Result<RegionVerdict> {
    rho.expect_su(3, 2, DEFAULT_TOL)?;
    let eig = unitary_eig(&rho.matrices()[0]);
    let v = &eig.vectors;
    let y = &(&v.adjoint() * &rho.matrices()[1]) * v;
    let l = &eig.values;
    let e = |i: usize, j: usize| y[(i - 1, j - 1)];
    let cyclic = (e(1, 2) * e(2, 3) * e(3, 1) - e(1, 3) * e(2, 1) * e(3, 2)).norm();
    Ok(RegionVerdict::from_margins(
        vec![
            ("gap12", (l[0] - l[1]).norm(), Sense::Positive),
            ("gap13", (l[0] - l[2]).norm(), Sense::Positive),
            ("gap23", (l[1] - l[2]).norm(), Sense::Positive),
            ("cyclic", cyclic, Sense::Positive),
        ],
        tol,
    ))
}

/// A point of the fundamental alcove: descending, summing to 0, spread ≤ 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlcovePoint {
    pub lambda: Vec<f64>,
}

/// Eigenvalues of `k` written as `e^{2πiλⱼ}` with `λ` in the alcove.
///
/// Angles are first taken in `[0, 1)`; since their sum is an integer `S`,
/// lowering the `S` largest by one gives the unique alcove representative.
pub fn alcove_lambda(k: &CMat) -> Result<AlcovePoint> {
    alcove_lambda_tol(k, DEFAULT_TOL)
}

pub fn alcove_lambda_tol(k: &CMat, tol: f64) -> Result<AlcovePoint> {
    let d = crate::groups::GroupDescriptor::su(k.n().max(1));
    if !crate::groups::validate(k, d, tol) {
        return Err(Error::NotInGroup {
            group: d.to_string(),
        });
    }
    let eig = unitary_eig(k);
    let mut theta: Vec<f64> = eig
        .values
        .iter()
        .map(|z| {
            let t = (z.arg() / (2.0 * PI)).rem_euclid(1.0);
            if t >= 1.0 {
                0.0
            } else {
                t
            }
        })
        .collect();
    let desc = |v: &mut Vec<f64>| v.sort_by(|a, b| b.total_cmp(a));
    desc(&mut theta);
    let s = theta.iter().sum::<f64>().round() as usize;
    for t in theta.iter_mut().take(s) {
        *t -= 1.0;
    }
    desc(&mut theta);
    Ok(AlcovePoint { lambda: theta })
}

pub const MIN_RESOLUTION: usize = 16;

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::BadParameter(format!(
            "resolution {resolution} below {MIN_RESOLUTION}"
        )));
    }
    Ok(())
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            lo * (1.0 - s) + hi * s
        })
        .collect()
}

/// `n` evenly spaced points that hit `lo`, the midpoint and `hi` exactly.
/// For even `n` that forces one extra point past `hi`.
fn axis_through_midpoint(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n % 2 == 1 {
        return linspace(lo, hi, n);
    }
    let m = (n - 2) as f64;
    (0..n)
        .map(|i| {
            let s = i as f64 / m;
            lo * (1.0 - s) + hi * s
        })
        .collect()
}

/// Rows `(p₁, p₂, quartic(p₁ + i p₂))` over a `resolution × resolution` grid
/// covering `[−3/2, 3] × [−3√3/2, 3√3/2]`, with `p₂ = 0` always on the grid
/// so all three corners `3`, `3ω`, `3ω̄` are grid points.
pub fn alcove_grid(resolution: usize) -> Result<Vec<[f64; 3]>> {
    check_resolution(resolution)?;
    let h = 1.5 * 3f64.sqrt();
    let xs = linspace(-1.5, 3.0, resolution);
    let ys = axis_through_midpoint(-h, h, resolution);
    let mut rows = Vec::with_capacity(resolution * resolution);
    for &x in &xs {
        for &y in &ys {
            rows.push([x, y, su3_quartic(C64::new(x, y))]);
        }
    }
    Ok(rows)
}

/// Rows `(a₁, a₂, a₃, σ)` sampling the surface `σ = 0`, obtained as the image
/// of the tetrahedron boundary under `aᵢ = cos(πθᵢ)`.
///
/// The boundary is parametrized by the strip `[0, 2] × [0, 1]`, cut into four
/// lattice triangles that map affinely onto the four faces; lattice points go
/// to the vertices `(0,0,0)`, `(1,1,0)`, `(1,0,1)`, `(0,1,1)` by their parity.
pub fn tetrahedron_boundary(resolution: usize) -> Result<Vec<[f64; 4]>> {
    check_resolution(resolution)?;
    let vertex = |i: i64, j: i64| -> [f64; 3] {
        match (i.rem_euclid(2), j.rem_euclid(2)) {
            (0, 0) => [0.0, 0.0, 0.0],
            (1, 0) => [1.0, 1.0, 0.0],
            (0, 1) => [1.0, 0.0, 1.0],
            _ => [0.0, 1.0, 1.0],
        }
    };
    let xs = axis_through_midpoint(0.0, 2.0, resolution);
    let ys = linspace(0.0, 1.0, resolution);
    let mut rows = Vec::with_capacity(resolution * resolution);
    for &x in &xs {
        for &y in &ys {
            let cell = (x.floor() as i64).min(2);
            let (fx, fy) = (x - cell as f64, y);
            // lower triangle (k,0),(k+1,0),(k,1); upper (k+1,0),(k+1,1),(k,1)
            let (corners, weights) = if fx + fy <= 1.0 {
                (
                    [(cell, 0), (cell + 1, 0), (cell, 1)],
                    [1.0 - fx - fy, fx, fy],
                )
            } else {
                (
                    [(cell + 1, 0), (cell + 1, 1), (cell, 1)],
                    [1.0 - fy, fx + fy - 1.0, 1.0 - fx],
                )
            };
            let mut th = [0.0; 3];
            for ((i, j), w) in corners.iter().zip(weights) {
                let v = vertex(*i, *j);
                for (t, vv) in th.iter_mut().zip(v) {
                    *t += w * vv;
                }
            }
            let a = th.map(|t| (PI * t).cos());
            rows.push([a[0], a[1], a[2], sigma3(a[0], a[1], a[2])]);
        }
    }
    Ok(rows)
}
