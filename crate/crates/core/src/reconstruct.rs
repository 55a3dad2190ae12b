//! Inverse problems: explicit SU(2) tuples realizing given trace coordinates,
//! and deciding whether two unitary tuples are conjugate by SU(n).

use crate::error::{Error, Result};
use crate::groups::{quaternion_matrix, GroupDescriptor, Quaternion, RepTuple};
use crate::invariants::{rst_tol, su2_rank3_coords, SU2Rank2Coords, SU2Rank3Coords};
use crate::linalg::{unitary_eig, CMat, C64};
use crate::semialgebraic::{in_su2_rank2_image, in_su2_rank3_image};

#[derive(Debug, Clone, PartialEq)]
pub struct LiftResult {
    pub tuples: Vec<RepTuple>,
    /// Sign of the last free coordinate used for each tuple (rank 3).
    pub signs: Vec<i8>,
    pub unique: bool,
    /// Rank 3 only.
    pub t123: Option<f64>,
}

fn su2_tuple(quats: Vec<Quaternion>) -> RepTuple {
    RepTuple::from_parts(
        GroupDescriptor::su(2),
        quats.into_iter().map(quaternion_matrix).collect(),
    )
}

/// `a + v` as a unit quaternion, renormalizing the roundoff in `|v|`.
fn unit(a: f64, v: [f64; 3]) -> Quaternion {
    let q = Quaternion::new(a, v[0], v[1], v[2]);
    let n = q.norm_sqr().sqrt();
    if n > 0.0 {
        Quaternion::new(q.a / n, q.b / n, q.c / n, q.d / n)
    } else {
        Quaternion::ONE
    }
}

fn clamp1(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

fn sqrt0(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

/// `X₁ = a₁ + b₁i`, `X₂ = a₂ + b₂i + c₂j` with `b₁ = √(1−a₁²)`,
/// `b₂ = (a₃ − a₁a₂)/b₁`, `c₂ = √(1 − a₂² − b₂²)`. When `b₁ ≤ tol`, `X₁ = ±1`
/// and `X₂ = a₂ + √(1−a₂²)i`.
pub fn su2_rank2_lift(a: &SU2Rank2Coords, tol: f64) -> Result<LiftResult> {
    let verdict = in_su2_rank2_image(a, tol);
    if !verdict.inside {
        return Err(Error::NotInImage(format!(
            "({}, {}, {}) violates the rank-2 conditions by {:.3e}",
            a.a1,
            a.a2,
            a.a3,
            -verdict.worst()
        )));
    }
    let (a1, a2, a3) = (clamp1(a.a1), clamp1(a.a2), clamp1(a.a3));
    let b1 = sqrt0(1.0 - a1 * a1);
    let room = sqrt0(1.0 - a2 * a2);
    let (b2, c2) = if b1 > tol {
        let b2 = ((a3 - a1 * a2) / b1).clamp(-room, room);
        (b2, sqrt0(1.0 - a2 * a2 - b2 * b2))
    } else {
        (room, 0.0)
    };
    let x1 = unit(a1, [b1, 0.0, 0.0]);
    let x2 = unit(a2, [b2, c2, 0.0]);
    Ok(LiftResult {
        tuples: vec![su2_tuple(vec![x1, x2])],
        signs: vec![1],
        unique: true,
        t123: None,
    })
}

/// Index orderings tried for the pivot pair, in order of preference.
const ORDERINGS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 0, 2],
    [2, 0, 1],
    [0, 2, 1],
    [1, 2, 0],
    [2, 1, 0],
];

/// Lifts rank-3 coordinates to SU(2) triples.
///
/// The imaginary parts `v_j` of `X_j` are rebuilt from their Gram matrix
/// `r` in a frame adapted to the pivot pair: `v₁ = (b₁, 0, 0)`,
/// `v₂ = (b₂, 0, d₂)`, `v₃ = (b₃, c₃, d₃)` in the `(i, j, k)` basis. `c₃` is
/// fixed up to sign; the two signs are mirror images of each other and agree
/// exactly when the three vectors are coplanar (`t₁₂₃ = 0`). The pivot pair is
/// the one with the largest `s_jk`. If every pair is reducible the triple is
/// built on a common axis.
pub fn su2_rank3_lift(c: &SU2Rank3Coords, sign: Option<i8>, tol: f64) -> Result<LiftResult> {
    if let Some(s) = sign {
        if s != 1 && s != -1 {
            return Err(Error::BadParameter(format!("sign must be ±1, got {s}")));
        }
    }
    let verdict = in_su2_rank3_image(c, tol);
    if !verdict.inside {
        return Err(Error::NotInImage(format!(
            "coordinates violate the rank-3 conditions by {:.3e}",
            -verdict.worst()
        )));
    }
    let inv = rst_tol(c, tol);
    let unique = inv.t123.abs() <= tol;
    let signs: Vec<i8> = match sign {
        Some(s) => vec![s],
        None if unique => vec![1],
        None => vec![1, -1],
    };

    let best = ORDERINGS
        .iter()
        .copied()
        .enumerate()
        .max_by(|(i, p), (j, q)| {
            inv.s(p[0], p[1])
                .total_cmp(&inv.s(q[0], q[1]))
                .then(j.cmp(i))
        })
        .map(|(_, p)| p)
        .expect("nonempty orderings");

    let tuples = if inv.s(best[0], best[1]) > tol {
        signs
            .iter()
            .map(|&s| generic_lift(c, best, s))
            .collect::<Vec<_>>()
    } else {
        let t = collinear_lift(c);
        let back = su2_rank3_coords(&t)?;
        let err = back.max_diff(c);
        if err > (10.0 * tol).max(1e-8) {
            return Err(Error::DegenerateUnhandled(format!(
                "all pairs reducible and the common-axis triple misses by {err:.3e}"
            )));
        }
        vec![t; signs.len()]
    };
    Ok(LiftResult {
        tuples,
        signs,
        unique,
        t123: Some(inv.t123),
    })
}

fn generic_lift(c: &SU2Rank3Coords, perm: [usize; 3], sign: i8) -> RepTuple {
    let p = c.permuted(perm);
    let inv = rst_tol(&p, 0.0);
    let r = inv.r;
    let b1 = sqrt0(r[0][0]);
    let b2 = r[0][1] / b1;
    let b3 = r[0][2] / b1;
    let d2 = sqrt0(inv.s12) / b1;
    let d3 = (r[1][2] * b1 * b1 - r[0][1] * r[0][2]) / (d2 * b1 * b1);
    let c3 = f64::from(sign) * sqrt0(r[2][2] - b3 * b3 - d3 * d3);
    let local = [
        unit(p.a1, [b1, 0.0, 0.0]),
        unit(p.a2, [b2, 0.0, d2]),
        unit(p.a3, [b3, c3, d3]),
    ];
    let mut quats = [Quaternion::ONE; 3];
    for (slot, &orig) in perm.iter().enumerate() {
        quats[orig] = local[slot];
    }
    su2_tuple(quats.to_vec())
}

/// All imaginary parts on the `i` axis, signed to match `r_jk`.
fn collinear_lift(c: &SU2Rank3Coords) -> RepTuple {
    let inv = rst_tol(c, 0.0);
    let lens: Vec<f64> = (0..3).map(|j| sqrt0(inv.r[j][j])).collect();
    let pivot = (0..3)
        .max_by(|&i, &j| lens[i].total_cmp(&lens[j]).then(j.cmp(&i)))
        .expect("three indices");
    let quats = (0..3)
        .map(|k| {
            let b = if k == pivot || inv.r[pivot][k] >= 0.0 {
                lens[k]
            } else {
                -lens[k]
            };
            unit(clamp1(c.a(k)), [b, 0.0, 0.0])
        })
        .collect();
    su2_tuple(quats)
}

/// Looks for `k ∈ SU(n)` with `k·ρ₁·k⁻¹ = ρ₂`.
///
/// Both first components are diagonalized; every permutation matching their
/// spectra is tried, and the remaining diagonal phases are fixed along a
/// spanning tree of the largest off-diagonal entries of the other
/// components. Requires the first component of `ρ₁` to have distinct
/// eigenvalues.
pub fn unitary_conjugacy(rho1: &RepTuple, rho2: &RepTuple, tol: f64) -> Result<Option<CMat>> {
    if rho1.n() != rho2.n() {
        return Err(Error::DimensionMismatch {
            expected: rho1.n(),
            found: rho2.n(),
        });
    }
    if rho1.r() != rho2.r() {
        return Err(Error::DimensionMismatch {
            expected: rho1.r(),
            found: rho2.r(),
        });
    }
    let n = rho1.n();
    let r = rho1.r();
    rho1.expect_su(n, r, tol)?;
    rho2.expect_su(n, r, tol)?;
    if r == 0 {
        return Ok(Some(CMat::identity(n)));
    }
    let e1 = unitary_eig(&rho1.matrices()[0]);
    let gap = e1.min_gap();
    if gap <= tol {
        return Err(Error::DegenerateSpectrum { gap });
    }
    let e2 = unitary_eig(&rho2.matrices()[0]);
    let (v1, v2) = (&e1.vectors, &e2.vectors);
    let a: Vec<CMat> = rho1
        .matrices()
        .iter()
        .map(|x| &(&v1.adjoint() * x) * v1)
        .collect();
    let b: Vec<CMat> = rho2
        .matrices()
        .iter()
        .map(|y| &(&v2.adjoint() * y) * v2)
        .collect();

    let accept = 10.0 * tol;
    let mut found = None;
    for_each_matching(&e1.values, &e2.values, accept, &mut |pi| {
        let bp: Vec<CMat> = b
            .iter()
            .map(|m| CMat::from_fn(n, |i, j| m[(pi[i], pi[j])]))
            .collect();
        let phases = torus_phases(&a, &bp, tol);
        let u = CMat::from_fn(n, |i, j| if pi[j] == i { phases[j] } else { C64::new(0.0, 0.0) });
        let mut k = &(v2 * &u) * &v1.adjoint();
        let det = k.det();
        k = k.scale(C64::from_polar(1.0, -det.arg() / n as f64));
        let err = rho1
            .matrices()
            .iter()
            .zip(rho2.matrices())
            .map(|(x, y)| (&(&k * x) * &k.adjoint()).dist(y))
            .fold(0.0, f64::max);
        if err <= accept {
            found = Some(k);
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Calls `f` on each permutation `π` with `|μ_{π(i)} − λ_i| ≤ tol`, stopping
/// once `f` returns true.
fn for_each_matching(
    lambda: &[C64],
    mu: &[C64],
    tol: f64,
    f: &mut dyn FnMut(&[usize]) -> bool,
) {
    fn rec(
        i: usize,
        lambda: &[C64],
        mu: &[C64],
        tol: f64,
        used: &mut Vec<bool>,
        pi: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == lambda.len() {
            return f(pi);
        }
        for j in 0..mu.len() {
            if !used[j] && (mu[j] - lambda[i]).norm() <= tol {
                used[j] = true;
                pi.push(j);
                if rec(i + 1, lambda, mu, tol, used, pi, f) {
                    return true;
                }
                pi.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut used = vec![false; mu.len()];
    let mut pi = Vec::with_capacity(lambda.len());
    rec(0, lambda, mu, tol, &mut used, &mut pi, f);
}

/// Unit phases `t` with `t_p·t̄_q·a_pq ≈ b_pq`, grown from index 0 along the
/// largest available entries. Indices not linked by any entry above `tol`
/// start a new component with phase 1.
fn torus_phases(a: &[CMat], b: &[CMat], tol: f64) -> Vec<C64> {
    let n = a[0].n();
    let mut phase: Vec<Option<C64>> = vec![None; n];
    phase[0] = Some(C64::new(1.0, 0.0));
    loop {
        let mut best: Option<(f64, usize, usize, usize)> = None;
        for (m, am) in a.iter().enumerate() {
            for p in 0..n {
                if phase[p].is_none() {
                    continue;
                }
                for q in 0..n {
                    if phase[q].is_some() {
                        continue;
                    }
                    let w = am[(p, q)].norm();
                    if w > tol && best.is_none_or(|(bw, ..)| w > bw) {
                        best = Some((w, m, p, q));
                    }
                }
            }
        }
        match best {
            Some((_, m, p, q)) => {
                let tp = phase[p].expect("visited");
                let z = (b[m][(p, q)] / (tp * a[m][(p, q)])).conj();
                let norm = z.norm();
                phase[q] = Some(if norm > 0.0 { z / norm } else { C64::new(1.0, 0.0) });
            }
            None => match phase.iter().position(Option::is_none) {
                Some(q) => phase[q] = Some(C64::new(1.0, 0.0)),
                None => break,
            },
        }
    }
    phase.into_iter().map(|p| p.expect("all assigned")).collect()
}
