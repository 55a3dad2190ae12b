//! Spectral machinery: Hermitian eigendecomposition and everything built on it.
//!
//! Matrix functions are only ever evaluated on Hermitian input through
//! `U·f(Λ)·U*`; there is no general matrix logarithm.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{CMat, C64, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Off-diagonal mass, relative to the Frobenius norm, at which Jacobi stops.
const JACOBI_THRESHOLD: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigendecomposition `H = U·diag(values)·U*`, values ascending.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermEig {
    /// `U·diag(f(λ))·U*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMat {
        let u = &self.vectors;
        let n = u.n();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        CMat::from_fn(n, |i, j| {
            (0..n)
                .map(|k| u[(i, k)] * u[(j, k)].conj() * fl[k])
                .sum()
        })
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::INFINITY)
    }
}

/// Cartan factors `g = k·exp(p)`: `k` unitary, `p` Hermitian.
#[derive(Debug, Clone)]
pub struct PolarParts {
    pub k: CMat,
    pub p: CMat,
}

pub fn herm_eig(h: &CMat) -> Result<HermEig> {
    herm_eig_tol(h, DEFAULT_TOL)
}

pub fn herm_eig_tol(h: &CMat, tol: f64) -> Result<HermEig> {
    let residual = h.hermitian_residual();
    if !(residual <= tol) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(eig_hermitian_part(h))
}

/// Decomposes the Hermitian part of `h` without any validity check.
pub(crate) fn eig_hermitian_part(h: &CMat) -> HermEig {
    let a = h.hermitian_part();
    let (values, vectors) = match a.n() {
        1 => (vec![a[(0, 0)].re], CMat::identity(1)),
        2 => eig2(&a),
        _ => jacobi(a),
    };
    sort_ascending(values, vectors)
}

fn sort_ascending(values: Vec<f64>, vectors: CMat) -> HermEig {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMat::from_fn(n, |i, j| vectors[(i, order[j])]);
    HermEig {
        values: sorted_values,
        vectors: sorted_vectors,
    }
}

fn eig2(a: &CMat) -> (Vec<f64>, CMat) {
    let (p, q) = (a[(0, 0)].re, a[(1, 1)].re);
    let b = a[(0, 1)];
    let scale = p.abs().max(q.abs()).max(b.norm());
    if b.norm() <= f64::EPSILON * scale || scale == 0.0 {
        return (vec![p, q], CMat::identity(2));
    }
    let mean = 0.5 * (p + q);
    let radius = (0.25 * (p - q) * (p - q) + b.norm_sqr()).sqrt();
    let values = [mean - radius, mean + radius];
    // Null vector of H − λ₊, keeping the better conditioned of the two
    // candidates; the other column is its orthogonal complement, so `u`
    // stays unitary even when the spectrum is nearly degenerate.
    let l = values[1];
    let v1 = [b, C64::new(l - p, 0.0)];
    let v2 = [C64::new(l - q, 0.0), b.conj()];
    let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
    let n2 = (v2[0].norm_sqr() + v2[1].norm_sqr()).sqrt();
    let (v, nv) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
    let (x, y) = (v[0] / nv, v[1] / nv);
    let mut u = CMat::zeros(2);
    u[(0, 1)] = x;
    u[(1, 1)] = y;
    u[(0, 0)] = y.conj();
    u[(1, 0)] = -x.conj();
    (values.to_vec(), u)
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of `a_pq`
/// and then applies the real symmetric Jacobi rotation.
fn jacobi(mut a: CMat) -> (Vec<f64>, CMat) {
    let n = a.n();
    let mut v = CMat::identity(n);
    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return (vec![0.0; n], v);
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_norm() <= JACOBI_THRESHOLD * norm {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = (apq / r).conj();
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // U restricted to the (p, q) block.
                let u_pp = C64::new(cs, 0.0);
                let u_pq = C64::new(sn, 0.0);
                let u_qp = phase * (-sn);
                let u_qq = phase * cs;

                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    (values, v)
}

pub fn psd_power(p: &CMat, s: f64) -> Result<CMat> {
    psd_power_tol(p, s, DEFAULT_TOL)
}

/// `P^s` for positive-definite Hermitian `P`.
pub fn psd_power_tol(p: &CMat, s: f64, tol: f64) -> Result<CMat> {
    let eig = herm_eig_tol(p, tol)?;
    let min_eigenvalue = eig.min_value();
    if min_eigenvalue <= tol {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(eig.apply(|l| l.powf(s)))
}

/// `(g*g)^s` for invertible `g`. No positivity threshold: `g*g` of an
/// invertible `g` is positive however small its spectrum gets.
pub(crate) fn gram_power(g: &CMat, s: f64) -> Result<CMat> {
    let eig = eig_hermitian_part(&(&g.adjoint() * g));
    if !(eig.min_value() > 0.0) {
        return Err(Error::Singular);
    }
    Ok(eig.apply(|l| l.powf(s)))
}

pub fn polar(g: &CMat) -> Result<PolarParts> {
    polar_tol(g, DEFAULT_TOL)
}

/// `k = g·(g*g)^{-1/2}`, `p = ½·log(g*g)`.
pub fn polar_tol(g: &CMat, tol: f64) -> Result<PolarParts> {
    if !(g.det().norm() > tol) {
        return Err(Error::Singular);
    }
    let eig = eig_hermitian_part(&(&g.adjoint() * g));
    if !(eig.min_value() > 0.0) {
        return Err(Error::Singular);
    }
    let k = refine_unitary(&(g * &eig.apply(|l| l.powf(-0.5))));
    let p = eig.apply(|l| 0.5 * l.ln());
    Ok(PolarParts { k, p })
}

/// One Newton step `k ← (k + k^{−*})/2` toward the unitary polar factor.
/// The eigenvalue route leaves a unitarity defect of order
/// `ε·cond(g)²`; one step squares it away.
pub(crate) fn refine_unitary(k: &CMat) -> CMat {
    match k.inverse() {
        Ok(inv) => (k + &inv.adjoint()).scale_re(0.5),
        Err(_) => k.clone(),
    }
}

/// `exp(t·H)` for Hermitian `H`.
pub fn exp_herm(h: &CMat, t: f64) -> Result<CMat> {
    let eig = herm_eig(h)?;
    Ok(eig.apply(|l| (t * l).exp()))
}

/// Spectral decomposition of a unitary matrix: `U = V·diag(values)·V*`.
#[derive(Debug, Clone)]
pub struct UnitaryEig {
    pub values: Vec<C64>,
    pub vectors: CMat,
}

impl UnitaryEig {
    /// Smallest pairwise distance between eigenvalues.
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for i in 0..self.values.len() {
            for j in i + 1..self.values.len() {
                gap = gap.min((self.values[i] - self.values[j]).norm());
            }
        }
        gap
    }
}

/// Diagonalizes a unitary (more generally, normal) matrix through the
/// Hermitian pencil `(e^{-iα}U + e^{iα}U*)/2`, whose eigenvalues are
/// `cos(θ_j − α)`. The rotation `α` is picked from a fixed set to keep those
/// cosines as separated as possible.
pub fn unitary_eig(u: &CMat) -> UnitaryEig {
    const CANDIDATES: usize = 8;
    let n = u.n();
    let ua = u.adjoint();
    let mut best: Option<(f64, HermEig)> = None;
    for m in 0..CANDIDATES {
        let alpha = 0.3 + m as f64 * std::f64::consts::PI / CANDIDATES as f64;
        let rot = C64::from_polar(1.0, -alpha);
        let h = (&u.scale(rot) + &ua.scale(rot.conj())).scale_re(0.5);
        let eig = eig_hermitian_part(&h);
        let gap = eig
            .values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, eig));
        }
    }
    let (_, eig) = best.expect("at least one candidate");
    let v = eig.vectors;
    let d = &(&v.adjoint() * u) * &v;
    let values = (0..n).map(|i| d[(i, i)]).collect();
    UnitaryEig { values, vectors: v }
}

/// Haar-distributed element of SU(n).
///
/// A complex Gaussian matrix is orthonormalized column by column (so the
/// triangular factor has a positive real diagonal, which makes the factor
/// unique and the result Haar on U(n)); the determinant is then removed with
/// the principal n-th root.
pub fn haar_su<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    assert!(n >= 1, "dimension must be positive");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    loop {
        let z = CMat::from_fn(n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * s, im * s)
        });
        if let Some(q) = orthonormalize_columns(&z) {
            let det = q.det();
            let root = C64::from_polar(1.0, -det.arg() / n as f64);
            return q.scale(root);
        }
    }
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
fn orthonormalize_columns(z: &CMat) -> Option<CMat> {
    let n = z.n();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = z.column(j);
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    Some(CMat::from_fn(n, |i, j| cols[j][i]))
}
