//! Group elements of SU(n) and SL(n, ℂ), representation tuples, and the
//! quaternion model of SU(2).

use std::fmt;
use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{exp_herm, haar_su, CMat, C64, DEFAULT_TOL};

/// The RNG used throughout; seeded, portable, and reproducible.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SU,
    SL,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::SU => f.write_str("SU"),
            Family::SL => f.write_str("SL"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SU" => Ok(Family::SU),
            "SL" => Ok(Family::SL),
            other => Err(Error::Parse(format!("unknown group family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    pub family: Family,
    pub n: usize,
}

impl GroupDescriptor {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParameter("group dimension must be positive".into()));
        }
        Ok(GroupDescriptor { family, n })
    }

    pub fn su(n: usize) -> Self {
        assert!(n >= 1);
        GroupDescriptor {
            family: Family::SU,
            n,
        }
    }

    pub fn sl(n: usize) -> Self {
        assert!(n >= 1);
        GroupDescriptor {
            family: Family::SL,
            n,
        }
    }

    pub fn contains(&self, g: &CMat, tol: f64) -> bool {
        validate(g, *self, tol)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.n)
    }
}

/// Cartan involution on matrices: the conjugate transpose.
pub fn cartan(g: &CMat) -> CMat {
    g.adjoint()
}

pub fn validate(g: &CMat, d: GroupDescriptor, tol: f64) -> bool {
    if g.n() != d.n || !g.is_finite() {
        return false;
    }
    let det_ok = (g.det() - C64::new(1.0, 0.0)).norm() <= tol;
    match d.family {
        Family::SL => det_ok,
        Family::SU => det_ok && g.unitary_residual() <= tol,
    }
}

/// An ordered tuple `(ρ(x₁), …, ρ(x_r))` of group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct RepTuple {
    descriptor: GroupDescriptor,
    matrices: Vec<CMat>,
}

impl RepTuple {
    pub fn new(descriptor: GroupDescriptor, matrices: Vec<CMat>) -> Result<Self> {
        Self::new_tol(descriptor, matrices, DEFAULT_TOL)
    }

    pub fn new_tol(descriptor: GroupDescriptor, matrices: Vec<CMat>, tol: f64) -> Result<Self> {
        for m in &matrices {
            if m.n() != descriptor.n {
                return Err(Error::DimensionMismatch {
                    expected: descriptor.n,
                    found: m.n(),
                });
            }
            if !validate(m, descriptor, tol) {
                return Err(Error::NotInGroup {
                    group: descriptor.to_string(),
                });
            }
        }
        Ok(RepTuple {
            descriptor,
            matrices,
        })
    }

    /// Skips validation; callers guarantee membership up to roundoff.
    pub(crate) fn from_parts(descriptor: GroupDescriptor, matrices: Vec<CMat>) -> Self {
        debug_assert!(matrices.iter().all(|m| m.n() == descriptor.n));
        RepTuple {
            descriptor,
            matrices,
        }
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        self.descriptor
    }

    pub fn family(&self) -> Family {
        self.descriptor.family
    }

    pub fn n(&self) -> usize {
        self.descriptor.n
    }

    pub fn r(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<CMat> {
        self.matrices
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.matrices
            .iter()
            .all(|m| validate(m, self.descriptor, tol))
    }

    /// Whether every component is unitary within `tol`, whatever the label.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.matrices.iter().all(|m| m.is_unitary(tol))
    }

    /// Same matrices under the SU label; fails if they are not unitary.
    pub fn as_su(&self, tol: f64) -> Result<Self> {
        Self::new_tol(GroupDescriptor::su(self.n()), self.matrices.clone(), tol)
    }

    /// Same matrices under the SL label (always valid for an SU tuple).
    pub fn as_sl(&self) -> Self {
        Self::from_parts(GroupDescriptor::sl(self.n()), self.matrices.clone())
    }

    /// Checks shape and, for SU-only operations, the unitary label.
    pub(crate) fn expect_shape(&self, n: usize, r: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.n(),
            });
        }
        if self.r() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: self.r(),
            });
        }
        Ok(())
    }

    pub(crate) fn expect_su(&self, n: usize, r: usize, tol: f64) -> Result<()> {
        self.expect_shape(n, r)?;
        let d = GroupDescriptor::su(n);
        if self.matrices.iter().all(|m| validate(m, d, tol)) {
            Ok(())
        } else {
            Err(Error::NotInGroup {
                group: d.to_string(),
            })
        }
    }

    pub(crate) fn expect_sl(&self, tol: f64) -> Result<()> {
        let d = GroupDescriptor::sl(self.n());
        if self.matrices.iter().all(|m| validate(m, d, tol)) {
            Ok(())
        } else {
            Err(Error::NotInGroup {
                group: d.to_string(),
            })
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tuple serialization is infallible")
    }

    pub fn from_json(s: &str, tol: f64) -> Result<Self> {
        let wire: TupleWire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        wire.into_tuple(tol)
    }
}

/// Serialized form shared with the command line tool.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleWire {
    pub family: Family,
    pub n: usize,
    pub r: usize,
    pub matrices: Vec<CMat>,
}

impl TupleWire {
    pub fn into_tuple(self, tol: f64) -> Result<RepTuple> {
        if self.matrices.len() != self.r {
            return Err(Error::DimensionMismatch {
                expected: self.r,
                found: self.matrices.len(),
            });
        }
        RepTuple::new_tol(GroupDescriptor::new(self.family, self.n)?, self.matrices, tol)
    }
}

impl From<&RepTuple> for TupleWire {
    fn from(t: &RepTuple) -> Self {
        TupleWire {
            family: t.family(),
            n: t.n(),
            r: t.r(),
            matrices: t.matrices.clone(),
        }
    }
}

impl Serialize for RepTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TupleWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RepTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        TupleWire::deserialize(d)?
            .into_tuple(DEFAULT_TOL)
            .map_err(serde::de::Error::custom)
    }
}

/// `g·ρ(xᵢ)·g⁻¹` componentwise. Conjugating an SU tuple by a non-unitary `g`
/// yields an SL tuple.
pub fn conjugate_tuple(g: &CMat, rho: &RepTuple) -> Result<RepTuple> {
    if g.n() != rho.n() {
        return Err(Error::DimensionMismatch {
            expected: rho.n(),
            found: g.n(),
        });
    }
    let gi = g.inverse()?;
    let matrices = rho.matrices.iter().map(|m| &(g * m) * &gi).collect();
    let descriptor = match rho.family() {
        Family::SU if !g.is_unitary(DEFAULT_TOL) => GroupDescriptor::sl(rho.n()),
        _ => rho.descriptor,
    };
    Ok(RepTuple::from_parts(descriptor, matrices))
}

/// Random traceless Hermitian matrix: real standard normal diagonal, standard
/// complex normal off-diagonal, then the mean of the diagonal removed.
pub fn random_traceless_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = CMat::zeros(n);
    for i in 0..n {
        h[(i, i)] = C64::new(rng.sample(StandardNormal), 0.0);
        for j in i + 1..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = C64::new(re * s, im * s);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    let mean = h.trace().re / n as f64;
    for i in 0..n {
        h[(i, i)] -= mean;
    }
    h
}

/// `k·exp(p)` with `k` Haar and `p` from [`random_traceless_hermitian`].
pub fn random_sl<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let k = haar_su(n, rng);
    let p = random_traceless_hermitian(n, rng);
    let e = exp_herm(&p, 1.0).expect("constructed Hermitian");
    &k * &e
}

pub fn sample_tuple<R: Rng + ?Sized>(d: GroupDescriptor, r: usize, rng: &mut R) -> RepTuple {
    let matrices = (0..r)
        .map(|_| match d.family {
            Family::SU => haar_su(d.n, rng),
            Family::SL => random_sl(d.n, rng),
        })
        .collect();
    RepTuple::from_parts(d, matrices)
}

/// `a + bi + cj + dk`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    /// Real part; equals half the trace of the corresponding matrix.
    pub fn re(&self) -> f64 {
        self.a
    }

    pub fn im(&self) -> [f64; 3] {
        [self.b, self.c, self.d]
    }

    pub fn dist(&self, o: &Quaternion) -> f64 {
        Quaternion::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
            .norm_sqr()
            .sqrt()
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
        )
    }
}

pub fn to_quaternion(g: &CMat) -> Result<Quaternion> {
    to_quaternion_tol(g, DEFAULT_TOL)
}

/// Reads `g = [[α, β], [−β̄, ᾱ]]` as `α + βj`.
pub fn to_quaternion_tol(g: &CMat, tol: f64) -> Result<Quaternion> {
    if !validate(g, GroupDescriptor::su(2), tol) {
        return Err(Error::NotInGroup {
            group: "SU(2)".into(),
        });
    }
    let (alpha, beta) = (g[(0, 0)], g[(0, 1)]);
    Ok(Quaternion::new(alpha.re, alpha.im, beta.re, beta.im))
}

pub fn from_quaternion(q: Quaternion) -> Result<CMat> {
    from_quaternion_tol(q, DEFAULT_TOL)
}

pub fn from_quaternion_tol(q: Quaternion, tol: f64) -> Result<CMat> {
    if !((q.norm_sqr() - 1.0).abs() <= tol) {
        return Err(Error::NotInGroup {
            group: "unit quaternions".into(),
        });
    }
    Ok(quaternion_matrix(q))
}

/// The embedding `ℍ → M₂(ℂ)` without a norm check.
pub fn quaternion_matrix(q: Quaternion) -> CMat {
    let alpha = C64::new(q.a, q.b);
    let beta = C64::new(q.c, q.d);
    CMat::from_fn(2, |i, j| match (i, j) {
        (0, 0) => alpha,
        (0, 1) => beta,
        (1, 0) => -beta.conj(),
        _ => alpha.conj(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn cartan_examples() {
        assert_eq!(cartan(&CMat::identity(2)), CMat::identity(2));
        let n = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let expected = CMat::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(cartan(&n), expected);
        let mut rng = seeded_rng(1);
        let k = haar_su(3, &mut rng);
        assert!(cartan(&k).dist(&k.inverse().unwrap()) < 1e-12);
        let g = random_sl(3, &mut rng);
        assert!(cartan(&(&k * &g)).dist(&(&cartan(&g) * &cartan(&k))) < 1e-14);
    }

    #[test]
    fn validate_examples() {
        let su2 = GroupDescriptor::su(2);
        let sl2 = GroupDescriptor::sl(2);
        assert!(validate(&CMat::identity(2), su2, 1e-9));
        let u = CMat::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(!validate(&u, su2, 1e-9));
        assert!(validate(&u, sl2, 1e-9));
        let mut rng = seeded_rng(2);
        assert!(validate(&haar_su(3, &mut rng), GroupDescriptor::su(3), 1e-9));
        assert!(!validate(&CMat::identity(3), su2, 1e-9));
    }

    #[test]
    fn quaternion_examples() {
        assert_eq!(to_quaternion(&CMat::identity(2)).unwrap(), Quaternion::ONE);
        let i = CMat::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
        assert_eq!(to_quaternion(&i).unwrap(), Quaternion::I);
        let j = CMat::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        assert_eq!(to_quaternion(&j).unwrap(), Quaternion::J);
        assert_eq!(quaternion_matrix(Quaternion::I), i);
        // ij = k under both models
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(
            to_quaternion(&(&i * &j)).unwrap(),
            Quaternion::I * Quaternion::J
        );
        let bad = CMat::from_real_diag(&[2.0, 0.5]);
        assert!(matches!(to_quaternion(&bad), Err(Error::NotInGroup { .. })));
        assert!(from_quaternion(Quaternion::new(1.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn conjugation_preserves_traces_and_labels() {
        let mut rng = seeded_rng(3);
        let rho = sample_tuple(GroupDescriptor::su(3), 2, &mut rng);
        assert_eq!(conjugate_tuple(&CMat::identity(3), &rho).unwrap(), rho);
        let k = haar_su(3, &mut rng);
        let out = conjugate_tuple(&k, &rho).unwrap();
        assert_eq!(out.family(), Family::SU);
        assert!(out.is_valid(1e-9));
        let g = random_sl(3, &mut rng);
        let out = conjugate_tuple(&g, &rho).unwrap();
        assert_eq!(out.family(), Family::SL);
        for (a, b) in rho.matrices().iter().zip(out.matrices()) {
            assert!((a.trace() - b.trace()).norm() < 1e-12);
        }
        assert!(matches!(
            conjugate_tuple(&CMat::identity(2), &rho),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            conjugate_tuple(&CMat::zeros(3), &rho).unwrap_err(),
            Error::Singular
        );
    }

    #[test]
    fn sampling() {
        let mut rng = seeded_rng(7);
        let t = sample_tuple(GroupDescriptor::su(2), 3, &mut rng);
        assert_eq!(t.r(), 3);
        assert!(t.is_valid(1e-12));
        let t = sample_tuple(GroupDescriptor::sl(3), 2, &mut rng);
        for m in t.matrices() {
            assert!((m.det() - c(1.0, 0.0)).norm() < 1e-10);
            assert!(!m.is_unitary(1e-3));
        }
        let a = sample_tuple(GroupDescriptor::sl(3), 2, &mut seeded_rng(5));
        let b = sample_tuple(GroupDescriptor::sl(3), 2, &mut seeded_rng(5));
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let t = sample_tuple(GroupDescriptor::sl(2), 2, &mut seeded_rng(4));
        let s = t.to_json();
        assert!(s.starts_with(r#"{"family":"SL","n":2,"r":2,"matrices":[[[["#));
        assert_eq!(RepTuple::from_json(&s, 1e-9).unwrap(), t);
        let bad = r#"{"family":"SU","n":2,"r":1,"matrices":[[[[2,0],[0,0]],[[0,0],[0.5,0]]]]}"#;
        assert!(matches!(
            RepTuple::from_json(bad, 1e-9),
            Err(Error::NotInGroup { .. })
        ));
        let short = r#"{"family":"SU","n":2,"r":2,"matrices":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert!(matches!(
            RepTuple::from_json(short, 1e-9),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
