//! Trace words and the named coordinate systems on `SU(2)²`, `SU(2)³` and
//! `SU(3)²`, plus the torus-invariant minors of a 3×3 matrix.

use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Family, RepTuple};
use crate::linalg::{CMat, C64, DEFAULT_TOL};

/// Imaginary parts at most this large are treated as roundoff when
/// realifying coordinates of unitary tuples.
pub const REALIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// Generator index, starting at 1.
    pub generator: usize,
    pub inverse: bool,
}

/// A word in the free generators `x₁, …, x_r` and their inverses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Builds a word from `(generator, exponent)` pairs, exponent `±1`.
    pub fn from_pairs(pairs: &[(usize, i32)]) -> Result<Self> {
        let letters = pairs
            .iter()
            .map(|&(generator, e)| {
                if generator == 0 {
                    return Err(Error::Parse("generators are numbered from 1".into()));
                }
                match e {
                    1 => Ok(Letter {
                        generator,
                        inverse: false,
                    }),
                    -1 => Ok(Letter {
                        generator,
                        inverse: true,
                    }),
                    _ => Err(Error::Parse(format!("exponent {e} is not ±1"))),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Word { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    generator: l.generator,
                    inverse: !l.inverse,
                })
                .collect(),
        }
    }

    /// Moves the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        Word { letters }
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.generator).max().unwrap_or(0)
    }

    /// Positive words of length `1..=max_len` in `r` generators, one per
    /// cyclic class (the lexicographically least rotation).
    pub fn positive_necklaces(r: usize, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 1..=max_len {
            for code in 0..r.pow(len as u32) {
                let mut idx = vec![0usize; len];
                let mut rest = code;
                for slot in idx.iter_mut().rev() {
                    *slot = rest % r + 1;
                    rest /= r;
                }
                let least = (1..len).all(|k| {
                    let mut rot = idx.clone();
                    rot.rotate_left(k);
                    idx <= rot
                });
                if least {
                    let pairs: Vec<(usize, i32)> = idx.iter().map(|&g| (g, 1)).collect();
                    out.push(Word::from_pairs(&pairs).expect("valid letters"));
                }
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{}", l.generator)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `x1 x2^-1 x1`. The empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for tok in s.split_whitespace() {
            let body = tok
                .strip_prefix('x')
                .or_else(|| tok.strip_prefix('X'))
                .ok_or_else(|| Error::Parse(format!("bad letter {tok:?}")))?;
            let (gen, exp) = match body.split_once('^') {
                Some((g, e)) => {
                    let e: i32 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                    (g, e)
                }
                None => (body, 1),
            };
            let gen: usize = gen
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator in {tok:?}")))?;
            pairs.push((gen, exp));
        }
        Word::from_pairs(&pairs)
    }
}

fn inverse_of(m: &CMat, family: Family) -> Result<CMat> {
    match family {
        Family::SU => Ok(m.adjoint()),
        Family::SL => m.inverse(),
    }
}

/// Evaluates `w` on `ρ`.
pub fn eval_word(rho: &RepTuple, w: &Word) -> Result<CMat> {
    let r = rho.r();
    if let Some(l) = w.letters.iter().find(|l| l.generator > r) {
        return Err(Error::IndexOutOfRange {
            index: l.generator,
            rank: r,
        });
    }
    let mut acc = CMat::identity(rho.n());
    for l in &w.letters {
        let m = &rho.matrices()[l.generator - 1];
        acc = if l.inverse {
            &acc * &inverse_of(m, rho.family())?
        } else {
            &acc * m
        };
    }
    Ok(acc)
}

pub fn trace_word(rho: &RepTuple, w: &Word) -> Result<C64> {
    Ok(eval_word(rho, w)?.trace())
}

/// `a₁ = Re X₁`, `a₂ = Re X₂`, `a₃ = Re(X₁⁻¹X₂)`, real parts in the
/// quaternion sense (half the trace).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SU2Rank2Coords {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl SU2Rank2Coords {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        SU2Rank2Coords { a1, a2, a3 }
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        max_abs_diff(&self.to_array(), &o.to_array())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SU2Rank3Coords {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a12: f64,
    pub a13: f64,
    pub a23: f64,
}

impl SU2Rank3Coords {
    pub fn from_array(v: [f64; 6]) -> Self {
        SU2Rank3Coords {
            a1: v[0],
            a2: v[1],
            a3: v[2],
            a12: v[3],
            a13: v[4],
            a23: v[5],
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.a1, self.a2, self.a3, self.a12, self.a13, self.a23]
    }

    /// `a_j` for `j ∈ {0, 1, 2}`.
    pub fn a(&self, j: usize) -> f64 {
        [self.a1, self.a2, self.a3][j]
    }

    /// `a_jk` for distinct `j, k ∈ {0, 1, 2}`; symmetric in `j, k`.
    pub fn a_pair(&self, j: usize, k: usize) -> f64 {
        match (j.min(k), j.max(k)) {
            (0, 1) => self.a12,
            (0, 2) => self.a13,
            (1, 2) => self.a23,
            _ => panic!("a_pair needs two distinct indices below 3"),
        }
    }

    /// Relabels the generators: output slot `i` holds input generator `perm[i]`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        SU2Rank3Coords {
            a1: self.a(perm[0]),
            a2: self.a(perm[1]),
            a3: self.a(perm[2]),
            a12: self.a_pair(perm[0], perm[1]),
            a13: self.a_pair(perm[0], perm[2]),
            a23: self.a_pair(perm[1], perm[2]),
        }
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        max_abs_diff(&self.to_array(), &o.to_array())
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Half the trace of an SU(2) element, i.e. its quaternion real part.
fn re2(m: &CMat) -> f64 {
    0.5 * m.trace().re
}

pub fn su2_rank2_coords(rho: &RepTuple) -> Result<SU2Rank2Coords> {
    rho.expect_su(2, 2, DEFAULT_TOL)?;
    let [x1, x2] = [&rho.matrices()[0], &rho.matrices()[1]];
    Ok(SU2Rank2Coords {
        a1: re2(x1),
        a2: re2(x2),
        a3: re2(&(&x1.adjoint() * x2)),
    })
}

/// Both sides of the Fricke identity for the commutator:
/// `Re(X₁X₂X₁⁻¹X₂⁻¹)` by multiplication, and `2(a₁²+a₂²+a₃²) − 4a₁a₂a₃ − 1`.
pub fn fricke_check(rho: &RepTuple) -> Result<(f64, f64)> {
    let a = su2_rank2_coords(rho)?;
    let [x1, x2] = [&rho.matrices()[0], &rho.matrices()[1]];
    let comm = &(&(x1 * x2) * &x1.adjoint()) * &x2.adjoint();
    let lhs = re2(&comm);
    let rhs = 2.0 * (a.a1 * a.a1 + a.a2 * a.a2 + a.a3 * a.a3) - 4.0 * a.a1 * a.a2 * a.a3 - 1.0;
    Ok((lhs, rhs))
}

pub fn su2_rank3_coords(rho: &RepTuple) -> Result<SU2Rank3Coords> {
    rho.expect_su(2, 3, DEFAULT_TOL)?;
    let x = rho.matrices();
    let pair = |j: usize, k: usize| re2(&(&x[j].adjoint() * &x[k]));
    Ok(SU2Rank3Coords {
        a1: re2(&x[0]),
        a2: re2(&x[1]),
        a3: re2(&x[2]),
        a12: pair(0, 1),
        a13: pair(0, 2),
        a23: pair(1, 2),
    })
}

/// Derived scalars of a rank-3 coordinate point.
///
/// `r` is the Gram matrix of the imaginary parts `Im X_j` (as vectors in ℝ³),
/// `s_jk` the Gram determinant of the pair `(j, k)`, `l_jk` the cosine of the
/// angle between `Im X_j` and `Im X_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RSTInvariants {
    pub r: [[f64; 3]; 3],
    pub s12: f64,
    pub s13: f64,
    pub s23: f64,
    /// `det(r)/(r₁₁r₂₂r₃₃)`; reported as 0 when some `r_jj ≤ tol`.
    pub t123: f64,
    pub det_r: f64,
    pub l12: Option<f64>,
    pub l13: Option<f64>,
    pub l23: Option<f64>,
}

impl RSTInvariants {
    pub fn s(&self, j: usize, k: usize) -> f64 {
        match (j.min(k), j.max(k)) {
            (0, 1) => self.s12,
            (0, 2) => self.s13,
            (1, 2) => self.s23,
            _ => panic!("s needs two distinct indices below 3"),
        }
    }

    /// `1 − l₁₂² − l₁₃² − l₂₃² + 2l₁₂l₁₃l₂₃`, when all cosines are defined.
    pub fn t123_from_cosines(&self) -> Option<f64> {
        let (a, b, c) = (self.l12?, self.l13?, self.l23?);
        Some(1.0 - a * a - b * b - c * c + 2.0 * a * b * c)
    }
}

pub fn rst(c: &SU2Rank3Coords) -> RSTInvariants {
    rst_tol(c, DEFAULT_TOL)
}

pub fn rst_tol(c: &SU2Rank3Coords, tol: f64) -> RSTInvariants {
    let mut r = [[0.0; 3]; 3];
    for j in 0..3 {
        r[j][j] = 1.0 - c.a(j) * c.a(j);
        for k in 0..3 {
            if j != k {
                r[j][k] = c.a_pair(j, k) - c.a(j) * c.a(k);
            }
        }
    }
    let s = |j: usize, k: usize| {
        let (aj, ak, ajk) = (c.a(j), c.a(k), c.a_pair(j, k));
        1.0 - aj * aj - ak * ak - ajk * ajk + 2.0 * aj * ak * ajk
    };
    let det_r = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    let defined = (0..3).all(|j| r[j][j] > tol);
    let l = |j: usize, k: usize| defined.then(|| r[j][k] / (r[j][j] * r[k][k]).sqrt());
    RSTInvariants {
        r,
        s12: s(0, 1),
        s13: s(0, 2),
        s23: s(1, 2),
        t123: if defined {
            det_r / (r[0][0] * r[1][1] * r[2][2])
        } else {
            0.0
        },
        det_r,
        l12: l(0, 1),
        l13: l(0, 2),
        l23: l(1, 2),
    }
}

/// The ten traces `t_{±k}` on a pair in `SL(3)`:
/// `t_{±1} = tr X₁^{±1}`, `t_{±2} = tr X₂^{±1}`, `t₃ = tr X₁X₂`,
/// `t₋₃ = tr X₁⁻¹X₂⁻¹`, `t₄ = tr X₁X₂⁻¹`, `t₋₄ = tr X₁⁻¹X₂`,
/// `t₅ = tr X₁X₂X₁⁻¹X₂⁻¹`, `t₋₅ = tr X₂X₁X₂⁻¹X₁⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU3Rank2Traces {
    /// `t[k-1] = t_k`.
    pub pos: [C64; 5],
    /// `neg[k-1] = t_{−k}`.
    pub neg: [C64; 5],
}

impl SU3Rank2Traces {
    pub fn t(&self, k: i32) -> C64 {
        assert!(k != 0 && k.abs() <= 5, "trace index {k} out of range");
        if k > 0 {
            self.pos[(k - 1) as usize]
        } else {
            self.neg[(-k - 1) as usize]
        }
    }

    pub fn named(&self) -> Vec<(String, C64)> {
        let mut out = Vec::with_capacity(10);
        for k in 1..=5 {
            out.push((format!("t{k}"), self.t(k)));
            out.push((format!("t-{k}"), self.t(-k)));
        }
        out
    }
}

pub fn su3_traces(rho: &RepTuple) -> Result<SU3Rank2Traces> {
    rho.expect_shape(3, 2)?;
    rho.expect_sl(DEFAULT_TOL)?;
    let x1 = &rho.matrices()[0];
    let x2 = &rho.matrices()[1];
    let y1 = inverse_of(x1, rho.family())?;
    let y2 = inverse_of(x2, rho.family())?;
    let x12 = x1 * x2;
    let y12 = &y1 * &y2;
    let x21 = x2 * x1;
    let y21 = &y2 * &y1;
    Ok(SU3Rank2Traces {
        pos: [
            x1.trace(),
            x2.trace(),
            x12.trace(),
            (x1 * &y2).trace(),
            (&x12 * &y12).trace(),
        ],
        neg: [
            y1.trace(),
            y2.trace(),
            y12.trace(),
            (&y1 * x2).trace(),
            (&x21 * &y21).trace(),
        ],
    })
}

/// `u_k = (t_k + t_{−k})/2`, `u_{−k} = (t_k − t_{−k})/2i` for `k = 1..4`, and
/// `u₅ = (t₅ − t₋₅)/2i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UCoords {
    /// `(u_k, u_{−k})` for `k = 1..4`.
    pub pairs: [(C64, C64); 4],
    pub u5: C64,
}

impl UCoords {
    pub fn values(&self) -> [C64; 9] {
        let p = &self.pairs;
        [
            p[0].0, p[0].1, p[1].0, p[1].1, p[2].0, p[2].1, p[3].0, p[3].1, self.u5,
        ]
    }

    pub fn names() -> [&'static str; 9] {
        ["u1", "u-1", "u2", "u-2", "u3", "u-3", "u4", "u-4", "u5"]
    }

    pub fn max_imag(&self) -> f64 {
        self.values()
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.max_imag() == 0.0
    }

    /// Drops imaginary parts up to [`REALIFY_TOL`]; anything larger means the
    /// input was not unitary.
    pub fn realify(&self) -> Result<UCoords> {
        let m = self.max_imag();
        if m > REALIFY_TOL {
            return Err(Error::DataIntegrity(format!(
                "u-coordinates have imaginary parts up to {m:.3e}"
            )));
        }
        let re = |z: C64| C64::new(z.re, 0.0);
        Ok(UCoords {
            pairs: self.pairs.map(|(a, b)| (re(a), re(b))),
            u5: re(self.u5),
        })
    }
}

pub fn u_coords(t: &SU3Rank2Traces) -> UCoords {
    let two_i = C64::new(0.0, 2.0);
    let mut pairs = [(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 4];
    for (k, p) in pairs.iter_mut().enumerate() {
        let (a, b) = (t.pos[k], t.neg[k]);
        *p = ((a + b) * 0.5, (a - b) / two_i);
    }
    UCoords {
        pairs,
        u5: (t.pos[4] - t.neg[4]) / two_i,
    }
}

/// `t₅` and `t₋₅` are the roots of `z² − Pz + Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PQRecord {
    pub p: C64,
    pub q: C64,
    pub tau: C64,
}

impl PQRecord {
    pub fn max_imag(&self) -> f64 {
        self.p.im.abs().max(self.q.im.abs())
    }

    pub fn realify(&self) -> Result<PQRecord> {
        let m = self.max_imag();
        if m > REALIFY_TOL {
            return Err(Error::DataIntegrity(format!(
                "P, Q have imaginary parts up to {m:.3e}"
            )));
        }
        Ok(PQRecord {
            p: C64::new(self.p.re, 0.0),
            q: C64::new(self.q.re, 0.0),
            tau: self.tau,
        })
    }

    /// `P² − 4Q`.
    pub fn discriminant(&self) -> C64 {
        self.p * self.p - self.q * 4.0
    }
}

pub fn pq(t: &SU3Rank2Traces) -> PQRecord {
    let (a, b) = (t.pos[4], t.neg[4]);
    PQRecord {
        p: a + b,
        q: a * b,
        tau: a,
    }
}

pub fn transpose_tuple(rho: &RepTuple) -> RepTuple {
    RepTuple::from_parts(
        rho.descriptor(),
        rho.matrices().iter().map(CMat::transpose).collect(),
    )
}

/// Torus-invariant functions of a 3×3 matrix `X`: the diagonal `m_k = x_kk`,
/// the principal 2×2 cofactors `m_{−k}` (so `m_{−k}(X) = m_k(X⁻¹)` when
/// `det X = 1`), and the cyclic product `m₄ = x₁₂x₂₃x₃₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorsRecord {
    pub m1: C64,
    pub m2: C64,
    pub m3: C64,
    pub m_1: C64,
    pub m_2: C64,
    pub m_3: C64,
    pub m4: C64,
}

impl MinorsRecord {
    pub fn to_array(&self) -> [C64; 7] {
        [
            self.m1, self.m2, self.m3, self.m_1, self.m_2, self.m_3, self.m4,
        ]
    }
}

pub fn su3_minors(x: &CMat) -> Result<MinorsRecord> {
    if x.n() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: x.n(),
        });
    }
    let e = |i: usize, j: usize| x[(i - 1, j - 1)];
    Ok(MinorsRecord {
        m1: e(1, 1),
        m2: e(2, 2),
        m3: e(3, 3),
        m_1: e(2, 2) * e(3, 3) - e(2, 3) * e(3, 2),
        m_2: e(1, 1) * e(3, 3) - e(1, 3) * e(3, 1),
        m_3: e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1),
        m4: e(1, 2) * e(2, 3) * e(3, 1),
    })
}

/// The degree-6 relation among the minors; vanishes on `SL(3, ℂ)`.
pub fn relation_residual(m: &MinorsRecord) -> C64 {
    let MinorsRecord {
        m1,
        m2,
        m3,
        m_1,
        m_2,
        m_3,
        m4,
    } = *m;
    -m2 * m2 * m3 * m3 * m1 * m1 + m_1 * m2 * m3 * m1 * m1 + m_3 * m2 * m3 * m3 * m1
        - m_2 * m_1 * m2 * m1
        + m_2 * m2 * m2 * m3 * m1
        - m_3 * m_1 * m3 * m1
        - m_1 * m4 * m1
        + m2 * m3 * m4 * m1 * 2.0
        - m4 * m4
        + m_3 * m_2 * m_1
        - m_3 * m_2 * m2 * m3
        - m_2 * m2 * m4
        - m_3 * m3 * m4
        + m4
}

/// Named invariant values for a tuple, in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRecord {
    pub case: String,
    /// Whether every value is real (unitary input).
    pub real: bool,
    pub entries: Vec<(String, C64)>,
}

impl InvariantRecord {
    pub fn get(&self, name: &str) -> Option<C64> {
        self.entries
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
    }

    /// Largest difference over shared names; infinite if the name sets differ.
    pub fn max_diff(&self, other: &InvariantRecord) -> f64 {
        if self.entries.len() != other.entries.len() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (k, v) in &self.entries {
            match other.get(k) {
                Some(w) => worst = worst.max((v - w).norm()),
                None => return f64::INFINITY,
            }
        }
        worst
    }
}

impl Serialize for InvariantRecord {
    /// Flat object; real values as numbers, complex ones as `[re, im]`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (k, v) in &self.entries {
            if self.real {
                map.serialize_entry(k, &v.re)?;
            } else {
                map.serialize_entry(k, &[v.re, v.im])?;
            }
        }
        map.end()
    }
}

fn real_entries(pairs: &[(&str, f64)]) -> Vec<(String, C64)> {
    pairs
        .iter()
        .map(|&(k, v)| (k.to_string(), C64::new(v, 0.0)))
        .collect()
}

/// Picks the coordinate system by `(family, n, r)`: the a-coordinates for
/// `SU(2)²` and `SU(2)³`, the trace/u/P/Q record for pairs in dimension 3,
/// and otherwise a table of traces of positive words up to length 3.
pub fn invariant_record(rho: &RepTuple) -> Result<InvariantRecord> {
    let su = rho.family() == Family::SU;
    match (rho.n(), rho.r()) {
        (2, 2) if su => {
            let a = su2_rank2_coords(rho)?;
            let sigma = crate::semialgebraic::sigma(&a);
            Ok(InvariantRecord {
                case: "SU(2)^2".into(),
                real: true,
                entries: real_entries(&[("a1", a.a1), ("a2", a.a2), ("a3", a.a3), ("sigma", sigma)]),
            })
        }
        (2, 3) if su => {
            let c = su2_rank3_coords(rho)?;
            let inv = rst(&c);
            Ok(InvariantRecord {
                case: "SU(2)^3".into(),
                real: true,
                entries: real_entries(&[
                    ("a1", c.a1),
                    ("a2", c.a2),
                    ("a3", c.a3),
                    ("a12", c.a12),
                    ("a13", c.a13),
                    ("a23", c.a23),
                    ("s12", inv.s12),
                    ("s13", inv.s13),
                    ("s23", inv.s23),
                    ("t123", inv.t123),
                ]),
            })
        }
        (2, 2) | (2, 3) => {
            rho.expect_sl(DEFAULT_TOL)?;
            let x = rho.matrices();
            let half_tr = |w: &CMat| w.trace() * 0.5;
            let inv = |m: &CMat| m.inverse();
            let mut entries = Vec::new();
            for (j, m) in x.iter().enumerate() {
                entries.push((format!("a{}", j + 1), half_tr(m)));
            }
            if rho.r() == 2 {
                entries.push(("a3".into(), half_tr(&(&inv(&x[0])? * &x[1]))));
            } else {
                for (j, k) in [(0, 1), (0, 2), (1, 2)] {
                    entries.push((
                        format!("a{}{}", j + 1, k + 1),
                        half_tr(&(&inv(&x[j])? * &x[k])),
                    ));
                }
            }
            Ok(InvariantRecord {
                case: format!("SL(2)^{}", rho.r()),
                real: false,
                entries,
            })
        }
        (3, 2) => {
            let t = su3_traces(rho)?;
            let mut u = u_coords(&t);
            let mut p = pq(&t);
            if su {
                u = u.realify()?;
                p = p.realify()?;
            }
            let mut entries = t.named();
            for (name, v) in UCoords::names().iter().zip(u.values()) {
                entries.push((name.to_string(), v));
            }
            let delta = crate::semialgebraic::su3_delta_complex(p.p, p.q);
            entries.push(("P".into(), p.p));
            entries.push(("Q".into(), p.q));
            entries.push(("P2-4Q".into(), p.discriminant()));
            entries.push(("Delta".into(), delta));
            Ok(InvariantRecord {
                case: format!("{}(3)^2", rho.family()),
                // the t's stay complex even on unitary input
                real: false,
                entries,
            })
        }
        _ => {
            rho.expect_sl(DEFAULT_TOL)?;
            let words = Word::positive_necklaces(rho.r(), 3);
            let entries = words
                .iter()
                .map(|w| Ok((format!("tr({w})"), trace_word(rho, w)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(InvariantRecord {
                case: format!("{}({})^{} words", rho.family(), rho.n(), rho.r()),
                real: false,
                entries,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{
        conjugate_tuple, quaternion_matrix, random_sl, sample_tuple, seeded_rng, GroupDescriptor,
        Quaternion,
    };
    use crate::linalg::{c, haar_su};

    fn su2(ms: Vec<CMat>) -> RepTuple {
        RepTuple::new(GroupDescriptor::su(2), ms).unwrap()
    }

    fn omega() -> C64 {
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
    }

    pub(crate) fn paper_su3_example() -> RepTuple {
        let x1 = CMat::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]])
            .unwrap();
        let x2 = CMat::from_diag(&[omega().conj(), omega(), c(1.0, 0.0)]);
        RepTuple::new(GroupDescriptor::su(3), vec![x1, x2]).unwrap()
    }

    #[test]
    fn word_parsing_and_display() {
        let w: Word = "x1 x2^-1 x1".parse().unwrap();
        assert_eq!(w.len(), 3);
        assert!(w.letters[1].inverse);
        assert_eq!(w.to_string(), "x1 x2^-1 x1");
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert!("y1".parse::<Word>().is_err());
        assert!("x0".parse::<Word>().is_err());
        assert!("x1^2".parse::<Word>().is_err());
        assert_eq!(w.inverse().to_string(), "x1^-1 x2 x1^-1");
    }

    #[test]
    fn necklace_counts() {
        // one letter: r; two letters: r(r+1)/2; three letters: (r³+2r)/3
        for r in 1..=5usize {
            let words = Word::positive_necklaces(r, 3);
            let expected = r + r * (r + 1) / 2 + (r * r * r + 2 * r) / 3;
            assert_eq!(words.len(), expected, "r = {r}");
        }
    }

    #[test]
    fn trace_word_examples() {
        let mut rng = seeded_rng(1);
        let rho = sample_tuple(GroupDescriptor::sl(3), 2, &mut rng);
        let w: Word = "x1 x1^-1".parse().unwrap();
        assert!((trace_word(&rho, &w).unwrap() - c(3.0, 0.0)).norm() < 1e-12);
        assert_eq!(trace_word(&rho, &Word::empty()).unwrap(), c(3.0, 0.0));
        let i = CMat::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
        let t = su2(vec![i, CMat::identity(2)]);
        assert_eq!(trace_word(&t, &"x1".parse().unwrap()).unwrap(), c(0.0, 0.0));
        let w: Word = "x1 x2 x1^-1 x2 x2".parse().unwrap();
        let base = trace_word(&rho, &w).unwrap();
        for k in 1..5 {
            assert!((trace_word(&rho, &w.rotate(k)).unwrap() - base).norm() < 1e-12 * base.norm().max(1.0));
        }
        assert_eq!(
            trace_word(&rho, &"x3".parse().unwrap()).unwrap_err(),
            Error::IndexOutOfRange { index: 3, rank: 2 }
        );
    }

    #[test]
    fn su2_rank2_examples() {
        let a = su2_rank2_coords(&su2(vec![CMat::identity(2), CMat::identity(2)])).unwrap();
        assert_eq!(a.to_array(), [1.0, 1.0, 1.0]);
        let t = su2(vec![quaternion_matrix(Quaternion::I), quaternion_matrix(Quaternion::J)]);
        assert_eq!(su2_rank2_coords(&t).unwrap().to_array(), [0.0, 0.0, 0.0]);
        let (l, r) = fricke_check(&t).unwrap();
        assert_eq!((l, r), (-1.0, -1.0));
        let (l, r) = fricke_check(&su2(vec![CMat::identity(2), CMat::identity(2)])).unwrap();
        assert_eq!((l, r), (1.0, 1.0));
        let sl = sample_tuple(GroupDescriptor::sl(2), 2, &mut seeded_rng(2));
        assert!(matches!(su2_rank2_coords(&sl), Err(Error::NotInGroup { .. })));
    }

    #[test]
    fn su2_rank3_examples() {
        let id = su2(vec![CMat::identity(2); 3]);
        assert_eq!(su2_rank3_coords(&id).unwrap().to_array(), [1.0; 6]);
        let ijk = su2(vec![
            quaternion_matrix(Quaternion::I),
            quaternion_matrix(Quaternion::J),
            quaternion_matrix(Quaternion::K),
        ]);
        assert_eq!(su2_rank3_coords(&ijk).unwrap().to_array(), [0.0; 6]);
    }

    #[test]
    fn rst_examples() {
        let z = rst(&SU2Rank3Coords::from_array([0.0; 6]));
        assert_eq!(z.r, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!((z.s12, z.s13, z.s23, z.t123), (1.0, 1.0, 1.0, 1.0));
        assert_eq!((z.l12, z.l13, z.l23), (Some(0.0), Some(0.0), Some(0.0)));
        let o = rst(&SU2Rank3Coords::from_array([1.0; 6]));
        assert_eq!(o.r[0][0], 0.0);
        assert_eq!(o.l12, None);
        assert_eq!((o.s12, o.s13, o.s23), (0.0, 0.0, 0.0));
    }

    #[test]
    fn rst_matches_imaginary_part_geometry() {
        let mut rng = seeded_rng(3);
        for _ in 0..500 {
            let rho = sample_tuple(GroupDescriptor::su(2), 3, &mut rng);
            let c = su2_rank3_coords(&rho).unwrap();
            let inv = rst(&c);
            let ims: Vec<[f64; 3]> = rho
                .matrices()
                .iter()
                .map(|m| crate::groups::to_quaternion(m).unwrap().im())
                .collect();
            let dot = |u: &[f64; 3], v: &[f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            for j in 0..3 {
                for k in 0..3 {
                    assert!((inv.r[j][k] - dot(&ims[j], &ims[k])).abs() < 1e-12);
                }
            }
            let t = inv.t123_from_cosines().unwrap();
            assert!((t - inv.t123).abs() < 1e-12 * inv.t123.abs().max(1.0));
        }
    }

    #[test]
    fn su3_example_values() {
        let rho = paper_su3_example();
        let t = su3_traces(&rho).unwrap();
        for k in 1..=4 {
            assert!(t.t(k).norm() < 1e-15 && t.t(-k).norm() < 1e-15);
        }
        // X₁X₂X₁⁻¹ = diag(ω, 1, ω̄), so the commutator is ω̄·I
        assert!((t.t(5) - omega().conj() * 3.0).norm() < 1e-14);
        assert!((t.t(-5) - omega() * 3.0).norm() < 1e-14);
        let u = u_coords(&t).realify().unwrap();
        for (a, b) in u.pairs {
            assert!(a.norm() < 1e-14 && b.norm() < 1e-14);
        }
        assert!((u.u5.re + 1.5 * 3f64.sqrt()).abs() < 1e-14);
        let p = pq(&t);
        assert!((p.p - c(-3.0, 0.0)).norm() < 1e-14);
        assert!((p.q - c(9.0, 0.0)).norm() < 1e-13);
        assert!((p.discriminant() - c(-27.0, 0.0)).norm() < 1e-12);
        let ut = u_coords(&su3_traces(&transpose_tuple(&rho)).unwrap());
        assert!((ut.u5.re - 1.5 * 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn su3_identity_pair() {
        let rho = RepTuple::new(GroupDescriptor::su(3), vec![CMat::identity(3); 2]).unwrap();
        let t = su3_traces(&rho).unwrap();
        let u = u_coords(&t);
        for (a, b) in u.pairs {
            assert_eq!((a, b), (c(3.0, 0.0), c(0.0, 0.0)));
        }
        assert_eq!(u.u5, c(0.0, 0.0));
        let p = pq(&t);
        assert_eq!((p.p, p.q, p.discriminant()), (c(6.0, 0.0), c(9.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn su3_random_pairs() {
        let mut rng = seeded_rng(4);
        for _ in 0..300 {
            let rho = sample_tuple(GroupDescriptor::su(3), 2, &mut rng);
            let t = su3_traces(&rho).unwrap();
            for k in 1..=5 {
                assert!((t.t(-k) - t.t(k).conj()).norm() < 1e-12);
            }
            let p = pq(&t);
            assert!((p.tau * p.tau - p.p * p.tau + p.q).norm() < 1e-10);
            let u = u_coords(&t);
            assert!(u.max_imag() < 1e-10);
            assert!((u.u5.re - t.t(5).im).abs() < 1e-12);
        }
        let sl = sample_tuple(GroupDescriptor::sl(3), 2, &mut rng);
        let u = u_coords(&su3_traces(&sl).unwrap());
        assert!(matches!(u.realify(), Err(Error::DataIntegrity(_))));
    }

    #[test]
    fn minors_golden_identity() {
        let m = su3_minors(&CMat::identity(3)).unwrap();
        assert_eq!(m.to_array(), [1., 1., 1., 1., 1., 1., 0.].map(|x| c(x, 0.0)));
        assert_eq!(relation_residual(&m), c(0.0, 0.0));
    }

    #[test]
    fn minors_relation_and_symmetries() {
        let mut rng = seeded_rng(5);
        for _ in 0..500 {
            let x = random_sl(3, &mut rng);
            let m = su3_minors(&x).unwrap();
            let scale = x.max_abs().powi(6).max(1.0);
            assert!(relation_residual(&m).norm() < 1e-12 * scale);
            // m_{-k}(X) = m_k(X⁻¹)
            let mi = su3_minors(&x.inverse().unwrap()).unwrap();
            assert!((m.m_1 - mi.m1).norm() < 1e-10 * scale);
            assert!((m.m_3 - mi.m3).norm() < 1e-10 * scale);
            // the other root of the relation: the transpose cyclic product
            let mut mt = m;
            mt.m4 = x[(0, 2)] * x[(2, 1)] * x[(1, 0)];
            assert!(relation_residual(&mt).norm() < 1e-12 * scale);
            // torus invariance
            let mu = [c(0.3, 1.2), c(-2.0, 0.1), c(0.7, -0.4)];
            let d = CMat::from_diag(&mu);
            let y = x.conjugate_by(&d).unwrap();
            let my = su3_minors(&y).unwrap();
            for (a, b) in m.to_array().iter().zip(my.to_array()) {
                assert!((a - b).norm() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn records_are_conjugation_invariant() {
        let mut rng = seeded_rng(6);
        for (d, r) in [
            (GroupDescriptor::su(2), 2),
            (GroupDescriptor::su(2), 3),
            (GroupDescriptor::su(3), 2),
            (GroupDescriptor::sl(3), 2),
            (GroupDescriptor::sl(2), 3),
            (GroupDescriptor::su(2), 5),
        ] {
            let rho = sample_tuple(d, r, &mut rng);
            let g = if d.family == Family::SU {
                haar_su(d.n, &mut rng)
            } else {
                random_sl(d.n, &mut rng)
            };
            let a = invariant_record(&rho).unwrap();
            let b = invariant_record(&conjugate_tuple(&g, &rho).unwrap()).unwrap();
            let scale = a.entries.iter().map(|(_, v)| v.norm()).fold(1.0, f64::max);
            assert!(a.max_diff(&b) < 1e-11 * scale, "{} {}", a.case, a.max_diff(&b));
        }
    }

    #[test]
    fn record_shapes() {
        let mut rng = seeded_rng(7);
        let rec = invariant_record(&sample_tuple(GroupDescriptor::su(2), 2, &mut rng)).unwrap();
        let names: Vec<&str> = rec.entries.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(names, ["a1", "a2", "a3", "sigma"]);
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.starts_with(r#"{"a1":"#));
        let rec = invariant_record(&sample_tuple(GroupDescriptor::su(3), 2, &mut rng)).unwrap();
        assert!(rec.get("u5").unwrap().im == 0.0);
        assert!(rec.get("Delta").is_some());
        let rec = invariant_record(&sample_tuple(GroupDescriptor::su(2), 5, &mut rng)).unwrap();
        assert_eq!(rec.entries.len(), 5 + 15 + 45);
        assert_eq!(rec.entries[0].0, "tr(x1)");
    }
}
