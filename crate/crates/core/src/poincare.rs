//! Exact Poincaré polynomials of `SL(2, ℂ)` character varieties of free
//! groups, and two fixed surface-group polynomials for comparison.
//!
//! No floating point here: everything is over ℤ or ℚ.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial in `t` with integer coefficients, lowest degree first, no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + BigRational::from(c.clone()))
    }

    /// Coefficients as machine integers, if they fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("t")?,
                1 => write!(f, "{mag}t")?,
                _ if unit => write!(f, "t^{k}")?,
                _ => write!(f, "{mag}t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Dense integer polynomial arithmetic used to assemble the numerator.
#[derive(Clone)]
struct Poly(Vec<BigInt>);

impl Poly {
    fn from_i64(c: &[i64]) -> Self {
        Poly(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::from_i64(&[1]), |acc, _| acc.mul(self))
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|k| {
                    self.0.get(k).cloned().unwrap_or_default() + o.0.get(k).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    fn scale(&self, s: i64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    fn trimmed(mut self) -> Poly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }
}

/// Long division over ℚ; returns `(quotient, remainder)`.
fn div_rem(num: &Poly, den: &Poly) -> (Vec<BigRational>, Vec<BigRational>) {
    let den: Vec<BigRational> = den.0.iter().cloned().map(BigRational::from).collect();
    let mut rem: Vec<BigRational> = num.0.iter().cloned().map(BigRational::from).collect();
    let dl = den.len();
    assert!(dl > 0 && !den[dl - 1].is_zero(), "division by zero polynomial");
    if rem.len() < dl {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dl + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dl - 1] / &den[dl - 1];
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
        }
        quot[k] = c;
    }
    rem.truncate(dl - 1);
    (quot, rem)
}

/// Baird's Poincaré polynomial of the `SL(2, ℂ)` character variety of `F_r`:
///
/// `1 + t − t(1+t³)^r/(1−t⁴) + (t³/2)·((1+t)^r/(1−t²) − (1−t)^r/(1+t²))`.
///
/// Multiplying through by `D = 2(1−t⁴)(1−t²)(1+t²)` gives an integer
/// numerator, which must be divisible by `D` with an integer quotient whose
/// coefficients are nonnegative and whose constant term is 1.
pub fn baird_poly(r: u32) -> Result<IntPolynomial> {
    if r == 0 {
        return Err(Error::BadParameter("rank must be at least 1".into()));
    }
    let one_minus_t4 = Poly::from_i64(&[1, 0, 0, 0, -1]);
    let one_minus_t2 = Poly::from_i64(&[1, 0, -1]);
    let one_plus_t2 = Poly::from_i64(&[1, 0, 1]);
    let one_plus_t = Poly::from_i64(&[1, 1]);
    let one_minus_t = Poly::from_i64(&[1, -1]);
    let t = Poly::from_i64(&[0, 1]);
    let t3 = Poly::from_i64(&[0, 0, 0, 1]);
    let one_plus_t3 = Poly::from_i64(&[1, 0, 0, 1]);

    let den = one_minus_t4
        .mul(&one_minus_t2)
        .mul(&one_plus_t2)
        .scale(2);
    // (1 + t)·D
    let head = one_plus_t.mul(&den);
    // t(1+t³)^r/(1−t⁴)·D = 2t(1+t³)^r(1−t²)(1+t²)
    let middle = t
        .mul(&one_plus_t3.pow(r))
        .mul(&one_minus_t2)
        .mul(&one_plus_t2)
        .scale(2);
    // (t³/2)(1+t)^r/(1−t²)·D = t³(1+t)^r(1−t⁴)(1+t²)
    let plus = t3
        .mul(&one_plus_t.pow(r))
        .mul(&one_minus_t4)
        .mul(&one_plus_t2);
    // (t³/2)(1−t)^r/(1+t²)·D = t³(1−t)^r(1−t⁴)(1−t²)
    let minus = t3
        .mul(&one_minus_t.pow(r))
        .mul(&one_minus_t4)
        .mul(&one_minus_t2);
    let num = head
        .add(&middle.scale(-1))
        .add(&plus)
        .add(&minus.scale(-1))
        .trimmed();

    let (quot, rem) = div_rem(&num, &den.trimmed());
    if let Some(k) = rem.iter().position(|c| !c.is_zero()) {
        return Err(Error::NonPolynomial(format!(
            "rank {r}: remainder has nonzero t^{k} coefficient {}",
            rem[k]
        )));
    }
    let mut coeffs = Vec::with_capacity(quot.len());
    for (k, c) in quot.into_iter().enumerate() {
        if !c.is_integer() {
            return Err(Error::NonPolynomial(format!(
                "rank {r}: coefficient of t^{k} is {c}, not an integer"
            )));
        }
        coeffs.push(c.to_integer());
    }
    let p = IntPolynomial::new(coeffs);
    if p.coeff(0) != BigInt::one() || p.coeffs().iter().any(Signed::is_negative) {
        return Err(Error::DataIntegrity(format!(
            "rank {r}: {p} is not a plausible Poincaré polynomial"
        )));
    }
    Ok(p)
}

/// Poincaré polynomials of the two surface-group moduli spaces that show the
/// retraction fails beyond free groups, and whether they differ.
pub fn surface_counterexample_polys() -> (IntPolynomial, IntPolynomial, bool) {
    let n = IntPolynomial::from_i64(&[1, 0, 1, 4, 1, 0, 1]);
    let m = IntPolynomial::from_i64(&[1, 0, 1, 4, 2, 34, 2]);
    let differ = n != m;
    (n, m, differ)
}
