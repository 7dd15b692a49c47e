//! Dense univariate polynomials with exact rational coefficients.
//!
//! The Bäcklund recursion that generates the rational Painlevé-II functions
//! must run in exact arithmetic: the degrees reach ~136 at m = 16 and a
//! floating-point recursion loses everything to cancellation after a few
//! steps.  Floating conversion happens only at evaluation time, via
//! [`Poly::to_f64_scaled`], which also returns a power-of-two scale so that
//! coefficients far outside the f64 range still evaluate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

use crate::C64;

/// Polynomial in one variable, coefficients in ascending degree order.
///
/// Invariants: the leading (last) coefficient is nonzero; the zero polynomial
/// is represented by an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})y"),
                _ => format!("({c})y^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    /// The monomial `c * y^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Convenience constructor from integer coefficients (ascending).
    pub fn from_ints(ints: &[i64]) -> Self {
        Poly::from_coeffs(
            ints.iter()
                .map(|&n| BigRational::from_integer(BigInt::from(n)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] -= c;
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Division with remainder.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let lead = divisor.leading().unwrap().clone();
        let qdeg = rem.len() - 1 - dd;
        let mut quot = vec![BigRational::zero(); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    let t = &c * b;
                    rem[k + j] -= t;
                }
            }
            quot[k] = c;
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Exact division; panics if the division leaves a remainder.
    ///
    /// The Bäcklund recursion guarantees divisibility at every step, so a
    /// nonzero remainder means corrupted state, not bad input.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "exact_div: nonzero remainder");
        q
    }

    /// Euclidean gcd, normalized monic.  Coefficient growth makes this
    /// expensive for large degrees; it is used only in tests to certify that
    /// the recursion output is reduced.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let lead = a.leading().unwrap().clone();
            a.scale(&lead.recip())
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficients as f64 after dividing out a common power of two.
    ///
    /// Returns `(coeffs, log2_scale)` such that the true coefficient k is
    /// `coeffs[k] * 2^log2_scale`.  Choosing the scale from the largest
    /// coefficient keeps evaluation possible even when raw coefficients
    /// overflow f64 (they grow superexponentially in m).
    pub fn to_f64_scaled(&self) -> (Vec<f64>, i64) {
        if self.is_zero() {
            return (Vec::new(), 0);
        }
        let max_bits = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.numer().bits() as i64 - c.denom().bits() as i64)
            .max()
            .unwrap_or(0);
        // Center the largest coefficient near 2^0.
        let shift = max_bits;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| rational_to_f64_shifted(c, -shift))
            .collect();
        (coeffs, shift)
    }

    /// Plain f64 coefficients (may overflow to inf for very large m).
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }
}

/// `c * 2^shift` as f64, computed without materializing huge intermediates.
fn rational_to_f64_shifted(c: &BigRational, shift: i64) -> f64 {
    if c.is_zero() {
        return 0.0;
    }
    // Take the top 64 bits of numerator and denominator separately and
    // account for the dropped bits in the exponent.
    let (nf, ne) = top_bits(c.numer());
    let (df, de) = top_bits(c.denom());
    let mut v = nf / df;
    let e = ne - de + shift;
    // Apply the exponent in safe chunks.
    let mut rem = e;
    while rem > 900 {
        v *= 2f64.powi(900);
        rem -= 900;
    }
    while rem < -900 {
        v *= 2f64.powi(-900);
        rem += 900;
    }
    v * 2f64.powi(rem as i32)
}

fn top_bits(n: &BigInt) -> (f64, i64) {
    let bits = n.bits() as i64;
    if bits <= 63 {
        (n.to_f64().unwrap(), 0)
    } else {
        let spill = bits - 63;
        let top: BigInt = n >> spill;
        (top.to_f64().unwrap(), spill)
    }
}

/// Horner evaluation of scaled f64 coefficients at a complex point.
pub fn horner(coeffs: &[f64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Horner evaluation of complex coefficients at a complex point.
pub fn horner_c(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Sum of |c_k| |z|^k, the natural local scale for "is this value small".
pub fn horner_abs(coeffs: &[f64], z_abs: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * z_abs + c.abs();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ints: &[i64]) -> Poly {
        Poly::from_ints(ints)
    }

    #[test]
    fn mul_and_divrem_roundtrip() {
        let a = p(&[1, 2, 3]);
        let b = p(&[-4, 0, 1, 5]);
        let prod = a.mul(&b);
        let (q, r) = prod.div_rem(&a);
        assert!(r.is_zero());
        assert_eq!(q, b);
    }

    #[test]
    fn derivative_of_cubic() {
        let a = p(&[7, 0, -3, 2]); // 7 - 3y² + 2y³
        assert_eq!(a.derivative(), p(&[0, -6, 6]));
    }

    #[test]
    fn gcd_picks_common_factor() {
        let f = p(&[-1, 1]); // y - 1
        let a = f.mul(&p(&[1, 1]));
        let b = f.mul(&p(&[3, 0, 1]));
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn zero_representation_is_unique() {
        let a = p(&[2, 1]);
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn scaled_eval_matches_exact_for_moderate_coeffs() {
        let a = p(&[1, -7, 0, 13]);
        let (c, s) = a.to_f64_scaled();
        let z = C64::new(1.25, -0.5);
        let direct = horner(&a.to_f64(), z);
        let scaled = horner(&c, z) * 2f64.powi(s as i32);
        assert!((direct - scaled).norm() <= 1e-12 * direct.norm());
    }
}
