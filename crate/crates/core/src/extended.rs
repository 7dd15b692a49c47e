//! Minimal double-double (~31 significant digits) arithmetic.
//!
//! Used for Newton-polishing polynomial roots when the degree is large
//! enough (|m| > 10, degrees beyond ~60) that plain f64 Horner evaluation
//! near a root is dominated by rounding noise.  Error-free transforms follow
//! Dekker and Knuth; products use FMA.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug, Default)]
pub struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub fn from_c64(z: crate::C64) -> DdC {
        DdC {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn to_c64(self) -> crate::C64 {
        crate::C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: DdC) -> DdC {
        DdC {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }
}

/// Round an exact rational times 2^shift into a double-double.
pub fn rational_to_dd(c: &BigRational, shift: i64) -> Dd {
    if c.is_zero() {
        return Dd::default();
    }
    let scaled = scale_pow2(c, shift);
    let hi = big_to_f64(&scaled);
    let hi_rat = BigRational::from_float(hi).expect("finite hi");
    let lo = big_to_f64(&(&scaled - &hi_rat));
    Dd { hi, lo }
}

fn scale_pow2(c: &BigRational, shift: i64) -> BigRational {
    let two = BigInt::from(2);
    if shift >= 0 {
        c * BigRational::from_integer(two.pow(shift as u32))
    } else {
        c / BigRational::from_integer(two.pow((-shift) as u32))
    }
}

fn big_to_f64(c: &BigRational) -> f64 {
    // Top 64 bits of numerator/denominator, exponent folded back in.
    if c.is_zero() {
        return 0.0;
    }
    let nb = c.numer().bits() as i64;
    let db = c.denom().bits() as i64;
    let spill_n = (nb - 63).max(0);
    let spill_d = (db - 63).max(0);
    let n: BigInt = c.numer() >> spill_n;
    let d: BigInt = c.denom() >> spill_d;
    let mut v = n.to_f64().unwrap() / d.to_f64().unwrap();
    let mut e = spill_n - spill_d;
    while e > 900 {
        v *= 2f64.powi(900);
        e -= 900;
    }
    while e < -900 {
        v *= 2f64.powi(-900);
        e += 900;
    }
    v * 2f64.powi(e as i32)
}

/// Horner evaluation with double-double coefficients at a complex point.
pub fn horner_dd(coeffs: &[DdC], z: crate::C64) -> DdC {
    let zd = DdC::from_c64(z);
    let mut acc = DdC::default();
    for c in coeffs.iter().rev() {
        acc = acc.mul(zd).add(*c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_mul_keeps_extra_bits() {
        let a = Dd::from_f64(1.0 + 2f64.powi(-40));
        let b = a.mul(a);
        // (1+h)² = 1 + 2h + h²; the h² term is below f64 resolution of b.hi.
        let expect_lo = 2f64.powi(-80);
        assert!((b.to_f64() - (1.0 + 2f64.powi(-39))).abs() < 2.0 * expect_lo);
        assert!(b.lo != 0.0);
    }

    #[test]
    fn rational_rounding_splits_residual() {
        let c = BigRational::new(BigInt::from(1), BigInt::from(3));
        let d = rational_to_dd(&c, 0);
        let err = (d.hi - 1.0 / 3.0).abs();
        assert!(err < 1e-16);
        assert!(d.lo.abs() > 0.0 && d.lo.abs() < 1e-16);
    }
}
