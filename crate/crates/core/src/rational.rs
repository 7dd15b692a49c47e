//! Exact rational Painlevé-II functions U_m, V_m and their logarithmic
//! derivatives P_m = U_m'/U_m, Q_m = V_m'/V_m.
//!
//! Starting from U_0 = 1, V_0 = -y/6, the Bäcklund transformations
//!
//! ```text
//!   U_{m+1} = -(1/6) y U_m - (U_m')²/U_m + (1/2) U_m''      V_{m+1} = 1/U_m
//!   U_{m-1} = 1/V_m      V_{m-1} = (1/2) V_m'' - (V_m')²/V_m - (1/6) y V_m
//! ```
//!
//! generate the full family over m ∈ ℤ.  P_m solves the Painlevé-II equation
//! p'' = 2p³ + (2/3)yp - (2/3)m; Q_m solves the same with parameter m-1.
//!
//! Both recursion formulas reduce to the same rational-function core: for
//! f = N/D in lowest terms with W = N'D - ND',
//!
//! ```text
//!   -(1/6) y f - (f')²/f + (1/2) f''
//!       = [ -(1/6) y N²D² - W² + (1/2) N (W'D - 2WD') ] / (N D³),
//! ```
//!
//! and the bracket is exactly divisible by D³, so the step needs one exact
//! polynomial division and no gcd: the new denominator is the old numerator.
//! (Equivalently, U_m is a ratio of successive Yablonskii–Vorob'ev-type
//! polynomials; consecutive members are coprime.)

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{horner, horner_abs, Poly};
use crate::polyroots::{self, Refinement};
use crate::C64;

/// Default cap on |m|; degrees grow like m²/2 and desk-scale verification
/// needs m ≤ 10-12.
pub const DEFAULT_CAP: u32 = 16;

/// Which of the four functions to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    U,
    V,
    P,
    Q,
}

/// Which root set to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    ZerosOfU,
    PolesOfU,
    ZerosOfV,
    PolesOfV,
}

/// The pair (U_m, V_m) as reduced ratios of exact-coefficient polynomials.
#[derive(Clone, Debug)]
pub struct RationalPair {
    pub m: i64,
    pub u_num: Poly,
    pub u_den: Poly,
    pub v_num: Poly,
    pub v_den: Poly,
}

/// One located root with multiplicity (all roots in this family are simple;
/// the multiplicity field records clustering if refinement ever merges two).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Root {
    pub z: [f64; 2],
    pub multiplicity: usize,
    pub refined: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootList {
    pub kind: RootKind,
    pub roots: Vec<Root>,
}

fn sixth() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(6))
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Shared core of both Bäcklund directions; see module docs.
fn backlund_core(n: &Poly, d: &Poly) -> (Poly, Poly) {
    let y = Poly::from_ints(&[0, 1]);
    let w = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
    let wp = w.derivative();
    let term1 = y.mul(&n.mul(n)).mul(&d.mul(d)).scale(&-sixth());
    let term2 = w.mul(&w).neg();
    let term3 = n
        .mul(&wp.mul(d).sub(&w.mul(&d.derivative()).scale(&BigRational::from_integer(BigInt::from(2)))))
        .scale(&half());
    let big = term1.add(&term2).add(&term3);
    let num = big.exact_div(&d.mul(d).mul(d));
    normalize(num, n.clone())
}

/// Scale a fraction so its denominator is monic.
fn normalize(num: Poly, den: Poly) -> (Poly, Poly) {
    assert!(!den.is_zero(), "zero denominator in recursion");
    let lead = den.leading().unwrap().clone();
    if lead == BigRational::from_integer(BigInt::from(1)) {
        (num, den)
    } else {
        let inv = lead.recip();
        (num.scale(&inv), den.scale(&inv))
    }
}

impl RationalPair {
    /// The seed (U_0, V_0) = (1, -y/6).
    pub fn seed() -> RationalPair {
        RationalPair {
            m: 0,
            u_num: Poly::one(),
            u_den: Poly::one(),
            v_num: Poly::from_coeffs(vec![BigRational::from_integer(BigInt::from(0)), -sixth()]),
            v_den: Poly::one(),
        }
    }

    /// One Bäcklund step up: degree m -> m+1.
    pub fn step_up(&self) -> RationalPair {
        let (u_num, u_den) = backlund_core(&self.u_num, &self.u_den);
        let (v_num, v_den) = normalize(self.u_den.clone(), self.u_num.clone());
        RationalPair {
            m: self.m + 1,
            u_num,
            u_den,
            v_num,
            v_den,
        }
    }

    /// One Bäcklund step down: degree m -> m-1.
    pub fn step_down(&self) -> RationalPair {
        let (v_num, v_den) = backlund_core(&self.v_num, &self.v_den);
        let (u_num, u_den) = normalize(self.v_den.clone(), self.v_num.clone());
        RationalPair {
            m: self.m - 1,
            u_num,
            u_den,
            v_num,
            v_den,
        }
    }

    /// Build (U_m, V_m) by |m| recursion steps from the seed.
    pub fn build(m: i64) -> Result<RationalPair> {
        RationalPair::build_with_cap(m, DEFAULT_CAP)
    }

    pub fn build_with_cap(m: i64, cap: u32) -> Result<RationalPair> {
        if m.unsigned_abs() > cap as u64 {
            return Err(Error::CapExceeded {
                requested: m,
                cap,
            });
        }
        let mut pair = RationalPair::seed();
        while pair.m < m {
            pair = pair.step_up();
        }
        while pair.m > m {
            pair = pair.step_down();
        }
        Ok(pair)
    }

    /// Numerator/denominator of the requested function.
    pub fn fraction(&self, which: Which) -> (&Poly, &Poly) {
        match which {
            Which::U | Which::P => (&self.u_num, &self.u_den),
            Which::V | Which::Q => (&self.v_num, &self.v_den),
        }
    }

    /// Evaluate U, V, P or Q at a complex point.
    ///
    /// Near a pole of the requested function (denominator smaller than
    /// 1e-8 times its local coefficient scale) the error carries a
    /// first-order estimate of the distance to the pole.
    pub fn eval(&self, which: Which, y: C64) -> Result<C64> {
        Evaluator::new(self, which).eval(y)
    }

    /// All roots of the polynomial selecting the requested zero/pole set.
    pub fn roots(&self, kind: RootKind) -> RootList {
        let poly = match kind {
            RootKind::ZerosOfU => &self.u_num,
            RootKind::PolesOfU => &self.u_den,
            RootKind::ZerosOfV => &self.v_num,
            RootKind::PolesOfV => &self.v_den,
        };
        let found = polyroots::roots(poly);
        let mut roots: Vec<Root> = Vec::with_capacity(found.len());
        'outer: for r in found {
            for existing in roots.iter_mut() {
                let ez = C64::new(existing.z[0], existing.z[1]);
                if (ez - r.z).norm() < 1e-8 * ez.norm().max(1.0) {
                    existing.multiplicity += 1;
                    continue 'outer;
                }
            }
            roots.push(Root {
                z: [r.z.re, r.z.im],
                multiplicity: 1,
                refined: r.status == Refinement::Converged,
            });
        }
        RootList { kind, roots }
    }

    /// Serialize to the documented JSON layout, coefficients as exact
    /// decimal strings `["num","den"]`.
    pub fn to_json(&self) -> serde_json::Value {
        fn poly_json(p: &Poly) -> serde_json::Value {
            serde_json::Value::Array(
                p.coeffs()
                    .iter()
                    .map(|c| {
                        serde_json::json!([c.numer().to_string(), c.denom().to_string()])
                    })
                    .collect(),
            )
        }
        serde_json::json!({
            "m": self.m,
            "u_num": poly_json(&self.u_num),
            "u_den": poly_json(&self.u_den),
            "v_num": poly_json(&self.v_num),
            "v_den": poly_json(&self.v_den),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<RationalPair> {
        fn poly_from(v: &serde_json::Value) -> Result<Poly> {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::Invalid("polynomial must be an array".into()))?;
            let mut coeffs = Vec::with_capacity(arr.len());
            for c in arr {
                let pair = c
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Invalid("coefficient must be [num, den]".into()))?;
                let num: BigInt = pair[0]
                    .as_str()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Invalid("bad numerator".into()))?;
                let den: BigInt = pair[1]
                    .as_str()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Invalid("bad denominator".into()))?;
                coeffs.push(BigRational::new(num, den));
            }
            Ok(Poly::from_coeffs(coeffs))
        }
        Ok(RationalPair {
            m: v["m"]
                .as_i64()
                .ok_or_else(|| Error::Invalid("missing m".into()))?,
            u_num: poly_from(&v["u_num"])?,
            u_den: poly_from(&v["u_den"])?,
            v_num: poly_from(&v["v_num"])?,
            v_den: poly_from(&v["v_den"])?,
        })
    }
}

/// Precompiled floating-point evaluator for one of U, V, P, Q.
///
/// Building one costs a few microseconds; reuse it for sweeps.
pub struct Evaluator {
    which: Which,
    num: Vec<f64>,
    num_shift: i64,
    den: Vec<f64>,
    den_shift: i64,
    dnum: Vec<f64>,
    dden: Vec<f64>,
}

impl Evaluator {
    pub fn new(pair: &RationalPair, which: Which) -> Evaluator {
        let (n, d) = pair.fraction(which);
        let (num, num_shift) = n.to_f64_scaled();
        let (den, den_shift) = d.to_f64_scaled();
        // Derivatives share the parent's scale so mixed ratios like
        // (N'D - ND')/(ND) need no bookkeeping.
        let dnum = rescale_derivative(n, num_shift);
        let dden = rescale_derivative(d, den_shift);
        Evaluator {
            which,
            num,
            num_shift,
            den,
            den_shift,
            dnum,
            dden,
        }
    }

    /// Value of the selected function.
    pub fn eval(&self, y: C64) -> Result<C64> {
        let (n, dn, d, dd) = self.parts(y)?;
        Ok(match self.which {
            Which::U | Which::V => {
                n / d * 2f64.powi((self.num_shift - self.den_shift) as i32)
            }
            // P = U'/U = (N'D - ND')/(ND); scale factors cancel.
            Which::P | Which::Q => (dn * d - n * dd) / (n * d),
        })
    }

    /// Value together with a base-2 exponent: value * 2^log2.  Needed when
    /// the raw function value overflows f64 (large m outside T).
    pub fn eval_scaled(&self, y: C64) -> Result<(C64, i64)> {
        let (n, dn, d, dd) = self.parts(y)?;
        Ok(match self.which {
            Which::U | Which::V => (n / d, self.num_shift - self.den_shift),
            Which::P | Which::Q => ((dn * d - n * dd) / (n * d), 0),
        })
    }

    fn parts(&self, y: C64) -> Result<(C64, C64, C64, C64)> {
        let scale_at = y.norm().max(1.0);
        let d = horner(&self.den, y);
        let dscale = horner_abs(&self.den, scale_at).max(f64::MIN_POSITIVE);
        if d.norm() < 1e-8 * dscale {
            let dd = horner(&self.dden, y);
            let distance = if dd.norm() > 0.0 {
                (d / dd).norm()
            } else {
                0.0
            };
            return Err(Error::NearPole { distance });
        }
        // P and Q also blow up at zeros of the numerator (poles of the
        // logarithmic derivative).
        let n = horner(&self.num, y);
        if matches!(self.which, Which::P | Which::Q) {
            let nscale = horner_abs(&self.num, scale_at).max(f64::MIN_POSITIVE);
            if n.norm() < 1e-8 * nscale {
                let dn = horner(&self.dnum, y);
                let distance = if dn.norm() > 0.0 {
                    (n / dn).norm()
                } else {
                    0.0
                };
                return Err(Error::NearPole { distance });
            }
        }
        Ok((n, horner(&self.dnum, y), d, horner(&self.dden, y)))
    }
}

fn rescale_derivative(p: &Poly, parent_shift: i64) -> Vec<f64> {
    // Coefficients of p' divided by 2^parent_shift.
    let dp = p.derivative();
    let (mut c, s) = dp.to_f64_scaled();
    let rel = (s - parent_shift) as i32;
    for v in c.iter_mut() {
        *v *= 2f64.powi(rel);
    }
    c
}

/// Painlevé-II residual p'' - 2p³ - (2/3)yp + (2/3)param at a point,
/// with p = P_m (param = m) or p = Q_m (param = m-1), evaluated from the
/// exact fraction N/D of the parent function via
/// p = r', r = log(N/D), computed with explicit quotient-rule polynomials.
///
/// Returns (residual, scale) where scale is the magnitude of the largest
/// term, so residual/scale is a sensible relative error.
pub fn pii_residual(pair: &RationalPair, which: Which, y: C64) -> Result<(C64, f64)> {
    let (param, n, d) = match which {
        Which::P => (pair.m as f64, &pair.u_num, &pair.u_den),
        Which::Q => ((pair.m - 1) as f64, &pair.v_num, &pair.v_den),
        _ => {
            return Err(Error::Invalid(
                "pii_residual applies to the logarithmic derivatives P and Q".into(),
            ))
        }
    };
    // p = (N'D - ND')/(ND) =: W/(ND).  Differentiate twice exactly.
    let w = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
    let nd = n.mul(d);
    // p' = (W'ND - W(ND)')/(ND)²
    let w1 = w.derivative().mul(&nd).sub(&w.mul(&nd.derivative()));
    // p'' = (W1'(ND) - 2 W1 (ND)') / (ND)³  via quotient rule on W1/(ND)²
    let w2 = w1
        .derivative()
        .mul(&nd)
        .sub(&w1.mul(&nd.derivative()).scale(&BigRational::from_integer(BigInt::from(2))));

    let ev = |p: &Poly, shift_ref: (&[f64], i64)| -> C64 {
        let _ = shift_ref;
        let (c, s) = p.to_f64_scaled();
        horner(&c, y) * 2f64.powi(s as i32)
    };
    // Evaluate as ratios grouped to keep magnitudes tame.
    let (nd_c, nd_s) = nd.to_f64_scaled();
    let ndv = horner(&nd_c, y);
    let nd_scale = horner_abs(&nd_c, y.norm()).max(f64::MIN_POSITIVE);
    if ndv.norm() < 1e-8 * nd_scale {
        return Err(Error::NearPole { distance: 0.0 });
    }
    let ndv_full = (ndv, nd_s);
    let pv = {
        let (wc, ws) = w.to_f64_scaled();
        horner(&wc, y) * 2f64.powi((ws - ndv_full.1) as i32) / ndv
    };
    let ppv = {
        let (c, s) = w2.to_f64_scaled();
        let num = horner(&c, y) * 2f64.powi((s - 3 * ndv_full.1) as i32);
        num / (ndv * ndv * ndv)
    };
    let _ = ev;
    let t1 = ppv;
    let t2 = 2.0 * pv * pv * pv;
    let t3 = 2.0 / 3.0 * y * pv;
    let t4 = C64::new(2.0 / 3.0 * param, 0.0);
    let resid = t1 - t2 - t3 + t4;
    let scale = t1
        .norm()
        .max(t2.norm())
        .max(t3.norm())
        .max(t4.norm())
        .max(1.0);
    Ok((resid, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn y_poly() -> Poly {
        Poly::from_ints(&[0, 1])
    }

    #[test]
    fn seed_and_first_step() {
        // U_1 = -y/6, V_1 = 1 (direct substitution in the recursion).
        let p1 = RationalPair::seed().step_up();
        assert_eq!(p1.m, 1);
        assert_eq!(p1.u_den, Poly::one());
        assert_eq!(p1.u_num.scale(&BigRational::from_integer(BigInt::from(-6))), y_poly());
        assert_eq!(p1.v_num, Poly::one());
        assert_eq!(p1.v_den, Poly::one());
    }

    #[test]
    fn u2_matches_hand_computation() {
        // U_2 = (y³ + 6)/(36 y)
        let p2 = RationalPair::build(2).unwrap();
        let thirty_six = BigRational::from_integer(BigInt::from(36));
        assert_eq!(p2.u_den.mul(&Poly::constant(thirty_six.clone())), Poly::from_ints(&[0, 36]).scale(&BigRational::new(BigInt::from(1), BigInt::from(36))).scale(&thirty_six));
        // u_den is normalized monic: y.  u_num should be (y³+6)/36.
        assert_eq!(p2.u_den, y_poly());
        assert_eq!(
            p2.u_num.scale(&BigRational::from_integer(BigInt::from(36))),
            Poly::from_ints(&[6, 0, 0, 1])
        );
    }

    #[test]
    fn step_down_from_seed_gives_minus_one() {
        // U_{-1} = 1/V_0 = -6/y.
        let pm1 = RationalPair::seed().step_down();
        assert_eq!(pm1.m, -1);
        assert_eq!(pm1.u_den, y_poly());
        assert_eq!(pm1.u_num, Poly::from_ints(&[-6]));
    }

    #[test]
    fn down_inverts_up_exactly() {
        for m in 0..4 {
            let p = RationalPair::build(m).unwrap();
            let back = p.step_up().step_down();
            assert_eq!(back.u_num, p.u_num);
            assert_eq!(back.u_den, p.u_den);
            assert_eq!(back.v_num, p.v_num);
            assert_eq!(back.v_den, p.v_den);
        }
    }

    #[test]
    fn inversion_identity_exact() {
        // U_{-m} U_m = 1 as exact polynomial identity.
        for m in 1..=4 {
            let p = RationalPair::build(m).unwrap();
            let q = RationalPair::build(-m).unwrap();
            assert_eq!(p.u_num.mul(&q.u_num), p.u_den.mul(&q.u_den));
        }
    }

    #[test]
    fn v_is_reciprocal_of_previous_u() {
        for m in 1..=4 {
            let prev = RationalPair::build(m - 1).unwrap();
            let cur = RationalPair::build(m).unwrap();
            // V_{m} U_{m-1} = 1
            assert_eq!(cur.v_num.mul(&prev.u_num), cur.v_den.mul(&prev.u_den));
        }
    }

    #[test]
    fn degrees_follow_triangular_numbers() {
        for m in 1..=6i64 {
            let p = RationalPair::build(m).unwrap();
            let tri = (m * (m + 1) / 2) as usize;
            let tri_prev = ((m - 1) * m / 2) as usize;
            assert_eq!(p.u_num.degree(), Some(tri));
            assert_eq!(p.u_den.degree(), Some(tri_prev));
        }
    }

    #[test]
    fn fractions_are_reduced() {
        // gcd certificate for small m, where exact Euclid is cheap.
        for m in 1..=6i64 {
            let p = RationalPair::build(m).unwrap();
            assert!(p.u_num.gcd(&p.u_den).degree() == Some(0));
        }
    }

    #[test]
    fn p1_value() {
        // P_1(y) = 1/y, so P_1(2) = 0.5.
        let p1 = RationalPair::build(1).unwrap();
        let v = p1.eval(Which::P, C64::new(2.0, 0.0)).unwrap();
        assert!((v - C64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pii_residual_small_for_p2_and_q1() {
        let p2 = RationalPair::build(2).unwrap();
        let (r, s) = pii_residual(&p2, Which::P, C64::new(0.7, 0.0)).unwrap();
        assert!(r.norm() / s < 1e-12, "residual {}", r.norm());

        let p1 = RationalPair::build(1).unwrap();
        let (r, s) = pii_residual(&p1, Which::Q, C64::new(1.3, 0.0)).unwrap();
        assert!(r.norm() / s < 1e-10);
    }

    #[test]
    fn residual_identity_exact_for_m2() {
        // Symbolic check: the PII residual numerator of P_2 is the zero
        // polynomial.  p = W/(ND), and the equation times (ND)³ reads
        // W2 - 2W³ - (2/3) y W (ND)² + (2/3) m (ND)³ = 0.
        let pair = RationalPair::build(2).unwrap();
        let n = &pair.u_num;
        let d = &pair.u_den;
        let w = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
        let nd = n.mul(d);
        let w1 = w.derivative().mul(&nd).sub(&w.mul(&nd.derivative()));
        let w2 = w1
            .derivative()
            .mul(&nd)
            .sub(&w1.mul(&nd.derivative()).scale(&BigRational::from_integer(BigInt::from(2))));
        let two = BigRational::from_integer(BigInt::from(2));
        let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
        let m_term = BigRational::new(BigInt::from(2 * pair.m), BigInt::from(3));
        let y = y_poly();
        let lhs = w2
            .sub(&w.mul(&w).mul(&w).scale(&two))
            .sub(&y.mul(&w).mul(&nd.mul(&nd)).scale(&two_thirds))
            .add(&nd.mul(&nd).mul(&nd).scale(&m_term));
        assert!(lhs.is_zero(), "PII residual should vanish identically");
    }

    #[test]
    fn near_pole_is_flagged() {
        let p1 = RationalPair::build(1).unwrap();
        // P_1 = 1/y has a pole at 0.
        let err = p1.eval(Which::P, C64::new(1e-12, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NearPole { .. }));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            RationalPair::build_with_cap(7, 6).unwrap_err(),
            Error::CapExceeded { .. }
        ));
    }

    #[test]
    fn roots_of_u1_den() {
        let p1 = RationalPair::build(1).unwrap();
        let roots = p1.roots(RootKind::PolesOfU);
        assert!(roots.roots.is_empty()); // U_1 = -y/6 has no poles
        let zeros = p1.roots(RootKind::ZerosOfU);
        assert_eq!(zeros.roots.len(), 1);
        assert!(C64::new(zeros.roots[0].z[0], zeros.roots[0].z[1]).norm() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let p3 = RationalPair::build(3).unwrap();
        let v = p3.to_json();
        let back = RationalPair::from_json(&v).unwrap();
        assert_eq!(back.u_num, p3.u_num);
        assert_eq!(back.v_den, p3.v_den);
        assert!(BigRational::one().is_one());
    }
}
