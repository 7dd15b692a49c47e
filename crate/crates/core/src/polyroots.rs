//! Polynomial root finding: Aberth–Ehrlich simultaneous iteration on
//! floating coefficients, followed by Newton polish against the exact
//! coefficients (in double-double precision for large degrees).

use crate::extended::{horner_dd, rational_to_dd, DdC};
use crate::poly::{horner, horner_abs, Poly};
use crate::C64;

/// Outcome of refining one root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Refinement {
    Converged,
    /// Newton did not meet the step tolerance within the iteration budget;
    /// the best iterate is reported anyway.
    Unrefined,
}

#[derive(Clone, Debug)]
pub struct FoundRoot {
    pub z: C64,
    pub status: Refinement,
}

/// All complex roots of `p`, refined until successive Newton steps satisfy
/// |dz| <= 1e-12 * max(1, |z|).
pub fn roots(p: &Poly) -> Vec<FoundRoot> {
    let deg = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    let (coeffs, _) = p.to_f64_scaled();
    let mut guesses = initial_guesses(&coeffs, deg);
    aberth(&coeffs, &mut guesses);

    let use_dd = deg > 66; // |m| > 10 => numerator degree > 66
    let dd_coeffs: Vec<DdC> = if use_dd {
        let (_, shift) = p.to_f64_scaled();
        p.coeffs()
            .iter()
            .map(|c| DdC {
                re: rational_to_dd(c, -shift),
                im: Default::default(),
            })
            .collect()
    } else {
        Vec::new()
    };
    let dcoeffs = derive(&coeffs);

    guesses
        .into_iter()
        .map(|z0| {
            let (z, ok) = if use_dd {
                newton_polish_dd(&dd_coeffs, &dcoeffs, z0)
            } else {
                newton_polish(&coeffs, &dcoeffs, z0)
            };
            FoundRoot {
                z,
                status: if ok {
                    Refinement::Converged
                } else {
                    Refinement::Unrefined
                },
            }
        })
        .collect()
}

fn derive(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

fn initial_guesses(coeffs: &[f64], deg: usize) -> Vec<C64> {
    // Radius from the Cauchy-style bound, spread on a slightly irrational
    // spiral so no guess starts on a symmetry axis.
    let an = coeffs[deg].abs();
    let r = coeffs[..deg]
        .iter()
        .map(|c| (c.abs() / an).powf(1.0 / deg as f64))
        .fold(0.0f64, f64::max)
        .max(0.5);
    (0..deg)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.4;
            C64::from_polar(r * (1.0 + 0.05 * (k as f64).sin()), th)
        })
        .collect()
}

fn aberth(coeffs: &[f64], z: &mut [C64]) {
    let dcoeffs = derive(coeffs);
    let n = z.len();
    for _sweep in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let p = horner(coeffs, z[i]);
            let dp = horner(&dcoeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let mut s = C64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += 1.0 / (z[i] - zj);
                }
            }
            let denom = 1.0 - w * s;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= step;
            let rel = step.norm() / z[i].norm().max(1.0);
            max_step = max_step.max(rel);
        }
        if max_step < 1e-13 {
            break;
        }
    }
}

fn newton_polish(coeffs: &[f64], dcoeffs: &[f64], mut z: C64) -> (C64, bool) {
    for _ in 0..60 {
        let p = horner(coeffs, z);
        let dp = horner(dcoeffs, z);
        if dp.norm() == 0.0 {
            return (z, false);
        }
        let dz = p / dp;
        z -= dz;
        if dz.norm() <= 1e-12 * z.norm().max(1.0) {
            return (z, true);
        }
    }
    (z, false)
}

fn newton_polish_dd(coeffs: &[DdC], dcoeffs: &[f64], mut z: C64) -> (C64, bool) {
    for _ in 0..60 {
        let p = horner_dd(coeffs, z).to_c64();
        let dp = horner(dcoeffs, z);
        if dp.norm() == 0.0 {
            return (z, false);
        }
        let dz = p / dp;
        z -= dz;
        if dz.norm() <= 1e-12 * z.norm().max(1.0) {
            return (z, true);
        }
    }
    (z, false)
}

/// Residual scale for acceptance tests: |p(z)| relative to sum |c_k||z|^k.
pub fn relative_residual(p: &Poly, z: C64) -> f64 {
    let (coeffs, _) = p.to_f64_scaled();
    let v = horner(&coeffs, z).norm();
    let s = horner_abs(&coeffs, z.norm()).max(f64::MIN_POSITIVE);
    v / s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn cubic_with_known_roots() {
        // (y-1)(y-2)(y+3) = y³ - 7y + 6
        let p = Poly::from_ints(&[6, -7, 0, 1]);
        let mut rs: Vec<f64> = roots(&p).iter().map(|r| r.z.re).collect();
        rs.sort_by(f64::total_cmp);
        assert!((rs[0] + 3.0).abs() < 1e-12);
        assert!((rs[1] - 1.0).abs() < 1e-12);
        assert!((rs[2] - 2.0).abs() < 1e-12);
        for r in roots(&p) {
            assert_eq!(r.status, Refinement::Converged);
            assert!(relative_residual(&p, r.z) < 1e-14);
        }
    }

    #[test]
    fn roots_of_unity_high_degree() {
        // y^24 - 1: roots on the unit circle.
        let mut c = vec![BigRational::from_integer(BigInt::from(0)); 25];
        c[0] = BigRational::from_integer(BigInt::from(-1));
        c[24] = BigRational::from_integer(BigInt::from(1));
        let p = Poly::from_coeffs(c);
        let rs = roots(&p);
        assert_eq!(rs.len(), 24);
        for r in &rs {
            assert!((r.z.norm() - 1.0).abs() < 1e-12);
        }
    }
}
