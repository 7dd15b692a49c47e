//! The genus-one configuration: branch points A, B, C, D of the quartic
//!
//! ```text
//!     R(z)² = z⁴ + (2/3)x₀z² - (4/3)z + Π,       Π = u+iv = ABCD,
//! ```
//!
//! determined for each x₀ ∈ T by the three moment conditions
//!
//! ```text
//!     M₁ = A+B+C+D = 0,   M₂ = -(4/3)x₀,   M₃ = 4,
//! ```
//!
//! and the two Boutroux conditions Im Φ₊ = Im Φ₋ = 0, where
//!
//! ```text
//!     Φ₊ = -i(3/2)(∫_D^A R dz - ∫_A^B R dz - ∫_B^D R dz),
//!     Φ₋ = -i(3/2)(∫_D^A R dz + ∫_A^B R dz - ∫_B^D R dz),
//! ```
//!
//! with the segment integrals taken along straight segments between the
//! branch points, branch of R fixed by continuity (anchored at the segment
//! midpoints).  The only residues of R dz are real (±2/3 at the two points
//! over infinity), so the imaginary parts used here do not depend on the
//! path class — a property the residue identity
//! (3/2)(∫_D^A + ∫_A^B + ∫_B^D) R dz = -2πi makes checkable.
//!
//! The solve is a two-stage Newton mirroring the two Implicit Function
//! Theorem steps of the existence proof: an outer 2×2 iteration on (u,v)
//! with Jacobian entries built from ∂R/∂u = 1/(2R), ∂R/∂v = i/(2R) over the
//! same segments, and an inner 4×4 iteration recovering (A,B,C,D) from
//! {M₁, M₂, M₃, ABCD = Π}.  Continuation proceeds along rays from the known
//! configuration at x₀ = 0.

use crate::error::{Error, Result};
use crate::levels::{self, Containment};
use crate::path::{integrate_leg, CutPlane, Integrand, Leg, LegAnchor, Radicand};
use crate::C64;
use std::f64::consts::PI;

/// A solved genus-one configuration at a base point x₀.
#[derive(Clone, Copy, Debug)]
pub struct EllipticConfig {
    pub x0: C64,
    /// Π = u+iv = ABCD, the integration constant of the Boutroux ansatz.
    pub pi: C64,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    /// Minimum pairwise distance between the four branch points.
    pub min_root_gap: f64,
}

impl EllipticConfig {
    pub fn roots(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn radicand(&self) -> Radicand {
        Radicand::new(vec![self.a, self.b, self.c, self.d])
    }

    /// Straight-cut system homotopic to the Stokes graph: segments from C
    /// to each of A, B, D.
    pub fn cut_plane(&self) -> CutPlane {
        CutPlane::new(
            self.radicand(),
            vec![(self.c, self.a), (self.c, self.b), (self.c, self.d)],
        )
    }

    /// Moment-condition residuals (M₁, M₂+4x₀/3, M₃-4, ABCD-Π).
    pub fn moment_residuals(&self) -> [C64; 4] {
        let [a, b, c, d] = self.roots();
        [
            a + b + c + d,
            a * a + b * b + c * c + d * d + 4.0 * self.x0 / 3.0,
            a * a * a + b * b * b + c * c * c + d * d * d - 4.0,
            a * b * c * d - self.pi,
        ]
    }

    fn gap(roots: &[C64; 4]) -> f64 {
        let mut g = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                g = g.min((roots[i] - roots[j]).norm());
            }
        }
        g
    }
}

/// The exactly-known configuration at x₀ = 0:
/// A, B, D = (4/3)^{1/3}·(e^{2πi/3}, e^{-2πi/3}, 1), C = 0, Π = 0.
pub fn zero_config() -> EllipticConfig {
    let r = (4.0f64 / 3.0).powf(1.0 / 3.0);
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let a = r * w;
    let b = r * w.conj();
    let c = C64::new(0.0, 0.0);
    let d = C64::new(r, 0.0);
    EllipticConfig {
        x0: C64::new(0.0, 0.0),
        pi: C64::new(0.0, 0.0),
        a,
        b,
        c,
        d,
        min_root_gap: EllipticConfig::gap(&[a, b, c, d]),
    }
}

/// Branch anchors for the three segment integrals (D→A, A→B, B→D): the
/// continued value of R at each segment midpoint.  Carried across Newton
/// iterations and continuation steps so the branch never jumps; seeded from
/// the straight-cut planar branch at a fresh configuration.
#[derive(Clone, Copy, Debug)]
pub struct SegmentBranches {
    mids: [(C64, C64); 3],
}

fn seg_endpoints(cfg: &EllipticConfig) -> [(usize, usize); 3] {
    // Indices into [a, b, c, d]: segments D→A, A→B, B→D.
    [(3, 0), (0, 1), (1, 3)]
}

impl SegmentBranches {
    /// Planar-branch anchors for a fresh configuration.
    pub fn fresh(cfg: &EllipticConfig) -> Result<SegmentBranches> {
        let plane = cfg.cut_plane();
        let roots = cfg.roots();
        let mut mids = [(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 3];
        for (k, (i, j)) in seg_endpoints(cfg).iter().enumerate() {
            let mid = 0.5 * (roots[*i] + roots[*j]);
            mids[k] = (mid, plane.radical(mid)?);
        }
        Ok(SegmentBranches { mids })
    }

    /// Re-anchor on a nearby configuration by continuity.
    pub fn update(&mut self, cfg: &EllipticConfig) -> Result<()> {
        let rad = cfg.radicand();
        let roots = cfg.roots();
        for (k, (i, j)) in seg_endpoints(cfg).iter().enumerate() {
            let mid = 0.5 * (roots[*i] + roots[*j]);
            let v = rad.eval(mid).sqrt();
            let prev = self.mids[k].1;
            let cand = if (v - prev).norm() <= (v + prev).norm() {
                v
            } else {
                -v
            };
            if (cand - prev).norm() > 0.75 * prev.norm().max(cand.norm()) {
                return Err(Error::NonConvergence(
                    "segment branch anchor drifted too far for continuity".into(),
                ));
            }
            self.mids[k] = (mid, cand);
        }
        Ok(())
    }
}

/// The three segment integrals ∫ R dz (D→A, A→B, B→D) and optionally the
/// derivative integrals ∫ dz/(2R) over the same paths and branches.
fn segment_integrals(
    cfg: &EllipticConfig,
    branches: &SegmentBranches,
    with_derivs: bool,
) -> Result<([C64; 3], [C64; 3])> {
    let rad = cfg.radicand();
    let roots = cfg.roots();
    let mut vals = [C64::new(0.0, 0.0); 3];
    let mut derivs = [C64::new(0.0, 0.0); 3];
    let one = |_: C64| C64::new(1.0, 0.0);
    let half = |_: C64| C64::new(0.5, 0.0);
    for (k, (i, j)) in seg_endpoints(cfg).iter().enumerate() {
        let (mid, r_mid) = branches.mids[k];
        let anchor = LegAnchor {
            t: 1.0,
            value: r_mid,
        };
        let leg_i = Leg::FromRoot {
            idx: *i,
            dir: mid - roots[*i],
        };
        let leg_j = Leg::FromRoot {
            idx: *j,
            dir: mid - roots[*j],
        };
        let (vi, _) = integrate_leg(&rad, &leg_i, &Integrand::TimesR(&one), &anchor, 1e-12)?;
        let (vj, _) = integrate_leg(&rad, &leg_j, &Integrand::TimesR(&one), &anchor, 1e-12)?;
        vals[k] = vi - vj;
        if with_derivs {
            let (di, _) = integrate_leg(&rad, &leg_i, &Integrand::OverR(&half), &anchor, 1e-12)?;
            let (dj, _) = integrate_leg(&rad, &leg_j, &Integrand::OverR(&half), &anchor, 1e-12)?;
            derivs[k] = di - dj;
        }
    }
    Ok((vals, derivs))
}

/// Φ₊ and Φ₋ from the segment integrals.
fn phis_from_segments(vals: &[C64; 3]) -> (C64, C64) {
    let i15 = C64::new(0.0, -1.5);
    let phi_p = i15 * (vals[0] - vals[1] - vals[2]);
    let phi_m = i15 * (vals[0] + vals[1] - vals[2]);
    (phi_p, phi_m)
}

/// (Im Φ₊, Im Φ₋) at a configuration; the Boutroux residuals.
pub fn boutroux_residuals(cfg: &EllipticConfig) -> Result<(f64, f64)> {
    let branches = SegmentBranches::fresh(cfg)?;
    let (vals, _) = segment_integrals(cfg, &branches, false)?;
    let (p, m) = phis_from_segments(&vals);
    Ok((p.im, m.im))
}

/// Both Φ values (useful beyond the residuals).
pub fn phi_values(cfg: &EllipticConfig) -> Result<(C64, C64)> {
    let branches = SegmentBranches::fresh(cfg)?;
    let (vals, _) = segment_integrals(cfg, &branches, false)?;
    Ok(phis_from_segments(&vals))
}

/// |(3/2)Σ ∫ R dz + 2πi|: residue-identity check for the branch anchoring.
pub fn residue_identity_residual(cfg: &EllipticConfig) -> Result<f64> {
    let branches = SegmentBranches::fresh(cfg)?;
    let (vals, _) = segment_integrals(cfg, &branches, false)?;
    let total = 1.5 * (vals[0] + vals[1] + vals[2]);
    Ok((total + C64::new(0.0, 2.0 * PI)).norm())
}

/// Label four unordered roots: D maximizes Re(z), A maximizes Re(e^{-2πi/3}z),
/// B maximizes Re(e^{2πi/3}z), C is the remainder.  If the criteria clash,
/// fall back to nearest matching against a predecessor labeling.
pub fn label_roots(unordered: &[C64; 4], prev: Option<&EllipticConfig>) -> Result<[C64; 4]> {
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let argmax = |f: &dyn Fn(C64) -> f64| -> usize {
        (0..4)
            .max_by(|&p, &q| f(unordered[p]).partial_cmp(&f(unordered[q])).unwrap())
            .unwrap()
    };
    let i_d = argmax(&|z| z.re);
    let i_a = argmax(&|z| (z / w).re);
    let i_b = argmax(&|z| (z * w).re);
    let mut used = [false; 4];
    for &i in &[i_d, i_a, i_b] {
        used[i] = true;
    }
    if used.iter().filter(|u| **u).count() == 3 {
        let i_c = (0..4).find(|&i| !used[i]).unwrap();
        return Ok([unordered[i_a], unordered[i_b], unordered[i_c], unordered[i_d]]);
    }
    // Criteria clash: nearest-predecessor matching over all permutations.
    let prev = prev.ok_or_else(|| {
        Error::NonConvergence("ambiguous root labeling and no predecessor".into())
    })?;
    let target = prev.roots();
    let perms = permutations4();
    let best = perms
        .iter()
        .min_by(|p, q| {
            let cost = |perm: &[usize; 4]| -> f64 {
                (0..4).map(|k| (unordered[perm[k]] - target[k]).norm()).sum()
            };
            cost(p).partial_cmp(&cost(q)).unwrap()
        })
        .unwrap();
    Ok([
        unordered[best[0]],
        unordered[best[1]],
        unordered[best[2]],
        unordered[best[3]],
    ])
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    let mut idx = [0usize, 1, 2, 3];
    permute(&mut idx, 0, &mut out);
    out
}

fn permute(idx: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == 4 {
        out.push(*idx);
        return;
    }
    for i in k..4 {
        idx.swap(k, i);
        permute(idx, k + 1, out);
        idx.swap(k, i);
    }
}

/// Inner Newton: recover (A,B,C,D) from {M₁, M₂, M₃, Π} given x₀ and Π,
/// starting from a nearby root configuration.
fn newton_roots(x0: C64, pi: C64, start: [C64; 4]) -> Result<[C64; 4]> {
    let mut r = start;
    for _ in 0..80 {
        let f = [
            r[0] + r[1] + r[2] + r[3],
            r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3] + 4.0 * x0 / 3.0,
            r[0] * r[0] * r[0] + r[1] * r[1] * r[1] + r[2] * r[2] * r[2] + r[3] * r[3] * r[3]
                - 4.0,
            r[0] * r[1] * r[2] * r[3] - pi,
        ];
        let res: f64 = f.iter().map(|v| v.norm()).sum();
        let scale = r.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if res < 1e-13 * scale.powi(3).max(1.0) {
            return Ok(r);
        }
        let mut jac = [[C64::new(0.0, 0.0); 4]; 4];
        for k in 0..4 {
            jac[0][k] = C64::new(1.0, 0.0);
            jac[1][k] = 2.0 * r[k];
            jac[2][k] = 3.0 * r[k] * r[k];
            jac[3][k] = r.iter().enumerate().filter(|&(i, _)| i != k).fold(
                C64::new(1.0, 0.0),
                |acc, (_, z)| acc * z,
            );
        }
        let dx = solve4(&jac, &f)?;
        for k in 0..4 {
            r[k] -= dx[k];
        }
    }
    Err(Error::NonConvergence("root Newton stalled".into()))
}

/// Gaussian elimination with partial pivoting for a 4×4 complex system.
fn solve4(a: &[[C64; 4]; 4], b: &[C64; 4]) -> Result<[C64; 4]> {
    let mut m = *a;
    let mut v = *b;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&p, &q| m[p][col].norm().partial_cmp(&m[q][col].norm()).unwrap())
            .unwrap();
        if m[piv][col].norm() < 1e-300 {
            return Err(Error::NonConvergence("singular Jacobian".into()));
        }
        m.swap(col, piv);
        v.swap(col, piv);
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                let t = m[col][k];
                m[row][k] -= f * t;
            }
            let t = v[col];
            v[row] -= f * t;
        }
    }
    let mut x = [C64::new(0.0, 0.0); 4];
    for row in (0..4).rev() {
        let mut s = v[row];
        for k in row + 1..4 {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Ok(x)
}

const GAP_DEGENERATE: f64 = 1e-4;

fn degeneracy_check(roots: &[C64; 4]) -> Result<f64> {
    let names = ["A", "B", "C", "D"];
    let mut gap = f64::INFINITY;
    let mut pair = (0usize, 0usize);
    for i in 0..4 {
        for j in i + 1..4 {
            let d = (roots[i] - roots[j]).norm();
            if d < gap {
                gap = d;
                pair = (i, j);
            }
        }
    }
    if gap < GAP_DEGENERATE {
        return Err(Error::Degenerate(names[pair.0], names[pair.1], gap));
    }
    Ok(gap)
}

/// Two-stage Newton solve at x₀ from a nearby seed configuration.
pub fn solve_config(x0: C64, seed: &EllipticConfig) -> Result<EllipticConfig> {
    solve_config_tracked(x0, seed, &mut SegmentBranches::fresh(seed)?)
}

/// As [`solve_config`], with explicit branch anchors carried by the caller
/// (used by continuation so the segment branches never re-seed).
pub fn solve_config_tracked(
    x0: C64,
    seed: &EllipticConfig,
    branches: &mut SegmentBranches,
) -> Result<EllipticConfig> {
    let mut pi = seed.pi;
    let mut roots = newton_roots(x0, pi, seed.roots())?;
    let mut cfg = build_config(x0, pi, roots, Some(seed))?;
    branches.update(&cfg)?;
    let (mut vals, mut derivs) = segment_integrals(&cfg, branches, true)?;
    for _outer in 0..50 {
        let (phi_p, phi_m) = phis_from_segments(&vals);
        if phi_p.im.abs() <= 1e-11 && phi_m.im.abs() <= 1e-11 {
            return Ok(cfg);
        }
        // d(Im Φ±)/d(u,v) from the derivative integrals: dΦ±/du = G±,
        // dΦ±/dv = i·G±.
        let i15 = C64::new(0.0, -1.5);
        let g_p = i15 * (derivs[0] - derivs[1] - derivs[2]);
        let g_m = i15 * (derivs[0] + derivs[1] - derivs[2]);
        let j = [[g_p.im, g_p.re], [g_m.im, g_m.re]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            return Err(Error::NonConvergence("Boutroux Jacobian singular".into()));
        }
        let (r1, r2) = (phi_p.im, phi_m.im);
        let du = (r1 * j[1][1] - r2 * j[0][1]) / det;
        let dv = (-r1 * j[1][0] + r2 * j[0][0]) / det;
        // Damped update.
        let mut step = 1.0f64;
        loop {
            let pi_try = pi - C64::new(du * step, dv * step);
            let roots_try = newton_roots(x0, pi_try, roots)?;
            let cfg_try = build_config(x0, pi_try, roots_try, Some(&cfg))?;
            let mut b_try = *branches;
            b_try.update(&cfg_try)?;
            let (vals_try, derivs_try) = segment_integrals(&cfg_try, &b_try, true)?;
            let (pp, pm) = phis_from_segments(&vals_try);
            let new_res = pp.im.abs() + pm.im.abs();
            if new_res < (r1.abs() + r2.abs()) * 0.9 || step < 0.05 {
                pi = pi_try;
                roots = roots_try;
                cfg = cfg_try;
                *branches = b_try;
                vals = vals_try;
                derivs = derivs_try;
                break;
            }
            step *= 0.5;
        }
    }
    Err(Error::NonConvergence(format!(
        "Boutroux Newton did not reach 1e-11 at x0 = {x0}"
    )))
}

fn build_config(
    x0: C64,
    pi: C64,
    unlabeled: [C64; 4],
    prev: Option<&EllipticConfig>,
) -> Result<EllipticConfig> {
    let labeled = label_roots(&unlabeled, prev)?;
    let gap = degeneracy_check(&labeled)?;
    Ok(EllipticConfig {
        x0,
        pi,
        a: labeled[0],
        b: labeled[1],
        c: labeled[2],
        d: labeled[3],
        min_root_gap: gap,
    })
}

/// Continuation along the straight segment from `from.x0` to `x0_target`,
/// adaptive step (initial 0.05, halved on failure).
pub fn continue_to(x0_target: C64, from: &EllipticConfig) -> Result<EllipticConfig> {
    let mut cfg = *from;
    let mut branches = SegmentBranches::fresh(&cfg)?;
    let mut t = 0.0f64;
    let start = from.x0;
    let mut h = 0.05 / (x0_target - start).norm().max(0.05);
    let mut guard = 0;
    while t < 1.0 {
        guard += 1;
        if guard > 4000 {
            return Err(Error::NonConvergence("continuation stalled".into()));
        }
        let tn = (t + h).min(1.0);
        let x_next = start + (x0_target - start) * tn;
        match solve_config_tracked(x_next, &cfg, &mut branches) {
            Ok(next) => {
                cfg = next;
                t = tn;
                h = (h * 1.6).min(0.25);
            }
            Err(Error::Degenerate(a, b, g)) if tn >= 1.0 && h < 1e-3 => {
                return Err(Error::Degenerate(a, b, g));
            }
            Err(e) => {
                if h < 1e-6 {
                    return Err(e);
                }
                h *= 0.5;
            }
        }
    }
    Ok(cfg)
}

/// Solve at x₀ by continuation along the ray from the origin.
pub fn solve_from_zero(x0: C64) -> Result<EllipticConfig> {
    if x0.norm() < 1e-14 {
        return Ok(zero_config());
    }
    if levels::is_in_t(x0) != Containment::Inside {
        return Err(Error::OutsideRegion(format!("{x0}")));
    }
    continue_to(x0, &zero_config())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_config_satisfies_everything() {
        let cfg = zero_config();
        for r in cfg.moment_residuals() {
            assert!(r.norm() < 1e-14, "moment residual {r}");
        }
        let (p, m) = boutroux_residuals(&cfg).unwrap();
        assert!(p.abs() < 1e-10, "Im Φ+ = {p}");
        assert!(m.abs() < 1e-10, "Im Φ- = {m}");
        assert!((cfg.pi).norm() == 0.0);
    }

    #[test]
    fn residue_identity_at_zero_config() {
        let res = residue_identity_residual(&zero_config()).unwrap();
        assert!(res < 1e-9, "residue identity residual {res}");
    }

    #[test]
    fn phi_plus_value_at_zero() {
        // Φ+ is real and equals 2π - 3i∫_D^A R dz with the planar branch.
        let (p, m) = phi_values(&zero_config()).unwrap();
        assert!(p.im.abs() < 1e-10 && m.im.abs() < 1e-10);
        // Schwarz symmetry at real x₀: Φ- = -Φ+.
        assert!((p.re + m.re).abs() < 1e-9, "Φ+ = {p}, Φ- = {m}");
        assert!(p.re > 0.0, "Φ+ should be positive at the origin, got {p}");
    }

    #[test]
    fn path_deflection_invariance() {
        // Replacing the straight path by a two-segment detour must not
        // change the imaginary parts (the only residues of R dz are real).
        let cfg = zero_config();
        let rad = cfg.radicand();
        let one = |_: C64| C64::new(1.0, 0.0);
        // Straight D→A via midpoint.
        let branches = SegmentBranches::fresh(&cfg).unwrap();
        let (vals, _) = segment_integrals(&cfg, &branches, false).unwrap();
        // Detour D→A via a shifted waypoint.
        let way = branches.mids[0].0 + C64::new(0.25, 0.1);
        let plane = cfg.cut_plane();
        let r_way = plane.radical(way).unwrap();
        let (v1, _) = integrate_leg(
            &rad,
            &Leg::FromRoot {
                idx: 3,
                dir: way - cfg.d,
            },
            &Integrand::TimesR(&one),
            &LegAnchor {
                t: 1.0,
                value: r_way,
            },
            1e-12,
        )
        .unwrap();
        let (v2, _) = integrate_leg(
            &rad,
            &Leg::FromRoot {
                idx: 0,
                dir: way - cfg.a,
            },
            &Integrand::TimesR(&one),
            &LegAnchor {
                t: 1.0,
                value: r_way,
            },
            1e-12,
        )
        .unwrap();
        let detour = v1 - v2;
        assert!(
            (detour.im - vals[0].im).abs() < 1e-10,
            "Im invariance: {} vs {}",
            detour.im,
            vals[0].im
        );
    }

    #[test]
    fn solve_at_zero_is_fixed_point() {
        let cfg = solve_config(C64::new(0.0, 0.0), &zero_config()).unwrap();
        assert!((cfg.pi).norm() < 1e-12);
        assert!((cfg.d - zero_config().d).norm() < 1e-12);
    }

    #[test]
    fn continuation_to_interior_point() {
        let cfg = solve_from_zero(C64::new(1.0, 0.0)).unwrap();
        let (p, m) = boutroux_residuals(&cfg).unwrap();
        assert!(p.abs() < 1e-10 && m.abs() < 1e-10);
        for r in cfg.moment_residuals() {
            assert!(r.norm() < 1e-11, "moment residual {r}");
        }
        assert!(cfg.min_root_gap > 1e-3);
        // Schwarz symmetry for real x₀: A = B*, C and D real, Π real.
        assert!((cfg.a - cfg.b.conj()).norm() < 1e-10);
        assert!(cfg.c.im.abs() < 1e-10 && cfg.d.im.abs() < 1e-10);
        assert!(cfg.pi.im.abs() < 1e-10);
    }

    #[test]
    fn presolve_residual_nonzero_then_solved() {
        // x₀ = 0.5 with Π = 0 is not Boutroux-balanced; the solve fixes it.
        let x0 = C64::new(0.5, 0.0);
        let roots = newton_roots(x0, C64::new(0.0, 0.0), zero_config().roots()).unwrap();
        let pre = build_config(x0, C64::new(0.0, 0.0), roots, Some(&zero_config())).unwrap();
        let (p, m) = boutroux_residuals(&pre).unwrap();
        assert!(p.abs() > 1e-4 || m.abs() > 1e-4, "pre-solve should be off");
        let cfg = solve_from_zero(x0).unwrap();
        let (p, m) = boutroux_residuals(&cfg).unwrap();
        assert!(p.abs() < 1e-10 && m.abs() < 1e-10);
    }

    #[test]
    fn labels_stable_along_ray() {
        let mut prev = zero_config();
        for k in 1..=20 {
            let x0 = C64::new(0.05 * k as f64, 0.0);
            let cfg = continue_to(x0, &prev).unwrap();
            assert!((cfg.a - prev.a).norm() < 0.3, "A jumped at step {k}");
            assert!((cfg.d - prev.d).norm() < 0.3, "D jumped at step {k}");
            prev = cfg;
        }
    }

    #[test]
    fn degeneration_toward_left_corner() {
        // x₀ → x_c along the real axis: a triple root forms at -6^{-1/3}
        // with the simple root at 3·6^{-1/3}.  With the concrete labeling
        // (D maximizes Re) the cluster is {A, B, C} and the simple root D.
        let xc = crate::genus_zero::corner_x();
        let target = C64::new(xc + 0.02, 0.0);
        let cfg = solve_from_zero(target).unwrap();
        let cluster = -(6.0f64).powf(-1.0 / 3.0);
        let simple = 3.0 * 6.0f64.powf(-1.0 / 3.0);
        assert!((cfg.d.re - simple).abs() < 0.05, "D = {}", cfg.d);
        for z in [cfg.a, cfg.b, cfg.c] {
            assert!((z - C64::new(cluster, 0.0)).norm() < 0.25, "cluster root {z}");
        }
        assert!(cfg.min_root_gap < 0.25);
    }

    #[test]
    fn rotation_covariance_of_root_set() {
        // Root set at e^{2πi/3}x₀ equals e^{-2πi/3}·(root set at x₀).
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let x0 = C64::new(0.4, 0.2);
        let cfg1 = solve_from_zero(x0).unwrap();
        let cfg2 = solve_from_zero(x0 * w).unwrap();
        let rotated: Vec<C64> = cfg1.roots().iter().map(|z| z / w).collect();
        for z in cfg2.roots() {
            let d = rotated.iter().map(|r| (r - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-8, "rotation covariance failed for {z}: {d}");
        }
        assert!((cfg2.pi.norm() - cfg1.pi.norm()).abs() < 1e-8);
    }
}
