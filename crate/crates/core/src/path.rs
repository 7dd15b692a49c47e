//! Complex path integration with square-root branch tracking.
//!
//! Every elliptic quantity in this crate is a contour integral of f(z)·R(z)
//! or f(z)/R(z) where R² is a monic polynomial with known roots (quadratic
//! outside the elliptic region, quartic inside).  The engine here supplies:
//!
//! * [`SignTrack`]: the analytic continuation of sqrt(g(t)) along a
//!   parametrized path, queryable at arbitrary t (sign relative to the
//!   principal square root, flips localized by adaptive marching);
//! * path legs ([`Leg`]) with the substitutions that remove the generic
//!   singularities: z = root + t²·dir at a branch-point endpoint, and
//!   z = z0 + dir(1/s - 1) for convergent tails to infinity;
//! * adaptive Gauss–Kronrod (G7,K15) quadrature over a leg;
//! * [`CutPlane`]: pointwise evaluation of the branch of R that is analytic
//!   off a prescribed system of straight cuts and behaves like +z^(deg/2)
//!   at infinity.

use crate::error::{Error, Result};
use crate::C64;

/// Monic radicand R²(z) given by its roots.
#[derive(Clone, Debug)]
pub struct Radicand {
    pub roots: Vec<C64>,
}

impl Radicand {
    pub fn new(roots: Vec<C64>) -> Self {
        Radicand { roots }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.roots
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &r| acc * (z - r))
    }

    /// Product skipping one root (used at branch-point path endpoints).
    pub fn eval_deflated(&self, skip: usize, z: C64) -> C64 {
        self.roots
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .fold(C64::new(1.0, 0.0), |acc, (_, &r)| acc * (z - r))
    }

    /// Scale of the root configuration.
    pub fn scale(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(1e-30, f64::max)
    }

    /// The asymptotic branch value at a far point: z^{deg/2}·sqrt(∏(1-r/z)),
    /// principal square root (valid once |z| dominates all roots).
    pub fn far_value(&self, z: C64) -> C64 {
        let deg = self.roots.len();
        debug_assert!(deg % 2 == 0);
        let prod = self
            .roots
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &r| acc * (C64::new(1.0, 0.0) - r / z));
        z.powu(deg as u32 / 2) * prod.sqrt()
    }
}

/// Analytic continuation of sqrt(g(t)) for t in a range, g zero-free.
///
/// Stores a marching grid of continued values; queries re-march from the
/// nearest stored node, so the returned value is ±sqrt of the exactly
/// evaluated radicand — only the sign is history-dependent.
pub struct SignTrack<'g> {
    g: Box<dyn Fn(f64) -> C64 + 'g>,
    ts: Vec<f64>,
    vals: Vec<C64>,
}

impl<'g> SignTrack<'g> {
    /// Build a track anchored at `t_anchor` with continued value `anchor`
    /// there (must satisfy anchor² = g(t_anchor)).
    pub fn build(
        g: impl Fn(f64) -> C64 + 'g,
        t_range: (f64, f64),
        t_anchor: f64,
        anchor: C64,
    ) -> Result<SignTrack<'g>> {
        let mut track = SignTrack {
            g: Box::new(g),
            ts: vec![t_anchor],
            vals: vec![anchor],
        };
        track.extend_to(t_range.0)?;
        track.extend_to(t_range.1)?;
        Ok(track)
    }

    fn extend_to(&mut self, t_target: f64) -> Result<()> {
        if t_target < self.ts[0] {
            let nodes = march(&*self.g, self.ts[0], t_target, self.vals[0])?;
            for (t, v) in nodes {
                self.ts.insert(0, t);
                self.vals.insert(0, v);
            }
        } else if t_target > *self.ts.last().unwrap() {
            let nodes = march(
                &*self.g,
                *self.ts.last().unwrap(),
                t_target,
                *self.vals.last().unwrap(),
            )?;
            for (t, v) in nodes {
                self.ts.push(t);
                self.vals.push(v);
            }
        }
        Ok(())
    }

    /// Continued sqrt value at t.
    pub fn value(&self, t: f64) -> C64 {
        let idx = match self
            .ts
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(i) => return self.vals[i],
            Err(i) => {
                if i == 0 {
                    0
                } else if i >= self.ts.len() {
                    self.ts.len() - 1
                } else if (self.ts[i] - t).abs() < (t - self.ts[i - 1]).abs() {
                    i
                } else {
                    i - 1
                }
            }
        };
        // Local re-march; the stored grid keeps flips isolated.
        match march(&*self.g, self.ts[idx], t, self.vals[idx]) {
            Ok(nodes) => nodes.last().map(|&(_, v)| v).unwrap_or(self.vals[idx]),
            Err(_) => self.vals[idx],
        }
    }
}

/// March the continued sqrt from (t0, v0) to t1; returns visited nodes
/// (excluding t0) ending exactly at t1.
fn march(g: &dyn Fn(f64) -> C64, t0: f64, t1: f64, v0: C64) -> Result<Vec<(f64, C64)>> {
    if t0 == t1 {
        return Ok(vec![]);
    }
    let sign = (t1 - t0).signum();
    let mut nodes = Vec::new();
    let mut t = t0;
    let mut v = v0;
    let mut h = (t1 - t0) / 8.0;
    let mut guard = 0usize;
    while (t1 - t) * sign > 0.0 {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::NonConvergence(
                "branch continuation exceeded step budget".into(),
            ));
        }
        let mut step = h;
        if (t + step - t1) * sign > 0.0 {
            step = t1 - t;
        }
        let tn = t + step;
        let gn = g(tn);
        if gn.norm() == 0.0 {
            return Err(Error::BranchCut("radicand vanishes on path"));
        }
        let s = gn.sqrt();
        let cand = if (s - v).norm() <= (s + v).norm() { s } else { -s };
        // Accept only if the value moved a fraction of its size, so a sign
        // flip cannot hide inside one step.
        if (cand - v).norm() > 0.7 * v.norm().max(cand.norm()) && step.abs() > 1e-14 {
            h *= 0.5;
            continue;
        }
        t = tn;
        if (cand - v).norm() < 0.1 * v.norm() {
            h *= 1.5;
        }
        v = cand;
        nodes.push((t, v));
    }
    Ok(nodes)
}

/// One leg of an integration path.
pub enum Leg {
    /// Straight line from a to b, both regular points.
    Line { a: C64, b: C64 },
    /// z(t) = root + t²·dir, t ∈ [0,1]: leaves the branch point `roots[idx]`
    /// and ends at root + dir.
    FromRoot { idx: usize, dir: C64 },
    /// z(s) = z0 + dir·(1/s - 1), s ∈ (0,1]: parametrizes infinity→z0 as s
    /// runs 0→1.  The geometric integral z0→∞ is minus the s-integral.
    Tail { z0: C64, dir: C64 },
}

impl Leg {
    pub fn z(&self, rad: &Radicand, t: f64) -> C64 {
        match self {
            Leg::Line { a, b } => a + (b - a) * t,
            Leg::FromRoot { idx, dir } => rad.roots[*idx] + dir * (t * t),
            Leg::Tail { z0, dir } => z0 + dir * (1.0 / t - 1.0),
        }
    }

    fn dz_dt(&self, t: f64) -> C64 {
        match self {
            Leg::Line { a, b } => b - a,
            Leg::FromRoot { dir, .. } => dir * (2.0 * t),
            Leg::Tail { dir, .. } => -dir / (t * t),
        }
    }
}

/// What to integrate along a leg.
pub enum Integrand<'f> {
    /// f(z)·R(z) dz
    TimesR(&'f dyn Fn(C64) -> C64),
    /// f(z)/R(z) dz
    OverR(&'f dyn Fn(C64) -> C64),
    /// f(z, R(z)) dz — not usable on `FromRoot` legs.
    Plain(&'f dyn Fn(C64, C64) -> C64),
}

/// Branch anchor for a leg: the continued value at parameter `t` of R for
/// Line/Tail legs, or of the reduced radical R/t for FromRoot legs (finite
/// and nonzero at the root).
pub struct LegAnchor {
    pub t: f64,
    pub value: C64,
}

pub const QUAD_ATOL: f64 = 1e-10;
pub const QUAD_RTOL: f64 = 1e-12;

/// Integrate `integrand` along `leg` with the branch fixed by `anchor`.
/// Returns the integral and the tracked (reduced) radical at t = 1.
pub fn integrate_leg(
    rad: &Radicand,
    leg: &Leg,
    integrand: &Integrand,
    anchor: &LegAnchor,
    atol: f64,
) -> Result<(C64, C64)> {
    let (t_lo, t_hi) = match leg {
        Leg::Tail { .. } => (1e-14, 1.0),
        _ => (0.0, 1.0),
    };
    match leg {
        Leg::FromRoot { idx, dir } => {
            if matches!(integrand, Integrand::Plain(_)) {
                return Err(Error::Invalid(
                    "Plain integrand not supported on branch-point legs".into(),
                ));
            }
            // R(z(t)) = t·τ(t), τ = sqrt(dir·deflated(z(t))).
            let g = |t: f64| *dir * rad.eval_deflated(*idx, leg.z(rad, t));
            let track = SignTrack::build(g, (t_lo, t_hi), anchor.t, anchor.value)?;
            let f = |t: f64| -> C64 {
                let z = leg.z(rad, t);
                let tau = track.value(t);
                match integrand {
                    // f·R dz = f·(t·τ)·(2t·dir) dt
                    Integrand::TimesR(f) => f(z) * tau * (*dir * (2.0 * t * t)),
                    // f/R dz = f·(2·dir)/τ dt  (the t's cancel exactly)
                    Integrand::OverR(f) => f(z) * (*dir * 2.0) / tau,
                    Integrand::Plain(_) => unreachable!(),
                }
            };
            let v = adaptive_gk(&f, t_lo, t_hi, atol)?;
            Ok((v, track.value(1.0)))
        }
        Leg::Line { .. } | Leg::Tail { .. } => {
            let g = |t: f64| rad.eval(leg.z(rad, t));
            let track = SignTrack::build(g, (t_lo, t_hi), anchor.t, anchor.value)?;
            let f = |t: f64| -> C64 {
                let z = leg.z(rad, t);
                let r = track.value(t);
                let dz = leg.dz_dt(t);
                match integrand {
                    Integrand::TimesR(f) => f(z) * r * dz,
                    Integrand::OverR(f) => f(z) / r * dz,
                    Integrand::Plain(f) => f(z, r) * dz,
                }
            };
            let v = adaptive_gk(&f, t_lo, t_hi, atol)?;
            Ok((v, track.value(1.0)))
        }
    }
}

/// Integral of an explicit complex function over [a,b] ⊂ ℝ (no radical).
pub fn integrate_fn(f: &dyn Fn(f64) -> C64, a: f64, b: f64, atol: f64) -> Result<C64> {
    adaptive_gk(&|t| f(t), a, b, atol)
}

// 15-point Kronrod nodes/weights with embedded 7-point Gauss (positive half).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn qk15(f: &dyn Fn(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    kron *= h;
    gauss *= h;
    (kron, (kron - gauss).norm())
}

/// Adaptive bisection of [a,b] until the summed error estimate is below
/// max(atol, QUAD_RTOL·|I|).
pub fn adaptive_gk(f: &dyn Fn(f64) -> C64, a: f64, b: f64, atol: f64) -> Result<C64> {
    struct Item {
        a: f64,
        b: f64,
        val: C64,
        err: f64,
    }
    let (val, err) = qk15(f, a, b);
    let mut items = vec![Item { a, b, val, err }];
    loop {
        let total: C64 = items.iter().map(|i| i.val).sum();
        let total_err: f64 = items.iter().map(|i| i.err).sum();
        let tol = atol.max(QUAD_RTOL * total.norm());
        if total_err <= tol {
            return Ok(total);
        }
        if items.len() > 4000 {
            return Err(Error::QuadratureTolerance {
                err: total_err,
                tol,
            });
        }
        let worst = items
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.partial_cmp(&b.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let Item { a, b, .. } = items.swap_remove(worst);
        let m = 0.5 * (a + b);
        if m - a < 1e-15 * (m.abs() + 1.0) {
            return Err(Error::QuadratureTolerance {
                err: total_err,
                tol,
            });
        }
        let (v1, e1) = qk15(f, a, m);
        let (v2, e2) = qk15(f, m, b);
        items.push(Item {
            a,
            b: m,
            val: v1,
            err: e1,
        });
        items.push(Item {
            a: m,
            b,
            val: v2,
            err: e2,
        });
    }
}

/// The branch of R analytic off a system of straight cuts, with
/// R ~ +z^{deg/2} at infinity, evaluated pointwise.
///
/// Continuation runs along a ray from far outside the configuration to z,
/// with one sign flip per crossed cut (the value continued along a path
/// differs from the planar branch exactly by (-1)^#crossings).
pub struct CutPlane {
    pub rad: Radicand,
    pub cuts: Vec<(C64, C64)>,
}

impl CutPlane {
    pub fn new(rad: Radicand, cuts: Vec<(C64, C64)>) -> Self {
        CutPlane { rad, cuts }
    }

    /// Planar branch value at z.
    pub fn radical(&self, z: C64) -> Result<C64> {
        let scale = self.rad.scale();
        for &(a, b) in &self.cuts {
            if dist_to_segment(z, a, b) < 1e-13 * scale {
                return Err(Error::BranchCut("evaluation point lies on a cut"));
            }
        }
        let dir = self.pick_ray(z, scale)?;
        let far = 80.0 * scale;
        let z_far = z + dir * far;
        let mut crossings = 0usize;
        for &(a, b) in &self.cuts {
            if segments_cross(z, z_far, a, b) {
                crossings += 1;
            }
        }
        let g = |t: f64| self.rad.eval(z + dir * (far * (1.0 - t)));
        let anchor = self.rad.far_value(z_far);
        let track = SignTrack::build(g, (0.0, 1.0), 0.0, anchor)?;
        let v = track.value(1.0);
        Ok(if crossings % 2 == 0 { v } else { -v })
    }

    /// A ray direction from z that stays clear of roots and crosses cuts
    /// transversally.
    fn pick_ray(&self, z: C64, scale: f64) -> Result<C64> {
        let base = if z.norm() > 1e-12 * scale {
            z / z.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut best: Option<(f64, C64)> = None;
        for k in 0..12 {
            let dir = base * C64::from_polar(1.0, 0.53 * k as f64);
            let far = z + dir * (80.0 * scale);
            let mut score = f64::INFINITY;
            for &r in &self.rad.roots {
                score = score.min(dist_to_segment(r, z, far));
            }
            for &(a, b) in &self.cuts {
                score = score.min(crossing_margin(z, far, a, b));
            }
            if score > 1e-3 * scale {
                return Ok(dir);
            }
            if best.map_or(true, |(s, _)| score > s) {
                best = Some((score, dir));
            }
        }
        best.map(|(_, d)| d)
            .ok_or(Error::BranchCut("no usable continuation ray"))
    }
}

pub fn dist_to_segment(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn orient(a: C64, b: C64, c: C64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

/// Proper crossing test for open segments.
pub fn segments_cross(p1: C64, p2: C64, q1: C64, q2: C64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

/// How safely segments cross: infinity if they do not; otherwise the
/// distance of the crossing point from the nearest endpoint of (q1,q2).
fn crossing_margin(p1: C64, p2: C64, q1: C64, q2: C64) -> f64 {
    if !segments_cross(p1, p2, q1, q2) {
        return f64::INFINITY;
    }
    let r = p2 - p1;
    let s = q2 - q1;
    let denom = r.re * s.im - r.im * s.re;
    if denom.abs() < 1e-300 {
        return 0.0;
    }
    let qp = q1 - p1;
    let t = (qp.re * s.im - qp.im * s.re) / denom;
    let x = p1 + r * t;
    (x - q1).norm().min((x - q2).norm())
}

/// Boundary value of R on the '+' (left) side of the oriented straight
/// segment a→b at its midpoint, via the planar branch displaced a hair left.
pub fn left_boundary_anchor(plane: &CutPlane, a: C64, b: C64) -> Result<C64> {
    let dir = (b - a) / (b - a).norm();
    let normal = C64::new(0.0, 1.0) * dir;
    let mid = 0.5 * (a + b);
    let delta = 1e-7 * plane.rad.scale();
    plane.radical(mid + normal * delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gk_integrates_smooth_functions() {
        let f = |t: f64| C64::from_polar(1.0, 2.0 * PI * t);
        let v = adaptive_gk(&f, 0.0, 1.0, 1e-12).unwrap();
        assert!(v.norm() < 1e-12);
        let g = |t: f64| C64::new(t * t, 0.0);
        let v = adaptive_gk(&g, 0.0, 1.0, 1e-12).unwrap();
        assert!((v.re - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn sign_track_follows_circle() {
        // g(t) = e^{2πit}: sqrt continued once around flips sign.
        let g = |t: f64| C64::from_polar(1.0, 2.0 * PI * t);
        let track = SignTrack::build(g, (0.0, 1.0), 0.0, C64::new(1.0, 0.0)).unwrap();
        assert!((track.value(1.0) + C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((track.value(0.5) - C64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn segment_between_roots_has_removable_endpoints() {
        // R² = z²-1; with the branch R(0) = +i, ∫_{-1}^{1} dz/R = -iπ.
        let rad = Radicand::new(vec![C64::new(-1.0, 0.0), C64::new(1.0, 0.0)]);
        let mid = C64::new(0.0, 0.0);
        let anchor = LegAnchor {
            t: 1.0,
            value: C64::new(0.0, 1.0),
        };
        let one = |_: C64| C64::new(1.0, 0.0);
        let (v1, _) = integrate_leg(
            &rad,
            &Leg::FromRoot {
                idx: 0,
                dir: mid - rad.roots[0],
            },
            &Integrand::OverR(&one),
            &anchor,
            1e-12,
        )
        .unwrap();
        let (v2, _) = integrate_leg(
            &rad,
            &Leg::FromRoot {
                idx: 1,
                dir: mid - rad.roots[1],
            },
            &Integrand::OverR(&one),
            &anchor,
            1e-12,
        )
        .unwrap();
        let total = v1 - v2;
        assert!((total - C64::new(0.0, -PI)).norm() < 1e-10, "got {total}");
    }

    #[test]
    fn from_root_anchor_is_reduced_radical() {
        // Check τ = R/t is what the anchor refers to: for R² = z²-1 on the
        // leg from -1 toward 0, τ(1)² = dir·(z-1) at z=0 = (+1)(-1) = -1,
        // so τ(1) = ±i and the anchor above picked +i consistently with
        // R(0) = t·τ = +i.
        let rad = Radicand::new(vec![C64::new(-1.0, 0.0), C64::new(1.0, 0.0)]);
        let leg = Leg::FromRoot {
            idx: 0,
            dir: C64::new(1.0, 0.0),
        };
        let g_at_1 = C64::new(1.0, 0.0) * rad.eval_deflated(0, leg.z(&rad, 1.0));
        assert!((g_at_1 - C64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tail_leg_matches_arctan() {
        // ∫_1^∞ dz/(z²+1) = π/4; Plain integrand, tail parametrization.
        let rad = Radicand::new(vec![C64::new(0.0, 1.0), C64::new(0.0, -1.0)]);
        let leg = Leg::Tail {
            z0: C64::new(1.0, 0.0),
            dir: C64::new(1.0, 0.0),
        };
        let f = |z: C64, _r: C64| 1.0 / (z * z + 1.0);
        let anchor = LegAnchor {
            t: 1.0,
            value: rad.eval(C64::new(1.0, 0.0)).sqrt(),
        };
        let (v, _) = integrate_leg(&rad, &leg, &Integrand::Plain(&f), &anchor, 1e-12).unwrap();
        assert!(((-v) - C64::new(PI / 4.0, 0.0)).norm() < 1e-10, "got {v}");
    }

    #[test]
    fn planar_branch_handles_cut() {
        // R² = z²-1, cut [-1,1], R ~ +z at ∞.
        let rad = Radicand::new(vec![C64::new(-1.0, 0.0), C64::new(1.0, 0.0)]);
        let plane = CutPlane::new(rad, vec![(C64::new(-1.0, 0.0), C64::new(1.0, 0.0))]);
        let v = plane.radical(C64::new(2.0, 0.0)).unwrap();
        assert!((v - C64::new(3f64.sqrt(), 0.0)).norm() < 1e-10);
        let v = plane.radical(C64::new(-2.0, 0.0)).unwrap();
        assert!((v + C64::new(3f64.sqrt(), 0.0)).norm() < 1e-10);
        let up = plane.radical(C64::new(0.0, 1e-9)).unwrap();
        let dn = plane.radical(C64::new(0.0, -1e-9)).unwrap();
        assert!((up + dn).norm() < 1e-6, "boundary values must be opposite");
        assert!((up.norm() - 1.0).abs() < 1e-6);
    }
}
