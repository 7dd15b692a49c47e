//! Everything outside the elliptic region T.
//!
//! The spectral data degenerates to a quadratic radical r(z)² = (z-a)(z-b)
//! whose endpoints satisfy the two moment conditions
//!
//! ```text
//!     6S² + 3Δ² = -8x,      3SΔ² = 16,       S = a+b,  Δ = b-a,
//! ```
//!
//! so S solves the cubic 3S³ + 4xS + 8 = 0.  The branch used everywhere is
//! the one analytic off Σ_S (three straight segments joining the origin to
//! the corner points x_c, x_c·e^{±2πi/3}, x_c = -(9/2)^{2/3}) with
//! S = -2/x + O(x⁻⁴) at infinity; Δ is analytic off Σ_S ∪ R_{-π/3} and
//! positive real on (-∞, x_c).  Both are computed by Newton continuation
//! along explicit paths from a far anchor on the negative real axis, where
//! the asymptotics pin the branches.
//!
//! On top of these live the exponent λ = S³/4 - log(3S) (log branch carried
//! along the same continuation; e^{mλ} is single-valued for integer m), the
//! phase function h(z) with h'(z) = (3/2)(z + S/2) r(z), the edge condition
//! whose zero level set bounds T, and the exterior approximants
//!
//! ```text
//!     Ů = e^{xS/6},   V̊ = e^{-xS/6}/(3S),   P̊ = -S/2,   Q̊ = S/2.
//! ```

use crate::error::{Error, Result};
use crate::path::dist_to_segment;
use crate::C64;
use std::f64::consts::PI;

/// Left-most corner of the elliptic region: x_c = -(9/2)^{2/3}.
pub fn corner_x() -> f64 {
    -(4.5f64).powf(2.0 / 3.0)
}

/// The three corners x_c, x_c e^{-2πi/3}, x_c e^{2πi/3} (equivalently at
/// angles π, π/3, -π/3).
pub fn corners() -> [C64; 3] {
    let xc = C64::new(corner_x(), 0.0);
    let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
    [xc, xc / rot, xc * rot]
}

/// The branch-cut system Σ_S: segments from the origin to each corner.
pub fn sigma_s_segments() -> [(C64, C64); 3] {
    let o = C64::new(0.0, 0.0);
    let c = corners();
    [(o, c[0]), (o, c[1]), (o, c[2])]
}

/// Exterior data at one point x.
#[derive(Clone, Copy, Debug)]
pub struct GenusZeroData {
    pub x: C64,
    pub s: C64,
    pub delta: C64,
    pub a: C64,
    pub b: C64,
    /// λ = S³/4 - log(3S), log branch continued from the anchor.
    pub lambda: C64,
    /// Sheet index of the continued logarithm vs. the principal branch.
    pub lambda_branch_index: i64,
}

/// Continuation engine for (S, Δ, log 3S).
///
/// Stateless users call [`genus_zero_data`]; tracers walking many nearby
/// points should hold a `GenusZeroSolver` so each step continues from the
/// previous one instead of re-running the whole anchor path.
pub struct GenusZeroSolver {
    last: Option<NodeState>,
}

#[derive(Clone, Copy, Debug)]
struct NodeState {
    x: C64,
    s: C64,
    delta: C64,
    log3s: C64,
}

impl Default for GenusZeroSolver {
    fn default() -> Self {
        Self::new()
    }
}

const ANCHOR_X: f64 = -1e6;

impl GenusZeroSolver {
    pub fn new() -> Self {
        GenusZeroSolver { last: None }
    }

    /// Full data at x; reuses the previous point when the straight step to
    /// it is safe (no cut crossing, not near a corner).
    pub fn data(&mut self, x: C64) -> Result<GenusZeroData> {
        check_off_sigma_s(x)?;
        let state = match self.last {
            Some(prev) if step_is_safe(prev.x, x) => self.march_segment(prev, x)?,
            _ => {
                let state = march_anchor_path(x)?;
                state
            }
        };
        self.last = Some(state);
        Ok(make_data(state))
    }

    fn march_segment(&self, from: NodeState, x: C64) -> Result<NodeState> {
        march_states(from, &[x])
    }
}

/// One-shot computation of the exterior data at x.
pub fn genus_zero_data(x: C64) -> Result<GenusZeroData> {
    GenusZeroSolver::new().data(x)
}

/// The branch S(x) alone.
pub fn solve_s(x: C64) -> Result<C64> {
    Ok(genus_zero_data(x)?.s)
}

fn make_data(st: NodeState) -> GenusZeroData {
    let lambda = st.s * st.s * st.s / 4.0 - st.log3s;
    let principal = (3.0 * st.s).ln();
    let branch = ((st.log3s.im - principal.im) / (2.0 * PI)).round() as i64;
    GenusZeroData {
        x: st.x,
        s: st.s,
        delta: st.delta,
        a: (st.s - st.delta) / 2.0,
        b: (st.s + st.delta) / 2.0,
        lambda,
        lambda_branch_index: branch,
    }
}

fn check_off_sigma_s(x: C64) -> Result<()> {
    for (p, q) in sigma_s_segments() {
        if dist_to_segment(x, p, q) < 1e-10 {
            return Err(Error::BranchCut("x lies on Sigma_S"));
        }
    }
    Ok(())
}

/// Is a direct continuation step from `from` to `to` safe?  It must not
/// cross Σ_S or the Δ-cut ray R_{-π/3}, and should not graze a corner.
fn step_is_safe(from: C64, to: C64) -> bool {
    if (to - from).norm() > 0.9 {
        return false;
    }
    let far = 1e7;
    let ray_start = corners()[2]; // |x_c| e^{-iπ/3}
    let ray_end = C64::from_polar(far, -PI / 3.0);
    for (p, q) in sigma_s_segments() {
        if crate::path::segments_cross(from, to, p, q) {
            return false;
        }
    }
    if crate::path::segments_cross(from, to, ray_start, ray_end) {
        return false;
    }
    for c in corners() {
        if dist_to_segment(c, from, to) < 0.05 {
            return false;
        }
    }
    true
}

/// Waypoints from the anchor to x avoiding the cuts: down the negative real
/// axis, around a circle of radius 4 (outside Σ_S), then radially to x,
/// with lateral detours when the radial leg grazes a corner.
fn anchor_waypoints(x: C64) -> Vec<C64> {
    let mut pts = vec![C64::new(ANCHOR_X, 0.0)];
    let r_arc = 4.0f64;
    let theta = x.arg();
    pts.push(C64::new(-r_arc, 0.0));
    // Arc from angle π to θ; go the way that avoids the ray at -π/3.
    let (start, end) = if theta > -PI / 3.0 {
        (PI, theta) // clockwise, decreasing angle
    } else {
        (PI, theta + 2.0 * PI) // counterclockwise
    };
    let steps = ((end - start).abs() / (PI / 12.0)).ceil().max(1.0) as usize;
    for k in 1..=steps {
        let ang = start + (end - start) * (k as f64 / steps as f64);
        pts.push(C64::from_polar(r_arc, ang));
    }
    // Radial leg with corner detours.
    let from = *pts.last().unwrap();
    for w in corner_detours(from, x) {
        pts.push(w);
    }
    pts.push(x);
    pts
}

fn corner_detours(p: C64, q: C64) -> Vec<C64> {
    let mut out = Vec::new();
    for c in corners() {
        if dist_to_segment(c, p, q) < 0.3 {
            // Perpendicular to the corner's outgoing ray, on the target's side.
            let ray_dir = c / c.norm();
            let lateral = C64::new(0.0, 1.0) * ray_dir;
            let side = {
                let s = (lateral.re * (q - c).re + lateral.im * (q - c).im).signum();
                if s == 0.0 {
                    1.0
                } else {
                    s
                }
            };
            out.push(c + lateral * (0.45 * side));
        }
    }
    out
}

fn march_anchor_path(x: C64) -> Result<NodeState> {
    let pts = anchor_waypoints(x);
    // At the anchor the asymptotics fix everything: S ≈ -2/x (refined),
    // Δ = +sqrt(16/(3S)) real positive, log(3S) the real logarithm.
    let xa = pts[0];
    let s0 = newton_cubic(xa, -2.0 / xa)?;
    let d2 = 16.0 / (3.0 * s0);
    let delta0 = d2.sqrt();
    let delta0 = if delta0.re >= 0.0 { delta0 } else { -delta0 };
    let log0 = (3.0 * s0).ln();
    let state = NodeState {
        x: xa,
        s: s0,
        delta: delta0,
        log3s: log0,
    };
    march_states(state, &pts[1..])
}

/// March (S, Δ, log 3S) through a waypoint list by adaptive sub-stepping.
fn march_states(mut st: NodeState, waypoints: &[C64]) -> Result<NodeState> {
    for &target in waypoints {
        let mut t = 0.0f64;
        let start = st.x;
        let mut h = pick_initial_step(start, target);
        let mut guard = 0;
        while t < 1.0 {
            guard += 1;
            if guard > 200_000 {
                return Err(Error::NonConvergence("branch continuation stalled".into()));
            }
            let tn = (t + h).min(1.0);
            let xn = start + (target - start) * tn;
            match continuation_step(&st, xn) {
                Ok(next) => {
                    st = next;
                    t = tn;
                    h = (h * 1.7).min(0.25);
                }
                Err(_) if h > 1e-8 => h *= 0.4,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(st)
}

fn pick_initial_step(a: C64, b: C64) -> f64 {
    // Long legs on the real axis (anchor run-in) can take multiplicative
    // strides; short legs start at a modest fraction.
    let len = (b - a).norm();
    if len > 100.0 {
        0.02
    } else {
        0.2
    }
}

fn continuation_step(prev: &NodeState, xn: C64) -> Result<NodeState> {
    let s = newton_cubic(xn, prev.s)?;
    // Guard against silently jumping onto another sheet of the cubic.
    let (o1, o2) = other_cubic_roots(xn, s);
    let gap = (s - o1).norm().min((s - o2).norm());
    if (s - prev.s).norm() > 0.5 * gap {
        return Err(Error::NonConvergence("step too large for branch safety".into()));
    }
    let d2 = 16.0 / (3.0 * s);
    let droot = d2.sqrt();
    let delta = if (droot - prev.delta).norm() <= (droot + prev.delta).norm() {
        droot
    } else {
        -droot
    };
    if (delta - prev.delta).norm() > 0.7 * prev.delta.norm() {
        return Err(Error::NonConvergence("Delta step too large".into()));
    }
    let ratio = (3.0 * s) / (3.0 * prev.s);
    let log3s = prev.log3s + ratio.ln();
    Ok(NodeState {
        x: xn,
        s,
        delta,
        log3s,
    })
}

/// Newton iteration on 3S³ + 4xS + 8 = 0.
fn newton_cubic(x: C64, mut s: C64) -> Result<C64> {
    for _ in 0..50 {
        let f = 3.0 * s * s * s + 4.0 * x * s + 8.0;
        let df = 9.0 * s * s + 4.0 * x;
        if df.norm() < 1e-14 {
            return Err(Error::NonConvergence("cubic derivative vanished".into()));
        }
        let step = f / df;
        s -= step;
        if step.norm() <= 1e-15 * s.norm().max(1.0) {
            return Ok(s);
        }
    }
    // Accept if the residual is tiny relative to the terms.
    let f = 3.0 * s * s * s + 4.0 * x * s + 8.0;
    let scale = (3.0 * s * s * s).norm().max((4.0 * x * s).norm()).max(8.0);
    if f.norm() <= 1e-12 * scale {
        Ok(s)
    } else {
        Err(Error::NonConvergence("cubic Newton did not converge".into()))
    }
}

/// The other two roots of the cubic, by deflation.
pub fn other_cubic_roots(x: C64, s1: C64) -> (C64, C64) {
    // 3S³+4xS+8 = 3(S-s1)(S² + s1 S + (s1² + 4x/3))
    let c = s1 * s1 + 4.0 * x / 3.0;
    let disc = (s1 * s1 - 4.0 * c).sqrt();
    ((-s1 + disc) / 2.0, (-s1 - disc) / 2.0)
}

/// Cubic residual, for validation.
pub fn cubic_residual(x: C64, s: C64) -> f64 {
    let f = 3.0 * s * s * s + 4.0 * x * s + 8.0;
    let scale = (3.0 * s * s * s).norm().max((4.0 * x * s).norm()).max(8.0);
    f.norm() / scale
}

/// The quadratic radical r(z) with r² = (z-a)(z-b), cut on [a,b], r ~ z at
/// infinity: closed form via a principal square root of the cross-ratio,
/// which is negative real exactly on the open segment.
pub fn quad_radical(z: C64, a: C64, b: C64) -> C64 {
    if (z - a).norm() == 0.0 || (z - b).norm() == 0.0 {
        return C64::new(0.0, 0.0);
    }
    (z - a) * ((z - b) / (z - a)).sqrt()
}

/// h(z;x) up to the additive branch of the logarithm: the value whose real
/// part is single-valued is returned together with its building blocks.
///
/// h = (1/8)(4z² + 2Sz - 2S² - Δ²) r(z) - log((S - 2z - 2r)/4) - S³/8,
/// with the principal log; Re h is branch-independent, and that is all the
/// level-set machinery uses.
pub fn h_value(data: &GenusZeroData, z: C64) -> C64 {
    let r = quad_radical(z, data.a, data.b);
    let s = data.s;
    let d2 = data.delta * data.delta;
    let poly = 4.0 * z * z + 2.0 * s * z - 2.0 * s * s - d2;
    let script_l = ((s - 2.0 * z - 2.0 * r) / 4.0).ln();
    poly * r / 8.0 - script_l - s * s * s / 8.0
}

/// F(z;x) = Re(2h(z;x) + λ(x)), elementary and branch-free.
pub fn f_value(data: &GenusZeroData, z: C64) -> f64 {
    let r = quad_radical(z, data.a, data.b);
    let s = data.s;
    let d2 = data.delta * data.delta;
    let poly = 4.0 * z * z + 2.0 * s * z - 2.0 * s * s - d2;
    (poly * r).re / 4.0 - 2.0 * ((s - 2.0 * z - 2.0 * r) / 4.0).norm().ln()
        - (3.0 * s).norm().ln()
}

/// h'(z) = (3/2)(z + S/2) r(z).
pub fn h_prime(data: &GenusZeroData, z: C64) -> C64 {
    1.5 * (z + data.s / 2.0) * quad_radical(z, data.a, data.b)
}

/// The edge condition: zero exactly on ∂T and on the three rays R.
///
/// Re[(x/3)·r(-S/2)] - log|S - r(-S/2)| - (1/2)log|S| + log(2√3/3).
pub fn edge_residual(x: C64) -> Result<f64> {
    // At a corner the band endpoint collides with -S/2, r(-S/2) = 0, and
    // the formula collapses to -(3/2)log|S_d| + log(2/√3) with |S_d| =
    // (4/3)^{1/3}, which vanishes identically; continuation cannot reach
    // the double root, so handle the corners directly.
    for c in corners() {
        if (x - c).norm() < 1e-8 {
            let sd = (4.0f64 / 3.0).powf(1.0 / 3.0);
            return Ok(-1.5 * sd.ln() + (2.0 / 3f64.sqrt()).ln());
        }
    }
    let data = genus_zero_data(x)?;
    Ok(edge_residual_from(&data))
}

pub fn edge_residual_from(data: &GenusZeroData) -> f64 {
    let r0 = quad_radical(-data.s / 2.0, data.a, data.b);
    (data.x / 3.0 * r0).re - (data.s - r0).norm().ln() - 0.5 * data.s.norm().ln()
        + (2.0 * 3f64.sqrt() / 3.0).ln()
}

/// Exterior leading-order approximants.
#[derive(Clone, Copy, Debug)]
pub struct ExteriorApproximants {
    pub u: C64,
    pub v: C64,
    pub p: C64,
    pub q: C64,
}

pub fn exterior_approximants(data: &GenusZeroData) -> ExteriorApproximants {
    let e = (data.x * data.s / 6.0).exp();
    ExteriorApproximants {
        u: e,
        v: 1.0 / (3.0 * data.s) / e,
        p: -data.s / 2.0,
        q: data.s / 2.0,
    }
}

/// e^{mλ(x)} for integer m, single-valued by construction:
/// e^{mλ} = (e^{S³/4} / (3S))^m.
pub fn exp_m_lambda(data: &GenusZeroData, m: i32) -> C64 {
    let t = (data.s * data.s * data.s / 4.0).exp() / (3.0 * data.s);
    t.powi(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_field_branch() {
        let x = C64::new(100.0, 0.0);
        let s = solve_s(x).unwrap();
        assert!((s + 2.0 / 100.0).norm() < 1e-6, "S = {s}");
        assert!(cubic_residual(x, s) < 1e-12);
    }

    #[test]
    fn residual_always_tiny() {
        for &x in &[
            C64::new(-3.0, 0.0),
            C64::new(2.5, 0.0),
            C64::new(1.0, 2.0),
            C64::new(-1.0, -2.5),
            C64::new(0.3, -3.0),
        ] {
            let d = genus_zero_data(x).unwrap();
            assert!(cubic_residual(x, d.s) < 1e-12);
            // Moment conditions.
            let m1 = 6.0 * d.s * d.s + 3.0 * d.delta * d.delta + 8.0 * x;
            let m2 = 3.0 * d.s * d.delta * d.delta - 16.0;
            assert!(m1.norm() < 1e-10, "moment1 {m1}");
            assert!(m2.norm() < 1e-10, "moment2 {m2}");
            // a, b consistency.
            assert!((d.a + d.b - d.s).norm() < 1e-14);
            assert!((d.b - d.a - d.delta).norm() < 1e-14);
        }
    }

    #[test]
    fn delta_positive_on_left_ray() {
        let d = genus_zero_data(C64::new(-5.0, 0.0)).unwrap();
        assert!(d.delta.im.abs() < 1e-12 && d.delta.re > 0.0, "Δ = {}", d.delta);
    }

    #[test]
    fn corner_double_root_value() {
        // At x_c the cubic and its derivative share the root S_d = (4/3)^{1/3}.
        let xc = corner_x();
        let sd = (4.0f64 / 3.0).powf(1.0 / 3.0);
        assert!((3.0 * sd.powi(3) + 4.0 * xc * sd + 8.0).abs() < 1e-12);
        assert!((9.0 * sd * sd + 4.0 * xc).abs() < 1e-12);
    }

    #[test]
    fn lambda_matches_log_asymptotics() {
        // e^{λ(x)} = (-x/6)(1 + O(1/x)): at x = -100, λ ≈ log(100/6).
        let d = genus_zero_data(C64::new(-100.0, 0.0)).unwrap();
        let expect = (100f64 / 6.0).ln();
        assert!((d.lambda - C64::new(expect, 0.0)).norm() < 0.05, "λ = {}", d.lambda);
        assert!(d.lambda.im.abs() < 1e-10, "λ real on the left axis");
    }

    #[test]
    fn lambda_real_on_left_of_corner() {
        let d = genus_zero_data(C64::new(-4.2, 0.0)).unwrap();
        assert!(d.lambda.im.abs() < 1e-10);
    }

    #[test]
    fn edge_residual_corner_rays_and_exterior_sign() {
        // Corners lie on ∂T: residual 0 there.
        let xc = corner_x();
        assert!(edge_residual(C64::new(xc, 0.0)).unwrap().abs() < 1e-10);
        // The three rays R also belong to the zero level set: x = -3 ∈ R_-.
        let r = edge_residual(C64::new(-3.0, 0.0)).unwrap();
        assert!(r.abs() < 1e-10, "on-ray residual {r}");
        // Genuinely exterior sector point: positive.
        let r = edge_residual(C64::new(3.0, 0.0)).unwrap();
        assert!(r > 0.1, "exterior sign {r}");
        // And a point inside T: negative.
        let r = edge_residual(C64::new(0.8, 0.0)).unwrap();
        assert!(r < -0.1, "interior sign {r}");
    }

    #[test]
    fn f_vanishes_at_band_endpoints() {
        for &x in &[C64::new(-3.0, 0.0), C64::new(3.0, 0.0), C64::new(2.0, 2.0)] {
            let d = genus_zero_data(x).unwrap();
            assert!(f_value(&d, d.a).abs() < 1e-9);
            assert!(f_value(&d, d.b).abs() < 1e-9);
        }
    }

    #[test]
    fn exterior_relations() {
        let d = genus_zero_data(C64::new(-3.0, 0.0)).unwrap();
        let ap = exterior_approximants(&d);
        assert!((ap.q + ap.p).norm() < 1e-14);
        assert!((ap.u * ap.v - 1.0 / (3.0 * d.s)).norm() < 1e-12);
    }

    #[test]
    fn lambda_loop_continuation_single_valued() {
        // Continue e^λ around a loop enclosing T; it must return to itself.
        let mut solver = GenusZeroSolver::new();
        let r = 4.0;
        let n = 120;
        let start = solver.data(C64::new(r, 0.0)).unwrap();
        let mut last = start;
        for k in 1..=n {
            let ang = 2.0 * PI * k as f64 / n as f64;
            last = solver.data(C64::from_polar(r, ang)).unwrap();
        }
        let e_start = start.lambda.exp();
        let e_end = last.lambda.exp();
        assert!(
            (e_start - e_end).norm() < 1e-9 * e_start.norm(),
            "e^λ after loop: {e_end} vs {e_start}"
        );
        // And the log branch itself moved by an integer multiple of 2πi.
        let dl = (last.lambda - start.lambda).im / (2.0 * PI);
        assert!((dl - dl.round()).abs() < 1e-9, "Im λ jump = {dl} × 2π");
    }

    #[test]
    fn on_cut_rejected() {
        assert!(matches!(
            genus_zero_data(C64::new(-1.0, 0.0)).unwrap_err(),
            Error::BranchCut(_)
        ));
    }
}
