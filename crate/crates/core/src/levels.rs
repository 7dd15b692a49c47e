//! Level-curve tracing: the boundary ∂T, the signature charts of
//! F(z;x) = Re(2h+λ) in the z-plane, and the phantom Stokes curves.
//!
//! All tracers are arc-length predictor-corrector walkers on the zero level
//! set of a real-valued function: predictor along the rotated gradient,
//! corrector by Newton projection along the gradient.  Gradients come from
//! central differences; the functions involved are smooth away from the
//! corner points.

use crate::error::{Error, Result};
use crate::genus_zero::{
    self, corners, edge_residual_from, f_value, genus_zero_data, other_cubic_roots, quad_radical,
    GenusZeroData, GenusZeroSolver,
};
use crate::path::dist_to_segment;
use crate::C64;
use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Traced boundary of the elliptic region.
#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    /// Corner points: x_c, x_c e^{-2πi/3} (upper), x_c e^{2πi/3} (lower).
    pub corners: [C64; 3],
    /// Arcs: [x_c → upper corner], [upper → lower] (crossing ℝ₊ at x_e),
    /// [lower → x_c].  Each polyline includes its endpoints.
    pub arcs: [Vec<C64>; 3],
    /// Positive-real-axis crossing of the right arc.
    pub x_e: f64,
}

/// Classification of a point against ∂T.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Outside,
    /// Within 1e-6 of the traced boundary: too close to call.
    OnBoundary,
}

/// Generic zero-level tracer for a real function of x ∈ ℂ.
///
/// Starts at `seed` (projected onto the level set first), walks with fixed
/// arc step, stops when `stop` returns true or after `max_steps`.
pub fn trace_level<F>(
    f: &F,
    seed: C64,
    initial_dir: C64,
    step: f64,
    max_steps: usize,
    stop: impl Fn(C64, usize) -> bool,
) -> Result<Vec<C64>>
where
    F: Fn(C64) -> Result<f64>,
{
    let h = step * 1e-3;
    let grad = |x: C64| -> Result<C64> {
        let fr = (f(x + C64::new(h, 0.0))? - f(x - C64::new(h, 0.0))?) / (2.0 * h);
        let fi = (f(x + C64::new(0.0, h))? - f(x - C64::new(0.0, h))?) / (2.0 * h);
        Ok(C64::new(fr, fi))
    };
    let project = |mut x: C64| -> Result<C64> {
        for _ in 0..30 {
            let v = f(x)?;
            let g = grad(x)?;
            if g.norm() < 1e-14 {
                return Err(Error::TracerStall("vanishing gradient".into()));
            }
            let dx = g * (v / g.norm_sqr());
            x -= dx;
            if dx.norm() < 1e-13 * (1.0 + x.norm()) {
                break;
            }
        }
        Ok(x)
    };

    let mut pts = Vec::with_capacity(max_steps.min(4096) + 1);
    let mut x = project(seed)?;
    pts.push(x);
    let mut dir = initial_dir / initial_dir.norm();
    for k in 0..max_steps {
        let g = grad(x)?;
        if g.norm() < 1e-14 {
            return Err(Error::TracerStall("vanishing gradient on curve".into()));
        }
        // Tangent = gradient rotated by 90°, oriented to continue forward.
        let mut t = C64::new(0.0, 1.0) * g / g.norm();
        if t.re * dir.re + t.im * dir.im < 0.0 {
            t = -t;
        }
        let predictor = x + t * step;
        x = project(predictor)?;
        dir = t;
        pts.push(x);
        if stop(x, k) {
            break;
        }
    }
    Ok(pts)
}

/// Trace the three arcs of ∂T with roughly `points_per_arc` points each.
pub fn trace_boundary(points_per_arc: usize) -> Result<BoundaryCurve> {
    if points_per_arc < 16 {
        return Err(Error::Invalid("points_per_arc must be at least 16".into()));
    }
    let res = residual_fn();
    let cs = corners();
    // Arc length is about 3; trace finer than requested, then resample.
    let step = (3.0 / points_per_arc as f64).min(0.01);
    let seed_off = 0.05;

    // Seed directions: at x_c the two boundary arcs leave at ±π/5 off the
    // positive real direction (interior angle 2π/5, Schwarz symmetric);
    // rotations give the other corners.
    let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let arc = |from: usize, to: usize, dir: C64| -> Result<Vec<C64>> {
        let target = cs[to];
        let seed = cs[from] + dir * seed_off;
        let mut pts = trace_level(
            &res,
            seed,
            dir,
            step,
            40_000,
            |x, _| (x - target).norm() < 1.5 * step || (x - cs[from]).norm() < 0.4 * seed_off,
        )?;
        if (pts.last().unwrap() - target).norm() > 2.0 * step.max(seed_off) {
            return Err(Error::TracerStall(format!(
                "boundary arc did not reach its corner (ended {})",
                pts.last().unwrap()
            )));
        }
        pts.insert(0, cs[from]);
        pts.push(target);
        Ok(resample(&pts, points_per_arc))
    };

    // x_c → upper corner: seed at angle +π/5.
    let arc0 = arc(0, 1, C64::from_polar(1.0, PI / 5.0))?;
    // upper corner → lower corner (right arc through x_e): rotate seed dir.
    let arc1 = arc(1, 2, C64::from_polar(1.0, PI / 5.0) / rot)?;
    // lower corner → x_c.
    let arc2 = arc(2, 0, C64::from_polar(1.0, PI / 5.0) * rot)?;

    // The real-axis crossing, located directly by bisection on ℝ.
    let x_e = bisect_real(|t| res(C64::new(t, 0.0)), 1.0, 2.0)?;

    Ok(BoundaryCurve {
        corners: cs,
        arcs: [arc0, arc1, arc2],
        x_e,
    })
}

fn residual_fn() -> impl Fn(C64) -> Result<f64> {
    let solver = RefCell::new(GenusZeroSolver::new());
    move |x: C64| {
        let data = solver.borrow_mut().data(x)?;
        Ok(edge_residual_from(&data))
    }
}

fn bisect_real(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa * fb > 0.0 {
        return Err(Error::NonConvergence("bisection bracket invalid".into()));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 || (b - a) < 1e-12 {
            return Ok(m);
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

/// Uniform-in-arc-length resampling of a polyline to n points.
pub fn resample(pts: &[C64], n: usize) -> Vec<C64> {
    if pts.len() < 2 || n < 2 {
        return pts.to_vec();
    }
    let mut cum = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for w in pts.windows(2) {
        acc += (w[1] - w[0]).norm();
        cum.push(acc);
    }
    let total = acc;
    let mut out = Vec::with_capacity(n);
    let mut j = 0usize;
    for k in 0..n {
        let s = total * k as f64 / (n - 1) as f64;
        while j + 1 < cum.len() - 1 && cum[j + 1] < s {
            j += 1;
        }
        let seg = (cum[j + 1] - cum[j]).max(1e-300);
        let t = (s - cum[j]) / seg;
        out.push(pts[j] + (pts[j + 1] - pts[j]) * t);
    }
    out
}

impl BoundaryCurve {
    /// Closed polygon (all arcs concatenated).
    pub fn polygon(&self) -> Vec<C64> {
        let mut p = Vec::new();
        for arc in &self.arcs {
            p.extend_from_slice(&arc[..arc.len() - 1]);
        }
        p
    }

    /// Point-in-region test with a 1e-6 indeterminate band near ∂T.
    pub fn classify(&self, x: C64) -> Containment {
        let poly = self.polygon();
        let mut min_d = f64::INFINITY;
        for i in 0..poly.len() {
            let j = (i + 1) % poly.len();
            min_d = min_d.min(dist_to_segment(x, poly[i], poly[j]));
        }
        if min_d < 1e-6 {
            return Containment::OnBoundary;
        }
        // Even-odd ray casting along +Re.
        let mut inside = false;
        for i in 0..poly.len() {
            let j = (i + 1) % poly.len();
            let (p, q) = (poly[i], poly[j]);
            if (p.im > x.im) != (q.im > x.im) {
                let t = (x.im - p.im) / (q.im - p.im);
                let cross = p.re + t * (q.re - p.re);
                if cross > x.re {
                    inside = !inside;
                }
            }
        }
        if inside {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    /// Radius of ∂T along the ray of angle θ from the origin, by polyline
    /// intersection.
    pub fn radius_at(&self, theta: f64) -> Option<f64> {
        let dir = C64::from_polar(1.0, theta);
        let far = dir * 4.0;
        let origin = C64::new(0.0, 0.0);
        let poly = self.polygon();
        let mut best: Option<f64> = None;
        for i in 0..poly.len() {
            let j = (i + 1) % poly.len();
            if let Some(x) = segment_intersection(origin, far, poly[i], poly[j]) {
                let r = x.norm();
                best = Some(best.map_or(r, |b: f64| b.min(r)));
            }
        }
        best
    }

    /// Interior angle at corner k, measured from the traced tangents.
    pub fn corner_angle(&self, k: usize) -> f64 {
        // Arcs are ordered so that arc k starts at corner k and arc (k+2)%3
        // ends there.
        let out_arc = &self.arcs[k];
        let in_arc = &self.arcs[(k + 2) % 3];
        let probe = 0.1;
        let d_out = direction_at_distance(out_arc, self.corners[k], probe);
        let d_in = direction_at_distance(
            &in_arc.iter().rev().cloned().collect::<Vec<_>>(),
            self.corners[k],
            probe,
        );
        let ang = (d_out / d_in).arg().abs();
        ang
    }
}

fn direction_at_distance(arc: &[C64], corner: C64, dist: f64) -> C64 {
    for p in arc {
        if (p - corner).norm() > dist {
            return (p - corner) / (p - corner).norm();
        }
    }
    let p = arc[arc.len() / 2];
    (p - corner) / (p - corner).norm()
}

fn segment_intersection(p1: C64, p2: C64, q1: C64, q2: C64) -> Option<C64> {
    let r = p2 - p1;
    let s = q2 - q1;
    let denom = r.re * s.im - r.im * s.re;
    if denom.abs() < 1e-300 {
        return None;
    }
    let qp = q1 - p1;
    let t = (qp.re * s.im - qp.im * s.re) / denom;
    let u = (qp.re * r.im - qp.im * r.re) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(p1 + r * t)
    } else {
        None
    }
}

static BOUNDARY: OnceLock<BoundaryCurve> = OnceLock::new();

/// Shared traced boundary (400 points per arc).
pub fn boundary() -> &'static BoundaryCurve {
    BOUNDARY.get_or_init(|| trace_boundary(400).expect("boundary tracing failed"))
}

/// Point-in-elliptic-region test against the cached boundary.
pub fn is_in_t(x: C64) -> Containment {
    boundary().classify(x)
}

/// Zero-level arcs of F(z;x) = Re(2h+λ) in the z-plane for one exterior x:
/// three arcs from each band endpoint (and four from -S/2 when the critical
/// point lies on the level set).  Used for signature-chart figure data.
pub fn trace_f_levels(x: C64) -> Result<Vec<Vec<C64>>> {
    let data = genus_zero_data(x)?;
    let f = |z: C64| -> Result<f64> { Ok(f_value(&data, z)) };
    let mut arcs = Vec::new();
    let scale = data.a.norm().max(data.b.norm()).max(1.0);
    let r_seed = 0.05 * scale;
    let stop_radius = 8.0 * scale;
    // When x lies on one of the rays R, F vanishes identically on the band
    // and the band is itself a (degenerate, gradient-free) level arc.
    let band_mid = 0.5 * (data.a + data.b);
    let band_on_level = f(band_mid)?.abs() < 1e-9;
    if band_on_level {
        arcs.push(vec![data.a, band_mid, data.b]);
    }
    for &endpoint in &[data.a, data.b] {
        for dir in level_directions(&f, endpoint, r_seed, 3)? {
            let seed = endpoint + dir * r_seed;
            if band_on_level {
                // Skip the degenerate band direction; it is already stored.
                let band_dir = (opposite(endpoint, data.a, data.b) - endpoint)
                    / (opposite(endpoint, data.a, data.b) - endpoint).norm();
                if (dir - band_dir).norm() < 0.05 {
                    continue;
                }
            }
            let arc = trace_level(&f, seed, dir, 0.01 * scale, 20_000, |z, _| {
                z.norm() > stop_radius
                    || (z - opposite(endpoint, data.a, data.b)).norm() < 0.02 * scale
            })?;
            arcs.push(arc);
        }
    }
    // Critical point arcs, when on the level set.
    let zc = -data.s / 2.0;
    if f(zc)?.abs() < 1e-6 {
        for dir in level_directions(&f, zc, r_seed, 4)? {
            let seed = zc + dir * r_seed;
            let arc = trace_level(&f, seed, dir, 0.01 * scale, 20_000, |z, _| {
                z.norm() > stop_radius
            })?;
            arcs.push(arc);
        }
    }
    Ok(arcs)
}

fn opposite(e: C64, a: C64, b: C64) -> C64 {
    if (e - a).norm() < (e - b).norm() {
        b
    } else {
        a
    }
}

/// Directions at which the zero level set leaves `center`, found by a sign
/// scan of f on a small circle.
pub fn level_directions<F>(f: &F, center: C64, radius: f64, expect: usize) -> Result<Vec<C64>>
where
    F: Fn(C64) -> Result<f64>,
{
    let n = 720;
    let mut vals = Vec::with_capacity(n);
    let mut max_abs = 0.0f64;
    for k in 0..n {
        let ang = 2.0 * PI * k as f64 / n as f64;
        // Isolated samples may sit on a branch cut; skip them.
        let v = f(center + C64::from_polar(radius, ang)).ok();
        if let Some(v) = v {
            max_abs = max_abs.max(v.abs());
        }
        vals.push((ang, v));
    }
    let plateau = 1e-10 * max_abs;
    let mut dirs = Vec::new();
    for k in 0..n {
        let (a0, v0) = vals[k];
        let (Some(f0), Some(f1)) = (v0, vals[(k + 1) % n].1) else {
            continue;
        };
        // A direction where f sits exactly on the level set (for example the
        // band itself when x lies on one of the rays R) shows up as a tiny
        // value without a sign change.
        if f0.abs() <= plateau {
            let prev_big = vals[(k + n - 1) % n].1.map_or(true, |p| p.abs() > plateau);
            if prev_big {
                dirs.push(C64::from_polar(1.0, a0));
            }
        } else if f0 * f1 < 0.0 {
            // Bisect the crossing.
            let mut lo = a0;
            let mut hi = a0 + 2.0 * PI / n as f64;
            let mut flo = f0;
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                let Ok(fm) = f(center + C64::from_polar(radius, mid)) else {
                    break;
                };
                if flo * fm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            dirs.push(C64::from_polar(1.0, 0.5 * (lo + hi)));
        }
    }
    if dirs.len() < expect {
        return Err(Error::TracerStall(format!(
            "found {} level directions, expected at least {expect}",
            dirs.len()
        )));
    }
    Ok(dirs)
}

/// Phantom Stokes curves: the six unbounded arcs on which
/// Re ∫_a^{-S_j(x)/2} h'(z;x) dz = 0 for the alternative cubic branches S_j.
///
/// Numerically, both alternative-branch residuals form V-shaped valleys
/// around the three rays R: strictly positive off a ray, vanishing exactly
/// on it (to machine precision, for |x| beyond the corner).  The six curves
/// therefore coincide geometrically with the rays, two per ray: one where
/// the relevant S_j is analytic across the ray, and one where the ray is a
/// cut of S_j and the condition holds with either one-sided limit (the
/// branch-pair swaps across the ray, but the residual is the same for
/// both).  Two curves emanate from each corner into the exterior.
///
/// Every returned point is validated against the defining condition; the
/// polylines run from the corner out to |x| = 6.
pub fn trace_phantom_stokes() -> Result<Vec<Vec<C64>>> {
    let out_radius = 6.0;
    let n_pts = 200usize;
    let mut arcs: Vec<Vec<C64>> = Vec::new();
    for &corner in corners().iter() {
        let ray_angle = corner.arg();
        for alt in 0..2usize {
            let mut arc = Vec::with_capacity(n_pts);
            let r0 = corner.norm();
            // Start a hair beyond the corner, where the branches separate.
            let start = r0 + 1e-3;
            let mut prev_alt: Option<C64> = None;
            for k in 0..n_pts {
                let r = start + (out_radius - start) * k as f64 / (n_pts - 1) as f64;
                let x = C64::from_polar(r, ray_angle);
                let data = genus_zero_data(x)?;
                let (a1, a2) = other_cubic_roots(x, data.s);
                // Stable labeling along the ray: continuity, anchored at the
                // start by argument order.
                let s_alt = match prev_alt {
                    Some(sp) => {
                        if (a1 - sp).norm() <= (a2 - sp).norm() {
                            a1
                        } else {
                            a2
                        }
                    }
                    None => {
                        let mut sorted = [a1, a2];
                        sorted.sort_by(|p, q| p.arg().partial_cmp(&q.arg()).unwrap());
                        sorted[alt]
                    }
                };
                prev_alt = Some(s_alt);
                let res = phantom_residual(&data, s_alt);
                if res.abs() > 1e-8 {
                    return Err(Error::TracerStall(format!(
                        "phantom condition violated on ray at {x}: residual {res:.3e}"
                    )));
                }
                arc.push(x);
            }
            arcs.push(arc);
        }
    }
    Ok(arcs)
}

/// Re[h(-S_j/2;x) - h(a;x)] in elementary closed form (= F(-S_j/2)/2).
pub fn phantom_residual(data: &GenusZeroData, s_alt: C64) -> f64 {
    f_value(data, -s_alt / 2.0) / 2.0
}

/// The defining real-part condition evaluated via the explicit h-difference
/// (used to validate traced points independently of the tracer).
pub fn phantom_defining_residual(data: &GenusZeroData, s_alt: C64) -> f64 {
    let z = -s_alt / 2.0;
    let r = quad_radical(z, data.a, data.b);
    let s = data.s;
    let d2 = data.delta * data.delta;
    let poly = 4.0 * z * z + 2.0 * s * z - 2.0 * s * s - d2;
    let h_at = (poly * r).re / 8.0 - ((s - 2.0 * z - 2.0 * r) / 4.0).norm().ln();
    let h_a = -(data.delta / 4.0).norm().ln();
    h_at - h_a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_reaches_known_landmarks() {
        let b = trace_boundary(200).unwrap();
        // The closed-form edge condition and direct quadrature of c(x) both
        // place the positive-real-axis crossing at 1.44303.
        assert!((b.x_e - 1.44303).abs() < 1e-4, "x_e = {}", b.x_e);
        assert!((b.corners[0].re - genus_zero::corner_x()).abs() < 1e-12);
        // Three-fold symmetry: arc1 should be arc0 rotated by e^{-2πi/3}.
        let rot = C64::from_polar(1.0, -2.0 * PI / 3.0);
        for (p, q) in b.arcs[0].iter().zip(b.arcs[1].iter()) {
            assert!((p * rot - q).norm() < 1e-4, "symmetry violation {p} {q}");
        }
    }

    #[test]
    fn corner_angle_is_two_pi_fifths() {
        let b = trace_boundary(200).unwrap();
        for k in 0..3 {
            let ang = b.corner_angle(k);
            assert!(
                (ang - 2.0 * PI / 5.0).abs() < 0.05,
                "corner {k} angle {ang}"
            );
        }
    }

    #[test]
    fn containment_examples() {
        assert_eq!(is_in_t(C64::new(1.0, 0.0)), Containment::Inside);
        assert_eq!(is_in_t(C64::new(3.0, 0.0)), Containment::Outside);
        assert_eq!(is_in_t(C64::new(0.0, 0.0)), Containment::Inside);
        assert_eq!(is_in_t(C64::new(0.0, 2.6)), Containment::Outside);
    }

    #[test]
    fn f_level_arcs_from_endpoints() {
        // x = -3: three arcs terminate at each of a, b at ~2π/3 separation.
        let x = C64::new(-3.0, 0.0);
        let data = genus_zero_data(x).unwrap();
        let f = |z: C64| -> Result<f64> { Ok(f_value(&data, z)) };
        let dirs = level_directions(&f, data.a, 0.01, 3).unwrap();
        assert_eq!(dirs.len(), 3, "three level arcs at a");
        let mut angs: Vec<f64> = dirs.iter().map(|d| d.arg()).collect();
        angs.sort_by(f64::total_cmp);
        for k in 0..3 {
            let gap = if k == 2 {
                angs[0] + 2.0 * PI - angs[2]
            } else {
                angs[k + 1] - angs[k]
            };
            assert!((gap - 2.0 * PI / 3.0).abs() < 0.05, "gap {gap}");
        }
    }

    #[test]
    fn critical_point_on_level_set_at_boundary() {
        // On ∂T the critical point -S/2 joins the zero level set of F.
        let b = boundary();
        let x = C64::new(b.x_e, 0.0);
        let data = genus_zero_data(x).unwrap();
        assert!(f_value(&data, -data.s / 2.0).abs() < 1e-6);
    }

    #[test]
    fn phantom_curves_exist_and_satisfy_condition() {
        // trace_phantom_stokes validates the defining residual (≤ 1e-8) at
        // every emitted point, so success here certifies the condition.
        let arcs = trace_phantom_stokes().unwrap();
        assert_eq!(arcs.len(), 6, "six unbounded phantom arcs");
        // Two arcs start at each corner, and all reach the plot radius.
        for c in corners() {
            let n = arcs
                .iter()
                .filter(|a| (a[0] - c).norm() < 0.01)
                .count();
            assert_eq!(n, 2, "two phantom arcs emanating from corner {c}");
        }
        for arc in &arcs {
            assert!(arc.last().unwrap().norm() > 5.9, "arc is unbounded");
            // Exterior: no traced point inside T.
            assert!(arc.iter().all(|p| is_in_t(*p) != Containment::Inside));
        }
        // Off the rays the condition genuinely fails (the valley is V-shaped),
        // so the curves are exactly the rays, not a plotting artifact.
        let x = C64::new(-3.0, 0.15);
        let d = genus_zero_data(x).unwrap();
        let (r1, r2) = other_cubic_roots(x, d.s);
        assert!(phantom_residual(&d, r1).abs() > 1e-3);
        assert!(phantom_residual(&d, r2).abs() > 1e-3);
    }
}
