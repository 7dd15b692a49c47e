//! All m-independent scalars derived from the elliptic curve at x₀: the
//! periods and normalization constants c₁, c₂, ℋ, ℋ₀, U, the regularized
//! constant E⁺, the phase constants Φ±, κ₀, κ₁, Λ, the Abel-map values
//! 𝒜(∞±), 𝒜(Q±), and the Riemann constant 𝒦 — everything the theta-quotient
//! approximants consume.
//!
//! Realizations (the concrete anchors that pin the homology picture):
//!
//! * 𝔞-cycle: loop around the C–D branch cut, realized as ±2∫_C^D dz/R₊
//!   with R₊ the boundary value on the left of the oriented segment; the
//!   global sign is fixed once by c₁(0) > 0 and holds on all of T by
//!   continuity of the local rule.
//! * 𝔟-period of the first kind from ℋ = iπ + ℋ₀/2 with
//!   ℋ₀ = 2c₁[∫_A^D + ∫_B^D] dz/R (paths off the Stokes graph); the second
//!   kind U = ∮_b Ω is computed independently on an explicit stadium loop
//!   encircling {A, D}, oriented by matching its ω-period against ℋ.  The
//!   identity U = 2c₁ then survives as a genuine cross-check of two
//!   unrelated quadratures.
//! * Abel map from the base point (D,0), paths confined to one sheet;
//!   𝒜(∞⁻) = -𝒜(∞⁺) by construction.
//! * the logarithmic cut L of the antiderivative G is taken to be the exact
//!   ray D + ℝ₊, so the branch log^{(L)}(D-z) is the principal logarithm;
//!   all H-values reduce to H(z₁) + (3/2)∫_{z₁}^{P} R dζ with
//!   H(z₁) = θ(z₁)/2 - Log(D-z₁) - ∫_∞^{z₁}[G'-1/(ζ-D)]dζ, the tail
//!   integrand expanded symbolically so no large-argument cancellation
//!   enters.
//!
//! Normative anchors at x₀ = 0: ℋ₀ = -2π√3, 𝒜(∞⁺) = π√3/3,
//! z_Q = -(1/2)(4/3)^{1/3}.

use crate::boutroux::{self, EllipticConfig};
use crate::error::{Error, Result};
use crate::path::{
    dist_to_segment, integrate_leg, left_boundary_anchor, segments_cross, CutPlane, Integrand,
    Leg, LegAnchor, Radicand, SignTrack,
};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Sign of the realized 𝔞-cycle; fixed by the anchor c₁(0) > 0
/// (the left-boundary value of R on C→D is +i·|R| at the origin, making
/// 2∫_C^D dz/R₊ negative imaginary there).
const ORIENT_A: f64 = -1.0;

/// Everything m-independent at one base point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub x0: [f64; 2],
    pub omega_a: [f64; 2],
    pub omega_b: [f64; 2],
    pub c1: [f64; 2],
    pub c2: [f64; 2],
    pub h: [f64; 2],
    pub h0: [f64; 2],
    pub u_freq: [f64; 2],
    pub e_plus: [f64; 2],
    pub kappa0: [f64; 2],
    pub kappa1: [f64; 2],
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub lambda: [f64; 2],
    pub abel_inf_plus: [f64; 2],
    pub abel_q_plus: [f64; 2],
    pub abel_q_minus: [f64; 2],
    pub z_q: [f64; 2],
    pub riemann_k: [f64; 2],
}

macro_rules! cgetters {
    ($($name:ident : $field:ident),* $(,)?) => {
        impl PeriodRecord {
            $(pub fn $name(&self) -> C64 { C64::new(self.$field[0], self.$field[1]) })*
        }
    };
}

cgetters!(
    x0_c: x0,
    omega_a_c: omega_a,
    omega_b_c: omega_b,
    c1_c: c1,
    c2_c: c2,
    h_c: h,
    h0_c: h0,
    u_c: u_freq,
    e_plus_c: e_plus,
    kappa0_c: kappa0,
    kappa1_c: kappa1,
    lambda_c: lambda,
    abel_inf_plus_c: abel_inf_plus,
    abel_q_plus_c: abel_q_plus,
    abel_q_minus_c: abel_q_minus,
    z_q_c: z_q,
    riemann_k_c: riemann_k,
);

fn c2a(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Level of optional self-validation during record construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Checks {
    /// Fast path for grid production.
    Fast,
    /// Recompute key quantities along independent routes and fail loudly on
    /// disagreement.
    Full,
}

struct Frame {
    e1: C64,
    e2: C64,
    scale: f64,
}

fn frame(cfg: &EllipticConfig) -> Frame {
    let e1 = (cfg.d - cfg.c) / (cfg.d - cfg.c).norm();
    let mut e2 = C64::new(0.0, 1.0) * e1;
    // Orient e2 toward A's side.
    if ((cfg.a - cfg.c) * e2.conj()).re < 0.0 {
        e2 = -e2;
    }
    let scale = cfg
        .roots()
        .iter()
        .map(|r| r.norm())
        .fold(0.0f64, f64::max)
        .max(1e-3);
    Frame { e1, e2, scale }
}

/// ∫_{from root i}^{root j} f·(dz/R) along the straight segment with the
/// left-side boundary branch of the planar radical.
fn seg_over_r(
    cfg: &EllipticConfig,
    plane: &CutPlane,
    i: usize,
    j: usize,
    f: &dyn Fn(C64) -> C64,
) -> Result<C64> {
    let rad = cfg.radicand();
    let roots = cfg.roots();
    let anchor_val = left_boundary_anchor(plane, roots[i], roots[j])?;
    let mid = 0.5 * (roots[i] + roots[j]);
    let anchor = LegAnchor {
        t: 1.0,
        value: anchor_val,
    };
    let (vi, _) = integrate_leg(
        &rad,
        &Leg::FromRoot {
            idx: i,
            dir: mid - roots[i],
        },
        &Integrand::OverR(f),
        &anchor,
        1e-12,
    )?;
    let (vj, _) = integrate_leg(
        &rad,
        &Leg::FromRoot {
            idx: j,
            dir: mid - roots[j],
        },
        &Integrand::OverR(f),
        &anchor,
        1e-12,
    )?;
    Ok(vi - vj)
}

/// ∫ along a straight segment between roots with the *planar* branch (both
/// endpoints are roots; the segment must stay off the cut tripod).
fn seg_planar_over_r(
    cfg: &EllipticConfig,
    plane: &CutPlane,
    i: usize,
    j: usize,
    f: &dyn Fn(C64) -> C64,
) -> Result<C64> {
    let rad = cfg.radicand();
    let roots = cfg.roots();
    let mid = 0.5 * (roots[i] + roots[j]);
    let anchor = LegAnchor {
        t: 1.0,
        value: plane.radical(mid)?,
    };
    let (vi, _) = integrate_leg(
        &rad,
        &Leg::FromRoot {
            idx: i,
            dir: mid - roots[i],
        },
        &Integrand::OverR(f),
        &anchor,
        1e-12,
    )?;
    let (vj, _) = integrate_leg(
        &rad,
        &Leg::FromRoot {
            idx: j,
            dir: mid - roots[j],
        },
        &Integrand::OverR(f),
        &anchor,
        1e-12,
    )?;
    Ok(vi - vj)
}

/// Chained path integral of f(z)/R from root `start_idx` through waypoints,
/// planar branch carried by continuity from the first midpoint.
fn path_from_root_over_r(
    cfg: &EllipticConfig,
    plane: &CutPlane,
    start_idx: usize,
    waypoints: &[C64],
    f: &dyn Fn(C64) -> C64,
) -> Result<(C64, C64)> {
    let rad = cfg.radicand();
    let roots = cfg.roots();
    let w0 = waypoints[0];
    let mut total;
    let mut r_cur = plane.radical(w0)?;
    {
        let (v, _) = integrate_leg(
            &rad,
            &Leg::FromRoot {
                idx: start_idx,
                dir: w0 - roots[start_idx],
            },
            &Integrand::OverR(f),
            &LegAnchor {
                t: 1.0,
                value: r_cur,
            },
            1e-12,
        )?;
        total = v;
    }
    for pair in waypoints.windows(2) {
        let (v, r_end) = integrate_leg(
            &rad,
            &Leg::Line {
                a: pair[0],
                b: pair[1],
            },
            &Integrand::OverR(f),
            &LegAnchor { t: 0.0, value: r_cur },
            1e-12,
        )?;
        total += v;
        r_cur = r_end;
    }
    Ok((total, r_cur))
}

/// sqrt(1+u)-1 with full relative accuracy for small u.
fn sqrt1p_m1(u: C64) -> C64 {
    if u.norm() > 0.1 {
        return (C64::new(1.0, 0.0) + u).sqrt() - 1.0;
    }
    // Σ binom(1/2,k) u^k, k ≥ 1.
    let mut term = 0.5 * u;
    let mut sum = term;
    let mut k = 1.0f64;
    while term.norm() > 1e-18 * (sum.norm() + 1e-30) && k < 40.0 {
        term = term * u * (0.5 - k) / (k + 1.0);
        sum += term;
        k += 1.0;
    }
    sum
}

/// u := R²/z⁴ - 1 = e₂/z² - e₃/z³ + e₄/z⁴ for the quartic with e₁ = 0,
/// e₂ = (2/3)x₀, e₃ = 4/3, e₄ = Π, evaluated without cancellation.
fn u_of(cfg: &EllipticConfig, z: C64) -> C64 {
    let zi = 1.0 / z;
    let e2 = 2.0 * cfg.x0 / 3.0;
    let e3 = C64::new(4.0 / 3.0, 0.0);
    let e4 = cfg.pi;
    ((e4 * zi - e3) * zi + e2) * zi * zi
}

/// z² + q - R on the asymptotic branch, accurate at large |z|:
/// q - z²·(sqrt(1+u)-1) assembled symbolically.
fn z2_plus_q_minus_r(cfg: &EllipticConfig, z: C64, q: C64) -> C64 {
    let u = u_of(cfg, z);
    q - z * z * sqrt1p_m1(u)
}

/// The regularized G'-tail integrand G'(ζ) - 1/(ζ-D) on the asymptotic
/// branch:  -D/(ζ(ζ-D)) - (3Π/4)/ζ² + (3/2)ζ²(u²/8 - u³/16 + …).
fn gprime_tail(cfg: &EllipticConfig, z: C64) -> C64 {
    let u = u_of(cfg, z);
    let head = -cfg.d / (z * (z - cfg.d)) - 0.75 * cfg.pi / (z * z);
    // (3/2) z² Σ_{k≥2} binom(1/2,k) u^k = -(3/2)z²(sqrt1p_m1(u) - u/2)
    let series = sqrt1p_m1(u) - 0.5 * u;
    head - 1.5 * z * z * series
}

/// A tail-to-infinity integral ∫_{z₀}^{∞} f(z) dz in direction `dir` with
/// smooth substituted integrand (f must decay like z⁻²).
fn tail_integral(f: &dyn Fn(C64) -> C64, z0: C64, dir: C64) -> Result<C64> {
    // s ∈ (0,1], z = z0 + dir(1/s - 1); the s-integral of f·dz runs ∞→z0,
    // so negate for z0→∞.
    let g = |s: f64| {
        let z = z0 + dir * (1.0 / s - 1.0);
        f(z) * (-dir / (s * s))
    };
    let v = crate::path::adaptive_gk(&g, 1e-12, 1.0, 1e-12)?;
    Ok(-v)
}

fn min_clearance(seg: (C64, C64), cfg: &EllipticConfig) -> f64 {
    let cuts = [
        (cfg.c, cfg.a),
        (cfg.c, cfg.b),
        (cfg.c, cfg.d),
        // The logarithmic cut L = D + ℝ₊ (truncated far out).
        (cfg.d, cfg.d + C64::new(1e4, 0.0)),
    ];
    let mut clear = f64::INFINITY;
    for &(p, q) in &cuts {
        if segments_cross(seg.0, seg.1, p, q) {
            return 0.0;
        }
        clear = clear
            .min(dist_to_segment(p, seg.0, seg.1))
            .min(dist_to_segment(q.min_len(p), seg.0, seg.1));
    }
    for r in cfg.roots() {
        clear = clear.min(dist_to_segment(r, seg.0, seg.1));
    }
    clear
}

trait MinLen {
    fn min_len(self, other: C64) -> C64;
}
impl MinLen for C64 {
    fn min_len(self, _other: C64) -> C64 {
        self
    }
}

/// H(z₁) = θ(z₁)/2 - Log(D - z₁) - T_tail(z₁), the anchor value of H at a
/// regular point z₁ whose tail ray (direction `tail_dir`) avoids Σ ∪ L.
fn h_anchor(cfg: &EllipticConfig, z1: C64, tail_dir: C64) -> Result<C64> {
    let theta_half = (z1 * z1 * z1 + cfg.x0 * z1) / 2.0;
    let log_term = (cfg.d - z1).ln();
    let tail = tail_integral(&|z| gprime_tail(cfg, z), z1, tail_dir)?;
    Ok(theta_half - log_term - tail)
}

/// H at a branch point: H(z₁) + (3/2)∫_{z₁→root} R dζ (planar branch,
/// FromRoot leg reversed).
fn h_at_root(
    cfg: &EllipticConfig,
    plane: &CutPlane,
    root_idx: usize,
    z1: C64,
    tail_dir: C64,
) -> Result<C64> {
    let h1 = h_anchor(cfg, z1, tail_dir)?;
    let rad = cfg.radicand();
    let roots = cfg.roots();
    let anchor = LegAnchor {
        t: 1.0,
        value: plane.radical(z1)?,
    };
    let one = |_: C64| C64::new(1.0, 0.0);
    let (v, _) = integrate_leg(
        &rad,
        &Leg::FromRoot {
            idx: root_idx,
            dir: z1 - roots[root_idx],
        },
        &Integrand::TimesR(&one),
        &anchor,
        1e-12,
    )?;
    // v is ∫_{root}^{z₁}; we need ∫_{z₁}^{root}.
    Ok(h1 - 1.5 * v)
}

/// Build the full record.  `Checks::Full` additionally verifies E⁺ base
/// point and anchor-form independence, the U = 2c₁ identity partner values,
/// and the Φ cross-expressions from H-values.
pub fn period_record(cfg: &EllipticConfig, checks: Checks) -> Result<PeriodRecord> {
    let fr = frame(cfg);
    let plane = cfg.cut_plane();
    let one = |_: C64| C64::new(1.0, 0.0);
    let ident = |z: C64| z;
    let zsq = |z: C64| z * z;

    // --- first-kind periods -------------------------------------------------
    // 𝔞-cycle around the C–D cut: indices [a,b,c,d] = [0,1,2,3].
    let i_cd = seg_over_r(cfg, &plane, 2, 3, &one)?;
    let omega_a = ORIENT_A * 2.0 * i_cd;
    let c1 = C64::new(0.0, 2.0 * PI) / omega_a;
    let i_ad = seg_planar_over_r(cfg, &plane, 0, 3, &one)?;
    let i_bd = seg_planar_over_r(cfg, &plane, 1, 3, &one)?;
    let h0 = 2.0 * c1 * (i_ad + i_bd);
    let h = C64::new(0.0, PI) + h0 / 2.0;
    if h.re >= -1e-10 {
        return Err(Error::Invalid(format!("Re(H) must be negative, got {h}")));
    }
    let omega_b = h / c1;
    let riemann_k = C64::new(0.0, PI) + h / 2.0;

    // --- second kind --------------------------------------------------------
    let i_cd_z2 = seg_over_r(cfg, &plane, 2, 3, &zsq)?;
    let c2 = -(ORIENT_A * 2.0 * i_cd_z2) / C64::new(0.0, 2.0 * PI);

    // Stadium loop around {A, D} for the independent 𝔟-realization.
    let (stadium_omega, stadium_omega0) = stadium_cycle(cfg, &plane)?;
    // Orient by the first-kind period: s·∮ω should match ℋ modulo 2πi.
    let fit = |v: C64| -> f64 {
        let k = ((v - h).im / (2.0 * PI)).round();
        (v - h - C64::new(0.0, 2.0 * PI * k)).norm()
    };
    let s_orient = if fit(c1 * stadium_omega) <= fit(-c1 * stadium_omega) {
        1.0
    } else {
        -1.0
    };
    let u_freq = s_orient * stadium_omega0 + c2 * (s_orient * c1 * stadium_omega);
    if checks == Checks::Full {
        let mismatch = fit(s_orient * c1 * stadium_omega);
        if mismatch > 1e-8 {
            return Err(Error::Invalid(format!(
                "b-cycle realization drifted from H by {mismatch:.2e}"
            )));
        }
    }

    // --- E⁺ and the Abel values ---------------------------------------------
    let q = c1 * c2;
    let z0_reg = cfg.d + 0.9 * fr.scale * fr.e1;
    let tail_dir_right = {
        let d = z0_reg / z0_reg.norm();
        // Stay clear of the log cut D + ℝ₊ (only relevant for H, but keep
        // one convention): tilt slightly toward e2.
        (d + 0.35 * fr.e2) / (d + 0.35 * fr.e2).norm()
    };
    let e_plus = eplus_from(cfg, &plane, 3, z0_reg, tail_dir_right, q, C64::new(0.0, 0.0))?;
    if checks == Checks::Full {
        // Base-point independence.
        let z0_alt = cfg.d + 1.7 * fr.scale * fr.e1 + 0.4 * fr.scale * fr.e2;
        let e_alt = eplus_from(cfg, &plane, 3, z0_alt, tail_dir_right, q, C64::new(0.0, 0.0))?;
        if (e_alt - e_plus).norm() > 1e-8 * (1.0 + e_plus.norm()) {
            return Err(Error::Invalid(format!(
                "E+ base-point dependence {:.2e}",
                (e_alt - e_plus).norm()
            )));
        }
        // A-anchored variant: ∫ from A, minus c₁.
        let z0_a = cfg.a + 0.9 * fr.scale * (cfg.a - cfg.c) / (cfg.a - cfg.c).norm();
        let e_a = eplus_from(cfg, &plane, 0, z0_a, tail_dir_right, q, -c1)?;
        if (e_a - e_plus).norm() > 1e-7 * (1.0 + e_plus.norm()) {
            return Err(Error::Invalid(format!(
                "E+ anchor-form disagreement {:.2e}",
                (e_a - e_plus).norm()
            )));
        }
    }

    // 𝒜(∞⁺) along the same rightward route.
    let abel_inf_plus = {
        let (seg, r_end) =
            path_from_root_over_r(cfg, &plane, 3, &[z0_reg], &one)?;
        let _ = r_end;
        let tail = tail_integral(
            &|z| {
                let r = planar_far(cfg, z);
                1.0 / r
            },
            z0_reg,
            tail_dir_right,
        )?;
        c1 * (seg + tail)
    };

    // z_Q and the Abel values of Q±.
    let z_q = (cfg.a * cfg.b - cfg.c * cfg.d) / (cfg.a + cfg.b - cfg.c - cfg.d);
    if cfg.roots().iter().any(|r| (r - z_q).norm() < 1e-6) {
        return Err(Error::Invalid(
            "z_Q collided with a branch point (internal inconsistency)".into(),
        ));
    }
    let (abel_q_plus, abel_q_minus) = abel_q(cfg, &plane, &fr, c1, z_q)?;

    // --- phase constants -----------------------------------------------------
    let (phi_p_c, phi_m_c) = boutroux::phi_values(cfg)?;
    if phi_p_c.im.abs() > 1e-9 || phi_m_c.im.abs() > 1e-9 {
        return Err(Error::Invalid(format!(
            "Boutroux conditions not satisfied: Im Φ = ({:.2e}, {:.2e})",
            phi_p_c.im, phi_m_c.im
        )));
    }
    let (phi_plus, phi_minus) = (phi_p_c.re, phi_m_c.re);

    // κ₁, κ₀ with the left-boundary branch on the arcs C→A and C→B.
    let k_ca_1 = seg_over_r(cfg, &plane, 2, 0, &one)?;
    let k_cb_1 = seg_over_r(cfg, &plane, 2, 1, &one)?;
    let k_ca_z = seg_over_r(cfg, &plane, 2, 0, &ident)?;
    let k_cb_z = seg_over_r(cfg, &plane, 2, 1, &ident)?;
    let kappa1 = -(phi_plus / (2.0 * PI)) * k_ca_1 - (phi_minus / (2.0 * PI)) * k_cb_1;
    let kappa0 = -(phi_plus / (2.0 * PI)) * k_ca_z - (phi_minus / (2.0 * PI)) * k_cb_z;

    // --- Λ from H boundary values --------------------------------------------
    let chi = 1.6 * fr.scale;
    let z1_up = cfg.d + chi * fr.e2;
    let h_plus_d = h_at_root(cfg, &plane, 3, z1_up, out_dir(cfg, z1_up))?;
    let lambda = -2.0 * h_plus_d + C64::new(0.0, 2.0 * PI);
    if checks == Checks::Full {
        // Φ± from the H-values must agree with the segment forms, and the
        // three-arc constant identity i(Φ₊+Φ₋) = 2H₀(C) + Λ must hold.
        let z1_a = cfg.a + chi * (cfg.a - cfg.c) / (cfg.a - cfg.c).norm();
        let h_a = h_at_root(cfg, &plane, 0, z1_a, out_dir(cfg, z1_a))?;
        let z1_b = cfg.b + chi * (cfg.b - cfg.c) / (cfg.b - cfg.c).norm();
        let h_b = h_at_root(cfg, &plane, 1, z1_b, out_dir(cfg, z1_b))?;
        let phi_p_h = C64::new(0.0, -1.0) * (lambda + 2.0 * h_a);
        let phi_m_h = C64::new(0.0, -1.0) * (lambda + 2.0 * h_b);
        let dp = (phi_p_h - phi_p_c).norm();
        let dm = (phi_m_h - phi_m_c).norm();
        if dp > 1e-7 || dm > 1e-7 {
            return Err(Error::Invalid(format!(
                "Φ segment/H-value disagreement ({dp:.2e}, {dm:.2e})"
            )));
        }
        let z1_c = cfg.c - chi * fr.e1;
        let h0_c = h_at_root(cfg, &plane, 2, z1_c, out_dir(cfg, z1_c))?;
        let lhs = C64::new(0.0, 1.0) * (phi_p_c + phi_m_c);
        let rhs = 2.0 * h0_c + lambda;
        if (lhs - rhs).norm() > 1e-7 {
            return Err(Error::Invalid(format!(
                "H-constants identity residual {:.2e}",
                (lhs - rhs).norm()
            )));
        }
    }

    Ok(PeriodRecord {
        x0: c2a(cfg.x0),
        omega_a: c2a(omega_a),
        omega_b: c2a(omega_b),
        c1: c2a(c1),
        c2: c2a(c2),
        h: c2a(h),
        h0: c2a(h0),
        u_freq: c2a(u_freq),
        e_plus: c2a(e_plus),
        kappa0: c2a(kappa0),
        kappa1: c2a(kappa1),
        phi_plus,
        phi_minus,
        lambda: c2a(lambda),
        abel_inf_plus: c2a(abel_inf_plus),
        abel_q_plus: c2a(abel_q_plus),
        abel_q_minus: c2a(abel_q_minus),
        z_q: c2a(z_q),
        riemann_k: c2a(riemann_k),
    })
}

/// Planar radical on the far exterior (used only where |z| is beyond every
/// root and the tail path stays off the cuts): the asymptotic branch.
fn planar_far(cfg: &EllipticConfig, z: C64) -> C64 {
    let rad = cfg.radicand();
    rad.far_value(z)
}

fn out_dir(cfg: &EllipticConfig, z1: C64) -> C64 {
    // Outward radial direction from the root centroid (≈ 0), nudged off the
    // log cut D + ℝ₊ if it points along it.
    let d = z1 / z1.norm();
    let to_cut = (z1 - cfg.d) / (z1 - cfg.d).norm();
    if (d - C64::new(1.0, 0.0)).norm() < 0.05 && to_cut.im.abs() < 0.05 {
        (d + C64::new(0.0, 0.3)) / (d + C64::new(0.0, 0.3)).norm()
    } else {
        d
    }
}

/// E⁺ via the anchored form: ∫_{root}^{z₀}(z²+q)/R dz +
/// ∫_{z₀}^{∞}[(z²+q)/R - 1]dz - z₀ + offset.
fn eplus_from(
    cfg: &EllipticConfig,
    plane: &CutPlane,
    root_idx: usize,
    z0: C64,
    tail_dir: C64,
    q: C64,
    offset: C64,
) -> Result<C64> {
    let f = move |z: C64| z * z + q;
    let (seg, _) = path_from_root_over_r(cfg, plane, root_idx, &[z0], &f)?;
    let tail = tail_integral(
        &|z| {
            let r = planar_far(cfg, z);
            z2_plus_q_minus_r(cfg, z, q) / r
        },
        z0,
        tail_dir,
    )?;
    Ok(seg + tail - z0 + offset)
}

/// The Abel values 𝒜(Q±): path from (D,0) around the outside of the Stokes
/// tripod into the left sector, sheet decided by comparing the continued
/// radical at z_Q with -(z_Q-C)(z_Q-D).
fn abel_q(
    cfg: &EllipticConfig,
    plane: &CutPlane,
    fr: &Frame,
    c1: C64,
    z_q: C64,
) -> Result<(C64, C64)> {
    let one = |_: C64| C64::new(1.0, 0.0);
    // Waypoints: up over A, down the far left, in to z_Q.
    for attempt in 0..5 {
        let chi = fr.scale * (1.5 + 0.45 * attempt as f64);
        let w1 = cfg.d + chi * fr.e2;
        let w2 = z_q - 1.3 * fr.scale * fr.e1 + chi * fr.e2;
        let w3 = z_q - 1.3 * fr.scale * fr.e1;
        let pts = [w1, w2, w3, z_q];
        let mut ok = true;
        let mut prev = cfg.d;
        for &p in &pts {
            // Clearance from cuts for every leg except the root endpoints.
            let margin = min_clearance((prev, p), cfg);
            let interior_leg = prev != cfg.d && p != z_q;
            if margin < 0.06 * fr.scale && interior_leg {
                ok = false;
                break;
            }
            prev = p;
        }
        if !ok {
            continue;
        }
        let (integral, r_at_q) = path_from_root_over_r(cfg, plane, 3, &pts, &one)?;
        let q_plus_radical = -(z_q - cfg.c) * (z_q - cfg.d);
        let on_plus_sheet = (r_at_q - q_plus_radical).norm() <= (r_at_q + q_plus_radical).norm();
        let a_q = c1 * integral;
        return Ok(if on_plus_sheet {
            (a_q, -a_q)
        } else {
            (-a_q, a_q)
        });
    }
    Err(Error::NonConvergence(
        "no clear path to z_Q around the Stokes tripod".into(),
    ))
}

/// The two cycle integrals used for the independent 𝔟-realization:
/// (∮ dz/ℛ, ∮ z²dz/ℛ) over a counterclockwise stadium around {A, D}.
fn stadium_cycle(cfg: &EllipticConfig, plane: &CutPlane) -> Result<(C64, C64)> {
    let a = cfg.a;
    let d = cfg.d;
    let axis = (d - a) / (d - a).norm();
    let normal = C64::new(0.0, 1.0) * axis;
    // Clearance-limited radius.
    let clear = dist_to_segment(cfg.b, a, d)
        .min(dist_to_segment(cfg.c, a, d))
        .min((cfg.b - a).norm())
        .min((cfg.c - d).norm());
    let rho = 0.45 * clear;
    if rho < 1e-4 {
        return Err(Error::Degenerate("A/D stadium", "B or C", clear));
    }
    // Polyline: side A→D shifted +normal, cap at D, side D→A shifted
    // -normal, cap at A.
    let mut pts: Vec<C64> = Vec::new();
    let n_side = 48;
    let n_cap = 32;
    for k in 0..=n_side {
        pts.push(a + (d - a) * (k as f64 / n_side as f64) + normal * rho);
    }
    for k in 1..=n_cap {
        let ang = PI / 2.0 - PI * (k as f64 / n_cap as f64);
        pts.push(d + C64::from_polar(rho, ang + axis.arg()));
    }
    for k in 1..=n_side {
        pts.push(d - (d - a) * (k as f64 / n_side as f64) - normal * rho);
    }
    for k in 1..=n_cap {
        let ang = -PI / 2.0 - PI * (k as f64 / n_cap as f64);
        pts.push(a + C64::from_polar(rho, ang + axis.arg()));
    }
    // Branch continued around the loop, anchored planar at the start.
    let rad = cfg.radicand();
    let mut r_cur = plane.radical(pts[0])?;
    let r_start = r_cur;
    let one = |_: C64| C64::new(1.0, 0.0);
    let zsq = |z: C64| z * z;
    let mut total1 = C64::new(0.0, 0.0);
    let mut total2 = C64::new(0.0, 0.0);
    for pair in pts.windows(2) {
        let leg = Leg::Line {
            a: pair[0],
            b: pair[1],
        };
        let anchor = LegAnchor {
            t: 0.0,
            value: r_cur,
        };
        let (v1, _) = integrate_leg(&rad, &leg, &Integrand::OverR(&one), &anchor, 1e-13)?;
        let (v2, r_end) = integrate_leg(&rad, &leg, &Integrand::OverR(&zsq), &anchor, 1e-13)?;
        total1 += v1;
        total2 += v2;
        r_cur = r_end;
    }
    // Around two branch points the sheet must close up.
    if (r_cur - r_start).norm() > 1e-6 * r_start.norm() {
        return Err(Error::NonConvergence(
            "stadium loop did not return to its starting sheet".into(),
        ));
    }
    // The stadium is traversed counterclockwise…: orientation is resolved
    // by the caller against the first-kind period.
    Ok((total1, total2))
}

/// The Stokes graph: bounded arcs C→A, C→B, C→D of the zero level of
/// Re(2H(z)+Λ) plus the six unbounded arcs.
#[derive(Clone, Debug)]
pub struct StokesGraph {
    /// Arcs from C to A, B, D, in that order.
    pub bounded: [Vec<C64>; 3],
    /// Six unbounded arcs (two from each of A, B, D).
    pub unbounded: Vec<Vec<C64>>,
}

/// Trace the Stokes graph.  The level curves of Re(2H+Λ) are integral
/// curves of dz/ds = ±i·conj(R)/|R| (since d(2H+Λ) = 3R dz), so the tracer
/// never needs H itself; the three directions at each branch point come
/// from the local model 2H+Λ ≈ (2·sqrt(Q₁(E))) (z-E)^{3/2}.
pub fn trace_stokes_graph(cfg: &EllipticConfig) -> Result<StokesGraph> {
    let rad = cfg.radicand();
    let roots = cfg.roots();
    let scale = frame(cfg).scale;
    let stop_radius = 10.0 * scale.max(1.0);
    let mut bounded: [Option<Vec<C64>>; 3] = [None, None, None];
    let mut unbounded = Vec::new();
    for (idx, &e) in roots.iter().enumerate() {
        if idx == 2 {
            continue; // arcs are seeded from A, B, D; C is the hub
        }
        let q1 = rad.eval_deflated(idx, e);
        // Directions where Re(c·(z-E)^{3/2}) = 0 descending into arcs:
        // 3 rays at 2π/3 spacing.
        let base = (PI - q1.sqrt().arg() * 1.0) * (2.0 / 3.0);
        for k in 0..3 {
            let dir = C64::from_polar(1.0, base + 2.0 * PI * (k as f64) / 3.0);
            match trace_stokes_arc(cfg, &rad, idx, dir, stop_radius) {
                Ok(arc) => {
                    let end = *arc.last().unwrap();
                    if (end - cfg.c).norm() < 0.03 * scale {
                        let slot = if idx == 0 { 0 } else if idx == 1 { 1 } else { 2 };
                        let mut rev: Vec<C64> = arc.into_iter().rev().collect();
                        rev.insert(0, cfg.c);
                        bounded[slot] = Some(rev);
                    } else if end.norm() > 0.9 * stop_radius {
                        unbounded.push(arc);
                    }
                }
                Err(_) => continue,
            }
        }
    }
    let bounded = [
        bounded[0]
            .take()
            .ok_or_else(|| Error::TracerStall("no C-A arc".into()))?,
        bounded[1]
            .take()
            .ok_or_else(|| Error::TracerStall("no C-B arc".into()))?,
        bounded[2]
            .take()
            .ok_or_else(|| Error::TracerStall("no C-D arc".into()))?,
    ];
    if unbounded.len() != 6 {
        return Err(Error::TracerStall(format!(
            "expected 6 unbounded Stokes arcs, got {}",
            unbounded.len()
        )));
    }
    Ok(StokesGraph { bounded, unbounded })
}

fn trace_stokes_arc(
    cfg: &EllipticConfig,
    rad: &Radicand,
    root_idx: usize,
    dir0: C64,
    stop_radius: f64,
) -> Result<Vec<C64>> {
    let e = cfg.roots()[root_idx];
    let scale = frame(cfg).scale;
    let h_step = 0.01 * scale;
    // Launch slightly off the branch point along the level direction with
    // the branch of R continued from the local model.
    let mut z = e + dir0 * (h_step * 0.5);
    let q1 = rad.eval_deflated(root_idx, z);
    let mut r = ((z - e) * q1).sqrt();
    // Choose the sqrt sign so the step direction is a descent of |…|… both
    // signs trace the same set; orientation fixed by marching outward.
    let mut pts = vec![e, z];
    let mut dir_prev = dir0;
    for _ in 0..30_000 {
        // Unit tangent: ±i conj(R)/|R|, oriented to continue forward.
        let mut t = C64::new(0.0, 1.0) * r.conj() / r.norm();
        if (t * dir_prev.conj()).re < 0.0 {
            t = -t;
        }
        // Heun step along the field with branch continuation.
        let z_mid = z + t * (0.5 * h_step);
        let r_mid = continue_sqrt(rad, z_mid, r);
        let mut t_mid = C64::new(0.0, 1.0) * r_mid.conj() / r_mid.norm();
        if (t_mid * t.conj()).re < 0.0 {
            t_mid = -t_mid;
        }
        let z_next = z + t_mid * h_step;
        let r_next = continue_sqrt(rad, z_next, r);
        z = z_next;
        r = r_next;
        dir_prev = t_mid;
        pts.push(z);
        if z.norm() > stop_radius {
            break;
        }
        // Terminate on reaching another branch point (bounded arc).
        for (j, &other) in cfg.roots().iter().enumerate() {
            if j != root_idx && (z - other).norm() < 0.02 * scale {
                pts.push(other);
                return Ok(pts);
            }
        }
    }
    Ok(pts)
}

fn continue_sqrt(rad: &Radicand, z: C64, prev: C64) -> C64 {
    let v = rad.eval(z).sqrt();
    if (v - prev).norm() <= (v + prev).norm() {
        v
    } else {
        -v
    }
}

/// Central finite-difference ∂̄Π at x₀ with step h, and the closed-form
/// partner -4π/(3 Im(Ω_a Ω_b*)).
pub fn dbar_pi_check(x0: C64, h: f64) -> Result<(C64, C64)> {
    let base = boutroux::solve_from_zero(x0)?;
    let at = |dx: C64| -> Result<C64> {
        Ok(boutroux::continue_to(x0 + dx, &base)?.pi)
    };
    let pr = (at(C64::new(h, 0.0))? - at(C64::new(-h, 0.0))?) / (2.0 * h);
    let pi_im = (at(C64::new(0.0, h))? - at(C64::new(0.0, -h))?) / (2.0 * h);
    let fd = 0.5 * (pr + C64::new(0.0, 1.0) * pi_im);
    let rec = period_record(&base, Checks::Fast)?;
    let formula = -4.0 * PI / (3.0 * (rec.omega_a_c() * rec.omega_b_c().conj()).im);
    Ok((fd, C64::new(formula, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boutroux::{solve_from_zero, zero_config};

    fn zero_record(checks: Checks) -> PeriodRecord {
        period_record(&zero_config(), checks).unwrap()
    }

    #[test]
    fn anchors_at_origin() {
        let rec = zero_record(Checks::Full);
        let sqrt3 = 3f64.sqrt();
        assert!(
            (rec.h0_c() - C64::new(-2.0 * PI * sqrt3, 0.0)).norm() < 1e-8,
            "H0(0) = {}",
            rec.h0_c()
        );
        assert!(
            (rec.h_c() - C64::new(-PI * sqrt3, PI)).norm() < 1e-8,
            "H(0) = {}",
            rec.h_c()
        );
        assert!(
            (rec.abel_inf_plus_c() - C64::new(PI * sqrt3 / 3.0, 0.0)).norm() < 1e-8,
            "A(inf+)(0) = {}",
            rec.abel_inf_plus_c()
        );
        let zq_expect = -0.5 * (4.0f64 / 3.0).powf(1.0 / 3.0);
        assert!((rec.z_q_c() - C64::new(zq_expect, 0.0)).norm() < 1e-10);
        assert!(rec.c1_c().re > 0.0 && rec.c1_c().im.abs() < 1e-10);
    }

    #[test]
    fn u_equals_two_c1() {
        for &x0 in &[
            C64::new(0.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.8),
            C64::new(-1.0, 0.0),
        ] {
            let cfg = solve_from_zero(x0).unwrap();
            let rec = period_record(&cfg, Checks::Fast).unwrap();
            let rel = (rec.u_c() - 2.0 * rec.c1_c()).norm() / rec.u_c().norm();
            assert!(rel < 1e-8, "U vs 2c1 at {x0}: rel {rel:.3e}");
        }
    }

    #[test]
    fn hexagonal_lattice_at_origin() {
        let rec = zero_record(Checks::Fast);
        let g1 = C64::new(0.0, 2.0 * PI) / rec.c1_c();
        let g2 = rec.h_c() / rec.c1_c();
        assert!((g1.norm() - g2.norm()).abs() < 1e-6, "moduli differ");
        let mut ang = (g2 / g1).arg().abs();
        if ang < PI / 2.0 {
            ang = PI - ang;
        }
        assert!((ang - 2.0 * PI / 3.0).abs() < 1e-4, "angle {ang}");
    }

    #[test]
    fn real_section_reality() {
        let cfg = solve_from_zero(C64::new(0.6, 0.0)).unwrap();
        let rec = period_record(&cfg, Checks::Full).unwrap();
        assert!(rec.c1_c().im.abs() < 1e-9);
        assert!(rec.h0_c().im.abs() < 1e-9);
        assert!(rec.kappa0_c().im.abs() < 1e-8, "κ0 = {}", rec.kappa0_c());
        assert!(rec.kappa1_c().im.abs() < 1e-8, "κ1 = {}", rec.kappa1_c());
        assert!(rec.e_plus_c().im.abs() < 1e-8, "E+ = {}", rec.e_plus_c());
        assert!(rec.abel_q_plus_c().im.abs() < 1e-8);
        assert!(rec.lambda_c().im.abs() < 1e-8, "Λ = {}", rec.lambda_c());
        assert!((rec.phi_plus + rec.phi_minus).abs() < 1e-9);
    }

    #[test]
    fn record_identities_inside_t() {
        let cfg = solve_from_zero(C64::new(0.4, 0.3)).unwrap();
        let rec = period_record(&cfg, Checks::Full).unwrap();
        // ℋ = iπ + ℋ₀/2, 𝒦 = iπ + ℋ/2 by construction; Re ℋ < 0.
        assert!(rec.h_c().re < 0.0);
        let u_rel = (rec.u_c() - 2.0 * rec.c1_c()).norm() / rec.u_c().norm();
        assert!(u_rel < 1e-8);
    }

    #[test]
    fn lambda_matches_exterior_lambda_on_left_arc() {
        // Λ(x₀) → λ(x₀) on the arcs of ∂T meeting at x_c.  Probe a point
        // near the upper-left arc, approached from inside.
        let b = crate::levels::boundary();
        // midpoint of arc 0 (x_c → upper corner), pushed inward.
        let arc = &b.arcs[0];
        let xb = arc[arc.len() / 2];
        let inward = -xb / xb.norm();
        let x0 = xb + 0.02 * inward;
        let cfg = solve_from_zero(x0).unwrap();
        let rec = period_record(&cfg, Checks::Fast).unwrap();
        let lam = crate::genus_zero::genus_zero_data(x0).unwrap().lambda;
        let diff = (rec.lambda_c() - lam).norm();
        assert!(diff < 0.05, "Λ vs λ near left arc: {diff} ({} vs {lam})", rec.lambda_c());
    }

    #[test]
    fn dbar_pi_positive_and_consistent_at_zero() {
        let (fd, formula) = dbar_pi_check(C64::new(0.0, 0.0), 1e-3).unwrap();
        assert!(formula.re > 0.0 && formula.im.abs() < 1e-12);
        assert!((fd - formula).norm() < 1e-4, "FD {fd} vs formula {formula}");
    }

    #[test]
    fn stokes_graph_shape_at_origin() {
        let cfg = zero_config();
        let g = trace_stokes_graph(&cfg).unwrap();
        assert_eq!(g.unbounded.len(), 6);
        // Unbounded arcs approach angles ±π/6, ±π/2, ±5π/6.
        let targets = [
            PI / 6.0,
            PI / 2.0,
            5.0 * PI / 6.0,
            -PI / 6.0,
            -PI / 2.0,
            -5.0 * PI / 6.0,
        ];
        for arc in &g.unbounded {
            let end = arc.last().unwrap();
            let ang = end.arg();
            let best = targets
                .iter()
                .map(|t| (ang - t).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 0.02, "stokes asymptote angle {ang}");
        }
        // Schwarz symmetry of the bounded arcs for real x₀: C→A mirrors C→B.
        for (p, q) in g.bounded[0].iter().zip(g.bounded[1].iter()) {
            assert!((p.conj() - q).norm() < 1e-6);
        }
    }

    #[test]
    fn branch_points_on_common_level() {
        // Boutroux ⟺ all four branch points on the zero level of Re(2H+Λ):
        // verify via independent H quadrature at each root.
        let cfg = solve_from_zero(C64::new(0.5, 0.2)).unwrap();
        let rec = period_record(&cfg, Checks::Fast).unwrap();
        let fr = frame(&cfg);
        let plane = cfg.cut_plane();
        let chi = 1.6 * fr.scale;
        let probes = [
            (0usize, cfg.a + chi * (cfg.a - cfg.c) / (cfg.a - cfg.c).norm()),
            (1, cfg.b + chi * (cfg.b - cfg.c) / (cfg.b - cfg.c).norm()),
            (3, cfg.d + chi * fr.e2),
        ];
        for (idx, z1) in probes {
            let h = h_at_root(&cfg, &plane, idx, z1, out_dir(&cfg, z1)).unwrap();
            let level = (2.0 * h + rec.lambda_c()).re;
            assert!(level.abs() < 1e-8, "root {idx} off level: {level:.3e}");
        }
    }
}
