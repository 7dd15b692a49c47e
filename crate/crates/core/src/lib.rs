//! Rational solutions of the inhomogeneous Painlevé-II equation
//!
//! ```text
//!     p'' = 2p³ + (2/3)yp - (2/3)m,        m ∈ ℤ,
//! ```
//!
//! and of the coupled Painlevé-II system, together with their large-degree
//! asymptotic approximations.
//!
//! The crate has two halves.  The exact half ([`rational`]) constructs the
//! rational functions U_m, V_m (and their logarithmic derivatives P_m, Q_m)
//! by Bäcklund recursion with exact rational-coefficient polynomial
//! arithmetic, evaluates them, and locates their zeros and poles.  The
//! asymptotic half approximates the same functions for large m after the
//! rescaling x = (m-1/2)^{-2/3} y:
//!
//! * outside the elliptic region T the approximants are elementary functions
//!   of the branch S(x) of a cubic equation ([`genus_zero`]);
//! * inside T they are ratios of Riemann theta functions built on a genus-one
//!   curve whose branch points solve coupled moment and Boutroux conditions
//!   ([`boutroux`], [`periods`], [`theta`], [`approx`]).
//!
//! [`grid`] persists the m-independent elliptic data over T on a ray-organized
//! grid, and [`compare`] pairs exact functions with their approximants to
//! verify the advertised O(1/m) error behavior at desk scale.

pub mod approx;
pub mod boutroux;
pub mod compare;
pub mod error;
pub mod extended;
pub mod figures;
pub mod genus_zero;
pub mod grid;
pub mod levels;
pub mod path;
pub mod periods;
pub mod poly;
pub mod polyroots;
pub mod rational;
pub mod theta;

pub use error::{Error, Result};

/// Complex double used throughout the numerical half.
pub type C64 = num_complex::Complex<f64>;

/// The rescaling exponent base: eps = 1/(m - 1/2).
pub fn epsilon(m: u32) -> f64 {
    1.0 / (m as f64 - 0.5)
}

/// y = (m - 1/2)^{2/3} x, the change of variable between the exact functions'
/// argument and the rescaled plane where the elliptic region is fixed.
pub fn y_from_x(m: u32, x: C64) -> C64 {
    x * (m as f64 - 0.5).powf(2.0 / 3.0)
}
