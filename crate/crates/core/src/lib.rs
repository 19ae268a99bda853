//! Minimal tubes over an annulus.
//!
//! The crate builds two-dimensional minimal tubes in R³ from Weierstrass
//! data `(f, g)` on `K_R = {1/R < |z| < R}`, measures their flow vector,
//! tilt angle and life-time, and checks the life-time bound together with
//! the annulus-modulus bound for univalent functions satisfying
//! `a₀[g] = λ, a₀[1/g] = −λ`.
//!
//! Module map:
//!
//! * [`contour`]: holomorphic expressions, circle quadrature, Laurent
//!   coefficients, path integrals and the univalence probe.
//! * [`weierstrass`]: Weierstrass–Enneper data and the tube immersion.
//! * [`flux`]: flow vector, tilt angle, life-time and its upper bound.
//! * [`modulus`]: closed-form moduli, the grid extremal-length estimator
//!   and the witness finder for the two intersection conditions.
//! * [`extremal`]: theta / Weierstrass ℘ kernel, the two-slit candidate map,
//!   its calibration and the sharpness sweep.
//! * [`io`]: tube specs, JSON reports and sweep tables used by the CLI.

pub mod contour;
pub mod error;
pub mod extremal;
pub mod flux;
pub mod io;
pub mod modulus;
pub mod weierstrass;

pub use contour::{Annulus, Expr, HoloFn, C64};
pub use error::{Error, EvalError, Result};
