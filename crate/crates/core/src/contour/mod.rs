//! Complex-arithmetic kernel: expressions, circle quadrature, Laurent
//! coefficients, canonical-path integration and univalence probes.

mod expr;
mod parse;
mod probe;
mod quad;

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, EvalError, Result};

pub use expr::{Expr, Kernel, LOG_CUT_GUARD};
pub use parse::parse_expr;
pub use probe::{count_zeros, univalence_probe, ProbeOptions, ProbeReport, Verdict};
pub use quad::{
    circle_integral, circle_integral_auto, circle_mean_auto, gauss_legendre, laurent_coeff,
    laurent_coeff_auto, path_integral, path_integral_many, trapezoid_mean, CircleQuad,
    PathIntegral, ADAPTIVE_TOL, DEFAULT_NODES, MAX_NODES,
};

pub type C64 = Complex<f64>;

/// The annulus `K_R = {1/R < |z| < R}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    r: f64,
}

impl Annulus {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "annulus modulus R must be a finite real > 1, got {r}"
            )));
        }
        Ok(Annulus { r })
    }

    /// Outer radius `R`.
    pub fn outer(&self) -> f64 {
        self.r
    }

    /// Inner radius `1/R`.
    pub fn inner(&self) -> f64 {
        1.0 / self.r
    }

    pub fn ln_r(&self) -> f64 {
        self.r.ln()
    }

    pub fn contains(&self, z: C64) -> bool {
        let m = z.norm();
        m > self.inner() && m < self.r
    }

    pub fn contains_radius(&self, rho: f64) -> bool {
        rho > self.inner() && rho < self.r
    }

    pub(crate) fn check(&self, z: C64) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::OutsideAnnulus { z, r: self.r })
        }
    }
}

/// A holomorphic function on an annulus, carried as an expression tree.
#[derive(Debug, Clone)]
pub struct HoloFn {
    expr: Expr,
    annulus: Annulus,
}

impl HoloFn {
    pub fn new(expr: Expr, annulus: Annulus) -> Self {
        HoloFn { expr, annulus }
    }

    pub fn parse(text: &str, annulus: Annulus) -> Result<Self> {
        Ok(HoloFn::new(parse_expr(text)?, annulus))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn annulus(&self) -> Annulus {
        self.annulus
    }

    pub fn eval(&self, z: C64) -> Result<C64, EvalError> {
        self.expr.eval(z)
    }

    pub fn derivative(&self) -> Result<HoloFn> {
        let d = self
            .expr
            .derivative()
            .ok_or_else(|| Error::NoDerivative(self.expr.to_string()))?;
        Ok(HoloFn::new(d, self.annulus))
    }

    /// `1/self`, sharing the annulus.
    pub fn recip(&self) -> HoloFn {
        HoloFn::new(Expr::div(Expr::real(1.0), self.expr.clone()), self.annulus)
    }

    /// `s·self`.
    pub fn scale(&self, s: C64) -> HoloFn {
        HoloFn::new(Expr::mul(Expr::constant(s), self.expr.clone()), self.annulus)
    }
}

impl fmt::Display for HoloFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

/// Parses `text` (grammar in [`parse_expr`]) into a function on `annulus`.
pub fn parse_holo_expr(text: &str, annulus: Annulus) -> Result<HoloFn> {
    HoloFn::parse(text, annulus)
}
