//! Conformal modules of ring domains.
//!
//! Convention: the module of a curve family is `inf ∫ρ²` over admissible
//! metrics. For the circles separating the boundary of `K_R` it is
//! `ln R/π`; for the curves joining the boundary components of a ring of
//! ratio `ρ` it is `2π/ln ρ`. Every function below says which family it
//! measures.

mod grid;
mod witness;

use std::f64::consts::PI;

use crate::contour::{Expr, C64};
use crate::error::{Error, EvalError, Result};

pub use grid::{
    grid_module_estimate, grid_module_estimate_with, BoundaryLabel, DomainDescriptor, GridOptions,
    ModulusEstimate, ModulusMethod, RingDomain,
};
pub use witness::{circle_witness, line_witness, star_witness, StarWitness, WITNESS_SAMPLES};

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be a positive real, got {x}")))
    }
}

/// Module of the circles separating the boundary of `K_R`: `ln R/π`.
pub fn circle_family_module(r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 1.0) {
        return Err(Error::InvalidArgument(format!("R must be > 1, got {r}")));
    }
    Ok(r.ln() / PI)
}

/// Module of the curves joining the boundary of `{1 < |w| < ratio}`.
pub fn joining_family_module(ratio: f64) -> Result<f64> {
    if !(ratio > 1.0) {
        return Err(Error::InvalidArgument(format!("ratio must be > 1, got {ratio}")));
    }
    Ok(2.0 * PI / ratio.ln())
}

/// `λ* = √(λ² + 1) − λ`, computed without cancellation.
pub fn lambda_star(lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(1.0 / (lambda.hypot(1.0) + lambda))
}

/// The Möbius map of `D = {Re z < λ, |z + 1/(2λ)| > 1/(2λ)}` onto
/// `{1 < |w| < 1/λ*²}`.
#[derive(Debug, Clone)]
pub struct MobiusMap {
    pub lambda: f64,
    pub lambda_star: f64,
    pub ratio: f64,
    pub map: Expr,
}

impl MobiusMap {
    /// `f(z) = (1/λ*)(z + λ*)/(1 − zλ*)`.
    pub fn apply(&self, z: C64) -> Result<C64, EvalError> {
        let ls = self.lambda_star;
        let den = 1.0 - z * ls;
        if den.norm() == 0.0 {
            return Err(EvalError::DivisionByZero { z });
        }
        Ok((z + ls) / den / ls)
    }

    /// Whether `z` lies in `D`.
    pub fn in_domain(&self, z: C64) -> bool {
        let c = 0.5 / self.lambda;
        z.re < self.lambda && (z + c).norm() > c
    }
}

pub fn mobius_to_annulus(lambda: f64) -> Result<MobiusMap> {
    let ls = lambda_star(lambda)?;
    let map = Expr::div(
        Expr::add(Expr::Z, Expr::real(ls)),
        Expr::mul(
            Expr::real(ls),
            Expr::sub(Expr::real(1.0), Expr::mul(Expr::real(ls), Expr::Z)),
        ),
    );
    Ok(MobiusMap {
        lambda,
        lambda_star: ls,
        ratio: 1.0 / (ls * ls),
        map,
    })
}

/// Module of the curves joining the two boundary components of `D`:
/// `π/arcsinh λ`.
pub fn mod_gamma_d(lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(PI / lambda.asinh())
}

/// `ln R₀(λ) = π²/arcsinh λ`.
pub fn r0_bound(lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(PI * PI / lambda.asinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn closed_forms() {
        assert!((circle_family_module(E).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((circle_family_module(PI.exp()).unwrap() - 1.0).abs() < 1e-15);
        assert!(circle_family_module(1.0 + 1e-12).unwrap() < 1e-11);
        assert!(circle_family_module(1.0).is_err());
        assert!((joining_family_module(E).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((joining_family_module((2.0 * PI).exp()).unwrap() - 1.0).abs() < 1e-15);
        assert!(joining_family_module(0.5).is_err());
        let ls = lambda_star(2.0).unwrap();
        assert!((ls - (5f64.sqrt() - 2.0)).abs() < 1e-15);
        let j = joining_family_module(1.0 / (ls * ls)).unwrap();
        assert!((j - 2.1761675350909986).abs() < 1e-12);
    }

    #[test]
    fn mobius_examples() {
        let m = mobius_to_annulus(1.0).unwrap();
        assert!((m.lambda_star - 0.414214).abs() < 1e-6);
        assert!((m.ratio - 5.828427).abs() < 1e-6);
        assert!((m.apply(C64::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((m.apply(C64::new(1.0, 0.0)).unwrap().norm() - m.ratio).abs() < 1e-12);
        let z = C64::new(-0.3, 0.7);
        assert!((m.map.eval(z).unwrap() - m.apply(z).unwrap()).norm() < 1e-14);
        assert!(mobius_to_annulus(0.0).is_err());
        assert!(mobius_to_annulus(-1.0).is_err());
    }

    #[test]
    fn d_module_and_bound() {
        assert!((mod_gamma_d(1.0).unwrap() - 3.564427956382738).abs() < 1e-12);
        assert!((mod_gamma_d(PI.sinh()).unwrap() - 1.0).abs() < 1e-14);
        assert!(mod_gamma_d(1e-300).unwrap() > 1e299);
        assert!((r0_bound(1.0).unwrap() - 11.19798068202209).abs() < 1e-12);
        assert!((r0_bound(PI.sinh()).unwrap() - PI).abs() < 1e-14);
        assert!(r0_bound(0.0).is_err());
    }
}
