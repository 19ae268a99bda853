//! Points of `|z| = ρ` where `Re g = λ` and `Re 1/g = −λ`.

use std::f64::consts::PI;

use crate::contour::{laurent_coeff_auto, HoloFn, C64};
use crate::error::{Error, Result};

pub const WITNESS_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarWitness {
    /// `Re g(ρe^{it₁}) = λ`.
    pub t1: f64,
    /// `Re 1/g(ρe^{it₂}) = −λ`.
    pub t2: f64,
    pub residual1: f64,
    pub residual2: f64,
}

/// `|a₀[g] − λ| + |a₀[1/g] + λ|` on `|z| = ρ`.
fn condition_residual(g: &HoloFn, rho: f64, lambda: f64) -> f64 {
    let a = laurent_coeff_auto(g, 0, rho).map(|q| q.value);
    let b = laurent_coeff_auto(&g.recip(), 0, rho).map(|q| q.value);
    match (a, b) {
        (Ok(a), Ok(b)) => (a - lambda).norm() + (b + lambda).norm(),
        _ => f64::NAN,
    }
}

fn root_on_circle(
    h: impl Fn(f64) -> Result<f64>,
    which: &'static str,
    diag: impl Fn() -> f64,
) -> Result<(f64, f64)> {
    let step = 2.0 * PI / WITNESS_SAMPLES as f64;
    let mut prev = h(0.0)?;
    if prev == 0.0 {
        return Ok((0.0, 0.0));
    }
    for k in 1..=WITNESS_SAMPLES {
        let t = k as f64 * step;
        let cur = h(t)?;
        if cur == 0.0 {
            return Ok((t, 0.0));
        }
        if cur.signum() != prev.signum() {
            let (mut lo, mut hi) = (t - step, t);
            let mut flo = prev;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = h(mid)?;
                if fm == 0.0 || hi - lo < 1e-15 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            return Ok((t.rem_euclid(2.0 * PI), h(t)?.abs()));
        }
        prev = cur;
    }
    Err(Error::NoWitness {
        which,
        residual: diag(),
    })
}

fn check(g: &HoloFn, rho: f64, lambda: f64) -> Result<()> {
    if !g.annulus().contains_radius(rho) {
        return Err(Error::InvalidArgument(format!("radius {rho} is outside the annulus")));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

/// `t` with `Re g(ρe^{it}) = λ`: the circle meets the line `Re z = λ`.
pub fn line_witness(g: &HoloFn, rho: f64, lambda: f64) -> Result<(f64, f64)> {
    check(g, rho, lambda)?;
    root_on_circle(
        |t| Ok(g.eval(C64::from_polar(rho, t))?.re - lambda),
        "line",
        || condition_residual(g, rho, lambda),
    )
}

/// `t` with `Re 1/g(ρe^{it}) = −λ`: the image meets `|z + 1/(2λ)| = 1/(2λ)`.
pub fn circle_witness(g: &HoloFn, rho: f64, lambda: f64) -> Result<(f64, f64)> {
    check(g, rho, lambda)?;
    root_on_circle(
        |t| Ok((1.0 / g.eval(C64::from_polar(rho, t))?).re + lambda),
        "circle",
        || condition_residual(g, rho, lambda),
    )
}

pub fn star_witness(g: &HoloFn, rho: f64, lambda: f64) -> Result<StarWitness> {
    let (t1, residual1) = line_witness(g, rho, lambda)?;
    let (t2, residual2) = circle_witness(g, rho, lambda)?;
    Ok(StarWitness {
        t1,
        t2,
        residual1,
        residual2,
    })
}
