//! Trapezoid quadrature on circles and Gauss–Legendre quadrature along
//! the canonical arc-then-radius path.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::contour::{Annulus, HoloFn, C64};
use crate::error::{Error, EvalError, Result};

/// Starting node count of the adaptive circle rule.
pub const DEFAULT_NODES: usize = 1024;
/// Node count at which doubling stops.
pub const MAX_NODES: usize = 1 << 16;
/// Two successive adaptive estimates must agree to this (relative to `max(1, |I|)`).
pub const ADAPTIVE_TOL: f64 = 1e-11;

fn check_nodes(n_points: usize) -> Result<()> {
    if n_points < 16 || !n_points.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "n_points must be even and >= 16, got {n_points}"
        )));
    }
    Ok(())
}

fn check_radius(annulus: &Annulus, rho: f64) -> Result<()> {
    if !annulus.contains_radius(rho) {
        return Err(Error::InvalidArgument(format!(
            "circle radius {rho} is outside ({}, {})",
            annulus.inner(),
            annulus.outer()
        )));
    }
    Ok(())
}

#[inline]
fn node(rho: f64, n: usize, j: f64) -> C64 {
    C64::from_polar(rho, 2.0 * PI * j / n as f64)
}

/// Mean of `f` over `n` equispaced nodes `ρ·e^{2πij/n}`.
pub fn trapezoid_mean<F>(f: F, rho: f64, n: usize) -> Result<C64, EvalError>
where
    F: Fn(C64) -> Result<C64, EvalError>,
{
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        acc += f(node(rho, n, j as f64))?;
    }
    Ok(acc / n as f64)
}

/// Mean over the `n` midpoints `ρ·e^{2πi(j+½)/n}`.
fn midpoint_mean<F>(f: &F, rho: f64, n: usize) -> Result<C64, EvalError>
where
    F: Fn(C64) -> Result<C64, EvalError>,
{
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        acc += f(node(rho, n, j as f64 + 0.5))?;
    }
    Ok(acc / n as f64)
}

/// Result of an adaptive circle rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleQuad {
    pub value: C64,
    pub n_points: usize,
    /// Whether two successive estimates met [`ADAPTIVE_TOL`] before [`MAX_NODES`].
    pub converged: bool,
}

/// Adaptive mean `(1/2π)∫ f(ρe^{iθ}) dθ`: starts at [`DEFAULT_NODES`] and doubles
/// (reusing the previous nodes) until two estimates agree.
pub fn circle_mean_auto<F>(f: F, rho: f64) -> Result<CircleQuad, EvalError>
where
    F: Fn(C64) -> Result<C64, EvalError>,
{
    let mut n = DEFAULT_NODES;
    let mut mean = trapezoid_mean(&f, rho, n)?;
    loop {
        let mid = midpoint_mean(&f, rho, n)?;
        let refined = 0.5 * (mean + mid);
        n *= 2;
        let diff = (refined - mean).norm();
        mean = refined;
        if diff < ADAPTIVE_TOL * mean.norm().max(1.0) {
            return Ok(CircleQuad {
                value: mean,
                n_points: n,
                converged: true,
            });
        }
        if n >= MAX_NODES {
            log::debug!("circle rule at rho={rho} stopped at {n} nodes, last change {diff:e}");
            return Ok(CircleQuad {
                value: mean,
                n_points: n,
                converged: false,
            });
        }
    }
}

/// `∮_{|ζ|=ρ} h(ζ) dζ` by the `n_points` trapezoid rule.
pub fn circle_integral(h: &HoloFn, rho: f64, n_points: usize) -> Result<C64> {
    check_nodes(n_points)?;
    check_radius(&h.annulus(), rho)?;
    let mean = trapezoid_mean(|z| Ok(h.eval(z)? * z), rho, n_points)?;
    Ok(C64::new(0.0, 2.0 * PI) * mean)
}

/// `∮_{|ζ|=ρ} h(ζ) dζ` with the adaptive doubling rule.
pub fn circle_integral_auto(h: &HoloFn, rho: f64) -> Result<CircleQuad> {
    check_radius(&h.annulus(), rho)?;
    let mut q = circle_mean_auto(|z| Ok(h.eval(z)? * z), rho)?;
    q.value *= C64::new(0.0, 2.0 * PI);
    Ok(q)
}

/// Laurent coefficient `a_k[h] = (1/2πi)∮ h(ζ) ζ^{-k-1} dζ` on `|ζ| = ρ`.
pub fn laurent_coeff(h: &HoloFn, k: i32, rho: f64, n_points: usize) -> Result<C64> {
    check_nodes(n_points)?;
    check_radius(&h.annulus(), rho)?;
    Ok(trapezoid_mean(|z| Ok(h.eval(z)? * z.powi(-k)), rho, n_points)?)
}

/// Adaptive variant of [`laurent_coeff`].
pub fn laurent_coeff_auto(h: &HoloFn, k: i32, rho: f64) -> Result<CircleQuad> {
    check_radius(&h.annulus(), rho)?;
    Ok(circle_mean_auto(|z| Ok(h.eval(z)? * z.powi(-k)), rho)?)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(t) and P_{n-1}(t)
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (t * pn - pm) / (t * t - 1.0);
            let dt = pn / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

const PATH_TOL: f64 = 1e-14;
const MAX_PANELS: usize = 4096;

/// Composite 20-point Gauss–Legendre integral over `t ∈ [a, b]` of
/// `F(ζ(t))·ζ'(t)` for every component, doubling the panel count until stable.
fn composite<M>(fs: &[HoloFn], a: f64, b: f64, map: M) -> Result<Vec<C64>>
where
    M: Fn(f64) -> (C64, C64),
{
    let (x, w) = gl20();
    let eval = |panels: usize| -> Result<Vec<C64>> {
        let mut acc = vec![C64::new(0.0, 0.0); fs.len()];
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (xi, wi) in x.iter().zip(w) {
                let t = lo + 0.5 * h * (xi + 1.0);
                let (zeta, dzeta) = map(t);
                for (slot, f) in acc.iter_mut().zip(fs) {
                    *slot += f.eval(zeta)? * dzeta * (0.5 * h * wi);
                }
            }
        }
        Ok(acc)
    };
    let mut panels = 2;
    let mut cur = eval(panels)?;
    loop {
        panels *= 2;
        let next = eval(panels)?;
        let scale = next.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let diff = next
            .iter()
            .zip(&cur)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max);
        cur = next;
        if diff <= PATH_TOL * scale || panels >= MAX_PANELS {
            if diff > PATH_TOL * scale {
                log::debug!("path quadrature stopped at {panels} panels, change {diff:e}");
            }
            return Ok(cur);
        }
    }
}

/// Integrals along the canonical path, plus the signed arc sweep taken.
#[derive(Debug, Clone, PartialEq)]
pub struct PathIntegral {
    pub values: Vec<C64>,
    /// Signed angle swept along `|ζ| = |z₀|`, in `(-π, π]`.
    pub arc_sweep: f64,
}

/// Integrates each function from `z0` to `z` along the circular arc at
/// `|z0|` (shorter direction, counterclockwise on ties) followed by the
/// radial segment at `arg z`.
pub fn path_integral_many(fs: &[HoloFn], z0: C64, z: C64) -> Result<PathIntegral> {
    let Some(first) = fs.first() else {
        return Ok(PathIntegral {
            values: Vec::new(),
            arc_sweep: 0.0,
        });
    };
    let annulus = first.annulus();
    annulus.check(z0)?;
    annulus.check(z)?;

    let r0 = z0.norm();
    let theta0 = z0.arg();
    let mut sweep = z.arg() - theta0;
    if sweep > PI {
        sweep -= 2.0 * PI;
    } else if sweep <= -PI {
        sweep += 2.0 * PI;
    }
    let theta1 = theta0 + sweep;

    let mut total = vec![C64::new(0.0, 0.0); fs.len()];
    if sweep != 0.0 {
        let arc = composite(fs, theta0, theta1, |t| {
            let zeta = C64::from_polar(r0, t);
            (zeta, C64::new(0.0, 1.0) * zeta)
        })?;
        total.iter_mut().zip(arc).for_each(|(s, v)| *s += v);
    }
    let (s0, s1) = (r0.ln(), z.norm().ln());
    if s0 != s1 {
        let radial = composite(fs, s0, s1, |s| {
            let zeta = C64::from_polar(s.exp(), theta1);
            (zeta, zeta)
        })?;
        total.iter_mut().zip(radial).for_each(|(s, v)| *s += v);
    }
    Ok(PathIntegral {
        values: total,
        arc_sweep: sweep,
    })
}

/// [`path_integral_many`] for a triple `F = (φ₁, φ₂, φ₃)`.
pub fn path_integral(f: &[HoloFn; 3], z0: C64, z: C64) -> Result<([C64; 3], f64)> {
    let p = path_integral_many(f, z0, z)?;
    Ok(([p.values[0], p.values[1], p.values[2]], p.arc_sweep))
}
