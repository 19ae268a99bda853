//! Minimal tubes from Weierstrass–Enneper data on an annulus.
//!
//! A pair `(f, g)` gives `F = ((1 − g²)f, i(1 + g²)f, 2gf)` and the immersion
//! `u(z) = Re ∫_{z₀}^{z} F(ζ) dζ`. The data describe a tube over `K_R` when the
//! real periods `Re ∮_{|z|=1} F` vanish; the imaginary periods are the flux.

use std::f64::consts::PI;

use crate::contour::{
    circle_mean_auto, count_zeros, laurent_coeff_auto, path_integral, path_integral_many,
    trapezoid_mean, Annulus, Expr, HoloFn, ProbeOptions, C64,
};
use crate::error::{Error, Result};
use crate::flux::FluxVector;

/// Relative tolerance on the real periods: `max|defect| < PERIOD_TOL·(1 + ‖Q‖)`.
pub const PERIOD_TOL: f64 = 1e-8;

/// Weierstrass data `(f, g)` on a shared annulus.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    f: HoloFn,
    g: HoloFn,
    flux_constant: Option<f64>,
}

impl WeierstrassData {
    pub fn new(f: HoloFn, g: HoloFn) -> Result<Self> {
        if f.annulus() != g.annulus() {
            return Err(Error::InvalidArgument(
                "f and g must be defined on the same annulus".into(),
            ));
        }
        Ok(WeierstrassData {
            f,
            g,
            flux_constant: None,
        })
    }

    pub fn f(&self) -> &HoloFn {
        &self.f
    }

    pub fn g(&self) -> &HoloFn {
        &self.g
    }

    pub fn annulus(&self) -> Annulus {
        self.g.annulus()
    }

    /// The constant `c` with `2gf = c/z`, when built by [`tube_from_gauss`].
    pub fn flux_constant(&self) -> Option<f64> {
        self.flux_constant
    }

    /// Homothety by `s`: `f → s·f`.
    pub fn scaled(&self, s: f64) -> Self {
        WeierstrassData {
            f: self.f.scale(C64::new(s, 0.0)),
            g: self.g.clone(),
            flux_constant: self.flux_constant.map(|c| c * s),
        }
    }
}

/// `F = ((1 − g²)f, i(1 + g²)f, 2gf)` as composed expressions.
pub fn enneper_f(data: &WeierstrassData) -> [HoloFn; 3] {
    let a = data.annulus();
    let f = data.f.expr().clone();
    let g = data.g.expr().clone();
    let g2 = Expr::powi(g.clone(), 2);
    let one = || Expr::real(1.0);
    let phi1 = Expr::mul(Expr::sub(one(), g2.clone()), f.clone());
    let phi2 = Expr::mul(Expr::i(), Expr::mul(Expr::add(one(), g2), f.clone()));
    let phi3 = Expr::mul(Expr::mul(Expr::real(2.0), g), f);
    [
        HoloFn::new(phi1, a),
        HoloFn::new(phi2, a),
        HoloFn::new(phi3, a),
    ]
}

/// `Σ φᵢ(z)²`, zero for every triple produced by [`enneper_f`].
pub fn isotropy_defect(triple: &[HoloFn; 3], z: C64) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for phi in triple {
        let v = phi.eval(z)?;
        acc += v * v;
    }
    Ok(acc)
}

/// `∮_{|z|=ρ} φₖ dζ` for the three components, adaptive rule.
pub fn circle_periods(data: &WeierstrassData, rho: f64) -> Result<[C64; 3]> {
    let a = data.annulus();
    if !a.contains_radius(rho) {
        return Err(Error::InvalidArgument(format!(
            "radius {rho} is outside the annulus"
        )));
    }
    let triple = enneper_f(data);
    let mut out = [C64::new(0.0, 0.0); 3];
    for (slot, phi) in out.iter_mut().zip(&triple) {
        let q = circle_mean_auto(|z| Ok(phi.eval(z)? * z), rho)?;
        if !q.converged {
            log::warn!("period integral at rho={rho} did not converge in {} nodes", q.n_points);
        }
        *slot = C64::new(0.0, 2.0 * PI) * q.value;
    }
    Ok(out)
}

/// `(Re ∮φ₁, Re ∮φ₂, Re ∮φ₃)` over the unit circle with `n_points` nodes.
pub fn period_defect(data: &WeierstrassData, n_points: usize) -> Result<[f64; 3]> {
    if n_points < 16 || !n_points.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "n_points must be even and >= 16, got {n_points}"
        )));
    }
    let triple = enneper_f(data);
    let mut out = [0.0; 3];
    for (slot, phi) in out.iter_mut().zip(&triple) {
        let mean = trapezoid_mean(|z| Ok(phi.eval(z)? * z), 1.0, n_points)?;
        *slot = (C64::new(0.0, 2.0 * PI) * mean).re;
    }
    Ok(out)
}

/// Central Laurent coefficients `(a₀[g], a₀[1/g])` on the unit circle.
pub fn central_coefficients(g: &HoloFn) -> Result<(C64, C64)> {
    let a = laurent_coeff_auto(g, 0, 1.0)?;
    let b = laurent_coeff_auto(&g.recip(), 0, 1.0)?;
    if !(a.converged && b.converged) {
        log::warn!("central coefficients did not converge");
    }
    Ok((a.value, b.value))
}

/// Periods `∮_{|z|=1} F` for the data `f = c/(2zg)` predicted from the
/// central coefficients alone:
/// `∮φ₁ = iπc(a₀[1/g] − a₀[g])`, `∮φ₂ = −πc(a₀[1/g] + a₀[g])`, `∮φ₃ = 2πic`.
pub fn residue_periods(g: &HoloFn, c: f64) -> Result<[C64; 3]> {
    let (a0_g, a0_inv) = central_coefficients(g)?;
    Ok(residue_periods_from(a0_g, a0_inv, c))
}

pub fn residue_periods_from(a0_g: C64, a0_inv: C64, c: f64) -> [C64; 3] {
    let i = C64::new(0.0, 1.0);
    [
        i * PI * c * (a0_inv - a0_g),
        -PI * c * (a0_inv + a0_g),
        i * 2.0 * PI * c,
    ]
}

/// Builds `f = c/(2zg)` so that `2gf = c/z` and `J₃ = 2πc`.
pub fn tube_from_gauss(g: &HoloFn, c: f64) -> Result<WeierstrassData> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "flux constant c must be positive, got {c}"
        )));
    }
    match count_zeros(g, &ProbeOptions::default())? {
        Some(0) => {}
        Some(count) => return Err(Error::GaussVanishes { count }),
        None => log::warn!("zero count of g is inconclusive; continuing"),
    }
    let a = g.annulus();
    let den = Expr::mul(Expr::mul(Expr::real(2.0), Expr::Z), g.expr().clone());
    let f = HoloFn::new(Expr::div(Expr::real(c), den), a);
    Ok(WeierstrassData {
        f,
        g: g.clone(),
        flux_constant: Some(c),
    })
}

/// Relative step inside the boundary used to extrapolate `u₃` to `|z| = R^{±1}`.
const EDGE_STEPS: [f64; 2] = [1e-3, 2e-3];
const EDGE_ANGLES: usize = 8;

/// A minimal tube: Weierstrass data with base point `z₀ = 1` and its flux
/// and life interval computed at construction.
#[derive(Debug, Clone)]
pub struct MinimalTube {
    data: WeierstrassData,
    triple: [HoloFn; 3],
    base: C64,
    periods: [C64; 3],
    flux: FluxVector,
    interval: (f64, f64),
    closed: bool,
}

impl MinimalTube {
    /// Builds the tube, refusing data whose real periods do not vanish.
    pub fn new(data: WeierstrassData) -> Result<Self> {
        let tube = MinimalTube::new_unchecked(data)?;
        if !tube.closed {
            return Err(Error::NotATube {
                defect: tube.defect(),
                tol: tube.period_tolerance(),
            });
        }
        Ok(tube)
    }

    /// Builds the tube without the closure check; the immersion is then
    /// path dependent and [`MinimalTube::immerse`] logs a warning.
    pub fn new_unchecked(data: WeierstrassData) -> Result<Self> {
        let periods = circle_periods(&data, 1.0)?;
        let flux = FluxVector::new([periods[0].im, periods[1].im, periods[2].im])?;
        let triple = enneper_f(&data);
        let defect = [periods[0].re, periods[1].re, periods[2].re];
        let tol = PERIOD_TOL * (1.0 + flux.norm());
        let closed = defect.iter().all(|d| d.abs() < tol);
        let mut tube = MinimalTube {
            data,
            triple,
            base: C64::new(1.0, 0.0),
            periods,
            flux,
            interval: (0.0, 0.0),
            closed,
        };
        tube.interval = tube.measure_interval()?;
        Ok(tube)
    }

    pub fn data(&self) -> &WeierstrassData {
        &self.data
    }

    pub fn triple(&self) -> &[HoloFn; 3] {
        &self.triple
    }

    pub fn annulus(&self) -> Annulus {
        self.data.annulus()
    }

    pub fn base_point(&self) -> C64 {
        self.base
    }

    pub fn flux(&self) -> FluxVector {
        self.flux
    }

    pub fn periods(&self) -> [C64; 3] {
        self.periods
    }

    pub fn defect(&self) -> [f64; 3] {
        [self.periods[0].re, self.periods[1].re, self.periods[2].re]
    }

    pub fn period_tolerance(&self) -> f64 {
        PERIOD_TOL * (1.0 + self.flux.norm())
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// The life interval `(τ₁, τ₂)` of the third coordinate.
    pub fn life_interval(&self) -> (f64, f64) {
        self.interval
    }

    /// `u(z) = Re ∫_{z₀}^{z} F`.
    pub fn immerse(&self, z: C64) -> Result<[f64; 3]> {
        if !self.closed {
            log::warn!("immersing data with nonzero periods: result depends on the path");
        }
        let (v, _) = path_integral(&self.triple, self.base, z)?;
        Ok([v[0].re, v[1].re, v[2].re])
    }

    fn height(&self, z: C64) -> Result<f64> {
        let p = path_integral_many(std::slice::from_ref(&self.triple[2]), self.base, z)?;
        Ok(p.values[0].re)
    }

    /// Extreme values of `u₃` over a few angles on `|z| = r`.
    fn height_range(&self, r: f64) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..EDGE_ANGLES {
            let t = 2.0 * PI * (k as f64 + 0.25) / EDGE_ANGLES as f64;
            let h = self.height(C64::from_polar(r, t))?;
            lo = lo.min(h);
            hi = hi.max(h);
        }
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Unbounded);
        }
        Ok((lo, hi))
    }

    /// `sup u₃` near `|z| = R` and `inf u₃` near `|z| = 1/R`, each linearly
    /// extrapolated in `ln|z|` from two circles just inside the boundary.
    fn measure_interval(&self) -> Result<(f64, f64)> {
        let ln_r = self.annulus().ln_r();
        let [d1, d2] = EDGE_STEPS;
        let outer = |d: f64| self.height_range(((1.0 - d) * ln_r).exp()).map(|r| r.1);
        let inner = |d: f64| self.height_range((-(1.0 - d) * ln_r).exp()).map(|r| r.0);
        let extrapolate = |v1: f64, v2: f64| v1 + (v1 - v2) * d1 / (d2 - d1);
        let top = extrapolate(outer(d1)?, outer(d2)?);
        let bottom = extrapolate(inner(d1)?, inner(d2)?);
        if !(top.is_finite() && bottom.is_finite()) {
            return Err(Error::Unbounded);
        }
        Ok((bottom, top))
    }

    /// Midpoint-corrected log profile
    /// `(τ₁ + τ₂)/2 + (τ₂ − τ₁)·ln|z| / (2 ln R)`.
    pub fn height_profile(&self, z: C64) -> f64 {
        let (t1, t2) = self.interval;
        0.5 * (t1 + t2) + (t2 - t1) * z.norm().ln() / (2.0 * self.annulus().ln_r())
    }

    /// The section `u₃ = τ` as `n_points` samples of a closed curve.
    ///
    /// The radius comes from inverting the log profile; each sample is then
    /// corrected by Newton's method on `u₃(r e^{it}) = τ`.
    pub fn section_polyline(&self, tau: f64, n_points: usize) -> Result<Vec<[f64; 3]>> {
        let (t1, t2) = self.interval;
        if !(tau > t1 && tau < t2) {
            return Err(Error::OutsideLifeInterval {
                tau,
                lo: t1,
                hi: t2,
            });
        }
        if n_points < 3 {
            return Err(Error::InvalidArgument("a section needs at least 3 points".into()));
        }
        let ln_r = self.annulus().ln_r();
        let s0 = (tau - 0.5 * (t1 + t2)) * 2.0 * ln_r / (t2 - t1);
        let limit = ln_r * (1.0 - 1e-12);
        let phi3 = &self.triple[2];
        let mut out = Vec::with_capacity(n_points);
        for j in 0..n_points {
            let t = 2.0 * PI * j as f64 / n_points as f64;
            let mut s = s0.clamp(-limit, limit);
            for _ in 0..30 {
                let z = C64::from_polar(s.exp(), t);
                let residual = self.height(z)? - tau;
                if residual.abs() < 1e-12 * (1.0 + tau.abs()) {
                    break;
                }
                let slope = (phi3.eval(z)? * z).re;
                if slope == 0.0 {
                    break;
                }
                s = (s - residual / slope).clamp(-limit, limit);
            }
            out.push(self.immerse(C64::from_polar(s.exp(), t))?);
        }
        Ok(out)
    }
}
