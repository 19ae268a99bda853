//! The two-slit map of `K_R` and its calibration.
//!
//! With `u = log(ζ√q)/(2πi)` the annulus `K_R`, `R = q^{−1/2}`, becomes the
//! half-strip `0 < Im u < t/2`, on which `℘` is univalent. The base map is
//! `g₀ = e₂ − ℘(u) = −π²θ₂²θ₄²·(θ₃(πu)/θ₁(πu))²`; its boundary circles go to
//! `(−∞, −π²θ₄⁴]` and `[0, π²θ₂⁴]`. Scaling by `s` moves the slits to
//! `(−∞, −α]` and `[0, β]`; the configuration is invariant under `w ↦ −1/w`
//! when `αβ = 1`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::contour::{laurent_coeff_auto, Annulus, Expr, HoloFn, Kernel, C64};
use crate::error::{Error, EvalError, Result};
use crate::extremal::elliptic::EllipticParams;
use crate::extremal::theta::ThetaFrame;
use crate::modulus::r0_bound;

/// `−k·(θ₃(πu)/θ₁(πu))²` as a function of `ζ`, or its `ζ`-derivative.
#[derive(Debug, Clone)]
struct SlitKernel {
    frame: ThetaFrame,
    k: f64,
    derivative: bool,
}

impl SlitKernel {
    fn u(&self, zeta: C64) -> C64 {
        // log(ζ√q) / (2πi)
        let l = zeta.ln() + 0.5 * self.frame.q().ln();
        C64::new(l.im, -l.re) / (2.0 * PI)
    }
}

impl Kernel for SlitKernel {
    fn name(&self) -> &str {
        if self.derivative {
            "slit'"
        } else {
            "slit"
        }
    }

    fn eval(&self, zeta: C64) -> Result<C64, EvalError> {
        if zeta.norm() == 0.0 {
            return Err(EvalError::DivisionByZero { z: zeta });
        }
        let (quot, logd) = self.frame.quotient(PI * self.u(zeta));
        let g = -self.k * quot * quot;
        let v = if self.derivative {
            g * logd / (C64::new(0.0, 1.0) * zeta)
        } else {
            g
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { z: zeta })
        }
    }

    fn derivative(&self) -> Option<Arc<dyn Kernel>> {
        if self.derivative {
            None
        } else {
            Some(Arc::new(SlitKernel {
                derivative: true,
                ..self.clone()
            }))
        }
    }
}

/// `s·(e₂ − ℘)` on `K_R` together with its slit data.
#[derive(Debug, Clone)]
pub struct SlitMapCandidate {
    params: EllipticParams,
    scale: f64,
    g: HoloFn,
}

impl SlitMapCandidate {
    pub fn new(params: EllipticParams, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Calibration(format!("scale {scale} is not a positive real")));
        }
        let [t2, _, t4] = params.theta;
        let k = scale * PI * PI * t2 * t2 * t4 * t4;
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Calibration(format!(
                "degenerate branch values at q = {}",
                params.q()
            )));
        }
        let annulus = Annulus::new(params.outer_radius())?;
        let kernel = SlitKernel {
            frame: *params.frame(),
            k,
            derivative: false,
        };
        Ok(SlitMapCandidate {
            params,
            scale,
            g: HoloFn::new(Expr::kernel(Arc::new(kernel)), annulus),
        })
    }

    pub fn g(&self) -> &HoloFn {
        &self.g
    }

    pub fn params(&self) -> &EllipticParams {
        &self.params
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn annulus(&self) -> Annulus {
        self.g.annulus()
    }

    /// `(α, β)`: the image misses `(−∞, −α] ∪ [0, β]`.
    pub fn slits(&self) -> (f64, f64) {
        let [t2, _, t4] = self.params.theta;
        let k = self.scale * PI * PI;
        (k * t4.powi(4), k * t2.powi(4))
    }

    /// `(a₀[g], a₀[1/g])` on the unit circle.
    pub fn coefficients(&self) -> Result<(C64, C64)> {
        let a = laurent_coeff_auto(&self.g, 0, 1.0)?;
        let b = laurent_coeff_auto(&self.g.recip(), 0, 1.0)?;
        if !(a.converged && b.converged) {
            log::warn!("central coefficients at q = {} did not converge", self.params.q());
        }
        Ok((a.value, b.value))
    }
}

/// The scale that makes the slits symmetric under `w ↦ −1/w`.
pub fn symmetric_scale(params: &EllipticParams) -> f64 {
    let [t2, _, t4] = params.theta;
    1.0 / (PI * PI * t2 * t2 * t4 * t4)
}

/// The slit map normalized so that its slits are `(−∞, −α] ∪ [0, 1/α]`.
pub fn slit_annulus_map(params: &EllipticParams) -> Result<SlitMapCandidate> {
    SlitMapCandidate::new(*params, symmetric_scale(params))
}

#[derive(Debug, Clone)]
pub struct Calibration {
    pub candidate: SlitMapCandidate,
    /// `a₀[g]`.
    pub lambda: f64,
    /// `|a₀[1/g] + a₀[g]| / |a₀[g]|`.
    pub residual: f64,
    pub a0_g: C64,
    pub a0_inv: C64,
}

const SIGMA_LIMIT: f64 = 700.0;

fn secant_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    // Illinois variant of regula falsi
    let (mut fa, mut fb) = (f(a), f(b));
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() < 1e-15 * (1.0 + c.abs()) {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// Solves for the scale `s` with `a₀[1/g] = −a₀[g]`, `g = s·(e₂ − ℘)`.
///
/// The unknown is `σ = ln s`; the residual
/// `(e^σ A + e^{−σ} B)/(|e^σ A| + |e^{−σ} B|)` is bracketed and then
/// refined by regula falsi, with `A`, `B` the coefficients at `s = 1`.
pub fn calibrate_candidate(params: &EllipticParams) -> Result<Calibration> {
    let base = SlitMapCandidate::new(*params, 1.0)?;
    let (a0, b0) = base.coefficients()?;
    let (a, b) = (a0.re, b0.re);
    let r = |sigma: f64| {
        let x = sigma.exp() * a;
        let y = (-sigma).exp() * b;
        (x + y) / (x.abs() + y.abs())
    };
    let (mut lo, mut hi) = (0.0, 0.0);
    let mut step = 1.0;
    while r(lo).signum() == r(hi).signum() {
        lo -= step;
        hi += step;
        step *= 2.0;
        if lo < -SIGMA_LIMIT || hi > SIGMA_LIMIT || !(r(lo).is_finite() && r(hi).is_finite()) {
            return Err(Error::Calibration(format!(
                "no sign change of the coefficient residual at q = {} (a0[g0] = {a:e}, a0[1/g0] = {b:e})",
                params.q()
            )));
        }
    }
    let sigma = secant_root(r, lo, hi);
    let candidate = SlitMapCandidate::new(*params, sigma.exp())?;
    let (a0_g, a0_inv) = candidate.coefficients()?;
    let lambda = a0_g.re;
    if !(lambda > 0.0) {
        return Err(Error::Calibration(format!("calibrated a0[g] = {lambda} is not positive")));
    }
    Ok(Calibration {
        residual: (a0_inv + a0_g).norm() / a0_g.norm(),
        candidate,
        lambda,
        a0_g,
        a0_inv,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub q: f64,
    pub r: f64,
    pub lambda: f64,
    pub ln_r: f64,
    pub ln_r0: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Rows that could not be calibrated, with the reason.
    pub failures: Vec<(f64, String)>,
}

pub fn conjecture_row(q: f64) -> Result<SweepRow> {
    if !(q > 0.02 && q <= 0.95) {
        return Err(Error::InvalidArgument(format!("q must lie in (0.02, 0.95], got {q}")));
    }
    let params = EllipticParams::new(q)?;
    let cal = calibrate_candidate(&params)?;
    let r = params.outer_radius();
    let ln_r = r.ln();
    let ln_r0 = r0_bound(cal.lambda)?;
    Ok(SweepRow {
        q,
        r,
        lambda: cal.lambda,
        ln_r,
        ln_r0,
        ratio: ln_r / ln_r0,
    })
}

/// One calibrated candidate per nome, in grid order.
pub fn conjecture_sweep(q_grid: &[f64]) -> Result<SweepTable> {
    if q_grid.is_empty() {
        return Err(Error::InvalidArgument("empty q grid".into()));
    }
    let mut table = SweepTable::default();
    for &q in q_grid {
        match conjecture_row(q) {
            Ok(row) => table.rows.push(row),
            Err(e) => {
                log::warn!("sweep row q={q} skipped: {e}");
                table.failures.push((q, e.to_string()));
            }
        }
    }
    Ok(table)
}
