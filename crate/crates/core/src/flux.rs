//! Flow vector, tilt angle, life-time and the life-time bound.

use std::f64::consts::PI;

use crate::contour::{trapezoid_mean, univalence_probe, ProbeOptions, ProbeReport, Verdict, C64};
use crate::error::{Error, Result};
use crate::weierstrass::{circle_periods, enneper_f, MinimalTube, WeierstrassData};

/// `|w|` below this is treated as `α = 0`.
pub const TILT_ZERO: f64 = 1e-12;

/// Tolerance used by [`bound_report`].
pub const BOUND_TOL: f64 = 1e-8;

/// `Q = (J₁, J₂, J₃)` with `J₃ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxVector {
    j: [f64; 3],
}

impl FluxVector {
    pub fn new(j: [f64; 3]) -> Result<Self> {
        if !j.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite flux {j:?}")));
        }
        if j[2] <= 0.0 {
            return Err(Error::NonPositiveFlux { j3: j[2] });
        }
        Ok(FluxVector { j })
    }

    pub fn components(&self) -> [f64; 3] {
        self.j
    }

    pub fn j3(&self) -> f64 {
        self.j[2]
    }

    /// `w = (J₁ + iJ₂)/J₃`.
    pub fn w(&self) -> C64 {
        C64::new(self.j[0], self.j[1]) / self.j[2]
    }

    pub fn tan_alpha(&self) -> f64 {
        self.w().norm()
    }

    pub fn alpha(&self) -> f64 {
        self.tan_alpha().atan()
    }

    /// `arg w`, taken as 0 when `|w| < TILT_ZERO`.
    pub fn theta(&self) -> f64 {
        let w = self.w();
        if w.norm() < TILT_ZERO {
            0.0
        } else {
            w.arg()
        }
    }

    pub fn norm(&self) -> f64 {
        self.j.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        FluxVector::new(self.j.map(|v| v * s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltParams {
    pub w: C64,
    pub alpha: f64,
    pub theta: f64,
}

pub fn tilt_params(q: &FluxVector) -> TiltParams {
    TiltParams {
        w: q.w(),
        alpha: q.alpha(),
        theta: q.theta(),
    }
}

fn flux_from_periods(p: [C64; 3]) -> Result<FluxVector> {
    FluxVector::new([p[0].im, p[1].im, p[2].im])
}

/// `Q = Im ∮_{|z|=1} F` with `n_points` trapezoid nodes.
pub fn flux_vector(data: &WeierstrassData, n_points: usize) -> Result<FluxVector> {
    if n_points < 16 || !n_points.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "n_points must be even and >= 16, got {n_points}"
        )));
    }
    let triple = enneper_f(data);
    let mut p = [C64::new(0.0, 0.0); 3];
    for (slot, phi) in p.iter_mut().zip(&triple) {
        let mean = trapezoid_mean(|z| Ok(phi.eval(z)? * z), 1.0, n_points)?;
        *slot = C64::new(0.0, 2.0 * PI) * mean;
    }
    flux_from_periods(p)
}

/// `Q` on the circle `|z| = ρ`, adaptive rule.
pub fn flux_vector_at(data: &WeierstrassData, rho: f64) -> Result<FluxVector> {
    flux_from_periods(circle_periods(data, rho)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lifetime {
    /// `sup u₃ − inf u₃`.
    pub measured: f64,
    /// `J₃ ln R / π`.
    pub via_flux: f64,
}

impl Lifetime {
    pub fn residual(&self) -> f64 {
        (self.measured - self.via_flux).abs()
    }
}

pub fn lifetime(tube: &MinimalTube) -> Lifetime {
    let (t1, t2) = tube.life_interval();
    Lifetime {
        measured: t2 - t1,
        via_flux: tube.flux().j3() * tube.annulus().ln_r() / PI,
    }
}

/// An extended-real upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Infinite,
    Finite(f64),
}

impl Bound {
    pub fn value(&self) -> f64 {
        match self {
            Bound::Infinite => f64::INFINITY,
            Bound::Finite(v) => *v,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinite)
    }

    /// Whether `x ≤ self + tol`.
    pub fn admits(&self, x: f64, tol: f64) -> bool {
        match self {
            Bound::Infinite => true,
            Bound::Finite(b) => x <= b + tol,
        }
    }
}

/// `πJ₃ / arcsinh(tan α)`.
pub fn bound_asinh_form(q: &FluxVector) -> f64 {
    PI * q.j3() / q.tan_alpha().asinh()
}

/// `π‖Q‖ cos α / ln tan(π/4 + α/2)`.
pub fn bound_gudermann_form(q: &FluxVector) -> f64 {
    let a = q.alpha();
    PI * q.norm() * a.cos() / (PI / 4.0 + a / 2.0).tan().ln()
}

/// Upper bound for the life-time of a tube with flux `Q`.
pub fn lifetime_bound(q: &FluxVector) -> Bound {
    if q.tan_alpha() < TILT_ZERO {
        return Bound::Infinite;
    }
    let a = bound_asinh_form(q);
    let b = bound_gudermann_form(q);
    debug_assert!((a - b).abs() <= 1e-8 * a, "bound forms disagree: {a} vs {b}");
    Bound::Finite(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lifetime: Lifetime,
    pub bound: Bound,
    pub univalent: Verdict,
    pub omits_zero: Verdict,
    /// `false` when the probe found a certain violation of the hypotheses.
    pub hypothesis_ok: bool,
    /// `None` when the hypothesis failed.
    pub satisfied: Option<bool>,
    pub margin: f64,
}

/// Compares the measured life-time with the bound, given a probe of `g`.
pub fn bound_report(tube: &MinimalTube, probe: &ProbeReport) -> BoundReport {
    let lt = lifetime(tube);
    let bound = lifetime_bound(&tube.flux());
    let hypothesis_ok =
        probe.univalent != Verdict::Violated && probe.omits_zero != Verdict::Violated;
    let satisfied = hypothesis_ok.then(|| bound.admits(lt.measured, BOUND_TOL));
    BoundReport {
        lifetime: lt,
        bound,
        univalent: probe.univalent,
        omits_zero: probe.omits_zero,
        hypothesis_ok,
        satisfied,
        margin: bound.value() - lt.measured,
    }
}

/// [`bound_report`] after running the univalence probe on `g`.
pub fn bound_report_probed(tube: &MinimalTube, n_samples: usize) -> Result<BoundReport> {
    let probe = univalence_probe(tube.data().g(), n_samples, &ProbeOptions::default())?;
    Ok(bound_report(tube, &probe))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weierstrass::tube_from_gauss;
    use crate::{Annulus, HoloFn};

    fn tube(g: &str, r: f64, c: f64) -> MinimalTube {
        let g = HoloFn::parse(g, Annulus::new(r).unwrap()).unwrap();
        MinimalTube::new(tube_from_gauss(&g, c).unwrap()).unwrap()
    }

    #[test]
    fn tilt_examples() {
        let t = tilt_params(&FluxVector::new([0.0, 0.0, 2.0 * PI]).unwrap());
        assert_eq!(t.alpha, 0.0);
        assert_eq!(t.w, C64::new(0.0, 0.0));
        let t = tilt_params(&FluxVector::new([-2.0 * PI, 0.0, 2.0 * PI]).unwrap());
        assert!((t.w.norm() - 1.0).abs() < 1e-15);
        assert!((t.alpha - PI / 4.0).abs() < 1e-15);
        assert!((t.theta - PI).abs() < 1e-15);
        let t = tilt_params(&FluxVector::new([3.0, 4.0, 5.0]).unwrap());
        assert!((t.alpha - PI / 4.0).abs() < 1e-15);
        assert!(FluxVector::new([1.0, 0.0, 0.0]).is_err());
        assert!(FluxVector::new([1.0, 0.0, -1.0]).is_err());
    }

    #[test]
    fn bound_examples() {
        let q = FluxVector::new([0.0, 0.0, 2.0 * PI]).unwrap();
        assert_eq!(lifetime_bound(&q), Bound::Infinite);
        let q = FluxVector::new([-2.0 * PI, 0.0, 2.0 * PI]).unwrap();
        let b = lifetime_bound(&q).value();
        assert!((b - 2.0 * PI * PI / (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
        assert!((b - 22.3960).abs() < 1e-4);
        assert!(((3.0 * PI / 8.0).tan().ln() - 1f64.asinh()).abs() < 1e-15);
    }

    #[test]
    fn catenoid_flux_and_lifetime() {
        let t = tube("z", 2.0, 1.0);
        let q = t.flux().components();
        assert!(q[0].abs() < 1e-12 && q[1].abs() < 1e-12);
        assert!((q[2] - 2.0 * PI).abs() < 1e-12);
        let lt = lifetime(&t);
        assert!((lt.measured - 2.0 * 2f64.ln()).abs() < 1e-10);
        assert!((lt.via_flux - 2.0 * 2f64.ln()).abs() < 1e-12);

        let t2 = tube("z", 2.0, 2.0);
        assert!((lifetime(&t2).measured - 2.0 * lt.measured).abs() < 1e-9);
        let t4 = tube("z", 4.0, 1.0);
        assert!((lifetime(&t4).measured - 2.0 * lt.measured).abs() < 1e-9);

        let rep = bound_report_probed(&t, 16).unwrap();
        assert!(rep.bound.is_infinite());
        assert_eq!(rep.satisfied, Some(true));
    }

    #[test]
    fn mobius_tube_flux() {
        // a₀[g] = λ, a₀[1/g] = −λ: Q = (−2πλc, 0, 2πc)
        let lambda = 0.5;
        let t = tube("(z+0.5)/(1-0.5*z)", 1.8, 1.0);
        let q = t.flux().components();
        assert!((q[0] + 2.0 * PI * lambda).abs() < 1e-10, "{q:?}");
        assert!(q[1].abs() < 1e-10);
        assert!((q[2] - 2.0 * PI).abs() < 1e-10);
        let rep = bound_report_probed(&t, 32).unwrap();
        assert!(rep.hypothesis_ok);
        assert_eq!(rep.satisfied, Some(true));
        assert!(rep.margin > 0.0);
    }

    #[test]
    fn flux_is_radius_independent_and_homogeneous() {
        let a = Annulus::new(1.8).unwrap();
        let g = HoloFn::parse("(z+0.3)/(1-0.3*z)", a).unwrap();
        let data = tube_from_gauss(&g, 1.0).unwrap();
        let q1 = flux_vector_at(&data, 1.0).unwrap().components();
        let q2 = flux_vector_at(&data, 1.8f64.sqrt()).unwrap().components();
        for k in 0..3 {
            assert!((q1[k] - q2[k]).abs() < 1e-10);
        }
        for s in [0.5, 2.0, 10.0] {
            let qs = flux_vector(&data.scaled(s), 512).unwrap().components();
            let q = flux_vector(&data, 512).unwrap().components();
            for k in 0..3 {
                assert!((qs[k] - s * q[k]).abs() <= 1e-12 * s * q[2]);
            }
        }
    }
}
