//! Explicit Gauss maps tested against `a₀[g] = λ, a₀[1/g] = −λ`.

use crate::contour::{count_zeros, laurent_coeff_auto, Annulus, Expr, HoloFn, ProbeOptions, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub g: HoloFn,
    pub lambda: f64,
    /// `(a, κ)` for the Joukowski family, `(λ, 0)` for the Möbius family.
    pub params: (f64, f64),
    /// `|a₀[g] − λ| + |a₀[1/g] + λ|`.
    pub residual: f64,
}

/// `|a₀[g] − λ| + |a₀[1/g] + λ|` on the unit circle.
pub fn condition_residual(g: &HoloFn, lambda: f64) -> Result<f64> {
    let a = laurent_coeff_auto(g, 0, 1.0)?.value;
    let b = laurent_coeff_auto(&g.recip(), 0, 1.0)?.value;
    Ok((a - lambda).norm() + (b + lambda).norm())
}

fn check(lambda: f64, r: f64) -> Result<Annulus> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    Annulus::new(r)
}

/// `g = λ + a(z + κ/z)`.
pub fn joukowski_gauss(lambda: f64, a: C64, kappa: C64, annulus: Annulus) -> HoloFn {
    let inner = Expr::add(Expr::Z, Expr::div(Expr::constant(kappa), Expr::Z));
    HoloFn::new(
        Expr::add(Expr::real(lambda), Expr::mul(Expr::constant(a), inner)),
        annulus,
    )
}

/// `g = (z + λ)/(1 − λz)`: `a₀[g] = λ`, `a₀[1/g] = −λ` exactly.
pub fn mobius_gauss(lambda: f64, annulus: Annulus) -> HoloFn {
    HoloFn::new(
        Expr::div(
            Expr::add(Expr::Z, Expr::real(lambda)),
            Expr::sub(Expr::real(1.0), Expr::mul(Expr::real(lambda), Expr::Z)),
        ),
        annulus,
    )
}

/// The Möbius family on `K_R`; requires `λR < 1` so that the zero `−λ`
/// and the pole `1/λ` stay off the annulus.
pub fn mobius_family(lambda: f64, r: f64) -> Result<FamilyMember> {
    let annulus = check(lambda, r)?;
    if lambda * r >= 1.0 {
        return Err(Error::ZeroInAnnulus);
    }
    let g = mobius_gauss(lambda, annulus);
    let residual = condition_residual(&g, lambda)?;
    Ok(FamilyMember {
        g,
        lambda,
        params: (lambda, 0.0),
        residual,
    })
}

const KAPPA_STEPS: usize = 9;
const A_STEPS: usize = 160;

/// Searches `g = λ + a(z + κ/z)` with real `a` and `|κ| < 1/R²` for
/// `a₀[1/g] = −λ`. For each `κ` on a grid the residual `Re a₀[1/g] + λ` is
/// scanned over a logarithmic grid of `a` of both signs, and sign changes
/// are refined by bisection. A root is accepted only if `g` has no zero in
/// the annulus.
pub fn joukowski_family(lambda: f64, r: f64) -> Result<FamilyMember> {
    let annulus = check(lambda, r)?;
    let kmax = 1.0 / (r * r);
    let residual = |a: f64, kappa: f64| -> Option<f64> {
        let g = joukowski_gauss(lambda, C64::new(a, 0.0), C64::new(kappa, 0.0), annulus);
        let b = laurent_coeff_auto(&g.recip(), 0, 1.0).ok()?;
        b.converged.then_some(b.value.re + lambda)
    };
    let mut best = f64::INFINITY;
    let mut zero_hit = false;
    for ik in 0..KAPPA_STEPS {
        let kappa = kmax * (2.0 * (ik as f64 + 0.5) / KAPPA_STEPS as f64 - 1.0);
        for sign in [1.0, -1.0] {
            let grid: Vec<f64> = (0..A_STEPS)
                .map(|j| sign * lambda * 10f64.powf(-4.0 + 8.0 * j as f64 / (A_STEPS - 1) as f64))
                .collect();
            let mut prev: Option<(f64, f64)> = None;
            for &a in &grid {
                let Some(v) = residual(a, kappa) else {
                    prev = None;
                    continue;
                };
                best = best.min(v.abs());
                if let Some((pa, pv)) = prev {
                    if pv.signum() != v.signum() {
                        let (mut lo, mut hi, mut flo) = (pa, a, pv);
                        let mut ok = true;
                        for _ in 0..100 {
                            let mid = 0.5 * (lo + hi);
                            let Some(fm) = residual(mid, kappa) else {
                                ok = false;
                                break;
                            };
                            if fm.signum() == flo.signum() {
                                lo = mid;
                                flo = fm;
                            } else {
                                hi = mid;
                            }
                        }
                        let a_root = 0.5 * (lo + hi);
                        let Some(fr) = residual(a_root, kappa).filter(|_| ok) else {
                            continue;
                        };
                        best = best.min(fr.abs());
                        // a jump across a zero on the unit circle is not a root
                        if fr.abs() > 1e-9 {
                            continue;
                        }
                        let g = joukowski_gauss(
                            lambda,
                            C64::new(a_root, 0.0),
                            C64::new(kappa, 0.0),
                            annulus,
                        );
                        match count_zeros(&g, &ProbeOptions::default()) {
                            Ok(Some(0)) => {
                                let residual = condition_residual(&g, lambda)?;
                                return Ok(FamilyMember {
                                    g,
                                    lambda,
                                    params: (a_root, kappa),
                                    residual,
                                });
                            }
                            _ => zero_hit = true,
                        }
                    }
                }
                prev = Some((a, v));
            }
        }
    }
    if zero_hit {
        return Err(Error::ZeroInAnnulus);
    }
    Err(Error::NoSolution {
        reason: format!("no real (a, kappa) with a0[1/g] = -{lambda} on K_{r}"),
        best_residual: best,
    })
}
