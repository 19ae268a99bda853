//! Weierstrass ℘ for the rectangular lattice `Z + τZ`, `τ = it`.

use std::f64::consts::PI;

use crate::contour::C64;
use crate::error::{Error, Result};
use crate::extremal::theta::{ThetaFrame, MAX_TERMS};

/// Largest nome accepted.
pub const Q_MAX: f64 = 0.95;
const LATTICE_EPS: f64 = 1e-10;

/// Lattice data for the nome `q = e^{iπτ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParams {
    frame: ThetaFrame,
    /// `θ₂(0), θ₃(0), θ₄(0)`.
    pub theta: [f64; 3],
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub g2: f64,
    pub g3: f64,
    /// `v = u/s` lives in the lattice `Z + τ_r Z`, `Q_r = e^{2πiτ_r}`.
    scale: C64,
    t_r: f64,
    big_q: f64,
}

impl EllipticParams {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q <= Q_MAX) {
            return Err(Error::InvalidArgument(format!(
                "nome must lie in (0, {Q_MAX}], got {q}"
            )));
        }
        let frame = ThetaFrame::new(q);
        let t = frame.t();
        let theta = frame.constants();
        let [t2, _, t4] = theta;
        let (a, b) = (t2.powi(4), t4.powi(4));
        let k = PI * PI / 3.0;
        // θ₃⁴ = θ₂⁴ + θ₄⁴
        let e1 = k * (a + 2.0 * b);
        let e2 = k * (a - b);
        let e3 = -k * (2.0 * a + b);
        let (scale, t_r) = if t >= 1.0 {
            (C64::new(1.0, 0.0), t)
        } else {
            (C64::new(0.0, t), 1.0 / t)
        };
        let big_q = (-2.0 * PI * t_r).exp();
        let (mut s4, mut s6) = (0.0, 0.0);
        for n in 1..=MAX_TERMS {
            let nf = n as f64;
            let qn = big_q.powi(n as i32);
            let c = qn / (1.0 - qn);
            s4 += nf.powi(3) * c;
            s6 += nf.powi(5) * c;
            if nf.powi(5) * c < 1e-18 {
                break;
            }
        }
        let e4 = 1.0 + 240.0 * s4;
        let e6 = 1.0 - 504.0 * s6;
        let g2 = (4.0 * PI.powi(4) / 3.0 * e4 / scale.powi(4)).re;
        let g3 = (8.0 * PI.powi(6) / 27.0 * e6 / scale.powi(6)).re;
        Ok(EllipticParams {
            frame,
            theta,
            e1,
            e2,
            e3,
            g2,
            g3,
            scale,
            t_r,
            big_q,
        })
    }

    pub fn q(&self) -> f64 {
        self.frame.q()
    }

    /// `(e₁ − e₂, e₂ − e₃) = (π²θ₄⁴, π²θ₂⁴)`, free of cancellation.
    pub fn gaps(&self) -> (f64, f64) {
        let [t2, _, t4] = self.theta;
        (PI * PI * t4.powi(4), PI * PI * t2.powi(4))
    }

    /// `t` with `τ = it`.
    pub fn t(&self) -> f64 {
        self.frame.t()
    }

    pub fn tau(&self) -> C64 {
        C64::new(0.0, self.t())
    }

    pub fn frame(&self) -> &ThetaFrame {
        &self.frame
    }

    /// Outer radius `R = q^{−1/2}` of the matching annulus.
    pub fn outer_radius(&self) -> f64 {
        self.q().powf(-0.5)
    }

    /// `u` reduced to `|Re u| ≤ 1/2`, `|Im u| ≤ t/2`.
    pub fn reduce(&self, u: C64) -> C64 {
        let t = self.t();
        C64::new(u.re - u.re.round(), u.im - t * (u.im / t).round())
    }

    fn reduced_arg(&self, u: C64) -> Result<C64> {
        let r = self.reduce(u);
        if r.norm() < LATTICE_EPS {
            return Err(Error::LatticePoint { u });
        }
        Ok(r / self.scale)
    }

    /// `℘(u)`.
    pub fn p(&self, u: C64) -> Result<C64> {
        let v = self.reduced_arg(u)?;
        let pv = PI * v;
        let csc = 1.0 / pv.sin();
        let mut acc = PI * PI * csc * csc - PI * PI / 3.0;
        let mut sum = C64::new(0.0, 0.0);
        for n in 1..=MAX_TERMS {
            let nf = n as f64;
            let qn = self.big_q.powi(n as i32);
            let s = (pv * nf).sin();
            let term = nf * qn / (1.0 - qn) * s * s;
            sum += term;
            if nf * qn * (2.0 * PI * nf * v.im.abs()).exp() < 1e-18 * sum.norm().max(1.0) {
                break;
            }
        }
        acc += 16.0 * PI * PI * sum;
        Ok(acc / (self.scale * self.scale))
    }

    /// `℘'(u)`.
    pub fn p_prime(&self, u: C64) -> Result<C64> {
        let v = self.reduced_arg(u)?;
        let pv = PI * v;
        let sn = pv.sin();
        let mut acc = -2.0 * PI.powi(3) * pv.cos() / (sn * sn * sn);
        let mut sum = C64::new(0.0, 0.0);
        for n in 1..=MAX_TERMS {
            let nf = n as f64;
            let qn = self.big_q.powi(n as i32);
            let term = nf * nf * qn / (1.0 - qn) * (pv * (2.0 * nf)).sin();
            sum += term;
            if nf * nf * qn * (2.0 * PI * nf * v.im.abs()).exp() < 1e-18 * sum.norm().max(1.0) {
                break;
            }
        }
        acc += 16.0 * PI.powi(3) * sum;
        Ok(acc / (self.scale * self.scale * self.scale))
    }

    /// `|℘'² − (4℘³ − g₂℘ − g₃)|` relative to the largest term.
    pub fn ode_residual(&self, u: C64) -> Result<f64> {
        let p = self.p(u)?;
        let dp = self.p_prime(u)?;
        let lhs = dp * dp;
        let rhs = 4.0 * p * p * p - self.g2 * p - self.g3;
        let size = lhs
            .norm()
            .max((4.0 * p * p * p).norm())
            .max((self.g2 * p).norm())
            .max(self.g3.abs());
        Ok((lhs - rhs).norm() / size)
    }

    /// Half-lattice reduced imaginary period, for diagnostics.
    pub fn reduced_ratio(&self) -> f64 {
        self.t_r
    }
}

/// `℘(u)` for the lattice of `params`.
pub fn weierstrass_p(u: C64, params: &EllipticParams) -> Result<C64> {
    params.p(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts() -> Vec<C64> {
        (0..50)
            .map(|k| {
                let a = (k as f64 * 0.6180339887).fract() - 0.5;
                let b = (k as f64 * 0.7548776662).fract() - 0.5;
                C64::new(a, b)
            })
            .collect()
    }

    #[test]
    fn branch_values() {
        for q in [0.01, 0.1, 0.5, 0.9] {
            let p = EllipticParams::new(q).unwrap();
            let s = p.e1.abs() + p.e2.abs() + p.e3.abs();
            assert!((p.e1 + p.e2 + p.e3).abs() < 1e-15 * s);
            let (d12, d23) = p.gaps();
            assert!(d12 > 0.0 && d23 > 0.0);
            assert!(p.e3 < p.e2 && p.e2 <= p.e1);
            assert!(((p.e1 - p.e2) - d12).abs() < 1e-14 * s);
            assert!(((p.e2 - p.e3) - d23).abs() < 1e-14 * s);
            let tau = p.tau();
            let half = [C64::new(0.5, 0.0), 0.5 * (1.0 + tau), 0.5 * tau];
            for (u, e) in half.iter().zip([p.e1, p.e2, p.e3]) {
                let v = p.p(*u).unwrap();
                assert!((v.re - e).abs() < 1e-12 * s, "q={q} u={u}: {v} vs {e}");
                assert!(v.im.abs() < 1e-12 * s);
            }
            assert!((p.g2 - 2.0 * (p.e1 * p.e1 + p.e2 * p.e2 + p.e3 * p.e3)).abs() < 1e-12 * p.g2.abs());
            assert!((p.g3 - 4.0 * p.e1 * p.e2 * p.e3).abs() < 1e-11 * s.powi(3));
        }
    }

    #[test]
    fn parity_period_and_ode() {
        for q in [0.02, 0.1, 0.5, 0.9] {
            let p = EllipticParams::new(q).unwrap();
            let t = p.t();
            for z in pts() {
                let u = C64::new(z.re, z.im * t);
                if p.reduce(u).norm() < 1e-3 {
                    continue;
                }
                let a = p.p(u).unwrap();
                let b = p.p(-u).unwrap();
                assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
                let c = p.p(u + 1.0).unwrap();
                assert!((a - c).norm() <= 1e-11 * a.norm().max(1.0));
                assert!(p.ode_residual(u).unwrap() < 1e-10, "q={q} u={u}");
            }
        }
    }

    #[test]
    fn lattice_points_rejected() {
        let p = EllipticParams::new(0.3).unwrap();
        assert!(matches!(p.p(C64::new(0.0, 0.0)), Err(Error::LatticePoint { .. })));
        assert!(matches!(p.p(C64::new(1.0, 0.0) + p.tau()), Err(Error::LatticePoint { .. })));
        assert!(EllipticParams::new(0.96).is_err());
        assert!(EllipticParams::new(0.0).is_err());
    }
}
