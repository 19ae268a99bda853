//! Jacobi theta functions for a real nome `q = e^{−πt}`.
//!
//! Series are summed directly when `t ≥ 1`; otherwise the imaginary
//! transformation moves the evaluation to the nome `q' = e^{−π/t}`.

use std::f64::consts::PI;

use crate::contour::C64;

/// Hard cap on series terms.
pub const MAX_TERMS: usize = 200;
const REL_EPS: f64 = 1e-17;

/// `(θ₁, θ₁', θ₃, θ₃')` at `(z | q)` by direct summation.
pub fn theta13(z: C64, q: f64) -> (C64, C64, C64, C64) {
    let zero = C64::new(0.0, 0.0);
    let (mut t1, mut d1) = (zero, zero);
    let (mut t3, mut d3) = (C64::new(1.0, 0.0), zero);
    let y = z.im.abs();
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let m = 2.0 * nf + 1.0;
        let a = sign * 2.0 * q.powf((nf + 0.5) * (nf + 0.5));
        t1 += a * (z * m).sin();
        d1 += a * m * (z * m).cos();
        let mut bound = a.abs() * (1.0 + m) * (m * y).exp();
        if n >= 1 {
            let k = 2.0 * nf;
            let b = 2.0 * q.powf(nf * nf);
            t3 += b * (z * k).cos();
            d3 -= b * k * (z * k).sin();
            bound += b * (1.0 + k) * (k * y).exp();
        }
        let size = t1.norm() + d1.norm() + t3.norm() + d3.norm();
        if n >= 1 && bound <= REL_EPS * size {
            break;
        }
    }
    (t1, d1, t3, d3)
}

/// `(θ₂(0), θ₃(0), θ₄(0))` by direct summation.
fn constants_direct(q: f64) -> [f64; 3] {
    let (mut t2, mut t3, mut t4) = (0.0, 1.0, 1.0);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let a = 2.0 * q.powf((nf + 0.5) * (nf + 0.5));
        t2 += a;
        if n >= 1 {
            let b = 2.0 * q.powf(nf * nf);
            t3 += b;
            t4 += if n % 2 == 0 { b } else { -b };
            if b <= REL_EPS * t4.abs().min(t3) && a <= REL_EPS * t2 {
                break;
            }
        }
    }
    [t2, t3, t4]
}

/// Theta functions at a fixed nome, with the frame chosen for accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaFrame {
    q: f64,
    t: f64,
    transformed: bool,
    /// `q` or `q' = e^{−π/t}`.
    nome: f64,
}

impl ThetaFrame {
    /// Panics unless `0 < q < 1`.
    pub fn new(q: f64) -> Self {
        assert!(q > 0.0 && q < 1.0, "nome must lie in (0, 1)");
        let t = -q.ln() / PI;
        let transformed = t < 1.0;
        let nome = if transformed { (-PI / t).exp() } else { q };
        ThetaFrame {
            q,
            t,
            transformed,
            nome,
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `t = −ln q/π`, so that `τ = it`.
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn is_transformed(&self) -> bool {
        self.transformed
    }

    /// `(θ₂, θ₃, θ₄)` at `z = 0`.
    pub fn constants(&self) -> [f64; 3] {
        if !self.transformed {
            return constants_direct(self.q);
        }
        let [a2, a3, a4] = constants_direct(self.nome);
        let k = 1.0 / self.t.sqrt();
        [a4 * k, a3 * k, a2 * k]
    }

    /// `θ₃(z)/θ₁(z)` and its logarithmic derivative `θ₃'/θ₃ − θ₁'/θ₁`.
    pub fn quotient(&self, z: C64) -> (C64, C64) {
        if !self.transformed {
            let (t1, d1, t3, d3) = theta13(z, self.q);
            return (t3 / t1, d3 / t3 - d1 / t1);
        }
        let i = C64::new(0.0, 1.0);
        let w = -i * z / self.t;
        let (t1, d1, t3, d3) = theta13(w, self.nome);
        (-i * t3 / t1, -i / self.t * (d3 / t3 - d1 / t1))
    }
}
