//! Zero-omission and univalence probes built on the argument principle.
//!
//! Both probes integrate `g'/(g − w)` over two circles just inside the
//! boundary of the annulus. A preimage count of two or more is a certain
//! violation of univalence; a count of one for every sampled target is only
//! sampling evidence.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::contour::{HoloFn, C64, DEFAULT_NODES, MAX_NODES};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Passed,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Copy)]
pub struct ProbeOptions {
    /// Probe circles sit at `R^{±(1 - rim)}`.
    pub rim: f64,
    /// Perturbed-radius retries when `g` vanishes on a probe circle.
    pub retries: usize,
    /// Largest distance from an integer accepted for a winding count.
    pub count_tol: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            rim: 0.05,
            retries: 3,
            count_tol: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub univalent: Verdict,
    pub witness: Option<(C64, C64)>,
    pub omits_zero: Verdict,
    pub zero_count: Option<i64>,
    pub probe_radii: (f64, f64),
    pub n_points: usize,
    pub samples: usize,
    pub inconclusive_samples: usize,
}

/// Values of `g` and `g'` at the nodes of one probe circle.
struct Ring {
    z: Vec<C64>,
    g: Vec<C64>,
    dg: Vec<C64>,
}

impl Ring {
    fn sample(g: &HoloFn, dg: &HoloFn, rho: f64, n: usize) -> Result<Ring> {
        let mut ring = Ring {
            z: Vec::with_capacity(n),
            g: Vec::with_capacity(n),
            dg: Vec::with_capacity(n),
        };
        for j in 0..n {
            let z = C64::from_polar(rho, 2.0 * PI * j as f64 / n as f64);
            ring.g.push(g.eval(z)?);
            ring.dg.push(dg.eval(z)?);
            ring.z.push(z);
        }
        let max = ring.g.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let min = ring.g.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if min == 0.0 || min < 1e-12 * max {
            return Err(Error::VanishesOnCircle { radius: rho });
        }
        Ok(ring)
    }

    /// `(1/2πi)∮ ζ^p g'/(g − w) dζ` using every `stride`-th node.
    fn moment(&self, w: C64, p: i32, stride: usize) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        let mut count = 0;
        for j in (0..self.z.len()).step_by(stride) {
            let z = self.z[j];
            acc += self.dg[j] * z.powi(p + 1) / (self.g[j] - w);
            count += 1;
        }
        acc / count as f64
    }
}

struct Probe {
    outer: Ring,
    inner: Ring,
    radii: (f64, f64),
    n: usize,
}

impl Probe {
    fn build(g: &HoloFn, opts: &ProbeOptions) -> Result<Probe> {
        let dg = g.derivative()?;
        let ln_r = g.annulus().ln_r();
        let mut rim = opts.rim;
        let mut last = None;
        for _ in 0..=opts.retries {
            let r_out = ((1.0 - rim) * ln_r).exp();
            let r_in = 1.0 / r_out;
            match Probe::at_radii(g, &dg, r_in, r_out) {
                Ok(p) => return Ok(p),
                Err(e @ Error::VanishesOnCircle { .. }) => {
                    log::debug!("{e}; perturbing probe radius");
                    last = Some(e);
                    rim *= 0.7;
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap())
    }

    fn at_radii(g: &HoloFn, dg: &HoloFn, r_in: f64, r_out: f64) -> Result<Probe> {
        let mut n = DEFAULT_NODES;
        loop {
            let probe = Probe {
                outer: Ring::sample(g, dg, r_out, n)?,
                inner: Ring::sample(g, dg, r_in, n)?,
                radii: (r_in, r_out),
                n,
            };
            let w0 = C64::new(0.0, 0.0);
            let full = probe.count(w0, 0, 1);
            let half = probe.count(w0, 0, 2);
            let settled = (full - half).norm() < 1e-6
                && (probe.outer.moment(w0, 0, 1) - probe.outer.moment(w0, 0, 2)).norm() < 1e-6;
            if settled || n >= MAX_NODES {
                return Ok(probe);
            }
            n *= 2;
        }
    }

    fn count(&self, w: C64, p: i32, stride: usize) -> C64 {
        self.outer.moment(w, p, stride) - self.inner.moment(w, p, stride)
    }

    /// Rounded preimage count of `w`, or `None` when the integral is not
    /// close to an integer at both resolutions.
    fn preimages(&self, w: C64, tol: f64) -> Option<i64> {
        let full = self.count(w, 0, 1);
        let half = self.count(w, 0, 2);
        let k = full.re.round();
        let off = (full - k).norm();
        if off > tol || (full - half).norm() > tol {
            return None;
        }
        Some(k as i64)
    }
}

fn nearest_integer(x: C64, tol: f64) -> Option<i64> {
    let k = x.re.round();
    ((x - k).norm() <= tol).then_some(k as i64)
}

/// Number of zeros of `g` in the annulus (outer winding minus inner winding).
///
/// `Ok(None)` when the winding integrals do not settle on integers.
pub fn count_zeros(g: &HoloFn, opts: &ProbeOptions) -> Result<Option<i64>> {
    let probe = Probe::build(g, opts)?;
    Ok(nearest_integer(
        probe.count(C64::new(0.0, 0.0), 0, 1),
        opts.count_tol,
    ))
}

/// Roots of the monic polynomial with the given power sums (Newton
/// identities followed by Durand–Kerner).
fn roots_from_power_sums(p: &[C64]) -> Vec<C64> {
    let m = p.len();
    let mut e = vec![C64::new(1.0, 0.0)];
    for k in 1..=m {
        let mut acc = C64::new(0.0, 0.0);
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * p[i - 1];
        }
        e.push(acc / k as f64);
    }
    // x^m - e1 x^{m-1} + e2 x^{m-2} - ...
    let coeff: Vec<C64> = (0..=m)
        .map(|k| if k % 2 == 0 { e[k] } else { -e[k] })
        .collect();
    let poly = |x: C64| coeff.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c);

    let scale = p.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut r: Vec<C64> = (0..m).map(|k| seed.powi(k as i32) * scale).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..m {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..m {
                if i != j {
                    den *= r[i] - r[j];
                }
            }
            let step = poly(r[i]) / den;
            r[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * scale {
            break;
        }
    }
    r
}

fn newton_polish(g: &HoloFn, dg: &HoloFn, w: C64, mut z: C64) -> Option<C64> {
    for _ in 0..50 {
        let f = g.eval(z).ok()? - w;
        let d = dg.eval(z).ok()?;
        if d.norm() == 0.0 {
            return None;
        }
        let step = f / d;
        z -= step;
        if step.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    Some(z)
}

/// Probes `g` for zero omission and univalence on its annulus.
///
/// Targets `w = g(z_s)` are taken at `n_samples` points spread over the
/// probe annulus on a golden-angle spiral.
pub fn univalence_probe(g: &HoloFn, n_samples: usize, opts: &ProbeOptions) -> Result<ProbeReport> {
    let probe = Probe::build(g, opts)?;
    let dg = g.derivative()?;
    let annulus = g.annulus();

    let zero_count = nearest_integer(probe.count(C64::new(0.0, 0.0), 0, 1), opts.count_tol);
    let omits_zero = match zero_count {
        Some(0) => Verdict::Passed,
        Some(_) => Verdict::Violated,
        None => Verdict::Inconclusive,
    };

    let (r_in, r_out) = probe.radii;
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let mut witness = None;
    let mut violated = false;
    let mut inconclusive = 0;
    for s in 0..n_samples {
        let frac = (s as f64 + 0.5) / n_samples as f64;
        let rho = (r_in.ln() + frac * (r_out.ln() - r_in.ln())).exp();
        let theta = 2.0 * PI * ((s as f64 * golden).fract());
        let zs = C64::from_polar(rho, theta);
        let Ok(w) = g.eval(zs) else {
            inconclusive += 1;
            continue;
        };
        match probe.preimages(w, opts.count_tol) {
            Some(k) if k >= 2 => {
                violated = true;
                let sums: Vec<C64> = (1..=k as i32).map(|p| probe.count(w, p, 1)).collect();
                let mut roots: Vec<C64> = roots_from_power_sums(&sums)
                    .into_iter()
                    .filter_map(|z| newton_polish(g, &dg, w, z))
                    .filter(|z| annulus.contains(*z))
                    .collect();
                roots.sort_by(|a, b| (a - zs).norm().total_cmp(&(b - zs).norm()));
                if let (Some(a), Some(b)) = (roots.first(), roots.last()) {
                    if (a - b).norm() > 1e-8 {
                        witness = Some((*a, *b));
                    }
                }
                break;
            }
            Some(1) => {}
            _ => inconclusive += 1,
        }
    }

    let univalent = if violated {
        Verdict::Violated
    } else if inconclusive == n_samples {
        Verdict::Inconclusive
    } else {
        Verdict::Passed
    };
    Ok(ProbeReport {
        univalent,
        witness,
        omits_zero,
        zero_count,
        probe_radii: probe.radii,
        n_points: probe.n,
        samples: n_samples,
        inconclusive_samples: inconclusive,
    })
}
