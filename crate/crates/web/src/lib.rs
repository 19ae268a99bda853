//! Three entry points for the demo page. Each returns a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use minitube::extremal::{calibrate_candidate, EllipticParams};
use minitube::flux::{lifetime_bound, tilt_params};
use minitube::modulus::r0_bound;
use minitube::weierstrass::{tube_from_gauss, MinimalTube};
use minitube::{Annulus, HoloFn, C64};

#[derive(Serialize)]
pub struct TubeView {
    pub interval: [f64; 2],
    pub flux: [f64; 3],
    pub alpha: f64,
    pub lifetime: f64,
    pub bound: Option<f64>,
    /// One polyline per height, points `[x, y, u3]`.
    pub sections: Vec<Vec<[f64; 3]>>,
}

/// Sections of the tube with Gauss map `g` and `f = c/(2zg)` on `K_R`,
/// at `count` heights spread over the life interval.
pub fn tube_sections(g: &str, c: f64, r: f64, count: usize, points: usize) -> Result<TubeView, String> {
    let annulus = Annulus::new(r).map_err(|e| e.to_string())?;
    let g = HoloFn::parse(g, annulus).map_err(|e| e.to_string())?;
    let data = tube_from_gauss(&g, c).map_err(|e| e.to_string())?;
    let tube = MinimalTube::new(data).map_err(|e| e.to_string())?;
    let (t1, t2) = tube.life_interval();
    let q = tube.flux();
    let bound = lifetime_bound(&q);
    let mut sections = Vec::new();
    for k in 0..count.max(1) {
        let tau = t1 + (t2 - t1) * (k as f64 + 0.5) / count.max(1) as f64;
        sections.push(tube.section_polyline(tau, points).map_err(|e| e.to_string())?);
    }
    Ok(TubeView {
        interval: [t1, t2],
        flux: q.components(),
        alpha: tilt_params(&q).alpha,
        lifetime: t2 - t1,
        bound: (!bound.is_infinite()).then(|| bound.value()),
        sections,
    })
}

#[derive(Serialize)]
pub struct BoundView {
    /// `[λ, ln R₀(λ)]`.
    pub curve: Vec<[f64; 2]>,
    /// `[λ, ln R]` for calibrated slit candidates.
    pub candidates: Vec<[f64; 2]>,
}

/// `ln R₀` over a log-spaced λ grid, with the slit candidates for `q` in `[q_min, q_max]`.
pub fn bound_curve(lambda_min: f64, lambda_max: f64, steps: usize, q_min: f64, q_max: f64, q_steps: usize) -> Result<BoundView, String> {
    if !(lambda_min > 0.0 && lambda_max > lambda_min) || steps < 2 {
        return Err(format!("bad lambda range [{lambda_min}, {lambda_max}]"));
    }
    let (a, b) = (lambda_min.ln(), lambda_max.ln());
    let curve = (0..steps)
        .map(|k| {
            let l = (a + (b - a) * k as f64 / (steps - 1) as f64).exp();
            Ok([l, r0_bound(l).map_err(|e| e.to_string())?])
        })
        .collect::<Result<_, String>>()?;
    let mut candidates = Vec::new();
    for k in 0..q_steps {
        let q = if q_steps == 1 {
            q_min
        } else {
            q_min + (q_max - q_min) * k as f64 / (q_steps - 1) as f64
        };
        let Ok(p) = EllipticParams::new(q) else { continue };
        if let Ok(cal) = calibrate_candidate(&p) {
            candidates.push([cal.lambda, p.outer_radius().ln()]);
        }
    }
    Ok(BoundView { curve, candidates })
}

#[derive(Serialize)]
pub struct SlitView {
    pub lambda: f64,
    /// The image misses `(−∞, −slits[0]] ∪ [0, slits[1]]`.
    pub slits: [f64; 2],
    /// Images of circles `|z| = ρ`, points `[Re g, Im g]`.
    pub circles: Vec<Vec<[f64; 2]>>,
    /// Images of rays `arg z = t`.
    pub rays: Vec<Vec<[f64; 2]>>,
}

/// Image of a polar grid under the calibrated slit map at nome `q`.
pub fn slit_image(q: f64, radii: usize, rays: usize, points: usize) -> Result<SlitView, String> {
    let p = EllipticParams::new(q).map_err(|e| e.to_string())?;
    let cal = calibrate_candidate(&p).map_err(|e| e.to_string())?;
    let g = cal.candidate.g();
    let ln_r = p.outer_radius().ln();
    let eval = |z: C64| g.eval(z).ok().filter(|w| w.norm() < 1e6).map(|w| [w.re, w.im]);
    let circles = (0..radii)
        .map(|i| {
            let s = ln_r * (-0.98 + 1.96 * (i as f64 + 0.5) / radii as f64);
            (0..=points)
                .filter_map(|j| eval(C64::from_polar(s.exp(), 2.0 * std::f64::consts::PI * j as f64 / points as f64)))
                .collect()
        })
        .collect();
    let ray_lines = (0..rays)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / rays as f64;
            (0..=points)
                .filter_map(|j| eval(C64::from_polar((ln_r * (-0.98 + 1.96 * j as f64 / points as f64)).exp(), t)))
                .collect()
        })
        .collect();
    let (a, b) = cal.candidate.slits();
    Ok(SlitView {
        lambda: cal.lambda,
        slits: [a, b],
        circles,
        rays: ray_lines,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = tubeSections)]
pub fn tube_sections_js(g: &str, c: f64, r: f64, count: usize, points: usize) -> Result<String, JsValue> {
    to_js(tube_sections(g, c, r, count, points))
}

#[wasm_bindgen(js_name = boundCurve)]
pub fn bound_curve_js(lambda_min: f64, lambda_max: f64, steps: usize, q_min: f64, q_max: f64, q_steps: usize) -> Result<String, JsValue> {
    to_js(bound_curve(lambda_min, lambda_max, steps, q_min, q_max, q_steps))
}

#[wasm_bindgen(js_name = slitImage)]
pub fn slit_image_js(q: f64, radii: usize, rays: usize, points: usize) -> Result<String, JsValue> {
    to_js(slit_image(q, radii, rays, points))
}
