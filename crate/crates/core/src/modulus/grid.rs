//! Conductance of a ring domain on a cell-centred grid.
//!
//! The potential is 0 on the first boundary component and 1 on the second.
//! Grid links that cross the boundary are shortened to the crossing point
//! (found by bisection on the membership predicate); links leaving the
//! bounding box are dropped, so the box edges are insulating. The Dirichlet
//! energy of the discrete harmonic potential is the module of the joining
//! family.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::contour::C64;
use crate::error::{Error, Result};
use crate::modulus::{joining_family_module, mod_gamma_d};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryLabel {
    First,
    Second,
}

/// JSON descriptor of the built-in ring domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DomainDescriptor {
    /// `{1 < |w| < ratio}`; the unit circle is the first component.
    #[serde(rename = "annulus")]
    Annulus { ratio: f64 },
    /// `{Re z < λ, |z + 1/(2λ)| > 1/(2λ)}`; the circle is the first component.
    #[serde(rename = "D")]
    D { lambda: f64 },
    /// `(0, width) × [0, height]` with the left side first, the right side
    /// second and insulating top and bottom.
    #[serde(rename = "box_conductor")]
    BoxConductor { width: f64, height: f64 },
}

type Pred = Arc<dyn Fn(C64) -> bool + Send + Sync>;
type Labeler = Arc<dyn Fn(C64) -> BoundaryLabel + Send + Sync>;

/// A doubly connected domain given by a membership predicate, a bounding
/// box `[x₀, x₁] × [y₀, y₁]` and a labelling of boundary points.
#[derive(Clone)]
pub struct RingDomain {
    member: Pred,
    label: Labeler,
    bbox: [f64; 4],
    exact: Option<f64>,
    gap: Option<f64>,
    descriptor: Option<DomainDescriptor>,
    box_scale: f64,
}

impl fmt::Debug for RingDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingDomain")
            .field("bbox", &self.bbox)
            .field("exact", &self.exact)
            .field("descriptor", &self.descriptor)
            .finish()
    }
}

impl RingDomain {
    pub fn new(
        member: impl Fn(C64) -> bool + Send + Sync + 'static,
        label: impl Fn(C64) -> BoundaryLabel + Send + Sync + 'static,
        bbox: [f64; 4],
    ) -> Result<Self> {
        let [x0, x1, y0, y1] = bbox;
        if !(bbox.iter().all(|v| v.is_finite()) && x1 > x0 && y1 > y0) {
            return Err(Error::InvalidArgument(format!("degenerate bounding box {bbox:?}")));
        }
        Ok(RingDomain {
            member: Arc::new(member),
            label: Arc::new(label),
            bbox,
            exact: None,
            gap: None,
            descriptor: None,
            box_scale: 1.0,
        })
    }

    pub fn from_descriptor(d: DomainDescriptor) -> Result<Self> {
        match d {
            DomainDescriptor::Annulus { ratio } => RingDomain::annulus(ratio),
            DomainDescriptor::D { lambda } => RingDomain::d(lambda),
            DomainDescriptor::BoxConductor { width, height } => {
                RingDomain::box_conductor(width, height)
            }
        }
    }

    pub fn annulus(ratio: f64) -> Result<Self> {
        let exact = joining_family_module(ratio)?;
        let m = 1.05 * ratio;
        let mut d = RingDomain::new(
            move |w: C64| {
                let r = w.norm();
                r > 1.0 && r < ratio
            },
            move |w: C64| {
                let r = w.norm();
                if (r - 1.0).abs() <= (r - ratio).abs() {
                    BoundaryLabel::First
                } else {
                    BoundaryLabel::Second
                }
            },
            [-m, m, -m, m],
        )?;
        d.exact = Some(exact);
        d.gap = Some(ratio - 1.0);
        d.descriptor = Some(DomainDescriptor::Annulus { ratio });
        Ok(d)
    }

    /// `D` truncated to `[−6/λ − 1, λ] × [−8, 8]`.
    pub fn d(lambda: f64) -> Result<Self> {
        RingDomain::d_truncated(lambda, 1.0)
    }

    /// `D` truncated to the box `[−(6/λ + 1)s, λ] × [−8s, 8s]`.
    pub fn d_truncated(lambda: f64, scale: f64) -> Result<Self> {
        let exact = mod_gamma_d(lambda)?;
        if !(scale.is_finite() && scale >= 1.0) {
            return Err(Error::InvalidArgument(format!("box scale must be >= 1, got {scale}")));
        }
        let c = 0.5 / lambda;
        let left = -(6.0 / lambda + 1.0) * scale;
        let pad = 0.05 * (lambda - left);
        let mut d = RingDomain::new(
            move |z: C64| z.re < lambda && (z + c).norm() > c,
            move |z: C64| {
                if ((z + c).norm() - c).abs() <= (lambda - z.re).abs() {
                    BoundaryLabel::First
                } else {
                    BoundaryLabel::Second
                }
            },
            [left, lambda + pad, -8.0 * scale, 8.0 * scale],
        )?;
        d.exact = Some(exact);
        d.gap = Some(lambda);
        d.descriptor = Some(DomainDescriptor::D { lambda });
        d.box_scale = scale;
        Ok(d)
    }

    pub fn box_conductor(width: f64, height: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0 && height.is_finite() && height > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "box conductor needs positive sides, got {width} x {height}"
            )));
        }
        let pad = 0.05 * width;
        let mut d = RingDomain::new(
            move |z: C64| z.re > 0.0 && z.re < width && z.im >= 0.0 && z.im <= height,
            move |z: C64| {
                if z.re < 0.5 * width {
                    BoundaryLabel::First
                } else {
                    BoundaryLabel::Second
                }
            },
            [-pad, width + pad, 0.0, height],
        )?;
        d.exact = Some(height / width);
        d.gap = Some(width);
        d.descriptor = Some(DomainDescriptor::BoxConductor { width, height });
        Ok(d)
    }

    pub fn contains(&self, z: C64) -> bool {
        (self.member)(z)
    }

    pub fn label(&self, z: C64) -> BoundaryLabel {
        (self.label)(z)
    }

    pub fn bbox(&self) -> [f64; 4] {
        self.bbox
    }

    /// Closed-form joining-family module, when known.
    pub fn exact(&self) -> Option<f64> {
        self.exact
    }

    pub fn descriptor(&self) -> Option<DomainDescriptor> {
        self.descriptor
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulusMethod {
    ClosedForm,
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusEstimate {
    pub value: f64,
    pub method: ModulusMethod,
    /// Coarse spacing; `value` comes from the `h/2` grid.
    pub h: Option<f64>,
    /// `|E(h) − E(h/2)|`.
    pub error_indicator: Option<f64>,
    pub coarse_value: Option<f64>,
    /// `|E − E'|` at spacing `h` between the default box and one twice as large.
    pub truncation_sensitivity: Option<f64>,
    /// `E(h/2)` before the box-size correction, when one was applied.
    pub raw_value: Option<f64>,
    pub exact: Option<f64>,
    pub cg_iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    pub cg_tol: f64,
    pub max_iterations: usize,
    /// Smallest link fraction kept at a boundary crossing.
    pub min_fraction: f64,
    /// Minimum number of cells across the gap of a known domain.
    pub min_cells: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            cg_tol: 1e-10,
            max_iterations: 200_000,
            min_fraction: 1e-3,
            min_cells: 8.0,
        }
    }
}

const NONE: u32 = u32::MAX;

struct System {
    nbr: Vec<[u32; 4]>,
    nw: Vec<[f64; 4]>,
    diag: Vec<f64>,
    rhs: Vec<f64>,
    /// Dirichlet links: (unknown, weight, boundary value).
    bnd: Vec<(u32, f64, f64)>,
}

impl System {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..x.len() {
            let mut acc = self.diag[i] * x[i];
            for k in 0..4 {
                let j = self.nbr[i][k];
                if j != NONE {
                    acc -= self.nw[i][k] * x[j as usize];
                }
            }
            y[i] = acc;
        }
    }

    fn energy(&self, u: &[f64]) -> f64 {
        let mut e = 0.0;
        for i in 0..u.len() {
            for k in 0..4 {
                let j = self.nbr[i][k];
                // each interior link once
                if j != NONE && (j as usize) > i {
                    let d = u[i] - u[j as usize];
                    e += self.nw[i][k] * d * d;
                }
            }
        }
        for &(i, w, b) in &self.bnd {
            let d = u[i as usize] - b;
            e += w * d * d;
        }
        e
    }
}

/// Jacobi-preconditioned conjugate gradients.
fn conjugate_gradient(sys: &System, opts: &GridOptions) -> Result<(Vec<f64>, usize)> {
    let n = sys.rhs.len();
    let mut x = vec![0.0; n];
    let mut r = sys.rhs.clone();
    let bnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        return Ok((x, 0));
    }
    let mut z: Vec<f64> = r.iter().zip(&sys.diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    for it in 1..=opts.max_iterations {
        sys.apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= opts.cg_tol * bnorm {
            return Ok((x, it));
        }
        for i in 0..n {
            z[i] = r[i] / sys.diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let residual = r.iter().map(|v| v * v).sum::<f64>().sqrt() / bnorm;
    Err(Error::SolverDiverged {
        iterations: opts.max_iterations,
        residual,
    })
}

/// Fraction along `a → b` where membership changes (`a` inside, `b` outside).
fn crossing(domain: &RingDomain, a: C64, b: C64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if domain.contains(a + (b - a) * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Assembles and solves the grid problem; returns `(energy, cg iterations)`.
fn grid_energy(domain: &RingDomain, h: f64, opts: &GridOptions) -> Result<(f64, usize)> {
    let [x0, x1, y0, y1] = domain.bbox;
    let nx = ((x1 - x0) / h).ceil().max(1.0) as usize;
    let ny = ((y1 - y0) / h).ceil().max(1.0) as usize;
    if nx.saturating_mul(ny) > 50_000_000 {
        return Err(Error::InvalidArgument(format!("grid spacing {h} is too fine")));
    }
    let hx = (x1 - x0) / nx as f64;
    let hy = (y1 - y0) / ny as f64;
    let center = |i: usize, j: usize| C64::new(x0 + (i as f64 + 0.5) * hx, y0 + (j as f64 + 0.5) * hy);

    let mut index = vec![NONE; nx * ny];
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if domain.contains(center(i, j)) {
                index[j * nx + i] = cells.len() as u32;
                cells.push((i, j));
            }
        }
    }
    let n = cells.len();
    if n == 0 {
        return Err(Error::NotDoublyConnected {
            h,
            reason: "no grid cell lies in the domain".into(),
        });
    }

    let mut sys = System {
        nbr: vec![[NONE; 4]; n],
        nw: vec![[0.0; 4]; n],
        diag: vec![0.0; n],
        rhs: vec![0.0; n],
        bnd: Vec::new(),
    };
    let mut touches = vec![(false, false); n];
    let steps: [(isize, isize, f64); 4] = [
        (1, 0, hy / hx),
        (-1, 0, hy / hx),
        (0, 1, hx / hy),
        (0, -1, hx / hy),
    ];
    for (k_cell, &(i, j)) in cells.iter().enumerate() {
        let a = center(i, j);
        for (k, &(di, dj, w)) in steps.iter().enumerate() {
            let ii = i as isize + di;
            let jj = j as isize + dj;
            if ii < 0 || jj < 0 || ii >= nx as isize || jj >= ny as isize {
                continue;
            }
            let (ii, jj) = (ii as usize, jj as usize);
            let other = index[jj * nx + ii];
            if other != NONE {
                sys.nbr[k_cell][k] = other;
                sys.nw[k_cell][k] = w;
                sys.diag[k_cell] += w;
                continue;
            }
            let b = center(ii, jj);
            let theta = crossing(domain, a, b).max(opts.min_fraction);
            let value = match domain.label(a + (b - a) * theta) {
                BoundaryLabel::First => {
                    touches[k_cell].0 = true;
                    0.0
                }
                BoundaryLabel::Second => {
                    touches[k_cell].1 = true;
                    1.0
                }
            };
            let wb = w / theta;
            sys.diag[k_cell] += wb;
            sys.rhs[k_cell] += wb * value;
            sys.bnd.push((k_cell as u32, wb, value));
        }
    }

    // components: drop floating pockets, require one that joins both labels
    let mut comp = vec![usize::MAX; n];
    let mut joined = false;
    let mut floating = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = start;
        comp[start] = id;
        stack.push(start);
        let mut members = Vec::new();
        let (mut f, mut s) = (false, false);
        while let Some(c) = stack.pop() {
            members.push(c);
            f |= touches[c].0;
            s |= touches[c].1;
            for &o in &sys.nbr[c] {
                if o != NONE && comp[o as usize] == usize::MAX {
                    comp[o as usize] = id;
                    stack.push(o as usize);
                }
            }
        }
        joined |= f && s;
        if !(f || s) {
            floating.extend(members);
        }
    }
    if !joined {
        return Err(Error::NotDoublyConnected {
            h,
            reason: "no grid component touches both boundary components".into(),
        });
    }
    for c in floating {
        // isolated cells keep u = 0 and contribute no energy
        sys.diag[c] = 1.0;
    }

    let (u, iterations) = conjugate_gradient(&sys, opts)?;
    Ok((sys.energy(&u), iterations))
}

/// Grid estimate of the joining-family module with default options.
pub fn grid_module_estimate(domain: &RingDomain, h: f64) -> Result<ModulusEstimate> {
    grid_module_estimate_with(domain, h, &GridOptions::default())
}

pub fn grid_module_estimate_with(
    domain: &RingDomain,
    h: f64,
    opts: &GridOptions,
) -> Result<ModulusEstimate> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument(format!("grid spacing must be positive, got {h}")));
    }
    if let Some(gap) = domain.gap {
        if gap / h < opts.min_cells {
            return Err(Error::NotDoublyConnected {
                h,
                reason: format!(
                    "only {:.1} cells across the gap, need {}",
                    gap / h,
                    opts.min_cells
                ),
            });
        }
    }
    let (coarse, it1) = grid_energy(domain, h, opts)?;
    let (fine, it2) = grid_energy(domain, 0.5 * h, opts)?;
    // box-size Richardson step, deficit ~ 1/L²
    let (value, truncation_sensitivity, raw_value) = match domain.descriptor {
        Some(DomainDescriptor::D { lambda }) => {
            let big = RingDomain::d_truncated(lambda, 2.0 * domain.box_scale)?;
            let (e, _) = grid_energy(&big, h, opts)?;
            let shift = e - coarse;
            (fine + shift * 4.0 / 3.0, Some(shift.abs()), Some(fine))
        }
        _ => (fine, None, None),
    };
    log::debug!("grid module: E(h)={coarse} E(h/2)={fine} at h={h}");
    Ok(ModulusEstimate {
        value,
        raw_value,
        method: ModulusMethod::Grid,
        h: Some(h),
        error_indicator: Some((coarse - fine).abs()),
        coarse_value: Some(coarse),
        truncation_sensitivity,
        exact: domain.exact,
        cg_iterations: it1 + it2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_conductor() {
        let d = RingDomain::box_conductor(1.0, 1.0).unwrap();
        let est = grid_module_estimate(&d, 0.05).unwrap();
        assert!((est.value - 1.0).abs() < 1e-6, "{est:?}");
        let d = RingDomain::box_conductor(2.0, 1.0).unwrap();
        let est = grid_module_estimate(&d, 0.1).unwrap();
        assert!((est.value - 0.5).abs() < 1e-6, "{est:?}");
    }

    #[test]
    fn descriptor_json() {
        let d: DomainDescriptor = serde_json::from_str(r#"{"kind":"annulus","ratio":2.5}"#).unwrap();
        assert_eq!(d, DomainDescriptor::Annulus { ratio: 2.5 });
        let d: DomainDescriptor = serde_json::from_str(r#"{"kind":"D","lambda":1}"#).unwrap();
        assert_eq!(d, DomainDescriptor::D { lambda: 1.0 });
        let d: DomainDescriptor =
            serde_json::from_str(r#"{"kind":"box_conductor","width":1,"height":2}"#).unwrap();
        assert_eq!(RingDomain::from_descriptor(d).unwrap().exact(), Some(2.0));
        assert!(serde_json::from_str::<DomainDescriptor>(r#"{"kind":"disk"}"#).is_err());
    }

    #[test]
    fn under_resolved_or_disconnected() {
        let d = RingDomain::annulus(1.2).unwrap();
        assert!(matches!(
            grid_module_estimate(&d, 0.1),
            Err(Error::NotDoublyConnected { .. })
        ));
        // a simply connected disk never touches a second component
        let disk = RingDomain::new(
            |z: C64| z.norm() < 1.0,
            |_| BoundaryLabel::First,
            [-1.1, 1.1, -1.1, 1.1],
        )
        .unwrap();
        assert!(matches!(
            grid_module_estimate(&disk, 0.1),
            Err(Error::NotDoublyConnected { .. })
        ));
    }
}
