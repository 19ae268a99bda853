//! Tube specifications, JSON reports and sweep tables.
//!
//! Numbers are written with 12 significant digits; infinities as `"inf"`.

use serde::{Deserialize, Serialize, Serializer};

use crate::contour::{univalence_probe, ProbeOptions, ProbeReport, Verdict, C64};
use crate::error::{Error, Result};
use crate::extremal::{conjecture_sweep, SweepRow, SweepTable};
use crate::flux::{lifetime, lifetime_bound, bound_report, tilt_params};
use crate::modulus::{mod_gamma_d, r0_bound, ModulusEstimate};
use crate::weierstrass::{circle_periods, period_defect, tube_from_gauss, MinimalTube, WeierstrassData, PERIOD_TOL};
use crate::{Annulus, HoloFn};

/// Default number of target samples for the univalence probe.
pub const PROBE_SAMPLES: usize = 32;

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Text form used in tables: 12 significant digits, `inf`, `-inf`, `nan`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        let r = round_sig(x);
        format!("{r}")
    }
}

/// A real written with 12 significant digits, or as a string when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(round_sig(self.0))
        } else {
            s.serialize_str(&fmt_num(self.0))
        }
    }
}

fn nums<const N: usize>(v: [f64; N]) -> [Num; N] {
    v.map(Num)
}

fn cnum(z: C64) -> [Num; 2] {
    [Num(z.re), Num(z.im)]
}

/// `{"R": .., "g": "..", "f"?: "..", "c"?: .., "N"?: ..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeSpec {
    #[serde(rename = "R")]
    pub r: f64,
    pub g: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, alias = "flux_constant", skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl TubeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: TubeSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        Annulus::new(self.r)?;
        match (&self.f, self.c) {
            (Some(_), None) | (None, Some(_)) => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "config needs exactly one of \"f\" and \"c\"".into(),
                ))
            }
        }
        if let Some(n) = self.n {
            if n < 16 || !n.is_multiple_of(2) {
                return Err(Error::InvalidArgument(format!("N must be even and >= 16, got {n}")));
            }
        }
        Ok(())
    }

    pub fn annulus(&self) -> Result<Annulus> {
        Annulus::new(self.r)
    }

    pub fn gauss(&self) -> Result<HoloFn> {
        HoloFn::parse(&self.g, self.annulus()?)
    }

    pub fn data(&self) -> Result<WeierstrassData> {
        self.validate()?;
        let g = self.gauss()?;
        match (&self.f, self.c) {
            (Some(f), None) => WeierstrassData::new(HoloFn::parse(f, self.annulus()?)?, g),
            (None, Some(c)) => tube_from_gauss(&g, c),
            _ => unreachable!("validated"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeSummary {
    pub univalent: Verdict,
    pub omits_zero: Verdict,
    pub zero_count: Option<i64>,
    /// `[[z₁], [z₂]]` with `g(z₁) = g(z₂)`.
    pub witness: Option<[[Num; 2]; 2]>,
    pub probe_radii: [Num; 2],
    pub samples: usize,
}

impl From<&ProbeReport> for ProbeSummary {
    fn from(p: &ProbeReport) -> Self {
        ProbeSummary {
            univalent: p.univalent,
            omits_zero: p.omits_zero,
            zero_count: p.zero_count,
            witness: p.witness.map(|(a, b)| [cnum(a), cnum(b)]),
            probe_radii: [Num(p.probe_radii.0), Num(p.probe_radii.1)],
            samples: p.samples,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TiltReport {
    pub w: [Num; 2],
    pub alpha: Num,
    pub theta: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct LifetimeReport {
    pub measured: Num,
    pub via_flux: Num,
    pub residual: Num,
    pub interval: [Num; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub tau: Num,
    pub points: Vec<[Num; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyzeVerdict {
    Satisfied,
    Violated,
    HypothesisFailed,
    NotATube,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub spec: TubeSpec,
    pub period_defect: [Num; 3],
    pub period_tolerance: Num,
    pub closed: bool,
    pub probe: ProbeSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux: Option<[Num; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tilt: Option<TiltReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifetime: Option<LifetimeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<Num>,
    pub verdict: AnalyzeVerdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<Section>,
}

impl AnalyzeReport {
    /// Whether the run ends with a hypothesis failure.
    pub fn hypothesis_failed(&self) -> bool {
        matches!(
            self.verdict,
            AnalyzeVerdict::HypothesisFailed | AnalyzeVerdict::NotATube
        )
    }
}

/// Full analysis of a tube spec; sections are cut at the requested heights.
pub fn analyze(spec: &TubeSpec, sections: &[f64], n_points: usize) -> Result<AnalyzeReport> {
    let data = spec.data()?;
    let periods = circle_periods(&data, 1.0)?;
    let defect = match spec.n {
        Some(n) => period_defect(&data, n)?,
        None => [periods[0].re, periods[1].re, periods[2].re],
    };
    let probe = univalence_probe(data.g(), PROBE_SAMPLES, &ProbeOptions::default())?;
    let q_norm = periods.iter().map(|p| p.im * p.im).sum::<f64>().sqrt();
    let tol = PERIOD_TOL * (1.0 + q_norm);
    let closed = defect.iter().all(|d| d.abs() < tol);
    let mut report = AnalyzeReport {
        spec: spec.clone(),
        period_defect: nums(defect),
        period_tolerance: Num(tol),
        closed,
        probe: ProbeSummary::from(&probe),
        flux: None,
        tilt: None,
        lifetime: None,
        bound: None,
        margin: None,
        verdict: AnalyzeVerdict::NotATube,
        sections: Vec::new(),
    };
    if !closed {
        return Ok(report);
    }
    let tube = MinimalTube::new(data)?;
    let q = tube.flux();
    let tp = tilt_params(&q);
    let lt = lifetime(&tube);
    let (t1, t2) = tube.life_interval();
    let rep = bound_report(&tube, &probe);
    report.flux = Some(nums(q.components()));
    report.tilt = Some(TiltReport {
        w: cnum(tp.w),
        alpha: Num(tp.alpha),
        theta: Num(tp.theta),
    });
    report.lifetime = Some(LifetimeReport {
        measured: Num(lt.measured),
        via_flux: Num(lt.via_flux),
        residual: Num(lt.residual()),
        interval: [Num(t1), Num(t2)],
    });
    report.bound = Some(Num(lifetime_bound(&q).value()));
    report.margin = Some(Num(rep.margin));
    report.verdict = match rep.satisfied {
        None => AnalyzeVerdict::HypothesisFailed,
        Some(true) => AnalyzeVerdict::Satisfied,
        Some(false) => AnalyzeVerdict::Violated,
    };
    for &tau in sections {
        let pts = tube.section_polyline(tau, n_points)?;
        report.sections.push(Section {
            tau: Num(tau),
            points: pts.into_iter().map(nums).collect(),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub lambda: f64,
    pub ln_r0: f64,
    pub mod_d: f64,
}

pub const BOUND_HEADER: [&str; 3] = ["lambda", "lnR0", "modD"];
pub const CONJECTURE_HEADER: [&str; 6] = ["q", "R", "lambda", "lnR", "lnR0", "ratio"];

/// `steps` equally spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) || steps == 0 {
        return Err(Error::InvalidArgument(format!(
            "bad grid [{lo}, {hi}] with {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect())
}

/// Rows that could not be computed, with the reason.
pub type RowFailures = Vec<(f64, String)>;

pub fn bound_table(lambda_min: f64, lambda_max: f64, steps: usize) -> Result<(Vec<BoundRow>, RowFailures)> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for lambda in linear_grid(lambda_min, lambda_max, steps)? {
        match r0_bound(lambda).and_then(|ln_r0| Ok((ln_r0, mod_gamma_d(lambda)?))) {
            Ok((ln_r0, mod_d)) => rows.push(BoundRow { lambda, ln_r0, mod_d }),
            Err(e) => failures.push((lambda, e.to_string())),
        }
    }
    Ok((rows, failures))
}

pub fn bound_record(row: &BoundRow) -> [String; 3] {
    [fmt_num(row.lambda), fmt_num(row.ln_r0), fmt_num(row.mod_d)]
}

pub fn conjecture_table(q_min: f64, q_max: f64, steps: usize) -> Result<SweepTable> {
    conjecture_sweep(&linear_grid(q_min, q_max, steps)?)
}

pub fn conjecture_record(row: &SweepRow) -> [String; 6] {
    [
        fmt_num(row.q),
        fmt_num(row.r),
        fmt_num(row.lambda),
        fmt_num(row.ln_r),
        fmt_num(row.ln_r0),
        fmt_num(row.ratio),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulusReport {
    pub h: Num,
    pub value: Num,
    pub method: crate::modulus::ModulusMethod,
    pub error_indicator: Option<Num>,
    pub coarse_value: Option<Num>,
    pub truncation_sensitivity: Option<Num>,
    pub raw_value: Option<Num>,
    pub exact: Option<Num>,
    pub relative_error: Option<Num>,
    pub cg_iterations: usize,
}

impl ModulusReport {
    pub fn new(h: f64, est: &ModulusEstimate) -> Self {
        ModulusReport {
            h: Num(h),
            value: Num(est.value),
            method: est.method,
            error_indicator: est.error_indicator.map(Num),
            coarse_value: est.coarse_value.map(Num),
            truncation_sensitivity: est.truncation_sensitivity.map(Num),
            raw_value: est.raw_value.map(Num),
            exact: est.exact.map(Num),
            relative_error: est.exact.map(|e| Num((est.value - e).abs() / e)),
            cg_iterations: est.cg_iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(serde_json::to_string(&Num(f64::INFINITY)).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Num(1.0 / 3.0)).unwrap(), "0.333333333333");
        assert_eq!(fmt_num(2.0 * std::f64::consts::PI), "6.28318530718");
        assert_eq!(fmt_num(-f64::INFINITY), "-inf");
        assert_eq!(fmt_num(0.0), "0");
    }

    #[test]
    fn spec_parsing() {
        let s = TubeSpec::from_json(r#"{"R": 2, "g": "z", "c": 1}"#).unwrap();
        assert_eq!(s.c, Some(1.0));
        let s = TubeSpec::from_json(r#"{"R": 2, "g": "z", "flux_constant": 1}"#).unwrap();
        assert_eq!(s.c, Some(1.0));
        assert!(TubeSpec::from_json(r#"{"R": 2, "g": "z"}"#).is_err());
        assert!(TubeSpec::from_json(r#"{"R": 2, "g": "z", "c": 1, "f": "1"}"#).is_err());
        assert!(TubeSpec::from_json(r#"{"R": 0.5, "g": "z", "c": 1}"#).is_err());
        assert!(TubeSpec::from_json(r#"{"R": 2, "g": "z", "c": 1, "x": 0}"#).is_err());
        assert!(TubeSpec::from_json(r#"{"R": 2, "g": "z", "c": 1, "N": 7}"#).is_err());
    }

    #[test]
    fn catenoid_report() {
        let s = TubeSpec::from_json(r#"{"R": 2, "g": "z", "c": 1}"#).unwrap();
        let rep = analyze(&s, &[0.0], 32).unwrap();
        assert_eq!(rep.verdict, AnalyzeVerdict::Satisfied);
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["bound"], "inf");
        assert!(v["tilt"]["alpha"].as_f64().unwrap() < 1e-12);
        assert_eq!(v["flux"][2].as_f64(), Some(round_sig(2.0 * std::f64::consts::PI)));
        assert_eq!(v["sections"][0]["points"].as_array().unwrap().len(), 32);
    }

    #[test]
    fn open_report() {
        let s = TubeSpec::from_json(r#"{"R": 1.5, "g": "z+2", "c": 1}"#).unwrap();
        let rep = analyze(&s, &[], 16).unwrap();
        assert_eq!(rep.verdict, AnalyzeVerdict::NotATube);
        assert!(rep.hypothesis_failed());
    }

    #[test]
    fn bound_rows() {
        let rows = bound_table(1.0, 1.0, 1).unwrap().0;
        assert_eq!(bound_record(&rows[0])[1], "11.197980682");
        let lam = std::f64::consts::PI.sinh();
        let rows = bound_table(lam, lam, 1).unwrap().0;
        assert!((rows[0].ln_r0 - std::f64::consts::PI).abs() < 1e-14);
        assert_eq!(linear_grid(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
    }
}
