use minitube::extremal::{
    calibrate_candidate, conjecture_sweep, joukowski_family, slit_annulus_map, EllipticParams,
};
use minitube::modulus::{r0_bound, star_witness};
use minitube::Error;

#[derive(serde::Deserialize)]
struct Row {
    q: f64,
    lambda: f64,
}

fn fixture() -> Vec<Row> {
    let text = include_str!("fixtures/lambda_q.json");
    serde_json::from_str(text).unwrap()
}

#[test]
fn lambda_matches_reference() {
    for row in fixture() {
        let p = EllipticParams::new(row.q).unwrap();
        let cal = calibrate_candidate(&p).unwrap();
        let rel = (cal.lambda - row.lambda).abs() / row.lambda;
        assert!(rel < 1e-9, "q={}: {} vs {} ({rel:e})", row.q, cal.lambda, row.lambda);
        assert!(cal.residual < 1e-9);
        let direct = slit_annulus_map(&p).unwrap().coefficients().unwrap().0.re;
        assert!((direct - row.lambda).abs() < 1e-9 * row.lambda);
    }
}

#[test]
fn lambda_increases_with_q() {
    let rows = fixture();
    let lambdas: Vec<f64> = rows
        .iter()
        .map(|r| calibrate_candidate(&EllipticParams::new(r.q).unwrap()).unwrap().lambda)
        .collect();
    assert!(lambdas.windows(2).all(|w| w[0] < w[1]), "{lambdas:?}");
}

#[test]
fn sweep_respects_the_bound() {
    let grid: Vec<f64> = (1..=18).map(|k| 0.05 * k as f64).collect();
    let table = conjecture_sweep(&grid).unwrap();
    assert!(table.failures.is_empty(), "{:?}", table.failures);
    assert_eq!(table.rows.len(), grid.len());
    for row in &table.rows {
        assert!(row.ratio <= 1.0 + 1e-6, "{row:?}");
        assert!((row.ln_r0 - r0_bound(row.lambda).unwrap()).abs() < 1e-12 * row.ln_r0);
    }
    assert!(conjecture_sweep(&[]).is_err());
    let t = conjecture_sweep(&[0.01, 0.3]).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.failures.len(), 1);
}

#[test]
fn calibrated_candidate_has_witnesses() {
    let p = EllipticParams::new(0.1).unwrap();
    let cal = calibrate_candidate(&p).unwrap();
    let r = p.outer_radius();
    for k in 0..10 {
        let rho = r.powf(-0.9 + 1.8 * (k as f64 + 0.5) / 10.0);
        let w = star_witness(cal.candidate.g(), rho, cal.lambda).unwrap();
        assert!(w.residual1 < 1e-10 && w.residual2 < 1e-10);
    }
}

#[test]
fn joukowski_fails_beyond_the_bound() {
    for lambda in [0.5, 1.0] {
        let ln_r = 1.01 * r0_bound(lambda).unwrap();
        // ln R₀(1) ≈ 11.2 gives R ≈ e^{11.3}
        let r = ln_r.exp();
        assert!(matches!(
            joukowski_family(lambda, r),
            Err(Error::NoSolution { .. }) | Err(Error::ZeroInAnnulus)
        ));
    }
}
