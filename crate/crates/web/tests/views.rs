use std::f64::consts::PI;

use minitube_web::{bound_curve, slit_image, tube_sections};

#[test]
fn catenoid_sections_are_circles() {
    let v = tube_sections("z", 1.0, 2.0, 5, 64).unwrap();
    assert!((v.lifetime - 2.0 * 2f64.ln()).abs() < 1e-8);
    assert!(v.bound.is_none());
    assert!((v.flux[2] - 2.0 * PI).abs() < 1e-10);
    assert_eq!(v.sections.len(), 5);
    for s in &v.sections {
        assert_eq!(s.len(), 64);
        let cx = s.iter().map(|p| p[0]).sum::<f64>() / s.len() as f64;
        let cy = s.iter().map(|p| p[1]).sum::<f64>() / s.len() as f64;
        let r0 = (s[0][0] - cx).hypot(s[0][1] - cy);
        for p in s {
            assert!(((p[0] - cx).hypot(p[1] - cy) - r0).abs() < 1e-8, "{cx} {cy} {r0} {p:?}");
            assert!((p[2] - s[0][2]).abs() < 1e-10);
        }
    }
    assert!(tube_sections("z+2", 1.0, 2.0, 3, 32).is_err());
    assert!(tube_sections("z+", 1.0, 2.0, 3, 32).is_err());
}

#[test]
fn tilted_tube_respects_bound() {
    let v = tube_sections("(z+0.3)/(1-0.3*z)", 1.0, 3.0, 3, 48).unwrap();
    assert!(v.lifetime <= v.bound.unwrap());
    assert!(v.alpha > 0.0);
}

#[test]
fn candidates_lie_below_curve() {
    let v = bound_curve(0.1, 10.0, 40, 0.05, 0.6, 8).unwrap();
    assert_eq!(v.curve.len(), 40);
    assert!(v.curve.windows(2).all(|w| w[1][1] < w[0][1]));
    assert_eq!(v.candidates.len(), 8);
    for [l, ln_r] in &v.candidates {
        assert!(*ln_r <= PI * PI / l.asinh());
    }
    assert!(bound_curve(0.0, 1.0, 10, 0.1, 0.2, 2).is_err());
}

#[test]
fn slit_image_avoids_slits() {
    let v = slit_image(0.2, 6, 8, 200).unwrap();
    assert!(v.lambda > 0.0);
    let [a, b] = v.slits;
    for c in v.circles.iter().chain(&v.rays) {
        for [x, y] in c {
            let on_slit = y.abs() < 1e-9 && (*x <= -a || (0.0..=b).contains(x));
            assert!(!on_slit, "({x}, {y})");
        }
    }
    let v = serde_json::to_string(&v).unwrap();
    assert!(v.contains("\"circles\""));
}
