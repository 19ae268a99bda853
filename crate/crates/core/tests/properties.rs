use std::f64::consts::PI;

use proptest::prelude::*;

use minitube::contour::parse_expr;
use minitube::extremal::theta::ThetaFrame;
use minitube::extremal::EllipticParams;
use minitube::flux::{bound_asinh_form, bound_gudermann_form, lifetime_bound, FluxVector};
use minitube::io::{fmt_num, TubeSpec};
use minitube::modulus::{lambda_star, mod_gamma_d, r0_bound};
use minitube::{Expr, C64};

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Z),
        (-5.0..5.0f64).prop_map(Expr::real),
        (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Expr::constant(C64::new(a, b))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), -3i32..4).prop_map(|(a, n)| Expr::powi(a, n)),
            inner.clone().prop_map(|a| Expr::exp(Expr::mul(Expr::real(0.1), a))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_expressions_reparse(e in expr_tree(), re in -1.5..1.5f64, im in -1.5..1.5f64) {
        let text = e.to_string();
        let back = parse_expr(&text).unwrap();
        let z = C64::new(re, im);
        match (e.eval(z), back.eval(z)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{text}: {a} vs {b}"),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{text}: {a:?} vs {b:?}"),
        }
    }

    #[test]
    fn tube_spec_json_round_trip(r in 1.01..50.0f64, c in prop::option::of(-5.0..5.0f64), n in prop::option::of(8usize..400)) {
        let spec = TubeSpec {
            r,
            g: "(z+0.2)/(1-0.2*z)".into(),
            f: if c.is_none() { Some("1/z^2".into()) } else { None },
            c,
            n: n.map(|k| 2 * k),
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back = TubeSpec::from_json(&text).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn bound_forms_agree(alpha in 1e-8..(PI / 2.0 - 1e-8), norm in 1e-3..1e3f64, phi in 0.0..(2.0 * PI)) {
        let q = FluxVector::new([
            norm * alpha.sin() * phi.cos(),
            norm * alpha.sin() * phi.sin(),
            norm * alpha.cos(),
        ]).unwrap();
        let (a, b) = (bound_asinh_form(&q), bound_gudermann_form(&q));
        prop_assert!((a - b).abs() <= 1e-10 * a);
        prop_assert!((lifetime_bound(&q).value() - a).abs() <= 1e-12 * a);
        let s = q.scaled(3.0).unwrap();
        prop_assert!((bound_asinh_form(&s) - 3.0 * a).abs() <= 1e-12 * a);
    }

    #[test]
    fn module_closed_forms(lambda in 1e-3..1e3f64) {
        let ls = lambda_star(lambda).unwrap();
        prop_assert!(ls > 0.0 && ls < 1.0);
        let m = mod_gamma_d(lambda).unwrap();
        prop_assert!((r0_bound(lambda).unwrap() - PI * m).abs() <= 1e-12 * PI * m);
        prop_assert!(mod_gamma_d(lambda * 1.01).unwrap() < m);
    }

    #[test]
    fn jacobi_quartic_identity(q in 1e-4..0.95f64) {
        let [t2, t3, t4] = ThetaFrame::new(q).constants();
        let lhs = t3.powi(4);
        prop_assert!((lhs - t2.powi(4) - t4.powi(4)).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn p_is_doubly_periodic(q in 0.02..0.9f64, x in -0.5..0.5f64, y in -0.5..0.5f64) {
        let p = EllipticParams::new(q).unwrap();
        let u = C64::new(x, y * p.t());
        prop_assume!(p.reduce(u).norm() > 1e-2);
        let a = p.p(u).unwrap();
        let b = p.p(u + p.tau() + 1.0).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn table_numbers_keep_twelve_digits(x in -1e12..1e12f64) {
        let y: f64 = fmt_num(x).parse().unwrap();
        prop_assert!((x - y).abs() <= 1e-11 * x.abs());
    }
}
