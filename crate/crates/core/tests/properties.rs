use asalab::asa::{ball_value, eval_asa};
use asalab::funclass::{AdmissibleFunction, FunctionSpec};
use asalab::geometry::{BodySpec, ConvexBody, Polygon2D, Transform};
use asalab::numeric::Extended;
use asalab::QuadratureConfig;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn phi_spec() -> impl Strategy<Value = FunctionSpec> {
    prop_oneof![
        (0.1f64..6.0).prop_map(|p| FunctionSpec::PowerPhi { n: 2, p }),
        (2u32..9).prop_map(|m| FunctionSpec::Arctan { m }),
        Just(FunctionSpec::Log1p),
    ]
}

/// Members of Conc⁻ with φ(t)/√t unbounded at 0.
fn conc_minus_spec() -> impl Strategy<Value = FunctionSpec> {
    prop_oneof![
        (0.05f64..1.9).prop_map(|p| FunctionSpec::PowerPhi { n: 2, p }),
        (3u32..9).prop_map(|m| FunctionSpec::Arctan { m }),
    ]
}

fn psi_spec() -> impl Strategy<Value = FunctionSpec> {
    prop_oneof![
        (-1.9f64..-0.1).prop_map(|p| FunctionSpec::PowerPsi { n: 2, p }),
        Just(FunctionSpec::LogRecip),
    ]
}

fn random_body() -> impl Strategy<Value = BodySpec> {
    (any::<u64>(), 2usize..7).prop_map(|(seed, kmax)| BodySpec::Random { seed, kmax, alpha: 0.25 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling_matches_ball_formula(spec in prop_oneof![phi_spec(), psi_spec()], r in 0.2f64..5.0, s in 0.3f64..3.0) {
        let f = AdmissibleFunction::builtin(spec).unwrap();
        let b = ConvexBody::ball(2, r).unwrap();
        let scaled = b.transform(Transform::Scale(s), &cfg()).unwrap();
        let lhs = eval_asa(&scaled, &f, &cfg()).unwrap().as_f64();
        let rhs = ball_value(2, r * s, &f);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn dual_is_an_involution(spec in prop_oneof![phi_spec(), psi_spec()], t in 1e-3f64..1e3) {
        let f = AdmissibleFunction::builtin(spec).unwrap();
        let (a, b) = (f.eval(t), f.dual().dual().eval(t));
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn conc_minus_ball_values_are_monotone(spec in conc_minus_spec(), r in 0.2f64..4.0, dr in 0.01f64..1.0) {
        let f = AdmissibleFunction::builtin(spec).unwrap();
        let star = f.dual();
        prop_assert!(ball_value(2, r + dr, &f) >= ball_value(2, r, &f));
        prop_assert!(ball_value(2, r + dr, &star) <= ball_value(2, r, &star));
    }

    #[test]
    fn psi_ball_values_increase_with_radius(spec in psi_spec(), r in 0.2f64..4.0, dr in 0.01f64..1.0) {
        let f = AdmissibleFunction::builtin(spec).unwrap();
        prop_assert!(ball_value(2, r + dr, &f) >= ball_value(2, r, &f));
    }

    #[test]
    fn extended_round_trips(x in prop_oneof![Just(0.0), Just(f64::INFINITY), 1e-300f64..1e300]) {
        let e = Extended::from_f64(x);
        let json = serde_json::to_string(&e).unwrap();
        let back: Extended = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, e);
        prop_assert_eq!(back.as_f64(), x);
    }

    #[test]
    fn function_specs_round_trip(spec in prop_oneof![phi_spec(), psi_spec()]) {
        let dual = FunctionSpec::Dual { of: Box::new(spec.clone()) };
        for s in [spec, dual] {
            let back: FunctionSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
            prop_assert_eq!(back, s);
        }
    }

    #[test]
    fn body_specs_round_trip(spec in random_body()) {
        prop_assert_eq!(BodySpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn regular_polygon_polar_is_an_involution(m in 3usize..12, r in 0.3f64..3.0, phase in 0.0f64..1.0) {
        let p = Polygon2D::regular(m, r, phase).unwrap();
        let pp = p.polar().unwrap().polar().unwrap();
        for j in 0..32 {
            let t = j as f64 * 0.2;
            prop_assert!((p.support(t) - pp.support(t)).abs() <= 1e-10 * r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn random_bodies_are_centered_and_polar_is_an_involution(spec in random_body()) {
        let k = ConvexBody::from_spec(&spec, &cfg()).unwrap();
        prop_assert!(k.is_centered(1e-8));
        let back = k.polar(&cfg()).unwrap().polar(&cfg()).unwrap();
        prop_assert!(k.hausdorff(&back, &cfg()).unwrap() <= 1e-6);
    }

    #[test]
    fn quadrature_is_scale_homogeneous(spec in random_body(), s in 0.5f64..2.0) {
        // power functions scale exactly, so as(sK) = s^{2−4α} as(K)
        let f = AdmissibleFunction::power_phi(2, 1.0).unwrap();
        let k = ConvexBody::from_spec(&spec, &cfg()).unwrap();
        let a = eval_asa(&k, &f, &cfg()).unwrap().as_f64();
        let b = eval_asa(&k.transform(Transform::Scale(s), &cfg()).unwrap(), &f, &cfg()).unwrap().as_f64();
        let expect = s.powf(2.0 - 4.0 / 3.0) * a;
        prop_assert!((b - expect).abs() <= 1e-9 * expect);
    }
}
