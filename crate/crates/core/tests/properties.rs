use proptest::collection::vec;
use proptest::prelude::*;
use ratapprox_core::cross::{construct as cross_construct, series_from_quadrature, CrossPCProblem};
use ratapprox_core::diagnostics::{normalization_defect, perturbation_experiment, MeasureOptions};
use ratapprox_core::linear::{construct as linear_construct, LinearPCProblem};
use ratapprox_core::plan::ConstructionPlan;
use ratapprox_core::poly::{cheb_to_monomial, monomial_to_cheb};
use ratapprox_core::rational::{error_identity, error_identity_alt};
use ratapprox_core::{
    Basis, Double, Extended, FunctionId, MonomialPoly, NormalizationCondition, Parity,
    RationalApproximant, Real, Segment,
};

fn coeffs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    vec(-1.0f64..1.0, len)
}

/// Denominator `1 + small terms`, bounded away from zero on `[-1, 1]`.
fn denom(len: usize) -> impl Strategy<Value = Vec<f64>> {
    vec(-0.3f64..0.3, len - 1).prop_map(|mut v| {
        v.insert(0, 1.0);
        v
    })
}

fn shape() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::General), Just(Parity::Even), Just(Parity::Odd)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn error_identity_sides_agree(
        p in coeffs(4), q in denom(3), dp in coeffs(4), dq in coeffs(3), x in -1.0f64..1.0,
    ) {
        let (p, q, dp, dq) = (MonomialPoly::new(p), MonomialPoly::new(q), MonomialPoly::new(dp), MonomialPoly::new(dq));
        let qv = q.eval(&x).unwrap();
        let dqv = dq.eval(&x).unwrap();
        prop_assume!(qv.abs() > 0.01 && dqv.abs() > 0.01 && (qv + dqv).abs() > 0.01);
        let (lhs, rhs) = error_identity(&p, &q, &dp, &dq, &x).unwrap();
        let alt = error_identity_alt(&p, &q, &dp, &dq, &x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e3 * f64::EPSILON * lhs.abs());
        prop_assert!((lhs - alt).abs() <= 1e3 * f64::EPSILON * lhs.abs());
        // direct evaluation in double agrees up to the cancellation in the difference
        let direct = (p.eval(&x).unwrap() + dp.eval(&x).unwrap()) / (qv + dqv) - p.eval(&x).unwrap() / qv;
        prop_assert!((direct - lhs).abs() <= 1e-12);
    }

    #[test]
    fn parity_shapes_are_symmetric(a in coeffs(3), b in denom(3), parity in shape(), x in -1.0f64..1.0) {
        prop_assume!(parity != Parity::General);
        let r = RationalApproximant::new(a, b, Basis::Monomial, parity, Segment::UNIT).unwrap();
        let (u, v) = (r.evaluate(&x).unwrap(), r.evaluate(&-x).unwrap());
        let want = if parity == Parity::Even { u } else { -u };
        prop_assert!((v - want).abs() <= 4.0 * f64::EPSILON * u.abs().max(1.0));
    }

    #[test]
    fn plain_form_evaluates_the_same(a in coeffs(3), b in denom(3), parity in shape()) {
        let r = RationalApproximant::new(a, b, Basis::Monomial, parity, Segment::UNIT).unwrap();
        let plain = r.to_plain_form();
        prop_assert_eq!(plain.parity(), Parity::General);
        for x in Segment::UNIT.grid(2000) {
            let (u, v) = (r.evaluate(&x).unwrap(), plain.evaluate(&x).unwrap());
            prop_assert!((u - v).abs() <= 100.0 * f64::EPSILON * u.abs().max(1.0));
        }
    }

    #[test]
    fn common_factor_cancels(a in coeffs(3), b in denom(3), k in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3], x in -1.0f64..1.0) {
        let r = RationalApproximant::monomial(a, b).unwrap();
        let (u, v) = (r.evaluate(&x).unwrap(), r.scaled(&k).evaluate(&x).unwrap());
        prop_assert!((u - v).abs() <= 8.0 * f64::EPSILON * u.abs().max(1.0));
    }

    #[test]
    fn degree_8_round_trip_is_accurate(p in vec(prop_oneof![-1.0f64..-0.1, 0.1f64..1.0], 9)) {
        let p = MonomialPoly::new(p);
        let back = cheb_to_monomial(&monomial_to_cheb(&p));
        for (x, y) in p.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs(), "{} vs {}", x, y);
        }
    }

    #[test]
    fn linear_method_reproduces_a_rational_target(a in coeffs(3), b in denom(3)) {
        let r = RationalApproximant::monomial(a, b).unwrap();
        let f = |x: &f64| r.evaluate(x).unwrap();
        let (got, _) = linear_construct(&LinearPCProblem::new(&f, 2, 2, &1.0).unwrap()).unwrap();
        for x in Segment::UNIT.grid(101) {
            prop_assert!((got.evaluate(&x).unwrap() - f(&x)).abs() <= 1e-11);
        }
    }

    #[test]
    fn cross_method_reproduces_a_rational_target(a in coeffs(3), b in denom(3)) {
        let r = RationalApproximant::monomial(a, b).unwrap();
        let f = |x: &f64| r.evaluate(x).unwrap();
        let c = series_from_quadrature(&f, Segment::UNIT, 7, 128, &1.0).unwrap();
        let (got, _) = cross_construct(&CrossPCProblem::new(c, 2, 2).unwrap()).unwrap();
        for x in Segment::UNIT.grid(101) {
            prop_assert!((got.evaluate(&x).unwrap() - f(&x)).abs() <= 1e-11);
        }
    }
}

#[test]
fn normalization_is_shared_by_both_members_of_a_pair() {
    let cases = [
        (FunctionId::Exp, 2, 3),
        (FunctionId::TanPi4, 2, 2),
        (FunctionId::Sqrt, 3, 3),
    ];
    for (id, m, n) in cases {
        for (tag, big) in [
            (NormalizationCondition::B0, NormalizationCondition::B0),
            (NormalizationCondition::BM, NormalizationCondition::BM),
            (NormalizationCondition::AN, NormalizationCondition::AN),
        ] {
            let plan = ConstructionPlan::new(id, m, n).with_normalization(tag);
            let rep = perturbation_experiment(
                &plan,
                &Double,
                &Extended::new(128),
                &MeasureOptions::default(),
            )
            .unwrap();
            let d = normalization_defect(&rep.first, &rep.second, &big).unwrap();
            assert!(
                d.abs().to_f64() <= 1e3 * f64::EPSILON,
                "{id:?} {}: {}",
                big.tag(),
                d
            );
        }
    }
}
