use hilbloc::exact::{q, MPoly};
use hilbloc::localize::series_with;
use hilbloc::universal::UniversalPoly;
use hilbloc::{xi_pow, AssignmentKind, BigRational, EqLineBundle, LimitOptions, QSeries, RatFunc, ToricSurface};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..3, 0u32..3), rational()), 1..5)
        .prop_map(|ts| MPoly::from_terms(2, ts.into_iter().map(|((a, b), c)| (vec![a, b], c))))
}

fn nonzero_poly() -> impl Strategy<Value = MPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec(rational(), 4).prop_map(|mut c| {
        c[0] = q(1, 1);
        QSeries::new(c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratfunc_self_difference_vanishes(x in ratfunc()) {
        prop_assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn ratfunc_division_inverts_multiplication(x in ratfunc(), y in ratfunc()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(x.mul(&y).div(&y).unwrap(), x);
    }

    #[test]
    fn ratfunc_addition_commutes(x in ratfunc(), y in ratfunc()) {
        prop_assert_eq!(x.add(&y), y.add(&x));
    }

    #[test]
    fn xi_exponents_add(x in rational(), y in rational()) {
        let lhs = xi_pow(&x, 5).mul(&xi_pow(&y, 5)).unwrap();
        prop_assert_eq!(lhs, xi_pow(&(&x + &y), 5));
    }

    #[test]
    fn series_division_inverts_multiplication(a in series(), b in series()) {
        prop_assert_eq!(a.mul(&b).unwrap().div(&b).unwrap(), a);
    }

    #[test]
    fn universal_poly_wire_round_trip(cs in prop::collection::vec(rational(), 3)) {
        let p = UniversalPoly::new(
            hilbloc::universal::Var::NORMAL.to_vec(),
            2,
            [(vec![2, 0], cs[0].clone()), (vec![1, 1], cs[1].clone()), (vec![0, 0], cs[2].clone())],
        );
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<UniversalPoly>(&text).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn limits_do_not_depend_on_direction_or_workers(
        a in 0i64..=2,
        coeffs in prop::collection::vec(-2i64..=2, 4),
        kind in prop::sample::select(AssignmentKind::ALL.to_vec()),
        workers in 1usize..=4,
    ) {
        let s = ToricSurface::hirzebruch(a);
        let m = EqLineBundle::new(coeffs);
        let base = series_with(kind, &s, &m, 2, &LimitOptions::default()).unwrap();
        let other = LimitOptions::default()
            .directions(vec![q(-7, 3), q(37, 5), q(-11, 13)])
            .workers(workers);
        prop_assert_eq!(series_with(kind, &s, &m, 2, &other).unwrap(), base);
    }

    #[test]
    fn twisting_by_a_character_changes_nothing(
        m in -2i64..=2,
        lift in (-3i64..=3, -3i64..=3),
        kind in prop::sample::select(AssignmentKind::ALL.to_vec()),
    ) {
        let s = ToricSurface::projective_plane();
        let b = EqLineBundle::new(vec![m, 0, 0]);
        let want = series_with(kind, &s, &b, 2, &LimitOptions::default()).unwrap();
        let got = series_with(kind, &s, &b.with_lift([lift.0, lift.1]), 2, &LimitOptions::default()).unwrap();
        prop_assert_eq!(got, want);
    }
}
