use hilbloc::exact::qi;
use hilbloc::identities::delta;
use hilbloc::toric::intersection_numbers;
use hilbloc::universal::{
    absolute_family, fit, fit_absolute, fit_relative_normal, relative_normal_family, xi_delta_coefficient,
    xi_normal_coefficient, Sample, UniversalPoly, Var,
};
use hilbloc::{integrate, AssignmentKind, EqLineBundle, LimitOptions, SurfaceInvariants, ToricSurface};

#[test]
fn first_coefficient_is_delta() {
    let s = ToricSurface::projective_plane();
    for m in -3..=3 {
        let b = EqLineBundle::new(vec![m, 0, 0]);
        let inv = intersection_numbers(&s, &b, None).unwrap();
        assert_eq!(integrate(AssignmentKind::T, &s, &b, 1).unwrap(), delta(&inv));
    }
}

#[test]
fn relative_tangent_fits_match_normal_coefficients() {
    let opts = LimitOptions::default();
    for n in 1..=3 {
        let fam = relative_normal_family(AssignmentKind::T, n, &opts).unwrap();
        assert_eq!(fit_relative_normal(n, &fam).unwrap(), xi_normal_coefficient(n), "n={n}");
    }
}

#[test]
fn absolute_fits() {
    let opts = LimitOptions::default();
    for n in 1..=3 {
        let fam = absolute_family(AssignmentKind::T, n, &opts).unwrap();
        assert_eq!(fit_absolute(n, &fam).unwrap(), xi_delta_coefficient(n));
    }
    let fam = absolute_family(AssignmentKind::L, 2, &opts).unwrap();
    let want = UniversalPoly::new(
        Var::ABSOLUTE.to_vec(),
        2,
        [(vec![2, 0, 0, 0], hilbloc::exact::q(1, 2)), (vec![1, 0, 0, 0], hilbloc::exact::q(-1, 2))],
    );
    assert_eq!(fit_absolute(2, &fam).unwrap(), want);
}

#[test]
fn fit_is_stable_under_extra_samples() {
    let opts = LimitOptions::default();
    let mut fam = absolute_family(AssignmentKind::Seg, 2, &opts).unwrap();
    let base = fit_absolute(2, &fam).unwrap();
    for (a, coeffs) in [(3, vec![1, 1, 0, 2]), (4, vec![0, 2, 1, 0])] {
        let s = ToricSurface::hirzebruch(a);
        let m = EqLineBundle::new(coeffs);
        fam.push(Sample {
            label: format!("F{a}"),
            inv: intersection_numbers(&s, &m, None).unwrap(),
            value: integrate(AssignmentKind::Seg, &s, &m, 2).unwrap(),
        })
        .unwrap();
    }
    assert_eq!(fit_absolute(2, &fam).unwrap(), base);
}

#[test]
fn too_few_samples_are_rank_deficient() {
    let mut fam = hilbloc::universal::SampleFamily::default();
    for m in 0..3 {
        fam.push(Sample {
            label: format!("{m}"),
            inv: SurfaceInvariants::absolute(m * m, -3 * m, 9, 3),
            value: qi(m),
        })
        .unwrap();
    }
    assert!(matches!(
        fit(&Var::ABSOLUTE, 2, &fam),
        Err(hilbloc::Error::RankDeficient { .. })
    ));
}
