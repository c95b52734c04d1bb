use critical_hl::exponents::{critical_exponents, VariantTag};
use critical_hl::opnorm::{ascent_norm, spectral_norm, AscentSettings};
use critical_hl::tensor::mixed_norm;
use critical_hl::witnesses::{
    make_dot, make_gaussian_random, make_identity, make_partial_dot, make_sign_random, make_t0,
    WitnessSpec,
};
use critical_hl::{ScalarField, C64};

fn within(est: f64, exact: f64) -> bool {
    est >= exact * (1.0 - 1e-6) && est <= exact * (1.0 + 1e-9)
}

#[test]
fn pinning_nothing_gives_the_diagonal() {
    for (m, n) in [(2, 5), (3, 4), (4, 3)] {
        assert_eq!(
            make_partial_dot(m, n, 0).unwrap().coeffs(),
            make_dot(m, n).unwrap().coeffs()
        );
    }
}

#[test]
fn diagonal_has_unit_mixed_norm_at_derived_exponents() {
    for m in 2..=4 {
        let s = critical_exponents(m, VariantTag::Derived).unwrap();
        for n in 2..=16 {
            let v = mixed_norm(&make_dot(m, n).unwrap(), &s).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "m={m} n={n}: {v}");
        }
    }
}

#[test]
fn one_pinned_slot_attains_the_second_exponent() {
    for m in 3..=4 {
        let s = critical_exponents(m, VariantTag::Derived).unwrap();
        for n in 2..=10 {
            let v = mixed_norm(&make_partial_dot(m, n, 1).unwrap(), &s).unwrap();
            let want = (n as f64).powf(1.0 / m as f64);
            assert!(
                (v - want).abs() < 1e-12 * want,
                "m={m} n={n}: {v} vs {want}"
            );
        }
    }
}

#[test]
fn ascent_matches_analytic_norms() {
    let settings = AscentSettings::default();
    for (m, n, r) in [(2, 6, 0), (3, 5, 1), (4, 6, 2), (5, 4, 3)] {
        let t = make_partial_dot(m, n, r).unwrap();
        let analytic = t.analytic_norm().unwrap();
        assert_eq!(analytic.derived, r > 2);
        let est = ascent_norm(&t, &settings).unwrap().value;
        assert!(
            within(est, analytic.value),
            "m={m} n={n} r={r}: {est} vs {}",
            analytic.value
        );
    }
}

#[test]
fn t0_norm_three_ways() {
    let t = make_t0(4, 9).unwrap();
    assert_eq!(t.analytic_norm().unwrap().value, 3.0);
    assert!((spectral_norm(&t).unwrap().value - 3.0).abs() < 1e-12);
    assert!(within(
        ascent_norm(&t, &AscentSettings::default()).unwrap().value,
        3.0
    ));
    assert_eq!(make_t0(1, 1).unwrap().coeffs(), &[1.0]);
}

#[test]
fn identity_is_orthogonal() {
    assert!((spectral_norm(&make_identity(7).unwrap()).unwrap().value - 1.0).abs() < 1e-12);
}

#[test]
fn sign_forms_are_signs_and_reproducible() {
    let a = make_sign_random(2, 8, 11).unwrap();
    assert_eq!(a.coeffs().len(), 64);
    assert!(a.coeffs().iter().all(|&x| x == 1.0 || x == -1.0));
    assert_eq!(a.coeffs(), make_sign_random(2, 8, 11).unwrap().coeffs());
    assert_ne!(a.coeffs(), make_sign_random(2, 8, 12).unwrap().coeffs());
}

#[test]
fn gaussian_coefficients_are_centered() {
    let g = make_gaussian_random::<f64>(&[100, 100], 3).unwrap();
    let mean = g.coeffs().iter().sum::<f64>() / 1e4;
    assert!(mean.abs() < 0.05, "{mean}");
    let z = make_gaussian_random::<C64>(&[4, 4], 3).unwrap();
    assert!(z.coeffs().iter().any(|c| c.im != 0.0));
    assert_eq!(
        z.coeffs(),
        make_gaussian_random::<C64>(&[4, 4], 3).unwrap().coeffs()
    );
}

#[test]
fn specs_round_trip_and_build() {
    for s in [
        "dot:m=3,n=8",
        "partial:m=3,n=8,r=1",
        "t0:n1=4,n2=64",
        "identity:n=6",
        "sign:m=2,n=32,seed=7",
        "gauss:dims=8x8x8,seed=7",
        "gauss:dims=3x4,seed=1,field=complex",
    ] {
        let spec: WitnessSpec = s.parse().unwrap();
        assert_eq!(spec.to_string().parse::<WitnessSpec>().unwrap(), spec);
        let form = spec.build().unwrap();
        assert_eq!(Some(form.arity()), spec.arity());
    }
    let z: WitnessSpec = "gauss:dims=3x4,seed=1,field=complex".parse().unwrap();
    assert_eq!(z.build().unwrap().field(), ScalarField::Complex);
}

#[test]
fn malformed_specs_are_rejected() {
    for s in [
        "",
        "dot",
        "dot:m=3",
        "dot:m=3,n=8,n=9",
        "dot:m=3,n=8,q=1",
        "partial:m=3,n=8,r=2",
        "gauss:dims=,seed=1",
        "gauss:dims=4x0,seed=1",
        "gauss:dims=4x4,seed=1,field=quaternion",
        "sign:m=1,n=4,seed=1",
        "unknown:n=1",
    ] {
        let built = s.parse::<WitnessSpec>().and_then(|w| w.build().map(|_| ()));
        assert!(built.is_err(), "{s:?} accepted");
    }
}
