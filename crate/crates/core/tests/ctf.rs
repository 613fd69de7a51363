use cuspenv::ctf::*;
use cuspenv::jetcalc::{rat, Monomial, ParamPoly, Rational, TruncatedSeries};
use cuspenv::ctf::normal_form::psi;

fn data(alpha: &[i64], abcd: [i64; 4]) -> CtfData {
    CtfData::from_ints(alpha, &[abcd[0]], &[abcd[1]], &[abcd[2]], &[abcd[3]])
}

#[test]
fn whitney_umbrella_for_one_flat() {
    let c = classify_graph(&data(&[0, 1], [1, 1, 0, 1])).unwrap();
    assert_eq!(c.name, "A1");
    assert!(c.is_whitney_umbrella());
    assert_eq!(c.sign, None);
    assert_eq!(c.perestroika, Perestroika::GammaToU);
}

#[test]
fn two_flat_signs() {
    let minus = classify_graph(&data(&[0, 0, 1], [1, 1, 0, 1])).unwrap();
    assert_eq!(minus.name, "A2-");
    assert_eq!(minus.perestroika, Perestroika::GammaToGamma);
    let plus = classify_graph(&data(&[0, 0, 1], [1, 1, 0, -1])).unwrap();
    assert_eq!(plus.name, "A2+");
    assert_eq!(plus.perestroika, Perestroika::UToU);
}

#[test]
fn sign_carries_the_fold_coefficient() {
    // Same data as the A2- case but with B0 < 0.
    let c = classify_graph(&data(&[0, 0, 1], [1, -1, 0, 1])).unwrap();
    assert_eq!(c.sign, Some(Sign::Plus));
}

#[test]
fn three_flat_is_a3() {
    let c = classify_graph(&data(&[0, 0, 0, -2], [1, 3, 2, 1])).unwrap();
    assert_eq!(c.name, "A3");
    assert_eq!(c.normal_jet.to_string(), "x ; y^2 ; y^3 + x^3*y");
}

#[test]
fn non_generic_is_rejected() {
    assert!(matches!(classify_graph(&data(&[0, 1], [1, 0, 0, 1])), Err(CtfError::NotStarGeneric(_))));
    assert!(matches!(classify_graph(&data(&[0, 1], [1, 1, 1, 1])), Err(CtfError::NotStarGeneric(_))));
    assert!(matches!(classify_graph(&data(&[1], [1, 1, 0, 1])), Err(CtfError::NotFlat)));
}

#[test]
fn normal_form_of_psi_itself() {
    for d in [rat(3, 2), rat(-5, 7)] {
        let r = reduce_plane_germ(&psi(8, ParamPoly::constant(d.clone()))).unwrap();
        assert_eq!(r.delta, num_traits::Signed::abs(&d));
        assert_eq!(r.sign_flipped, d < Rational::from_integer(0.into()));
    }
}

fn round_trip(d: &CtfData) -> NormalFormReduction {
    let r = reduce_to_normal_form(d).unwrap();
    let f = build_family(d).with_order(3);
    let back = r
        .target_change
        .as_jet()
        .compose(&f.compose(&r.source_change.invert().unwrap().into_jet()).unwrap())
        .unwrap();
    assert!(back.eq_through(&psi(3, ParamPoly::constant(r.delta.clone())), 3));
    r
}

#[test]
fn normal_form_of_sample_families() {
    // With C = 0 and constant A the first component is a perfect square.
    assert_eq!(round_trip(&data(&[0, 1], [1, 1, 0, 1])).delta, Rational::from_integer(0.into()));
    assert!(round_trip(&data(&[0, 1], [1, 1, 1, 2])).delta > Rational::from_integer(0.into()));
    assert!(round_trip(&data(&[0, -3, 1], [2, -1, 5, 1])).delta > Rational::from_integer(0.into()));
}

#[test]
fn jacobian_two_jet_for_two_flat() {
    let d = data(&[0, 0, 3], [2, 5, -1, 4]);
    let j = build_family(&d).jacobian_determinant().truncate(2);
    assert_eq!(j, TruncatedSeries::monomial(8, Monomial::new(1, 1), ParamPoly::from_int(20)));
}

#[test]
fn jacobian_two_jet_for_one_flat_has_a_t_squared_term() {
    let d = data(&[0, 2], [2, 5, -1, 4]);
    let j = build_family(&d).jacobian_determinant().truncate(2);
    assert_eq!(j, TruncatedSeries::from_ints(8, &[(1, 1, 20), (0, 2, 40)]));
}
