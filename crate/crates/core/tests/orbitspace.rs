use cuspenv::jetcalc::{Monomial, ParamPoly, PlaneGermJet, Rational, TruncatedSeries};
use cuspenv::orbitspace::*;

fn psi(delta: ParamPoly) -> PlaneGermJet {
    let first = &TruncatedSeries::from_ints(8, &[(2, 0, 1), (0, 2, 1)])
        + &TruncatedSeries::monomial(8, Monomial::new(0, 3), delta);
    PlaneGermJet::new(first, TruncatedSeries::from_ints(8, &[(0, 2, 1), (3, 0, 1)])).unwrap()
}

fn psi_sym() -> PlaneGermJet {
    psi(ParamPoly::var("d"))
}

fn psi_n(v: i64) -> PlaneGermJet {
    psi(ParamPoly::from_int(v))
}

fn fold() -> PlaneGermJet {
    PlaneGermJet::from_ints(8, &[(1, 0, 1)], &[(0, 2, 1)])
}

fn cusp() -> PlaneGermJet {
    PlaneGermJet::from_ints(8, &[(1, 0, 1)], &[(0, 3, 1), (1, 1, 1)])
}

fn identity() -> PlaneGermJet {
    PlaneGermJet::identity(8)
}

#[test]
fn determinant_of_the_degree_two_to_four_matrix() {
    let p = inclusion_5_projection(&psi_sym(), 2, 2).unwrap();
    assert_eq!((p.matrix.rows(), p.matrix.cols()), (14, 14));
    let c = certificate(&p);
    assert_eq!(c.determinant, Some(ParamPoly::var("d").scale(&Rational::from_integer(1280.into()))));
    assert_eq!(c.vanishing_locus.conditions, vec!["d = 0".to_string()]);
    assert!(c.vanishing_locus.exact);
    let at_zero = certificate(&p.substitute("d", &ParamPoly::zero()));
    assert!(!at_zero.full_rank);
    assert_eq!(at_zero.rank, 13);
}

#[test]
fn specialisation_commutes_with_determinant() {
    let p = inclusion_5_projection(&psi_sym(), 2, 2).unwrap();
    let det = certificate(&p).determinant.unwrap();
    for v in [-3i64, -1, 2, 7] {
        let val = ParamPoly::from_int(v);
        let specialised = certificate(&p.substitute("d", &val)).determinant.unwrap();
        assert_eq!(det.substitute("d", &val), specialised);
        let direct = certificate(&inclusion_5_projection(&psi_n(v), 2, 2).unwrap()).determinant.unwrap();
        assert_eq!(direct, specialised);
    }
}

#[test]
fn first_inclusion_holds_for_every_delta() {
    let p = inclusion_4_projection(&psi_sym(), 2).unwrap();
    assert_eq!(p.matrix.rows(), 6);
    let c = certificate(&p);
    assert_eq!(c.rank, 6);
    assert!(c.holds_everywhere());
    for v in [0, 1, -2] {
        assert!(check_inclusion_4(&psi_n(v), 2).unwrap().full_rank);
    }
}

#[test]
fn inclusion_examples_for_simple_germs() {
    assert!(check_inclusion_4(&identity(), 1).unwrap().full_rank);
    assert!(!check_inclusion_4(&PlaneGermJet::zero(8), 1).unwrap().full_rank);
    assert!(check_inclusion_5(&identity(), 1, 1).unwrap().full_rank);
    assert!(!check_inclusion_5(&psi_n(0), 2, 2).unwrap().full_rank);
}

#[test]
fn determinacy_chain_for_psi() {
    let cert = du_plessis_determinacy(&psi_n(1), 2, 2).unwrap();
    assert!(cert.certified);
    assert_eq!(cert.order, 4);
    let chain = sharpen(&psi_n(1), cert).unwrap();
    assert_eq!(chain.reductions, vec![(4, true), (3, false)]);
    assert_eq!(chain.sharpened_order, 3);
    assert!(!du_plessis_determinacy(&psi_n(0), 2, 2).unwrap().certified);
}

#[test]
fn symbolic_certificate_excludes_delta_zero() {
    let cert = du_plessis_determinacy(&psi_sym(), 2, 2).unwrap();
    assert!(cert.certified);
    assert_eq!(cert.excluded, vec!["d = 0".to_string()]);
    assert!(order_reduction_check(&psi_sym(), 4).unwrap().full_rank);
}

#[test]
fn order_reduction_oracle_values() {
    assert!(!order_reduction_check(&psi_n(1), 3).unwrap().full_rank);
    assert!(order_reduction_check(&psi_n(1), 5).unwrap().full_rank);
    assert!(order_reduction_check(&psi_n(0), 4).unwrap().full_rank);
    assert!(order_reduction_check(&fold(), 3).unwrap().full_rank);
    assert!(!order_reduction_check(&cusp(), 2).unwrap().full_rank);
    assert!(!order_reduction_check(&cusp(), 3).unwrap().full_rank);
}

#[test]
fn determinacy_search_on_standard_germs() {
    let c = search_determinacy(&cusp(), 6).unwrap().unwrap();
    assert_eq!((c.k, c.l, c.order), (1, 2, 3));
    let f = search_determinacy(&fold(), 6).unwrap().unwrap();
    assert_eq!((f.k, f.l), (1, 1));
    let i = search_determinacy(&identity(), 6).unwrap().unwrap();
    assert_eq!((i.k, i.l), (1, 1));
}

#[test]
fn extended_codimension_values() {
    for cap in [4, 5, 6] {
        let r = extended_codimension(&psi_n(1), cap).unwrap();
        assert_eq!(r.codim, 2, "cap {cap}");
        let names: Vec<String> = r.complement.iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["(y, 0)", "(0, x)"]);
        assert!(r.conclusive);
    }
    let zero: Vec<usize> = [4, 5, 6].iter().map(|&c| extended_codimension(&psi_n(0), c).unwrap().codim).collect();
    assert_eq!(zero, [3, 3, 4]);
    assert!(!extended_codimension(&psi_n(0), 6).unwrap().conclusive);
    assert_eq!(extended_codimension(&fold(), 6).unwrap().codim, 0);
    assert_eq!(extended_codimension(&cusp(), 6).unwrap().codim, 0);
}

#[test]
fn miniversality_checks() {
    let o = 8;
    let yv = PlaneGermJet::from_ints(o, &[(0, 1, 1)], &[]);
    let xv = PlaneGermJet::from_ints(o, &[], &[(1, 0, 1)]);
    let y3 = PlaneGermJet::from_ints(o, &[(0, 3, 1)], &[]);
    let two = is_miniversal(&psi_n(1), &[yv.clone(), xv.clone()], 6).unwrap();
    assert!(two.miniversal);
    let three = is_miniversal(&psi_n(1), &[yv.clone(), xv.clone(), y3.clone()], 6).unwrap();
    assert!(three.spans);
    assert!(!three.miniversal);
    assert!(!is_miniversal(&psi_n(0), &[yv, xv, y3], 6).unwrap().miniversal);
}
