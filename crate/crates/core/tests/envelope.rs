use cuspenv::ctf::{build_family, psi, special_curve, CtfData};
use cuspenv::envelope::numeric::{assignment, directed_distance, distance_to_curve, sample_curve};
use cuspenv::envelope::*;
use cuspenv::jetcalc::{rat, CurveJet, ParamPoly, PlaneGermJet, TruncatedSeries, UniSeries};

fn curve(order: u32, a: &[i64], b: &[i64]) -> CurveJet {
    CurveJet::new(UniSeries::from_ints(order, a), UniSeries::from_ints(order, b))
}

#[test]
fn psi_envelope_has_two_semicubic_branches() {
    let f = psi(8, ParamPoly::one());
    let env = envelope_of(&f).unwrap();
    assert!(env.residual.is_empty());
    assert_eq!(env.branches.len(), 2);
    assert_eq!(env.branches[0].label, "y = 0");
    assert_eq!(env.branches[1].label, "x = 0");
    assert!(env.branches[0].image.eq_through(&curve(8, &[0, 0, 1], &[0, 0, 0, 1]), 5));
    assert!(env.branches[1].image.eq_through(&curve(8, &[0, 0, 1, 1], &[0, 0, 1]), 5));
    assert_eq!(env.tags(), vec![BranchTag::SemicubicCusp, BranchTag::SemicubicCusp]);

    let degenerate = envelope_of(&psi(8, ParamPoly::zero())).unwrap();
    assert_eq!(degenerate.tags(), vec![BranchTag::SemicubicCusp, BranchTag::DegenerateCusp]);
}

#[test]
fn symbolic_delta_reports_degeneration_locus() {
    let env = envelope_of(&psi(8, ParamPoly::var("d"))).unwrap();
    assert_eq!(env.branches[1].tag, BranchTag::SemicubicCusp);
    assert_eq!(env.branches[1].fails_when, vec!["d = 0".to_string()]);
    assert!(env.branches[0].fails_when.is_empty());
}

#[test]
fn fold_and_linear_germs() {
    let fold = PlaneGermJet::from_ints(6, &[(1, 0, 1)], &[(0, 2, 1)]);
    let b = critical_branches(&fold).unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b[0].label, "y = 0");
    let lin = PlaneGermJet::from_ints(6, &[(1, 0, 2), (0, 1, 1)], &[(0, 1, 1)]);
    assert!(critical_branches(&lin).unwrap().is_empty());
    assert!(matches!(critical_branches(&PlaneGermJet::from_ints(6, &[(1, 0, 1)], &[(2, 0, 1)])), Err(EnvelopeError::ZeroJacobian)));
}

#[test]
fn deformed_germ_branch_by_implicit_function() {
    // psi_1 + (lambda*y, 0): J = x (4y - 3 lambda x - 6xy - 9xy^2).
    let lambda = ParamPoly::var("lambda");
    let f = psi(8, ParamPoly::one());
    let h = PlaneGermJet::new(
        f.component(0) + &TruncatedSeries::y(8).scale(&lambda),
        f.component(1).clone(),
    )
    .unwrap();
    let set = critical_set(&h).unwrap();
    assert!(set.residual.is_empty());
    assert_eq!(set.branches.len(), 2);
    for b in &set.branches {
        assert!(jacobian_along(&h, b).unwrap().is_zero(), "{}", b.label);
    }
    let graph = set.branches[1].parameterization.component(1);
    assert_eq!(graph.coeff(1), lambda.scale(&rat(3, 4)));
}

#[test]
fn puiseux_branches_are_sound() {
    // J = -3x^2: a double line, reported once.
    let f = PlaneGermJet::from_ints(8, &[(0, 1, 1)], &[(3, 0, 1), (0, 3, 1)]);
    let set = critical_set(&f).unwrap();
    assert_eq!(set.branches.len(), 1);
    let g = PlaneGermJet::from_ints(9, &[(1, 0, 1)], &[(0, 3, 1), (3, 1, -3)]);
    // J = 3y^2 - 3x^3: a semicubic critical curve
    let set = critical_set(&g).unwrap();
    assert!(set.residual.is_empty(), "{:?}", set.residual);
    assert_eq!(set.branches.len(), 1);
    assert!(jacobian_along(&g, &set.branches[0]).unwrap().is_zero());
}

#[test]
fn support_is_a_branch_of_every_family() {
    let samples = [
        CtfData::from_ints(&[1], &[1], &[2], &[0], &[1]),
        CtfData::from_ints(&[0, 1], &[1], &[1], &[0], &[1]),
        CtfData::from_ints(&[0, 0, 3], &[2], &[-1], &[1], &[1]),
    ];
    let support = curve(8, &[0, 0, 1], &[0, 0, 0, 1]);
    for data in &samples {
        let env = envelope_of(&build_family(data)).unwrap();
        assert!(
            env.branches.iter().any(|b| b.image.eq_through(&support, 5)),
            "{:?}",
            env.branches.iter().map(|b| b.image.to_string()).collect::<Vec<_>>()
        );
    }
    let non_flat = envelope_of(&build_family(&samples[0])).unwrap();
    assert_eq!(non_flat.branches.len(), 1);
}

#[test]
fn flat_family_second_branch_matches_special_curve() {
    let data = CtfData::from_ints(&[0, 0, 3], &[2], &[-1], &[1], &[1]);
    let env = envelope_of(&build_family(&data)).unwrap();
    let special = special_curve(&data);
    let second = env.branches.iter().find(|b| b.label == "x = 0").expect("x = 0 branch");
    assert!(second.image.eq_through(&special.curve, 3), "{} vs {}", second.image, special.curve);
}

#[test]
fn classification_examples() {
    assert_eq!(classify_branch(&curve(6, &[0, 0, 1], &[0, 0, 0, 1])).tag, BranchTag::SemicubicCusp);
    assert_eq!(classify_branch(&curve(6, &[0, 1], &[0, 0, 1])).tag, BranchTag::Regular);
    assert_eq!(classify_branch(&curve(6, &[0, 0, 1, 1], &[0, 0, 1])).tag, BranchTag::SemicubicCusp);
    assert_eq!(classify_branch(&curve(6, &[0, 0, 1], &[0, 0, 1])).tag, BranchTag::DegenerateCusp);
    assert_eq!(classify_branch(&curve(2, &[0, 0, 1], &[0, 0, 1])).tag, BranchTag::Unresolved);
}

fn deformed_branch(order: u32) -> CurveJet {
    let lambda = ParamPoly::var("lambda");
    let d = ParamPoly::var("d");
    CurveJet::new(
        UniSeries::from_coeffs(order, vec![ParamPoly::zero(), lambda, ParamPoly::one(), d]),
        UniSeries::from_ints(order, &[0, 0, 1]),
    )
}

#[test]
fn self_intersection_closed_form() {
    let b = deformed_branch(8);
    let si = self_intersection(&b).unwrap();
    assert_eq!(si.existence, Existence::Conditional);
    assert_eq!(si.condition.as_deref(), Some("lambda/d < 0"));
    let [px, py] = si.point.unwrap();
    assert_eq!(px.to_string(), "-lambda/d");
    assert_eq!(py.to_string(), "-lambda/d");
    assert!(si.exact);

    let at = |l: (i64, i64), d: i64| {
        b.substitute_param("lambda", &ParamPoly::constant(rat(l.0, l.1)))
            .substitute_param("d", &ParamPoly::from_int(d))
    };
    let yes = self_intersection(&at((-1, 100), 1)).unwrap();
    assert!(yes.exists());
    let [px, py] = yes.point.unwrap();
    assert_eq!(px.as_rational(), Some(rat(1, 100)));
    assert_eq!(py.as_rational(), Some(rat(1, 100)));
    let [s1, s2] = yes.exact_parameters.unwrap();
    assert_eq!((s1.as_rational().unwrap(), s2.as_rational().unwrap()), (rat(-1, 10), rat(1, 10)));
    assert_eq!(self_intersection(&at((1, 100), 1)).unwrap().existence, Existence::Absent);
    assert_eq!(self_intersection(&at((0, 1), 1)).unwrap().existence, Existence::Boundary);
}

#[test]
fn tangency_examples() {
    let axis = curve(6, &[0, 1], &[0]);
    assert_eq!(tangency_order(&axis, &curve(6, &[0, 1], &[0, 1])).unwrap(), TangencyOrder::Exact(0));
    assert_eq!(tangency_order(&axis, &curve(6, &[0, 1], &[0, 0, 1])).unwrap(), TangencyOrder::Exact(1));
    assert_eq!(tangency_order(&axis, &curve(6, &[0, 1], &[0, 0, 0, 1])).unwrap(), TangencyOrder::Exact(2));
}

#[test]
fn numeric_cloud_tracks_symbolic_branches() {
    let f = psi(8, ParamPoly::one());
    let none = |_: &str| None;
    let branches = [
        sample_curve(&UniSeries::from_ints(8, &[0, 0, 1]), &UniSeries::from_ints(8, &[0, 0, 0, 1]), &none, -1.0, 1.0, 20000).unwrap(),
        sample_curve(&UniSeries::from_ints(8, &[0, 0, 1, 1]), &UniSeries::from_ints(8, &[0, 0, 1]), &none, -1.0, 1.0, 20000).unwrap(),
    ];
    let cloud = numeric_envelope(&f, &none, Window::square(1.0), 512).unwrap();
    let germ = numeric_germ_envelope(&f, &none, Window::square(1.0), 512).unwrap();
    assert!(germ.points.len() < cloud.points.len(), "third factor is excluded");
    let values: Vec<[f64; 2]> = germ.points.iter().map(|p| p.value).collect();
    let d = directed_distance(&values, &branches);
    assert!(d <= 2.0 / 512.0, "{d}");
    let _ = assignment(&[]);
}

#[test]
fn numeric_cloud_of_linear_map_is_empty_and_fold_lies_on_axis() {
    let none = |_: &str| None;
    let lin = PlaneGermJet::from_ints(4, &[(1, 0, 1)], &[(0, 1, 1)]);
    assert!(numeric_envelope(&lin, &none, Window::square(1.0), 64).unwrap().is_empty());
    let fold = PlaneGermJet::from_ints(4, &[(1, 0, 1)], &[(0, 2, 1)]);
    let cloud = numeric_envelope(&fold, &none, Window { x0: -1.0, x1: 1.0, y0: -0.93, y1: 1.07 }, 64).unwrap();
    assert!(!cloud.is_empty());
    assert!(cloud.points.iter().all(|p| p.value[1].abs() < 1e-3));
}

#[test]
fn numeric_cloud_converges_under_refinement() {
    let none = |_: &str| None;
    let f = psi(8, ParamPoly::one());
    let window = Window { x0: -0.23, x1: 0.27, y0: -0.23, y1: 0.27 };
    let support = |s: f64| [s * s, s * s * s];
    let second = |s: f64| [s * s + s * s * s, s * s];
    let distance = |res: usize| {
        let cloud = numeric_envelope(&f, &none, window, res).unwrap();
        cloud
            .points
            .iter()
            .map(|p| {
                distance_to_curve(p.value, &support, -0.3, 0.3, 400).min(distance_to_curve(p.value, &second, -0.3, 0.3, 400))
            })
            .fold(0.0, f64::max)
    };
    let mut previous = distance(32);
    for res in [64, 128, 256] {
        let d = distance(res);
        assert!(d <= previous / 2.0, "resolution {res}: {d} vs {previous}");
        previous = d;
    }
}

#[test]
fn branch_on_the_negative_side_of_a_steep_edge() {
    // After a shear, one critical branch is x = -(3/4) y^4 + ...: its edge
    // polynomial has no rational root in the x > 0 direction.
    let f = PlaneGermJet::from_ints(8, &[(2, 0, 1), (0, 2, 1), (3, 1, 1)], &[(0, 2, 1), (3, 0, 1)]);
    let shear = PlaneGermJet::from_ints(8, &[(1, 0, 1), (0, 1, 1)], &[(1, 0, -1)]);
    let g = f.compose(&shear).unwrap();
    let set = critical_set(&g).unwrap();
    assert!(set.residual.is_empty());
    assert_eq!(set.branches.len(), 2);
    for b in &set.branches {
        assert!(jacobian_along(&g, b).unwrap().is_zero());
    }
    let steep = set.branches.iter().find(|b| b.parameterization.component(0).valuation() == Some(4)).unwrap();
    assert_eq!(steep.parameterization.component(0).coeff(4), ParamPoly::constant(rat(-3, 4)));
    let mut tags: Vec<String> = envelope_of(&g).unwrap().tags().iter().map(|t| t.to_string()).collect();
    tags.sort();
    assert_eq!(tags, ["degenerate-cusp", "semicubic-cusp"]);
}
