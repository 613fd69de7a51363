use cuspenv::bifurcate::*;
use cuspenv::ctf::psi;
use cuspenv::envelope::{BranchTag, TangencyOrder};
use cuspenv::jetcalc::{rat, Monomial, ParamPoly, PlaneGermJet, Rational, SpaceGermJet, TruncatedSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(name: &str) -> ParamPoly {
    ParamPoly::var(name)
}

fn c(r: Rational) -> ParamPoly {
    ParamPoly::constant(r)
}

fn series(order: u32, terms: &[(u32, u32, ParamPoly)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(order, terms.iter().map(|(i, j, v)| (Monomial::new(*i, *j), v.clone())))
}

#[test]
fn specialization_recovers_base_and_subfamilies() {
    let fam = DeformationFamily::psi_family(8, p("d"));
    let zero = |n| (n, ParamValue::Rational(rat(0, 1)));
    assert_eq!(fam.specialize(&[zero("lambda"), zero("mu"), zero("nu")]).unwrap(), psi(8, p("d")));

    let h = fam.specialize(&[("lambda", ParamValue::Formal), zero("mu"), zero("nu")]).unwrap();
    let expected_h = PlaneGermJet::new(psi(8, p("d")).component(0) + &series(8, &[(0, 1, p("lambda"))]), psi(8, p("d")).component(1).clone()).unwrap();
    assert_eq!(h, expected_h);
    assert_eq!(DeformationFamily::h_family(8, p("d")).generic(), expected_h);

    let k = fam.at(&[("lambda", rat(0, 1)), ("mu", rat(1, 3)), ("nu", rat(0, 1))]).unwrap();
    let expected_k = PlaneGermJet::new(psi(8, p("d")).component(0).clone(), psi(8, p("d")).component(1) + &series(8, &[(1, 0, c(rat(1, 3)))])).unwrap();
    assert_eq!(k, expected_k);

    assert!(matches!(fam.specialize(&[zero("kappa")]), Err(BifurcateError::UnknownParameter(_))));
    assert!(matches!(fam.specialize(&[zero("lambda")]), Err(BifurcateError::Unassigned(_))));
    assert!(fam.restrict(&["omega"]).is_err());
}

#[test]
fn h_series_reproduces_critical_quadratic() {
    for delta in [p("d"), ParamPoly::one()] {
        let hs = h_branch_series(&delta, 6).unwrap();
        let expected = series(
            6,
            &[
                (2, 0, c(rat(3, 1)) * &p("lambda")),
                (2, 1, ParamPoly::from_int(6)),
                (2, 2, &ParamPoly::from_int(9) * &delta),
                (1, 1, ParamPoly::from_int(-4)),
            ],
        );
        assert_eq!(hs.critical_polynomial, expected);

        let root = &hs.sqrt_discriminant;
        assert_eq!(root.coeff(0), ParamPoly::from_int(4));
        assert_eq!(root.coeff(1), ParamPoly::from_int(-6));
        let dl = &delta * &p("lambda");
        assert_eq!(root.coeff(2), dl.scale(&rat(-27, 2)));
        assert_eq!(&(root * root) - &hs.discriminant, cuspenv::jetcalc::UniSeries::zero(6));

        assert!(hs.residual().is_zero());
        assert!(hs.jacobian_residual().unwrap().is_zero());
        assert_eq!(hs.branch.coeff(1), p("lambda").scale(&rat(3, 4)));
        assert!(hs.branch.substitute_param("lambda", &ParamPoly::zero()).is_zero());
    }
    assert!(matches!(h_branch_series(&ParamPoly::zero(), 6), Err(BifurcateError::DegenerateDelta)));
}

fn space(order: u32, a: TruncatedSeries, b: TruncatedSeries) -> SpaceGermJet {
    SpaceGermJet::new(a, b, TruncatedSeries::x(order)).unwrap()
}

// Source variables: x is the family parameter, y the branch parameter.
fn umbrella_family(delta: Rational) -> SpaceGermJet {
    let o = 8;
    space(o, series(o, &[(1, 1, ParamPoly::one()), (0, 2, ParamPoly::one()), (0, 3, c(delta))]), TruncatedSeries::from_ints(o, &[(0, 2, 1)]))
}

fn cusp_family() -> SpaceGermJet {
    let o = 8;
    space(o, series(o, &[(0, 2, ParamPoly::one()), (2, 1, c(rat(3, 4)))]), TruncatedSeries::from_ints(o, &[(0, 3, 1)]))
}

#[test]
fn branch_surfaces_are_recognised() {
    for delta in [rat(1, 1), rat(-2, 1), rat(1, 7)] {
        let class = classify_branch_surface(&umbrella_family(delta)).unwrap();
        assert_eq!(class.kind, SurfaceKind::WhitneyUmbrella);
        assert!(!class.witness.is_empty());
    }
    let cusp = classify_branch_surface(&cusp_family()).unwrap();
    assert_eq!(cusp.kind, SurfaceKind::CuspidalEdge);
    // The quartic term left after normalisation lies beyond the recognised jet.
    assert_eq!(cusp.beyond_jet.as_deref(), Some("v-coefficient 27/64*u^4 past the 3-jet"));

    let o = 8;
    let edge = space(o, TruncatedSeries::from_ints(o, &[(0, 2, 1)]), TruncatedSeries::from_ints(o, &[(0, 3, 1)]));
    assert_eq!(classify_branch_surface(&edge).unwrap().kind, SurfaceKind::CuspidalEdge);

    let a2 = space(o, TruncatedSeries::from_ints(o, &[(0, 2, 1)]), TruncatedSeries::from_ints(o, &[(0, 3, 1), (2, 1, 1)]));
    assert_eq!(classify_branch_surface(&a2).unwrap().kind, SurfaceKind::Other);
    let immersion = space(o, TruncatedSeries::y(o), TruncatedSeries::from_ints(o, &[(0, 2, 1)]));
    assert_eq!(classify_branch_surface(&immersion).unwrap().kind, SurfaceKind::Other);
    let no_parameter = SpaceGermJet::new(TruncatedSeries::y(o), TruncatedSeries::y(o), TruncatedSeries::y(o)).unwrap();
    assert!(matches!(classify_branch_surface(&no_parameter), Err(BifurcateError::NoParameterComponent)));
}

#[test]
fn surface_class_survives_parameter_preserving_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..12 {
        let a = loop {
            let a = rng.gen_range(-4i64..=4);
            if a != 0 {
                break a;
            }
        };
        let b = rng.gen_range(-4i64..=4);
        let o = 8;
        // (λ, s) -> (λ, a s + b λ)
        let change = PlaneGermJet::from_ints(o, &[(1, 0, 1)], &[(0, 1, a), (1, 0, b)]);
        for (surface, kind) in [(umbrella_family(rat(1, 1)), SurfaceKind::WhitneyUmbrella), (cusp_family(), SurfaceKind::CuspidalEdge)] {
            let moved = surface.compose(&change).unwrap();
            assert_eq!(classify_branch_surface(&moved).unwrap().kind, kind, "a = {a}, b = {b}");
        }
    }
}

#[test]
fn tangential_deformation_has_second_order_contact() {
    for lambda in [rat(1, 10), rat(-1, 10), rat(3, 7)] {
        let check = tangential_deformation_check(&rat(1, 1), &lambda).unwrap();
        assert_eq!(check.tangency_order, TangencyOrder::Exact(2));
        // (λY, Y² + x³ − (2/λ)(x²Y + Y³)) modulo degree 4.
        let o = 8;
        let k = c(-rat(2, 1) / &lambda);
        let expected = PlaneGermJet::new(
            series(o, &[(0, 1, c(lambda.clone()))]),
            series(o, &[(0, 2, ParamPoly::one()), (3, 0, ParamPoly::one()), (2, 1, k.clone()), (0, 3, k)]),
        )
        .unwrap();
        assert!(check.reduced_jet.eq_through(&expected, 3), "{}", check.reduced_jet);
        assert!(check.matches_normal_form);
        assert!(check.normal_form.eq_through(&PlaneGermJet::from_ints(o, &[(0, 1, 1)], &[(3, 0, 1), (2, 1, 1)]), 3));
    }
    assert!(matches!(tangential_deformation_check(&rat(1, 1), &rat(0, 1)), Err(BifurcateError::ZeroParameter(_))));
    assert!(tangential_deformation_check(&rat(0, 1), &rat(1, 10)).is_err());
}

fn line(fam: &DeformationFamily, name: &str, delta: Rational) -> SweepReport {
    sweep(fam, &SweepAxis::line(name, rat(-1, 10), rat(1, 10), 21), &delta, &SweepConfig::default()).unwrap()
}

fn gamma_events(r: &SweepReport) -> Vec<&BifurcationEvent> {
    r.events_of(EventKind::GammaToU)
}

#[test]
fn h_sweep_has_one_transition_on_the_special_branch() {
    let r = line(&DeformationFamily::h_family(12, p("d")), "lambda", rat(1, 1));
    assert_eq!(r.samples.len(), 21);
    let g = gamma_events(&r);
    assert_eq!(g.len(), 1, "{:?}", r.events);
    assert_eq!(g[0].stratum.as_deref(), Some("lambda = 0"));
    assert_eq!(g[0].branch, "special");
    let EventLocation::Value { from, to, .. } = &g[0].location else { panic!() };
    assert!(to - from <= 1e-6 && *from <= 0.0 && *to >= 0.0);
    assert!(r.events_of(EventKind::Unresolved).is_empty());
    for s in &r.samples {
        assert!(s.error.is_none());
        assert_eq!(s.branch(BranchRole::Support).unwrap().tag, BranchTag::SemicubicCusp, "{:?}", s.values);
    }
}

#[test]
fn h_sweep_matches_closed_form_self_intersection() {
    for delta in [rat(1, 1), rat(-1, 1), rat(2, 1)] {
        let r = line(&DeformationFamily::h_family(12, p("d")), "lambda", delta.clone());
        let d: f64 = num_traits::ToPrimitive::to_f64(&delta).unwrap();
        for s in &r.samples {
            let lambda = s.value("lambda").unwrap();
            let special = s.branch(BranchRole::Special).unwrap();
            assert_eq!(special.self_intersects(), lambda / d < 0.0, "lambda {lambda}, delta {d}");
            if let Some(dp) = special.double_points.first() {
                let q = -lambda / d;
                assert!((dp.point[0] - q).abs() < 1e-12 && (dp.point[1] - q).abs() < 1e-12);
                let root = q.sqrt();
                assert!((dp.parameters[0] + root).abs() < 1e-9 && (dp.parameters[1] - root).abs() < 1e-9);
            }
        }
        assert_eq!(gamma_events(&r).len(), 1);
    }
}

#[test]
fn k_sweep_mirrors_h_sweep() {
    let h = line(&DeformationFamily::h_family(12, p("d")), "lambda", rat(1, 1));
    let k = line(&DeformationFamily::k_family(12, p("d")), "mu", rat(1, 1));
    let g = gamma_events(&k);
    assert_eq!(g.len(), 1);
    assert_eq!(g[0].stratum.as_deref(), Some("mu = 0"));
    assert_eq!(g[0].branch, "support");
    for s in &k.samples {
        assert_eq!(s.branch(BranchRole::Special).unwrap().tag, BranchTag::SemicubicCusp, "{:?}", s.values);
    }
    let signature = |r: &SweepReport, swap: bool, name: &str| {
        let mut v: Vec<(String, Option<String>, String)> = r
            .events
            .iter()
            .map(|e| {
                let branch = match (swap, e.branch.as_str()) {
                    (true, "support") => "special".to_string(),
                    (true, "special") => "support".to_string(),
                    (_, b) => b.to_string(),
                };
                (e.kind.to_string(), e.stratum.as_ref().map(|s| s.replace(name, "t")), branch)
            })
            .collect();
        v.sort();
        v
    };
    assert_eq!(signature(&h, false, "lambda"), signature(&k, true, "mu"));
}

#[test]
fn tangency_events_flank_the_double_cusp() {
    let r = line(&DeformationFamily::h_family(12, p("d")), "lambda", rat(1, 1));
    let t = r.events_of(EventKind::SecondOrderSelfTangency);
    let strata: Vec<_> = t.iter().map(|e| e.stratum.clone().unwrap()).collect();
    assert_eq!(strata, vec!["lambda < 0".to_string(), "lambda > 0".to_string()]);
    assert!(t.iter().all(|e| e.confidence == Confidence::High));
}

#[test]
fn nu_sweep_changes_nothing() {
    let fam = DeformationFamily::psi_family(12, p("d")).restrict(&["nu"]).unwrap();
    let r = line(&fam, "nu", rat(1, 1));
    assert!(r.events.is_empty(), "{:?}", r.events);
    for s in &r.samples {
        assert_eq!(s.envelope.as_ref().unwrap().tags(), vec![BranchTag::SemicubicCusp, BranchTag::SemicubicCusp]);
    }
}

#[test]
fn sweep_rejects_bad_input() {
    let fam = DeformationFamily::h_family(8, p("d"));
    let cfg = SweepConfig::default();
    assert!(matches!(
        sweep(&fam, &SweepAxis::line("lambda", rat(-1, 2), rat(1, 2), 3), &rat(1, 1), &cfg),
        Err(BifurcateError::OutsideRadius(..))
    ));
    assert!(matches!(
        sweep(&fam, &SweepAxis::line("lambda", rat(-1, 10), rat(1, 10), 3), &rat(0, 1), &cfg),
        Err(BifurcateError::DegenerateDelta)
    ));
    assert!(matches!(
        sweep(&fam, &SweepAxis::line("mu", rat(-1, 10), rat(1, 10), 3), &rat(1, 1), &cfg),
        Err(BifurcateError::UnknownParameter(_))
    ));
}

#[test]
fn grid_sweep_finds_reconnections_only_across_axes() {
    let fam = DeformationFamily::psi_family(12, p("d")).restrict(&["lambda", "mu"]).unwrap();
    let r = sweep(&fam, &SweepAxis::grid(["lambda", "mu"], rat(-1, 5), rat(1, 5), 9), &rat(1, 1), &SweepConfig::default()).unwrap();
    let beaks = r.events_of(EventKind::Beaks);
    assert!(!beaks.is_empty());
    for e in &beaks {
        assert_eq!(e.confidence, Confidence::Low);
        assert!(matches!(e.stratum.as_deref(), Some("lambda = 0") | Some("mu = 0")), "{e:?}");
    }
    // Off the axes the saddle value has the sign of -lambda*mu.
    for s in &r.samples {
        let (l, m) = (s.value("lambda").unwrap(), s.value("mu").unwrap());
        if let Some(saddle) = s.saddle.filter(|_| l != 0.0 && m != 0.0) {
            assert_eq!(saddle.value > 0.0, l * m < 0.0, "{l} {m}");
        }
    }
}

#[test]
fn double_cusp_diagram_has_four_quadrants() {
    let cfg = SweepConfig {
        picture_resolution: 80,
        ..SweepConfig::default()
    };
    let d = double_cusp_diagram(&rat(1, 1), 9, &cfg).unwrap();
    assert_eq!(d.strata, vec!["lambda = 0", "mu = 0"]);
    assert_eq!(d.quadrants.len(), 4);
    assert!(d.quadrants.iter().all(|q| !q.curves.is_empty()));
    assert_eq!(d.lambda_events.iter().filter(|e| e.kind == EventKind::GammaToU).count(), 1);
    assert_eq!(d.mu_events.iter().filter(|e| e.kind == EventKind::GammaToU).count(), 1);
}
