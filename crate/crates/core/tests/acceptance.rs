//! Acceptance runner: one timed PASS/FAIL line per criterion, non-zero exit
//! status if any criterion fails or overruns its time limit.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cuspenv::bifurcate::*;
use cuspenv::ctf::{build_family, classify_graph, psi, CtfData, CtfError, Sign};
use cuspenv::envelope::{envelope_of, self_intersection, BranchTag, Existence, TangencyOrder};
use cuspenv::jetcalc::{rat, CurveJet, Monomial, ParamPoly, PlaneGermJet, Rational, SpaceGermJet, TruncatedSeries, UniSeries};
use cuspenv::orbitspace::{
    check_inclusion_4, check_inclusion_5, du_plessis_determinacy, extended_codimension, is_miniversal, order_reduction_check,
    DEFAULT_CAP,
};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;


type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn p(name: &str) -> ParamPoly {
    ParamPoly::var(name)
}

fn int(v: i64) -> ParamPoly {
    ParamPoly::from_int(v)
}

fn term(order: u32, i: u32, j: u32, c: ParamPoly) -> TruncatedSeries {
    TruncatedSeries::monomial(order, Monomial::new(i, j), c)
}

fn psi_d(order: u32) -> PlaneGermJet {
    psi(order, p("d"))
}

fn determinant_certificate() -> Outcome {
    let c = check_inclusion_5(&psi_d(8), 2, 2).map_err(|e| e.to_string())?;
    ensure!(c.dimension == 14 && c.columns == 14, "matrix is {}x{}", c.dimension, c.columns);
    let expected = p("d").scale(&rat(1280, 1));
    ensure!(c.determinant.as_ref() == Some(&expected), "determinant {:?}", c.determinant.map(|d| d.to_string()));
    Ok(format!("14x14, det = {expected}"))
}

fn first_inclusion() -> Outcome {
    let c = check_inclusion_4(&psi_d(8), 2).map_err(|e| e.to_string())?;
    ensure!(c.columns == 8 && c.dimension == 6, "{} generators into dimension {}", c.columns, c.dimension);
    ensure!(c.rank == 6 && c.holds_everywhere(), "rank {}, vanishing locus {:?}", c.rank, c.vanishing_locus.conditions);
    Ok("8 generators, rank 6 for every d".into())
}

fn determinacy_chain() -> Outcome {
    let one = psi(8, ParamPoly::one());
    let cert = du_plessis_determinacy(&one, 2, 2).map_err(|e| e.to_string())?;
    ensure!(cert.certified && cert.order == 4, "certified {} at order {}", cert.certified, cert.order);
    let reduction = order_reduction_check(&one, 4).map_err(|e| e.to_string())?;
    ensure!(reduction.full_rank, "order reduction fails at d = 1 (rank {} of {})", reduction.rank, reduction.dimension);

    let zero = psi(8, ParamPoly::zero());
    let inc5 = check_inclusion_5(&zero, 2, 2).map_err(|e| e.to_string())?;
    let red0 = order_reduction_check(&zero, 4).map_err(|e| e.to_string())?;
    ensure!(!inc5.full_rank, "d = 0 passes the degree 2..4 inclusion");
    ensure!(
        !red0.full_rank,
        "d = 0: inclusion fails (rank {}/{}) but the order reduction holds (rank {}/{})",
        inc5.rank,
        inc5.dimension,
        red0.rank,
        red0.dimension
    );
    Ok("3-determined at d = 1, both checks fail at d = 0".into())
}

fn jacobian() -> Outcome {
    let j = psi_d(8).jacobian_determinant();
    let o = j.order();
    // 4xy - 3(2 + 3 d y) x^2 y
    let x2y = term(o, 2, 1, ParamPoly::one());
    let factor = &TruncatedSeries::constant(o, int(2)) + &term(o, 0, 1, p("d").scale(&rat(3, 1)));
    let expected = &term(o, 1, 1, int(4)) - &(&(&factor * &x2y)).scale(&int(3));
    ensure!(j == expected, "J = {j}");
    Ok(format!("J = {j}"))
}

fn curve(order: u32, a: &[i64], b: &[i64]) -> CurveJet {
    CurveJet::new(UniSeries::from_ints(order, a), UniSeries::from_ints(order, b))
}

fn envelope_branches() -> Outcome {
    let env = envelope_of(&psi(8, ParamPoly::one())).map_err(|e| e.to_string())?;
    ensure!(env.branches.len() == 2 && env.residual.is_empty(), "{} branches, residual {:?}", env.branches.len(), env.residual);
    let images = [curve(8, &[0, 0, 1], &[0, 0, 0, 1]), curve(8, &[0, 0, 1, 1], &[0, 0, 1])];
    for (b, want) in env.branches.iter().zip(&images) {
        ensure!(b.image.eq_through(want, 5), "branch {} has image {}", b.label, b.image);
    }
    ensure!(env.tags() == vec![BranchTag::SemicubicCusp; 2], "tags {:?}", env.tags());
    let degenerate = envelope_of(&psi(8, ParamPoly::zero())).map_err(|e| e.to_string())?;
    ensure!(
        degenerate.tags() == vec![BranchTag::SemicubicCusp, BranchTag::DegenerateCusp],
        "d = 0 tags {:?}",
        degenerate.tags()
    );
    Ok("(s^2, s^3) and (s^2 + s^3, s^2), degenerate second branch at d = 0".into())
}

fn codimension_and_miniversality() -> Outcome {
    let one = psi(8, ParamPoly::one());
    let o = 8;
    let dirs = [
        PlaneGermJet::from_ints(o, &[(0, 1, 1)], &[]),
        PlaneGermJet::from_ints(o, &[], &[(1, 0, 1)]),
        PlaneGermJet::from_ints(o, &[(0, 3, 1)], &[]),
    ];
    let mut problems = Vec::new();
    let codim = extended_codimension(&one, DEFAULT_CAP).map_err(|e| e.to_string())?;
    if codim.codim != 3 {
        problems.push(format!("extended codimension is {} (conclusive: {})", codim.codim, codim.conclusive));
    }
    let three = is_miniversal(&one, &dirs, DEFAULT_CAP).map_err(|e| e.to_string())?;
    if !three.miniversal {
        problems.push(format!("3-direction set not miniversal (spans: {})", three.spans));
    }
    if is_miniversal(&psi(8, ParamPoly::zero()), &dirs, DEFAULT_CAP).map_err(|e| e.to_string())?.miniversal {
        problems.push("d = 0 miniversal".into());
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let pair = [dirs[i].clone(), dirs[j].clone()];
        if is_miniversal(&one, &pair, DEFAULT_CAP).map_err(|e| e.to_string())?.miniversal {
            problems.push(format!("pair {{{}, {}}} is miniversal", dirs[i], dirs[j]));
        }
    }
    ensure!(problems.is_empty(), "{}", problems.join("; "));
    Ok("codim 3, three directions miniversal".into())
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// Random coefficient lists with `B0 != 0` and `A0 D0 != B0 C0`.
fn generic_abcd(rng: &mut ChaCha8Rng) -> [Vec<i64>; 4] {
    loop {
        let mut lists: [Vec<i64>; 4] = Default::default();
        for l in &mut lists {
            *l = (0..3).map(|_| rng.gen_range(-4..=4)).collect();
        }
        let [a, b, c, d] = [lists[0][0], lists[1][0], lists[2][0], lists[3][0]];
        if b != 0 && a * d != b * c {
            return lists;
        }
    }
}

fn flat_alpha(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let mut alpha = vec![0; n];
    alpha.push(nonzero(rng, 4));
    alpha.push(rng.gen_range(-4..=4));
    alpha
}

fn ctf(alpha: &[i64], abcd: &[Vec<i64>; 4]) -> CtfData {
    CtfData::from_ints(alpha, &abcd[0], &abcd[1], &abcd[2], &abcd[3])
}

fn ctf_jacobian_jet() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = Vec::new();
    for _ in 0..20 {
        let alpha = flat_alpha(&mut rng, 1);
        let abcd = generic_abcd(&mut rng);
        let j = build_family(&ctf(&alpha, &abcd)).jacobian_determinant();
        let expected = term(j.order(), 1, 1, int(4 * abcd[1][0]));
        if !j.eq_through(&expected, 2) {
            mismatches.push(format!("{} (alpha1 = {}, B0 = {})", j.truncate(2), alpha[1], abcd[1][0]));
        }
    }
    ensure!(mismatches.is_empty(), "{} of 20 differ from 4*B0*x*y, e.g. {}", mismatches.len(), mismatches[0]);
    Ok("20 of 20 equal 4*B0*x*y".into())
}

fn expected_normal_jet(order: u32, n: u32, plus: bool) -> SpaceGermJet {
    let s = if plus { 1 } else { -1 };
    let v3 = &term(order, 0, 3, ParamPoly::one()) + &term(order, n, 1, int(s));
    SpaceGermJet::new(TruncatedSeries::x(order), term(order, 0, 2, ParamPoly::one()), v3).expect("model")
}

fn graph_classification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut problems = Vec::new();
    let (mut even, mut sign_mismatch, mut with_b0) = (0, 0, 0);
    for _ in 0..30 {
        let n = rng.gen_range(1..=3usize);
        let alpha = flat_alpha(&mut rng, n);
        let mut abcd = generic_abcd(&mut rng);
        // Cover both signs of B0 explicitly.
        if rng.gen_bool(0.5) {
            abcd[1][0] = -abcd[1][0];
        }
        let data = ctf(&alpha, &abcd);
        let class = match classify_graph(&data) {
            Ok(c) => c,
            Err(e) => {
                problems.push(format!("n = {n}: {e}"));
                continue;
            }
        };
        if class.index != n as u32 || !class.name.starts_with(&format!("A{n}")) {
            problems.push(format!("n = {n} classified as {}", class.name));
        }
        if n % 2 == 0 {
            even += 1;
            let [a0, b0, c0, d0] = [abcd[0][0], abcd[1][0], abcd[2][0], abcd[3][0]];
            let rule = Sign::of(&Rational::from_integer((alpha[n] * (b0 * c0 - a0 * d0)).into()));
            if class.sign != rule {
                sign_mismatch += 1;
            }
            let b0_rule = Sign::of(&Rational::from_integer((alpha[n] * b0 * (b0 * c0 - a0 * d0)).into()));
            if class.sign == b0_rule {
                with_b0 += 1;
            }
        }
        let plus = class.sign != Some(Sign::Minus);
        let want = expected_normal_jet(class.normal_jet.order(), n as u32, plus);
        if !class.normal_jet.eq_through(&want, n as u32 + 1) {
            problems.push(format!("n = {n}: normal jet {}", class.normal_jet));
        }
    }
    if sign_mismatch > 0 {
        problems.push(format!(
            "sign(a_n (B0 C0 - A0 D0)) disagrees with the class sign in {sign_mismatch} of {even} even cases \
             (sign(a_n B0 (B0 C0 - A0 D0)) agrees in {with_b0})"
        ));
    }
    let rejected = [
        ctf(&[0, 1], &[vec![1], vec![0], vec![2], vec![1]]),
        ctf(&[0, 0, 1], &[vec![2], vec![1], vec![4], vec![2]]),
        ctf(&[0, 0, 0, 1], &[vec![1], vec![0], vec![0], vec![3]]),
    ];
    for d in &rejected {
        if !matches!(classify_graph(d), Err(CtfError::NotStarGeneric(_))) {
            problems.push("non-generic input accepted".into());
        }
    }
    ensure!(problems.is_empty(), "{}", problems.join("; "));
    Ok(format!("30 instances ({even} even), non-generic inputs rejected"))
}

fn h_series() -> Outcome {
    let order = 6;
    for delta in [ParamPoly::one(), p("d")] {
        let hs = h_branch_series(&delta, order).map_err(|e| e.to_string())?;
        let o = hs.critical_polynomial.order();
        // 3x^2 (lambda + 2y + 3 delta y^2) - 4xy
        let inner = &(&TruncatedSeries::constant(o, p("lambda")) + &term(o, 0, 1, int(2))) + &term(o, 0, 2, delta.scale(&rat(3, 1)));
        let expected = &(&term(o, 2, 0, int(3)) * &inner) - &term(o, 1, 1, int(4));
        ensure!(hs.critical_polynomial == expected, "critical polynomial {}", hs.critical_polynomial);
        let root = &hs.sqrt_discriminant;
        let dl = (&delta * &p("lambda")).scale(&rat(-27, 2));
        ensure!(
            root.coeff(0) == int(4) && root.coeff(1) == int(-6) && root.coeff(2) == dl,
            "sqrt discriminant {}",
            root.fmt_in("x")
        );
        ensure!(hs.branch.coeff(1) == p("lambda").scale(&rat(3, 4)), "branch {}", hs.branch.fmt_in("x"));
        ensure!(hs.residual().is_zero(), "branch residual {}", hs.residual().fmt_in("x"));
        ensure!(hs.jacobian_residual().map_err(|e| e.to_string())?.is_zero(), "jacobian residual");
    }
    Ok("sqrt disc = 4 - 6x - 27/2*d*lambda*x^2 + ..., branch 3/4*lambda*x + ...".into())
}

fn line(fam: &DeformationFamily, name: &str) -> Result<SweepReport, String> {
    sweep(fam, &SweepAxis::line(name, rat(-1, 10), rat(1, 10), 21), &rat(1, 1), &SweepConfig::default()).map_err(|e| e.to_string())
}

fn perestroika_events() -> Outcome {
    let h = line(&DeformationFamily::h_family(12, p("d")), "lambda")?;
    let g = h.events_of(EventKind::GammaToU);
    ensure!(g.len() == 1, "H sweep: {} gamma-to-U events", g.len());
    ensure!(g[0].stratum.as_deref() == Some("lambda = 0"), "H event at {:?}", g[0].stratum);
    for s in &h.samples {
        let tag = s.branch(BranchRole::Support).map(|b| b.tag);
        ensure!(tag == Some(BranchTag::SemicubicCusp), "support branch {tag:?} at {:?}", s.values);
    }

    let k = line(&DeformationFamily::k_family(12, p("d")), "mu")?;
    let g = k.events_of(EventKind::GammaToU);
    ensure!(g.len() == 1, "K sweep: {} gamma-to-U events", g.len());
    ensure!(g[0].stratum.as_deref() == Some("mu = 0") && g[0].branch == "support", "K event {:?} on {}", g[0].stratum, g[0].branch);
    for s in &k.samples {
        let tag = s.branch(BranchRole::Special).map(|b| b.tag);
        ensure!(tag == Some(BranchTag::SemicubicCusp), "special branch {tag:?} at {:?}", s.values);
    }

    let nu = DeformationFamily::psi_family(12, p("d")).restrict(&["nu"]).map_err(|e| e.to_string())?;
    let r = line(&nu, "nu")?;
    ensure!(r.events.is_empty(), "nu sweep events {:?}", r.events);
    Ok("one gamma-to-U at lambda = 0 and at mu = 0, none along nu".into())
}

fn deformed_branch(lambda: ParamPoly, delta: ParamPoly) -> CurveJet {
    CurveJet::new(
        UniSeries::from_coeffs(8, vec![ParamPoly::zero(), lambda, ParamPoly::one(), delta]),
        UniSeries::from_ints(8, &[0, 0, 1]),
    )
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Double point of `s -> (l s + s^2 + d s^3, s^2)` by eliminating on the
/// divided differences of both components.
fn double_point_oracle(l: f64, d: f64) -> Option<[f64; 2]> {
    const R: f64 = 1.0;
    let x = |s: f64| l * s + s * s + d * s * s * s;
    let dx = |a: f64, b: f64| l + (a + b) + d * (a * a + a * b + b * b);
    let dy = |a: f64, b: f64| a + b;
    // For fixed s1, the second divided difference is monotone in s2.
    let partner = |a: f64| bisect(|b| dy(a, b), -2.0 * R, 2.0 * R);
    let residual = |a: f64| dx(a, partner(a));
    let steps = 4000;
    let h = R / steps as f64;
    for i in 0..steps {
        let (a, b) = (h * (i as f64 + 0.5), h * (i as f64 + 1.5));
        if residual(a).signum() != residual(b).signum() {
            let s1 = bisect(residual, a, b);
            let s2 = partner(s1);
            if (s1 - s2).abs() > 1e-9 {
                return Some([x(s1), s1 * s1]);
            }
        }
    }
    None
}

fn closed_form_self_intersection() -> Outcome {
    let si = self_intersection(&deformed_branch(p("lambda"), p("d"))).map_err(|e| e.to_string())?;
    ensure!(si.existence == Existence::Conditional, "symbolic existence {:?}", si.existence);
    ensure!(si.condition.as_deref() == Some("lambda/d < 0"), "condition {:?}", si.condition);
    let point = si.point.ok_or("no symbolic point")?;
    let lam_over_d = [p("lambda"), p("d")];
    for c in &point {
        ensure!(
            c.numerator() == &-&lam_over_d[0] && c.denominator() == &lam_over_d[1],
            "point coordinate {c}"
        );
    }

    let pairs = [(-1, 100, 1), (1, 100, 1), (1, 20, -1), (-1, 20, -1), (3, 50, 2), (-3, 50, 2), (1, 10, -3), (-7, 100, 1), (1, 40, -2), (-1, 1000, 5)];
    for (ln, ld, d) in pairs {
        let (l, dv) = (rat(ln, ld), rat(d, 1));
        let si = self_intersection(&deformed_branch(ParamPoly::constant(l.clone()), int(d))).map_err(|e| e.to_string())?;
        let (lf, df) = (l.to_f64().unwrap(), d as f64);
        let oracle = double_point_oracle(lf, df);
        ensure!(si.exists() == oracle.is_some(), "lambda {l}, d {d}: {:?} vs oracle {oracle:?}", si.existence);
        if let Some(want) = oracle {
            let [px, py] = si.point.ok_or("missing point")?;
            let exact = -(&l / &dv);
            ensure!(px.as_rational() == Some(exact.clone()) && py.as_rational() == Some(exact.clone()), "point {px}, {py}");
            let got = exact.to_f64().unwrap();
            ensure!((got - want[0]).abs() < 1e-9 && (got - want[1]).abs() < 1e-9, "oracle point {want:?} vs {got}");
        } else {
            ensure!(!(&l / &dv).is_negative() || l.is_zero(), "lambda {l}, d {d}: oracle missed a double point");
        }
    }
    Ok("exists iff lambda/d < 0, at (-lambda/d, -lambda/d); 10 numeric pairs agree".into())
}

fn space(order: u32, a: TruncatedSeries, b: TruncatedSeries) -> SpaceGermJet {
    SpaceGermJet::new(a, b, TruncatedSeries::x(order)).expect("space germ")
}

fn tangential_deformation() -> Outcome {
    for lambda in [rat(1, 10), rat(-1, 10)] {
        let check = tangential_deformation_check(&rat(1, 1), &lambda).map_err(|e| e.to_string())?;
        ensure!(check.tangency_order == TangencyOrder::Exact(2), "lambda {lambda}: tangency {:?}", check.tangency_order);
        ensure!(check.matches_normal_form, "lambda {lambda}: reduced jet {}", check.reduced_jet);
    }
    // Source (x, y) = (family parameter, branch parameter).
    let o = 8;
    let umbrella = space(o, &(&term(o, 1, 1, ParamPoly::one()) + &term(o, 0, 2, ParamPoly::one())) + &term(o, 0, 3, ParamPoly::one()), term(o, 0, 2, ParamPoly::one()));
    let edge = space(o, &term(o, 0, 2, ParamPoly::one()) + &term(o, 2, 1, ParamPoly::constant(rat(3, 4))), term(o, 0, 3, ParamPoly::one()));
    let u = classify_branch_surface(&umbrella).map_err(|e| e.to_string())?;
    let e = classify_branch_surface(&edge).map_err(|e| e.to_string())?;
    ensure!(u.kind == SurfaceKind::WhitneyUmbrella, "special branch surface {:?}", u.kind);
    ensure!(e.kind == SurfaceKind::CuspidalEdge, "support branch surface {:?}", e.kind);
    Ok("second order tangency for lambda = +-1/10; umbrella and cuspidal edge".into())
}

fn property_suites() -> Outcome {
    let mut total = 0;
    let mut failures = Vec::new();
    for (name, cases, run) in properties::SUITES {
        total += cases;
        if let Err(e) = run(cases) {
            failures.push(format!("{name}: {e}"));
        }
    }
    ensure!(total == 1000, "{total} cases configured");
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    Ok(format!("{} suites, {total} cases", properties::SUITES.len()))
}

const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, title: "determinant certificate", limit: Duration::from_secs(5), run: determinant_certificate },
    Criterion { id: 2, title: "first inclusion", limit: Duration::from_secs(1), run: first_inclusion },
    Criterion { id: 3, title: "determinacy chain", limit: Duration::from_secs(10), run: determinacy_chain },
    Criterion { id: 4, title: "jacobian", limit: Duration::from_secs(1), run: jacobian },
    Criterion { id: 5, title: "envelope branches", limit: Duration::from_secs(2), run: envelope_branches },
    Criterion { id: 6, title: "codimension and miniversality", limit: Duration::from_secs(10), run: codimension_and_miniversality },
    Criterion { id: 7, title: "tangential family jacobian jet", limit: Duration::from_secs(5), run: ctf_jacobian_jet },
    Criterion { id: 8, title: "graph classification", limit: Duration::from_secs(30), run: graph_classification },
    Criterion { id: 9, title: "deformed branch series", limit: Duration::from_secs(5), run: h_series },
    Criterion { id: 10, title: "perestroika events", limit: Duration::from_secs(60), run: perestroika_events },
    Criterion { id: 11, title: "self-intersection closed form", limit: Duration::from_secs(5), run: closed_form_self_intersection },
    Criterion { id: 12, title: "tangential deformation", limit: Duration::from_secs(10), run: tangential_deformation },
    Criterion { id: 13, title: "property suites", limit: Duration::from_secs(120), run: property_suites },
];

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.limit => Err(format!("over the {:.0} s limit", c.limit.as_secs_f64())),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {:<30} {status} ({:.2} s) {detail}", c.id, c.title, elapsed.as_secs_f64());
        if outcome.is_err() {
            failed.push(c.id);
        }
    }
    println!("\n{} of {} criteria passed", CRITERIA.len() - failed.len(), CRITERIA.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {failed:?}");
        ExitCode::FAILURE
    }
}
