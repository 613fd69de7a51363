use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::features::{contact_order, convergence_radius, curve_features, curve_intersection, nearby_zero, trace_local, CuspPoint, DoublePoint};
use super::{BifurcateError, DeformationFamily};
use crate::envelope::numeric::{FloatPoly2, FloatSeries};
use crate::envelope::{critical_set, envelope_of, tangency_order, BranchTag, EnvelopeError, EnvelopeResult, TangencyOrder};
use crate::jetcalc::{ring::fmt_rational, ParamPoly, PlaneGermJet, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepConfig {
    /// Largest admissible absolute parameter value.
    pub radius: f64,
    /// Largest branch parameter examined for cusps and double points.
    pub window: f64,
    pub order: u32,
    /// Width at which a located transition stops being bisected.
    pub bisect_width: f64,
    /// Largest distance from the origin of a traced critical point.
    pub trace_radius: f64,
    /// Source half-width and resolution of sampled envelope pictures.
    pub picture_window: f64,
    pub picture_resolution: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            radius: 0.2,
            window: 0.5,
            order: 12,
            bisect_width: 1e-6,
            trace_radius: 0.3,
            picture_window: 0.3,
            picture_resolution: 160,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepAxis {
    Line { parameter: String, values: Vec<Rational> },
    Grid { parameters: [String; 2], values: [Vec<Rational>; 2] },
}

impl SweepAxis {
    /// `count` evenly spaced rational values from `lo` to `hi`.
    pub fn line(parameter: &str, lo: Rational, hi: Rational, count: usize) -> Self {
        SweepAxis::Line {
            parameter: parameter.into(),
            values: evenly_spaced(&lo, &hi, count),
        }
    }

    pub fn grid(parameters: [&str; 2], lo: Rational, hi: Rational, count: usize) -> Self {
        let v = evenly_spaced(&lo, &hi, count);
        SweepAxis::Grid {
            parameters: [parameters[0].into(), parameters[1].into()],
            values: [v.clone(), v],
        }
    }
}

pub fn evenly_spaced(lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
    if count <= 1 {
        return vec![lo.clone()];
    }
    let steps = Rational::from_integer((count as i64 - 1).into());
    (0..count)
        .map(|k| lo + (hi - lo) * Rational::from_integer((k as i64).into()) / &steps)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchRole {
    /// Tangent to the `x`-direction in the source: the branch coming from the support.
    Support,
    /// Tangent to the `y`-direction: the branch coming from the special curve.
    Special,
}

impl BranchRole {
    pub fn swapped(self) -> Self {
        match self {
            BranchRole::Support => BranchRole::Special,
            BranchRole::Special => BranchRole::Support,
        }
    }
}

impl std::fmt::Display for BranchRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BranchRole::Support => "support",
            BranchRole::Special => "special",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BranchSummary {
    pub role: BranchRole,
    pub label: String,
    /// Computed from the exact critical set rather than traced numerically.
    pub exact: bool,
    pub base_point: [f64; 2],
    /// Branch-parameter half-width actually examined.
    pub window: f64,
    pub tag: BranchTag,
    pub cusps: Vec<CuspPoint>,
    pub double_points: Vec<DoublePoint>,
}

impl BranchSummary {
    pub fn self_intersects(&self) -> bool {
        !self.double_points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BranchContact {
    pub roles: [BranchRole; 2],
    /// Contact order of the two images at the common critical point.
    pub order: Option<u32>,
    pub exact: bool,
    pub source_point: [f64; 2],
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleValue {
    pub name: String,
    pub value: f64,
    pub exact: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Sample {
    pub values: Vec<SampleValue>,
    /// Exact envelope of the branches through the origin.
    pub envelope: Option<EnvelopeResult>,
    pub branches: Vec<BranchSummary>,
    pub contact: Option<BranchContact>,
    /// Saddle of the Jacobian near the origin (two-parameter sweeps only).
    pub saddle: Option<JacobianSaddle>,
    pub error: Option<String>,
}

impl Sample {
    pub fn branch(&self, role: BranchRole) -> Option<&BranchSummary> {
        self.branches.iter().find(|b| b.role == role)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|v| v.name == name).map(|v| v.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EventKind {
    #[serde(rename = "gamma-to-U")]
    GammaToU,
    #[serde(rename = "second-order-self-tangency")]
    SecondOrderSelfTangency,
    #[serde(rename = "beaks")]
    Beaks,
    #[serde(rename = "none")]
    None,
    #[serde(rename = "unresolved")]
    Unresolved,
}

impl std::fmt::Display for EventKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EventKind::GammaToU => "gamma-to-U",
            EventKind::SecondOrderSelfTangency => "second-order-self-tangency",
            EventKind::Beaks => "beaks",
            EventKind::None => "none",
            EventKind::Unresolved => "unresolved",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    High,
    Low,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum EventLocation {
    /// A transition bracketed to `[from, to]` on one parameter.
    Value { parameter: String, from: f64, to: f64 },
    /// A property holding on a run of samples.
    Interval { parameter: String, from: f64, to: f64 },
    /// A change between two neighbouring grid samples.
    Between { first: Vec<SampleValue>, second: Vec<SampleValue> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BifurcationEvent {
    pub kind: EventKind,
    pub location: EventLocation,
    /// Equation of the stratum when recognised, e.g. `lambda = 0`.
    pub stratum: Option<String>,
    pub branch: String,
    pub confidence: Confidence,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub parameters: Vec<String>,
    pub delta: String,
    pub config: SweepConfig,
    pub samples: Vec<Sample>,
    pub events: Vec<BifurcationEvent>,
}

impl SweepReport {
    pub fn events_of(&self, kind: EventKind) -> Vec<&BifurcationEvent> {
        self.events.iter().filter(|e| e.kind == kind).collect()
    }
}

struct Traced {
    role: BranchRole,
    label: String,
    exact_image: Option<crate::jetcalc::CurveJet>,
    base: [f64; 2],
    source: [FloatSeries; 2],
    image: [FloatSeries; 2],
}

fn no_params(_: &str) -> Option<f64> {
    None
}

fn to_float(c: &crate::jetcalc::CurveJet) -> Result<[FloatSeries; 2], EnvelopeError> {
    Ok([FloatSeries::from_exact(c.component(0), &no_params)?, FloatSeries::from_exact(c.component(1), &no_params)?])
}

fn role_of(source: &[FloatSeries; 2]) -> BranchRole {
    if source[0].coeff(1).abs() >= source[1].coeff(1).abs() {
        BranchRole::Support
    } else {
        BranchRole::Special
    }
}

/// Exact branches through the origin plus, optionally, the branch of the
/// remaining Jacobian factor nearest to the origin.
fn trace(germ: &PlaneGermJet, config: &SweepConfig, off_origin: bool) -> Result<(EnvelopeResult, Vec<Traced>), BifurcateError> {
    let envelope = envelope_of(germ)?;
    let set = critical_set(germ)?;
    let fx = FloatPoly2::from_series(germ.component(0), &no_params)?;
    let fy = FloatPoly2::from_series(germ.component(1), &no_params)?;
    let mut traced = Vec::new();
    for b in &envelope.branches {
        let source = to_float(&b.source)?;
        traced.push(Traced {
            role: role_of(&source),
            label: b.label.clone(),
            exact_image: Some(b.image.clone()),
            base: [0.0, 0.0],
            image: to_float(&b.image)?,
            source,
        });
    }
    // Only the zero of the remaining factor nearest to the origin is traced.
    if let Some(cofactor) = set.cofactor.as_ref().filter(|_| off_origin) {
        let g = FloatPoly2::from_series(cofactor, &no_params)?;
        let local = nearby_zero(&g, [0.0, 0.0])
            .filter(|p| p[0].hypot(p[1]) <= config.trace_radius)
            .and_then(|p| trace_local(&g, p, germ.order()));
        if let Some(local) = local {
            let image = [fx.along(&local.source[0], &local.source[1]), fy.along(&local.source[0], &local.source[1])];
            traced.push(Traced {
                role: role_of(&local.source),
                label: format!("traced through ({:.6}, {:.6})", local.base[0], local.base[1]),
                exact_image: None,
                base: local.base,
                source: local.source,
                image,
            });
        }
    }
    Ok((envelope, traced))
}

fn summarize(t: &Traced, config: &SweepConfig) -> BranchSummary {
    let radius = convergence_radius(&[&t.source[0], &t.source[1], &t.image[0], &t.image[1]]);
    let window = config.window.min(0.5 * radius);
    let features = curve_features(&t.image[0], &t.image[1], window);
    let tag = match features.cusps.as_slice() {
        [] => BranchTag::Regular,
        [c] if c.semicubic => BranchTag::SemicubicCusp,
        [_] => BranchTag::DegenerateCusp,
        _ => BranchTag::Unresolved,
    };
    BranchSummary {
        role: t.role,
        label: t.label.clone(),
        exact: t.exact_image.is_some(),
        base_point: t.base,
        window,
        tag,
        cusps: features.cusps,
        double_points: features.double_points,
    }
}

fn contact(a: &Traced, b: &Traced, config: &SweepConfig) -> BranchContact {
    let roles = [a.role, b.role];
    if let (Some(ia), Some(ib)) = (&a.exact_image, &b.exact_image) {
        return match tangency_order(ia, ib) {
            Ok(TangencyOrder::Exact(k)) => BranchContact {
                roles,
                order: Some(k),
                exact: true,
                source_point: [0.0, 0.0],
                note: None,
            },
            Ok(TangencyOrder::AtLeast(k)) => BranchContact {
                roles,
                order: None,
                exact: true,
                source_point: [0.0, 0.0],
                note: Some(format!("contact order at least {k}")),
            },
            Err(e) => BranchContact {
                roles,
                order: None,
                exact: true,
                source_point: [0.0, 0.0],
                note: Some(e.to_string()),
            },
        };
    }
    let Some((s, t)) = curve_intersection(&a.source, &b.source, config.window) else {
        return BranchContact {
            roles,
            order: None,
            exact: false,
            source_point: [f64::NAN, f64::NAN],
            note: Some("branches do not meet near the origin".into()),
        };
    };
    let point = [a.source[0].eval(s), a.source[1].eval(s)];
    let order = contact_order(&a.image, s, &b.image, t, 0.05);
    BranchContact {
        roles,
        order,
        exact: false,
        source_point: point,
        note: order.is_none().then(|| "both branches singular at the common point".to_string()),
    }
}

fn sample_values(assignment: &[(String, Rational)]) -> Vec<SampleValue> {
    assignment
        .iter()
        .map(|(n, v)| SampleValue {
            name: n.clone(),
            value: v.to_f64().unwrap_or(f64::NAN),
            exact: fmt_rational(v),
        })
        .collect()
}

/// Envelope and numeric branch features of the family at one parameter value.
///
/// Branches through the origin come from the exact critical set; when the
/// Jacobian does not vanish at the origin, the nearest critical branch is
/// traced numerically.
pub fn analyze_sample(family: &DeformationFamily, assignment: &[(String, Rational)], config: &SweepConfig) -> Sample {
    analyze(family, assignment, config, true)
}

fn analyze(family: &DeformationFamily, assignment: &[(String, Rational)], config: &SweepConfig, off_origin: bool) -> Sample {
    let values = sample_values(assignment);
    let result = (|| -> Result<Sample, BifurcateError> {
        let named: Vec<(&str, Rational)> = assignment.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
        let germ = family.at(&named)?;
        let (envelope, traced) = trace(&germ, config, off_origin)?;
        let branches: Vec<BranchSummary> = traced.iter().map(|t| summarize(t, config)).collect();
        let support = traced.iter().find(|t| t.role == BranchRole::Support);
        let special = traced.iter().find(|t| t.role == BranchRole::Special);
        let contact = match (support, special) {
            (Some(a), Some(b)) => Some(contact(a, b, config)),
            _ => None,
        };
        Ok(Sample {
            values: values.clone(),
            envelope: Some(envelope),
            branches,
            contact,
            saddle: None,
            error: None,
        })
    })();
    result.unwrap_or_else(|e| Sample {
        values,
        envelope: None,
        branches: Vec::new(),
        contact: None,
        saddle: None,
        error: Some(e.to_string()),
    })
}

/// Critical point of the Jacobian near the origin. When it is a saddle,
/// the sign of the Jacobian there decides how the two pieces of the
/// critical set are connected; a sign change is a Morse reconnection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JacobianSaddle {
    pub point: [f64; 2],
    pub value: f64,
    /// Indefinite Hessian.
    pub indefinite: bool,
}

pub fn jacobian_saddle(germ: &PlaneGermJet, radius: f64) -> Result<Option<JacobianSaddle>, BifurcateError> {
    let fx = FloatPoly2::from_series(germ.component(0), &no_params)?;
    let fy = FloatPoly2::from_series(germ.component(1), &no_params)?;
    let jac = FloatPoly2::jacobian(&fx, &fy);
    let (jx, jy) = (jac.dx(), jac.dy());
    let (jxx, jxy, jyy) = (jx.dx(), jx.dy(), jy.dy());
    let mut p = [0.0f64, 0.0];
    for _ in 0..60 {
        let g = [jx.eval(p[0], p[1]), jy.eval(p[0], p[1])];
        let h = [jxx.eval(p[0], p[1]), jxy.eval(p[0], p[1]), jyy.eval(p[0], p[1])];
        let det = h[0] * h[2] - h[1] * h[1];
        if det == 0.0 {
            return Ok(None);
        }
        let step = [(g[0] * h[2] - h[1] * g[1]) / det, (h[0] * g[1] - h[1] * g[0]) / det];
        p = [p[0] - step[0], p[1] - step[1]];
        if p[0].hypot(p[1]) > radius {
            return Ok(None);
        }
        if step[0].abs() + step[1].abs() <= 1e-15 * (1.0 + p[0].abs() + p[1].abs()) {
            break;
        }
    }
    let h = [jxx.eval(p[0], p[1]), jxy.eval(p[0], p[1]), jyy.eval(p[0], p[1])];
    Ok(Some(JacobianSaddle {
        point: p,
        value: jac.eval(p[0], p[1]),
        indefinite: h[0] * h[2] - h[1] * h[1] < 0.0,
    }))
}

fn check_inputs(family: &DeformationFamily, names: &[&String], values: &[&Vec<Rational>], delta: &Rational, config: &SweepConfig) -> Result<(), BifurcateError> {
    if delta.is_zero() {
        return Err(BifurcateError::DegenerateDelta);
    }
    for n in names {
        if family.direction(n).is_none() {
            return Err(BifurcateError::UnknownParameter(n.to_string()));
        }
    }
    for v in values.iter().flat_map(|v| v.iter()) {
        if v.abs().to_f64().unwrap_or(f64::INFINITY) > config.radius {
            return Err(BifurcateError::OutsideRadius(fmt_rational(v), config.radius));
        }
    }
    Ok(())
}

fn assignment(family: &DeformationFamily, set: &[(&str, &Rational)]) -> Vec<(String, Rational)> {
    family
        .parameters()
        .map(|p| {
            let v = set.iter().find(|(n, _)| *n == p).map_or_else(Rational::zero, |(_, v)| (*v).clone());
            (p.to_string(), v)
        })
        .collect()
}

#[cfg(feature = "parallel")]
fn map_samples<T: Sync, F: Fn(&T) -> Sample + Sync + Send>(items: &[T], f: F) -> Vec<Sample> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_samples<T, F: Fn(&T) -> Sample>(items: &[T], f: F) -> Vec<Sample> {
    items.iter().map(f).collect()
}

/// Samples the family along a line or grid of parameter values (other
/// parameters fixed at zero, `d` set to `delta`) and detects events.
pub fn sweep(family: &DeformationFamily, axis: &SweepAxis, delta: &Rational, config: &SweepConfig) -> Result<SweepReport, BifurcateError> {
    let family = family.substitute_param("d", &ParamPoly::constant(delta.clone())).with_order(config.order);
    let (samples, events) = match axis {
        SweepAxis::Line { parameter, values } => {
            check_inputs(&family, &[parameter], &[values], delta, config)?;
            let mut sorted = values.clone();
            sorted.sort();
            sorted.dedup();
            let samples = map_samples(&sorted, |v| analyze_sample(&family, &assignment(&family, &[(parameter, v)]), config));
            let events = line_events(&family, parameter, &sorted, &samples, config);
            (samples, events)
        }
        SweepAxis::Grid { parameters, values } => {
            check_inputs(&family, &[&parameters[0], &parameters[1]], &[&values[0], &values[1]], delta, config)?;
            let points: Vec<(Rational, Rational)> = values[0].iter().flat_map(|a| values[1].iter().map(move |b| (a.clone(), b.clone()))).collect();
            let samples = map_samples(&points, |(a, b)| {
                let assign = assignment(&family, &[(&parameters[0], a), (&parameters[1], b)]);
                let mut s = analyze(&family, &assign, config, false);
                let named: Vec<(&str, Rational)> = assign.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
                match family.at(&named).map_err(BifurcateError::from).and_then(|g| jacobian_saddle(&g, config.trace_radius)) {
                    Ok(saddle) => s.saddle = saddle,
                    Err(e) => s.error = Some(e.to_string()),
                }
                s
            });
            let events = grid_events(parameters, values[1].len(), &samples);
            (samples, events)
        }
    };
    Ok(SweepReport {
        parameters: family.parameters().map(String::from).collect(),
        delta: fmt_rational(delta),
        config: config.clone(),
        samples,
        events,
    })
}

fn exists_for(sample: &Sample, role: BranchRole) -> Option<bool> {
    sample.branch(role).map(BranchSummary::self_intersects)
}

fn line_events(family: &DeformationFamily, parameter: &str, values: &[Rational], samples: &[Sample], config: &SweepConfig) -> Vec<BifurcationEvent> {
    let mut events = Vec::new();
    let at = |v: &Rational| analyze_sample(family, &assignment(family, &[(parameter, v)]), config);
    for (k, s) in samples.iter().enumerate() {
        if let Some(e) = &s.error {
            events.push(unresolved(parameter, &values[k], "all", e));
        }
    }
    for role in [BranchRole::Support, BranchRole::Special] {
        for k in 1..samples.len() {
            let (a, b) = (exists_for(&samples[k - 1], role), exists_for(&samples[k], role));
            match (a, b) {
                (Some(a), Some(b)) if a != b => {
                    let (mut lo, mut hi) = (values[k - 1].clone(), values[k].clone());
                    let two = Rational::from_integer(2.into());
                    let mut resolved = true;
                    while (&hi - &lo).to_f64().unwrap_or(0.0) > config.bisect_width {
                        let mid = (&lo + &hi) / &two;
                        match exists_for(&at(&mid), role) {
                            Some(m) if m == a => lo = mid,
                            Some(_) => hi = mid,
                            None => {
                                resolved = false;
                                break;
                            }
                        }
                    }
                    let (from, to) = (lo.to_f64().unwrap_or(f64::NAN), hi.to_f64().unwrap_or(f64::NAN));
                    let stratum = (from <= 0.0 && to >= 0.0).then(|| format!("{parameter} = 0"));
                    events.push(BifurcationEvent {
                        kind: if resolved { EventKind::GammaToU } else { EventKind::Unresolved },
                        location: EventLocation::Value { parameter: parameter.into(), from, to },
                        stratum,
                        branch: role.to_string(),
                        confidence: Confidence::High,
                        detail: format!(
                            "self-intersection {} as {parameter} increases",
                            if a { "disappears" } else { "appears" }
                        ),
                    });
                }
                (Some(_), None) | (None, Some(_)) => {
                    let idx = if a.is_none() { k - 1 } else { k };
                    if samples[idx].error.is_none() {
                        events.push(unresolved(parameter, &values[idx], &role.to_string(), "branch not found"));
                    }
                }
                _ => {}
            }
        }
    }
    // Runs of samples on which the two branches touch with contact order 2.
    let mut k = 0;
    while k < samples.len() {
        let second_order = |s: &Sample| s.contact.as_ref().and_then(|c| c.order) == Some(2);
        if !second_order(&samples[k]) {
            k += 1;
            continue;
        }
        let start = k;
        while k + 1 < samples.len() && second_order(&samples[k + 1]) {
            k += 1;
        }
        let (from, to) = (samples[start].value(parameter).unwrap_or(f64::NAN), samples[k].value(parameter).unwrap_or(f64::NAN));
        let stratum = if to < 0.0 {
            Some(format!("{parameter} < 0"))
        } else if from > 0.0 {
            Some(format!("{parameter} > 0"))
        } else {
            None
        };
        let exact = samples[start..=k].iter().all(|s| s.contact.as_ref().is_some_and(|c| c.exact));
        events.push(BifurcationEvent {
            kind: EventKind::SecondOrderSelfTangency,
            location: EventLocation::Interval { parameter: parameter.into(), from, to },
            stratum,
            branch: "support/special".into(),
            confidence: if exact { Confidence::High } else { Confidence::Low },
            detail: format!("the two envelope branches touch with contact order 2 at {} samples", k - start + 1),
        });
        k += 1;
    }
    events
}

fn unresolved(parameter: &str, value: &Rational, branch: &str, why: &str) -> BifurcationEvent {
    let v = value.to_f64().unwrap_or(f64::NAN);
    BifurcationEvent {
        kind: EventKind::Unresolved,
        location: EventLocation::Value { parameter: parameter.into(), from: v, to: v },
        stratum: None,
        branch: branch.into(),
        confidence: Confidence::Low,
        detail: why.into(),
    }
}

fn grid_events(parameters: &[String; 2], columns: usize, samples: &[Sample]) -> Vec<BifurcationEvent> {
    let mut events = Vec::new();
    let off_axes = |s: &Sample| parameters.iter().all(|p| s.value(p).is_some_and(|v| v != 0.0));
    let mut compare = |a: &Sample, b: &Sample| {
        let (Some(sa), Some(sb)) = (a.saddle, b.saddle) else { return };
        if !sa.indefinite || !sb.indefinite || (sa.value > 0.0) == (sb.value > 0.0) {
            return;
        }
        let crossed: Vec<&String> = parameters
            .iter()
            .filter(|p| a.value(p).unwrap_or(0.0).signum() != b.value(p).unwrap_or(0.0).signum())
            .collect();
        events.push(BifurcationEvent {
            kind: EventKind::Beaks,
            location: EventLocation::Between {
                first: a.values.clone(),
                second: b.values.clone(),
            },
            stratum: crossed.first().map(|p| format!("{p} = 0")),
            branch: "critical set".into(),
            confidence: Confidence::Low,
            detail: format!(
                "critical-set pieces reconnect: Jacobian at its saddle changes sign ({:.3e} -> {:.3e})",
                sa.value, sb.value
            ),
        });
    };
    // Neighbours along rows and columns, skipping samples on either axis.
    let rows = samples.len() / columns.max(1);
    let lines = (0..rows)
        .map(|r| (0..columns).map(|c| r * columns + c).collect::<Vec<_>>())
        .chain((0..columns).map(|c| (0..rows).map(|r| r * columns + c).collect::<Vec<_>>()));
    for line in lines {
        let kept: Vec<&Sample> = line.iter().map(|&k| &samples[k]).filter(|s| off_axes(s)).collect();
        for pair in kept.windows(2) {
            compare(pair[0], pair[1]);
        }
    }
    events
}
