//! Subcommand implementations.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::args::{
    BifurcateArgs, BifurcateMode, Cli, CodimArgs, Command, CtfArgs, DeterminacyArgs, EnvelopeArgs, FamilyName, Format, JetArgs, JetOp,
    MiniversalArgs, RenderArgs,
};
use super::parse::{parse_germ, parse_rational, GermExpression, ParseError, Parsed};
use super::report::{Exactness, InputEcho, Report, Verdict};
use super::svg::{self, Curve, Figure, Frame, Inset, Panel, Stratum, Style};
use crate::bifurcate::{
    double_cusp_diagram, h_branch_series, sweep, tangential_deformation_check, BifurcateError, BranchRole, DeformationFamily, Sample, SweepAxis,
    SweepConfig, SweepReport,
};
use crate::ctf::{build_family, classify_graph, genericity, reduce_to_normal_form, special_curve, CtfData, CtfError};
use crate::envelope::{critical_set, envelope_of, numeric_envelope, self_intersection, tangency_order, EnvelopeError, Window};
use crate::jetcalc::{ring::fmt_rational, CoordChangeJet, JetError, ParamPoly, PlaneGermJet, Rational, UniSeries};
use crate::orbitspace::{du_plessis_determinacy, extended_codimension, is_miniversal, order_reduction_check, sharpen, OrbitError};

/// Default working order of parsed inputs.
pub const DEFAULT_ORDER: u32 = 8;
/// Default working order of bifurcation sweeps.
pub const SWEEP_ORDER: u32 = 12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{rendered}")]
    Parse { rendered: String, error: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Ctf(#[from] CtfError),
    #[error(transparent)]
    Bifurcate(#[from] BifurcateError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Everything a command produced; formatting happens afterwards.
pub struct Output {
    pub report: Report,
    pub figure: Option<Figure>,
    /// Header and rows for CSV output.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Output {
    fn new(report: Report) -> Self {
        Output {
            report,
            figure: None,
            table: None,
        }
    }
}

/// Runs a parsed command line and returns the bytes to emit and the exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    if let Command::Render(args) = &cli.command {
        return Ok((render(cli, args)?, 0));
    }
    let out = match &cli.command {
        Command::Jet(a) => jet(cli, a)?,
        Command::Determinacy(a) => determinacy(cli, a)?,
        Command::Codim(a) => codim(cli, a)?,
        Command::Miniversal(a) => miniversal(cli, a)?,
        Command::CtfClassify(a) => ctf_classify(cli, a)?,
        Command::Envelope(a) => envelope(cli, a)?,
        Command::Bifurcate(a) => bifurcate(cli, a)?,
        Command::Render(_) => unreachable!(),
    };
    let code = out.report.exit_code();
    let text = match cli.format {
        Format::Json => out.report.to_json(),
        Format::Svg => match &out.figure {
            Some(f) => svg::render(f),
            None => return Err(CliError::Usage(format!("`{}` has no SVG output for this input", out.report.command))),
        },
        Format::Csv => match (&out.table, &out.figure) {
            (Some((h, rows)), _) => csv_text(h, rows)?,
            (None, Some(f)) => figure_csv(f)?,
            (None, None) => return Err(CliError::Usage(format!("`{}` has no CSV output for this input", out.report.command))),
        },
    };
    Ok((text, code))
}

fn order(cli: &Cli) -> u32 {
    cli.order.unwrap_or(DEFAULT_ORDER)
}

fn parse(cli: &Cli, text: &str) -> Result<GermExpression, CliError> {
    let expr = parse_germ(text, order(cli)).map_err(|error| CliError::Parse {
        rendered: error.render(text),
        error,
    })?;
    apply_sets(expr, &cli.set)
}

/// Parsed `--set name=value` assignments.
fn assignments(sets: &[String]) -> Result<Vec<(String, Rational)>, CliError> {
    sets.iter()
        .map(|s| {
            let (n, v) = s
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected NAME=VALUE, got `{s}`")))?;
            Ok((n.trim().to_string(), parse_rational(v).map_err(CliError::Usage)?))
        })
        .collect()
}

fn apply_sets(mut expr: GermExpression, sets: &[String]) -> Result<GermExpression, CliError> {
    for (name, value) in assignments(sets)? {
        let v = ParamPoly::constant(value);
        if let Some(i) = expr.parameters.iter().position(|p| *p == name) {
            expr.parameters.remove(i);
        } else if let Some(i) = expr.deformations.iter().position(|p| *p == name) {
            expr.deformations.remove(i);
            if let Parsed::Family(f) = &expr.parsed {
                let keep: Vec<&str> = f.parameters().filter(|p| *p != name).collect();
                let base = f.base().add(&f.direction(&name).expect("known").scale(&v))?;
                let restricted = DeformationFamily::new(base, keep.iter().map(|k| (k.to_string(), f.direction(k).expect("known").clone())).collect())?;
                expr.parsed = if keep.is_empty() {
                    Parsed::Germ(restricted.base().clone())
                } else {
                    Parsed::Family(restricted)
                };
            }
            continue;
        } else {
            return Err(CliError::Usage(format!("`--set {name}`: no such parameter")));
        }
        expr.parsed = match expr.parsed {
            Parsed::Germ(g) => Parsed::Germ(g.substitute_param(&name, &v)),
            Parsed::Family(f) => Parsed::Family(f.substitute_param(&name, &v)),
            Parsed::Ctf(d) => Parsed::Ctf(substitute_ctf(&d, &name, &v)?),
        };
    }
    Ok(expr)
}

fn substitute_ctf(d: &CtfData, name: &str, v: &ParamPoly) -> Result<CtfData, CliError> {
    let s = |u: &UniSeries| u.substitute_param(name, v);
    let out = CtfData::new(s(&d.alpha), s(&d.a), s(&d.b), s(&d.c), s(&d.d));
    Ok(match d.remainder() {
        Some([e1, e2]) => out.with_remainder(e1.substitute_param(name, v), e2.substitute_param(name, v))?,
        None => out,
    })
}

fn echo(cli: &Cli, expr: Option<&GermExpression>, flags: &[(&str, String)]) -> InputEcho {
    let mut map: BTreeMap<String, String> = flags.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    map.insert("order".into(), cli.order.map_or_else(|| "default".to_string(), |o| o.to_string()));
    for (k, s) in cli.set.iter().enumerate() {
        map.insert(format!("set.{k}"), s.clone());
    }
    match expr {
        Some(e) => InputEcho {
            text: Some(e.source.clone()),
            canonical: Some(e.canonical()),
            kind: Some(e.kind().into()),
            parameters: e.parameters.clone(),
            deformations: e.deformations.clone(),
            flags: map,
        },
        None => InputEcho {
            flags: map,
            ..InputEcho::default()
        },
    }
}

fn exactness(expr: &GermExpression) -> Exactness {
    let mut ex = Exactness::exact(expr.working_order);
    if expr.truncated {
        ex.notes.push(format!("terms above degree {} were dropped", expr.working_order));
    }
    ex
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn require_germ(expr: &GermExpression) -> Result<PlaneGermJet, CliError> {
    expr.as_germ()
        .ok_or_else(|| CliError::Usage("expected a germ `f1 ; f2`, found CTF data".into()))
}

fn jet(cli: &Cli, a: &JetArgs) -> Result<Output, CliError> {
    let expr = parse(cli, &a.germ)?;
    let f = require_germ(&expr)?;
    let other = match (&a.other, a.op) {
        (Some(t), _) => Some(require_germ(&parse(cli, t)?)?),
        (None, JetOp::Compose | JetOp::Sum) => return Err(CliError::Usage("this operation needs `--with`".into())),
        (None, _) => None,
    };
    let (value, exact_to) = match a.op {
        JetOp::Canonical => (f.to_string(), f.exact_to()),
        JetOp::Jacobian => {
            let j = f.jacobian_determinant();
            (j.truncate(j.exact_to()).to_string(), j.exact_to())
        }
        JetOp::Compose => {
            let g = f.compose(other.as_ref().expect("checked"))?;
            (g.to_string(), g.exact_to())
        }
        JetOp::Invert => {
            let g = CoordChangeJet::new(f.clone(), false)?.invert()?.into_jet();
            (g.to_string(), g.exact_to())
        }
        JetOp::Sum => {
            let g = f.add(other.as_ref().expect("checked"))?;
            (g.to_string(), g.exact_to())
        }
    };
    let op = format!("{:?}", a.op).to_lowercase();
    let mut ex = exactness(&expr);
    ex.exact_through = Some(exact_to);
    let mut flags = vec![("op", op.clone())];
    if let Some(t) = &a.other {
        flags.push(("with", t.clone()));
    }
    let report = Report::new(
        "jet",
        echo(cli, Some(&expr), &flags),
        ex,
        Verdict::Informational,
        format!("{op}: {value}"),
        json!({ "op": op, "value": value, "exactThrough": exact_to }),
    );
    Ok(Output::new(report))
}

fn determinacy(cli: &Cli, a: &DeterminacyArgs) -> Result<Output, CliError> {
    let expr = parse(cli, &a.germ)?;
    let f = require_germ(&expr)?;
    let cert = du_plessis_determinacy(&f, a.k, a.l)?;
    let reduction = a.reduce.map(|r| order_reduction_check(&f, r)).transpose()?;
    let chain = if a.sharpen { Some(sharpen(&f, cert.clone())?) } else { None };
    let mut negative = !cert.certified;
    let mut determined = cert.certified.then_some(cert.order);
    if let (Some(r), Some(red)) = (a.reduce, &reduction) {
        if red.full_rank && cert.certified && r == cert.order {
            determined = Some(r - 1);
        }
        negative |= !red.full_rank;
    }
    if let Some(c) = &chain {
        determined = determined.map(|d| d.min(c.sharpened_order));
    }
    let summary = match (cert.certified, determined) {
        (true, Some(d)) if cert.excluded.is_empty() => format!("certified: {d}-determined"),
        (true, Some(d)) => format!("certified: {d}-determined unless {}", cert.excluded.join(" or ")),
        _ => format!("not certified at order {}", cert.order),
    };
    let summary = match &reduction {
        Some(r) if !r.full_rank => format!("{summary}; degree {} reduction fails", a.reduce.unwrap_or_default()),
        _ => summary,
    };
    let mut flags = vec![("k", a.k.to_string()), ("l", a.l.to_string()), ("sharpen", a.sharpen.to_string())];
    if let Some(r) = a.reduce {
        flags.push(("reduce", r.to_string()));
    }
    let mut ex = exactness(&expr);
    ex.notes.push("rank tests are exact over Q[parameters]; a negative certificate does not prove indeterminacy".into());
    let result = json!({
        "certified": cert.certified,
        "order": cert.order,
        "determinant": cert.inclusion_5.determinant.as_ref().map(|d| d.to_string()),
        "determinedOrder": determined,
        "certificate": to_value(&cert),
        "reduction": reduction.as_ref().map(to_value),
        "chain": chain.as_ref().map(to_value),
    });
    let verdict = if negative { Verdict::Negative } else { Verdict::Positive };
    Ok(Output::new(Report::new("determinacy", echo(cli, Some(&expr), &flags), ex, verdict, summary, result)))
}

fn codim(cli: &Cli, a: &CodimArgs) -> Result<Output, CliError> {
    let expr = parse(cli, &a.germ)?;
    let f = require_germ(&expr)?;
    let rep = extended_codimension(&f, a.cap)?;
    let summary = if rep.conclusive {
        format!("extended codimension {}", rep.codim)
    } else {
        format!("extended codimension at least {} (inconclusive at cap {})", rep.codim, rep.cap_degree)
    };
    let verdict = if rep.conclusive { Verdict::Positive } else { Verdict::Negative };
    let ex = exactness(&expr).note(format!("tangent space truncated at degree {}", rep.cap_degree));
    Ok(Output::new(Report::new(
        "codim",
        echo(cli, Some(&expr), &[("cap", a.cap.to_string())]),
        ex,
        verdict,
        summary,
        to_value(&rep),
    )))
}

fn miniversal(cli: &Cli, a: &MiniversalArgs) -> Result<Output, CliError> {
    let expr = parse(cli, &a.germ)?;
    let (f, mut dirs, mut names) = match &expr.parsed {
        Parsed::Family(fam) => (
            fam.base().clone(),
            fam.parameters().map(|p| fam.direction(p).expect("known").clone()).collect::<Vec<_>>(),
            fam.parameters().map(String::from).collect::<Vec<_>>(),
        ),
        Parsed::Germ(g) => (g.clone(), Vec::new(), Vec::new()),
        Parsed::Ctf(_) => return Err(CliError::Usage("expected a germ or family".into())),
    };
    for d in &a.directions {
        dirs.push(require_germ(&parse(cli, d)?)?);
        names.push(d.clone());
    }
    if dirs.is_empty() {
        return Err(CliError::Usage("no deformation directions: use `deform` clauses or `--direction`".into()));
    }
    let rep = is_miniversal(&f, &dirs, a.cap)?;
    let summary = if rep.miniversal {
        format!("miniversal with {} directions", rep.direction_count)
    } else if rep.spans {
        format!("versal but not minimal: {} directions, codimension {}", rep.direction_count, rep.codimension.codim)
    } else {
        format!("not versal: {} directions do not span the normal space", rep.direction_count)
    };
    let verdict = if rep.miniversal { Verdict::Positive } else { Verdict::Negative };
    let mut result = to_value(&rep);
    result["directions"] = json!(dirs.iter().zip(&names).map(|(d, n)| json!({"name": n, "direction": d.to_string()})).collect::<Vec<_>>());
    let ex = exactness(&expr).note(format!("tangent space truncated at degree {}", a.cap));
    Ok(Output::new(Report::new(
        "miniversal",
        echo(cli, Some(&expr), &[("cap", a.cap.to_string()), ("directions", a.directions.join(" | "))]),
        ex,
        verdict,
        summary,
        result,
    )))
}

fn ctf_classify(cli: &Cli, a: &CtfArgs) -> Result<Output, CliError> {
    let expr = parse(cli, &a.ctf)?;
    let Parsed::Ctf(data) = &expr.parsed else {
        return Err(CliError::Usage("expected CTF data `alpha: ...; A: ...; B: ...; C: ...; D: ...`".into()));
    };
    let gen = genericity(data);
    let special = special_curve(data);
    let (class, rejection, verdict) = match classify_graph(data) {
        Ok(c) => (Some(c), None, Verdict::Positive),
        Err(e @ (CtfError::NotStarGeneric(_) | CtfError::NotFlat | CtfError::FlatnessUndetermined { .. })) => {
            (None, Some(e.to_string()), Verdict::Negative)
        }
        Err(CtfError::NonNumeric) => (None, Some(CtfError::NonNumeric.to_string()), Verdict::Informational),
        Err(e) => return Err(e.into()),
    };
    let normal = match reduce_to_normal_form(data) {
        Ok(n) => Some(to_value(&n)),
        Err(e) => Some(json!({ "unavailable": e.to_string() })),
    };
    let summary = match &class {
        Some(c) => format!("graph singularity {}, perestroika {}", c.name, c.perestroika),
        None => format!("not classified: {}", rejection.as_deref().unwrap_or("")),
    };
    let figure = ctf_figure(cli, data, a.xi_range, a.curves);
    let result = json!({
        "data": super::parse::print_ctf(data),
        "family": build_family(data).to_string(),
        "genericity": to_value(&gen),
        "specialCurve": { "tag": special.tag.to_string(), "curve": special.curve.to_string() },
        "classification": class.as_ref().map(to_value),
        "rejection": rejection,
        "normalForm": normal,
        "plot": figure.as_ref().map(to_value),
    });
    let mut ex = exactness(&expr);
    if figure.is_none() {
        ex.notes.push("symbolic data is not plotted; assign parameters with --set".into());
    } else {
        ex.notes.push("plot coordinates are floating point samples of the exact family".into());
    }
    let flags = [("xi-range", a.xi_range.to_string()), ("curves", a.curves.to_string())];
    let mut out = Output::new(Report::new("ctf-classify", echo(cli, Some(&expr), &flags), ex, verdict, summary, result));
    out.figure = figure;
    Ok(out)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![(lo + hi) / 2.0],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn frame_of(cli: &Cli, curves: &[Curve]) -> Frame {
    match cli.window {
        Some(w) => Frame::new(w.0[0], w.0[1], w.0[2], w.0[3]),
        None => Frame::fit(curves.iter().flat_map(|c| c.points.iter())),
    }
}

/// Family curves `t -> φ(ξ, t)` at evenly spaced `ξ`, with the support.
fn ctf_figure(cli: &Cli, data: &CtfData, range: f64, count: usize) -> Option<Figure> {
    if !data.is_numeric() {
        return None;
    }
    let f = build_family(data);
    let none = |_: &str| None;
    let eval = |xi: f64, t: f64| -> Option<[f64; 2]> { Some([f.component(0).eval_f64(xi, t, &none)?, f.component(1).eval_f64(xi, t, &none)?]) };
    let steps = cli.grid.map_or(120, |g| g.width);
    let mut curves = Vec::new();
    let support: Vec<[f64; 2]> = linspace(-1.3 * range, 1.3 * range, steps + 1).into_iter().map(|s| [s * s, s * s * s]).collect();
    curves.push(Curve::new("support", Style::Support, support));
    for xi in linspace(-range, range, count) {
        let pts: Option<Vec<[f64; 2]>> = linspace(-0.5 * range, 0.5 * range, steps + 1).into_iter().map(|t| eval(xi, t)).collect();
        let style = if xi.abs() < 1e-12 { Style::Primary } else { Style::Secondary };
        curves.push(Curve::new(format!("xi = {}", fixed(xi)), style, pts?));
    }
    // Frame the support; family curves are clipped to it.
    let frame = match cli.window {
        Some(_) => frame_of(cli, &curves),
        None => {
            let f = Frame::fit(curves[0].points.iter());
            let (cx, cy, half) = ((f.x0 + f.x1) / 2.0, (f.y0 + f.y1) / 2.0, (f.x1 - f.x0) * 0.6);
            Frame::new(cx - half, cx + half, cy - half, cy + half)
        }
    };
    let mut panel = Panel::new("family curves near the support", frame);
    panel.curves = curves;
    Some(Figure::Single { panel, insets: vec![] })
}

fn fixed(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn envelope(cli: &Cli, a: &EnvelopeArgs) -> Result<Output, CliError> {
    let expr = parse(cli, &a.germ)?;
    let f = require_germ(&expr)?;
    let set = critical_set(&f)?;
    let env = envelope_of(&f)?;
    let tags: Vec<String> = env.branches.iter().map(|b| b.tag.to_string()).collect();
    let self_intersections: Vec<Value> = env
        .branches
        .iter()
        .map(|b| match self_intersection(&b.image) {
            Ok(s) => to_value(&s),
            Err(e) => json!({ "unavailable": e.to_string() }),
        })
        .collect();
    let tangency = match env.branches.as_slice() {
        [b1, b2] => Some(match tangency_order(&b1.image, &b2.image) {
            Ok(t) => json!({ "order": to_value(&t) }),
            Err(e) => json!({ "unavailable": e.to_string() }),
        }),
        _ => None,
    };
    let figure = envelope_figure(cli, &f, a.range)?;
    let mut ex = exactness(&expr);
    ex.exact_through = env.branches.iter().map(|b| b.order).min();
    if figure.is_none() {
        ex.notes.push("symbolic branches are not plotted; assign parameters with --set".into());
    }
    let summary = if tags.is_empty() {
        "no critical branches through the origin".to_string()
    } else {
        format!("{} branch(es): {}", tags.len(), tags.join(", "))
    };
    let result = json!({
        "jacobian": set.jacobian.truncate(set.jacobian.exact_to()).to_string(),
        "branches": to_value(&env.branches),
        "tags": tags,
        "residual": to_value(&env.residual),
        "cofactor": set.cofactor.as_ref().map(|c| c.to_string()),
        "selfIntersections": self_intersections,
        "tangency": tangency,
        "plot": figure.as_ref().map(to_value),
    });
    let mut out = Output::new(Report::new(
        "envelope",
        echo(cli, Some(&expr), &[("range", a.range.to_string())]),
        ex,
        Verdict::Informational,
        summary,
        result,
    ));
    out.figure = figure;
    Ok(out)
}

/// Exact branch images sampled on `[-range, range]`; `None` when symbolic.
fn envelope_figure(cli: &Cli, f: &PlaneGermJet, range: f64) -> Result<Option<Figure>, CliError> {
    let env = match envelope_of(f) {
        Ok(e) => e,
        Err(EnvelopeError::ZeroJacobian) => {
            let frame = frame_of(cli, &[]);
            return Ok(Some(Figure::Single {
                panel: Panel::new("critical values", frame),
                insets: vec![],
            }));
        }
        Err(e) => return Err(e.into()),
    };
    let steps = cli.grid.map_or(200, |g| g.width);
    let none = |_: &str| None;
    let mut curves = Vec::new();
    for b in &env.branches {
        let [x, y] = b.image.components();
        match crate::envelope::numeric::sample_curve(x, y, &none, -range, range, steps) {
            Some(points) => curves.push(Curve::new(format!("{} ({})", b.label, b.tag), Style::Primary, points)),
            None => return Ok(None),
        }
    }
    let frame = frame_of(cli, &curves);
    let mut panel = Panel::new("critical values", frame);
    panel.curves = curves;
    Ok(Some(Figure::Single { panel, insets: vec![] }))
}

fn parse_range(s: &str) -> Result<(Rational, Rational), CliError> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected lo,hi, got `{s}`")))?;
    let (lo, hi) = (parse_rational(lo).map_err(CliError::Usage)?, parse_rational(hi).map_err(CliError::Usage)?);
    if lo >= hi {
        return Err(CliError::Usage("range needs lo < hi".into()));
    }
    Ok((lo, hi))
}

fn delta_rational(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--delta: {e}")))
}

fn bifurcate(cli: &Cli, a: &BifurcateArgs) -> Result<Output, CliError> {
    match a.mode {
        BifurcateMode::Series => branch_series(cli, a),
        BifurcateMode::Tangential => tangential(cli, a),
        BifurcateMode::Diagram => diagram(cli, a),
        BifurcateMode::Sweep => sweep_command(cli, a),
    }
}

fn base_flags(a: &BifurcateArgs) -> Vec<(&'static str, String)> {
    vec![("mode", format!("{:?}", a.mode).to_lowercase()), ("delta", a.delta.clone())]
}

fn branch_series(cli: &Cli, a: &BifurcateArgs) -> Result<Output, CliError> {
    let delta = if a.delta.trim() == "d" {
        ParamPoly::var("d")
    } else {
        ParamPoly::constant(delta_rational(&a.delta)?)
    };
    let order = order(cli);
    let s = h_branch_series(&delta, order)?;
    let residual = s.residual();
    let mut ex = Exactness::exact(order);
    ex.exact_through = Some(order);
    let result = json!({
        "series": to_value(&s),
        "residual": residual.to_string(),
        "residualVanishes": residual.is_zero(),
    });
    let summary = format!("y(x) = {}", s.branch.fmt_in("x"));
    Ok(Output::new(Report::new("bifurcate", echo(cli, None, &base_flags(a)), ex, Verdict::Informational, summary, result)))
}

fn tangential(cli: &Cli, a: &BifurcateArgs) -> Result<Output, CliError> {
    let delta = delta_rational(&a.delta)?;
    let lambda = parse_rational(&a.lambda).map_err(CliError::Usage)?;
    let c = tangential_deformation_check(&delta, &lambda)?;
    let summary = format!(
        "tangency order {}; reduced 3-jet {} {} (y, x^3 + x^2*y)",
        c.tangency_order,
        c.reduced_jet,
        if c.matches_normal_form { "reduces to" } else { "does not reduce to" }
    );
    let verdict = if c.matches_normal_form { Verdict::Positive } else { Verdict::Negative };
    let mut flags = base_flags(a);
    flags.push(("lambda", a.lambda.clone()));
    let ex = Exactness::exact(8).note("comparison modulo degree 4".to_string());
    Ok(Output::new(Report::new("bifurcate", echo(cli, None, &flags), ex, verdict, summary, to_value(&c))))
}

fn sweep_config(cli: &Cli) -> SweepConfig {
    let mut config = SweepConfig {
        order: cli.order.unwrap_or(SWEEP_ORDER),
        ..SweepConfig::default()
    };
    if let Some(g) = cli.grid {
        config.picture_resolution = g.width.max(g.height);
    }
    config
}

fn sweep_family(cli: &Cli, a: &BifurcateArgs, order: u32) -> Result<(DeformationFamily, Option<GermExpression>), CliError> {
    if let Some(text) = &a.germ {
        let expr = parse_germ(text, order).map_err(|error| CliError::Parse {
            rendered: error.render(text),
            error,
        })?;
        let expr = apply_sets(expr, &cli.set)?;
        return match &expr.parsed {
            Parsed::Family(f) => Ok((f.clone(), Some(expr))),
            _ => Err(CliError::Usage("`--germ` needs `deform` clauses for a sweep".into())),
        };
    }
    let d = ParamPoly::var("d");
    Ok(match a.family {
        FamilyName::Psi => (DeformationFamily::psi_family(order, d), None),
        FamilyName::H => (DeformationFamily::h_family(order, d), None),
        FamilyName::K => (DeformationFamily::k_family(order, d), None),
    })
}

fn sweep_command(cli: &Cli, a: &BifurcateArgs) -> Result<Output, CliError> {
    let config = sweep_config(cli);
    let delta = delta_rational(&a.delta)?;
    let (family, expr) = sweep_family(cli, a, config.order)?;
    let names: Vec<&str> = a.sweep.split(',').map(str::trim).collect();
    let (lo, hi) = parse_range(&a.range)?;
    let axis = match names.as_slice() {
        [p] => SweepAxis::line(p, lo, hi, a.samples),
        [p, q] => SweepAxis::grid([p, q], lo, hi, a.samples),
        _ => return Err(CliError::Usage("`--sweep` takes one or two parameter names".into())),
    };
    let restricted = family.restrict(&names)?;
    let report = sweep(&restricted, &axis, &delta, &config)?;
    let figure = sweep_figure(cli, &restricted, &report, &delta, &config)?;
    let table = sweep_table(&report);
    let summary = if report.events.is_empty() {
        "no events".to_string()
    } else {
        report
            .events
            .iter()
            .map(|e| format!("{} on {} at {}", e.kind, e.branch, e.stratum.as_deref().unwrap_or("unrecognised stratum")))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let mut flags = base_flags(a);
    flags.push(("sweep", a.sweep.clone()));
    flags.push(("range", a.range.clone()));
    flags.push(("samples", a.samples.to_string()));
    if a.germ.is_none() {
        flags.push(("family", format!("{:?}", a.family).to_lowercase()));
    }
    let mut ex = Exactness::exact(config.order);
    ex.exact = false;
    ex.notes.push("envelope branches through the origin are exact; cusps, double points and traced branches are floating point".into());
    ex.notes.push(format!("transitions bisected to width {}", config.bisect_width));
    let mut result = to_value(&report);
    result["plot"] = figure.as_ref().map(to_value).unwrap_or(Value::Null);
    let mut out = Output::new(Report::new("bifurcate", echo(cli, expr.as_ref(), &flags), ex, Verdict::Informational, summary, result));
    out.figure = figure;
    out.table = Some(table);
    Ok(out)
}

fn sample_title(s: &Sample) -> String {
    s.values.iter().map(|v| format!("{} = {}", v.name, v.exact)).collect::<Vec<_>>().join(", ")
}

fn sample_germ(family: &DeformationFamily, delta: &Rational, s: &Sample) -> Result<PlaneGermJet, CliError> {
    let values: Vec<(&str, Rational)> = s
        .values
        .iter()
        .map(|v| Ok((v.name.as_str(), parse_rational(&v.exact).map_err(CliError::Usage)?)))
        .collect::<Result<_, CliError>>()?;
    Ok(family.substitute_param("d", &ParamPoly::constant(delta.clone())).at(&values)?)
}

fn cloud_curves(germ: &PlaneGermJet, config: &SweepConfig) -> Result<Vec<Curve>, CliError> {
    let cloud = numeric_envelope(germ, &|_| None, Window::square(config.picture_window), config.picture_resolution)?;
    Ok(cloud
        .polylines()
        .into_iter()
        .enumerate()
        .map(|(k, p)| Curve::new(format!("component {k}"), Style::Primary, p))
        .collect())
}

/// Envelope pictures at up to five samples of a line sweep.
fn sweep_figure(cli: &Cli, family: &DeformationFamily, report: &SweepReport, delta: &Rational, config: &SweepConfig) -> Result<Option<Figure>, CliError> {
    if report.parameters.len() != 1 || report.samples.is_empty() {
        return Ok(None);
    }
    let n = report.samples.len();
    let mut picks: Vec<usize> = (0..5).map(|k| k * (n - 1) / 4).collect();
    picks.dedup();
    let mut panels = Vec::new();
    for i in picks {
        let s = &report.samples[i];
        let curves = cloud_curves(&sample_germ(family, delta, s)?, config)?;
        let frame = frame_of(cli, &curves);
        let mut panel = Panel::new(sample_title(s), frame);
        panel.curves = curves;
        panels.push(panel);
    }
    Ok(Some(Figure::Row(panels)))
}

fn sweep_table(report: &SweepReport) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = report.parameters.clone();
    for role in [BranchRole::Support, BranchRole::Special] {
        for col in ["tag", "cusps", "double_points"] {
            header.push(format!("{role}_{col}"));
        }
    }
    header.push("contact_order".into());
    header.push("error".into());
    let rows = report
        .samples
        .iter()
        .map(|s| {
            let mut row: Vec<String> = s.values.iter().map(|v| v.exact.clone()).collect();
            for role in [BranchRole::Support, BranchRole::Special] {
                match s.branch(role) {
                    Some(b) => {
                        row.push(b.tag.to_string());
                        row.push(b.cusps.len().to_string());
                        row.push(b.double_points.len().to_string());
                    }
                    None => row.extend([String::new(), String::new(), String::new()]),
                }
            }
            row.push(s.contact.as_ref().and_then(|c| c.order).map(|o| o.to_string()).unwrap_or_default());
            row.push(s.error.clone().unwrap_or_default());
            row
        })
        .collect();
    (header, rows)
}

fn diagram(cli: &Cli, a: &BifurcateArgs) -> Result<Output, CliError> {
    let config = sweep_config(cli);
    let delta = delta_rational(&a.delta)?;
    let d = double_cusp_diagram(&delta, a.samples, &config)?;
    let r = config.radius;
    let mut main = Panel::new(format!("(lambda, mu) plane, delta = {}", fmt_rational(&delta)), Frame::square(r));
    main.strata = vec![
        Stratum {
            label: "lambda = 0".into(),
            from: [0.0, -r],
            to: [0.0, r],
        },
        Stratum {
            label: "mu = 0".into(),
            from: [-r, 0.0],
            to: [r, 0.0],
        },
    ];
    let insets = d
        .quadrants
        .iter()
        .map(|q| {
            let curves: Vec<Curve> = q
                .curves
                .iter()
                .enumerate()
                .map(|(k, p)| Curve::new(format!("{} #{k}", q.label), Style::Primary, p.clone()))
                .collect();
            let frame = match cli.window {
                Some(w) => Frame::new(w.0[0], w.0[1], w.0[2], w.0[3]),
                None => Frame::fit(curves.iter().flat_map(|c| c.points.iter())),
            };
            let lam = parse_rational(&q.lambda).ok().and_then(|v| num_traits::ToPrimitive::to_f64(&v)).unwrap_or(0.0);
            let mu = parse_rational(&q.mu).ok().and_then(|v| num_traits::ToPrimitive::to_f64(&v)).unwrap_or(0.0);
            let mut panel = Panel::new(q.label.clone(), frame);
            panel.curves = curves;
            Inset { anchor: [lam, mu], panel }
        })
        .collect();
    let figure = Figure::Single { panel: main, insets };
    let events: Vec<_> = d.lambda_events.iter().chain(&d.mu_events).collect();
    let summary = format!(
        "strata {}; {} axis event(s): {}",
        d.strata.join(", "),
        events.len(),
        events.iter().map(|e| format!("{} on {}", e.kind, e.branch)).collect::<Vec<_>>().join(", ")
    );
    let mut result = to_value(&d);
    result["plot"] = to_value(&figure);
    let mut ex = Exactness::exact(config.order);
    ex.exact = false;
    ex.notes.push("quadrant envelopes are sampled critical values".into());
    let mut flags = base_flags(a);
    flags.push(("samples", a.samples.to_string()));
    let mut out = Output::new(Report::new("bifurcate", echo(cli, None, &flags), ex, Verdict::Informational, summary, result));
    out.figure = Some(figure.clone());
    out.table = Some(figure_rows(&figure));
    Ok(out)
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e.to_string()));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn figure_rows(f: &Figure) -> (Vec<String>, Vec<Vec<String>>) {
    let panels: Vec<&Panel> = match f {
        Figure::Single { panel, insets } => std::iter::once(panel).chain(insets.iter().map(|i| &i.panel)).collect(),
        Figure::Row(p) => p.iter().collect(),
    };
    let mut rows = Vec::new();
    for p in panels {
        for c in &p.curves {
            for pt in &c.points {
                rows.push(vec![p.title.clone(), c.label.clone(), format!("{:.9}", pt[0]), format!("{:.9}", pt[1])]);
            }
        }
    }
    (vec!["panel".into(), "label".into(), "x".into(), "y".into()], rows)
}

fn figure_csv(f: &Figure) -> Result<String, CliError> {
    let (h, rows) = figure_rows(f);
    csv_text(&h, &rows)
}

/// Reads a CSV point cloud with columns `label,x,y` (or `panel,label,x,y`).
fn read_cloud(text: &str) -> Result<Vec<Curve>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut curves: Vec<Curve> = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Usage(format!("point cloud: {e}")))?;
        let fields: Vec<&str> = rec.iter().collect();
        let (label, xs, ys) = match fields.as_slice() {
            [l, x, y] => (l.to_string(), *x, *y),
            [p, l, x, y] => (format!("{p}/{l}"), *x, *y),
            [] => continue,
            _ => return Err(CliError::Usage(format!("point cloud line {}: expected label,x,y", k + 1))),
        };
        let (x, y) = match (xs.trim().parse::<f64>(), ys.trim().parse::<f64>()) {
            (Ok(x), Ok(y)) => (x, y),
            _ if k == 0 => continue,
            _ => return Err(CliError::Usage(format!("point cloud line {}: invalid number", k + 1))),
        };
        match curves.iter_mut().find(|c| c.label == label) {
            Some(c) => c.points.push([x, y]),
            None => curves.push(Curve::new(label, Style::Primary, vec![[x, y]])),
        }
    }
    Ok(curves)
}

fn render(cli: &Cli, a: &RenderArgs) -> Result<String, CliError> {
    let figure = match (&a.input, &a.germ, &a.ctf) {
        (Some(path), None, None) => {
            let text = std::fs::read_to_string(path)?;
            if text.trim_start().starts_with('{') {
                let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                match v.get("result").and_then(|r| r.get("plot")) {
                    Some(p) if !p.is_null() => {
                        serde_json::from_value::<Figure>(p.clone()).map_err(|e| CliError::Usage(format!("{}: malformed plot: {e}", path.display())))?
                    }
                    _ => return Err(CliError::Usage(format!("{}: report carries no numeric plot data", path.display()))),
                }
            } else {
                let curves = read_cloud(&text)?;
                let mut panel = Panel::new("", frame_of(cli, &curves));
                panel.curves = curves;
                Figure::Single { panel, insets: vec![] }
            }
        }
        (None, Some(g), None) => {
            let f = require_germ(&parse(cli, g)?)?;
            envelope_figure(cli, &f, a.range)?
                .ok_or_else(|| CliError::Usage("symbolic germ: assign parameters with --set".into()))?
        }
        (None, None, Some(c)) => {
            let expr = parse(cli, c)?;
            let Parsed::Ctf(data) = &expr.parsed else {
                return Err(CliError::Usage("`--ctf` expects CTF data".into()));
            };
            ctf_figure(cli, data, a.range, 7).ok_or_else(|| CliError::Usage("symbolic data: assign parameters with --set".into()))?
        }
        _ => return Err(CliError::Usage("render needs exactly one of --input, --germ, --ctf".into())),
    };
    Ok(svg::render(&figure))
}
