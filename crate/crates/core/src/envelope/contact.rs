//! Self-intersections of a branch and contact order between two branches.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::jetcalc::series::rational_sqrt;
use crate::jetcalc::{CurveJet, ParamPoly, Rational, UniSeries};

use super::EnvelopeError;

/// A quotient of parameter polynomials, kept unreduced except for exact
/// polynomial division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRatio {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamRatio {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if let Some(q) = num.div_exact(&den) {
            return ParamRatio {
                num: q,
                den: ParamPoly::one(),
            };
        }
        ParamRatio { num, den }
    }

    pub fn numerator(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denominator(&self) -> &ParamPoly {
        &self.den
    }

    pub fn as_rational(&self) -> Option<Rational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn eval_f64(&self, params: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
        Some(self.num.eval_f64(params)? / self.den.eval_f64(params)?)
    }

    pub fn substitute(&self, name: &str, value: &ParamPoly) -> Self {
        ParamRatio::new(self.num.substitute(name, value), self.den.substitute(name, value))
    }
}

fn wrapped(p: &ParamPoly) -> String {
    if p.num_terms() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for ParamRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "{}/{}", wrapped(&self.num), wrapped(&self.den))
    }
}

impl Serialize for ParamRatio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Existence {
    Exists,
    Absent,
    /// The double point has merged into a cusp at the base point.
    Boundary,
    /// Depends on formal parameters; see the condition.
    Conditional,
}

/// A double point `X(s1) = X(s2)`, `Y(s1) = Y(s2)` with `s1 != s2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelfIntersection {
    pub existence: Existence,
    /// Condition on formal parameters under which the double point exists.
    pub condition: Option<String>,
    pub point: Option<[ParamRatio; 2]>,
    pub approximate_point: Option<[f64; 2]>,
    /// Parameter values `s1 < s2` of the double point.
    pub parameters: Option<[f64; 2]>,
    pub exact_parameters: Option<[ParamRatio; 2]>,
    /// False when the verdict relies on a leading-order or floating point
    /// solve.
    pub exact: bool,
}

impl SelfIntersection {
    fn absent(existence: Existence, exact: bool) -> Self {
        SelfIntersection {
            existence,
            condition: None,
            point: None,
            approximate_point: None,
            parameters: None,
            exact_parameters: None,
            exact,
        }
    }

    pub fn exists(&self) -> bool {
        self.existence == Existence::Exists
    }
}

fn normalizing_component(curve: &CurveJet) -> Option<(usize, Rational)> {
    [1usize, 0].into_iter().find_map(|k| {
        let c = curve.component(k);
        let lead = c.coeff(2).as_constant().filter(|r| !r.is_zero())?;
        (c.coeff(0).is_zero() && c.coeff(1).is_zero()).then_some((k, lead))
    })
}

/// Double points of a branch near its base point.
///
/// One component is brought to the form `a σ²` by reparameterisation; the
/// other then splits as `E(σ²) + σ P(σ²)` and double points are the pairs
/// `±σ` with `P(σ²) = 0`, `σ² > 0`.
pub fn self_intersection(curve: &CurveJet) -> Result<SelfIntersection, EnvelopeError> {
    let (k, a) = normalizing_component(curve).ok_or_else(|| {
        EnvelopeError::Inconclusive("no component of the form a*s^2 + ... with rational a".into())
    })?;
    let quad = curve.component(k);
    let unit = quad
        .shift_down(2)
        .expect("valuation is two")
        .scale_rational(&a.recip());
    let root = unit.sqrt()?;
    let sigma = root.with_order(root.order() + 1).shift_up(1);
    let inverse = sigma.reversion()?;
    let other = curve.component(1 - k).compose(&inverse)?;
    let order = other.order();
    let odd: Vec<ParamPoly> = (0..=order).filter(|j| j % 2 == 1).map(|j| other.coeff(j)).collect();
    let even: Vec<ParamPoly> = (0..=order).filter(|j| j % 2 == 0).map(|j| other.coeff(j)).collect();
    let p_degree = odd.iter().rposition(|c| !c.is_zero());
    let Some(p_degree) = p_degree else {
        return Err(EnvelopeError::Inconclusive("branch is traced twice at working order".into()));
    };
    if p_degree == 0 {
        return Ok(SelfIntersection::absent(Existence::Absent, true));
    }
    let (p0, p1) = (&odd[0], &odd[1]);
    let linear = p_degree == 1;
    let numeric = odd.iter().chain(&even).all(|c| c.is_constant());
    let place = |first: ParamRatio, second: ParamRatio| -> [ParamRatio; 2] {
        if k == 1 {
            [first, second]
        } else {
            [second, first]
        }
    };
    if numeric {
        let w = if linear {
            Some(-(p0.constant_term() / p1.constant_term()))
        } else {
            None
        };
        if let Some(w) = w {
            if w.is_zero() {
                return Ok(SelfIntersection::absent(Existence::Boundary, true));
            }
            if w.is_negative() {
                return Ok(SelfIntersection::absent(Existence::Absent, true));
            }
            let e = even.iter().rev().fold(Rational::zero(), |acc, c| acc * &w + c.constant_term());
            let point = place(
                ParamRatio::new(ParamPoly::constant(e), ParamPoly::one()),
                ParamRatio::new(ParamPoly::constant(&a * &w), ParamPoly::one()),
            );
            let approximate_point = [point[0].as_rational(), point[1].as_rational()]
                .map(|r| r.and_then(|r| r.to_f64()).unwrap_or(f64::NAN));
            let root = w.to_f64().unwrap_or(f64::NAN).sqrt();
            let s_of = |v: f64| inverse.eval_f64(v, &|_| None).unwrap_or(f64::NAN);
            let exact_parameters = rational_sqrt(&w).and_then(|r| {
                let inv = inverse.to_f64()?;
                // Exact parameters only when the reparameterisation is the identity.
                (inv.iter().enumerate().all(|(j, c)| *c == if j == 1 { 1.0 } else { 0.0 })).then(|| {
                    [
                        ParamRatio::new(ParamPoly::constant(-r.clone()), ParamPoly::one()),
                        ParamRatio::new(ParamPoly::constant(r), ParamPoly::one()),
                    ]
                })
            });
            let mut pair = [s_of(-root), s_of(root)];
            pair.sort_by(f64::total_cmp);
            return Ok(SelfIntersection {
                existence: Existence::Exists,
                condition: None,
                point: Some(point),
                approximate_point: Some(approximate_point),
                parameters: Some(pair),
                exact_parameters,
                exact: true,
            });
        }
        return numeric_nonlinear(&odd, &even, &a, k, &inverse);
    }
    if p1.is_zero() {
        return Err(EnvelopeError::Inconclusive("leading odd coefficients vanish".into()));
    }
    // Symbolic: w = -p0/p1, exact when P is linear.
    let condition = format!("{} < 0", ParamRatio::new(p0.clone(), p1.clone()));
    let top = even.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let minus_p0 = -p0;
    let mut num = ParamPoly::zero();
    for (j, e) in even.iter().enumerate().take(top + 1) {
        let term = &(e * &minus_p0.pow(j as u32)) * &p1.pow((top - j) as u32);
        num += &term;
    }
    let point = place(
        ParamRatio::new(num, p1.pow(top as u32)),
        ParamRatio::new(&minus_p0 * &ParamPoly::constant(a.clone()), p1.clone()),
    );
    Ok(SelfIntersection {
        existence: Existence::Conditional,
        condition: Some(condition),
        point: Some(point),
        approximate_point: None,
        parameters: None,
        exact_parameters: None,
        exact: linear,
    })
}

fn numeric_nonlinear(
    odd: &[ParamPoly],
    even: &[ParamPoly],
    a: &Rational,
    k: usize,
    inverse: &UniSeries,
) -> Result<SelfIntersection, EnvelopeError> {
    let f = |v: &[ParamPoly]| -> Vec<f64> { v.iter().map(|c| c.constant_term().to_f64().unwrap_or(f64::NAN)).collect() };
    let (p, e) = (f(odd), f(even));
    let eval = |c: &[f64], w: f64| c.iter().rev().fold(0.0, |acc, x| acc * w + x);
    let dp: Vec<f64> = p.iter().enumerate().skip(1).map(|(j, c)| j as f64 * c).collect();
    if p[1] == 0.0 {
        return Err(EnvelopeError::Inconclusive("leading odd coefficients vanish".into()));
    }
    let mut w = -p[0] / p[1];
    for _ in 0..100 {
        let step = eval(&p, w) / eval(&dp, w);
        w -= step;
        if !w.is_finite() {
            return Err(EnvelopeError::Inconclusive("Newton iteration diverged".into()));
        }
        if step.abs() <= 1e-15 * w.abs().max(1e-300) {
            break;
        }
    }
    if eval(&p, w).abs() > 1e-12 * p.iter().map(|c| c.abs()).fold(0.0, f64::max) {
        return Err(EnvelopeError::Inconclusive("Newton iteration did not converge".into()));
    }
    if w <= 0.0 {
        return Ok(SelfIntersection::absent(Existence::Absent, false));
    }
    let a = a.to_f64().unwrap_or(f64::NAN);
    let (first, second) = (a * w, eval(&e, w));
    let point = if k == 1 { [second, first] } else { [first, second] };
    let root = w.sqrt();
    let s_of = |v: f64| inverse.eval_f64(v, &|_| None).unwrap_or(f64::NAN);
    let mut pair = [s_of(-root), s_of(root)];
    pair.sort_by(f64::total_cmp);
    Ok(SelfIntersection {
        existence: Existence::Exists,
        condition: None,
        point: None,
        approximate_point: Some(point),
        parameters: Some(pair),
        exact_parameters: None,
        exact: false,
    })
}

/// Contact order between two branches through a common point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TangencyOrder {
    Exact(u32),
    /// Contact persists through the working order.
    AtLeast(u32),
}

impl fmt::Display for TangencyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangencyOrder::Exact(k) => write!(f, "{k}"),
            TangencyOrder::AtLeast(k) => write!(f, ">= {k}"),
        }
    }
}

fn regular_slot(c: &CurveJet) -> Option<usize> {
    (0..2).find(|&k| c.component(k).coeff(1).as_constant().is_some_and(|r| !r.is_zero()))
}

fn centred(c: &CurveJet) -> CurveJet {
    let shift = |s: &UniSeries| {
        let mut s = s.clone();
        s.set_coeff(0, ParamPoly::zero());
        s
    };
    CurveJet::new(shift(c.component(0)), shift(c.component(1)))
}

/// Contact order `k` of two branches at their parameter-zero point: after
/// straightening the regular branch to an axis, the transverse coordinate
/// of the other vanishes to order `k + multiplicity`.
pub fn tangency_order(b1: &CurveJet, b2: &CurveJet) -> Result<TangencyOrder, EnvelopeError> {
    for k in 0..2 {
        if b1.component(k).coeff(0) != b2.component(k).coeff(0) {
            return Err(EnvelopeError::NoCommonPoint);
        }
    }
    let (b1, b2) = (centred(b1), centred(b2));
    let (regular, other, slot) = match (regular_slot(&b1), regular_slot(&b2)) {
        (Some(k), _) => (&b1, &b2, k),
        (None, Some(k)) => (&b2, &b1, k),
        (None, None) => {
            let symbolic = [&b1, &b2]
                .iter()
                .any(|c| (0..2).any(|k| !c.component(k).coeff(1).is_constant()));
            return Err(if symbolic {
                EnvelopeError::Inconclusive("velocity depends on formal parameters".into())
            } else {
                EnvelopeError::BothSingular
            });
        }
    };
    let inverse = regular.component(slot).reversion()?;
    let graph = regular.component(1 - slot).compose(&inverse)?;
    let along = graph.compose(other.component(slot))?;
    let transverse = other.component(1 - slot).with_order(along.order());
    let g = &transverse - &along;
    let mult = other
        .multiplicity()
        .ok_or_else(|| EnvelopeError::Inconclusive("second branch is constant at working order".into()))?;
    Ok(match g.valuation() {
        Some(m) => TangencyOrder::Exact(m.saturating_sub(mult)),
        None => TangencyOrder::AtLeast(g.order().saturating_sub(mult) + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(order: u32, slope: &[i64]) -> CurveJet {
        CurveJet::new(UniSeries::var(order), UniSeries::from_ints(order, slope))
    }

    #[test]
    fn contact_of_lines_and_parabolas() {
        let axis = line(6, &[0]);
        assert_eq!(tangency_order(&axis, &line(6, &[0, 1])).unwrap(), TangencyOrder::Exact(0));
        assert_eq!(tangency_order(&axis, &line(6, &[0, 0, 1])).unwrap(), TangencyOrder::Exact(1));
        assert_eq!(tangency_order(&line(6, &[0, 0, 1]), &axis).unwrap(), TangencyOrder::Exact(1));
        assert_eq!(tangency_order(&axis, &axis).unwrap(), TangencyOrder::AtLeast(6));
    }

    #[test]
    fn cusps_have_no_defined_contact() {
        let cusp = CurveJet::new(UniSeries::from_ints(6, &[0, 0, 1]), UniSeries::from_ints(6, &[0, 0, 0, 1]));
        assert_eq!(tangency_order(&cusp, &cusp), Err(EnvelopeError::BothSingular));
    }

    #[test]
    fn ratio_display() {
        let r = ParamRatio::new(ParamPoly::var("lambda"), ParamPoly::var("d"));
        assert_eq!(r.to_string(), "lambda/d");
        let r = ParamRatio::new(ParamPoly::var("lambda").scale(&Rational::from_integer(4.into())), ParamPoly::from_int(2));
        assert_eq!(r.to_string(), "2*lambda");
    }
}
