//! Normalization of corank-one germs `(R², 0) -> (R³, 0)` of the form
//! `(X, Y, x)` towards `(u, v², v³ + g(u) v)`.

use num_traits::Zero;

use super::CtfError;
use crate::jetcalc::{
    substitute_curve, CoordChangeJet, Monomial, ParamPoly, PlaneGermJet, Rational, SpaceGermJet,
    TruncatedSeries, UniSeries,
};

/// Outcome of the reduction. `normalized` is `(u, v², X)` where, when
/// `cubic` is nonzero, `X = v³ + g(u) v + (terms of degree > jet_degree)`.
#[derive(Clone, Debug)]
pub struct CorankOneForm {
    pub jet_degree: u32,
    /// Coefficient of `v³` before division by the unit: zero means the
    /// cubic term is missing.
    pub cubic: Rational,
    /// `g(u)`: the coefficient series of `v` in the normalized `X`.
    pub linear_coefficient: UniSeries,
    pub normalized: SpaceGermJet,
    /// Human-readable record of the coordinate changes applied.
    pub steps: Vec<String>,
}

fn pure_x(s: &TruncatedSeries) -> TruncatedSeries {
    TruncatedSeries::from_terms(s.order(), s.terms().filter(|(m, _)| m.y == 0).map(|(m, c)| (*m, c.clone())))
}

/// Reduces `f`, whose component `z_slot` is exactly the source variable `x`,
/// using component `y_slot` as the Morse coordinate in `y`. Coefficients must
/// be numeric; the result is exact through `jet_degree`.
pub fn reduce_corank_one(f: &SpaceGermJet, z_slot: usize, y_slot: usize, jet_degree: u32) -> Result<CorankOneForm, CtfError> {
    let order = jet_degree + 3;
    let f = f.with_order(order.max(f.order())).with_order(order);
    if f.component(z_slot) != &TruncatedSeries::x(order) {
        return Err(CtfError::Degenerate("no component equals the source variable".into()));
    }
    if f.components().iter().any(|c| !c.is_numeric()) {
        return Err(CtfError::NonNumeric);
    }
    let x_slot = 3 - z_slot - y_slot;
    let mut xs = f.component(x_slot).clone();
    let mut ys = f.component(y_slot).clone();
    let mut steps = Vec::new();

    ys = &ys - &pure_x(&ys);
    steps.push("target: Y -> Y - Y(Z, 0)".to_string());
    if !ys.coeff(0, 1).is_zero() {
        return Err(CtfError::Degenerate("germ is an immersion".into()));
    }
    let b0 = ys
        .coeff(0, 2)
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| CtfError::NotStarGeneric("no quadratic term in the fold coordinate".into()))?;

    // Critical point of y -> Y(x, y), as a series in x.
    let dy = ys.differentiate(crate::jetcalc::GermVar::Y);
    let step = ParamPoly::constant((b0.clone() * Rational::from_integer(2.into())).recip());
    let u = UniSeries::var(order);
    let mut crit = UniSeries::zero(order);
    for _ in 0..order {
        let g = substitute_curve(&dy, &u, &crit)?;
        crit = &crit - &g.scale(&step);
    }
    let shift = PlaneGermJet::new(TruncatedSeries::x(order), &TruncatedSeries::y(order) + &crit.to_bivariate(order, false))?;
    xs = xs.compose(shift.component(0), shift.component(1))?;
    ys = ys.compose(shift.component(0), shift.component(1))?;
    steps.push(format!("source: y -> y + ({})", crit.fmt_in("x")));
    ys = &ys - &pure_x(&ys);
    ys = ys.scale_rational(&b0.recip());
    steps.push(format!("target: Y -> (Y - Y(Z, 0)) / {}", crate::jetcalc::ring::fmt_rational(&b0)));

    // Y = y² W with W(0) = 1; v = y sqrt(W).
    let w = ys
        .div_monomial(Monomial::new(0, 2))
        .ok_or_else(|| CtfError::Degenerate("fold coordinate is not divisible by y^2".into()))?;
    let root = w.sqrt()?;
    let v_map = PlaneGermJet::new(TruncatedSeries::x(order), root.mul_monomial(Monomial::new(0, 1)))?;
    let inverse = CoordChangeJet::new(v_map, true)?.invert()?;
    xs = xs.compose(inverse.as_jet().component(0), inverse.as_jet().component(1))?;
    steps.push("source: v = y sqrt(Y / y^2)".to_string());

    // Drop the part even in v: a function of (Z, Y).
    let odd = TruncatedSeries::from_terms(order, xs.terms().filter(|(m, _)| m.y % 2 == 1).map(|(m, c)| (*m, c.clone())));
    steps.push("target: X -> X - E(Z, Y)".to_string());

    let g = odd.div_monomial(Monomial::new(0, 1)).expect("odd part is divisible by v");
    let higher = TruncatedSeries::from_terms(order, g.terms().filter(|(m, _)| m.y >= 2).map(|(m, c)| (*m, c.clone())));
    let h = higher.div_monomial(Monomial::new(0, 2)).expect("filtered on y-degree");
    let cubic = h.constant_term().as_constant().expect("numeric");
    let xs = if cubic.is_zero() {
        odd
    } else {
        steps.push("target: X -> X / H(Z, Y)".to_string());
        odd.multiply(&h.recip()?)?
    };
    let linear_coefficient = UniSeries::from_x_slice(&xs.div_monomial(Monomial::new(0, 1)).expect("odd in v"));
    let normalized = SpaceGermJet::new(
        TruncatedSeries::x(order),
        TruncatedSeries::monomial(order, Monomial::new(0, 2), ParamPoly::one()),
        xs,
    )?;
    Ok(CorankOneForm {
        jet_degree,
        cubic,
        linear_coefficient: linear_coefficient.with_order(jet_degree),
        normalized,
        steps,
    })
}
