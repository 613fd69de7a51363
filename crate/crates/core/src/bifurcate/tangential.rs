use num_traits::Zero;
use serde::Serialize;

use super::{BifurcateError, DeformationFamily};
use crate::envelope::{envelope_of, tangency_order, TangencyOrder};
use crate::jetcalc::{ring::fmt_rational, CoordChangeJet, Monomial, ParamPoly, PlaneGermJet, Rational, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TangentialCheck {
    pub tangency_order: TangencyOrder,
    /// 3-jet of `H` in the coordinates `(x, Y)` with `Y = H_1 / λ`.
    pub reduced_jet: PlaneGermJet,
    /// 3-jet after the target and scaling changes; `(y, x³ + x²y)` on success.
    pub normal_form: PlaneGermJet,
    pub matches_normal_form: bool,
    pub steps: Vec<String>,
}

/// Tangency between the two envelope branches of `H` at `λ ≠ 0`, and the
/// reduction of `H` to `(y, x³ + x²y)` modulo degree 4.
pub fn tangential_deformation_check(delta: &Rational, lambda: &Rational) -> Result<TangentialCheck, BifurcateError> {
    if delta.is_zero() {
        return Err(BifurcateError::DegenerateDelta);
    }
    if lambda.is_zero() {
        return Err(BifurcateError::ZeroParameter("lambda".into()));
    }
    let order = 8;
    let family = DeformationFamily::h_family(order, ParamPoly::constant(delta.clone()));
    let germ = family.at(&[("lambda", lambda.clone())])?;

    let envelope = envelope_of(&germ)?;
    let [first, second] = match envelope.branches.as_slice() {
        [a, b] => [a, b],
        other => {
            return Err(BifurcateError::Unexpected(format!("expected two envelope branches, found {}", other.len())))
        }
    };
    let tangency = tangency_order(&first.image, &second.image)?;

    let mut steps = Vec::new();
    let inv_lam = ParamPoly::constant(lambda.recip());
    let change = PlaneGermJet::new(TruncatedSeries::x(order), germ.component(0).scale(&inv_lam))?;
    let inverse = CoordChangeJet::new(change, true)?.invert()?;
    let reduced = germ.compose(inverse.as_jet())?.truncate(3);
    steps.push(format!("source: Y = H1 / ({})", fmt_rational(lambda)));

    // Target: (X, Y) -> (X/λ, Y - q(X/λ)) removes the pure powers of y.
    let first_comp = reduced.component(0).scale(&inv_lam);
    let second_comp = reduced.component(1);
    let pure_y = TruncatedSeries::from_terms(order, second_comp.terms().filter(|(m, _)| m.x == 0).map(|(m, c)| (*m, c.clone())));
    let rest = (second_comp - &pure_y).truncate(3);
    steps.push(format!("target: (X, Y) -> (X / ({l}), Y - Q(X / ({l})))", l = fmt_rational(lambda)));

    let cubic = |i, j| rest.coeff(i, j).as_constant().unwrap_or_default();
    let (a, b) = (cubic(3, 0), cubic(2, 1));
    let leftover = rest.terms().any(|(m, _)| *m != Monomial::new(3, 0) && *m != Monomial::new(2, 1));
    let matches = !leftover && !a.is_zero() && !b.is_zero();
    let normal_form = if matches {
        // x -> (b/a) x, then divide the second component by b³/a².
        let alpha = &b / &a;
        let scale = (&a * &alpha * &alpha * &alpha).recip();
        steps.push(format!("source: x -> ({}) x", fmt_rational(&alpha)));
        steps.push(format!("target: Y -> ({}) Y", fmt_rational(&scale)));
        let stretch = PlaneGermJet::new(TruncatedSeries::x(order).scale_rational(&alpha), TruncatedSeries::y(order))?;
        let scaled = rest.compose(stretch.component(0), stretch.component(1))?.scale_rational(&scale);
        PlaneGermJet::new(first_comp.truncate(3), scaled.truncate(3))?
    } else {
        PlaneGermJet::new(first_comp.truncate(3), rest)?
    };
    let target = PlaneGermJet::from_ints(order, &[(0, 1, 1)], &[(3, 0, 1), (2, 1, 1)]);
    Ok(TangentialCheck {
        tangency_order: tangency,
        matches_normal_form: matches && normal_form.eq_through(&target, 3),
        reduced_jet: reduced,
        normal_form,
        steps,
    })
}
