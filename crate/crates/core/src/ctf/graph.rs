//! Singularity type of the graph `(φ, ξ)` of a flat family.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::corank::reduce_corank_one;
use super::{genericity, graph_map_at, require_numeric, CtfData, CtfError, Flatness};
use crate::jetcalc::{Monomial, ParamPoly, Rational, SpaceGermJet, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(r: &Rational) -> Option<Sign> {
        if r.is_positive() {
            Some(Sign::Plus)
        } else if r.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Metamorphosis of the family's curves near the cusp as the parameter
/// crosses zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Perestroika {
    #[serde(rename = "γ→U")]
    GammaToU,
    #[serde(rename = "γ→γ")]
    GammaToGamma,
    #[serde(rename = "U→U")]
    UToU,
}

impl fmt::Display for Perestroika {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Perestroika::GammaToU => "γ→U",
            Perestroika::GammaToGamma => "γ→γ",
            Perestroika::UToU => "U→U",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SingularityClass {
    /// `A_n`, with the sign appended for even `n`.
    pub name: String,
    pub index: u32,
    /// Reported only for even `n`.
    pub sign: Option<Sign>,
    pub perestroika: Perestroika,
    /// Coefficient of `u^n v` before the final rescaling.
    #[serde(serialize_with = "crate::jetcalc::ser::rational")]
    pub coefficient: Rational,
    /// The normalized `(n+1)`-jet `(u, v², v³ ± uⁿv)`.
    pub normal_jet: SpaceGermJet,
    pub steps: Vec<String>,
}

impl SingularityClass {
    pub fn is_whitney_umbrella(&self) -> bool {
        self.index == 1
    }
}

fn perestroika(n: u32, sign: Sign) -> Perestroika {
    match (n % 2, sign) {
        (1, _) => Perestroika::GammaToU,
        (_, Sign::Minus) => Perestroika::GammaToGamma,
        (_, Sign::Plus) => Perestroika::UToU,
    }
}

/// The model jet `(u, v², v³ + s uⁿv)` at the given order.
pub fn model_jet(order: u32, n: u32, sign: Sign) -> SpaceGermJet {
    let third = TruncatedSeries::from_terms(
        order,
        [
            (Monomial::new(0, 3), ParamPoly::one()),
            (Monomial::new(n, 1), ParamPoly::from_int(sign.factor())),
        ],
    );
    SpaceGermJet::new(
        TruncatedSeries::x(order),
        TruncatedSeries::monomial(order, Monomial::new(0, 2), ParamPoly::one()),
        third,
    )
    .expect("model jet")
}

/// Classifies the graph singularity of an `n`-flat generic family and checks
/// the normalized `(n+1)`-jet against the model.
pub fn classify_graph(data: &CtfData) -> Result<SingularityClass, CtfError> {
    require_numeric(data)?;
    let report = genericity(data);
    let n = match report.flatness {
        Flatness::Exact(0) => return Err(CtfError::NotFlat),
        Flatness::Exact(n) => n,
        Flatness::AtLeast(n) => return Err(CtfError::FlatnessUndetermined { at_least: n }),
    };
    if !report.star_generic {
        return Err(CtfError::NotStarGeneric(format!(
            "B0 (A0 D0 - B0 C0) = {} vanishes",
            &report.b0 * &report.cusp_determinant()
        )));
    }
    let jet_degree = n + 1;
    let graph = graph_map_at(data, jet_degree + 3);
    let form = reduce_corank_one(&graph, 2, 1, jet_degree)?;
    if form.cubic.is_zero() {
        return Err(CtfError::NotStarGeneric("cubic term vanishes".into()));
    }
    let g = &form.linear_coefficient;
    if g.valuation() != Some(n) {
        return Err(CtfError::PipelineMismatch(format!(
            "coefficient of v is {}, expected order {n}",
            g.fmt_in("u")
        )));
    }
    let coefficient = g.coeff(n).as_constant().expect("numeric");
    let mut sign = Sign::of(&coefficient).expect("nonzero");
    let mut steps = form.steps.clone();
    // Rescale v by sqrt|c| and X by |c|^(-3/2): a term u^i v^j picks up
    // |c|^((j-3)/2), rational since j is odd.
    let abs = coefficient.abs();
    let flip = n % 2 == 1 && sign == Sign::Minus;
    let order = form.normalized.order();
    let third = form.normalized.component(2).map_coeffs(|c| c.clone());
    let mut rescaled = TruncatedSeries::zero(order);
    for (m, c) in third.terms() {
        let e = (m.y as i32 - 3) / 2;
        let mut factor = if e >= 0 { abs.pow(e) } else { abs.recip().pow(-e) };
        if flip && m.x % 2 == 1 {
            factor = -factor;
        }
        rescaled.add_term(*m, c.scale(&factor));
    }
    steps.push(format!("rescale: v -> v sqrt({}), X -> X |c|^(-3/2)", crate::jetcalc::ring::fmt_rational(&abs)));
    if flip {
        steps.push("source: u -> -u, target: Z -> -Z".to_string());
        sign = Sign::Plus;
    }
    let normal_jet = SpaceGermJet::new(
        form.normalized.component(0).clone(),
        form.normalized.component(1).clone(),
        rescaled,
    )?
    .with_order(jet_degree);
    let model = model_jet(jet_degree, n, sign);
    if !normal_jet.eq_through(&model, jet_degree) {
        return Err(CtfError::PipelineMismatch(format!("normalized jet {normal_jet} differs from {model}")));
    }
    let shown_sign = (n % 2 == 0).then_some(sign);
    let name = match shown_sign {
        Some(s) => format!("A{n}{s}"),
        None => format!("A{n}"),
    };
    Ok(SingularityClass {
        name,
        index: n,
        sign: shown_sign,
        perestroika: perestroika(n, sign),
        coefficient,
        normal_jet,
        steps,
    })
}

