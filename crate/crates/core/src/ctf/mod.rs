//! Cusped tangential families given by their Taylor data along the
//! semicubic support `ξ -> (ξ², ξ³)`.
//!
//! Family germs use the source variables `(x, y) = (ξ, t)`.

pub mod corank;
pub mod graph;
pub mod normal_form;

use std::fmt;

use serde::Serialize;

use crate::jetcalc::{
    CurveJet, JetError, Monomial, ParamPoly, PlaneGermJet, SpaceGermJet, TruncatedSeries, UniSeries,
};

pub use corank::{reduce_corank_one, CorankOneForm};
pub use graph::{classify_graph, Perestroika, Sign, SingularityClass};
pub use normal_form::{psi, reduce_plane_germ, reduce_to_normal_form, NormalFormReduction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CtfError {
    #[error("remainder term of t-degree {degree} (at least 4 required)")]
    RemainderTooLow { degree: u32 },
    #[error("the {0} series must not depend on t")]
    NotUnivariate(&'static str),
    #[error("proportionality factor vanishes through the working order (flatness at least {at_least})")]
    FlatnessUndetermined { at_least: u32 },
    #[error("expected a {expected}-flat family, found flatness {found}")]
    WrongFlatness { expected: u32, found: u32 },
    #[error("family is not flat")]
    NotFlat,
    #[error("genericity condition fails: {0}")]
    NotStarGeneric(String),
    #[error("coefficients must be numeric rationals for this operation")]
    NonNumeric,
    #[error("normal form requires an irrational splitting: {0}")]
    NonRationalSplitting(String),
    #[error("degenerate jet: {0}")]
    Degenerate(String),
    #[error("normalization self-check failed: {0}")]
    PipelineMismatch(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// The support curve `ξ -> (ξ², ξ³)` with its tangent field `(2, 3ξ)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SupportCurve;

impl SupportCurve {
    pub fn parameterization(order: u32) -> CurveJet {
        CurveJet::new(UniSeries::from_ints(order, &[0, 0, 1]), UniSeries::from_ints(order, &[0, 0, 0, 1]))
    }

    /// `(1/ξ) dΓ/dξ`.
    pub fn tangent_field(order: u32) -> [UniSeries; 2] {
        [UniSeries::from_ints(order, &[2]), UniSeries::from_ints(order, &[0, 3])]
    }
}

/// Taylor data of a family:
/// `φ(ξ, t) = Γ(ξ) + α(ξ)(2, 3ξ) t + (A, B)(ξ) t² + (C, D)(ξ) t³ + remainder`.
///
/// Series are treated as polynomials: coefficients beyond their order are
/// zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtfData {
    pub alpha: UniSeries,
    pub a: UniSeries,
    pub b: UniSeries,
    pub c: UniSeries,
    pub d: UniSeries,
    remainder: Option<[TruncatedSeries; 2]>,
}

/// Order at which families are assembled unless the data asks for more.
pub const FAMILY_ORDER: u32 = 8;

impl CtfData {
    pub fn new(alpha: UniSeries, a: UniSeries, b: UniSeries, c: UniSeries, d: UniSeries) -> Self {
        CtfData {
            alpha,
            a,
            b,
            c,
            d,
            remainder: None,
        }
    }

    /// Builds data from integer coefficient lists in `ξ`.
    pub fn from_ints(alpha: &[i64], a: &[i64], b: &[i64], c: &[i64], d: &[i64]) -> Self {
        let s = |v: &[i64]| UniSeries::from_ints(FAMILY_ORDER, v);
        Self::new(s(alpha), s(a), s(b), s(c), s(d))
    }

    /// Adds a remainder whose terms all have `t`-degree at least 4.
    pub fn with_remainder(mut self, first: TruncatedSeries, second: TruncatedSeries) -> Result<Self, CtfError> {
        for s in [&first, &second] {
            if let Some(low) = s.terms().map(|(m, _)| m.y).min() {
                if low < 4 {
                    return Err(CtfError::RemainderTooLow { degree: low });
                }
            }
        }
        self.remainder = Some([first, second]);
        Ok(self)
    }

    pub fn remainder(&self) -> Option<&[TruncatedSeries; 2]> {
        self.remainder.as_ref()
    }

    /// Largest order among the coefficient series.
    pub fn order(&self) -> u32 {
        [&self.alpha, &self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|s| s.order())
            .max()
            .unwrap_or(FAMILY_ORDER)
    }

    pub fn is_numeric(&self) -> bool {
        [&self.alpha, &self.a, &self.b, &self.c, &self.d].iter().all(|s| s.is_numeric())
            && self
                .remainder
                .as_ref()
                .map_or(true, |r| r.iter().all(|s| s.is_numeric()))
    }

    /// Multiplies every coefficient series and the remainder by a constant.
    pub fn scaled(&self, factor: &ParamPoly) -> Self {
        CtfData {
            alpha: self.alpha.scale(factor),
            a: self.a.scale(factor),
            b: self.b.scale(factor),
            c: self.c.scale(factor),
            d: self.d.scale(factor),
            remainder: self.remainder.as_ref().map(|[r1, r2]| [r1.scale(factor), r2.scale(factor)]),
        }
    }
}

fn lift(order: u32, s: &UniSeries) -> TruncatedSeries {
    s.with_order(order).to_bivariate(order, false)
}

/// Assembles the family jet at the given working order.
pub fn build_family_at(data: &CtfData, order: u32) -> PlaneGermJet {
    let x = |k: u32| TruncatedSeries::monomial(order, Monomial::new(k, 0), ParamPoly::one());
    let alpha = lift(order, &data.alpha);
    let mut first = &x(2) + &alpha.scale(&ParamPoly::from_int(2)).mul_monomial(Monomial::new(0, 1));
    first = &first + &lift(order, &data.a).mul_monomial(Monomial::new(0, 2));
    first = &first + &lift(order, &data.c).mul_monomial(Monomial::new(0, 3));
    let mut second = &x(3) + &alpha.scale(&ParamPoly::from_int(3)).mul_monomial(Monomial::new(1, 1));
    second = &second + &lift(order, &data.b).mul_monomial(Monomial::new(0, 2));
    second = &second + &lift(order, &data.d).mul_monomial(Monomial::new(0, 3));
    if let Some([r1, r2]) = &data.remainder {
        first = &first + &r1.with_order(order);
        second = &second + &r2.with_order(order);
    }
    PlaneGermJet::new(first, second).expect("family has no constant term")
}

/// The family jet `φ(ξ, t)` at the data's order (at least the default).
pub fn build_family(data: &CtfData) -> PlaneGermJet {
    build_family_at(data, data.order().max(FAMILY_ORDER))
}

/// The graph `(φ1, φ2, ξ)`.
pub fn graph_map_at(data: &CtfData, order: u32) -> SpaceGermJet {
    let [f1, f2] = build_family_at(data, order).components().clone();
    SpaceGermJet::new(f1, f2, TruncatedSeries::x(order)).expect("graph has no constant term")
}

pub fn graph_map(data: &CtfData) -> SpaceGermJet {
    graph_map_at(data, data.order().max(FAMILY_ORDER))
}

/// Vanishing order of the proportionality factor at the cusp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Flatness {
    Exact(u32),
    /// `α` vanishes through the working order.
    AtLeast(u32),
}

impl fmt::Display for Flatness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flatness::Exact(n) => write!(f, "{n}"),
            Flatness::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenericityReport {
    pub flatness: Flatness,
    pub star_generic: bool,
    pub a0: ParamPoly,
    pub b0: ParamPoly,
    pub c0: ParamPoly,
    pub d0: ParamPoly,
    /// Leading coefficient of `α`, when the flatness is finite.
    pub alpha_n: Option<ParamPoly>,
}

impl GenericityReport {
    /// `A0 D0 − B0 C0`.
    pub fn cusp_determinant(&self) -> ParamPoly {
        &(&self.a0 * &self.d0) - &(&self.b0 * &self.c0)
    }
}

pub fn genericity(data: &CtfData) -> GenericityReport {
    let flatness = match data.alpha.valuation() {
        Some(n) => Flatness::Exact(n),
        None => Flatness::AtLeast(data.alpha.order() + 1),
    };
    let (a0, b0, c0, d0) = (data.a.coeff(0), data.b.coeff(0), data.c.coeff(0), data.d.coeff(0));
    let det = &(&a0 * &d0) - &(&b0 * &c0);
    let flat = !matches!(flatness, Flatness::Exact(0));
    GenericityReport {
        star_generic: flat && !(&b0 * &det).is_zero(),
        alpha_n: match flatness {
            Flatness::Exact(n) => Some(data.alpha.coeff(n)),
            Flatness::AtLeast(_) => None,
        },
        flatness,
        a0,
        b0,
        c0,
        d0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialCurveTag {
    RegularTangent,
    SemicubicCuspTransversal,
    Degenerate,
}

impl fmt::Display for SpecialCurveTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecialCurveTag::RegularTangent => "regular-tangent",
            SpecialCurveTag::SemicubicCuspTransversal => "semicubic-cusp-transversal",
            SpecialCurveTag::Degenerate => "degenerate",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SpecialCurve {
    pub curve: CurveJet,
    pub tag: SpecialCurveTag,
}

/// The curve `t -> φ(0, t)` with its diagnosis at `t = 0`.
pub fn special_curve(data: &CtfData) -> SpecialCurve {
    let f = build_family(data);
    let curve = CurveJet::new(UniSeries::from_y_slice(f.component(0)), UniSeries::from_y_slice(f.component(1)));
    let alpha0 = data.alpha.coeff(0);
    let (a0, b0, c0, d0) = (data.a.coeff(0), data.b.coeff(0), data.c.coeff(0), data.d.coeff(0));
    let det = &(&a0 * &d0) - &(&b0 * &c0);
    let tag = if !alpha0.is_zero() {
        SpecialCurveTag::RegularTangent
    } else if !det.is_zero() && !b0.is_zero() {
        SpecialCurveTag::SemicubicCuspTransversal
    } else {
        SpecialCurveTag::Degenerate
    };
    SpecialCurve { curve, tag }
}

/// Rejects symbolic data for numeric-only pipelines.
pub(crate) fn require_numeric(data: &CtfData) -> Result<(), CtfError> {
    if data.is_numeric() {
        Ok(())
    } else {
        Err(CtfError::NonNumeric)
    }
}
