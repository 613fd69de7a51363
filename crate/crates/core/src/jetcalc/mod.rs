//! Exact jet calculus: parameter polynomials, truncated series, map-germ jets.

pub mod curve;
pub mod germ;
pub mod ring;
pub mod ser;
pub mod series;

pub use curve::{substitute_curve, CurveJet, UniSeries};
pub use germ::{
    compose, compose_components, invert_coordinate_change, jacobian_determinant, CoordChangeJet,
    PlaneGermJet, SpaceGermJet,
};
pub use ring::{int, rat, ParamMonomial, ParamPoly, Rational};
pub use series::{differentiate, linear_combine, multiply, GermVar, Monomial, TruncatedSeries};

/// Default working order for jets.
pub const DEFAULT_ORDER: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("working orders differ: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("{coeffs} coefficients for {jets} series")]
    LengthMismatch { coeffs: usize, jets: usize },
    #[error("empty linear combination")]
    Empty,
    #[error("germ component has a nonzero constant term")]
    NonZeroConstant,
    #[error("linear part is singular (determinant {0})")]
    SingularLinearPart(String),
    #[error("linear determinant {0} is not a unit in the coefficient ring")]
    NotInvertibleOverRing(String),
    #[error("constant term is not a nonzero rational")]
    NotAUnit,
    #[error("constant term is not the square of a nonzero rational")]
    NotASquare,
}
