//! Tangent spaces to A-orbits, determinacy certificates and codimension.

pub mod certificate;
pub mod codim;
pub mod generators;
pub mod matrix;
pub mod quotient;

pub use certificate::{
    certificate, check_inclusion_4, check_inclusion_5, determinacy_order, du_plessis_determinacy,
    inclusion_4_projection, inclusion_5_projection, order_reduction_check, order_reduction_projection,
    project, search_determinacy, sharpen, Certificate, DeterminacyCertificate, DeterminacyChain,
    QuotientProjection,
};
pub use codim::{extended_codimension, is_miniversal, CodimensionReport, MiniversalityReport, DEFAULT_CAP};
pub use generators::{tangent_generators, Generator, GeneratorKind, GeneratorLabel, GeneratorSet};
pub use matrix::{Echelon, Elimination, ParamMatrix, VanishingLocus};
pub use quotient::{quotient_basis, QuotientSpace, VectorMonomial};

use crate::jetcalc::JetError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("invalid degree window [{low}, {high})")]
    InvalidRange { low: u32, high: u32 },
    #[error("generators up to degree {needed} need exact coefficients, but the germ's derivatives are exact only through degree {available}")]
    Exactness { needed: u32, available: u32 },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}
