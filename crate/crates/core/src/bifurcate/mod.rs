//! Deformation families, parameter sweeps with envelope recomputation,
//! perestroika detection and classification of branch-family surfaces.

mod diagram;
mod family;
pub mod features;
mod series;
mod surface;
mod sweep;
mod tangential;

pub use diagram::{double_cusp_diagram, DoubleCuspDiagram, QuadrantPicture};
pub use family::{DeformationFamily, ParamValue};
pub use series::{h_branch_series, HBranchSeries};
pub use surface::{classify_branch_surface, SurfaceClass, SurfaceKind};
pub use sweep::{
    analyze_sample, evenly_spaced, jacobian_saddle, sweep, BifurcationEvent, BranchContact, BranchRole, BranchSummary, Confidence,
    EventKind, EventLocation, JacobianSaddle, Sample, SampleValue, SweepAxis, SweepConfig, SweepReport,
};
pub use tangential::{tangential_deformation_check, TangentialCheck};

use crate::envelope::EnvelopeError;
use crate::jetcalc::JetError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BifurcateError {
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("parameter `{0}` is not assigned")]
    Unassigned(String),
    #[error("parameter `{0}` declared twice")]
    DuplicateParameter(String),
    #[error("direction of `{0}` depends on the parameter itself")]
    NonLinearParameter(String),
    #[error("delta must be nonzero")]
    DegenerateDelta,
    #[error("`{0}` must be nonzero")]
    ZeroParameter(String),
    #[error("parameter value {0} lies outside the sweep radius {1}")]
    OutsideRadius(String, f64),
    #[error("coefficients must be numeric")]
    NonNumeric,
    #[error("no component of the surface equals the family parameter")]
    NoParameterComponent,
    #[error("reduction failed: {0}")]
    Reduction(String),
    #[error("{0}")]
    Unexpected(String),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

impl From<crate::ctf::CtfError> for BifurcateError {
    fn from(e: crate::ctf::CtfError) -> Self {
        BifurcateError::Reduction(e.to_string())
    }
}
