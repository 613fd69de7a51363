//! Critical sets and envelopes (critical value sets) of plane map-germ jets.

mod contact;
mod newton;
pub mod numeric;

use serde::Serialize;

use crate::jetcalc::{CurveJet, JetError, ParamPoly, PlaneGermJet, TruncatedSeries, UniSeries};
use crate::orbitspace::VanishingLocus;

pub use contact::{self_intersection, ParamRatio, SelfIntersection, Existence, tangency_order, TangencyOrder};
pub use numeric::{numeric_envelope, numeric_germ_envelope, CriticalCloud, CriticalPoint, Window};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnvelopeError {
    #[error("the Jacobian determinant vanishes identically at working order")]
    ZeroJacobian,
    #[error("inconclusive at working order: {0}")]
    Inconclusive(String),
    #[error("both branches are singular at the common point")]
    BothSingular,
    #[error("branches do not pass through a common point at parameter zero")]
    NoCommonPoint,
    #[error("parameters must be numeric for this operation")]
    NonNumeric,
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchTag {
    Regular,
    SemicubicCusp,
    DegenerateCusp,
    Unresolved,
}

impl std::fmt::Display for BranchTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BranchTag::Regular => "regular",
            BranchTag::SemicubicCusp => "semicubic-cusp",
            BranchTag::DegenerateCusp => "degenerate-cusp",
            BranchTag::Unresolved => "unresolved",
        })
    }
}

/// A tag together with the parameter values on which it degenerates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BranchClass {
    pub tag: BranchTag,
    /// Conditions under which the tag no longer applies (formal parameters
    /// only); empty when the tag holds for every parameter value.
    pub fails_when: Vec<String>,
}

/// A parameterised solution `s -> (x(s), y(s))` of `J = 0` through the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceBranch {
    pub label: String,
    /// Source variable used as the branch parameter (`x`, `y` or `s`).
    pub parameter: String,
    pub parameterization: CurveJet,
    /// Multiplicity of the factor in the Jacobian.
    pub multiplicity: u32,
}

impl SourceBranch {
    pub fn order(&self) -> u32 {
        self.parameterization.order()
    }
}

/// A factor of the Jacobian that could not be split into branches.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualFactor {
    pub factor: TruncatedSeries,
    pub reason: String,
}

impl ResidualFactor {
    pub(crate) fn new(factor: &TruncatedSeries, reason: &str) -> Self {
        ResidualFactor {
            factor: factor.clone(),
            reason: reason.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriticalSet {
    pub jacobian: TruncatedSeries,
    pub branches: Vec<SourceBranch>,
    pub residual: Vec<ResidualFactor>,
    /// Factor of the Jacobian not vanishing at the origin; its zeros lie
    /// away from the origin and are outside the germ.
    pub cofactor: Option<TruncatedSeries>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Branch {
    pub label: String,
    pub parameter: String,
    pub source: CurveJet,
    pub image: CurveJet,
    pub tag: BranchTag,
    pub fails_when: Vec<String>,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EnvelopeResult {
    pub branches: Vec<Branch>,
    pub residual: Vec<ResidualFactor>,
}

impl EnvelopeResult {
    pub fn tags(&self) -> Vec<BranchTag> {
        self.branches.iter().map(|b| b.tag).collect()
    }
}

fn axis_branch(order: u32, along_x: bool, multiplicity: u32) -> SourceBranch {
    let s = UniSeries::var(order);
    let z = UniSeries::zero(order);
    if along_x {
        SourceBranch {
            label: "y = 0".into(),
            parameter: "x".into(),
            parameterization: CurveJet::new(s, z),
            multiplicity,
        }
    } else {
        SourceBranch {
            label: "x = 0".into(),
            parameter: "y".into(),
            parameterization: CurveJet::new(z, s),
            multiplicity,
        }
    }
}

/// Critical set of a jet near the origin.
pub fn critical_set(f: &PlaneGermJet) -> Result<CriticalSet, EnvelopeError> {
    let jac = f.jacobian_determinant();
    let exact = jac.exact_to();
    let j = jac.truncate(exact);
    if j.is_zero() {
        return Err(EnvelopeError::ZeroJacobian);
    }
    let content = j.monomial_content();
    let mut branches = Vec::new();
    if content.y > 0 {
        branches.push(axis_branch(f.order(), true, content.y));
    }
    if content.x > 0 {
        branches.push(axis_branch(f.order(), false, content.x));
    }
    let g = j.div_monomial(content).expect("content divides");
    let mut residual = Vec::new();
    let mut cofactor = None;
    if g.constant_term().is_zero() {
        let (more, rest) = newton::solve(&g);
        branches.extend(more);
        residual.extend(rest);
    } else {
        cofactor = Some(g);
    }
    Ok(CriticalSet {
        jacobian: jac,
        branches,
        residual,
        cofactor,
    })
}

/// Branches of `J = 0` through the origin.
pub fn critical_branches(f: &PlaneGermJet) -> Result<Vec<SourceBranch>, EnvelopeError> {
    Ok(critical_set(f)?.branches)
}

/// Images of the critical branches under `f`, classified.
pub fn envelope_of(f: &PlaneGermJet) -> Result<EnvelopeResult, EnvelopeError> {
    let set = critical_set(f)?;
    let mut branches = Vec::with_capacity(set.branches.len());
    for b in set.branches {
        let image = b.parameterization.image_under(f.components())?;
        let class = classify_branch(&image);
        branches.push(Branch {
            label: b.label,
            parameter: b.parameter,
            order: image.order(),
            source: b.parameterization,
            image,
            tag: class.tag,
            fails_when: class.fails_when,
        });
    }
    Ok(EnvelopeResult {
        branches,
        residual: set.residual,
    })
}

fn conditions(p: &ParamPoly) -> Vec<String> {
    VanishingLocus::of_polynomial(p, true).conditions
}

/// Classifies a parameterised curve at `s = 0`: regular when the velocity
/// is nonzero, a semicubic cusp when the velocity vanishes and the second
/// and third derivative vectors are independent.
pub fn classify_branch(curve: &CurveJet) -> BranchClass {
    if curve.order() < 3 {
        return BranchClass {
            tag: BranchTag::Unresolved,
            fails_when: Vec::new(),
        };
    }
    let [a, b] = curve.components();
    let (vx, vy) = (a.coeff(1), b.coeff(1));
    if !vx.is_zero() || !vy.is_zero() {
        let fails_when = if vx.is_constant() && !vx.is_zero() || vy.is_constant() && !vy.is_zero() {
            Vec::new()
        } else if vy.is_zero() {
            conditions(&vx)
        } else if vx.is_zero() {
            conditions(&vy)
        } else {
            vec![format!("{vx} = 0 and {vy} = 0")]
        };
        return BranchClass {
            tag: BranchTag::Regular,
            fails_when,
        };
    }
    let det = &(&a.coeff(2) * &b.coeff(3)) - &(&a.coeff(3) * &b.coeff(2));
    if det.is_zero() {
        return BranchClass {
            tag: BranchTag::DegenerateCusp,
            fails_when: Vec::new(),
        };
    }
    BranchClass {
        tag: BranchTag::SemicubicCusp,
        fails_when: conditions(&det),
    }
}

/// Composes the Jacobian with a source branch; zero through the branch
/// order for a sound branch.
pub fn jacobian_along(f: &PlaneGermJet, branch: &SourceBranch) -> Result<UniSeries, EnvelopeError> {
    let j = f.jacobian_determinant();
    let j = j.truncate(j.exact_to());
    let c = &branch.parameterization;
    Ok(crate::jetcalc::substitute_curve(&j, c.component(0), c.component(1))?)
}

