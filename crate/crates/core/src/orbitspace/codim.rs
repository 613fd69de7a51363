//! Extended codimension and miniversality in the truncated model.

use serde::Serialize;

use super::certificate::determinacy_order;
use super::generators::{tangent_generators, GeneratorKind};
use super::matrix::{Echelon, ParamMatrix};
use super::quotient::{QuotientSpace, VectorMonomial};
use super::OrbitError;
use crate::jetcalc::{ParamPoly, PlaneGermJet};

/// Default truncation degree for codimension computations.
pub const DEFAULT_CAP: u32 = 6;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CodimensionReport {
    pub codim: usize,
    pub complement: Vec<VectorMonomial>,
    pub cap_degree: u32,
    /// Determinacy order backing the computation, if one was certified.
    pub determinacy_order: Option<u32>,
    /// False when no certificate shows `M^cap E²` lies in the tangent
    /// space; `codim` is then only a lower bound at this cap.
    pub conclusive: bool,
}

fn tea_columns(f: &PlaneGermJet, cap: u32, extra: &[PlaneGermJet]) -> Result<(QuotientSpace, Vec<Vec<ParamPoly>>), OrbitError> {
    if cap == 0 {
        return Err(OrbitError::InvalidArgument("cap degree must be positive".into()));
    }
    let space = QuotientSpace::new(0, cap)?;
    let gens = tangent_generators(f, GeneratorKind::TeA, cap - 1)?.with_directions(extra);
    let cols = gens.generators.iter().map(|g| space.coordinates(&g.vector)).collect();
    Ok((space, cols))
}

fn certified_order(f: &PlaneGermJet) -> Result<Option<u32>, OrbitError> {
    Ok(determinacy_order(f, f.exact_to())?
        .filter(|c| c.certificate.certified)
        .map(|c| c.sharpened_order))
}

/// Dimension of `E² / (TeA(f) + M^cap E²)` with a greedy monomial
/// complement, lowest degree first.
pub fn extended_codimension(f: &PlaneGermJet, cap: u32) -> Result<CodimensionReport, OrbitError> {
    let (space, cols) = tea_columns(f, cap, &[])?;
    let mut echelon = Echelon::new();
    for c in cols {
        echelon.insert(c);
    }
    let mut complement = Vec::new();
    for v in space.basis() {
        let mut unit = vec![ParamPoly::zero(); space.dimension()];
        unit[space.index_of(v).expect("basis member")] = ParamPoly::one();
        if echelon.insert(unit) {
            complement.push(*v);
        }
    }
    let order = certified_order(f)?;
    Ok(CodimensionReport {
        codim: complement.len(),
        complement,
        cap_degree: cap,
        determinacy_order: order,
        conclusive: order.is_some_and(|r| r < cap),
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MiniversalityReport {
    pub miniversal: bool,
    /// Tangent space plus directions fill the truncated model.
    pub spans: bool,
    pub direction_count: usize,
    pub codimension: CodimensionReport,
}

/// Whether the given directions form a miniversal unfolding of `f`.
pub fn is_miniversal(f: &PlaneGermJet, directions: &[PlaneGermJet], cap: u32) -> Result<MiniversalityReport, OrbitError> {
    let codimension = extended_codimension(f, cap)?;
    let (space, cols) = tea_columns(f, cap, directions)?;
    let rank = ParamMatrix::from_columns(space.dimension(), &cols).rank();
    let spans = rank == space.dimension();
    Ok(MiniversalityReport {
        miniversal: spans && codimension.conclusive && directions.len() == codimension.codim,
        spans,
        direction_count: directions.len(),
        codimension,
    })
}
