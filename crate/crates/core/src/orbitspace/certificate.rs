//! Rank certificates for jet-level inclusions of tangent spaces.

use serde::Serialize;

use super::generators::{tangent_generators, GeneratorKind, GeneratorSet};
use super::matrix::{choose_pivot, ParamMatrix, VanishingLocus};
use super::quotient::{quotient_basis, QuotientSpace};
use super::OrbitError;
use crate::jetcalc::{ParamPoly, PlaneGermJet};

/// Coordinates of the generators projected into a quotient window.
///
/// Generators are first combined so that every surviving column vanishes
/// below the window; only those combinations are admissible witnesses that
/// a window vector lies in the generated module.
#[derive(Clone, Debug)]
pub struct QuotientProjection {
    pub space: QuotientSpace,
    pub matrix: ParamMatrix,
    pub labels: Vec<String>,
    /// Non-constant pivots used while clearing low-degree rows; the result
    /// is only valid where they do not vanish.
    pub low_pivots: Vec<ParamPoly>,
}

pub fn project(gens: &GeneratorSet, q: &QuotientSpace) -> QuotientProjection {
    let full = QuotientSpace::new(0, q.low_degree()).expect("valid range");
    let low_dim = full.dimension();
    let mut cols: Vec<(String, Vec<ParamPoly>, Vec<ParamPoly>)> = gens
        .generators
        .iter()
        .map(|g| (g.label.to_string(), full.coordinates(&g.vector), q.coordinates(&g.vector)))
        .collect();
    let mut low_pivots = Vec::new();
    for row in 0..low_dim {
        let Some(p) = choose_pivot(cols.iter().enumerate().map(|(i, c)| (i, &c.1[row]))) else {
            continue;
        };
        let (_, plow, phigh) = cols.remove(p);
        let piv = plow[row].clone();
        let unit = piv.as_constant();
        if unit.is_none() {
            low_pivots.push(piv.clone());
        }
        for (_, clow, chigh) in cols.iter_mut() {
            let e = clow[row].clone();
            if e.is_zero() {
                continue;
            }
            let update = |target: &mut Vec<ParamPoly>, source: &[ParamPoly]| {
                for (t, s) in target.iter_mut().zip(source) {
                    *t = match &unit {
                        Some(u) => &*t - &(&e * s).scale(&u.recip()),
                        None => &(&piv * &*t) - &(&e * s),
                    };
                }
            };
            update(clow, &plow);
            update(chigh, &phigh);
        }
    }
    let kept: Vec<(String, Vec<ParamPoly>)> = cols
        .into_iter()
        .filter(|(_, _, h)| h.iter().any(|e| !e.is_zero()))
        .map(|(l, _, h)| (l, h))
        .collect();
    let columns: Vec<Vec<ParamPoly>> = kept.iter().map(|(_, h)| h.clone()).collect();
    QuotientProjection {
        space: q.clone(),
        matrix: ParamMatrix::from_columns(q.dimension(), &columns),
        labels: kept.into_iter().map(|(l, _)| l).collect(),
        low_pivots,
    }
}

impl QuotientProjection {
    /// Specialises a parameter in the projected matrix.
    pub fn substitute(&self, name: &str, value: &ParamPoly) -> QuotientProjection {
        QuotientProjection {
            space: self.space.clone(),
            matrix: self.matrix.substitute(name, value),
            labels: self.labels.clone(),
            low_pivots: self.low_pivots.iter().map(|p| p.substitute(name, value)).collect(),
        }
    }
}

fn serialize_opt_poly<S: serde::Serializer>(p: &Option<ParamPoly>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.collect_str(p),
        None => s.serialize_none(),
    }
}

/// Result of a rank test on a projection.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub full_rank: bool,
    pub rank: usize,
    pub dimension: usize,
    pub columns: usize,
    #[serde(serialize_with = "serialize_opt_poly")]
    pub determinant: Option<ParamPoly>,
    pub vanishing_locus: VanishingLocus,
}

impl Certificate {
    /// Full rank for every parameter value.
    pub fn holds_everywhere(&self) -> bool {
        self.full_rank && self.vanishing_locus.conditions.is_empty()
    }
}

pub fn certificate(p: &QuotientProjection) -> Certificate {
    let elim = p.matrix.bareiss();
    let dimension = p.matrix.rows();
    let full_rank = elim.rank == dimension;
    let mut locus = VanishingLocus::empty();
    if full_rank {
        let square = p.matrix.rows() == p.matrix.cols();
        locus = VanishingLocus::of_polynomial(&elim.last_pivot, square && p.low_pivots.is_empty());
        for piv in &p.low_pivots {
            for c in VanishingLocus::of_polynomial(piv, false).conditions {
                if !locus.conditions.contains(&c) {
                    locus.conditions.push(c);
                }
            }
            locus.exact = false;
        }
    }
    Certificate {
        full_rank,
        rank: elim.rank,
        dimension,
        columns: p.matrix.cols(),
        determinant: elim.determinant(),
        vanishing_locus: locus,
    }
}

fn window_certificate(
    f: &PlaneGermJet,
    kind: GeneratorKind,
    low: u32,
    high: u32,
) -> Result<(QuotientProjection, Certificate), OrbitError> {
    let q = quotient_basis(low, high)?;
    let gens = tangent_generators(f, kind, high.saturating_sub(1))?;
    let p = project(&gens, &q);
    let c = certificate(&p);
    Ok((p, c))
}

/// Projection for the inclusion `M^l E² ⊆ E⟨f_x, f_y⟩ + I_f E² + M^(l+1) E²`.
pub fn inclusion_4_projection(f: &PlaneGermJet, l: u32) -> Result<QuotientProjection, OrbitError> {
    if l == 0 {
        return Err(OrbitError::InvalidArgument("l must be at least 1".into()));
    }
    Ok(window_certificate(f, GeneratorKind::DuPlessisLhs, l, l + 1)?.0)
}

pub fn check_inclusion_4(f: &PlaneGermJet, l: u32) -> Result<Certificate, OrbitError> {
    Ok(certificate(&inclusion_4_projection(f, l)?))
}

/// Projection for the inclusion `M^k E² ⊆ TeA(f) + M^(k+l) E²`.
pub fn inclusion_5_projection(f: &PlaneGermJet, k: u32, l: u32) -> Result<QuotientProjection, OrbitError> {
    if k == 0 || l == 0 {
        return Err(OrbitError::InvalidArgument("k and l must be at least 1".into()));
    }
    Ok(window_certificate(f, GeneratorKind::TeA, k, k + l)?.0)
}

pub fn check_inclusion_5(f: &PlaneGermJet, k: u32, l: u32) -> Result<Certificate, OrbitError> {
    Ok(certificate(&inclusion_5_projection(f, k, l)?))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeterminacyCertificate {
    pub k: u32,
    pub l: u32,
    /// `k + l`: the certified determinacy order.
    pub order: u32,
    /// Both inclusions hold (generically in the parameters).
    pub certified: bool,
    pub inclusion_4: Certificate,
    pub inclusion_5: Certificate,
    /// Parameter conditions under which the certificate may fail.
    pub excluded: Vec<String>,
}

/// Jet-level sufficient condition for `(k+l)`-determinacy. A negative
/// answer is a failed certificate, not a proof of indeterminacy.
pub fn du_plessis_determinacy(f: &PlaneGermJet, k: u32, l: u32) -> Result<DeterminacyCertificate, OrbitError> {
    let inclusion_4 = check_inclusion_4(f, l)?;
    let inclusion_5 = check_inclusion_5(f, k, l)?;
    let certified = inclusion_4.full_rank && inclusion_5.full_rank;
    let mut excluded = Vec::new();
    if certified {
        for c in inclusion_4
            .vanishing_locus
            .conditions
            .iter()
            .chain(&inclusion_5.vanishing_locus.conditions)
        {
            if !excluded.contains(c) {
                excluded.push(c.clone());
            }
        }
    }
    Ok(DeterminacyCertificate {
        k,
        l,
        order: k + l,
        certified,
        inclusion_4,
        inclusion_5,
        excluded,
    })
}

/// Smallest certified order `k + l ≤ max_order`, trying larger `l` first
/// within each order.
pub fn search_determinacy(f: &PlaneGermJet, max_order: u32) -> Result<Option<DeterminacyCertificate>, OrbitError> {
    for order in 2..=max_order {
        for l in (1..order).rev() {
            let cert = du_plessis_determinacy(f, order - l, l)?;
            if cert.certified {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// Projection of the unipotent tangent space onto degree `r`.
pub fn order_reduction_projection(f: &PlaneGermJet, r: u32) -> Result<QuotientProjection, OrbitError> {
    if r < 2 {
        return Err(OrbitError::InvalidArgument("r must be at least 2".into()));
    }
    Ok(window_certificate(f, GeneratorKind::Unipotent, r, r + 1)?.0)
}

/// Whether every degree-`r` vector lies in the unipotent tangent space
/// modulo degree `r + 1`, so that degree-`r` terms of an `r`-determined germ
/// can be removed.
pub fn order_reduction_check(f: &PlaneGermJet, r: u32) -> Result<Certificate, OrbitError> {
    Ok(certificate(&order_reduction_projection(f, r)?))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeterminacyChain {
    pub certificate: DeterminacyCertificate,
    /// `(r, holds)` for each reduction attempted, from the certified order
    /// downwards.
    pub reductions: Vec<(u32, bool)>,
    pub sharpened_order: u32,
}

/// Starts from a certified order and removes top-degree terms while the
/// reduction check succeeds.
pub fn sharpen(f: &PlaneGermJet, certificate: DeterminacyCertificate) -> Result<DeterminacyChain, OrbitError> {
    let mut order = certificate.order;
    let mut reductions = Vec::new();
    if certificate.certified {
        while order >= 2 {
            let holds = order_reduction_check(f, order)?.full_rank;
            reductions.push((order, holds));
            if !holds {
                break;
            }
            order -= 1;
        }
    }
    Ok(DeterminacyChain {
        certificate,
        reductions,
        sharpened_order: order,
    })
}

/// Best determinacy order found up to `max_order`, after sharpening.
pub fn determinacy_order(f: &PlaneGermJet, max_order: u32) -> Result<Option<DeterminacyChain>, OrbitError> {
    match search_determinacy(f, max_order)? {
        Some(c) => Ok(Some(sharpen(f, c)?)),
        None => Ok(None),
    }
}
