use num_traits::Zero;
use serde::Serialize;

use super::BifurcateError;
use crate::ctf::{reduce_corank_one, CorankOneForm};
use crate::jetcalc::{ring::fmt_rational, SpaceGermJet, TruncatedSeries, UniSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    WhitneyUmbrella,
    CuspidalEdge,
    Other,
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SurfaceKind::WhitneyUmbrella => "whitney-umbrella",
            SurfaceKind::CuspidalEdge => "cuspidal-edge",
            SurfaceKind::Other => "other",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SurfaceClass {
    pub kind: SurfaceKind,
    pub reason: String,
    /// Coordinate changes taking the input to `normalized`.
    pub witness: Vec<String>,
    pub normalized: Option<SpaceGermJet>,
    /// Coefficient `g(u)` of `v` in the normalized third component, through
    /// degree 2 in `u`.
    pub linear_coefficient: Option<UniSeries>,
    /// Same coefficient at the full working order, when it differs from
    /// the model past the recognised jet.
    pub beyond_jet: Option<String>,
}

impl SurfaceClass {
    fn other(reason: impl Into<String>) -> Self {
        SurfaceClass {
            kind: SurfaceKind::Other,
            reason: reason.into(),
            witness: Vec::new(),
            normalized: None,
            linear_coefficient: None,
            beyond_jet: None,
        }
    }
}

const JET_DEGREE: u32 = 3;

/// Classifies the graph surface `(s, λ) -> (X, Y, λ)` of a family of branches.
///
/// Source variables: `x` is the family parameter `λ`, `y` the branch
/// parameter; one component must equal `x`. The surface is reduced to
/// `(u, v², v³ + g(u) v)` and recognised at the 3-jet: a `u` term in `g`
/// gives the Whitney umbrella `(u, v², uv)`, a nonzero cubic with `g` free of
/// `u` and `u²` gives the cuspidal edge `(u, v², v³)`.
pub fn classify_branch_surface(surface: &SpaceGermJet) -> Result<SurfaceClass, BifurcateError> {
    let order = surface.order().max(JET_DEGREE + 3);
    let f = surface.with_order(order);
    if f.components().iter().any(|c| !c.is_numeric()) {
        return Err(BifurcateError::NonNumeric);
    }
    let x = TruncatedSeries::x(order);
    let Some(z_slot) = (0..3).find(|&k| f.component(k) == &x) else {
        return Err(BifurcateError::NoParameterComponent);
    };
    let others: Vec<usize> = (0..3).filter(|&k| k != z_slot).collect();
    if others.iter().any(|&k| !f.component(k).coeff(0, 1).is_zero()) {
        return Ok(SurfaceClass::other("immersion: the branch parameter enters linearly"));
    }
    // Prefer the simplest component with a pure quadratic term as the fold coordinate.
    let mut candidates: Vec<usize> = others.iter().copied().filter(|&k| !f.component(k).coeff(0, 2).is_zero()).collect();
    candidates.sort_by_key(|&k| f.component(k).num_terms());
    let mut last_error = None;
    for y_slot in candidates {
        match reduce_corank_one(&f, z_slot, y_slot, JET_DEGREE) {
            Ok(form) => return Ok(recognise(&f, z_slot, y_slot, form)),
            Err(e) => last_error = Some(e),
        }
    }
    Ok(SurfaceClass::other(match last_error {
        Some(e) => format!("no corank-one reduction: {e}"),
        None => "no component has a quadratic term in the branch parameter".to_string(),
    }))
}

fn recognise(f: &SpaceGermJet, z_slot: usize, y_slot: usize, form: CorankOneForm) -> SurfaceClass {
    let g = &form.linear_coefficient;
    let unit = |k: u32| g.coeff(k).as_constant().unwrap_or_default();
    let (kind, reason) = if !unit(1).is_zero() {
        (SurfaceKind::WhitneyUmbrella, format!("v-coefficient has linear term {}*u", fmt_rational(&unit(1))))
    } else if unit(2).is_zero() && !form.cubic.is_zero() {
        (SurfaceKind::CuspidalEdge, "3-jet equivalent to (u, v^2, v^3)".to_string())
    } else if form.cubic.is_zero() {
        (SurfaceKind::Other, "cubic term vanishes".to_string())
    } else {
        (SurfaceKind::Other, format!("3-jet equivalent to (u, v^2, v^3 + ({})*u^2 v)", fmt_rational(&unit(2))))
    };
    let beyond_jet = if kind == SurfaceKind::CuspidalEdge {
        let degree = f.order().saturating_sub(3).max(JET_DEGREE + 2);
        reduce_corank_one(f, z_slot, y_slot, degree).ok().and_then(|full| {
            let tail = full.linear_coefficient;
            (!tail.is_zero()).then(|| format!("v-coefficient {} past the 3-jet", tail.fmt_in("u")))
        })
    } else {
        None
    };
    SurfaceClass {
        kind,
        reason,
        witness: form.steps,
        normalized: Some(form.normalized.with_order(JET_DEGREE)),
        linear_coefficient: Some(g.clone()),
        beyond_jet,
    }
}
