use num_traits::Zero;
use serde::Serialize;

use super::{jacobian_saddle, sweep, JacobianSaddle, BifurcateError, BifurcationEvent, DeformationFamily, SweepAxis, SweepConfig};
use crate::envelope::{numeric_envelope, Window};
use crate::jetcalc::{ring::fmt_rational, ParamPoly, Rational};

/// Envelope of `Ψ_d` at one point of an open quadrant of the `(λ, μ)` plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadrantPicture {
    pub label: String,
    pub lambda: String,
    pub mu: String,
    /// Critical values as polylines.
    pub curves: Vec<Vec<[f64; 2]>>,
    pub saddle: Option<JacobianSaddle>,
}

/// Data of the double-cusp bifurcation diagram in the `(λ, μ)` plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleCuspDiagram {
    pub delta: String,
    pub strata: Vec<String>,
    pub quadrants: Vec<QuadrantPicture>,
    /// Events found by sweeping each axis.
    pub lambda_events: Vec<BifurcationEvent>,
    pub mu_events: Vec<BifurcationEvent>,
    pub orientation: String,
}

/// Strata, one envelope per open quadrant at `(±r/2, ±r/2)`, and the events
/// on both axes over `[-r, r]` with `r = config.radius`.
pub fn double_cusp_diagram(delta: &Rational, axis_samples: usize, config: &SweepConfig) -> Result<DoubleCuspDiagram, BifurcateError> {
    if delta.is_zero() {
        return Err(BifurcateError::DegenerateDelta);
    }
    let r = Rational::new(((config.radius * 1000.0).round() as i64).into(), 1000.into());
    let family = DeformationFamily::psi_family(config.order, ParamPoly::constant(delta.clone())).restrict(&["lambda", "mu"])?;
    let half = &r / Rational::from_integer(2.into());
    let mut quadrants = Vec::new();
    for (sl, sm, label) in [(1, 1, "lambda > 0, mu > 0"), (-1, 1, "lambda < 0, mu > 0"), (-1, -1, "lambda < 0, mu < 0"), (1, -1, "lambda > 0, mu < 0")] {
        let lambda = &half * Rational::from_integer(sl.into());
        let mu = &half * Rational::from_integer(sm.into());
        let germ = family.at(&[("lambda", lambda.clone()), ("mu", mu.clone())])?;
        let cloud = numeric_envelope(&germ, &|_| None, Window::square(config.picture_window), config.picture_resolution)?;
        quadrants.push(QuadrantPicture {
            label: label.into(),
            lambda: fmt_rational(&lambda),
            mu: fmt_rational(&mu),
            curves: cloud.polylines(),
            saddle: jacobian_saddle(&germ, config.trace_radius)?,
        });
    }
    let neg = -&r;
    let h = sweep(&family.restrict(&["lambda"])?, &SweepAxis::line("lambda", neg.clone(), r.clone(), axis_samples), delta, config)?;
    let k = sweep(&family.restrict(&["mu"])?, &SweepAxis::line("mu", neg, r, axis_samples), delta, config)?;
    Ok(DoubleCuspDiagram {
        delta: fmt_rational(delta),
        strata: vec!["lambda = 0".into(), "mu = 0".into()],
        quadrants,
        lambda_events: h.events,
        mu_events: k.events,
        orientation: "changing the sign of delta reverses the orientation of the mu axis".into(),
    })
}
