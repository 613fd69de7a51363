use serde::Serialize;

use super::BifurcateError;
use crate::ctf::psi;
use crate::jetcalc::{ParamPoly, PlaneGermJet, Rational};

/// Value assigned to a deformation parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Rational(Rational),
    /// Keep the parameter as a symbol of the same name.
    Formal,
}

impl From<Rational> for ParamValue {
    fn from(r: Rational) -> Self {
        ParamValue::Rational(r)
    }
}

/// A base germ plus named parameters, each multiplying an additive direction:
/// `base + Σ p_i · direction_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeformationFamily {
    base: PlaneGermJet,
    params: Vec<(String, PlaneGermJet)>,
}

impl DeformationFamily {
    pub fn new(base: PlaneGermJet, params: Vec<(String, PlaneGermJet)>) -> Result<Self, BifurcateError> {
        for (k, (name, dir)) in params.iter().enumerate() {
            if params[..k].iter().any(|(n, _)| n == name) {
                return Err(BifurcateError::DuplicateParameter(name.clone()));
            }
            if dir.components().iter().any(|c| c.terms().any(|(_, p)| p.variables().contains(name))) {
                return Err(BifurcateError::NonLinearParameter(name.clone()));
            }
        }
        let order = base.order();
        let params = params.into_iter().map(|(n, d)| (n, d.with_order(order))).collect();
        Ok(DeformationFamily { base, params })
    }

    /// `ψ_d + (λy + νy³, μx)` with parameters `lambda`, `mu`, `nu`.
    pub fn psi_family(order: u32, delta: ParamPoly) -> Self {
        let direction = |first: &[(u32, u32, i64)], second: &[(u32, u32, i64)]| PlaneGermJet::from_ints(order, first, second);
        DeformationFamily {
            base: psi(order, delta),
            params: vec![
                ("lambda".into(), direction(&[(0, 1, 1)], &[])),
                ("mu".into(), direction(&[], &[(1, 0, 1)])),
                ("nu".into(), direction(&[(0, 3, 1)], &[])),
            ],
        }
    }

    /// One-parameter family `H = ψ_d + (λy, 0)`.
    pub fn h_family(order: u32, delta: ParamPoly) -> Self {
        Self::psi_family(order, delta).restrict(&["lambda"]).expect("known parameter")
    }

    /// One-parameter family `K = ψ_d + (0, μx)`.
    pub fn k_family(order: u32, delta: ParamPoly) -> Self {
        Self::psi_family(order, delta).restrict(&["mu"]).expect("known parameter")
    }

    pub fn base(&self) -> &PlaneGermJet {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.base.order()
    }

    pub fn parameters(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(|(n, _)| n.as_str())
    }

    pub fn direction(&self, name: &str) -> Option<&PlaneGermJet> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    /// Keeps only the listed parameters; the others are fixed at zero.
    pub fn restrict(&self, keep: &[&str]) -> Result<Self, BifurcateError> {
        for k in keep {
            if self.direction(k).is_none() {
                return Err(BifurcateError::UnknownParameter(k.to_string()));
            }
        }
        Ok(DeformationFamily {
            base: self.base.clone(),
            params: self.params.iter().filter(|(n, _)| keep.contains(&n.as_str())).cloned().collect(),
        })
    }

    pub fn with_order(&self, order: u32) -> Self {
        DeformationFamily {
            base: self.base.with_order(order),
            params: self.params.iter().map(|(n, d)| (n.clone(), d.with_order(order))).collect(),
        }
    }

    /// Substitutes a coefficient parameter (such as `d`) in base and directions.
    pub fn substitute_param(&self, name: &str, value: &ParamPoly) -> Self {
        DeformationFamily {
            base: self.base.substitute_param(name, value),
            params: self.params.iter().map(|(n, d)| (n.clone(), d.substitute_param(name, value))).collect(),
        }
    }

    /// Exact substitution; every parameter must be assigned.
    pub fn specialize(&self, values: &[(&str, ParamValue)]) -> Result<PlaneGermJet, BifurcateError> {
        for (name, _) in values {
            if self.direction(name).is_none() {
                return Err(BifurcateError::UnknownParameter(name.to_string()));
            }
        }
        let mut out = self.base.clone();
        for (name, dir) in &self.params {
            let value = values
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v)
                .ok_or_else(|| BifurcateError::Unassigned(name.clone()))?;
            let coeff = match value {
                ParamValue::Rational(r) => ParamPoly::constant(r.clone()),
                ParamValue::Formal => ParamPoly::var(name),
            };
            if !coeff.is_zero() {
                out = out.add(&dir.scale(&coeff))?;
            }
        }
        Ok(out)
    }

    /// Specialization with rational values for all parameters.
    pub fn at(&self, values: &[(&str, Rational)]) -> Result<PlaneGermJet, BifurcateError> {
        let v: Vec<(&str, ParamValue)> = values.iter().map(|(n, r)| (*n, ParamValue::Rational(r.clone()))).collect();
        self.specialize(&v)
    }

    /// Every parameter left formal.
    pub fn generic(&self) -> PlaneGermJet {
        let v: Vec<(&str, ParamValue)> = self.params.iter().map(|(n, _)| (n.as_str(), ParamValue::Formal)).collect();
        self.specialize(&v).expect("all parameters assigned")
    }
}
