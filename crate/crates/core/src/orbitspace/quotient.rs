//! Finite-dimensional quotients `M^a E² / M^b E²` with monomial bases.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::OrbitError;
use crate::jetcalc::{Monomial, ParamPoly, PlaneGermJet, TruncatedSeries};

/// A vector monomial `(m, 0)` or `(0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorMonomial {
    degree: u32,
    pub slot: usize,
    pub monomial: Monomial,
}

impl VectorMonomial {
    pub fn new(slot: usize, monomial: Monomial) -> Self {
        assert!(slot < 2, "plane germs have two components");
        VectorMonomial {
            degree: monomial.degree(),
            slot,
            monomial,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The vector monomial as a germ jet (it may be a constant vector).
    pub fn to_series_pair(&self, order: u32) -> [TruncatedSeries; 2] {
        let mut out = [TruncatedSeries::zero(order), TruncatedSeries::zero(order)];
        out[self.slot] = TruncatedSeries::monomial(order, self.monomial, ParamPoly::one());
        out
    }

    /// As a germ jet; only valid for degree at least one.
    pub fn to_jet(&self, order: u32) -> PlaneGermJet {
        let [a, b] = self.to_series_pair(order);
        PlaneGermJet::new(a, b).expect("vector monomial of positive degree")
    }
}

impl fmt::Display for VectorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slot == 0 {
            write!(f, "({}, 0)", self.monomial)
        } else {
            write!(f, "(0, {})", self.monomial)
        }
    }
}

impl Serialize for VectorMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Basis of vector monomials of degree in `[low, high)`, ordered by degree,
/// then component, then monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    low: u32,
    high: u32,
    basis: Vec<VectorMonomial>,
    index: HashMap<VectorMonomial, usize>,
}

impl QuotientSpace {
    pub fn new(low: u32, high: u32) -> Result<Self, OrbitError> {
        if low > high {
            return Err(OrbitError::InvalidRange { low, high });
        }
        let mut basis = Vec::new();
        for d in low..high {
            for slot in 0..2 {
                basis.extend(Monomial::of_degree(d).map(|m| VectorMonomial::new(slot, m)));
            }
        }
        let index = basis.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        Ok(QuotientSpace {
            low,
            high,
            basis,
            index,
        })
    }

    pub fn low_degree(&self) -> u32 {
        self.low
    }

    pub fn high_degree(&self) -> u32 {
        self.high
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[VectorMonomial] {
        &self.basis
    }

    pub fn index_of(&self, v: &VectorMonomial) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Coordinates of a pair of series in this basis; terms outside the
    /// degree window are dropped.
    pub fn coordinates(&self, vector: &[TruncatedSeries; 2]) -> Vec<ParamPoly> {
        let mut out = vec![ParamPoly::zero(); self.dimension()];
        for (slot, comp) in vector.iter().enumerate() {
            for (m, c) in comp.terms() {
                if let Some(i) = self.index_of(&VectorMonomial::new(slot, *m)) {
                    out[i] = c.clone();
                }
            }
        }
        out
    }
}

/// The quotient `M^a E² / M^b E²`.
pub fn quotient_basis(a: u32, b: u32) -> Result<QuotientSpace, OrbitError> {
    if a == 0 {
        return Err(OrbitError::InvalidRange { low: a, high: b });
    }
    QuotientSpace::new(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_dimensions() {
        assert_eq!(quotient_basis(2, 3).unwrap().dimension(), 6);
        assert_eq!(quotient_basis(2, 4).unwrap().dimension(), 14);
        assert_eq!(quotient_basis(1, 2).unwrap().dimension(), 4);
        assert_eq!(quotient_basis(3, 3).unwrap().dimension(), 0);
        assert!(quotient_basis(4, 3).is_err());
    }

    #[test]
    fn basis_order_is_degree_then_component() {
        let q = quotient_basis(1, 2).unwrap();
        let names: Vec<String> = q.basis().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["(x, 0)", "(y, 0)", "(0, x)", "(0, y)"]);
    }
}
