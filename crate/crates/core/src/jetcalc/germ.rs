//! Map-germ jets (plane to plane, plane to space) and coordinate changes.

use std::fmt;

use num_traits::Zero;

use super::ring::{ParamPoly, Rational};
use super::series::{GermVar, Monomial, TruncatedSeries};
use super::JetError;

fn check_components(comps: &[TruncatedSeries]) -> Result<u32, JetError> {
    let order = comps[0].order();
    for c in comps {
        if c.order() != order {
            return Err(JetError::OrderMismatch {
                left: order,
                right: c.order(),
            });
        }
        if !c.constant_term().is_zero() {
            return Err(JetError::NonZeroConstant);
        }
    }
    Ok(order)
}

/// Substitutes `inner` into every series of `outer`.
pub fn compose_components(
    outer: &[TruncatedSeries],
    inner: &PlaneGermJet,
) -> Result<Vec<TruncatedSeries>, JetError> {
    outer
        .iter()
        .map(|c| c.compose(&inner.comps[0], &inner.comps[1]))
        .collect()
}

/// Jet of a germ `(R^2, 0) -> (R^2, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGermJet {
    comps: [TruncatedSeries; 2],
}

impl PlaneGermJet {
    pub fn new(first: TruncatedSeries, second: TruncatedSeries) -> Result<Self, JetError> {
        check_components(&[first.clone(), second.clone()])?;
        Ok(PlaneGermJet {
            comps: [first, second],
        })
    }

    pub fn identity(order: u32) -> Self {
        PlaneGermJet {
            comps: [TruncatedSeries::x(order), TruncatedSeries::y(order)],
        }
    }

    pub fn zero(order: u32) -> Self {
        PlaneGermJet {
            comps: [TruncatedSeries::zero(order), TruncatedSeries::zero(order)],
        }
    }

    /// Germ from integer-coefficient term lists `(i, j, c)`.
    pub fn from_ints(order: u32, first: &[(u32, u32, i64)], second: &[(u32, u32, i64)]) -> Self {
        Self::new(
            TruncatedSeries::from_ints(order, first),
            TruncatedSeries::from_ints(order, second),
        )
        .expect("integer germ without constant term")
    }

    pub fn order(&self) -> u32 {
        self.comps[0].order()
    }

    pub fn exact_to(&self) -> u32 {
        self.comps[0].exact_to().min(self.comps[1].exact_to())
    }

    pub fn component(&self, k: usize) -> &TruncatedSeries {
        &self.comps[k]
    }

    pub fn components(&self) -> &[TruncatedSeries; 2] {
        &self.comps
    }

    pub fn with_order(&self, order: u32) -> Self {
        PlaneGermJet {
            comps: [self.comps[0].with_order(order), self.comps[1].with_order(order)],
        }
    }

    pub fn truncate(&self, degree: u32) -> Self {
        PlaneGermJet {
            comps: [self.comps[0].truncate(degree), self.comps[1].truncate(degree)],
        }
    }

    pub fn eq_through(&self, other: &Self, degree: u32) -> bool {
        self.comps[0].eq_through(&other.comps[0], degree)
            && self.comps[1].eq_through(&other.comps[1], degree)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PlaneGermJet) -> Result<PlaneGermJet, JetError> {
        let v = compose_components(&self.comps, inner)?;
        let [a, b]: [TruncatedSeries; 2] = v.try_into().expect("two components");
        Ok(PlaneGermJet { comps: [a, b] })
    }

    /// Partial derivative of both components: the vector `f_x` or `f_y`.
    pub fn partial(&self, var: GermVar) -> [TruncatedSeries; 2] {
        [self.comps[0].differentiate(var), self.comps[1].differentiate(var)]
    }

    /// `∂x f1 ∂y f2 − ∂y f1 ∂x f2`, exact through degree `order − 1`.
    pub fn jacobian_determinant(&self) -> TruncatedSeries {
        let [f1x, f2x] = self.partial(GermVar::X);
        let [f1y, f2y] = self.partial(GermVar::Y);
        &(&f1x * &f2y) - &(&f1y * &f2x)
    }

    /// Linear part as a row-major 2×2 matrix `[[∂x f1, ∂y f1], [∂x f2, ∂y f2]]`.
    pub fn linear_part(&self) -> [[ParamPoly; 2]; 2] {
        let row = |c: &TruncatedSeries| [c.coeff(1, 0), c.coeff(0, 1)];
        [row(&self.comps[0]), row(&self.comps[1])]
    }

    pub fn map_components(&self, f: impl Fn(&TruncatedSeries) -> TruncatedSeries) -> Self {
        PlaneGermJet {
            comps: [f(&self.comps[0]), f(&self.comps[1])],
        }
    }

    pub fn substitute_param(&self, name: &str, value: &ParamPoly) -> Self {
        self.map_components(|c| c.substitute_param(name, value))
    }

    pub fn add(&self, other: &PlaneGermJet) -> Result<PlaneGermJet, JetError> {
        Ok(PlaneGermJet {
            comps: [
                self.comps[0].checked_add(&other.comps[0])?,
                self.comps[1].checked_add(&other.comps[1])?,
            ],
        })
    }

    pub fn scale(&self, factor: &ParamPoly) -> Self {
        self.map_components(|c| c.scale(factor))
    }

    /// Applies a linear target map given row-major.
    pub fn apply_linear(&self, m: &[[ParamPoly; 2]; 2]) -> Self {
        let row = |r: &[ParamPoly; 2]| &self.comps[0].scale(&r[0]) + &self.comps[1].scale(&r[1]);
        PlaneGermJet {
            comps: [row(&m[0]), row(&m[1])],
        }
    }

    /// Linear germ `(a x + b y, c x + d y)`.
    pub fn linear(order: u32, m: &[[Rational; 2]; 2]) -> Self {
        let row = |r: &[Rational; 2]| {
            TruncatedSeries::from_terms(
                order,
                [
                    (Monomial::new(1, 0), ParamPoly::constant(r[0].clone())),
                    (Monomial::new(0, 1), ParamPoly::constant(r[1].clone())),
                ],
            )
        };
        PlaneGermJet {
            comps: [row(&m[0]), row(&m[1])],
        }
    }
}

impl fmt::Display for PlaneGermJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.comps[0], self.comps[1])
    }
}

/// Jet of a germ `(R^2, 0) -> (R^3, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceGermJet {
    comps: [TruncatedSeries; 3],
}

impl SpaceGermJet {
    pub fn new(
        first: TruncatedSeries,
        second: TruncatedSeries,
        third: TruncatedSeries,
    ) -> Result<Self, JetError> {
        check_components(&[first.clone(), second.clone(), third.clone()])?;
        Ok(SpaceGermJet {
            comps: [first, second, third],
        })
    }

    pub fn order(&self) -> u32 {
        self.comps[0].order()
    }

    pub fn component(&self, k: usize) -> &TruncatedSeries {
        &self.comps[k]
    }

    pub fn components(&self) -> &[TruncatedSeries; 3] {
        &self.comps
    }

    pub fn compose(&self, inner: &PlaneGermJet) -> Result<SpaceGermJet, JetError> {
        let v = compose_components(&self.comps, inner)?;
        let [a, b, c]: [TruncatedSeries; 3] = v.try_into().expect("three components");
        Ok(SpaceGermJet { comps: [a, b, c] })
    }

    pub fn with_order(&self, order: u32) -> Self {
        SpaceGermJet {
            comps: [
                self.comps[0].with_order(order),
                self.comps[1].with_order(order),
                self.comps[2].with_order(order),
            ],
        }
    }

    pub fn eq_through(&self, other: &Self, degree: u32) -> bool {
        (0..3).all(|k| self.comps[k].eq_through(&other.comps[k], degree))
    }
}

impl fmt::Display for SpaceGermJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {} ; {}", self.comps[0], self.comps[1], self.comps[2])
    }
}

/// A plane germ jet with invertible linear part, used as a diffeomorphic
/// change of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordChangeJet {
    map: PlaneGermJet,
}

impl CoordChangeJet {
    /// Accepts the jet if its linear determinant is a nonzero parameter
    /// polynomial. With `strict`, the determinant must in addition have a
    /// nonzero constant term, i.e. stay invertible for all small parameters.
    pub fn new(map: PlaneGermJet, strict: bool) -> Result<Self, JetError> {
        let det = linear_det(&map);
        if det.is_zero() || (strict && det.constant_term().is_zero()) {
            return Err(JetError::SingularLinearPart(det.to_string()));
        }
        Ok(CoordChangeJet { map })
    }

    pub fn identity(order: u32) -> Self {
        CoordChangeJet {
            map: PlaneGermJet::identity(order),
        }
    }

    pub fn as_jet(&self) -> &PlaneGermJet {
        &self.map
    }

    pub fn into_jet(self) -> PlaneGermJet {
        self.map
    }

    /// Determinant of the linear part.
    pub fn linear_determinant(&self) -> ParamPoly {
        linear_det(&self.map)
    }

    /// `self ∘ other` as a coordinate change.
    pub fn then_after(&self, other: &CoordChangeJet) -> Result<CoordChangeJet, JetError> {
        Ok(CoordChangeJet {
            map: self.map.compose(&other.map)?,
        })
    }

    /// Two-sided inverse modulo degree `order + 1`, solved order by order.
    ///
    /// The inverse of the linear part must exist over the coefficient ring,
    /// so the determinant has to be a nonzero rational constant.
    pub fn invert(&self) -> Result<CoordChangeJet, JetError> {
        let n = self.map.order();
        let det = linear_det(&self.map);
        let det_value = det
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| JetError::NotInvertibleOverRing(det.to_string()))?;
        let inv_det = ParamPoly::constant(det_value.recip());
        let [[a, b], [c, d]] = self.map.linear_part();
        let lin_inv = [
            [&d * &inv_det, -&(&b * &inv_det)],
            [-&(&c * &inv_det), &a * &inv_det],
        ];
        let linear_map = {
            let row = |r: &[ParamPoly; 2]| {
                TruncatedSeries::from_terms(
                    n,
                    [(Monomial::new(1, 0), r[0].clone()), (Monomial::new(0, 1), r[1].clone())],
                )
            };
            PlaneGermJet {
                comps: [row(&[a.clone(), b.clone()]), row(&[c.clone(), d.clone()])],
            }
        };
        // h = L + Q; solve g = L^{-1} (id − Q∘g) by iteration.
        let nonlinear = PlaneGermJet {
            comps: [
                &self.map.comps[0] - &linear_map.comps[0],
                &self.map.comps[1] - &linear_map.comps[1],
            ],
        };
        let id = PlaneGermJet::identity(n);
        let mut g = id.apply_linear(&lin_inv);
        for _ in 1..n {
            let q = nonlinear.compose(&g)?;
            let rhs = PlaneGermJet {
                comps: [&id.comps[0] - &q.comps[0], &id.comps[1] - &q.comps[1]],
            };
            g = rhs.apply_linear(&lin_inv);
        }
        Ok(CoordChangeJet { map: g })
    }
}

fn linear_det(map: &PlaneGermJet) -> ParamPoly {
    let [[a, b], [c, d]] = map.linear_part();
    &(&a * &d) - &(&b * &c)
}

/// Jacobian determinant of a plane germ jet.
pub fn jacobian_determinant(f: &PlaneGermJet) -> TruncatedSeries {
    f.jacobian_determinant()
}

/// Inverse of a coordinate change.
pub fn invert_coordinate_change(h: &CoordChangeJet) -> Result<CoordChangeJet, JetError> {
    h.invert()
}

/// Compose `outer ∘ inner` for plane germs.
pub fn compose(outer: &PlaneGermJet, inner: &PlaneGermJet) -> Result<PlaneGermJet, JetError> {
    outer.compose(inner)
}
