//! Truncated power series in the two germ variables `x`, `y`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ring::{fmt_rational, ParamPoly, Rational};
use super::JetError;

/// Germ monomial `x^x * y^y`.
///
/// Ordered by total degree, then by descending power of `x`, so a degree-`d`
/// block reads `x^d, x^(d-1)y, ..., y^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y
    }

    /// All monomials of total degree `d` in canonical order.
    pub fn of_degree(d: u32) -> impl Iterator<Item = Monomial> {
        (0..=d).map(move |j| Monomial::new(d - j, j))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.x + other.x, self.y + other.y)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.x.cmp(&self.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |f: &mut fmt::Formatter<'_>, v: &str, e: u32| match e {
            0 => Ok(()),
            1 => write!(f, "{v}"),
            _ => write!(f, "{v}^{e}"),
        };
        match (self.x, self.y) {
            (0, 0) => write!(f, "1"),
            (_, 0) => part(f, "x", self.x),
            (0, _) => part(f, "y", self.y),
            _ => {
                part(f, "x", self.x)?;
                write!(f, "*")?;
                part(f, "y", self.y)
            }
        }
    }
}

/// Germ variable selector for differentiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GermVar {
    X,
    Y,
}

/// A polynomial in `x, y` with [`ParamPoly`] coefficients, truncated above
/// total degree `order`.
///
/// `exact_to` records the highest degree whose coefficients are known to be
/// exact; it drops by one under differentiation.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    order: u32,
    exact_to: u32,
    terms: BTreeMap<Monomial, ParamPoly>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.terms == other.terms
    }
}

impl Eq for TruncatedSeries {}

impl TruncatedSeries {
    pub fn zero(order: u32) -> Self {
        TruncatedSeries {
            order,
            exact_to: order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(order: u32, value: ParamPoly) -> Self {
        Self::monomial(order, Monomial::ONE, value)
    }

    pub fn x(order: u32) -> Self {
        Self::monomial(order, Monomial::new(1, 0), ParamPoly::one())
    }

    pub fn y(order: u32) -> Self {
        Self::monomial(order, Monomial::new(0, 1), ParamPoly::one())
    }

    pub fn monomial(order: u32, mono: Monomial, coeff: ParamPoly) -> Self {
        let mut s = Self::zero(order);
        s.add_term(mono, coeff);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ParamPoly)>>(order: u32, it: I) -> Self {
        let mut s = Self::zero(order);
        for (m, c) in it {
            s.add_term(m, c);
        }
        s
    }

    /// Convenience constructor from integer coefficients `(i, j, c)`.
    pub fn from_ints(order: u32, terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(
            order,
            terms
                .iter()
                .map(|&(i, j, c)| (Monomial::new(i, j), ParamPoly::from_int(c))),
        )
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exact_to(&self) -> u32 {
        self.exact_to
    }

    pub(crate) fn with_exact_to(mut self, exact_to: u32) -> Self {
        self.exact_to = exact_to.min(self.order);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> ParamPoly {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(ParamPoly::zero)
    }

    pub fn constant_term(&self) -> ParamPoly {
        self.coeff(0, 0)
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: ParamPoly) {
        if coeff.is_zero() || mono.degree() > self.order {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Reinterprets the series at another working order. Raising the order
    /// keeps the old exactness bound.
    pub fn with_order(&self, order: u32) -> Self {
        TruncatedSeries {
            order,
            exact_to: self.exact_to.min(order),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drops all terms of degree above `d` without changing the working order.
    pub fn truncate(&self, d: u32) -> Self {
        TruncatedSeries {
            order: self.order,
            exact_to: self.exact_to,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of degree `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        TruncatedSeries {
            order: self.order,
            exact_to: self.exact_to,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn eq_through(&self, other: &Self, degree: u32) -> bool {
        self.truncate(degree).terms == other.truncate(degree).terms
    }

    pub fn scale(&self, factor: &ParamPoly) -> Self {
        let mut out = Self::zero(self.order).with_exact_to(self.exact_to);
        for (m, c) in &self.terms {
            out.add_term(*m, c * factor);
        }
        out
    }

    pub fn scale_rational(&self, factor: &Rational) -> Self {
        self.scale(&ParamPoly::constant(factor.clone()))
    }

    pub fn mul_monomial(&self, mono: Monomial) -> Self {
        let mut out = Self::zero(self.order).with_exact_to(self.exact_to);
        for (m, c) in &self.terms {
            out.add_term(m.mul(&mono), c.clone());
        }
        out
    }

    /// Divides by `x^i y^j`; fails unless every term is divisible.
    pub fn div_monomial(&self, mono: Monomial) -> Option<Self> {
        let mut out = Self::zero(self.order)
            .with_exact_to(self.exact_to.saturating_sub(mono.degree()));
        for (m, c) in &self.terms {
            if m.x < mono.x || m.y < mono.y {
                return None;
            }
            out.add_term(Monomial::new(m.x - mono.x, m.y - mono.y), c.clone());
        }
        Some(out)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::ONE;
        };
        it.fold(*first, |acc, m| Monomial::new(acc.x.min(m.x), acc.y.min(m.y)))
    }

    fn check_order(&self, other: &Self) -> Result<(), JetError> {
        if self.order != other.order {
            return Err(JetError::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    /// Product truncated at the working order. Every kept coefficient is
    /// exact when both factors are exact.
    pub fn multiply(&self, other: &Self) -> Result<Self, JetError> {
        self.check_order(other)?;
        let n = self.order;
        let mut out = Self::zero(n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() <= n {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
        }
        let va = self.valuation().unwrap_or(n + 1);
        let vb = other.valuation().unwrap_or(n + 1);
        let exact = (self.exact_to + vb).min(other.exact_to + va).min(n);
        Ok(out.with_exact_to(exact))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, JetError> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out.exact_to = self.exact_to.min(other.exact_to);
        Ok(out)
    }

    /// Formal partial derivative. The result is exact only through degree
    /// `exact_to - 1`.
    pub fn differentiate(&self, var: GermVar) -> Self {
        let mut out = Self::zero(self.order).with_exact_to(self.exact_to.saturating_sub(1));
        for (m, c) in &self.terms {
            match var {
                GermVar::X if m.x > 0 => out.add_term(
                    Monomial::new(m.x - 1, m.y),
                    c.scale(&Rational::from_integer(m.x.into())),
                ),
                GermVar::Y if m.y > 0 => out.add_term(
                    Monomial::new(m.x, m.y - 1),
                    c.scale(&Rational::from_integer(m.y.into())),
                ),
                _ => {}
            }
        }
        out
    }

    /// Substitutes `x -> inner[0]`, `y -> inner[1]`. Inner series must have
    /// zero constant term so that truncation commutes with substitution.
    pub fn compose(&self, inner_x: &Self, inner_y: &Self) -> Result<Self, JetError> {
        self.check_order(inner_x)?;
        self.check_order(inner_y)?;
        if !inner_x.constant_term().is_zero() || !inner_y.constant_term().is_zero() {
            return Err(JetError::NonZeroConstant);
        }
        let n = self.order;
        let max_x = self.terms.keys().map(|m| m.x).max().unwrap_or(0);
        let max_y = self.terms.keys().map(|m| m.y).max().unwrap_or(0);
        let powers = |base: &Self, top: u32| -> Result<Vec<Self>, JetError> {
            let mut v = vec![Self::constant(n, ParamPoly::one())];
            for k in 1..=top {
                let next = v[k as usize - 1].multiply(base)?;
                v.push(next);
            }
            Ok(v)
        };
        let px = powers(inner_x, max_x)?;
        let py = powers(inner_y, max_y)?;
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let term = px[m.x as usize].multiply(&py[m.y as usize])?;
            for (tm, tc) in &term.terms {
                out.add_term(*tm, tc * c);
            }
        }
        let exact = self
            .exact_to
            .min(inner_x.exact_to)
            .min(inner_y.exact_to);
        Ok(out.with_exact_to(exact))
    }

    /// Multiplicative inverse of a series whose constant term is a nonzero
    /// rational.
    pub fn recip(&self) -> Result<Self, JetError> {
        let c0 = self
            .constant_term()
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or(JetError::NotAUnit)?;
        let inv0 = c0.recip();
        // self = c0 (1 + g) with g(0) = 0; 1/(1+g) = sum (-g)^k.
        let g = &self.scale_rational(&inv0) - &Self::constant(self.order, ParamPoly::one());
        let neg_g = -&g;
        let mut acc = Self::constant(self.order, ParamPoly::one());
        let mut power = acc.clone();
        for _ in 0..self.order {
            power = &power * &neg_g;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale_rational(&inv0).with_exact_to(self.exact_to))
    }

    /// Square root of a series whose constant term is the square of a
    /// nonzero rational; the root has the positive constant term.
    pub fn sqrt(&self) -> Result<Self, JetError> {
        let c0 = self
            .constant_term()
            .as_constant()
            .filter(|c| c.is_positive())
            .ok_or(JetError::NotASquare)?;
        let root0 = rational_sqrt(&c0).ok_or(JetError::NotASquare)?;
        let g = &self.scale_rational(&c0.recip()) - &Self::constant(self.order, ParamPoly::one());
        // (1+g)^(1/2) = sum binom(1/2, k) g^k
        let half = Rational::new(1.into(), 2.into());
        let mut binom = Rational::one();
        let mut acc = Self::constant(self.order, ParamPoly::one());
        let mut power = acc.clone();
        for k in 0..self.order {
            binom = binom * (&half - Rational::from_integer(k.into()))
                / Rational::from_integer((k + 1).into());
            power = &power * &g;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power.scale_rational(&binom);
        }
        Ok(acc.scale_rational(&root0).with_exact_to(self.exact_to))
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> Self {
        let mut out = Self::zero(self.order).with_exact_to(self.exact_to);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Specialises a formal parameter to a value.
    pub fn substitute_param(&self, name: &str, value: &ParamPoly) -> Self {
        self.map_coeffs(|c| c.substitute(name, value))
    }

    /// True when every coefficient is a rational constant.
    pub fn is_numeric(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    /// Floating point evaluation; `None` if a parameter is unassigned.
    pub fn eval_f64(&self, x: f64, y: f64, params: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            acc += c.eval_f64(params)? * x.powi(m.x as i32) * y.powi(m.y as i32);
        }
        Some(acc)
    }

    /// Coefficients as floats, for numeric consumers. Requires numeric
    /// coefficients.
    pub fn to_f64_terms(&self) -> Option<Vec<(Monomial, f64)>> {
        self.terms
            .iter()
            .map(|(m, c)| Some((*m, c.as_constant()?.to_f64()?)))
            .collect()
    }

    /// Canonical text, lowest degree first, e.g. `x^2 + y^2 + d*y^3`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

/// Exact square root of a nonnegative rational, when it exists.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, body) = coefficient_text(c);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (body.as_str(), m.degree()) {
                (b, 0) => write!(f, "{b}")?,
                ("1", _) => write!(f, "{m}")?,
                (b, _) => write!(f, "{b}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Splits a coefficient into a sign and a factor usable in a product.
pub(crate) fn coefficient_text(c: &ParamPoly) -> (bool, String) {
    if c.num_terms() == 1 {
        let (m, r) = c.terms().next().unwrap();
        let neg = r.is_negative();
        let abs = r.abs();
        let body = if m.is_one() {
            fmt_rational(&abs)
        } else if abs.is_one() {
            m.to_string()
        } else {
            format!("{}*{m}", fmt_rational(&abs))
        };
        (neg, body)
    } else {
        (false, format!("({c})"))
    }
}

fn assert_same(a: &TruncatedSeries, b: &TruncatedSeries) {
    assert_eq!(
        a.order, b.order,
        "series working orders differ ({} vs {})",
        a.order, b.order
    );
}

impl Add<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_same(self, rhs);
        self.checked_add(rhs).expect("orders checked")
    }
}

impl Sub<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_same(self, rhs);
        self.checked_add(&-rhs).expect("orders checked")
    }
}

impl Mul<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_same(self, rhs);
        self.multiply(rhs).expect("orders checked")
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.map_coeffs(|c| -c)
    }
}

/// Exact linear combination `sum coeffs[k] * jets[k]`.
pub fn linear_combine(
    coeffs: &[ParamPoly],
    jets: &[TruncatedSeries],
) -> Result<TruncatedSeries, JetError> {
    if coeffs.len() != jets.len() {
        return Err(JetError::LengthMismatch {
            coeffs: coeffs.len(),
            jets: jets.len(),
        });
    }
    let Some(first) = jets.first() else {
        return Err(JetError::Empty);
    };
    let mut out = TruncatedSeries::zero(first.order);
    for (c, j) in coeffs.iter().zip(jets) {
        out = out.checked_add(&j.scale(c))?;
    }
    Ok(out)
}

/// Product of two truncated series.
pub fn multiply(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, JetError> {
    a.multiply(b)
}

/// Partial derivative with respect to a germ variable.
pub fn differentiate(f: &TruncatedSeries, var: GermVar) -> TruncatedSeries {
    f.differentiate(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcalc::ring::rat;

    fn s(order: u32, t: &[(u32, u32, i64)]) -> TruncatedSeries {
        TruncatedSeries::from_ints(order, t)
    }

    #[test]
    fn monomial_order_is_degree_then_descending_x() {
        let v: Vec<_> = Monomial::of_degree(2).collect();
        assert_eq!(v, vec![Monomial::new(2, 0), Monomial::new(1, 1), Monomial::new(0, 2)]);
        assert!(Monomial::new(0, 1) > Monomial::new(1, 0));
        assert!(Monomial::new(3, 0) > Monomial::new(0, 2));
    }

    #[test]
    fn linear_combination_examples() {
        let f = s(8, &[(2, 0, 1)]);
        let g = s(8, &[(0, 2, 1)]);
        let one = ParamPoly::one();
        assert_eq!(linear_combine(&[one.clone(), ParamPoly::zero()], &[f.clone(), g.clone()]).unwrap(), f);
        assert_eq!(
            linear_combine(&[ParamPoly::from_int(2), ParamPoly::from_int(-1)], &[f.clone(), f.clone()]).unwrap(),
            f
        );
        assert_eq!(
            linear_combine(&[one.clone(), one], &[f, g]).unwrap(),
            s(8, &[(2, 0, 1), (0, 2, 1)])
        );
        assert!(linear_combine(&[ParamPoly::one()], &[s(3, &[])]).is_ok());
        assert!(matches!(
            linear_combine(&[ParamPoly::one(), ParamPoly::one()], &[s(3, &[]), s(4, &[])]),
            Err(JetError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn multiplication_examples() {
        let a = s(8, &[(1, 0, 1), (0, 1, 1)]);
        let b = s(8, &[(1, 0, 1), (0, 1, -1)]);
        assert_eq!(multiply(&a, &b).unwrap(), s(8, &[(2, 0, 1), (0, 2, -1)]));

        let d = ParamPoly::var("d");
        let dy = TruncatedSeries::monomial(8, Monomial::new(0, 1), d.clone());
        let y2 = s(8, &[(0, 2, 1)]);
        assert_eq!(
            multiply(&dy, &y2).unwrap(),
            TruncatedSeries::monomial(8, Monomial::new(0, 3), d.clone())
        );

        let mut first = s(3, &[(2, 0, 1), (0, 2, 1)]);
        first.add_term(Monomial::new(0, 3), d);
        let second = s(3, &[(0, 2, 1), (3, 0, 1)]);
        assert!(multiply(&first, &second).unwrap().is_zero());
        assert!(multiply(&s(3, &[]), &s(4, &[])).is_err());
    }

    #[test]
    fn differentiation_examples() {
        assert_eq!(
            differentiate(&s(8, &[(2, 1, 1)]), GermVar::X),
            s(8, &[(1, 1, 2)])
        );
        let d = ParamPoly::var("d");
        let mut f = s(8, &[(2, 0, 1), (0, 2, 1)]);
        f.add_term(Monomial::new(0, 3), d.clone());
        let mut expect = s(8, &[(0, 1, 2)]);
        expect.add_term(Monomial::new(0, 2), d.scale(&rat(3, 1)));
        let df = differentiate(&f, GermVar::Y);
        assert_eq!(df, expect);
        assert_eq!(df.exact_to(), 7);
        assert_eq!(differentiate(&s(8, &[(8, 0, 1)]), GermVar::X), s(8, &[(7, 0, 8)]));
    }

    #[test]
    fn reciprocal_and_square_root() {
        let u = s(6, &[(0, 0, 4), (1, 0, -6)]);
        let r = u.recip().unwrap();
        assert_eq!(&u * &r, TruncatedSeries::constant(6, ParamPoly::one()));
        let sq = (&u * &u).sqrt().unwrap();
        assert_eq!(sq, u);
        assert!(s(6, &[(0, 0, 2)]).sqrt().is_err());
    }

    #[test]
    fn canonical_text() {
        let d = ParamPoly::var("d");
        let mut f = s(8, &[(2, 0, 1), (0, 2, 1)]);
        f.add_term(Monomial::new(0, 3), d);
        assert_eq!(f.to_string(), "x^2 + y^2 + d*y^3");
        let g = s(8, &[(1, 1, 4), (2, 1, -6)]);
        assert_eq!(g.to_string(), "4*x*y - 6*x^2*y");
    }
}

impl serde::Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
