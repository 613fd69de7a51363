//! Univariate truncated series and parameterised plane curve jets.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, ToPrimitive, Zero};

use super::ring::{ParamPoly, Rational};
use super::series::{coefficient_text, rational_sqrt, TruncatedSeries};
use super::JetError;

/// A series `c0 + c1 t + ... + cN t^N` known through degree `N`.
///
/// Binary operations truncate to the smaller order of the operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniSeries {
    order: u32,
    coeffs: Vec<ParamPoly>,
}

impl UniSeries {
    pub fn zero(order: u32) -> Self {
        UniSeries {
            order,
            coeffs: vec![ParamPoly::zero(); order as usize + 1],
        }
    }

    pub fn constant(order: u32, c: ParamPoly) -> Self {
        Self::monomial(order, 0, c)
    }

    /// The series `t`.
    pub fn var(order: u32) -> Self {
        Self::monomial(order, 1, ParamPoly::one())
    }

    pub fn monomial(order: u32, k: u32, c: ParamPoly) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k as usize] = c;
        }
        s
    }

    /// Coefficients from degree 0 upwards; missing ones are zero, extra ones
    /// are dropped.
    pub fn from_coeffs(order: u32, coeffs: Vec<ParamPoly>) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().enumerate().take(order as usize + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_rationals(order: u32, coeffs: &[Rational]) -> Self {
        Self::from_coeffs(order, coeffs.iter().cloned().map(ParamPoly::constant).collect())
    }

    pub fn from_ints(order: u32, coeffs: &[i64]) -> Self {
        Self::from_coeffs(order, coeffs.iter().map(|&c| ParamPoly::from_int(c)).collect())
    }

    /// Restriction of a bivariate series to the `x` axis (`x -> t, y -> 0`).
    pub fn from_x_slice(s: &TruncatedSeries) -> Self {
        let mut out = Self::zero(s.order());
        for (m, c) in s.terms() {
            if m.y == 0 {
                out.coeffs[m.x as usize] = c.clone();
            }
        }
        out
    }

    /// Restriction to the `y` axis (`x -> 0, y -> t`).
    pub fn from_y_slice(s: &TruncatedSeries) -> Self {
        let mut out = Self::zero(s.order());
        for (m, c) in s.terms() {
            if m.x == 0 {
                out.coeffs[m.y as usize] = c.clone();
            }
        }
        out
    }

    /// As a bivariate series in `x` (or `y` if `in_y`).
    pub fn to_bivariate(&self, order: u32, in_y: bool) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            order,
            self.coeffs.iter().enumerate().filter(|(k, _)| *k as u32 <= order).map(|(k, c)| {
                let k = k as u32;
                let m = if in_y {
                    super::Monomial::new(0, k)
                } else {
                    super::Monomial::new(k, 0)
                };
                (m, c.clone())
            }),
        )
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, k: u32) -> ParamPoly {
        self.coeffs.get(k as usize).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, k: u32) -> Option<&ParamPoly> {
        self.coeffs.get(k as usize)
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: u32, c: ParamPoly) {
        if k <= self.order {
            self.coeffs[k as usize] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| k as u32)
    }

    pub fn leading(&self) -> Option<(u32, &ParamPoly)> {
        self.valuation().map(|k| (k, &self.coeffs[k as usize]))
    }

    pub fn with_order(&self, order: u32) -> Self {
        let mut out = Self::zero(order);
        for k in 0..=order.min(self.order) {
            out.coeffs[k as usize] = self.coeffs[k as usize].clone();
        }
        out
    }

    /// Drops terms above degree `d` but keeps the order.
    pub fn truncate(&self, d: u32) -> Self {
        let mut out = self.clone();
        for k in (d + 1)..=self.order {
            out.coeffs[k as usize] = ParamPoly::zero();
        }
        out
    }

    pub fn eq_through(&self, other: &Self, d: u32) -> bool {
        (0..=d).all(|k| self.coeff(k) == other.coeff(k))
    }

    pub fn scale(&self, f: &ParamPoly) -> Self {
        self.map_coeffs(|c| c * f)
    }

    pub fn scale_rational(&self, f: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(f))
    }

    pub fn map_coeffs(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> Self {
        UniSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn substitute_param(&self, name: &str, value: &ParamPoly) -> Self {
        self.map_coeffs(|c| c.substitute(name, value))
    }

    pub fn is_numeric(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_constant())
    }

    /// Multiplies by `t^k`.
    pub fn shift_up(&self, k: u32) -> Self {
        let mut out = Self::zero(self.order);
        for j in 0..=self.order {
            if j + k <= self.order {
                out.coeffs[(j + k) as usize] = self.coeffs[j as usize].clone();
            }
        }
        out
    }

    /// Divides by `t^k`; the result is known only through `order - k`.
    pub fn shift_down(&self, k: u32) -> Option<Self> {
        if self.valuation().is_some_and(|v| v < k) || k > self.order {
            return None;
        }
        let order = self.order - k;
        Some(UniSeries {
            order,
            coeffs: (0..=order).map(|j| self.coeffs[(j + k) as usize].clone()).collect(),
        })
    }

    pub fn derivative(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Self::zero(order);
        for k in 1..=self.order {
            out.coeffs[k as usize - 1] = self.coeffs[k as usize].scale(&Rational::from_integer(k.into()));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.order, ParamPoly::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &UniSeries) -> Result<Self, JetError> {
        if !inner.coeff(0).is_zero() {
            return Err(JetError::NonZeroConstant);
        }
        let order = self.order.min(inner.order);
        let inner = inner.with_order(order);
        let mut acc = Self::zero(order);
        for k in (0..=order).rev() {
            acc = &(&acc * &inner) + &Self::constant(order, self.coeffs[k as usize].clone());
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn recip(&self) -> Result<Self, JetError> {
        let c0 = self.coeff(0).as_constant().filter(|c| !c.is_zero()).ok_or(JetError::NotAUnit)?;
        let inv0 = c0.recip();
        let mut out = Self::zero(self.order);
        out.coeffs[0] = ParamPoly::constant(inv0.clone());
        for k in 1..=self.order {
            let mut acc = ParamPoly::zero();
            for j in 1..=k {
                acc += &(&self.coeffs[j as usize] * &out.coeffs[(k - j) as usize]);
            }
            out.coeffs[k as usize] = (-&acc).scale(&inv0);
        }
        Ok(out)
    }

    /// Square root with positive constant term; the constant term must be
    /// the square of a positive rational.
    pub fn sqrt(&self) -> Result<Self, JetError> {
        let c0 = self.coeff(0).as_constant().filter(|c| c.is_positive()).ok_or(JetError::NotASquare)?;
        let r0 = rational_sqrt(&c0).ok_or(JetError::NotASquare)?;
        let inv = (r0.clone() * Rational::from_integer(2.into())).recip();
        let mut out = Self::zero(self.order);
        out.coeffs[0] = ParamPoly::constant(r0);
        for k in 1..=self.order {
            let mut acc = self.coeffs[k as usize].clone();
            for j in 1..k {
                acc -= &(&out.coeffs[j as usize] * &out.coeffs[(k - j) as usize]);
            }
            out.coeffs[k as usize] = acc.scale(&inv);
        }
        Ok(out)
    }

    /// Compositional inverse of `a1 t + a2 t^2 + ...` with `a1` a nonzero
    /// rational.
    pub fn reversion(&self) -> Result<Self, JetError> {
        if !self.coeff(0).is_zero() {
            return Err(JetError::NonZeroConstant);
        }
        let a1 = self.coeff(1).as_constant().filter(|c| !c.is_zero()).ok_or(JetError::NotAUnit)?;
        let inv = a1.recip();
        let t = Self::var(self.order);
        let mut g = t.scale_rational(&inv);
        for _ in 0..self.order {
            // g <- g - (f(g) - t) / a1
            let fg = self.compose(&g)?;
            g = &g - &(&fg - &t).scale_rational(&inv);
        }
        Ok(g)
    }

    /// Floating point coefficients; `None` if some coefficient is symbolic.
    pub fn to_f64(&self) -> Option<Vec<f64>> {
        self.coeffs.iter().map(|c| c.as_constant()?.to_f64()).collect()
    }

    pub fn eval_f64(&self, t: f64, params: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.eval_f64(params)?;
        }
        Some(acc)
    }

    /// Text in the given variable, lowest degree first.
    pub fn fmt_in(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = coefficient_text(c);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            match (body.as_str(), k) {
                (b, 0) => out.push_str(b),
                ("1", _) => out.push_str(&power),
                (b, _) => out.push_str(&format!("{b}*{power}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_in("t"))
    }
}

impl Add<&UniSeries> for &UniSeries {
    type Output = UniSeries;
    fn add(self, rhs: &UniSeries) -> UniSeries {
        let order = self.order.min(rhs.order);
        UniSeries {
            order,
            coeffs: (0..=order as usize).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub<&UniSeries> for &UniSeries {
    type Output = UniSeries;
    fn sub(self, rhs: &UniSeries) -> UniSeries {
        self + &(-rhs)
    }
}

impl Neg for &UniSeries {
    type Output = UniSeries;
    fn neg(self) -> UniSeries {
        self.map_coeffs(|c| -c)
    }
}

impl Mul<&UniSeries> for &UniSeries {
    type Output = UniSeries;
    fn mul(self, rhs: &UniSeries) -> UniSeries {
        let order = self.order.min(rhs.order);
        let mut out = UniSeries::zero(order);
        let (va, vb) = (self.valuation(), rhs.valuation());
        let (Some(va), Some(vb)) = (va, vb) else {
            return out;
        };
        for i in va..=order {
            let a = &self.coeffs[i as usize];
            if a.is_zero() {
                continue;
            }
            for j in vb..=(order - i) {
                let b = &rhs.coeffs[j as usize];
                if !b.is_zero() {
                    out.coeffs[(i + j) as usize] += &(a * b);
                }
            }
        }
        out
    }
}

/// Evaluates a bivariate series along `(x(t), y(t))`. Both inner series
/// must vanish at `t = 0`.
pub fn substitute_curve(f: &TruncatedSeries, x: &UniSeries, y: &UniSeries) -> Result<UniSeries, JetError> {
    if !x.coeff(0).is_zero() || !y.coeff(0).is_zero() {
        return Err(JetError::NonZeroConstant);
    }
    let order = x.order().min(y.order());
    let max_x = f.terms().map(|(m, _)| m.x).max().unwrap_or(0);
    let max_y = f.terms().map(|(m, _)| m.y).max().unwrap_or(0);
    let powers = |s: &UniSeries, top: u32| {
        let mut v = vec![UniSeries::constant(order, ParamPoly::one())];
        for k in 1..=top {
            let next = &v[k as usize - 1] * s;
            v.push(next);
        }
        v
    };
    let px = powers(&x.with_order(order), max_x);
    let py = powers(&y.with_order(order), max_y);
    let mut acc = UniSeries::zero(order);
    for (m, c) in f.terms() {
        let term = (&px[m.x as usize] * &py[m.y as usize]).scale(c);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// A parameterised plane curve jet `t -> (X(t), Y(t))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveJet {
    comps: [UniSeries; 2],
}

impl CurveJet {
    pub fn new(first: UniSeries, second: UniSeries) -> Self {
        let order = first.order().min(second.order());
        CurveJet {
            comps: [first.with_order(order), second.with_order(order)],
        }
    }

    pub fn order(&self) -> u32 {
        self.comps[0].order()
    }

    pub fn component(&self, k: usize) -> &UniSeries {
        &self.comps[k]
    }

    pub fn components(&self) -> &[UniSeries; 2] {
        &self.comps
    }

    pub fn passes_through_origin(&self) -> bool {
        self.comps.iter().all(|c| c.coeff(0).is_zero())
    }

    /// Lowest degree with a nonzero coefficient in either component.
    pub fn multiplicity(&self) -> Option<u32> {
        self.comps.iter().filter_map(|c| c.valuation()).min()
    }

    /// Reparameterises by `t -> inner(t)`.
    pub fn reparameterize(&self, inner: &UniSeries) -> Result<CurveJet, JetError> {
        Ok(CurveJet::new(self.comps[0].compose(inner)?, self.comps[1].compose(inner)?))
    }

    /// The image curve `f ∘ self` of a plane germ.
    pub fn image_under(&self, f: &[TruncatedSeries; 2]) -> Result<CurveJet, JetError> {
        let a = substitute_curve(&f[0], &self.comps[0], &self.comps[1])?;
        let b = substitute_curve(&f[1], &self.comps[0], &self.comps[1])?;
        Ok(CurveJet::new(a, b))
    }

    pub fn with_order(&self, order: u32) -> Self {
        CurveJet::new(self.comps[0].with_order(order), self.comps[1].with_order(order))
    }

    pub fn eq_through(&self, other: &Self, d: u32) -> bool {
        self.comps[0].eq_through(&other.comps[0], d) && self.comps[1].eq_through(&other.comps[1], d)
    }

    pub fn substitute_param(&self, name: &str, value: &ParamPoly) -> Self {
        CurveJet::new(self.comps[0].substitute_param(name, value), self.comps[1].substitute_param(name, value))
    }

    pub fn fmt_in(&self, var: &str) -> String {
        format!("({}, {})", self.comps[0].fmt_in(var), self.comps[1].fmt_in(var))
    }
}

impl fmt::Display for CurveJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_in("t"))
    }
}
