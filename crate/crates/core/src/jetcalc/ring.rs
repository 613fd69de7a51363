//! Polynomials over the rationals in named formal parameters.
//!
//! Parameter monomials are ordered graded-lexicographically, with the
//! variables themselves ordered by name. The leading term of a polynomial is
//! its largest monomial in that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for every coefficient in the crate.
pub type Rational = BigRational;

/// Shorthand for building a rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// A power product of formal parameters, e.g. `d^2*lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamMonomial(Vec<(String, u32)>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        ParamMonomial(vec![(name.to_string(), 1)])
    }

    /// Builds a monomial from (name, exponent) pairs in any order; zero
    /// exponents are dropped and repeated names are merged.
    pub fn from_pairs<I: IntoIterator<Item = (String, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<String, u32> = BTreeMap::new();
        for (name, e) in pairs {
            *map.entry(name).or_insert(0) += e;
        }
        ParamMonomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &ParamMonomial) -> ParamMonomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push(b.clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        out.push((a.0.clone(), a.1 + b.1));
                        i += 1;
                        j += 1;
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        ParamMonomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &ParamMonomial) -> Option<ParamMonomial> {
        let mut out = Vec::new();
        for (name, e) in &self.0 {
            let f = other.exponent(name);
            if f > *e {
                return None;
            }
            if e - f > 0 {
                out.push((name.clone(), e - f));
            }
        }
        if other.0.iter().any(|(n, _)| self.exponent(n) == 0) {
            return None;
        }
        Some(ParamMonomial(out))
    }

    /// Greatest common divisor of two monomials.
    pub fn gcd(&self, other: &ParamMonomial) -> ParamMonomial {
        ParamMonomial(
            self.0
                .iter()
                .filter_map(|(n, e)| {
                    let f = other.exponent(n).min(*e);
                    (f > 0).then(|| (n.clone(), f))
                })
                .collect(),
        )
    }

    fn without(&self, name: &str) -> (u32, ParamMonomial) {
        let e = self.exponent(name);
        let rest = ParamMonomial(self.0.iter().filter(|(n, _)| n != name).cloned().collect());
        (e, rest)
    }
}

impl Ord for ParamMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match a.1.cmp(&b.1) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for ParamMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (name, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Element of the coefficient ring `Q[p1, ..., pk]`.
///
/// Zero coefficients are never stored, so structural equality is ring
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(ParamMonomial::one(), value);
        }
        ParamPoly { terms }
    }

    pub fn from_int(value: i64) -> Self {
        Self::constant(int(value))
    }

    pub fn var(name: &str) -> Self {
        Self::term(Rational::one(), ParamMonomial::var(name))
    }

    pub fn term(coeff: Rational, mono: ParamMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        ParamPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (ParamMonomial, Rational)>>(it: I) -> Self {
        let mut p = ParamPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Iterates terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ParamMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&ParamMonomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&ParamMonomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(name)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(n, _)| n.clone()))
            .collect()
    }

    pub fn add_term(&mut self, mono: ParamMonomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> ParamPoly {
        if factor.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &ParamMonomial, coeff: &Rational) -> ParamPoly {
        if coeff.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c * coeff))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> ParamPoly {
        let mut out = ParamPoly::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Uses multivariate division by leading terms.
    pub fn div_exact(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        let (dm, dc) = divisor.leading_term()?;
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            rem -= &divisor.mul_monomial(&m, &c);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Replaces the parameter `name` by the polynomial `value`.
    pub fn substitute(&self, name: &str, value: &ParamPoly) -> ParamPoly {
        let mut powers: Vec<ParamPoly> = vec![ParamPoly::one()];
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.without(name);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            out += &powers[e as usize].mul_monomial(&rest, c);
        }
        out
    }

    pub fn evaluate(&self, name: &str, value: &Rational) -> ParamPoly {
        self.substitute(name, &ParamPoly::constant(value.clone()))
    }

    /// Floating point value under a complete assignment of the parameters.
    pub fn eval_f64(&self, assignment: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64()?;
            for (name, e) in m.factors() {
                t *= assignment(name)?.powi(*e as i32);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Drops every term whose exponent of `name` exceeds `max`.
    pub fn truncate_in(&self, name: &str, max: u32) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(name) <= max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Positive rational content: gcd of numerators over lcm of denominators,
    /// signed so that the primitive part has a positive leading coefficient.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        let mut content = Rational::new(num, den);
        if let Some((_, lc)) = self.leading_term() {
            if lc.is_negative() {
                content = -content;
            }
        }
        content
    }

    pub fn monomial_content(&self) -> ParamMonomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return ParamMonomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    /// Sign of a nonzero constant; `None` for non-constant or zero values.
    pub fn constant_sign(&self) -> Option<Ordering> {
        let c = self.as_constant()?;
        if c.is_zero() {
            None
        } else if c.is_positive() {
            Some(Ordering::Greater)
        } else {
            Some(Ordering::Less)
        }
    }
}

impl From<Rational> for ParamPoly {
    fn from(value: Rational) -> Self {
        ParamPoly::constant(value)
    }
}

impl From<i64> for ParamPoly {
    fn from(value: i64) -> Self {
        ParamPoly::from_int(value)
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &ParamPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&ParamPoly> for ParamPoly {
    fn sub_assign(&mut self, rhs: &ParamPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero();
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $method(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $method(self, rhs: &ParamPoly) -> ParamPoly {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

/// Positive rational content shared by all coefficients of all polynomials.
pub fn common_content<'a, I: IntoIterator<Item = &'a ParamPoly>>(polys: I) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for p in polys {
        for c in p.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
    }
    if num.is_zero() {
        Rational::one()
    } else {
        Rational::new(num, den)
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ParamPoly {
    /// Leading term first, e.g. `3/4*lambda^2 - d + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d() -> ParamPoly {
        ParamPoly::var("d")
    }

    #[test]
    fn graded_lex_order_puts_higher_degree_last() {
        let a = ParamMonomial::from_pairs([("d".to_string(), 2)]);
        let b = ParamMonomial::from_pairs([("d".to_string(), 1), ("lambda".to_string(), 1)]);
        let c = ParamMonomial::from_pairs([("lambda".to_string(), 2)]);
        assert!(a > b && b > c);
        assert!(ParamMonomial::var("mu") > ParamMonomial::one());
    }

    #[test]
    fn display_is_leading_term_first() {
        let p = &(&d() * &ParamPoly::from_int(1280)) - &ParamPoly::constant(rat(3, 4));
        assert_eq!(p.to_string(), "1280*d - 3/4");
        assert_eq!((-&d()).to_string(), "-d");
    }

    #[test]
    fn exact_division_round_trips() {
        let a = &d() + &ParamPoly::var("lambda");
        let b = &d() - &ParamPoly::one();
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(prod.div_exact(&ParamPoly::var("mu")), None);
        assert_eq!(
            ParamPoly::from_int(6).div_exact(&ParamPoly::from_int(4)),
            Some(ParamPoly::constant(rat(3, 2)))
        );
    }

    #[test]
    fn substitution_and_content() {
        let p = &(&d() * &d()).scale(&int(6)) + &d().scale(&int(4));
        assert_eq!(p.evaluate("d", &int(1)), ParamPoly::from_int(10));
        assert_eq!(p.content(), int(2));
        assert_eq!(p.monomial_content(), ParamMonomial::var("d"));
    }
}

impl serde::Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
