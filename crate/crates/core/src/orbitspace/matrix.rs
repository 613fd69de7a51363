//! Fraction-free linear algebra over the parameter ring.

use std::fmt;

use serde::Serialize;

use crate::jetcalc::{ParamPoly, Rational};

/// Dense matrix with [`ParamPoly`] entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ParamPoly>,
}

impl ParamMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ParamMatrix {
            rows,
            cols,
            data: vec![ParamPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ParamPoly::one());
        }
        m
    }

    /// Builds a matrix from its columns; all columns must share a length.
    pub fn from_columns(rows: usize, columns: &[Vec<ParamPoly>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_rationals(rows: usize, cols: usize, values: &[Rational]) -> Self {
        assert_eq!(values.len(), rows * cols);
        ParamMatrix {
            rows,
            cols,
            data: values.iter().cloned().map(ParamPoly::constant).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ParamPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ParamPoly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<ParamPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> Self {
        ParamMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Specialises a parameter in every entry.
    pub fn substitute(&self, name: &str, value: &ParamPoly) -> Self {
        self.map(|e| e.substitute(name, value))
    }

    pub fn is_numeric(&self) -> bool {
        self.data.iter().all(|e| e.is_constant())
    }

    /// Rank over the fraction field of the parameter ring, with the pivot
    /// data of the elimination.
    pub fn bareiss(&self) -> Elimination {
        let mut m = self.clone();
        let mut prev = ParamPoly::one();
        let mut rank = 0;
        let mut swaps = 0usize;
        let mut pivots = Vec::new();
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = choose_pivot((rank..m.rows).map(|i| (i, m.get(i, c)))) else {
                continue;
            };
            if p != rank {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, rank * m.cols + j);
                }
                swaps += 1;
            }
            let piv = m.get(rank, c).clone();
            for i in rank + 1..m.rows {
                let lead = m.get(i, c).clone();
                for j in c + 1..m.cols {
                    let num = &(&piv * m.get(i, j)) - &(&lead * m.get(rank, j));
                    let v = num
                        .div_exact(&prev)
                        .expect("fraction-free elimination divides exactly");
                    m.set(i, j, v);
                }
                m.set(i, c, ParamPoly::zero());
            }
            pivots.push((rank, c));
            prev = piv;
            rank += 1;
        }
        Elimination {
            rank,
            last_pivot: if rank > 0 { prev } else { ParamPoly::one() },
            swaps,
            pivots,
            square: self.rows == self.cols,
            dim: self.rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.bareiss().rank
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Option<ParamPoly> {
        (self.rows == self.cols).then(|| self.bareiss().determinant().unwrap_or_default())
    }
}

/// Picks a pivot among nonzero candidates, preferring a nonzero constant
/// term, then the fewest terms.
pub(crate) fn choose_pivot<'a, I>(candidates: I) -> Option<usize>
where
    I: Iterator<Item = (usize, &'a ParamPoly)>,
{
    candidates
        .filter(|(_, v)| !v.is_zero())
        .min_by_key(|(i, v)| {
            let no_constant = v.constant_term() == Rational::from_integer(0.into());
            (no_constant, v.num_terms(), v.total_degree(), *i)
        })
        .map(|(i, _)| i)
}

/// Outcome of a fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    /// The last pivot: a nonzero `rank × rank` minor.
    pub last_pivot: ParamPoly,
    pub swaps: usize,
    pub pivots: Vec<(usize, usize)>,
    square: bool,
    dim: usize,
}

impl Elimination {
    /// Determinant when the matrix was square: zero if rank deficient.
    pub fn determinant(&self) -> Option<ParamPoly> {
        if !self.square {
            return None;
        }
        if self.rank < self.dim {
            return Some(ParamPoly::zero());
        }
        Some(if self.swaps % 2 == 1 {
            -&self.last_pivot
        } else {
            self.last_pivot.clone()
        })
    }
}

/// Parameter conditions on which a generically nonvanishing minor vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingLocus {
    /// Human-readable conditions, each of the form `expr = 0`; their union is
    /// the locus.
    pub conditions: Vec<String>,
    /// True when the locus is exactly where the rank drops (square case);
    /// otherwise it is a superset.
    pub exact: bool,
}

impl VanishingLocus {
    pub fn empty() -> Self {
        VanishingLocus {
            conditions: Vec::new(),
            exact: true,
        }
    }

    /// Zero set of a nonzero polynomial, split into its monomial factor's
    /// variables and the remaining primitive factor.
    pub fn of_polynomial(p: &ParamPoly, exact: bool) -> Self {
        if p.is_constant() {
            return VanishingLocus {
                conditions: Vec::new(),
                exact,
            };
        }
        let mono = p.monomial_content();
        let mut conditions: Vec<String> = mono
            .factors()
            .iter()
            .map(|(name, _)| format!("{name} = 0"))
            .collect();
        let rest = p
            .div_exact(&ParamPoly::term(Rational::from_integer(1.into()), mono))
            .expect("monomial content divides");
        if !rest.is_constant() {
            let content = rest.content();
            conditions.push(format!("{} = 0", rest.scale(&content.recip())));
        }
        VanishingLocus { conditions, exact }
    }
}

impl fmt::Display for VanishingLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conditions.is_empty() {
            return write!(f, "none");
        }
        write!(f, "{}", self.conditions.join(" or "))
    }
}

/// Incrementally maintained echelon basis of a span of vectors, over the
/// fraction field of the parameter ring.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    basis: Vec<(usize, Vec<ParamPoly>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, mut v: Vec<ParamPoly>) -> Vec<ParamPoly> {
        for (pc, b) in &self.basis {
            if v[*pc].is_zero() {
                continue;
            }
            let lead = v[*pc].clone();
            let piv = &b[*pc];
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = &(piv * &*vi) - &(&lead * bi);
            }
            normalize(&mut v);
        }
        v
    }

    /// True if `v` lies in the current span.
    pub fn contains(&self, v: &[ParamPoly]) -> bool {
        self.reduce(v.to_vec()).iter().all(|e| e.is_zero())
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<ParamPoly>) -> bool {
        let r = self.reduce(v);
        match choose_pivot(r.iter().enumerate()) {
            Some(pc) => {
                self.basis.push((pc, r));
                true
            }
            None => false,
        }
    }
}

/// Divides a vector by the rational content and common parameter monomial
/// of its entries; a unit rescaling over the fraction field.
pub(crate) fn normalize(v: &mut [ParamPoly]) {
    let nonzero: Vec<&ParamPoly> = v.iter().filter(|e| !e.is_zero()).collect();
    if nonzero.is_empty() {
        return;
    }
    let mut mono = nonzero[0].monomial_content();
    for e in &nonzero[1..] {
        mono = mono.gcd(&e.monomial_content());
    }
    let content = crate::jetcalc::ring::common_content(nonzero.iter().copied());
    let divisor = ParamPoly::term(content, mono);
    for e in v.iter_mut() {
        if !e.is_zero() {
            *e = e.div_exact(&divisor).expect("content divides");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcalc::{int, rat};

    fn d() -> ParamPoly {
        ParamPoly::var("d")
    }

    #[test]
    fn identity_has_determinant_one() {
        assert_eq!(ParamMatrix::identity(5).determinant(), Some(ParamPoly::one()));
    }

    #[test]
    fn parametric_determinant_and_swaps() {
        // [[0, d], [2, 1]] has determinant -2d.
        let m = ParamMatrix::from_columns(2, &[vec![ParamPoly::zero(), ParamPoly::from_int(2)], vec![d(), ParamPoly::one()]]);
        assert_eq!(m.determinant(), Some(d().scale(&int(-2))));
        assert_eq!(m.substitute("d", &ParamPoly::zero()).rank(), 1);
    }

    #[test]
    fn rank_deficient_square_has_zero_determinant() {
        let m = ParamMatrix::from_rationals(3, 3, &[int(1), int(2), int(3), int(2), int(4), int(6), int(0), int(1), rat(1, 2)]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.determinant(), Some(ParamPoly::zero()));
    }

    #[test]
    fn vanishing_locus_splits_monomial_factor() {
        let p = &d().scale(&int(1280)) * &(&ParamPoly::var("lambda") + &ParamPoly::from_int(2));
        let locus = VanishingLocus::of_polynomial(&p, true);
        assert_eq!(locus.conditions, vec!["d = 0".to_string(), "lambda + 2 = 0".to_string()]);
        assert_eq!(VanishingLocus::of_polynomial(&d().scale(&int(1280)), true).to_string(), "d = 0");
    }

    #[test]
    fn echelon_tracks_span() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![d(), ParamPoly::one()]));
        assert!(!e.insert(vec![&d() * &d(), d()]));
        assert!(e.contains(&[d().scale(&int(3)), ParamPoly::from_int(3)]));
        assert!(e.insert(vec![ParamPoly::one(), ParamPoly::zero()]));
        assert_eq!(e.rank(), 2);
    }
}
