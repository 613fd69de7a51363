//! Local branches of a curve germ `G(x, y) = 0` through the origin, by the
//! implicit function theorem and a one-level Newton polygon.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::jetcalc::{
    substitute_curve, CurveJet, JetError, Monomial, ParamPoly, Rational, TruncatedSeries, UniSeries,
};

use super::{ResidualFactor, SourceBranch};

/// Largest integer whose divisors are enumerated when looking for rational
/// roots of an edge polynomial.
const DIVISOR_SEARCH_LIMIT: u64 = 1 << 40;

/// Solves `F(s, w(s)) = 0` for `w` with `w(0) = 0`, given `F(0, 0) = 0` and
/// `∂F/∂w(0, 0)` a nonzero rational. Variables are `x = s`, `y = w`.
pub(crate) fn implicit_solve(f: &TruncatedSeries, order: u32) -> Result<UniSeries, JetError> {
    let slope = f
        .coeff(0, 1)
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or(JetError::NotAUnit)?;
    let inv = slope.recip();
    let s = UniSeries::var(order);
    let mut w = UniSeries::zero(order);
    for _ in 0..=order {
        let r = substitute_curve(f, &s, &w)?;
        if r.is_zero() {
            break;
        }
        w = &w - &r.scale_rational(&inv);
    }
    Ok(w)
}

pub(crate) fn swap_variables(g: &TruncatedSeries) -> TruncatedSeries {
    TruncatedSeries::from_terms(g.order(), g.terms().map(|(m, c)| (Monomial::new(m.y, m.x), c.clone())))
}

fn unit(c: &ParamPoly) -> bool {
    c.as_constant().is_some_and(|r| !r.is_zero())
}

/// Branches of `g = 0` through the origin. `g` must vanish at the origin,
/// have no monomial factor, and be truncated to its exact part.
pub(crate) fn solve(g: &TruncatedSeries) -> (Vec<SourceBranch>, Vec<ResidualFactor>) {
    let exact = g.exact_to();
    if exact == 0 {
        return (Vec::new(), vec![ResidualFactor::new(g, "no exact terms beyond the constant")]);
    }
    let gy = g.coeff(0, 1);
    let gx = g.coeff(1, 0);
    if unit(&gy) {
        return match graph_branch(g, exact, false) {
            Ok(b) => (vec![b], Vec::new()),
            Err(e) => (Vec::new(), vec![ResidualFactor::new(g, &e.to_string())]),
        };
    }
    if unit(&gx) {
        return match graph_branch(&swap_variables(g), exact, true) {
            Ok(b) => (vec![b], Vec::new()),
            Err(e) => (Vec::new(), vec![ResidualFactor::new(g, &e.to_string())]),
        };
    }
    if !gx.is_zero() || !gy.is_zero() {
        return (
            Vec::new(),
            vec![ResidualFactor::new(g, "linear coefficients are not units of the coefficient ring")],
        );
    }
    newton_polygon(g)
}

fn graph_branch(g: &TruncatedSeries, exact: u32, swapped: bool) -> Result<SourceBranch, JetError> {
    let h = implicit_solve(g, exact)?;
    let s = UniSeries::var(exact);
    let (label, curve) = if swapped {
        (format!("x = {}", h.fmt_in("y")), CurveJet::new(h, s))
    } else {
        (format!("y = {}", h.fmt_in("x")), CurveJet::new(s, h))
    };
    Ok(SourceBranch {
        label,
        parameter: if swapped { "y" } else { "x" }.to_string(),
        parameterization: curve,
        multiplicity: 1,
    })
}

/// Vertices of the lower convex hull from the `y`-axis to the `x`-axis.
fn lower_hull(points: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let start = points.iter().filter(|p| p.0 == 0).min_by_key(|p| p.1).copied();
    let Some(mut v) = start else {
        return Vec::new();
    };
    let mut hull = vec![v];
    while v.1 > 0 {
        // Steepest descent, furthest point on ties.
        let next = points
            .iter()
            .filter(|p| p.0 > v.0 && p.1 < v.1)
            .min_by(|a, b| {
                let (da, db) = ((a.0 - v.0) as i64, (b.0 - v.0) as i64);
                let (ha, hb) = ((v.1 - a.1) as i64, (v.1 - b.1) as i64);
                // slope_a = -ha/da; smaller slope first
                (hb * da).cmp(&(ha * db)).then(b.0.cmp(&a.0))
            })
            .copied();
        match next {
            Some(n) => {
                hull.push(n);
                v = n;
            }
            None => break,
        }
    }
    hull
}

fn newton_polygon(g: &TruncatedSeries) -> (Vec<SourceBranch>, Vec<ResidualFactor>) {
    let exact = g.exact_to();
    let points: Vec<(u32, u32)> = g.terms().map(|(m, _)| (m.x, m.y)).collect();
    let hull = lower_hull(&points);
    let mut branches = Vec::new();
    let mut residual = Vec::new();
    if hull.last().map_or(true, |v| v.1 != 0) {
        residual.push(ResidualFactor::new(g, "Newton polygon does not reach the x-axis at working order"));
        return (branches, residual);
    }
    for pair in hull.windows(2) {
        let ((i1, j1), (i2, j2)) = (pair[0], pair[1]);
        let (di, dj) = (i2 - i1, j1 - j2);
        let gcd = di.gcd(&dj);
        let (p, q) = (di / gcd, dj / gcd);
        let m = q * i1 + p * j1;
        let edge = format!("edge y ~ x^({p}/{q})");
        // Lattice points (i2 - p*k, j2 + q*k) of the edge give the edge
        // polynomial P(u) = sum coeff_k u^k in u = y^q / x^p; it has degree
        // `gcd`, one root per branch.
        let mut coeffs = vec![Rational::zero(); (gcd + 1) as usize];
        let mut numeric = true;
        for (mono, c) in g.terms() {
            if q * mono.x + p * mono.y == m {
                match c.as_constant() {
                    Some(r) => coeffs[((mono.y - j2) / q) as usize] = r,
                    None => numeric = false,
                }
            }
        }
        if !numeric {
            residual.push(ResidualFactor::new(g, &format!("{edge}: symbolic edge coefficients")));
            continue;
        }
        let roots: Vec<Rational> = rational_roots(&coeffs)
            .into_iter()
            .filter(|u| !is_multiple_root(&coeffs, u))
            .collect();
        if roots.len() < gcd as usize {
            residual.push(ResidualFactor::new(
                g,
                &format!("{edge}: {} of {gcd} branches are complex, irrational or repeated", gcd as usize - roots.len()),
            ));
        }
        let precision = (p.min(q) * (exact + 1)).checked_sub(m + 1).unwrap_or(0);
        if precision == 0 {
            if !roots.is_empty() {
                residual.push(ResidualFactor::new(g, &format!("{edge}: no precision left at working order")));
            }
            continue;
        }
        for u in roots {
            match puiseux_branch(g, p, q, m, &u, precision) {
                Ok(b) => branches.push(b),
                Err(e) => residual.push(ResidualFactor::new(g, &format!("{edge}: {e}"))),
            }
        }
    }
    (branches, residual)
}

fn powi(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Real rational `n`-th root, if there is one.
fn rational_root(r: &Rational, n: u32) -> Option<Rational> {
    if r.is_negative() && n % 2 == 0 {
        return None;
    }
    let root = |v: &BigInt| {
        let c = v.abs().nth_root(n);
        (num_traits::pow(c.clone(), n as usize) == v.abs()).then_some(c)
    };
    let value = Rational::new(root(r.numer())?, root(r.denom())?);
    Some(if r.is_negative() { -value } else { value })
}

/// Branch `x = a s^q, y = s^p (b + w(s))` for a simple nonzero root `u` of
/// the edge polynomial, with `b^q / a^p = u`: `a = 1` when `u` has a rational
/// `q`-th root, otherwise `a = u^beta`, `b = u^alpha` with
/// `alpha q - beta p = 1`, rational because `p` and `q` are coprime.
fn puiseux_branch(g: &TruncatedSeries, p: u32, q: u32, m: u32, u: &Rational, precision: u32) -> Result<SourceBranch, JetError> {
    let (a, b) = match rational_root(u, q) {
        Some(b) => (Rational::one(), b),
        None => {
            let alpha = (0..p).find(|k| (k * q) % p == 1 % p).expect("p and q are coprime");
            let beta = (i64::from(alpha) * i64::from(q) - 1) / i64::from(p);
            (powi(u, beta), powi(u, i64::from(alpha)))
        }
    };
    let work = m + 2 * precision + p + q + 2;
    let gw = g.with_order(work);
    let inner_x = TruncatedSeries::monomial(work, Monomial::new(q, 0), ParamPoly::constant(a.clone()));
    let inner_y = &TruncatedSeries::monomial(work, Monomial::new(p, 0), ParamPoly::constant(b.clone()))
        + &TruncatedSeries::monomial(work, Monomial::new(p, 1), ParamPoly::one());
    let sub = gw.compose(&inner_x, &inner_y)?;
    let reduced = sub
        .div_monomial(Monomial::new(m, 0))
        .expect("every term lies on or above the edge");
    let w = implicit_solve(&reduced, precision)?;
    let order = precision + p;
    let x = UniSeries::monomial(order, q, ParamPoly::constant(a));
    let y = (&UniSeries::constant(precision, ParamPoly::constant(b)) + &w)
        .with_order(order)
        .shift_up(p);
    Ok(SourceBranch {
        label: format!("x = {}, y = {}", x.fmt_in("s"), y.fmt_in("s")),
        parameter: "s".to_string(),
        parameterization: CurveJet::new(x, y),
        multiplicity: 1,
    })
}

fn eval(coeffs: &[Rational], c: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, a| acc * c + a)
}

fn is_multiple_root(coeffs: &[Rational], c: &Rational) -> bool {
    let deriv: Vec<Rational> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a * Rational::from_integer(BigInt::from(k)))
        .collect();
    eval(&deriv, c).is_zero()
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    Some(out)
}

/// Distinct nonzero rational roots, ascending.
pub(crate) fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let Some(low) = ints.iter().find(|c| !c.is_zero()) else {
        return Vec::new();
    };
    let Some(high) = ints.iter().rev().find(|c| !c.is_zero()) else {
        return Vec::new();
    };
    let (Some(num), Some(den)) = (divisors(low), divisors(high)) else {
        return Vec::new();
    };
    let mut roots = Vec::new();
    for a in &num {
        for b in &den {
            for sign in [-1i64, 1] {
                let c = Rational::new(BigInt::from(*a) * sign, BigInt::from(*b));
                if !roots.contains(&c) && eval(coeffs, &c).is_zero() {
                    roots.push(c);
                }
            }
        }
    }
    roots.sort();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcalc::{int, rat};

    #[test]
    fn finds_rational_roots() {
        // (2c - 1)(c + 3) = 2c^2 + 5c - 3
        let roots = rational_roots(&[int(-3), int(5), int(2)]);
        assert_eq!(roots, vec![int(-3), rat(1, 2)]);
        assert!(rational_roots(&[int(-2), int(0), int(1)]).is_empty());
    }

    #[test]
    fn hull_of_cusp() {
        assert_eq!(lower_hull(&[(0, 2), (3, 0), (2, 2)]), vec![(0, 2), (3, 0)]);
        assert_eq!(lower_hull(&[(0, 3), (1, 1), (4, 0), (2, 1)]), vec![(0, 3), (1, 1), (4, 0)]);
    }

    #[test]
    fn semicubic_puiseux_branch() {
        // y^2 - x^3 = 0 has the single branch (s^2, s^3).
        let g = TruncatedSeries::from_ints(6, &[(0, 2, 1), (3, 0, -1)]);
        let (b, r) = solve(&g);
        assert!(r.is_empty(), "{r:?}");
        assert_eq!(b.len(), 1);
        let curve = &b[0].parameterization;
        assert_eq!(curve.component(0).coeff(2), ParamPoly::one());
        assert_eq!(curve.component(1).coeff(3), ParamPoly::one());
        assert!(substitute_curve(&g, curve.component(0), curve.component(1)).unwrap().is_zero());
    }

    #[test]
    fn node_splits_into_two_branches() {
        // y^2 - x^2 + x^3
        let g = TruncatedSeries::from_ints(6, &[(0, 2, 1), (2, 0, -1), (3, 0, 1)]);
        let (b, r) = solve(&g);
        assert!(r.is_empty());
        assert_eq!(b.len(), 2);
        for br in &b {
            let c = &br.parameterization;
            let v = substitute_curve(&g, c.component(0), c.component(1)).unwrap();
            assert!(v.valuation().map_or(true, |k| k > c.order()), "{v}");
        }
    }

    #[test]
    fn irrational_tangents_go_to_residual() {
        let g = TruncatedSeries::from_ints(6, &[(0, 2, 1), (2, 0, -2)]);
        let (b, r) = solve(&g);
        assert!(b.is_empty());
        assert_eq!(r.len(), 1);
    }
}
