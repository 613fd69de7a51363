//! Reduction of 1-flat families to `ψ_δ = (x² + y² + δy³, y² + x³)`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{build_family, genericity, require_numeric, CtfData, CtfError, Flatness};
use crate::jetcalc::series::rational_sqrt;
use crate::jetcalc::{
    CoordChangeJet, Monomial, ParamPoly, PlaneGermJet, Rational, TruncatedSeries,
};

const JET: u32 = 3;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalFormReduction {
    /// Nonnegative modulus representative.
    #[serde(serialize_with = "crate::jetcalc::ser::rational")]
    pub delta: Rational,
    /// `h` with `k ∘ f ∘ h⁻¹ = ψ_δ` through degree 3.
    #[serde(serialize_with = "ser_change")]
    pub source_change: CoordChangeJet,
    #[serde(serialize_with = "ser_change")]
    pub target_change: CoordChangeJet,
    /// Whether `y -> -y` was applied to make `δ` nonnegative.
    pub sign_flipped: bool,
}

fn ser_change<S: serde::Serializer>(c: &CoordChangeJet, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(c.as_jet())
}

/// `ψ_δ` as a jet of the given order.
pub fn psi(order: u32, delta: ParamPoly) -> PlaneGermJet {
    let first = &TruncatedSeries::from_ints(order, &[(2, 0, 1), (0, 2, 1)])
        + &TruncatedSeries::monomial(order, Monomial::new(0, 3), delta);
    PlaneGermJet::new(first, TruncatedSeries::from_ints(order, &[(0, 2, 1), (3, 0, 1)])).expect("valid germ")
}

type Quad = [Rational; 3];

fn quad(s: &TruncatedSeries) -> Quad {
    let c = |i, j| s.coeff(i, j).as_constant().expect("numeric");
    [c(2, 0), c(1, 1), c(0, 2)]
}

fn combine(row: &[Rational; 2], q1: &Quad, q2: &Quad) -> Quad {
    std::array::from_fn(|k| &row[0] * &q1[k] + &row[1] * &q2[k])
}

/// Writes a degenerate nonzero quadratic form as `k ℓ²`.
fn square_root_form(q: &Quad) -> Option<(Rational, [Rational; 2])> {
    let [a, b, c] = q;
    if !a.is_zero() {
        let two = Rational::from_integer(2.into());
        Some((a.clone(), [Rational::from_integer(1.into()), b / (a * two)]))
    } else if !c.is_zero() {
        Some((c.clone(), [Rational::zero(), Rational::from_integer(1.into())]))
    } else {
        None
    }
}

/// Target rows selecting the two degenerate members of the pencil of
/// quadratic parts, first for `u²` then for `v²`.
fn degenerate_members(q1: &Quad, q2: &Quad) -> Result<[[Rational; 2]; 2], CtfError> {
    let four = Rational::from_integer(4.into());
    let two = Rational::from_integer(2.into());
    let [a1, b1, c1] = q1;
    let [a2, b2, c2] = q2;
    let qa = b2 * b2 - &four * a2 * c2;
    let qb = &two * b1 * b2 - &four * (a1 * c2 + a2 * c1);
    let qc = b1 * b1 - &four * a1 * c1;
    let one = Rational::from_integer(1.into());
    if qa.is_zero() {
        if qb.is_zero() {
            return Err(CtfError::Degenerate("quadratic parts do not span a generic pencil".into()));
        }
        let s = -(qc / qb);
        return Ok([[one.clone(), s], [Rational::zero(), one]]);
    }
    let disc = &qb * &qb - &four * &qa * &qc;
    if !disc.is_positive() {
        return Err(CtfError::Degenerate("pencil of quadratic parts has no two real degenerate members".into()));
    }
    let root = rational_sqrt(&disc).ok_or_else(|| CtfError::NonRationalSplitting(format!("discriminant {disc}")))?;
    let mut s = [(-&qb - &root) / (&two * &qa), (-&qb + &root) / (&two * &qa)];
    s.sort();
    Ok([[one.clone(), s[0].clone()], [one, s[1].clone()]])
}

fn linear_jet(m: [[Rational; 2]; 2]) -> PlaneGermJet {
    PlaneGermJet::linear(JET, &m)
}

fn inverse2(m: &[[Rational; 2]; 2]) -> Option<[[Rational; 2]; 2]> {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if det.is_zero() {
        return None;
    }
    Some([
        [&m[1][1] / &det, -(&m[0][1] / &det)],
        [-(&m[1][0] / &det), &m[0][0] / &det],
    ])
}

fn matmul(a: &[[Rational; 2]; 2], b: &[[Rational; 2]; 2]) -> [[Rational; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j]))
}

fn apply_target(m: &[[Rational; 2]; 2], f: &PlaneGermJet) -> PlaneGermJet {
    let rows = m.clone().map(|r| r.map(ParamPoly::constant));
    f.apply_linear(&rows)
}

/// Reduces a plane germ with zero linear part and generic quadratic part to
/// `ψ_δ` through degree 3. Coefficients must be numeric.
pub fn reduce_plane_germ(f: &PlaneGermJet) -> Result<NormalFormReduction, CtfError> {
    if f.components().iter().any(|c| !c.is_numeric()) {
        return Err(CtfError::NonNumeric);
    }
    let f = f.with_order(JET);
    if f.linear_part().iter().flatten().any(|c| !c.is_zero()) {
        return Err(CtfError::Degenerate("linear part is not zero".into()));
    }
    let q1 = quad(f.component(0));
    let q2 = quad(f.component(1));
    let rows = degenerate_members(&q1, &q2)?;
    match attempt(&f, &q1, &q2, [rows[0].clone(), rows[1].clone()]) {
        Err(CtfError::Degenerate(msg)) if msg == "swap" => attempt(&f, &q1, &q2, [rows[1].clone(), rows[0].clone()]),
        other => other,
    }
}

fn attempt(f: &PlaneGermJet, q1: &Quad, q2: &Quad, rows: [[Rational; 2]; 2]) -> Result<NormalFormReduction, CtfError> {
    let mut target = rows.clone();
    let mut source = [[Rational::zero(), Rational::zero()], [Rational::zero(), Rational::zero()]];
    for (k, row) in rows.iter().enumerate() {
        let member = combine(row, q1, q2);
        let (scale, form) = square_root_form(&member).ok_or_else(|| CtfError::Degenerate("zero member in pencil".into()))?;
        target[k] = row.clone().map(|r| r / &scale);
        source[k] = form;
    }
    let source_inv = inverse2(&source).ok_or_else(|| CtfError::Degenerate("degenerate members share a line".into()))?;
    let g = apply_target(&target, &f.compose(&linear_jet(source_inv.clone()))?);
    let expect2 = PlaneGermJet::from_ints(JET, &[(2, 0, 1)], &[(0, 2, 1)]);
    if !g.truncate(2).eq_through(&expect2, 2) {
        return Err(CtfError::PipelineMismatch(format!("quadratic part {g} is not (u^2, v^2)")));
    }
    let cubic = |s: &TruncatedSeries| s.homogeneous(3);
    let g1 = cubic(g.component(0));
    let g2 = cubic(g.component(1));
    let c = g1.coeff(0, 3).as_constant().expect("numeric");
    let e = g2.coeff(3, 0).as_constant().expect("numeric");
    if e.is_zero() {
        return Err(CtfError::Degenerate(if c.is_zero() { "both cubic moduli vanish".into() } else { "swap".into() }));
    }
    // Kill u-divisible cubics in the first component, v-divisible ones in
    // the second, via u -> u - P/2, v -> v - R/2.
    let half = ParamPoly::constant(Rational::new(1.into(), 2.into()));
    let p = TruncatedSeries::from_terms(JET, g1.terms().filter(|(m, _)| m.x > 0).map(|(m, c)| (*m, c.clone())))
        .div_monomial(Monomial::new(1, 0))
        .expect("filtered");
    let r = TruncatedSeries::from_terms(JET, g2.terms().filter(|(m, _)| m.y > 0).map(|(m, c)| (*m, c.clone())))
        .div_monomial(Monomial::new(0, 1))
        .expect("filtered");
    let quadratic = PlaneGermJet::new(
        &TruncatedSeries::x(JET) - &p.scale(&half),
        &TruncatedSeries::y(JET) - &r.scale(&half),
    )?;
    let a = e.recip();
    let mut delta = &c / &e;
    let flipped = delta.is_negative();
    let mut last = [[a.clone(), Rational::zero()], [Rational::zero(), a.clone()]];
    if flipped {
        last[1][1] = -a.clone();
        delta = -delta;
    }
    // The final shear X -> X + Y adds u³ to the first component; u -> u - u²/2
    // removes it again.
    let unshear = PlaneGermJet::new(
        &TruncatedSeries::x(JET) - &TruncatedSeries::monomial(JET, Monomial::new(2, 0), half.clone()),
        TruncatedSeries::y(JET),
    )?;
    let inner = linear_jet(source_inv).compose(&quadratic.compose(&linear_jet(last).compose(&unshear)?)?)?;
    let e2 = &e * &e;
    let shear = [[e2.clone(), e2.clone()], [Rational::zero(), e2]];
    let k_matrix = matmul(&shear, &target);
    let target_change = CoordChangeJet::new(linear_jet(k_matrix.clone()), true)?;
    let source_change = CoordChangeJet::new(inner.clone(), true)?.invert()?;
    let check = apply_target(&k_matrix, &f.compose(&source_change.invert()?.into_jet())?);
    let model = psi(JET, ParamPoly::constant(delta.clone()));
    if !check.eq_through(&model, JET) {
        return Err(CtfError::PipelineMismatch(format!("{check} differs from {model}")));
    }
    Ok(NormalFormReduction {
        delta,
        source_change,
        target_change,
        sign_flipped: flipped,
    })
}

/// Normal form of a generic 1-flat family.
pub fn reduce_to_normal_form(data: &CtfData) -> Result<NormalFormReduction, CtfError> {
    require_numeric(data)?;
    let report = genericity(data);
    match report.flatness {
        Flatness::Exact(1) => {}
        Flatness::Exact(0) => return Err(CtfError::NotFlat),
        Flatness::Exact(found) => return Err(CtfError::WrongFlatness { expected: 1, found }),
        Flatness::AtLeast(n) => return Err(CtfError::FlatnessUndetermined { at_least: n }),
    }
    if !report.star_generic {
        return Err(CtfError::NotStarGeneric("B0 (A0 D0 - B0 C0) = 0".into()));
    }
    reduce_plane_germ(&build_family(data))
}
