//! Floating-point local analysis of parameterised plane curves and of
//! critical branches traced away from the origin.

use serde::Serialize;

use crate::envelope::numeric::{FloatPoly2, FloatSeries};

/// A double point `γ(s1) = γ(s2)` with `s1 < s2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DoublePoint {
    pub parameters: [f64; 2],
    pub point: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CuspPoint {
    pub parameter: f64,
    pub point: [f64; 2],
    pub semicubic: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveFeatures {
    pub cusps: Vec<CuspPoint>,
    pub double_points: Vec<DoublePoint>,
}

/// Divided difference `(c(s1) − c(s2)) / (s1 − s2)` in `σ = s1 + s2`,
/// `π = s1 s2`, with its partial derivatives.
fn divided(c: &FloatSeries, sigma: f64, pi: f64) -> [f64; 3] {
    let (mut h0, mut h1) = (0.0, 1.0);
    let (mut s0, mut s1) = (0.0, 0.0);
    let (mut p0, mut p1) = (0.0, 0.0);
    let mut acc = [c.coeff(1), 0.0, 0.0];
    for k in 2..=c.order() as usize {
        let h2 = sigma * h1 - pi * h0;
        let s2 = h1 + sigma * s1 - pi * s0;
        let p2 = sigma * p1 - h0 - pi * p0;
        let ck = c.coeff(k);
        acc[0] += ck * h2;
        acc[1] += ck * s2;
        acc[2] += ck * p2;
        (h0, h1, s0, s1, p0, p1) = (h1, h2, s1, s2, p1, p2);
    }
    acc
}

fn newton_pair(x: &FloatSeries, y: &FloatSeries, mut sigma: f64, mut pi: f64, window: f64) -> Option<(f64, f64)> {
    for _ in 0..100 {
        let [fx, fxs, fxp] = divided(x, sigma, pi);
        let [fy, fys, fyp] = divided(y, sigma, pi);
        let det = fxs * fyp - fxp * fys;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let ds = (fx * fyp - fxp * fy) / det;
        let dp = (fxs * fy - fx * fys) / det;
        sigma -= ds;
        pi -= dp;
        if !sigma.is_finite() || sigma.abs() > 4.0 * window || pi.abs() > 4.0 * window * window {
            return None;
        }
        if ds.abs() + dp.abs() <= 1e-15 * (sigma.abs() + pi.abs()) {
            break;
        }
    }
    let scale = (1..=x.order() as usize).map(|k| x.coeff(k).abs().max(y.coeff(k).abs())).fold(0.0, f64::max);
    let res = divided(x, sigma, pi)[0].abs() + divided(y, sigma, pi)[0].abs();
    (res <= 1e-10 * scale.max(f64::MIN_POSITIVE)).then_some((sigma, pi))
}

/// Derivative vectors `γ^(k)(s)/k!` for `k = 0..=3`.
fn taylor(x: &FloatSeries, y: &FloatSeries, s: f64) -> [[f64; 2]; 4] {
    let (rx, ry) = (x.recentred(s), y.recentred(s));
    std::array::from_fn(|k| [rx.coeff(k), ry.coeff(k)])
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Cusps and double points of `s -> (x(s), y(s))` for `|s| <= window`,
/// found as solutions of the divided-difference system in `(σ, π)`:
/// a cusp is a solution with `σ² = 4π`.
pub fn curve_features(x: &FloatSeries, y: &FloatSeries, window: f64) -> CurveFeatures {
    let sig = [0.0, 0.02, -0.02, 0.1, -0.1, 0.3, -0.3, 0.6, -0.6, 1.0, -1.0];
    let pis = [0.0, 4e-4, -4e-4, 0.01, -0.01, 0.05, -0.05, 0.2, -0.2];
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for s in sig {
        for p in pis {
            let Some((sigma, pi)) = newton_pair(x, y, s * 2.0 * window, p * 4.0 * window * window, window) else {
                continue;
            };
            let close = |r: &(f64, f64)| (r.0 - sigma).abs() + (r.1 - pi).abs() <= 1e-14 + 1e-9 * (sigma.abs() + pi.abs());
            if !roots.iter().any(close) {
                roots.push((sigma, pi));
            }
        }
    }
    let mut out = CurveFeatures::default();
    for (sigma, pi) in roots {
        let disc = sigma * sigma - 4.0 * pi;
        let size = sigma * sigma + 4.0 * pi.abs();
        if disc > 1e-7 * size {
            let r = disc.sqrt();
            let (s1, s2) = ((sigma - r) / 2.0, (sigma + r) / 2.0);
            if s1.abs() <= window && s2.abs() <= window {
                out.double_points.push(DoublePoint {
                    parameters: [s1, s2],
                    point: [x.eval(s1), y.eval(s1)],
                });
            }
        } else if disc >= -1e-7 * size {
            let s = sigma / 2.0;
            if s.abs() <= window {
                let [p, _, a2, a3] = taylor(x, y, s);
                let semicubic = cross(a2, a3).abs() > 1e-6 * norm(a2) * norm(a3) && norm(a2) > 0.0;
                out.cusps.push(CuspPoint {
                    parameter: s,
                    point: p,
                    semicubic,
                });
            }
        }
    }
    out.cusps.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
    out.double_points.sort_by(|a, b| a.parameters[0].total_cmp(&b.parameters[0]));
    out
}

/// Rough radius of convergence from the tail coefficients; infinite for
/// polynomials.
pub fn convergence_radius(series: &[&FloatSeries]) -> f64 {
    let mut radius = f64::INFINITY;
    for s in series {
        let n = s.order() as usize;
        let head = (1..=n / 2).map(|k| s.coeff(k).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for k in (n / 2).max(2)..=n {
            let c = s.coeff(k).abs() / head;
            if c > 0.0 {
                radius = radius.min(c.powf(-1.0 / k as f64));
            }
        }
    }
    radius
}

/// A zero of `g` near `seed` by Gauss-Newton steps along the gradient.
pub fn nearby_zero(g: &FloatPoly2, seed: [f64; 2]) -> Option<[f64; 2]> {
    let (gx, gy) = (g.dx(), g.dy());
    let mut p = seed;
    for _ in 0..60 {
        let v = g.eval(p[0], p[1]);
        let grad = [gx.eval(p[0], p[1]), gy.eval(p[0], p[1])];
        let n2 = grad[0] * grad[0] + grad[1] * grad[1];
        if n2 == 0.0 {
            return None;
        }
        let step = [v * grad[0] / n2, v * grad[1] / n2];
        p = [p[0] - step[0], p[1] - step[1]];
        if !p[0].is_finite() || norm(step) <= 1e-15 * (1.0 + norm(p)) {
            break;
        }
    }
    let scale = g.terms().iter().map(|t| t.2.abs()).fold(0.0, f64::max);
    (g.eval(p[0], p[1]).abs() <= 1e-12 * scale).then_some(p)
}

/// Local solution of `g = 0` through `base`, parameterised by whichever
/// source coordinate the implicit function theorem allows.
pub struct LocalBranch {
    pub base: [f64; 2],
    /// `true` when parameterised by `y` (so `x = x(s)`).
    pub by_y: bool,
    pub source: [FloatSeries; 2],
}

pub fn trace_local(g: &FloatPoly2, base: [f64; 2], order: u32) -> Option<LocalBranch> {
    let shifted = g.shifted(base[0], base[1]);
    let gx = shifted.dx().eval(0.0, 0.0);
    let gy = shifted.dy().eval(0.0, 0.0);
    let by_y = gx.abs() >= gy.abs();
    let pivot = if by_y { gx } else { gy };
    if pivot == 0.0 {
        return None;
    }
    let s = FloatSeries::var(order);
    let mut h = FloatSeries::zero(order);
    for _ in 0..=order {
        let r = if by_y { shifted.along(&h, &s) } else { shifted.along(&s, &h) };
        h = h.add(&r.scale(-1.0 / pivot));
    }
    let constant = |c: f64| FloatSeries::from_coeffs(order, &[c]);
    let source = if by_y {
        [h.add(&constant(base[0])), s.add(&constant(base[1]))]
    } else {
        [s.add(&constant(base[0])), h.add(&constant(base[1]))]
    };
    Some(LocalBranch { base, by_y, source })
}

impl LocalBranch {
    /// Whether `p` lies on this branch within `window` of the base point.
    pub fn contains(&self, p: [f64; 2], window: f64) -> bool {
        let (k, other) = if self.by_y { (1, 0) } else { (0, 1) };
        let s = p[k] - self.base[k];
        s.abs() <= window && (self.source[other].eval(s) - p[other]).abs() <= 1e-7
    }
}

/// Solves `a(s) = b(t)` for two source curves by Newton from `(0, 0)`.
pub fn curve_intersection(a: &[FloatSeries; 2], b: &[FloatSeries; 2], window: f64) -> Option<(f64, f64)> {
    let (da, db) = ([a[0].derivative(), a[1].derivative()], [b[0].derivative(), b[1].derivative()]);
    let (mut s, mut t) = (0.0, 0.0);
    for _ in 0..80 {
        let f = [a[0].eval(s) - b[0].eval(t), a[1].eval(s) - b[1].eval(t)];
        let m = [[da[0].eval(s), -db[0].eval(t)], [da[1].eval(s), -db[1].eval(t)]];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let ds = (f[0] * m[1][1] - m[0][1] * f[1]) / det;
        let dt = (m[0][0] * f[1] - f[0] * m[1][0]) / det;
        s -= ds;
        t -= dt;
        if s.abs() > window || t.abs() > window {
            return None;
        }
        if ds.abs() + dt.abs() <= 1e-15 * (1.0 + s.abs() + t.abs()) {
            break;
        }
    }
    let f = [a[0].eval(s) - b[0].eval(t), a[1].eval(s) - b[1].eval(t)];
    (norm(f) <= 1e-11).then_some((s, t))
}

/// Contact order of two image curves at `a(s) = b(t)`: the order of
/// vanishing of the singular-side curve in an implicit equation of the
/// regular one, minus its multiplicity. `None` when both are singular.
pub fn contact_order(a: &[FloatSeries; 2], s: f64, b: &[FloatSeries; 2], t: f64, scale: f64) -> Option<u32> {
    let ra = [a[0].recentred(s), a[1].recentred(s)];
    let rb = [b[0].recentred(t), b[1].recentred(t)];
    let speed = |c: &[FloatSeries; 2]| norm([c[0].coeff(1), c[1].coeff(1)]);
    let size = |c: &[FloatSeries; 2]| (1..=c[0].order() as usize).map(|k| norm([c[0].coeff(k), c[1].coeff(k)]) * scale.powi(k as i32)).fold(0.0, f64::max);
    let (reg, other) = if speed(&ra) * size(&rb) >= speed(&rb) * size(&ra) { (ra, rb) } else { (rb, ra) };
    if speed(&reg) * scale <= 1e-9 * size(&reg) {
        return None;
    }
    let (u, w) = if reg[0].coeff(1).abs() >= reg[1].coeff(1).abs() { (0, 1) } else { (1, 0) };
    let strip = |c: &FloatSeries| {
        let mut v = c.coeffs().to_vec();
        v[0] = 0.0;
        FloatSeries::from_coeffs(c.order(), &v)
    };
    let inverse = strip(&reg[u]).reversion()?;
    let graph = strip(&reg[w]).compose(&inverse);
    let q = [strip(&other[0]), strip(&other[1])];
    let d = q[w].add(&graph.compose(&q[u]).scale(-1.0));
    let tol = 1e-8 * size(&other).max(f64::MIN_POSITIVE);
    let first = |c: &dyn Fn(usize) -> f64| (1..=d.order() as usize).find(|&k| c(k).abs() * scale.powi(k as i32) > tol);
    let valuation = first(&|k| d.coeff(k))?;
    let multiplicity = first(&|k| norm([q[0].coeff(k), q[1].coeff(k)]))?;
    Some(valuation.checked_sub(multiplicity)? as u32)
}
