//! Floating point helpers: polynomial evaluation, truncated f64 series and
//! grid sampling of the critical value set.

use serde::Serialize;

use crate::jetcalc::{PlaneGermJet, TruncatedSeries, UniSeries};

use super::EnvelopeError;

/// A bivariate polynomial with f64 coefficients, stored densely by
/// `(x-degree, y-degree)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FloatPoly2 {
    terms: Vec<(u32, u32, f64)>,
}

impl FloatPoly2 {
    pub fn from_terms(terms: Vec<(u32, u32, f64)>) -> Self {
        let mut p = FloatPoly2 { terms: Vec::new() };
        for (i, j, c) in terms {
            p.add(i, j, c);
        }
        p
    }

    /// Converts a series, evaluating formal parameters with `params`.
    pub fn from_series(s: &TruncatedSeries, params: &dyn Fn(&str) -> Option<f64>) -> Result<Self, EnvelopeError> {
        let mut terms = Vec::new();
        for (m, c) in s.terms() {
            terms.push((m.x, m.y, c.eval_f64(params).ok_or(EnvelopeError::NonNumeric)?));
        }
        Ok(Self::from_terms(terms))
    }

    fn add(&mut self, i: u32, j: u32, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.iter_mut().find(|t| t.0 == i && t.1 == j) {
            Some(t) => t.2 += c,
            None => self.terms.push((i, j, c)),
        }
    }

    pub fn terms(&self) -> &[(u32, u32, f64)] {
        &self.terms
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32)).sum()
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|t| t.0 > 0).map(|&(i, j, c)| (i - 1, j, c * i as f64)).collect())
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|t| t.1 > 0).map(|&(i, j, c)| (i, j - 1, c * j as f64)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = FloatPoly2::default();
        for &(i, j, c) in &self.terms {
            for &(k, l, d) in &other.terms {
                out.add(i + k, j + l, c * d);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &(i, j, c) in &other.terms {
            out.add(i, j, -c);
        }
        out
    }

    /// Exact polynomial Jacobian determinant of the map `(a, b)`.
    pub fn jacobian(a: &Self, b: &Self) -> Self {
        a.dx().mul(&b.dy()).sub(&a.dy().mul(&b.dx()))
    }

    /// Evaluates along a curve given by f64 series, truncating at `order`.
    pub fn along(&self, x: &FloatSeries, y: &FloatSeries) -> FloatSeries {
        let order = x.order().min(y.order());
        let max_i = self.terms.iter().map(|t| t.0).max().unwrap_or(0);
        let max_j = self.terms.iter().map(|t| t.1).max().unwrap_or(0);
        let px = x.powers(max_i, order);
        let py = y.powers(max_j, order);
        let mut out = FloatSeries::zero(order);
        for &(i, j, c) in &self.terms {
            let t = px[i as usize].mul(&py[j as usize]);
            for (k, v) in t.coeffs.iter().enumerate() {
                out.coeffs[k] += c * v;
            }
        }
        out
    }

    /// `p(x0 + x, y0 + y)` expanded.
    pub fn shifted(&self, x0: f64, y0: f64) -> Self {
        let mut out = FloatPoly2::default();
        for &(i, j, c) in &self.terms {
            for a in 0..=i {
                let ca = binomial(i, a) * x0.powi((i - a) as i32);
                for b in 0..=j {
                    let cb = binomial(j, b) * y0.powi((j - b) as i32);
                    out.add(a, b, c * ca * cb);
                }
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A truncated univariate f64 series `c0 + c1 s + ... + cN s^N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatSeries {
    coeffs: Vec<f64>,
}

impl FloatSeries {
    pub fn zero(order: u32) -> Self {
        FloatSeries {
            coeffs: vec![0.0; order as usize + 1],
        }
    }

    pub fn from_coeffs(order: u32, c: &[f64]) -> Self {
        let mut s = Self::zero(order);
        for (k, v) in c.iter().enumerate().take(order as usize + 1) {
            s.coeffs[k] = *v;
        }
        s
    }

    pub fn var(order: u32) -> Self {
        Self::from_coeffs(order, &[0.0, 1.0])
    }

    pub fn from_exact(s: &UniSeries, params: &dyn Fn(&str) -> Option<f64>) -> Result<Self, EnvelopeError> {
        let c: Option<Vec<f64>> = s.coeffs().iter().map(|c| c.eval_f64(params)).collect();
        Ok(FloatSeries {
            coeffs: c.ok_or(EnvelopeError::NonNumeric)?,
        })
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn derivative(&self) -> Self {
        let order = self.order().saturating_sub(1);
        let mut out = Self::zero(order);
        for k in 1..self.coeffs.len() {
            out.coeffs[k - 1] = self.coeffs[k] * k as f64;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order()) as usize;
        let mut out = Self::zero(order as u32);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for k in 0..=order as usize {
            out.coeffs[k] = self.coeffs[k] + other.coeffs[k];
        }
        out
    }

    pub fn scale(&self, f: f64) -> Self {
        FloatSeries {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    fn powers(&self, top: u32, order: u32) -> Vec<FloatSeries> {
        let base = self.with_order(order);
        let mut v = vec![Self::from_coeffs(order, &[1.0])];
        for k in 1..=top as usize {
            let next = v[k - 1].mul(&base);
            v.push(next);
        }
        v
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self::from_coeffs(order, &self.coeffs)
    }

    /// `self(inner(s))` for `inner` with zero constant term.
    pub fn compose(&self, inner: &Self) -> Self {
        let order = self.order().min(inner.order());
        let inner = inner.with_order(order);
        let mut acc = Self::zero(order);
        for c in self.coeffs.iter().take(order as usize + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        acc
    }

    /// Compositional inverse of `c1 s + c2 s^2 + ...`, `c1 != 0`.
    pub fn reversion(&self) -> Option<Self> {
        let a1 = self.coeff(1);
        if a1 == 0.0 || self.coeff(0) != 0.0 {
            return None;
        }
        let order = self.order();
        let t = Self::var(order);
        let mut g = t.scale(1.0 / a1);
        for _ in 0..order {
            let fg = self.compose(&g);
            let r = fg.add(&t.scale(-1.0));
            g = g.add(&r.scale(-1.0 / a1));
        }
        Some(g)
    }

    /// `self(a + s)` re-expanded around `a`.
    pub fn recentred(&self, a: f64) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (k, c) in self.coeffs.iter().enumerate() {
            for j in 0..=k {
                out[j] += c * binomial(k as u32, j as u32) * a.powi((k - j) as i32);
            }
        }
        FloatSeries { coeffs: out }
    }
}

/// Rectangular sampling window `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn square(r: f64) -> Self {
        Window {
            x0: -r,
            x1: r,
            y0: -r,
            y1: r,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub source: [f64; 2],
    pub value: [f64; 2],
}

/// Critical values found on grid edges, in deterministic row order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalCloud {
    pub points: Vec<CriticalPoint>,
    /// Connected component index of each point.
    pub components: Vec<usize>,
    pub resolution: usize,
    pub window: Window,
}

struct Crossing {
    point: CriticalPoint,
    cells: [Option<(usize, usize)>; 2],
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Grid sampling of the critical value set of a polynomial map: sign
/// changes of the Jacobian on grid edges, linearly interpolated and mapped
/// through `f`.
pub fn numeric_envelope(
    f: &PlaneGermJet,
    params: &dyn Fn(&str) -> Option<f64>,
    window: Window,
    resolution: usize,
) -> Result<CriticalCloud, EnvelopeError> {
    sample(f, params, window, resolution, None)
}

/// As [`numeric_envelope`], but with the Jacobian factor that does not
/// vanish at the origin divided out, so that only the germ's critical
/// branches are sampled.
pub fn numeric_germ_envelope(
    f: &PlaneGermJet,
    params: &dyn Fn(&str) -> Option<f64>,
    window: Window,
    resolution: usize,
) -> Result<CriticalCloud, EnvelopeError> {
    let cofactor = match super::critical_set(f) {
        Ok(set) => set.cofactor.map(|c| FloatPoly2::from_series(&c, params)).transpose()?,
        Err(EnvelopeError::ZeroJacobian) => None,
        Err(e) => return Err(e),
    };
    sample(f, params, window, resolution, cofactor.as_ref())
}

fn sample(
    f: &PlaneGermJet,
    params: &dyn Fn(&str) -> Option<f64>,
    window: Window,
    resolution: usize,
    cofactor: Option<&FloatPoly2>,
) -> Result<CriticalCloud, EnvelopeError> {
    let a = FloatPoly2::from_series(f.component(0), params)?;
    let b = FloatPoly2::from_series(f.component(1), params)?;
    let full = FloatPoly2::jacobian(&a, &b);
    let jac = |x: f64, y: f64| match cofactor {
        // The cofactor's zeros are zeros of the Jacobian of the same
        // order, so the quotient stays finite and keeps its sign there.
        Some(c) => full.eval(x, y) / c.eval(x, y),
        None => full.eval(x, y),
    };
    let n = resolution.max(1);
    let hx = (window.x1 - window.x0) / n as f64;
    let hy = (window.y1 - window.y0) / n as f64;
    let node = |i: usize, j: usize| [window.x0 + j as f64 * hx, window.y0 + i as f64 * hy];
    let row_values = |i: usize| -> Vec<f64> {
        (0..=n)
            .map(|j| {
                let [x, y] = node(i, j);
                jac(x, y)
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    let values: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..=n).into_par_iter().map(row_values).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<Vec<f64>> = (0..=n).map(row_values).collect();

    let crossing = |p: [f64; 2], q: [f64; 2], jp: f64, jq: f64| -> Option<[f64; 2]> {
        if (jp >= 0.0) == (jq >= 0.0) {
            return None;
        }
        let t = jp / (jp - jq);
        Some([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])])
    };
    let row_crossings = |i: usize| -> Vec<Crossing> {
        let mut out = Vec::new();
        for j in 0..=n {
            if j < n {
                if let Some(s) = crossing(node(i, j), node(i, j + 1), values[i][j], values[i][j + 1]) {
                    out.push(Crossing {
                        point: CriticalPoint {
                            source: s,
                            value: [a.eval(s[0], s[1]), b.eval(s[0], s[1])],
                        },
                        cells: [(i > 0).then(|| (i - 1, j)), (i < n).then_some((i, j))],
                    });
                }
            }
            if i < n {
                if let Some(s) = crossing(node(i, j), node(i + 1, j), values[i][j], values[i + 1][j]) {
                    out.push(Crossing {
                        point: CriticalPoint {
                            source: s,
                            value: [a.eval(s[0], s[1]), b.eval(s[0], s[1])],
                        },
                        cells: [(j > 0).then(|| (i, j - 1)), (j < n).then_some((i, j))],
                    });
                }
            }
        }
        out
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<Crossing>> = {
        use rayon::prelude::*;
        (0..=n).into_par_iter().map(row_crossings).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<Crossing>> = (0..=n).map(row_crossings).collect();
    let crossings: Vec<Crossing> = rows.into_iter().flatten().collect();

    // Crossings sharing a grid cell belong to the same curve piece.
    let mut parent: Vec<usize> = (0..crossings.len()).collect();
    let mut owner: std::collections::HashMap<(usize, usize), usize> = std::collections::HashMap::new();
    for (k, c) in crossings.iter().enumerate() {
        for cell in c.cells.iter().flatten() {
            match owner.get(cell) {
                Some(&other) => {
                    let (ra, rb) = (find(&mut parent, k), find(&mut parent, other));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
                None => {
                    owner.insert(*cell, k);
                }
            }
        }
    }
    let mut labels = std::collections::HashMap::new();
    let mut components = Vec::with_capacity(crossings.len());
    for k in 0..crossings.len() {
        let root = find(&mut parent, k);
        let next = labels.len();
        components.push(*labels.entry(root).or_insert(next));
    }
    Ok(CriticalCloud {
        points: crossings.into_iter().map(|c| c.point).collect(),
        components,
        resolution: n,
        window,
    })
}

impl CriticalCloud {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the connected pieces that come within `radius` of the source
    /// origin: the germ part of the critical set.
    pub fn near_origin(&self, radius: f64) -> CriticalCloud {
        let keep: std::collections::BTreeSet<usize> = self
            .points
            .iter()
            .zip(&self.components)
            .filter(|(p, _)| p.source[0].hypot(p.source[1]) <= radius)
            .map(|(_, c)| *c)
            .collect();
        let (points, components) = self
            .points
            .iter()
            .zip(&self.components)
            .filter(|(_, c)| keep.contains(c))
            .map(|(p, c)| (*p, *c))
            .unzip();
        CriticalCloud {
            points,
            components,
            resolution: self.resolution,
            window: self.window,
        }
    }

    /// Critical values ordered into polylines: points of each component are
    /// chained by nearest neighbours in the source, starting from an end.
    pub fn polylines(&self) -> Vec<Vec<[f64; 2]>> {
        let step = 3.0 * (self.window.x1 - self.window.x0).max(self.window.y1 - self.window.y0) / self.resolution.max(1) as f64;
        let count = self.components.iter().copied().max().map_or(0, |m| m + 1);
        let dist = |a: &CriticalPoint, b: &CriticalPoint| (a.source[0] - b.source[0]).hypot(a.source[1] - b.source[1]);
        let mut out = Vec::new();
        for c in 0..count {
            let pts: Vec<&CriticalPoint> = self.points.iter().zip(&self.components).filter(|(_, k)| **k == c).map(|(p, _)| p).collect();
            let mut used = vec![false; pts.len()];
            let mut remaining = pts.len();
            while remaining > 0 {
                let first = used.iter().position(|u| !u).expect("points remain");
                // Start from the unused point farthest from an arbitrary one.
                let start = (0..pts.len())
                    .filter(|&k| !used[k])
                    .max_by(|&a, &b| dist(pts[first], pts[a]).total_cmp(&dist(pts[first], pts[b])))
                    .expect("points remain");
                let mut line = vec![pts[start].value];
                used[start] = true;
                remaining -= 1;
                let mut current = start;
                loop {
                    let next = (0..pts.len())
                        .filter(|&k| !used[k] && dist(pts[current], pts[k]) <= step)
                        .min_by(|&a, &b| dist(pts[current], pts[a]).total_cmp(&dist(pts[current], pts[b])));
                    let Some(n) = next else { break };
                    used[n] = true;
                    remaining -= 1;
                    line.push(pts[n].value);
                    current = n;
                }
                out.push(line);
            }
        }
        out
    }

    /// Critical values as CSV lines `x,y,X,Y`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,X,Y\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{}\n", p.source[0], p.source[1], p.value[0], p.value[1]));
        }
        out
    }
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

/// Largest distance from a point of `points` to the nearest polyline.
pub fn directed_distance(points: &[[f64; 2]], polylines: &[Vec<[f64; 2]>]) -> f64 {
    points
        .iter()
        .map(|p| {
            polylines
                .iter()
                .flat_map(|l| l.windows(2).map(move |w| segment_distance(*p, w[0], w[1])))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Samples a curve given by exact series on `[s0, s1]`.
pub fn sample_curve(
    x: &UniSeries,
    y: &UniSeries,
    params: &dyn Fn(&str) -> Option<f64>,
    s0: f64,
    s1: f64,
    samples: usize,
) -> Option<Vec<[f64; 2]>> {
    (0..=samples)
        .map(|k| {
            let s = s0 + (s1 - s0) * k as f64 / samples as f64;
            Some([x.eval_f64(s, params)?, y.eval_f64(s, params)?])
        })
        .collect()
}

/// Parameter lookup for a fixed assignment.
pub fn assignment<'a>(values: &'a [(&'a str, f64)]) -> impl Fn(&str) -> Option<f64> + 'a {
    move |name| values.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
}

/// Distance from `p` to the curve `s -> curve(s)`, `s ∈ [s0, s1]`: every
/// local minimum of a sampled search is refined by golden-section
/// minimisation.
pub fn distance_to_curve(p: [f64; 2], curve: &dyn Fn(f64) -> [f64; 2], s0: f64, s1: f64, samples: usize) -> f64 {
    let dist = |s: f64| {
        let q = curve(s);
        (q[0] - p[0]).hypot(q[1] - p[1])
    };
    let step = (s1 - s0) / samples as f64;
    let values: Vec<f64> = (0..=samples).map(|k| dist(s0 + k as f64 * step)).collect();
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = values.iter().copied().fold(f64::INFINITY, f64::min);
    for k in 0..=samples {
        let left = if k > 0 { values[k - 1] } else { f64::INFINITY };
        let right = if k < samples { values[k + 1] } else { f64::INFINITY };
        if values[k] > left || values[k] > right {
            continue;
        }
        let centre = s0 + k as f64 * step;
        let (mut lo, mut hi) = ((centre - step).max(s0), (centre + step).min(s1));
        for _ in 0..80 {
            let m1 = hi - ratio * (hi - lo);
            let m2 = lo + ratio * (hi - lo);
            if dist(m1) < dist(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        best = best.min(dist(0.5 * (lo + hi)));
    }
    best
}
