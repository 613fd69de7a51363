//! Generators of tangent spaces to A-orbits, truncated to finite degree.

use std::fmt;

use serde::{Serialize, Serializer};

use super::OrbitError;
use crate::jetcalc::{GermVar, Monomial, ParamPoly, PlaneGermJet, TruncatedSeries};

/// Which module to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GeneratorKind {
    /// `M⟨f_x, f_y⟩ + f*(M) E²`.
    Ta,
    /// `E⟨f_x, f_y⟩ + f*(E) E²`.
    TeA,
    /// `E⟨f_x, f_y⟩ + I_f E²`, the left side of the jet-level inclusion used
    /// by the determinacy certificate.
    DuPlessisLhs,
    /// Tangent space of the unipotent subgroup: `M²⟨f_x, f_y⟩ + f*(M²) E²`.
    Unipotent,
}

/// Provenance of a generator vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorLabel {
    /// `m · f_x` or `m · f_y`.
    Partial { multiplier: Monomial, var: GermVar },
    /// `f1^a f2^b` placed in one component.
    Pullback { powers: (u32, u32), slot: usize },
    /// `m · f_i` placed in one component.
    ComponentProduct { multiplier: Monomial, factor: usize, slot: usize },
    /// An externally supplied direction.
    Direction(usize),
}

fn slot_vector(slot: usize, body: &str) -> String {
    if slot == 0 {
        format!("({body}, 0)")
    } else {
        format!("(0, {body})")
    }
}

fn with_multiplier(m: &Monomial, body: &str) -> String {
    if *m == Monomial::ONE {
        body.to_string()
    } else {
        format!("{m}*{body}")
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::Partial { multiplier, var } => {
                let v = if *var == GermVar::X { "f_x" } else { "f_y" };
                write!(f, "{}", with_multiplier(multiplier, v))
            }
            GeneratorLabel::Pullback { powers: (a, b), slot } => {
                let mut parts = Vec::new();
                for (name, e) in [("f1", a), ("f2", b)] {
                    match e {
                        0 => {}
                        1 => parts.push(name.to_string()),
                        _ => parts.push(format!("{name}^{e}")),
                    }
                }
                let body = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
                write!(f, "{}", slot_vector(*slot, &body))
            }
            GeneratorLabel::ComponentProduct { multiplier, factor, slot } => {
                let body = with_multiplier(multiplier, &format!("f{}", factor + 1));
                write!(f, "{}", slot_vector(*slot, &body))
            }
            GeneratorLabel::Direction(i) => write!(f, "direction {i}"),
        }
    }
}

impl Serialize for GeneratorLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One generator: a pair of series, possibly with constant terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: GeneratorLabel,
    pub vector: [TruncatedSeries; 2],
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub kind: GeneratorKind,
    pub germ: PlaneGermJet,
    /// Generators are complete modulo vectors of degree above this.
    pub max_degree: u32,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.to_string()).collect()
    }

    /// Appends extra vectors, labelled as directions.
    pub fn with_directions(mut self, directions: &[PlaneGermJet]) -> Self {
        let n = self.max_degree;
        for (i, d) in directions.iter().enumerate() {
            self.generators.push(Generator {
                label: GeneratorLabel::Direction(i),
                vector: [d.component(0).with_order(n), d.component(1).with_order(n)],
            });
        }
        self
    }
}

/// Generators of the requested module, complete modulo `M^(max_degree+1) E²`.
///
/// Order: derivative multiples by multiplier degree (`m f_x`, `m f_y` for
/// each monomial `m`), then pullback or component-product vectors.
pub fn tangent_generators(
    f: &PlaneGermJet,
    kind: GeneratorKind,
    max_degree: u32,
) -> Result<GeneratorSet, OrbitError> {
    // Derivatives are exact one degree below the germ.
    let available = f.exact_to().saturating_sub(1);
    if max_degree > available {
        return Err(OrbitError::Exactness {
            needed: max_degree,
            available,
        });
    }
    let n = max_degree;
    let order = f.order();
    let fx = f.partial(GermVar::X);
    let fy = f.partial(GermVar::Y);
    let comps = f.components();
    let min_multiplier = match kind {
        GeneratorKind::Ta => 1,
        GeneratorKind::TeA | GeneratorKind::DuPlessisLhs => 0,
        GeneratorKind::Unipotent => 2,
    };
    let mut generators = Vec::new();
    let mut push = |label: GeneratorLabel, a: &TruncatedSeries, b: &TruncatedSeries| {
        let vector = [a.with_order(n), b.with_order(n)];
        if !(vector[0].is_zero() && vector[1].is_zero()) {
            generators.push(Generator { label, vector });
        }
    };
    for d in min_multiplier..=n {
        for m in Monomial::of_degree(d) {
            for (var, v) in [(GermVar::X, &fx), (GermVar::Y, &fy)] {
                push(
                    GeneratorLabel::Partial { multiplier: m, var },
                    &v[0].mul_monomial(m),
                    &v[1].mul_monomial(m),
                );
            }
        }
    }
    let zero = TruncatedSeries::zero(order);
    match kind {
        GeneratorKind::DuPlessisLhs => {
            for d in 0..n {
                for m in Monomial::of_degree(d) {
                    for (factor, c) in comps.iter().enumerate() {
                        let p = c.mul_monomial(m);
                        for slot in 0..2 {
                            let label = GeneratorLabel::ComponentProduct { multiplier: m, factor, slot };
                            if slot == 0 {
                                push(label, &p, &zero);
                            } else {
                                push(label, &zero, &p);
                            }
                        }
                    }
                }
            }
        }
        _ => {
            let min_total = min_multiplier;
            // Powers of the components, computed once.
            let powers = |c: &TruncatedSeries| -> Result<Vec<TruncatedSeries>, OrbitError> {
                let mut out = vec![TruncatedSeries::constant(order, ParamPoly::one())];
                for _ in 1..=n {
                    let next = out.last().expect("nonempty").multiply(c)?;
                    out.push(next);
                }
                Ok(out)
            };
            let p1 = powers(&comps[0])?;
            let p2 = powers(&comps[1])?;
            for total in min_total..=n {
                for b in 0..=total {
                    let a = total - b;
                    let p = p1[a as usize].multiply(&p2[b as usize])?;
                    for slot in 0..2 {
                        let label = GeneratorLabel::Pullback { powers: (a, b), slot };
                        if slot == 0 {
                            push(label, &p, &zero);
                        } else {
                            push(label, &zero, &p);
                        }
                    }
                }
            }
        }
    }
    Ok(GeneratorSet {
        kind,
        germ: f.clone(),
        max_degree,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi() -> PlaneGermJet {
        let d = ParamPoly::var("d");
        let first = &TruncatedSeries::from_ints(8, &[(2, 0, 1), (0, 2, 1)])
            + &TruncatedSeries::monomial(8, Monomial::new(0, 3), d);
        PlaneGermJet::new(first, TruncatedSeries::from_ints(8, &[(0, 2, 1), (3, 0, 1)])).unwrap()
    }

    #[test]
    fn duplessis_lhs_contains_expected_vectors() {
        let set = tangent_generators(&psi(), GeneratorKind::DuPlessisLhs, 2).unwrap();
        let labels = set.labels();
        for l in ["x*f_x", "y*f_x", "x*f_y", "y*f_y", "(f1, 0)", "(f2, 0)", "(0, f1)", "(0, f2)"] {
            assert!(labels.iter().any(|s| s == l), "missing {l}");
        }
    }

    #[test]
    fn tea_contains_quadratic_multiples() {
        let set = tangent_generators(&psi(), GeneratorKind::TeA, 3).unwrap();
        let labels = set.labels();
        for l in ["x^2*f_x", "x*y*f_x", "y^2*f_x", "x^2*f_y", "x*y*f_y", "y^2*f_y", "(1, 0)"] {
            assert!(labels.iter().any(|s| s == l), "missing {l}");
        }
    }

    #[test]
    fn ta_generators_vanish_at_origin() {
        let set = tangent_generators(&psi(), GeneratorKind::Ta, 4).unwrap();
        for g in &set.generators {
            assert!(g.vector.iter().all(|c| c.constant_term().is_zero()), "{}", g.label);
        }
    }

    #[test]
    fn exactness_contract_is_enforced() {
        assert!(matches!(
            tangent_generators(&psi(), GeneratorKind::TeA, 8),
            Err(OrbitError::Exactness { needed: 8, available: 7 })
        ));
    }
}
