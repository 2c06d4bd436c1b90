//! Concepts, the composition operation and its material counterpart.
//!
//! Concepts map to sets of active neurons drawn from a universe of
//! `neuron_count` neurons. Composing `a` and `b` into `d` materially means
//! `F(d) = S_A ∪ S_B ∪ S_u`, where `S_A` and `S_B` are uniform `β`-subsets
//! of the component sets (drawn independently) and `S_u` is drawn from the
//! neurons outside `F(a) ∪ F(b)` so that `|F(d)| = α`.

use std::collections::{HashMap, HashSet};

use rand::seq::index;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CogError {
    #[error("unknown concept '{0}'")]
    UnknownConcept(String),
    #[error("duplicate concept '{0}'")]
    DuplicateConcept(String),
    #[error("concept '{concept}' activates neuron {index}, outside a universe of {neuron_count}")]
    IndexOutOfRange {
        concept: String,
        index: usize,
        neuron_count: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("component sets must have alpha = {alpha} neurons, got {a} and {b}")]
    SizeMismatch { alpha: usize, a: usize, b: usize },
    #[error("{needed} unshared neurons needed but only {available} lie outside the components")]
    InsufficientUnshared { needed: usize, available: usize },
    #[error("concept '{0}' has no correlates")]
    MissingCorrelates(String),
}

/// A sorted, duplicate-free set of neuron indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct NeuronSet(Vec<usize>);

impl NeuronSet {
    pub fn new() -> Self {
        NeuronSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, n: usize) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn intersection(&self, other: &NeuronSet) -> NeuronSet {
        NeuronSet(self.0.iter().copied().filter(|n| other.contains(*n)).collect())
    }

    pub fn intersection_len(&self, other: &NeuronSet) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.0.iter().filter(|n| large.contains(**n)).count()
    }

    pub fn union(&self, other: &NeuronSet) -> NeuronSet {
        self.0.iter().chain(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &NeuronSet) -> NeuronSet {
        NeuronSet(self.0.iter().copied().filter(|n| !other.contains(*n)).collect())
    }

    pub fn is_superset(&self, other: &NeuronSet) -> bool {
        other.0.iter().all(|n| self.contains(*n))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<usize> for NeuronSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NeuronSet(v)
    }
}

impl<const K: usize> From<[usize; K]> for NeuronSet {
    fn from(a: [usize; K]) -> Self {
        a.into_iter().collect()
    }
}

/// Model parameters: universe size `N`, active-set size `α` and per-component
/// shared count `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComposeParams {
    pub neuron_count: usize,
    pub alpha: usize,
    pub beta: usize,
}

impl ComposeParams {
    pub fn new(neuron_count: usize, alpha: usize, beta: usize) -> Result<Self, CogError> {
        let p = ComposeParams {
            neuron_count,
            alpha,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), CogError> {
        if self.neuron_count == 0 {
            return Err(CogError::InvalidParams("N must be positive".into()));
        }
        if self.alpha > self.neuron_count {
            return Err(CogError::InvalidParams(format!(
                "alpha = {} exceeds N = {}",
                self.alpha, self.neuron_count
            )));
        }
        if self.beta > self.alpha {
            return Err(CogError::InvalidParams(format!(
                "beta = {} exceeds alpha = {}",
                self.beta, self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Composition {
    pub a: String,
    pub b: String,
    pub composed: String,
}

/// Concepts, their compositions and their material correlates.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptSpace {
    neuron_count: usize,
    concepts: Vec<String>,
    compositions: Vec<Composition>,
    correlates: HashMap<String, NeuronSet>,
}

impl ConceptSpace {
    pub fn new(neuron_count: usize) -> Self {
        ConceptSpace {
            neuron_count,
            concepts: Vec::new(),
            compositions: Vec::new(),
            correlates: HashMap::new(),
        }
    }

    pub fn neuron_count(&self) -> usize {
        self.neuron_count
    }

    pub fn concepts(&self) -> &[String] {
        &self.concepts
    }

    pub fn compositions(&self) -> &[Composition] {
        &self.compositions
    }

    pub fn correlates(&self, concept: &str) -> Option<&NeuronSet> {
        self.correlates.get(concept)
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.concepts.iter().any(|c| c == concept)
    }

    pub fn declare(&mut self, concept: impl Into<String>) -> Result<(), CogError> {
        let concept = concept.into();
        if self.contains(&concept) {
            return Err(CogError::DuplicateConcept(concept));
        }
        self.concepts.push(concept);
        Ok(())
    }

    pub fn set_correlates(&mut self, concept: &str, set: NeuronSet) -> Result<(), CogError> {
        if !self.contains(concept) {
            return Err(CogError::UnknownConcept(concept.to_string()));
        }
        if let Some(index) = set.max().filter(|&m| m >= self.neuron_count) {
            return Err(CogError::IndexOutOfRange {
                concept: concept.to_string(),
                index,
                neuron_count: self.neuron_count,
            });
        }
        self.correlates.insert(concept.to_string(), set);
        Ok(())
    }

    /// Records `C(a, b) = new_id` and declares `new_id`. Its correlates stay
    /// unset until supplied or sampled.
    pub fn compose_concept(&mut self, a: &str, b: &str, new_id: &str) -> Result<(), CogError> {
        for c in [a, b] {
            if !self.contains(c) {
                return Err(CogError::UnknownConcept(c.to_string()));
            }
        }
        self.declare(new_id)?;
        self.compositions.push(Composition {
            a: a.to_string(),
            b: b.to_string(),
            composed: new_id.to_string(),
        });
        Ok(())
    }

    /// Records `C(a, b) = d` for an already declared `d`, which must not be
    /// the result of another composition.
    pub fn record_composition(&mut self, a: &str, b: &str, d: &str) -> Result<(), CogError> {
        for c in [a, b, d] {
            if !self.contains(c) {
                return Err(CogError::UnknownConcept(c.to_string()));
            }
        }
        if self.compositions.iter().any(|t| t.composed == d) {
            return Err(CogError::DuplicateConcept(d.to_string()));
        }
        self.compositions.push(Composition {
            a: a.to_string(),
            b: b.to_string(),
            composed: d.to_string(),
        });
        Ok(())
    }
}

/// Uniform random `α`-subset of `{0, .., N-1}`.
pub fn sample_base_concept<R: Rng + ?Sized>(params: &ComposeParams, rng: &mut R) -> Result<NeuronSet, CogError> {
    params.validate()?;
    Ok(index::sample(rng, params.neuron_count, params.alpha)
        .into_iter()
        .collect())
}

/// One draw of `F(C)(A, B)` with its parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComposedSample {
    pub from_a: NeuronSet,
    pub from_b: NeuronSet,
    pub unshared: NeuronSet,
    pub neurons: NeuronSet,
}

impl ComposedSample {
    /// `|S_A ∪ S_B|` exceeded `α`, so the result is larger than `α`.
    pub fn oversize(&self, alpha: usize) -> bool {
        self.neurons.len() > alpha
    }
}

/// Reusable scratch space for repeated composition draws.
#[derive(Debug, Clone)]
pub struct Composer {
    params: ComposeParams,
    in_components: Vec<bool>,
    chosen: Vec<bool>,
    pool: Vec<usize>,
}

impl Composer {
    pub fn new(params: ComposeParams) -> Result<Self, CogError> {
        params.validate()?;
        Ok(Composer {
            params,
            in_components: vec![false; params.neuron_count],
            chosen: vec![false; params.neuron_count],
            pool: Vec::with_capacity(params.neuron_count),
        })
    }

    pub fn params(&self) -> &ComposeParams {
        &self.params
    }

    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        a: &NeuronSet,
        b: &NeuronSet,
        rng: &mut R,
    ) -> Result<ComposedSample, CogError> {
        let ComposeParams {
            neuron_count,
            alpha,
            beta,
        } = self.params;
        if a.len() != alpha || b.len() != alpha {
            return Err(CogError::SizeMismatch {
                alpha,
                a: a.len(),
                b: b.len(),
            });
        }
        if a.max().max(b.max()).is_some_and(|m| m >= neuron_count) {
            return Err(CogError::InvalidParams("component neuron index outside the universe".into()));
        }
        let pick = |set: &NeuronSet, rng: &mut R| -> NeuronSet {
            index::sample(rng, set.len(), beta)
                .into_iter()
                .map(|i| set.as_slice()[i])
                .collect()
        };
        let from_a = pick(a, rng);
        let from_b = pick(b, rng);
        let shared = from_a.union(&from_b);

        for n in a.iter().chain(b.iter()) {
            self.in_components[n] = true;
        }
        let covered = a.len() + b.len() - a.intersection_len(b);
        let available = neuron_count - covered;
        let needed = alpha.saturating_sub(shared.len());
        let result = if needed > available {
            Err(CogError::InsufficientUnshared { needed, available })
        } else {
            Ok(self.draw_outside(needed, available, rng))
        };
        for n in a.iter().chain(b.iter()) {
            self.in_components[n] = false;
        }
        let unshared = result?;
        let neurons = shared.union(&unshared);
        Ok(ComposedSample {
            from_a,
            from_b,
            unshared,
            neurons,
        })
    }

    /// Uniform `needed`-subset of the neurons not marked in `in_components`.
    fn draw_outside<R: Rng + ?Sized>(&mut self, needed: usize, available: usize, rng: &mut R) -> NeuronSet {
        let n = self.params.neuron_count;
        if needed == 0 {
            return NeuronSet::new();
        }
        if needed * 4 <= available {
            // Sparse draw: rejection against the component and already-chosen marks.
            let mut picked = Vec::with_capacity(needed);
            while picked.len() < needed {
                let x = rng.random_range(0..n);
                if !self.in_components[x] && !self.chosen[x] {
                    self.chosen[x] = true;
                    picked.push(x);
                }
            }
            for &x in &picked {
                self.chosen[x] = false;
            }
            picked.into_iter().collect()
        } else {
            self.pool.clear();
            self.pool
                .extend((0..n).filter(|&x| !self.in_components[x]));
            index::sample(rng, self.pool.len(), needed)
                .into_iter()
                .map(|i| self.pool[i])
                .collect()
        }
    }
}

/// Draws `F(C)(A, B) = S_A ∪ S_B ∪ S_u`.
pub fn sample_composition<R: Rng + ?Sized>(
    a: &NeuronSet,
    b: &NeuronSet,
    params: &ComposeParams,
    rng: &mut R,
) -> Result<ComposedSample, CogError> {
    Composer::new(*params)?.sample(a, b, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleCheck {
    pub a: String,
    pub b: String,
    pub composed: String,
    pub shared_with_a: NeuronSet,
    pub shared_with_b: NeuronSet,
    pub residual: NeuronSet,
    /// The composed concept shares nothing with at least one component.
    pub violation: bool,
}

/// Checks that each composed concept shares manifestations with both of its
/// components.
pub fn functor_check(space: &ConceptSpace) -> Result<Vec<TripleCheck>, CogError> {
    let get = |c: &str| {
        space
            .correlates(c)
            .ok_or_else(|| CogError::MissingCorrelates(c.to_string()))
    };
    space
        .compositions()
        .iter()
        .map(|t| {
            let fa = get(&t.a)?;
            let fb = get(&t.b)?;
            let fd = get(&t.composed)?;
            let shared_with_a = fd.intersection(fa);
            let shared_with_b = fd.intersection(fb);
            let residual = fd.difference(&fa.union(fb));
            let violation = shared_with_a.is_empty() || shared_with_b.is_empty();
            Ok(TripleCheck {
                a: t.a.clone(),
                b: t.b.clone(),
                composed: t.composed.clone(),
                shared_with_a,
                shared_with_b,
                residual,
                violation,
            })
        })
        .collect()
}

/// Concepts that never appear in a composition triple.
pub fn base_concepts(space: &ConceptSpace) -> Vec<&str> {
    let used: HashSet<&str> = space
        .compositions()
        .iter()
        .map(|t| t.composed.as_str())
        .collect();
    space
        .concepts()
        .iter()
        .map(String::as_str)
        .filter(|c| !used.contains(c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn params(n: usize, a: usize, b: usize) -> ComposeParams {
        ComposeParams::new(n, a, b).unwrap()
    }

    #[test]
    fn neuron_set_ops() {
        let a = NeuronSet::from([3, 1, 2, 2]);
        let b = NeuronSet::from([2, 4]);
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!(a.intersection(&b), NeuronSet::from([2]));
        assert_eq!(a.intersection_len(&b), 1);
        assert_eq!(a.union(&b), NeuronSet::from([1, 2, 3, 4]));
        assert_eq!(a.difference(&b), NeuronSet::from([1, 3]));
        assert!(a.is_superset(&NeuronSet::from([1, 3])));
    }

    #[test]
    fn params_validation() {
        assert!(ComposeParams::new(10, 11, 0).is_err());
        assert!(ComposeParams::new(10, 4, 5).is_err());
        assert!(ComposeParams::new(0, 0, 0).is_err());
        assert!(ComposeParams::new(10, 10, 10).is_ok());
    }

    #[test]
    fn compose_records_triples() {
        let mut s = ConceptSpace::new(16);
        s.declare("circle").unwrap();
        s.declare("green").unwrap();
        s.compose_concept("circle", "green", "green_circle").unwrap();
        assert_eq!(s.compositions()[0].composed, "green_circle");
        assert!(s.contains("green_circle"));
        assert!(s.correlates("green_circle").is_none());
        s.compose_concept("circle", "circle", "circle2").unwrap();
        assert_eq!(
            s.compose_concept("circle", "missing", "d"),
            Err(CogError::UnknownConcept("missing".into()))
        );
        assert_eq!(
            s.compose_concept("circle", "green", "green"),
            Err(CogError::DuplicateConcept("green".into()))
        );
        assert!(matches!(
            s.set_correlates("circle", NeuronSet::from([16])),
            Err(CogError::IndexOutOfRange { index: 16, .. })
        ));
        assert_eq!(base_concepts(&s), vec!["circle", "green"]);
    }

    #[test]
    fn base_concept_edge_sizes() {
        let mut rng = stream_rng(1, 0);
        assert!(sample_base_concept(&params(20, 0, 0), &mut rng).unwrap().is_empty());
        let full = sample_base_concept(&params(20, 20, 0), &mut rng).unwrap();
        assert_eq!(full, (0..20).collect());
        assert_eq!(sample_base_concept(&params(1000, 50, 0), &mut rng).unwrap().len(), 50);
    }

    #[test]
    fn composition_without_sharing_avoids_components() {
        let p = params(100, 10, 0);
        let mut rng = stream_rng(2, 0);
        let a = sample_base_concept(&p, &mut rng).unwrap();
        let b = sample_base_concept(&p, &mut rng).unwrap();
        let d = sample_composition(&a, &b, &p, &mut rng).unwrap();
        assert_eq!(d.neurons.len(), 10);
        assert_eq!(d.neurons.intersection_len(&a.union(&b)), 0);
    }

    #[test]
    fn full_sharing_of_disjoint_components_is_oversize() {
        let p = params(100, 5, 5);
        let a: NeuronSet = (0..5).collect();
        let b: NeuronSet = (5..10).collect();
        let d = sample_composition(&a, &b, &p, &mut stream_rng(3, 0)).unwrap();
        assert_eq!(d.neurons, a.union(&b));
        assert!(d.unshared.is_empty());
        assert!(d.oversize(5));
    }

    #[test]
    fn composition_parts_are_consistent() {
        let p = params(60, 12, 4);
        let mut composer = Composer::new(p).unwrap();
        let mut rng = stream_rng(4, 0);
        for _ in 0..200 {
            let a = sample_base_concept(&p, &mut rng).unwrap();
            let b = sample_base_concept(&p, &mut rng).unwrap();
            let d = composer.sample(&a, &b, &mut rng).unwrap();
            assert!(a.is_superset(&d.from_a) && d.from_a.len() == 4);
            assert!(b.is_superset(&d.from_b) && d.from_b.len() == 4);
            assert_eq!(d.unshared.intersection_len(&a.union(&b)), 0);
            assert_eq!(d.neurons.len(), 12);
        }
    }

    #[test]
    fn composition_errors() {
        let p = params(10, 4, 2);
        let a = NeuronSet::from([0, 1, 2]);
        let b = NeuronSet::from([3, 4, 5, 6]);
        assert!(matches!(
            sample_composition(&a, &b, &p, &mut stream_rng(0, 0)),
            Err(CogError::SizeMismatch { .. })
        ));
        // alpha = N leaves nothing outside the components.
        let p = params(6, 6, 1);
        let all: NeuronSet = (0..6).collect();
        assert!(matches!(
            sample_composition(&all, &all, &p, &mut stream_rng(0, 0)),
            Err(CogError::InsufficientUnshared { .. })
        ));
    }

    #[test]
    fn functor_check_flags_disjoint_result() {
        let mut s = ConceptSpace::new(10);
        for c in ["a", "b"] {
            s.declare(c).unwrap();
        }
        s.compose_concept("a", "b", "d").unwrap();
        s.set_correlates("a", NeuronSet::from([0, 1])).unwrap();
        s.set_correlates("b", NeuronSet::from([2, 3])).unwrap();
        assert_eq!(functor_check(&s), Err(CogError::MissingCorrelates("d".into())));
        s.set_correlates("d", NeuronSet::from([2, 7])).unwrap();
        let r = functor_check(&s).unwrap();
        assert!(r[0].violation);
        assert_eq!(r[0].shared_with_b, NeuronSet::from([2]));
        assert_eq!(r[0].residual, NeuronSet::from([7]));
        s.set_correlates("d", NeuronSet::from([1, 2, 7])).unwrap();
        assert!(!functor_check(&s).unwrap()[0].violation);
    }
}
