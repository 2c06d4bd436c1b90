//! Test for compositional structure.
//!
//! Null hypothesis: each composed concept's active set is a uniform random
//! subset of the universe, independent of its components. Under that null
//! the overlap `|F(d) ∩ (F(a) ∪ F(b))|` is hypergeometric, and the per-triple
//! p-value is its exact upper tail.
//!
//! Per-triple p-values are combined with Fisher's method. Hypergeometric
//! p-values are discrete, so each triple contributes Lancaster's mid-rank
//! score `E[−2 ln U | U ∈ (P(X > x), P(X ≥ x)]]` instead of `−2 ln p`, and the
//! sum is referred to a scaled chi-square matched to its exact null mean and
//! variance. For continuous p-values this reduces to the classical
//! `χ²(2k)` reference.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{ActivationDataset, Hypergeometric, StatsError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleTest {
    pub a: String,
    pub b: String,
    pub composed: String,
    pub shared_with_a: usize,
    pub shared_with_b: usize,
    /// `|F(d) ∩ (F(a) ∪ F(b))|`
    pub observed_overlap: usize,
    pub null_mean: f64,
    /// `P(X ≥ observed)` under the hypergeometric null.
    pub p_value: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionTest {
    pub significance: f64,
    pub triples: Vec<TripleTest>,
    pub fisher_statistic: f64,
    pub null_mean: f64,
    pub null_variance: f64,
    pub degrees_of_freedom: f64,
    pub aggregate_p_value: f64,
    pub reject: bool,
    pub method: &'static str,
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `E[−2 ln U]` for `U` uniform on `(p_lo, p_hi]`.
pub fn lancaster_score(p_lo: f64, p_hi: f64) -> f64 {
    let width = p_hi - p_lo;
    if width <= p_hi * 1e-9 {
        return -2.0 * p_hi.ln();
    }
    2.0 * ((p_hi - xlnx(p_hi)) - (p_lo - xlnx(p_lo))) / width
}

/// Score of an observed overlap plus the score's null mean and variance.
fn score_moments(law: &Hypergeometric, observed: u64) -> (f64, f64, f64) {
    let (lo, _) = law.support();
    let pmf = law.pmf_table();
    // upper[i] = P(X ≥ lo + i), accumulated from the far tail.
    let mut upper = vec![0.0; pmf.len() + 1];
    for i in (0..pmf.len()).rev() {
        upper[i] = (upper[i + 1] + pmf[i]).min(1.0);
    }
    let scores: Vec<f64> = (0..pmf.len())
        .map(|i| lancaster_score(upper[i + 1], upper[i]))
        .collect();
    let mean: f64 = pmf.iter().zip(&scores).map(|(p, s)| p * s).sum();
    let second: f64 = pmf.iter().zip(&scores).map(|(p, s)| p * s * s).sum();
    let idx = (observed - lo) as usize;
    (scores[idx], mean, (second - mean * mean).max(0.0))
}

pub fn test_composition(
    dataset: &ActivationDataset,
    significance: f64,
) -> Result<CompositionTest, StatsError> {
    if !(significance > 0.0 && significance < 1.0) {
        return Err(StatsError::InvalidParams(format!(
            "significance must lie in (0, 1), got {significance}"
        )));
    }
    if dataset.triples().is_empty() {
        return Err(StatsError::EmptyDataset("no composition triples"));
    }
    let n = dataset.neuron_count() as u64;
    let mut triples = Vec::with_capacity(dataset.triples().len());
    let (mut stat, mut mean, mut var) = (0.0, 0.0, 0.0);
    for t in dataset.triples() {
        let get = |c: &str| dataset.activation(c).expect("triples are validated");
        let (fa, fb, fd) = (get(&t.a), get(&t.b), get(&t.composed));
        let components = fa.union(fb);
        let observed = fd.intersection_len(&components);
        let law = Hypergeometric::new(n, components.len() as u64, fd.len() as u64)?;
        let p_value = law.upper_tail(observed as u64);
        let (score, m, v) = score_moments(&law, observed as u64);
        stat += score;
        mean += m;
        var += v;
        triples.push(TripleTest {
            a: t.a.clone(),
            b: t.b.clone(),
            composed: t.composed.clone(),
            shared_with_a: fd.intersection_len(fa),
            shared_with_b: fd.intersection_len(fb),
            observed_overlap: observed,
            null_mean: law.mean(),
            p_value,
            reject: p_value <= significance,
        });
    }
    let (dof, aggregate) = if var <= 0.0 {
        (0.0, 1.0)
    } else {
        let scale = var / (2.0 * mean);
        let dof = 2.0 * mean * mean / var;
        let chi = ChiSquared::new(dof)
            .map_err(|e| StatsError::InvalidParams(format!("chi-square reference: {e}")))?;
        (dof, chi.sf(stat / scale))
    };
    Ok(CompositionTest {
        significance,
        triples,
        fisher_statistic: stat,
        null_mean: mean,
        null_variance: var,
        degrees_of_freedom: dof,
        aggregate_p_value: aggregate,
        reject: aggregate <= significance,
        method: "hypergeometric upper tail per triple; Fisher combination with Lancaster mid-rank scores and moment-matched chi-square",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cogmech::{Composition, NeuronSet};

    #[test]
    fn lancaster_score_limits() {
        // whole unit interval: E[-2 ln U] = 2
        assert!((lancaster_score(0.0, 1.0) - 2.0).abs() < 1e-12);
        // narrow interval collapses to -2 ln p
        let p = 0.01;
        assert!((lancaster_score(p - 1e-14, p) + 2.0 * p.ln()).abs() < 1e-9);
    }

    #[test]
    fn score_has_null_mean_two() {
        for (n, k, d) in [(10, 4, 4), (500, 49, 25), (60, 30, 30)] {
            let h = Hypergeometric::new(n, k, d).unwrap();
            let (_, mean, var) = score_moments(&h, h.support().0);
            assert!((mean - 2.0).abs() < 1e-9, "{mean}");
            assert!(var > 0.0 && var < 4.0);
        }
    }

    fn one_triple(n: usize, a: &[usize], b: &[usize], d: &[usize]) -> ActivationDataset {
        let rows = vec![
            ("a".to_string(), a.iter().copied().collect::<NeuronSet>()),
            ("b".to_string(), b.iter().copied().collect()),
            ("d".to_string(), d.iter().copied().collect()),
        ];
        let t = vec![Composition {
            a: "a".into(),
            b: "b".into(),
            composed: "d".into(),
        }];
        ActivationDataset::new(n, rows, t).unwrap()
    }

    #[test]
    fn single_triple_values() {
        let ds = one_triple(10, &[0, 1, 2, 3], &[0, 1, 2, 3], &[0, 1, 2, 3]);
        let r = test_composition(&ds, 0.05).unwrap();
        assert!((r.triples[0].p_value - 1.0 / 210.0).abs() < 1e-15);
        assert!(r.triples[0].reject);
        let ds = one_triple(10, &[0, 1, 2, 3], &[0, 1, 2, 3], &[4, 5, 6, 7]);
        let r = test_composition(&ds, 0.05).unwrap();
        assert_eq!(r.triples[0].p_value, 1.0);
        assert!((r.triples[0].null_mean - 1.6).abs() < 1e-12);
    }

    #[test]
    fn degenerate_sizes_give_p_one() {
        let ds = one_triple(4, &[0, 1, 2, 3], &[0, 1, 2, 3], &[0, 1]);
        let r = test_composition(&ds, 0.05).unwrap();
        assert_eq!(r.triples[0].p_value, 1.0);
        assert_eq!(r.aggregate_p_value, 1.0);
        assert!(!r.reject);
    }

    #[test]
    fn argument_checks() {
        let ds = one_triple(10, &[0], &[1], &[2]);
        assert!(test_composition(&ds, 0.0).is_err());
        assert!(test_composition(&ds, 1.0).is_err());
        let empty = ActivationDataset::new(10, vec![], vec![]).unwrap();
        assert!(test_composition(&empty, 0.05).is_err());
    }
}
