//! Monte Carlo estimates of the composition statistics.
//!
//! Each trial draws fresh components `A`, `B` and one composition of them.
//! Region frequencies are pooled ratios: total activations inside (outside)
//! `A ∪ B` over total neuron slots inside (outside) it.

use rayon::prelude::*;
use serde::Serialize;

use super::{analytic_compose_stats, AnalyticComposeStats, StatsError};
use crate::cogmech::{sample_base_concept, ComposeParams, Composer};
use crate::rng::{split_work, stream_rng};

#[derive(Debug, Clone, Default)]
struct Tally {
    trials: u64,
    union: u64,
    union_sq: u64,
    inside: u64,
    inside_sq: u64,
    inside_union: u64,
    outside: u64,
    outside_sq: u64,
    rest: u64,
    rest_sq: u64,
    outside_rest: u64,
    result: u64,
    selected_overlap: u64,
    oversize: u64,
    activations: Vec<u64>,
}

impl Tally {
    fn merge(&mut self, o: &Tally) {
        self.trials += o.trials;
        self.union += o.union;
        self.union_sq += o.union_sq;
        self.inside += o.inside;
        self.inside_sq += o.inside_sq;
        self.inside_union += o.inside_union;
        self.outside += o.outside;
        self.outside_sq += o.outside_sq;
        self.rest += o.rest;
        self.rest_sq += o.rest_sq;
        self.outside_rest += o.outside_rest;
        self.result += o.result;
        self.selected_overlap += o.selected_overlap;
        self.oversize += o.oversize;
        if self.activations.len() < o.activations.len() {
            self.activations.resize(o.activations.len(), 0);
        }
        for (a, b) in self.activations.iter_mut().zip(&o.activations) {
            *a += b;
        }
    }
}

/// Pooled ratio `Σx / Σy` and its delta-method standard error.
fn ratio(n: u64, sx: u64, sy: u64, sxx: u64, syy: u64, sxy: u64) -> (f64, f64) {
    if sy == 0 {
        return (0.0, 0.0);
    }
    let r = sx as f64 / sy as f64;
    let nf = n as f64;
    let resid = (sxx as f64 - 2.0 * r * sxy as f64 + r * r * syy as f64) / nf;
    let se = resid.max(0.0).sqrt() / (nf.sqrt() * (sy as f64 / nf));
    (r, se)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub params: ComposeParams,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    /// Mean `|A ∪ B|`.
    pub mean_union: f64,
    pub mean_union_se: f64,
    /// Mean `|F(d) ∩ (A ∪ B)|`.
    pub mean_shared: f64,
    pub mean_result_size: f64,
    /// Mean `|S_A ∩ S_B|`.
    pub mean_selected_overlap: f64,
    /// Pooled activation frequency of neurons inside `A ∪ B`.
    pub in_union_freq: f64,
    pub in_union_se: f64,
    /// Pooled activation frequency of neurons outside `A ∪ B`.
    pub outside_freq: f64,
    pub outside_se: f64,
    /// Mean `|A ∪ B| / N`, the empirical `p(n_i|v ∨ w)`.
    pub either_freq: f64,
    /// Trials where `|S_A ∪ S_B| > α`.
    pub oversize_trials: u64,
    /// Per-neuron activation frequency of the composed concept.
    pub neuron_freq: Vec<f64>,
}

fn run_worker(params: ComposeParams, trials: u64, seed: u64, worker: usize) -> Result<Tally, StatsError> {
    let n = params.neuron_count;
    let mut rng = stream_rng(seed, worker as u64);
    let mut composer = Composer::new(params)?;
    let mut tally = Tally {
        activations: vec![0; n],
        ..Default::default()
    };
    for _ in 0..trials {
        let a = sample_base_concept(&params, &mut rng)?;
        let b = sample_base_concept(&params, &mut rng)?;
        let d = composer.sample(&a, &b, &mut rng)?;
        let union = (a.len() + b.len() - a.intersection_len(&b)) as u64;
        let outside = d.unshared.len() as u64;
        let inside = d.neurons.len() as u64 - outside;
        let rest = n as u64 - union;
        tally.trials += 1;
        tally.union += union;
        tally.union_sq += union * union;
        tally.inside += inside;
        tally.inside_sq += inside * inside;
        tally.inside_union += inside * union;
        tally.outside += outside;
        tally.outside_sq += outside * outside;
        tally.rest += rest;
        tally.rest_sq += rest * rest;
        tally.outside_rest += outside * rest;
        tally.result += d.neurons.len() as u64;
        tally.selected_overlap += d.from_a.intersection_len(&d.from_b) as u64;
        tally.oversize += u64::from(d.oversize(params.alpha));
        for x in d.neurons.iter() {
            tally.activations[x] += 1;
        }
    }
    Ok(tally)
}

/// Runs `trials` independent draws split over `workers` seeded streams.
/// Output depends only on `(params, trials, seed, workers)`.
pub fn monte_carlo_compose(
    params: ComposeParams,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<McReport, StatsError> {
    params.validate()?;
    if trials == 0 {
        return Err(StatsError::InvalidParams("trials must be at least 1".into()));
    }
    let workers = workers.max(1);
    let chunks = split_work(trials, workers);
    let tallies = chunks
        .par_iter()
        .enumerate()
        .map(|(w, &t)| run_worker(params, t, seed, w))
        .collect::<Result<Vec<_>, _>>()?;
    let mut total = Tally {
        activations: vec![0; params.neuron_count],
        ..Default::default()
    };
    for t in &tallies {
        total.merge(t);
    }

    let tf = total.trials as f64;
    let mean = |s: u64| s as f64 / tf;
    let union_var = (total.union_sq as f64 / tf - mean(total.union).powi(2)).max(0.0);
    let (in_union_freq, in_union_se) = ratio(
        total.trials,
        total.inside,
        total.union,
        total.inside_sq,
        total.union_sq,
        total.inside_union,
    );
    let (outside_freq, outside_se) = ratio(
        total.trials,
        total.outside,
        total.rest,
        total.outside_sq,
        total.rest_sq,
        total.outside_rest,
    );
    Ok(McReport {
        params,
        trials,
        seed,
        workers,
        mean_union: mean(total.union),
        mean_union_se: (union_var / tf).sqrt(),
        mean_shared: mean(total.inside),
        mean_result_size: mean(total.result),
        mean_selected_overlap: mean(total.selected_overlap),
        in_union_freq,
        in_union_se,
        outside_freq,
        outside_se,
        either_freq: mean(total.union) / params.neuron_count as f64,
        oversize_trials: total.oversize,
        neuron_freq: total.activations.iter().map(|&c| c as f64 / tf).collect(),
    })
}

/// Absolute tolerances used by [`verify_compose`], keyed by quantity name.
pub const TOLERANCES: [(&str, f64); 5] = [
    ("n_union", 0.5),
    ("s_shared", 0.1),
    ("p_either", 0.005),
    ("p_in_union", 0.01),
    ("p_outside", 0.003),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub quantity: &'static str,
    pub analytic: f64,
    pub empirical: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub analytic: AnalyticComposeStats,
    pub empirical: McReport,
    pub rows: Vec<VerifyRow>,
    pub all_within: bool,
}

/// Side-by-side analytic and simulated statistics with fixed tolerances.
pub fn verify_compose(
    params: ComposeParams,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Verification, StatsError> {
    let analytic = analytic_compose_stats(params.alpha, params.beta, params.neuron_count)?;
    let empirical = monte_carlo_compose(params, trials, seed, workers)?;
    let pairs = [
        analytic.n_union,
        analytic.s_shared,
        analytic.p_either,
        analytic.p_in_union,
        analytic.p_outside,
    ]
    .into_iter()
    .zip([
        empirical.mean_union,
        empirical.mean_shared,
        empirical.either_freq,
        empirical.in_union_freq,
        empirical.outside_freq,
    ]);
    let rows: Vec<VerifyRow> = TOLERANCES
        .iter()
        .zip(pairs)
        .map(|(&(quantity, tolerance), (analytic, empirical))| {
            let deviation = (empirical - analytic).abs();
            VerifyRow {
                quantity,
                analytic,
                empirical,
                deviation,
                tolerance,
                within: deviation <= tolerance,
            }
        })
        .collect();
    let all_within = rows.iter().all(|r| r.within);
    Ok(Verification {
        analytic,
        empirical,
        rows,
        all_within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed_and_workers() {
        let p = ComposeParams::new(200, 10, 4).unwrap();
        let a = monte_carlo_compose(p, 500, 9, 3).unwrap();
        let b = monte_carlo_compose(p, 500, 9, 3).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_compose(p, 500, 10, 3).unwrap();
        assert_ne!(a.mean_union, c.mean_union);
    }

    #[test]
    fn whole_universe_components() {
        let p = ComposeParams::new(30, 30, 30).unwrap();
        let r = monte_carlo_compose(p, 20, 1, 2).unwrap();
        assert_eq!(r.mean_union, 30.0);
        assert_eq!(r.outside_freq, 0.0);
    }

    #[test]
    fn zero_alpha_gives_zero_frequencies() {
        let p = ComposeParams::new(50, 0, 0).unwrap();
        let r = monte_carlo_compose(p, 10, 1, 1).unwrap();
        assert!(r.neuron_freq.iter().all(|&f| f == 0.0));
        assert_eq!(r.mean_union, 0.0);
        assert_eq!(r.in_union_freq, 0.0);
    }

    #[test]
    fn no_sharing_means_nothing_inside() {
        let p = ComposeParams::new(200, 10, 0).unwrap();
        let r = monte_carlo_compose(p, 200, 5, 2).unwrap();
        assert_eq!(r.in_union_freq, 0.0);
    }

    #[test]
    fn rejects_zero_trials() {
        let p = ComposeParams::new(10, 2, 1).unwrap();
        assert!(monte_carlo_compose(p, 0, 1, 1).is_err());
    }
}
