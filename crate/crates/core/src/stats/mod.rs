//! Closed-form activation probabilities of the composition model, Monte
//! Carlo estimators that check them, and a test for compositional structure
//! in activation data.

mod dataset;
mod detect;
mod hypergeom;
mod montecarlo;

pub use dataset::{
    estimate_params, read_rows, read_triples, synthetic_dataset, write_rows, write_triples,
    ActivationDataset, ParamEstimate, SyntheticKind,
};
pub use detect::{lancaster_score, test_composition, CompositionTest, TripleTest};
pub use hypergeom::Hypergeometric;
pub use montecarlo::{
    monte_carlo_compose, verify_compose, McReport, Verification, VerifyRow, TOLERANCES,
};

use serde::Serialize;
use thiserror::Error;

use crate::cogmech::CogError;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("n_union is 0 but s_shared is {0}")]
    DegenerateUnion(f64),
    #[error("empty dataset: {0}")]
    EmptyDataset(&'static str),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error(transparent)]
    Compose(#[from] CogError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Expected activation statistics of a composed concept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticComposeStats {
    /// `p(n_i|x) = α/N`
    pub p_active: f64,
    /// `p(n_i|v ∨ w) = 2α/N − α²/N²`
    pub p_either: f64,
    /// `N_vw = 2α − α²/N`, expected size of `F(v) ∪ F(w)`.
    pub n_union: f64,
    /// `s_vw = 2β − β²/N`, expected number of composed neurons drawn from the union.
    pub s_shared: f64,
    /// `s_vw / N_vw`, activation probability inside the union.
    pub p_in_union: f64,
    /// `(α − s_vw) / (N − N_vw)`, activation probability outside it.
    /// Lies in `[0, 1]` only when `s_vw ≤ α ≤ s_vw + N − N_vw`. It is
    /// negative when the expected shared draw alone overfills the composed
    /// concept and exceeds 1 when `α` is close to `N`. The value is reported
    /// as computed.
    pub p_outside: f64,
}

fn check_counts(alpha: usize, beta: usize, n: usize) -> Result<(), StatsError> {
    if n == 0 {
        return Err(StatsError::InvalidParams("N must be positive".into()));
    }
    if alpha > n || beta > alpha {
        return Err(StatsError::InvalidParams(format!(
            "need 0 <= beta <= alpha <= N, got beta = {beta}, alpha = {alpha}, N = {n}"
        )));
    }
    Ok(())
}

pub fn analytic_compose_stats(
    alpha: usize,
    beta: usize,
    n: usize,
) -> Result<AnalyticComposeStats, StatsError> {
    check_counts(alpha, beta, n)?;
    let (a, b, nf) = (alpha as f64, beta as f64, n as f64);
    let p_active = a / nf;
    let p_either = 2.0 * a / nf - a * a / (nf * nf);
    let n_union = 2.0 * a - a * a / nf;
    let s_shared = 2.0 * b - b * b / nf;
    if n_union >= nf {
        return Err(StatsError::InvalidParams(format!(
            "N_vw = {n_union} leaves no neurons outside the union (alpha = N)"
        )));
    }
    let p_in_union = if n_union == 0.0 {
        if s_shared != 0.0 {
            return Err(StatsError::DegenerateUnion(s_shared));
        }
        0.0
    } else {
        s_shared / n_union
    };
    let p_outside = (a - s_shared) / (nf - n_union);
    Ok(AnalyticComposeStats {
        p_active,
        p_either,
        n_union,
        s_shared,
        p_in_union,
        p_outside,
    })
}

/// `p(n_i|x,y) = |F(x) ∩ F(y)| / N`
pub fn prob_joint(overlap: usize, n: usize) -> Result<f64, StatsError> {
    if n == 0 || overlap > n {
        return Err(StatsError::InvalidParams(format!(
            "need 0 <= overlap <= N with N > 0, got overlap = {overlap}, N = {n}"
        )));
    }
    Ok(overlap as f64 / n as f64)
}

/// `p(n_i|x) · p(n_i|y)` for independent activations.
pub fn independence_joint(alpha_x: usize, alpha_y: usize, n: usize) -> Result<f64, StatsError> {
    if n == 0 || alpha_x > n || alpha_y > n {
        return Err(StatsError::InvalidParams(format!(
            "active counts must not exceed N = {n}"
        )));
    }
    let nf = n as f64;
    Ok((alpha_x as f64 / nf) * (alpha_y as f64 / nf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn either_probability() {
        let s = analytic_compose_stats(10, 0, 100).unwrap();
        assert!((s.p_either - 0.19).abs() < 1e-15);
    }

    #[test]
    fn reference_point() {
        let s = analytic_compose_stats(50, 20, 1000).unwrap();
        assert!((s.n_union - 97.5).abs() < 1e-12);
        assert!((s.s_shared - 39.6).abs() < 1e-12);
        assert!((s.p_in_union - 0.406154).abs() < 5e-7);
        assert!((s.p_outside - 0.011524).abs() < 5e-7);
    }

    #[test]
    fn empty_concept() {
        let s = analytic_compose_stats(0, 0, 100).unwrap();
        for v in [s.p_active, s.p_either, s.n_union, s.s_shared, s.p_in_union, s.p_outside] {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(analytic_compose_stats(5, 6, 10).is_err());
        assert!(analytic_compose_stats(11, 0, 10).is_err());
        assert!(analytic_compose_stats(10, 10, 10).is_err());
        assert!(analytic_compose_stats(0, 0, 0).is_err());
    }

    #[test]
    fn joint_probabilities() {
        assert_eq!(prob_joint(0, 100).unwrap(), 0.0);
        assert_eq!(prob_joint(100, 100).unwrap(), 1.0);
        assert!((prob_joint(16, 100).unwrap() - 0.16).abs() < 1e-15);
        assert!(prob_joint(101, 100).is_err());
        assert_eq!(independence_joint(10, 10, 10).unwrap(), 1.0);
        assert_eq!(independence_joint(0, 7, 10).unwrap(), 0.0);
        assert!((independence_joint(4, 4, 10).unwrap() - 0.16).abs() < 1e-15);
        assert!(independence_joint(11, 4, 10).is_err());
    }

    #[test]
    fn either_is_inclusion_exclusion_of_independent_parts() {
        for n in [10, 100, 1000] {
            for alpha in 0..n {
                let s = analytic_compose_stats(alpha, 0, n).unwrap();
                let joint = independence_joint(alpha, alpha, n).unwrap();
                assert!((s.p_either - (2.0 * s.p_active - joint)).abs() < 1e-12);
            }
        }
    }
}
