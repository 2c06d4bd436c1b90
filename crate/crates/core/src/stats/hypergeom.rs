//! Hypergeometric law of the overlap between a fixed set and an independent
//! uniform random set of given size.

use statrs::function::factorial::ln_binomial;

use super::StatsError;

/// Overlap of a uniform `draws`-subset of a population of `population`
/// items with a fixed set of `successes` items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hypergeometric {
    pub population: u64,
    pub successes: u64,
    pub draws: u64,
}

impl Hypergeometric {
    pub fn new(population: u64, successes: u64, draws: u64) -> Result<Self, StatsError> {
        if successes > population || draws > population {
            return Err(StatsError::InvalidParams(format!(
                "hypergeometric: successes = {successes} and draws = {draws} must not exceed population = {population}"
            )));
        }
        Ok(Hypergeometric {
            population,
            successes,
            draws,
        })
    }

    /// Smallest and largest attainable overlap.
    pub fn support(&self) -> (u64, u64) {
        let lo = (self.draws + self.successes).saturating_sub(self.population);
        let hi = self.draws.min(self.successes);
        (lo, hi)
    }

    pub fn mean(&self) -> f64 {
        if self.population == 0 {
            return 0.0;
        }
        self.draws as f64 * self.successes as f64 / self.population as f64
    }

    /// `C(K, k) C(N − K, n − k) / C(N, n)`
    pub fn pmf(&self, k: u64) -> f64 {
        let (lo, hi) = self.support();
        if k < lo || k > hi {
            return 0.0;
        }
        let ln = ln_binomial(self.successes, k)
            + ln_binomial(self.population - self.successes, self.draws - k)
            - ln_binomial(self.population, self.draws);
        ln.exp()
    }

    /// Probabilities over the support, lowest overlap first.
    pub fn pmf_table(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        (lo..=hi).map(|k| self.pmf(k)).collect()
    }

    /// `P(X ≥ k)`, summed from the far tail inward.
    pub fn upper_tail(&self, k: u64) -> f64 {
        let (lo, hi) = self.support();
        if k <= lo {
            return 1.0;
        }
        if k > hi {
            return 0.0;
        }
        (k..=hi).rev().map(|j| self.pmf(j)).sum::<f64>().min(1.0)
    }
}
