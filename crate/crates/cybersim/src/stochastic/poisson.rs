//! Poisson claim-frequency distribution.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonParams {
    pub lambda: f64,
}

impl PoissonParams {
    pub fn new(lambda: f64) -> Result<PoissonParams> {
        if !(lambda >= 0.0) {
            return Err(Error::domain(format!(
                "poisson rate must be non-negative, got {lambda}"
            )));
        }
        Ok(PoissonParams { lambda })
    }

    pub fn pmf(&self, k: u64) -> f64 {
        self.ln_pmf(k).exp()
    }

    pub fn ln_pmf(&self, k: u64) -> f64 {
        if self.lambda == 0.0 {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        k as f64 * self.lambda.ln() - self.lambda - ln_gamma(k as f64 + 1.0)
    }

    /// `P(X ≤ k)` via the regularized upper incomplete gamma identity.
    pub fn cdf(&self, k: u64) -> f64 {
        if self.lambda == 0.0 {
            return 1.0;
        }
        gamma_ur(k as f64 + 1.0, self.lambda)
    }

    /// Smallest `k` with `cdf(k) ≥ q`.
    pub fn quantile(&self, q: f64) -> Result<u64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!(
                "quantile requires 0 < q < 1, got {q}"
            )));
        }
        if self.lambda == 0.0 {
            return Ok(0);
        }
        // Start from a normal approximation and walk to the exact boundary.
        let approx = self.lambda + super::normal::std_normal_quantile(q) * self.lambda.sqrt();
        let mut k = approx.floor().max(0.0) as u64;
        while self.cdf(k) < q {
            k += 1;
        }
        while k > 0 && self.cdf(k - 1) >= q {
            k -= 1;
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: cumulative pmf by exact term recurrence.
    fn cdf_by_summation(lambda: f64, k: u64) -> f64 {
        let mut term = (-lambda).exp();
        let mut cum = term;
        for i in 1..=k {
            term *= lambda / i as f64;
            cum += term;
        }
        cum
    }

    #[test]
    fn pmf_at_zero_is_exp_neg_lambda() {
        for lambda in [0.5, 1.0, 20.0, 50.0] {
            let p = PoissonParams::new(lambda).unwrap();
            assert!((p.pmf(0) - (-lambda).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn cdf_matches_summation_oracle() {
        for lambda in [0.8, 2.4, 5.0, 10.0, 23.0, 50.0] {
            let p = PoissonParams::new(lambda).unwrap();
            for k in 0..=(3 * lambda as u64 + 10) {
                let exact = cdf_by_summation(lambda, k);
                assert!(
                    (p.cdf(k) - exact).abs() < 1e-10,
                    "lambda={lambda} k={k}: {} vs {}",
                    p.cdf(k),
                    exact
                );
            }
        }
    }

    #[test]
    fn quantile_is_smallest_k_reaching_q() {
        for lambda in [0.8, 1.0, 3.0, 7.5, 20.0, 23.0] {
            let p = PoissonParams::new(lambda).unwrap();
            for q in [0.5, 0.9, 0.95, 0.975, 0.995] {
                let k = p.quantile(q).unwrap();
                assert!(p.cdf(k) >= q, "lambda={lambda} q={q} k={k}");
                if k > 0 {
                    assert!(p.cdf(k - 1) < q, "lambda={lambda} q={q} k={k}");
                }
            }
        }
    }

    #[test]
    fn stress_test_frequency_quantiles() {
        // Anchors behind the panel stress tests: a 200-policy book at 10%
        // claim probability needs 28 claims at the 95th percentile.
        assert_eq!(PoissonParams::new(20.0).unwrap().quantile(0.95).unwrap(), 28);
        assert_eq!(PoissonParams::new(20.0).unwrap().quantile(0.975).unwrap(), 29);
        assert_eq!(PoissonParams::new(1.0).unwrap().quantile(0.995).unwrap(), 4);
    }

    #[test]
    fn zero_rate_distribution_is_degenerate_at_zero() {
        let p = PoissonParams::new(0.0).unwrap();
        assert_eq!(p.pmf(0), 1.0);
        assert_eq!(p.pmf(3), 0.0);
        assert_eq!(p.quantile(0.999).unwrap(), 0);
    }

    #[test]
    fn invalid_arguments_error() {
        assert!(PoissonParams::new(-1.0).is_err());
        assert!(PoissonParams::new(5.0).unwrap().quantile(0.0).is_err());
        assert!(PoissonParams::new(5.0).unwrap().quantile(1.0).is_err());
    }
}
