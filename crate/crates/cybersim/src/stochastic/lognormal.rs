//! Log-normal severity distributions and their cash-moment parameterization.

use serde::{Deserialize, Serialize};

use super::normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile};
use super::quadrature;
use crate::error::{Error, Result};

/// Mean and standard deviation of a severity distribution in dollars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CashMoments {
    pub mean: f64,
    pub sd: f64,
}

impl CashMoments {
    pub fn new(mean: f64, sd: f64) -> Result<CashMoments> {
        if !(mean > 0.0) {
            return Err(Error::domain(format!(
                "severity mean must be positive, got {mean}"
            )));
        }
        if !(sd >= 0.0) {
            return Err(Error::domain(format!(
                "severity sd must be non-negative, got {sd}"
            )));
        }
        Ok(CashMoments { mean, sd })
    }
}

/// Parameters of a log-normal on the log scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalParams {
    pub mu_log: f64,
    pub sigma_log: f64,
}

/// How cash moments map onto `sigma_log`.
///
/// Both conventions share `mu_log = ln(mean² / sqrt(mean² + sd²))`. They
/// differ on the spread parameter, where `cv = sd / mean`:
///
/// * `Literal` uses `sigma_log = ln(1 + cv²)` directly. This is the
///   convention all shipped scenario tables are calibrated against; it makes
///   the realized distribution mean fall below the input cash mean.
/// * `MomentMatching` uses `sigma_log = sqrt(ln(1 + cv²))`, the standard
///   moment-matching identity, so the distribution mean equals the input
///   cash mean exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaConvention {
    #[default]
    Literal,
    MomentMatching,
}

impl LogNormalParams {
    pub fn new(mu_log: f64, sigma_log: f64) -> Result<LogNormalParams> {
        if !(sigma_log >= 0.0) {
            return Err(Error::domain(format!(
                "sigma_log must be non-negative, got {sigma_log}"
            )));
        }
        Ok(LogNormalParams { mu_log, sigma_log })
    }

    /// Parameterize from cash moments under the default [`SigmaConvention::Literal`].
    pub fn from_moments(m: CashMoments) -> Result<LogNormalParams> {
        Self::from_moments_with(m, SigmaConvention::default())
    }

    pub fn from_moments_with(m: CashMoments, convention: SigmaConvention) -> Result<LogNormalParams> {
        if !(m.mean > 0.0) {
            return Err(Error::domain(format!(
                "cash mean must be positive, got {}",
                m.mean
            )));
        }
        let cv2 = (m.sd / m.mean).powi(2);
        let mu_log = (m.mean * m.mean / (m.mean * m.mean + m.sd * m.sd).sqrt()).ln();
        let spread = (1.0 + cv2).ln();
        let sigma_log = match convention {
            SigmaConvention::Literal => spread,
            SigmaConvention::MomentMatching => spread.sqrt(),
        };
        Ok(LogNormalParams { mu_log, sigma_log })
    }

    /// Distribution mean, `exp(mu + sigma²/2)`.
    pub fn mean(&self) -> f64 {
        (self.mu_log + 0.5 * self.sigma_log * self.sigma_log).exp()
    }

    /// Distribution variance.
    pub fn variance(&self) -> f64 {
        let s2 = self.sigma_log * self.sigma_log;
        (2.0 * self.mu_log + s2).exp() * (s2.exp() - 1.0)
    }

    pub fn median(&self) -> f64 {
        self.mu_log.exp()
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain(format!("pdf requires x > 0, got {x}")));
        }
        if self.sigma_log == 0.0 {
            return Ok(if x == self.median() { f64::INFINITY } else { 0.0 });
        }
        let z = (x.ln() - self.mu_log) / self.sigma_log;
        Ok(std_normal_pdf(z) / (x * self.sigma_log))
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain(format!("cdf requires x > 0, got {x}")));
        }
        if self.sigma_log == 0.0 {
            return Ok(if x >= self.median() { 1.0 } else { 0.0 });
        }
        Ok(std_normal_cdf((x.ln() - self.mu_log) / self.sigma_log))
    }

    /// Exceedance probability `P(X > x)`.
    pub fn survival(&self, x: f64) -> Result<f64> {
        Ok(1.0 - self.cdf(x)?)
    }

    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!(
                "quantile requires 0 < q < 1, got {q}"
            )));
        }
        Ok((self.mu_log + self.sigma_log * std_normal_quantile(q)).exp())
    }

    /// Partial expectation `∫₀^upper x f(x) dx`, evaluated by adaptive
    /// Gauss–Kronrod quadrature.
    pub fn truncated_expectation(&self, upper: f64) -> Result<f64> {
        if !(upper > 0.0) {
            return Err(Error::domain(format!(
                "truncated expectation requires upper > 0, got {upper}"
            )));
        }
        if self.sigma_log == 0.0 {
            let point = self.median();
            return Ok(if upper >= point { point } else { 0.0 });
        }
        // The integrand has negligible mass beyond a few log-sigmas above the
        // mode; clipping the interval keeps the subdivision shallow without
        // changing the value at the requested tolerance.
        let hi_tail = (self.mu_log + self.sigma_log * (self.sigma_log + 10.0)).exp();
        let b = upper.min(hi_tail);
        let value = quadrature::integrate(|x| x * self.pdf_unchecked(x), 0.0, b, 1e-8)
            .map_err(|e| match e {
                Error::Numeric { detail, .. } => Error::numeric(
                    "lognormal truncated expectation",
                    format!("mu={} sigma={} upper={}: {}", self.mu_log, self.sigma_log, upper, detail),
                ),
                other => other,
            })?;
        Ok(value)
    }

    fn pdf_unchecked(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = (x.ln() - self.mu_log) / self.sigma_log;
        std_normal_pdf(z) / (x * self.sigma_log)
    }
}

/// Maximum-likelihood log-normal fit: mean and (population) standard
/// deviation of the log-transformed samples.
pub fn fit_lognormal(samples: &[f64]) -> Result<LogNormalParams> {
    if samples.len() < 2 {
        return Err(Error::domain(format!(
            "fit requires at least 2 samples, got {}",
            samples.len()
        )));
    }
    let mut logs = Vec::with_capacity(samples.len());
    for &s in samples {
        if !(s > 0.0) {
            return Err(Error::domain(format!(
                "fit requires strictly positive samples, got {s}"
            )));
        }
        logs.push(s.ln());
    }
    let n = logs.len() as f64;
    let mu = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|l| (l - mu).powi(2)).sum::<f64>() / n;
    Ok(LogNormalParams {
        mu_log: mu,
        sigma_log: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent closed-form route for the partial expectation:
    /// `E[X·1{X≤u}] = exp(mu + sigma²/2) · Φ((ln u − mu − sigma²)/sigma)`.
    fn partial_expectation_analytic(p: &LogNormalParams, upper: f64) -> f64 {
        p.mean() * std_normal_cdf((upper.ln() - p.mu_log - p.sigma_log * p.sigma_log) / p.sigma_log)
    }

    #[test]
    fn benchmark_severity_moments() {
        // $500k mean / $250k sd parameterizes to (13.0, 0.22) at table precision.
        let p = LogNormalParams::from_moments(CashMoments::new(500_000.0, 250_000.0).unwrap())
            .unwrap();
        assert!((p.mu_log - 13.0).abs() < 0.05, "mu_log = {}", p.mu_log);
        assert!((p.sigma_log - 0.22).abs() < 0.005, "sigma_log = {}", p.sigma_log);
    }

    #[test]
    fn small_contract_severity_moments() {
        // $125k mean / $62.5k sd parameterizes to (11.6, 0.22).
        let p = LogNormalParams::from_moments(CashMoments::new(125_000.0, 62_500.0).unwrap())
            .unwrap();
        assert!((p.mu_log - 11.6).abs() < 0.05, "mu_log = {}", p.mu_log);
        assert!((p.sigma_log - 0.22).abs() < 0.005);
    }

    #[test]
    fn zero_sd_degenerates_to_point_mass() {
        let m = CashMoments::new(750.0, 0.0).unwrap();
        for convention in [SigmaConvention::Literal, SigmaConvention::MomentMatching] {
            let p = LogNormalParams::from_moments_with(m, convention).unwrap();
            assert!((p.mu_log - 750.0_f64.ln()).abs() < 1e-12);
            assert_eq!(p.sigma_log, 0.0);
        }
    }

    #[test]
    fn moment_matching_preserves_the_cash_mean() {
        let m = CashMoments::new(500_000.0, 250_000.0).unwrap();
        let p = LogNormalParams::from_moments_with(m, SigmaConvention::MomentMatching).unwrap();
        assert!((p.mean() - 500_000.0).abs() / 500_000.0 < 1e-12);
        // The literal convention deliberately does not.
        let q = LogNormalParams::from_moments(m).unwrap();
        assert!(q.mean() < 500_000.0);
    }

    #[test]
    fn non_positive_mean_is_domain_error() {
        assert!(CashMoments::new(0.0, 1.0).is_err());
        assert!(CashMoments::new(-5.0, 1.0).is_err());
    }

    #[test]
    fn quantile_reproduces_solvency_capital_point() {
        // Distribution with cash moments ($10mn, $10mn): F⁻¹(0.995) ≈ $42mn.
        let p = LogNormalParams::from_moments(CashMoments::new(10.0e6, 10.0e6).unwrap()).unwrap();
        assert!((p.mu_log - 15.8).abs() < 0.05);
        assert!((p.sigma_log - 0.69).abs() < 0.005);
        let q995 = p.quantile(0.995).unwrap();
        assert!((q995 / 1e6 - 42.0).abs() < 0.5, "q995 = {q995}");
    }

    #[test]
    fn survival_matches_error_function_oracle() {
        // P(X > $30mn) under (16.9, 0.27) ≈ 12.5% at 0.5pp; the oracle is the
        // direct Φ evaluation of the standardized log.
        let p = LogNormalParams::new(16.9, 0.27).unwrap();
        let s = p.survival(30.0e6).unwrap();
        let oracle = 1.0 - std_normal_cdf(((30.0e6_f64).ln() - 16.9) / 0.27);
        assert!((s - oracle).abs() < 1e-12);
        assert!((s - 0.125).abs() < 0.005, "survival = {s}");
    }

    #[test]
    fn cdf_vanishes_near_zero_and_median_identity_holds() {
        let p = LogNormalParams::new(13.0, 0.22).unwrap();
        assert!(p.cdf(1e-12).unwrap() < 1e-15);
        assert!((p.quantile(0.5).unwrap() - 13.0_f64.exp()).abs() / 13.0_f64.exp() < 1e-12);
    }

    #[test]
    fn out_of_domain_arguments_error() {
        let p = LogNormalParams::new(13.0, 0.22).unwrap();
        assert!(p.pdf(0.0).is_err());
        assert!(p.cdf(-1.0).is_err());
        assert!(p.quantile(0.0).is_err());
        assert!(p.quantile(1.0).is_err());
        assert!(p.truncated_expectation(0.0).is_err());
    }

    #[test]
    fn truncated_expectation_matches_analytic_partial_expectation() {
        let cases = [
            (LogNormalParams::new(15.8, 0.69).unwrap(), 500.0e6),
            (LogNormalParams::new(16.9, 0.69).unwrap(), 500.0e6),
            (LogNormalParams::new(13.0, 0.22).unwrap(), 1.0e6),
            (LogNormalParams::new(17.6, 0.69).unwrap(), 100.0e6),
        ];
        for (p, upper) in cases {
            let numeric = p.truncated_expectation(upper).unwrap();
            let analytic = partial_expectation_analytic(&p, upper);
            assert!(
                (numeric - analytic).abs() <= 1e-6 * analytic,
                "mu={} sigma={} upper={}: numeric {} vs analytic {}",
                p.mu_log,
                p.sigma_log,
                upper,
                numeric,
                analytic
            );
        }
    }

    #[test]
    fn truncated_expectation_approaches_full_mean() {
        let p = LogNormalParams::new(15.8, 0.69).unwrap();
        let full = p.truncated_expectation(1.0e12).unwrap();
        assert!((full - p.mean()).abs() / p.mean() < 1e-8);
    }

    #[test]
    fn truncated_expectation_reproduces_reinsurance_rate_anchors() {
        // ($10mn, $10mn) distribution, cover $500mn: rate at 10% loss ratio ≈ 0.18.
        let a = LogNormalParams::from_moments(CashMoments::new(10.0e6, 10.0e6).unwrap()).unwrap();
        let rate_a = a.truncated_expectation(500.0e6).unwrap() / (0.1 * 500.0e6);
        assert!((rate_a - 0.18).abs() < 0.01, "rate_a = {rate_a}");

        // ($30mn, $30mn) distribution at 50% loss ratio ≈ 11%.
        let c = LogNormalParams::from_moments(CashMoments::new(30.0e6, 30.0e6).unwrap()).unwrap();
        let rate_c = c.truncated_expectation(500.0e6).unwrap() / (0.5 * 500.0e6);
        assert!((rate_c - 0.11).abs() < 0.01, "rate_c = {rate_c}");
    }

    #[test]
    fn fit_recovers_constant_samples() {
        let p = fit_lognormal(&[250.0; 16]).unwrap();
        assert!((p.mu_log - 250.0_f64.ln()).abs() < 1e-12);
        assert!(p.sigma_log < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(fit_lognormal(&[1.0]).is_err());
        assert!(fit_lognormal(&[1.0, -2.0]).is_err());
        assert!(fit_lognormal(&[1.0, 0.0]).is_err());
    }
}
