//! Seed-deterministic sampling for the frequency and severity distributions.
//!
//! Severities are drawn by inverse transform through the log-normal
//! quantile; frequencies by cdf inversion for small rates and by the PTRS
//! transformed-rejection method for large ones. Both consume the generic
//! `RngCore` stream directly, so a fixed substream always reproduces the
//! same draws.

use rand_chacha::rand_core::RngCore;
use statrs::function::gamma::ln_gamma;

use super::lognormal::LogNormalParams;
use super::normal::std_normal_quantile;
use super::poisson::PoissonParams;

/// Threshold between cdf inversion and transformed rejection.
const POISSON_INVERSION_CUTOFF: f64 = 30.0;

/// Uniform draw strictly inside (0, 1): 53 significant bits, offset by half
/// an ulp so neither endpoint can occur.
pub fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// One standard-normal draw by inverse transform.
pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    std_normal_quantile(open_unit(rng))
}

/// One severity draw.
pub fn sample_severity<R: RngCore + ?Sized>(p: &LogNormalParams, rng: &mut R) -> f64 {
    (p.mu_log + p.sigma_log * standard_normal(rng)).exp()
}

/// One claim-count draw.
pub fn sample_frequency<R: RngCore + ?Sized>(p: &PoissonParams, rng: &mut R) -> u64 {
    if p.lambda == 0.0 {
        0
    } else if p.lambda < POISSON_INVERSION_CUTOFF {
        poisson_inversion(p.lambda, rng)
    } else {
        poisson_ptrs(p.lambda, rng)
    }
}

/// Total loss from one compound draw: `N ~ Poisson(lambda)` severities summed.
pub fn compound_total<R: RngCore + ?Sized>(
    freq: &PoissonParams,
    sev: &LogNormalParams,
    rng: &mut R,
) -> f64 {
    let n = sample_frequency(freq, rng);
    let mut total = 0.0;
    for _ in 0..n {
        total += sample_severity(sev, rng);
    }
    total
}

fn poisson_inversion<R: RngCore + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    let u = open_unit(rng);
    let mut k = 0u64;
    let mut p = (-lambda).exp();
    let mut cum = p;
    while u > cum {
        k += 1;
        p *= lambda / k as f64;
        cum += p;
        if k > 10_000 {
            break; // cum ≈ 1 by here; guards against u at the extreme tail
        }
    }
    k
}

/// Hörmann's PTRS transformed-rejection sampler, valid for lambda ≥ 10.
fn poisson_ptrs<R: RngCore + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    let slam = lambda.sqrt();
    let loglam = lambda.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);

    loop {
        let u = open_unit(rng) - 0.5;
        let v = open_unit(rng);
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -lambda + k * loglam - ln_gamma(k + 1.0);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::RngSeed;

    #[test]
    fn zero_rate_always_draws_zero() {
        let p = PoissonParams::new(0.0).unwrap();
        let mut rng = RngSeed(1).substream(0);
        for _ in 0..100 {
            assert_eq!(sample_frequency(&p, &mut rng), 0);
        }
    }

    #[test]
    fn open_unit_stays_inside_the_interval() {
        let mut rng = RngSeed(2).substream(0);
        for _ in 0..10_000 {
            let u = open_unit(&mut rng);
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn severity_sample_mean_matches_analytic_mean() {
        // 100k draws from the benchmark severity: mean within 3 standard errors
        // of exp(mu + sigma²/2).
        let p = LogNormalParams::new(13.0, 0.22).unwrap();
        let n = 100_000u64;
        let seed = RngSeed(11);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for i in 0..n {
            let x = sample_severity(&p, &mut seed.substream(i));
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / n as f64;
        let sd = ((sumsq / n as f64) - mean * mean).sqrt();
        let se = sd / (n as f64).sqrt();
        let analytic = p.mean();
        assert!(
            (mean - analytic).abs() < 3.0 * se,
            "mean {mean} vs analytic {analytic} (se {se})"
        );
        assert!((analytic - 453_500.0).abs() < 1_000.0, "analytic = {analytic}");
    }

    #[test]
    fn poisson_samplers_match_their_distributions() {
        // Both regimes: empirical mean within 4 se of lambda, variance close.
        for lambda in [3.0, 12.0, 50.0] {
            let p = PoissonParams::new(lambda).unwrap();
            let n = 200_000u64;
            let seed = RngSeed(23).derive(lambda as u64);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for i in 0..n {
                let k = sample_frequency(&p, &mut seed.substream(i)) as f64;
                sum += k;
                sumsq += k * k;
            }
            let mean = sum / n as f64;
            let var = sumsq / n as f64 - mean * mean;
            let se = (lambda / n as f64).sqrt();
            assert!(
                (mean - lambda).abs() < 4.0 * se,
                "lambda={lambda}: mean {mean}"
            );
            assert!(
                (var - lambda).abs() / lambda < 0.05,
                "lambda={lambda}: var {var}"
            );
        }
    }

    #[test]
    fn compound_mean_matches_table_anchor() {
        // lambda=50 with the benchmark severity: 100k compound draws average
        // near $22.9mn.
        let freq = PoissonParams::new(50.0).unwrap();
        let sev = LogNormalParams::from_moments(
            super::super::lognormal::CashMoments::new(500_000.0, 250_000.0).unwrap(),
        )
        .unwrap();
        let n = 100_000u64;
        let seed = RngSeed(7);
        let mut sum = 0.0;
        for i in 0..n {
            sum += compound_total(&freq, &sev, &mut seed.substream(i));
        }
        let mean = sum / n as f64;
        assert!(
            (mean / 1e6 - 22.9).abs() / 22.9 < 0.02,
            "compound mean = {:.3}mn",
            mean / 1e6
        );
    }

    #[test]
    fn identical_seeds_give_bit_identical_streams() {
        let p = LogNormalParams::new(13.0, 0.22).unwrap();
        let a: Vec<f64> = (0..64)
            .map(|i| sample_severity(&p, &mut RngSeed(5).substream(i)))
            .collect();
        let b: Vec<f64> = (0..64)
            .map(|i| sample_severity(&p, &mut RngSeed(5).substream(i)))
            .collect();
        assert_eq!(a, b);
    }
}
