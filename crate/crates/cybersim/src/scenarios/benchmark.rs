//! Benchmark market: a single contract type, two claim-frequency variants,
//! buyer utility curves, and an excess-of-loss grid priced on a fitted
//! total-loss distribution shared by insurer and reinsurer.

use rayon::prelude::*;

use crate::buyer::{expected_utility, optimal_coverage, BuyerProfile};
use crate::error::Result;
use crate::reinsurance::{capped_loss_sample, xl_rate_by_exceedance, CapMode, XlLayer};
use crate::stochastic::{
    compound_total, fit_lognormal, sample_severity, CashMoments, LogNormalParams, PoissonParams,
};
use crate::underwriting::LossSample;

use super::config::BenchmarkConfig;
use super::report::{Plot, Report, Table};

pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<Report> {
    let mut report = Report::new("benchmark", cfg.seed.0, cfg.runs);

    let limit = cfg.market.limit.dollars();
    let policies = cfg.market.policies as f64;
    let moments = CashMoments::new(
        cfg.market.severity_mean.dollars(),
        cfg.market.severity_sd.dollars(),
    )?;
    let severity = LogNormalParams::from_moments(moments)?;
    report.values.insert("severity_mu_log".into(), severity.mu_log);
    report
        .values
        .insert("severity_sigma_log".into(), severity.sigma_log);

    // -- Expected vs simulated losses, one market per frequency -------------
    let mut table1 = Table::new(
        "1",
        "Expected versus simulated losses",
        &["expected_loss_mn", "simulated_loss_mn"],
    );
    let mut samples = Vec::new();
    let mut histogram = Plot::new("loss_histogram");
    for (i, &pi) in cfg.market.frequencies.iter().enumerate() {
        let lambda = pi * policies;
        let expected = policies * pi * moments.mean;
        let freq = PoissonParams::new(lambda)?;
        let campaign_seed = cfg.seed.derive(i as u64);
        let totals: Vec<f64> = (0..cfg.runs as u64)
            .into_par_iter()
            .map(|run| compound_total(&freq, &severity, &mut campaign_seed.substream(run)))
            .collect();
        let sample = LossSample::from_totals(totals, campaign_seed);

        let label = format!("lambda_{}", trim_float(lambda));
        table1.push_row(&label, vec![expected / 1e6, sample.mean / 1e6]);

        // Loss histogram at the configured bin width.
        let bin = cfg.histogram.bin_width.dollars();
        let max = sample.per_run_totals.iter().cloned().fold(0.0, f64::max);
        let nbins = (max / bin).ceil() as usize + 1;
        let mut counts = vec![0u64; nbins];
        for &x in &sample.per_run_totals {
            counts[(x / bin) as usize] += 1;
        }
        for (b, &count) in counts.iter().enumerate() {
            histogram.push(&label, b as f64 * bin / 1e6, count as f64);
        }

        samples.push((pi, lambda, sample));
    }
    report.tables.push(table1);
    report.plots.push(histogram);

    // -- Severity pdf / frequency pmf plot data ------------------------------
    let mut sev_pdf = Plot::new("severity_pdf");
    for i in 1..=200 {
        let x = limit * i as f64 / 200.0;
        sev_pdf.push("severity", x, severity.pdf(x)?);
    }
    report.plots.push(sev_pdf);
    let mut freq_pmf = Plot::new("frequency_pmf");
    for (_, lambda, _) in &samples {
        let freq = PoissonParams::new(*lambda)?;
        let hi = (*lambda + 6.0 * lambda.sqrt()).ceil() as u64;
        for k in 0..=hi {
            freq_pmf.push(&format!("lambda_{}", trim_float(*lambda)), k as f64, freq.pmf(k));
        }
    }
    report.plots.push(freq_pmf);

    // -- Buyer utility curves -------------------------------------------------
    let mut utility = Plot::new("buyer_utility");
    for (i, (&pi, &rate)) in cfg
        .market
        .frequencies
        .iter()
        .zip(&cfg.buyer.premium_rates)
        .enumerate()
    {
        let profile = BuyerProfile {
            wealth: cfg.buyer.wealth.dollars(),
            risk_aversion: cfg.buyer.alpha,
            loss_probability: pi,
            loss_size: cfg.buyer.loss.dollars(),
            deductible: 0.0,
            limit,
        };
        let series = format!("pi_{}", trim_float(pi));
        let step = cfg.buyer.grid_step.dollars();
        let points = (limit / step).ceil() as u64;
        for j in 0..=points {
            let c = (j as f64 * step).min(limit);
            utility.push(&series, c / limit, expected_utility(&profile, rate, c)?);
        }
        let best = optimal_coverage(&profile, rate, 1_000.0)?;
        report
            .values
            .insert(format!("optimal_coverage_pi_{}", trim_float(pi)), best);
        if best < limit {
            report.push_note(format!(
                "buyer with loss probability {pi} at premium rate {rate} \
                 maximizes utility at {:.0} of {limit:.0} cover (below full cover)",
                best
            ));
        }
        let _ = i;
    }
    report.plots.push(utility);

    // -- Fit of the highest-frequency simulated distribution ------------------
    let (_, _, fit_sample) = samples
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("frequencies are non-empty");
    let engine_fit = fit_lognormal(&fit_sample.per_run_totals)?;
    report.values.insert("fitted_mu_engine".into(), engine_fit.mu_log);
    report
        .values
        .insert("fitted_sigma_engine".into(), engine_fit.sigma_log);
    report.values.insert("fitted_mu_pinned".into(), cfg.reinsurance.fitted_mu);
    report
        .values
        .insert("fitted_sigma_pinned".into(), cfg.reinsurance.fitted_sigma);
    report.push_note(format!(
        "engine fit of the simulated total-loss distribution: mu={:.4}, sigma={:.4}; \
         layer pricing uses the pinned constants mu={:.5}, sigma={:.5}",
        engine_fit.mu_log,
        engine_fit.sigma_log,
        cfg.reinsurance.fitted_mu,
        cfg.reinsurance.fitted_sigma
    ));

    // -- Excess-of-loss grid on the pinned fitted distribution ----------------
    let pinned = LogNormalParams::new(cfg.reinsurance.fitted_mu, cfg.reinsurance.fitted_sigma)?;
    let baseline_mean = fit_sample.mean;

    // One fitted-distribution draw per run, reused across every layer.
    let fitted_seed = cfg.seed.derive(1000);
    let fitted_totals: Vec<f64> = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|run| sample_severity(&pinned, &mut fitted_seed.substream(run)))
        .collect();
    let fitted_sample = LossSample::from_totals(fitted_totals, fitted_seed);

    let mut table2 = Table::new(
        "2",
        "Excess-of-loss premia on the fitted distribution",
        &[
            "rate_pct",
            "cover_mn",
            "technical_premium_mn",
            "simulated_loss_with_reinsurance_mn",
            "simulated_loss_reduction_mn",
        ],
    );
    for layer_cfg in &cfg.reinsurance.layers {
        let layer = XlLayer::new(layer_cfg.attachment.dollars(), layer_cfg.layer.dollars())?;
        let rate = xl_rate_by_exceedance(&pinned, &layer)?;
        let premium = rate * layer.layer;
        let capped = capped_loss_sample(
            &fitted_sample,
            layer.attachment,
            CapMode::ZeroRunsAboveAttachment,
        )?;
        let reduction = baseline_mean - capped.mean;
        table2.push_row(
            &format!("xs_{}", trim_float(layer.attachment / 1e6)),
            vec![
                rate * 100.0,
                layer.layer / 1e6,
                premium / 1e6,
                capped.mean / 1e6,
                reduction / 1e6,
            ],
        );
    }
    report.tables.push(table2);

    Ok(report)
}

/// `10` for 10.0, `0.1` for 0.1 — keeps row labels free of trailing zeros.
fn trim_float(x: f64) -> String {
    if x == x.trunc() {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::config::ScenarioConfig;

    fn config(runs: usize) -> BenchmarkConfig {
        match ScenarioConfig::builtin("benchmark").unwrap() {
            ScenarioConfig::Benchmark(mut c) => {
                c.runs = runs;
                c
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn expected_losses_are_closed_form_exact() {
        let report = run_benchmark(&config(16)).unwrap();
        let t = report.table("1").unwrap();
        assert_eq!(t.cell("lambda_10", "expected_loss_mn"), Some(5.0));
        assert_eq!(t.cell("lambda_50", "expected_loss_mn"), Some(25.0));
    }

    #[test]
    fn single_run_with_fixed_seed_is_deterministic() {
        let mut cfg = config(1);
        cfg.seed = crate::seed::RngSeed(42);
        let a = run_benchmark(&cfg).unwrap();
        let b = run_benchmark(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn buyer_optima_sit_below_full_cover() {
        let report = run_benchmark(&config(8)).unwrap();
        let limit = 1.0e6;
        for key in ["optimal_coverage_pi_0.1", "optimal_coverage_pi_0.5"] {
            let c = report.values[key];
            assert!(c > 0.0 && c < limit, "{key} = {c}");
        }
    }

    #[test]
    fn table2_has_all_layers_with_reductions() {
        let report = run_benchmark(&config(5_000)).unwrap();
        let t = report.table("2").unwrap();
        assert_eq!(t.rows.len(), 4);
        for row in ["xs_25", "xs_30", "xs_35", "xs_40"] {
            assert!(t.cell(row, "rate_pct").unwrap() > 0.0);
        }
        // Reductions shrink as the attachment climbs.
        let reductions: Vec<f64> = t
            .rows
            .iter()
            .map(|r| t.cell(&r.label, "simulated_loss_reduction_mn").unwrap())
            .collect();
        for w in reductions.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "reductions should decline: {reductions:?}");
        }
    }
}
