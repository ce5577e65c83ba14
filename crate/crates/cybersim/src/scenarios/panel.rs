//! Five-insurer panel with a single quota-share/XL reinsurer: contract grid,
//! technical premia and loadings, simulated baselines with stress tests,
//! break-even cession fractions, and excess-of-loss quotes.

use crate::error::Result;
use crate::reinsurance::{
    ceding_commission, insurer_profit, optimal_rho, reinsurance_rate,
    xl_technical_premium_from_sample, QuotaShareTerms, ReinsurerView, XlLayer,
};
use crate::stochastic::{CashMoments, LogNormalParams, SigmaConvention};
use crate::underwriting::{
    loading, reserves, simulate_portfolio_losses, stress_loss, technical_premium, ClaimRate,
    ContractSpec, LossSample, Portfolio, SimulationOptions, StressPoint,
};

use super::config::{PanelConfig, PanelContract};
use super::report::{Plot, Report, Table};

fn contract_spec(c: &PanelContract) -> Result<ContractSpec> {
    Ok(ContractSpec {
        limit: c.limit.dollars(),
        severity: CashMoments::new(c.severity_mean.dollars(), c.severity_sd.dollars())?,
        claim_rate: ClaimRate::PerPolicyProbability(c.claim_probability),
        premium_rate: c.premium_rate,
    })
}

struct InsurerResult {
    name: String,
    exposure: f64,
    technical_premium: f64,
    loading: f64,
    charged_rate: f64,
    premium_income: f64,
    sample: LossSample,
    stresses: Vec<StressPoint>,
    cc: f64,
}

pub fn run_panel(cfg: &PanelConfig) -> Result<Report> {
    let mut report = Report::new("panel", cfg.seed.0, cfg.runs);
    let convention = SigmaConvention::Literal;

    // -- Reinsurer distribution menu and rate grid ---------------------------
    let mut table3 = Table::new(
        "3",
        "Reinsurer loss distributions",
        &["mean_mn", "sd_mn", "mu_log", "sigma_log", "q995_mn"],
    );
    let mut grid_params = Vec::new();
    for d in &cfg.rate_grid.distributions {
        let moments = CashMoments::new(d.mean.dollars(), d.sd.dollars())?;
        let params = LogNormalParams::from_moments(moments)?;
        table3.push_row(
            &d.name,
            vec![
                moments.mean / 1e6,
                moments.sd / 1e6,
                params.mu_log,
                params.sigma_log,
                params.quantile(0.995)? / 1e6,
            ],
        );
        grid_params.push((d.name.clone(), params));
    }
    report.tables.push(table3);

    let lr_label = |lr: f64| format!("lr_{lr}");
    let lr_columns: Vec<String> = cfg.rate_grid.loss_ratios.iter().map(|lr| lr_label(*lr)).collect();
    let mut table4 = Table::new(
        "4",
        "Reinsurance premium rates by target loss ratio",
        &lr_columns.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    let mut reinsurer_pdf = Plot::new("reinsurer_pdf");
    let mut reinsurer_cdf = Plot::new("reinsurer_cdf");
    for (name, params) in &grid_params {
        let rates = cfg
            .rate_grid
            .loss_ratios
            .iter()
            .map(|&lr| {
                reinsurance_rate(&ReinsurerView {
                    loss_distribution: *params,
                    target_loss_ratio: lr,
                    max_cover: cfg.rate_grid.max_cover.dollars(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        table4.push_row(name, rates);
        for i in 1..=200 {
            let x = 100.0e6 * i as f64 / 200.0;
            reinsurer_pdf.push(name, x / 1e6, params.pdf(x)?);
            reinsurer_cdf.push(name, x / 1e6, params.cdf(x)?);
        }
    }
    report.tables.push(table4);
    report.plots.push(reinsurer_pdf);
    report.plots.push(reinsurer_cdf);

    // -- Contract menu --------------------------------------------------------
    let mut table5 = Table::new(
        "5",
        "Insurance contracts in the market",
        &[
            "limit_mn",
            "severity_mean_mn",
            "severity_sd_mn",
            "claim_probability",
            "expected_loss_mn",
            "premium_rate_pct",
        ],
    );
    let mut specs = Vec::new();
    for c in &cfg.contracts {
        let spec = contract_spec(c)?;
        let expected = spec.expected_loss(1);
        table5.push_row(
            &c.name,
            vec![
                spec.limit / 1e6,
                spec.severity.mean / 1e6,
                spec.severity.sd / 1e6,
                c.claim_probability,
                expected / 1e6,
                expected / spec.limit * 100.0,
            ],
        );
        specs.push(spec);
    }
    report.tables.push(table5);

    // -- Portfolios: counts, exposure, technical premium ----------------------
    let count_columns: Vec<String> = cfg
        .contracts
        .iter()
        .map(|c| format!("count_{}", c.name))
        .collect();
    let mut table6_columns: Vec<&str> = count_columns.iter().map(String::as_str).collect();
    table6_columns.push("total_exposure_mn");
    table6_columns.push("technical_premium_mn");
    let mut table6 = Table::new("6", "Policies written by the panel", &table6_columns);

    let mut portfolios = Vec::new();
    let mut total_counts = vec![0u32; cfg.contracts.len()];
    let mut total_exposure = 0.0;
    let mut total_tp = 0.0;
    for ins in &cfg.insurers {
        let holdings: Vec<(ContractSpec, u32)> = specs
            .iter()
            .zip(&ins.counts)
            .map(|(spec, &count)| (*spec, count))
            .collect();
        let portfolio = Portfolio {
            name: ins.name.clone(),
            holdings,
            capital: None,
            target_loss_ratio: cfg.target_loss_ratio,
        };
        let exposure = portfolio.exposure();
        let tp = technical_premium(&portfolio);
        let mut row: Vec<f64> = ins.counts.iter().map(|&c| c as f64).collect();
        row.push(exposure / 1e6);
        row.push(tp / 1e6);
        table6.push_row(&ins.name, row);
        for (t, &c) in total_counts.iter_mut().zip(&ins.counts) {
            *t += c;
        }
        total_exposure += exposure;
        total_tp += tp;
        portfolios.push(portfolio);
    }
    let mut total_row: Vec<f64> = total_counts.iter().map(|&c| c as f64).collect();
    total_row.push(total_exposure / 1e6);
    total_row.push(total_tp / 1e6);
    table6.push_row("Total", total_row);
    report.tables.push(table6);

    // -- Loadings and charged rates -------------------------------------------
    let mut table7 = Table::new(
        "7",
        "Premium loadings for a common target loss ratio",
        &[
            "technical_premium_mn",
            "target_loss_ratio",
            "exposure_mn",
            "technical_rate_pct",
            "loading_pp",
            "charged_rate_pct",
        ],
    );
    let mut loading_curve = Plot::new("loading_vs_target_lr");
    let quoted_rate = cfg.reinsurer.quoted_rate;
    let mut results = Vec::new();
    for (idx, portfolio) in portfolios.iter().enumerate() {
        let exposure = portfolio.exposure();
        let tp = technical_premium(portfolio);
        let (load, charged) = if exposure > 0.0 {
            let load = loading(tp, cfg.target_loss_ratio, exposure)?;
            (load, tp / exposure + load)
        } else {
            (0.0, 0.0)
        };
        table7.push_row(
            &portfolio.name,
            vec![
                tp / 1e6,
                cfg.target_loss_ratio,
                exposure / 1e6,
                if exposure > 0.0 { tp / exposure * 100.0 } else { 0.0 },
                load * 100.0,
                charged * 100.0,
            ],
        );
        if exposure > 0.0 {
            for i in 0..=60 {
                let lr = 0.3 + 0.6 * i as f64 / 60.0;
                loading_curve.push(
                    &portfolio.name,
                    lr,
                    loading(tp, lr, exposure)? * 100.0,
                );
            }
        }

        // Monte Carlo baseline, one campaign per insurer.
        let sample = simulate_portfolio_losses(
            portfolio,
            cfg.runs,
            cfg.seed.derive(idx as u64),
            SimulationOptions {
                convention,
                ..Default::default()
            },
        )?;
        let stresses = cfg
            .stress
            .quantiles
            .iter()
            .map(|&q| stress_loss(portfolio, q, q, convention))
            .collect::<Result<Vec<_>>>()?;
        results.push(InsurerResult {
            name: portfolio.name.clone(),
            exposure,
            technical_premium: tp,
            loading: load,
            charged_rate: charged,
            premium_income: charged * exposure,
            sample,
            stresses,
            // An empty book has nothing to cede.
            cc: if exposure > 0.0 {
                ceding_commission(charged, quoted_rate)
            } else {
                0.0
            },
        });
    }
    report.tables.push(table7);
    report.plots.push(loading_curve);

    report.values.insert(
        "reinsurer_computed_rate".into(),
        reinsurance_rate(&ReinsurerView {
            loss_distribution: LogNormalParams::from_moments(CashMoments::new(
                cfg.reinsurer.mean.dollars(),
                cfg.reinsurer.sd.dollars(),
            )?)?,
            target_loss_ratio: cfg.reinsurer.target_loss_ratio,
            max_cover: cfg.reinsurer.max_cover.dollars(),
        })?,
    );
    report
        .values
        .insert("reinsurer_quoted_rate".into(), quoted_rate);
    report.push_note(format!(
        "quota-share pricing uses the reinsurer's quoted rate {:.0}% (grid value at \
         display precision); the unrounded computed rate is {:.4}",
        quoted_rate * 100.0,
        report.values["reinsurer_computed_rate"]
    ));

    // -- Simulated losses, stress tests, reserves ------------------------------
    let stress_cols: Vec<String> = cfg
        .stress
        .quantiles
        .iter()
        .map(|q| format!("stress_{}_mn", quantile_label(*q)))
        .collect();
    let mut t9_cols = vec![
        "premium_income_mn".to_string(),
        "capital_mn".to_string(),
        "reserves_mn".to_string(),
        "baseline_mean_mn".to_string(),
        "baseline_sd_mn".to_string(),
    ];
    t9_cols.extend(stress_cols.iter().cloned());
    let mut table9 = Table::new(
        "9",
        "Simulated losses and stress tests",
        &t9_cols.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    let mut histogram = Plot::new("loss_histogram");
    for r in &results {
        let capital = r.sample.mean;
        let mut row = vec![
            r.premium_income / 1e6,
            capital / 1e6,
            reserves(r.premium_income, capital) / 1e6,
            r.sample.mean / 1e6,
            r.sample.sd / 1e6,
        ];
        row.extend(r.stresses.iter().map(|s| s.total_loss / 1e6));
        table9.push_row(&r.name, row);

        let bin = 0.5e6;
        let max = r.sample.per_run_totals.iter().cloned().fold(0.0, f64::max);
        let mut counts = vec![0u64; (max / bin).ceil() as usize + 1];
        for &x in &r.sample.per_run_totals {
            counts[(x / bin) as usize] += 1;
        }
        for (b, &count) in counts.iter().enumerate() {
            histogram.push(&r.name, b as f64 * bin / 1e6, count as f64);
        }
    }
    report.tables.push(table9);
    report.plots.push(histogram);

    // -- Ceding commissions, break-even cessions, profits -----------------------
    let rho_cols: Vec<String> = cfg
        .stress
        .quantiles
        .iter()
        .map(|q| format!("rho_{}", quantile_label(*q)))
        .collect();
    let profit_cols: Vec<String> = std::iter::once("profit_rho0_mn".to_string())
        .chain(
            cfg.stress
                .quantiles
                .iter()
                .map(|q| format!("profit_rho{}_mn", quantile_label(*q))),
        )
        .collect();
    let mut t10_cols = vec!["ceding_commission_pct".to_string()];
    t10_cols.extend(rho_cols.iter().cloned());
    t10_cols.extend(profit_cols.iter().cloned());
    let mut table10 = Table::new(
        "10",
        "Cession fractions preserving solvency at stress losses",
        &t10_cols.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    let mut profit_plot = Plot::new("profit_vs_loss");
    let mut rho_by_insurer = Vec::new();
    for r in &results {
        let capital = r.sample.mean;
        let mut rhos = Vec::new();
        for s in &r.stresses {
            let rho = if r.exposure > 0.0 {
                optimal_rho(s.total_loss, r.premium_income, capital, r.exposure, r.cc)?.rho()
            } else {
                0.0
            };
            rhos.push(rho);
        }
        let baseline_loss = r.sample.mean;
        let profit_at = |rho: f64| {
            insurer_profit(
                baseline_loss,
                r.premium_income,
                r.exposure,
                &QuotaShareTerms {
                    rho,
                    ceding_commission: r.cc,
                    reinsurance_rate: quoted_rate,
                },
                0.0,
            )
        };
        let mut row = vec![r.cc * 100.0];
        row.extend(rhos.iter().cloned());
        row.push(profit_at(0.0) / 1e6);
        row.extend(rhos.iter().map(|&rho| profit_at(rho) / 1e6));
        table10.push_row(&r.name, row);
        rho_by_insurer.push(rhos.clone());

        // Profit as a function of realized loss for a spread of cessions.
        for rho_step in 0..=5 {
            let rho = rho_step as f64 / 5.0;
            let series = format!("{}/rho_{rho:.1}", r.name);
            for i in 0..=80 {
                let loss = 1.0e6 * i as f64;
                profit_plot.push(
                    &series,
                    loss / 1e6,
                    insurer_profit(
                        loss,
                        r.premium_income,
                        r.exposure,
                        &QuotaShareTerms {
                            rho,
                            ceding_commission: r.cc,
                            reinsurance_rate: quoted_rate,
                        },
                        0.0,
                    ) / 1e6,
                );
            }
        }
    }
    report.tables.push(table10);
    report.plots.push(profit_plot);

    // -- Excess-of-loss alternative ---------------------------------------------
    // Layer runs from cash premium income up to the highest stress loss.
    let last_stress = cfg.stress.quantiles.len() - 1;
    let mut table11 = Table::new(
        "11",
        "Excess-of-loss quotes against the highest stress level",
        &[
            "xl_attachment_mn",
            "xl_layer_mn",
            "prob_loss_in_layer_pct",
            "xl_technical_premium_mn",
            "qs_premium_at_top_rho_mn",
        ],
    );
    for (r, rhos) in results.iter().zip(&rho_by_insurer) {
        let attachment = r.premium_income;
        let top_stress = r.stresses[last_stress].total_loss;
        let (prob, premium, layer_size) = if top_stress > attachment && attachment > 0.0 {
            let layer = XlLayer::new(attachment, top_stress - attachment)?;
            let (p, prem) = xl_technical_premium_from_sample(&r.sample, &layer)?;
            (p, prem, layer.layer)
        } else {
            (0.0, 0.0, 0.0)
        };
        let profit_at = |rho: f64| {
            insurer_profit(
                r.sample.mean,
                r.premium_income,
                r.exposure,
                &QuotaShareTerms {
                    rho,
                    ceding_commission: r.cc,
                    reinsurance_rate: quoted_rate,
                },
                0.0,
            )
        };
        // Cost of quota share at the top-level cession: profit forgone
        // relative to keeping the whole book.
        let qs_cost = profit_at(0.0) - profit_at(rhos[last_stress]);
        table11.push_row(
            &r.name,
            vec![
                attachment / 1e6,
                layer_size / 1e6,
                prob * 100.0,
                premium / 1e6,
                qs_cost / 1e6,
            ],
        );
    }
    report.tables.push(table11);

    // Loading/technical premium summary values used by downstream tooling.
    for r in &results {
        report
            .values
            .insert(format!("technical_premium_{}", r.name), r.technical_premium);
        report
            .values
            .insert(format!("loading_{}", r.name), r.loading);
        report
            .values
            .insert(format!("charged_rate_{}", r.name), r.charged_rate);
    }

    Ok(report)
}

/// `95` for 0.95, `975` for 0.975 — column-name fragments.
fn quantile_label(q: f64) -> String {
    let pct = q * 100.0;
    if pct == pct.trunc() {
        format!("{}", pct as i64)
    } else {
        format!("{}", pct).replace('.', "")
    }
}
