//! Heterogeneous buyers: three risk tiers over a shared contract menu, with
//! tier-specific claim frequencies, premium ceilings, and reinsurer views.

use crate::error::Result;
use crate::reinsurance::optimal_rho;
use crate::stochastic::{CashMoments, LogNormalParams, SigmaConvention};
use crate::underwriting::{
    simulate_portfolio_losses, stress_loss, ClaimRate, ContractSpec, Portfolio, SimulationOptions,
};

use super::config::{BuyerTiersConfig, Tier};
use super::report::{Report, Table};

pub fn run_buyer_tiers(cfg: &BuyerTiersConfig) -> Result<Report> {
    let mut report = Report::new("buyer_tiers", cfg.seed.0, cfg.runs);
    let convention = SigmaConvention::Literal;

    // -- Buyer constraints (echo) ---------------------------------------------
    let mut table12 = Table::new(
        "12",
        "Buyer premium ceilings and market capacity",
        &[
            "ceiling_low_pct",
            "ceiling_medium_pct",
            "ceiling_high_pct",
            "max_low",
            "max_medium",
            "max_high",
        ],
    );
    for c in &cfg.contracts {
        table12.push_row(
            &c.name,
            vec![
                c.ceiling.low * 100.0,
                c.ceiling.medium * 100.0,
                c.ceiling.high * 100.0,
                c.max_customers as f64,
                c.max_customers as f64,
                c.max_customers as f64,
            ],
        );
    }
    report.tables.push(table12);

    // -- Contract distributions -------------------------------------------------
    let mut table13 = Table::new(
        "13",
        "Distribution specification per contract",
        &[
            "severity_mean_mn",
            "severity_sd_mn",
            "mu_log",
            "sigma_log",
            "lambda_low",
            "lambda_medium",
            "lambda_high",
        ],
    );
    for c in &cfg.contracts {
        let moments = CashMoments::new(c.severity_mean.dollars(), c.severity_sd.dollars())?;
        let params = LogNormalParams::from_moments(moments)?;
        table13.push_row(
            &c.name,
            vec![
                moments.mean / 1e6,
                moments.sd / 1e6,
                params.mu_log,
                params.sigma_log,
                c.lambda.low,
                c.lambda.medium,
                c.lambda.high,
            ],
        );
    }
    report.tables.push(table13);

    // -- Simulated expected losses ------------------------------------------------
    let tier_cols = |stem: &str, unit: &str| -> Vec<String> {
        Tier::ALL
            .iter()
            .map(|t| format!("{stem}_{}{unit}", t.label()))
            .collect()
    };
    let mut t14_cols = tier_cols("total", "_mn");
    t14_cols.extend(tier_cols("per_contract", "_k"));
    let mut table14 = Table::new(
        "14",
        "Expected losses per contract group",
        &t14_cols.iter().map(String::as_str).collect::<Vec<_>>(),
    );

    // means[contract][tier], stress[contract][tier]
    let mut mean_loss = vec![[0.0f64; 3]; cfg.contracts.len()];
    let mut stress_total = vec![[0.0f64; 3]; cfg.contracts.len()];
    for (ci, c) in cfg.contracts.iter().enumerate() {
        for (ti, &tier) in Tier::ALL.iter().enumerate() {
            let spec = ContractSpec {
                limit: c.limit.dollars(),
                severity: CashMoments::new(c.severity_mean.dollars(), c.severity_sd.dollars())?,
                claim_rate: ClaimRate::GroupLambda(c.lambda.get(tier)),
                premium_rate: 0.0,
            };
            let portfolio = Portfolio {
                name: format!("{}/{}", c.name, tier.label()),
                holdings: vec![(spec, c.max_customers)],
                capital: None,
                target_loss_ratio: 0.5,
            };
            let sample = simulate_portfolio_losses(
                &portfolio,
                cfg.runs,
                cfg.seed.derive((ci * 3 + ti) as u64),
                SimulationOptions {
                    convention,
                    ..Default::default()
                },
            )?;
            mean_loss[ci][ti] = sample.mean;

            let stress = stress_loss(
                &portfolio,
                cfg.stress.frequency_quantile,
                cfg.stress.severity_quantile,
                convention,
            )?;
            stress_total[ci][ti] = stress.total_loss;
        }
        let mut row: Vec<f64> = mean_loss[ci].iter().map(|m| m / 1e6).collect();
        row.extend(
            mean_loss[ci]
                .iter()
                .map(|m| m / c.max_customers as f64 / 1e3),
        );
        table14.push_row(&c.name, row);
    }
    report.tables.push(table14);

    // -- Technical premium rates, with ceiling violations ---------------------------
    let mut t15_cols = tier_cols("rate", "_pct");
    t15_cols.extend(tier_cols("exceeds_ceiling", ""));
    let mut table15 = Table::new(
        "15",
        "Technical premium rates per contract",
        &t15_cols.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    for (ci, c) in cfg.contracts.iter().enumerate() {
        let mut rates = Vec::new();
        let mut exceeds = Vec::new();
        for (ti, &tier) in Tier::ALL.iter().enumerate() {
            let per_contract = mean_loss[ci][ti] / c.max_customers as f64;
            let rate = per_contract / c.limit.dollars();
            let ceiling = c.ceiling.get(tier);
            rates.push(rate * 100.0);
            exceeds.push(if rate > ceiling { 1.0 } else { 0.0 });
            if rate > ceiling {
                report.push_note(format!(
                    "{} {} tier: technical premium {:.1}% exceeds the {:.0}% buyer ceiling; \
                     the contract is not commercially viable without a deductible",
                    c.name,
                    tier.label(),
                    rate * 100.0,
                    ceiling * 100.0
                ));
            }
        }
        rates.extend(exceeds);
        table15.push_row(&c.name, rates);
    }
    report.tables.push(table15);

    // -- Stress losses ------------------------------------------------------------
    let mut t16_cols = tier_cols("total", "_mn");
    t16_cols.extend(tier_cols("per_contract", "_k"));
    let mut table16 = Table::new(
        "16",
        "Stress-test losses per contract group",
        &t16_cols.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    for (ci, c) in cfg.contracts.iter().enumerate() {
        let mut row: Vec<f64> = stress_total[ci].iter().map(|s| s / 1e6).collect();
        row.extend(
            stress_total[ci]
                .iter()
                .map(|s| s / c.max_customers as f64 / 1e3),
        );
        table16.push_row(&c.name, row);
    }
    report.tables.push(table16);

    // -- Break-even cession fractions, next to the published reference -------------
    // Assumptions (also spelled out in the shipped config): premium equals
    // the per-contract technical premium, capital the per-contract expected
    // loss, and the ceding commission the tier ceiling less the tier
    // reinsurer quoted rate.
    let mut t17_cols = tier_cols("computed", "");
    t17_cols.extend(tier_cols("reference", ""));
    t17_cols.extend(tier_cols("delta", ""));
    let mut table17 = Table::new(
        "17",
        "Break-even cession fraction per contract",
        &t17_cols.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    for (ci, c) in cfg.contracts.iter().enumerate() {
        let mut computed = Vec::new();
        for (ti, &tier) in Tier::ALL.iter().enumerate() {
            let per_contract_mean = mean_loss[ci][ti] / c.max_customers as f64;
            let per_contract_stress = stress_total[ci][ti] / c.max_customers as f64;
            let cc = c.ceiling.get(tier) - cfg.reinsurance.get(tier).quoted_rate;
            let outcome = optimal_rho(
                per_contract_stress,
                per_contract_mean,
                per_contract_mean,
                c.limit.dollars(),
                cc,
            )?;
            computed.push(outcome.rho());
        }
        let mut row = computed.clone();
        let mut deltas = Vec::new();
        for (ti, &tier) in Tier::ALL.iter().enumerate() {
            let reference = cfg.reference_fractions.get(tier)[ci];
            row.push(reference);
            deltas.push(computed[ti] - reference);
        }
        row.extend(deltas);
        table17.push_row(&c.name, row);
    }
    report.tables.push(table17);
    report.push_note(
        "cession fractions are computed from the stated premium/capital/commission \
         assumptions and reported next to the published reference values; the \
         reference derivation is not reproducible from those assumptions, so \
         deltas are informational"
            .to_string(),
    );

    Ok(report)
}
