//! Scenario configuration: one structured file per scenario, with every
//! market input spelled out so a run is auditable from its config alone.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Money;
use crate::seed::RngSeed;

/// Contents of the shipped default config for each scenario id.
pub fn builtin_config(id: &str) -> Option<&'static str> {
    match id {
        "benchmark" => Some(include_str!("../../scenarios/benchmark.toml")),
        "panel" => Some(include_str!("../../scenarios/panel.toml")),
        "buyer_tiers" => Some(include_str!("../../scenarios/buyer_tiers.toml")),
        "naic_report" => Some(include_str!("../../scenarios/naic_report.toml")),
        _ => None,
    }
}

pub const SCENARIO_IDS: [&str; 4] = ["benchmark", "panel", "buyer_tiers", "naic_report"];

/// A parsed scenario configuration of any kind.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ScenarioConfig {
    Benchmark(BenchmarkConfig),
    Panel(PanelConfig),
    BuyerTiers(BuyerTiersConfig),
    NaicReport(NaicConfig),
}

impl ScenarioConfig {
    pub fn id(&self) -> &'static str {
        match self {
            ScenarioConfig::Benchmark(_) => "benchmark",
            ScenarioConfig::Panel(_) => "panel",
            ScenarioConfig::BuyerTiers(_) => "buyer_tiers",
            ScenarioConfig::NaicReport(_) => "naic_report",
        }
    }

    pub fn seed(&self) -> RngSeed {
        match self {
            ScenarioConfig::Benchmark(c) => c.seed,
            ScenarioConfig::Panel(c) => c.seed,
            ScenarioConfig::BuyerTiers(c) => c.seed,
            ScenarioConfig::NaicReport(_) => RngSeed(0),
        }
    }

    pub fn set_seed(&mut self, seed: RngSeed) {
        match self {
            ScenarioConfig::Benchmark(c) => c.seed = seed,
            ScenarioConfig::Panel(c) => c.seed = seed,
            ScenarioConfig::BuyerTiers(c) => c.seed = seed,
            ScenarioConfig::NaicReport(_) => {}
        }
    }

    pub fn set_runs(&mut self, runs: usize) {
        match self {
            ScenarioConfig::Benchmark(c) => c.runs = runs,
            ScenarioConfig::Panel(c) => c.runs = runs,
            ScenarioConfig::BuyerTiers(c) => c.runs = runs,
            ScenarioConfig::NaicReport(_) => {}
        }
    }

    /// Parse a config document, keyed by its `scenario` field.
    pub fn from_toml_str(text: &str) -> Result<ScenarioConfig> {
        let value: toml::Value = toml::from_str(text).map_err(|e| Error::Config {
            issues: vec![format!("toml parse error: {e}")],
        })?;
        let id = value
            .get("scenario")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Config {
                issues: vec!["scenario: missing or not a string".into()],
            })?
            .to_string();
        let parse = |issues: Vec<String>| Error::Config { issues };
        let cfg = match id.as_str() {
            "benchmark" => ScenarioConfig::Benchmark(
                value
                    .try_into()
                    .map_err(|e| parse(vec![format!("benchmark config: {e}")]))?,
            ),
            "panel" => ScenarioConfig::Panel(
                value
                    .try_into()
                    .map_err(|e| parse(vec![format!("panel config: {e}")]))?,
            ),
            "buyer_tiers" => ScenarioConfig::BuyerTiers(
                value
                    .try_into()
                    .map_err(|e| parse(vec![format!("buyer_tiers config: {e}")]))?,
            ),
            "naic_report" => ScenarioConfig::NaicReport(
                value
                    .try_into()
                    .map_err(|e| parse(vec![format!("naic_report config: {e}")]))?,
            ),
            other => {
                return Err(parse(vec![format!(
                    "scenario: unknown id {other:?} (expected one of {SCENARIO_IDS:?})"
                )]))
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<ScenarioConfig> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Load the shipped default config for a scenario id.
    pub fn builtin(id: &str) -> Result<ScenarioConfig> {
        let text = builtin_config(id).ok_or_else(|| Error::Config {
            issues: vec![format!(
                "scenario: unknown id {id:?} (expected one of {SCENARIO_IDS:?})"
            )],
        })?;
        Self::from_toml_str(text)
    }

    pub fn validate(&self) -> Result<()> {
        let issues = match self {
            ScenarioConfig::Benchmark(c) => c.validate_issues(),
            ScenarioConfig::Panel(c) => c.validate_issues(),
            ScenarioConfig::BuyerTiers(c) => c.validate_issues(),
            ScenarioConfig::NaicReport(c) => c.validate_issues(),
        };
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Config { issues })
        }
    }
}

fn check(issues: &mut Vec<String>, ok: bool, path: &str, msg: &str) {
    if !ok {
        issues.push(format!("{path}: {msg}"));
    }
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub scenario: String,
    pub runs: usize,
    pub seed: RngSeed,
    #[serde(default)]
    pub output_dir: Option<String>,
    pub market: BenchmarkMarket,
    pub buyer: BenchmarkBuyer,
    pub reinsurance: BenchmarkReinsurance,
    pub histogram: HistogramConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkMarket {
    pub policies: u32,
    pub limit: Money,
    pub severity_mean: Money,
    pub severity_sd: Money,
    /// Per-policy claim probabilities, one market variant each.
    pub frequencies: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkBuyer {
    pub alpha: f64,
    pub wealth: Money,
    pub loss: Money,
    /// Premium rates paired with `market.frequencies` by index.
    pub premium_rates: Vec<f64>,
    pub grid_step: Money,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkReinsurance {
    /// Log-scale parameters of the distribution used to price the layer
    /// grid. These are the unrounded values behind the fitted pair the
    /// regression tables display as (16.9, 0.27).
    pub fitted_mu: f64,
    pub fitted_sigma: f64,
    pub max_loss: Money,
    pub layers: Vec<LayerConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerConfig {
    pub attachment: Money,
    pub layer: Money,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HistogramConfig {
    pub bin_width: Money,
}

impl BenchmarkConfig {
    fn validate_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        check(&mut issues, self.runs >= 1, "runs", "must be at least 1");
        check(
            &mut issues,
            self.market.policies > 0,
            "market.policies",
            "must be positive",
        );
        check(
            &mut issues,
            self.market.limit.cents() > 0,
            "market.limit",
            "must be positive",
        );
        check(
            &mut issues,
            self.market.severity_mean.cents() > 0,
            "market.severity_mean",
            "must be positive",
        );
        check(
            &mut issues,
            !self.market.frequencies.is_empty(),
            "market.frequencies",
            "must not be empty",
        );
        for (i, f) in self.market.frequencies.iter().enumerate() {
            check(
                &mut issues,
                (0.0..=1.0).contains(f),
                &format!("market.frequencies[{i}]"),
                "must lie in [0, 1]",
            );
        }
        check(
            &mut issues,
            self.buyer.premium_rates.len() == self.market.frequencies.len(),
            "buyer.premium_rates",
            "must pair one rate with each market frequency",
        );
        check(
            &mut issues,
            self.buyer.alpha > 0.0,
            "buyer.alpha",
            "must be positive",
        );
        check(
            &mut issues,
            self.buyer.grid_step.cents() > 0,
            "buyer.grid_step",
            "must be positive",
        );
        check(
            &mut issues,
            self.reinsurance.fitted_sigma > 0.0,
            "reinsurance.fitted_sigma",
            "must be positive",
        );
        check(
            &mut issues,
            !self.reinsurance.layers.is_empty(),
            "reinsurance.layers",
            "must not be empty",
        );
        for (i, l) in self.reinsurance.layers.iter().enumerate() {
            check(
                &mut issues,
                l.attachment.cents() > 0 && l.layer.cents() > 0,
                &format!("reinsurance.layers[{i}]"),
                "attachment and layer must be positive",
            );
        }
        check(
            &mut issues,
            self.histogram.bin_width.cents() > 0,
            "histogram.bin_width",
            "must be positive",
        );
        issues
    }
}

// ---------------------------------------------------------------------------
// panel
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PanelConfig {
    pub scenario: String,
    pub runs: usize,
    pub seed: RngSeed,
    #[serde(default)]
    pub output_dir: Option<String>,
    pub target_loss_ratio: f64,
    pub contracts: Vec<PanelContract>,
    pub insurers: Vec<PanelInsurer>,
    pub reinsurer: PanelReinsurer,
    pub rate_grid: RateGridConfig,
    pub stress: PanelStress,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PanelContract {
    pub name: String,
    pub limit: Money,
    pub severity_mean: Money,
    pub severity_sd: Money,
    pub claim_probability: f64,
    pub premium_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PanelInsurer {
    pub name: String,
    /// Policy counts, one per entry in `contracts`.
    pub counts: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PanelReinsurer {
    pub mean: Money,
    pub sd: Money,
    pub target_loss_ratio: f64,
    /// Rate actually quoted to the panel (the grid value at display
    /// precision); ceding commissions are spreads over this quote.
    pub quoted_rate: f64,
    pub max_cover: Money,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateGridConfig {
    pub distributions: Vec<GridDistribution>,
    pub loss_ratios: Vec<f64>,
    pub max_cover: Money,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridDistribution {
    pub name: String,
    pub mean: Money,
    pub sd: Money,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PanelStress {
    pub quantiles: Vec<f64>,
}

impl PanelConfig {
    fn validate_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        check(&mut issues, self.runs >= 1, "runs", "must be at least 1");
        check(
            &mut issues,
            self.target_loss_ratio > 0.0 && self.target_loss_ratio <= 1.0,
            "target_loss_ratio",
            "must lie in (0, 1]",
        );
        check(
            &mut issues,
            !self.contracts.is_empty(),
            "contracts",
            "must not be empty",
        );
        for (i, c) in self.contracts.iter().enumerate() {
            let path = format!("contracts[{i}]");
            check(
                &mut issues,
                c.limit.cents() > 0,
                &format!("{path}.limit"),
                "must be positive",
            );
            check(
                &mut issues,
                c.severity_mean.cents() > 0 && c.severity_mean <= c.limit,
                &format!("{path}.severity_mean"),
                "must be positive and at most the limit",
            );
            check(
                &mut issues,
                (0.0..=1.0).contains(&c.claim_probability),
                &format!("{path}.claim_probability"),
                "must lie in [0, 1]",
            );
        }
        for (i, ins) in self.insurers.iter().enumerate() {
            check(
                &mut issues,
                ins.counts.len() == self.contracts.len(),
                &format!("insurers[{i}].counts"),
                "must list one count per contract",
            );
        }
        check(
            &mut issues,
            (0.0..1.0).contains(&self.reinsurer.quoted_rate),
            "reinsurer.quoted_rate",
            "must lie in [0, 1)",
        );
        for (i, lr) in self.rate_grid.loss_ratios.iter().enumerate() {
            check(
                &mut issues,
                *lr > 0.0 && *lr <= 1.0,
                &format!("rate_grid.loss_ratios[{i}]"),
                "must lie in (0, 1]",
            );
        }
        for (i, q) in self.stress.quantiles.iter().enumerate() {
            check(
                &mut issues,
                *q > 0.0 && *q < 1.0,
                &format!("stress.quantiles[{i}]"),
                "must lie in (0, 1)",
            );
        }
        issues
    }
}

// ---------------------------------------------------------------------------
// buyer tiers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuyerTiersConfig {
    pub scenario: String,
    pub runs: usize,
    pub seed: RngSeed,
    #[serde(default)]
    pub output_dir: Option<String>,
    pub contracts: Vec<TierContract>,
    pub reinsurance: TierReinsurance,
    pub stress: TierStress,
    /// Reference cession fractions reported alongside the computed ones.
    pub reference_fractions: ReferenceFractions,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TierContract {
    pub name: String,
    pub limit: Money,
    pub severity_mean: Money,
    pub severity_sd: Money,
    pub max_customers: u32,
    /// Group Poisson rates per risk tier.
    pub lambda: TierValues<f64>,
    /// Highest premium rate each tier accepts for full coverage.
    pub ceiling: TierValues<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TierValues<T> {
    pub low: T,
    pub medium: T,
    pub high: T,
}

impl<T: Copy> TierValues<T> {
    pub fn get(&self, tier: Tier) -> T {
        match tier {
            Tier::Low => self.low,
            Tier::Medium => self.medium,
            Tier::High => self.high,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Low,
    Medium,
    High,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Low, Tier::Medium, Tier::High];

    pub fn label(self) -> &'static str {
        match self {
            Tier::Low => "low",
            Tier::Medium => "medium",
            Tier::High => "high",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TierReinsurance {
    pub low: TierReinsurerView,
    pub medium: TierReinsurerView,
    pub high: TierReinsurerView,
}

impl TierReinsurance {
    pub fn get(&self, tier: Tier) -> &TierReinsurerView {
        match tier {
            Tier::Low => &self.low,
            Tier::Medium => &self.medium,
            Tier::High => &self.high,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TierReinsurerView {
    pub mean: Money,
    pub sd: Money,
    pub target_loss_ratio: f64,
    pub quoted_rate: f64,
    pub max_cover: Money,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TierStress {
    pub frequency_quantile: f64,
    pub severity_quantile: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceFractions {
    /// One value per contract, per tier.
    pub low: Vec<f64>,
    pub medium: Vec<f64>,
    pub high: Vec<f64>,
}

impl ReferenceFractions {
    pub fn get(&self, tier: Tier) -> &[f64] {
        match tier {
            Tier::Low => &self.low,
            Tier::Medium => &self.medium,
            Tier::High => &self.high,
        }
    }
}

impl BuyerTiersConfig {
    fn validate_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        check(&mut issues, self.runs >= 1, "runs", "must be at least 1");
        check(
            &mut issues,
            !self.contracts.is_empty(),
            "contracts",
            "must not be empty",
        );
        for (i, c) in self.contracts.iter().enumerate() {
            let path = format!("contracts[{i}]");
            check(
                &mut issues,
                c.limit.cents() > 0,
                &format!("{path}.limit"),
                "must be positive",
            );
            check(
                &mut issues,
                c.max_customers > 0,
                &format!("{path}.max_customers"),
                "must be positive",
            );
            for (tier, lambda) in [
                ("low", c.lambda.low),
                ("medium", c.lambda.medium),
                ("high", c.lambda.high),
            ] {
                check(
                    &mut issues,
                    lambda >= 0.0,
                    &format!("{path}.lambda.{tier}"),
                    "must be non-negative",
                );
            }
        }
        let q = &self.stress;
        check(
            &mut issues,
            q.frequency_quantile > 0.0 && q.frequency_quantile < 1.0,
            "stress.frequency_quantile",
            "must lie in (0, 1)",
        );
        check(
            &mut issues,
            q.severity_quantile > 0.0 && q.severity_quantile < 1.0,
            "stress.severity_quantile",
            "must lie in (0, 1)",
        );
        for (tier, v) in [
            ("low", &self.reference_fractions.low),
            ("medium", &self.reference_fractions.medium),
            ("high", &self.reference_fractions.high),
        ] {
            check(
                &mut issues,
                v.len() == self.contracts.len(),
                &format!("reference_fractions.{tier}"),
                "must list one value per contract",
            );
        }
        issues
    }
}

// ---------------------------------------------------------------------------
// NAIC report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NaicConfig {
    pub scenario: String,
    #[serde(default)]
    pub output_dir: Option<String>,
    /// Path to a records CSV; `"bundled"` selects the packaged dataset.
    pub data: String,
    pub years: Vec<u32>,
}

impl NaicConfig {
    fn validate_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        check(&mut issues, !self.years.is_empty(), "years", "must not be empty");
        check(&mut issues, !self.data.is_empty(), "data", "must not be empty");
        issues
    }
}
