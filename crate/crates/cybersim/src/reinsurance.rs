//! Reinsurer-side pricing and the insurer's cession decision.
//!
//! Covers rate-for-target-loss-ratio pricing, excess-of-loss layers priced
//! by exceedance or from a simulated loss sample, quota-share economics
//! (profit with cession, ceding commission), and the break-even cession
//! fraction that keeps an insurer solvent at a stress loss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stochastic::LogNormalParams;
use crate::underwriting::LossSample;

/// The loss distribution a reinsurer believes in, with its pricing target.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReinsurerView {
    pub loss_distribution: LogNormalParams,
    pub target_loss_ratio: f64,
    /// Maximum cover the reinsurer will write.
    pub max_cover: f64,
}

/// Quota-share treaty terms.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuotaShareTerms {
    /// Fraction of the portfolio ceded.
    pub rho: f64,
    /// Commission paid back to the cedent, as a fraction of exposure.
    /// May be negative.
    pub ceding_commission: f64,
    /// Rate the reinsurer charges.
    pub reinsurance_rate: f64,
}

/// An excess-of-loss layer: pays losses above `attachment`, up to `layer`
/// ("layer xs attachment").
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XlLayer {
    pub attachment: f64,
    pub layer: f64,
}

impl XlLayer {
    pub fn new(attachment: f64, layer: f64) -> Result<XlLayer> {
        if !(attachment >= 0.0) {
            return Err(Error::domain("attachment must be non-negative"));
        }
        if !(layer > 0.0) {
            return Err(Error::domain("layer size must be positive"));
        }
        Ok(XlLayer { attachment, layer })
    }
}

/// A priced excess-of-loss quote.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct XlQuote {
    pub terms: XlLayer,
    pub rate: f64,
    pub technical_premium: f64,
}

/// Single reinsurance rate that meets the target loss ratio on the expected
/// (truncated) losses: `r = E[I·1{I≤cover}] / (LR × cover)`.
pub fn reinsurance_rate(view: &ReinsurerView) -> Result<f64> {
    if !(view.target_loss_ratio > 0.0 && view.target_loss_ratio <= 1.0) {
        return Err(Error::domain(format!(
            "target loss ratio must lie in (0, 1], got {}",
            view.target_loss_ratio
        )));
    }
    if !(view.max_cover > 0.0) {
        return Err(Error::domain("max cover must be positive"));
    }
    if view.loss_distribution.sigma_log <= 0.0 {
        return Err(Error::domain(
            "degenerate loss distribution cannot be priced",
        ));
    }
    let expected = view.loss_distribution.truncated_expectation(view.max_cover)?;
    Ok(expected / (view.target_loss_ratio * view.max_cover))
}

/// Layer payout `I(L) = (L − B)⁺ − (L − B − A)⁺`, clamped to `[0, A]`.
pub fn xl_indemnity(loss: f64, terms: &XlLayer) -> f64 {
    (loss - terms.attachment).clamp(0.0, terms.layer)
}

/// Benchmark pricing rule: rate equals the probability of the loss
/// exceeding the attachment under the given distribution.
pub fn xl_rate_by_exceedance(dist: &LogNormalParams, terms: &XlLayer) -> Result<f64> {
    if !(terms.attachment > 0.0) {
        return Err(Error::domain(
            "exceedance pricing needs a positive attachment",
        ));
    }
    dist.survival(terms.attachment)
}

/// Empirical XL pricing from a simulated loss sample.
///
/// Returns the fraction of runs whose loss lands inside `(B, B + A]` and the
/// mean layer indemnity over all runs (the technical premium for the layer).
pub fn xl_technical_premium_from_sample(
    sample: &LossSample,
    terms: &XlLayer,
) -> Result<(f64, f64)> {
    if sample.per_run_totals.is_empty() {
        return Err(Error::domain("loss sample is empty"));
    }
    let n = sample.per_run_totals.len() as f64;
    let mut in_window = 0usize;
    let mut indemnity_sum = 0.0;
    for &loss in &sample.per_run_totals {
        if loss > terms.attachment && loss <= terms.attachment + terms.layer {
            in_window += 1;
        }
        indemnity_sum += xl_indemnity(loss, terms);
    }
    Ok((in_window as f64 / n, indemnity_sum / n))
}

/// Insurer profit for a realized loss under a quota-share treaty, with the
/// retained loss depending on the deductible regime.
pub fn insurer_profit(
    loss: f64,
    premium_written: f64,
    exposure: f64,
    qs: &QuotaShareTerms,
    deductible: f64,
) -> f64 {
    let retained = if deductible == 0.0 {
        loss * (1.0 - qs.rho)
    } else if loss <= deductible {
        loss
    } else {
        deductible + (1.0 - qs.rho) * (loss - deductible)
    };
    premium_written * (1.0 - qs.rho) + exposure * qs.rho * qs.ceding_commission - retained
}

/// Commission the reinsurer pays back: the cedent's average premium rate
/// less the reinsurance rate. Negative when reinsurance costs more than the
/// cedent itself charges.
pub fn ceding_commission(avg_premium_rate: f64, reinsurance_rate: f64) -> f64 {
    avg_premium_rate - reinsurance_rate
}

/// Outcome of the break-even cession computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RhoOutcome {
    /// Reserves already cover the stress loss; no reinsurance needed.
    NotNeeded,
    /// The cession fraction that sets profit at the stress loss to −capital.
    Feasible { rho: f64 },
    /// Even full cession leaves the insurer insolvent at the stress loss;
    /// carries the unclamped fraction for reporting.
    InsolventEvenWithFullCession { unclamped: f64 },
    /// The denominator is non-positive while cover is still needed: no
    /// cession fraction can absorb the stress loss.
    NoFeasibleCession,
}

impl RhoOutcome {
    /// The cession fraction to report, clamped to [0, 1].
    pub fn rho(&self) -> f64 {
        match *self {
            RhoOutcome::NotNeeded => 0.0,
            RhoOutcome::Feasible { rho } => rho,
            RhoOutcome::InsolventEvenWithFullCession { .. } => 1.0,
            RhoOutcome::NoFeasibleCession => f64::NAN,
        }
    }
}

/// Smallest quota-share fraction that keeps the insurer solvent if the
/// stress loss materializes: solves `profit(stress) = −capital` for rho.
pub fn optimal_rho(
    stress_loss: f64,
    premium_written: f64,
    capital: f64,
    exposure: f64,
    cc: f64,
) -> Result<RhoOutcome> {
    if !(exposure > 0.0) {
        return Err(Error::domain("exposure must be positive"));
    }
    if premium_written + capital >= stress_loss {
        return Ok(RhoOutcome::NotNeeded);
    }
    let numerator = stress_loss - premium_written - capital;
    let denominator = stress_loss - premium_written + exposure * cc;
    if denominator <= 0.0 {
        return Ok(RhoOutcome::NoFeasibleCession);
    }
    let rho = numerator / denominator;
    if rho > 1.0 {
        Ok(RhoOutcome::InsolventEvenWithFullCession { unclamped: rho })
    } else {
        Ok(RhoOutcome::Feasible { rho })
    }
}

/// How [`capped_loss_sample`] treats runs above the attachment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapMode {
    /// Zero out any run whose total exceeds the attachment — the convention
    /// the shipped benchmark tables are calibrated against.
    ZeroRunsAboveAttachment,
    /// Subtract the layer indemnity from each run instead.
    SubtractIndemnity(XlLayer),
}

/// Re-state a loss sample as if reinsurance bound above `attachment`.
pub fn capped_loss_sample(sample: &LossSample, attachment: f64, mode: CapMode) -> Result<LossSample> {
    if !(attachment > 0.0) {
        return Err(Error::domain("attachment must be positive"));
    }
    let totals: Vec<f64> = match mode {
        CapMode::ZeroRunsAboveAttachment => sample
            .per_run_totals
            .iter()
            .map(|&x| if x > attachment { 0.0 } else { x })
            .collect(),
        CapMode::SubtractIndemnity(layer) => sample
            .per_run_totals
            .iter()
            .map(|&x| x - xl_indemnity(x, &layer))
            .collect(),
    };
    Ok(LossSample::from_totals(totals, sample.seed))
}
