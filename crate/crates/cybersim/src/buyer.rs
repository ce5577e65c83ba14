//! Expected-utility insurance demand for a single buyer.
//!
//! The buyer faces loss / no-loss states, holds CARA preferences, observes a
//! premium *rate* p (cash premium = p·C), and picks the coverage C that
//! maximizes expected utility, up to the contract limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Everything that characterizes one insurance buyer.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BuyerProfile {
    /// Initial wealth W.
    pub wealth: f64,
    /// CARA coefficient (1/dollars); must be positive.
    pub risk_aversion: f64,
    /// Probability of the loss state.
    pub loss_probability: f64,
    /// Loss suffered in the loss state.
    pub loss_size: f64,
    /// Deductible retained by the buyer.
    pub deductible: f64,
    /// Contract ceiling on coverage.
    pub limit: f64,
}

impl BuyerProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.risk_aversion > 0.0) {
            return Err(Error::domain(format!(
                "risk aversion must be positive, got {}",
                self.risk_aversion
            )));
        }
        if !(0.0..=1.0).contains(&self.loss_probability) {
            return Err(Error::domain(format!(
                "loss probability must lie in [0, 1], got {}",
                self.loss_probability
            )));
        }
        if !(self.deductible >= 0.0) {
            return Err(Error::domain("deductible must be non-negative"));
        }
        if !(self.limit > 0.0) {
            return Err(Error::domain("coverage limit must be positive"));
        }
        Ok(())
    }
}

/// CARA utility `u(w) = (1 − e^{−αw}) / α`.
///
/// Evaluated through `exp_m1` so the near-risk-neutral regime (α → 0⁺)
/// degrades gracefully to `u(w) ≈ w` instead of losing all precision.
pub fn cara_utility(wealth: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!(
            "CARA coefficient must be positive, got {alpha}; use a linear \
             utility for the risk-neutral case"
        )));
    }
    Ok(-(-alpha * wealth).exp_m1() / alpha)
}

/// One contingent state: probability, loss, indemnity received, deductible.
#[derive(Debug, Clone, Copy)]
pub struct LossState {
    pub probability: f64,
    pub loss: f64,
    pub coverage: f64,
    pub deductible: f64,
}

/// Expected utility over a finite list of loss states plus the residual
/// no-loss state; `total_premium` is the cash premium paid up front.
pub fn expected_utility_states(
    wealth: f64,
    alpha: f64,
    total_premium: f64,
    states: &[LossState],
) -> Result<f64> {
    let p_loss: f64 = states.iter().map(|s| s.probability).sum();
    if !(0.0..=1.0 + 1e-12).contains(&p_loss) {
        return Err(Error::domain(format!(
            "state probabilities must sum to at most 1, got {p_loss}"
        )));
    }
    let mut eu = (1.0 - p_loss) * cara_utility(wealth - total_premium, alpha)?;
    for s in states {
        let w = wealth - total_premium - s.loss + s.coverage - s.deductible;
        eu += s.probability * cara_utility(w, alpha)?;
    }
    Ok(eu)
}

/// Two-state expected utility of buying `coverage` at `premium_rate`.
pub fn expected_utility(profile: &BuyerProfile, premium_rate: f64, coverage: f64) -> Result<f64> {
    profile.validate()?;
    if coverage < 0.0 || coverage > profile.limit {
        return Err(Error::domain(format!(
            "coverage {coverage} outside [0, limit={}]",
            profile.limit
        )));
    }
    expected_utility_states(
        profile.wealth,
        profile.risk_aversion,
        premium_rate * coverage,
        &[LossState {
            probability: profile.loss_probability,
            loss: profile.loss_size,
            coverage,
            deductible: profile.deductible,
        }],
    )
}

/// Grid search for the utility-maximizing coverage on `[0, limit]`.
/// Ties break toward the smaller coverage.
///
/// Internally maximizes the wealth-free transform of CARA expected utility
/// (EU = 1/α − e^{−αW}/α · J(C), so argmax EU = argmin J). This keeps the
/// argmax exact for any wealth level, where the raw utility would drown the
/// coverage signal in the e^{−αW} factor.
pub fn optimal_coverage(profile: &BuyerProfile, premium_rate: f64, grid_step: f64) -> Result<f64> {
    profile.validate()?;
    if !(grid_step > 0.0) {
        return Err(Error::domain(format!(
            "grid step must be positive, got {grid_step}"
        )));
    }
    let alpha = profile.risk_aversion;
    let pi = profile.loss_probability;
    let objective = |c: f64| {
        // J(C) = (1−π)·e^{αpC} + π·e^{α(pC + L − C + D)}, to be minimized.
        let premium = premium_rate * c;
        (1.0 - pi) * (alpha * premium).exp()
            + pi * (alpha * (premium + profile.loss_size - c + profile.deductible)).exp()
    };
    let mut best_c = 0.0;
    let mut best_j = objective(0.0);
    let steps = (profile.limit / grid_step).ceil() as u64;
    for i in 1..=steps {
        let c = (i as f64 * grid_step).min(profile.limit);
        let j = objective(c);
        if j < best_j {
            best_j = j;
            best_c = c;
        }
    }
    Ok(best_c)
}
