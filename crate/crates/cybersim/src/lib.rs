//! Monte Carlo simulator of a three-tier cyber-insurance market
//! (buyers → insurers → reinsurers), exposing the underlying actuarial
//! pricing primitives as a library.
//!
//! The crate is organized along the market tiers:
//!
//! * [`stochastic`] — frequency/severity distributions, sampling, fitting,
//!   and numerical quadrature.
//! * [`buyer`] — expected-utility insurance demand under CARA preferences.
//! * [`underwriting`] — insurer portfolios, technical premiums, loadings,
//!   loss simulation, and stress tests.
//! * [`reinsurance`] — quota-share and excess-of-loss pricing plus the
//!   insurer's optimal cession decision.
//! * [`scenarios`] — the declarative harness that reproduces the shipped
//!   market studies and compares reports against golden tables.
//!
//! A narrative guide with runnable examples lives in `book/`; its snippets
//! are compiled as doc-tests via the [`guide`] module.

pub mod buyer;
pub mod error;
pub mod money;
pub mod reinsurance;
pub mod seed;
pub mod stochastic;
pub mod underwriting;

pub use error::{Error, Result};
pub use money::Money;
pub use seed::RngSeed;
