//! Frequency/severity distribution engine: parameterization, densities,
//! quantiles, truncated expectations, sampling, and fitting.

pub mod lognormal;
pub mod normal;
pub mod poisson;
pub mod quadrature;
pub mod sample;

pub use lognormal::{fit_lognormal, CashMoments, LogNormalParams, SigmaConvention};
pub use poisson::PoissonParams;
pub use sample::{compound_total, sample_frequency, sample_severity};
