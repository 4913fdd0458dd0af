//! Finite-population survey-sampling estimator laboratory.
//!
//! The crate implements the classical toolkit for estimating a population
//! mean or variance with auxiliary information, together with the machinery
//! needed to validate every analytic claim numerically:
//!
//! - [`population`] / [`summary`] / [`design`]: unit-level populations,
//!   moment summaries, and SRSWOR design coefficients.
//! - [`moments`]: higher-order moment ratios (`C_pq`, standardized
//!   `∂_pqr`) and stratified `V_rs` quantities.
//! - [`mean_family`]: five ratio-type mean estimators with first- and
//!   second-order bias/MSE in SRS and stratified sampling.
//! - [`dual`]: dual (transformed-auxiliary) ratio/product estimators and
//!   the dual ratio-cum-product family with its optimum.
//! - [`attributes`]: mean estimation from two auxiliary binary attributes.
//! - [`systematic`]: systematic sampling under non-response
//!   (Hansen–Hurwitz) and the one-parameter factor-type family.
//! - [`variance`]: variance estimation with two auxiliary variables,
//!   single-phase and double sampling.
//! - [`oracle`]: exact enumeration over all samples and seeded,
//!   reproducible Monte Carlo — the ground truth the analytic formulas are
//!   checked against.
//! - [`datasets`] / [`reports`] / [`io`] / [`render`]: bundled reference
//!   datasets with provenance, table-reproduction reports with per-cell
//!   tolerance classes, CSV ingestion, and text/CSV/JSON-lines output.
//!
//! All types are immutable after construction and all operations are pure,
//! so everything is safe to share across threads.

#![forbid(unsafe_code)]

pub mod attributes;
pub mod datasets;
pub mod design;
pub mod dual;
pub mod error;
pub mod io;
pub mod mean_family;
pub mod moments;
pub mod oracle;
pub mod population;
pub mod render;
pub mod reports;
pub mod summary;
pub mod systematic;
pub mod variance;

pub use design::DesignCoefficients;
pub use error::{EstError, Result};
pub use population::FinitePopulation;
pub use summary::{AttributeSummary, Divisor, SummaryStats};
