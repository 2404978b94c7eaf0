//! Gaussian kernel density estimation with bandwidths chosen by least
//! squares cross-validation (LSCV) or indirect cross-validation (ICV).
//!
//! Every kernel and target density here is a finite signed mixture of
//! Gaussians, so convolutions, roughness, moments, ISE and MISE have closed
//! forms. ICV runs LSCV with a selection kernel
//! `L(u; α, σ) = (1+α)φ(u) − (α/σ)φ(u/σ)` and rescales the minimizer to the
//! Gaussian kernel.
//!
//! ```
//! use icv_kde::{icv_capped, model_params, SuiteDensity};
//!
//! let data = SuiteDensity::Bimodal.density().sample(200, 7).unwrap();
//! let p = model_params(200).unwrap();
//! let sel = icv_capped(&data, p.alpha, p.sigma).unwrap();
//! assert!(sel.bandwidth > 0.0);
//! ```

// `!(x > 0.0)` is used on purpose so NaN fails positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cross_validation;
pub mod densities;
pub mod error;
pub mod estimation;
pub mod local_icv;
pub mod mixture;
pub mod optimize;
pub mod pairwise;
pub mod selection_kernel;
pub mod simulation;
pub mod spline;

pub use asymptotics::{
    a_alpha, asymptotic_bandwidths, mse_opt, optimal_alpha, relative_error_terms, sigma_opt,
    theory_constants, AsymptoticMse, TheoryConstants,
};
pub use cross_validation::{
    cap_selection, icv_bandwidth, icv_bandwidth_with, icv_capped, icv_capped_with, lscv, minimize_lscv,
    minimize_lscv_with, oversmoothed_bandwidth, oversmoothed_constant, oversmoothed_selection,
    BandwidthSelection, LscvCriterion, Method,
};
pub use densities::{standard_suite, DensityFunctionals, NormalMixture, SuiteDensity};
pub use error::{Error, Result};
pub use estimation::{
    exact_mise, ise_optimal_bandwidth, ise_optimal_bandwidth_with, mise_optimal_bandwidth,
    mise_optimal_bandwidth_with, IseCriterion, KernelEstimate,
};
pub use local_icv::{
    average_squared_error, default_grid, local_bandwidths, local_bandwidths_with, local_estimate,
    uniform_grid, LocalBandwidthFunction, LocalCriterion, LocalMethod, LocalOptions, MinimizerRule,
};
pub use mixture::{Component, SignedGaussianMixture};
pub use optimize::SearchOptions;
pub use selection_kernel::{model_params, robust_alpha_threshold, KernelClass, ModelParams, SelectionKernel};
pub use simulation::{
    ingest, ingest_path, run_cell, run_study, summarize, Dataset, KernelChoice, ReplicationRecord, StudyCell,
    StudyConfig, StudySummary,
};
