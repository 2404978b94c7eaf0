//! Least squares cross-validation and indirect cross-validation.
//!
//! For a kernel `K` (any centered signed Gaussian mixture) the criterion is
//!
//! ```text
//! LSCV(h) = R(K)/(nh) + (1/(n²h)) Σ_{i≠j} (K⋆K)(d_ij/h) − (2/(n(n−1)h)) Σ_{i≠j} K(d_ij/h)
//! ```
//!
//! with `d_ij = X_i − X_j`. Indirect cross-validation minimizes this with a
//! selection kernel `L(·; α, σ)` and multiplies the minimizer by the
//! rescaling constant `C` of `L` to obtain a Gaussian-kernel bandwidth.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixture::SignedGaussianMixture;
use crate::optimize::{GridScan, Minimum, SearchOptions, TracePoint};
use crate::pairwise::{pair_sum, sample_sd, sorted_sample, PairKernel};
use crate::selection_kernel::{SelectionKernel, GAUSSIAN_ROUGHNESS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "LSCV")]
    Lscv,
    #[serde(rename = "ICV")]
    Icv,
    #[serde(rename = "ICV_capped")]
    IcvCapped,
    #[serde(rename = "Oversmoothed")]
    Oversmoothed,
}

/// Outcome of a bandwidth selector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandwidthSelection {
    pub method: Method,
    /// Bandwidth for the Gaussian-kernel estimator.
    pub bandwidth: f64,
    /// `b̂_UCV`, the LSCV minimizer under the selection kernel (ICV only).
    pub selection_bandwidth: Option<f64>,
    /// `C` with `bandwidth = C · selection_bandwidth` (ICV only).
    pub rescale_constant: Option<f64>,
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    /// Criterion value at the selected point; absent for the oversmoothed rule.
    pub criterion_minimum: Option<f64>,
    pub boundary_hit: bool,
    /// The criterion was still falling at the smallest bandwidth searched,
    /// the signature of `LSCV(h) → −∞` as `h → 0`.
    pub degenerate_zero: bool,
    /// The oversmoothed cap replaced the ICV bandwidth.
    pub capped: bool,
    #[serde(skip)]
    pub trace: Vec<TracePoint>,
}

/// `h ↦ LSCV(h)` for a fixed sample and kernel.
#[derive(Clone, Debug)]
pub struct LscvCriterion {
    data: Vec<f64>,
    pairs: PairKernel,
    r_k: f64,
}

impl LscvCriterion {
    pub fn new(data: &[f64], kernel: &SignedGaussianMixture) -> Result<Self> {
        let data = sorted_sample(data)?;
        if !kernel.is_centered() {
            return Err(Error::InvalidParameter("kernel must be centered at 0".into()));
        }
        let n = data.len() as f64;
        let g = kernel
            .convolve(kernel)
            .scale_weights(1.0 / (n * n))
            .add(&kernel.scale_weights(-2.0 / (n * (n - 1.0))));
        Ok(Self {
            data,
            pairs: PairKernel::new(&g),
            r_k: kernel.roughness(),
        })
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn evaluate(&self, h: f64) -> f64 {
        let n = self.data.len() as f64;
        self.r_k / (n * h) + 2.0 * pair_sum(&self.data, &self.pairs, h) / h
    }
}

/// `LSCV(h)` for one bandwidth.
pub fn lscv(data: &[f64], kernel: &SignedGaussianMixture, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive, got {h}"
        )));
    }
    Ok(LscvCriterion::new(data, kernel)?.evaluate(h))
}

fn distinct_values(sorted: &[f64]) -> usize {
    1 + sorted.windows(2).filter(|w| w[1] != w[0]).count()
}

/// `ĥ_UCV`: minimizer of `LSCV` over the default search grid.
pub fn minimize_lscv(data: &[f64], kernel: &SignedGaussianMixture) -> Result<BandwidthSelection> {
    minimize_lscv_with(data, kernel, &SearchOptions::default())
}

/// Scans the grid, then refines the global grid minimum. If the criterion
/// is still decreasing at the lower end of the grid the sample is flagged
/// `degenerate_zero`, and the smallest interior local minimum is reported
/// instead; without one the lower boundary is returned with `boundary_hit`.
pub fn minimize_lscv_with(
    data: &[f64],
    kernel: &SignedGaussianMixture,
    opts: &SearchOptions,
) -> Result<BandwidthSelection> {
    let crit = LscvCriterion::new(data, kernel)?;
    let sorted = crit.data();
    if distinct_values(sorted) < 2 {
        return Err(Error::NoSpread);
    }
    let (lo, hi) = opts.range(sample_sd(sorted), sorted.len());
    let f = |h: f64| crit.evaluate(h);
    let scan = GridScan::new(f, lo, hi, opts.grid_points);
    let degenerate_zero = scan.decreasing_at_lower_end();
    let min: Minimum = if degenerate_zero {
        match scan.interior_local_minima().first() {
            Some(&i) => scan.refine(f, i, opts.rel_tol),
            None => scan.refine(f, scan.argmin_index(), opts.rel_tol),
        }
    } else {
        scan.refine(f, scan.argmin_index(), opts.rel_tol)
    };
    Ok(BandwidthSelection {
        method: Method::Lscv,
        bandwidth: min.argmin,
        selection_bandwidth: None,
        rescale_constant: None,
        alpha: None,
        sigma: None,
        criterion_minimum: Some(min.value),
        boundary_hit: min.boundary,
        degenerate_zero,
        capped: false,
        trace: scan.points,
    })
}

/// `ĥ_ICV = C · b̂_UCV` for the selection kernel `L(·; α, σ)`.
pub fn icv_bandwidth(data: &[f64], alpha: f64, sigma: f64) -> Result<BandwidthSelection> {
    let kernel = SelectionKernel::new(alpha, sigma)?;
    icv_bandwidth_with(data, &kernel, &SearchOptions::default())
}

pub fn icv_bandwidth_with(
    data: &[f64],
    kernel: &SelectionKernel,
    opts: &SearchOptions,
) -> Result<BandwidthSelection> {
    let inner = minimize_lscv_with(data, kernel.mixture(), opts)?;
    let c = kernel.rescale_constant();
    Ok(BandwidthSelection {
        method: Method::Icv,
        bandwidth: c * inner.bandwidth,
        selection_bandwidth: Some(inner.bandwidth),
        rescale_constant: Some(c),
        alpha: Some(kernel.alpha()),
        sigma: Some(kernel.sigma()),
        ..inner
    })
}

/// `(243 R(φ) / 35)^{1/5} ≈ 1.1439`, the oversmoothing constant for the
/// Gaussian kernel (Terrell, 1990).
pub fn oversmoothed_constant() -> f64 {
    (243.0 * GAUSSIAN_ROUGHNESS / 35.0).powf(0.2)
}

/// `ĥ_OS = 1.1439 · s · n^{-1/5}` with `s` the sample standard deviation.
pub fn oversmoothed_bandwidth(data: &[f64]) -> Result<f64> {
    if data.len() < 2 {
        return Err(Error::TooFewObservations);
    }
    let s = sample_sd(data);
    if !(s > 0.0) {
        return Err(Error::NoSpread);
    }
    Ok(oversmoothed_constant() * s * (data.len() as f64).powf(-0.2))
}

pub fn oversmoothed_selection(data: &[f64]) -> Result<BandwidthSelection> {
    Ok(BandwidthSelection {
        method: Method::Oversmoothed,
        bandwidth: oversmoothed_bandwidth(data)?,
        selection_bandwidth: None,
        rescale_constant: None,
        alpha: None,
        sigma: None,
        criterion_minimum: None,
        boundary_hit: false,
        degenerate_zero: false,
        capped: false,
        trace: Vec::new(),
    })
}

/// Applies the cap `min(ĥ_ICV, ĥ_OS)` to an ICV selection.
pub fn cap_selection(icv: BandwidthSelection, h_os: f64) -> BandwidthSelection {
    let capped = icv.bandwidth > h_os;
    BandwidthSelection {
        method: Method::IcvCapped,
        bandwidth: icv.bandwidth.min(h_os),
        boundary_hit: icv.boundary_hit || capped,
        capped,
        ..icv
    }
}

/// `ĥ*_ICV = min(ĥ_ICV, ĥ_OS)`.
pub fn icv_capped(data: &[f64], alpha: f64, sigma: f64) -> Result<BandwidthSelection> {
    let icv = icv_bandwidth(data, alpha, sigma)?;
    Ok(cap_selection(icv, oversmoothed_bandwidth(data)?))
}

pub fn icv_capped_with(
    data: &[f64],
    kernel: &SelectionKernel,
    opts: &SearchOptions,
) -> Result<BandwidthSelection> {
    let icv = icv_bandwidth_with(data, kernel, opts)?;
    Ok(cap_selection(icv, oversmoothed_bandwidth(data)?))
}
