//! Kernel density estimates with Gaussian-mixture kernels, and their exact
//! ISE and MISE against normal-mixture targets.

use crate::densities::NormalMixture;
use crate::error::{Error, Result};
use crate::mixture::{normal_pdf, SignedGaussianMixture};
use crate::optimize::{minimize_on_log_grid, GridScan, SearchOptions};
use crate::pairwise::{pair_sum, sorted_sample, PairKernel};

const KERNEL_MASS_TOL: f64 = 1e-10;

fn check_kernel(kernel: &SignedGaussianMixture) -> Result<()> {
    if !kernel.is_centered() {
        return Err(Error::InvalidParameter("kernel must be centered at 0".into()));
    }
    let mass = kernel.total_mass();
    if (mass - 1.0).abs() > KERNEL_MASS_TOL {
        return Err(Error::InvalidParameter(format!(
            "kernel must integrate to 1, got {mass}"
        )));
    }
    Ok(())
}

fn check_bandwidth(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "bandwidth must be positive and finite, got {h}"
        )))
    }
}

/// `f̂_h(x) = (1/(nh)) Σ K((x − X_i)/h)`.
#[derive(Clone, Debug)]
pub struct KernelEstimate {
    data: Vec<f64>,
    bandwidth: f64,
    kernel: SignedGaussianMixture,
}

impl KernelEstimate {
    pub fn new(data: &[f64], bandwidth: f64, kernel: SignedGaussianMixture) -> Result<Self> {
        let data = sorted_sample(data)?;
        check_bandwidth(bandwidth)?;
        check_kernel(&kernel)?;
        Ok(Self {
            data,
            bandwidth,
            kernel,
        })
    }

    /// Estimate with the Gaussian kernel.
    pub fn gaussian(data: &[f64], bandwidth: f64) -> Result<Self> {
        Self::new(data, bandwidth, SignedGaussianMixture::standard_normal())
    }

    /// The observations, sorted.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn kernel(&self) -> &SignedGaussianMixture {
        &self.kernel
    }

    pub fn estimate_at(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let sum: f64 = self
            .data
            .iter()
            .map(|&xi| self.kernel.evaluate((x - xi) / h))
            .sum();
        sum / (self.data.len() as f64 * h)
    }

    /// The estimate as a mixture with `n · len(K)` components.
    pub fn to_mixture(&self) -> SignedGaussianMixture {
        let n = self.data.len() as f64;
        let h = self.bandwidth;
        let kh = self.kernel.rescale(h).scale_weights(1.0 / n);
        let mut out: Option<SignedGaussianMixture> = None;
        for &xi in &self.data {
            let shifted = kh.shift(xi);
            out = Some(match out {
                Some(acc) => acc.add(&shifted),
                None => shifted,
            });
        }
        out.expect("sample has at least two points")
    }

    /// `R(f̂)` from the pairwise closed form.
    pub fn roughness(&self) -> f64 {
        let kk = PairKernel::new(&self.kernel.convolve(&self.kernel));
        roughness_of_estimate(&self.data, &kk, self.kernel.roughness(), self.bandwidth)
    }

    /// `ISE = R(f̂) − 2∫f̂f + R(f)`, exact.
    pub fn exact_ise(&self, f: &NormalMixture) -> f64 {
        IseCriterion::new(&self.data, &self.kernel, f).evaluate(self.bandwidth)
    }
}

/// `R(f̂_h) = (1/(n²h)) [n R(K) + 2 Σ_{i<j} (K⋆K)((X_j − X_i)/h)]`.
fn roughness_of_estimate(sorted: &[f64], kk: &PairKernel, r_k: f64, h: f64) -> f64 {
    let n = sorted.len() as f64;
    (n * r_k + 2.0 * pair_sum(sorted, kk, h)) / (n * n * h)
}

/// `h ↦ ISE(h)` for a fixed sample, kernel and target.
#[derive(Clone, Debug)]
pub struct IseCriterion {
    data: Vec<f64>,
    kernel: SignedGaussianMixture,
    kk: PairKernel,
    r_k: f64,
    target: NormalMixture,
    r_f: f64,
}

impl IseCriterion {
    /// `data` need not be sorted. Panics on an invalid kernel or a sample
    /// with fewer than two points; use [`KernelEstimate::new`] to validate.
    pub fn new(data: &[f64], kernel: &SignedGaussianMixture, target: &NormalMixture) -> Self {
        let data = sorted_sample(data).expect("valid sample");
        check_kernel(kernel).expect("valid kernel");
        Self {
            data,
            kernel: kernel.clone(),
            kk: PairKernel::new(&kernel.convolve(kernel)),
            r_k: kernel.roughness(),
            target: target.clone(),
            r_f: target.mixture().roughness(),
        }
    }

    pub fn evaluate(&self, h: f64) -> f64 {
        let r_hat = roughness_of_estimate(&self.data, &self.kk, self.r_k, h);
        let mut cross = 0.0;
        for k in self.kernel.components() {
            for c in self.target.mixture().components() {
                let scale = (k.scale * h).hypot(c.scale);
                let w = k.weight * c.weight;
                let s: f64 = self.data.iter().map(|&x| normal_pdf(x - c.mean, scale)).sum();
                cross += w * s;
            }
        }
        cross /= self.data.len() as f64;
        (r_hat - 2.0 * cross + self.r_f).max(0.0)
    }
}

/// Exact `MISE(h) = R(K)/(nh) + (1 − 1/n)∫(K_h⋆f)² − 2∫(K_h⋆f)f + R(f)`.
pub fn exact_mise(kernel: &SignedGaussianMixture, f: &NormalMixture, n: usize, h: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewObservations);
    }
    check_bandwidth(h)?;
    check_kernel(kernel)?;
    Ok(mise_unchecked(kernel, f, n, h))
}

fn mise_unchecked(kernel: &SignedGaussianMixture, f: &NormalMixture, n: usize, h: f64) -> f64 {
    let n = n as f64;
    let fm = f.mixture();
    let smoothed = kernel.rescale(h).convolve(fm);
    kernel.roughness() / (n * h) + (1.0 - 1.0 / n) * smoothed.roughness() - 2.0 * smoothed.inner_product(fm)
        + fm.roughness()
}

/// Exact MISE on the default search grid, for inspecting its shape.
pub fn mise_scan(kernel: &SignedGaussianMixture, f: &NormalMixture, n: usize) -> Result<GridScan> {
    if n < 2 {
        return Err(Error::TooFewObservations);
    }
    check_kernel(kernel)?;
    let opts = SearchOptions::default();
    let (lo, hi) = opts.range(f.sd(), n);
    Ok(GridScan::new(
        |h| mise_unchecked(kernel, f, n, h),
        lo,
        hi,
        opts.grid_points,
    ))
}

/// `h₀`, the minimizer of exact MISE.
pub fn mise_optimal_bandwidth(kernel: &SignedGaussianMixture, f: &NormalMixture, n: usize) -> Result<f64> {
    mise_optimal_bandwidth_with(kernel, f, n, &SearchOptions::default())
}

pub fn mise_optimal_bandwidth_with(
    kernel: &SignedGaussianMixture,
    f: &NormalMixture,
    n: usize,
    opts: &SearchOptions,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewObservations);
    }
    check_kernel(kernel)?;
    let (lo, hi) = opts.range(f.sd(), n);
    let (min, _) = minimize_on_log_grid(
        |h| mise_unchecked(kernel, f, n, h),
        lo,
        hi,
        opts.grid_points,
        opts.rel_tol,
    );
    if min.boundary {
        return Err(Error::MinimizerAtBoundary);
    }
    Ok(min.argmin)
}

/// `ĥ₀`, the minimizer of exact ISE for the given sample, searched over the
/// same range as [`mise_optimal_bandwidth`].
pub fn ise_optimal_bandwidth(data: &[f64], kernel: &SignedGaussianMixture, f: &NormalMixture) -> Result<f64> {
    ise_optimal_bandwidth_with(data, kernel, f, &SearchOptions::default())
}

pub fn ise_optimal_bandwidth_with(
    data: &[f64],
    kernel: &SignedGaussianMixture,
    f: &NormalMixture,
    opts: &SearchOptions,
) -> Result<f64> {
    sorted_sample(data)?;
    check_kernel(kernel)?;
    let crit = IseCriterion::new(data, kernel, f);
    let (lo, hi) = opts.range(f.sd(), data.len());
    let (min, _) = minimize_on_log_grid(|h| crit.evaluate(h), lo, hi, opts.grid_points, opts.rel_tol);
    if min.boundary {
        return Err(Error::MinimizerAtBoundary);
    }
    Ok(min.argmin)
}
