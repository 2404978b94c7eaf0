//! Locally varying bandwidths by windowed cross-validation.
//!
//! At a point `x` the local criterion with window `w` is
//!
//! ```text
//! ICV(x, b) = (1/w) ∫ φ((x−u)/w) f̂_b(u)² du − (2/(nw)) Σ_i φ((x−X_i)/w) f̂_{b,−i}(X_i)
//! ```
//!
//! where `f̂_b` uses a selection kernel. Its minimizer `b̂(x)` is rescaled to
//! a Gaussian-kernel bandwidth `ĥ(x) = C b̂(x)` on a grid of points, and a
//! natural cubic spline interpolates between grid points.

use rayon::prelude::*;

use crate::densities::NormalMixture;
use crate::error::{Error, Result};
use crate::mixture::{normal_pdf, SignedGaussianMixture, INV_SQRT_2PI};
use crate::optimize::{GridScan, Minimum};
use crate::pairwise::{
    gaussian_row, has_wide_vectors, product_row, sample_sd, sorted_sample, ProductTerm, TAIL_CUTOFF,
};
use crate::selection_kernel::SelectionKernel;
use crate::spline::NaturalCubicSpline;

/// The 61-point grid `−3.0, −2.9, …, 3.0`.
pub fn default_grid() -> Vec<f64> {
    (0..=60).map(|i| (i as f64 - 30.0) / 10.0).collect()
}

/// `lo, lo+step, …` up to `hi` (inclusive within a tenth of a step).
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi > lo) {
        return Err(Error::InvalidParameter(format!(
            "grid needs lo < hi and step > 0, got {lo}:{hi}:{step}"
        )));
    }
    let count = ((hi - lo) / step + 0.1).floor() as usize;
    Ok((0..=count).map(|i| lo + step * i as f64).collect())
}

/// `(x, b) ↦ ICV(x, b)` for a sample, kernel and window.
#[derive(Clone, Debug)]
pub struct LocalCriterion {
    data: Vec<f64>,
    /// `(weight, scale)` of the centered kernel.
    components: Vec<(f64, f64)>,
    max_scale: f64,
    window: f64,
}

impl LocalCriterion {
    pub fn new(data: &[f64], kernel: &SignedGaussianMixture, window: f64) -> Result<Self> {
        let data = sorted_sample(data)?;
        if !(window > 0.0 && window.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "window must be positive and finite, got {window}"
            )));
        }
        if !kernel.is_centered() {
            return Err(Error::InvalidParameter("kernel must be centered at 0".into()));
        }
        let k = kernel.simplify();
        Ok(Self {
            data,
            components: k.components().iter().map(|c| (c.weight, c.scale)).collect(),
            max_scale: k.max_scale(),
            window,
        })
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn index_range(&self, x: f64, reach: f64) -> (usize, usize) {
        let lo = self.data.partition_point(|&v| v < x - reach);
        let hi = self.data.partition_point(|&v| v <= x + reach);
        (lo, hi)
    }

    /// `(1/w) ∫ φ((x−u)/w) f̂_b(u)² du`, summing closed-form triple-Gaussian
    /// products over pairs of observations and kernel components.
    pub fn windowed_roughness(&self, x: f64, b: f64) -> f64 {
        let w2 = self.window * self.window;
        // Per component pair: coefficient, exponent parameters, pair reach.
        let mut terms = Vec::with_capacity(self.components.len().pow(2));
        for &(wk, sk) in &self.components {
            for &(wl, sl) in &self.components {
                let a2 = sk * sk * b * b;
                let c2 = sl * sl * b * b;
                let s2 = a2 + c2;
                let t2 = w2 + a2 * c2 / s2;
                let coef = wk * wl * INV_SQRT_2PI * INV_SQRT_2PI / (s2 * t2).sqrt();
                let term = ProductTerm {
                    p: 0.5 / s2,
                    q: 0.5 / t2,
                    share: c2 / s2,
                };
                terms.push((coef, term, TAIL_CUTOFF * s2.sqrt()));
            }
        }
        let window_reach = TAIL_CUTOFF * (w2 + (self.max_scale * b).powi(2)).sqrt();
        let (lo, hi) = self.index_range(x, window_reach);
        let wide = has_wide_vectors();
        let mut total = 0.0;
        for i in lo..hi {
            let xi = self.data[i];
            let tail = &self.data[i + 1..hi];
            let r2 = (x - xi) * (x - xi);
            for &(coef, term, reach) in &terms {
                let end = tail.partition_point(|&v| v - xi <= reach);
                let diagonal = (-r2 * term.q).exp();
                total += coef * (diagonal + product_row(&tail[..end], xi, x, term, wide));
            }
        }
        let n = self.data.len() as f64;
        total / (n * n)
    }

    /// `(2/(nw)) Σ_i φ((x−X_i)/w) f̂_{b,−i}(X_i)`.
    pub fn leave_one_out_term(&self, x: f64, b: f64) -> f64 {
        let n = self.data.len();
        let (lo, hi) = self.index_range(x, TAIL_CUTOFF * self.window);
        // Per component: normalizing weight, exponent factor, reach.
        let terms: Vec<(f64, f64, f64)> = self
            .components
            .iter()
            .map(|&(wk, sk)| {
                let s = sk * b;
                (wk * INV_SQRT_2PI / s, 0.5 / (s * s), TAIL_CUTOFF * s)
            })
            .collect();
        let wide = has_wide_vectors();
        let mut total = 0.0;
        for i in lo..hi {
            let xi = self.data[i];
            let mut loo = 0.0;
            for &(coef, a, reach) in &terms {
                let j_lo = self.data[..i].partition_point(|&v| v < xi - reach);
                let j_hi = i + 1 + self.data[i + 1..].partition_point(|&v| v <= xi + reach);
                let left = gaussian_row(&self.data[j_lo..i], xi, a, wide);
                let right = gaussian_row(&self.data[i + 1..j_hi], xi, a, wide);
                loo += coef * (left + right);
            }
            total += normal_pdf(x - xi, self.window) * loo / (n - 1) as f64;
        }
        2.0 * total / n as f64
    }

    pub fn evaluate(&self, x: f64, b: f64) -> f64 {
        self.windowed_roughness(x, b) - self.leave_one_out_term(x, b)
    }
}

/// Smallest local minimizer of `curve` over a log grid on `[lo, hi]`.
///
/// Interior grid points strictly below both neighbours are local minima; the
/// one with the smallest abscissa is refined by golden section. Without any,
/// the global grid minimum is returned flagged as a boundary solution.
pub fn smallest_local_minimizer<F: FnMut(f64) -> f64>(
    mut curve: F,
    range: (f64, f64),
    grid_points: usize,
    rel_tol: f64,
) -> Minimum {
    let scan = GridScan::new(&mut curve, range.0, range.1, grid_points);
    match scan.interior_local_minima().first() {
        Some(&i) => scan.refine(&mut curve, i, rel_tol),
        None => {
            let i = scan.argmin_index();
            Minimum {
                argmin: scan.points[i].h,
                value: scan.points[i].value,
                boundary: true,
            }
        }
    }
}

/// How the criterion at each grid point is minimized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimizerRule {
    SmallestLocal,
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LocalMethod {
    /// Selection kernel `L(·; α, σ)`, rescaled by its `C`.
    Icv { alpha: f64, sigma: f64 },
    /// Gaussian kernel for both selection and estimation.
    Lscv,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalOptions {
    pub grid_points: usize,
    pub rel_tol: f64,
    pub lower_factor: f64,
    pub upper_factor: f64,
    /// Rule used for local ICV; local LSCV always uses the global minimum.
    pub icv_rule: MinimizerRule,
}

impl Default for LocalOptions {
    fn default() -> Self {
        Self {
            grid_points: 60,
            rel_tol: 1e-4,
            lower_factor: 1e-3,
            upper_factor: 10.0,
            icv_rule: MinimizerRule::SmallestLocal,
        }
    }
}

/// Bandwidths selected on a grid plus their spline interpolant.
#[derive(Clone, Debug)]
pub struct LocalBandwidthFunction {
    grid: Vec<f64>,
    bandwidths: Vec<f64>,
    boundary: Vec<bool>,
    window: f64,
    rescale_constant: f64,
    spline: NaturalCubicSpline,
    floor: f64,
    floored: bool,
}

impl LocalBandwidthFunction {
    /// Interpolates `bandwidths` given at `grid`.
    pub fn from_bandwidths(grid: &[f64], bandwidths: &[f64], window: f64) -> Result<Self> {
        Self::build(grid, bandwidths, vec![false; grid.len()], window, 1.0)
    }

    fn build(
        grid: &[f64],
        bandwidths: &[f64],
        boundary: Vec<bool>,
        window: f64,
        rescale_constant: f64,
    ) -> Result<Self> {
        if bandwidths.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidParameter(
                "local bandwidths must be positive".into(),
            ));
        }
        let spline = NaturalCubicSpline::new(grid, bandwidths)?;
        let floor = bandwidths.iter().copied().fold(f64::INFINITY, f64::min);
        // Probe between knots for negative excursions of the interpolant.
        let floored = grid
            .windows(2)
            .any(|w| (1..10).any(|k| spline.evaluate(w[0] + (w[1] - w[0]) * k as f64 / 10.0) <= 0.0));
        Ok(Self {
            grid: grid.to_vec(),
            bandwidths: bandwidths.to_vec(),
            boundary,
            window,
            rescale_constant,
            spline,
            floor,
            floored,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Gaussian-kernel bandwidths at the grid points.
    pub fn bandwidths(&self) -> &[f64] {
        &self.bandwidths
    }

    /// Grid points whose criterion had no interior minimum.
    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn rescale_constant(&self) -> f64 {
        self.rescale_constant
    }

    /// Whether the interpolant dips to non-positive values somewhere, in
    /// which case those values are replaced by the smallest grid bandwidth.
    pub fn floored(&self) -> bool {
        self.floored
    }

    pub fn domain(&self) -> (f64, f64) {
        self.spline.domain()
    }

    pub fn bandwidth_at(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(Error::OutsideDomain(x));
        }
        let h = self.spline.evaluate(x);
        Ok(if h > 0.0 { h } else { self.floor })
    }
}

/// Selects a bandwidth at every grid point and interpolates.
pub fn local_bandwidths(
    data: &[f64],
    method: LocalMethod,
    window: f64,
    grid: &[f64],
) -> Result<LocalBandwidthFunction> {
    local_bandwidths_with(data, method, window, grid, &LocalOptions::default())
}

pub fn local_bandwidths_with(
    data: &[f64],
    method: LocalMethod,
    window: f64,
    grid: &[f64],
    opts: &LocalOptions,
) -> Result<LocalBandwidthFunction> {
    let (kernel, rule) = match method {
        LocalMethod::Icv { alpha, sigma } => (SelectionKernel::new(alpha, sigma)?, opts.icv_rule),
        LocalMethod::Lscv => (SelectionKernel::gaussian(), MinimizerRule::Global),
    };
    let crit = LocalCriterion::new(data, kernel.mixture(), window)?;
    let s = sample_sd(crit.data());
    if !(s > 0.0) {
        return Err(Error::NoSpread);
    }
    let anchor = s * (crit.data().len() as f64).powf(-0.2);
    let range = (opts.lower_factor * anchor, opts.upper_factor * anchor);
    let c = kernel.rescale_constant();

    let minima: Vec<Minimum> = grid
        .par_iter()
        .map(|&x| {
            let curve = |b: f64| crit.evaluate(x, b);
            match rule {
                MinimizerRule::SmallestLocal => {
                    smallest_local_minimizer(curve, range, opts.grid_points, opts.rel_tol)
                }
                MinimizerRule::Global => {
                    crate::optimize::minimize_on_log_grid(
                        curve,
                        range.0,
                        range.1,
                        opts.grid_points,
                        opts.rel_tol,
                    )
                    .0
                }
            }
        })
        .collect();

    let bandwidths: Vec<f64> = minima.iter().map(|m| c * m.argmin).collect();
    let boundary = minima.iter().map(|m| m.boundary).collect();
    LocalBandwidthFunction::build(grid, &bandwidths, boundary, window, c)
}

/// Gaussian-kernel estimate at `x` using the interpolated bandwidth `h(x)`.
pub fn local_estimate(data: &[f64], lbf: &LocalBandwidthFunction, x: f64) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::TooFewObservations);
    }
    let h = lbf.bandwidth_at(x)?;
    let sum: f64 = data.iter().map(|&xi| normal_pdf(x - xi, h)).sum();
    Ok(sum / data.len() as f64)
}

/// `(1/m) Σ (f̂(x_i) − f(x_i))²` over the grid points.
pub fn average_squared_error<F: Fn(f64) -> f64>(estimate: F, f: &NormalMixture, grid: &[f64]) -> f64 {
    let total: f64 = grid.iter().map(|&x| (estimate(x) - f.pdf(x)).powi(2)).sum();
    total / grid.len() as f64
}
