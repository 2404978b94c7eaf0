//! Selection kernels `L(u; α, σ) = (1 + α)φ(u) − (α/σ)φ(u/σ)`.
//!
//! These are the kernels used only inside cross-validation. A bandwidth
//! chosen for `L` is mapped to a bandwidth for the Gaussian kernel by the
//! constant returned from [`SelectionKernel::rescale_constant`].

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixture::{SignedGaussianMixture, INV_SQRT_2PI};

/// `R(φ) = 1/(2√π)`.
pub const GAUSSIAN_ROUGHNESS: f64 = 0.282_094_791_773_878_14;

/// Smallest sample size for which the (α, σ) model was fitted.
pub const MODEL_MIN_N: u64 = 100;
/// Largest sample size for which the (α, σ) model was fitted.
pub const MODEL_MAX_N: u64 = 500_000;

const SECOND_MOMENT_EPS: f64 = 1e-12;

/// Sign-structure family of a selection kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum KernelClass {
    /// `σ < α/(1+α)`: negative dip at the origin.
    CutOutMiddle,
    /// `α/(1+α) ≤ σ < 1`: a proper (unimodal or bimodal) density.
    Density,
    /// `σ > 1`: negative tails.
    NegativeTails,
    /// `α = 0` or `σ = 1`, where `L ≡ φ`.
    GaussianDegenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionKernel {
    alpha: f64,
    sigma: f64,
    mixture: SignedGaussianMixture,
    autoconvolution: SignedGaussianMixture,
}

impl SelectionKernel {
    /// Builds `L(·; α, σ)`. Fails for `α < 0`, `σ ≤ 0`, or on the locus
    /// `1 + α − ασ² = 0` where the second moment vanishes.
    pub fn new(alpha: f64, sigma: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and nonnegative, got {alpha}"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and positive, got {sigma}"
            )));
        }
        if second_moment(alpha, sigma).abs() < SECOND_MOMENT_EPS {
            return Err(Error::NotSecondOrder { alpha, sigma });
        }
        let mixture = SignedGaussianMixture::from_triples(&[(1.0 + alpha, 0.0, 1.0), (-alpha, 0.0, sigma)])?;
        let autoconvolution = mixture.convolve(&mixture).simplify();
        Ok(Self {
            alpha,
            sigma,
            mixture,
            autoconvolution,
        })
    }

    /// The Gaussian kernel viewed as a selection kernel (`α = 0`).
    pub fn gaussian() -> Self {
        Self::new(0.0, 1.0).expect("gaussian kernel is valid")
    }

    /// The kernel prescribed by [`model_params`] for sample size `n`.
    pub fn for_sample_size(n: u64) -> Result<Self> {
        let p = model_params(n)?;
        Self::new(p.alpha, p.sigma)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mixture(&self) -> &SignedGaussianMixture {
        &self.mixture
    }

    /// `L ⋆ L`, with duplicate components merged.
    pub fn autoconvolution(&self) -> &SignedGaussianMixture {
        &self.autoconvolution
    }

    pub fn evaluate(&self, u: f64) -> f64 {
        self.mixture.evaluate(u)
    }

    /// `μ_{2L} = 1 + α − ασ²`.
    pub fn second_moment(&self) -> f64 {
        second_moment(self.alpha, self.sigma)
    }

    /// `R(L)` from the (α, σ) closed form.
    pub fn roughness(&self) -> f64 {
        let (a, s) = (self.alpha, self.sigma);
        let sqrt_pi = PI.sqrt();
        (1.0 + a).powi(2) / (2.0 * sqrt_pi) - 2.0 * a * (1.0 + a) / (2.0 * PI * (1.0 + s * s)).sqrt()
            + a * a / (2.0 * s * sqrt_pi)
    }

    /// `L(0) = ((1 + α) − α/σ)/√(2π)`.
    pub fn value_at_zero(&self) -> f64 {
        (1.0 + self.alpha - self.alpha / self.sigma) * INV_SQRT_2PI
    }

    pub fn classify(&self) -> KernelClass {
        let (a, s) = (self.alpha, self.sigma);
        if a == 0.0 || s == 1.0 {
            KernelClass::GaussianDegenerate
        } else if s < a / (1.0 + a) {
            KernelClass::CutOutMiddle
        } else if s <= 1.0 {
            KernelClass::Density
        } else {
            KernelClass::NegativeTails
        }
    }

    /// `C = (R(φ) μ²_{2L} / (R(L) μ²_{2φ}))^{1/5}`, the factor mapping an
    /// `L`-kernel bandwidth to the Gaussian-kernel bandwidth with the same
    /// asymptotic MISE optimality.
    pub fn rescale_constant(&self) -> f64 {
        rescale_constant_from(self.roughness(), self.second_moment())
    }

    /// `γ(u) = (L ⋆ L)(u) − 2L(u)`.
    pub fn gamma(&self, u: f64) -> f64 {
        self.autoconvolution.evaluate(u) - 2.0 * self.mixture.evaluate(u)
    }

    /// `γ'(u)`, from the analytic Gaussian derivatives.
    pub fn gamma_derivative(&self, u: f64) -> f64 {
        self.autoconvolution.derivative(u, 1) - 2.0 * self.mixture.derivative(u, 1)
    }

    /// `ρ(u) = u γ'(u)`.
    pub fn rho(&self, u: f64) -> f64 {
        u * self.gamma_derivative(u)
    }

    /// `γ` as a standalone callable.
    pub fn gamma_function(&self) -> impl Fn(f64) -> f64 + '_ {
        move |u| self.gamma(u)
    }

    /// `ρ` as a standalone callable.
    pub fn rho_function(&self) -> impl Fn(f64) -> f64 + '_ {
        move |u| self.rho(u)
    }

    /// Whether `R(L) > 2L(0)`, i.e. `γ(0) > 0`. Such kernels make the LSCV
    /// criterion diverge to `+∞` rather than `−∞` as `h → 0` on tied data.
    pub fn robust_to_rounding(&self) -> bool {
        self.roughness() > 2.0 * self.value_at_zero()
    }
}

fn second_moment(alpha: f64, sigma: f64) -> f64 {
    1.0 + alpha - alpha * sigma * sigma
}

pub(crate) fn rescale_constant_from(roughness: f64, second_moment: f64) -> f64 {
    (GAUSSIAN_ROUGHNESS * second_moment * second_moment / roughness).powf(0.2)
}

/// Smallest `α` for which `L(·; α, σ)` is robust to rounding, for `σ > 1`.
///
/// `(R(L) − 2L(0))·√(2π)` is the quadratic `b_σ α² + 2a_σ α − (2 − 1/√2)`
/// with `a_σ = 1/√2 − 1/√(1+σ²) − 1 + 1/σ` and
/// `b_σ = 1/√2 − 2/√(1+σ²) + 1/(σ√2)`, so the threshold is its positive
/// root `(−a_σ + √(a_σ² + (2 − 1/√2) b_σ)) / b_σ`.
pub fn robust_alpha_threshold(sigma: f64) -> Result<f64> {
    if !(sigma > 1.0) {
        return Err(Error::NotNegativeTailed(sigma));
    }
    let (a, b) = rounding_coefficients(sigma);
    let c = 2.0 - FRAC_1_SQRT_2;
    let disc = (a * a + c * b).sqrt();
    // Pick the algebraically equivalent form that avoids cancellation.
    let root = if a >= 0.0 { c / (a + disc) } else { (disc - a) / b };
    Ok(root)
}

/// `(a_σ, b_σ)` of the rounding-robustness quadratic.
pub fn rounding_coefficients(sigma: f64) -> (f64, f64) {
    let inv_hyp = 1.0 / (1.0 + sigma * sigma).sqrt();
    let a = FRAC_1_SQRT_2 - inv_hyp - 1.0 + 1.0 / sigma;
    let b = FRAC_1_SQRT_2 - 2.0 * inv_hyp + 1.0 / (sigma * SQRT_2);
    (a, b)
}

/// Practical selection-kernel parameters for a sample of size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub sigma: f64,
}

fn evaluate_model(n: f64) -> ModelParams {
    let l = n.log10();
    let alpha = 10f64.powf(3.390 - 1.093 * l + 0.025 * l.powi(3) - 0.00004 * l.powi(6));
    let sigma = 10f64.powf(-0.58 + 0.386 * l - 0.012 * l * l);
    ModelParams { alpha, sigma }
}

/// `(α, σ)` from the polynomial model in `log10(n)`, valid for
/// `100 ≤ n ≤ 500000`. Outside that range the error carries the values at
/// the nearest endpoint.
pub fn model_params(n: u64) -> Result<ModelParams> {
    if !(MODEL_MIN_N..=MODEL_MAX_N).contains(&n) {
        let nearest = n.clamp(MODEL_MIN_N, MODEL_MAX_N);
        let p = evaluate_model(nearest as f64);
        return Err(Error::OutsideModelRange {
            n,
            suggested_alpha: p.alpha,
            suggested_sigma: p.sigma,
        });
    }
    Ok(evaluate_model(n as f64))
}
