//! Large-sample behaviour of the ICV bandwidth.
//!
//! With a negative-tailed selection kernel, fixed `α` and `σ → ∞`, the
//! relative error `(ĥ_ICV − h₀)/h₀` behaves like `Z·S_n + B_n` with `Z`
//! standard normal. This module evaluates `S_n`, `B_n`, the `σ` balancing
//! them, the resulting mean squared error, and the `α` minimizing it.

use std::f64::consts::PI;

use serde::Serialize;

use crate::densities::DensityFunctionals;
use crate::error::{Error, Result};
use crate::optimize::minimize_on_log_grid;
use crate::selection_kernel::{SelectionKernel, GAUSSIAN_ROUGHNESS};

/// `A_α`, `C_α` and `D_α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoryConstants {
    pub a_alpha: f64,
    pub c_alpha: f64,
    pub d_alpha: f64,
}

impl TheoryConstants {
    /// `C_α D_α`, the only way `α` enters the optimal MSE.
    pub fn product(&self) -> f64 {
        self.c_alpha * self.d_alpha
    }
}

/// Standard-deviation and bias terms of the relative error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticMse {
    pub s_n: f64,
    pub b_n: f64,
    pub mse: f64,
}

/// `A_α = (3/√(2π))(1+α)²[(1+α)²/8 − 8(1+α)/(9√3) + 1/√2]`.
pub fn a_alpha(alpha: f64) -> f64 {
    let p = 1.0 + alpha;
    3.0 / (2.0 * PI).sqrt()
        * p
        * p
        * (p * p / 8.0 - 8.0 * p / (9.0 * 3f64.sqrt()) + std::f64::consts::FRAC_1_SQRT_2)
}

pub fn theory_constants(alpha: f64) -> Result<TheoryConstants> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    let a = a_alpha(alpha);
    let p = 1.0 + alpha;
    let two_sqrt_pi = 2.0 * PI.sqrt();
    let c = (2.0 * a).sqrt() * two_sqrt_pi.powf(0.9) / (5.0 * p.powf(1.8) * alpha.powf(0.2));
    let d = 0.15 * (p * p / (alpha * alpha * two_sqrt_pi)).powf(0.4);
    Ok(TheoryConstants {
        a_alpha: a,
        c_alpha: c,
        d_alpha: d,
    })
}

fn product(alpha: f64) -> f64 {
    theory_constants(alpha).map_or(f64::INFINITY, |t| t.product())
}

/// The `α` minimizing `C_α D_α`, searched on `[10⁻³, 10³]`.
pub fn optimal_alpha() -> f64 {
    let (min, _) = minimize_on_log_grid(product, 1e-3, 1e3, 400, 1e-10);
    min.argmin
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn check_functionals(fun: &DensityFunctionals) -> Result<()> {
    check_positive("R(f)", fun.r_f)?;
    check_positive("R(f'')", fun.r_f2)?;
    check_positive("R(f''')", fun.r_f3)
}

/// `S_n = σ^{-2/5} n^{-1/10} R(f)^{1/2} R(f'')^{-1/10} C_α` and
/// `B_n = (σ/n)^{2/5} R(f''') R(f'')^{-7/5} D_α`.
pub fn relative_error_terms(
    alpha: f64,
    sigma: f64,
    n: u64,
    fun: &DensityFunctionals,
) -> Result<AsymptoticMse> {
    check_positive("sigma", sigma)?;
    check_positive("n", n as f64)?;
    check_functionals(fun)?;
    let t = theory_constants(alpha)?;
    let n = n as f64;
    let s_n = sigma.powf(-0.4) * n.powf(-0.1) * fun.r_f.sqrt() * fun.r_f2.powf(-0.1) * t.c_alpha;
    let b_n = (sigma / n).powf(0.4) * fun.r_f3 * fun.r_f2.powf(-1.4) * t.d_alpha;
    Ok(AsymptoticMse {
        s_n,
        b_n,
        mse: s_n * s_n + b_n * b_n,
    })
}

/// `σ_opt = n^{3/8} (C_α/D_α)^{5/4} [R(f) R(f'')^{13/5} / R(f''')²]^{5/8}`.
pub fn sigma_opt(alpha: f64, n: u64, fun: &DensityFunctionals) -> Result<f64> {
    check_positive("n", n as f64)?;
    check_functionals(fun)?;
    let t = theory_constants(alpha)?;
    let shape = fun.r_f * fun.r_f2.powf(2.6) / (fun.r_f3 * fun.r_f3);
    Ok((n as f64).powf(0.375) * (t.c_alpha / t.d_alpha).powf(1.25) * shape.powf(0.625))
}

/// Minimum over `σ` of `S_n² + B_n²`:
/// `2 n^{-1/2} C_α D_α R(f''') R(f)^{1/2} / R(f'')^{3/2}`.
///
/// At `σ_opt` the two squared terms are equal, each contributing half.
pub fn mse_opt(alpha: f64, n: u64, fun: &DensityFunctionals) -> Result<f64> {
    check_positive("n", n as f64)?;
    check_functionals(fun)?;
    let t = theory_constants(alpha)?;
    Ok(2.0 * (n as f64).powf(-0.5) * t.product() * fun.r_f3 * fun.r_f.sqrt() / fun.r_f2.powf(1.5))
}

/// First-order MISE-optimal bandwidths `(b_n, h_n)` for the selection kernel
/// and for the Gaussian kernel; `h_n = C b_n`.
pub fn asymptotic_bandwidths(
    kernel: &SelectionKernel,
    n: u64,
    fun: &DensityFunctionals,
) -> Result<(f64, f64)> {
    check_positive("n", n as f64)?;
    check_positive("R(f'')", fun.r_f2)?;
    let n = n as f64;
    let mu2 = kernel.second_moment();
    let b_n = (kernel.roughness() / (mu2 * mu2 * fun.r_f2)).powf(0.2) * n.powf(-0.2);
    let h_n = (GAUSSIAN_ROUGHNESS / fun.r_f2).powf(0.2) * n.powf(-0.2);
    Ok((b_n, h_n))
}
