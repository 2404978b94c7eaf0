//! Exact `O(n²)` sums of a centered Gaussian-mixture kernel over all
//! pairwise differences of a sample.
//!
//! Rows of the pair triangle are summed independently (in parallel when the
//! sample is large) and the row totals are added in index order, so results
//! do not depend on the number of worker threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mixture::{SignedGaussianMixture, INV_SQRT_2PI};

/// Gaussian terms beyond this many scales are below `e^{-45}` and skipped.
pub(crate) const TAIL_CUTOFF: f64 = 9.5;

const PARALLEL_MIN_ROWS: usize = 512;

/// Validates a sample and returns it sorted ascending.
pub fn sorted_sample(data: &[f64]) -> Result<Vec<f64>> {
    if data.len() < 2 {
        return Err(Error::TooFewObservations);
    }
    if let Some(bad) = data.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "observations must be finite, got {bad}"
        )));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// A centered mixture prepared for repeated evaluation at squared arguments.
#[derive(Clone, Debug)]
pub(crate) struct PairKernel {
    /// `(w/(s√(2π)), 1/(2s²), s)` per component.
    terms: Vec<(f64, f64, f64)>,
}

impl PairKernel {
    pub(crate) fn new(kernel: &SignedGaussianMixture) -> Self {
        debug_assert!(kernel.is_centered());
        let simplified = kernel.simplify();
        let terms = simplified
            .components()
            .iter()
            .map(|c| {
                (
                    c.weight * INV_SQRT_2PI / c.scale,
                    0.5 / (c.scale * c.scale),
                    c.scale,
                )
            })
            .collect();
        Self { terms }
    }
}

const LANES: usize = 8;

const LOG2E: f64 = std::f64::consts::LOG2_E;
const LN2_HI: f64 = f64::from_bits(0x3fe6_2e42_fee0_0000);
const LN2_LO: f64 = f64::from_bits(0x3dea_39ef_3579_3c76);
// 1.5 · 2^52: adding it rounds to an integer held in the low mantissa bits.
const SHIFT: f64 = 6_755_399_441_055_744.0;
const EXP_COEFS: [f64; 14] = [
    1.0,
    1.0,
    1.0 / 2.0,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
    1.0 / 40320.0,
    1.0 / 362_880.0,
    1.0 / 3_628_800.0,
    1.0 / 39_916_800.0,
    1.0 / 479_001_600.0,
    1.0 / 6_227_020_800.0,
];

#[inline(always)]
fn madd<const FUSED: bool>(a: f64, b: f64, c: f64) -> f64 {
    if FUSED {
        a.mul_add(b, c)
    } else {
        a * b + c
    }
}

/// `e^x` lane-wise for `x ≤ 0`, accurate to a few ulp. Inputs below `-708`
/// are clamped. Written as straight-line array code so it vectorizes.
#[inline(always)]
fn exp_lanes<const FUSED: bool>(x: [f64; LANES]) -> [f64; LANES] {
    let mut x = x;
    for v in &mut x {
        *v = if *v < -708.0 { -708.0 } else { *v };
    }
    let mut t = [0.0; LANES];
    let mut r = [0.0; LANES];
    for l in 0..LANES {
        t[l] = madd::<FUSED>(x[l], LOG2E, SHIFT);
        let k = t[l] - SHIFT;
        r[l] = madd::<FUSED>(-k, LN2_LO, madd::<FUSED>(-k, LN2_HI, x[l]));
    }
    let mut p = [EXP_COEFS[13]; LANES];
    for &c in EXP_COEFS[..13].iter().rev() {
        for l in 0..LANES {
            p[l] = madd::<FUSED>(p[l], r[l], c);
        }
    }
    let mut out = [0.0; LANES];
    for l in 0..LANES {
        out[l] = p[l] * f64::from_bits(t[l].to_bits().wrapping_add(1023) << 52);
    }
    out
}

/// Scalar form of [`exp_lanes`].
#[inline(always)]
fn exp_nonpositive<const FUSED: bool>(x: f64) -> f64 {
    exp_lanes::<FUSED>([x; LANES])[0]
}

/// `Σ_j e^{-a (x_j − x_i)²}` over `tail`.
#[inline(always)]
fn gaussian_row_generic<const FUSED: bool>(tail: &[f64], xi: f64, a: f64) -> f64 {
    let mut lanes = [0.0; LANES];
    let mut chunks = tail.chunks_exact(LANES);
    for c in &mut chunks {
        let mut arg = [0.0; LANES];
        for l in 0..LANES {
            let d = c[l] - xi;
            arg[l] = -a * d * d;
        }
        let e = exp_lanes::<FUSED>(arg);
        for l in 0..LANES {
            lanes[l] += e[l];
        }
    }
    let mut acc: f64 = lanes.iter().sum();
    for &xj in chunks.remainder() {
        let d = xj - xi;
        acc += exp_nonpositive::<FUSED>(-a * d * d);
    }
    acc
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2,fma")]
unsafe fn gaussian_row_avx2(tail: &[f64], xi: f64, a: f64) -> f64 {
    gaussian_row_generic::<true>(tail, xi, a)
}

/// Uses AVX2 with fused multiply-add when available. The two paths can
/// differ in the last bits; a given machine always takes the same one.
/// `Σ_j exp(−a (x_j − x_i)²)` over `tail`.
pub(crate) fn gaussian_row(tail: &[f64], xi: f64, a: f64, wide: bool) -> f64 {
    #[cfg(target_arch = "x86_64")]
    if wide {
        // SAFETY: `wide` is only set after detecting AVX2 at runtime.
        return unsafe { gaussian_row_avx2(tail, xi, a) };
    }
    let _ = wide;
    gaussian_row_generic::<false>(tail, xi, a)
}

/// Parameters of one triple-Gaussian product term: the pair factor
/// `exp(−d² p)` times the window factor `exp(−r² q)`, where the product mean
/// sits at `x_j + share·d` for `d = x_i − x_j`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ProductTerm {
    pub p: f64,
    pub q: f64,
    pub share: f64,
}

#[inline(always)]
fn product_row_generic<const FUSED: bool>(tail: &[f64], xi: f64, x: f64, t: ProductTerm) -> f64 {
    let ri = x - xi;
    let mut lanes = [0.0; LANES];
    let mut chunks = tail.chunks_exact(LANES);
    for c in &mut chunks {
        let mut fwd = [0.0; LANES];
        let mut back = [0.0; LANES];
        for l in 0..LANES {
            let d = xi - c[l];
            let base = -d * d * t.p;
            let r1 = x - c[l] - t.share * d;
            let r2 = ri + t.share * d;
            fwd[l] = base - r1 * r1 * t.q;
            back[l] = base - r2 * r2 * t.q;
        }
        let e1 = exp_lanes::<FUSED>(fwd);
        let e2 = exp_lanes::<FUSED>(back);
        for l in 0..LANES {
            lanes[l] += e1[l] + e2[l];
        }
    }
    let mut acc: f64 = lanes.iter().sum();
    for &xj in chunks.remainder() {
        let d = xi - xj;
        let base = -d * d * t.p;
        let r1 = x - xj - t.share * d;
        let r2 = ri + t.share * d;
        acc +=
            exp_nonpositive::<FUSED>(base - r1 * r1 * t.q) + exp_nonpositive::<FUSED>(base - r2 * r2 * t.q);
    }
    acc
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2,fma")]
unsafe fn product_row_avx2(tail: &[f64], xi: f64, x: f64, t: ProductTerm) -> f64 {
    product_row_generic::<true>(tail, xi, x, t)
}

/// `Σ_j [E(x_i, x_j) + E(x_j, x_i)]` over `tail`, with `E` the exponential
/// of a [`ProductTerm`].
pub(crate) fn product_row(tail: &[f64], xi: f64, x: f64, t: ProductTerm, wide: bool) -> f64 {
    #[cfg(target_arch = "x86_64")]
    if wide {
        // SAFETY: `wide` is only set after detecting AVX2 and FMA at runtime.
        return unsafe { product_row_avx2(tail, xi, x, t) };
    }
    let _ = wide;
    product_row_generic::<false>(tail, xi, x, t)
}

pub(crate) fn has_wide_vectors() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("avx2") && std::arch::is_x86_feature_detected!("fma")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// `Σ_{i<j} g((x_j − x_i)/h)` over a sorted sample. Each Gaussian term is
/// summed only over partners within `TAIL_CUTOFF` of its own scale.
pub(crate) fn pair_sum(sorted: &[f64], g: &PairKernel, h: f64) -> f64 {
    let inv_h2 = 1.0 / (h * h);
    let terms: Vec<(f64, f64, f64)> = g
        .terms
        .iter()
        .map(|&(coef, inv2v, s)| (coef, inv2v * inv_h2, TAIL_CUTOFF * s * h))
        .collect();
    let wide = has_wide_vectors();
    let row = |i: usize| -> f64 {
        let xi = sorted[i];
        let tail = &sorted[i + 1..];
        terms
            .iter()
            .map(|&(coef, a, reach)| {
                let end = tail.partition_point(|&x| x - xi <= reach);
                coef * gaussian_row(&tail[..end], xi, a, wide)
            })
            .sum()
    };
    let n = sorted.len();
    if n >= PARALLEL_MIN_ROWS {
        let rows: Vec<f64> = (0..n).into_par_iter().map(row).collect();
        rows.iter().sum()
    } else {
        (0..n).map(row).sum()
    }
}

/// Unbiased sample standard deviation.
pub fn sample_sd(data: &[f64]) -> f64 {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let ss: f64 = data.iter().map(|x| (x - mean).powi(2)).sum();
    (ss / (n - 1.0)).sqrt()
}
