//! Shared oracles for the integration tests.
#![allow(dead_code, clippy::excessive_precision)]

use icv_kde::mixture::normal_pdf;
use icv_kde::SignedGaussianMixture;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Gauss–Kronrod 7/15 on `[a, b]`: `(kronrod, |kronrod − gauss|, ∫|f|)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut k_abs = fc.abs() * WGK[7];
    for j in 0..7 {
        let x = h * XGK[j];
        let (lo, hi) = (f(c - x), f(c + x));
        k += WGK[j] * (lo + hi);
        k_abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (lo + hi);
        }
    }
    (k * h, ((k - g) * h).abs(), k_abs * h.abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err, k_abs) = gk15(f, a, b);
    if err <= tol.max(1e-13 * k.abs()).max(1e-14 * k_abs) || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, tol, depth - 1) + adapt(f, m, b, tol, depth - 1)
}

/// Adaptive Gauss–Kronrod integral over `[a, b]`. Each panel is refined
/// until `|K15 − G7|` is below `tol`, `1e-13` relative, or the roundoff
/// level of `∫|f|`; the Kronrod value is far more accurate than that
/// difference. The interval is first cut into panels no wider than `panel`
/// so narrow peaks are never stepped over.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panel: f64, tol: f64) -> f64 {
    let pieces = ((b - a) / panel).ceil().max(1.0) as usize;
    let width = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + width * i as f64;
            adapt(&f, lo, lo + width, tol, 16)
        })
        .sum()
}

/// `[min mean − 12·max scale, max mean + 12·max scale]`.
pub fn support(m: &SignedGaussianMixture) -> (f64, f64) {
    let comps = m.components();
    let max_scale = comps.iter().map(|c| c.scale).fold(0.0, f64::max);
    let lo = comps.iter().map(|c| c.mean).fold(f64::INFINITY, f64::min);
    let hi = comps.iter().map(|c| c.mean).fold(f64::NEG_INFINITY, f64::max);
    (lo - 12.0 * max_scale, hi + 12.0 * max_scale)
}

pub fn min_scale(m: &SignedGaussianMixture) -> f64 {
    m.components()
        .iter()
        .map(|c| c.scale)
        .fold(f64::INFINITY, f64::min)
}

/// `∫ g(x) dx` over the mixture's support with the standard tolerance.
pub fn integrate_over<F: Fn(f64) -> f64>(m: &SignedGaussianMixture, g: F) -> f64 {
    let (a, b) = support(m);
    integrate(g, a, b, min_scale(m), 1e-12)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to four components, weights in `[−3, 3]`, scales in `[0.1, 10]`.
pub fn random_mixture(rng: &mut ChaCha8Rng, centered: bool) -> SignedGaussianMixture {
    let k = rng.gen_range(1..=4);
    let triples: Vec<(f64, f64, f64)> = (0..k)
        .map(|_| {
            let w = loop {
                let w: f64 = rng.gen_range(-3.0..3.0);
                if w.abs() > 1e-3 {
                    break w;
                }
            };
            let m = if centered { 0.0 } else { rng.gen_range(-3.0..3.0) };
            let s = 10f64.powf(rng.gen_range(-1.0..1.0));
            (w, m, s)
        })
        .collect();
    SignedGaussianMixture::from_triples(&triples).unwrap()
}

pub fn random_sample(rng: &mut ChaCha8Rng, n: usize, spread: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-spread..spread)).collect()
}

/// `f̂_h(x)` with kernel `k`, straight from the definition.
pub fn kde(data: &[f64], k: &SignedGaussianMixture, h: f64, x: f64) -> f64 {
    data.iter().map(|&xi| k.evaluate((x - xi) / h)).sum::<f64>() / (data.len() as f64 * h)
}

/// `f̂_{h,−i}(X_i)` straight from the definition.
pub fn leave_one_out(data: &[f64], k: &SignedGaussianMixture, h: f64, i: usize) -> f64 {
    let n = data.len() as f64;
    data.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &xj)| k.evaluate((data[i] - xj) / h))
        .sum::<f64>()
        / ((n - 1.0) * h)
}

fn data_support(data: &[f64], k: &SignedGaussianMixture, h: f64) -> (f64, f64, f64) {
    let max_scale = k.components().iter().map(|c| c.scale).fold(0.0, f64::max) * h;
    let lo = data.iter().copied().fold(f64::INFINITY, f64::min) - 12.0 * max_scale;
    let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 12.0 * max_scale;
    (lo, hi, min_scale(k) * h)
}

/// `R(f̂_h) − (2/n) Σ f̂_{h,−i}(X_i)` with `R(f̂_h)` by quadrature.
pub fn lscv_oracle(data: &[f64], k: &SignedGaussianMixture, h: f64) -> f64 {
    let (lo, hi, panel) = data_support(data, k, h);
    let r = integrate(|x| kde(data, k, h, x).powi(2), lo, hi, panel, 1e-13);
    let n = data.len();
    let loo: f64 = (0..n).map(|i| leave_one_out(data, k, h, i)).sum();
    r - 2.0 * loo / n as f64
}

/// `(1/w) ∫ φ((x−u)/w) f̂_b(u)² du` by quadrature.
pub fn local_first_term_oracle(data: &[f64], k: &SignedGaussianMixture, x: f64, w: f64, b: f64) -> f64 {
    let (lo, hi, panel) = data_support(data, k, b);
    let lo = lo.min(x - 12.0 * w);
    let hi = hi.max(x + 12.0 * w);
    integrate(
        |u| normal_pdf(x - u, w) * kde(data, k, b, u).powi(2),
        lo,
        hi,
        panel.min(w),
        1e-14,
    )
}

/// `(2/(nw)) Σ φ((x−X_i)/w) f̂_{b,−i}(X_i)` with every term computed.
pub fn local_second_term_oracle(data: &[f64], k: &SignedGaussianMixture, x: f64, w: f64, b: f64) -> f64 {
    let n = data.len();
    let s: f64 = (0..n)
        .map(|i| normal_pdf(x - data[i], w) * leave_one_out(data, k, b, i))
        .sum();
    2.0 * s / n as f64
}

pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= abs.max(rel * a.abs().max(b.abs()))
}
