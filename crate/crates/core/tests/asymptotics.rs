mod common;

use common::rng;
use icv_kde::{
    a_alpha, asymptotic_bandwidths, model_params, mse_opt, optimal_alpha, relative_error_terms, sigma_opt,
    theory_constants, DensityFunctionals, NormalMixture, SelectionKernel, SuiteDensity,
};
use rand::Rng;

fn product(alpha: f64) -> f64 {
    theory_constants(alpha).unwrap().product()
}

fn gaussian() -> DensityFunctionals {
    SuiteDensity::Gaussian.density().functionals()
}

#[test]
fn a_alpha_examples_and_positivity() {
    assert!((a_alpha(0.0) - 0.38169).abs() < 1e-4);
    let mut alpha = 1e-6;
    while alpha <= 1e6 {
        assert!(a_alpha(alpha) > 0.0, "α={alpha}");
        let t = theory_constants(alpha).unwrap();
        assert!(t.c_alpha > 0.0 && t.d_alpha > 0.0);
        alpha *= 1.05;
    }
    assert!(theory_constants(0.0).is_err());
    assert!(theory_constants(-1.0).is_err());
}

#[test]
fn optimal_alpha_and_limits() {
    let a = optimal_alpha();
    assert!((a - 2.4233).abs() < 1e-3, "{a}");
    let best = product(a);
    let mut r = rng(12);
    for _ in 0..100 {
        let alpha = 10f64.powf(r.gen_range(-3.0..6.0));
        assert!(best <= product(alpha));
    }
    assert!(product(a * 1.01) > best && product(a * 0.99) > best);
    let ratio = product(1e6) / best;
    assert!((ratio - 1.33).abs() < 0.02, "{ratio}");
    assert!(product(1e-6) > 100.0 * best);
    assert!(product(1e-9) > product(1e-6));
    // repeatable to well under the acceptance tolerance
    assert!((optimal_alpha() - a).abs() < 1e-12);
}

#[test]
fn relative_error_terms_shape() {
    let fun = gaussian();
    let (alpha, n) = (2.4233, 10_000u64);
    let sigmas: Vec<f64> = (0..40).map(|i| 0.5 * 1.15f64.powi(i)).collect();
    let terms: Vec<_> = sigmas
        .iter()
        .map(|&s| relative_error_terms(alpha, s, n, &fun).unwrap())
        .collect();
    for w in terms.windows(2) {
        assert!(w[1].s_n < w[0].s_n && w[1].b_n > w[0].b_n);
    }
    for t in &terms {
        assert!(t.b_n > 0.0);
        assert!((t.mse - (t.s_n * t.s_n + t.b_n * t.b_n)).abs() <= 1e-15 * t.mse);
    }

    let s = sigma_opt(alpha, n, &fun).unwrap();
    let mse = |sigma: f64| relative_error_terms(alpha, sigma, n, &fun).unwrap().mse;
    let eps = 1e-4 * s;
    let derivative = (mse(s + eps) - mse(s - eps)) / (2.0 * eps);
    assert!((derivative * s / mse(s)).abs() < 1e-6, "{derivative}");
    assert!(((mse(s) - mse_opt(alpha, n, &fun).unwrap()) / mse(s)).abs() < 1e-10);

    // grid minimum sits at σ_opt within grid resolution
    let grid: Vec<f64> = (0..400)
        .map(|i| s * 10f64.powf(-1.0 + i as f64 / 200.0))
        .collect();
    let best = grid
        .iter()
        .copied()
        .min_by(|a, b| mse(*a).total_cmp(&mse(*b)))
        .unwrap();
    assert!((best / s).log10().abs() <= 1.0 / 200.0 + 1e-12);
}

#[test]
fn sigma_opt_scaling_and_invariance() {
    let fun = gaussian();
    let ratio = sigma_opt(2.0, 10_000, &fun).unwrap() / sigma_opt(2.0, 100, &fun).unwrap();
    assert!((ratio - 100f64.powf(0.375)).abs() < 1e-12);
    assert!((ratio - 5.6234).abs() < 1e-4);
    let moved = NormalMixture::new(&[(1.0, 5.0, 3.0)]).unwrap().functionals();
    for d in SuiteDensity::ALL {
        let f = d.density();
        let g = f.affine(-2.0, 0.3).unwrap();
        let a = sigma_opt(2.4233, 500, &f.functionals()).unwrap();
        let b = sigma_opt(2.4233, 500, &g.functionals()).unwrap();
        assert!((a / b - 1.0).abs() < 1e-10, "{d}");
    }
    let a = sigma_opt(2.4233, 500, &fun).unwrap();
    let b = sigma_opt(2.4233, 500, &moved).unwrap();
    assert!((a / b - 1.0).abs() < 1e-12);
}

#[test]
fn mse_opt_scaling_and_factoring() {
    let fun = gaussian();
    let r = mse_opt(2.0, 10_000, &fun).unwrap() / mse_opt(2.0, 100, &fun).unwrap();
    assert!((r - 0.1).abs() < 1e-14);
    for d in SuiteDensity::ALL {
        let f = d.density().functionals();
        let q = mse_opt(0.7, 1000, &f).unwrap() / mse_opt(9.0, 1000, &f).unwrap();
        assert!((q / (product(0.7) / product(9.0)) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn optimality_identity_on_random_triples() {
    let mut r = rng(2718);
    for _ in 0..100 {
        let alpha = 10f64.powf(r.gen_range(-2.0..3.0));
        let n = 10f64.powf(r.gen_range(2.0..6.0)) as u64;
        let d = SuiteDensity::ALL[r.gen_range(0..6)];
        let fun = d
            .density()
            .affine(r.gen_range(-3.0..3.0), r.gen_range(0.2..5.0))
            .unwrap()
            .functionals();
        let s = sigma_opt(alpha, n, &fun).unwrap();
        let at = relative_error_terms(alpha, s, n, &fun).unwrap();
        let opt = mse_opt(alpha, n, &fun).unwrap();
        assert!(((at.mse - opt) / opt).abs() < 1e-10);
        assert!(((at.s_n - at.b_n) / at.b_n).abs() < 1e-10);
    }
}

#[test]
fn asymptotic_bandwidth_relations() {
    let fun = gaussian();
    for (alpha, sigma) in [(2.0, 3.0), (6.0, 6.0), (25.0, 1.4)] {
        let k = SelectionKernel::new(alpha, sigma).unwrap();
        let (b, h) = asymptotic_bandwidths(&k, 1000, &fun).unwrap();
        assert!((h / b / k.rescale_constant() - 1.0).abs() < 1e-12);
    }
    let (_, h) = asymptotic_bandwidths(&SelectionKernel::gaussian(), 1, &fun).unwrap();
    assert!((h - 1.0592).abs() < 1e-4);
}

#[test]
fn model_kernels_have_finite_theory() {
    let fun = gaussian();
    for n in [100u64, 300, 1000, 5000, 20_000, 100_000, 500_000] {
        let p = model_params(n).unwrap();
        let t = relative_error_terms(p.alpha, p.sigma, n, &fun).unwrap();
        assert!(t.mse.is_finite() && t.mse > 0.0, "n={n}");
    }
}
