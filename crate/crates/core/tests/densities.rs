mod common;

use common::{close, integrate_over};
use icv_kde::{standard_suite, NormalMixture, SuiteDensity};
use std::f64::consts::PI;

#[test]
fn suite_parameters_and_values() {
    let suite = standard_suite();
    assert_eq!(suite.len(), 6);
    let g = &suite["gaussian"];
    assert!((g.pdf(0.0) - 0.398_942_280_401_432_7).abs() < 1e-15);
    let bimodal = &suite["bimodal"];
    for x in [0.1, 0.7, 1.3, 2.9] {
        assert_eq!(bimodal.pdf(x), bimodal.pdf(-x));
    }
    for d in SuiteDensity::ALL {
        let f = d.density();
        let total: f64 = f.mixture().components().iter().map(|c| c.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(f
            .mixture()
            .components()
            .iter()
            .all(|c| c.weight > 0.0 && c.scale > 0.0));
        let mass = integrate_over(f.mixture(), |x| f.pdf(x));
        assert!((mass - 1.0).abs() < 1e-10, "{d}: {mass}");
        assert_eq!(d.name().parse::<SuiteDensity>().unwrap(), d);
    }
    assert!("trimodal".parse::<SuiteDensity>().is_err());
}

#[test]
fn invalid_mixtures_rejected() {
    assert!(NormalMixture::new(&[]).is_err());
    assert!(NormalMixture::new(&[(0.5, 0.0, 1.0)]).is_err());
    assert!(NormalMixture::new(&[(1.2, 0.0, 1.0), (-0.2, 0.0, 1.0)]).is_err());
    assert!(NormalMixture::new(&[(1.0, 0.0, 0.0)]).is_err());
}

#[test]
fn gaussian_sample_moments() {
    let x = SuiteDensity::Gaussian.density().sample(1_000_000, 42).unwrap();
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!(mean.abs() < 4e-3, "{mean}");
    assert!((sd - 1.0).abs() < 4e-3, "{sd}");
}

#[test]
fn sampling_is_deterministic_and_validated() {
    let f = SuiteDensity::SkewedBimodal.density();
    assert_eq!(f.sample(500, 9).unwrap(), f.sample(500, 9).unwrap());
    assert_ne!(f.sample(500, 9).unwrap(), f.sample(500, 10).unwrap());
    assert!(f.sample(0, 1).is_err());
}

#[test]
fn separated_bimodal_halves() {
    let x = SuiteDensity::SeparatedBimodal
        .density()
        .sample(100_000, 3)
        .unwrap();
    let below = x.iter().filter(|&&v| v < 0.0).count() as f64 / x.len() as f64;
    assert!((below - 0.5).abs() < 0.01, "{below}");
}

#[test]
fn standard_normal_functionals() {
    let fun = SuiteDensity::Gaussian.density().functionals();
    assert!((fun.r_f - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-15);
    assert!((fun.r_f2 - 3.0 / (8.0 * PI.sqrt())).abs() < 1e-15);
    assert!((fun.r_f3 - 15.0 / (16.0 * PI.sqrt())).abs() < 1e-15);
    assert!((fun.r_f2 - 0.211_570).abs() < 5e-6 && (fun.r_f3 - 0.528_926).abs() < 5e-6);
}

#[test]
fn functionals_match_quadrature() {
    for d in SuiteDensity::ALL {
        let f = d.density();
        let fun = f.functionals();
        assert!(fun.r_f > 0.0 && fun.r_f2 > 0.0 && fun.r_f3 > 0.0);
        for (k, closed) in [(0, fun.r_f), (2, fun.r_f2), (3, fun.r_f3)] {
            let quad = integrate_over(f.mixture(), |x| f.pdf_derivative(x, k).powi(2));
            assert!(close(closed, quad, 1e-8, 0.0), "{d} k={k}: {closed} vs {quad}");
        }
    }
}

#[test]
fn functionals_scale_equivariance() {
    for d in SuiteDensity::ALL {
        let f = d.density();
        for c in [0.5, 2.0] {
            let g = f.affine(1.3, c).unwrap();
            for k in [0usize, 2, 3] {
                let expected = f.derivative_roughness(k) * c.powi(-(2 * k as i32 + 1));
                assert!(
                    close(g.derivative_roughness(k), expected, 1e-12, 0.0),
                    "{d} c={c} k={k}"
                );
            }
        }
    }
}

#[test]
fn mean_and_variance() {
    let f = SuiteDensity::SkewedBimodal.density();
    let mean = integrate_over(f.mixture(), |x| x * f.pdf(x));
    let var = integrate_over(f.mixture(), |x| (x - mean).powi(2) * f.pdf(x));
    assert!((f.mean() - mean).abs() < 1e-10);
    assert!((f.variance() - var).abs() < 1e-10);
}
