//! Acceptance criteria 1 to 9. One PASS/FAIL line each; exits non-zero on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{
    close, integrate_over, local_first_term_oracle, local_second_term_oracle, lscv_oracle, random_mixture,
    rng,
};
use icv_kde::{
    asymptotic_bandwidths, average_squared_error, default_grid, icv_bandwidth_with, local_bandwidths,
    local_estimate, lscv, mise_optimal_bandwidth, model_params, mse_opt, optimal_alpha, relative_error_terms,
    robust_alpha_threshold, run_study, sigma_opt, theory_constants, KernelChoice, LocalCriterion,
    LocalMethod, SearchOptions, SelectionKernel, SignedGaussianMixture, StudyConfig, SuiteDensity,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn product(alpha: f64) -> f64 {
    theory_constants(alpha).unwrap().product()
}

fn c1_optimal_alpha() -> Outcome {
    let a = optimal_alpha();
    check((a - 2.4233).abs() <= 1e-3, format!("alpha_0 = {a:.5}"))
}

fn c2_limiting_ratio() -> Outcome {
    let ratio = product(1e6) / product(optimal_alpha());
    check((1.31..=1.35).contains(&ratio), format!("ratio = {ratio:.4}"))
}

fn c3_optimality_identity() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let alpha = 10f64.powf(r.gen_range(-2.0..3.0));
        let n = 10f64.powf(r.gen_range(2.0..6.0)) as u64;
        let d = SuiteDensity::ALL[r.gen_range(0..SuiteDensity::ALL.len())];
        let fun = d.density().functionals();
        let s = sigma_opt(alpha, n, &fun).map_err(|e| e.to_string())?;
        let at = relative_error_terms(alpha, s, n, &fun)
            .map_err(|e| e.to_string())?
            .mse;
        let opt = mse_opt(alpha, n, &fun).map_err(|e| e.to_string())?;
        worst = worst.max(((at - opt) / opt).abs());
    }
    check(worst < 1e-10, format!("max relative gap = {worst:.2e}"))
}

fn gap(alpha: f64, sigma: f64) -> f64 {
    let k = SelectionKernel::new(alpha, sigma).unwrap();
    k.roughness() - 2.0 * k.value_at_zero()
}

fn c4_robustness_region() -> Outcome {
    for n in [100u64, 1_000, 10_000, 100_000, 500_000] {
        let p = model_params(n).map_err(|e| e.to_string())?;
        let k = SelectionKernel::new(p.alpha, p.sigma).map_err(|e| e.to_string())?;
        if !k.robust_to_rounding() || gap(p.alpha, p.sigma) <= 0.0 {
            return Err(format!("model kernel at n = {n} is not robust"));
        }
    }
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let sigma = 50.0 - r.gen_range(0.0..49.0f64);
        let t = robust_alpha_threshold(sigma).map_err(|e| e.to_string())?;
        // R(L) - 2L(0) changes sign exactly once in α
        let (mut lo, mut hi) = (1e-12, 1.0);
        while gap(hi, sigma) <= 0.0 {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid, sigma) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        worst = worst.max((0.5 * (lo + hi) - t).abs() / t.max(1.0));
    }
    check(
        worst < 1e-8,
        format!("5 model kernels robust; threshold vs bisection {worst:.1e}"),
    )
}

fn c5_rounding() -> Outcome {
    let phi = SignedGaussianMixture::standard_normal();
    let p = model_params(100).map_err(|e| e.to_string())?;
    let model = SelectionKernel::new(p.alpha, p.sigma).map_err(|e| e.to_string())?;
    let hs = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];
    for seed in 1..=20u64 {
        let raw = SuiteDensity::Gaussian
            .density()
            .sample(100, seed)
            .map_err(|e| e.to_string())?;
        let data: Vec<f64> = raw.iter().map(|x| (x * 10.0).round() / 10.0).collect();
        let curve = |k: &SignedGaussianMixture| -> Vec<f64> {
            hs.iter().map(|&h| lscv(&data, k, h).unwrap()).collect()
        };
        let g = curve(&phi);
        let m = curve(model.mixture());
        if !g.windows(2).all(|w| w[1] < w[0]) {
            return Err(format!("seed {seed}: phi criterion not decreasing {g:?}"));
        }
        if !m.windows(2).all(|w| w[1] > w[0]) {
            return Err(format!("seed {seed}: model criterion not increasing {m:?}"));
        }
    }
    Ok("20/20 seeds: phi dives, model kernel rises".into())
}

fn c6_oracles() -> Outcome {
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = r.gen_range(2..=6);
        let data: Vec<f64> = (0..n).map(|_| r.gen_range(-2.5..2.5)).collect();
        let kernel = match case % 3 {
            0 => SignedGaussianMixture::standard_normal(),
            1 => SelectionKernel::new(r.gen_range(0.2..10.0), r.gen_range(1.1..8.0))
                .unwrap()
                .mixture()
                .clone(),
            _ => random_mixture(&mut r, true),
        };
        let h = 10f64.powf(r.gen_range(-1.0..0.3));
        let closed = lscv(&data, &kernel, h).map_err(|e| e.to_string())?;
        let oracle = lscv_oracle(&data, &kernel, h);
        if !close(closed, oracle, 1e-7, 1e-12) {
            return Err(format!("lscv case {case}: {closed} vs {oracle}"));
        }
        if case % 3 != 2 {
            let (x, w, b) = (
                r.gen_range(-2.0..2.0),
                r.gen_range(0.1..1.0),
                r.gen_range(0.1..0.8),
            );
            let crit = LocalCriterion::new(&data, &kernel, w).map_err(|e| e.to_string())?;
            let first = local_first_term_oracle(&data, &kernel, x, w, b);
            let second = local_second_term_oracle(&data, &kernel, x, w, b);
            let value = crit.evaluate(x, b);
            if !close(value, first - second, 1e-7, 1e-11) {
                return Err(format!("local case {case}: {value} vs {}", first - second));
            }
        }
        worst = worst.max((closed - oracle).abs() / oracle.abs().max(1e-12));
    }
    for case in 0..1000 {
        let m = random_mixture(&mut r, false);
        let other = random_mixture(&mut r, false);
        let rough = m.roughness();
        if !close(rough, integrate_over(&m, |x| m.evaluate(x).powi(2)), 1e-8, 1e-12) {
            return Err(format!("roughness case {case}"));
        }
        let x = r.gen_range(-3.0..3.0);
        let conv = m.convolve(&other).evaluate(x);
        let quad = integrate_over(&m, |u| m.evaluate(u) * other.evaluate(x - u));
        if !close(conv, quad, 1e-8, 1e-12) {
            return Err(format!("convolution case {case}: {conv} vs {quad}"));
        }
        let c = random_mixture(&mut r, true);
        for j in [0u32, 2, 4] {
            let closed = c.even_moment(j).map_err(|e| e.to_string())?;
            let quad = integrate_over(&c, |u| u.powi(j as i32) * c.evaluate(u));
            let scale: f64 = c
                .components()
                .iter()
                .map(|k| k.weight.abs() * k.scale.powi(j as i32))
                .sum::<f64>()
                * 3.0;
            if (closed - quad).abs() > 1e-8 * scale {
                return Err(format!("moment case {case}, j = {j}: {closed} vs {quad}"));
            }
        }
    }
    Ok(format!(
        "200 criterion oracles (max rel {worst:.1e}), 1000 mixtures"
    ))
}

fn c7_study() -> Outcome {
    let config = StudyConfig {
        densities: vec![SuiteDensity::Gaussian, SuiteDensity::Bimodal],
        sample_sizes: vec![100, 250],
        replications: 200,
        base_seed: 1,
        kernel: KernelChoice::Model,
        search: SearchOptions::default(),
    };
    let cells = run_study(&config).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for cell in &cells {
        let s = &cell.summary;
        let ratio = s.ise_ratio.value.unwrap_or(f64::NAN);
        ok &= s.h_icv_star.sd < s.h_ucv.sd && ratio < 1.0;
        parts.push(format!(
            "{}/{}: sd {:.4}<{:.4} ise {:.2}",
            cell.density, cell.n, s.h_icv_star.sd, s.h_ucv.sd, ratio
        ));
        if cell.density == SuiteDensity::Gaussian && cell.n == 100 {
            ok &= s.h_ucv.skewness < 0.0 && s.h_icv_star.skewness.abs() < s.h_ucv.skewness.abs();
            parts.push(format!(
                "skew {:.3} vs {:.3}",
                s.h_icv_star.skewness, s.h_ucv.skewness
            ));
        }
    }
    check(ok && cells.len() == 4, parts.join("; "))
}

fn c8_local() -> Outcome {
    let f = SuiteDensity::KurtoticUnimodal.density();
    let grid = default_grid();
    let mut wins = 0;
    let mut worst_icv = 0.0f64;
    let mut parts = Vec::new();
    for seed in 1..=5u64 {
        let data = f.sample(500, seed).map_err(|e| e.to_string())?;
        let ase = |method: LocalMethod| -> Result<f64, String> {
            let lbf = local_bandwidths(&data, method, 0.3, &grid).map_err(|e| e.to_string())?;
            Ok(average_squared_error(
                |x| local_estimate(&data, &lbf, x).unwrap(),
                &f,
                &grid,
            ))
        };
        let icv = ase(LocalMethod::Icv {
            alpha: 6.0,
            sigma: 6.0,
        })?;
        let ls = ase(LocalMethod::Lscv)?;
        wins += usize::from(icv < ls);
        worst_icv = worst_icv.max(icv);
        parts.push(format!("{icv:.5}/{ls:.5}"));
    }
    check(
        wins >= 4 && worst_icv < 5e-3,
        format!("n = 500, ICV wins {wins}/5, ASE icv/lscv {}", parts.join(" ")),
    )
}

fn c9_consistency() -> Outcome {
    let f = SuiteDensity::Gaussian.density();
    let phi = SignedGaussianMixture::standard_normal();
    let h0 = mise_optimal_bandwidth(&phi, &f, 1_000_000).map_err(|e| e.to_string())?;
    let (_, hn) = asymptotic_bandwidths(&SelectionKernel::gaussian(), 1_000_000, &f.functionals())
        .map_err(|e| e.to_string())?;
    let rel = (hn / h0 - 1.0).abs();
    if rel > 0.02 {
        return Err(format!("h_n {hn:.5} vs h0 {h0:.5}"));
    }
    let n = 5000;
    let h0 = mise_optimal_bandwidth(&phi, &f, n).map_err(|e| e.to_string())?;
    let p = model_params(n as u64).map_err(|e| e.to_string())?;
    let kernel = SelectionKernel::new(p.alpha, p.sigma).map_err(|e| e.to_string())?;
    let opts = SearchOptions::default().with_grid_points(100);
    let mut ratios = Vec::new();
    for seed in 1..=10u64 {
        let data = f.sample(n, seed).map_err(|e| e.to_string())?;
        let h = icv_bandwidth_with(&data, &kernel, &opts)
            .map_err(|e| e.to_string())?
            .bandwidth;
        ratios.push(h / h0);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    check(
        (0.7..=1.5).contains(&lo) && (0.7..=1.5).contains(&hi),
        format!(
            "n = 1e6 gap {:.2}%; n = 5000 ratio to h0 in [{lo:.3}, {hi:.3}]",
            100.0 * rel
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("optimal alpha", c1_optimal_alpha),
        ("limiting MSE ratio", c2_limiting_ratio),
        ("optimality identity", c3_optimality_identity),
        ("model robustness region", c4_robustness_region),
        ("rounding behavior", c5_rounding),
        ("criterion oracles", c6_oracles),
        ("simulation study", c7_study),
        ("local ICV vs local LSCV", c8_local),
        ("consistency anchor", c9_consistency),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {} ({name}) [{secs:.1}s]: {detail}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
