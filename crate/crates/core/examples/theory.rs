//! Asymptotic constants: optimal alpha, sigma_opt and the relative-error decomposition.

use icv_kde::{
    asymptotic_bandwidths, mse_opt, optimal_alpha, relative_error_terms, sigma_opt, theory_constants,
    SelectionKernel, SuiteDensity,
};

fn main() -> icv_kde::Result<()> {
    let alpha0 = optimal_alpha();
    let best = theory_constants(alpha0)?.product();
    println!("optimal alpha = {alpha0:.4}");
    for alpha in [0.5, 1.0, alpha0, 10.0, 1e6] {
        println!(
            "  C*D at alpha = {alpha:>9.4}: {:.5} ({:.3}x)",
            theory_constants(alpha)?.product(),
            theory_constants(alpha)?.product() / best
        );
    }

    let fun = SuiteDensity::Gaussian.density().functionals();
    for n in [100u64, 1_000, 10_000] {
        let s = sigma_opt(alpha0, n, &fun)?;
        let t = relative_error_terms(alpha0, s, n, &fun)?;
        let k = SelectionKernel::new(alpha0, s)?;
        let (b, h) = asymptotic_bandwidths(&k, n, &fun)?;
        println!(
            "n = {n:>5}: sigma_opt = {s:.3}, S_n = {:.4}, B_n = {:.4}, mse_opt = {:.5}, b_n = {b:.4}, h_n = {h:.4}",
            t.s_n,
            t.b_n,
            mse_opt(alpha0, n, &fun)?
        );
    }
    Ok(())
}
