//! The L(.; alpha, sigma) family: shape class, rescaling constant, rounding robustness.

use icv_kde::{model_params, robust_alpha_threshold, SelectionKernel};

fn main() -> icv_kde::Result<()> {
    println!(
        "{:>8} {:>8} {:>20} {:>8} {:>8} {:>7}",
        "alpha", "sigma", "class", "L(0)", "C", "robust"
    );
    for (alpha, sigma) in [(2.0, 0.5), (0.5, 0.8), (2.4233, 3.0), (6.0, 6.0), (0.2, 5.0)] {
        let k = SelectionKernel::new(alpha, sigma)?;
        println!(
            "{alpha:>8} {sigma:>8} {:>20} {:>8.4} {:>8.4} {:>7}",
            format!("{:?}", k.classify()),
            k.value_at_zero(),
            k.rescale_constant(),
            k.robust_to_rounding()
        );
    }

    println!("\nsmallest robust alpha:");
    for sigma in [1.5, 3.0, 6.0, 20.0] {
        println!(
            "  sigma = {sigma:>4}: alpha > {:.4}",
            robust_alpha_threshold(sigma)?
        );
    }

    println!("\nmodel kernels:");
    for n in [100u64, 1_000, 10_000, 100_000] {
        let p = model_params(n)?;
        println!("  n = {n:>6}: alpha = {:.3}, sigma = {:.3}", p.alpha, p.sigma);
    }
    Ok(())
}
