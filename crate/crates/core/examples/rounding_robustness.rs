//! Rounded data: the Gaussian LSCV criterion dives as h -> 0, a robust selection kernel does not.

use icv_kde::{lscv, SelectionKernel, SignedGaussianMixture, SuiteDensity};

fn main() -> icv_kde::Result<()> {
    let raw = SuiteDensity::Gaussian.density().sample(100, 5)?;
    let data: Vec<f64> = raw.iter().map(|x| (x * 10.0).round() / 10.0).collect();
    let phi = SignedGaussianMixture::standard_normal();
    let robust = SelectionKernel::for_sample_size(100)?;
    let fragile = SelectionKernel::new(0.2, 5.0)?;
    println!(
        "robust_to_rounding: model {}, (0.2, 5) {}",
        robust.robust_to_rounding(),
        fragile.robust_to_rounding()
    );

    println!("{:>8} {:>14} {:>14} {:>14}", "h", "phi", "model L", "L(0.2, 5)");
    for h in [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4] {
        println!(
            "{h:>8.0e} {:>14.4} {:>14.4} {:>14.4}",
            lscv(&data, &phi, h)?,
            lscv(&data, robust.mixture(), h)?,
            lscv(&data, fragile.mixture(), h)?
        );
    }
    Ok(())
}
