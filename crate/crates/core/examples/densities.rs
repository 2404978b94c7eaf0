//! Built-in normal-mixture targets: sampling, exact MISE and its minimizer.

use icv_kde::{exact_mise, mise_optimal_bandwidth, SignedGaussianMixture, SuiteDensity};

fn main() -> icv_kde::Result<()> {
    let phi = SignedGaussianMixture::standard_normal();
    let n = 250;
    println!(
        "{:<20} {:>8} {:>8} {:>10} {:>10}",
        "density", "mean", "sd", "h0", "MISE(h0)"
    );
    for d in SuiteDensity::ALL {
        let f = d.density();
        let h0 = mise_optimal_bandwidth(&phi, &f, n)?;
        println!(
            "{:<20} {:>8.3} {:>8.3} {:>10.4} {:>10.6}",
            d.name(),
            f.mean(),
            f.sd(),
            h0,
            exact_mise(&phi, &f, n, h0)?
        );
    }
    let sample = SuiteDensity::Bimodal.density().sample(5, 42)?;
    println!("\nfive bimodal draws: {sample:.3?}");
    Ok(())
}
