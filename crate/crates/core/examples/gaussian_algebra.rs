//! Closed-form operations on signed Gaussian mixtures.

use icv_kde::SignedGaussianMixture;

fn main() -> icv_kde::Result<()> {
    let phi = SignedGaussianMixture::standard_normal();
    // a mixture with a negative component
    let m = SignedGaussianMixture::from_triples(&[(1.5, 0.0, 1.0), (-0.5, 0.0, 3.0)])?;

    println!("m(0)           = {:.6}", m.evaluate(0.0));
    println!("total mass     = {:.6}", m.total_mass());
    println!("R(m)           = {:.6}", m.roughness());
    println!("<m, phi>       = {:.6}", m.inner_product(&phi));
    for j in [0, 2, 4] {
        println!("moment {j}       = {:.6}", m.even_moment(j)?);
    }
    let conv = m.convolve(&phi);
    println!(
        "(m * phi)(0.5) = {:.6} with {} components",
        conv.evaluate(0.5),
        conv.len()
    );
    println!("phi''(0.5)     = {:.6}", phi.derivative(0.5, 2));
    Ok(())
}
