//! LSCV, ICV and capped ICV on one sample, scored by exact ISE.

use icv_kde::{
    icv_capped, minimize_lscv, model_params, oversmoothed_bandwidth, KernelEstimate, SignedGaussianMixture,
    SuiteDensity,
};

fn main() -> icv_kde::Result<()> {
    let f = SuiteDensity::Bimodal.density();
    let data = f.sample(200, 11)?;
    let p = model_params(data.len() as u64)?;

    let ucv = minimize_lscv(&data, &SignedGaussianMixture::standard_normal())?;
    let icv = icv_capped(&data, p.alpha, p.sigma)?;
    let os = oversmoothed_bandwidth(&data)?;

    println!("model kernel: alpha = {:.3}, sigma = {:.3}", p.alpha, p.sigma);
    println!(
        "b_UCV under L = {:.4}, C = {:.4}",
        icv.selection_bandwidth.unwrap(),
        icv.rescale_constant.unwrap()
    );
    for (name, h) in [
        ("LSCV", ucv.bandwidth),
        ("ICV*", icv.bandwidth),
        ("oversmoothed", os),
    ] {
        let ise = KernelEstimate::gaussian(&data, h)?.exact_ise(&f);
        println!("{name:<13} h = {h:.4}  ISE = {ise:.6}");
    }
    println!("cap applied: {}", icv.capped);
    Ok(())
}
