//! Select a bandwidth for a newline-delimited file of observations.
//!
//! `cargo run --example ingest_data -- path/to/data.txt`; without an argument
//! a generated sample is written to a temporary file first.

use icv_kde::{icv_capped, ingest_path, model_params, KernelEstimate, SuiteDensity};

fn main() -> icv_kde::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            let p = std::env::temp_dir().join("icv_example_data.txt");
            let body: String = SuiteDensity::SkewedBimodal
                .density()
                .sample(400, 9)?
                .iter()
                .map(|v| format!("{v}\n"))
                .collect();
            std::fs::write(&p, format!("# generated sample\n{body}"))?;
            p
        }
    };
    let data = ingest_path(&path)?;
    println!(
        "{} observations in [{:.3}, {:.3}]",
        data.len(),
        data.min,
        data.max
    );

    let n = (data.len() as u64).clamp(100, 500_000);
    let p = model_params(n)?;
    let sel = icv_capped(&data.values, p.alpha, p.sigma)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&sel).expect("selection serializes")
    );

    let est = KernelEstimate::gaussian(&data.values, sel.bandwidth)?;
    let step = (data.max - data.min) / 10.0;
    for i in 0..=10 {
        let x = data.min + step * i as f64;
        println!("{x:>8.3} {:.4}", est.estimate_at(x));
    }
    Ok(())
}
