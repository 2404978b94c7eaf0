//! Location-dependent bandwidths on a sharply peaked target.

use icv_kde::{
    average_squared_error, local_bandwidths, local_estimate, uniform_grid, LocalMethod, SuiteDensity,
};

fn main() -> icv_kde::Result<()> {
    let f = SuiteDensity::KurtoticUnimodal.density();
    let data = f.sample(300, 3)?;
    let grid = uniform_grid(-3.0, 3.0, 0.2)?;
    let icv = local_bandwidths(
        &data,
        LocalMethod::Icv {
            alpha: 6.0,
            sigma: 6.0,
        },
        0.3,
        &grid,
    )?;
    let lscv = local_bandwidths(&data, LocalMethod::Lscv, 0.3, &grid)?;

    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10}",
        "x", "h_icv", "h_lscv", "fhat_icv", "f"
    );
    for (i, &x) in grid.iter().enumerate().step_by(3) {
        println!(
            "{x:>6.2} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            icv.bandwidths()[i],
            lscv.bandwidths()[i],
            local_estimate(&data, &icv, x)?,
            f.pdf(x)
        );
    }
    let ase = |lbf| average_squared_error(|x| local_estimate(&data, lbf, x).unwrap(), &f, &grid);
    println!("ASE: local ICV {:.6}, local LSCV {:.6}", ase(&icv), ase(&lscv));
    Ok(())
}
