use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use icv_kde::simulation::{format_number, write_records_csv, write_summary_csv};
use icv_kde::{
    icv_bandwidth_with, icv_capped_with, ingest, ingest_path, local_bandwidths, local_estimate,
    minimize_lscv_with, model_params, mse_opt, optimal_alpha, oversmoothed_selection, relative_error_terms,
    run_study, sigma_opt, theory_constants, uniform_grid, BandwidthSelection, Dataset, Error, KernelChoice,
    KernelEstimate, LocalMethod, SearchOptions, SelectionKernel, SignedGaussianMixture, StudyConfig,
    SuiteDensity,
};

#[derive(Parser)]
#[command(
    name = "icv",
    version,
    about = "Kernel density bandwidth selection by indirect cross-validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select a bandwidth for a sample; prints JSON.
    Select(SelectArgs),
    /// Evaluate the Gaussian kernel estimate on a grid; prints CSV (x, fhat).
    Density(DensityArgs),
    /// Local ICV bandwidths and estimate on a grid; prints CSV.
    Local(LocalArgs),
    /// Asymptotic constants for a selection kernel; prints JSON.
    Theory(TheoryArgs),
    /// Monte Carlo comparison of LSCV and capped ICV.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Lscv,
    Icv,
    IcvCapped,
    Os,
}

#[derive(Args)]
struct SelectionFlags {
    #[arg(long, value_enum, default_value = "icv-capped")]
    method: MethodArg,
    /// Selection-kernel α (default: model value for the sample size).
    #[arg(long, requires = "sigma")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    sigma: Option<f64>,
    #[arg(long, default_value_t = icv_kde::optimize::DEFAULT_GRID_POINTS)]
    grid_points: usize,
}

#[derive(Args)]
struct SelectArgs {
    /// Newline-delimited sample; `-` reads stdin.
    input: String,
    #[command(flatten)]
    selection: SelectionFlags,
    /// Write the scanned criterion curve as CSV (h, criterion).
    #[arg(long)]
    emit_trace: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    input: String,
    /// Use this bandwidth instead of selecting one.
    #[arg(long)]
    bandwidth: Option<f64>,
    #[command(flatten)]
    selection: SelectionFlags,
    /// Evaluation grid `lo:hi:step` (default: data range padded by 3h, 200 points).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Args)]
struct LocalArgs {
    /// Sample file or `-`; omit to draw a sample from `--density`.
    input: Option<String>,
    #[arg(long, default_value_t = 0.3)]
    window: f64,
    #[arg(long, default_value_t = 6.0)]
    alpha: f64,
    #[arg(long, default_value_t = 6.0)]
    sigma: f64,
    #[arg(long, default_value = "-3:3:0.1", allow_hyphen_values = true)]
    grid: String,
    /// Named density; adds an `f_true` column and is the sampling source without input.
    #[arg(long)]
    density: Option<SuiteDensity>,
    /// Sample size when sampling from `--density`.
    #[arg(long, default_value_t = 1500)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value = "gaussian")]
    density: SuiteDensity,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long = "density")]
    densities: Vec<SuiteDensity>,
    #[arg(long = "n")]
    sample_sizes: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, requires = "sigma", conflicts_with = "model")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha", conflicts_with = "model")]
    sigma: Option<f64>,
    /// Use the model `(α, σ)` for each n (the default).
    #[arg(long)]
    model: bool,
    /// Add n = 5000 to the sample sizes.
    #[arg(long)]
    large: bool,
    #[arg(long, num_args = 2, value_names = ["RECORDS", "SUMMARY"])]
    out: Option<Vec<PathBuf>>,
}

type AnyResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

fn read_input(input: &str) -> icv_kde::Result<Dataset> {
    if input == "-" {
        ingest(io::stdin().lock())
    } else {
        ingest_path(input)
    }
}

fn select(data: &[f64], flags: &SelectionFlags) -> icv_kde::Result<BandwidthSelection> {
    let opts = SearchOptions::default().with_grid_points(flags.grid_points);
    let kernel = || match (flags.alpha, flags.sigma) {
        (Some(a), Some(s)) => SelectionKernel::new(a, s),
        _ => match SelectionKernel::for_sample_size(data.len() as u64) {
            Err(Error::OutsideModelRange {
                suggested_alpha,
                suggested_sigma,
                ..
            }) => {
                eprintln!(
                    "warning: n={} is outside the model range; using alpha={suggested_alpha}, sigma={suggested_sigma}",
                    data.len()
                );
                SelectionKernel::new(suggested_alpha, suggested_sigma)
            }
            other => other,
        },
    };
    match flags.method {
        MethodArg::Lscv => minimize_lscv_with(data, &SignedGaussianMixture::standard_normal(), &opts),
        MethodArg::Icv => icv_bandwidth_with(data, &kernel()?, &opts),
        MethodArg::IcvCapped => icv_capped_with(data, &kernel()?, &opts),
        MethodArg::Os => oversmoothed_selection(data),
    }
}

fn run_select(args: SelectArgs) -> AnyResult<()> {
    let data = read_input(&args.input)?;
    let sel = select(&data.values, &args.selection)?;
    if let Some(path) = &args.emit_trace {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "h,criterion")?;
        for p in &sel.trace {
            writeln!(out, "{},{}", format_number(p.h), format_number(p.value))?;
        }
    }
    println!("{}", serde_json::to_string_pretty(&sel)?);
    Ok(())
}

fn parse_grid(spec: &str) -> AnyResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be lo:hi:step, got {spec:?}").into());
    }
    let lo: f64 = parts[0].trim().parse()?;
    let hi: f64 = parts[1].trim().parse()?;
    let step: f64 = parts[2].trim().parse()?;
    Ok(uniform_grid(lo, hi, step)?)
}

fn run_density(args: DensityArgs) -> AnyResult<()> {
    let data = read_input(&args.input)?;
    let h = match args.bandwidth {
        Some(h) => h,
        None => select(&data.values, &args.selection)?.bandwidth,
    };
    let est = KernelEstimate::gaussian(&data.values, h)?;
    let grid = match &args.grid {
        Some(spec) => parse_grid(spec)?,
        None => {
            let (lo, hi) = (data.min - 3.0 * h, data.max + 3.0 * h);
            (0..200).map(|i| lo + (hi - lo) * i as f64 / 199.0).collect()
        }
    };
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "x,fhat")?;
    for x in grid {
        writeln!(out, "{},{}", format_number(x), format_number(est.estimate_at(x)))?;
    }
    Ok(())
}

fn run_local(args: LocalArgs) -> AnyResult<()> {
    let data = match (&args.input, args.density) {
        (Some(input), _) => read_input(input)?.values,
        (None, Some(d)) => d.density().sample(args.n, args.seed)?,
        (None, None) => return Err("provide an input file or --density".into()),
    };
    let grid = parse_grid(&args.grid)?;
    let method = LocalMethod::Icv {
        alpha: args.alpha,
        sigma: args.sigma,
    };
    let lbf = local_bandwidths(&data, method, args.window, &grid)?;
    let truth = args.density.map(|d| d.density());
    let mut out = BufWriter::new(io::stdout().lock());
    write!(out, "x,bandwidth,fhat_local")?;
    if truth.is_some() {
        write!(out, ",f_true")?;
    }
    writeln!(out)?;
    for (&x, &h) in lbf.grid().iter().zip(lbf.bandwidths()) {
        let fhat = local_estimate(&data, &lbf, x)?;
        write!(
            out,
            "{},{},{}",
            format_number(x),
            format_number(h),
            format_number(fhat)
        )?;
        if let Some(f) = &truth {
            write!(out, ",{}", format_number(f.pdf(x)))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn run_theory(args: TheoryArgs) -> AnyResult<()> {
    let alpha_star = optimal_alpha();
    let alpha = args.alpha.unwrap_or(alpha_star);
    let fun = args.density.density().functionals();
    let constants = theory_constants(alpha)?;
    let sigma = sigma_opt(alpha, args.n, &fun)?;
    let terms = relative_error_terms(alpha, sigma, args.n, &fun)?;
    let report = json!({
        "density": args.density.name(),
        "n": args.n,
        "alpha": alpha,
        "optimal_alpha": alpha_star,
        "constants": constants,
        "functionals": fun,
        "sigma_opt": sigma,
        "terms_at_sigma_opt": terms,
        "mse_opt": mse_opt(alpha, args.n, &fun)?,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> AnyResult<()> {
    let mut config = StudyConfig {
        replications: args.reps,
        base_seed: args.seed,
        ..StudyConfig::default()
    };
    if !args.densities.is_empty() {
        config.densities = args.densities;
    }
    if !args.sample_sizes.is_empty() {
        config.sample_sizes = args.sample_sizes;
    }
    if args.large && !config.sample_sizes.contains(&5000) {
        config.sample_sizes.push(5000);
    }
    if let (Some(alpha), Some(sigma)) = (args.alpha, args.sigma) {
        config.kernel = KernelChoice::Fixed { alpha, sigma };
    } else {
        for &n in &config.sample_sizes {
            model_params(n as u64)?;
        }
    }
    let cells = run_study(&config)?;
    for cell in &cells {
        for f in &cell.failures {
            eprintln!("{} n={} seed={}: {}", cell.density, cell.n, f.seed, f.message);
        }
    }
    match &args.out {
        Some(paths) => {
            write_records_csv(BufWriter::new(File::create(&paths[0])?), &cells)?;
            write_summary_csv(BufWriter::new(File::create(&paths[1])?), &cells)?;
        }
        None => write_summary_csv(io::stdout().lock(), &cells)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Select(a) => run_select(a),
        Command::Density(a) => run_density(a),
        Command::Local(a) => run_local(a),
        Command::Theory(a) => run_theory(a),
        Command::Simulate(a) => run_simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
