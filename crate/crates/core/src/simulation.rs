//! Monte Carlo comparison of LSCV and capped ICV bandwidths.
//!
//! Each replication draws a sample with seed `base_seed + index`, computes
//! the ISE-optimal bandwidth `ĥ₀`, `ĥ_UCV`, `ĥ_ICV`, `ĥ_OS` and
//! `ĥ*_ICV = min(ĥ_ICV, ĥ_OS)`, and the exact ISE at each. Replications are
//! independent and run in parallel; records are kept in seed order so the
//! summaries do not depend on scheduling.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::cross_validation::{
    cap_selection, icv_bandwidth_with, minimize_lscv_with, oversmoothed_bandwidth,
};
use crate::densities::{NormalMixture, SuiteDensity};
use crate::error::{Error, Result};
use crate::estimation::{ise_optimal_bandwidth_with, IseCriterion};
use crate::mixture::SignedGaussianMixture;
use crate::optimize::SearchOptions;
use crate::selection_kernel::{model_params, SelectionKernel};

/// Selection-kernel parameters used in a study.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum KernelChoice {
    /// `(α, σ)` from the polynomial model in `log10 n`.
    Model,
    Fixed {
        alpha: f64,
        sigma: f64,
    },
}

impl KernelChoice {
    pub fn kernel_for(&self, n: usize) -> Result<SelectionKernel> {
        match *self {
            KernelChoice::Model => {
                let p = model_params(n as u64)?;
                SelectionKernel::new(p.alpha, p.sigma)
            }
            KernelChoice::Fixed { alpha, sigma } => SelectionKernel::new(alpha, sigma),
        }
    }
}

/// Per-replication results.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub seed: u64,
    pub h0_hat: f64,
    pub h_ucv: f64,
    pub h_icv: f64,
    pub h_icv_star: f64,
    pub h_os: f64,
    pub ise_h0: f64,
    pub ise_ucv: f64,
    pub ise_icv: f64,
    pub ise_icv_star: f64,
    pub ucv_degenerate: bool,
    pub ucv_boundary: bool,
    pub icv_boundary: bool,
    pub icv_capped: bool,
}

impl ReplicationRecord {
    /// Compact flag string, e.g. `ucv_boundary|icv_capped`.
    pub fn flags(&self) -> String {
        let flags = [
            (self.ucv_degenerate, "ucv_degenerate"),
            (self.ucv_boundary, "ucv_boundary"),
            (self.icv_boundary, "icv_boundary"),
            (self.icv_capped, "icv_capped"),
        ];
        flags
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, name)| *name)
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// A replication that could not be completed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicationFailure {
    pub seed: u64,
    pub message: String,
}

/// Mean, standard deviation and skewness of a bandwidth over replications.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
}

impl Moments {
    /// Sample mean, `n−1` standard deviation and moment skewness `m₃/m₂^{3/2}`.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
        let sd = (m2 * n / (n - 1.0)).sqrt();
        let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
        Self { mean, sd, skewness }
    }
}

/// A ratio whose numerator and denominator are kept alongside it; the ratio
/// is absent when the denominator is zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ratio {
    pub numerator: f64,
    pub denominator: f64,
    pub value: Option<f64>,
}

impl Ratio {
    fn new(numerator: f64, denominator: f64) -> Self {
        let value = (denominator != 0.0).then(|| numerator / denominator);
        Self {
            numerator,
            denominator,
            value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StudySummary {
    pub density: String,
    pub n: usize,
    pub replications: usize,
    pub failed: usize,
    pub h0_hat: Moments,
    pub h_ucv: Moments,
    pub h_icv: Moments,
    pub h_icv_star: Moments,
    pub h_os: Moments,
    /// `Ê(ĥ*_ICV − Êĥ₀)² / Ê(ĥ_UCV − Êĥ₀)²`.
    pub sq_error_ratio: Ratio,
    /// `Ê(ISE(ĥ*_ICV)/ISE(ĥ₀)) / Ê(ISE(ĥ_UCV)/ISE(ĥ₀))`.
    pub ise_ratio: Ratio,
}

/// Aggregates replication records.
pub fn summarize(records: &[ReplicationRecord]) -> Result<StudySummary> {
    summarize_named("", 0, records, 0)
}

fn summarize_named(
    density: &str,
    n: usize,
    records: &[ReplicationRecord],
    failed: usize,
) -> Result<StudySummary> {
    if records.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 valid replications, got {}",
            records.len()
        )));
    }
    let column = |f: fn(&ReplicationRecord) -> f64| -> Vec<f64> { records.iter().map(f).collect() };
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;

    let h0 = column(|r| r.h0_hat);
    let e_h0 = mean(&h0);
    let sq_icv = mean(
        &column(|r| r.h_icv_star)
            .iter()
            .map(|h| (h - e_h0).powi(2))
            .collect::<Vec<_>>(),
    );
    let sq_ucv = mean(
        &column(|r| r.h_ucv)
            .iter()
            .map(|h| (h - e_h0).powi(2))
            .collect::<Vec<_>>(),
    );
    let rel_icv = mean(&column(|r| r.ise_icv_star / r.ise_h0));
    let rel_ucv = mean(&column(|r| r.ise_ucv / r.ise_h0));

    Ok(StudySummary {
        density: density.to_string(),
        n,
        replications: records.len(),
        failed,
        h0_hat: Moments::of(&h0),
        h_ucv: Moments::of(&column(|r| r.h_ucv)),
        h_icv: Moments::of(&column(|r| r.h_icv)),
        h_icv_star: Moments::of(&column(|r| r.h_icv_star)),
        h_os: Moments::of(&column(|r| r.h_os)),
        sq_error_ratio: Ratio::new(sq_icv, sq_ucv),
        ise_ratio: Ratio::new(rel_icv, rel_ucv),
    })
}

/// One replication on a sample drawn from `f` with the given seed.
pub fn run_replication(
    f: &NormalMixture,
    n: usize,
    seed: u64,
    kernel: &SelectionKernel,
    opts: &SearchOptions,
) -> Result<ReplicationRecord> {
    let data = f.sample(n, seed)?;
    let phi = SignedGaussianMixture::standard_normal();
    let h0_hat = ise_optimal_bandwidth_with(&data, &phi, f, opts)?;
    let ucv = minimize_lscv_with(&data, &phi, opts)?;
    let icv = icv_bandwidth_with(&data, kernel, opts)?;
    let h_os = oversmoothed_bandwidth(&data)?;
    let h_icv = icv.bandwidth;
    let icv_boundary = icv.boundary_hit;
    let star = cap_selection(icv, h_os);
    let ise = IseCriterion::new(&data, &phi, f);
    Ok(ReplicationRecord {
        seed,
        h0_hat,
        h_ucv: ucv.bandwidth,
        h_icv,
        h_icv_star: star.bandwidth,
        h_os,
        ise_h0: ise.evaluate(h0_hat),
        ise_ucv: ise.evaluate(ucv.bandwidth),
        ise_icv: ise.evaluate(h_icv),
        ise_icv_star: ise.evaluate(star.bandwidth),
        ucv_degenerate: ucv.degenerate_zero,
        ucv_boundary: ucv.boundary_hit,
        icv_boundary,
        icv_capped: star.capped,
    })
}

/// Study design.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub densities: Vec<SuiteDensity>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub base_seed: u64,
    pub kernel: KernelChoice,
    pub search: SearchOptions,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            densities: SuiteDensity::ALL[..5].to_vec(),
            sample_sizes: vec![100, 250, 500],
            replications: 200,
            base_seed: 1,
            kernel: KernelChoice::Model,
            search: SearchOptions::default(),
        }
    }
}

/// Records and summary for one (density, n) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyCell {
    pub density: SuiteDensity,
    pub n: usize,
    pub records: Vec<ReplicationRecord>,
    pub failures: Vec<ReplicationFailure>,
    pub summary: StudySummary,
}

/// Runs one (density, n) cell.
pub fn run_cell(
    density: SuiteDensity,
    n: usize,
    replications: usize,
    base_seed: u64,
    kernel: KernelChoice,
    search: &SearchOptions,
) -> Result<StudyCell> {
    if replications < 2 {
        return Err(Error::InvalidParameter("need at least 2 replications".into()));
    }
    let f = density.density();
    let selection = kernel.kernel_for(n)?;
    let outcomes: Vec<(u64, Result<ReplicationRecord>)> = (0..replications as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            (seed, run_replication(&f, n, seed, &selection, search))
        })
        .collect();
    let mut records = Vec::with_capacity(replications);
    let mut failures = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => failures.push(ReplicationFailure {
                seed,
                message: e.to_string(),
            }),
        }
    }
    let summary = summarize_named(density.name(), n, &records, failures.len())?;
    Ok(StudyCell {
        density,
        n,
        records,
        failures,
        summary,
    })
}

/// Runs every (density, n) cell of the design.
pub fn run_study(config: &StudyConfig) -> Result<Vec<StudyCell>> {
    let mut cells = Vec::new();
    for &density in &config.densities {
        for &n in &config.sample_sizes {
            cells.push(run_cell(
                density,
                n,
                config.replications,
                config.base_seed,
                config.kernel,
                &config.search,
            )?);
        }
    }
    Ok(cells)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub const RECORDS_HEADER: &str =
    "density,n,seed,h0_hat,h_ucv,h_icv,h_icv_star,h_os,ise_h0,ise_ucv,ise_icv_star,flags";

pub fn write_records_csv<W: Write>(mut out: W, cells: &[StudyCell]) -> Result<()> {
    writeln!(out, "{RECORDS_HEADER}")?;
    for cell in cells {
        for r in &cell.records {
            let nums = [
                r.h0_hat,
                r.h_ucv,
                r.h_icv,
                r.h_icv_star,
                r.h_os,
                r.ise_h0,
                r.ise_ucv,
                r.ise_icv_star,
            ]
            .map(format_number)
            .join(",");
            writeln!(
                out,
                "{},{},{},{},{}",
                cell.density,
                cell.n,
                r.seed,
                nums,
                r.flags()
            )?;
        }
    }
    Ok(())
}

pub const SUMMARY_HEADER: &str = "density,n,reps,failed,\
mean_h0_hat,sd_h0_hat,mean_h_ucv,sd_h_ucv,mean_h_icv,sd_h_icv,mean_h_icv_star,sd_h_icv_star,mean_h_os,sd_h_os,\
skew_h_ucv,skew_h_icv_star,sq_error_num,sq_error_den,sq_error_ratio,ise_num,ise_den,ise_ratio";

pub fn write_summary_csv<W: Write>(mut out: W, cells: &[StudyCell]) -> Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), format_number);
    for cell in cells {
        let s = &cell.summary;
        let nums = [
            s.h0_hat.mean,
            s.h0_hat.sd,
            s.h_ucv.mean,
            s.h_ucv.sd,
            s.h_icv.mean,
            s.h_icv.sd,
            s.h_icv_star.mean,
            s.h_icv_star.sd,
            s.h_os.mean,
            s.h_os.sd,
            s.h_ucv.skewness,
            s.h_icv_star.skewness,
            s.sq_error_ratio.numerator,
            s.sq_error_ratio.denominator,
        ]
        .map(format_number)
        .join(",");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            s.density,
            s.n,
            s.replications,
            s.failed,
            nums,
            opt(s.sq_error_ratio.value),
            format_number(s.ise_ratio.numerator),
            format_number(s.ise_ratio.denominator),
            opt(s.ise_ratio.value),
        )?;
    }
    Ok(())
}

/// Parsed observations with their range.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Reads newline-delimited numbers, skipping blank lines and `#` comments.
pub fn ingest<R: Read>(reader: R) -> Result<Dataset> {
    let mut values = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let v: f64 = trimmed.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            content: trimmed.to_string(),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                line: idx + 1,
                content: trimmed.to_string(),
            });
        }
        values.push(v);
    }
    if values.len() < 2 {
        return Err(Error::TooFewObservations);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Dataset { values, min, max })
}

pub fn ingest_path<P: AsRef<Path>>(path: P) -> Result<Dataset> {
    ingest(std::fs::File::open(path)?)
}
