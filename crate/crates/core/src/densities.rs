//! Normal-mixture target densities, their samplers and exact functionals.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixture::{normal_pdf_derivative, SignedGaussianMixture};

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A density `Σ w_k N(m_k, s_k²)` with positive weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalMixture {
    mixture: SignedGaussianMixture,
    cumulative: Vec<f64>,
}

/// `R(f)`, `R(f'')` and `R(f''')`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityFunctionals {
    pub r_f: f64,
    pub r_f2: f64,
    pub r_f3: f64,
}

impl NormalMixture {
    /// Builds a mixture from `(weight, mean, sd)` triples.
    pub fn new(components: &[(f64, f64, f64)]) -> Result<Self> {
        if components.iter().any(|&(w, _, _)| !(w > 0.0 && w <= 1.0)) {
            return Err(Error::InvalidMixture(
                "normal mixture weights must lie in (0, 1]".into(),
            ));
        }
        let total: f64 = components.iter().map(|c| c.0).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMixture(format!(
                "normal mixture weights sum to {total}, not 1"
            )));
        }
        let mixture = SignedGaussianMixture::from_triples(components)?;
        let mut acc = 0.0;
        let cumulative = components
            .iter()
            .map(|c| {
                acc += c.0;
                acc
            })
            .collect();
        Ok(Self { mixture, cumulative })
    }

    pub fn standard_normal() -> Self {
        Self::new(&[(1.0, 0.0, 1.0)]).expect("valid")
    }

    pub fn mixture(&self) -> &SignedGaussianMixture {
        &self.mixture
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.mixture.evaluate(x)
    }

    /// `k`-th derivative of the density at `x`.
    pub fn pdf_derivative(&self, x: f64, k: usize) -> f64 {
        self.mixture.derivative(x, k)
    }

    pub fn mean(&self) -> f64 {
        self.mixture.components().iter().map(|c| c.weight * c.mean).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.mixture
            .components()
            .iter()
            .map(|c| c.weight * (c.scale * c.scale + (c.mean - mu).powi(2)))
            .sum()
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    /// The law of `location + scale·X` for `X ~ self`.
    pub fn affine(&self, location: f64, scale: f64) -> Result<Self> {
        let triples: Vec<_> = self
            .mixture
            .components()
            .iter()
            .map(|c| (c.weight, location + scale * c.mean, scale * c.scale))
            .collect();
        Self::new(&triples)
    }

    /// `n` independent draws, deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n < 1 {
            return Err(Error::InvalidParameter("sample size must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n).map(|_| self.draw(&mut rng)).collect())
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let k = self
            .cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1);
        let c = self.mixture.components()[k];
        let z: f64 = rng.sample(StandardNormal);
        c.mean + c.scale * z
    }

    /// `R(f^{(k)}) = (−1)^k Σ_i Σ_j w_i w_j φ^{(2k)}_{√(s_i²+s_j²)}(m_i − m_j)`.
    pub fn derivative_roughness(&self, k: usize) -> f64 {
        let comps = self.mixture.components();
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut total = 0.0;
        for a in comps {
            for b in comps {
                total += a.weight
                    * b.weight
                    * normal_pdf_derivative(2 * k, a.mean - b.mean, a.scale.hypot(b.scale));
            }
        }
        sign * total
    }

    pub fn functionals(&self) -> DensityFunctionals {
        DensityFunctionals {
            r_f: self.derivative_roughness(0),
            r_f2: self.derivative_roughness(2),
            r_f3: self.derivative_roughness(3),
        }
    }
}

/// The six named test densities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteDensity {
    Gaussian,
    SkewedUnimodal,
    Bimodal,
    SeparatedBimodal,
    SkewedBimodal,
    KurtoticUnimodal,
}

impl SuiteDensity {
    pub const ALL: [SuiteDensity; 6] = [
        SuiteDensity::Gaussian,
        SuiteDensity::SkewedUnimodal,
        SuiteDensity::Bimodal,
        SuiteDensity::SeparatedBimodal,
        SuiteDensity::SkewedBimodal,
        SuiteDensity::KurtoticUnimodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteDensity::Gaussian => "gaussian",
            SuiteDensity::SkewedUnimodal => "skewed_unimodal",
            SuiteDensity::Bimodal => "bimodal",
            SuiteDensity::SeparatedBimodal => "separated_bimodal",
            SuiteDensity::SkewedBimodal => "skewed_bimodal",
            SuiteDensity::KurtoticUnimodal => "kurtotic_unimodal",
        }
    }

    /// Mixture parameters as `(weight, mean, sd)`. The kurtotic unimodal
    /// density is density #4 of Marron & Wand (1992).
    pub fn components(self) -> Vec<(f64, f64, f64)> {
        match self {
            SuiteDensity::Gaussian => vec![(1.0, 0.0, 1.0)],
            SuiteDensity::SkewedUnimodal => vec![
                (0.2, 0.0, 1.0),
                (0.2, 0.5, 2.0 / 3.0),
                (0.6, 13.0 / 12.0, 5.0 / 9.0),
            ],
            SuiteDensity::Bimodal => vec![(0.5, -1.0, 2.0 / 3.0), (0.5, 1.0, 2.0 / 3.0)],
            SuiteDensity::SeparatedBimodal => vec![(0.5, -1.5, 0.5), (0.5, 1.5, 0.5)],
            SuiteDensity::SkewedBimodal => vec![(0.75, 0.0, 1.0), (0.25, 1.5, 1.0 / 3.0)],
            SuiteDensity::KurtoticUnimodal => vec![(2.0 / 3.0, 0.0, 1.0), (1.0 / 3.0, 0.0, 0.1)],
        }
    }

    pub fn density(self) -> NormalMixture {
        NormalMixture::new(&self.components()).expect("suite parameters are valid")
    }
}

impl fmt::Display for SuiteDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteDensity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteDensity::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::UnknownDensity(s.to_string()))
    }
}

/// All six suite densities keyed by name.
pub fn standard_suite() -> BTreeMap<&'static str, NormalMixture> {
    SuiteDensity::ALL
        .into_iter()
        .map(|d| (d.name(), d.density()))
        .collect()
}
