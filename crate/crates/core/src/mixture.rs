//! Closed-form algebra over signed Gaussian mixtures.
//!
//! A [`SignedGaussianMixture`] is a finite sum `Σ w_k φ((x − m_k)/s_k)/s_k`
//! with real (possibly negative) weights. Kernels, selection kernels, target
//! densities and kernel estimates are all represented this way, so every
//! integral the bandwidth criteria need (convolutions, products, roughness,
//! moments) reduces to sums of Gaussian densities evaluated at differences
//! of means.

use crate::error::{Error, Result};

/// `1/√(2π)`
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
#[inline]
pub fn std_normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Density of `N(0, scale²)` at `x`.
#[inline]
pub fn normal_pdf(x: f64, scale: f64) -> f64 {
    std_normal_pdf(x / scale) / scale
}

/// Probabilists' Hermite polynomial `He_k(z)`.
///
/// Orders 0 through 6 are written out; higher orders fall back to the
/// three-term recurrence `He_{k+1} = z He_k − k He_{k−1}`.
pub fn hermite(order: usize, z: f64) -> f64 {
    let z2 = z * z;
    match order {
        0 => 1.0,
        1 => z,
        2 => z2 - 1.0,
        3 => z * (z2 - 3.0),
        4 => z2 * (z2 - 6.0) + 3.0,
        5 => z * (z2 * (z2 - 10.0) + 15.0),
        6 => z2 * (z2 * (z2 - 15.0) + 45.0) - 15.0,
        _ => {
            let (mut prev, mut cur) = (hermite(5, z), hermite(6, z));
            for k in 6..order {
                let next = z * cur - k as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `d^k/dx^k` of the `N(0, scale²)` density, evaluated at `x`.
pub fn normal_pdf_derivative(order: usize, x: f64, scale: f64) -> f64 {
    let z = x / scale;
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * hermite(order, z) * std_normal_pdf(z) / scale.powi(order as i32 + 1)
}

/// `(j − 1)!!` for even `j`, i.e. the `j`-th moment of a standard normal.
fn double_factorial_odd(j: u32) -> f64 {
    (1..j).step_by(2).map(f64::from).product()
}

/// One term `weight · φ((x − mean)/scale)/scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub mean: f64,
    pub scale: f64,
}

impl Component {
    pub fn new(weight: f64, mean: f64, scale: f64) -> Self {
        Self { weight, mean, scale }
    }

    #[inline]
    pub fn evaluate(&self, x: f64) -> f64 {
        self.weight * normal_pdf(x - self.mean, self.scale)
    }
}

/// Finite signed combination of Gaussian densities.
///
/// Values are immutable; every operation returns a new mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedGaussianMixture {
    components: Vec<Component>,
}

impl SignedGaussianMixture {
    /// Builds a mixture, rejecting an empty component list and any
    /// non-finite or non-positive scale.
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidMixture("component list is empty".into()));
        }
        for c in &components {
            if !(c.scale > 0.0 && c.scale.is_finite()) {
                return Err(Error::InvalidMixture(format!(
                    "scale must be positive and finite, got {}",
                    c.scale
                )));
            }
            if !c.weight.is_finite() || !c.mean.is_finite() {
                return Err(Error::InvalidMixture(format!(
                    "non-finite weight or mean in {c:?}"
                )));
            }
        }
        Ok(Self { components })
    }

    /// Builds a mixture from `(weight, mean, scale)` triples.
    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(triples.iter().map(|&(w, m, s)| Component::new(w, m, s)).collect())
    }

    /// The standard normal density φ.
    pub fn standard_normal() -> Self {
        Self::gaussian(0.0, 1.0)
    }

    /// A single unit-weight component. Panics on a non-positive scale.
    pub fn gaussian(mean: f64, scale: f64) -> Self {
        assert!(scale > 0.0, "scale must be positive");
        Self {
            components: vec![Component::new(1.0, mean, scale)],
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `∫ m`, which is the sum of the weights.
    pub fn total_mass(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    pub fn max_scale(&self) -> f64 {
        self.components.iter().map(|c| c.scale).fold(0.0, f64::max)
    }

    pub fn is_centered(&self) -> bool {
        self.components.iter().all(|c| c.mean == 0.0)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.evaluate(x)).sum()
    }

    /// `order`-th derivative at `x`.
    pub fn derivative(&self, x: f64, order: usize) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * normal_pdf_derivative(order, x - c.mean, c.scale))
            .sum()
    }

    /// `(a ⋆ b)(u) = ∫ a(t) b(u − t) dt`. Produces `len(a)·len(b)` components.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut components = Vec::with_capacity(self.len() * other.len());
        for a in &self.components {
            for b in &other.components {
                components.push(Component::new(
                    a.weight * b.weight,
                    a.mean + b.mean,
                    a.scale.hypot(b.scale),
                ));
            }
        }
        Self { components }
    }

    /// `x ↦ m(−x)`.
    pub fn reflect(&self) -> Self {
        self.map_components(|c| Component::new(c.weight, -c.mean, c.scale))
    }

    /// `x ↦ m(x/h)/h`, the mixture rescaled to bandwidth `h`.
    pub fn rescale(&self, h: f64) -> Self {
        assert!(h > 0.0, "bandwidth must be positive");
        self.map_components(|c| Component::new(c.weight, c.mean * h, c.scale * h))
    }

    /// `x ↦ m(x − shift)`.
    pub fn shift(&self, shift: f64) -> Self {
        self.map_components(|c| Component::new(c.weight, c.mean + shift, c.scale))
    }

    /// Multiplies every weight by `factor`.
    pub fn scale_weights(&self, factor: f64) -> Self {
        self.map_components(|c| Component::new(c.weight * factor, c.mean, c.scale))
    }

    /// Pointwise sum, as the concatenation of both component lists.
    pub fn add(&self, other: &Self) -> Self {
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        Self { components }
    }

    /// Pointwise difference `self − other`.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_weights(-1.0))
    }

    /// Merges components sharing mean and scale and drops zero weights. The
    /// result always keeps at least one component.
    pub fn simplify(&self) -> Self {
        let mut merged: Vec<Component> = Vec::with_capacity(self.len());
        for c in &self.components {
            match merged.iter_mut().find(|m| m.mean == c.mean && m.scale == c.scale) {
                Some(m) => m.weight += c.weight,
                None => merged.push(*c),
            }
        }
        let nonzero: Vec<Component> = merged.iter().copied().filter(|c| c.weight != 0.0).collect();
        if nonzero.is_empty() {
            Self {
                components: vec![Component::new(0.0, 0.0, self.components[0].scale)],
            }
        } else {
            Self { components: nonzero }
        }
    }

    /// `∫ self · other`.
    pub fn inner_product(&self, other: &Self) -> f64 {
        let mut total = 0.0;
        for a in &self.components {
            for b in &other.components {
                total += a.weight * b.weight * normal_pdf(a.mean - b.mean, a.scale.hypot(b.scale));
            }
        }
        total
    }

    /// `R(m) = ∫ m²`, clamped at zero against rounding.
    pub fn roughness(&self) -> f64 {
        let comps = &self.components;
        let mut total = 0.0;
        for (i, a) in comps.iter().enumerate() {
            total += a.weight * a.weight * normal_pdf(0.0, a.scale * std::f64::consts::SQRT_2);
            for b in &comps[i + 1..] {
                total += 2.0 * a.weight * b.weight * normal_pdf(a.mean - b.mean, a.scale.hypot(b.scale));
            }
        }
        total.max(0.0)
    }

    /// `μ_j = ∫ u^j m(u) du` for even `j ≤ 8` of a centered mixture.
    pub fn even_moment(&self, j: u32) -> Result<f64> {
        if !j.is_multiple_of(2) || j > 8 {
            return Err(Error::InvalidParameter(format!(
                "moment order must be even and at most 8, got {j}"
            )));
        }
        if !self.is_centered() {
            return Err(Error::UncenteredMoment);
        }
        if j == 0 {
            return Ok(self.total_mass());
        }
        let odd = double_factorial_odd(j);
        Ok(self
            .components
            .iter()
            .map(|c| c.weight * c.scale.powi(j as i32) * odd)
            .sum())
    }

    fn map_components(&self, f: impl Fn(&Component) -> Component) -> Self {
        Self {
            components: self.components.iter().map(f).collect(),
        }
    }
}
