//! One-dimensional minimization over positive scale parameters: a
//! log-spaced grid scan followed by golden-section refinement.

use serde::Serialize;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Default number of grid points for bandwidth searches.
pub const DEFAULT_GRID_POINTS: usize = 200;
/// Default relative tolerance of golden-section refinement.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

/// Search policy for bandwidth minimization: a log grid over
/// `[lower_factor, upper_factor] · s · n^{-1/5}` refined by golden section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub grid_points: usize,
    pub rel_tol: f64,
    pub lower_factor: f64,
    pub upper_factor: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            rel_tol: DEFAULT_REL_TOL,
            lower_factor: 1e-3,
            upper_factor: 10.0,
        }
    }
}

impl SearchOptions {
    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    /// Search interval for spread `scale` and sample size `n`.
    pub fn range(&self, scale: f64, n: usize) -> (f64, f64) {
        let anchor = scale * (n as f64).powf(-0.2);
        (self.lower_factor * anchor, self.upper_factor * anchor)
    }
}

/// One evaluated point of a criterion curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub h: f64,
    pub value: f64,
}

/// Where a minimization landed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub value: f64,
    /// The minimum sits at an end of the scanned range.
    pub boundary: bool,
}

/// `points` values log-spaced from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo, "need 0 < lo < hi");
    assert!(points >= 2, "need at least two grid points");
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == points - 1 {
                hi
            } else {
                (a + step * i as f64).exp()
            }
        })
        .collect()
}

/// Orders NaN above every number so it never wins a minimization.
#[inline]
fn less(a: f64, b: f64) -> bool {
    match (a.is_nan(), b.is_nan()) {
        (false, true) => true,
        (true, _) => false,
        _ => a < b,
    }
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`, carried out in
/// `ln x` so the tolerance is relative.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c.exp());
    let mut fd = f(d.exp());
    while (b - a) > rel_tol {
        if less(fc, fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d.exp());
        }
    }
    if less(fc, fd) {
        (c.exp(), fc)
    } else {
        (d.exp(), fd)
    }
}

/// A criterion evaluated on a log grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridScan {
    pub points: Vec<TracePoint>,
}

impl GridScan {
    pub fn new<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, points: usize) -> Self {
        let points = log_grid(lo, hi, points)
            .into_iter()
            .map(|h| TracePoint { h, value: f(h) })
            .collect();
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the smallest value, first one on ties.
    pub fn argmin_index(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.points.iter().enumerate().skip(1) {
            if less(p.value, self.points[best].value) {
                best = i;
            }
        }
        best
    }

    /// Interior indices strictly lower than both neighbours.
    pub fn interior_local_minima(&self) -> Vec<usize> {
        let p = &self.points;
        (1..p.len().saturating_sub(1))
            .filter(|&i| less(p[i].value, p[i - 1].value) && less(p[i].value, p[i + 1].value))
            .collect()
    }

    /// Whether the criterion keeps decreasing toward the lower end of the grid.
    pub fn decreasing_at_lower_end(&self) -> bool {
        self.points.len() >= 2 && less(self.points[0].value, self.points[1].value)
    }

    pub fn is_boundary(&self, index: usize) -> bool {
        index == 0 || index + 1 == self.points.len()
    }

    /// Golden-section refinement between the neighbours of `index`. Boundary
    /// indices are returned as they are.
    pub fn refine<F: FnMut(f64) -> f64>(&self, f: F, index: usize, rel_tol: f64) -> Minimum {
        let p = &self.points[index];
        if self.is_boundary(index) {
            return Minimum {
                argmin: p.h,
                value: p.value,
                boundary: true,
            };
        }
        let (x, fx) = golden_section(f, self.points[index - 1].h, self.points[index + 1].h, rel_tol);
        if less(fx, p.value) || fx == p.value {
            Minimum {
                argmin: x,
                value: fx,
                boundary: false,
            }
        } else {
            Minimum {
                argmin: p.h,
                value: p.value,
                boundary: false,
            }
        }
    }
}

/// Global minimum over a log grid, refined by golden section.
pub fn minimize_on_log_grid<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    points: usize,
    rel_tol: f64,
) -> (Minimum, GridScan) {
    let scan = GridScan::new(&mut f, lo, hi, points);
    let best = scan.argmin_index();
    let min = scan.refine(&mut f, best, rel_tol);
    (min, scan)
}
