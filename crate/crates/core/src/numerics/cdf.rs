//! Tabulated cumulative distributions and the Kolmogorov-Smirnov distance.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

const GAUSS_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// CDF of a density on `[lo, hi]`, accumulated cell by cell with 5-point
/// Gauss-Legendre and interpolated linearly inside a cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    lo: f64,
    cell: f64,
    edges: Vec<f64>,
}

impl TabulatedCdf {
    pub fn from_density(density: impl Fn(f64) -> f64, lo: f64, hi: f64, cells: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidRange("CDF table needs finite lo < hi"));
        }
        if cells == 0 {
            return Err(Error::InvalidRange("CDF table needs at least one cell"));
        }
        let cell = (hi - lo) / cells as f64;
        let mut edges = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        edges.push(acc);
        for i in 0..cells {
            let mid = lo + cell * (i as f64 + 0.5);
            let piece: f64 = GAUSS_NODES
                .iter()
                .zip(GAUSS_WEIGHTS)
                .map(|(&t, w)| w * density(mid + 0.5 * cell * t))
                .sum();
            acc += 0.5 * cell * piece;
            edges.push(acc);
        }
        Ok(Self { lo, cell, edges })
    }

    /// Mass inside the tabulated range.
    pub fn total(&self) -> f64 {
        *self.edges.last().expect("at least one edge")
    }

    pub fn evaluate(&self, p: f64) -> f64 {
        let t = (p - self.lo) / self.cell;
        if t <= 0.0 {
            return 0.0;
        }
        let cells = self.edges.len() - 1;
        if t >= cells as f64 {
            return self.total();
        }
        let i = t as usize;
        let frac = t - i as f64;
        self.edges[i] + frac * (self.edges[i + 1] - self.edges[i])
    }
}

/// `sup |F_n - F|` between the empirical CDF of `samples` and `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (((i + 1) as f64) / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max))
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.63 / sqrt(n as f64)
}
