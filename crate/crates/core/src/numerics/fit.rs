//! Least-squares fringe fit of the one-particle screen pattern.
//!
//! The `p1` histogram is divided by the Gaussian mass of each bin, leaving
//! `K (1 + V <cos 2hp>_bin)`. The bin average of the cosine is
//! `sinc(h w) cos(2 h c)` for a bin of width `w` centred at `c`, and the
//! model is fitted by weighted linear least squares in `(K, K V)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::interferometry::{visibility_asym, visibility_theta};
use crate::math::{cos, erf, sinc, sqrt};
use crate::numerics::sampling::{Histogram, SampleBatch};
use crate::states::{AsymParams, ThetaParams};

pub const MIN_FIT_SAMPLES: usize = 10_000;
/// Bins per fringe period, at least.
pub const BINS_PER_PERIOD: f64 = 24.0;
/// Fit window half-width in momentum sigmas.
pub const FIT_WINDOW_SIGMAS: f64 = 3.0;
const MAX_BINS: usize = 1 << 20;

/// Parameters that fix Alice's fringe geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FringeSource {
    Theta(ThetaParams),
    Asym(AsymParams),
}

impl FringeSource {
    pub fn width(&self) -> f64 {
        match self {
            Self::Theta(p) => p.a(),
            Self::Asym(p) => p.a(),
        }
    }

    pub fn half_separation(&self) -> f64 {
        match self {
            Self::Theta(p) => p.h(),
            Self::Asym(p) => p.h1(),
        }
    }

    /// Closed-form visibility of the one-particle pattern.
    pub fn expected_visibility(&self) -> f64 {
        match self {
            Self::Theta(p) => visibility_theta(p).visibility,
            Self::Asym(p) => visibility_asym(p).visibility,
        }
    }
}

impl From<ThetaParams> for FringeSource {
    fn from(p: ThetaParams) -> Self {
        Self::Theta(p)
    }
}

impl From<AsymParams> for FringeSource {
    fn from(p: AsymParams) -> Self {
        Self::Asym(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    /// Fitted `K`, in units of the Gaussian-profile density.
    pub baseline: f64,
    pub visibility_hat: f64,
    /// RMS of `y / K - 1 - V x` over the fitted bins.
    pub residual_rms: f64,
    pub bins: usize,
}

fn gaussian_mass(width: f64, lo: f64, hi: f64) -> f64 {
    let scale = sqrt(2.0 * width);
    0.5 * sqrt(2.0 * PI * width) * (erf(hi / scale) - erf(lo / scale))
}

pub fn fit_visibility(batch: &SampleBatch, source: impl Into<FringeSource>) -> Result<FringeFit> {
    let source = source.into();
    if batch.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            got: batch.len(),
            min: MIN_FIT_SAMPLES,
        });
    }
    let (a, h) = (source.width(), source.half_separation());
    if h == 0.0 {
        return Err(Error::FitDegenerate(
            "slit half-separation is zero, there are no fringes",
        ));
    }
    let half = FIT_WINDOW_SIGMAS * sqrt(a);
    let period = PI / h;
    let bins = libm::ceil(2.0 * half * BINS_PER_PERIOD / period) as usize;
    if bins > MAX_BINS {
        return Err(Error::FitDegenerate("fringes are too fine to bin"));
    }
    let hist: Histogram = batch.p1_histogram(-half, half, bins)?;
    let n = batch.len() as f64;
    let damping = sinc(h * hist.width);

    // Rows (x_i, y_i, w_i) of the regression y = alpha + beta x.
    let rows: Vec<(f64, f64, f64)> = hist
        .counts
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            let (lo, hi) = hist.bin_edges(i);
            let mass = gaussian_mass(a, lo, hi);
            let x = damping * cos(2.0 * h * hist.bin_center(i));
            (x, count as f64 / (n * mass), n * mass)
        })
        .collect();

    let (mut sw, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, w) in &rows {
        sw += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * y;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    if det.is_nan() || det <= 1e-12 * sw * sxx {
        return Err(Error::FitDegenerate("normal equations are singular"));
    }
    let alpha = (sxx * sy - sx * sxy) / det;
    let beta = (sw * sxy - sx * sy) / det;
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::FitDegenerate("fitted baseline is not positive"));
    }
    let visibility_hat = beta / alpha;
    let sq: f64 = rows
        .iter()
        .map(|&(x, y, _)| {
            let r = y / alpha - 1.0 - visibility_hat * x;
            r * r
        })
        .sum();
    Ok(FringeFit {
        baseline: alpha,
        visibility_hat,
        residual_rms: sqrt(sq / rows.len() as f64),
        bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::MomentumPair;

    fn batch_of(samples: Vec<MomentumPair>) -> SampleBatch {
        SampleBatch {
            seed: 0,
            samples,
            acceptance_rate: 1.0,
        }
    }

    #[test]
    fn too_few_samples() {
        let p = ThetaParams::new(1.0, 1.0, 0.0).unwrap();
        let err = fit_visibility(&batch_of(Vec::new()), p).unwrap_err();
        assert_eq!(
            err,
            Error::TooFewSamples {
                got: 0,
                min: MIN_FIT_SAMPLES
            }
        );
    }

    #[test]
    fn zero_separation_is_degenerate() {
        let p = ThetaParams::new(1.0, 0.0, 0.0).unwrap();
        let samples = alloc::vec![MomentumPair::new(0.0, 0.0); MIN_FIT_SAMPLES];
        assert!(matches!(
            fit_visibility(&batch_of(samples), p),
            Err(Error::FitDegenerate(_))
        ));
    }

    #[test]
    fn gaussian_mass_total() {
        let total = gaussian_mass(2.0, -100.0, 100.0);
        assert!((total - sqrt(4.0 * PI)).abs() < 1e-12);
    }
}
