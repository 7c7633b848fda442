//! Which-path measures for `n` interfering paths.
//!
//! Each path `i` carries an amplitude modulus `|psi_i|` and couples to a
//! detector state `|d_i>`. Only overlap magnitudes `|<d_i|d_j>|` enter.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

const NORM_TOLERANCE: f64 = 1e-12;
const SYMMETRY_TOLERANCE: f64 = 1e-12;
const RADICAND_FLOOR: f64 = -1e-12;

/// Path amplitudes with detector overlaps, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    amplitudes: Vec<f64>,
    overlaps: Vec<f64>,
}

impl PathEnsemble {
    /// Validates `n >= 2`, `sum |psi_i|^2 = 1`, a symmetric overlap matrix
    /// with entries in `[0, 1]` and a unit diagonal.
    pub fn new(amplitudes: Vec<f64>, overlaps: Vec<Vec<f64>>) -> Result<Self> {
        let n = amplitudes.len();
        if n < 2 {
            return Err(Error::InvalidEnsemble(format!("need at least 2 paths, got {n}")));
        }
        if let Some(bad) = amplitudes.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidEnsemble(format!(
                "amplitude moduli must be finite and >= 0, got {bad}"
            )));
        }
        let norm: f64 = amplitudes.iter().map(|v| v * v).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidEnsemble(format!(
                "squared amplitudes sum to {norm}, expected 1"
            )));
        }
        if overlaps.len() != n || overlaps.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidEnsemble(format!("overlap matrix must be {n}x{n}")));
        }
        for (i, row) in overlaps.iter().enumerate() {
            if row[i] != 1.0 {
                return Err(Error::InvalidEnsemble(format!(
                    "overlap diagonal must be exactly 1, entry ({i},{i}) is {}",
                    row[i]
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidEnsemble(format!(
                        "overlap ({i},{j}) = {v} lies outside [0, 1]"
                    )));
                }
                if (v - overlaps[j][i]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidEnsemble(format!(
                        "overlap matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self {
            amplitudes,
            overlaps: overlaps.into_iter().flatten().collect(),
        })
    }

    /// Builds the ensemble from path probabilities `|psi_i|^2`.
    pub fn from_probabilities(probabilities: &[f64], overlaps: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = probabilities.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidEnsemble(format!("probabilities must be >= 0, got {bad}")));
        }
        Self::new(probabilities.iter().map(|p| sqrt(*p)).collect(), overlaps)
    }

    /// No detectors: every overlap is 1.
    pub fn without_detectors(amplitudes: Vec<f64>) -> Result<Self> {
        let n = amplitudes.len();
        Self::new(amplitudes, alloc::vec![alloc::vec![1.0; n]; n])
    }

    /// Rescales the amplitudes to unit norm before validating.
    pub fn normalized(amplitudes: Vec<f64>, overlaps: Vec<Vec<f64>>) -> Result<Self> {
        let norm = sqrt(amplitudes.iter().map(|v| v * v).sum::<f64>());
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidEnsemble(format!(
                "cannot normalize amplitudes with norm {norm}"
            )));
        }
        Self::new(amplitudes.into_iter().map(|v| v / norm).collect(), overlaps)
    }

    pub fn paths(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        self.overlaps[i * self.paths() + j]
    }

    /// `(1/(n-1)) sum_{i != j} |psi_i| |psi_j| weight(i, j)`.
    fn pair_sum(&self, weight: impl Fn(usize, usize) -> f64) -> f64 {
        let n = self.paths();
        let total: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.amplitudes[i] * self.amplitudes[j] * weight(i, j))
            .sum();
        total / (n - 1) as f64
    }
}

/// `1 - C` for `C = pair_sum(weight)`, summed pairwise as
/// `sum_{i<j} [(|psi_i| - |psi_j|)^2 + 2 |psi_i| |psi_j| (1 - w_ij)] / (n-1)`
/// plus the normalization defect, so no cancellation against 1 occurs.
fn one_minus_pair_sum(e: &PathEnsemble, weight: impl Fn(usize, usize) -> f64) -> f64 {
    let n = e.paths();
    let psi = &e.amplitudes;
    let spread: f64 = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let d = psi[i] - psi[j];
            d * d + 2.0 * psi[i] * psi[j] * (1.0 - weight(i, j))
        })
        .sum();
    let defect = 1.0 - psi.iter().map(|p| p * p).sum::<f64>();
    spread / (n - 1) as f64 + defect
}

/// `sqrt(1 - x^2)` given `x` and an accurately computed `1 - x`.
fn complement_root(x: f64, one_minus_x: f64) -> Result<f64> {
    let radicand = one_minus_x * (1.0 + x);
    if radicand < RADICAND_FLOOR {
        return Err(Error::NegativeRadicand(radicand));
    }
    Ok(sqrt(radicand.max(0.0)))
}

/// `C = (1/(n-1)) sum_{i != j} |psi_i| |psi_j| |<d_i|d_j>|`.
pub fn coherence(e: &PathEnsemble) -> f64 {
    e.pair_sum(|i, j| e.overlap(i, j))
}

/// Coherence with the detectors removed (all overlaps 1).
pub fn detector_free_coherence(e: &PathEnsemble) -> f64 {
    e.pair_sum(|_, _| 1.0)
}

/// `D = sqrt(1 - C^2)`.
pub fn distinguishability(e: &PathEnsemble) -> Result<f64> {
    complement_root(coherence(e), one_minus_pair_sum(e, |i, j| e.overlap(i, j)))
}

/// `P = sqrt(1 - C_0^2)` with the detector-free coherence `C_0`.
pub fn predictability_n(e: &PathEnsemble) -> Result<f64> {
    complement_root(detector_free_coherence(e), one_minus_pair_sum(e, |_, _| 1.0))
}

/// `(I_max - I_min) / (I_max + I_min)`.
pub fn fringe_visibility(i_max: f64, i_min: f64) -> Result<f64> {
    if !(i_max.is_finite() && i_min.is_finite()) {
        return Err(Error::UndefinedContrast("intensities must be finite"));
    }
    if i_min < 0.0 || i_max < i_min {
        return Err(Error::UndefinedContrast("need i_max >= i_min >= 0"));
    }
    if i_max == 0.0 {
        return Err(Error::UndefinedContrast("both intensities are zero"));
    }
    Ok((i_max - i_min) / (i_max + i_min))
}

/// Born-rule extremal intensities `(|psi_1| + |psi_2|)^2` and
/// `(|psi_1| - |psi_2|)^2` of two interfering paths.
pub fn two_path_extremal_intensities(psi1: f64, psi2: f64) -> (f64, f64) {
    let hi = psi1 + psi2;
    let lo = psi1 - psi2;
    (hi * hi, lo * lo)
}
