//! Mapping an asymmetric state onto the `theta` family.
//!
//! Alice's reduced state in the asymmetric model has the same one-particle
//! statistics as a `theta` state with her width and slits, provided
//! `sin 2theta = (V - q) / (1 - q V)` with `V = e^{-2 b h2^2}` and
//! `q = e^{-2 a h1^2}`. That needs `b h2^2 <= a h1^2`; otherwise the roles of
//! the particles have to be exchanged.

use crate::error::{Error, Result};
use crate::math::{asin, sqrt};
use crate::states::{AsymParams, ThetaParams};
use crate::wigner::{wigner_partial_asym, wigner_partial_theta};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurificationResult {
    pub theta: f64,
    pub sin_two_theta: f64,
    /// Max pointwise Wigner difference, if a grid check was run.
    pub wigner_gap: Option<f64>,
}

impl PurificationResult {
    /// The `theta` state that reproduces Alice's statistics.
    pub fn theta_params(&self, params: &AsymParams) -> ThetaParams {
        ThetaParams::new(params.a(), params.h1(), self.theta).expect("solved theta is in range")
    }
}

/// `(V - q) / (1 - q V)` without the sign check. Changes sign when the
/// particles are exchanged.
pub fn sin_two_theta_raw(params: &AsymParams) -> f64 {
    let q = params.alice_overlap();
    let v = params.bob_overlap();
    let denom = 1.0 - q * v;
    if denom == 0.0 {
        // Both overlaps are 1: both slits closed to a point, any theta works.
        0.0
    } else {
        (v - q) / denom
    }
}

pub fn solve_theta(params: &AsymParams) -> Result<PurificationResult> {
    let alice = params.a() * params.h1() * params.h1();
    let bob = params.b() * params.h2() * params.h2();
    if bob > alice {
        return Err(Error::NoPurification { alice, bob });
    }
    let s = sin_two_theta_raw(params).clamp(0.0, 1.0);
    Ok(PurificationResult {
        theta: 0.5 * asin(s),
        sin_two_theta: s,
        wigner_gap: None,
    })
}

/// Rectangle of `(x, p)` points for the Wigner comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    pub x_half_width: f64,
    pub p_half_width: f64,
    pub points: usize,
}

impl PhaseGrid {
    /// Covers both slit Gaussians and five momentum widths, 41 points per axis.
    pub fn for_params(params: &AsymParams) -> Self {
        let a = params.a();
        Self {
            x_half_width: params.h1() + 5.0 / (2.0 * sqrt(a)),
            p_half_width: 5.0 * sqrt(2.0 * a),
            points: 41,
        }
    }

    fn coord(half_width: f64, points: usize, i: usize) -> f64 {
        if points == 1 {
            0.0
        } else {
            -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.points;
        (0..n).flat_map(move |i| {
            (0..n).map(move |j| {
                (
                    Self::coord(self.x_half_width, n, i),
                    Self::coord(self.p_half_width, n, j),
                )
            })
        })
    }
}

/// Largest `|W_1,asym - W_1,theta*|` on the grid.
///
/// The two prefactors, `G` and `B_theta (1 + q sin2theta)`, are equal for the
/// solved angle, so the functions are compared as they stand.
pub fn verify_purification(params: &AsymParams, grid: &PhaseGrid) -> Result<f64> {
    let solved = solve_theta(params)?;
    let theta_params = solved.theta_params(params);
    Ok(grid
        .iter()
        .map(|(x, p)| (wigner_partial_asym(params, x, p) - wigner_partial_theta(&theta_params, x, p)).abs())
        .fold(0.0, f64::max))
}

/// [`solve_theta`] followed by [`verify_purification`] on the default grid.
pub fn purify(params: &AsymParams) -> Result<PurificationResult> {
    let mut solved = solve_theta(params)?;
    solved.wigner_gap = Some(verify_purification(params, &PhaseGrid::for_params(params))?);
    Ok(solved)
}
