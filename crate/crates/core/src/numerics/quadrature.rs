//! Uniform trapezoid quadrature on fringe-resolving grids.
//!
//! All integrands here are entire functions with Gaussian decay, for which
//! the trapezoid rule converges geometrically once the step resolves both the
//! Gaussian width and the fringe period.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cos, sin, sqrt};

/// Grid construction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Position half-width beyond the outermost slit, in Gaussian sigmas.
    pub x_half_width: f64,
    /// Momentum half-width, in Gaussian sigmas.
    pub p_half_width: f64,
    /// Nodes per fringe period.
    pub points_per_fringe: usize,
    /// Node budget per axis.
    pub max_points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            x_half_width: 6.0,
            p_half_width: 6.0,
            points_per_fringe: 16,
            max_points: 1 << 14,
        }
    }
}

impl QuadratureSpec {
    pub const MIN_POINTS_PER_FRINGE: usize = 8;

    pub fn validate(&self) -> Result<()> {
        if !(self.x_half_width.is_finite() && self.x_half_width > 0.0) {
            return Err(Error::InvalidQuadratureSpec("x_half_width must be positive"));
        }
        if !(self.p_half_width.is_finite() && self.p_half_width > 0.0) {
            return Err(Error::InvalidQuadratureSpec("p_half_width must be positive"));
        }
        if self.points_per_fringe < Self::MIN_POINTS_PER_FRINGE {
            return Err(Error::InvalidQuadratureSpec("points_per_fringe must be at least 8"));
        }
        if self.max_points < 2 {
            return Err(Error::InvalidQuadratureSpec("max_points must be at least 2"));
        }
        Ok(())
    }

    /// Same resolution over twice the domain.
    pub fn doubled(&self) -> Self {
        Self {
            x_half_width: 2.0 * self.x_half_width,
            p_half_width: 2.0 * self.p_half_width,
            max_points: 2 * self.max_points,
            ..*self
        }
    }
}

/// Which kind of coordinate an axis carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Position,
    Momentum,
}

/// Length scales of one integration axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisScale {
    pub kind: AxisKind,
    /// Gaussian standard deviation of the integrand along this axis.
    pub sigma: f64,
    /// Offset of the outermost Gaussian centre from the origin.
    pub span: f64,
    /// Fringe period, if the integrand oscillates.
    pub period: Option<f64>,
}

impl AxisScale {
    /// Position axis of `|psi|^2` or a Wigner function: sigma `1/(2 sqrt(a))`
    /// around the slits at `+-h`.
    pub fn position(width: f64, half_separation: f64) -> Self {
        Self {
            kind: AxisKind::Position,
            sigma: 0.5 / sqrt(width),
            span: half_separation,
            period: None,
        }
    }

    /// Position axis of a wavefunction itself: sigma `1/sqrt(2a)`.
    pub fn amplitude_position(width: f64, half_separation: f64) -> Self {
        Self {
            sigma: 1.0 / sqrt(2.0 * width),
            ..Self::position(width, half_separation)
        }
    }

    /// Momentum axis of a density: sigma `sqrt(a)`, fringe period `pi / h`.
    pub fn momentum(width: f64, half_separation: f64) -> Self {
        Self {
            kind: AxisKind::Momentum,
            sigma: sqrt(width),
            span: 0.0,
            period: (half_separation > 0.0).then(|| PI / half_separation),
        }
    }

    fn half_width(&self, spec: &QuadratureSpec) -> f64 {
        let sigmas = match self.kind {
            AxisKind::Position => spec.x_half_width,
            AxisKind::Momentum => spec.p_half_width,
        };
        self.span + sigmas * self.sigma
    }

    fn max_step(&self, spec: &QuadratureSpec) -> f64 {
        let gaussian = 0.5 * self.sigma;
        match self.period {
            Some(period) => gaussian.min(period / spec.points_per_fringe as f64),
            None => gaussian,
        }
    }
}

/// Uniform grid with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1 {
    nodes: Vec<f64>,
    step: f64,
}

impl Grid1 {
    pub fn uniform(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidRange("grid needs finite lo < hi"));
        }
        if points < 2 {
            return Err(Error::InvalidRange("grid needs at least two points"));
        }
        let step = (hi - lo) / (points - 1) as f64;
        let nodes = (0..points).map(|i| lo + step * i as f64).collect();
        Ok(Self { nodes, step })
    }

    /// Symmetric grid resolving `scale` under `spec`.
    pub fn for_axis(scale: AxisScale, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let half = scale.half_width(spec);
        let needed = libm::ceil(2.0 * half / scale.max_step(spec)) as usize + 1;
        if needed > spec.max_points {
            return Err(Error::QuadratureBudget {
                needed,
                budget: spec.max_points,
            });
        }
        Self::uniform(-half, half, needed.max(3))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.nodes.len() {
            0.5 * self.step
        } else {
            self.step
        }
    }

    /// `(node, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().enumerate().map(|(i, &x)| (x, self.weight(i)))
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let mut sum = 0.0;
        for (x, w) in self.iter() {
            sum += w * finite(f(x), x)?;
        }
        Ok(sum)
    }
}

fn finite(v: f64, at: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { at })
    }
}

pub fn integrate_2d(f: impl Fn(f64, f64) -> f64, first: &Grid1, second: &Grid1) -> Result<f64> {
    let mut sum = 0.0;
    for (x, wx) in first.iter() {
        let mut row = 0.0;
        for (y, wy) in second.iter() {
            row += wy * finite(f(x, y), x)?;
        }
        sum += wx * row;
    }
    Ok(sum)
}

/// Integral over the product of four grids; `f` receives the coordinates in
/// grid order.
pub fn integrate_4d(f: impl Fn([f64; 4]) -> f64, grids: [&Grid1; 4]) -> Result<f64> {
    let mut sum = 0.0;
    for (x0, w0) in grids[0].iter() {
        for (x1, w1) in grids[1].iter() {
            let mut inner = 0.0;
            for (x2, w2) in grids[2].iter() {
                for (x3, w3) in grids[3].iter() {
                    inner += w2 * w3 * finite(f([x0, x1, x2, x3]), x0)?;
                }
            }
            sum += w0 * w1 * inner;
        }
    }
    Ok(sum)
}

/// Which variable of a two-argument density is kept by a marginal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    First,
    Second,
}

/// Marginal density tabulated at requested points.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedMarginal {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest change when the integration domain is doubled.
    pub truncation_error: f64,
}

impl TabulatedMarginal {
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.values.iter().copied())
    }

    /// Largest `|value - reference(point)|`.
    pub fn max_abs_error(&self, reference: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(p, v)| (v - reference(p)).abs()).fold(0.0, f64::max)
    }
}

/// Integrates `density` over the axis not in `keep`, at each of `at`.
pub fn quadrature_marginal(
    density: impl Fn(f64, f64) -> f64,
    keep: Axis,
    at: &[f64],
    integrated: AxisScale,
    spec: &QuadratureSpec,
) -> Result<TabulatedMarginal> {
    let marginal = |grid: &Grid1| -> Result<Vec<f64>> {
        at.iter()
            .map(|&k| match keep {
                Axis::First => grid.integrate(|y| density(k, y)),
                Axis::Second => grid.integrate(|y| density(y, k)),
            })
            .collect()
    };
    let values = marginal(&Grid1::for_axis(integrated, spec)?)?;
    let wide = marginal(&Grid1::for_axis(integrated, &spec.doubled())?)?;
    let truncation_error = values.iter().zip(&wide).map(|(v, w)| (v - w).abs()).fold(0.0, f64::max);
    Ok(TabulatedMarginal {
        points: at.to_vec(),
        values,
        truncation_error,
    })
}

/// Numerical Fourier transform of a real two-particle position wavefunction,
/// `psi(p1, p2) = (1/2pi) int e^{-i(p1 x1 + p2 x2)} psi(x1, x2) dx1 dx2`,
/// evaluated on the product of `p1s` and `p2s` (row-major in `p1`).
///
/// `psi` is sampled once on the grid and transformed one axis at a time.
pub fn fourier_2d(
    psi: impl Fn(f64, f64) -> f64,
    x1: &Grid1,
    x2: &Grid1,
    p1s: &[f64],
    p2s: &[f64],
) -> Result<Vec<Complex64>> {
    let (n1, n2) = (x1.len(), x2.len());
    let mut samples = Vec::with_capacity(n1 * n2);
    for (u, wu) in x1.iter() {
        for (v, wv) in x2.iter() {
            samples.push(wu * wv * finite(psi(u, v), u)?);
        }
    }
    let phases = |ps: &[f64], grid: &Grid1| -> Vec<Complex64> {
        ps.iter()
            .flat_map(|&p| {
                grid.nodes()
                    .iter()
                    .map(move |&x| Complex64::new(cos(p * x), -sin(p * x)))
            })
            .collect()
    };
    let phase1 = phases(p1s, x1);
    let phase2 = phases(p2s, x2);

    // Stage 1: transform along x1 for every x2 column.
    let mut partial = alloc::vec![Complex64::new(0.0, 0.0); p1s.len() * n2];
    for i in 0..p1s.len() {
        let row = &phase1[i * n1..(i + 1) * n1];
        for k in 0..n2 {
            partial[i * n2 + k] = (0..n1).map(|j| row[j] * samples[j * n2 + k]).sum();
        }
    }
    // Stage 2: transform along x2.
    let mut out = Vec::with_capacity(p1s.len() * p2s.len());
    for i in 0..p1s.len() {
        let column = &partial[i * n2..(i + 1) * n2];
        for l in 0..p2s.len() {
            let row = &phase2[l * n2..(l + 1) * n2];
            let sum: Complex64 = column.iter().zip(row).map(|(a, b)| a * b).sum();
            out.push(sum / (2.0 * PI));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;
    use approx::assert_relative_eq;

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let coarse = QuadratureSpec {
            points_per_fringe: 4,
            ..Default::default()
        };
        assert!(coarse.validate().is_err());
    }

    #[test]
    fn gaussian_integral() {
        let g = Grid1::for_axis(AxisScale::momentum(2.0, 0.0), &QuadratureSpec::default()).unwrap();
        let v = g.integrate(|p| exp(-p * p / 4.0)).unwrap();
        assert_relative_eq!(v, sqrt(4.0 * PI), max_relative = 1e-8);
    }

    #[test]
    fn product_gaussian_marginal() {
        let norm = 1.0 / (2.0 * PI);
        let density = |x: f64, y: f64| norm * exp(-(x * x + y * y) / 2.0);
        let at: Vec<f64> = (0..11).map(|i| -2.5 + 0.5 * i as f64).collect();
        // Six sigmas lose ~2e-9 of the tail; eight lose ~1e-15.
        let spec = QuadratureSpec {
            p_half_width: 8.0,
            ..Default::default()
        };
        let m = quadrature_marginal(density, Axis::First, &at, AxisScale::momentum(1.0, 0.0), &spec).unwrap();
        let err = m.max_abs_error(|p| exp(-p * p / 2.0) / sqrt(2.0 * PI));
        assert!(err < 1e-10, "{err}");
        assert!(m.truncation_error < 1e-8);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = QuadratureSpec {
            max_points: 10,
            ..Default::default()
        };
        let err = Grid1::for_axis(AxisScale::momentum(1.0, 5.0), &spec).unwrap_err();
        assert!(matches!(err, Error::QuadratureBudget { .. }));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let g = Grid1::uniform(-1.0, 1.0, 5).unwrap();
        assert!(matches!(
            g.integrate(|x| 1.0 / x),
            Err(Error::NonFiniteIntegrand { .. })
        ));
    }

    #[test]
    fn fourier_of_gaussian() {
        // e^{-(x1^2+x2^2)/2} transforms to e^{-(p1^2+p2^2)/2}.
        let g = Grid1::uniform(-12.0, 12.0, 121).unwrap();
        let ps = [0.0, 0.7, -1.3];
        let out = fourier_2d(|u, v| exp(-(u * u + v * v) / 2.0), &g, &g, &ps, &ps).unwrap();
        for (i, &p1) in ps.iter().enumerate() {
            for (l, &p2) in ps.iter().enumerate() {
                let z = out[i * ps.len() + l];
                assert!((z.re - exp(-(p1 * p1 + p2 * p2) / 2.0)).abs() < 1e-12);
                assert!(z.im.abs() < 1e-12);
            }
        }
    }
}
