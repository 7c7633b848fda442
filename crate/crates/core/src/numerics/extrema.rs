//! Local extrema of smooth one-dimensional functions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

const SAMPLES_PER_PERIOD: f64 = 64.0;
const GOLDEN_SHRINK: f64 = 1e-6;
const POSITION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub position: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaScan {
    /// Sorted by position.
    pub extrema: Vec<Extremum>,
    /// Brackets whose refined derivative showed no sign change.
    pub skipped: usize,
}

impl ExtremaScan {
    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Maximum)
    }

    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Minimum)
    }
}

/// Finds every interior extremum of `f` on `[lo, hi]`.
///
/// `f` is sampled 64 times per fringe period; each sampled turning point is
/// refined by golden-section search and then polished by bisection on the
/// sign of a central-difference derivative.
pub fn locate_extrema(f: impl Fn(f64) -> f64, lo: f64, hi: f64, fringe_period: f64) -> Result<ExtremaScan> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidRange("extremum search needs finite lo < hi"));
    }
    if !(fringe_period.is_finite() && fringe_period > 0.0) {
        return Err(Error::InvalidRange("fringe period must be positive"));
    }
    let n = libm::ceil((hi - lo) / fringe_period * SAMPLES_PER_PERIOD) as usize + 1;
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let tolerance = POSITION_TOLERANCE * (hi - lo);
    let mut extrema: Vec<Extremum> = Vec::new();
    let mut skipped = 0;
    for i in 1..n - 1 {
        let (left, mid, right) = (ys[i - 1], ys[i], ys[i + 1]);
        let kind = if mid > left && mid >= right {
            ExtremumKind::Maximum
        } else if mid < left && mid <= right {
            ExtremumKind::Minimum
        } else {
            continue;
        };
        let sign = if kind == ExtremumKind::Maximum { 1.0 } else { -1.0 };
        let g = |x: f64| sign * f(x);
        let (a, b) = golden_section(&g, xs[i - 1], xs[i + 1], GOLDEN_SHRINK * step);
        match polish(&g, a, b, step, tolerance) {
            Some(position) => {
                if extrema
                    .last()
                    .is_some_and(|e| (e.position - position).abs() <= 1e3 * tolerance)
                {
                    continue;
                }
                extrema.push(Extremum {
                    position,
                    value: f(position),
                    kind,
                });
            }
            None => skipped += 1,
        }
    }
    Ok(ExtremaScan { extrema, skipped })
}

/// Shrinks `[a, b]` around a maximum of `g` to width `width`.
fn golden_section(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    let ratio = 0.5 * (sqrt(5.0) - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > width {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    (a, b)
}

/// Bisection on the sign of `g'` inside a slightly widened bracket.
fn polish(g: &impl Fn(f64) -> f64, a: f64, b: f64, step: f64, tolerance: f64) -> Option<f64> {
    let delta = 1e-5 * step;
    let slope = |x: f64| g(x + delta) - g(x - delta);
    let pad = (b - a).max(1e-3 * step);
    let (mut lo, mut hi) = (a - pad, b + pad);
    let (s_lo, s_hi) = (slope(lo), slope(hi));
    if !(s_lo > 0.0 && s_hi < 0.0) {
        return None;
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        let s = slope(mid);
        if s > 0.0 {
            lo = mid;
        } else if s < 0.0 {
            hi = mid;
        } else {
            return Some(mid);
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}
