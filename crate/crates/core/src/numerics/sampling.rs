//! Seeded rejection sampling of screen hits.
//!
//! Proposals are independent centred Gaussians matching the density's
//! envelope, accepted with probability `bracket / bracket_bound`.
//!
//! # Determinism
//!
//! A request for `n` samples is cut into chunks of [`SAMPLES_PER_STREAM`].
//! Chunk `k` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `k`, and chunks are concatenated in order. The result depends only on
//! `(params, n, seed)`, never on how chunks are spread over workers.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::densities::MomentumPair;
use crate::error::{Error, Result};
use crate::math::{cos, sin, sqrt};
use crate::states::{AsymParams, ThetaParams};

/// Samples drawn from one RNG stream.
pub const SAMPLES_PER_STREAM: usize = 65_536;

/// Proposals allowed per accepted sample before giving up.
pub const MAX_PROPOSALS_PER_SAMPLE: u64 = 1_000_000;

/// A joint momentum density of the form
/// `K exp(-p1^2/2 var1 - p2^2/2 var2) bracket(p1, p2)`.
pub trait JointDensity {
    /// Variances of the Gaussian proposal along `p1` and `p2`.
    fn proposal_variances(&self) -> (f64, f64);
    fn bracket(&self, mp: MomentumPair) -> f64;
    /// Supremum of [`JointDensity::bracket`].
    fn bracket_bound(&self) -> f64;
}

impl JointDensity for ThetaParams {
    fn proposal_variances(&self) -> (f64, f64) {
        (self.a(), self.a())
    }

    fn bracket(&self, mp: MomentumPair) -> f64 {
        let h = self.h();
        let t = self.theta();
        let (c, s) = (cos(t), sin(t));
        let (pp, pm) = (mp.p_plus(), mp.p_minus());
        1.0 + c * c * cos(2.0 * h * pp)
            + 2.0 * self.sin_two_theta() * cos(h * pp) * cos(h * pm)
            + s * s * cos(2.0 * h * pm)
    }

    /// `2 + 2 sin 2theta`, reached at the origin.
    fn bracket_bound(&self) -> f64 {
        2.0 + 2.0 * self.sin_two_theta()
    }
}

impl JointDensity for AsymParams {
    fn proposal_variances(&self) -> (f64, f64) {
        (self.a(), self.b())
    }

    fn bracket(&self, mp: MomentumPair) -> f64 {
        1.0 + cos(2.0 * self.h1() * mp.p1 + 2.0 * self.h2() * mp.p2)
    }

    fn bracket_bound(&self) -> f64 {
        2.0
    }
}

/// Output of one stream.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamDraw {
    pub samples: Vec<MomentumPair>,
    pub proposals: u64,
}

/// `(stream index, sample count)` for each chunk of an `n`-sample request.
pub fn chunk_plan(n: usize) -> impl Iterator<Item = (u64, usize)> {
    (0..n.div_ceil(SAMPLES_PER_STREAM)).map(move |k| {
        let start = k * SAMPLES_PER_STREAM;
        (k as u64, SAMPLES_PER_STREAM.min(n - start))
    })
}

/// Draws `count` samples from stream `stream` of `seed`.
pub fn draw_stream<D: JointDensity + ?Sized>(density: &D, seed: u64, stream: u64, count: usize) -> Result<StreamDraw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let (v1, v2) = density.proposal_variances();
    let (s1, s2) = (sqrt(v1), sqrt(v2));
    let bound = density.bracket_bound();

    let mut samples = Vec::with_capacity(count);
    let mut proposals = 0u64;
    for _ in 0..count {
        let mut tries = 0u64;
        loop {
            if tries == MAX_PROPOSALS_PER_SAMPLE {
                return Err(Error::RejectionCap(MAX_PROPOSALS_PER_SAMPLE));
            }
            tries += 1;
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let u: f64 = rng.random();
            let mp = MomentumPair::new(s1 * z1, s2 * z2);
            if u * bound < density.bracket(mp) {
                samples.push(mp);
                break;
            }
        }
        proposals += tries;
    }
    Ok(StreamDraw { samples, proposals })
}

/// Reproducible batch of screen hits.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub seed: u64,
    pub samples: Vec<MomentumPair>,
    /// Accepted over proposed.
    pub acceptance_rate: f64,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn p1(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|mp| mp.p1)
    }

    pub fn p1_histogram(&self, lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
        let mut hist = Histogram::new(lo, hi, bins)?;
        hist.fill(self.p1());
        Ok(hist)
    }
}

/// Concatenates stream outputs, which must be in chunk order.
pub fn merge_streams(seed: u64, draws: impl IntoIterator<Item = StreamDraw>) -> SampleBatch {
    let mut samples = Vec::new();
    let mut proposals = 0u64;
    for draw in draws {
        samples.extend(draw.samples);
        proposals += draw.proposals;
    }
    let acceptance_rate = if proposals == 0 {
        0.0
    } else {
        samples.len() as f64 / proposals as f64
    };
    SampleBatch {
        seed,
        samples,
        acceptance_rate,
    }
}

/// Draws `n` samples from any [`JointDensity`], one chunk after another.
pub fn sample_density<D: JointDensity + ?Sized>(density: &D, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let draws = chunk_plan(n)
        .map(|(stream, count)| draw_stream(density, seed, stream, count))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_streams(seed, draws))
}

/// Draws `n` samples of the joint momentum density of a `theta` state.
pub fn sample_joint(params: &ThetaParams, n: usize, seed: u64) -> Result<SampleBatch> {
    sample_density(params, n, seed)
}

/// Fixed-width histogram; values outside `[lo, hi)` are only counted in
/// `total`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub width: f64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidRange("histogram needs finite lo < hi"));
        }
        if bins == 0 {
            return Err(Error::InvalidRange("histogram needs at least one bin"));
        }
        Ok(Self {
            lo,
            width: (hi - lo) / bins as f64,
            counts: alloc::vec![0; bins],
            total: 0,
        })
    }

    pub fn fill(&mut self, values: impl IntoIterator<Item = f64>) {
        for v in values {
            self.total += 1;
            let idx = (v - self.lo) / self.width;
            if idx >= 0.0 && (idx as usize) < self.counts.len() {
                self.counts[idx as usize] += 1;
            }
        }
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let lo = self.lo + self.width * i as f64;
        (lo, lo + self.width)
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.lo + self.width * (i as f64 + 0.5)
    }
}
