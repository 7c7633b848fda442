//! Verification machinery: quadrature, extremum search, sampling, fitting.

pub mod cdf;
pub mod extrema;
pub mod fit;
pub mod quadrature;
pub mod sampling;

pub use cdf::{ks_critical_1pct, ks_distance, TabulatedCdf};
pub use extrema::{locate_extrema, ExtremaScan, Extremum, ExtremumKind};
pub use fit::{fit_visibility, FringeFit, FringeSource};
pub use quadrature::{
    fourier_2d, integrate_2d, integrate_4d, quadrature_marginal, Axis, AxisKind, AxisScale, Grid1, QuadratureSpec,
    TabulatedMarginal,
};
pub use sampling::{
    chunk_plan, draw_stream, merge_streams, sample_density, sample_joint, Histogram, JointDensity, SampleBatch,
    StreamDraw, SAMPLES_PER_STREAM,
};
