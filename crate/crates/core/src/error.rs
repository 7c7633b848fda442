use alloc::string::String;
use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("theta = {0} lies outside [0, pi/4]")]
    ThetaOutOfRange(f64),

    /// The asymmetric state has `b h2^2 > a h1^2`, which would need
    /// `sin(2 theta) < 0`.
    #[error(
        "no purification in the theta family: b*h2^2 = {bob} exceeds a*h1^2 = {alice}; \
         swap the particles (Alice and Bob switch roles) and purify the other side"
    )]
    NoPurification { alice: f64, bob: f64 },

    #[error("invalid path ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("radicand {0} is negative beyond rounding")]
    NegativeRadicand(f64),

    #[error("fringe contrast undefined: {0}")]
    UndefinedContrast(&'static str),

    #[error("integrand is not finite at {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("quadrature grid needs {needed} points per axis, budget is {budget}")]
    QuadratureBudget { needed: usize, budget: usize },

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadratureSpec(&'static str),

    #[error("invalid search range: {0}")]
    InvalidRange(&'static str),

    #[error("sample count must be at least 1")]
    EmptySample,

    #[error("rejection sampler gave up after {0} proposals for a single sample")]
    RejectionCap(u64),

    #[error("fringe fit needs at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    #[error("fringe fit is degenerate: {0}")]
    FitDegenerate(&'static str),
}
