//! Transcendental functions for `no_std`.
//!
//! Everything goes through `libm`, which is pure Rust, so results are
//! bit-identical on every platform. The sampler's determinism contract
//! depends on that.

pub(crate) use libm::{asin, cos, cosh, erf, exp, log, log1p, sin, sqrt};

/// Above this argument `cosh` is evaluated in the log domain.
pub(crate) const LOG_DOMAIN_THRESHOLD: f64 = 30.0;

/// `ln(cosh(x) + s)` for `x >= 0`, `s >= 0`, without overflow.
pub(crate) fn ln_cosh_plus(x: f64, s: f64) -> f64 {
    if x > LOG_DOMAIN_THRESHOLD {
        // cosh(x) + s = (e^x / 2) (1 + 2 s e^-x + e^-2x)
        let t = exp(-x);
        x - core::f64::consts::LN_2 + log1p(t * (2.0 * s + t))
    } else {
        log(cosh(x) + s)
    }
}

/// `sin(x) / x` with the removable singularity filled in.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        sin(x) / x
    }
}
