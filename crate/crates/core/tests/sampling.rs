//! Monte Carlo screen hits against the closed forms.

use std::f64::consts::PI;

use epr_dds_core::densities::momentum_density_theta;
use epr_dds_core::interferometry::visibility_theta;
use epr_dds_core::numerics::{
    fit_visibility, ks_critical_1pct, ks_distance, sample_density, sample_joint, TabulatedCdf,
};
use epr_dds_core::{AsymParams, Error, ThetaParams};

fn cdf_for(params: &ThetaParams) -> TabulatedCdf {
    let half = 10.0 * params.a().sqrt();
    let cell = (PI / params.h()) / 32.0;
    let cells = (2.0 * half / cell).ceil() as usize;
    TabulatedCdf::from_density(|p| momentum_density_theta(params, p), -half, half, cells).unwrap()
}

#[test]
fn mean_momentum_vanishes() {
    let p = ThetaParams::new(1.0, 1.0, PI / 6.0).unwrap();
    let batch = sample_joint(&p, 100_000, 11).unwrap();
    let n = batch.len() as f64;
    let mean = batch.p1().sum::<f64>() / n;
    let var = batch.p1().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    assert!(mean.abs() <= 4.0 * (var / n).sqrt(), "{mean}");
}

#[test]
fn marginal_passes_ks_at_one_percent() {
    let p = ThetaParams::new(1.0, 1.0, PI / 6.0).unwrap();
    let cdf = cdf_for(&p);
    assert!((cdf.total() - 1.0).abs() < 1e-10);
    let n = 1_000_000;
    let batch = sample_joint(&p, n, 2024).unwrap();
    let p1: Vec<f64> = batch.p1().collect();
    let d = ks_distance(&p1, |x| cdf.evaluate(x)).unwrap();
    assert!(d <= ks_critical_1pct(n), "{d}");
}

#[test]
fn ks_distance_shrinks_with_sample_size() {
    let p = ThetaParams::new(1.0, 2.0, PI / 12.0).unwrap();
    let cdf = cdf_for(&p);
    let distances: Vec<f64> = [10_000, 100_000, 1_000_000]
        .into_iter()
        .map(|n| {
            let batch = sample_joint(&p, n, 5).unwrap();
            let p1: Vec<f64> = batch.p1().collect();
            let d = ks_distance(&p1, |x| cdf.evaluate(x)).unwrap();
            assert!(d <= ks_critical_1pct(n), "n = {n}: {d}");
            d
        })
        .collect();
    assert!(distances[2] < distances[0], "{distances:?}");
}

#[test]
fn acceptance_rate_matches_normalization() {
    // Accepted fraction = (mean bracket under the proposal) / bound.
    let p = ThetaParams::new(1.0, 1.0, PI / 6.0).unwrap();
    let batch = sample_joint(&p, 200_000, 3).unwrap();
    let q = p.slit_overlap();
    let s = p.sin_two_theta();
    let expected = (1.0 + q * q + 2.0 * q * s) / (2.0 + 2.0 * s);
    assert!(
        (batch.acceptance_rate - expected).abs() < 5e-3,
        "{}",
        batch.acceptance_rate
    );
}

#[test]
fn fitted_visibility_cases() {
    let cases = [(PI / 4.0, 1.0), (0.0, (-8.0f64).exp()), (PI / 12.0, f64::NAN)];
    for (i, (theta, expected)) in cases.into_iter().enumerate() {
        let p = ThetaParams::new(1.0, 2.0, theta).unwrap();
        let expected = if expected.is_nan() {
            visibility_theta(&p).visibility
        } else {
            expected
        };
        let batch = sample_joint(&p, 1_000_000, 100 + i as u64).unwrap();
        let fit = fit_visibility(&batch, p).unwrap();
        assert!(
            (fit.visibility_hat - expected).abs() <= 0.01,
            "theta = {theta}: {fit:?}"
        );
        assert!(fit.visibility_hat > -0.02 && fit.visibility_hat < 1.02);
    }
}

#[test]
fn asym_samples_fit_bob_controlled_visibility() {
    let p = AsymParams::new(1.0, 2.0, 0.5, 0.6).unwrap();
    let batch = sample_density(&p, 500_000, 9).unwrap();
    let fit = fit_visibility(&batch, p).unwrap();
    let expected = (-2.0f64 * 0.5 * 0.36).exp();
    assert!((fit.visibility_hat - expected).abs() <= 0.01, "{fit:?}");
}

#[test]
fn fit_rejects_small_batches() {
    let p = ThetaParams::new(1.0, 2.0, 0.2).unwrap();
    let batch = sample_joint(&p, 500, 1).unwrap();
    assert!(matches!(fit_visibility(&batch, p), Err(Error::TooFewSamples { .. })));
}
