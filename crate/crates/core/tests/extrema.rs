//! Fringe extrema of the one-particle density against its envelopes.
//!
//! Reference numbers come from an independent scipy run (Brent refinement of
//! the derivative root on the closed-form density, a = 1, theta = pi/6).

use std::f64::consts::PI;

use epr_dds_core::densities::momentum_density_theta;
use epr_dds_core::interferometry::one_particle_envelopes;
use epr_dds_core::numerics::{locate_extrema, Extremum};
use epr_dds_core::ThetaParams;

fn first_off_centre_maximum(params: &ThetaParams) -> Extremum {
    let period = PI / params.h();
    let scan = locate_extrema(
        |p| momentum_density_theta(params, p),
        1e-3,
        3.0 * params.a().sqrt(),
        period,
    )
    .unwrap();
    let first = *scan.maxima().next().expect("an off-centre maximum");
    first
}

fn relative_deviation(params: &ThetaParams, e: &Extremum) -> f64 {
    let env = one_particle_envelopes(params);
    (e.value - env.upper(e.position)).abs() / env.upper(e.position)
}

fn params(ah2: f64) -> ThetaParams {
    ThetaParams::new(1.0, ah2.sqrt(), PI / 6.0).unwrap()
}

#[test]
fn central_maximum_touches_the_upper_envelope() {
    for ah2 in [0.5, 3.0, 6.0] {
        let p = params(ah2);
        let env = one_particle_envelopes(&p);
        let rel = (momentum_density_theta(&p, 0.0) - env.upper(0.0)).abs() / env.upper(0.0);
        assert!(rel < 1e-14, "{ah2}: {rel}");
    }
}

#[test]
fn off_centre_maxima_deviate_from_upper_envelope() {
    let cases = [
        (3.0, 0.179_980_589_798_343_5, None),
        (4.0, 0.116_160_098_769_155_81, Some(1.390_008_001_624_924_8)),
        (6.0, 0.058_959_000_563_628_83, Some(1.178_537_129_715_019_6)),
    ];
    for (ah2, deviation, position) in cases {
        let p = params(ah2);
        let max = first_off_centre_maximum(&p);
        let measured = relative_deviation(&p, &max);
        assert!((measured - deviation).abs() < 1e-6, "ah2 = {ah2}: {measured}");
        if let Some(x) = position {
            assert!((max.position - x).abs() < 1e-8, "ah2 = {ah2}: {}", max.position);
        }
    }
}

#[test]
fn first_minimum_sits_close_to_lower_envelope() {
    let p = params(4.0);
    let scan = locate_extrema(|x| momentum_density_theta(&p, x), 1e-3, 3.0, PI / p.h()).unwrap();
    let min = scan.minima().next().unwrap();
    let env = one_particle_envelopes(&p);
    let gap = (min.value - env.lower(min.position)) / env.upper(min.position);
    assert!(
        (min.position - 0.793_085_438_598_333_4).abs() < 1e-8,
        "{}",
        min.position
    );
    assert!((gap - 0.000_219).abs() < 5e-6, "{gap}");
}

#[test]
fn small_separation_shifts_maximum_off_the_cosine_lattice() {
    let p = params(0.5);
    let period = PI / p.h();
    let scan = locate_extrema(|x| momentum_density_theta(&p, x), 1e-3, 6.0, period).unwrap();
    let max = scan.maxima().next().unwrap();
    assert!(
        (max.position - 2.774_533_750_590_161_5).abs() < 1e-8,
        "{}",
        max.position
    );
    let lattice = PI / p.h();
    assert!((lattice - 4.442_882_938_158_366).abs() < 1e-12);
    assert!(lattice - max.position > 1.6);
}
