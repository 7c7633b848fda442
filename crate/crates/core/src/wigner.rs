//! Closed-form Wigner functions.
//!
//! Both states are superpositions of two-mode Gaussians, so their Wigner
//! functions are built from per-particle factors
//! `g^{+-} = e^{-2a(x +- h)^2} e^{-p^2/2a}` (the diagonal blocks) and
//! `g^0 = e^{-2a x^2} e^{-p^2/2a}` (the interference block, which carries a
//! `cos(2hp)` phase). Convention: `W(x, p) = (1/2pi) int psi*(x + y/2) psi(x - y/2) e^{ipy} dy`
//! per particle, normalized so that `int W dx dp = 1`.
//!
//! Negative values are expected near interference terms.

use crate::math::{cos, exp, sin};
use crate::states::{AsymParams, ThetaParams};
use core::f64::consts::PI;

/// A point in the two-particle phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x1: f64,
    pub x2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl PhasePoint {
    pub fn new(x1: f64, x2: f64, p1: f64, p2: f64) -> Self {
        Self { x1, x2, p1, p2 }
    }
}

/// Gaussian factors of one particle at one phase-space point.
///
/// `minus` is centered on the `+h` slit (`x - h`), `plus` on the `-h` slit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussFactors {
    pub minus: f64,
    pub plus: f64,
    pub zero: f64,
}

impl GaussFactors {
    pub fn new(width: f64, half_separation: f64, x: f64, p: f64) -> Self {
        let momentum = exp(-p * p / (2.0 * width));
        let dm = x - half_separation;
        let dp = x + half_separation;
        Self {
            minus: exp(-2.0 * width * dm * dm) * momentum,
            plus: exp(-2.0 * width * dp * dp) * momentum,
            zero: exp(-2.0 * width * x * x) * momentum,
        }
    }

    fn diagonal_sum(&self) -> f64 {
        self.minus + self.plus
    }
}

/// Full Wigner function of the `theta` state: a `cos^2(theta)` block from the
/// unrotated pair, a `sin^2(theta)` block from the mirrored pair and a
/// `sin(2 theta)` block from their cross terms.
pub fn wigner_theta(params: &ThetaParams, pt: PhasePoint) -> f64 {
    let (a, h) = (params.a(), params.h());
    let g1 = GaussFactors::new(a, h, pt.x1, pt.p1);
    let g2 = GaussFactors::new(a, h, pt.x2, pt.p2);
    let t = params.theta();
    let (c, s) = (cos(t), sin(t));
    let cross = 2.0 * g1.zero * g2.zero;

    let correlated = g1.minus * g2.minus + g1.plus * g2.plus + cross * cos(2.0 * h * (pt.p1 + pt.p2));
    let mixed = cos(2.0 * h * pt.p1) * g1.zero * g2.diagonal_sum() + cos(2.0 * h * pt.p2) * g2.zero * g1.diagonal_sum();
    let anticorrelated = g1.minus * g2.plus + g1.plus * g2.minus + cross * cos(2.0 * h * (pt.p1 - pt.p2));

    params.b_theta() * (c * c * correlated + params.sin_two_theta() * mixed + s * s * anticorrelated)
}

/// One-particle Wigner function of the `theta` state (particle 2 traced out):
/// `pi B [1 + q sin2theta](g- + g+) + 2 pi B [q + sin2theta] g0 cos(2 h p1)`.
///
/// The state is symmetric under particle exchange, so this also serves as the
/// partial Wigner function of particle 2.
pub fn wigner_partial_theta(params: &ThetaParams, x1: f64, p1: f64) -> f64 {
    let g = GaussFactors::new(params.a(), params.h(), x1, p1);
    let q = params.slit_overlap();
    let s = params.sin_two_theta();
    let b = params.b_theta();
    PI * b * (1.0 + q * s) * g.diagonal_sum() + 2.0 * PI * b * (q + s) * g.zero * cos(2.0 * params.h() * p1)
}

/// Full Wigner function of the asymmetric state:
/// `G(γ1- γ2- + γ1+ γ2+) + 2G γ1^0 γ2^0 cos(2 h1 p1 + 2 h2 p2)`.
pub fn wigner_asym(params: &AsymParams, pt: PhasePoint) -> f64 {
    let g1 = GaussFactors::new(params.a(), params.h1(), pt.x1, pt.p1);
    let g2 = GaussFactors::new(params.b(), params.h2(), pt.x2, pt.p2);
    let phase = 2.0 * params.h1() * pt.p1 + 2.0 * params.h2() * pt.p2;
    params.g() * (g1.minus * g2.minus + g1.plus * g2.plus) + 2.0 * params.g() * g1.zero * g2.zero * cos(phase)
}

/// Alice's partial Wigner function for the asymmetric state:
/// `pi G [γ1- + γ1+ + 2 e^{-2 b h2^2} γ1^0 cos(2 h1 p1)]`.
pub fn wigner_partial_asym(params: &AsymParams, x1: f64, p1: f64) -> f64 {
    let g = GaussFactors::new(params.a(), params.h1(), x1, p1);
    PI * params.g() * (g.diagonal_sum() + 2.0 * params.bob_overlap() * g.zero * cos(2.0 * params.h1() * p1))
}

/// Bob's partial Wigner function, obtained by exchanging the particles.
pub fn wigner_partial_asym_second(params: &AsymParams, x2: f64, p2: f64) -> f64 {
    wigner_partial_asym(&params.swapped(), x2, p2)
}

/// Wigner function of a single particle behind a double slit with Gaussian
/// apertures of width `a` at `+-h`.
pub fn single_particle_wigner(a: f64, h: f64, x: f64, p: f64) -> f64 {
    let g = GaussFactors::new(a, h, x, p);
    let q = exp(-2.0 * a * h * h);
    (g.diagonal_sum() + 2.0 * g.zero * cos(2.0 * h * p)) / (2.0 * PI * (1.0 + q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn theta_wigner_has_joint_parity() {
        let p = ThetaParams::new(1.0, 1.0, 0.4).unwrap();
        for &(x1, x2, p1, p2) in &[(0.3, -0.9, 1.2, 0.4), (1.1, 0.8, -0.7, 2.0)] {
            let w = wigner_theta(&p, PhasePoint::new(x1, x2, p1, p2));
            let m = wigner_theta(&p, PhasePoint::new(-x1, -x2, -p1, -p2));
            assert_relative_eq!(w, m, max_relative = 1e-14);
        }
    }

    #[test]
    fn partial_theta_at_product_state_is_single_slit_form() {
        let p = ThetaParams::new(1.0, 1.0, FRAC_PI_4).unwrap();
        for i in 0..21 {
            for j in 0..21 {
                let x = -3.0 + 0.3 * i as f64;
                let k = -6.0 + 0.6 * j as f64;
                let lhs = wigner_partial_theta(&p, x, k);
                let rhs = single_particle_wigner(1.0, 1.0, x, k);
                assert!((lhs - rhs).abs() <= 1e-12, "{x} {k}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn asym_reduces_to_theta_zero_pointwise() {
        let t = ThetaParams::new(0.9, 1.1, 0.0).unwrap();
        let q = AsymParams::new(0.9, 1.1, 0.9, 1.1).unwrap();
        for &(x1, x2, p1, p2) in &[(0.0, 0.0, 0.0, 0.0), (1.0, -0.3, 0.5, 1.7), (-0.8, 1.2, -2.0, 0.1)] {
            let pt = PhasePoint::new(x1, x2, p1, p2);
            assert_relative_eq!(wigner_asym(&q, pt), wigner_theta(&t, pt), max_relative = 1e-13);
        }
    }

    #[test]
    fn asym_cross_term_flips_sign_at_half_period() {
        let q = AsymParams::new(1.0, 1.5, 0.5, 2.0).unwrap();
        // 2 h1 p1 + 2 h2 p2 = pi with p2 = 0.
        let p1 = PI / (2.0 * 1.5);
        let pt = PhasePoint::new(0.0, 0.0, p1, 0.0);
        let g1 = GaussFactors::new(1.0, 1.5, 0.0, p1);
        let g2 = GaussFactors::new(0.5, 2.0, 0.0, 0.0);
        let expected = q.g() * (g1.minus * g2.minus + g1.plus * g2.plus) - 2.0 * q.g() * g1.zero * g2.zero;
        assert_relative_eq!(wigner_asym(&q, pt), expected, max_relative = 1e-14);
    }

    #[test]
    fn partial_asym_loses_fringes_for_distinguishable_bob() {
        let q = AsymParams::new(1.0, 1.0, 4.0, 5.0).unwrap();
        let p1 = PI / 2.0;
        let g = GaussFactors::new(1.0, 1.0, 0.0, p1);
        let value = wigner_partial_asym(&q, 0.0, p1);
        assert_relative_eq!(value, PI * q.g() * (g.minus + g.plus), max_relative = 1e-15);
    }

    #[test]
    fn gauss_factors_lie_in_unit_interval() {
        let g = GaussFactors::new(1.0, 1.0, 0.3, 0.2);
        for v in [g.minus, g.plus, g.zero] {
            assert!(v > 0.0 && v <= 1.0);
        }
        let at_slit = GaussFactors::new(2.0, 0.5, 0.5, 0.0);
        assert_eq!(at_slit.minus, 1.0);
    }
}
