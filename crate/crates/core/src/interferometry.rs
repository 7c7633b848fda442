//! Fringe envelopes, visibility, predictability and complementarity.

use core::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::math::{cos, exp, sin, sqrt};
use crate::states::{AsymParams, ThetaParams};

/// Smallest `a h^2` at which envelope-based statements are trusted
/// (`e^{-2 a h^2} <= 2.5e-3`).
pub const REGIME_AH2_MIN: f64 = 3.0;

/// Upper and lower envelopes sharing the profile `exp(-p^2 / (2 gaussian_var))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePair {
    pub upper_coeff: f64,
    pub lower_coeff: f64,
    pub gaussian_var: f64,
}

impl EnvelopePair {
    fn profile(&self, p: f64) -> f64 {
        exp(-p * p / (2.0 * self.gaussian_var))
    }

    pub fn upper(&self, p: f64) -> f64 {
        self.upper_coeff * self.profile(p)
    }

    pub fn lower(&self, p: f64) -> f64 {
        self.lower_coeff * self.profile(p)
    }

    /// `upper / lower`; `+inf` when the lower envelope vanishes.
    pub fn ratio(&self) -> f64 {
        if self.lower_coeff == 0.0 {
            f64::INFINITY
        } else {
            self.upper_coeff / self.lower_coeff
        }
    }

    /// `(upper - lower) / (upper + lower)`.
    pub fn visibility(&self) -> f64 {
        (self.upper_coeff - self.lower_coeff) / (self.upper_coeff + self.lower_coeff)
    }

    /// `upper >= lower >= 0`. The exact two-particle lower envelope breaks
    /// this at small `a h^2`.
    pub fn is_ordered(&self) -> bool {
        self.upper_coeff >= self.lower_coeff && self.lower_coeff >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityReport {
    pub visibility: f64,
    /// Envelope ratio, `+inf` when the lower envelope vanishes.
    pub ratio: f64,
    /// `a h^2 >= REGIME_AH2_MIN`.
    pub regime_ok: bool,
}

/// Envelopes of the one-particle density: the fringe term `cos(2 h p)`
/// replaced by `+1` and `-1`.
pub fn one_particle_envelopes(params: &ThetaParams) -> EnvelopePair {
    let q = params.slit_overlap();
    let s = params.sin_two_theta();
    let scale = sqrt(2.0 * PI / params.a()) * PI * params.b_theta();
    EnvelopePair {
        upper_coeff: scale * (1.0 + q) * (1.0 + s),
        lower_coeff: scale * (1.0 - q) * (1.0 - s),
        gaussian_var: params.a(),
    }
}

/// Envelopes of Alice's density in the asymmetric state.
pub fn asym_envelopes(params: &AsymParams) -> EnvelopePair {
    let qa = params.alice_overlap();
    let qb = params.bob_overlap();
    let scale = sqrt(2.0 * PI / params.a()) * PI / (2.0 * PI * PI * (1.0 + qa * qb));
    EnvelopePair {
        upper_coeff: scale * (1.0 + qb),
        lower_coeff: scale * (1.0 - qb),
        gaussian_var: params.a(),
    }
}

/// `V = (e^{-2ah^2} + sin2theta) / (1 + e^{-2ah^2} sin2theta)`, with the
/// envelope ratio `coth(a h^2) (1 + sin2theta) / (1 - sin2theta)`.
pub fn visibility_theta(params: &ThetaParams) -> VisibilityReport {
    let q = params.slit_overlap();
    let s = params.sin_two_theta();
    let lower = (1.0 - q) * (1.0 - s);
    VisibilityReport {
        visibility: (q + s) / (1.0 + q * s),
        ratio: if lower == 0.0 {
            f64::INFINITY
        } else {
            (1.0 + q) * (1.0 + s) / lower
        },
        regime_ok: params.ah2() >= REGIME_AH2_MIN,
    }
}

/// `V = e^{-2 b h2^2}`, independent of Alice's parameters; ratio `coth(b h2^2)`.
pub fn visibility_asym(params: &AsymParams) -> VisibilityReport {
    let v = params.bob_overlap();
    VisibilityReport {
        visibility: v,
        ratio: if v == 1.0 { f64::INFINITY } else { (1.0 + v) / (1.0 - v) },
        regime_ok: params.a() * params.h1() * params.h1() >= REGIME_AH2_MIN,
    }
}

/// Envelopes of the two-particle fringes along the `p- = 0` section,
/// in the variable `p+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleEnvelopes {
    /// Valid for every `a h^2`; the lower coefficient may be negative.
    pub exact: EnvelopePair,
    /// The `a h^2 >> 1` limit, `1 + cos^2(2theta)` over `1 - cos(2theta)`.
    pub simplified: EnvelopePair,
}

pub fn two_particle_envelopes(params: &ThetaParams) -> TwoParticleEnvelopes {
    let q = params.slit_overlap();
    let s = params.sin_two_theta();
    let c = params.cos_two_theta();
    let k = params.two_particle_scale();
    let var = 2.0 * params.a();
    let one_minus_q = 1.0 - q;
    TwoParticleEnvelopes {
        exact: EnvelopePair {
            upper_coeff: k * (2.0 + 2.0 * q * q - s * s * one_minus_q * one_minus_q),
            lower_coeff: k * (1.0 - c * (q * q + 1.0 + 2.0 * s * q - c * q * q)),
            gaussian_var: var,
        },
        simplified: EnvelopePair {
            upper_coeff: k * (1.0 + c * c),
            lower_coeff: k * (1.0 - c),
            gaussian_var: var,
        },
    }
}

/// Two-particle predictability from the simplified envelopes,
/// `cos2theta cos^2 theta / (1 - cos2theta sin^2 theta)`.
pub fn predictability_theta(theta: f64) -> Result<f64> {
    if !(theta.is_finite() && (0.0..=FRAC_PI_4).contains(&theta)) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let c = cos(2.0 * theta);
    let (ct, st) = (cos(theta), sin(theta));
    Ok(c * ct * ct / (1.0 - c * st * st))
}

/// Predictability from the exact envelopes. Can leave `[0, 1]` when the
/// exact lower envelope goes negative.
pub fn predictability_exact(params: &ThetaParams) -> f64 {
    two_particle_envelopes(params).exact.visibility()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplementarityRecord {
    pub theta: f64,
    /// `sin 2theta`.
    pub v_simple: f64,
    /// Envelope visibility at the given `a, h`.
    pub v_envelope: f64,
    pub predictability: f64,
    /// `P^2 + sin^2 2theta`.
    pub sum_sq: f64,
    /// `P^2 + V_envelope^2`; may exceed 1 for small `a h^2`.
    pub sum_sq_envelope: f64,
    /// `sum_sq <= 1 + 1e-12`.
    pub holds: bool,
}

pub fn complementarity(params: &ThetaParams) -> ComplementarityRecord {
    let predictability = predictability_theta(params.theta()).expect("ThetaParams keeps theta in range");
    let v_simple = params.sin_two_theta();
    let v_envelope = visibility_theta(params).visibility;
    let sum_sq = predictability * predictability + v_simple * v_simple;
    ComplementarityRecord {
        theta: params.theta(),
        v_simple,
        v_envelope,
        predictability,
        sum_sq,
        sum_sq_envelope: predictability * predictability + v_envelope * v_envelope,
        holds: sum_sq <= 1.0 + 1e-12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn product_state_has_no_lower_envelope() {
        let p = ThetaParams::new(1.3, 0.7, FRAC_PI_4).unwrap();
        let env = one_particle_envelopes(&p);
        assert!(env.lower_coeff.abs() < 1e-16 * env.upper_coeff);
        assert_eq!(visibility_theta(&p).visibility, 1.0);
    }

    #[test]
    fn envelope_ratio_matches_coth_form() {
        let p = ThetaParams::new(1.0, 1.0, PI / 12.0).unwrap();
        let coth1 = libm::cosh(1.0) / libm::sinh(1.0);
        assert_relative_eq!(one_particle_envelopes(&p).ratio(), 3.0 * coth1, max_relative = 1e-14);
        assert_relative_eq!(visibility_theta(&p).ratio, 3.0 * coth1, max_relative = 1e-14);
        assert_relative_eq!(3.0 * coth1, 3.939_105_856_497_994, max_relative = 1e-14);
    }

    #[test]
    fn visibility_ratio_duality() {
        for &(a, h, t) in &[(1.0, 1.0, 0.0), (0.3, 2.0, 0.2), (2.0, 0.4, 0.7)] {
            let r = visibility_theta(&ThetaParams::new(a, h, t).unwrap());
            assert!((r.visibility - (r.ratio - 1.0) / (r.ratio + 1.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn unentangled_visibility_value() {
        let r = visibility_theta(&ThetaParams::new(1.0, 1.0, 0.0).unwrap());
        assert_relative_eq!(r.visibility, exp(-2.0), max_relative = 1e-15);
        assert!(!r.regime_ok);
    }

    #[test]
    fn asym_visibility_and_ratio() {
        let r = visibility_asym(&AsymParams::new(1.0, 1.5, 0.5, 2.0).unwrap());
        assert_relative_eq!(r.visibility, 0.018_315_638_888_734_18, max_relative = 1e-14);
        assert!((r.ratio * (1.0 - r.visibility) / (1.0 + r.visibility) - 1.0).abs() <= 1e-12);

        let flat = visibility_asym(&AsymParams::new(1.0, 1.0, 2.0, 0.0).unwrap());
        assert_eq!(flat.visibility, 1.0);
        assert!(flat.ratio.is_infinite());
    }

    #[test]
    fn asym_envelopes_agree_with_visibility() {
        let p = AsymParams::new(0.7, 1.2, 1.5, 0.3).unwrap();
        assert_relative_eq!(
            asym_envelopes(&p).visibility(),
            visibility_asym(&p).visibility,
            max_relative = 1e-14
        );
    }

    #[test]
    fn maximal_entanglement_two_particle_envelopes() {
        let p = ThetaParams::new(1.0, 0.8, 0.0).unwrap();
        let env = two_particle_envelopes(&p);
        assert!(env.exact.lower_coeff.abs() < 1e-16);
        assert_eq!(env.simplified.lower_coeff, 0.0);
        assert_relative_eq!(env.simplified.upper_coeff, 2.0 * p.two_particle_scale());
        assert_eq!(env.simplified.visibility(), 1.0);
    }

    #[test]
    fn exact_upper_envelope_approaches_simplified() {
        let p = ThetaParams::new(1.0, 2.0, PI / 6.0).unwrap();
        let env = two_particle_envelopes(&p);
        let gap = (env.exact.upper_coeff - env.simplified.upper_coeff).abs() / env.simplified.upper_coeff;
        // Leading term of the gap is 2 sin^2(2theta) q / (1 + cos^2 2theta) = 1.2 q.
        assert!(gap <= 10.0 * p.slit_overlap(), "{gap}");
        assert_relative_eq!(gap / p.slit_overlap(), 1.2, max_relative = 1e-3);
    }

    #[test]
    fn exact_lower_envelope_goes_negative_for_overlapping_slits() {
        let p = ThetaParams::new(1.0, 0.3, PI / 8.0).unwrap();
        let env = two_particle_envelopes(&p);
        assert!(env.exact.lower_coeff < 0.0);
        assert!(!env.exact.is_ordered());
        assert!(env.simplified.is_ordered());
    }

    #[test]
    fn predictability_values() {
        assert_relative_eq!(predictability_theta(0.0).unwrap(), 1.0);
        assert!(predictability_theta(FRAC_PI_4).unwrap().abs() < 1e-16);
        assert_relative_eq!(predictability_theta(PI / 6.0).unwrap(), 3.0 / 7.0, max_relative = 1e-14);
        assert!(matches!(predictability_theta(1.0), Err(Error::ThetaOutOfRange(_))));
        assert!(predictability_theta(-0.1).is_err());
    }

    #[test]
    fn predictability_forms_agree_and_respect_cos_bound() {
        for k in 0..=50 {
            let t = FRAC_PI_4 * k as f64 / 50.0;
            let c = cos(2.0 * t);
            let p = predictability_theta(t).unwrap();
            assert!((p - (c * c + c) / (c * c - c + 2.0)).abs() <= 1e-15);
            assert!(p <= c + 1e-15);
        }
    }

    #[test]
    fn simplified_envelopes_give_predictability() {
        let p = ThetaParams::new(1.0, 1.0, 0.4).unwrap();
        assert_relative_eq!(
            two_particle_envelopes(&p).simplified.visibility(),
            predictability_theta(0.4).unwrap(),
            max_relative = 1e-14
        );
        assert!(
            (predictability_exact(&ThetaParams::new(5.0, 2.0, 0.4).unwrap()) - predictability_theta(0.4).unwrap())
                .abs()
                < 1e-6
        );
    }

    #[test]
    fn complementarity_endpoints() {
        let start = complementarity(&ThetaParams::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!((start.predictability, start.v_simple), (1.0, 0.0));
        let end = complementarity(&ThetaParams::new(1.0, 1.0, FRAC_PI_4).unwrap());
        assert!((end.sum_sq - 1.0).abs() <= 1e-12);
        assert!(start.holds && end.holds);
    }
}
