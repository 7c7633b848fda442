//! State families and their wavefunctions.
//!
//! [`ThetaParams`] describes the symmetric family: both particles see slits at
//! `+-h` with Gaussian width parameter `a = 1/Delta^2`, and `theta` in
//! `[0, pi/4]` dials entanglement from maximal (`theta = 0`) to none
//! (`theta = pi/4`). [`AsymParams`] lets Bob's width `b` and half-separation
//! `h2` differ from Alice's `a`, `h1`, with the pair kept maximally entangled.
//!
//! All Gaussian overlaps are carried as `q = exp(-2 a h^2) <= 1`, so the
//! derived constants stay finite for arbitrarily well separated slits.

use core::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cos, exp, ln_cosh_plus, log, sin, sqrt};

/// Complex value of a momentum-space wavefunction.
pub type Amplitude = Complex64;

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

/// Symmetric double-double-slit state with entanglement angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    a: f64,
    h: f64,
    theta: f64,
}

impl ThetaParams {
    pub fn new(a: f64, h: f64, theta: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_non_negative("h", h)?;
        if !(theta.is_finite() && (0.0..=FRAC_PI_4).contains(&theta)) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        Ok(Self { a, h, theta })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same geometry, different entanglement angle.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.a, self.h, theta)
    }

    /// The dimensionless product `a h^2` that controls fringe quality.
    pub fn ah2(&self) -> f64 {
        self.a * self.h * self.h
    }

    /// Overlap of the two slit Gaussians, `exp(-2 a h^2)`.
    pub fn slit_overlap(&self) -> f64 {
        exp(-2.0 * self.a * self.h * self.h)
    }

    pub fn sin_two_theta(&self) -> f64 {
        sin(2.0 * self.theta)
    }

    pub fn cos_two_theta(&self) -> f64 {
        cos(2.0 * self.theta)
    }

    /// Slits coincide; visibility formulas still evaluate but carry no fringes.
    pub fn is_degenerate(&self) -> bool {
        self.h == 0.0
    }

    /// `1 + 2 q sin(2 theta) + q^2`, i.e. `(a / pi) / A_theta^2`.
    pub(crate) fn norm_bracket(&self) -> f64 {
        let q = self.slit_overlap();
        1.0 + q * q + 2.0 * q * self.sin_two_theta()
    }

    /// Normalization `A` of the unrotated pair state (`theta = 0` superposand).
    pub fn base_normalization(&self) -> f64 {
        let q = self.slit_overlap();
        sqrt(self.a / (PI * (1.0 + q * q)))
    }

    /// `A_theta`, with `1/A_theta^2 = (pi/a)[1 + 2 e^{-2ah^2} sin 2theta + e^{-4ah^2}]`.
    pub fn a_theta(&self) -> f64 {
        sqrt(self.a / (PI * self.norm_bracket()))
    }

    /// `B_theta = A_theta^2 / (2 pi a)`.
    pub fn b_theta(&self) -> f64 {
        1.0 / (2.0 * PI * PI * self.norm_bracket())
    }

    /// `ln C_theta` with `C_theta = 8 pi a [cosh(2 a h^2) + sin 2theta]^2`.
    pub fn ln_c_theta(&self) -> f64 {
        log(8.0 * PI * self.a) + 2.0 * ln_cosh_plus(2.0 * self.ah2(), self.sin_two_theta())
    }

    /// `C_theta`; overflows to infinity once `a h^2` passes roughly 350.
    pub fn c_theta(&self) -> f64 {
        exp(self.ln_c_theta())
    }

    /// `N_theta = 1 / C_theta`.
    pub fn n_theta(&self) -> f64 {
        exp(-self.ln_c_theta())
    }

    /// `e^{4 a h^2} / C_theta`, the finite scale shared by every two-particle
    /// expression once brackets are multiplied through by `q^2`.
    pub(crate) fn two_particle_scale(&self) -> f64 {
        let d = self.norm_bracket();
        1.0 / (2.0 * PI * self.a * d * d)
    }
}

/// Asymmetric, maximally entangled double-double-slit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymParams {
    a: f64,
    h1: f64,
    b: f64,
    h2: f64,
}

impl AsymParams {
    pub fn new(a: f64, h1: f64, b: f64, h2: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_non_negative("h1", h1)?;
        check_positive("b", b)?;
        check_non_negative("h2", h2)?;
        Ok(Self { a, h1, b, h2 })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn h1(&self) -> f64 {
        self.h1
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn h2(&self) -> f64 {
        self.h2
    }

    /// Alice and Bob exchange roles.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            h1: self.h2,
            b: self.a,
            h2: self.h1,
        }
    }

    /// `exp(-2 a h1^2)`.
    pub fn alice_overlap(&self) -> f64 {
        exp(-2.0 * self.a * self.h1 * self.h1)
    }

    /// `exp(-2 b h2^2)`, which is also Alice's fringe visibility.
    pub fn bob_overlap(&self) -> f64 {
        exp(-2.0 * self.b * self.h2 * self.h2)
    }

    /// `M^2 = (sqrt(ab)/pi) / (1 + exp(-2(a h1^2 + b h2^2)))`.
    pub fn m_squared(&self) -> f64 {
        sqrt(self.a * self.b) / (PI * (1.0 + self.alice_overlap() * self.bob_overlap()))
    }

    pub fn m(&self) -> f64 {
        sqrt(self.m_squared())
    }

    /// `G = M^2 / (2 pi sqrt(ab))`, reduced to `1 / (2 pi^2 (1 + q_a q_b))`.
    pub fn g(&self) -> f64 {
        1.0 / (2.0 * PI * PI * (1.0 + self.alice_overlap() * self.bob_overlap()))
    }

    pub fn is_degenerate(&self) -> bool {
        self.h1 == 0.0 || self.h2 == 0.0
    }
}

fn pair_term(a: f64, b: f64, c1: f64, c2: f64, x1: f64, x2: f64) -> f64 {
    let d1 = x1 - c1;
    let d2 = x2 - c2;
    exp(-a * d1 * d1 - b * d2 * d2)
}

/// The unrotated pair state with `h1 = h2 = h`: Gaussians at `(h, h)` and
/// `(-h, -h)` with normalization `A`.
fn psi_pair_position(params: &ThetaParams, x1: f64, x2: f64) -> f64 {
    let (a, h) = (params.a, params.h);
    params.base_normalization() * (pair_term(a, a, h, h, x1, x2) + pair_term(a, a, -h, -h, x1, x2))
}

/// `psi_theta(x1, x2) = (A_theta / A) [psi(x1, x2) cos(theta) + psi(x1, -x2) sin(theta)]`.
pub fn psi_theta_position(params: &ThetaParams, x1: f64, x2: f64) -> f64 {
    let ratio = params.a_theta() / params.base_normalization();
    ratio
        * (psi_pair_position(params, x1, x2) * cos(params.theta)
            + psi_pair_position(params, x1, -x2) * sin(params.theta))
}

/// Momentum wavefunction of [`psi_theta_position`] under
/// `psi(p) = (1/2pi) int exp(-i p.x) psi(x) dx`. Real valued:
/// `(A_theta / a) exp(-(p1^2 + p2^2)/4a) [cos(theta) cos(h p+) + sin(theta) cos(h p-)]`.
pub fn psi_theta_momentum(params: &ThetaParams, p1: f64, p2: f64) -> Amplitude {
    let (a, h) = (params.a, params.h);
    let envelope = exp(-(p1 * p1 + p2 * p2) / (4.0 * a));
    let fringe = cos(params.theta) * cos(h * (p1 + p2)) + sin(params.theta) * cos(h * (p1 - p2));
    Amplitude::new(params.a_theta() / a * envelope * fringe, 0.0)
}

/// `M (e^{-a(x1-h1)^2} e^{-b(x2-h2)^2} + e^{-a(x1+h1)^2} e^{-b(x2+h2)^2})`.
pub fn psi_asym_position(params: &AsymParams, x1: f64, x2: f64) -> f64 {
    let AsymParams { a, h1, b, h2 } = *params;
    params.m() * (pair_term(a, b, h1, h2, x1, x2) + pair_term(a, b, -h1, -h2, x1, x2))
}

/// Momentum wavefunction of [`psi_asym_position`], evaluated term by term as
/// the conjugate pair
/// `M/(2 sqrt(ab)) [e^{-(p1 + 2a h1 i)^2/4a - a h1^2} e^{-(p2 + 2b h2 i)^2/4b - b h2^2} + c.c.]`.
pub fn psi_asym_momentum(params: &AsymParams, p1: f64, p2: f64) -> Amplitude {
    let AsymParams { a, h1, b, h2 } = *params;
    let factor = |p: f64, w: f64, h: f64, sign: f64| -> Amplitude {
        let shifted = Amplitude::new(p, sign * 2.0 * w * h);
        (-(shifted * shifted) / (4.0 * w) - w * h * h).exp()
    };
    let plus = factor(p1, a, h1, 1.0) * factor(p2, b, h2, 1.0);
    let minus = factor(p1, a, h1, -1.0) * factor(p2, b, h2, -1.0);
    (plus + minus) * (params.m() / (2.0 * sqrt(a * b)))
}
