//! Exact expectation values of the dephased one-axis-twisting model.
//!
//! Starting from a coherent spin state, every moment needed for the
//! squeezing analysis has a closed form built from the twist factor
//! `R(tau) = cos(tau) + i cos(theta0) sin(tau)` raised to a power of order
//! `2S`. Those powers over- and underflow double precision long before `S`
//! becomes interesting, so they are carried as `(ln|z|, arg z)` pairs and
//! only exponentiated once the full product is assembled.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin_model::{InitialState, ModelParams};

/// Magnitudes below this are reported as exact zeros.
pub const ZERO_MAGNITUDE: f64 = 1e-300;

/// A complex number stored as `(ln |z|, arg z)`.
///
/// `log_mag == -inf` marks an exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarComplex {
    pub log_mag: f64,
    pub arg: f64,
}

impl PolarComplex {
    pub const ZERO: PolarComplex = PolarComplex {
        log_mag: f64::NEG_INFINITY,
        arg: 0.0,
    };
    pub const ONE: PolarComplex = PolarComplex {
        log_mag: 0.0,
        arg: 0.0,
    };

    pub fn new(log_mag: f64, arg: f64) -> Self {
        PolarComplex { log_mag, arg }
    }

    pub fn from_complex(z: Complex64) -> Self {
        let r = z.norm();
        if r < ZERO_MAGNITUDE {
            Self::ZERO
        } else {
            PolarComplex {
                log_mag: r.ln(),
                arg: z.arg(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// Integer power; `z^0 = 1` even for `z = 0`.
    pub fn powi(self, n: u64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        let n = n as f64;
        PolarComplex {
            log_mag: n * self.log_mag,
            arg: n * self.arg,
        }
    }

    pub fn product(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        PolarComplex {
            log_mag: self.log_mag + other.log_mag,
            arg: self.arg + other.arg,
        }
    }

    /// Multiplies by the positive real `exp(log_factor)`.
    pub fn scale_log(self, log_factor: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        PolarComplex {
            log_mag: self.log_mag + log_factor,
            ..self
        }
    }

    /// Multiplies by `exp(i phase)`.
    pub fn rotate(self, phase: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        PolarComplex {
            arg: self.arg + phase,
            ..self
        }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let r = self.log_mag.exp();
        if r < ZERO_MAGNITUDE {
            return Complex64::new(0.0, 0.0);
        }
        // reduce first so sin/cos see a small argument
        let (s, c) = self.arg.rem_euclid(TAU).sin_cos();
        Complex64::new(r * c, r * s)
    }
}

/// The five expectation values entering the variance coefficients, at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// `<S_z>`
    pub sz: f64,
    /// `<S_+>`
    pub splus: Complex64,
    /// `<S_z^2>`
    pub sz2: f64,
    /// `<S_+^2>`
    pub splus2: Complex64,
    /// `<S_+ (2 S_z + 1)>`
    pub splus_z: Complex64,
    pub tau: f64,
}

/// `R(tau)` in polar form with a continuous argument.
///
/// The principal value of `atan(cos(theta0) tan(tau))` jumps at odd
/// multiples of `pi/2`; the returned argument instead follows the winding of
/// `R` around the origin, staying within `pi/2` of `sign(cos theta0) * tau`.
/// For `cos(theta0) = 0`, `R` is real and the argument is `0` or `pi`.
pub fn twist_factor(theta0: f64, tau: f64) -> PolarComplex {
    let cos_t = theta0.cos();
    let sin_t = theta0.sin();
    let (sin_tau, cos_tau) = tau.sin_cos();

    let x = sin_t * sin_t * sin_tau * sin_tau;
    let log_mag = if x < 0.5 {
        0.5 * (-x).ln_1p()
    } else {
        let r = cos_tau.hypot(cos_t * sin_tau);
        if r < ZERO_MAGNITUDE {
            return PolarComplex::ZERO;
        }
        r.ln()
    };

    let principal = (cos_t * sin_tau).atan2(cos_tau);
    let sign = if cos_t > 0.0 {
        1.0
    } else if cos_t < 0.0 {
        -1.0
    } else {
        0.0
    };
    let winding = ((sign * tau - principal) / TAU).round();
    PolarComplex {
        log_mag,
        arg: principal + TAU * winding,
    }
}

/// `<S_z> = S cos(theta0)`; conserved by both the twisting and the dephasing.
pub fn expect_sz(spin: f64, init: &InitialState) -> f64 {
    spin * init.theta0.cos()
}

/// `<S_z^2> = S/2 + S(S - 1/2) cos^2(theta0)`; conserved.
pub fn expect_sz2(spin: f64, init: &InitialState) -> f64 {
    let c = init.theta0.cos();
    0.5 * spin + spin * (spin - 0.5) * c * c
}

fn ln_sin_theta(init: &InitialState) -> Option<f64> {
    let s = init.theta0.sin();
    // sin(pi) evaluates to ~1.2e-16, which still counts as a pole
    if s.abs() < 1e-15 {
        None
    } else {
        Some(s.ln())
    }
}

/// `<S_+> = S sin(theta0) e^{i phi0} e^{-gamma tau} R(tau)^{2S-1}`.
pub fn expect_splus(params: &ModelParams, init: &InitialState, tau: f64) -> Complex64 {
    splus_polar(params, init, tau).to_complex()
}

/// `<S_+>` before conversion to cartesian form.
pub fn splus_polar(params: &ModelParams, init: &InitialState, tau: f64) -> PolarComplex {
    let Some(ln_sin) = ln_sin_theta(init) else {
        return PolarComplex::ZERO;
    };
    let two_s = params.two_s();
    twist_factor(init.theta0, tau)
        .powi(two_s - 1)
        .scale_log(params.spin.ln() + ln_sin - params.gamma * tau)
        .rotate(init.phi0)
}

/// `<S_+^2> = S(S - 1/2) sin^2(theta0) e^{2i phi0} e^{-4 gamma tau} R(2 tau)^{2S-2}`.
pub fn expect_splus2(params: &ModelParams, init: &InitialState, tau: f64) -> Complex64 {
    let two_s = params.two_s();
    let Some(ln_sin) = ln_sin_theta(init) else {
        return Complex64::new(0.0, 0.0);
    };
    if two_s < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let spin = params.spin;
    twist_factor(init.theta0, 2.0 * tau)
        .powi(two_s - 2)
        .scale_log((spin * (spin - 0.5)).ln() + 2.0 * ln_sin - 4.0 * params.gamma * tau)
        .rotate(2.0 * init.phi0)
        .to_complex()
}

/// `<S_+(2S_z + 1)> = 2S(S - 1/2) sin(theta0) e^{i phi0} e^{-gamma tau}
/// R(tau)^{2S-2} [i sin(tau) + cos(theta0) cos(tau)]`.
pub fn expect_splus_z(params: &ModelParams, init: &InitialState, tau: f64) -> Complex64 {
    let two_s = params.two_s();
    let Some(ln_sin) = ln_sin_theta(init) else {
        return Complex64::new(0.0, 0.0);
    };
    if two_s < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let spin = params.spin;
    let (sin_tau, cos_tau) = tau.sin_cos();
    let bracket = PolarComplex::from_complex(Complex64::new(init.theta0.cos() * cos_tau, sin_tau));
    twist_factor(init.theta0, tau)
        .powi(two_s - 2)
        .product(bracket)
        .scale_log((2.0 * spin * (spin - 0.5)).ln() + ln_sin - params.gamma * tau)
        .rotate(init.phi0)
        .to_complex()
}

/// General moment `<S_+^l> = e^{-gamma l^2 tau} (2S)!/(2^l (2S-l)!)
/// sin^l(theta0) e^{i l phi0} R(l tau)^{2S-l}` for `1 <= l <= 2S`.
pub fn expect_splus_l(
    params: &ModelParams,
    init: &InitialState,
    tau: f64,
    order: u64,
) -> Result<Complex64> {
    let two_s = params.two_s();
    if order < 1 || order > two_s {
        return Err(Error::MomentOrderOutOfRange {
            order,
            max: two_s,
        });
    }
    let Some(ln_sin) = ln_sin_theta(init) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let l = order as f64;
    // ln[(2S)! / (2S - l)!] as a falling product
    let ln_falling: f64 = (0..order).map(|k| ((two_s - k) as f64).ln()).sum();
    let log_prefactor = ln_falling - l * std::f64::consts::LN_2 + l * ln_sin - params.gamma * l * l * tau;
    Ok(twist_factor(init.theta0, l * tau)
        .powi(two_s - order)
        .scale_log(log_prefactor)
        .rotate(l * init.phi0)
        .to_complex())
}

/// All five observables at one time.
pub fn full_observables(params: &ModelParams, init: &InitialState, tau: f64) -> Observables {
    Observables {
        sz: expect_sz(params.spin, init),
        splus: expect_splus(params, init, tau),
        sz2: expect_sz2(params.spin, init),
        splus2: expect_splus2(params, init, tau),
        splus_z: expect_splus_z(params, init, tau),
        tau,
    }
}

/// Phase of `<S_+>` on its continuous branch,
/// `phi0 + (2S - 1) atan[cos(theta0) tan(tau)]` with windings kept.
pub fn splus_phase(params: &ModelParams, init: &InitialState, tau: f64) -> f64 {
    init.phi0 + (params.two_s() as f64 - 1.0) * twist_factor(init.theta0, tau).arg
}

/// Wraps an angle difference into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}
