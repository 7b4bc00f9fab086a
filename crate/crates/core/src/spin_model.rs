//! Model parameters, the initial coherent spin state, and its Dicke-basis
//! amplitudes.
//!
//! Time is never stored here: every evolution routine takes the scaled time
//! `tau = chi * t` as a separate argument, and the dephasing rate is the
//! scaled ratio `gamma = Gamma_p / chi`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest Dicke-basis dimension `2S + 1` the dense routines accept by default.
pub const DEFAULT_DENSE_CAP: usize = 4097;

/// Total spin `S = N/2` together with the scaled dephasing rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub spin: f64,
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(spin: f64, gamma: f64) -> Result<Self> {
        let params = ModelParams { spin, gamma };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        validate_spin(self.spin)?;
        if !self.gamma.is_finite() {
            return Err(Error::NonFiniteParameter {
                field: "gamma",
                value: self.gamma,
            });
        }
        if self.gamma < 0.0 {
            return Err(Error::NegativeGamma { gamma: self.gamma });
        }
        Ok(())
    }

    /// `2S` as an integer.
    pub fn two_s(&self) -> u64 {
        two_s(self.spin)
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        ModelParams { gamma, ..*self }
    }
}

/// Angles `(theta0, phi0)` of the initial coherent spin state, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub theta0: f64,
    pub phi0: f64,
}

impl InitialState {
    /// Validates `theta0` and folds `phi0` into `[0, 2pi)`.
    pub fn new(theta0: f64, phi0: f64) -> Result<Self> {
        if !phi0.is_finite() {
            return Err(Error::NonFiniteParameter {
                field: "phi0",
                value: phi0,
            });
        }
        let mut phi0 = phi0.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2pi for tiny negative inputs
        if phi0 >= TAU {
            phi0 = 0.0;
        }
        let init = InitialState { theta0, phi0 };
        init.validate()?;
        Ok(init)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.theta0.is_finite() {
            return Err(Error::NonFiniteParameter {
                field: "theta0",
                value: self.theta0,
            });
        }
        if !(0.0..=PI).contains(&self.theta0) {
            return Err(Error::AngleOutOfRange {
                field: "theta0",
                value: self.theta0,
                lo: 0.0,
                hi: PI,
            });
        }
        if !(0.0..TAU).contains(&self.phi0) {
            return Err(Error::AngleOutOfRange {
                field: "phi0",
                value: self.phi0,
                lo: 0.0,
                hi: TAU,
            });
        }
        Ok(())
    }

    /// The equatorial state `theta0 = pi/2, phi0 = 0`.
    pub fn equatorial() -> Self {
        InitialState {
            theta0: PI / 2.0,
            phi0: 0.0,
        }
    }
}

/// Checks every invariant of the parameter pair.
pub fn validate_params(params: &ModelParams, init: &InitialState) -> Result<()> {
    params.validate()?;
    init.validate()
}

pub(crate) fn validate_spin(spin: f64) -> Result<()> {
    if !spin.is_finite() || spin < 0.5 || (2.0 * spin).fract() != 0.0 {
        return Err(Error::NonHalfIntegerSpin { spin });
    }
    Ok(())
}

pub(crate) fn two_s(spin: f64) -> u64 {
    (2.0 * spin).round() as u64
}

/// Dicke-basis amplitudes of a coherent spin state.
///
/// Entries are stored in descending `m`: index `i` holds `c_m` with
/// `m = S - i`, matching the row order of the dense density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CssAmplitudes {
    pub spin: f64,
    pub c: Vec<Complex64>,
}

impl CssAmplitudes {
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// Amplitude for magnetic quantum number `m`, or `None` if out of range.
    pub fn get(&self, m: f64) -> Option<Complex64> {
        let i = self.spin - m;
        if i < 0.0 || i.fract() != 0.0 {
            return None;
        }
        self.c.get(i as usize).copied()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Coherent-state amplitudes with the default dense cap.
pub fn css_amplitudes(spin: f64, init: &InitialState) -> Result<CssAmplitudes> {
    css_amplitudes_capped(spin, init, DEFAULT_DENSE_CAP)
}

/// `c_m = C(2S, S+m)^{1/2} cos(theta0/2)^{S+m} sin(theta0/2)^{S-m} e^{i(S-m)phi0}`,
/// evaluated in log space.
pub fn css_amplitudes_capped(spin: f64, init: &InitialState, cap: usize) -> Result<CssAmplitudes> {
    validate_spin(spin)?;
    init.validate()?;
    let n = two_s(spin) as usize;
    let dim = n + 1;
    if dim > cap {
        return Err(Error::SpinTooLargeForDense { dim, cap });
    }

    let half = 0.5 * init.theta0;
    let ln_cos = half.cos().ln();
    let ln_sin = half.sin().ln();
    let ln_fact_n = libm::lgamma(n as f64 + 1.0);

    let c = (0..dim)
        .map(|i| {
            // i = S - m, so S + m = n - i
            let up = (n - i) as f64;
            let down = i as f64;
            let ln_binom = ln_fact_n - libm::lgamma(up + 1.0) - libm::lgamma(down + 1.0);
            let log_mag = 0.5 * ln_binom + xlny(up, ln_cos) + xlny(down, ln_sin);
            Complex64::from_polar(log_mag.exp(), down * init.phi0)
        })
        .collect();

    Ok(CssAmplitudes { spin, c })
}

/// `k * ln(y)` with the convention `0 * ln(0) = 0`.
fn xlny(k: f64, ln_y: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * ln_y
    }
}
