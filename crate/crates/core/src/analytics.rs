//! Short-time, large-`S` approximations to the squeezing dynamics.
//!
//! All formulas are expressed through `beta = S tau^2 sin^2(theta0) + gamma tau`
//! and the anisotropy factor `1 + 9 S sin^2(theta0) cos^2(theta0)`, which
//! vanishes into `1` on the equator.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{expect_sz, expect_sz2, Observables};
use crate::error::{Error, Result};
use crate::spin_model::InitialState;

/// Angular distance from `pi/2` inside which a state counts as equatorial.
pub const EQUATOR_TOLERANCE: f64 = 1e-6;

fn sin2(init: &InitialState) -> Result<f64> {
    let s = init.theta0.sin();
    if s.abs() < 1e-15 {
        return Err(Error::PoleState);
    }
    Ok(s * s)
}

fn anisotropy(spin: f64, init: &InitialState) -> f64 {
    let (s, c) = init.theta0.sin_cos();
    1.0 + 9.0 * spin * s * s * c * c
}

/// `beta = S tau^2 sin^2(theta0) + gamma tau`.
pub fn beta(spin: f64, init: &InitialState, gamma: f64, tau: f64) -> f64 {
    let s = init.theta0.sin();
    spin * tau * tau * s * s + gamma * tau
}

/// Coherence time `tau_d = 1 / (sqrt(S) sin(theta0))` of the phase diffusion.
pub fn coherence_time(spin: f64, init: &InitialState) -> Result<f64> {
    let s2 = sin2(init)?;
    Ok(1.0 / (spin * s2).sqrt())
}

/// Which terms of the short-time expansion to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ShortTimeVariant {
    /// The closed expression with the `cos^2(theta0) beta^2` term of the
    /// variance product dropped.
    #[default]
    Standard,
    /// Adds back `(3/2) cos^2(theta0) beta (1 - 5 beta / 3)`.
    WithDroppedTerm,
}

/// Short-time squeezing parameter
/// `gamma tau / beta + 1 / (4 S beta sin^2) + (2 beta^2 / 3) [1 + 9 S sin^2 cos^2]`.
pub fn xi2_shorttime(spin: f64, init: &InitialState, gamma: f64, tau: f64) -> Result<f64> {
    xi2_shorttime_variant(spin, init, gamma, tau, ShortTimeVariant::Standard)
}

pub fn xi2_shorttime_variant(
    spin: f64,
    init: &InitialState,
    gamma: f64,
    tau: f64,
    variant: ShortTimeVariant,
) -> Result<f64> {
    let s2 = sin2(init)?;
    if !(tau > 0.0) {
        return Err(Error::ZeroTime);
    }
    let b = beta(spin, init, gamma, tau);
    let mut xi2 = gamma * tau / b + 1.0 / (4.0 * spin * b * s2) + 2.0 * b * b / 3.0 * anisotropy(spin, init);
    if variant == ShortTimeVariant::WithDroppedTerm {
        let c = init.theta0.cos();
        xi2 += 1.5 * c * c * b * (1.0 - 5.0 * b / 3.0);
    }
    Ok(xi2)
}

/// Short-time squeezing without dephasing, `beta = S tau^2 sin^2(theta0)`.
pub fn xi2_no_dephasing(spin: f64, init: &InitialState, tau: f64) -> Result<f64> {
    let s2 = sin2(init)?;
    if !(tau > 0.0) {
        return Err(Error::ZeroTime);
    }
    let b = spin * tau * tau * s2;
    Ok(1.0 / (4.0 * spin * b * s2) + 2.0 * b * b / 3.0 * anisotropy(spin, init))
}

/// Optimal time when dephasing is negligible.
pub fn tau_min_weak(spin: f64, init: &InitialState) -> Result<f64> {
    let s2 = sin2(init)?;
    Ok(3f64.powf(1.0 / 6.0) * (2.0 * spin * s2).powf(-2.0 / 3.0) / anisotropy(spin, init).powf(1.0 / 6.0))
}

/// Best squeezing when dephasing is negligible; `(1/2)(2S/3)^{-2/3}` on the equator.
pub fn xi2_min_weak(spin: f64, init: &InitialState) -> Result<f64> {
    let s2 = sin2(init)?;
    Ok(0.75 * (2.0 * anisotropy(spin, init) / (3.0 * spin * spin * s2 * s2)).cbrt())
}

/// Squeezing when the dephasing term dominates the projection-noise term,
/// with `beta ~ S tau^2 sin^2(theta0)`.
pub fn xi2_moderate(spin: f64, init: &InitialState, gamma: f64, tau: f64) -> Result<f64> {
    let s2 = sin2(init)?;
    if !(tau > 0.0) {
        return Err(Error::ZeroTime);
    }
    let b = spin * tau * tau * s2;
    Ok(gamma * tau / b + 2.0 * b * b / 3.0 * anisotropy(spin, init))
}

fn positive_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) {
        return Err(Error::NonpositiveGamma { gamma });
    }
    Ok(())
}

/// Optimal time under moderate dephasing.
pub fn tau_min_moderate(spin: f64, init: &InitialState, gamma: f64) -> Result<f64> {
    let s2 = sin2(init)?;
    positive_gamma(gamma)?;
    let fifth = 0.2;
    Ok((3.0 * gamma).powf(fifth) * (8.0 * spin.powi(3) * s2.powi(3)).powf(-fifth) / anisotropy(spin, init).powf(fifth))
}

/// Best squeezing under moderate dephasing.
pub fn xi2_min_moderate(spin: f64, init: &InitialState, gamma: f64) -> Result<f64> {
    let s2 = sin2(init)?;
    positive_gamma(gamma)?;
    Ok(1.25 * (8.0 * gamma.powi(4) * anisotropy(spin, init) / (3.0 * spin * spin * s2 * s2)).powf(0.2))
}

/// Squeezing under strong dephasing, `beta ~ gamma tau`; never below 1.
pub fn xi2_strong(spin: f64, init: &InitialState, gamma: f64, tau: f64) -> f64 {
    let b = gamma * tau;
    1.0 + 2.0 * b * b / 3.0 * anisotropy(spin, init)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeKind {
    Negligible,
    Moderate,
    Strong,
}

impl RegimeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeKind::Negligible => "negligible",
            RegimeKind::Moderate => "moderate",
            RegimeKind::Strong => "strong",
        }
    }
}

/// Dephasing regime with the boundaries used, as exponents of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    pub lower: f64,
    pub upper: f64,
}

pub fn is_equatorial(init: &InitialState) -> bool {
    (init.theta0 - FRAC_PI_2).abs() <= EQUATOR_TOLERANCE
}

/// Classifies `gamma` against powers of `S`.
///
/// Equator: negligible below `S^{-1/2}`, strong from `S^{1/2}`. Elsewhere:
/// negligible below `S^{-1/3}`, strong from `S^{1/4}`.
pub fn classify_regime(spin: f64, init: &InitialState, gamma: f64) -> Regime {
    let (lower, upper) = if is_equatorial(init) {
        (-0.5, 0.5)
    } else {
        (-1.0 / 3.0, 0.25)
    };
    let kind = if gamma < spin.powf(lower) {
        RegimeKind::Negligible
    } else if gamma < spin.powf(upper) {
        RegimeKind::Moderate
    } else {
        RegimeKind::Strong
    };
    Regime { kind, lower, upper }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormulaId {
    /// Negligible-dephasing optimum.
    Weak,
    /// Moderate-dephasing optimum.
    Moderate,
    /// Strong dephasing: no squeezing, `xi^2 ~ 1`.
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPrediction {
    pub tau_min: f64,
    pub xi2_min: f64,
    pub regime: Regime,
    pub formula: FormulaId,
}

/// Optimum predicted by the formula that matches the regime.
///
/// In the strong regime the squeezing is reported as `1` and `tau_min`
/// carries the moderate-regime time scale.
pub fn predict(spin: f64, init: &InitialState, gamma: f64) -> Result<AnalyticPrediction> {
    let regime = classify_regime(spin, init, gamma);
    let (tau_min, xi2_min, formula) = match regime.kind {
        RegimeKind::Negligible => (tau_min_weak(spin, init)?, xi2_min_weak(spin, init)?, FormulaId::Weak),
        RegimeKind::Moderate => (
            tau_min_moderate(spin, init, gamma)?,
            xi2_min_moderate(spin, init, gamma)?,
            FormulaId::Moderate,
        ),
        RegimeKind::Strong => (tau_min_moderate(spin, init, gamma)?, 1.0, FormulaId::Strong),
    };
    Ok(AnalyticPrediction {
        tau_min,
        xi2_min,
        regime,
        formula,
    })
}

/// Short-time approximations of the observables; `S_z` moments stay exact.
pub fn approx_observables(spin: f64, init: &InitialState, gamma: f64, tau: f64) -> Observables {
    let (s, c) = init.theta0.sin_cos();
    let b = beta(spin, init, gamma, tau);
    let phi = init.phi0 + 2.0 * spin * tau * c;
    let pair = spin * (spin - 0.5);
    Observables {
        sz: expect_sz(spin, init),
        splus: Complex64::from_polar(spin * s * (-b).exp(), phi),
        sz2: expect_sz2(spin, init),
        splus2: Complex64::from_polar(pair * s * s * (-4.0 * b).exp(), 2.0 * phi),
        splus_z: Complex64::from_polar(2.0 * pair * s * (-b).exp(), phi) * Complex64::new(c, tau),
        tau,
    }
}
