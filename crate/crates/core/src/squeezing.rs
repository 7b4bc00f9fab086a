//! Mean-spin frame, transverse variances and squeezing parameters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{full_observables, Observables};
use crate::error::{Error, Result};
use crate::spin_model::{InitialState, ModelParams};

/// Relative threshold (in units of `S`) below which the mean spin, or its
/// transverse part, counts as vanished.
pub const DEFAULT_FRAME_EPS: f64 = 1e-12;

/// Relative window (in units of `S`) inside which a negative `V_-` is
/// rounding noise and gets clamped to zero.
pub const V_MINUS_FLOOR: f64 = 1e-9;

/// Orientation of the mean spin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameAngles {
    pub theta: f64,
    pub phi: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
    /// `|<S>|`
    pub spin_norm: f64,
    /// Set when `|<S_+>|` is too small to fix the azimuth.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingMetrics {
    pub v_plus: f64,
    pub v_minus: f64,
    /// `2 V_- / S`
    pub xi2: f64,
    /// `2 V_- / |<S>|`
    pub zeta2: f64,
    /// `2 S V_- / |<S>|^2`
    pub zeta_s2: f64,
    pub spin_norm: f64,
    pub tau: f64,
}

/// Builds the mean-spin frame from the observables.
///
/// `eps_frame` is absolute. When `|<S_+>| < eps_frame` the azimuth is
/// undefined and `phi_fallback` is used instead.
pub fn frame_angles(
    obs: &Observables,
    spin: f64,
    eps_frame: f64,
    phi_fallback: f64,
) -> Result<FrameAngles> {
    let transverse = obs.splus.norm();
    let spin_norm = obs.sz.hypot(transverse).min(spin);
    if spin_norm <= DEFAULT_FRAME_EPS * spin {
        return Err(Error::VanishingMeanSpin { norm: spin_norm });
    }
    let sin_theta = (transverse / spin_norm).min(1.0);
    let cos_theta = (obs.sz / spin_norm).clamp(-1.0, 1.0);

    let degenerate = transverse < eps_frame;
    let (cos_phi, sin_phi) = if degenerate {
        (phi_fallback.cos(), phi_fallback.sin())
    } else {
        (obs.splus.re / transverse, obs.splus.im / transverse)
    };

    Ok(FrameAngles {
        theta: sin_theta.atan2(cos_theta),
        phi: sin_phi.atan2(cos_phi),
        cos_theta,
        sin_theta,
        cos_phi,
        sin_phi,
        spin_norm,
        degenerate,
    })
}

/// Coefficients of the transverse variance
/// `(Delta S_psi)^2 = C/2 + (A/2) cos 2psi + (B/2) sin 2psi`.
pub fn variance_coeffs(obs: &Observables, frame: &FrameAngles, spin: f64) -> VarianceCoeffs {
    let e1 = Complex64::new(frame.cos_phi, -frame.sin_phi);
    let e2 = e1 * e1;
    let rot2 = obs.splus2 * e2;
    let rotz = obs.splus_z * e1;

    let (st, ct) = (frame.sin_theta, frame.cos_theta);
    let casimir = spin * (spin + 1.0);
    let sin_2theta = 2.0 * st * ct;

    let a = 0.5 * (st * st * (casimir - 3.0 * obs.sz2) - (1.0 + ct * ct) * rot2.re + sin_2theta * rotz.re);
    let b = -ct * rot2.im + st * rotz.im;
    let c = casimir - obs.sz2 - rot2.re - a;
    VarianceCoeffs { a, b, c }
}

/// `V_± = (C ± sqrt(A^2 + B^2)) / 2`, returned as `(V_+, V_-)`.
pub fn variances(coeffs: &VarianceCoeffs, spin: f64) -> Result<(f64, f64)> {
    let r = coeffs.a.hypot(coeffs.b);
    let v_plus = 0.5 * (coeffs.c + r);
    let mut v_minus = 0.5 * (coeffs.c - r);
    if v_minus < 0.0 {
        if v_minus < -V_MINUS_FLOOR * spin {
            return Err(Error::NegativeVariance { v_minus });
        }
        v_minus = 0.0;
    }
    Ok((v_plus, v_minus))
}

/// Squeezing metrics from a precomputed set of observables.
pub fn metrics_from_observables(
    obs: &Observables,
    spin: f64,
    phi_fallback: f64,
) -> Result<SqueezingMetrics> {
    let frame = frame_angles(obs, spin, DEFAULT_FRAME_EPS * spin, phi_fallback)?;
    let coeffs = variance_coeffs(obs, &frame, spin);
    let (v_plus, v_minus) = variances(&coeffs, spin)?;
    let norm = frame.spin_norm;
    Ok(SqueezingMetrics {
        v_plus,
        v_minus,
        xi2: 2.0 * v_minus / spin,
        zeta2: 2.0 * v_minus / norm,
        zeta_s2: 2.0 * spin * v_minus / (norm * norm),
        spin_norm: norm,
        tau: obs.tau,
    })
}

/// Exact squeezing metrics at scaled time `tau`.
///
/// At `tau = 0` the state is the initial coherent state, whose transverse
/// noise is isotropic at `S/2`; that point is returned exactly.
pub fn squeezing_metrics(params: &ModelParams, init: &InitialState, tau: f64) -> Result<SqueezingMetrics> {
    let spin = params.spin;
    if tau == 0.0 {
        return Ok(SqueezingMetrics {
            v_plus: 0.5 * spin,
            v_minus: 0.5 * spin,
            xi2: 1.0,
            zeta2: 1.0,
            zeta_s2: 1.0,
            spin_norm: spin,
            tau,
        });
    }
    let obs = full_observables(params, init, tau);
    metrics_from_observables(&obs, spin, init.phi0)
}

/// Exact `xi^2(tau)`.
pub fn xi2(params: &ModelParams, init: &InitialState, tau: f64) -> Result<f64> {
    squeezing_metrics(params, init, tau).map(|m| m.xi2)
}
