//! Brute-force ground truth for small spins.
//!
//! Everything here works on the full `(2S+1) x (2S+1)` density matrix in the
//! Dicke basis and shares no code path with the closed forms beyond the
//! initial coherent-state amplitudes. Rows and columns are ordered by
//! descending `m`: index `i` is `m = S - i`.

use std::io::{self, Read, Write};

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::Observables;
use crate::error::{Error, Result};
use crate::optimize::golden_section;
use crate::spin_model::{css_amplitudes_capped, InitialState, ModelParams, DEFAULT_DENSE_CAP};

pub mod equivalence;

/// Largest `S^2 h` the fixed-step integrator accepts.
pub const MAX_SCALED_STEP: f64 = 0.01;

/// Default number of grid angles in a variance scan.
pub const DEFAULT_SCAN_ANGLES: usize = 720;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub spin: f64,
    pub tau: f64,
    pub rho: DMatrix<Complex64>,
}

/// Matrix elements `X_m = sqrt((S+m)(S-m+1))` of the raising operator,
/// `S_+ |S,m-1> = X_m |S,m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTable {
    pub spin: f64,
    /// Indexed by `m = -S+1 ..= S` in ascending order.
    pub x: Vec<f64>,
}

impl LadderTable {
    pub fn new(spin: f64) -> Self {
        let n = (2.0 * spin).round() as usize;
        let x = (1..=n)
            .map(|k| {
                let m = -spin + k as f64;
                ((spin + m) * (spin - m + 1.0)).sqrt()
            })
            .collect();
        LadderTable { spin, x }
    }

    /// `X_m`, zero outside `-S+1 ..= S`.
    pub fn get(&self, m: f64) -> f64 {
        let k = m + self.spin - 1.0;
        if k < 0.0 || k.fract() != 0.0 {
            return 0.0;
        }
        self.x.get(k as usize).copied().unwrap_or(0.0)
    }
}

fn m_of(spin: f64, i: usize) -> f64 {
    spin - i as f64
}

fn dim_of(spin: f64) -> usize {
    (2.0 * spin).round() as usize + 1
}

fn initial_state(params: &ModelParams, init: &InitialState) -> Result<DenseState> {
    params.validate()?;
    let amps = css_amplitudes_capped(params.spin, init, DEFAULT_DENSE_CAP)?;
    let n = amps.dim();
    let rho = DMatrix::from_fn(n, n, |i, j| amps.c[i] * amps.c[j].conj());
    Ok(DenseState {
        spin: params.spin,
        tau: 0.0,
        rho,
    })
}

/// Generator of the element-wise master equation,
/// `d rho_mn / d tau = [i(n^2 - m^2) - gamma (n - m)^2] rho_mn`.
fn rate(m: f64, n: f64, gamma: f64) -> Complex64 {
    let d = n - m;
    Complex64::new(-gamma * d * d, n * n - m * m)
}

/// Exact propagation: `rho_mn(tau) = rho_mn(0) e^{-i(m^2-n^2) tau} e^{-(m-n)^2 gamma tau}`.
pub fn evolve_closed(params: &ModelParams, init: &InitialState, tau: f64) -> Result<DenseState> {
    Ok(initial_state(params, init)?.evolved(params.gamma, tau))
}

impl DenseState {
    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// Applies the exact element-wise propagator for a further `dtau`.
    pub fn evolved(&self, gamma: f64, dtau: f64) -> DenseState {
        let spin = self.spin;
        let rho = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            let z = rate(m_of(spin, i), m_of(spin, j), gamma) * dtau;
            self.rho[(i, j)] * z.exp()
        });
        DenseState {
            spin,
            tau: self.tau + dtau,
            rho,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest `|rho - rho^dagger|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part; intended for small spins.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().min()
    }

    /// Largest element-wise deviation from another state.
    pub fn max_abs_diff(&self, other: &DenseState) -> f64 {
        self.rho
            .iter()
            .zip(other.rho.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Text dump: a header line `spin tau dim`, then one line per row with
    /// `re im` pairs in 17 significant digits.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        let n = self.dim();
        writeln!(w, "{} {} {}", self.spin, self.tau, n)?;
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = self.rho[(i, j)];
                    format!("{:.16e} {:.16e}", z.re, z.im)
                })
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    /// Binary dump: `spin`, `tau` as f64, `dim` as u64, then row-major
    /// `(re, im)` f64 pairs, all little-endian.
    pub fn write_binary<W: Write>(&self, mut w: W) -> io::Result<()> {
        let n = self.dim();
        w.write_all(&self.spin.to_le_bytes())?;
        w.write_all(&self.tau.to_le_bytes())?;
        w.write_all(&(n as u64).to_le_bytes())?;
        for i in 0..n {
            for j in 0..n {
                let z = self.rho[(i, j)];
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> io::Result<DenseState> {
        let mut buf = [0u8; 8];
        let mut next = |r: &mut R| -> io::Result<[u8; 8]> {
            r.read_exact(&mut buf)?;
            Ok(buf)
        };
        let spin = f64::from_le_bytes(next(&mut r)?);
        let tau = f64::from_le_bytes(next(&mut r)?);
        let n = u64::from_le_bytes(next(&mut r)?) as usize;
        if n != dim_of(spin) {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "dimension does not match spin"));
        }
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            let re = f64::from_le_bytes(next(&mut r)?);
            let im = f64::from_le_bytes(next(&mut r)?);
            data.push(Complex64::new(re, im));
        }
        Ok(DenseState {
            spin,
            tau,
            rho: DMatrix::from_row_slice(n, n, &data),
        })
    }
}

/// Step selection for [`evolve_ode`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum StepControl {
    /// Largest step with `S^2 h <= 0.01`, tightened when dephasing dominates.
    #[default]
    Auto,
    /// Requested step; shortened so an integer number of steps lands on `tau`.
    Fixed(f64),
}

/// Integrates the element-wise master equation with classical fixed-step RK4.
pub fn evolve_ode(
    params: &ModelParams,
    init: &InitialState,
    tau: f64,
    control: StepControl,
) -> Result<DenseState> {
    let start = initial_state(params, init)?;
    let spin = params.spin;
    let s2 = spin * spin;
    let h_max = MAX_SCALED_STEP / s2;
    let h_req = match control {
        StepControl::Auto => MAX_SCALED_STEP / (s2 * (4.0 * params.gamma).max(1.0)),
        StepControl::Fixed(h) => {
            if !(h > 0.0) || h > h_max {
                return Err(Error::StepTooLarge { step: h, max: h_max });
            }
            h
        }
    };
    if !(tau >= 0.0) {
        return Err(Error::NonFiniteParameter { field: "tau", value: tau });
    }
    let steps = (tau / h_req).ceil() as usize;
    if steps == 0 {
        return Ok(start);
    }
    let h = tau / steps as f64;
    let gamma = params.gamma;
    let n = start.dim();

    let mut rho = start.rho;
    rho.as_mut_slice()
        .par_iter_mut()
        .enumerate()
        .for_each(|(idx, y)| {
            // column-major storage
            let (i, j) = (idx % n, idx / n);
            // the equation is linear with constant coefficient, so one RK4
            // step is multiplication by 1 + z + z^2/2 + z^3/6 + z^4/24
            let z = rate(m_of(spin, i), m_of(spin, j), gamma) * h;
            let growth = Complex64::new(1.0, 0.0) + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
            for _ in 0..steps {
                *y *= growth;
            }
        });

    Ok(DenseState { spin, tau, rho })
}

/// Dense spin operators in the descending-`m` Dicke basis.
pub struct SpinOperators {
    pub sz: DMatrix<Complex64>,
    pub splus: DMatrix<Complex64>,
}

impl SpinOperators {
    pub fn new(spin: f64) -> Self {
        let n = dim_of(spin);
        let ladder = LadderTable::new(spin);
        let sz = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(m_of(spin, i), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        // <m+1| S_+ |m> = X_{m+1}; column i+1 holds m_i - 1
        let splus = DMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                Complex64::new(ladder.get(m_of(spin, i)), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        SpinOperators { sz, splus }
    }

    pub fn sx(&self) -> DMatrix<Complex64> {
        (&self.splus + self.splus.adjoint()) * Complex64::new(0.5, 0.0)
    }

    pub fn sy(&self) -> DMatrix<Complex64> {
        (&self.splus - self.splus.adjoint()) * Complex64::new(0.0, -0.5)
    }
}

/// `Tr(rho O) = sum_ij rho_ij O_ji`.
pub fn expectation(rho: &DMatrix<Complex64>, op: &DMatrix<Complex64>) -> Complex64 {
    rho.iter()
        .zip(op.transpose().iter())
        .map(|(r, o)| r * o)
        .sum()
}

/// The five observables by direct trace contraction.
pub fn contract_observables(state: &DenseState) -> Observables {
    let ops = SpinOperators::new(state.spin);
    let n = state.dim();
    let two_sz_plus_one = &ops.sz * Complex64::new(2.0, 0.0) + DMatrix::<Complex64>::identity(n, n);
    let splus2 = &ops.splus * &ops.splus;
    let splus_z = &ops.splus * two_sz_plus_one;
    let sz2 = &ops.sz * &ops.sz;
    Observables {
        sz: expectation(&state.rho, &ops.sz).re,
        splus: expectation(&state.rho, &ops.splus),
        sz2: expectation(&state.rho, &sz2).re,
        splus2: expectation(&state.rho, &splus2),
        splus_z: expectation(&state.rho, &splus_z),
        tau: state.tau,
    }
}

/// First and symmetrised second moments of `(S_x, S_y, S_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments {
    pub mean: Vector3<f64>,
    /// `Re <(S_a S_b + S_b S_a)/2>`
    pub second: nalgebra::Matrix3<f64>,
}

pub fn spin_moments(state: &DenseState) -> SpinMoments {
    let ops = SpinOperators::new(state.spin);
    let comps = [ops.sx(), ops.sy(), ops.sz.clone()];
    let mean = Vector3::from_fn(|a, _| expectation(&state.rho, &comps[a]).re);
    let mut second = nalgebra::Matrix3::zeros();
    for a in 0..3 {
        for b in a..3 {
            let prod = &comps[a] * &comps[b];
            let v = expectation(&state.rho, &prod).re;
            second[(a, b)] = v;
            second[(b, a)] = v;
        }
    }
    // Re<S_a S_b> is already the symmetrised product for Hermitian S_a, S_b
    SpinMoments { mean, second }
}

/// Transverse frame `(n1, n2)` with `n1 x n2 = <S>/|<S>|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseFrame {
    pub n1: Vector3<f64>,
    pub n2: Vector3<f64>,
    pub n3: Vector3<f64>,
}

impl TransverseFrame {
    /// `n1 = (-sin phi, cos phi, 0)`, `n2 = (-cos theta cos phi, -cos theta sin phi, sin theta)`.
    pub fn from_mean(mean: &Vector3<f64>, spin: f64) -> Result<TransverseFrame> {
        let norm = mean.norm();
        if norm <= 1e-12 * spin {
            return Err(Error::VanishingMeanSpin { norm });
        }
        let n3 = mean / norm;
        let transverse = mean.x.hypot(mean.y);
        let (cp, sp) = if transverse < 1e-12 * spin {
            (1.0, 0.0)
        } else {
            (mean.x / transverse, mean.y / transverse)
        };
        let (ct, st) = (mean.z / norm, transverse / norm);
        Ok(TransverseFrame {
            n1: Vector3::new(-sp, cp, 0.0),
            n2: Vector3::new(-ct * cp, -ct * sp, st),
            n3,
        })
    }

    pub fn direction(&self, psi: f64) -> Vector3<f64> {
        self.n1 * psi.cos() + self.n2 * psi.sin()
    }
}

/// `(Delta S_psi)^2` as a function of the in-plane angle.
pub struct VarianceProfile {
    pub moments: SpinMoments,
    pub frame: TransverseFrame,
}

impl VarianceProfile {
    pub fn new(state: &DenseState) -> Result<Self> {
        let moments = spin_moments(state);
        let frame = TransverseFrame::from_mean(&moments.mean, state.spin)?;
        Ok(VarianceProfile { moments, frame })
    }

    pub fn variance(&self, psi: f64) -> f64 {
        let n = self.frame.direction(psi);
        let mean = n.dot(&self.moments.mean);
        n.dot(&(self.moments.second * n)) - mean * mean
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceScan {
    pub v_minus: f64,
    pub v_plus: f64,
    pub psi_min: f64,
    pub psi_max: f64,
}

/// Minimum and maximum of `(Delta S_psi)^2` over `psi`: a uniform grid on
/// `[0, pi)` followed by golden-section refinement of both extrema.
pub fn variance_scan(state: &DenseState, n_angles: usize) -> Result<VarianceScan> {
    let profile = VarianceProfile::new(state)?;
    let n_angles = n_angles.max(3);
    let step = std::f64::consts::PI / n_angles as f64;
    let values: Vec<f64> = (0..n_angles)
        .map(|k| profile.variance(k as f64 * step))
        .collect();

    let argmin = (0..n_angles)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    let argmax = (0..n_angles)
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);

    let refine = |k: usize, sign: f64| {
        let centre = k as f64 * step;
        let g = golden_section(|psi| sign * profile.variance(psi), centre - step, centre + step, 1e-12, 500);
        (g.x, sign * g.fx)
    };
    let (psi_min, v_minus) = refine(argmin, 1.0);
    let (psi_max, v_plus) = refine(argmax, -1.0);
    Ok(VarianceScan {
        v_minus: v_minus.min(values[argmin]),
        v_plus: v_plus.max(values[argmax]),
        psi_min: psi_min.rem_euclid(std::f64::consts::PI),
        psi_max: psi_max.rem_euclid(std::f64::consts::PI),
    })
}

/// Least-squares fit `v(psi) = c0 + ac cos 2psi + bs sin 2psi` on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicFit {
    pub c0: f64,
    pub ac: f64,
    pub bs: f64,
    pub max_residual: f64,
}

pub fn harmonic_fit(state: &DenseState, n_angles: usize) -> Result<HarmonicFit> {
    let profile = VarianceProfile::new(state)?;
    let n_angles = n_angles.max(3);
    let step = std::f64::consts::PI / n_angles as f64;
    let samples: Vec<(f64, f64)> = (0..n_angles)
        .map(|k| {
            let psi = k as f64 * step;
            (psi, profile.variance(psi))
        })
        .collect();
    // on a uniform grid over a full period the normal equations are diagonal
    let inv = 1.0 / n_angles as f64;
    let c0 = samples.iter().map(|(_, v)| v).sum::<f64>() * inv;
    let ac = 2.0 * inv * samples.iter().map(|(p, v)| v * (2.0 * p).cos()).sum::<f64>();
    let bs = 2.0 * inv * samples.iter().map(|(p, v)| v * (2.0 * p).sin()).sum::<f64>();
    let max_residual = samples
        .iter()
        .map(|(p, v)| (v - (c0 + ac * (2.0 * p).cos() + bs * (2.0 * p).sin())).abs())
        .fold(0.0, f64::max);
    Ok(HarmonicFit {
        c0,
        ac,
        bs,
        max_residual,
    })
}
