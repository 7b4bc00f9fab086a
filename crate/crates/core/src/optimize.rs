//! Minimization of the exact `xi^2(tau)`, parameter sweeps and power-law fits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{tau_min_moderate, tau_min_weak, xi2_min_moderate, xi2_min_weak};
use crate::error::{Error, Result};
use crate::spin_model::{validate_params, InitialState, ModelParams};
use crate::squeezing::{squeezing_metrics, SqueezingMetrics};

/// Bracket growth factor of the geometric search.
pub const GROWTH: f64 = 1.5;
/// Relative tolerance on `tau_min`.
pub const TAU_REL_TOL: f64 = 1e-8;
pub const MAX_EVALUATIONS: usize = 100_000;
/// Smallest spin accepted by [`scaling_sweep`].
pub const MIN_SCALING_SPIN: f64 = 50.0;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub fx: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `tol` or after `max_evals` evaluations.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64, max_evals: usize) -> GoldenResult {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    while b - a > tol && evals < max_evals {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    GoldenResult {
        x,
        fx,
        evals,
        converged: b - a <= tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizationResult {
    pub tau_min: f64,
    pub xi2_min: f64,
    pub evaluations: usize,
    pub bracket: (f64, f64),
    pub converged: bool,
}

struct Objective<'a> {
    params: &'a ModelParams,
    init: &'a InitialState,
    evals: usize,
}

impl Objective<'_> {
    fn eval(&mut self, tau: f64) -> Result<f64> {
        self.evals += 1;
        if tau <= 0.0 {
            return Ok(1.0);
        }
        match squeezing_metrics(self.params, self.init, tau) {
            Ok(m) => Ok(m.xi2),
            Err(Error::VanishingMeanSpin { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }
}

fn seed_time(params: &ModelParams, init: &InitialState) -> Result<f64> {
    let weak = tau_min_weak(params.spin, init)?;
    let guess = if params.gamma > 0.0 {
        weak.min(tau_min_moderate(params.spin, init, params.gamma)?)
    } else {
        weak
    };
    Ok(0.1 * guess)
}

/// Upper end of the forward search; beyond a full period the first
/// minimum has certainly been passed.
const TAU_CEILING: f64 = 2.0 * std::f64::consts::PI;
const MAX_MARCH_STEPS: usize = 4000;

/// Locates `(lo, mid, hi)` with `f(mid) < f(lo)` and `f(mid) <= f(hi)` by
/// geometric steps from `tau0`.
fn bracket_first_minimum(obj: &mut Objective, tau0: f64) -> Result<(f64, f64, f64)> {
    let f0 = obj.eval(tau0)?;
    let t1 = tau0 * GROWTH;
    let f1 = obj.eval(t1)?;
    if f1 < f0 {
        let (mut a, mut b, mut fb) = (tau0, t1, f1);
        for _ in 0..MAX_MARCH_STEPS {
            let c = b * GROWTH;
            if c > TAU_CEILING {
                break;
            }
            let fc = obj.eval(c)?;
            if fc >= fb {
                return Ok((a, b, c));
            }
            a = b;
            b = c;
            fb = fc;
        }
        Err(Error::NoMinimumFound)
    } else {
        let (mut b, mut c, mut fb) = (tau0, t1, f0);
        for _ in 0..MAX_MARCH_STEPS {
            let a = b / GROWTH;
            let fa = obj.eval(a)?;
            if fa > fb {
                return Ok((a, b, c));
            }
            c = b;
            b = a;
            fb = fa;
            if b < tau0 * 1e-12 {
                break;
            }
        }
        Err(Error::NoMinimumFound)
    }
}

fn bracket_from_hint(obj: &mut Objective, lo: f64, hi: f64) -> Result<Option<(f64, f64, f64)>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidGrid);
    }
    let n = 17;
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    let grid: Vec<f64> = (0..n).map(|k| lo * ratio.powi(k as i32)).collect();
    let mut values = Vec::with_capacity(n);
    for &t in &grid {
        values.push(obj.eval(t)?);
    }
    let k = (0..n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    if k == 0 || k == n - 1 {
        return Ok(None);
    }
    Ok(Some((grid[k - 1], grid[k], grid[k + 1])))
}

/// Finds the first local minimum of the exact `xi^2(tau)`.
///
/// Without a hint the search starts at a tenth of the analytic optimum and
/// walks geometrically until the minimum is bracketed. A hint whose
/// interior holds a lower value than its ends is used directly.
pub fn minimize_xi2(
    params: &ModelParams,
    init: &InitialState,
    bracket_hint: Option<(f64, f64)>,
) -> Result<MinimizationResult> {
    validate_params(params, init)?;
    if init.theta0.sin().abs() < 1e-15 {
        return Err(Error::PoleState);
    }
    let mut obj = Objective {
        params,
        init,
        evals: 0,
    };
    let hinted = match bracket_hint {
        Some((lo, hi)) => bracket_from_hint(&mut obj, lo, hi)?,
        None => None,
    };
    let (lo, _, hi) = match hinted {
        Some(b) => b,
        None => bracket_first_minimum(&mut obj, seed_time(params, init)?)?,
    };

    let budget = MAX_EVALUATIONS.saturating_sub(obj.evals);
    let mut failure = None;
    let g = golden_section(
        |t| match obj.eval(t) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        TAU_REL_TOL * lo,
        budget,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(MinimizationResult {
        tau_min: g.x,
        xi2_min: g.fx,
        evaluations: obj.evals,
        bracket: (lo, hi),
        converged: g.converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub tau: f64,
    /// `None` where the mean spin vanished and no frame exists.
    pub metrics: Option<SqueezingMetrics>,
}

impl SweepPoint {
    pub fn mean_spin_vanished(&self) -> bool {
        self.metrics.is_none()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.iter().any(|t| !t.is_finite() || *t < 0.0) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Exact metrics on a non-negative, strictly increasing time grid.
pub fn sweep_tau(params: &ModelParams, init: &InitialState, tau_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    validate_params(params, init)?;
    check_grid(tau_grid)?;
    tau_grid
        .par_iter()
        .map(|&tau| match squeezing_metrics(params, init, tau) {
            Ok(m) => Ok(SweepPoint { tau, metrics: Some(m) }),
            Err(Error::VanishingMeanSpin { .. }) => Ok(SweepPoint { tau, metrics: None }),
            Err(e) => Err(e),
        })
        .collect()
}

/// `n` points from `lo` to `hi`, linear or logarithmic.
pub fn time_grid(lo: f64, hi: f64, n: usize, log: bool) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo || (n > 1 && hi == lo) || (log && lo <= 0.0) {
        return Err(Error::InvalidGrid);
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            if k == n - 1 {
                hi
            } else if log {
                lo * (hi / lo).powf(k as f64 / last)
            } else {
                lo + (hi - lo) * k as f64 / last
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaPoint {
    pub theta0: f64,
    pub result: MinimizationResult,
}

/// Per-angle minimization at fixed `S`, `gamma` and `phi0 = 0`.
pub fn sweep_theta0(params: &ModelParams, theta0_grid: &[f64]) -> Result<Vec<ThetaPoint>> {
    if theta0_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &t in theta0_grid {
        if !(t > 0.0 && t < std::f64::consts::PI) {
            return Err(Error::AngleOutOfRange {
                field: "theta0",
                value: t,
                lo: 0.0,
                hi: std::f64::consts::PI,
            });
        }
    }
    theta0_grid
        .par_iter()
        .map(|&theta0| {
            let init = InitialState::new(theta0, 0.0)?;
            minimize_xi2(params, &init, None).map(|result| ThetaPoint { theta0, result })
        })
        .collect()
}

/// Interior grid `theta_k = k pi / (n + 1)`, `k = 1..=n`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| k as f64 * std::f64::consts::PI / (n + 1) as f64)
        .collect()
}

/// `n` log-spaced spins from `lo` to `hi`, rounded to integers.
pub fn log_spaced_spins(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    Ok(time_grid(lo, hi, n, true)?.into_iter().map(f64::round).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

/// Ordinary least squares of `ln y` against `ln x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::FitDegenerate {
            reason: "fewer than three points",
        });
    }
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::NonpositiveData { x, y });
        }
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx <= f64::EPSILON * lx.iter().map(|x| x * x).sum::<f64>() {
        return Err(Error::FitDegenerate {
            reason: "all abscissae equal",
        });
    }
    let exponent = sxy / sxx;
    let log_prefactor = my - exponent * mx;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (log_prefactor + exponent * x);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(PowerLawFit {
        exponent,
        log_prefactor,
        r_squared,
        points: points.to_vec(),
    })
}

/// Minimizes at each spin and fits `xi^2_min ~ S^p`.
pub fn scaling_sweep(spins: &[f64], init: &InitialState, gamma: f64) -> Result<PowerLawFit> {
    if spins.len() < 3 {
        return Err(Error::FitDegenerate {
            reason: "fewer than three spins",
        });
    }
    if let Some(&spin) = spins.iter().find(|&&s| !(s >= MIN_SCALING_SPIN)) {
        return Err(Error::SpinTooSmall {
            spin,
            min: MIN_SCALING_SPIN,
        });
    }
    let points = spins
        .par_iter()
        .map(|&spin| {
            let params = ModelParams::new(spin, gamma)?;
            minimize_xi2(&params, init, None).map(|r| (spin, r.xi2_min))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_power_law(&points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaRatioPoint {
    /// `ln(gamma) / ln(S)`
    pub ratio: f64,
    pub gamma: f64,
    pub exact: MinimizationResult,
    pub xi2_min_weak: f64,
    pub xi2_min_moderate: f64,
}

/// Exact and analytic optima at `gamma = S^ratio` for each ratio.
pub fn gamma_ratio_sweep(spin: f64, init: &InitialState, ratios: &[f64]) -> Result<Vec<GammaRatioPoint>> {
    if ratios.is_empty() {
        return Err(Error::EmptyGrid);
    }
    ratios
        .par_iter()
        .map(|&ratio| {
            let gamma = spin.powf(ratio);
            let params = ModelParams::new(spin, gamma)?;
            Ok(GammaRatioPoint {
                ratio,
                gamma,
                exact: minimize_xi2(&params, init, None)?,
                xi2_min_weak: xi2_min_weak(spin, init)?,
                xi2_min_moderate: xi2_min_moderate(spin, init, gamma)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squeezing::xi2;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    fn run(spin: f64, gamma: f64, theta0: f64) -> MinimizationResult {
        let params = ModelParams::new(spin, gamma).unwrap();
        minimize_xi2(&params, &InitialState::new(theta0, 0.0).unwrap(), None).unwrap()
    }

    #[test]
    fn golden_section_parabola() {
        let g = golden_section(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10, 500);
        assert!((g.x - 0.3).abs() < 1e-9);
        assert!(g.fx < 1e-18);
        assert!(g.converged);
        let g = golden_section(|x| (x - 0.3).abs(), 1.0, 0.0, 1e-12, 10);
        assert!(!g.converged);
        assert_eq!(g.evals, 10);
    }

    #[test]
    fn reference_anchors() {
        for &(gamma, tau, value) in &[(0.0, 7.536e-3, 6.56e-3), (1.0, 1.264e-2, 9.278e-2), (10.0, 1.632e-2, 0.4504)] {
            let r = run(1e3, gamma, FRAC_PI_2);
            assert!(r.converged);
            assert!(rel(r.tau_min, tau) < 5e-3, "gamma {gamma}: tau {}", r.tau_min);
            assert!(rel(r.xi2_min, value) < 5e-3, "gamma {gamma}: xi2 {}", r.xi2_min);
        }
    }

    #[test]
    fn bracket_is_valid() {
        for &(spin, gamma, theta0) in &[(1e3, 0.0, FRAC_PI_2), (50.0, 3.0, 1.0), (1e5, 0.2, 0.3), (2.5, 0.1, 2.0)] {
            let params = ModelParams::new(spin, gamma).unwrap();
            let init = InitialState::new(theta0, 0.0).unwrap();
            let r = minimize_xi2(&params, &init, None).unwrap();
            let (lo, hi) = r.bracket;
            assert!(lo < r.tau_min && r.tau_min < hi);
            assert!(r.xi2_min <= xi2(&params, &init, lo).unwrap());
            assert!(r.xi2_min <= xi2(&params, &init, hi).unwrap());
        }
    }

    #[test]
    fn hint_matches_default_search() {
        let params = ModelParams::new(1e3, 1.0).unwrap();
        let init = InitialState::equatorial();
        let a = minimize_xi2(&params, &init, None).unwrap();
        let b = minimize_xi2(&params, &init, Some((1e-3, 0.1))).unwrap();
        assert!(rel(a.tau_min, b.tau_min) < 1e-6);
        assert!(rel(a.xi2_min, b.xi2_min) < 1e-12);
        // a hint that misses the minimum falls back to the geometric search
        let c = minimize_xi2(&params, &init, Some((0.5, 1.0))).unwrap();
        assert!(rel(a.xi2_min, c.xi2_min) < 1e-12);
        assert_eq!(minimize_xi2(&params, &init, Some((0.1, 0.01))), Err(Error::InvalidGrid));
    }

    #[test]
    fn pole_has_no_minimum() {
        let params = ModelParams::new(10.0, 0.0).unwrap();
        for theta0 in [0.0, PI] {
            let init = InitialState::new(theta0, 0.0).unwrap();
            assert_eq!(minimize_xi2(&params, &init, None), Err(Error::PoleState));
        }
    }

    #[test]
    fn phi0_invariance() {
        let params = ModelParams::new(300.0, 0.4).unwrap();
        let base = minimize_xi2(&params, &InitialState::new(1.1, 0.0).unwrap(), None).unwrap();
        for phi0 in [1.0, PI] {
            let r = minimize_xi2(&params, &InitialState::new(1.1, phi0).unwrap(), None).unwrap();
            assert!(rel(r.xi2_min, base.xi2_min) < 1e-12);
            assert!(rel(r.tau_min, base.tau_min) < 1e-12);
        }
    }

    #[test]
    fn degradation_with_gamma() {
        for &theta0 in &[FRAC_PI_2, 1.0] {
            let mut last = 0.0;
            for gamma in [0.0, 0.1, 1.0, 10.0] {
                let v = run(1e3, gamma, theta0).xi2_min;
                assert!(v >= last, "theta0 {theta0} gamma {gamma}");
                last = v;
            }
        }
    }

    #[test]
    fn analytic_agreement() {
        let eq = InitialState::equatorial();
        for spin in [1e3, 1e4, 1e5] {
            assert!(rel(run(spin, 0.0, FRAC_PI_2).xi2_min, xi2_min_weak(spin, &eq).unwrap()) < 0.05);
        }
        let m = run(1e3, 1.0, FRAC_PI_2).xi2_min;
        assert!(rel(m, xi2_min_moderate(1e3, &eq, 1.0).unwrap()) < 0.10);
        let m = run(1e3, 10.0, FRAC_PI_2).xi2_min;
        let ratio = m / xi2_min_moderate(1e3, &eq, 10.0).unwrap();
        assert!(ratio > 1.0 / 1.5 && ratio < 1.5, "{ratio}");
    }

    #[test]
    fn small_spins_minimize() {
        // spin 1 squeezes only a little but still has an interior minimum
        let r = run(1.0, 0.0, FRAC_PI_2);
        assert!(r.xi2_min < 1.0);
        // spin 1/2 feels no twisting: xi^2 = 1 at all times
        let params = ModelParams::new(0.5, 0.0).unwrap();
        assert_eq!(minimize_xi2(&params, &InitialState::equatorial(), None), Err(Error::NoMinimumFound));
    }

    #[test]
    fn sweep_single_zero_point() {
        let params = ModelParams::new(1e3, 0.0).unwrap();
        let rows = sweep_tau(&params, &InitialState::equatorial(), &[0.0]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].metrics.unwrap().xi2, 1.0);
    }

    #[test]
    fn sweep_errors() {
        let params = ModelParams::new(10.0, 0.0).unwrap();
        let init = InitialState::equatorial();
        assert_eq!(sweep_tau(&params, &init, &[]), Err(Error::EmptyGrid));
        assert_eq!(sweep_tau(&params, &init, &[0.1, 0.1]), Err(Error::InvalidGrid));
        assert_eq!(sweep_tau(&params, &init, &[-0.1, 0.1]), Err(Error::InvalidGrid));
        assert_eq!(sweep_tau(&params, &init, &[0.2, 0.1]), Err(Error::InvalidGrid));
    }

    #[test]
    fn sweep_grid_minimum_close_to_minimizer() {
        for gamma in [0.0, 1.0, 10.0] {
            let params = ModelParams::new(1e3, gamma).unwrap();
            let init = InitialState::equatorial();
            let grid = time_grid(1e-4, 0.1, 200, true).unwrap();
            let rows = sweep_tau(&params, &init, &grid).unwrap();
            assert!(rows.iter().zip(&grid).all(|(r, t)| r.tau == *t));
            let best = rows
                .iter()
                .filter_map(|r| r.metrics.map(|m| m.xi2))
                .fold(f64::INFINITY, f64::min);
            let exact = minimize_xi2(&params, &init, None).unwrap().xi2_min;
            assert!(best >= exact);
            assert!(rel(best, exact) < 0.02, "gamma {gamma}: {best} vs {exact}");
        }
    }

    #[test]
    fn sweep_flags_vanished_mean_spin() {
        // spin 1 on the equator: <S_+> ~ cos(tau), zero at tau = pi/2
        let params = ModelParams::new(1.0, 0.0).unwrap();
        let rows = sweep_tau(&params, &InitialState::equatorial(), &[0.1, FRAC_PI_2, 2.0]).unwrap();
        assert!(rows[0].metrics.is_some());
        assert!(rows[1].mean_spin_vanished());
        assert!(rows[2].metrics.is_some());
    }

    #[test]
    fn time_grids() {
        assert_eq!(time_grid(0.0, 1.0, 3, false).unwrap(), vec![0.0, 0.5, 1.0]);
        let g = time_grid(1e-4, 1e-1, 4, true).unwrap();
        assert!(rel(g[1], 1e-3) < 1e-12 && g[3] == 0.1);
        assert_eq!(time_grid(0.0, 1.0, 3, true), Err(Error::InvalidGrid));
        assert_eq!(time_grid(0.0, 1.0, 0, false), Err(Error::EmptyGrid));
        assert_eq!(time_grid(0.3, 0.3, 1, false).unwrap(), vec![0.3]);
    }

    #[test]
    fn theta_sweep_symmetry() {
        let params = ModelParams::new(1e3, 0.5).unwrap();
        let grid = theta_grid(9);
        let rows = sweep_theta0(&params, &grid).unwrap();
        for k in 0..grid.len() {
            let a = rows[k].result.xi2_min;
            let b = rows[grid.len() - 1 - k].result.xi2_min;
            assert!(rel(a, b) < 1e-6);
        }
        assert_eq!(sweep_theta0(&params, &[]), Err(Error::EmptyGrid));
        assert!(matches!(sweep_theta0(&params, &[0.0, 1.0]), Err(Error::AngleOutOfRange { .. })));
    }

    #[test]
    fn theta_sweep_two_points() {
        let params = ModelParams::new(100.0, 0.0).unwrap();
        let rows = sweep_theta0(&params, &[1.0, 2.0]).unwrap();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn power_law_fits() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, 2.0 * (k as f64).powi(3))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-12);
        assert!((fit.log_prefactor - 2f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);

        let fit = fit_power_law(&[(1.0, 4.0), (2.0, 4.0), (3.0, 4.0)]).unwrap();
        assert!(fit.exponent.abs() < 1e-15);
        assert_eq!(fit.r_squared, 1.0);

        let noisy = fit_power_law(&[(1.0, 1.0), (2.0, 3.0), (3.0, 2.0), (4.0, 5.0)]).unwrap();
        assert!(noisy.r_squared > 0.0 && noisy.r_squared < 1.0);

        assert!(matches!(fit_power_law(&pts[..2]), Err(Error::FitDegenerate { .. })));
        assert!(matches!(fit_power_law(&[(2.0, 1.0), (2.0, 3.0), (2.0, 2.0)]), Err(Error::FitDegenerate { .. })));
        assert_eq!(fit_power_law(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]), Err(Error::NonpositiveData { x: 2.0, y: 0.0 }));
    }

    #[test]
    fn synthetic_power_law_exact() {
        let pts: Vec<(f64, f64)> = log_spaced_spins(1e3, 1e6, 8)
            .unwrap()
            .into_iter()
            .map(|s| (s, 0.7 * s.powf(-2.0 / 3.0)))
            .collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent + 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_sweep_preconditions() {
        let init = InitialState::equatorial();
        assert!(matches!(scaling_sweep(&[100.0, 200.0], &init, 0.0), Err(Error::FitDegenerate { .. })));
        assert!(matches!(scaling_sweep(&[10.0, 200.0, 300.0], &init, 0.0), Err(Error::SpinTooSmall { .. })));
        assert!(matches!(scaling_sweep(&[100.0, 100.0, 100.0], &init, 0.0), Err(Error::FitDegenerate { .. })));
    }

    #[test]
    fn gamma_ratio_points() {
        let rows = gamma_ratio_sweep(1e3, &InitialState::equatorial(), &[-1.0, 0.0]).unwrap();
        assert!(rel(rows[0].gamma, 1e-3) < 1e-12);
        assert_eq!(rows[1].gamma, 1.0);
        assert!(rows[0].exact.xi2_min < rows[1].exact.xi2_min);
        assert!(rel(rows[1].xi2_min_moderate, 9.596e-2) < 1e-3);
    }
}
