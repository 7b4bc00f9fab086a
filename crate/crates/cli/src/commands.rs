use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use oat_core::analytics::{self, classify_regime, coherence_time, predict, AnalyticPrediction, FormulaId, Regime};
use oat_core::closed_form::full_observables;
use oat_core::optimize::{gamma_ratio_sweep, log_spaced_spins, scaling_sweep, sweep_tau, sweep_theta0, theta_grid, time_grid};
use oat_core::oracle::equivalence::{run_equivalence, EquivalenceConfig};
use oat_core::oracle::evolve_closed;
use oat_core::{minimize_xi2, InitialState, MinimizationResult, ModelParams};
use serde_json::{json, Value};

use crate::args::{CommonArgs, EvolveArgs, Format, OracleArgs, ScalingArgs, ScalingMode, SweepThetaArgs};
use crate::config::{base, file_for, Base};
use crate::failure::Failure;
use crate::table::{emit_json, emit_table, Cell, Table};

fn model(b: &Base) -> Result<(ModelParams, InitialState), Failure> {
    let params = ModelParams::new(b.spin, b.gamma)?;
    let init = InitialState::new(b.theta0, b.phi0)?;
    Ok((params, init))
}

fn count(name: &str, n: usize) -> Result<usize, Failure> {
    if n == 0 {
        return Err(Failure::config(format!("{name} must be at least 1")));
    }
    Ok(n)
}

pub fn evolve(args: &EvolveArgs) -> Result<(), Failure> {
    let file = file_for(&args.common)?;
    let b = base(&args.common, &file, 1000.0, Format::Csv);
    let (params, init) = model(&b)?;
    let lo = args.tau_min.or(file.tau_min).unwrap_or(1e-4);
    let hi = args.tau_max.or(file.tau_max).unwrap_or(0.1);
    let n = count("tau_points", args.tau_points.or(file.tau_points).unwrap_or(200))?;
    let log = args.log || file.log.unwrap_or(false);
    let grid = time_grid(lo, hi, n, log)?;
    let rows = sweep_tau(&params, &init, &grid)?;

    let mut table = Table::new(vec![
        "tau",
        "xi2",
        "zeta2",
        "zetaS2",
        "V_minus",
        "V_plus",
        "Sz",
        "Re_Splus",
        "Im_Splus",
        "xi2_shorttime",
        "mean_spin_vanished",
    ]);
    for row in &rows {
        let obs = full_observables(&params, &init, row.tau);
        let m = row.metrics;
        table.push(vec![
            Cell::Num(row.tau),
            Cell::opt(m.map(|m| m.xi2)),
            Cell::opt(m.map(|m| m.zeta2)),
            Cell::opt(m.map(|m| m.zeta_s2)),
            Cell::opt(m.map(|m| m.v_minus)),
            Cell::opt(m.map(|m| m.v_plus)),
            Cell::Num(obs.sz),
            Cell::Num(obs.splus.re),
            Cell::Num(obs.splus.im),
            Cell::opt(analytics::xi2_shorttime(b.spin, &init, b.gamma, row.tau).ok()),
            Cell::Flag(row.mean_spin_vanished()),
        ]);
    }

    if let Some(path) = args.dump_state.clone().or_else(|| file.dump_state.clone()) {
        let state = evolve_closed(&params, &init, *grid.last().expect("non-empty grid"))?;
        let f = File::create(&path).map_err(|e| Failure::io(&path, e))?;
        state.write_text(BufWriter::new(f)).map_err(|e| Failure::io(&path, e))?;
    }
    emit_table(&table, b.format, b.out.as_deref())
}

fn relative(analytic: f64, exact: f64) -> f64 {
    analytic / exact - 1.0
}

fn regime_json(r: &Regime) -> Value {
    json!({
        "kind": r.kind.as_str(),
        "lower_exponent": r.lower,
        "upper_exponent": r.upper,
    })
}

fn formula_name(f: FormulaId) -> &'static str {
    match f {
        FormulaId::Weak => "weak",
        FormulaId::Moderate => "moderate",
        FormulaId::Strong => "strong",
    }
}

pub fn minimize(common: &CommonArgs) -> Result<(), Failure> {
    let file = file_for(common)?;
    let b = base(common, &file, 1000.0, Format::Json);
    let (params, init) = model(&b)?;
    let exact = minimize_xi2(&params, &init, None)?;
    let regime = classify_regime(b.spin, &init, b.gamma);
    let weak = (
        analytics::tau_min_weak(b.spin, &init)?,
        analytics::xi2_min_weak(b.spin, &init)?,
    );
    let moderate = if b.gamma > 0.0 {
        Some((
            analytics::tau_min_moderate(b.spin, &init, b.gamma)?,
            analytics::xi2_min_moderate(b.spin, &init, b.gamma)?,
        ))
    } else {
        None
    };

    match b.format {
        Format::Json => {
            let pair = |p: Option<(f64, f64)>| match p {
                Some((t, x)) => json!({
                    "tau_min": t,
                    "xi2_min": x,
                    "tau_rel_deviation": relative(t, exact.tau_min),
                    "xi2_rel_deviation": relative(x, exact.xi2_min),
                }),
                None => Value::Null,
            };
            let record = json!({
                "inputs": {"spin": b.spin, "gamma": b.gamma, "theta0": b.theta0, "phi0": b.phi0},
                "exact": minimization_json(&exact),
                "analytic": {"weak": pair(Some(weak)), "moderate": pair(moderate)},
                "regime": regime_json(&regime),
            });
            emit_json(&record, b.out.as_deref())
        }
        Format::Csv => {
            let mut table = Table::new(vec![
                "spin",
                "gamma",
                "theta0",
                "phi0",
                "tau_min",
                "xi2_min",
                "evaluations",
                "converged",
                "regime",
                "tau_min_weak",
                "xi2_min_weak",
                "tau_min_moderate",
                "xi2_min_moderate",
            ]);
            table.push(vec![
                Cell::Num(b.spin),
                Cell::Num(b.gamma),
                Cell::Num(b.theta0),
                Cell::Num(b.phi0),
                Cell::Num(exact.tau_min),
                Cell::Num(exact.xi2_min),
                Cell::Int(exact.evaluations as u64),
                Cell::Flag(exact.converged),
                Cell::Text(regime.kind.as_str().into()),
                Cell::Num(weak.0),
                Cell::Num(weak.1),
                Cell::opt(moderate.map(|m| m.0)),
                Cell::opt(moderate.map(|m| m.1)),
            ]);
            emit_table(&table, b.format, b.out.as_deref())
        }
    }
}

fn minimization_json(r: &MinimizationResult) -> Value {
    json!({
        "tau_min": r.tau_min,
        "xi2_min": r.xi2_min,
        "evaluations": r.evaluations,
        "bracket": [r.bracket.0, r.bracket.1],
        "converged": r.converged,
    })
}

pub fn sweep_theta(args: &SweepThetaArgs) -> Result<(), Failure> {
    let file = file_for(&args.common)?;
    let b = base(&args.common, &file, 1e5, Format::Csv);
    let n = count("theta_points", args.theta_points.or(file.theta_points).unwrap_or(31))?;
    let gammas = args
        .gammas
        .clone()
        .or_else(|| file.gammas.clone())
        .unwrap_or_else(|| vec![b.gamma]);
    if gammas.is_empty() {
        return Err(Failure::config("gammas must not be empty".into()));
    }
    let grid = theta_grid(n);

    let mut table = Table::new(vec!["theta0", "gamma", "tau_min", "xi2_min", "xi2_min_analytic", "regime"]);
    for &gamma in &gammas {
        let params = ModelParams::new(b.spin, gamma)?;
        for point in sweep_theta0(&params, &grid)? {
            let init = InitialState::new(point.theta0, 0.0)?;
            let prediction = predict(b.spin, &init, gamma)?;
            table.push(vec![
                Cell::Num(point.theta0),
                Cell::Num(gamma),
                Cell::Num(point.result.tau_min),
                Cell::Num(point.result.xi2_min),
                Cell::Num(prediction.xi2_min),
                Cell::Text(prediction.regime.kind.as_str().into()),
            ]);
        }
    }
    emit_table(&table, b.format, b.out.as_deref())
}

/// `sweep.csv` -> `sweep.fit.json`
pub fn footer_path(out: &Path) -> PathBuf {
    out.with_extension("fit.json")
}

fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, Failure> {
    if !(lo.is_finite() && hi.is_finite()) || hi < lo || (n > 1 && hi == lo) {
        return Err(Failure::config(format!("invalid range [{lo}, {hi}]")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / last })
        .collect())
}

pub fn scaling(args: &ScalingArgs) -> Result<(), Failure> {
    let file = file_for(&args.common)?;
    let mode = args.mode.or(file.mode).unwrap_or(ScalingMode::Spin);
    match mode {
        ScalingMode::Spin => scaling_spin(args, &file),
        ScalingMode::GammaRatio => scaling_gamma_ratio(args, &file),
    }
}

fn scaling_spin(args: &ScalingArgs, file: &crate::config::FileConfig) -> Result<(), Failure> {
    let b = base(&args.common, file, 1e3, Format::Csv);
    let init = InitialState::new(b.theta0, b.phi0)?;
    let lo = args.spin_min.or(file.spin_min).unwrap_or(1e3);
    let hi = args.spin_max.or(file.spin_max).unwrap_or(1e6);
    let n = count("spin_points", args.spin_points.or(file.spin_points).unwrap_or(8))?;
    let spins = log_spaced_spins(lo, hi, n)?;
    let fit = scaling_sweep(&spins, &init, b.gamma)?;

    let mut table = Table::new(vec!["S", "xi2_min", "xi2_min_analytic"]);
    for &(spin, xi2) in &fit.points {
        let p: AnalyticPrediction = predict(spin, &init, b.gamma)?;
        table.push(vec![Cell::Num(spin), Cell::Num(xi2), Cell::Num(p.xi2_min)]);
    }
    let summary = json!({
        "exponent": fit.exponent,
        "log_prefactor": fit.log_prefactor,
        "r_squared": fit.r_squared,
        "gamma": b.gamma,
        "theta0": b.theta0,
        "points": fit.points.len(),
    });
    match b.format {
        Format::Json => emit_json(&json!({"rows": table.to_json(), "fit": summary}), b.out.as_deref()),
        Format::Csv => {
            emit_table(&table, b.format, b.out.as_deref())?;
            match &b.out {
                Some(out) => emit_json(&summary, Some(&footer_path(out))),
                None => {
                    eprintln!("{summary}");
                    Ok(())
                }
            }
        }
    }
}

fn scaling_gamma_ratio(args: &ScalingArgs, file: &crate::config::FileConfig) -> Result<(), Failure> {
    let b = base(&args.common, file, 1e5, Format::Csv);
    ModelParams::new(b.spin, 0.0)?;
    let init = InitialState::new(b.theta0, b.phi0)?;
    let lo = args.ratio_min.or(file.ratio_min).unwrap_or(-1.0);
    let hi = args.ratio_max.or(file.ratio_max).unwrap_or(1.0);
    let n = count("ratio_points", args.ratio_points.or(file.ratio_points).unwrap_or(21))?;
    let ratios = linspace(lo, hi, n)?;
    let rows = gamma_ratio_sweep(b.spin, &init, &ratios)?;

    let mut table = Table::new(vec![
        "log_gamma_over_log_S",
        "xi2_min_exact",
        "xi2_min_weak",
        "xi2_min_moderate",
        "gamma",
        "tau_min_exact",
    ]);
    for r in &rows {
        table.push(vec![
            Cell::Num(r.ratio),
            Cell::Num(r.exact.xi2_min),
            Cell::Num(r.xi2_min_weak),
            Cell::Num(r.xi2_min_moderate),
            Cell::Num(r.gamma),
            Cell::Num(r.exact.tau_min),
        ]);
    }
    emit_table(&table, b.format, b.out.as_deref())
}

pub fn regime(common: &CommonArgs) -> Result<(), Failure> {
    let file = file_for(common)?;
    let b = base(common, &file, 1000.0, Format::Json);
    let (_, init) = model(&b)?;
    let r = classify_regime(b.spin, &init, b.gamma);
    let prediction = predict(b.spin, &init, b.gamma).ok();
    let tau_d = coherence_time(b.spin, &init).ok();
    let gamma_lower = b.spin.powf(r.lower);
    let gamma_upper = b.spin.powf(r.upper);
    match b.format {
        Format::Json => {
            let record = json!({
                "inputs": {"spin": b.spin, "gamma": b.gamma, "theta0": b.theta0, "phi0": b.phi0},
                "regime": regime_json(&r),
                "gamma_lower": gamma_lower,
                "gamma_upper": gamma_upper,
                "coherence_time": tau_d,
                "prediction": prediction.map(|p| json!({
                    "tau_min": p.tau_min,
                    "xi2_min": p.xi2_min,
                    "formula": formula_name(p.formula),
                })),
            });
            emit_json(&record, b.out.as_deref())
        }
        Format::Csv => {
            let mut table = Table::new(vec![
                "spin",
                "gamma",
                "theta0",
                "regime",
                "gamma_lower",
                "gamma_upper",
                "coherence_time",
                "tau_min_analytic",
                "xi2_min_analytic",
            ]);
            table.push(vec![
                Cell::Num(b.spin),
                Cell::Num(b.gamma),
                Cell::Num(b.theta0),
                Cell::Text(r.kind.as_str().into()),
                Cell::Num(gamma_lower),
                Cell::Num(gamma_upper),
                Cell::opt(tau_d),
                Cell::opt(prediction.map(|p| p.tau_min)),
                Cell::opt(prediction.map(|p| p.xi2_min)),
            ]);
            emit_table(&table, b.format, b.out.as_deref())
        }
    }
}

pub fn oracle_check(args: &OracleArgs) -> Result<(), Failure> {
    let file = file_for(&args.common)?;
    let b = base(&args.common, &file, 10.0, Format::Json);
    let defaults = EquivalenceConfig::default();
    let config = EquivalenceConfig {
        max_spin: b.spin,
        draws: args.draws.or(file.draws).unwrap_or(defaults.draws),
        seed: b.seed,
        gamma_max: args.common.gamma.or(file.gamma).unwrap_or(defaults.gamma_max),
        tol_dense: args.tol_dense.or(file.tol_dense).unwrap_or(defaults.tol_dense),
        tol_xi2: args.tol_xi2.or(file.tol_xi2).unwrap_or(defaults.tol_xi2),
        tol_ode: args.tol_ode.or(file.tol_ode).unwrap_or(defaults.tol_ode),
        ..defaults
    };
    let report = run_equivalence(&config)?;
    let d = report.max_deviation;
    let checks = [
        ("sz", d.sz, config.tol_dense),
        ("splus", d.splus, config.tol_dense),
        ("sz2", d.sz2, config.tol_dense),
        ("splus2", d.splus2, config.tol_dense),
        ("splus_z", d.splus_z, config.tol_dense),
        ("xi2", d.xi2, config.tol_xi2),
        ("ode", d.ode, config.tol_ode),
    ];
    match b.format {
        Format::Json => {
            let record = json!({
                "config": config,
                "max_deviation": d,
                "skipped_xi2": report.skipped_xi2,
                "violations": report.violations.len(),
                "passed": report.passed,
            });
            emit_json(&record, b.out.as_deref())?;
        }
        Format::Csv => {
            let mut table = Table::new(vec!["check", "max_deviation", "tolerance", "passed"]);
            for (name, dev, tol) in checks {
                table.push(vec![
                    Cell::Text(name.into()),
                    Cell::Num(dev),
                    Cell::Num(tol),
                    Cell::Flag(dev <= tol),
                ]);
            }
            emit_table(&table, b.format, b.out.as_deref())?;
        }
    }

    if let Some(first) = report.violations.first() {
        for v in &report.violations {
            eprintln!("{}", serde_json::to_string(v).expect("serializable violation"));
        }
        return Err(Failure::check(format!(
            "{} violation(s); first: {} deviation {:e} > {:e} at spin {} gamma {} theta0 {} phi0 {} tau {}",
            report.violations.len(),
            first.check,
            first.deviation,
            first.tolerance,
            first.draw.spin,
            first.draw.gamma,
            first.draw.theta0,
            first.draw.phi0,
            first.draw.tau,
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn footer_next_to_table() {
        assert_eq!(footer_path(Path::new("out/sweep.csv")), PathBuf::from("out/sweep.fit.json"));
        assert_eq!(footer_path(Path::new("sweep")), PathBuf::from("sweep.fit.json"));
    }

    #[test]
    fn linspace_ends() {
        assert_eq!(linspace(-1.0, 1.0, 5).unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(linspace(0.3, 0.3, 1).unwrap(), vec![0.3]);
        assert!(linspace(1.0, -1.0, 3).is_err());
    }
}
