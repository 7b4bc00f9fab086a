//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]`/`[FAIL]` line (run with `--nocapture` to see them) and fails
//! when its criterion is not met.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use oat_core::analytics::{tau_min_moderate, tau_min_weak, xi2_min_moderate, xi2_min_weak, xi2_shorttime};
use oat_core::closed_form::{expect_splus_l, full_observables};
use oat_core::optimize::{gamma_ratio_sweep, log_spaced_spins, scaling_sweep, sweep_theta0, theta_grid};
use oat_core::oracle::equivalence::{run_equivalence, EquivalenceConfig};
use oat_core::squeezing::{frame_angles, variance_coeffs, DEFAULT_FRAME_EPS};
use oat_core::{minimize_xi2, squeezing_metrics, Error, InitialState, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn verdict(id: u32, title: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id:>2}: {title} | {detail}");
    assert!(pass, "criterion {id} failed: {detail}");
}

fn minimize(spin: f64, gamma: f64, theta0: f64) -> oat_core::MinimizationResult {
    let params = ModelParams::new(spin, gamma).unwrap();
    minimize_xi2(&params, &InitialState::new(theta0, 0.0).unwrap(), None).unwrap()
}

#[test]
fn criterion_01_reference_anchors() {
    let start = Instant::now();
    let anchors = [(0.0, 7.536e-3, 6.56e-3), (1.0, 1.264e-2, 9.278e-2), (10.0, 1.632e-2, 0.4504)];
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (gamma, tau, xi2) in anchors {
        let r = minimize(1e3, gamma, FRAC_PI_2);
        worst = worst.max(rel(r.tau_min, tau)).max(rel(r.xi2_min, xi2));
        detail.push(format!("g={gamma}: ({:.4e}, {:.4e})", r.tau_min, r.xi2_min));
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        "exact optima at S=1e3 within 0.5%, < 1 s",
        worst < 5e-3 && elapsed < Duration::from_secs(1),
        &format!("{}; worst rel {worst:.2e}; {elapsed:?}", detail.join(", ")),
    );
}

#[test]
fn criterion_02_analytic_anchors() {
    let init = InitialState::equatorial();
    let start = Instant::now();
    let values = [
        (tau_min_weak(1e3, &init).unwrap(), 7.565e-3),
        (xi2_min_weak(1e3, &init).unwrap(), 6.552e-3),
        (tau_min_moderate(1e3, &init, 1.0).unwrap(), 1.303e-2),
        (xi2_min_moderate(1e3, &init, 1.0).unwrap(), 9.596e-2),
        (tau_min_moderate(1e3, &init, 10.0).unwrap(), 2.064e-2),
        (xi2_min_moderate(1e3, &init, 10.0).unwrap(), 0.605),
    ];
    let elapsed = start.elapsed();
    let worst = values.iter().map(|(v, p)| rel(*v, *p)).fold(0.0, f64::max);
    verdict(
        2,
        "analytic optima within 0.1% of the printed values, < 1 ms",
        worst < 1e-3 && elapsed < Duration::from_millis(1),
        &format!("worst rel {worst:.2e}; {elapsed:?}"),
    );
}

#[test]
fn criterion_03_no_dephasing_limit() {
    let init = InitialState::equatorial();
    let closed = |s: f64| 0.5 * (2.0 * s / 3.0).powf(-2.0 / 3.0);
    let formula = [1e2, 1e3, 1e5]
        .iter()
        .map(|&s| rel(xi2_min_weak(s, &init).unwrap(), closed(s)))
        .fold(0.0, f64::max);
    let exact = [1e3, 1e4, 1e5, 1e6]
        .iter()
        .map(|&s| rel(minimize(s, 0.0, FRAC_PI_2).xi2_min, closed(s)))
        .fold(0.0, f64::max);
    verdict(
        3,
        "weak optimum = (1/2)(2S/3)^(-2/3) to 1e-12; exact within 3% for S >= 1e3",
        formula < 1e-12 && exact < 0.03,
        &format!("formula rel {formula:.1e}; exact worst rel {exact:.2e}"),
    );
}

#[test]
fn criterion_04_scaling_exponents() {
    let start = Instant::now();
    let init = InitialState::equatorial();
    let spins = log_spaced_spins(1e3, 1e6, 8).unwrap();
    let weak = scaling_sweep(&spins, &init, 0.0).unwrap();
    let moderate = scaling_sweep(&spins, &init, 1.0).unwrap();
    let elapsed = start.elapsed();
    let pass = (weak.exponent + 2.0 / 3.0).abs() <= 0.02
        && (moderate.exponent + 0.4).abs() <= 0.05
        && elapsed < Duration::from_secs(5);
    verdict(
        4,
        "exponents -2/3 +- 0.02 (gamma=0), -2/5 +- 0.05 (gamma=1), < 5 s",
        pass,
        &format!("{:.5}, {:.5}; {elapsed:?}", weak.exponent, moderate.exponent),
    );
}

#[test]
fn criterion_05_regime_boundaries() {
    let spin = 1e5;
    let init = InitialState::equatorial();
    let band = |lo: f64, hi: f64| -> Vec<f64> {
        let n = ((hi - lo) / 0.1).round() as usize;
        (0..=n).map(|k| ((lo + 0.1 * k as f64) * 10.0).round() / 10.0).collect()
    };
    let weak = gamma_ratio_sweep(spin, &init, &band(-1.0, -0.5)).unwrap();
    let moderate = gamma_ratio_sweep(spin, &init, &band(-0.2, 0.3)).unwrap();
    let strong = gamma_ratio_sweep(spin, &init, &band(0.5, 1.0)).unwrap();

    let weak_bad: Vec<String> = weak
        .iter()
        .filter(|p| rel(p.exact.xi2_min, p.xi2_min_weak) > 0.05)
        .map(|p| format!("r={} off {:.1}%", p.ratio, 100.0 * rel(p.exact.xi2_min, p.xi2_min_weak)))
        .collect();
    let moderate_bad: Vec<String> = moderate
        .iter()
        .filter(|p| rel(p.exact.xi2_min, p.xi2_min_moderate) > 0.15)
        .map(|p| format!("r={} off {:.1}%", p.ratio, 100.0 * rel(p.exact.xi2_min, p.xi2_min_moderate)))
        .collect();
    let strong_bad: Vec<String> = strong
        .iter()
        .filter(|p| !(0.8..=1.1).contains(&p.exact.xi2_min))
        .map(|p| format!("r={} xi2 {:.3}", p.ratio, p.exact.xi2_min))
        .collect();
    let moderate_worst = moderate
        .iter()
        .map(|p| rel(p.exact.xi2_min, p.xi2_min_moderate))
        .fold(0.0, f64::max);
    let pass = weak_bad.is_empty() && moderate_bad.is_empty() && strong_bad.is_empty();
    verdict(
        5,
        "S=1e5: weak band within 5%, moderate band within 15%, strong band in [0.8, 1.1]",
        pass,
        &format!(
            "weak violations [{}]; moderate worst {:.1}% [{}]; strong violations [{}]",
            weak_bad.join(", "),
            100.0 * moderate_worst,
            moderate_bad.join(", "),
            strong_bad.join(", ")
        ),
    );
}

#[test]
fn criterion_06_optimal_angle() {
    let grid = theta_grid(31);
    let centre = 15;
    assert!((grid[centre] - FRAC_PI_2).abs() < 1e-15);
    let mut argmins = Vec::new();
    for gamma in [0.0, 1.0, 3.3] {
        let params = ModelParams::new(1e5, gamma).unwrap();
        let rows = sweep_theta0(&params, &grid).unwrap();
        let k = (0..rows.len())
            .min_by(|&a, &b| rows[a].result.xi2_min.total_cmp(&rows[b].result.xi2_min))
            .unwrap();
        argmins.push(k);
    }
    verdict(
        6,
        "argmin over 31 angles at S=1e5 is pi/2 for gamma in {0, 1, 3.3}",
        argmins.iter().all(|&k| k == centre),
        &format!("argmin indices {argmins:?} (pi/2 is {centre})"),
    );
}

#[test]
fn criterion_07_oracle_equivalence() {
    let start = Instant::now();
    let config = EquivalenceConfig {
        max_spin: 20.0,
        draws: 200,
        seed: 42,
        ..Default::default()
    };
    let report = run_equivalence(&config).unwrap();
    let elapsed = start.elapsed();
    let d = report.max_deviation;
    let dense = d.sz.max(d.splus).max(d.sz2).max(d.splus2).max(d.splus_z);
    verdict(
        7,
        "200 draws S <= 20: dense 1e-10 rel, xi2 scan 1e-9 abs, ODE 1e-6, < 10 s",
        report.passed && elapsed < Duration::from_secs(10),
        &format!(
            "dense {dense:.1e}, xi2 {:.1e}, ode {:.1e}, {} skipped; {elapsed:?}",
            d.xi2, d.ode, report.skipped_xi2
        ),
    );
}

#[test]
fn criterion_08_structural_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures: Vec<String> = Vec::new();
    let mut skipped = 0;
    let draws = 1000;
    for i in 0..draws {
        let spin = (2.0 * 10f64.powf(rng.gen_range(-0.3..6.0))).round().max(1.0) / 2.0;
        let gamma = if rng.gen_bool(0.1) { 0.0 } else { 10f64.powf(rng.gen_range(-3.0..1.0)) };
        let theta0 = rng.gen_range(1e-3..PI - 1e-3);
        let phi0 = rng.gen_range(0.0..2.0 * PI);
        let tau = 10f64.powf(rng.gen_range(-6.0..0.0));
        let params = ModelParams::new(spin, gamma).unwrap();
        let init = InitialState::new(theta0, phi0).unwrap();
        let mut fail = |what: &str| failures.push(format!("#{i} {what} (S={spin}, g={gamma}, th={theta0}, tau={tau})"));

        let obs = full_observables(&params, &init, tau);
        let start = full_observables(&params, &init, 0.0);
        if obs.sz != start.sz || obs.sz2 != start.sz2 {
            fail("S_z moments drift");
        }
        let zero = squeezing_metrics(&params, &init, 0.0).unwrap();
        if zero.xi2 != 1.0 {
            fail("xi2(0) != 1");
        }
        let undamped = params.with_gamma(0.0);
        for l in 1..=4u64 {
            if l > params.two_s() {
                break;
            }
            let a = expect_splus_l(&params, &init, tau, l).unwrap();
            let b = expect_splus_l(&undamped, &init, tau, l).unwrap() * (-gamma * (l * l) as f64 * tau).exp();
            let scale = a.norm().max(b.norm());
            if scale > 0.0 && (a - b).norm() > 1e-12 * scale {
                fail(&format!("dephasing factor l={l}"));
            }
        }

        let m = match squeezing_metrics(&params, &init, tau) {
            Ok(m) => m,
            Err(Error::VanishingMeanSpin { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => {
                fail(&format!("error {e}"));
                continue;
            }
        };
        let frame = frame_angles(&obs, spin, DEFAULT_FRAME_EPS * spin, phi0).unwrap();
        let c = variance_coeffs(&obs, &frame, spin).c;
        if rel(m.v_plus + m.v_minus, c) > 1e-12 {
            fail("V+ + V- != C");
        }
        let bound = m.spin_norm * m.spin_norm / 4.0;
        if m.v_plus * m.v_minus < bound * (1.0 - 1e-9) {
            fail(&format!("uncertainty product {:.3e} < {:.3e}", m.v_plus * m.v_minus, bound));
        }
        if !(m.xi2 <= m.zeta2 && m.zeta2 <= m.zeta_s2) {
            fail("xi2 <= zeta2 <= zetaS2");
        }
    }
    verdict(
        8,
        "1000 draws: V+ + V- = C, uncertainty bound, ordering, xi2(0) = 1, S_z constants, dephasing factors",
        failures.is_empty(),
        &format!("{} failures, {skipped} vanished-mean-spin draws {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    );
}

#[test]
fn criterion_09_short_time_overlay() {
    let init = InitialState::equatorial();
    let mut worst: Vec<f64> = Vec::new();
    for gamma in [0.0, 1.0] {
        let params = ModelParams::new(1e3, gamma).unwrap();
        let t0 = minimize(1e3, gamma, FRAC_PI_2).tau_min;
        let mut w: f64 = 0.0;
        for k in 0..=60 {
            let tau = t0 * (0.7 + 0.6 * k as f64 / 60.0);
            let exact = squeezing_metrics(&params, &init, tau).unwrap().xi2;
            let approx = xi2_shorttime(1e3, &init, gamma, tau).unwrap();
            w = w.max(rel(approx, exact));
        }
        worst.push(w);
    }
    verdict(
        9,
        "short-time xi2 within 5% of exact on [0.7, 1.3] tau_min, S=1e3, gamma in {0, 1}",
        worst.iter().all(|&w| w < 0.05),
        &format!("worst rel {:.2}% / {:.2}%", 100.0 * worst[0], 100.0 * worst[1]),
    );
}

fn run_oat(args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_oat")).args(args).status().unwrap();
    assert!(status.success(), "oat {args:?} failed");
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(&config, r#"{"spin": 500, "gamma": 0.3, "theta0": 1.2, "seed": 7}"#).unwrap();
    let config = config.to_str().unwrap();
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("evolve.csv", vec!["evolve", "--config", config, "--tau-points", "50", "--log"]),
        ("minimize.json", vec!["minimize", "--config", config]),
        ("theta.csv", vec!["sweep-theta", "--config", config, "--theta-points", "7", "--gammas", "0,1"]),
        ("scaling.csv", vec!["scaling", "--config", config, "--spin-min", "100", "--spin-max", "1000", "--spin-points", "4"]),
        ("ratio.csv", vec!["scaling", "--config", config, "--mode", "gamma-ratio", "--ratio-points", "5"]),
        ("regime.json", vec!["regime", "--config", config]),
        ("oracle.json", vec!["oracle-check", "--spin", "6", "--draws", "20", "--seed", "7"]),
    ];
    let mut differing = Vec::new();
    for (name, args) in &runs {
        let mut outputs = Vec::new();
        for pass in 0..2 {
            let path = dir.path().join(format!("{pass}-{name}"));
            let mut full = args.clone();
            let p = path.to_str().unwrap().to_string();
            full.extend(["--out", &p]);
            run_oat(&full);
            let mut bytes = fs::read(&path).unwrap();
            if name.starts_with("scaling") {
                bytes.extend(fs::read(path.with_extension("fit.json")).unwrap());
            }
            outputs.push(bytes);
        }
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            differing.push(*name);
        }
    }
    verdict(
        10,
        "repeated CLI runs give byte-identical files",
        differing.is_empty(),
        &format!("{} commands compared, differing {differing:?}", runs.len()),
    );
}
