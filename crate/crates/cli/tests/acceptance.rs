//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use kg5d::canonical::{
    brace_asymptote, brace_factor, degeneracy_tail_limit, density_normalization, ideal_gas_term, scaled_normalization,
    uniform_grid, universal_d, universal_sup_distance, universal_trapped_degeneracy, z_continuous, z_discrete,
    NMaxPolicy,
};
use kg5d::numerics::integrate;
use kg5d::spectrum::{kg_binding_ratio, kg_energy, matching_residual, stat_wavelength_shift, LevelIndex};
use kg5d::{Scales, Tol};
use serde_json::Value;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn tol(rel: f64) -> Tol {
    Tol::new(rel, 0.0, 4000).unwrap()
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=30usize {
        let v = density_normalization(n, 1.0, &tol(1e-10)).unwrap().value;
        let target = (n * n) as f64;
        worst = worst.max((v - target).abs() / target);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-6 && secs < 60.0, format!("max rel error {worst:.2e} over n=1..30, {secs:.2}s"))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=30usize {
        let v = scaled_normalization(n, &tol(1e-10)).unwrap().value;
        worst = worst.max((v - 1.0).abs());
    }
    outcome(worst <= 1e-6, format!("max error {worst:.2e} over n=1..30"))
}

fn criterion_3() -> Outcome {
    let d2 = (universal_d(2.0f64) - std::f64::consts::FRAC_1_PI).abs();
    let area = (integrate(universal_d, 0.0, 4.0, &tol(1e-13)).unwrap() - 1.0).abs();
    let grid = uniform_grid(0.1, 3.8, 2001);
    let dist: Vec<f64> = [10usize, 100, 1000].iter().map(|&n| universal_sup_distance(n, &grid).unwrap()).collect();
    let monotone = dist.windows(2).all(|w| w[1] < w[0]);
    outcome(
        d2 <= 1e-12 && area <= 1e-10 && monotone && dist[2] < 0.01,
        format!(
            "|D(2)-1/pi| {d2:.1e}, |int D - 1| {area:.1e}, sup distance n=10,100,1000: {:.3e} {:.3e} {:.3e}",
            dist[0], dist[1], dist[2]
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for radius in [1.0f64, 4.0, 25.0, 100.0] {
        let n0 = (10.0 * radius.sqrt()).ceil() as usize;
        for n in [n0, 2 * n0, 10 * n0, 100 * n0] {
            let v = universal_trapped_degeneracy(n, radius, &tol(1e-12)).unwrap();
            let limit = degeneracy_tail_limit(n, radius);
            worst = worst.max((v - limit).abs() / limit);
            cases += 1;
        }
    }
    outcome(worst < 1e-3, format!("max rel deviation {worst:.2e} over {cases} cases with n >= 10 sqrt(R)"))
}

fn criterion_5() -> Outcome {
    let free = Scales::natural(7.2973525693e-3, 0).with_eta0(1.0);
    let (z_c, _) = z_continuous(&free, &tol(1e-12)).unwrap();
    let ideal_exact = z_c == ideal_gas_term(&free);
    let brace_zero = (1..=10_000usize).all(|n| brace_factor(n, 0.0, 1.0) == 0.0);
    let ratio: f64 = brace_factor(1000, 0.01, 1.0) / brace_asymptote(1000, 0.01, 1.0);
    outcome(
        ideal_exact && brace_zero && (ratio - 1.0).abs() < 1e-2,
        format!("zero-coupling Z_c equals ideal term: {ideal_exact}, brace identically 0: {brace_zero}, brace/asymptote at n=1000: {ratio:.8}"),
    )
}

fn criterion_6() -> Outcome {
    let radius = 4.0;
    let scales = Scales::natural(7.2973525693e-3, 1)
        .with_star_ratio(0.01)
        .unwrap()
        .with_eta0(1.0)
        .with_cavity_radius_half_rho(radius)
        .unwrap();
    let (z_d, report, levels) = z_discrete(&scales, NMaxPolicy::Converge, &tol(1e-12)).unwrap();
    let bound_ok = report.tail_bound < 1e-10 * z_d;
    let start = (radius / 4.0f64).sqrt().ceil() as usize * 10;
    let (ns, terms): (Vec<f64>, Vec<f64>) =
        levels.iter().filter(|t| t.n >= start).map(|t| (t.n as f64, t.weight * t.trapped)).unzip();
    let exponent = -log_slope(&ns, &terms);
    outcome(
        bound_ok && (exponent - 3.0).abs() <= 0.1,
        format!(
            "Z_d {z_d:.10e}, tail bound {:.2e} after {} levels, fitted decay exponent {exponent:.4} over n >= {start}",
            report.tail_bound, report.terms_used
        ),
    )
}

fn criterion_7() -> Outcome {
    let scales = Scales::natural(7.2973525693e-3, 1);
    let mut residual = 0.0f64;
    for n in 1..=5u32 {
        for l in 0..n {
            let idx = LevelIndex::new(n, l).unwrap();
            let lp = scales.hbar * scales.c / kg_energy(idx, &scales);
            residual = residual.max(matching_residual(lp, idx, &scales).unwrap().abs());
        }
    }
    // Error of the non-relativistic ratio, worst over levels, per alpha.
    let nr_error = |alpha: f64| {
        let mut worst = 0.0f64;
        for n in 1..=5u32 {
            for l in 0..n {
                let b = kg_binding_ratio(LevelIndex::new(n, l).unwrap(), alpha);
                let nf = n as f64;
                worst = worst.max((b * 2.0 * nf * nf / (alpha * alpha) - 1.0).abs());
            }
        }
        worst
    };
    let (e3, e4) = (nr_error(1e-3), nr_error(1e-4));
    let order = (e3 / e4).log10();
    outcome(
        residual <= 1e-10 && (order - 2.0).abs() <= 0.1,
        format!("max matching residual {residual:.1e}, NR ratio error {e3:.2e} -> {e4:.2e}, observed order {order:.3}"),
    )
}

fn criterion_8() -> Outcome {
    let ratios = [0.03, 0.01, 0.003];
    let mut worst = 0.0f64;
    let mut exponents = Vec::new();
    for n in 1..=5u32 {
        for l in 0..n {
            let idx = LevelIndex::new(n, l).unwrap();
            let nf = n as f64;
            let gaps: Vec<f64> = ratios
                .iter()
                .map(|&s| (stat_wavelength_shift(idx, s).unwrap() - s * s / (2.0 * nf * nf)).abs())
                .collect();
            let p = log_slope(&ratios, &gaps);
            worst = worst.max((p - 4.0).abs());
            exponents.push(p);
        }
    }
    let (lo, hi) = exponents.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| (a.min(p), b.max(p)));
    outcome(worst <= 0.3, format!("fitted exponents in [{lo:.4}, {hi:.4}] for n <= 5, all l"))
}

fn run_cli(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_kg5d"))
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .env_remove("KG5D_OUTPUT_DIR")
        .output()
        .expect("kg5d binary runs")
}

fn failed_checks(dir: &Path, file: &str) -> (usize, Vec<String>) {
    let text = std::fs::read_to_string(dir.join(file)).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    let checks = doc["result"]["checks"].as_array().unwrap();
    let failed = checks
        .iter()
        .filter(|c| c["pass"] != Value::Bool(true))
        .map(|c| c["name"].as_str().unwrap_or("?").to_string())
        .collect();
    (checks.len(), failed)
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let out = run_cli(dir.path(), &["verify-geometry", "--grid", "17", "--refine", "4", "--order-min", "1.9", "--flat-tol", "1e-12", "--formats", "json"]);
    let secs = start.elapsed().as_secs_f64();
    let (count, failed) = failed_checks(dir.path(), "verify_geometry.json");
    outcome(
        out.status.success() && failed.is_empty() && secs < 120.0,
        format!("{count} checks on a 17^5 patch with 3 refinements, failed {failed:?}, {secs:.2}s"),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = run_cli(dir.path(), &["verify-reduction", "--formats", "json"]);
    let (count, failed) = failed_checks(dir.path(), "verify_reduction.json");
    outcome(out.status.success() && failed.is_empty(), format!("{count} checks, failed {failed:?}"))
}

fn criterion_11() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let runs: [&[&str]; 4] = [
        &["spectrum"],
        &["partition"],
        &["figure1", "--n", "1,10,100"],
        &["verify-reduction"],
    ];
    for args in runs {
        for dir in [&a, &b] {
            if !run_cli(dir.path(), args).status.success() {
                return outcome(false, format!("kg5d {} failed", args[0]));
            }
        }
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n.to_str().is_some_and(|s| s.ends_with(".csv") || s.ends_with(".json")))
        .collect();
    names.sort();
    let differing: Vec<String> = names
        .iter()
        .filter(|n| std::fs::read(a.path().join(n)).ok() != std::fs::read(b.path().join(n)).ok())
        .map(|n| n.to_string_lossy().into_owned())
        .collect();
    outcome(
        !names.is_empty() && differing.is_empty(),
        format!("{} CSV/JSON files compared, differing {differing:?}", names.len()),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("level density normalization", criterion_1),
        ("scaled density normalization", criterion_2),
        ("universal density limit", criterion_3),
        ("degeneracy tail", criterion_4),
        ("continuum sum structure", criterion_5),
        ("bound-state sum convergence", criterion_6),
        ("spectrum consistency", criterion_7),
        ("statistical root expansion", criterion_8),
        ("geometry identities", criterion_9),
        ("reduction suite", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failures += 1;
        }
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}: {name}: {}", i + 1, result.detail);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
