use serde::Serialize;
use serde_json::{json, Value};

use kg5d::canonical::{
    figure1_curves, partition, uniform_grid, universal_d, universal_sup_distance, NMaxPolicy,
};
use kg5d::geometry::{
    contraction_convergence, covariant_laplacian_residual, kg_fourier_residual, laplacian_convergence,
    lightcone_convergence, patch_grid, CoulombPotential, Gauge, HydrogenLike, KgCouplings, PureGauge, TrigPotential,
    ZeroPotential,
};
use kg5d::numerics::{integrate, Boundary, ConvergenceReport, GridField};
use kg5d::reduction::{
    bohr_energy, coulomb_energy, current_and_continuity, diffusion_variance, dispersion_error, evolve_fokker_planck,
    evolve_schrodinger, free_packet_variance, gaussian_packet, hydrogen_ground_state, lightcone_gradient_norms,
    lightcone_jacobian, lightcone_transform, max_mass_drift, null_dispersion, position_variance,
    propagator_composition_check, weakfield_schrodinger_residual, DiffusionScheme, Direction, Scheme,
};
use kg5d::spectrum::{kg_energy_ratio, stat_energy, stat_wavelength, LevelIndex};
use kg5d::Scales;

use crate::config::{Format, Settings};
use crate::error::CliError;
use crate::output::{Cell, Emitter};

fn scales(settings: &Settings) -> Result<Scales, CliError> {
    let s = Scales::natural(settings.f64("alpha")?, settings.u32("z")?);
    s.validate()?;
    if s.z_alpha() > 0.0 {
        Ok(s.with_star_ratio(settings.f64("star_ratio")?)?)
    } else {
        Ok(s)
    }
}

pub fn spectrum(settings: &Settings, out: &mut Emitter) -> Result<(), CliError> {
    let s = scales(settings)?;
    let n_max = settings.u32("n_max")?;
    if n_max == 0 {
        return Err(CliError::Config("n_max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for n in 1..=n_max {
        let e_stat = stat_energy(n, &s)? / s.stat_rest_energy();
        for l in 0..n {
            let idx = LevelIndex::new(n, l)?;
            let e = kg_energy_ratio(idx, s.z_alpha());
            // Past the critical ratio the statistical root is complex.
            let stat = match stat_wavelength(idx, &s) {
                Ok(v) => v / s.stat_length,
                Err(kg5d::Error::ComplexRegime { .. }) => f64::NAN,
                Err(e) => return Err(e.into()),
            };
            rows.push(vec![
                Cell::Int(n.into()),
                Cell::Int(l.into()),
                Cell::Float(e),
                Cell::Float(1.0 / e),
                Cell::Float(stat),
                Cell::Float(e_stat),
            ]);
            records.push(json!({
                "n": n, "l": l, "energy_ratio": e, "lambda_prime_ratio": 1.0 / e,
                "stat_wavelength_ratio": stat, "stat_energy_ratio": e_stat,
            }));
        }
    }
    if settings.wants(Format::Csv)? {
        out.csv(
            "spectrum.csv",
            &["n", "l", "E_nl/mc2", "lambda_prime/lambda", "Lambda_prime/Lambda", "e_n/Mc2"],
            &rows,
        )?;
    }
    if settings.wants(Format::Json)? {
        out.json("spectrum.json", json!({ "star_ratio": s.star_ratio(), "levels": records }))?;
    }
    Ok(())
}

pub fn partition_cmd(settings: &Settings, out: &mut Emitter) -> Result<(), CliError> {
    let base = scales(settings)?;
    if base.z_alpha() == 0.0 {
        return Err(CliError::Config("the canonical sum needs Z alpha > 0".into()));
    }
    let s = base.with_eta0(settings.f64("eta0")?).with_cavity_radius_half_rho(settings.f64("cavity_radius")?)?;
    let policy = match settings.usize("n_levels")? {
        0 => NMaxPolicy::Converge,
        n => NMaxPolicy::Fixed(n),
    };
    let result = partition(&s, policy, &settings.tolerance()?)?;
    if settings.wants(Format::Csv)? {
        let rows: Vec<Vec<Cell>> = result
            .per_level_d
            .iter()
            .map(|t| vec![Cell::Int(t.n as i64), Cell::Float(t.weight), Cell::Float(t.trapped), Cell::Float(t.weight * t.trapped)])
            .collect();
        out.csv("partition_levels.csv", &["n", "weight", "trapped", "term"], &rows)?;
    }
    if settings.wants(Format::Json)? {
        let mut value = serde_json::to_value(&result)?;
        if let Value::Object(map) = &mut value {
            // The per-level table lives in the CSV.
            map.remove("per_level_d");
            map.insert("eta0".into(), json!(s.eta0()));
            map.insert("star_ratio".into(), json!(s.star_ratio()));
            map.insert("volume_over_lambda3".into(), json!(s.volume() / s.stat_length.powi(3)));
            map.insert("damping".into(), json!(s.damping()));
        }
        out.json("partition.json", value)?;
    }
    Ok(())
}

fn r_grid(settings: &Settings) -> Result<Vec<f64>, CliError> {
    let (lo, hi, n) = (settings.f64("r_min")?, settings.f64("r_max")?, settings.usize("r_points")?);
    if !(0.0 <= lo && lo < hi && hi <= 5.0) || n < 2 {
        return Err(CliError::Config("need 0 <= r_min < r_max <= 5 and r_points >= 2".into()));
    }
    Ok(uniform_grid(lo, hi, n))
}

pub fn universal(settings: &Settings, out: &mut Emitter) -> Result<(), CliError> {
    let n_list = settings.usize_list("n_list")?;
    let points = settings.usize("r_points")?;
    let grid = uniform_grid(0.1, 3.8, points.max(2));
    let tol = settings.tolerance()?;
    let integral = integrate(universal_d, 0.0, 4.0, &tol)?;
    let d2 = universal_d(2.0);
    let mut rows = Vec::new();
    let mut distances = Vec::new();
    for &n in &n_list {
        let d = universal_sup_distance(n, &grid)?;
        rows.push(vec![Cell::Int(n as i64), Cell::Float(d)]);
        distances.push(json!({ "n": n, "sup_distance": d }));
    }
    if settings.wants(Format::Csv)? {
        out.csv("universal_d.csv", &["n", "sup_distance"], &rows)?;
    }
    if settings.wants(Format::Json)? {
        out.json(
            "universal_d.json",
            json!({ "d_at_2": d2, "one_over_pi": std::f64::consts::FRAC_1_PI, "integral_0_4": integral, "sup_window": [0.1, 3.8], "distances": distances }),
        )?;
    }
    Ok(())
}

pub fn figure1(settings: &Settings, out: &mut Emitter) -> Result<(), CliError> {
    let n_list = settings.usize_list("n_list")?;
    let grid = r_grid(settings)?;
    let curves = figure1_curves(&n_list, &grid)?;
    let mut columns = vec!["r".to_string(), "D".to_string()];
    columns.extend(n_list.iter().map(|n| format!("D_{n}")));
    let rows: Vec<Vec<Cell>> = grid
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut row = vec![Cell::Float(r), Cell::Float(universal_d(r))];
            row.extend(curves.iter().map(|c| Cell::Float(c.samples[i].1)));
            row
        })
        .collect();
    if settings.wants(Format::Csv)? {
        let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
        out.csv("figure1.csv", &cols, &rows)?;
    }
    if settings.wants(Format::Json)? {
        out.json("figure1.json", json!({ "r": grid, "universal": grid.iter().map(|&r| universal_d(r)).collect::<Vec<_>>(), "curves": curves }))?;
    }
    if settings.wants(Format::Svg)? {
        let mut series: Vec<(String, Vec<(f64, f64)>)> =
            curves.iter().map(|c| (format!("n = {}", c.n), c.samples.clone())).collect();
        series.push(("D(r)".into(), grid.iter().map(|&r| (r, universal_d(r))).collect()));
        out.svg("figure1.svg", "Rescaled level densities D_n(r n^2)", "r", &series)?;
    }
    Ok(())
}

/// Outcome of one verification item.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub threshold: f64,
    /// Single measured value, when the check is not a refinement study.
    pub value: Option<f64>,
    pub convergence: Option<ConvergenceReport<f64>>,
}

impl Check {
    fn value(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), pass: value <= threshold, threshold, value: Some(value), convergence: None }
    }

    fn order(name: &str, report: ConvergenceReport<f64>, order: f64, floor: f64) -> Self {
        Self { name: name.into(), pass: report.meets_order(order, floor), threshold: order, value: None, convergence: Some(report) }
    }
}

fn emit_checks(settings: &Settings, out: &mut Emitter, stem: &str, checks: &[Check]) -> Result<(), CliError> {
    if settings.wants(Format::Csv)? {
        let mut rows = Vec::new();
        for c in checks {
            let pass = Cell::Text(if c.pass { "pass" } else { "fail" }.into());
            match &c.convergence {
                Some(r) => {
                    for (i, (h, res)) in r.steps.iter().zip(&r.residuals).enumerate() {
                        let order = if i == 0 { Cell::Text(String::new()) } else { Cell::Float(r.orders[i - 1]) };
                        rows.push(vec![Cell::Text(c.name.clone()), Cell::Int(i as i64), Cell::Float(*h), Cell::Float(*res), order, pass.clone()]);
                    }
                }
                None => rows.push(vec![
                    Cell::Text(c.name.clone()),
                    Cell::Int(0),
                    Cell::Text(String::new()),
                    Cell::Float(c.value.unwrap_or(f64::NAN)),
                    Cell::Text(String::new()),
                    pass,
                ]),
            }
        }
        out.csv(&format!("{stem}.csv"), &["check", "level", "step", "residual", "order", "status"], &rows)?;
    }
    if settings.wants(Format::Json)? {
        let all = checks.iter().all(|c| c.pass);
        out.json(&format!("{stem}.json"), json!({ "pass": all, "checks": checks }))?;
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn halving(base: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| base / f64::powi(2.0, k as i32)).collect()
}

pub fn verify_geometry(settings: &Settings, out: &mut Emitter) -> Result<(), CliError> {
    let points = settings.usize("grid")?;
    let levels = settings.usize("refine")?;
    let h0 = settings.f64("base_step")?;
    let order = settings.f64("order_min")?;
    let flat_tol = settings.f64("flat_tol")?;
    if points < 3 || levels < 2 || !(h0 > 0.0) {
        return Err(CliError::Config("need grid >= 3, refine >= 2 and base_step > 0".into()));
    }
    let center = [0.1, 0.2, -0.3, 0.4, 0.5];
    let gaussian = move |x: &[f64]| {
        let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
        (-r2).exp() * (1.0 + 0.3 * x[4]).cos()
    };
    let mut checks = Vec::new();

    let random = TrigPotential::<f64>::random(3, 0.7, 1.3, 17);
    let names = ["contraction_eta_gamma_rho", "contraction_eta_gamma_5", "contraction_n_gamma_rho", "contraction_n_gamma_5"];
    for (name, report) in names.iter().zip(contraction_convergence(&random, 0.9, center, &halving(h0, levels))?) {
        checks.push(Check::order(name, report, order, flat_tol));
    }

    let flat = patch_grid(&center, h0, points, |x: &[f64]| (x[0] + 0.5).sin() * (2.0 * x[1]).sin() * x[4].cos())?;
    checks.push(Check::value("laplacian_flat", covariant_laplacian_residual(&flat, &ZeroPotential, 1.0)?.max_residual, flat_tol));

    let lorentz = TrigPotential::<f64>::random_lorentz(3, 0.6, 1.5, 3);
    checks.push(Check::order("laplacian_lorentz", laplacian_convergence(&lorentz, 1.0, gaussian, &center, h0, points, levels)?, order, flat_tol));
    let pure = PureGauge { amplitude: 0.5, wavenumber: 1.2 };
    checks.push(Check::order("laplacian_pure_gauge", laplacian_convergence(&pure, 1.0, gaussian, &center, h0, points, levels)?, order, flat_tol));

    let sample: Vec<[f64; 5]> = (0..8)
        .map(|j| {
            let t = j as f64 * 0.37;
            [t.sin(), 0.3 - t, 0.5 * t.cos(), 0.2 + 0.1 * t, -0.4 + t]
        })
        .collect();
    let field = |x: &[f64; 5]| (0.7 * x[0] - 0.3 * x[1] + 0.5 * x[4]).sin() * (-0.2 * (x[2] * x[2] + x[3] * x[3])).exp();
    let coulomb_gauge = TrigPotential::<f64>::random_coulomb(3, 0.4, 1.0, 5);
    checks.push(Check::order(
        "lightcone_expansion_coulomb_gauge",
        lightcone_convergence(field, &coulomb_gauge, 0.9, Gauge::Coulomb, &sample, h0, levels)?,
        order,
        flat_tol,
    ));

    let pts4: Vec<[f64; 4]> = sample.iter().map(|x| [x[0], x[1] + 1.0, x[2], x[3]]).collect();
    let kg = kg_fourier_residual(
        &HydrogenLike { decay: 1.0, energy: 0.99 },
        &CoulombPotential { strength: settings.f64("alpha")? * settings.u32("z")? as f64 },
        KgCouplings { inverse_compton: 1.0, charge: 1.0 },
        &pts4,
    )?;
    checks.push(Check::value("kg_reduced_vs_minimal", kg.defect_vs_minimal, 1e-10));
    checks.push(Check::value("kg_reduced_vs_fifth", kg.defect_vs_fifth, 1e-10));

    emit_checks(settings, out, "verify_geometry", &checks)
}

pub fn verify_reduction(settings: &Settings, out: &mut Emitter) -> Result<(), CliError> {
    let n = settings.usize("reduction_points")?;
    let levels = settings.usize("refine")?;
    let order = settings.f64("order_min")?;
    if n < 16 || levels < 2 {
        return Err(CliError::Config("need reduction_points >= 16 and refine >= 2".into()));
    }
    let nu = 1.0;
    let length = 40.0;
    let h = length / n as f64;
    let mut checks = Vec::new();

    let packet = gaussian_packet(&[n], &[h], &[0.0], &[length / 2.0], 1.0, &[1.5])?;
    for (name, scheme) in [("norm_drift_spectral", Scheme::Spectral), ("norm_drift_crank_nicolson", Scheme::CrankNicolson)] {
        let t = evolve_schrodinger(&packet, 2.0, nu, 40, scheme)?;
        checks.push(Check::value(name, t.max_norm_drift(), 1e-8));
    }
    checks.push(Check::value("dispersion_spectral", dispersion_error(n, 2.0 * std::f64::consts::PI, nu, 1.3)?, 1e-10));

    let mut steps = Vec::new();
    let mut residuals = Vec::new();
    for k in 0..levels {
        let count = 10 << k;
        let t = evolve_schrodinger(&packet, 1.0, nu, count, Scheme::Spectral)?;
        residuals.push(current_and_continuity(&t, nu)?.1);
        steps.push(1.0 / count as f64);
    }
    checks.push(Check::order("continuity", ConvergenceReport::new(steps, residuals)?, order, 1e-12));

    let wide = gaussian_packet(&[4 * n], &[h * 2.0], &[0.0], &[length], 1.0, &[0.0])?;
    let spread = evolve_schrodinger(&wide, 4.0, nu, 4, Scheme::Spectral)?;
    let var_err = spread
        .times
        .iter()
        .zip(&spread.frames)
        .map(|(t, f)| (position_variance(f, 0, |v| v.norm_sqr()) - free_packet_variance(1.0, nu, *t)).abs())
        .fold(0.0, f64::max);
    checks.push(Check::value("packet_variance", var_err, 1e-6));

    let c_lambda = 0.8;
    let sigma = 1.2;
    let fp0 = GridField::from_fn(&[4 * n], &[h * 2.0], &[0.0], Boundary::Periodic, |x: &[f64]| {
        let d = x[0] - length;
        (-d * d / (2.0 * sigma * sigma)).exp()
    })?;
    let fp = evolve_fokker_planck(&fp0, 5.0, c_lambda, 5, DiffusionScheme::Spectral)?;
    let fp_err = fp
        .times
        .iter()
        .zip(&fp.frames)
        .map(|(u, f)| (position_variance(f, 0, |v| *v) - diffusion_variance(sigma, c_lambda, *u)).abs())
        .fold(0.0, f64::max);
    checks.push(Check::value("fokker_planck_variance", fp_err, 1e-6));
    checks.push(Check::value("fokker_planck_mass", max_mass_drift(&fp), 1e-10));

    let x: [f64; 5] = [0.3, -1.2, 2.5, 0.7, -4.1];
    let back = lightcone_transform(&lightcone_transform(&x, Direction::Forward), Direction::Inverse);
    let round_trip = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    checks.push(Check::value("lightcone_round_trip", round_trip, 1e-14));
    checks.push(Check::value("lightcone_jacobian", (lightcone_jacobian::<f64>() + 1.0).abs(), 0.0));
    let grads = lightcone_gradient_norms::<f64>();
    checks.push(Check::value("lightcone_gradient_null", grads[0].abs().max(grads[1].abs()), 0.0));
    let (k, mu) = (0.75, 1.0);
    let nulls = [null_dispersion(&[2.5, 0.0, 0.0, 0.0, 2.5]), null_dispersion(&[f64::hypot(k, mu), k, 0.0, 0.0, mu])];
    checks.push(Check::value("null_dispersion", nulls[0].abs().max(nulls[1].abs()), 0.0));

    let blob = gaussian_packet(&[32, 32], &[0.5, 0.5], &[0.0, 0.0], &[8.0, 8.0], 1.5, &[1.0, -0.5])?;
    checks.push(Check::value("semigroup_spectral", propagator_composition_check(&blob, nu, 0.7, 1.1, 3, Scheme::Spectral)?, 1e-12));
    let mut cn_steps = Vec::new();
    let mut cn_defects = Vec::new();
    for k in 0..levels {
        let count = 16 << k;
        cn_defects.push(propagator_composition_check(&packet, nu, 0.5, 0.8, count, Scheme::CrankNicolson)?);
        cn_steps.push(0.5 / count as f64);
    }
    checks.push(Check::order("semigroup_crank_nicolson", ConvergenceReport::new(cn_steps, cn_defects)?, order, 1e-12));

    let hydrogen = Scales::natural(0.5, 1);
    let (cells, half) = (48usize, 8.0);
    let step = 2.0 * half / (cells - 1) as f64;
    let psi = hydrogen_ground_state(&[cells; 3], &[step; 3], &[-half; 3], &hydrogen)?;
    let weak = weakfield_schrodinger_residual(&psi, coulomb_energy(&hydrogen), bohr_energy(&hydrogen), &hydrogen, None)?;
    checks.push(Check::value("weak_field_hydrogen_relative", weak.max_residual / weak.max_potential_term, 0.25));

    emit_checks(settings, out, "verify_reduction", &checks)
}

