use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use config::Settings;
use error::CliError;
use output::Emitter;

#[derive(Parser, Debug)]
#[command(name = "kg5d", version, about = "Klein-Gordon spectra, 5D identities, reductions and hydrogenic canonical sums")]
struct Cli {
    /// INI file of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Where artifacts are written.
    #[arg(long, global = true, env = "KG5D_OUTPUT_DIR", default_value = ".")]
    output_dir: PathBuf,

    /// Comma-separated subset of csv,json,svg.
    #[arg(long, global = true)]
    formats: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Klein-Gordon and statistical level table.
    Spectrum(Overrides),
    /// Continuum and bound-state canonical sums.
    Partition(Overrides),
    /// Distance of the rescaled densities from their universal limit.
    UniversalD(Overrides),
    /// Rescaled level density curves.
    Figure1(Overrides),
    /// Metric, Christoffel and operator-identity residuals.
    VerifyGeometry(Overrides),
    /// Schrödinger, continuity, diffusion and light-cone checks.
    VerifyReduction(Overrides),
}

/// Flag forms of the configuration keys.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// Nuclear charge number.
    #[arg(long = "Z", visible_alias = "z")]
    z: Option<u32>,
    /// Fine-structure constant.
    #[arg(long)]
    alpha: Option<f64>,
    /// Metric length over statistical length, lambda*/Lambda.
    #[arg(long)]
    star_ratio: Option<f64>,
    /// Dimensionless time quantum.
    #[arg(long)]
    eta0: Option<f64>,
    /// Cavity radius in units of rho/2.
    #[arg(long)]
    cavity_radius: Option<f64>,
    /// Highest principal quantum number in the spectrum table.
    #[arg(long)]
    n_max: Option<u32>,
    /// Bound levels summed explicitly; 0 sums to convergence.
    #[arg(long)]
    n_levels: Option<usize>,
    /// Level list, e.g. 1,10,100,1000.
    #[arg(long = "n")]
    n_list: Option<String>,
    /// Lower end of the radial grid.
    #[arg(long)]
    r_min: Option<f64>,
    /// Upper end of the radial grid, at most 5.
    #[arg(long)]
    r_max: Option<f64>,
    /// Radial grid size.
    #[arg(long)]
    r_points: Option<usize>,
    /// Points per axis of the 5D patch.
    #[arg(long)]
    grid: Option<usize>,
    /// Number of refinement levels.
    #[arg(long)]
    refine: Option<usize>,
    /// Coarsest finite-difference step.
    #[arg(long)]
    base_step: Option<f64>,
    /// Smallest accepted observed convergence order.
    #[arg(long)]
    order_min: Option<f64>,
    /// Residual accepted as exact (flat metric, rounding floor).
    #[arg(long)]
    flat_tol: Option<f64>,
    /// Grid points of the 1D reduction runs.
    #[arg(long)]
    reduction_points: Option<usize>,
    /// Relative tolerance of quadrature and series.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance of quadrature and series.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Iteration cap of quadrature, series and root finding.
    #[arg(long)]
    max_iter: Option<usize>,
}

impl Overrides {
    fn apply(&self, s: &mut Settings) -> Result<(), CliError> {
        let pairs: [(&str, Option<String>); 20] = [
            ("z", self.z.map(|v| v.to_string())),
            ("alpha", self.alpha.map(|v| v.to_string())),
            ("star_ratio", self.star_ratio.map(|v| v.to_string())),
            ("eta0", self.eta0.map(|v| v.to_string())),
            ("cavity_radius", self.cavity_radius.map(|v| v.to_string())),
            ("n_max", self.n_max.map(|v| v.to_string())),
            ("n_levels", self.n_levels.map(|v| v.to_string())),
            ("n_list", self.n_list.clone()),
            ("r_min", self.r_min.map(|v| v.to_string())),
            ("r_max", self.r_max.map(|v| v.to_string())),
            ("r_points", self.r_points.map(|v| v.to_string())),
            ("grid", self.grid.map(|v| v.to_string())),
            ("refine", self.refine.map(|v| v.to_string())),
            ("base_step", self.base_step.map(|v| v.to_string())),
            ("order_min", self.order_min.map(|v| v.to_string())),
            ("flat_tol", self.flat_tol.map(|v| v.to_string())),
            ("reduction_points", self.reduction_points.map(|v| v.to_string())),
            ("rel_tol", self.rel_tol.map(|v| v.to_string())),
            ("abs_tol", self.abs_tol.map(|v| v.to_string())),
            ("max_iter", self.max_iter.map(|v| v.to_string())),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v)?;
            }
        }
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let (name, overrides) = match &cli.command {
        Command::Spectrum(o) => ("spectrum", o),
        Command::Partition(o) => ("partition", o),
        Command::UniversalD(o) => ("universal-d", o),
        Command::Figure1(o) => ("figure1", o),
        Command::VerifyGeometry(o) => ("verify-geometry", o),
        Command::VerifyReduction(o) => ("verify-reduction", o),
    };
    let mut settings = Settings::defaults();
    if let Some(path) = &cli.config {
        settings.merge_file(path)?;
    }
    if let Some(f) = &cli.formats {
        settings.set("formats", f.clone())?;
    }
    overrides.apply(&mut settings)?;
    settings.formats()?;

    let mut out = Emitter::new(&cli.output_dir, name, &settings)?;
    let result = match &cli.command {
        Command::Spectrum(_) => commands::spectrum(&settings, &mut out),
        Command::Partition(_) => commands::partition_cmd(&settings, &mut out),
        Command::UniversalD(_) => commands::universal(&settings, &mut out),
        Command::Figure1(_) => commands::figure1(&settings, &mut out),
        Command::VerifyGeometry(_) => commands::verify_geometry(&settings, &mut out),
        Command::VerifyReduction(_) => commands::verify_reduction(&settings, &mut out),
    };
    for path in out.written() {
        println!("{}", path.display());
    }
    result.map(|()| out.written().to_vec())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kg5d: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
