//! Argument and configuration-file handling. Every long flag can also be set
//! from a TOML file passed with `--config`; explicit flags win.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrabi_core::fock::TruncationSpec;
use qrabi_core::model::{ModelParams, Sector};
use serde::Deserialize;

use crate::run::CliError;

#[derive(Parser)]
#[command(name = "qrabi", version, about = "Spectra of the two-qubit quantum Rabi model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Truncated-basis spectrum over a coupling grid
    Fock(SharedArgs),
    /// Series-determinant spectrum over a coupling grid and energy window
    Gfunc(GfuncArgs),
    /// Rotating-wave (excitation-conserving) spectrum over a coupling grid
    Jc(SharedArgs),
    /// Couplings where a finite photon chain closes, with state amplitudes
    Quasi(QuasiArgs),
    /// Residuals of closed-form eigenstates against the truncated model
    Verify(SharedArgs),
    /// Combined table from every method applicable at these parameters
    Sweep(GfuncArgs),
}

#[derive(Args, Default)]
pub struct SharedArgs {
    /// Detuning of qubit 1
    #[arg(long, allow_hyphen_values = true)]
    pub delta1: Option<f64>,
    /// Detuning of qubit 2
    #[arg(long, allow_hyphen_values = true)]
    pub delta2: Option<f64>,
    /// Coupling split g1:g2, for example 1:1 or 3:1
    #[arg(long)]
    pub ratio: Option<String>,
    /// Smallest total coupling g1 + g2
    #[arg(long)]
    pub gmin: Option<f64>,
    /// Largest total coupling
    #[arg(long)]
    pub gmax: Option<f64>,
    /// Grid intervals between gmin and gmax (the grid has steps + 1 points)
    #[arg(long)]
    pub steps: Option<u32>,
    /// Fixed photon cutoff (default: raised automatically until stable)
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Parity sector to solve
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    /// Energy levels kept per parity sector
    #[arg(long)]
    pub levels: Option<u32>,
    /// Output CSV path (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file providing defaults for any long flag
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write a plot description file next to the CSV
    #[arg(long)]
    pub plot_script: bool,
}

#[derive(Args)]
pub struct GfuncArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Lower edge of the trial energy window
    #[arg(long, allow_hyphen_values = true)]
    pub emin: Option<f64>,
    /// Upper edge of the trial energy window
    #[arg(long, allow_hyphen_values = true)]
    pub emax: Option<f64>,
    /// Matching point between the first two series (needs --beta2)
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Option<f64>,
    /// Matching point between the last two series (needs --beta1)
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
}

#[derive(Args)]
pub struct QuasiArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Top photon number of the candidate chain
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Both,
}

impl ParityArg {
    fn sector(self) -> Sector {
        match self {
            ParityArg::Even => Sector::Even,
            ParityArg::Odd => Sector::Odd,
            ParityArg::Both => Sector::All,
        }
    }
}

/// Flags specific to one subcommand, defaulted for the others.
#[derive(Default)]
pub struct ExtraArgs {
    pub emin: Option<f64>,
    pub emax: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub n: Option<u32>,
}

impl From<&GfuncArgs> for ExtraArgs {
    fn from(a: &GfuncArgs) -> Self {
        ExtraArgs { emin: a.emin, emax: a.emax, beta1: a.beta1, beta2: a.beta2, n: None }
    }
}

impl From<&QuasiArgs> for ExtraArgs {
    fn from(a: &QuasiArgs) -> Self {
        ExtraArgs { n: a.n, ..ExtraArgs::default() }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    delta1: Option<f64>,
    delta2: Option<f64>,
    ratio: Option<String>,
    gmin: Option<f64>,
    gmax: Option<f64>,
    steps: Option<u32>,
    nmax: Option<u32>,
    parity: Option<String>,
    levels: Option<u32>,
    out: Option<PathBuf>,
    emin: Option<f64>,
    emax: Option<f64>,
    beta1: Option<f64>,
    beta2: Option<f64>,
    n: Option<u32>,
    plot_script: Option<bool>,
}

/// Fully merged and validated run settings.
pub struct Settings {
    /// Detunings plus the coupling split at unit total coupling.
    pub base: ModelParams,
    pub grid: Vec<f64>,
    pub trunc: TruncationSpec,
    pub nmax: Option<u32>,
    pub sector: Sector,
    pub levels: Option<u32>,
    pub out: Option<PathBuf>,
    pub plot_script: bool,
    pub window: (f64, f64),
    pub betas: Option<(f64, f64)>,
    pub n_top: Option<u32>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_ratio(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || usage(format!("--ratio wants a:b with non-negative numbers, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 || a + b == 0.0 {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_parity(s: &str) -> Result<Sector, CliError> {
    match s {
        "even" => Ok(Sector::Even),
        "odd" => Ok(Sector::Odd),
        "both" => Ok(Sector::All),
        _ => Err(usage(format!("parity must be even, odd or both, got {s:?}"))),
    }
}

fn load_file(path: &std::path::Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn build_grid(gmin: f64, gmax: f64, steps: u32) -> Vec<f64> {
    if gmax == gmin {
        return vec![gmin];
    }
    let mut grid: Vec<f64> =
        (0..=steps).map(|k| gmin + (gmax - gmin) * k as f64 / steps as f64).collect();
    *grid.last_mut().unwrap() = gmax;
    grid
}

impl Settings {
    pub fn resolve(shared: &SharedArgs, extra: &ExtraArgs) -> Result<Settings, CliError> {
        let file = match &shared.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };

        let delta1 = shared.delta1.or(file.delta1).ok_or_else(|| usage("--delta1 is required"))?;
        let delta2 = shared.delta2.or(file.delta2).ok_or_else(|| usage("--delta2 is required"))?;
        let ratio_text = shared.ratio.clone().or(file.ratio).unwrap_or_else(|| "1:1".into());
        let (ra, rb) = parse_ratio(&ratio_text)?;
        let gmin = shared.gmin.or(file.gmin).unwrap_or(0.0);
        let gmax = shared.gmax.or(file.gmax).unwrap_or(3.0);
        let steps = shared.steps.or(file.steps).unwrap_or(30);
        let nmax = shared.nmax.or(file.nmax);
        let sector = match shared.parity {
            Some(p) => p.sector(),
            None => match &file.parity {
                Some(s) => parse_parity(s)?,
                None => Sector::All,
            },
        };
        let levels = shared.levels.or(file.levels);
        let out = shared.out.clone().or(file.out);
        let plot_script = shared.plot_script || file.plot_script.unwrap_or(false);
        let emin = extra.emin.or(file.emin).unwrap_or(-1.0);
        let emax = extra.emax.or(file.emax).unwrap_or(4.0);
        let betas = match (extra.beta1.or(file.beta1), extra.beta2.or(file.beta2)) {
            (None, None) => None,
            (Some(b1), Some(b2)) => Some((b1, b2)),
            _ => return Err(usage("--beta1 and --beta2 must be given together")),
        };
        let n_top = extra.n.or(file.n);

        if !gmin.is_finite() || gmin < 0.0 {
            return Err(usage(format!("--gmin must be non-negative, got {gmin}")));
        }
        if !gmax.is_finite() || gmax < gmin {
            return Err(usage(format!("--gmax must be at least gmin, got {gmax}")));
        }
        if steps < 1 {
            return Err(usage("--steps must be at least 1"));
        }
        if !emin.is_finite() || !emax.is_finite() || emax < emin {
            return Err(usage(format!("energy window [{emin}, {emax}] is not ordered")));
        }
        if plot_script && out.is_none() {
            return Err(usage("--plot-script needs --out"));
        }

        let base = ModelParams::new(1.0, ra / (ra + rb), rb / (ra + rb), delta1, delta2)
            .map_err(|e| usage(e.to_string()))?;
        let trunc = match nmax {
            Some(n) => TruncationSpec { n_max: n.max(1), auto_extend: false, ..TruncationSpec::default() },
            None => TruncationSpec::default(),
        };
        Ok(Settings {
            base,
            grid: build_grid(gmin, gmax, steps),
            trunc,
            nmax,
            sector,
            levels,
            out,
            plot_script,
            window: (emin, emax),
            betas,
            n_top,
        })
    }
}
