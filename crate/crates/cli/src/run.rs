//! Subcommand execution on top of the core solvers.

use std::fmt;

use qrabi_core::model::{
    sort_records, ExactState, Method, Parity, Qubit, Sector, SpectrumRecord,
};
use qrabi_core::{fock, gfunc, jc, quasi, Error};

use crate::args::{Cli, Command, ExtraArgs, Settings};
use crate::output::{deliver, fmt_float, spectrum_csv, PlotKind};

const DEFAULT_LEVELS: u32 = 12;
const VERIFY_NMAX: u32 = 12;
const VERIFY_TOL: f64 = 1e-10;
const COND_TOL: f64 = 1e-12;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    NotApplicable(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::NotApplicable(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m)
            | CliError::Numerical(m)
            | CliError::NotApplicable(m)
            | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            Error::ConditionNotMet(_) | Error::MethodNotApplicable(_) => {
                CliError::NotApplicable(e.to_string())
            }
            Error::NumericalFailure(_) => CliError::Numerical(e.to_string()),
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Fock(a) => fock_cmd(&Settings::resolve(a, &ExtraArgs::default())?),
        Command::Gfunc(a) => gfunc_cmd(&Settings::resolve(&a.shared, &ExtraArgs::from(a))?),
        Command::Jc(a) => jc_cmd(&Settings::resolve(a, &ExtraArgs::default())?),
        Command::Quasi(a) => quasi_cmd(&Settings::resolve(&a.shared, &ExtraArgs::from(a))?),
        Command::Verify(a) => verify_cmd(&Settings::resolve(a, &ExtraArgs::default())?),
        Command::Sweep(a) => sweep_cmd(&Settings::resolve(&a.shared, &ExtraArgs::from(a))?),
    }
}

fn fock_cmd(s: &Settings) -> Result<(), CliError> {
    let levels = s.levels.unwrap_or(DEFAULT_LEVELS);
    let records = fock::spectrum_sweep(&s.base, &s.grid, s.sector, levels, &s.trunc)?;
    deliver(s, &spectrum_csv(&records), PlotKind::Spectrum)
}

fn jc_records(s: &Settings, levels: u32) -> Result<Vec<SpectrumRecord>, CliError> {
    // enough excitation blocks that the kept levels are complete per parity
    let c_max = 2 * levels + 6;
    let mut records = jc::jc_sweep(&s.base, &s.grid, c_max)?;
    records.retain(|r| r.level < levels && (s.sector == Sector::All || r.parity == s.sector));
    Ok(records)
}

fn jc_cmd(s: &Settings) -> Result<(), CliError> {
    let records = jc_records(s, s.levels.unwrap_or(DEFAULT_LEVELS))?;
    deliver(s, &spectrum_csv(&records), PlotKind::Spectrum)
}

fn gfunc_records(s: &Settings, grid: &[f64]) -> Result<Vec<SpectrumRecord>, CliError> {
    let (emin, emax) = s.window;
    match s.betas {
        None => Ok(gfunc::gfunc_sweep(&s.base, grid, s.sector, emin, emax)?),
        Some((b1, b2)) => {
            let mut records = Vec::new();
            for &g in grid {
                let p = s.base.with_total_coupling(g)?;
                let betas = gfunc::manual_betas(&p, b1, b2)?;
                for &parity in s.sector.parities() {
                    let roots = gfunc::find_roots(&p, parity, emin, emax, Some(&betas))?;
                    for (level, root) in roots.iter().enumerate() {
                        records.push(SpectrumRecord {
                            g,
                            parity: parity.into(),
                            level: level as u32,
                            energy: root.energy,
                            method: Method::GFunc,
                        });
                    }
                }
            }
            sort_records(&mut records);
            Ok(records)
        }
    }
}

fn gfunc_cmd(s: &Settings) -> Result<(), CliError> {
    let mut records = gfunc_records(s, &s.grid)?;
    if let Some(k) = s.levels {
        records.retain(|r| r.level < k);
    }
    deliver(s, &spectrum_csv(&records), PlotKind::Spectrum)
}

fn closed_forms(s: &Settings, g: f64) -> Vec<(&'static str, ExactState)> {
    let mut out = Vec::new();
    if (s.base.g1 - s.base.g2).abs() > COND_TOL {
        return out;
    }
    let (d1, d2) = (s.base.delta1, s.base.delta2);
    if g > 0.0 {
        if (d1 - d2 - 1.0).abs() <= COND_TOL {
            if let Ok(state) = quasi::psi_g1(d1, d2, g) {
                out.push(("psi_g1", state));
            }
        }
        if (d2 - d1 - 1.0).abs() <= COND_TOL {
            if let Ok(state) = quasi::psi_g2(d1, d2, g) {
                out.push(("psi_g2", state));
            }
        }
        if (d1 + d2 - 1.0).abs() <= COND_TOL {
            if let Ok(state) = quasi::psi_e(d1, d2, g) {
                out.push(("psi_e", state));
            }
        }
    }
    if (d1 - d2).abs() <= COND_TOL {
        if let Ok(state) = quasi::dark_state(0, d1, g) {
            out.push(("dark", state));
        }
    }
    out
}

fn verify_cmd(s: &Settings) -> Result<(), CliError> {
    let nv = s.nmax.unwrap_or(VERIFY_NMAX);
    let mut text = String::from("g,state,energy,residual,leakage\n");
    let mut tried = false;
    let mut worst = 0.0f64;
    for &g in &s.grid {
        let p = s.base.with_total_coupling(g)?;
        for (name, state) in closed_forms(s, g) {
            let rep = quasi::verify_eigenstate(&p, &state.amplitudes, state.energy, nv)?;
            tried = true;
            worst = worst.max(rep.residual.max(rep.leakage));
            text.push_str(&fmt_float(g));
            text.push(',');
            text.push_str(name);
            text.push(',');
            text.push_str(&fmt_float(state.energy));
            text.push(',');
            text.push_str(&fmt_float(rep.residual));
            text.push(',');
            text.push_str(&fmt_float(rep.leakage));
            text.push('\n');
        }
    }
    if !tried {
        return Err(CliError::NotApplicable(format!(
            "no closed-form eigenstate at delta1 = {}, delta2 = {} with coupling split {}:{}",
            s.base.delta1, s.base.delta2, s.base.g1, s.base.g2
        )));
    }
    deliver(s, &text, PlotKind::Residuals)?;
    if worst > VERIFY_TOL {
        return Err(CliError::Numerical(format!(
            "worst residual {worst:e} exceeds {VERIFY_TOL:e}"
        )));
    }
    Ok(())
}

fn qubit_letter(q: Qubit) -> char {
    match q {
        Qubit::Excited => 'e',
        Qubit::Ground => 'g',
    }
}

fn quasi_cmd(s: &Settings) -> Result<(), CliError> {
    let n_top = s.n_top.ok_or_else(|| CliError::Usage("--n is required for quasi".into()))?;
    let implied = if n_top % 2 == 0 { Parity::Odd } else { Parity::Even };
    let parity = match s.sector {
        Sector::All => implied,
        sec => {
            let wanted = sec.parities()[0];
            if wanted != implied {
                return Err(CliError::Usage(format!(
                    "a chain topping at n = {n_top} lives in the {} sector",
                    implied.label()
                )));
            }
            wanted
        }
    };
    let g_hi = *s.grid.last().unwrap();
    if g_hi <= 0.0 {
        return Err(CliError::Usage("--gmax must be positive for quasi".into()));
    }
    let (d1, d2) = (s.base.delta1, s.base.delta2);
    let sols = quasi::solve_quasiexact_couplings(n_top, parity, d1, d2, g_hi)?;

    let mut text = format!(
        "chain closures for n_top = {n_top} ({} parity), delta1 = {d1}, delta2 = {d2}, g in (0, {g_hi}]\n",
        parity.label()
    );
    if sols.is_empty() {
        text.push_str("no closure found\n");
    }
    for sol in &sols {
        text.push_str(&format!(
            "g* = {}  energy = {}  residual = {:.1e}\n",
            fmt_float(sol.g),
            fmt_float(sol.energy),
            sol.residual
        ));
        for (state, amp) in sol.states.iter().zip(&sol.amplitudes) {
            text.push_str(&format!(
                "  |{},{}{}>  {}\n",
                state.n,
                qubit_letter(state.q1),
                qubit_letter(state.q2),
                fmt_float(*amp)
            ));
        }
    }
    print!("{text}");
    if s.out.is_some() {
        let records: Vec<SpectrumRecord> = sols
            .iter()
            .map(|sol| SpectrumRecord {
                g: sol.g,
                parity: parity.into(),
                level: sol.n_top,
                energy: sol.energy,
                method: Method::Quasi,
            })
            .collect();
        deliver(s, &spectrum_csv(&records), PlotKind::Spectrum)?;
    }
    Ok(())
}

fn sweep_cmd(s: &Settings) -> Result<(), CliError> {
    let levels = s.levels.unwrap_or(DEFAULT_LEVELS);
    let mut records = fock::spectrum_sweep(&s.base, &s.grid, s.sector, levels, &s.trunc)?;
    records.extend(jc_records(s, levels)?);
    let positive: Vec<f64> = s.grid.iter().copied().filter(|g| *g > 0.0).collect();
    if !positive.is_empty() {
        // degenerate regimes are not an error here, the dense solver covers them
        match gfunc_records(s, &positive) {
            Ok(mut roots) => {
                roots.retain(|r| r.level < levels);
                records.extend(roots);
            }
            Err(CliError::NotApplicable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    sort_records(&mut records);
    deliver(s, &spectrum_csv(&records), PlotKind::Spectrum)
}
