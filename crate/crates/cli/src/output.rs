//! Deterministic text artifacts: CSV tables, the optional plot description,
//! and atomic file replacement.

use std::io::Write;
use std::path::{Path, PathBuf};

use qrabi_core::model::SpectrumRecord;

use crate::args::Settings;
use crate::run::CliError;

/// 15 significant digits, enough to round-trip f64 for diff-based comparisons.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn spectrum_csv(records: &[SpectrumRecord]) -> String {
    let mut s = String::with_capacity(32 + records.len() * 48);
    s.push_str("g,parity,level,energy,method\n");
    for r in records {
        s.push_str(&fmt_float(r.g));
        s.push(',');
        s.push_str(r.parity.label());
        s.push(',');
        s.push_str(&r.level.to_string());
        s.push(',');
        s.push_str(&fmt_float(r.energy));
        s.push(',');
        s.push_str(r.method.label());
        s.push('\n');
    }
    s
}

/// What the plot sidecar should describe.
pub enum PlotKind {
    Spectrum,
    Residuals,
}

fn plot_text(kind: &PlotKind, csv_name: &str) -> String {
    let (y, series) = match kind {
        PlotKind::Spectrum => ("energy", "parity method level"),
        PlotKind::Residuals => ("residual", "state"),
    };
    format!(
        "# series description for {csv_name}\n\
         data {csv_name}\n\
         format csv header\n\
         x g\n\
         y {y}\n\
         series {series}\n\
         xlabel total coupling g1 + g2\n\
         ylabel {y} in units of the mode frequency\n\
         style points\n"
    )
}

fn atomic_write(path: &Path, text: &str) -> Result<(), CliError> {
    let io_err = |e: &dyn std::fmt::Display| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(&e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| io_err(&e))?;
    tmp.persist(path).map_err(|e| io_err(&e))?;
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".plot");
    out.with_file_name(name)
}

/// Write to `--out` (plus the optional sidecar) or print to stdout.
pub fn deliver(settings: &Settings, text: &str, kind: PlotKind) -> Result<(), CliError> {
    match &settings.out {
        Some(path) => {
            atomic_write(path, text)?;
            if settings.plot_script {
                let name = path.file_name().map(|n| n.to_string_lossy().into_owned());
                let csv_name = name.unwrap_or_else(|| path.display().to_string());
                atomic_write(&sidecar_path(path), &plot_text(&kind, &csv_name))?;
            }
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
