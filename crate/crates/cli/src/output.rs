//! CSV emission. Files are written to a temporary sibling and renamed into
//! place only once complete, so a failed run never leaves a partial file.

use std::io::Write;
use std::path::Path;

use xyzchain_core::SweepResult;

use crate::exit::CliError;

pub const SWEEP_HEADER: [&str; 14] = [
    "n",
    "j",
    "gamma",
    "jz",
    "b",
    "t",
    "pair_a",
    "pair_b",
    "concurrence",
    "lambda1",
    "lambda2",
    "lambda3",
    "lambda4",
    "log_z",
];

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn io_err(path: Option<&Path>, e: impl std::fmt::Display) -> CliError {
    match path {
        Some(p) => CliError::usage(format!("cannot write {}: {e}", p.display())),
        None => CliError::usage(format!("cannot write output: {e}")),
    }
}

pub fn write_sweep<W: Write>(w: W, result: &SweepResult) -> csv::Result<()> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER)?;
    for r in &result.records {
        let p = &r.point;
        let mut row = vec![
            p.n_sites.to_string(),
            fmt_f64(p.j),
            fmt_f64(p.gamma),
            fmt_f64(p.jz),
            fmt_f64(p.b),
            fmt_f64(p.t),
            r.pair.0.to_string(),
            r.pair.1.to_string(),
            fmt_f64(r.concurrence),
        ];
        row.extend(r.lambdas.iter().map(|&l| fmt_f64(l)));
        row.push(fmt_f64(r.log_partition));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Two-column scan table, e.g. `t,concurrence`.
pub fn write_scan<W: Write>(w: W, x_name: &str, samples: &[(f64, f64)]) -> csv::Result<()> {
    let mut out = writer(w);
    out.write_record([x_name, "concurrence"])?;
    for &(x, c) in samples {
        out.write_record([fmt_f64(x), fmt_f64(c)])?;
    }
    out.flush()?;
    Ok(())
}

/// Runs `fill` against a temporary file next to `path`, then renames it over
/// `path`. On any error the temporary file is removed.
pub fn write_atomically(path: &Path, fill: impl FnOnce(&mut std::fs::File) -> csv::Result<()>) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new()
        .prefix(".xyzchain-")
        .suffix(".tmp")
        .tempfile_in(dir)
        .map_err(|e| io_err(Some(path), e))?;
    fill(tmp.as_file_mut()).map_err(|e| io_err(Some(path), e))?;
    tmp.as_file().sync_all().map_err(|e| io_err(Some(path), e))?;
    tmp.persist(path).map_err(|e| io_err(Some(path), e.error))?;
    Ok(())
}

pub fn write_stdout(fill: impl FnOnce(&mut std::io::StdoutLock<'_>) -> csv::Result<()>) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    fill(&mut lock).map_err(|e| io_err(None, e))
}
