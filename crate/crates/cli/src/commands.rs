//! The three subcommands, once their configuration is settled.

use std::time::Instant;

use xyzchain_core::critical::{critical_from_scan, scan_temperature, scan_zero_t_field};
use xyzchain_core::validate::{run_all, ValidateOptions};
use xyzchain_core::{find_critical_field_zero_t, run_sweep, CriticalKind, CriticalPoint, Error};

use crate::config::{CriticalConfig, RunConfig};
use crate::exit::{CliError, Exit};
use crate::output::{fmt_f64, write_atomically, write_scan, write_stdout, write_sweep};

pub fn sweep(cfg: &RunConfig) -> Result<Exit, CliError> {
    let start = Instant::now();
    let result = run_sweep(&cfg.spec, cfg.threads).map_err(CliError::from_core)?;
    match &cfg.out {
        Some(path) => write_atomically(path, |f| write_sweep(f, &result))?,
        None => write_stdout(|w| write_sweep(w, &result))?,
    }
    let (lo, hi) = result.concurrence_range().unwrap_or((f64::NAN, f64::NAN));
    let summary = format!(
        "sweep: {} points, concurrence min {} max {}, wall {:.3} s",
        result.records.len(),
        fmt_f64(lo),
        fmt_f64(hi),
        start.elapsed().as_secs_f64()
    );
    // Keep standard output clean when it carries the CSV.
    if cfg.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(Exit::Ok)
}

fn report(cp: &CriticalPoint) {
    println!("kind,location,bracket_width");
    println!(
        "{},{},{}",
        cp.kind.name(),
        fmt_f64(cp.location),
        fmt_f64(cp.bracket_width)
    );
}

pub fn critical(cfg: &CriticalConfig) -> Result<Exit, CliError> {
    let (lo, hi) = cfg.bracket;
    let found = match cfg.kind {
        CriticalKind::FieldAtZeroT => {
            if let Some(path) = &cfg.scan_out {
                let samples = scan_zero_t_field(&cfg.params, lo, hi, cfg.scan.points).map_err(CliError::from_core)?;
                write_atomically(path, |f| write_scan(f, "b", &samples))?;
            }
            find_critical_field_zero_t(&cfg.params, lo, hi, cfg.scan.tol)
        }
        CriticalKind::Temperature => {
            let scan = scan_temperature(&cfg.params, lo, hi, &cfg.scan).map_err(CliError::from_core)?;
            if let Some(path) = &cfg.scan_out {
                write_atomically(path, |f| write_scan(f, "t", &scan.samples))?;
            }
            critical_from_scan(&scan, cfg.which).ok_or(Error::NoTransition { lo, hi })
        }
    };
    report(&found.map_err(CliError::from_core)?);
    Ok(Exit::Ok)
}

pub fn validate(opts: &ValidateOptions) -> Result<Exit, CliError> {
    let report = run_all(opts).map_err(|e| CliError {
        exit: Exit::ValidationFailed,
        message: format!("validation aborted: {e}"),
    })?;
    println!("{report}");
    Ok(if report.passed() {
        Exit::Ok
    } else {
        Exit::ValidationFailed
    })
}
