//! Typed run configurations built from [`Settings`].

use std::path::PathBuf;

use xyzchain_core::critical::{ScanOptions, DEFAULT_SCAN_POINTS, DEFAULT_TOL, EPS_ZERO};
use xyzchain_core::validate::{ValidateOptions, DEFAULT_DRAWS, DEFAULT_SEED};
use xyzchain_core::{Axis, Boundary, ChainParams, CriticalKind, Pipeline, SweepParam, SweepSpec, Which};

use crate::exit::CliError;
use crate::settings::{Entry, Settings};

/// Environment variable holding the default worker count for sweeps.
pub const THREADS_ENV: &str = "XYZCHAIN_THREADS";

pub const MODEL_KEYS: &[&str] = &["n", "j", "gamma", "jx", "jy", "jz", "b", "boundary"];

pub const SWEEP_KEYS: &[&str] = &["t", "axis", "out", "pair", "pipeline", "threads"];
pub const CRITICAL_KEYS: &[&str] = &[
    "kind", "bracket", "which", "tol", "eps_zero", "points", "pair", "pipeline", "scan_out",
];
pub const VALIDATE_KEYS: &[&str] = &["seed", "draws", "self_test"];

/// Everything `sweep` needs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub spec: SweepSpec,
    /// `None` writes the CSV to standard output.
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalConfig {
    pub params: ChainParams,
    pub kind: CriticalKind,
    pub bracket: (f64, f64),
    pub which: Which,
    pub scan: ScanOptions,
    pub scan_out: Option<PathBuf>,
}

fn bad(e: &Entry, msg: impl std::fmt::Display) -> CliError {
    CliError::usage(format!("{}: {msg}", e.origin))
}

fn parse_f64(e: &Entry) -> Result<f64, CliError> {
    let x: f64 = e
        .value
        .parse()
        .map_err(|_| bad(e, format_args!("expected a number, got {:?}", e.value)))?;
    if !x.is_finite() {
        return Err(bad(e, "value must be finite"));
    }
    Ok(x)
}

fn parse_positive(e: &Entry) -> Result<f64, CliError> {
    let x = parse_f64(e)?;
    if x <= 0.0 {
        return Err(bad(e, "value must be positive"));
    }
    Ok(x)
}

fn parse_usize(e: &Entry) -> Result<usize, CliError> {
    e.value
        .parse()
        .map_err(|_| bad(e, format_args!("expected a non-negative integer, got {:?}", e.value)))
}

fn parse_bool(e: &Entry) -> Result<bool, CliError> {
    match e.value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(bad(e, format_args!("expected true or false, got {:?}", e.value))),
    }
}

fn parse_core<T: std::str::FromStr<Err = xyzchain_core::Error>>(e: &Entry) -> Result<T, CliError> {
    e.value.parse().map_err(|err| bad(e, err))
}

/// `NAME:min:max:steps`, endpoints inclusive.
pub fn parse_axis(e: &Entry) -> Result<Axis, CliError> {
    let parts: Vec<&str> = e.value.split(':').map(str::trim).collect();
    let [name, lo, hi, steps] = parts[..] else {
        return Err(bad(e, format_args!("expected NAME:min:max:steps, got {:?}", e.value)));
    };
    let param: SweepParam = name.parse().map_err(|err| bad(e, err))?;
    let num = |s: &str| -> Result<f64, CliError> {
        s.parse::<f64>()
            .map_err(|_| bad(e, format_args!("bad axis bound {s:?}")))
    };
    let steps: usize = steps
        .parse()
        .map_err(|_| bad(e, format_args!("bad step count {steps:?}")))?;
    Axis::new(param, num(lo)?, num(hi)?, steps).map_err(|err| bad(e, err))
}

/// `lo:hi` with `lo < hi`.
pub fn parse_bracket(e: &Entry) -> Result<(f64, f64), CliError> {
    let (lo, hi) = e
        .value
        .split_once(':')
        .ok_or_else(|| bad(e, format_args!("expected lo:hi, got {:?}", e.value)))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| bad(e, format_args!("bad bound {lo:?}")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| bad(e, format_args!("bad bound {hi:?}")))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(bad(e, format_args!("bracket needs finite lo < hi, got {lo}:{hi}")));
    }
    Ok((lo, hi))
}

/// `a,b`.
pub fn parse_pair(e: &Entry) -> Result<(usize, usize), CliError> {
    let (a, b) = e
        .value
        .split_once(',')
        .ok_or_else(|| bad(e, format_args!("expected a,b, got {:?}", e.value)))?;
    let idx = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| bad(e, format_args!("bad qubit index {s:?}")))
    };
    Ok((idx(a)?, idx(b)?))
}

fn opt<T>(s: &Settings, key: &str, parse: impl Fn(&Entry) -> Result<T, CliError>) -> Result<Option<T>, CliError> {
    s.get(key).map(parse).transpose()
}

/// Chain parameters from either `(j, gamma)` or `(jx, jy)`.
pub fn chain_params(s: &Settings) -> Result<ChainParams, CliError> {
    let n = opt(s, "n", parse_usize)?.unwrap_or(2);
    let jz = opt(s, "jz", parse_f64)?.unwrap_or(0.0);
    let b = opt(s, "b", parse_f64)?.unwrap_or(0.0);
    let boundary = opt(s, "boundary", parse_core::<Boundary>)?.unwrap_or_else(|| Boundary::default_for(n));

    let j = opt(s, "j", parse_f64)?;
    let gamma = opt(s, "gamma", parse_f64)?;
    let jx = opt(s, "jx", parse_f64)?;
    let jy = opt(s, "jy", parse_f64)?;
    let (jx, jy) = match (j, gamma, jx, jy) {
        (Some(j), Some(g), None, None) => (j * (1.0 + g), j * (1.0 - g)),
        (None, None, Some(x), Some(y)) => (x, y),
        (None, None, None, None) => {
            return Err(CliError::usage(
                "couplings missing: give --j and --gamma, or --jx and --jy",
            ))
        }
        _ => {
            return Err(CliError::usage(
                "couplings need exactly one complete form: --j with --gamma, or --jx with --jy",
            ))
        }
    };
    ChainParams::new(n, jx, jy, jz, b, boundary).map_err(|e| CliError::usage(e.to_string()))
}

fn threads(s: &Settings, env: Option<&str>) -> Result<Option<usize>, CliError> {
    if let Some(t) = opt(s, "threads", parse_usize)? {
        return Ok(Some(t));
    }
    match env {
        Some(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::usage(format!("{THREADS_ENV}: expected a non-negative integer, got {v:?}"))),
        _ => Ok(None),
    }
}

impl RunConfig {
    /// `env_threads` is the value of [`THREADS_ENV`], used when neither the
    /// flags nor the config file set `threads`.
    pub fn from_settings(s: &Settings, env_threads: Option<&str>) -> Result<Self, CliError> {
        s.check_keys(&[MODEL_KEYS, SWEEP_KEYS], "sweep")?;
        let base = chain_params(s)?;
        let axes = s
            .get_all("axis")
            .iter()
            .map(parse_axis)
            .collect::<Result<Vec<_>, _>>()?;
        let t_axis = axes.iter().any(|a| a.param == SweepParam::T);
        let t = match (s.get("t"), t_axis) {
            (Some(e), true) => return Err(bad(e, "--t conflicts with a T axis")),
            (Some(e), false) => parse_f64(e)?,
            (None, true) => 0.0,
            (None, false) => return Err(CliError::usage("temperature missing: give --t or a T axis")),
        };
        let mut spec = SweepSpec::new(base, axes, t);
        if let Some(pair) = opt(s, "pair", parse_pair)? {
            spec.pair = pair;
        }
        if let Some(p) = opt(s, "pipeline", parse_core::<Pipeline>)? {
            spec.pipeline = p;
        }
        spec.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(RunConfig {
            spec,
            out: s.get("out").map(|e| PathBuf::from(&e.value)),
            threads: threads(s, env_threads)?,
        })
    }
}

impl CriticalConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        s.check_keys(&[MODEL_KEYS, CRITICAL_KEYS], "critical")?;
        let params = chain_params(s)?;
        let kind = match s.get("kind") {
            None => return Err(CliError::usage("--kind is required (bc or tc)")),
            Some(e) => match e.value.to_ascii_lowercase().as_str() {
                "bc" | "field" | "field_at_zero_t" => CriticalKind::FieldAtZeroT,
                "tc" | "temperature" => CriticalKind::Temperature,
                _ => return Err(bad(e, format_args!("unknown kind {:?} (expected bc or tc)", e.value))),
            },
        };
        let bracket = match s.get("bracket") {
            Some(e) => parse_bracket(e)?,
            None => return Err(CliError::usage("--bracket lo:hi is required")),
        };
        if kind == CriticalKind::FieldAtZeroT {
            for key in ["which", "eps_zero", "pair", "pipeline"] {
                if let Some(e) = s.get(key) {
                    return Err(bad(e, format_args!("`{key}` does not apply to --kind bc")));
                }
            }
        }
        let mut scan = ScanOptions {
            points: DEFAULT_SCAN_POINTS,
            eps_zero: EPS_ZERO,
            tol: DEFAULT_TOL,
            ..ScanOptions::default()
        };
        if let Some(tol) = opt(s, "tol", parse_positive)? {
            scan.tol = tol;
        }
        if let Some(eps) = opt(s, "eps_zero", parse_positive)? {
            scan.eps_zero = eps;
        }
        if let Some(e) = s.get("points") {
            scan.points = parse_usize(e)?;
            if scan.points < 2 {
                return Err(bad(e, "need at least 2 scan points"));
            }
        }
        if let Some(pair) = opt(s, "pair", parse_pair)? {
            scan.pair = pair;
        }
        if let Some(p) = opt(s, "pipeline", parse_core::<Pipeline>)? {
            scan.pipeline = p;
        }
        Ok(CriticalConfig {
            params,
            kind,
            bracket,
            which: opt(s, "which", parse_core::<Which>)?.unwrap_or(Which::FirstAbove),
            scan,
            scan_out: s.get("scan_out").map(|e| PathBuf::from(&e.value)),
        })
    }
}

pub fn validate_options(s: &Settings) -> Result<ValidateOptions, CliError> {
    s.check_keys(&[VALIDATE_KEYS], "validate")?;
    let draws = opt(s, "draws", parse_usize)?.unwrap_or(DEFAULT_DRAWS);
    if draws == 0 {
        return Err(bad(s.get("draws").unwrap(), "need at least one draw"));
    }
    let seed = match s.get("seed") {
        Some(e) => e
            .value
            .parse()
            .map_err(|_| bad(e, format_args!("expected an unsigned integer, got {:?}", e.value)))?,
        None => DEFAULT_SEED,
    };
    Ok(ValidateOptions {
        seed,
        draws,
        inject_fault: opt(s, "self_test", parse_bool)?.unwrap_or(false),
    })
}
