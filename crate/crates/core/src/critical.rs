//! Critical points: the zero-temperature critical field `B_c`, critical
//! temperatures `T_c` and revival intervals.
//!
//! Temperature crossings are found on a uniform scan followed by bisection.
//! A plain scan misses zero regions narrower than its spacing, which is
//! exactly what happens near the onset of a revival, so every interior local
//! minimum of the scan is additionally probed by golden-section search
//! before being accepted as entangled throughout.

use std::fmt;
use std::str::FromStr;

use crate::entanglement::zero_t_concurrence;
use crate::error::{Error, Result};
use crate::model::ChainParams;
use crate::sweep::{evaluate_point, Pipeline};

/// Concurrence above this counts as entangled.
pub const EPS_ZERO: f64 = 1e-6;
/// Default bisection tolerance, in parameter units.
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_SCAN_POINTS: usize = 200;
/// Smallest resolution accepted by [`detect_revival`].
pub const MIN_REVIVAL_RESOLUTION: usize = 100;
/// Minimum concurrence jump across a bracket for `B_c` to count as a
/// discontinuity.
pub const DISCONTINUITY_JUMP: f64 = 0.1;
/// Concurrence within this of 1 counts as maximally entangled.
pub const MAX_ENTANGLED_SLACK: f64 = 1e-9;

const GOLDEN_MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    FieldAtZeroT,
    Temperature,
}

impl CriticalKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::FieldAtZeroT => "field_at_zero_t",
            Self::Temperature => "temperature",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Detection {
    SignChange,
    Discontinuity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub kind: CriticalKind,
    /// Midpoint of the final bracket.
    pub location: f64,
    pub bracket_width: f64,
    pub detection: Detection,
}

/// Which falling edge (entangled below, unentangled above) to report when
/// the scan finds several.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// Lowest crossing above the lower end of the bracket.
    FirstAbove,
    /// Highest crossing below the upper end of the bracket.
    LastBelow,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FirstAbove => "first_above",
            Self::LastBelow => "last_below",
        })
    }
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "first_above" => Ok(Self::FirstAbove),
            "last_below" => Ok(Self::LastBelow),
            _ => Err(Error::InvalidParams(format!(
                "unknown crossing selector {s:?} (expected first_above or last_below)"
            ))),
        }
    }
}

fn check_bracket(lo: f64, hi: f64, tol: f64) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidParams(format!("invalid bracket [{lo}, {hi}]")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Critical field of the two-qubit chain at `T = 0`.
///
/// Bisects on membership of the maximally entangled branch (`C = 1`), then
/// requires the final bracket to span a drop larger than
/// [`DISCONTINUITY_JUMP`]. Bisecting on the size of the endpoint difference
/// instead is unreliable: just past `B_c` the smooth decay of the other
/// branch can exceed the jump itself.
pub fn find_critical_field_zero_t(p: &ChainParams, b_lo: f64, b_hi: f64, tol: f64) -> Result<CriticalPoint> {
    if p.n_sites != 2 {
        return Err(Error::InvalidParams(format!(
            "critical field search requires n = 2, got {}",
            p.n_sites
        )));
    }
    check_bracket(b_lo, b_hi, tol)?;
    let f = |b: f64| zero_t_concurrence(&p.with_b(b));
    let on_plateau = |c: f64| c > 1.0 - MAX_ENTANGLED_SLACK;
    let no_transition = Error::NoTransition { lo: b_lo, hi: b_hi };

    let (mut lo, mut hi) = (b_lo, b_hi);
    let (mut f_lo, mut f_hi) = (f(lo)?, f(hi)?);
    let plateau_lo = on_plateau(f_lo);
    if plateau_lo == on_plateau(f_hi) {
        return Err(no_transition);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if on_plateau(f_mid) == plateau_lo {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    if (f_lo - f_hi).abs() <= DISCONTINUITY_JUMP {
        return Err(no_transition);
    }
    Ok(CriticalPoint {
        kind: CriticalKind::FieldAtZeroT,
        location: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        detection: Detection::Discontinuity,
    })
}

/// Samples of the zero-temperature concurrence on a uniform field grid.
pub fn scan_zero_t_field(p: &ChainParams, b_lo: f64, b_hi: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    check_bracket(b_lo, b_hi, 1.0)?;
    linspace(b_lo, b_hi, points.max(2))
        .into_iter()
        .map(|b| Ok((b, zero_t_concurrence(&p.with_b(b))?)))
        .collect()
}

/// Settings of a temperature scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub points: usize,
    pub eps_zero: f64,
    pub tol: f64,
    pub pair: (usize, usize),
    pub pipeline: Pipeline,
    /// Probe interior local minima for narrow zero regions.
    pub refine_dips: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            points: DEFAULT_SCAN_POINTS,
            eps_zero: EPS_ZERO,
            tol: DEFAULT_TOL,
            pair: (0, 1),
            pipeline: Pipeline::Generic,
            refine_dips: true,
        }
    }
}

/// A located change of the entangled/unentangled classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub location: f64,
    pub bracket: (f64, f64),
    /// Entangled below, unentangled above.
    pub falling: bool,
}

/// Maximal temperature interval with concurrence above `eps_zero`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TemperatureInterval {
    pub start: f64,
    pub end: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemperatureScan {
    /// `(T, C)` on the uniform grid.
    pub samples: Vec<(f64, f64)>,
    /// Sorted by location.
    pub edges: Vec<Edge>,
    pub intervals: Vec<TemperatureInterval>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
            }
        })
        .collect()
}

/// Bisects a classification change in `[lo, hi]`, where `lo` has class
/// `class_lo`, down to width `tol`.
fn bisect_edge<F>(f: &F, mut lo: f64, mut hi: f64, class_lo: bool, tol: f64) -> Result<Edge>
where
    F: Fn(f64) -> Result<bool>,
{
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? == class_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Edge {
        location: 0.5 * (lo + hi),
        bracket: (lo, hi),
        falling: class_lo,
    })
}

/// Golden-section search for a point in `[a, b]` with value `≤ eps`.
/// Returns the best point found.
fn golden_dip<F>(f: &F, mut a: f64, mut b: f64, eps: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..GOLDEN_MAX_ITER {
        if fc <= eps {
            return Ok((c, fc));
        }
        if fd <= eps {
            return Ok((d, fd));
        }
        if b - a <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// Classifies `[t_lo, t_hi]` into entangled intervals.
pub fn scan_temperature(p: &ChainParams, t_lo: f64, t_hi: f64, opts: &ScanOptions) -> Result<TemperatureScan> {
    check_bracket(t_lo, t_hi, opts.tol)?;
    if t_lo < 0.0 {
        return Err(Error::NegativeTemperature(t_lo));
    }
    if opts.points < 3 {
        return Err(Error::InvalidParams(format!(
            "scan needs at least 3 points, got {}",
            opts.points
        )));
    }
    if opts.eps_zero.is_nan() || opts.eps_zero <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "eps_zero must be positive, got {}",
            opts.eps_zero
        )));
    }
    let conc = |t: f64| -> Result<f64> { Ok(evaluate_point(p, t, opts.pair, opts.pipeline)?.concurrence.c) };
    let entangled = |t: f64| -> Result<bool> { Ok(conc(t)? > opts.eps_zero) };

    let ts = linspace(t_lo, t_hi, opts.points);
    let cs = ts.iter().map(|&t| conc(t)).collect::<Result<Vec<f64>>>()?;
    let ent: Vec<bool> = cs.iter().map(|&c| c > opts.eps_zero).collect();

    let mut edges = Vec::new();
    for i in 0..ts.len() - 1 {
        if ent[i] != ent[i + 1] {
            edges.push(bisect_edge(&entangled, ts[i], ts[i + 1], ent[i], opts.tol)?);
        }
        let interior_min =
            opts.refine_dips && i >= 1 && ent[i - 1] && ent[i] && ent[i + 1] && cs[i] < cs[i - 1] && cs[i] <= cs[i + 1];
        if interior_min {
            let (t_min, c_min) = golden_dip(&conc, ts[i - 1], ts[i + 1], opts.eps_zero)?;
            if c_min <= opts.eps_zero {
                edges.push(bisect_edge(&entangled, ts[i - 1], t_min, true, opts.tol)?);
                edges.push(bisect_edge(&entangled, t_min, ts[i + 1], false, opts.tol)?);
            }
        }
    }
    edges.sort_by(|a, b| a.location.total_cmp(&b.location));

    let mut intervals = Vec::new();
    let mut open = ent[0].then_some(t_lo);
    for e in &edges {
        if e.falling {
            if let Some(start) = open.take() {
                intervals.push(TemperatureInterval { start, end: e.location });
            }
        } else {
            open = Some(e.location);
        }
    }
    if let Some(start) = open {
        intervals.push(TemperatureInterval { start, end: t_hi });
    }

    Ok(TemperatureScan {
        samples: ts.into_iter().zip(cs).collect(),
        edges,
        intervals,
    })
}

/// Critical temperature: the selected falling edge of `C > ε_zero` in
/// `[t_lo, t_hi]`.
pub fn find_critical_temperature(
    p: &ChainParams,
    t_lo: f64,
    t_hi: f64,
    tol: f64,
    which: Which,
) -> Result<CriticalPoint> {
    let opts = ScanOptions {
        tol,
        ..ScanOptions::default()
    };
    find_critical_temperature_with(p, t_lo, t_hi, which, &opts)
}

pub fn find_critical_temperature_with(
    p: &ChainParams,
    t_lo: f64,
    t_hi: f64,
    which: Which,
    opts: &ScanOptions,
) -> Result<CriticalPoint> {
    let scan = scan_temperature(p, t_lo, t_hi, opts)?;
    critical_from_scan(&scan, which).ok_or(Error::NoTransition { lo: t_lo, hi: t_hi })
}

/// Picks the requested falling edge out of a finished scan.
pub fn critical_from_scan(scan: &TemperatureScan, which: Which) -> Option<CriticalPoint> {
    let mut falling = scan.edges.iter().filter(|e| e.falling);
    let edge = match which {
        Which::FirstAbove => falling.next(),
        Which::LastBelow => falling.next_back(),
    }?;
    Some(CriticalPoint {
        kind: CriticalKind::Temperature,
        location: edge.location,
        bracket_width: edge.bracket.1 - edge.bracket.0,
        detection: Detection::SignChange,
    })
}

/// Maximal temperature intervals of positive concurrence; two or more mean
/// a revival.
pub fn detect_revival(p: &ChainParams, t_range: (f64, f64), resolution: usize) -> Result<Vec<TemperatureInterval>> {
    if resolution < MIN_REVIVAL_RESOLUTION {
        return Err(Error::InvalidParams(format!(
            "revival resolution must be at least {MIN_REVIVAL_RESOLUTION}, got {resolution}"
        )));
    }
    let opts = ScanOptions {
        points: resolution,
        ..ScanOptions::default()
    };
    Ok(scan_temperature(p, t_range.0, t_range.1, &opts)?.intervals)
}
