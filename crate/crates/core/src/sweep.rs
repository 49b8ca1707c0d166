//! Parameter-grid evaluation.
//!
//! A [`SweepSpec`] names up to two axes over `{B, T, Jz, gamma, J}`. Grid
//! points are independent and evaluated in parallel, but every point runs
//! the same deterministic sequence of floating-point operations, so the
//! result is bitwise identical for any thread count. Records are stored
//! row-major: the last axis varies fastest.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::{concurrence_from_lambdas, evaluate_pair, two_qubit_thermal_lambdas, ConcurrenceValue};
use crate::error::{Error, Result};
use crate::model::ChainParams;
use crate::thermal::{two_qubit_log_partition, MIN_TEMPERATURE};

/// Default lower end of temperature axes; `T = 0` is only used when asked
/// for explicitly.
pub const DEFAULT_T_MIN: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepParam {
    B,
    T,
    Jz,
    Gamma,
    J,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [Self::B, Self::T, Self::Jz, Self::Gamma, Self::J];

    pub fn name(self) -> &'static str {
        match self {
            Self::B => "B",
            Self::T => "T",
            Self::Jz => "JZ",
            Self::Gamma => "GAMMA",
            Self::J => "J",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "B" => Ok(Self::B),
            "T" => Ok(Self::T),
            "JZ" | "J_Z" => Ok(Self::Jz),
            "GAMMA" | "G" => Ok(Self::Gamma),
            "J" => Ok(Self::J),
            _ => Err(Error::InvalidParams(format!(
                "unknown sweep parameter {s:?} (expected B, T, JZ, GAMMA or J)"
            ))),
        }
    }
}

/// Uniform inclusive axis `min, …, max` with `steps` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: SweepParam, min: f64, max: f64, steps: usize) -> Result<Self> {
        let axis = Axis { param, min, max, steps };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidParams(format!(
                "{} axis bounds must be finite",
                self.param
            )));
        }
        if self.min >= self.max {
            return Err(Error::InvalidParams(format!(
                "{} axis needs min < max, got {}..{}",
                self.param, self.min, self.max
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidParams(format!(
                "{} axis needs at least 2 steps, got {}",
                self.param, self.steps
            )));
        }
        if self.param == SweepParam::T && self.min < 0.0 {
            return Err(Error::NegativeTemperature(self.min));
        }
        Ok(())
    }

    /// The `i`-th grid value; the last one is exactly `max`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * (i as f64) / ((self.steps - 1) as f64)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

/// How each grid point is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pipeline {
    /// Hamiltonian, Gibbs state, partial trace and Wootters.
    #[default]
    Generic,
    /// Closed-form two-qubit `λ`s; only for `N = 2`. Points below
    /// [`MIN_TEMPERATURE`] still go through the generic zero-temperature path.
    ClosedForm,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Self::Generic => "generic",
            Self::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "generic" => Ok(Self::Generic),
            "closed-form" | "closed" => Ok(Self::ClosedForm),
            _ => Err(Error::InvalidParams(format!(
                "unknown pipeline {s:?} (expected generic or closed-form)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: ChainParams,
    /// Zero, one or two axes. With no axis the grid is the single base point.
    pub axes: Vec<Axis>,
    /// Used unless `T` is an axis.
    pub temperature: f64,
    pub pair: (usize, usize),
    pub pipeline: Pipeline,
}

impl SweepSpec {
    pub fn new(base: ChainParams, axes: Vec<Axis>, temperature: f64) -> Self {
        SweepSpec {
            base,
            axes,
            temperature,
            pair: (0, 1),
            pipeline: Pipeline::Generic,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.axes.len() > 2 {
            return Err(Error::InvalidParams(format!(
                "at most two axes, got {}",
                self.axes.len()
            )));
        }
        for a in &self.axes {
            a.validate()?;
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::InvalidParams(format!("axis {} given twice", self.axes[0].param)));
        }
        if !self.has_axis(SweepParam::T) && (self.temperature.is_nan() || self.temperature < 0.0) {
            return Err(Error::NegativeTemperature(self.temperature));
        }
        let (a, b) = self.pair;
        let n = self.base.n_sites;
        for q in [a, b] {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
            }
        }
        if a == b {
            return Err(Error::DuplicateQubit(a));
        }
        if (self.has_axis(SweepParam::J) || self.has_axis(SweepParam::Gamma))
            && self.base.gamma().is_none()
            && !self.has_axis(SweepParam::Gamma)
        {
            return Err(Error::InvalidParams(
                "a J axis needs a defined gamma (j_x + j_y != 0)".into(),
            ));
        }
        if self.pipeline == Pipeline::ClosedForm && n != 2 {
            return Err(Error::InvalidParams(format!(
                "closed-form pipeline requires n = 2, got {n}"
            )));
        }
        Ok(())
    }

    pub fn has_axis(&self, p: SweepParam) -> bool {
        self.axes.iter().any(|a| a.param == p)
    }

    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    /// Coordinates of the `index`-th point in row-major order.
    pub fn point(&self, index: usize) -> GridPoint {
        let base = &self.base;
        let mut pt = GridPoint {
            n_sites: base.n_sites,
            j: base.j_mean(),
            gamma: base.gamma().unwrap_or(f64::NAN),
            jz: base.j_z,
            b: base.b_field,
            t: self.temperature,
        };
        let mut rest = index;
        for axis in self.axes.iter().rev() {
            let v = axis.value(rest % axis.steps);
            rest /= axis.steps;
            match axis.param {
                SweepParam::B => pt.b = v,
                SweepParam::T => pt.t = v,
                SweepParam::Jz => pt.jz = v,
                SweepParam::Gamma => pt.gamma = v,
                SweepParam::J => pt.j = v,
            }
        }
        pt
    }

    fn params_at(&self, pt: &GridPoint) -> Result<ChainParams> {
        let mut p = self.base;
        if self.has_axis(SweepParam::J) || self.has_axis(SweepParam::Gamma) {
            p.j_x = pt.j * (1.0 + pt.gamma);
            p.j_y = pt.j * (1.0 - pt.gamma);
        }
        p.j_z = pt.jz;
        p.b_field = pt.b;
        p.validate()?;
        Ok(p)
    }
}

/// Physical coordinates of one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub n_sites: usize,
    pub j: f64,
    /// `NaN` when `j_x + j_y = 0`.
    pub gamma: f64,
    pub jz: f64,
    pub b: f64,
    pub t: f64,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={}, J={}, gamma={}, Jz={}, B={}, T={}",
            self.n_sites, self.j, self.gamma, self.jz, self.b, self.t
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub point: GridPoint,
    pub pair: (usize, usize),
    pub concurrence: f64,
    /// Descending.
    pub lambdas: [f64; 4],
    pub log_partition: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    /// Smallest and largest concurrence, or `None` for an empty result.
    pub fn concurrence_range(&self) -> Option<(f64, f64)> {
        self.records
            .iter()
            .map(|r| r.concurrence)
            .fold(None, |acc, c| match acc {
                None => Some((c, c)),
                Some((lo, hi)) => Some((lo.min(c), hi.max(c))),
            })
    }
}

/// Concurrence and `ln Z` at a single point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointValue {
    pub concurrence: ConcurrenceValue,
    pub log_partition: f64,
}

pub fn evaluate_point(p: &ChainParams, t: f64, pair: (usize, usize), pipeline: Pipeline) -> Result<PointValue> {
    match pipeline {
        Pipeline::ClosedForm if t >= MIN_TEMPERATURE => {
            if p.n_sites != 2 {
                return Err(Error::InvalidParams(format!(
                    "closed-form pipeline requires n = 2, got {}",
                    p.n_sites
                )));
            }
            Ok(PointValue {
                concurrence: concurrence_from_lambdas(two_qubit_thermal_lambdas(p, t)?),
                log_partition: two_qubit_log_partition(p, t)?,
            })
        }
        _ => {
            let e = evaluate_pair(p, t, pair)?;
            Ok(PointValue {
                concurrence: e.concurrence,
                log_partition: e.log_partition,
            })
        }
    }
}

fn evaluate_index(spec: &SweepSpec, index: usize) -> Result<SweepRecord> {
    let point = spec.point(index);
    let wrap = |e: Error| Error::GridPoint {
        index,
        coordinates: point.to_string(),
        source: Box::new(e),
    };
    let p = spec.params_at(&point).map_err(wrap)?;
    let v = evaluate_point(&p, point.t, spec.pair, spec.pipeline).map_err(wrap)?;
    Ok(SweepRecord {
        point,
        pair: spec.pair,
        concurrence: v.concurrence.c,
        lambdas: v.concurrence.lambdas,
        log_partition: v.log_partition,
    })
}

/// Evaluates every grid point of `spec`.
///
/// `threads` is only a scheduling hint: `Some(1)` runs sequentially,
/// `Some(n)` uses a dedicated pool of `n` workers, `None` the global pool.
/// On failure the error of the lowest failing index is returned.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    spec.validate()?;
    let total = spec.grid_size();
    let parallel =
        || -> Vec<Result<SweepRecord>> { (0..total).into_par_iter().map(|i| evaluate_index(spec, i)).collect() };
    let outcomes: Vec<Result<SweepRecord>> = match threads {
        Some(0) | Some(1) => (0..total).map(|i| evaluate_index(spec, i)).collect(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(parallel),
            Err(_) => (0..total).map(|i| evaluate_index(spec, i)).collect(),
        },
        None => parallel(),
    };
    let records = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        axes: spec.axes.clone(),
        records,
    })
}
