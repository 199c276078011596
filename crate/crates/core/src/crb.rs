//! Cramér-Rao bound `δd ≥ 1/√F_d` and the critical separation where the
//! bound equals the separation itself.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::event::{DetectionModel, EventSet, Routing};
use crate::fisher::{self, ExperimentConfig, PointError, SweepAxis};
use crate::psf::GaussianPsfPair;
use crate::roots;

/// Resolution of the sign-change scan run before bisection.
pub const SCAN_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbPoint {
    pub d: f64,
    pub eta: f64,
    pub event_set: EventSet,
    pub fisher: f64,
    /// `1/√fisher`; `+∞` when there is no information.
    pub crb: f64,
    /// `crb ≤ d`: one run's error is below the signal.
    pub resolvable: bool,
}

impl CrbPoint {
    pub fn bound(&self) -> Result<f64> {
        if self.crb.is_finite() {
            Ok(self.crb)
        } else {
            Err(Error::InfiniteBound)
        }
    }
}

/// Bound for one configuration. Zero efficiency is a valid query and yields an
/// infinite bound rather than an error.
pub fn crb(cfg: &ExperimentConfig) -> Result<CrbPoint> {
    let fisher = if cfg.model.eta() == 0.0 {
        0.0
    } else {
        fisher::fisher_information(cfg)?.fisher
    };
    let crb = if fisher > 0.0 { 1.0 / libm::sqrt(fisher) } else { f64::INFINITY };
    let d = cfg.pair.d();
    Ok(CrbPoint {
        d,
        eta: cfg.model.eta(),
        event_set: cfg.model.event_set,
        fisher,
        crb,
        resolvable: crb <= d,
    })
}

/// One [`crb`] call per grid value, in grid order.
pub fn crb_sweep(
    template: &ExperimentConfig,
    axis: SweepAxis,
    grid: &[f64],
) -> core::result::Result<Vec<CrbPoint>, PointError> {
    if grid.is_empty() {
        return Err(PointError { value: f64::NAN, error: Error::InvalidArgument("empty grid") });
    }
    grid.iter()
        .map(|&value| {
            template
                .at(axis, value)
                .and_then(|cfg| crb(&cfg))
                .map_err(|error| PointError { value, error })
        })
        .collect()
}

/// Inputs of [`critical_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalDistanceQuery {
    pub eta: f64,
    pub event_set: EventSet,
    pub routing: Routing,
    pub sigma: f64,
    pub repeats: u32,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl Default for CriticalDistanceQuery {
    fn default() -> Self {
        Self {
            eta: 1.0,
            event_set: EventSet::ABG,
            routing: Routing::PaperModel,
            sigma: 1.0,
            repeats: 1,
            lo: 0.2,
            hi: 3.0,
            tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalDistance {
    pub d_star: f64,
    pub iterations: usize,
    /// `|crb(d_star) − d_star|`.
    pub residual: f64,
    /// Scan subintervals `[a, b]` on which `crb(d) − d` changes sign. More than
    /// one entry means the bound crosses the signal several times.
    pub crossings: Vec<(f64, f64)>,
}

impl CriticalDistanceQuery {
    fn config(&self, d: f64) -> Result<ExperimentConfig> {
        ExperimentConfig::new(
            GaussianPsfPair::new(self.sigma, d)?,
            DetectionModel::new(self.eta, self.event_set, self.routing)?,
            self.repeats,
        )
    }

    /// `crb(d) − d`.
    pub fn gap(&self, d: f64) -> Result<f64> {
        let point = crb(&self.config(d)?)?;
        Ok(point.crb - d)
    }

    /// `(d, crb(d) − d)` on a `SCAN_STEP` grid spanning the bracket.
    pub fn scan(&self) -> Result<Vec<(f64, f64)>> {
        let steps = libm::ceil((self.hi - self.lo) / SCAN_STEP).max(1.0) as usize;
        (0..=steps)
            .map(|i| {
                let d = if i == steps { self.hi } else { self.lo + i as f64 * SCAN_STEP };
                self.gap(d).map(|g| (d, g))
            })
            .collect()
    }
}

/// Separation `d*` at which `crb(d*) = d*`, by bisection on the bracket.
///
/// Stops once `|crb(d) − d| ≤ tol·(1 + d)` and the bracket around the root is
/// no wider than `tol`.
pub fn critical_distance(query: &CriticalDistanceQuery) -> Result<CriticalDistance> {
    let q = *query;
    if !(q.lo >= 0.0 && q.hi > q.lo && q.hi.is_finite()) {
        return Err(Error::InvalidArgument("bracket must satisfy 0 <= lo < hi"));
    }
    if !(q.tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be > 0"));
    }
    // Validate the fixed parameters once so errors are not masked as sign issues.
    q.config(q.lo)?;
    let scan = q.scan()?;
    let g_lo = scan[0].1;
    let g_hi = scan[scan.len() - 1].1;
    if !(g_lo.signum() != g_hi.signum() || g_lo == 0.0 || g_hi == 0.0) {
        return Err(Error::NoSignChange { lo: q.lo, hi: q.hi, scan });
    }
    let crossings = scan
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .collect();
    let root = roots::bisect(
        |d| q.gap(d),
        q.lo,
        q.hi,
        g_lo,
        g_hi,
        |d, g, width| width <= q.tol && libm::fabs(g) <= q.tol * (1.0 + libm::fabs(d)),
        200,
    )?;
    Ok(CriticalDistance {
        d_star: root.x,
        iterations: root.iterations,
        residual: libm::fabs(root.value),
        crossings,
    })
}
