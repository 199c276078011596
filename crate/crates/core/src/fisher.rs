//! Normalized event distributions and the total Fisher information about `d`.
//!
//! Each recorded event `m` is normalized against all recorded events,
//! `C_m(x) = P_m(x) / Σ_m ∫P_m dx`, and the Fisher information of the
//! normalized family is scaled by the effective number of repetitions
//! `N_eff = M·Σ_m ∫P_m dx`. The normalization depends on `d` through the
//! overlap integral; that dependence is kept in `∂C_m/∂d`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::event::{self, Coefficients, DetectionModel, Event};
use crate::psf::GaussianPsfPair;
use crate::quad;

/// Absolute quadrature target for each event's integral.
pub const QUAD_TOL: f64 = 1e-10;
/// A Fisher integral whose error estimate exceeds this is rejected.
pub const QUAD_FAIL: f64 = 1e-6;
const MAX_INTERVALS: usize = 4000;
const TINY: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub pair: GaussianPsfPair,
    pub model: DetectionModel,
    repeats: u32,
}

impl ExperimentConfig {
    pub fn new(pair: GaussianPsfPair, model: DetectionModel, repeats: u32) -> Result<Self> {
        if repeats == 0 {
            return Err(Error::InvalidArgument("repeats must be >= 1"));
        }
        Ok(Self { pair, model, repeats })
    }

    pub fn repeats(&self) -> u32 {
        self.repeats
    }

    pub fn with_repeats(&self, repeats: u32) -> Result<Self> {
        Self::new(self.pair, self.model, repeats)
    }

    /// Copy of `self` with one parameter replaced.
    pub fn at(&self, axis: SweepAxis, value: f64) -> Result<Self> {
        match axis {
            SweepAxis::Eta => Self::new(self.pair, self.model.with_eta(value)?, self.repeats),
            SweepAxis::D => Self::new(self.pair.with_d(value)?, self.model, self.repeats),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherResult {
    /// Σ_m ∫P_m dx over the recorded events.
    pub normalization: f64,
    /// Fisher information of the normalized distributions (per effective shot).
    pub f_normalized: f64,
    pub n_eff: f64,
    /// `n_eff · f_normalized`.
    pub fisher: f64,
    pub quad_error_estimate: f64,
    /// Contribution of each event to `f_normalized`, indexed α, β, γ.
    pub per_event: [f64; 3],
}

/// Normalization of the recorded events and its `d`-derivative.
struct Normalization {
    coeffs: Coefficients,
    value: f64,
    derivative: f64,
}

fn normalization(cfg: &ExperimentConfig) -> Result<Normalization> {
    event::check_preconditions(&cfg.pair)?;
    let coeffs = cfg.model.coefficients();
    let (flux, dflux) = event::flux_parts(&cfg.pair, &coeffs);
    let events = cfg.model.event_set.events();
    let value: f64 = events.iter().map(|&m| flux.get(m)).sum();
    let derivative: f64 = events.iter().map(|&m| dflux.get(m)).sum();
    if !(value >= TINY) {
        return Err(Error::DegenerateNormalization { normalization: value });
    }
    Ok(Normalization { coeffs, value, derivative })
}

fn event_index(event: Event) -> usize {
    match event {
        Event::Alpha => 0,
        Event::Beta => 1,
        Event::Gamma => 2,
    }
}

impl Normalization {
    /// `(C_m(x), ∂C_m/∂d)` by the quotient rule.
    #[inline]
    fn distribution(&self, x: f64, pair: &GaussianPsfPair, event: Event) -> (f64, f64) {
        let e = event::intensities_unchecked(x, pair, &self.coeffs);
        let p = e.probability(event);
        let dp = e.derivative(event);
        let n = self.value;
        (p / n, (dp * n - p * self.derivative) / (n * n))
    }
}

/// `C_m(x)`; zero for events outside the configured event set.
pub fn normalized_event_distribution(x: f64, event: Event, cfg: &ExperimentConfig) -> Result<f64> {
    let norm = normalization(cfg)?;
    if !cfg.model.event_set.contains(event) {
        return Ok(0.0);
    }
    Ok(norm.distribution(x, &cfg.pair, event).0)
}

/// `∂C_m/∂d` including the derivative of the normalization.
pub fn dnormalized_event_distribution_dd(
    x: f64,
    event: Event,
    cfg: &ExperimentConfig,
) -> Result<f64> {
    let norm = normalization(cfg)?;
    if !cfg.model.event_set.contains(event) {
        return Ok(0.0);
    }
    Ok(norm.distribution(x, &cfg.pair, event).1)
}

/// Total Fisher information `F_d = N_eff Σ_m ∫ C_m (∂ln C_m/∂d)² dx`.
pub fn fisher_information(cfg: &ExperimentConfig) -> Result<FisherResult> {
    let norm = normalization(cfg)?;
    let (lo, hi) = cfg.pair.domain();
    let mut per_event = [0.0; 3];
    let mut error = 0.0;
    let mut alpha_error = 0.0;
    for &event in cfg.model.event_set.events() {
        // β integrates to exactly the same value as α.
        if event == Event::Beta {
            per_event[1] = per_event[0];
            error += alpha_error;
            continue;
        }
        let q = quad::integrate(
            |x| {
                let (c, dc) = norm.distribution(x, &cfg.pair, event);
                if c < TINY {
                    0.0
                } else {
                    dc * dc / c
                }
            },
            lo,
            hi,
            QUAD_TOL,
            MAX_INTERVALS,
        );
        if !(q.error <= QUAD_FAIL) || !q.value.is_finite() {
            return Err(Error::QuadratureFailure { error_estimate: q.error });
        }
        per_event[event_index(event)] = q.value;
        if event == Event::Alpha {
            alpha_error = q.error;
        }
        error += q.error;
    }
    let f_normalized: f64 = per_event.iter().sum();
    let repeats = f64::from(cfg.repeats);
    Ok(FisherResult {
        normalization: norm.value,
        f_normalized,
        n_eff: repeats * norm.value,
        // Grouped so that fisher(M) is exactly M·fisher(1).
        fisher: repeats * (norm.value * f_normalized),
        quad_error_estimate: error,
        per_event,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Eta,
    D,
}

impl SweepAxis {
    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::Eta => "eta",
            SweepAxis::D => "d",
        }
    }
}

/// A sweep point that failed, with the grid value that caused it.
#[derive(Debug, Clone, PartialEq)]
pub struct PointError {
    pub value: f64,
    pub error: Error,
}

impl core::fmt::Display for PointError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "at grid value {}: {}", self.value, self.error)
    }
}

impl core::error::Error for PointError {}

/// One [`fisher_information`] call per grid value, in grid order.
pub fn fisher_sweep(
    template: &ExperimentConfig,
    axis: SweepAxis,
    grid: &[f64],
) -> core::result::Result<Vec<(f64, FisherResult)>, PointError> {
    if grid.is_empty() {
        return Err(PointError { value: f64::NAN, error: Error::InvalidArgument("empty grid") });
    }
    grid.iter()
        .map(|&value| {
            template
                .at(axis, value)
                .and_then(|cfg| fisher_information(&cfg))
                .map(|r| (value, r))
                .map_err(|error| PointError { value, error })
        })
        .collect()
}

/// Fisher information of a scan that fires `shots[i]` shots at `positions[i]`
/// and records the per-shot outcome: every event of the configured set plus a
/// catch-all "anything else" class (no click, or γ when only α/β are kept).
///
/// Only a proper distribution under [`crate::Routing::ClassicalRouting`].
pub fn binned_fisher_information(
    pair: &GaussianPsfPair,
    model: &DetectionModel,
    positions: &[f64],
    shots: &[u64],
) -> Result<f64> {
    if positions.len() != shots.len() {
        return Err(Error::InvalidArgument("positions and shots differ in length"));
    }
    let e_all = model.coefficients();
    event::check_preconditions(pair)?;
    let mut total = 0.0;
    for (&x, &n) in positions.iter().zip(shots) {
        let e = event::intensities_unchecked(x, pair, &e_all);
        let mut rest = 1.0;
        let mut drest = 0.0;
        let mut info = 0.0;
        for &m in model.event_set.events() {
            let (p, dp) = (e.probability(m), e.derivative(m));
            rest -= p;
            drest -= dp;
            if p > TINY {
                info += dp * dp / p;
            }
        }
        if rest > TINY {
            info += drest * drest / rest;
        }
        total += n as f64 * info;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{EventSet, Routing};

    fn cfg(d: f64, eta: f64, set: EventSet, m: u32) -> ExperimentConfig {
        ExperimentConfig::new(
            GaussianPsfPair::new(1.0, d).unwrap(),
            DetectionModel::new(eta, set, Routing::PaperModel).unwrap(),
            m,
        )
        .unwrap()
    }

    #[test]
    fn alpha_example_value() {
        let c = cfg(0.0, 1.0, EventSet::ABG, 1);
        let v = normalized_event_distribution(0.0, Event::Alpha, &c).unwrap();
        assert!((v - 0.438_731_0 / 2.423_142_2).abs() < 1e-7);
        assert!((v - 0.181_058_7).abs() < 1e-7);
    }

    #[test]
    fn excluded_event_is_zero() {
        let c = cfg(0.5, 0.8, EventSet::AB, 1);
        assert_eq!(normalized_event_distribution(0.2, Event::Gamma, &c).unwrap(), 0.0);
        let far = cfg(80.0, 1.0, EventSet::ABG, 1);
        for x in [0.0, 40.0, 80.0] {
            assert_eq!(normalized_event_distribution(x, Event::Gamma, &far).unwrap(), 0.0);
        }
    }

    #[test]
    fn zero_efficiency_is_degenerate() {
        let err = fisher_information(&cfg(1.0, 0.0, EventSet::ABG, 1)).unwrap_err();
        assert_eq!(err.name(), "DegenerateNormalization");
        let err = normalized_event_distribution(0.0, Event::Alpha, &cfg(1.0, 0.0, EventSet::AB, 1));
        assert_eq!(err.unwrap_err().name(), "DegenerateNormalization");
    }

    #[test]
    fn repeats_scale_linearly() {
        let one = fisher_information(&cfg(1.0, 0.5, EventSet::ABG, 1)).unwrap();
        let seven = fisher_information(&cfg(1.0, 0.5, EventSet::ABG, 7)).unwrap();
        assert_eq!(seven.fisher, 7.0 * one.fisher);
        assert_eq!(seven.f_normalized, one.f_normalized);
        assert!(ExperimentConfig::new(one_pair(), one_model(), 0).is_err());
    }

    fn one_pair() -> GaussianPsfPair {
        GaussianPsfPair::new(1.0, 1.0).unwrap()
    }
    fn one_model() -> DetectionModel {
        DetectionModel::new(1.0, EventSet::AB, Routing::PaperModel).unwrap()
    }

    #[test]
    fn result_invariants() {
        let r = fisher_information(&cfg(0.7, 0.6, EventSet::ABG, 3)).unwrap();
        assert!(r.fisher >= 0.0 && r.n_eff > 0.0 && r.normalization > 0.0);
        assert_eq!(r.fisher, 3.0 * (r.normalization * r.f_normalized));
        assert_eq!(r.per_event[0], r.per_event[1]);
        assert!(r.quad_error_estimate < 1e-9);
    }

    #[test]
    fn well_separated_limit() {
        let r = fisher_information(&cfg(10.0, 1.0, EventSet::AB, 1)).unwrap();
        // Each lone-photon event carries 1/(4σ²); N_eff = 2.
        assert!((r.f_normalized - 0.5).abs() < 0.01, "{r:?}");
        assert!((r.fisher - 1.0).abs() < 0.02, "{r:?}");
    }

    #[test]
    fn sweep_rows_match_single_calls() {
        let t = cfg(1.0, 1.0, EventSet::ABG, 1);
        let rows = fisher_sweep(&t, SweepAxis::D, &[0.4]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].1, fisher_information(&cfg(0.4, 1.0, EventSet::ABG, 1)).unwrap());
        let err = fisher_sweep(&t, SweepAxis::Eta, &[0.5, 1.5]).unwrap_err();
        assert_eq!(err.value, 1.5);
        assert_eq!(err.error.name(), "EtaOutOfRange");
        assert!(fisher_sweep(&t, SweepAxis::Eta, &[]).is_err());
    }

    #[test]
    fn binned_information_is_additive() {
        let p = GaussianPsfPair::new(1.0, 2.0).unwrap();
        let m = DetectionModel::new(1.0, EventSet::ABG, Routing::ClassicalRouting).unwrap();
        let one = binned_fisher_information(&p, &m, &[0.5], &[1]).unwrap();
        let many = binned_fisher_information(&p, &m, &[0.5, 0.5], &[10, 30]).unwrap();
        assert!(one > 0.0);
        assert!((many - 40.0 * one).abs() < 1e-12 * many);
        assert!(binned_fisher_information(&p, &m, &[0.5], &[]).is_err());
    }
}
