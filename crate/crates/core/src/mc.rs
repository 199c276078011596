//! Seeded Monte Carlo of emission, 50:50 routing and inefficient threshold
//! detection, plus a maximum-likelihood variance study.
//!
//! Per trial: A emits with probability P_A(x) and B with P_B(x),
//! independently; each photon takes path L or R with probability ½; each
//! photon on a path is absorbed with probability η; a detector clicks iff it
//! absorbs at least one photon. This is exactly the
//! [`Routing::ClassicalRouting`] law.
//!
//! Trials are grouped into fixed chunks of [`CHUNK_TRIALS`]; chunk `c` draws
//! from ChaCha8 stream `c` under the run seed. Counts are integers merged per
//! chunk, so any partition of chunks across threads gives identical totals.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::event::{self, DetectionModel, EventIntensities, EventSet, Routing};
use crate::fisher;
use crate::psf::GaussianPsfPair;
use crate::roots;

pub const CHUNK_TRIALS: u64 = 4096;

/// Half-width multiplier of the binomial confidence interval.
pub const CI_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Alpha,
    Beta,
    Gamma,
    None,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::Alpha, Outcome::Beta, Outcome::Gamma, Outcome::None];

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Alpha => "alpha",
            Outcome::Beta => "beta",
            Outcome::Gamma => "gamma",
            Outcome::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub x: f64,
    pub pair: GaussianPsfPair,
    pub eta: f64,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1"));
        }
        if !self.x.is_finite() {
            return Err(Error::InvalidArgument("x must be finite"));
        }
        event::check_preconditions(&self.pair)?;
        self.model(Routing::ClassicalRouting).map(|_| ())
    }

    fn model(&self, routing: Routing) -> Result<DetectionModel> {
        DetectionModel::new(self.eta, EventSet::ABG, routing)
    }

    pub fn chunk_count(&self) -> u64 {
        self.trials.div_ceil(CHUNK_TRIALS)
    }
}

#[inline]
fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One shot. Returns the outcome index (α, β, γ, none).
#[inline]
fn sample_trial(rng: &mut ChaCha8Rng, p_a: f64, p_b: f64, eta: f64) -> usize {
    let mut left = false;
    let mut right = false;
    for p_emit in [p_a, p_b] {
        if uniform(rng) < p_emit {
            let on_left = uniform(rng) < 0.5;
            if uniform(rng) < eta {
                if on_left {
                    left = true;
                } else {
                    right = true;
                }
            }
        }
    }
    match (left, right) {
        (true, false) => 0,
        (false, true) => 1,
        (true, true) => 2,
        (false, false) => 3,
    }
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_trials(rng: &mut ChaCha8Rng, n: u64, p_a: f64, p_b: f64, eta: f64) -> [u64; 4] {
    let mut counts = [0u64; 4];
    for _ in 0..n {
        counts[sample_trial(rng, p_a, p_b, eta)] += 1;
    }
    counts
}

/// Outcome counts of chunk `chunk` (α, β, γ, none). Assumes a validated config.
pub fn simulate_chunk(cfg: &McConfig, chunk: u64) -> [u64; 4] {
    let start = chunk * CHUNK_TRIALS;
    let n = CHUNK_TRIALS.min(cfg.trials.saturating_sub(start));
    let mut rng = stream(cfg.seed, chunk);
    run_trials(&mut rng, n, cfg.pair.psf_a(cfg.x), cfg.pair.psf_b(cfg.x), cfg.eta)
}

pub fn merge_counts(into: &mut [u64; 4], other: &[u64; 4]) {
    for (a, b) in into.iter_mut().zip(other) {
        *a += b;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    /// Indexed α, β, γ, none.
    pub counts: [u64; 4],
    pub freq: [f64; 4],
    /// `max(3·√(p̂(1−p̂)/n), 3/n)`. The `3/n` floor keeps the interval
    /// non-degenerate when an outcome is never observed.
    pub ci_halfwidth: [f64; 4],
}

impl McEstimate {
    pub fn from_counts(counts: [u64; 4]) -> Self {
        let trials: u64 = counts.iter().sum();
        let n = trials.max(1) as f64;
        let freq = counts.map(|c| c as f64 / n);
        let ci_halfwidth =
            freq.map(|p| (CI_SIGMAS * libm::sqrt(p * (1.0 - p) / n)).max(CI_SIGMAS / n));
        Self { trials, counts, freq, ci_halfwidth }
    }

    pub fn get(&self, outcome: Outcome) -> (u64, f64, f64) {
        let i = outcome as usize;
        (self.counts[i], self.freq[i], self.ci_halfwidth[i])
    }
}

/// Runs every chunk sequentially.
pub fn simulate_events(cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let mut counts = [0u64; 4];
    for chunk in 0..cfg.chunk_count() {
        merge_counts(&mut counts, &simulate_chunk(cfg, chunk));
    }
    Ok(McEstimate::from_counts(counts))
}

/// `(α, β, γ, none)` probabilities from an intensity record.
fn outcome_probabilities(e: &EventIntensities) -> [f64; 4] {
    [e.p_alpha, e.p_beta, e.p_gamma, e.p_none()]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationRow {
    pub outcome: Outcome,
    pub count: u64,
    pub freq: f64,
    pub ci_halfwidth: f64,
    pub classical: f64,
    pub pass: bool,
    pub paper: f64,
    /// `paper − classical`.
    pub paper_delta: f64,
    /// `|paper_delta|` exceeds the confidence half-width.
    pub paper_delta_flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub rows: [ValidationRow; 4],
    pub pass: bool,
}

/// Compares an estimate against the closed forms at `cfg`.
pub fn validation_report(cfg: &McConfig, estimate: &McEstimate) -> Result<ValidationReport> {
    cfg.validate()?;
    let classical = outcome_probabilities(&event::event_intensities(
        cfg.x,
        &cfg.pair,
        &cfg.model(Routing::ClassicalRouting)?,
    )?);
    let paper = outcome_probabilities(&event::event_intensities(
        cfg.x,
        &cfg.pair,
        &cfg.model(Routing::PaperModel)?,
    )?);
    let rows = Outcome::ALL.map(|outcome| {
        let i = outcome as usize;
        let (count, freq, ci) = estimate.get(outcome);
        let delta = paper[i] - classical[i];
        ValidationRow {
            outcome,
            count,
            freq,
            ci_halfwidth: ci,
            classical: classical[i],
            pass: libm::fabs(freq - classical[i]) <= ci,
            paper: paper[i],
            paper_delta: delta,
            paper_delta_flagged: libm::fabs(delta) > ci,
        }
    });
    let pass = rows.iter().all(|r| r.pass);
    Ok(ValidationReport { rows, pass })
}

/// Simulates and compares in one call.
pub fn validate_against_analytic(cfg: &McConfig) -> Result<(McEstimate, ValidationReport)> {
    let estimate = simulate_events(cfg)?;
    let report = validation_report(cfg, &estimate)?;
    Ok((estimate, report))
}

/// Points in the ML scan grid.
pub const ML_GRID_POINTS: usize = 64;
/// Bracket-width tolerance of the likelihood search.
pub const ML_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlStudyConfig {
    pub d_true: f64,
    pub eta: f64,
    pub sigma: f64,
    pub samples: u32,
    pub trials_per_sample: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlStudy {
    pub estimates: Vec<f64>,
    pub mean: f64,
    /// Unbiased sample variance of the estimates.
    pub variance: f64,
    /// `1/F` of the sampled experiment (a variance, in length²).
    pub crb_reference: f64,
    pub grid: Vec<f64>,
    pub shots: Vec<u64>,
}

impl MlStudyConfig {
    fn pair(&self, d: f64) -> Result<GaussianPsfPair> {
        GaussianPsfPair::new(self.sigma, d)
    }

    fn model(&self) -> Result<DetectionModel> {
        DetectionModel::new(self.eta, EventSet::ABG, Routing::ClassicalRouting)
    }

    /// `ML_GRID_POINTS` equally spaced positions over `[−5σ, d_true + 5σ]`.
    pub fn grid(&self) -> Vec<f64> {
        let lo = -5.0 * self.sigma;
        let hi = self.d_true + 5.0 * self.sigma;
        let step = (hi - lo) / (ML_GRID_POINTS - 1) as f64;
        (0..ML_GRID_POINTS).map(|i| lo + i as f64 * step).collect()
    }

    /// Trials split as evenly as possible, earlier points take the remainder.
    pub fn shots(&self) -> Vec<u64> {
        let per = self.trials_per_sample / ML_GRID_POINTS as u64;
        let extra = (self.trials_per_sample % ML_GRID_POINTS as u64) as usize;
        (0..ML_GRID_POINTS).map(|i| per + u64::from(i < extra)).collect()
    }

    /// Variance bound of the sampled experiment, `1/F`.
    pub fn crb_reference(&self) -> Result<f64> {
        let f = fisher::binned_fisher_information(
            &self.pair(self.d_true)?,
            &self.model()?,
            &self.grid(),
            &self.shots(),
        )?;
        if !(f > 0.0) {
            return Err(Error::InfiniteBound);
        }
        Ok(1.0 / f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 || self.trials_per_sample == 0 {
            return Err(Error::InvalidArgument("need samples >= 2 and trials >= 1"));
        }
        let pair = self.pair(self.d_true)?;
        event::check_preconditions(&pair)?;
        self.model()?;
        if !(libm::sqrt(self.crb_reference()?) < self.d_true) {
            return Err(Error::InvalidArgument("d_true is not resolvable with these trials"));
        }
        Ok(())
    }
}

/// Simulated counts and ML estimate of `d` for sample `index`.
pub fn ml_sample(study: &MlStudyConfig, index: u32) -> Result<f64> {
    let true_pair = study.pair(study.d_true)?;
    let grid = study.grid();
    let shots = study.shots();
    let mut counts = Vec::with_capacity(grid.len());
    for (i, (&x, &n)) in grid.iter().zip(&shots).enumerate() {
        let mut rng = stream(study.seed, (u64::from(index) << 16) | i as u64);
        counts.push(run_trials(&mut rng, n, true_pair.psf_a(x), true_pair.psf_b(x), study.eta));
    }
    let coeffs = study.model()?.coefficients();
    let sigma = study.sigma;
    let neg_log_likelihood = |d: f64| {
        let Ok(pair) = GaussianPsfPair::new(sigma, d) else {
            return f64::INFINITY;
        };
        let mut nll = 0.0;
        for (&x, c) in grid.iter().zip(&counts) {
            let p = outcome_probabilities(&event::intensities_unchecked(x, &pair, &coeffs));
            for (&k, &q) in c.iter().zip(&p) {
                if k == 0 {
                    continue;
                }
                if !(q > 0.0) {
                    return f64::INFINITY;
                }
                nll -= k as f64 * libm::log(q);
            }
        }
        nll
    };
    let best = roots::golden_section(neg_log_likelihood, 0.0, 2.0 * study.d_true, ML_TOL, 200)?;
    Ok(best.x)
}

/// Summary of per-sample estimates, given in sample order.
pub fn summarize_ml(study: &MlStudyConfig, estimates: Vec<f64>) -> Result<MlStudy> {
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let variance = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0);
    Ok(MlStudy {
        estimates,
        mean,
        variance,
        crb_reference: study.crb_reference()?,
        grid: study.grid(),
        shots: study.shots(),
    })
}

/// Sequential ML variance study.
pub fn ml_variance_study(study: &MlStudyConfig) -> Result<MlStudy> {
    study.validate()?;
    let estimates = (0..study.samples).map(|s| ml_sample(study, s)).collect::<Result<Vec<_>>>()?;
    summarize_ml(study, estimates)
}
