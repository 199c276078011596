//! Parallel drivers. Every function returns exactly what its sequential
//! counterpart in `hbtfisher_core` returns, for any thread count.

use hbtfisher_core::crb::{self, CrbPoint};
use hbtfisher_core::error::Result;
use hbtfisher_core::fisher::{self, PointError};
use hbtfisher_core::mc::{self, McConfig, McEstimate, MlStudy, MlStudyConfig, ValidationReport};
use hbtfisher_core::{Error, ExperimentConfig, FisherResult, SweepAxis};
use rayon::prelude::*;

fn point<T>(
    template: &ExperimentConfig,
    axis: SweepAxis,
    value: f64,
    f: impl Fn(&ExperimentConfig) -> Result<T>,
) -> std::result::Result<T, PointError> {
    template.at(axis, value).and_then(|c| f(&c)).map_err(|error| PointError { value, error })
}

fn non_empty(grid: &[f64]) -> std::result::Result<(), PointError> {
    if grid.is_empty() {
        return Err(PointError { value: f64::NAN, error: Error::InvalidArgument("empty grid") });
    }
    Ok(())
}

/// Rows come back in grid order; each row is an independent computation.
pub fn fisher_sweep(
    template: &ExperimentConfig,
    axis: SweepAxis,
    grid: &[f64],
) -> std::result::Result<Vec<(f64, FisherResult)>, PointError> {
    non_empty(grid)?;
    grid.par_iter()
        .map(|&v| point(template, axis, v, fisher::fisher_information).map(|r| (v, r)))
        .collect()
}

pub fn crb_sweep(
    template: &ExperimentConfig,
    axis: SweepAxis,
    grid: &[f64],
) -> std::result::Result<Vec<CrbPoint>, PointError> {
    non_empty(grid)?;
    grid.par_iter().map(|&v| point(template, axis, v, crb::crb)).collect()
}

/// Chunks run in parallel; integer counts are summed, so the totals do not
/// depend on scheduling.
pub fn simulate_events(cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let counts = (0..cfg.chunk_count())
        .into_par_iter()
        .map(|chunk| mc::simulate_chunk(cfg, chunk))
        .reduce(
            || [0u64; 4],
            |mut a, b| {
                mc::merge_counts(&mut a, &b);
                a
            },
        );
    Ok(McEstimate::from_counts(counts))
}

pub fn validate_against_analytic(cfg: &McConfig) -> Result<(McEstimate, ValidationReport)> {
    let estimate = simulate_events(cfg)?;
    let report = mc::validation_report(cfg, &estimate)?;
    Ok((estimate, report))
}

pub fn ml_variance_study(study: &MlStudyConfig) -> Result<MlStudy> {
    study.validate()?;
    let estimates = (0..study.samples)
        .into_par_iter()
        .map(|s| mc::ml_sample(study, s))
        .collect::<Result<Vec<_>>>()?;
    mc::summarize_ml(study, estimates)
}
