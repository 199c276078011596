//! Standard-library companion to `hbtfisher-core`: rayon-parallel sweeps and
//! Monte Carlo runs, the CSV/JSON output formats with embedded run manifests,
//! flat config files, and the `hbtfisher` command-line tool.

pub mod cli;
pub mod config;
pub mod manifest;
pub mod output;
pub mod parallel;

pub use manifest::RunManifest;
