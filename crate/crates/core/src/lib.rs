//! Detection-event model, Fisher information and Cramér-Rao bounds for
//! resolving two incoherent point emitters with a Hanbury Brown–Twiss pair of
//! imperfect, non-photon-number-resolving single-photon detectors.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; the companion `hbtfisher` crate adds parallel
//! sweeps, file formats and the command-line tool.
//!
//! Layout:
//! - [`psf`]: the Gaussian PSF pair and its derivative in the separation `d`
//! - [`event`]: per-position probabilities of the exclusive events α, β, γ
//! - [`fisher`]: normalized event distributions and total Fisher information
//! - [`crb`]: Cramér-Rao bound, sweeps and the critical distance
//! - [`coherent`]: the n-detector coherent-state cascade
//! - [`mc`]: seeded photon-routing Monte Carlo and the ML variance study
//! - [`quad`], [`roots`]: numerical machinery
#![no_std]

extern crate alloc;

pub mod coherent;
pub mod crb;
pub mod error;
pub mod event;
pub mod fisher;
pub mod mc;
pub mod psf;
pub mod quad;
pub mod roots;

pub use coherent::{CoherentConfig, PrefactorConvention};
pub use crb::{CrbPoint, CriticalDistance};
pub use error::Error;
pub use event::{DetectionModel, Event, EventIntensities, EventSet, Routing};
pub use fisher::{ExperimentConfig, FisherResult, SweepAxis};
pub use mc::{McConfig, McEstimate, Outcome};
pub use psf::GaussianPsfPair;

/// Smallest PSF width for which the Gaussian peak `1/(σ√(2π))` stays ≤ 1.
pub const SIGMA_FLOOR: f64 = 0.398_942_280_401_432_7;
