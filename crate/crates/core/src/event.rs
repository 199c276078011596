//! Per-position probabilities of the exclusive detection events.
//!
//! Two single-photon emitters feed a 50:50 splitter whose outputs end on
//! detectors D1 (path L) and D2 (path R). Detectors have efficiency η and only
//! distinguish zero from at-least-one absorbed photon. Per shot exactly one of
//! α (only D1 clicks), β (only D2 clicks), γ (both click) or "no click" occurs.
//!
//! All intensities have the shape
//!
//! ```text
//! P_α = P_β = s·(P_A + P_B) + c_α·P_A·P_B
//! P_γ       =                 c_γ·P_A·P_B
//! ```
//!
//! with coefficients depending on η and on the [`Routing`] variant.

use crate::error::{Error, Result};
use crate::psf::GaussianPsfPair;
use crate::SIGMA_FLOOR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    Alpha,
    Beta,
    Gamma,
}

impl Event {
    pub const ALL: [Event; 3] = [Event::Alpha, Event::Beta, Event::Gamma];

    pub fn symbol(self) -> &'static str {
        match self {
            Event::Alpha => "alpha",
            Event::Beta => "beta",
            Event::Gamma => "gamma",
        }
    }
}

/// Which exclusive events are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EventSet {
    /// Single clicks only.
    AB,
    /// Single clicks and coincidences.
    #[default]
    ABG,
}

impl EventSet {
    pub fn events(self) -> &'static [Event] {
        match self {
            EventSet::AB => &[Event::Alpha, Event::Beta],
            EventSet::ABG => &Event::ALL,
        }
    }

    pub fn contains(self, event: Event) -> bool {
        !(self == EventSet::AB && event == Event::Gamma)
    }

    pub fn label(self) -> &'static str {
        match self {
            EventSet::AB => "ab",
            EventSet::ABG => "abg",
        }
    }
}

/// How photon pairs are distributed over the two paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Routing {
    /// Weights as published: one photon per path with weight P_A·P_B, both on
    /// one named path with weight ¼P_A·P_B. Not a normalized distribution.
    #[default]
    PaperModel,
    /// Exact law of independent photons each taking either path with
    /// probability ½. This is what the Monte Carlo oracle samples.
    ClassicalRouting,
}

impl Routing {
    pub fn label(self) -> &'static str {
        match self {
            Routing::PaperModel => "paper",
            Routing::ClassicalRouting => "classical",
        }
    }
}

/// Detector efficiency plus the event bookkeeping choices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionModel {
    eta: f64,
    pub event_set: EventSet,
    pub routing: Routing,
}

/// Coefficients `(s, c_α, c_γ)` of the intensity shape in the module docs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub single: f64,
    pub alpha_pair: f64,
    pub gamma_pair: f64,
}

impl DetectionModel {
    pub fn new(eta: f64, event_set: EventSet, routing: Routing) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::EtaOutOfRange { eta });
        }
        Ok(Self { eta, event_set, routing })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(eta, self.event_set, self.routing)
    }

    pub fn coefficients(&self) -> Coefficients {
        let eta = self.eta;
        let miss = 1.0 - eta;
        let single = 0.5 * eta;
        match self.routing {
            Routing::PaperModel => Coefficients {
                single,
                alpha_pair: eta * miss + 0.25 * (1.0 - miss * miss),
                gamma_pair: eta * eta,
            },
            // ½η(P_A + P_B − 2P_AP_B) from lone photons, plus
            // P_AP_B·{½η(1−η) + ¼[1−(1−η)²]} from pairs; collects to −¾η².
            Routing::ClassicalRouting => Coefficients {
                single,
                alpha_pair: -0.75 * eta * eta,
                gamma_pair: 0.5 * eta * eta,
            },
        }
    }
}

/// Event probabilities at one position and their derivatives in `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventIntensities {
    pub p_alpha: f64,
    pub p_beta: f64,
    pub p_gamma: f64,
    pub dp_alpha_dd: f64,
    pub dp_beta_dd: f64,
    pub dp_gamma_dd: f64,
}

impl EventIntensities {
    pub fn probability(&self, event: Event) -> f64 {
        match event {
            Event::Alpha => self.p_alpha,
            Event::Beta => self.p_beta,
            Event::Gamma => self.p_gamma,
        }
    }

    pub fn derivative(&self, event: Event) -> f64 {
        match event {
            Event::Alpha => self.dp_alpha_dd,
            Event::Beta => self.dp_beta_dd,
            Event::Gamma => self.dp_gamma_dd,
        }
    }

    /// 1 − P_α − P_β − P_γ. Under `ClassicalRouting` this is the probability
    /// that neither detector clicks; under `PaperModel` it can go negative.
    pub fn p_none(&self) -> f64 {
        1.0 - self.p_alpha - self.p_beta - self.p_gamma
    }
}

/// ½[P_A(x) + P_B(x)], the one-photon intensity on either path.
pub fn single_photon_intensity(x: f64, pair: &GaussianPsfPair) -> f64 {
    0.5 * (pair.psf_a(x) + pair.psf_b(x))
}

/// P_A(x)·P_B(x), the weight of one photon on each path.
pub fn coincidence_intensity(x: f64, pair: &GaussianPsfPair) -> f64 {
    pair.psf_a(x) * pair.psf_b(x)
}

/// ¼P_A(x)·P_B(x), both photons on one named path.
pub fn same_path_pair_intensity(x: f64, pair: &GaussianPsfPair) -> f64 {
    0.25 * coincidence_intensity(x, pair)
}

pub(crate) fn check_preconditions(pair: &GaussianPsfPair) -> Result<()> {
    if pair.sigma() < SIGMA_FLOOR {
        return Err(Error::SigmaTooSmall { sigma: pair.sigma() });
    }
    Ok(())
}

#[inline]
pub(crate) fn intensities_unchecked(
    x: f64,
    pair: &GaussianPsfPair,
    c: &Coefficients,
) -> EventIntensities {
    let a = pair.psf_a(x);
    let b = pair.psf_b(x);
    let db = pair.dpsf_b_dd(x);
    let ab = a * b;
    let p_alpha = c.single * (a + b) + c.alpha_pair * ab;
    let dp_alpha_dd = c.single * db + c.alpha_pair * a * db;
    EventIntensities {
        p_alpha,
        p_beta: p_alpha,
        p_gamma: c.gamma_pair * ab,
        dp_alpha_dd,
        dp_beta_dd: dp_alpha_dd,
        dp_gamma_dd: c.gamma_pair * a * db,
    }
}

/// Probabilities of α, β and γ at position `x`.
pub fn event_intensities(
    x: f64,
    pair: &GaussianPsfPair,
    model: &DetectionModel,
) -> Result<EventIntensities> {
    check_preconditions(pair)?;
    Ok(intensities_unchecked(x, pair, &model.coefficients()))
}

/// x-integrals of the event intensities, `(α, β, γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventFlux {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EventFlux {
    pub fn get(&self, event: Event) -> f64 {
        match event {
            Event::Alpha => self.alpha,
            Event::Beta => self.beta,
            Event::Gamma => self.gamma,
        }
    }
}

pub(crate) fn flux_parts(pair: &GaussianPsfPair, c: &Coefficients) -> (EventFlux, EventFlux) {
    let overlap = pair.overlap_integral();
    let d_overlap = pair.doverlap_dd();
    let alpha = 2.0 * c.single + c.alpha_pair * overlap;
    let d_alpha = c.alpha_pair * d_overlap;
    (
        EventFlux { alpha, beta: alpha, gamma: c.gamma_pair * overlap },
        EventFlux { alpha: d_alpha, beta: d_alpha, gamma: c.gamma_pair * d_overlap },
    )
}

/// Closed-form ∫P_m dx for each event.
pub fn event_flux(pair: &GaussianPsfPair, model: &DetectionModel) -> Result<EventFlux> {
    check_preconditions(pair)?;
    Ok(flux_parts(pair, &model.coefficients()).0)
}
