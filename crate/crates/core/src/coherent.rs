//! n single-photon detectors behind a cascade of n − 1 balanced splitters,
//! fed by two incoherent coherent-state emitters.
//!
//! The n-fold coincidence expands into a sum over `k` (photons taken from A)
//! weighted by `C(n,k)²`. The two end terms carry single-PSF weight (`k = n`
//! gives P_A, `k = 0` gives P_B); every interior term carries the overlap
//! P_A·P_B. The ratio of overlap to first-order weight therefore grows like
//! `C(2n,n) − 2` with the number of detectors.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::psf::GaussianPsfPair;
use crate::quad;

/// Largest `n` for which `C(2n, n)` fits in a `u64`.
pub const EXACT_MAX_N: u32 = 33;

/// Exact `C(n, k)` for `n ≤ 66`, `None` on overflow.
pub fn binomial_exact(n: u32, k: u32) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc·(n−i)/(i+1) stays integral at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).ok()
}

/// `ln C(n, k)` via log-gamma.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    let (n, k) = (f64::from(n), f64::from(k));
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// `C(n,k)²` for `k = 0..=n` as exact integers, for `n ≤ 33`.
pub fn binomial_sq_weights_exact(n: u32) -> Option<Vec<u64>> {
    if n > EXACT_MAX_N {
        return None;
    }
    (0..=n)
        .map(|k| binomial_exact(n, k).and_then(|c| c.checked_mul(c)))
        .collect()
}

/// `C(n,k)²` evaluated through log-gamma, any `n`.
pub fn binomial_sq_weights_lgamma(n: u32) -> Vec<f64> {
    (0..=n).map(|k| libm::exp(2.0 * ln_binomial(n, k))).collect()
}

/// `C(n,k)²` for `k = 0..=n`: exact integers up to `n = 33`, log-gamma above.
pub fn binomial_sq_weights(n: u32) -> Vec<f64> {
    match binomial_sq_weights_exact(n) {
        Some(w) => w.into_iter().map(|c| c as f64).collect(),
        None => binomial_sq_weights_lgamma(n),
    }
}

/// `Σ_{k=1}^{n−1} C(n,k)² = C(2n,n) − 2`, exact up to `n = 33`.
pub fn interior_weight_sum(n: u32) -> f64 {
    if n <= EXACT_MAX_N {
        let central = binomial_exact(2 * n, n).expect("C(2n,n) fits for n <= 33");
        (central - 2) as f64
    } else {
        libm::exp(ln_binomial(2 * n, n)) - 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PrefactorConvention {
    /// `2^{(1−n)(n+2)/4}` as published.
    #[default]
    PaperVerbatim,
    /// `2^{−(n−1)(n+2)/2}`: product of the per-detector intensity
    /// attenuations `2^{−k}` (k < n) and `2^{−(n−1)}` (last detector).
    DerivedCascade,
}

impl PrefactorConvention {
    pub fn label(self) -> &'static str {
        match self {
            PrefactorConvention::PaperVerbatim => "paper",
            PrefactorConvention::DerivedCascade => "derived",
        }
    }
}

pub fn cascade_prefactor(n: u32, convention: PrefactorConvention) -> f64 {
    let m = f64::from(n) - 1.0;
    let exponent = match convention {
        PrefactorConvention::PaperVerbatim => -m * (m + 3.0) / 4.0,
        PrefactorConvention::DerivedCascade => -m * (m + 3.0) / 2.0,
    };
    libm::exp2(exponent)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentConfig {
    n: u32,
    mean_photons: f64,
    pub pair: GaussianPsfPair,
    pub prefactor: PrefactorConvention,
    field_scale: f64,
}

impl CoherentConfig {
    pub fn new(
        n: u32,
        mean_photons: f64,
        pair: GaussianPsfPair,
        prefactor: PrefactorConvention,
        field_scale: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be >= 1"));
        }
        if !(mean_photons >= 0.0 && mean_photons.is_finite()) {
            return Err(Error::InvalidArgument("mean_photons must be finite and >= 0"));
        }
        if !(field_scale > 0.0 && field_scale.is_finite()) {
            return Err(Error::InvalidArgument("field_scale must be > 0"));
        }
        Ok(Self { n, mean_photons, pair, prefactor, field_scale })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    pub fn field_scale(&self) -> f64 {
        self.field_scale
    }
}

/// n-fold coincidence intensity at `x`. Proportional to `mean_photons^n`.
pub fn nth_order_intensity(x: f64, cfg: &CoherentConfig) -> f64 {
    let n = cfg.n;
    let a = cfg.pair.psf_a(x);
    let b = cfg.pair.psf_b(x);
    // C(n,0)² = C(n,n)² = 1.
    let terms = b + a + interior_weight_sum(n) * a * b;
    let scale = libm::pow(cfg.field_scale * cfg.mean_photons, f64::from(n));
    cascade_prefactor(n, cfg.prefactor) * scale * terms
}

/// Overlap weight over first-order weight in the n-fold coincidence.
pub fn overlap_ratio(x: f64, n: u32, pair: &GaussianPsfPair) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1"));
    }
    let a = pair.psf_a(x);
    let b = pair.psf_b(x);
    let first = a + b;
    if !(first > 0.0) {
        return Err(Error::ZeroDenominator { x });
    }
    Ok(interior_weight_sum(n) * a * b / first)
}

/// Average over a uniformly random relative phase ψ of
/// `(A + B + 2√(AB)·cos ψ)^n`, computed by quadrature.
pub fn phase_average_oracle(n: u32, intensity_a: f64, intensity_b: f64) -> f64 {
    let cross = 2.0 * libm::sqrt(intensity_a * intensity_b);
    let base = intensity_a + intensity_b;
    let nodes = 4 * n as usize + 64;
    quad::periodic_mean(|psi| libm::pow(base + cross * libm::cos(psi), f64::from(n)), nodes)
}

/// `Σ_k C(n,k)²·A^k·B^{n−k}`.
pub fn binomial_sum(n: u32, intensity_a: f64, intensity_b: f64) -> f64 {
    binomial_sq_weights(n)
        .iter()
        .enumerate()
        .map(|(k, w)| {
            w * libm::pow(intensity_a, k as f64) * libm::pow(intensity_b, f64::from(n) - k as f64)
        })
        .sum()
}
