//! Gaussian point-spread functions of the two emitters.
//!
//! Emitter A sits at the origin; emitter B sits at `d`. Only B depends on the
//! separation, so every `d`-derivative in the crate flows through
//! [`GaussianPsfPair::dpsf_b_dd`].

use crate::error::{Error, Result};
use crate::quad;
use core::f64::consts::PI;

/// Two unit-area Gaussians of common width `sigma`, centred at 0 and `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPsfPair {
    sigma: f64,
    d: f64,
}

#[inline]
fn gaussian(u: f64, sigma: f64) -> f64 {
    libm::exp(-u * u / (2.0 * sigma * sigma)) / (libm::sqrt(2.0 * PI) * sigma)
}

impl GaussianPsfPair {
    pub fn new(sigma: f64, d: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite() && d >= 0.0 && d.is_finite()) {
            return Err(Error::InvalidPsf { sigma, d });
        }
        Ok(Self { sigma, d })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Same width, different separation.
    pub fn with_d(&self, d: f64) -> Result<Self> {
        Self::new(self.sigma, d)
    }

    /// Peak density `1/(σ√(2π))`.
    pub fn peak(&self) -> f64 {
        gaussian(0.0, self.sigma)
    }

    pub fn psf_a(&self, x: f64) -> f64 {
        gaussian(x, self.sigma)
    }

    pub fn psf_b(&self, x: f64) -> f64 {
        gaussian(x - self.d, self.sigma)
    }

    /// ∂P_B/∂d = P_B(x)·(x − d)/σ². P_A carries no `d` dependence.
    pub fn dpsf_b_dd(&self, x: f64) -> f64 {
        self.psf_b(x) * (x - self.d) / (self.sigma * self.sigma)
    }

    /// Closed form of ∫P_A P_B dx = exp(−d²/4σ²)/(2√π σ).
    pub fn overlap_integral(&self) -> f64 {
        libm::exp(-self.d * self.d / (4.0 * self.sigma * self.sigma))
            / (2.0 * libm::sqrt(PI) * self.sigma)
    }

    /// ∂I_ov/∂d = −(d/2σ²)·I_ov.
    pub fn doverlap_dd(&self) -> f64 {
        -self.d / (2.0 * self.sigma * self.sigma) * self.overlap_integral()
    }

    /// Integration window `[−10σ, d + 10σ]` used for every x-integral.
    pub fn domain(&self) -> (f64, f64) {
        (-10.0 * self.sigma, self.d + 10.0 * self.sigma)
    }

    /// Overlap integral by adaptive quadrature over [`Self::domain`].
    pub fn overlap_by_quadrature(&self) -> quad::Quadrature {
        let (a, b) = self.domain();
        quad::integrate(|x| self.psf_a(x) * self.psf_b(x), a, b, 1e-13, 500)
    }
}
