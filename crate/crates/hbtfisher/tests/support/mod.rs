//! Test-only reference implementations that share no code path with the
//! library's closed forms, derivatives or quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

fn gaussian(u: f64, sigma: f64) -> f64 {
    (-(u * u) / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma)
}

/// Exclusive-event intensities written out directly from the
/// `PaperModel` single-click and coincidence formulas: `(α, β, γ)`.
pub fn paper_intensities(x: f64, d: f64, sigma: f64, eta: f64) -> [f64; 3] {
    let a = gaussian(x, sigma);
    let b = gaussian(x - d, sigma);
    let alpha = 0.5 * eta * (a + b)
        + a * b * (eta * (1.0 - eta) + 0.25 * (1.0 - (1.0 - eta) * (1.0 - eta)));
    [alpha, alpha, eta * eta * a * b]
}

/// Binned-multinomial Fisher information about `d`.
///
/// The x-axis `[−10σ, d + 10σ]` is cut into `bins` equal cells whose edges
/// stay fixed while `d` is perturbed. Cell masses are midpoint-rule
/// `P_m(x_i)·h`, normalized by their discrete total; `∂q/∂d` is a central
/// finite difference with step `h_d`. The result is scaled by
/// `N_eff = M·Σ P_m h`.
pub fn binned_fisher(
    d: f64,
    sigma: f64,
    eta: f64,
    with_gamma: bool,
    repeats: f64,
    bins: usize,
    h_d: f64,
) -> f64 {
    let lo = -10.0 * sigma;
    let hi = d + 10.0 * sigma;
    let h = (hi - lo) / bins as f64;
    let events = if with_gamma { 3 } else { 2 };
    let masses = |dd: f64| -> (Vec<f64>, f64) {
        let mut raw = Vec::with_capacity(bins * events);
        for i in 0..bins {
            let x = lo + (i as f64 + 0.5) * h;
            let p = paper_intensities(x, dd, sigma, eta);
            raw.extend_from_slice(&p[..events]);
        }
        let total: f64 = raw.iter().map(|p| p * h).sum();
        (raw.iter().map(|p| p * h / total).collect(), total)
    };
    let (q0, total) = masses(d);
    let (qp, _) = masses(d + h_d);
    let (qm, _) = masses(d - h_d);
    let info: f64 = q0
        .iter()
        .zip(qp.iter().zip(&qm))
        .filter(|(q, _)| **q > 1e-300)
        .map(|(q, (p, m))| {
            let dq = (p - m) / (2.0 * h_d);
            dq * dq / q
        })
        .sum();
    repeats * total * info
}

/// Richardson-extrapolated central difference of `f` at `t`, falling back to
/// a one-sided second-order stencil near `t = 0`.
pub fn derivative(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    if t >= 2.0 * h {
        let c1 = (f(t + h) - f(t - h)) / (2.0 * h);
        let c2 = (f(t + 2.0 * h) - f(t - 2.0 * h)) / (4.0 * h);
        (4.0 * c1 - c2) / 3.0
    } else {
        (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h)
    }
}
