//! Bracketing bisection and golden-section minimization.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` until `accept(x, g(x), w)` holds, where `w` is the
/// width of the bracket that still contains the root, or the bracket
/// collapses to floating-point resolution. `g_lo`/`g_hi` are the already
/// evaluated end values and must differ in sign.
pub fn bisect<G, A>(
    mut g: G,
    mut lo: f64,
    mut hi: f64,
    mut g_lo: f64,
    g_hi: f64,
    accept: A,
    max_iter: usize,
) -> Result<Root>
where
    G: FnMut(f64) -> Result<f64>,
    A: Fn(f64, f64, f64) -> bool,
{
    if g_lo == 0.0 {
        return Ok(Root { x: lo, value: 0.0, iterations: 0 });
    }
    if g_hi == 0.0 {
        return Ok(Root { x: hi, value: 0.0, iterations: 0 });
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::InvalidArgument("bisection bracket without sign change"));
    }
    let mut best = Root { x: lo, value: g_lo, iterations: 0 };
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        best = Root { x: mid, value: g_mid, iterations: it };
        if g_mid == 0.0 || accept(mid, g_mid, 0.5 * (hi - lo)) || mid <= lo || mid >= hi {
            break;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
    pub width: f64,
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`. Fails with `OptimizerNonConvergence` if the
/// bracket has not shrunk below `tol` within `max_iter` steps.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Minimum> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations >= max_iter {
            return Err(Error::OptimizerNonConvergence { width: hi - lo });
        }
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let (x, value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    Ok(Minimum { x, value, iterations, width: hi - lo })
}
