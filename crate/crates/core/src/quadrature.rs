//! Numerical integration of the newsvendor expected profit.
//!
//! Used as an independent check of the closed-form decomposition in
//! [`crate::profit`].

use crate::demand::{normal_approx, MarketParams};
use crate::error::{Error, Result};
use crate::normal::std_normal_sf;

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Expected profit of ordering `q` units against N(μ, σ) demand:
///
/// `p·∫ x f(x) dx over [0, q] + p·q·(1 - F(q)) - c·q`.
///
/// The integral starts at `max(0, μ - 8σ)`; the omitted left tail carries a
/// probability below 1e-15. Absolute tolerance 1e-6.
pub fn expected_profit_integral(params: &MarketParams, q: f64) -> Result<f64> {
    if !q.is_finite() {
        return Err(Error::domain("order quantity must be finite"));
    }
    if q < 0.0 {
        return Err(Error::domain("order quantity must be non-negative"));
    }
    let demand = normal_approx(params);
    let (mu, sigma) = (demand.mu, demand.sigma);
    let (p, c) = (params.p, params.c);
    if sigma == 0.0 {
        return Ok(p * mu.min(q) - c * q);
    }
    let density = |x: f64| {
        let z = (x - mu) / sigma;
        (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
    };
    let lower = (mu - 8.0 * sigma).max(0.0);
    let sold_below_q = if q > lower {
        adaptive_simpson(|x| x * density(x), lower, q, 1e-6)
    } else {
        0.0
    };
    let stockout = std_normal_sf((q - mu) / sigma);
    Ok(p * sold_below_q + p * q * stockout - c * q)
}
