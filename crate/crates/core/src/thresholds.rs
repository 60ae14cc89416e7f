//! Break-even parameters: where subscriptions stop paying off and where the
//! SKU stops being profitable at all.
//!
//! Every finder scans a grid (step 1e-3) for the first sign change and then
//! bisects the bracketing cell down to 1e-10, tight enough that the profit
//! gap at the returned point stays below 1e-4 even for large customer bases.
//! The scan makes the finders robust to near-tangent crossings that a pure
//! bisection would miss.

use crate::demand::MarketParams;
use crate::profit::{baseline_profit, delta, subscription_profit, AdiShare};

const SCAN_STEP: f64 = 1e-3;
const TOLERANCE: f64 = 1e-10;
/// Left edge used in place of an open interval bound.
const EDGE: f64 = 1e-12;

/// First root of `f` on `[lo, hi]`, located by scanning and bisection.
///
/// Returns `Some(lo)` when `f(lo) == 0`, `None` when `f` never changes sign.
pub fn first_crossing<F>(f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return None;
    }
    let mut a = lo;
    let mut fa = f(a);
    if fa == 0.0 {
        return Some(a);
    }
    // grid anchored on multiples of `step`, with both ends included
    let mut k = (lo / step).floor() + 1.0;
    loop {
        let b = (k * step).min(hi);
        let fb = f(b);
        if fb == 0.0 {
            return Some(b);
        }
        if fa.signum() != fb.signum() {
            return Some(bisect(&f, a, b, fa, tol));
        }
        if b >= hi {
            return None;
        }
        a = b;
        fa = fb;
        k += 1.0;
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, fa: f64, tol: f64) -> f64 {
    let sign_a = fa.signum();
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Smallest buying probability at which the baseline expected profit is
/// non-negative. `params.pi` is ignored. Returns 0 when every π is profitable.
pub fn min_viable_pi(params: &MarketParams) -> f64 {
    let profit = |pi: f64| baseline_profit(&params.with_pi(pi)).expected_profit;
    if profit(EDGE) >= 0.0 {
        return 0.0;
    }
    first_crossing(profit, EDGE, 1.0, SCAN_STEP, TOLERANCE).unwrap_or(1.0)
}

fn subscription_gain(params: &MarketParams, tau: f64, beta: AdiShare) -> f64 {
    subscription_profit(params, tau, beta).expected_profit - baseline_profit(params).expected_profit
}

/// Buying probability above which a subscription at (`tau`, `beta`) no longer
/// beats the baseline. Searched above the point where δ = 0. `params.pi` is
/// ignored.
pub fn critical_pi(params: &MarketParams, tau: f64, beta: AdiShare) -> Option<f64> {
    let margin = params.margin();
    let neutral_pi = 1.0 - tau / margin;
    if neutral_pi >= 1.0 {
        return None;
    }
    let lo = neutral_pi.max(EDGE);
    first_crossing(
        |pi| subscription_gain(&params.with_pi(pi), tau, beta),
        lo,
        1.0 - EDGE,
        SCAN_STEP,
        TOLERANCE,
    )
}

/// Supply cost above which a subscription at (`tau`, `beta`) no longer beats
/// the baseline. Costs are scanned over `(0, p)`; `params.c` is ignored.
pub fn critical_c(params: &MarketParams, tau: f64, beta: AdiShare) -> Option<f64> {
    let p = params.p;
    first_crossing(
        |c| subscription_gain(&params.with_c(c), tau, beta),
        EDGE * p,
        p * (1.0 - EDGE),
        SCAN_STEP * p,
        TOLERANCE * p,
    )
}

/// Supply cost at which expected profit reaches zero, either for the
/// baseline (`subscription = None`) or with subscriptions at (`tau`, `beta`).
pub fn zero_profit_cost(
    params: &MarketParams,
    subscription: Option<(f64, AdiShare)>,
) -> Option<f64> {
    let p = params.p;
    let profit = |c: f64| {
        let at = params.with_c(c);
        match subscription {
            None => baseline_profit(&at).expected_profit,
            Some((tau, beta)) => subscription_profit(&at, tau, beta).expected_profit,
        }
    };
    first_crossing(
        profit,
        EDGE * p,
        p * (1.0 - EDGE),
        SCAN_STEP * p,
        TOLERANCE * p,
    )
}

/// Smallest subscribing share from which the subscription profit at `tau`
/// reaches the baseline.
///
/// Returns `Some(0.0)` when subscriptions are beneficial for every share
/// (δ ≤ 0, or the uncertainty reduction of the first subscribers already
/// outweighs the discount), `None` when no share in (0, 1] breaks even.
pub fn critical_beta(params: &MarketParams, tau: f64) -> Option<f64> {
    if delta(params, tau) <= 0.0 {
        return Some(0.0);
    }
    let gain =
        |beta: f64| subscription_gain(params, tau, AdiShare::new(beta).unwrap_or(AdiShare::ZERO));
    if gain(EDGE) >= 0.0 {
        return Some(0.0);
    }
    first_crossing(gain, EDGE, 1.0, SCAN_STEP, TOLERANCE)
}
