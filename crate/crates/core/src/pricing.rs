//! Customer acceptance of subscription offers and the profit-maximising discount.
//!
//! A customer who buys in the initial period accepts the subscription with
//! Cobb-Douglas probability `η = (τ/p · π · λ)^(1/3)`, so the ex-ante share of
//! subscribers is `β = π·η`. The discount is normalised by the price to keep
//! the acceptance inputs dimensionless.

use crate::demand::MarketParams;
use crate::error::{Error, Result};
use crate::profit::{baseline_profit, subscription_profit, AdiShare, Uplift};
use crate::sim::{SimulationConfig, Simulator};

fn unit_interval(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {value} outside [0, 1]")))
    }
}

/// `η = (τ·π·λ)^(1/3)` with `τ` already normalised by the price.
pub fn acceptance_probability(tau: f64, pi: f64, lambda: f64) -> Result<f64> {
    unit_interval("discount", tau)?;
    unit_interval("buying probability", pi)?;
    unit_interval("popularity", lambda)?;
    Ok((tau * pi * lambda).cbrt())
}

/// `β = π·η`.
pub fn ex_ante_share(tau: f64, pi: f64, lambda: f64) -> Result<f64> {
    Ok(pi * acceptance_probability(tau, pi, lambda)?)
}

/// `dβ/dτ = β/(3τ)`; infinite at `τ = 0` whenever `π·λ > 0`.
///
/// The same expression holds for the normalised and the currency discount,
/// since β is homogeneous of degree 1/3 in τ.
pub fn ex_ante_share_slope(tau: f64, pi: f64, lambda: f64) -> Result<f64> {
    let beta = ex_ante_share(tau, pi, lambda)?;
    if tau == 0.0 {
        return Ok(if pi * lambda > 0.0 {
            f64::INFINITY
        } else {
            0.0
        });
    }
    Ok(beta / (3.0 * tau))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isoquant {
    pub lambda: f64,
    /// The unclamped popularity exceeded 1, so no customer trait reaches the target.
    pub clamped: bool,
}

/// Popularity at which acceptance reaches `eta_target` for given τ and π.
pub fn isoquant_lambda(eta_target: f64, tau: f64, pi: f64) -> Result<Isoquant> {
    if !(eta_target > 0.0 && eta_target <= 1.0) {
        return Err(Error::domain(format!(
            "target acceptance {eta_target} outside (0, 1]"
        )));
    }
    unit_interval("discount", tau)?;
    unit_interval("buying probability", pi)?;
    if tau * pi == 0.0 {
        return Err(Error::domain(
            "isoquant undefined when the discount or buying probability is zero",
        ));
    }
    let lambda = eta_target.powi(3) / (tau * pi);
    Ok(Isoquant {
        lambda: lambda.min(1.0),
        clamped: lambda > 1.0,
    })
}

/// A concrete subscription offer and the acceptance it induces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubscriptionTerms {
    /// Discount per unit, in currency.
    pub tau: f64,
    pub lambda: f64,
    pub eta: f64,
    pub beta: f64,
}

impl SubscriptionTerms {
    pub fn new(params: &MarketParams, tau: f64, lambda: f64) -> Result<Self> {
        if !(0.0..=params.p).contains(&tau) {
            return Err(Error::domain(format!("discount {tau} outside [0, p]")));
        }
        let eta = acceptance_probability(tau / params.p, params.pi, lambda)?;
        Ok(SubscriptionTerms {
            tau,
            lambda,
            eta,
            beta: params.pi * eta,
        })
    }

    pub fn share(&self) -> AdiShare {
        AdiShare::new(self.beta).expect("β = π·η lies in [0, 1]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountSolution {
    pub tau_star: f64,
    /// `tau_star` rounded to 0.1% of the price.
    pub tau_star_reported: f64,
    pub expected_profit: f64,
    pub baseline_profit: f64,
    pub beta_at_optimum: f64,
    pub absolute_uplift: f64,
    /// `None` when the baseline profit is not positive.
    pub relative_uplift: Option<f64>,
    /// Standard error of `expected_profit` for simulated solutions.
    pub std_error: Option<f64>,
    /// The best discount is zero: the offer should not be made.
    pub degenerate: bool,
}

impl DiscountSolution {
    fn new(
        params: &MarketParams,
        tau_star: f64,
        expected_profit: f64,
        baseline: f64,
        beta: f64,
        std_error: Option<f64>,
    ) -> Self {
        let uplift = Uplift::between(baseline, expected_profit);
        let grain = GRID_STEP * params.p;
        DiscountSolution {
            tau_star,
            tau_star_reported: (tau_star / grain).round() * grain,
            expected_profit,
            baseline_profit: baseline,
            beta_at_optimum: beta,
            absolute_uplift: uplift.absolute,
            relative_uplift: uplift.relative,
            std_error,
            degenerate: tau_star == 0.0,
        }
    }
}

/// Grid step of the discount search, as a fraction of the price.
pub const GRID_STEP: f64 = 0.001;

/// The discount grid `0, h, 2h, …` up to the margin `p - c`, with `h = 0.001·p`.
pub fn discount_grid(params: &MarketParams) -> Vec<f64> {
    let step = GRID_STEP * params.p;
    let last = (params.margin() / step + 1e-9).floor() as u64;
    (0..=last).map(|k| k as f64 * step).collect()
}

fn analytic_objective(params: &MarketParams, lambda: f64, tau: f64) -> Result<(f64, f64)> {
    let terms = SubscriptionTerms::new(params, tau, lambda)?;
    Ok((
        subscription_profit(params, tau, terms.share()).expected_profit,
        terms.beta,
    ))
}

/// One point of the analytic profit curve over the discount.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub tau: f64,
    pub beta: f64,
    pub expected_profit: f64,
}

/// The analytic objective on the full discount grid.
pub fn discount_curve(params: &MarketParams, lambda: f64) -> Result<Vec<CurvePoint>> {
    params.validate()?;
    discount_grid(params)
        .into_iter()
        .map(|tau| {
            let (expected_profit, beta) = analytic_objective(params, lambda, tau)?;
            Ok(CurvePoint {
                tau,
                beta,
                expected_profit,
            })
        })
        .collect()
}

/// Index of the largest value; ties go to the earliest (smallest discount).
fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Maximise closed-form subscription profit over the discount.
///
/// Grid scan at 0.1% of the price over `[0, p - c]`, then golden-section
/// refinement to 1e-5 within one grid step of the best grid point. The refined
/// point is kept only if it does not lose against the grid optimum.
pub fn optimize_discount_analytic(params: &MarketParams, lambda: f64) -> Result<DiscountSolution> {
    let curve = discount_curve(params, lambda)?;
    let best = curve[argmax(curve.iter().map(|pt| pt.expected_profit))];
    let baseline = baseline_profit(params).expected_profit;

    let mut tau_star = best.tau;
    let mut profit = best.expected_profit;
    let mut beta = best.beta;
    if tau_star > 0.0 {
        let step = GRID_STEP * params.p;
        let lo = (tau_star - step).max(0.0);
        let hi = (tau_star + step).min(params.margin());
        let objective =
            |t: f64| analytic_objective(params, lambda, t).map_or(f64::NEG_INFINITY, |v| v.0);
        let refined = golden_section_max(objective, lo, hi, 1e-5);
        let (refined_profit, refined_beta) = analytic_objective(params, lambda, refined)?;
        if refined_profit >= profit {
            tau_star = refined;
            profit = refined_profit;
            beta = refined_beta;
        }
    }
    Ok(DiscountSolution::new(
        params, tau_star, profit, baseline, beta, None,
    ))
}

/// Grid search over the discount with the simulator's mean per-period profit
/// as objective.
///
/// Every grid point reuses the same master seed, so profits at neighbouring
/// discounts are compared on common random numbers. The uplift is measured
/// against the simulated initial period, which offers no subscription.
pub fn optimize_discount_simulated(
    config: &SimulationConfig,
    params: &MarketParams,
    lambda: f64,
) -> Result<DiscountSolution> {
    let sim = Simulator::new(*params, *config)?;
    let grid = discount_grid(params);
    let reports = sim.sweep_discounts(&grid, lambda)?;
    let best = &reports[argmax(reports.iter().map(|r| r.eval_mean_profit_per_period))];
    Ok(DiscountSolution::new(
        params,
        best.tau,
        best.eval_mean_profit_per_period,
        best.initial_period_mean_profit,
        best.mean_subscriber_share,
        Some(best.std_error),
    ))
}
