//! Closed-form expected profit under the newsvendor model.
//!
//! Expected profit splits into a part that would be earned if demand were
//! known in advance (PWU) and the expected cost of uncertainty (ecu), which is
//! proportional to the standard deviation of the stochastic demand:
//!
//! ```text
//! E(Z) = (p - c)·n·π  -  γ·sqrt(n·π·(1 - π))
//! γ    = p·( f(z_α) - (1 - α - c/p)·z_α ),   z_α = F⁻¹(α)
//! ```
//!
//! Advanced demand information from a share β of customers shrinks the
//! stochastic group; subscriptions additionally make the committed demand
//! deterministic at the discounted price `p - τ`.

use crate::demand::{normal_approx, MarketParams, NormalApprox};
use crate::error::{Error, Result};
use crate::normal::{std_normal_pdf, std_normal_quantile};

/// Cost of uncertainty per unit of demand standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GammaCoefficient(f64);

impl GammaCoefficient {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn gamma_coefficient(p: f64, c: f64, alpha: f64) -> Result<GammaCoefficient> {
    if !(c > 0.0 && c < p) {
        return Err(Error::domain(format!(
            "need 0 < c < p, got c = {c}, p = {p}"
        )));
    }
    let z = std_normal_quantile(alpha)?;
    Ok(GammaCoefficient(gamma_at(p, c, alpha, z)))
}

fn gamma_at(p: f64, c: f64, alpha: f64, z: f64) -> f64 {
    p * (std_normal_pdf(z) - (1.0 - alpha - c / p) * z)
}

impl MarketParams {
    pub fn gamma(&self) -> f64 {
        gamma_at(self.p, self.c, self.alpha, self.safety_factor())
    }
}

/// Share of customers providing advance information or subscribing.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AdiShare(f64);

impl AdiShare {
    pub fn new(beta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&beta) {
            Ok(AdiShare(beta))
        } else {
            Err(Error::domain(format!("share {beta} outside [0, 1]")))
        }
    }

    pub const ZERO: AdiShare = AdiShare(0.0);

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfitDecomposition {
    /// Part I, `i_det + i_stoch`.
    pub pwu: f64,
    /// Deterministic (subscribed) revenue part; zero without subscriptions.
    pub i_det: f64,
    pub i_stoch: f64,
    /// Part II, always non-negative.
    pub ecu: f64,
    pub expected_profit: f64,
}

impl ProfitDecomposition {
    fn new(i_det: f64, i_stoch: f64, ecu: f64) -> Self {
        let pwu = i_det + i_stoch;
        ProfitDecomposition {
            pwu,
            i_det,
            i_stoch,
            ecu,
            expected_profit: pwu - ecu,
        }
    }
}

fn ecu(params: &MarketParams, stochastic_customers: f64) -> f64 {
    let sigma = NormalApprox::binomial(stochastic_customers, params.pi).sigma;
    if sigma == 0.0 {
        0.0
    } else {
        params.gamma() * sigma
    }
}

pub fn baseline_profit(params: &MarketParams) -> ProfitDecomposition {
    let pwu = params.margin() * normal_approx(params).mu;
    ProfitDecomposition::new(0.0, pwu, ecu(params, params.n as f64))
}

/// Expected profit when a share `beta` of customers reveals next period's
/// purchase decision in advance.
pub fn adi_profit(params: &MarketParams, beta: AdiShare) -> ProfitDecomposition {
    let n = params.n as f64;
    let pwu = params.margin() * n * params.pi;
    let stochastic = n * (1.0 - params.pi * beta.value());
    ProfitDecomposition::new(0.0, pwu, ecu(params, stochastic))
}

/// Absolute and relative profit change against a reference profit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uplift {
    pub absolute: f64,
    /// Only defined when the reference profit is strictly positive.
    pub relative: Option<f64>,
}

impl Uplift {
    pub fn between(reference: f64, improved: f64) -> Self {
        let absolute = improved - reference;
        let relative = (reference > 0.0).then(|| absolute / reference);
        Uplift { absolute, relative }
    }
}

pub fn adi_uplift(params: &MarketParams, beta: AdiShare) -> Uplift {
    Uplift::between(
        baseline_profit(params).expected_profit,
        adi_profit(params, beta).expected_profit,
    )
}

/// Expected profit when a share `beta` of customers subscribes at discount `tau`.
///
/// `tau` is a currency amount per unit with `0 <= tau < p`.
pub fn subscription_profit(params: &MarketParams, tau: f64, beta: AdiShare) -> ProfitDecomposition {
    let n = params.n as f64;
    let b = beta.value();
    let i_det = (params.p - tau - params.c) * n * b;
    let i_stoch = params.margin() * n * (1.0 - b) * params.pi;
    ProfitDecomposition::new(i_det, i_stoch, ecu(params, n * (1.0 - b)))
}

/// `δ = τ - (1 - π)(p - c)`; a non-positive δ means subscriptions raise Part I.
pub fn delta(params: &MarketParams, tau: f64) -> f64 {
    tau - (1.0 - params.pi) * params.margin()
}

/// Discount at which δ vanishes, `(1 - π)(p - c)`.
pub fn neutral_discount(params: &MarketParams) -> f64 {
    (1.0 - params.pi) * params.margin()
}

/// `∂E(Z_sub)/∂β = -δ·n + (γ/2)·sqrt(n·π·(1-π)/(1-β))`.
///
/// Note the sign of the first term: subscribing one more customer changes
/// Part I by `(1 - π)(p - c) - τ = -δ` per customer.
pub fn marginal_profit_wrt_beta(params: &MarketParams, tau: f64, beta: f64) -> Result<f64> {
    if beta >= 1.0 {
        return Err(Error::Singular);
    }
    if beta < 0.0 {
        return Err(Error::domain(format!("share {beta} below 0")));
    }
    let n = params.n as f64;
    let sigma = normal_approx(params).sigma;
    let uncertainty = if sigma == 0.0 {
        0.0
    } else {
        0.5 * params.gamma() * sigma / (1.0 - beta).sqrt()
    };
    Ok(-delta(params, tau) * n + uncertainty)
}

/// `∂E(Z_sub)/∂τ = -n·β + (∂β/∂τ)·∂E(Z_sub)/∂β`.
pub fn marginal_profit_wrt_tau(
    params: &MarketParams,
    tau: f64,
    beta: f64,
    dbeta_dtau: f64,
) -> Result<f64> {
    if dbeta_dtau < 0.0 {
        return Err(Error::domain(
            "acceptance must not fall as the discount grows",
        ));
    }
    let wrt_beta = marginal_profit_wrt_beta(params, tau, beta)?;
    Ok(-(params.n as f64) * beta + dbeta_dtau * wrt_beta)
}

/// Split of the subscription gain over the baseline into the demand effect
/// (Part I) and the uncertainty reduction (Part II).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpliftDecomposition {
    /// `n·β·(-δ)`, positive when subscriptions raise Part I.
    pub i_delta: f64,
    /// `γ·σ·(1 - sqrt(1 - β))`.
    pub ii_delta: f64,
}

impl UpliftDecomposition {
    pub fn total(&self) -> f64 {
        self.i_delta + self.ii_delta
    }
}

pub fn uplift_decomposition(
    params: &MarketParams,
    tau: f64,
    beta: AdiShare,
) -> UpliftDecomposition {
    let b = beta.value();
    let base_ecu = baseline_profit(params).ecu;
    UpliftDecomposition {
        i_delta: -(params.n as f64) * b * delta(params, tau),
        ii_delta: base_ecu * (1.0 - (1.0 - b).sqrt()),
    }
}

/// ecu / PWU of the baseline.
pub fn ecu_ratio(params: &MarketParams) -> Result<f64> {
    let d = baseline_profit(params);
    if d.pwu <= 0.0 {
        return Err(Error::domain("PWU must be positive for the ecu/PWU ratio"));
    }
    Ok(d.ecu / d.pwu)
}
