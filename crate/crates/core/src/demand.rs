//! Binomial customer demand and its normal approximation.

use crate::error::{Error, Result};
use crate::normal::std_normal_quantile;

/// One SKU / customer-segment scenario.
///
/// `n` potential customers each buy a single unit with probability `pi`,
/// independently. Units sell at `p` and cost `c`; the order quantity targets
/// service level `alpha` on the stochastic part of demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub n: u64,
    pub pi: f64,
    pub p: f64,
    pub c: f64,
    pub alpha: f64,
}

impl MarketParams {
    pub fn new(n: u64, pi: f64, p: f64, c: f64, alpha: f64) -> Result<Self> {
        let params = MarketParams { n, pi, p, c, alpha };
        params.validate()?;
        Ok(params)
    }

    /// n = 500, π = 0.5, p = 1, c = 0.85, α = 0.97.
    pub fn basic() -> Self {
        MarketParams {
            n: 500,
            pi: 0.5,
            p: 1.0,
            c: 0.85,
            alpha: 0.97,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("customer base n must be at least 1"));
        }
        if !(self.pi > 0.0 && self.pi <= 1.0) {
            return Err(Error::domain(format!(
                "buying probability {} outside (0, 1]",
                self.pi
            )));
        }
        if !(self.c > 0.0 && self.c < self.p) || !self.p.is_finite() {
            return Err(Error::domain(format!(
                "need 0 < c < p, got c = {}, p = {}",
                self.c, self.p
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::domain(format!(
                "service level {} outside (0, 1)",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn with_n(self, n: u64) -> Self {
        MarketParams { n, ..self }
    }

    pub fn with_pi(self, pi: f64) -> Self {
        MarketParams { pi, ..self }
    }

    pub fn with_c(self, c: f64) -> Self {
        MarketParams { c, ..self }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        MarketParams { alpha, ..self }
    }

    /// Short-term margin `p - c`.
    pub fn margin(&self) -> f64 {
        self.p - self.c
    }

    /// `F⁻¹(α)` of the standard normal.
    pub fn safety_factor(&self) -> f64 {
        std_normal_quantile(self.alpha).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalApprox {
    pub mu: f64,
    pub sigma: f64,
}

impl NormalApprox {
    /// Normal approximation of Binomial(`count`, `pi`). `count` may be
    /// fractional (expected stochastic customer counts).
    pub fn binomial(count: f64, pi: f64) -> Self {
        // exact zero at the degenerate ends avoids 0·∞ downstream
        let sigma = if pi <= 0.0 || pi >= 1.0 || count <= 0.0 {
            0.0
        } else {
            (count * pi * (1.0 - pi)).sqrt()
        };
        NormalApprox {
            mu: count * pi,
            sigma,
        }
    }

    /// `μ + σ·z`.
    pub fn at(&self, z: f64) -> f64 {
        if self.sigma == 0.0 {
            self.mu
        } else {
            self.mu + self.sigma * z
        }
    }
}

pub fn normal_approx(params: &MarketParams) -> NormalApprox {
    NormalApprox::binomial(params.n as f64, params.pi)
}

/// Service-level order quantity `q = μ + σ·F⁻¹(α)`, kept continuous.
pub fn order_quantity(params: &MarketParams) -> f64 {
    normal_approx(params).at(params.safety_factor())
}
