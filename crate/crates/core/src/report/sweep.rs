use std::str::FromStr;

use super::scenario::Scenario;
use super::table::{Cell, Format, Table};
use crate::error::{Error, Result};
use crate::pricing::{optimize_discount_analytic, optimize_discount_simulated, SubscriptionTerms};
use crate::profit::{
    adi_profit, baseline_profit, ecu_ratio, marginal_profit_wrt_beta, subscription_profit,
    AdiShare, Uplift,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    N,
    Pi,
    C,
    Beta,
    Tau,
    Lambda,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::N => "n",
            SweepParam::Pi => "pi",
            SweepParam::C => "c",
            SweepParam::Beta => "beta",
            SweepParam::Tau => "tau",
            SweepParam::Lambda => "lambda",
        }
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n" => SweepParam::N,
            "pi" => SweepParam::Pi,
            "c" => SweepParam::C,
            "beta" => SweepParam::Beta,
            "tau" => SweepParam::Tau,
            "lambda" => SweepParam::Lambda,
            other => return Err(Error::input(format!("unknown sweep parameter {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepStep {
    Size(f64),
    Count(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub step: SweepStep,
}

impl SweepSpec {
    pub fn new(param: SweepParam, lo: f64, hi: f64, step: SweepStep) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::input(format!(
                "sweep range needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        match step {
            SweepStep::Size(h) if !(h > 0.0 && h.is_finite()) => {
                return Err(Error::input(format!(
                    "sweep step must be positive, got {h}"
                )))
            }
            SweepStep::Count(k) if k < 2 => {
                return Err(Error::input("sweep needs at least 2 points"))
            }
            _ => {}
        }
        Ok(SweepSpec {
            param,
            lo,
            hi,
            step,
        })
    }

    /// Grid points from `lo` to `hi`; a step size that does not divide the
    /// range stops at the last point not beyond `hi`.
    pub fn points(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        match self.step {
            SweepStep::Size(h) => {
                let last = (span / h + 1e-9).floor() as u64;
                (0..=last).map(|k| self.lo + k as f64 * h).collect()
            }
            SweepStep::Count(k) => (0..k)
                .map(|i| self.lo + span * i as f64 / (k - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Baseline,
    Adi,
    Subscription,
    Optimize,
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "baseline" => SweepMode::Baseline,
            "adi" => SweepMode::Adi,
            "subscription" => SweepMode::Subscription,
            "optimize" => SweepMode::Optimize,
            other => return Err(Error::input(format!("unknown sweep mode {other:?}"))),
        })
    }
}

struct Point {
    scenario: Scenario,
    beta: Option<f64>,
}

fn apply(base: &Scenario, fixed_beta: Option<f64>, param: SweepParam, value: f64) -> Result<Point> {
    let mut scenario = *base;
    let mut beta = fixed_beta;
    match param {
        SweepParam::N => {
            if value < 0.5 {
                return Err(Error::domain(format!("customer base {value} below 1")));
            }
            scenario.params.n = value.round() as u64;
        }
        SweepParam::Pi => scenario.params.pi = value,
        SweepParam::C => scenario.params.c = value,
        SweepParam::Beta => beta = Some(value),
        SweepParam::Tau => scenario.tau = Some(value),
        SweepParam::Lambda => scenario.lambda = Some(value),
    }
    scenario.validate()?;
    Ok(Point { scenario, beta })
}

fn relative(uplift: Uplift) -> Cell {
    uplift.relative.into()
}

/// Evaluate `mode` at every grid point of `spec`.
///
/// Subscription mode uses the swept or fixed `beta` when one is given and the
/// Cobb-Douglas share of the scenario's `tau` and `lambda` otherwise. With
/// `simulated`, optimize mode also runs the simulated discount search.
pub fn sweep(
    base: &Scenario,
    spec: &SweepSpec,
    mode: SweepMode,
    fixed_beta: Option<f64>,
    simulated: bool,
) -> Result<Table> {
    let name = spec.param.name();
    use Format::*;
    let mut columns: Vec<(&str, Format)> = vec![(name, Number)];
    match mode {
        SweepMode::Baseline => columns.extend([
            ("pwu", Currency),
            ("ecu", Currency),
            ("expected_profit", Currency),
            ("ecu_ratio", Share),
        ]),
        SweepMode::Adi => columns.extend([
            ("beta", Share),
            ("ecu_base", Currency),
            ("ecu_adi", Currency),
            ("expected_profit_base", Currency),
            ("expected_profit_adi", Currency),
            ("uplift", Currency),
            ("uplift_rel", Share),
        ]),
        SweepMode::Subscription => columns.extend([
            ("tau", Share),
            ("beta", Share),
            ("i_det", Currency),
            ("i_stoch", Currency),
            ("ecu_base", Currency),
            ("ecu_sub", Currency),
            ("expected_profit_base", Currency),
            ("expected_profit_sub", Currency),
            ("uplift", Currency),
            ("uplift_rel", Share),
            ("marginal_beta", Currency),
        ]),
        SweepMode::Optimize => {
            columns.extend([
                ("tau_star", Share),
                ("beta", Share),
                ("ecu_sub", Currency),
                ("expected_profit_base", Currency),
                ("expected_profit_sub", Currency),
                ("uplift", Currency),
                ("uplift_rel", Share),
            ]);
            if simulated {
                columns.extend([
                    ("sim_tau_star", Share),
                    ("sim_beta", Share),
                    ("sim_initial_profit", Currency),
                    ("sim_profit", Currency),
                    ("sim_std_error", Currency),
                    ("sim_uplift_rel", Share),
                ]);
            }
        }
    }
    let mut table = Table::new(
        format!("{mode:?} sweep over {name}").to_lowercase(),
        &columns,
    );

    for value in spec.points() {
        let Point { scenario, beta } = apply(base, fixed_beta, spec.param, value)?;
        let params = &scenario.params;
        let base_profit = baseline_profit(params);
        let mut row: Vec<Cell> = vec![value.into()];
        match mode {
            SweepMode::Baseline => row.extend([
                base_profit.pwu.into(),
                base_profit.ecu.into(),
                base_profit.expected_profit.into(),
                ecu_ratio(params).ok().into(),
            ]),
            SweepMode::Adi => {
                let share =
                    AdiShare::new(beta.ok_or_else(|| Error::input("adi sweep needs a beta"))?)?;
                let adi = adi_profit(params, share);
                let uplift = Uplift::between(base_profit.expected_profit, adi.expected_profit);
                row.extend([
                    share.value().into(),
                    base_profit.ecu.into(),
                    adi.ecu.into(),
                    base_profit.expected_profit.into(),
                    adi.expected_profit.into(),
                    uplift.absolute.into(),
                    relative(uplift),
                ]);
            }
            SweepMode::Subscription => {
                let tau = scenario.tau()?;
                let share = match beta {
                    Some(b) => AdiShare::new(b)?,
                    None => SubscriptionTerms::new(params, tau, scenario.lambda()?)?.share(),
                };
                let sub = subscription_profit(params, tau, share);
                let uplift = Uplift::between(base_profit.expected_profit, sub.expected_profit);
                row.extend([
                    tau.into(),
                    share.value().into(),
                    sub.i_det.into(),
                    sub.i_stoch.into(),
                    base_profit.ecu.into(),
                    sub.ecu.into(),
                    base_profit.expected_profit.into(),
                    sub.expected_profit.into(),
                    uplift.absolute.into(),
                    relative(uplift),
                    marginal_profit_wrt_beta(params, tau, share.value())
                        .ok()
                        .into(),
                ]);
            }
            SweepMode::Optimize => {
                let lambda = scenario.lambda()?;
                let sol = optimize_discount_analytic(params, lambda)?;
                let sub =
                    subscription_profit(params, sol.tau_star, AdiShare::new(sol.beta_at_optimum)?);
                row.extend([
                    sol.tau_star.into(),
                    sol.beta_at_optimum.into(),
                    sub.ecu.into(),
                    sol.baseline_profit.into(),
                    sol.expected_profit.into(),
                    sol.absolute_uplift.into(),
                    sol.relative_uplift.into(),
                ]);
                if simulated {
                    let sim = optimize_discount_simulated(&scenario.sim_config(), params, lambda)?;
                    row.extend([
                        sim.tau_star.into(),
                        sim.beta_at_optimum.into(),
                        sim.baseline_profit.into(),
                        sim.expected_profit.into(),
                        sim.std_error.into(),
                        sim.relative_uplift.into(),
                    ]);
                }
            }
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let spec = SweepSpec::new(SweepParam::Beta, 0.0, 0.99, SweepStep::Size(0.01)).unwrap();
        let pts = spec.points();
        assert_eq!(pts.len(), 100);
        assert!((pts[99] - 0.99).abs() < 1e-12);
        let spec = SweepSpec::new(SweepParam::N, 200.0, 1000.0, SweepStep::Count(5)).unwrap();
        assert_eq!(spec.points(), vec![200.0, 400.0, 600.0, 800.0, 1000.0]);
        assert!(SweepSpec::new(SweepParam::N, 5.0, 5.0, SweepStep::Count(3)).is_err());
        assert!(SweepSpec::new(SweepParam::N, 1.0, 5.0, SweepStep::Size(0.0)).is_err());
        assert!(SweepSpec::new(SweepParam::N, 1.0, 5.0, SweepStep::Count(1)).is_err());
    }

    #[test]
    fn profit_rises_with_share_at_neutral_discount() {
        let scenario = Scenario {
            tau: Some(0.075),
            ..Scenario::basic()
        };
        let spec = SweepSpec::new(SweepParam::Beta, 0.0, 0.99, SweepStep::Size(0.01)).unwrap();
        let table = sweep(&scenario, &spec, SweepMode::Subscription, None, false).unwrap();
        let profits: Vec<f64> = table
            .values("expected_profit_sub")
            .into_iter()
            .map(Option::unwrap)
            .collect();
        assert!(profits.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn optimal_discount_falls_with_cost() {
        let spec = SweepSpec::new(SweepParam::C, 0.1, 0.9, SweepStep::Size(0.1)).unwrap();
        let table = sweep(&Scenario::basic(), &spec, SweepMode::Optimize, None, false).unwrap();
        let taus: Vec<f64> = table
            .values("tau_star")
            .into_iter()
            .map(Option::unwrap)
            .collect();
        assert!(taus[0] > 0.10);
        assert!((taus[taus.len() - 1] - 0.02).abs() < 0.005);
        assert!(taus.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn missing_inputs_are_reported() {
        let spec = SweepSpec::new(SweepParam::N, 100.0, 200.0, SweepStep::Count(2)).unwrap();
        let no_tau = sweep(
            &Scenario::basic(),
            &spec,
            SweepMode::Subscription,
            None,
            false,
        );
        assert!(matches!(no_tau, Err(Error::Input(_))));
        assert!(matches!(
            sweep(&Scenario::basic(), &spec, SweepMode::Adi, None, false),
            Err(Error::Input(_))
        ));
        let bad = SweepSpec::new(SweepParam::C, 0.5, 1.5, SweepStep::Count(3)).unwrap();
        assert!(
            sweep(&Scenario::basic(), &bad, SweepMode::Baseline, None, false)
                .unwrap_err()
                .is_domain()
        );
    }
}
