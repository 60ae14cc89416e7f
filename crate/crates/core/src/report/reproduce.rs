use std::str::FromStr;

use super::scenario::Scenario;
use super::sweep::{sweep, SweepMode, SweepParam, SweepSpec, SweepStep};
use super::table::{Cell, Format, Table};
use crate::demand::MarketParams;
use crate::error::{Error, Result};
use crate::pricing::{
    discount_curve, isoquant_lambda, optimize_discount_analytic, optimize_discount_simulated,
    DiscountSolution,
};
use crate::profit::{
    adi_profit, adi_uplift, baseline_profit, ecu_ratio, marginal_profit_wrt_beta,
    subscription_profit, AdiShare,
};
use crate::sim::SimulationConfig;

/// A reproducible table or figure series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Table1,
    Table2,
    Table3,
    /// Figures 2 to 11; figure 1 is based on proprietary data.
    Fig(u8),
}

const FIGURE_ALIASES: [(&str, u8); 10] = [
    ("ecu-ratio", 2),
    ("customer-base", 3),
    ("buying-probability", 4),
    ("supply-cost", 5),
    ("subscriber-share", 6),
    ("marginal", 7),
    ("isoquants", 8),
    ("discount-curve", 9),
    ("optimum-by-n", 10),
    ("optimum-by-c", 11),
];

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => return Ok(Target::Table1),
            "table2" => return Ok(Target::Table2),
            "table3" => return Ok(Target::Table3),
            _ => {}
        }
        let fig = s
            .strip_prefix("fig")
            .and_then(|k| k.parse::<u8>().ok())
            .or_else(|| {
                FIGURE_ALIASES
                    .iter()
                    .find(|(a, _)| *a == s)
                    .map(|(_, k)| *k)
            });
        match fig {
            Some(k @ 2..=11) => Ok(Target::Fig(k)),
            _ => Err(Error::input(format!("unknown reproduction target {s:?}"))),
        }
    }
}

impl Target {
    pub fn all() -> Vec<Target> {
        let mut all = vec![Target::Table1, Target::Table2, Target::Table3];
        all.extend((2..=11).map(Target::Fig));
        all
    }

    pub fn name(self) -> String {
        match self {
            Target::Table1 => "table1".into(),
            Target::Table2 => "table2".into(),
            Target::Table3 => "table3".into(),
            Target::Fig(k) => format!("fig{k}"),
        }
    }

    pub fn is_simulated(self) -> bool {
        matches!(self, Target::Table3 | Target::Fig(10) | Target::Fig(11))
    }
}

/// PWU and ecu for n ∈ {50, 100, 500, 1000} × π ∈ {1, 0.75, 0.5, 0.25}.
pub fn table1() -> Table {
    let mut t = Table::new(
        "profit without uncertainty and expected costs of uncertainty",
        &[
            ("n", Format::Number),
            ("pi", Format::Number),
            ("pwu", Format::Currency),
            ("ecu", Format::Currency),
        ],
    );
    for n in [50, 100, 500, 1000] {
        for pi in [1.0, 0.75, 0.5, 0.25] {
            let d = baseline_profit(&MarketParams::basic().with_n(n).with_pi(pi));
            t.push(vec![n.into(), pi.into(), d.pwu.into(), d.ecu.into()]);
        }
    }
    t
}

/// Profit with advance information from a share β of n = 500 customers.
pub fn table2() -> Table {
    let mut t = Table::new(
        "expected profit with advance demand information",
        &[
            ("pi", Format::Number),
            ("beta", Format::Number),
            ("z1", Format::Currency),
            ("z2", Format::Currency),
            ("delta_z", Format::Currency),
            ("relative", Format::Share),
        ],
    );
    for pi in [0.25, 0.5, 0.75] {
        for beta in [0.25, 0.5, 0.75, 1.0] {
            let params = MarketParams::basic().with_pi(pi);
            let share = AdiShare::new(beta).expect("grid share in [0, 1]");
            let up = adi_uplift(&params, share);
            t.push(vec![
                pi.into(),
                beta.into(),
                baseline_profit(&params).expected_profit.into(),
                adi_profit(&params, share).expected_profit.into(),
                up.absolute.into(),
                up.relative.into(),
            ]);
        }
    }
    t.note(
        "pi=0.5 beta=0.75: relative increase is delta_z/z1 = 19.33%; \
         the reference table prints 15.88%, which disagrees with its own delta_z column",
    );
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table3Cell {
    pub pi: f64,
    pub lambda: f64,
    pub simulated: DiscountSolution,
    pub analytic: DiscountSolution,
}

pub const TABLE3_PI: [f64; 4] = [0.25, 0.5, 0.75, 0.95];
pub const TABLE3_LAMBDA: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Simulated optimal discounts for the basic example at the given
/// (π, λ) cells, in the order given.
pub fn table3(config: &SimulationConfig, cells: &[(f64, f64)]) -> Result<Vec<Table3Cell>> {
    cells
        .iter()
        .map(|&(pi, lambda)| {
            let params = MarketParams::basic().with_pi(pi);
            Ok(Table3Cell {
                pi,
                lambda,
                simulated: optimize_discount_simulated(config, &params, lambda)?,
                analytic: optimize_discount_analytic(&params, lambda)?,
            })
        })
        .collect()
}

fn table3_table(cells: &[Table3Cell]) -> Table {
    use Format::*;
    let mut t = Table::new(
        "simulated optimal discount by buying probability and popularity",
        &[
            ("pi", Number),
            ("lambda", Number),
            ("tau_star", Share),
            ("beta", Share),
            ("delta_z", Share),
            ("initial_profit", Currency),
            ("profit", Currency),
            ("std_error", Currency),
            ("analytic_tau_star", Share),
            ("analytic_beta", Share),
            ("analytic_delta_z", Share),
        ],
    );
    for c in cells {
        t.push(vec![
            c.pi.into(),
            c.lambda.into(),
            c.simulated.tau_star.into(),
            c.simulated.beta_at_optimum.into(),
            c.simulated.relative_uplift.into(),
            c.simulated.baseline_profit.into(),
            c.simulated.expected_profit.into(),
            c.simulated.std_error.into(),
            c.analytic.tau_star.into(),
            c.analytic.beta_at_optimum.into(),
            c.analytic.relative_uplift.into(),
        ]);
    }
    t
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let last = ((hi - lo) / step + 1e-9).floor() as u64;
    (0..=last).map(|k| lo + k as f64 * step).collect()
}

/// Subscription setting used for the parameter studies: δ = 0 at π = 0.5.
const STUDY_TAU: f64 = 0.075;
const STUDY_BETA: f64 = 0.1;

fn study(
    params: &MarketParams,
) -> (
    crate::profit::ProfitDecomposition,
    crate::profit::ProfitDecomposition,
) {
    let share = AdiShare::new(STUDY_BETA).expect("constant share");
    (
        baseline_profit(params),
        subscription_profit(params, STUDY_TAU, share),
    )
}

fn fig_ecu_ratio() -> Table {
    let mut t = Table::new(
        "ecu/PWU by service level and supply cost",
        &[
            ("c", Format::Number),
            ("alpha", Format::Number),
            ("ecu_ratio", Format::Share),
        ],
    );
    for c in [0.5, 0.75, 0.85, 0.9] {
        for alpha in grid(0.01, 0.99, 0.01) {
            let params = MarketParams::basic().with_c(c).with_alpha(alpha);
            t.push(vec![c.into(), alpha.into(), ecu_ratio(&params).ok().into()]);
        }
    }
    t
}

fn fig_study<F>(title: &str, name: &str, points: Vec<f64>, apply: F) -> Table
where
    F: Fn(f64) -> MarketParams,
{
    use Format::*;
    let mut t = Table::new(
        title,
        &[
            (name, Number),
            ("pwu_base", Currency),
            ("pwu_sub", Currency),
            ("ecu_base", Currency),
            ("ecu_sub", Currency),
            ("expected_profit_base", Currency),
            ("expected_profit_sub", Currency),
            ("uplift_rel", Share),
        ],
    );
    for x in points {
        let (base, sub) = study(&apply(x));
        let uplift =
            (base.expected_profit > 0.0).then(|| sub.expected_profit / base.expected_profit - 1.0);
        t.push(vec![
            x.into(),
            base.pwu.into(),
            sub.pwu.into(),
            base.ecu.into(),
            sub.ecu.into(),
            base.expected_profit.into(),
            sub.expected_profit.into(),
            uplift.into(),
        ]);
    }
    t.note(format!(
        "subscription at tau={STUDY_TAU}, beta={STUDY_BETA}"
    ));
    t
}

fn fig_subscriber_share() -> Table {
    use Format::*;
    let mut t = Table::new(
        "expected profit by subscribing share",
        &[
            ("tau", Number),
            ("beta", Number),
            ("expected_profit_base", Currency),
            ("expected_profit_sub", Currency),
        ],
    );
    let params = MarketParams::basic();
    let base = baseline_profit(&params).expected_profit;
    for tau in [0.09, 0.10, 0.11, 0.12] {
        for beta in grid(0.0, 0.99, 0.01) {
            let sub = subscription_profit(&params, tau, AdiShare::new(beta).expect("grid share"));
            t.push(vec![
                tau.into(),
                beta.into(),
                base.into(),
                sub.expected_profit.into(),
            ]);
        }
    }
    t
}

fn fig_marginal() -> Table {
    let mut t = Table::new(
        "marginal profit of an additional subscriber",
        &[
            ("tau", Format::Number),
            ("beta", Format::Number),
            ("marginal", Format::Currency),
        ],
    );
    let params = MarketParams::basic();
    for beta in grid(0.0, 0.99, 0.01) {
        let m = marginal_profit_wrt_beta(&params, STUDY_TAU, beta).expect("beta below 1");
        t.push(vec![STUDY_TAU.into(), beta.into(), m.into()]);
    }
    t
}

fn fig_isoquants() -> Result<Table> {
    let mut t = Table::new(
        "popularity needed for a given acceptance probability",
        &[
            ("eta", Format::Number),
            ("pi", Format::Number),
            ("lambda", Format::Number),
            ("clamped", Format::Text),
        ],
    );
    for eta in grid(0.05, 0.30, 0.05) {
        for pi in grid(0.01, 1.0, 0.01) {
            let iso = isoquant_lambda(eta, STUDY_TAU, pi)?;
            let lambda = if iso.clamped {
                Cell::Empty
            } else {
                iso.lambda.into()
            };
            t.push(vec![
                eta.into(),
                pi.into(),
                lambda,
                Cell::from(if iso.clamped { "yes" } else { "no" }),
            ]);
        }
    }
    t.note(format!("discount tau={STUDY_TAU}"));
    Ok(t)
}

fn fig_discount_curve(scenario: &Scenario) -> Result<Table> {
    use Format::*;
    let lambda = scenario.lambda()?;
    let params = MarketParams::basic();
    let base = baseline_profit(&params).expected_profit;
    let mut t = Table::new(
        "expected profit by discount",
        &[
            ("tau", Share),
            ("beta", Share),
            ("expected_profit_base", Currency),
            ("expected_profit_sub", Currency),
        ],
    );
    for pt in discount_curve(&params, lambda)? {
        t.push(vec![
            pt.tau.into(),
            pt.beta.into(),
            base.into(),
            pt.expected_profit.into(),
        ]);
    }
    Ok(t)
}

/// The table for `target`. Simulated targets use the scenario's runs,
/// periods and seed; all others use fixed grids around the basic example.
pub fn reproduce(target: Target, scenario: &Scenario) -> Result<Table> {
    let config = scenario.sim_config();
    let mut table = match target {
        Target::Table1 => table1(),
        Target::Table2 => table2(),
        Target::Table3 => {
            let cells: Vec<(f64, f64)> = TABLE3_PI
                .iter()
                .flat_map(|&pi| TABLE3_LAMBDA.iter().map(move |&l| (pi, l)))
                .collect();
            table3_table(&table3(&config, &cells)?)
        }
        Target::Fig(2) => fig_ecu_ratio(),
        Target::Fig(3) => fig_study(
            "costs of uncertainty by customer base",
            "n",
            grid(165.0, 1000.0, 5.0),
            |n| MarketParams::basic().with_n(n as u64),
        ),
        Target::Fig(4) => fig_study(
            "costs of uncertainty by buying probability",
            "pi",
            grid(0.25, 1.0, 0.01),
            |pi| MarketParams::basic().with_pi(pi.min(1.0)),
        ),
        Target::Fig(5) => fig_study(
            "expected profit by supply cost",
            "c",
            grid(0.01, 0.99, 0.01),
            |c| MarketParams::basic().with_c(c),
        ),
        Target::Fig(6) => fig_subscriber_share(),
        Target::Fig(7) => fig_marginal(),
        Target::Fig(8) => fig_isoquants()?,
        Target::Fig(9) => fig_discount_curve(scenario)?,
        Target::Fig(10) => {
            let spec = SweepSpec::new(SweepParam::N, 150.0, 1000.0, SweepStep::Size(50.0))?;
            sweep(scenario, &spec, SweepMode::Optimize, None, true)?
        }
        Target::Fig(11) => {
            let spec = SweepSpec::new(SweepParam::C, 0.05, 0.9, SweepStep::Size(0.05))?;
            sweep(scenario, &spec, SweepMode::Optimize, None, true)?
        }
        Target::Fig(k) => return Err(Error::input(format!("unknown figure {k}"))),
    };
    table.title = format!("{}: {}", target.name(), table.title);
    table.note(format!(
        "provenance: target={} scenario_hash={} seed={} runs={} periods={}",
        target.name(),
        scenario.hash(),
        config.master_seed,
        config.runs,
        config.periods
    ));
    Ok(table)
}
