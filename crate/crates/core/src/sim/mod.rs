//! Seed-reproducible Monte Carlo simulation of subscription offers.
//!
//! Each run consists of an initial booking period without advance
//! information, a one-shot subscription decision by the customers who bought
//! in that period, and `periods` evaluation periods:
//!
//! 1. `x₀ ~ Binomial(n, π)` customers buy in the initial period, against the
//!    service-level quantity of the full customer base.
//! 2. Each initial buyer accepts the subscription with probability η(τ, π, λ),
//!    giving `n_sub ~ Binomial(x₀, η)`.
//! 3. Each evaluation period draws `x_stoch ~ Binomial(n - n_sub, π)`, orders
//!    `q = n_sub + Q_α(stochastic part)` and realises
//!    `z = (p - τ)·n_sub + p·(min(x, q) - n_sub) - c·q` with `x = n_sub + x_stoch`.
//!
//! Run `i` draws all of its uniforms, in a fixed order, from a ChaCha8
//! generator seeded with [`derive_run_seed`]`(master_seed, i)`. Runs are
//! independent, and repeated simulations with the same master seed but
//! different discounts share their uniforms (common random numbers).

mod binomial;
mod seed;

use std::io::Write;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use binomial::BinomialTable;
pub use seed::{derive_run_seed, mix64};

use crate::demand::{MarketParams, NormalApprox};
use crate::error::{Error, Result};
use crate::normal::std_normal_quantile;
use crate::pricing::acceptance_probability;

/// How the newsvendor quantity is turned into an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderRounding {
    /// Keep the continuous quantile, as the closed forms do.
    Continuous,
    /// Round to the nearest whole unit.
    #[default]
    Nearest,
    /// Round up to the next whole unit.
    Up,
}

impl OrderRounding {
    fn apply(self, q: f64) -> f64 {
        match self {
            OrderRounding::Continuous => q,
            OrderRounding::Nearest => q.round(),
            OrderRounding::Up => q.ceil(),
        }
    }
}

/// Distribution of realised demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemandModel {
    /// Exact binomial customer counts.
    #[default]
    Binomial,
    /// Continuous draws from the normal approximation; isolates the
    /// approximation gap when compared with the closed forms.
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Runs are spread over the rayon thread pool when the `parallel`
    /// feature is enabled, and executed sequentially otherwise.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub runs: u64,
    pub periods: u64,
    pub master_seed: u64,
    pub rounding: OrderRounding,
    pub demand: DemandModel,
    pub execution: Execution,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            runs: 10_000,
            periods: 48,
            master_seed: 42,
            rounding: OrderRounding::Nearest,
            demand: DemandModel::Binomial,
            execution: Execution::Parallel,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::input("runs must be at least 1"));
        }
        if self.periods == 0 {
            return Err(Error::input("periods must be at least 1"));
        }
        Ok(())
    }
}

/// What a single run contributes to the report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    pub run: u64,
    pub n_sub: u64,
    pub initial_profit: f64,
    pub mean_period_profit: f64,
    /// Evaluation periods in which demand did not exceed the order quantity.
    pub covered_periods: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubscriberSummary {
    pub min: u64,
    pub mean: f64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub runs: u64,
    pub periods: u64,
    pub master_seed: u64,
    pub tau: f64,
    pub lambda: f64,
    pub initial_period_mean_profit: f64,
    pub initial_std_error: f64,
    pub eval_mean_profit_per_period: f64,
    /// Sample standard deviation of the per-run mean profits over `sqrt(runs)`.
    pub std_error: f64,
    /// Mean of `n_sub / n` over runs.
    pub mean_subscriber_share: f64,
    pub realized_service_level: f64,
    pub subscribers: SubscriberSummary,
}

/// Realised profit of one evaluation period, subscribers served first.
#[inline]
pub fn period_profit(p: f64, c: f64, tau: f64, n_sub: f64, demand: f64, q: f64) -> f64 {
    (p - tau) * n_sub + p * (demand.min(q) - n_sub) - c * q
}

/// Lazily built tables shared by all runs of one parameter set.
struct Tables {
    pi: f64,
    initial: BinomialTable,
    /// Stochastic demand indexed by the number of non-subscribers.
    demand: Vec<OnceLock<BinomialTable>>,
}

impl Tables {
    fn new(n: u64, pi: f64) -> Self {
        Tables {
            pi,
            initial: BinomialTable::new(n, pi),
            demand: (0..=n).map(|_| OnceLock::new()).collect(),
        }
    }

    fn demand(&self, customers: u64) -> &BinomialTable {
        self.demand[customers as usize].get_or_init(|| BinomialTable::new(customers, self.pi))
    }
}

/// Everything about a simulation that does not depend on the discount.
pub struct Simulator {
    params: MarketParams,
    config: SimulationConfig,
    z_alpha: f64,
    tables: Tables,
}

impl Simulator {
    pub fn new(params: MarketParams, config: SimulationConfig) -> Result<Self> {
        params.validate()?;
        config.validate()?;
        let z_alpha = std_normal_quantile(params.alpha)?;
        let tables = Tables::new(params.n, params.pi);
        Ok(Simulator {
            params,
            config,
            z_alpha,
            tables,
        })
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    fn order_for(&self, subscribers: f64, stochastic_customers: f64) -> f64 {
        let stochastic =
            NormalApprox::binomial(stochastic_customers, self.params.pi).at(self.z_alpha);
        subscribers + self.config.rounding.apply(stochastic.max(0.0))
    }

    fn offer(&self, tau: f64, lambda: f64) -> Result<Offer> {
        if !(0.0..self.params.p).contains(&tau) {
            return Err(Error::domain(format!("discount {tau} outside [0, p)")));
        }
        let eta = acceptance_probability(tau / self.params.p, self.params.pi, lambda)?;
        Ok(Offer {
            tau,
            eta,
            accept: (0..=self.params.n).map(|_| OnceLock::new()).collect(),
        })
    }

    fn run_once(&self, run: u64, offer: &Offer) -> RunOutcome {
        let tau = offer.tau;
        let MarketParams { n, pi, p, c, .. } = self.params;
        let nf = n as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_run_seed(self.config.master_seed, run));

        let u_initial = open_unit(&mut rng);
        let u_accept: f64 = rng.random();

        let q0 = self.order_for(0.0, nf);
        let (x0, buyers) = match self.config.demand {
            DemandModel::Binomial => {
                let x = self.tables.initial.sample(u_initial);
                (x as f64, x)
            }
            DemandModel::Normal => {
                let approx = NormalApprox::binomial(nf, pi);
                let x = approx.at(std_normal_quantile(u_initial).unwrap_or(0.0));
                (x, x.round().clamp(0.0, nf) as u64)
            }
        };
        let initial_profit = p * x0.min(q0) - c * q0;

        let n_sub = offer.acceptance(buyers).sample(u_accept);
        let subs = n_sub as f64;
        let stochastic_customers = n - n_sub;
        let q = self.order_for(subs, stochastic_customers as f64);

        let mut total = 0.0;
        let mut covered = 0;
        match self.config.demand {
            DemandModel::Binomial => {
                let table = self.tables.demand(stochastic_customers);
                for _ in 0..self.config.periods {
                    let x = subs + table.sample(rng.random()) as f64;
                    covered += u64::from(x <= q);
                    total += period_profit(p, c, tau, subs, x, q);
                }
            }
            DemandModel::Normal => {
                let approx = NormalApprox::binomial(stochastic_customers as f64, pi);
                for _ in 0..self.config.periods {
                    let z = std_normal_quantile(open_unit(&mut rng)).unwrap_or(0.0);
                    let x = subs + approx.at(z);
                    covered += u64::from(x <= q);
                    total += period_profit(p, c, tau, subs, x, q);
                }
            }
        }

        RunOutcome {
            run,
            n_sub,
            initial_profit,
            mean_period_profit: total / self.config.periods as f64,
            covered_periods: covered,
        }
    }

    /// All runs at discount `tau` and popularity `lambda`, in run order.
    pub fn outcomes(&self, tau: f64, lambda: f64) -> Result<Vec<RunOutcome>> {
        let offer = self.offer(tau, lambda)?;
        Ok(map_indices(
            self.config.execution,
            self.config.runs as usize,
            |i| self.run_once(i as u64, &offer),
        ))
    }

    pub fn simulate(&self, tau: f64, lambda: f64) -> Result<SimulationReport> {
        let outcomes = self.outcomes(tau, lambda)?;
        Ok(SimulationReport::from_outcomes(
            &self.params,
            &self.config,
            tau,
            lambda,
            &outcomes,
        ))
    }

    /// One report per discount, in the order given. Discounts are simulated
    /// concurrently under parallel execution.
    pub fn sweep_discounts(&self, taus: &[f64], lambda: f64) -> Result<Vec<SimulationReport>> {
        map_indices(self.config.execution, taus.len(), |i| {
            self.simulate(taus[i], lambda)
        })
        .into_iter()
        .collect()
    }
}

/// A discount together with the acceptance it induces and lazily built
/// `Binomial(buyers, η)` tables.
struct Offer {
    tau: f64,
    eta: f64,
    accept: Vec<OnceLock<BinomialTable>>,
}

impl Offer {
    fn acceptance(&self, buyers: u64) -> &BinomialTable {
        self.accept[buyers as usize].get_or_init(|| BinomialTable::new(buyers, self.eta))
    }
}

/// `(0..len).map(f)` collected in index order, in parallel when requested
/// and compiled in.
fn map_indices<T, F>(execution: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(f).collect()
        }
        _ => (0..len).map(f).collect(),
    }
}

/// Uniform on the open interval (0, 1).
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.random::<u64>() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Mean and standard error of `values`, invariant under reordering: values
/// are summed in sorted order.
fn mean_and_std_error(values: &mut [f64]) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    sq.sort_by(f64::total_cmp);
    let variance = sq.iter().sum::<f64>() / (count - 1.0);
    (mean, (variance / count).sqrt())
}

/// Fraction of (run, period) cells in which demand was fully served.
pub fn realized_service_level(outcomes: &[RunOutcome], periods: u64) -> f64 {
    let covered: u64 = outcomes.iter().map(|o| o.covered_periods).sum();
    covered as f64 / (outcomes.len() as u64 * periods) as f64
}

impl SimulationReport {
    pub fn from_outcomes(
        params: &MarketParams,
        config: &SimulationConfig,
        tau: f64,
        lambda: f64,
        outcomes: &[RunOutcome],
    ) -> Self {
        let mut initial: Vec<f64> = outcomes.iter().map(|o| o.initial_profit).collect();
        let mut eval: Vec<f64> = outcomes.iter().map(|o| o.mean_period_profit).collect();
        let (initial_mean, initial_se) = mean_and_std_error(&mut initial);
        let (eval_mean, eval_se) = mean_and_std_error(&mut eval);

        let total_subs: u64 = outcomes.iter().map(|o| o.n_sub).sum();
        let mean_subs = total_subs as f64 / outcomes.len() as f64;
        let subscribers = SubscriberSummary {
            min: outcomes.iter().map(|o| o.n_sub).min().unwrap_or(0),
            mean: mean_subs,
            max: outcomes.iter().map(|o| o.n_sub).max().unwrap_or(0),
        };

        SimulationReport {
            runs: outcomes.len() as u64,
            periods: config.periods,
            master_seed: config.master_seed,
            tau,
            lambda,
            initial_period_mean_profit: initial_mean,
            initial_std_error: initial_se,
            eval_mean_profit_per_period: eval_mean,
            std_error: eval_se,
            mean_subscriber_share: mean_subs / params.n as f64,
            realized_service_level: realized_service_level(outcomes, config.periods),
            subscribers,
        }
    }
}

/// Simulate `config.runs` runs at discount `tau` and popularity `lambda`.
pub fn run_simulation(
    config: &SimulationConfig,
    params: &MarketParams,
    tau: f64,
    lambda: f64,
) -> Result<SimulationReport> {
    Simulator::new(*params, *config)?.simulate(tau, lambda)
}

/// Per-run trace as CSV: `run,n_sub,mean_period_profit`.
pub fn write_trace<W: Write>(outcomes: &[RunOutcome], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["run", "n_sub", "mean_period_profit"])?;
    for o in outcomes {
        writer.write_record([
            o.run.to_string(),
            o.n_sub.to_string(),
            o.mean_period_profit.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
