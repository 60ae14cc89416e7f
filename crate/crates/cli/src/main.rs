//! `subplan`: newsvendor, advance-demand-information and subscription
//! pricing analyses from the command line.
//!
//! Exit codes: 0 when the computation completed (whatever the verdict),
//! 2 for malformed input, 3 when parameters fall outside a model's domain.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subplan::estimate::{estimate_pi, load_order_log_path, purchase_frequency, write_frequencies};
use subplan::pricing::{
    discount_curve, optimize_discount_analytic, optimize_discount_simulated, DiscountSolution,
    SubscriptionTerms,
};
use subplan::profit::{
    adi_profit, baseline_profit, ecu_ratio, marginal_profit_wrt_beta, subscription_profit, Uplift,
};
use subplan::report::{
    reproduce, sweep, Cell, Format, Scenario, SweepMode, SweepSpec, SweepStep, Table, Target,
};
use subplan::sim::{write_trace, Simulator};
use subplan::thresholds::min_viable_pi;
use subplan::{AdiShare, Error};

#[derive(Parser)]
#[command(
    name = "subplan",
    version,
    about = "Demand-uncertainty costs and subscription pricing for e-grocery SKUs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Scenario file with key=value lines.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Emit CSV instead of a human-readable table.
    #[arg(long, global = true)]
    csv: bool,
    /// Override the scenario's master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the number of simulation runs.
    #[arg(long, global = true)]
    runs: Option<u64>,
    /// Override the number of evaluation periods.
    #[arg(long, global = true)]
    periods: Option<u64>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Baseline profit decomposition without advance information.
    Analyze,
    /// Profit when a share of customers reveals demand in advance.
    Adi {
        #[arg(long)]
        beta: f64,
    },
    /// Profit with a subscription offer. Without --beta the share follows
    /// from the scenario's lambda.
    Subscribe {
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Profit-maximising subscription discount.
    Optimize {
        /// Use the simulator's mean profit as objective.
        #[arg(long)]
        simulated: bool,
        /// Print the whole analytic profit curve over the discount grid.
        #[arg(long)]
        full_grid: bool,
    },
    /// Monte Carlo simulation of a subscription offer.
    Simulate {
        #[arg(long)]
        tau: Option<f64>,
        /// Per-run CSV trace (run,n_sub,mean_period_profit).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Evaluate a model over a parameter grid.
    Sweep {
        /// One of n, pi, c, beta, tau, lambda.
        #[arg(long)]
        param: String,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, conflicts_with = "count", required_unless_present = "count")]
        step: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        /// One of baseline, adi, subscription, optimize.
        #[arg(long, default_value = "baseline")]
        mode: String,
        /// Fixed subscribing or responding share.
        #[arg(long)]
        beta: Option<f64>,
        /// Also run the simulated discount search in optimize mode.
        #[arg(long)]
        simulated: bool,
    },
    /// Recompute a reference table or figure series (table1..table3, fig2..fig11).
    Reproduce { target: String },
    /// Buying-probability estimates from an order log.
    Estimate {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        category: Option<String>,
        /// Comma-separated customer ids; defaults to every customer in the log.
        #[arg(long, value_delimiter = ',')]
        customers: Vec<String>,
        /// Print the purchase-frequency table of one customer instead.
        #[arg(long)]
        frequency: Option<String>,
    },
}

enum Output {
    Table(Table),
    Text(String),
}

fn load_scenario(global: &Global, required: bool) -> Result<Scenario, Error> {
    let mut scenario = match &global.scenario {
        Some(path) => Scenario::load(path)?,
        None if required => {
            return Err(Error::Input(
                "--scenario is required for this command".into(),
            ))
        }
        None => Scenario::basic(),
    };
    if let Some(seed) = global.seed {
        scenario.seed = seed;
    }
    if let Some(runs) = global.runs {
        scenario.runs = runs;
    }
    if let Some(periods) = global.periods {
        scenario.periods = periods;
    }
    scenario.validate()?;
    Ok(scenario)
}

fn verdict(profit: f64) -> Cell {
    Cell::from(if profit < 0.0 {
        "unprofitable"
    } else {
        "profitable"
    })
}

fn analyze(scenario: &Scenario) -> Table {
    use Format::*;
    let params = &scenario.params;
    let d = baseline_profit(params);
    let mut t = Table::new(
        "",
        &[
            ("n", Number),
            ("pi", Number),
            ("p", Number),
            ("c", Number),
            ("alpha", Number),
            ("pwu", Currency),
            ("ecu", Currency),
            ("expected_profit", Currency),
            ("ecu_ratio", Share),
            ("min_viable_pi", Share),
            ("status", Text),
        ],
    );
    t.push(vec![
        params.n.into(),
        params.pi.into(),
        params.p.into(),
        params.c.into(),
        params.alpha.into(),
        d.pwu.into(),
        d.ecu.into(),
        d.expected_profit.into(),
        ecu_ratio(params).ok().into(),
        min_viable_pi(params).into(),
        verdict(d.expected_profit),
    ]);
    t
}

fn adi(scenario: &Scenario, beta: f64) -> Result<Table, Error> {
    use Format::*;
    let params = &scenario.params;
    let base = baseline_profit(params);
    let with = adi_profit(params, AdiShare::new(beta)?);
    let uplift = Uplift::between(base.expected_profit, with.expected_profit);
    let mut t = Table::new(
        "",
        &[
            ("beta", Number),
            ("pwu", Currency),
            ("ecu", Currency),
            ("expected_profit", Currency),
            ("baseline_profit", Currency),
            ("uplift", Currency),
            ("uplift_rel", Share),
            ("status", Text),
        ],
    );
    t.push(vec![
        beta.into(),
        with.pwu.into(),
        with.ecu.into(),
        with.expected_profit.into(),
        base.expected_profit.into(),
        uplift.absolute.into(),
        uplift.relative.into(),
        verdict(with.expected_profit),
    ]);
    Ok(t)
}

fn subscribe(scenario: &Scenario, tau: Option<f64>, beta: Option<f64>) -> Result<Table, Error> {
    use Format::*;
    let params = &scenario.params;
    let tau = match tau {
        Some(t) => t,
        None => scenario.tau()?,
    };
    let share = match beta {
        Some(b) => AdiShare::new(b)?,
        None => SubscriptionTerms::new(params, tau, scenario.lambda()?)?.share(),
    };
    if !(0.0..params.p).contains(&tau) {
        return Err(Error::Domain(format!("discount {tau} outside [0, p)")));
    }
    let sub = subscription_profit(params, tau, share);
    let base = baseline_profit(params).expected_profit;
    let uplift = Uplift::between(base, sub.expected_profit);
    let mut t = Table::new(
        "",
        &[
            ("tau", Number),
            ("beta", Share),
            ("i_det", Currency),
            ("i_stoch", Currency),
            ("ecu", Currency),
            ("expected_profit", Currency),
            ("baseline_profit", Currency),
            ("uplift", Currency),
            ("uplift_rel", Share),
            ("marginal_beta", Currency),
            ("status", Text),
        ],
    );
    t.push(vec![
        tau.into(),
        share.value().into(),
        sub.i_det.into(),
        sub.i_stoch.into(),
        sub.ecu.into(),
        sub.expected_profit.into(),
        base.into(),
        uplift.absolute.into(),
        uplift.relative.into(),
        marginal_profit_wrt_beta(params, tau, share.value())
            .ok()
            .into(),
        verdict(sub.expected_profit),
    ]);
    Ok(t)
}

fn solution_table(sol: &DiscountSolution, method: &str) -> Table {
    use Format::*;
    let mut t = Table::new(
        "",
        &[
            ("method", Text),
            ("tau_star", Share),
            ("beta", Share),
            ("expected_profit", Currency),
            ("baseline_profit", Currency),
            ("std_error", Currency),
            ("uplift", Currency),
            ("uplift_rel", Share),
            ("decision", Text),
        ],
    );
    t.push(vec![
        method.into(),
        sol.tau_star.into(),
        sol.beta_at_optimum.into(),
        sol.expected_profit.into(),
        sol.baseline_profit.into(),
        sol.std_error.into(),
        sol.absolute_uplift.into(),
        sol.relative_uplift.into(),
        Cell::from(if sol.degenerate {
            "do not offer"
        } else {
            "offer"
        }),
    ]);
    if sol.baseline_profit < 0.0 && sol.expected_profit < 0.0 {
        t.note("unprofitable with or without subscription");
    }
    t
}

fn optimize(scenario: &Scenario, simulated: bool, full_grid: bool) -> Result<Table, Error> {
    let params = &scenario.params;
    let lambda = scenario.lambda()?;
    if full_grid {
        let base = baseline_profit(params).expected_profit;
        let mut t = Table::new(
            "",
            &[
                ("tau", Format::Share),
                ("beta", Format::Share),
                ("expected_profit", Format::Currency),
                ("baseline_profit", Format::Currency),
            ],
        );
        for pt in discount_curve(params, lambda)? {
            t.push(vec![
                pt.tau.into(),
                pt.beta.into(),
                pt.expected_profit.into(),
                base.into(),
            ]);
        }
        return Ok(t);
    }
    if simulated {
        let sol = optimize_discount_simulated(&scenario.sim_config(), params, lambda)?;
        let mut t = solution_table(&sol, "simulated");
        t.note(format!(
            "seed={} runs={} periods={}",
            scenario.seed, scenario.runs, scenario.periods
        ));
        Ok(t)
    } else {
        Ok(solution_table(
            &optimize_discount_analytic(params, lambda)?,
            "analytic",
        ))
    }
}

fn simulate(
    scenario: &Scenario,
    tau: Option<f64>,
    trace: Option<&PathBuf>,
) -> Result<Table, Error> {
    use Format::*;
    let params = &scenario.params;
    let tau = match tau {
        Some(t) => t,
        None => scenario.tau()?,
    };
    let lambda = scenario.lambda()?;
    let config = scenario.sim_config();
    let sim = Simulator::new(*params, config)?;
    let outcomes = sim.outcomes(tau, lambda)?;
    if let Some(path) = trace {
        write_trace(&outcomes, fs::File::create(path)?)?;
    }
    let r = subplan::SimulationReport::from_outcomes(params, &config, tau, lambda, &outcomes);
    let mut t = Table::new(
        "",
        &[
            ("tau", Number),
            ("lambda", Number),
            ("runs", Number),
            ("periods", Number),
            ("seed", Number),
            ("initial_profit", Currency),
            ("initial_std_error", Currency),
            ("profit", Currency),
            ("std_error", Currency),
            ("subscriber_share", Share),
            ("service_level", Share),
            ("subscribers_min", Number),
            ("subscribers_mean", Number),
            ("subscribers_max", Number),
        ],
    );
    t.push(vec![
        tau.into(),
        lambda.into(),
        r.runs.into(),
        r.periods.into(),
        Cell::Text(r.master_seed.to_string()),
        r.initial_period_mean_profit.into(),
        r.initial_std_error.into(),
        r.eval_mean_profit_per_period.into(),
        r.std_error.into(),
        r.mean_subscriber_share.into(),
        r.realized_service_level.into(),
        r.subscribers.min.into(),
        r.subscribers.mean.into(),
        r.subscribers.max.into(),
    ]);
    Ok(t)
}

fn estimate(
    log: &PathBuf,
    category: Option<&str>,
    customers: &[String],
    frequency: Option<&str>,
    csv: bool,
) -> Result<Output, Error> {
    let log = load_order_log_path(log)?;
    if let Some(customer) = frequency {
        let freq = purchase_frequency(&log, customer)?;
        if csv {
            let mut buf = Vec::new();
            write_frequencies(&freq, &mut buf)?;
            return Ok(Output::Text(
                String::from_utf8(buf).expect("csv output is UTF-8"),
            ));
        }
        let mut t = Table::new(
            "",
            &[("category", Format::Text), ("frequency", Format::Share)],
        );
        for (cat, f) in freq {
            t.push(vec![Cell::Text(cat), f.into()]);
        }
        return Ok(Output::Table(t));
    }
    let category =
        category.ok_or_else(|| Error::Input("--category or --frequency is required".into()))?;
    let segment: Vec<String> = if customers.is_empty() {
        log.customers().into_iter().map(str::to_string).collect()
    } else {
        customers.to_vec()
    };
    let est = estimate_pi(&log, category, &segment)?;
    let mut t = Table::new(
        "",
        &[
            ("category", Format::Text),
            ("customers", Format::Number),
            ("cells", Format::Number),
            ("hits", Format::Number),
            ("pi_hat", Format::Share),
            ("wilson_lo", Format::Share),
            ("wilson_hi", Format::Share),
        ],
    );
    t.push(vec![
        category.into(),
        (segment.len() as u64).into(),
        est.n_periods_observed.into(),
        est.n_hits.into(),
        est.pi_hat.into(),
        est.wilson_interval.0.into(),
        est.wilson_interval.1.into(),
    ]);
    Ok(Output::Table(t))
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let g = &cli.global;
    let table = match &cli.command {
        Command::Analyze => analyze(&load_scenario(g, true)?),
        Command::Adi { beta } => adi(&load_scenario(g, true)?, *beta)?,
        Command::Subscribe { tau, beta } => subscribe(&load_scenario(g, true)?, *tau, *beta)?,
        Command::Optimize {
            simulated,
            full_grid,
        } => optimize(&load_scenario(g, true)?, *simulated, *full_grid)?,
        Command::Simulate { tau, trace } => {
            simulate(&load_scenario(g, true)?, *tau, trace.as_ref())?
        }
        Command::Sweep {
            param,
            lo,
            hi,
            step,
            count,
            mode,
            beta,
            simulated,
        } => {
            let step = match (step, count) {
                (Some(h), _) => SweepStep::Size(*h),
                (None, Some(k)) => SweepStep::Count(*k),
                (None, None) => return Err(Error::Input("--step or --count is required".into())),
            };
            let spec = SweepSpec::new(param.parse()?, *lo, *hi, step)?;
            let mode: SweepMode = mode.parse()?;
            sweep(&load_scenario(g, true)?, &spec, mode, *beta, *simulated)?
        }
        Command::Reproduce { target } => {
            let target: Target = target.parse()?;
            reproduce(target, &load_scenario(g, false)?)?
        }
        Command::Estimate {
            log,
            category,
            customers,
            frequency,
        } => {
            return estimate(
                log,
                category.as_deref(),
                customers,
                frequency.as_deref(),
                g.csv,
            )
        }
    };
    Ok(Output::Table(table))
}

fn emit(global: &Global, output: Output) -> Result<(), Error> {
    let text = match output {
        Output::Table(t) if global.csv => t.to_csv()?,
        Output::Table(t) => t.render(),
        Output::Text(s) => s,
    };
    match &global.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| emit(&cli.global, out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("subplan: {err}");
            ExitCode::from(if err.is_domain() { 3 } else { 2 })
        }
    }
}
