use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::demand::MarketParams;
use crate::error::{Error, Result};
use crate::sim::SimulationConfig;

/// A `key=value` scenario file.
///
/// ```text
/// # basic example
/// n = 500
/// pi = 0.5
/// c = 0.85
/// lambda = 0.5
/// ```
///
/// `n`, `pi` and `c` are required. `p` defaults to 1, `alpha` to 0.97,
/// `runs` to 10000, `periods` to 48 and `seed` to 42. `lambda` and `tau`
/// are only needed by commands that use them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub params: MarketParams,
    pub lambda: Option<f64>,
    pub tau: Option<f64>,
    pub runs: u64,
    pub periods: u64,
    pub seed: u64,
}

const KEYS: [&str; 10] = [
    "n", "pi", "p", "c", "alpha", "lambda", "tau", "runs", "periods", "seed",
];

impl Scenario {
    /// The basic example with popularity 0.5 and default simulation settings.
    pub fn basic() -> Self {
        Scenario {
            params: MarketParams::basic(),
            lambda: Some(0.5),
            tau: None,
            runs: 10_000,
            periods: 48,
            seed: 42,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values: [Option<(u64, &str)>; KEYS.len()] = [None; KEYS.len()];
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx as u64 + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {line:?}")))?;
            let key = key.trim();
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| bad(format!("unknown key {key:?}")))?;
            if values[slot].is_some() {
                return Err(bad(format!("duplicate key {key:?}")));
            }
            values[slot] = Some((line_no, value.trim()));
        }

        fn get<T: std::str::FromStr>(slot: Option<(u64, &str)>, key: &str) -> Result<Option<T>> {
            match slot {
                None => Ok(None),
                Some((line, v)) => v.parse().map(Some).map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid value for {key}: {v:?}"),
                }),
            }
        }
        let required = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::input(format!("missing required key {key:?}")))
        };

        let n: Option<u64> = get(values[0], "n")?;
        let n = n.ok_or_else(|| Error::input("missing required key \"n\""))?;
        let pi = required(get(values[1], "pi")?, "pi")?;
        let p = get(values[2], "p")?.unwrap_or(1.0);
        let c = required(get(values[3], "c")?, "c")?;
        let alpha = get(values[4], "alpha")?.unwrap_or(0.97);
        let params = MarketParams::new(n, pi, p, c, alpha)?;
        let scenario = Scenario {
            params,
            lambda: get(values[5], "lambda")?,
            tau: get(values[6], "tau")?,
            runs: get(values[7], "runs")?.unwrap_or(10_000),
            periods: get(values[8], "periods")?.unwrap_or(48),
            seed: get(values[9], "seed")?.unwrap_or(42),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Scenario::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if let Some(lambda) = self.lambda {
            if !(0.0..=1.0).contains(&lambda) {
                return Err(Error::domain(format!("popularity {lambda} outside [0, 1]")));
            }
        }
        if let Some(tau) = self.tau {
            if !(0.0..self.params.p).contains(&tau) {
                return Err(Error::domain(format!("discount {tau} outside [0, p)")));
            }
        }
        self.sim_config().validate()
    }

    pub fn lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::input("scenario does not set lambda"))
    }

    pub fn tau(&self) -> Result<f64> {
        self.tau
            .ok_or_else(|| Error::input("scenario does not set tau"))
    }

    pub fn sim_config(&self) -> SimulationConfig {
        SimulationConfig {
            runs: self.runs,
            periods: self.periods,
            master_seed: self.seed,
            ..SimulationConfig::default()
        }
    }

    /// Every key with its effective value, one per line, in a fixed order.
    pub fn canonical(&self) -> String {
        let MarketParams { n, pi, p, c, alpha } = self.params;
        let mut out = format!("n={n}\npi={pi}\np={p}\nc={c}\nalpha={alpha}\n");
        if let Some(lambda) = self.lambda {
            let _ = writeln!(out, "lambda={lambda}");
        }
        if let Some(tau) = self.tau {
            let _ = writeln!(out, "tau={tau}");
        }
        let _ = write!(
            out,
            "runs={}\nperiods={}\nseed={}\n",
            self.runs, self.periods, self.seed
        );
        out
    }

    /// First 16 hex digits of the SHA-256 of [`Scenario::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
