//! Buying-probability estimates from order logs.
//!
//! Logs are CSV files with the header `customer_id,period_index,category,quantity`.
//! The demand model is unit demand, so a (customer, period, category) cell
//! counts as one hit regardless of the quantity ordered.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::normal::std_normal_quantile;

const HEADER: [&str; 4] = ["customer_id", "period_index", "category", "quantity"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderRecord {
    pub customer_id: String,
    pub period_index: u64,
    pub category: String,
    pub quantity: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderLog {
    pub records: Vec<OrderRecord>,
}

impl OrderLog {
    pub fn new(records: Vec<OrderRecord>) -> Self {
        OrderLog { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Every period index that appears in the log.
    pub fn periods(&self) -> BTreeSet<u64> {
        self.records.iter().map(|r| r.period_index).collect()
    }

    pub fn customers(&self) -> BTreeSet<&str> {
        self.records
            .iter()
            .map(|r| r.customer_id.as_str())
            .collect()
    }
}

pub fn load_order_log<R: Read>(reader: R) -> Result<OrderLog> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(reader);
    let mut rows = csv.records();
    match rows.next() {
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing header".into(),
            })
        }
        Some(header) => {
            let header = header?;
            if header.iter().map(str::trim).ne(HEADER) {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("expected header {}", HEADER.join(",")),
                });
            }
        }
    }

    let mut records = Vec::new();
    for row in rows {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Parse { line, message };
        if row.len() != HEADER.len() {
            return Err(bad(format!(
                "expected {} fields, found {}",
                HEADER.len(),
                row.len()
            )));
        }
        let integer = |field: usize| -> Result<u64> {
            row[field].trim().parse::<u64>().map_err(|_| {
                bad(format!(
                    "{} is not a non-negative integer: {:?}",
                    HEADER[field], &row[field]
                ))
            })
        };
        let period_index = integer(1)?;
        let quantity = integer(3)?;
        if quantity == 0 {
            return Err(bad("quantity must be at least 1".into()));
        }
        records.push(OrderRecord {
            customer_id: row[0].trim().to_string(),
            period_index,
            category: row[2].trim().to_string(),
            quantity,
        });
    }
    Ok(OrderLog { records })
}

pub fn load_order_log_path(path: impl AsRef<Path>) -> Result<OrderLog> {
    load_order_log(File::open(path)?)
}

/// For each category, the share of the customer's order periods that contain it.
pub fn purchase_frequency(log: &OrderLog, customer_id: &str) -> Result<BTreeMap<String, f64>> {
    let mut periods = BTreeSet::new();
    let mut hits: BTreeMap<&str, BTreeSet<u64>> = BTreeMap::new();
    for r in log.records.iter().filter(|r| r.customer_id == customer_id) {
        periods.insert(r.period_index);
        hits.entry(&r.category).or_default().insert(r.period_index);
    }
    if periods.is_empty() {
        return Err(Error::input(format!("unknown customer {customer_id:?}")));
    }
    let total = periods.len() as f64;
    Ok(hits
        .into_iter()
        .map(|(cat, ps)| (cat.to_string(), ps.len() as f64 / total))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiEstimate {
    pub pi_hat: f64,
    pub n_periods_observed: u64,
    pub n_hits: u64,
    /// 95% Wilson score interval.
    pub wilson_interval: (f64, f64),
}

/// Wilson score interval for `hits` successes out of `trials`.
pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (
        (centre - half).max(0.0).min(p),
        (centre + half).min(1.0).max(p),
    )
}

/// Pooled hit rate of `category` over every (segment customer, period) cell.
///
/// The observation window is the set of all periods present in the log, so
/// segment customers who never ordered contribute cells without hits.
pub fn estimate_pi<S: AsRef<str>>(
    log: &OrderLog,
    category: &str,
    segment: &[S],
) -> Result<PiEstimate> {
    let segment: BTreeSet<&str> = segment.iter().map(AsRef::as_ref).collect();
    if segment.is_empty() {
        return Err(Error::input("customer segment is empty"));
    }
    let periods = log.periods().len() as u64;
    let trials = periods * segment.len() as u64;
    if trials == 0 {
        return Err(Error::input("no observed periods"));
    }
    let cells: BTreeSet<(&str, u64)> = log
        .records
        .iter()
        .filter(|r| r.category == category && segment.contains(r.customer_id.as_str()))
        .map(|r| (r.customer_id.as_str(), r.period_index))
        .collect();
    let hits = cells.len() as u64;
    let z = std_normal_quantile(0.975)?;
    Ok(PiEstimate {
        pi_hat: hits as f64 / trials as f64,
        n_periods_observed: trials,
        n_hits: hits,
        wilson_interval: wilson_interval(hits, trials, z),
    })
}

/// Frequency table as CSV `category,frequency`.
pub fn write_frequencies<W: Write>(frequencies: &BTreeMap<String, f64>, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["category", "frequency"])?;
    for (category, freq) in frequencies {
        writer.write_record([category.as_str(), &freq.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}
