//! Inverse-CDF sampling of binomial counts.
//!
//! One uniform per draw keeps draws monotone in the uniform, so two
//! simulations that share uniforms but differ in a probability parameter
//! stay coupled.

/// Tabulated CDF of Binomial(n, p) over the part of the support with
/// non-negligible mass.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    offset: u64,
    cdf: Vec<f64>,
}

/// Probabilities below this are dropped from the table tails.
const TAIL_CUTOFF: f64 = 1e-20;

impl BinomialTable {
    pub fn new(n: u64, p: f64) -> Self {
        if n == 0 || p <= 0.0 {
            return BinomialTable {
                offset: 0,
                cdf: vec![1.0],
            };
        }
        if p >= 1.0 {
            return BinomialTable {
                offset: n,
                cdf: vec![1.0],
            };
        }
        let nf = n as f64;
        let mode = (((nf + 1.0) * p).floor() as u64).min(n);
        let ln_mode = libm::lgamma(nf + 1.0)
            - libm::lgamma(mode as f64 + 1.0)
            - libm::lgamma((n - mode) as f64 + 1.0)
            + mode as f64 * p.ln()
            + (n - mode) as f64 * (-p).ln_1p();
        let odds = p / (1.0 - p);
        let pmf_mode = ln_mode.exp();

        let mut upper = Vec::new();
        let mut pmf = pmf_mode;
        let mut k = mode;
        while k < n {
            pmf *= (n - k) as f64 / (k + 1) as f64 * odds;
            if pmf < TAIL_CUTOFF {
                break;
            }
            upper.push(pmf);
            k += 1;
        }

        let mut lower = Vec::new();
        let mut pmf = pmf_mode;
        let mut k = mode;
        while k > 0 {
            pmf *= k as f64 / (n - k + 1) as f64 / odds;
            if pmf < TAIL_CUTOFF {
                break;
            }
            lower.push(pmf);
            k -= 1;
        }

        let offset = mode - lower.len() as u64;
        let mut masses: Vec<f64> = lower.into_iter().rev().collect();
        masses.push(pmf_mode);
        masses.extend(upper);

        let total: f64 = masses.iter().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = masses
            .iter()
            .map(|m| {
                acc += m / total;
                acc
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        BinomialTable { offset, cdf }
    }

    /// Smallest `k` with `F(k) > u`, for `u` in `[0, 1)`.
    #[inline]
    pub fn sample(&self, u: f64) -> u64 {
        let idx = self.cdf.partition_point(|&c| c <= u);
        self.offset + idx.min(self.cdf.len() - 1) as u64
    }

    /// `P(X <= k)` according to the table.
    pub fn cdf(&self, k: u64) -> f64 {
        if k < self.offset {
            return 0.0;
        }
        let idx = (k - self.offset) as usize;
        self.cdf.get(idx).copied().unwrap_or(1.0)
    }
}
