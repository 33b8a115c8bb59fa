//! Exact partition counting over a part set. This layer is pure integer
//! arithmetic and is the ground truth that every asymptotic claim in the
//! crate is tested against.
//!
//! `count_table` is the standard unbounded-knapsack dynamic program
//! (outer loop over parts, inner ascending loop over n), dense, with
//! arbitrary-precision entries; `brute_force_count` is an independent
//! recursive-descent oracle used to check it.

use crate::error::{Error, Result};
use crate::hp::Prec;
use crate::seqkit::RecurrenceSpec;
use rug::{Float, Integer};

/// Exact nonnegative partition count.
pub type BigCount = Integer;

/// Default memory budget for the dense table: 8 GiB.
pub const DEFAULT_BUDGET_BYTES: u64 = 8 << 30;

/// Enumeration guard for the brute-force oracle.
pub const ORACLE_LIMIT: u64 = 10_000;

/// Dense table of exact counts for 0..=n_max over a fixed part set.
#[derive(Debug)]
pub struct CountTable {
    pub n_max: u64,
    pub counts: Vec<BigCount>,
    pub parts: Vec<Integer>,
    pub spec_label: String,
}

impl CountTable {
    pub fn count(&self, n: u64) -> &BigCount {
        &self.counts[n as usize]
    }

    pub fn log_count(&self, n: u64, prec: Prec) -> Result<Float> {
        log_count(self.count(n), prec)
    }
}

/// Rough per-entry size estimate used by the capacity check: counts grow
/// like exp((log n)^2 / (2 log beta)), so entries stay small; the estimate
/// leans on the Fibonacci rate as the worst admissible case.
fn estimated_bytes(n_max: u64) -> u64 {
    let n = (n_max.max(2)) as f64;
    let log_count_bits = n.ln() * n.ln() / (2.0 * 0.481_211_825 * std::f64::consts::LN_2);
    let per_entry = (log_count_bits / 8.0).ceil() as u64 + 40;
    n_max.saturating_mul(per_entry)
}

/// Coefficients of x^n in prod_p (1 - x^p)^{-1} for n = 0..=n_max.
pub fn count_table(parts: &[Integer], n_max: u64, label: &str) -> Result<CountTable> {
    count_table_with_budget(parts, n_max, label, DEFAULT_BUDGET_BYTES)
}

pub fn count_table_with_budget(
    parts: &[Integer],
    n_max: u64,
    label: &str,
    budget: u64,
) -> Result<CountTable> {
    assert!(!parts.is_empty(), "part set must be nonempty");
    let requested = estimated_bytes(n_max);
    if requested > budget {
        return Err(Error::CapacityExceeded { requested, budget });
    }
    let size = n_max as usize + 1;
    let mut counts = vec![Integer::from(0); size];
    counts[0] = Integer::from(1);
    for p in parts {
        let Some(p) = p.to_usize() else { continue }; // parts beyond n_max cannot contribute
        if p == 0 || p >= size {
            continue;
        }
        for i in p..size {
            let add = counts[i - p].clone();
            counts[i] += add;
        }
    }
    Ok(CountTable {
        n_max,
        counts,
        parts: parts.to_vec(),
        spec_label: label.to_string(),
    })
}

/// Exact table for a recurrence's own part set up to n_max.
pub fn count_table_for(spec: &RecurrenceSpec, n_max: u64) -> Result<CountTable> {
    let parts = spec.parts_up_to(&Integer::from(n_max.max(1)));
    count_table(&parts, n_max, spec.label())
}

/// p_F(n): non-distinct partitions of n over the Fibonacci numbers
/// (parts taken from F_2 = 1 on).
pub fn count_pf(n: u64, prec: Prec) -> Result<BigCount> {
    let fib = crate::seqkit::make_fibonacci(prec);
    let table = count_table_for(&fib, n)?;
    Ok(table.count(n).clone())
}

/// Independent oracle: counts multisets by recursive descent over
/// nonincreasing parts. Exponential-time by design; guarded.
pub fn brute_force_count(parts: &[Integer], n: u64) -> Result<BigCount> {
    if n > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    let smalls: Vec<u64> = parts
        .iter()
        .filter_map(|p| p.to_u64())
        .filter(|&p| p >= 1 && p <= n.max(1))
        .collect();
    fn go(rem: u64, max_idx: usize, parts: &[u64]) -> Integer {
        if rem == 0 {
            return Integer::from(1);
        }
        let mut acc = Integer::new();
        for idx in 0..=max_idx {
            if parts[idx] <= rem {
                acc += go(rem - parts[idx], idx, parts);
            }
        }
        acc
    }
    if smalls.is_empty() {
        return Ok(Integer::from((n == 0) as u32));
    }
    Ok(go(n, smalls.len() - 1, &smalls))
}

/// Natural log of an exact positive count.
pub fn log_count(c: &BigCount, prec: Prec) -> Result<Float> {
    if c.is_zero() {
        return Err(Error::LogOfZero);
    }
    if *c < 0 {
        return Err(Error::LogOfZero);
    }
    Ok(prec.float(c).ln())
}
