//! Exact counts of labeled trees and forests and the verifiers built on them.
//!
//! `|F_n|` is computed from the size `k` of the component containing vertex 1:
//! `|F_n| = sum_k C(n-1, k-1) * k^(k-2) * |F_(n-k)|`.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactnum::{
    compare_to_exp, exp_enclosure, natural_ratio, ratio, ExactRational, ExpOrdering, RatInterval,
};
use crate::report::{Quantity, Report, ReportRow, Status, REPORT_DIGITS};

/// Entries re-derived when a cache file is loaded.
const CACHE_VALIDATED_ENTRIES: usize = 8;
const CACHE_HEADER_PREFIX: &str = "FORESTS v1 n_max=";

#[derive(Debug, Error)]
pub enum ForestError {
    #[error("frag_count needs 0 <= j < n/2, got n={n}, j={j}")]
    FragOutOfRange { n: usize, j: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("count cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `n^(n-2)` labeled trees on `n` vertices; one tree on a single vertex and
/// none on the empty set.
pub fn count_trees(n: usize) -> BigUint {
    match n {
        0 => BigUint::zero(),
        1 | 2 => BigUint::one(),
        _ => num_traits::pow(BigUint::from(n), n - 2),
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Memoized forest counts `|F_0|, |F_1|, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    forests: Vec<BigUint>,
    trees: Vec<BigUint>,
}

impl Default for CountTable {
    fn default() -> Self {
        Self::new()
    }
}

impl CountTable {
    pub fn new() -> Self {
        Self {
            forests: vec![BigUint::one()],
            trees: vec![BigUint::zero()],
        }
    }

    pub fn with_n_max(n_max: usize) -> Self {
        let mut table = Self::new();
        table.extend_to(n_max);
        table
    }

    pub fn n_max(&self) -> usize {
        self.forests.len() - 1
    }

    pub fn extend_to(&mut self, n_max: usize) {
        while self.trees.len() <= n_max {
            let k = self.trees.len();
            self.trees.push(count_trees(k));
        }
        for m in self.forests.len()..=n_max {
            // binom = C(m-1, k-1)
            let mut binom = BigUint::one();
            let mut total = BigUint::zero();
            for k in 1..=m {
                total += &binom * &self.trees[k] * &self.forests[m - k];
                binom *= m - k;
                binom /= k;
            }
            self.forests.push(total);
        }
    }

    /// `|F_n|`; panics if the table was not extended to `n`.
    pub fn forests(&self, n: usize) -> &BigUint {
        &self.forests[n]
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.forests.get(n)
    }

    pub fn trees(&self, n: usize) -> BigUint {
        self.trees.get(n).cloned().unwrap_or_else(|| count_trees(n))
    }

    /// `Pr(F_n is connected) = n^(n-2) / |F_n|`.
    pub fn conn_prob(&self, n: usize) -> ExactRational {
        assert!(n >= 1, "connectivity probability needs n >= 1");
        natural_ratio(&self.trees(n), self.forests(n))
    }

    /// Terms `C(n-1, k-1) * k^(k-2) * |F_(n-k)|` for `k = 1..=n`.
    pub fn vertex_one_component_terms(&self, n: usize) -> Vec<BigUint> {
        let mut binom = BigUint::one();
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            out.push(&binom * &self.trees[k] * &self.forests[n - k]);
            binom *= n - k;
            binom /= k;
        }
        out
    }

    pub fn write_cache<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CACHE_HEADER_PREFIX}{}", self.n_max())?;
        for f in &self.forests {
            writeln!(w, "{f}")?;
        }
        Ok(())
    }

    pub fn read_cache<R: BufRead>(r: R) -> Result<Self, ForestError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| ForestError::Cache("empty file".into()))??;
        let n_max: usize = header
            .trim()
            .strip_prefix(CACHE_HEADER_PREFIX)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ForestError::Cache(format!("bad header {header:?}")))?;
        let mut forests = Vec::with_capacity(n_max + 1);
        for (i, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let value: BigUint = line
                .parse()
                .map_err(|_| ForestError::Cache(format!("line {} is not a natural", i + 2)))?;
            forests.push(value);
        }
        if forests.len() != n_max + 1 {
            return Err(ForestError::Cache(format!(
                "header promises {} entries, found {}",
                n_max + 1,
                forests.len()
            )));
        }
        let check = CountTable::with_n_max(CACHE_VALIDATED_ENTRIES.min(n_max + 1) - 1);
        for (i, expected) in check.forests.iter().enumerate() {
            if &forests[i] != expected {
                return Err(ForestError::Cache(format!(
                    "entry {i} is {} but recomputation gives {expected}",
                    forests[i]
                )));
            }
        }
        let trees = (0..=n_max).map(count_trees).collect();
        Ok(Self { forests, trees })
    }

    pub fn load(path: &Path) -> Result<Self, ForestError> {
        Self::read_cache(BufReader::new(fs::File::open(path)?))
    }

    pub fn save(&self, path: &Path) -> Result<(), ForestError> {
        let mut buf = Vec::new();
        self.write_cache(&mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }
}

pub fn count_forests(n: usize) -> BigUint {
    CountTable::with_n_max(n).forests(n).clone()
}

pub fn conn_prob_forest(n: usize) -> ExactRational {
    CountTable::with_n_max(n).conn_prob(n)
}

/// Forests on `[n]` with exactly `j` vertices outside a largest component.
pub fn frag_count(table: &CountTable, n: usize, j: usize) -> Result<BigUint, ForestError> {
    if n == 0 || 2 * j >= n {
        return Err(ForestError::FragOutOfRange { n, j });
    }
    Ok(binomial(n, j) * table.forests(j) * count_trees(n - j))
}

fn factorial_big(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Enclosure of `sum_{j=lo..=hi} counts(j) / (j! e^j)`.
fn weighted_egf_sum(
    lo: usize,
    hi: usize,
    counts: impl Fn(usize) -> BigUint,
    precision: u32,
) -> RatInterval {
    let mut acc = RatInterval::point(ExactRational::zero());
    for j in lo..=hi {
        let coeff = natural_ratio(&counts(j), &factorial_big(j));
        let e = exp_enclosure(&ratio(-(j as i64), 1), precision);
        acc = &acc + &e.scale(&coeff);
    }
    acc
}

/// Enclosure of `sum_{j=0..=k} |F_j| / (j! e^j)`.
pub fn partial_egf_sum(table: &CountTable, k: usize, precision: u32) -> RatInterval {
    weighted_egf_sum(0, k, |j| table.forests(j).clone(), precision)
}

/// Enclosure of `sum_{j=1..=k} |T_j| / (j! e^j)`.
pub fn partial_tree_egf_sum(k: usize, precision: u32) -> RatInterval {
    if k == 0 {
        return RatInterval::point(ExactRational::zero());
    }
    weighted_egf_sum(1, k, count_trees, precision)
}

fn bound_row(check: &str, n: usize, p: &ExactRational, a: &ExactRational) -> ReportRow {
    let (status, note) = match compare_to_exp(p, a) {
        ExpOrdering::Less => (Status::Pass, None),
        ExpOrdering::Greater => (Status::Fail, Some("probability exceeds the bound")),
        ExpOrdering::Undecidable => (Status::Flag, Some("undecidable at refinement cap")),
    };
    let row = ReportRow::new(check, status)
        .param("n", n)
        .lhs(Quantity::rational(p))
        .rhs(Quantity::exp(&-a));
    match note {
        Some(note) => row.note(note),
        None => row,
    }
}

/// Proves `Pr(F_n connected) < e^{-a}` for every `2 <= n <= n_max`.
pub fn verify_forest_bound(
    table: &CountTable,
    n_max: usize,
    a: &ExactRational,
    check: &str,
) -> Result<Report, ForestError> {
    if n_max < 2 {
        return Err(ForestError::InvalidArgument(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    if table.n_max() < n_max {
        return Err(ForestError::InvalidArgument(format!(
            "count table only reaches n={}",
            table.n_max()
        )));
    }
    let rows: Vec<ReportRow> = (2..=n_max)
        .into_par_iter()
        .map(|n| bound_row(check, n, &table.conn_prob(n), a))
        .collect();
    Ok(rows.into_iter().collect())
}

/// `Pr(F_n connected) < e^{-1/3}` for `2 <= n <= n_max`.
pub fn verify_lemma_2_2(table: &CountTable, n_max: usize) -> Result<Report, ForestError> {
    verify_forest_bound(table, n_max, &ratio(1, 3), "lemma22")
}

/// `Pr(F_n connected) < e^{-12/25}` for `2 <= n <= n_max`.
pub fn verify_lemma_3_1(table: &CountTable, n_max: usize) -> Result<Report, ForestError> {
    verify_forest_bound(table, n_max, &ratio(12, 25), "lemma31")
}

/// Decides `(1 - j/n)^(n-j) >= e^{-j}` for `1 <= j < n`.
///
/// An undecidable comparison counts as not established.
pub fn verify_standard_inequality(n: usize, j: usize) -> Result<bool, ForestError> {
    if j == 0 || j >= n {
        return Err(ForestError::InvalidArgument(format!(
            "need 1 <= j < n, got n={n}, j={j}"
        )));
    }
    let base = ratio((n - j) as i64, n as i64);
    let lhs = num_traits::pow(base, n - j);
    Ok(compare_to_exp(&lhs, &ratio(j as i64, 1)) == ExpOrdering::Greater)
}

/// `(n)_j / n^j * (1 - j/n)^(-2)` with the falling factorial `(n)_j`.
pub fn bracket_value(n: usize, j: usize) -> Result<ExactRational, ForestError> {
    if j == 0 || j >= n {
        return Err(ForestError::InvalidArgument(format!(
            "need 1 <= j < n, got n={n}, j={j}"
        )));
    }
    let falling: BigUint = (0..j).fold(BigUint::one(), |acc, i| acc * (n - i));
    let n_pow = num_traits::pow(BigUint::from(n), j);
    let ratio_part = natural_ratio(&falling, &n_pow);
    let correction = num_traits::pow(ratio(n as i64, (n - j) as i64), 2);
    Ok(ratio_part * correction)
}

/// Compresses a sorted list of integers into `a..=b` ranges.
fn compress_ranges(values: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut iter = values.iter().copied().peekable();
    while let Some(start) = iter.next() {
        let mut end = start;
        while iter.peek() == Some(&(end + 1)) {
            end = iter.next().unwrap();
        }
        parts.push(if start == end {
            start.to_string()
        } else {
            format!("{start}..={end}")
        });
    }
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(",")
    }
}

/// For each `j <= j_max`, the `n <= n_max` where the bracket is at least 1,
/// with a flag row for every `(j, n)`, `n > 12`, where it is not.
pub fn bracket_scan(j_max: usize, n_max: usize) -> Report {
    let one = ExactRational::one();
    let mut report = Report::new();
    for j in 1..=j_max {
        let mut holds = Vec::new();
        let mut failures = Vec::new();
        for n in (j + 1)..=n_max {
            let value = bracket_value(n, j).expect("j < n by construction");
            if value >= one {
                holds.push(n);
            } else if n > 12 {
                failures.push((n, value));
            }
        }
        let status = if failures.is_empty() {
            Status::Pass
        } else {
            Status::Flag
        };
        report.push(
            ReportRow::new("bracket_scan", status)
                .param("j", j)
                .param("n_max", n_max)
                .param("holds_for", compress_ranges(&holds))
                .param(
                    "fails_above_12",
                    compress_ranges(&failures.iter().map(|(n, _)| *n).collect::<Vec<_>>()),
                ),
        );
        for (n, value) in failures {
            report.push(
                ReportRow::new("bracket_failure", Status::Flag)
                    .param("j", j)
                    .param("n", n)
                    .lhs(Quantity::rational(&value))
                    .rhs(Quantity::rational(&one))
                    .note("bracket below 1 for n > 12"),
            );
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenyiRow {
    pub n: usize,
    pub prob: ExactRational,
    pub decimal: String,
}

pub fn renyi_table(table: &CountTable, n_max: usize) -> Vec<RenyiRow> {
    (1..=n_max)
        .map(|n| {
            let prob = table.conn_prob(n);
            let decimal = crate::exactnum::to_decimal(&prob, REPORT_DIGITS);
            RenyiRow { n, prob, decimal }
        })
        .collect()
}

/// Empirical scan of two conjectures: (a) `Pr(F_n connected) <= e^{-1/2}` for
/// `n >= 2`; (b) the sequence is nondecreasing from `n = 5`.
/// Counterexamples are flagged, never failed.
pub fn scan_conjectures(table: &CountTable, n_max: usize) -> Result<Report, ForestError> {
    if n_max < 2 || table.n_max() < n_max {
        return Err(ForestError::InvalidArgument(format!(
            "need 2 <= n_max <= {}, got {n_max}",
            table.n_max()
        )));
    }
    let half = ratio(1, 2);
    let mut report = Report::new();
    let a_rows: Vec<ReportRow> = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let p = table.conn_prob(n);
            let status = match compare_to_exp(&p, &half) {
                ExpOrdering::Less => Status::Pass,
                _ => Status::Flag,
            };
            ReportRow::new("conjecture_a", status)
                .param("n", n)
                .lhs(Quantity::rational(&p))
                .rhs(Quantity::exp(&-&half))
        })
        .collect();
    let a_holds = a_rows.iter().all(|r| r.status == Status::Pass);
    report.rows.extend(a_rows);

    let mut b_holds = true;
    let mut dips_below_5 = Vec::new();
    for n in 2..n_max {
        let cur = table.conn_prob(n);
        let next = table.conn_prob(n + 1);
        if n < 5 {
            if next < cur {
                dips_below_5.push(n);
            }
            continue;
        }
        let status = if next >= cur {
            Status::Pass
        } else {
            b_holds = false;
            Status::Flag
        };
        report.push(
            ReportRow::new("conjecture_b", status)
                .param("n", n)
                .lhs(Quantity::rational(&next))
                .rhs(Quantity::rational(&cur))
                .note("lhs = p(n+1), rhs = p(n)"),
        );
    }
    report.push(
        ReportRow::new("conjecture_a_summary", status_of(a_holds))
            .param("n_max", n_max)
            .note(if a_holds {
                "p(n) <= e^{-1/2} for every scanned n (empirical)"
            } else {
                "counterexample found"
            }),
    );
    report.push(
        ReportRow::new("conjecture_b_summary", status_of(b_holds))
            .param("n_max", n_max)
            .param("decreases_below_5_at", compress_ranges(&dips_below_5))
            .note(if b_holds {
                "p(n) nondecreasing from n = 5 over the scan (empirical)"
            } else {
                "decrease found at n >= 5"
            }),
    );
    Ok(report)
}

fn status_of(holds: bool) -> Status {
    if holds {
        Status::Pass
    } else {
        Status::Flag
    }
}

/// Partial sums of the tree and forest EGFs at `x = 1/e` against their limits
/// `1/2` and `e^{1/2}`, checking the distances shrink with `k`.
pub fn egf_limit_check(table: &CountTable, k_max: usize, precision: u32) -> Report {
    let half = ratio(1, 2);
    let sqrt_e = exp_enclosure(&half, precision);
    let mut report = Report::new();
    let mut prev: Option<(RatInterval, RatInterval)> = None;
    for k in 1..=k_max {
        let trees = partial_tree_egf_sum(k, precision);
        let forests = partial_egf_sum(table, k, precision);
        let tree_gap = trees.neg().shift(&half);
        let forest_gap = &sqrt_e - &forests;
        let (tree_status, forest_status) = match &prev {
            None => (Status::Pass, Status::Pass),
            Some((pt, pf)) => (shrink_status(&tree_gap, pt), shrink_status(&forest_gap, pf)),
        };
        report.push(
            ReportRow::new("egf_trees", tree_status)
                .param("k", k)
                .param("precision", precision)
                .lhs(Quantity::interval(&trees))
                .rhs(Quantity::rational(&half))
                .note(format!("distance {}", tree_gap.to_decimal(REPORT_DIGITS))),
        );
        report.push(
            ReportRow::new("egf_forests", forest_status)
                .param("k", k)
                .param("precision", precision)
                .lhs(Quantity::interval(&forests))
                .rhs(Quantity::exp(&half))
                .note(format!("distance {}", forest_gap.to_decimal(REPORT_DIGITS))),
        );
        prev = Some((tree_gap, forest_gap));
    }
    report
}

fn shrink_status(current: &RatInterval, previous: &RatInterval) -> Status {
    if current.strictly_below(previous) {
        Status::Pass
    } else if previous.strictly_below(current) {
        Status::Fail
    } else {
        Status::Flag
    }
}

/// One row per `k <= k_max` with the enclosure of the forest EGF partial sum,
/// followed by the limit check.
pub fn egf_report(table: &CountTable, k_max: usize, precision: u32) -> Report {
    let mut report: Report = (0..=k_max)
        .map(|k| {
            let sum = partial_egf_sum(table, k, precision);
            ReportRow::new("partial_egf_sum", Status::Pass)
                .param("k", k)
                .param("precision", precision)
                .lhs(Quantity::interval(&sum))
                .note(format!(
                    "width {}",
                    crate::exactnum::to_decimal(&sum.width(), 30)
                ))
        })
        .collect();
    report.extend(egf_limit_check(table, k_max, precision));
    report
}

/// Frag histogram rows for `0 <= j < n/2`.
pub fn frag_rows(table: &CountTable, n: usize) -> Report {
    (0..n.div_ceil(2))
        .map(|j| {
            let count = frag_count(table, n, j).expect("j < n/2");
            ReportRow::new("frag", Status::Pass)
                .param("n", n)
                .param("j", j)
                .lhs(Quantity::natural(&count))
        })
        .collect()
}
