//! Machine-readable verification rows shared by every verifier and the CLI.

use num_bigint::BigUint;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::exactnum::{exp_enclosure, to_decimal, ExactRational, RatInterval};

/// Fractional digits used for every decimal field in a report.
pub const REPORT_DIGITS: usize = 12;

/// Terms used when a report needs a decimal for `e^x`.
/// Taylor terms used for displayed exponential enclosures.
pub const DISPLAY_TERMS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// An exact comparison refuted the checked claim.
    Fail,
    /// A discrepancy worth recording that does not refute a proven claim.
    Flag,
    /// Usage or guard violation; the check did not run.
    Error,
}

/// A value with its decimal rendering and an exact companion string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quantity {
    pub decimal: String,
    pub exact: String,
}

impl Quantity {
    pub fn rational(x: &ExactRational) -> Self {
        Self {
            decimal: to_decimal(x, REPORT_DIGITS),
            exact: format!("{}/{}", x.numer(), x.denom()),
        }
    }

    pub fn natural(x: &BigUint) -> Self {
        Self {
            decimal: x.to_string(),
            exact: format!("{x}/1"),
        }
    }

    /// `e^{x}`: decimal from the lower end of a tight enclosure.
    pub fn exp(x: &ExactRational) -> Self {
        let enc = exp_enclosure(x, DISPLAY_TERMS);
        Self {
            decimal: to_decimal(enc.lo(), REPORT_DIGITS),
            exact: format!("exp({}/{})", x.numer(), x.denom()),
        }
    }

    pub fn interval(iv: &RatInterval) -> Self {
        Self {
            decimal: iv.to_decimal(REPORT_DIGITS),
            exact: format!(
                "[{}/{}, {}/{}]",
                iv.lo().numer(),
                iv.lo().denom(),
                iv.hi().numer(),
                iv.hi().denom()
            ),
        }
    }

    pub fn text(s: impl Into<String>) -> Self {
        let s = s.into();
        Self {
            decimal: s.clone(),
            exact: s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub check: String,
    #[serde(serialize_with = "ordered_map")]
    pub params: Vec<(String, String)>,
    pub status: Status,
    pub lhs: Option<Quantity>,
    pub rhs: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn ordered_map<S: Serializer>(pairs: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        map.serialize_entry(k, v)?;
    }
    map.end()
}

impl ReportRow {
    pub fn new(check: impl Into<String>, status: Status) -> Self {
        Self {
            check: check.into(),
            params: Vec::new(),
            status,
            lhs: None,
            rhs: None,
            note: None,
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn lhs(mut self, q: Quantity) -> Self {
        self.lhs = Some(q);
        self
    }

    pub fn rhs(mut self, q: Quantity) -> Self {
        self.rhs = Some(q);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn get_param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Ordered collection of rows with an aggregate exit status.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }

    pub fn rows_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a ReportRow> + 'a {
        self.rows.iter().filter(move |r| r.check == check)
    }

    /// 0 all pass, 1 any fail, 2 any guard error, 3 flags but no fails.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Error) > 0 {
            2
        } else if self.count(Status::Fail) > 0 {
            1
        } else if self.count(Status::Flag) > 0 {
            3
        } else {
            0
        }
    }
}

impl FromIterator<ReportRow> for Report {
    fn from_iter<I: IntoIterator<Item = ReportRow>>(iter: I) -> Self {
        Self {
            rows: iter.into_iter().collect(),
        }
    }
}
