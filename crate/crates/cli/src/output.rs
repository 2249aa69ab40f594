use std::io::{self, Write};

use clap::ValueEnum;
use forestconn::report::{Quantity, Report, ReportRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn status_str(row: &ReportRow) -> String {
    serde_json::to_value(row.status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn parts(q: &Option<Quantity>) -> (&str, &str) {
    q.as_ref()
        .map_or(("", ""), |q| (q.decimal.as_str(), q.exact.as_str()))
}

pub fn write_report<W: Write>(report: &Report, format: Format, out: &mut W) -> io::Result<()> {
    match format {
        Format::Json => {
            for row in &report.rows {
                serde_json::to_writer(&mut *out, row)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "check",
                "params",
                "status",
                "lhs",
                "lhs_exact",
                "rhs",
                "rhs_exact",
                "note",
            ])?;
            for row in &report.rows {
                let params: Vec<String> =
                    row.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let (lhs, lhs_exact) = parts(&row.lhs);
                let (rhs, rhs_exact) = parts(&row.rhs);
                w.write_record([
                    row.check.as_str(),
                    &params.join(";"),
                    &status_str(row),
                    lhs,
                    lhs_exact,
                    rhs,
                    rhs_exact,
                    row.note.as_deref().unwrap_or(""),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
