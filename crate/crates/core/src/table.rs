//! Plot-ready summary tables and raw run exports.
//!
//! Summary tables are whitespace separated with the header `x med lq uq`,
//! rows ascending in `x`. A point where no run hit is written as
//! `x nan nan nan`, preceded by a `#` comment giving the hit count.
//! Raw exports are CSV with header `run,seed,hit,evals_at_hit,evals_total,param`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::{RunRecord, SummaryRow};

pub const SUMMARY_HEADER: &str = "x med lq uq";
pub const RAW_HEADER: &str = "run,seed,hit,evals_at_hit,evals_total,param";

/// Renders rows as a summary table. `f64` `Display` already gives the
/// shortest decimal that round-trips.
pub fn format_summary_table(rows: &[SummaryRow]) -> String {
    let mut sorted: Vec<&SummaryRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for row in sorted {
        match row.quartiles {
            Some(q) => {
                let _ = writeln!(out, "{} {} {} {}", row.x, q.med, q.lq, q.uq);
            }
            None => {
                let _ = writeln!(out, "# x={} hits={}/{}", row.x, row.hits, row.runs);
                let _ = writeln!(out, "{} nan nan nan", row.x);
            }
        }
    }
    out
}

pub fn write_summary_table(rows: &[SummaryRow], path: &Path) -> Result<()> {
    fs::write(path, format_summary_table(rows)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes records as CSV in run order.
pub fn export_raw(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.run);
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err(path))?;
    writer
        .write_record(RAW_HEADER.split(','))
        .map_err(csv_err(path))?;
    for record in sorted {
        writer.serialize(record).map_err(csv_err(path))?;
    }
    writer.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a file written by [`export_raw`]. `min_frequency_seen` is not part
/// of the format and comes back as `None`.
pub fn read_raw(path: &Path) -> Result<Vec<RunRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = reader.headers().map_err(csv_err(path))?.clone();
    if header.iter().collect::<Vec<_>>().join(",") != RAW_HEADER {
        return Err(Error::InvalidInput(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header
        )));
    }
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<RunRecord>, _>>()
        .map_err(csv_err(path))
}
