use std::io::Write;

use super::{Command, ExperimentResult};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["value_kind", "n", "alpha", "value", "wall_time_ms"];
const VERIFY_HEADER: [&str; 3] = ["check", "passed", "detail"];

/// 17 significant digits, enough to round-trip binary64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes result rows, or check outcomes for `verify`.
pub fn write_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if result.config.command == Command::Verify {
        w.write_record(VERIFY_HEADER).map_err(csv_err)?;
        for c in &result.checks {
            w.write_record([
                c.name.as_str(),
                if c.passed { "true" } else { "false" },
                c.detail.as_str(),
            ])
            .map_err(csv_err)?;
        }
    } else {
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in &result.rows {
            w.write_record([
                r.value_kind.as_str().to_string(),
                r.n.to_string(),
                num(r.alpha),
                num(r.value),
                num(r.wall_time_ms),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, result).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}
