//! CSV and JSON writers with a provenance line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::Value;

use crate::error::CliResult;

pub const SCHEMA: &str = "epr-dds/1";
pub const TOOL: &str = "epr-dds";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Opens `path` for writing, or standard output.
pub fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Seventeen significant digits: every `f64` round-trips.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `# tool=epr-dds version=.. command=.. key=value ...`
pub fn provenance_line(command: &str, params: &[(&str, String)]) -> String {
    let mut line = format!("# tool={TOOL} version={VERSION} command={command}");
    for (k, v) in params {
        line.push_str(&format!(" {k}={v}"));
    }
    line
}

/// Writes a provenance line, a header row and numeric rows.
pub fn write_csv<W: Write>(
    mut out: W,
    command: &str,
    params: &[(&str, String)],
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> CliResult<()> {
    writeln!(out, "{}", provenance_line(command, params))?;
    let mut writer = csv::Writer::from_writer(&mut out);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row.into_iter().map(format_float))?;
    }
    writer.flush()?;
    drop(writer);
    out.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<W: Write>(mut out: W, value: &Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Data rows of a CSV emitted by [`write_csv`]: the provenance line is
/// skipped and the header returned separately.
pub fn read_csv(text: &str) -> CliResult<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|e| crate::error::CliError::Usage(format!("bad number {field:?}: {e}")))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
