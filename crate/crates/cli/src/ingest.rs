//! Wide price CSV: header `date,p0,p1,...,pK`, one row per trading day.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use volbreak_core::{DayId, PricePanel};

use crate::error::{CliError, Result};

fn parse_err(line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

/// Reads a price panel from a file.
pub fn read_prices(path: &Path) -> Result<PricePanel> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_prices_from(file)
}

/// Reads a price panel from any reader. Line numbers in errors are 1-based
/// and count the header.
pub fn read_prices_from<R: Read>(reader: R) -> Result<PricePanel> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    let cols = header.len().saturating_sub(1);
    if header.get(0) != Some("date") {
        return Err(parse_err(1, "first header column must be `date`"));
    }
    if cols < 3 {
        return Err(parse_err(1, format!("need at least prices p0..p2, header has {cols} price columns")));
    }
    for (j, name) in header.iter().skip(1).enumerate() {
        if name != format!("p{j}") {
            return Err(parse_err(1, format!("expected column `p{j}`, found `{name}`")));
        }
    }

    let mut days: Vec<DayId> = Vec::new();
    let mut data = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != cols + 1 {
            return Err(parse_err(line, format!("expected {} fields, found {}", cols + 1, record.len())));
        }
        let day = DayId::new(&record[0]);
        if day.as_str().is_empty() {
            return Err(parse_err(line, "missing date"));
        }
        if let Some(prev) = days.last() {
            if day <= *prev {
                return Err(parse_err(line, format!("date {day} does not follow {prev} (unsorted or duplicate)")));
            }
        }
        for (j, field) in record.iter().skip(1).enumerate() {
            if field.is_empty() {
                return Err(parse_err(line, format!("missing price p{j}")));
            }
            let p: f64 = field.parse().map_err(|_| parse_err(line, format!("p{j}: cannot parse `{field}` as a number")))?;
            if !p.is_finite() || p <= 0.0 {
                return Err(parse_err(line, format!("p{j}: price must be positive and finite, got {field}")));
            }
            data.push(p);
        }
        days.push(day);
    }
    if days.is_empty() {
        return Err(parse_err(1, "no data rows"));
    }
    Ok(PricePanel::from_row_major(days, cols, data)?)
}

/// Writes a panel in the same wide format; values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_prices<W: Write>(panel: &PricePanel, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["date".to_string()];
    header.extend((0..=panel.grid_size()).map(|j| format!("p{j}")));
    w.write_record(&header)?;
    for (day, row) in panel.days().iter().zip(panel.rows()) {
        let mut rec = Vec::with_capacity(row.len() + 1);
        rec.push(day.to_string());
        rec.extend(row.iter().map(|p| p.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))?;
    Ok(())
}

pub fn write_prices_file(panel: &PricePanel, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_prices(panel, std::io::BufWriter::new(file))
}
