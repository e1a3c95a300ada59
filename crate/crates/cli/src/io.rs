//! CSV point files: a header `x0,x1,...` followed by one point per row.
//!
//! Coordinates are written with Rust's shortest round-trip formatting, so
//! reading a written file reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use diam_core::PointSet;

use crate::error::CliError;

pub fn read_points(path: &Path) -> Result<PointSet, CliError> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    read_points_from(file, path)
}

/// Parses CSV from `reader`; `path` only labels error messages.
pub fn read_points_from(reader: impl Read, path: &Path) -> Result<PointSet, CliError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = csv.records();
    let header = match records.next() {
        None => return Err(CliError::format(path, "empty file")),
        Some(h) => h?,
    };
    let d = header.len();
    for (i, name) in header.iter().enumerate() {
        if name != format!("x{i}") {
            return Err(CliError::format(
                path,
                format!("line 1: expected header column `x{i}`, found `{name}`"),
            ));
        }
    }
    let mut s = PointSet::new(d)?;
    let mut row = Vec::with_capacity(d);
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != d {
            return Err(CliError::format(
                path,
                format!("line {line}: expected {d} fields, found {}", record.len()),
            ));
        }
        row.clear();
        for field in record.iter() {
            let x: f64 = field.parse().map_err(|_| {
                CliError::format(path, format!("line {line}: `{field}` is not a number"))
            })?;
            if !x.is_finite() {
                return Err(CliError::format(
                    path,
                    format!("line {line}: non-finite coordinate `{field}`"),
                ));
            }
            row.push(x);
        }
        s.push(&row)?;
    }
    if s.is_empty() {
        return Err(CliError::format(path, "no data rows"));
    }
    Ok(s)
}

pub fn write_points(s: &PointSet, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    write_points_to(s, &mut out)
        .and_then(|()| out.flush())
        .map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })
}

pub fn write_points_to(s: &PointSet, out: &mut impl Write) -> std::io::Result<()> {
    let header: Vec<String> = (0..s.dim()).map(|i| format!("x{i}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for p in s.iter() {
        let mut first = true;
        for x in p {
            if !first {
                out.write_all(b",")?;
            }
            first = false;
            write!(out, "{x:?}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}
