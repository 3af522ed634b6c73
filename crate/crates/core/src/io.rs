//! CSV readers and writers for distance matrices, point clouds and values.
//!
//! Numbers are written with 17 significant digits so that every `f64`
//! survives a write/read cycle unchanged. Undefined values are `nan`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, MetricSpace, PointCloud};

pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn parse_value(field: &str, line: usize) -> Result<f64> {
    let f = field.trim();
    match f.to_ascii_lowercase().as_str() {
        "nan" => Ok(f64::NAN),
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => f
            .parse()
            .map_err(|_| Error::Parse(format!("line {line}: not a number: {f:?}"))),
    }
}

fn read_rows<R: BufRead>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| parse_value(f, idx + 1))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// `n` lines of `n` comma-separated distances, no header.
pub fn read_distance_matrix<R: BufRead>(reader: R) -> Result<DistanceMatrix> {
    DistanceMatrix::from_rows(&read_rows(reader)?)
}

/// One point per line, comma-separated coordinates, no header.
pub fn read_point_cloud<R: BufRead>(reader: R) -> Result<PointCloud> {
    let rows = read_rows(reader)?;
    if rows.is_empty() {
        return Err(Error::EmptySpace);
    }
    PointCloud::from_points(&rows)
}

fn write_row<W: Write>(out: &mut W, row: impl Iterator<Item = f64>) -> std::io::Result<()> {
    let line: Vec<String> = row.map(format_value).collect();
    writeln!(out, "{}", line.join(","))
}

pub fn write_distance_matrix<W: Write>(out: &mut W, m: &DistanceMatrix) -> std::io::Result<()> {
    for i in 0..m.len() {
        write_row(out, m.row(i).iter().copied())?;
    }
    Ok(())
}

pub fn write_point_cloud<W: Write>(out: &mut W, c: &PointCloud) -> std::io::Result<()> {
    for p in c.points() {
        write_row(out, p.iter().copied())?;
    }
    Ok(())
}
