//! Field snapshots: CSV rows `(x[, y, z], re, im)` plus a JSON grid header.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::ScalarField;
use super::grid::GridSpec;
use crate::error::{Error, Result};

const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

pub fn write_field_csv(path: &Path, field: &ScalarField) -> Result<()> {
    let grid = field.grid();
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<&str> = AXIS_NAMES[..grid.dim()].to_vec();
    header.extend(["re", "im"]);
    w.write_record(&header)?;
    for (i, v) in field.values().iter().enumerate() {
        let p = grid.position(i);
        let mut row: Vec<String> = p[..grid.dim()].iter().map(|c| format!("{c:e}")).collect();
        row.push(format!("{:e}", v.re));
        row.push(format!("{:e}", v.im));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_grid_header(path: &Path, grid: &GridSpec) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, grid)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_grid_header(path: &Path) -> Result<GridSpec> {
    Ok(serde_json::from_reader(File::open(path)?)?)
}

/// Reads values written by [`write_field_csv`] back onto `grid`.
pub fn read_field_csv(path: &Path, grid: &GridSpec) -> Result<ScalarField> {
    let mut r = csv::Reader::from_path(path)?;
    let dim = grid.dim();
    let mut values = Vec::with_capacity(grid.len());
    for record in r.records() {
        let record = record?;
        let parse = |i: usize| -> Result<f64> {
            record
                .get(i)
                .ok_or_else(|| Error::Config(format!("missing column {i}")))?
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad number: {e}")))
        };
        values.push(Complex64::new(parse(dim)?, parse(dim + 1)?));
    }
    ScalarField::new(grid.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = GridSpec::line(3.0, 16, 0.01, 1.0).unwrap();
        let f = ScalarField::from_fn(&g, |p| Complex64::new(p[0].sin(), p[0].cos() / 3.0)).unwrap();
        let csv_path = dir.path().join("f.csv");
        let json_path = dir.path().join("f.json");
        write_field_csv(&csv_path, &f).unwrap();
        write_grid_header(&json_path, &g).unwrap();
        let g2 = read_grid_header(&json_path).unwrap();
        assert_eq!(g, g2);
        let f2 = read_field_csv(&csv_path, &g2).unwrap();
        assert_eq!(f, f2);
    }
}
