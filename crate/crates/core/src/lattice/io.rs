//! Grid CSV persistence and boundary-data JSON ingestion.
//!
//! Grid CSV: header `x1,...,xd,value`, one row per lattice point in
//! lexicographic order, values with 17 significant digits.
//!
//! Boundary JSON:
//! `{"dim": d, "n": N, "default": v0, "points": [{"x": [..], "value": v}, ..]}`.
//! Unlisted boundary points take `default`; listed points must lie on the
//! boundary.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{make_box, BoundaryData, GridFunction};
use crate::error::{Error, Result};

pub fn write_grid_csv<W: Write>(u: &GridFunction, mut out: W) -> Result<()> {
    let lattice = u.lattice();
    let header: Vec<String> = (1..=lattice.dim()).map(|k| format!("x{k}")).collect();
    writeln!(out, "{},value", header.join(","))?;
    for (i, v) in u.values().iter().enumerate() {
        let coords: Vec<String> = lattice.point(i).iter().map(|c| c.to_string()).collect();
        writeln!(out, "{},{:.16e}", coords.join(","), v)?;
    }
    Ok(())
}

pub fn read_grid_csv<R: BufRead>(input: R) -> Result<GridFunction> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty grid file".into()))??;
    let cols: Vec<&str> = header.trim().split(',').collect();
    let dim = cols.len().saturating_sub(1);
    let expected: Vec<String> = (1..=dim)
        .map(|k| format!("x{k}"))
        .chain(std::iter::once("value".to_string()))
        .collect();
    if dim == 0 || cols != expected {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }

    let mut points = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != dim + 1 {
            return Err(Error::Parse(format!("row {}: expected {} fields", lineno + 2, dim + 1)));
        }
        let x = fields[..dim]
            .iter()
            .map(|f| f.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", lineno + 2)))?;
        let v = fields[dim]
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", lineno + 2)))?;
        points.push(x);
        values.push(v);
    }
    let radius = points
        .iter()
        .flatten()
        .map(|c| c.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let lattice = make_box(dim, radius)?;
    if points.len() != lattice.len() {
        return Err(Error::Parse(format!(
            "expected {} rows for B_{radius} in dimension {dim}, found {}",
            lattice.len(),
            points.len()
        )));
    }
    for (i, x) in points.iter().enumerate() {
        if lattice.index_of(x) != Some(i) {
            return Err(Error::Parse(format!("row {} is out of lexicographic order", i + 2)));
        }
    }
    GridFunction::new(lattice, values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub x: Vec<i64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDocument {
    pub dim: usize,
    pub n: usize,
    pub default: f64,
    #[serde(default)]
    pub points: Vec<BoundaryPoint>,
}

impl BoundaryDocument {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_boundary_data(&self) -> Result<BoundaryData> {
        let lattice = make_box(self.dim, self.n)?;
        let mut grid = GridFunction::constant(lattice.clone(), self.default)?;
        for p in &self.points {
            if !lattice.contains(&p.x) {
                return Err(Error::OutsideBox {
                    point: p.x.clone(),
                    dim: self.dim,
                    radius: self.n,
                });
            }
            if lattice.is_interior(&p.x) {
                return Err(Error::NotBoundary(p.x.clone()));
            }
            grid.set(&p.x, p.value)?;
        }
        Ok(grid.boundary())
    }
}
