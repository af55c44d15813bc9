//! Finite boxes `B_N = {x in Z^d : |x_i| <= N}`, functions on them, and the
//! Dirichlet relaxation solver.
//!
//! Points are stored in lexicographic order with `x_1` most significant, so
//! `(-N, ..., -N)` is index 0 and `(N, ..., N)` is the last index.

mod io;
mod isometry;
mod solver;

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};

pub use io::{read_grid_csv, write_grid_csv, BoundaryDocument, BoundaryPoint};
pub use isometry::{apply_isometry, IsometrySpec};
pub use solver::{
    local_update, residual_norm, solve_dirichlet, solve_from, Scheme, SolveReport, SolverConfig,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeBox {
    dim: usize,
    radius: usize,
    #[serde(skip)]
    side: usize,
    #[serde(skip)]
    strides: Vec<usize>,
}

pub fn make_box(dim: usize, radius: usize) -> Result<LatticeBox> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if radius == 0 {
        return Err(Error::InvalidConfig("box radius N must be at least 1".into()));
    }
    let side = 2 * radius + 1;
    let mut strides = vec![1; dim];
    for k in (0..dim.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * side;
    }
    Ok(LatticeBox {
        dim,
        radius,
        side,
        strides,
    })
}

impl LatticeBox {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of lattice points, `(2N + 1)^d`.
    pub fn len(&self) -> usize {
        self.side * self.strides[0]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let n = self.radius as i64;
        x.len() == self.dim && x.iter().all(|c| c.abs() <= n)
    }

    pub fn is_interior(&self, x: &[i64]) -> bool {
        let n = self.radius as i64 - 1;
        x.len() == self.dim && x.iter().all(|c| c.abs() <= n)
    }

    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let n = self.radius as i64;
        Some(
            x.iter()
                .zip(&self.strides)
                .map(|(c, s)| (c + n) as usize * s)
                .sum(),
        )
    }

    pub fn point(&self, idx: usize) -> Vec<i64> {
        let n = self.radius as i64;
        self.strides
            .iter()
            .map(|s| ((idx / s) % self.side) as i64 - n)
            .collect()
    }

    pub(crate) fn is_interior_index(&self, idx: usize) -> bool {
        let hi = self.side - 1;
        self.strides.iter().all(|s| {
            let c = (idx / s) % self.side;
            c != 0 && c != hi
        })
    }

    /// Index of `x`, which must be an interior point.
    pub fn interior_index(&self, x: &[i64]) -> Result<usize> {
        let idx = self.index_of(x).ok_or_else(|| Error::OutsideBox {
            point: x.to_vec(),
            dim: self.dim,
            radius: self.radius,
        })?;
        if !self.is_interior_index(idx) {
            return Err(Error::NotInterior(x.to_vec()));
        }
        Ok(idx)
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_interior_index(i)).collect()
    }

    pub fn boundary_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_interior_index(i)).collect()
    }

    /// Index offsets of the `2d` neighbours, in slot order `+e_1..+e_d, -e_1..-e_d`.
    pub(crate) fn neighbor_offsets(&self) -> Vec<isize> {
        let plus = self.strides.iter().map(|&s| s as isize);
        let minus = self.strides.iter().map(|&s| -(s as isize));
        plus.chain(minus).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

/// `||x||_1`.
pub fn one_norm(x: &[i64]) -> u64 {
    x.iter().map(|c| c.unsigned_abs()).sum()
}

/// A real-valued function on a box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    lattice: LatticeBox,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(lattice: LatticeBox, values: Vec<f64>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                got: values.len(),
            });
        }
        ensure_finite(&values)?;
        Ok(Self { lattice, values })
    }

    pub fn from_fn(lattice: LatticeBox, mut f: impl FnMut(&[i64]) -> f64) -> Result<Self> {
        let values = lattice.points().map(|x| f(&x)).collect();
        Self::new(lattice, values)
    }

    pub fn constant(lattice: LatticeBox, c: f64) -> Result<Self> {
        let values = vec![c; lattice.len()];
        Self::new(lattice, values)
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, x: &[i64]) -> Option<f64> {
        self.lattice.index_of(x).map(|i| self.values[i])
    }

    pub fn set(&mut self, x: &[i64], value: f64) -> Result<()> {
        ensure_finite(&[value])?;
        let idx = self.lattice.index_of(x).ok_or_else(|| Error::OutsideBox {
            point: x.to_vec(),
            dim: self.lattice.dim,
            radius: self.lattice.radius,
        })?;
        self.values[idx] = value;
        Ok(())
    }

    /// Values at the `2d` neighbours of the interior point with index `idx`.
    pub(crate) fn neighbor_values(&self, idx: usize) -> Vec<f64> {
        self.lattice
            .neighbor_offsets()
            .iter()
            .map(|&o| self.values[(idx as isize + o) as usize])
            .collect()
    }

    pub fn neighbor_values_at(&self, x: &[i64]) -> Result<Vec<f64>> {
        let idx = self.lattice.interior_index(x)?;
        Ok(self.neighbor_values(idx))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Multiplies every value by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.lattice.clone(), self.values.iter().map(|v| v * c).collect())
    }

    pub fn boundary(&self) -> BoundaryData {
        let values = self
            .lattice
            .boundary_indices()
            .into_iter()
            .map(|i| self.values[i])
            .collect();
        BoundaryData {
            lattice: self.lattice.clone(),
            values,
        }
    }
}

/// Dirichlet data: one value per boundary point, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    lattice: LatticeBox,
    values: Vec<f64>,
}

impl BoundaryData {
    pub fn new(lattice: LatticeBox, values: Vec<f64>) -> Result<Self> {
        let expected = lattice.boundary_indices().len();
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: values.len(),
            });
        }
        ensure_finite(&values)?;
        Ok(Self { lattice, values })
    }

    pub fn from_fn(lattice: LatticeBox, mut f: impl FnMut(&[i64]) -> f64) -> Result<Self> {
        let values = lattice
            .boundary_indices()
            .into_iter()
            .map(|i| f(&lattice.point(i)))
            .collect();
        Self::new(lattice, values)
    }

    pub fn constant(lattice: LatticeBox, c: f64) -> Result<Self> {
        Self::from_fn(lattice, |_| c)
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Grid equal to the data on the boundary and `fill` inside.
    pub fn to_grid(&self, fill: f64) -> GridFunction {
        let mut values = vec![fill; self.lattice.len()];
        for (i, v) in self.lattice.boundary_indices().into_iter().zip(&self.values) {
            values[i] = *v;
        }
        GridFunction {
            lattice: self.lattice.clone(),
            values,
        }
    }
}
