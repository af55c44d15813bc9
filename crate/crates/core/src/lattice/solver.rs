use serde::{Deserialize, Serialize};

use super::{BoundaryData, GridFunction, LatticeBox};
use crate::error::{Error, Result};
use crate::operators::AveragingOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Sequential sweeps in lexicographic order, updating in place.
    #[default]
    GaussSeidel,
    /// Every interior point updated from the previous iterate.
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Convergence threshold on the sup-norm residual over the interior.
    pub tolerance: f64,
    pub max_sweeps: usize,
    pub scheme: Scheme,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_sweeps: 100_000,
            scheme: Scheme::GaussSeidel,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "solver tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub sweeps_used: usize,
    pub final_residual: f64,
    pub converged: bool,
}

/// Solves `u(x) = F(u(n_1(x)), ..., u(n_{2d}(x)))` on the interior of `lattice`
/// with `u = boundary` on the boundary. The interior starts at the mean of the
/// boundary data. Running out of sweeps is not an error: the partial grid is
/// returned with `converged = false`.
pub fn solve_dirichlet<O: AveragingOperator + ?Sized>(
    op: &O,
    lattice: &LatticeBox,
    boundary: &BoundaryData,
    cfg: &SolverConfig,
) -> Result<(GridFunction, SolveReport)> {
    if boundary.lattice() != lattice {
        return Err(Error::InvalidConfig(
            "boundary data was built for a different box".into(),
        ));
    }
    let start = boundary.values().iter().sum::<f64>() / boundary.values().len() as f64;
    solve_from(op, boundary.to_grid(start), cfg)
}

/// Relaxes from an explicit initial grid; its boundary values are the data.
pub fn solve_from<O: AveragingOperator + ?Sized>(
    op: &O,
    mut u: GridFunction,
    cfg: &SolverConfig,
) -> Result<(GridFunction, SolveReport)> {
    cfg.validate()?;
    let lattice = u.lattice().clone();
    if op.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: 2 * lattice.dim(),
            got: 2 * op.dim(),
        });
    }
    let interior = lattice.interior_indices();
    let offsets = lattice.neighbor_offsets();

    let mut sweeps = 0;
    let mut residual = residual_norm(op, &u)?;
    while residual > cfg.tolerance && sweeps < cfg.max_sweeps {
        let change = match cfg.scheme {
            Scheme::GaussSeidel => gauss_seidel_sweep(op, &mut u, &interior, &offsets)?,
            Scheme::Jacobi => jacobi_sweep(op, &mut u, &interior, &offsets)?,
        };
        sweeps += 1;
        // The largest update is the residual seen during the sweep; only pay
        // for an exact residual once it is small.
        residual = if change <= cfg.tolerance {
            residual_norm(op, &u)?
        } else {
            change
        };
    }
    let final_residual = residual_norm(op, &u)?;
    Ok((
        u,
        SolveReport {
            sweeps_used: sweeps,
            final_residual,
            converged: final_residual <= cfg.tolerance,
        },
    ))
}

fn gather(values: &[f64], idx: usize, offsets: &[isize], buf: &mut [f64]) {
    for (b, &o) in buf.iter_mut().zip(offsets) {
        *b = values[(idx as isize + o) as usize];
    }
}

fn gauss_seidel_sweep<O: AveragingOperator + ?Sized>(
    op: &O,
    u: &mut GridFunction,
    interior: &[usize],
    offsets: &[isize],
) -> Result<f64> {
    let values = u.values_mut();
    let mut buf = vec![0.0; offsets.len()];
    let mut change = 0.0f64;
    for &i in interior {
        gather(values, i, offsets, &mut buf);
        let next = op.eval(&buf)?;
        change = change.max((next - values[i]).abs());
        values[i] = next;
    }
    Ok(change)
}

fn jacobi_sweep<O: AveragingOperator + ?Sized>(
    op: &O,
    u: &mut GridFunction,
    interior: &[usize],
    offsets: &[isize],
) -> Result<f64> {
    let values = u.values();
    let update = |&i: &usize| -> Result<f64> {
        let mut buf = vec![0.0; offsets.len()];
        gather(values, i, offsets, &mut buf);
        op.eval(&buf)
    };
    #[cfg(feature = "parallel")]
    let next: Vec<f64> = {
        use rayon::prelude::*;
        interior.par_iter().map(update).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let next: Vec<f64> = interior.iter().map(update).collect::<Result<_>>()?;

    let values = u.values_mut();
    let mut change = 0.0f64;
    for (&i, v) in interior.iter().zip(next) {
        change = change.max((v - values[i]).abs());
        values[i] = v;
    }
    Ok(change)
}

/// `F` applied to the current neighbour values of the interior point `x`.
pub fn local_update<O: AveragingOperator + ?Sized>(
    op: &O,
    u: &GridFunction,
    x: &[i64],
) -> Result<f64> {
    op.eval(&u.neighbor_values_at(x)?)
}

/// `sup_x |F(neighbours of x) - u(x)|` over the interior; 0 when there is no
/// interior.
pub fn residual_norm<O: AveragingOperator + ?Sized>(op: &O, u: &GridFunction) -> Result<f64> {
    let lattice = u.lattice();
    let offsets = lattice.neighbor_offsets();
    let values = u.values();
    let mut buf = vec![0.0; offsets.len()];
    let mut worst = 0.0f64;
    for i in lattice.interior_indices() {
        gather(values, i, &offsets, &mut buf);
        worst = worst.max((op.eval(&buf)? - values[i]).abs());
    }
    Ok(worst)
}
