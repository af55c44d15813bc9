//! Inequalities for nonnegative F-harmonic functions, neighbour-ratio
//! experiments and the explicit counterexamples.

mod counterexamples;
mod gamma;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{make_box, one_norm, residual_norm, BoundaryData, GridFunction, LatticeBox};
use crate::operators::AveragingOperator;
use crate::sampling::rng_for;

pub use counterexamples::{
    counterexample_p_large, counterexample_p_small, infinity_gamma_identity,
    p_large_gamma_bound, weighted_geometric_solution, CounterexampleCase, CounterexampleRecord,
};
pub use gamma::{estimate_gamma, gamma_root, GammaEstimate, GammaRadius};

/// Residual below which a grid counts as F-harmonic for the local checks.
pub const HARMONIC_TOL: f64 = 1e-8;
const HARNACK_SLACK: f64 = 1e-9;
const ZERO_TOL: f64 = 1e-12;
const GROWTH_SLACK: f64 = 1e-9;
const ORIGIN_TOL: f64 = 1e-9;

const TAG_BOUNDARY: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnackReport {
    pub lambda: f64,
    pub residual: f64,
    pub points_checked: usize,
    /// Largest `lambda * max_i u(n_i(x)) / u(x)`; at most 1 when the
    /// inequality holds.
    pub worst_ratio: f64,
    /// Smallest `u(x) / lambda - max_i u(n_i(x))`.
    pub worst_slack: f64,
    pub worst_point: Option<Vec<i64>>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroContradiction {
    pub point: Vec<i64>,
    pub max_neighbor: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroPropagationReport {
    pub zero_points: usize,
    pub contradictions: Vec<ZeroContradiction>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub lambda: f64,
    pub radius_scanned: usize,
    pub points_checked: usize,
    /// Smallest `(1/lambda)^|x|_1 - u(x)`.
    pub worst_slack: f64,
    pub worst_point: Option<Vec<i64>>,
    pub holds: bool,
}

fn declared_lambda<O: AveragingOperator + ?Sized>(op: &O) -> Result<f64> {
    op.declared_lambda()
        .ok_or_else(|| Error::Precondition(format!("{} declares no ellipticity constant", op.label())))
}

fn ensure_nonnegative(u: &GridFunction) -> Result<()> {
    match u.values().iter().position(|v| *v < 0.0) {
        Some(i) => Err(Error::Precondition(format!(
            "u({:?}) = {} is negative",
            u.lattice().point(i),
            u.values()[i]
        ))),
        None => Ok(()),
    }
}

fn ensure_harmonic<O: AveragingOperator + ?Sized>(op: &O, u: &GridFunction) -> Result<f64> {
    let residual = residual_norm(op, u)?;
    if residual > HARMONIC_TOL {
        return Err(Error::NotHarmonic {
            residual,
            tolerance: HARMONIC_TOL,
        });
    }
    Ok(residual)
}

/// `max_i u(n_i(x)) <= u(x) / lambda` at every interior point.
///
/// Rejects grids with negative entries, then grids whose residual exceeds
/// [`HARMONIC_TOL`].
pub fn check_harnack<O: AveragingOperator + ?Sized>(op: &O, u: &GridFunction) -> Result<HarnackReport> {
    let lambda = declared_lambda(op)?;
    ensure_nonnegative(u)?;
    let residual = ensure_harmonic(op, u)?;
    let lattice = u.lattice();
    let mut report = HarnackReport {
        lambda,
        residual,
        points_checked: 0,
        worst_ratio: 0.0,
        worst_slack: f64::INFINITY,
        worst_point: None,
        holds: true,
    };
    for idx in lattice.interior_indices() {
        let centre = u.values()[idx];
        let top = u
            .neighbor_values(idx)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let slack = centre / lambda - top;
        if centre > 0.0 {
            report.worst_ratio = report.worst_ratio.max(lambda * top / centre);
        } else if top > 0.0 {
            report.worst_ratio = f64::INFINITY;
        }
        if slack < report.worst_slack {
            report.worst_slack = slack;
            report.worst_point = Some(lattice.point(idx));
        }
        report.points_checked += 1;
    }
    report.holds = report.worst_slack >= -HARNACK_SLACK;
    Ok(report)
}

/// At interior zeros of `u` every neighbour must vanish too (up to
/// `1e-12 / lambda`). Scanning every interior zero covers the chains of
/// neighbours the propagation argument walks along.
pub fn check_zero_propagation<O: AveragingOperator + ?Sized>(
    op: &O,
    u: &GridFunction,
) -> Result<ZeroPropagationReport> {
    let lambda = declared_lambda(op)?;
    ensure_nonnegative(u)?;
    let lattice = u.lattice();
    let mut zero_points = 0;
    let mut contradictions = Vec::new();
    for idx in lattice.interior_indices() {
        let centre = u.values()[idx];
        if centre > ZERO_TOL {
            continue;
        }
        zero_points += 1;
        let neighbours = u.neighbor_values(idx);
        let top = neighbours.iter().copied().fold(0.0f64, f64::max);
        if top > ZERO_TOL / lambda {
            contradictions.push(ZeroContradiction {
                point: lattice.point(idx),
                max_neighbor: top,
                residual: op.eval(&neighbours)? - centre,
            });
        }
    }
    Ok(ZeroPropagationReport {
        zero_points,
        holds: contradictions.is_empty(),
        contradictions,
    })
}

/// `u(x) <= (1/lambda)^|x|_1` on the inner box `B_{floor(N/2)}`, for `u`
/// normalized to `u(0) = 1`.
pub fn check_growth_bound(u: &GridFunction, lambda: f64) -> Result<GrowthReport> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Precondition(format!("lambda must lie in (0, 1], got {lambda}")));
    }
    ensure_nonnegative(u)?;
    let lattice = u.lattice();
    let origin = vec![0; lattice.dim()];
    let at_origin = u.get(&origin).expect("origin is in every box");
    if (at_origin - 1.0).abs() > ORIGIN_TOL {
        return Err(Error::Precondition(format!(
            "growth bound needs u(0) = 1, got {at_origin}"
        )));
    }
    let inner = lattice.radius() / 2;
    let mut report = GrowthReport {
        lambda,
        radius_scanned: inner,
        points_checked: 0,
        worst_slack: f64::INFINITY,
        worst_point: None,
        holds: true,
    };
    let inner_box = make_box(lattice.dim(), inner.max(1))?;
    for x in inner_box.points() {
        if inner == 0 && x.iter().any(|c| *c != 0) {
            continue;
        }
        let bound = (1.0 / lambda).powi(one_norm(&x) as i32);
        let slack = bound - u.get(&x).expect("inner box lies inside");
        if slack < report.worst_slack {
            report.worst_slack = slack;
            report.worst_point = Some(x);
        }
        report.points_checked += 1;
    }
    report.holds = report.worst_slack >= -GROWTH_SLACK;
    Ok(report)
}

/// `min(min interior - min boundary, max boundary - max interior)`;
/// nonnegative when `u` obeys the maximum principle.
pub fn maximum_principle_slack(u: &GridFunction) -> f64 {
    let lattice = u.lattice();
    let boundary = u.boundary();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for idx in lattice.interior_indices() {
        lo = lo.min(u.values()[idx]);
        hi = hi.max(u.values()[idx]);
    }
    if lo > hi {
        return f64::INFINITY;
    }
    (lo - boundary.min()).min(boundary.max() - hi)
}

/// Uniform `[0, 1]` boundary values, reproducible from `(seed, trial)`.
pub fn random_boundary(lattice: &LatticeBox, seed: u64, trial: u64) -> Result<BoundaryData> {
    let mut rng = rng_for(seed, TAG_BOUNDARY, trial);
    BoundaryData::from_fn(lattice.clone(), |_| rng.random_range(0.0..=1.0))
}
