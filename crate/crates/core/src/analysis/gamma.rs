use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::random_boundary;
use crate::error::{Error, Result};
use crate::lattice::{make_box, solve_dirichlet, BoundaryData, GridFunction, LatticeBox, SolverConfig};
use crate::operators::{AveragingOperator, RootFinderConfig};
use crate::verifier::estimate_lambda;

/// Solves `F(g, -1, 0, ..., 0) = 0` for `g` by bisection on `[0, 2 / lambda]`.
///
/// `lambda` is the declared constant, or the estimate from unit vectors. For
/// strong averaging operators the root is 1.
pub fn gamma_root<O: AveragingOperator + ?Sized>(op: &O, cfg: &RootFinderConfig) -> Result<f64> {
    cfg.validate()?;
    let lambda = match op.declared_lambda() {
        Some(l) => l,
        None => estimate_lambda(op)?.ok_or_else(|| {
            Error::Precondition(format!("{} has no positive ellipticity constant", op.label()))
        })?,
    };
    let n = 2 * op.dim();
    let probe = |g: f64| {
        let mut t = vec![0.0; n];
        t[0] = g;
        t[1] = -1.0;
        op.compare(&t, 0.0)
    };
    let (mut lo, mut hi) = (0.0, 2.0 / lambda);
    match (probe(lo)?, probe(hi)?) {
        (Ordering::Equal, _) => return Ok(lo),
        (_, Ordering::Equal) => return Ok(hi),
        (Ordering::Less, Ordering::Greater) => {}
        _ => return Err(Error::NoRoot { lo, hi }),
    }
    for _ in 0..cfg.max_iterations {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= cfg.abs_tolerance * hi.max(1.0) || mid <= lo || mid >= hi {
            break;
        }
        match probe(mid)? {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Ok(mid),
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaRadius {
    pub radius: usize,
    /// Largest `u(y) / u(x)` over neighbouring pairs in `B_{N/2}` and over
    /// all retained trials.
    pub gamma: f64,
    pub trials_used: usize,
    pub dropped: usize,
    /// Trial index attaining `gamma`.
    pub best_trial: Option<usize>,
    /// Largest neighbour ratio of the profile `u(x) = g^{x_1}` on `B_{N/2}`,
    /// with `g` from [`gamma_root`].
    pub profile_ratio: f64,
    /// `max |F(neighbours) - u(x)| / u(x)` of that profile on `B_N`.
    pub profile_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaEstimate {
    pub operator: String,
    pub dim: usize,
    pub lambda: Option<f64>,
    pub radii: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub root: f64,
    pub per_radius: Vec<GammaRadius>,
}

impl GammaEstimate {
    pub fn gammas(&self) -> Vec<f64> {
        self.per_radius.iter().map(|r| r.gamma).collect()
    }
}

/// Largest ratio between neighbouring values inside `B_inner`, both
/// directions; `None` when some value there is not positive.
fn max_neighbor_ratio(u: &GridFunction, inner: usize) -> Option<f64> {
    let lattice = u.lattice();
    let dim = lattice.dim();
    let inner_box = make_box(dim, inner.max(1)).ok()?;
    let mut worst = 1.0f64;
    for x in inner_box.points() {
        if inner == 0 && x.iter().any(|c| *c != 0) {
            continue;
        }
        let here = u.get(&x)?;
        for j in 0..dim {
            let mut y = x.clone();
            y[j] += 1;
            if y[j].unsigned_abs() as usize > inner {
                continue;
            }
            let there = u.get(&y)?;
            if here <= 0.0 || there <= 0.0 {
                return None;
            }
            worst = worst.max(there / here).max(here / there);
        }
    }
    Some(worst)
}

/// Delta masses at the face centres `+-N e_j`, then one off-centre at
/// `(N, N/2, 0, ...)`.
fn delta_battery(lattice: &LatticeBox) -> Vec<Vec<i64>> {
    let dim = lattice.dim();
    let n = lattice.radius() as i64;
    let mut out = Vec::new();
    for j in 0..dim {
        for sign in [1, -1] {
            let mut x = vec![0; dim];
            x[j] = sign * n;
            out.push(x);
        }
    }
    if dim >= 2 {
        let mut x = vec![0; dim];
        x[0] = n;
        x[1] = n / 2;
        out.push(x);
    }
    out
}

fn profile(
    op: &(impl AveragingOperator + ?Sized),
    lattice: &LatticeBox,
    root: f64,
) -> Result<(f64, f64)> {
    if !(root > 0.0) {
        return Ok((f64::INFINITY, f64::INFINITY));
    }
    let u = GridFunction::from_fn(lattice.clone(), |x| root.powi(x[0] as i32))?;
    let mut residual = 0.0f64;
    for x in lattice.points().filter(|x| lattice.is_interior(x)) {
        let here = u.get(&x).expect("point of the box");
        let f = op.eval(&u.neighbor_values_at(&x)?)?;
        residual = residual.max((f - here).abs() / here);
    }
    let ratio = max_neighbor_ratio(&u, lattice.radius() / 2).unwrap_or(f64::INFINITY);
    Ok((ratio, residual))
}

/// Finite-box estimate of the supremal neighbour ratio of nonnegative
/// F-harmonic functions.
///
/// For each radius, `trials` Dirichlet problems are solved: the delta-mass
/// battery first, then uniform `[0, 1]` data from `(seed, trial)`. Ratios are
/// scale invariant, so no rescaling to `u(0) = 1` is needed. Trials that do
/// not converge or give `u(0) = 0` are dropped.
pub fn estimate_gamma<O: AveragingOperator + ?Sized>(
    op: &O,
    radii: &[usize],
    trials: usize,
    seed: u64,
    solver: &SolverConfig,
) -> Result<GammaEstimate> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if radii.is_empty() {
        return Err(Error::InvalidConfig("at least one radius is required".into()));
    }
    solver.validate()?;
    let root = gamma_root(op, &RootFinderConfig::default())?;
    let mut per_radius = Vec::with_capacity(radii.len());
    for &radius in radii {
        let lattice = make_box(op.dim(), radius)?;
        let deltas = delta_battery(&lattice);
        let run = |trial: usize| -> Result<Option<f64>> {
            let data = match deltas.get(trial) {
                Some(at) => BoundaryData::from_fn(lattice.clone(), |x| if x == at.as_slice() { 1.0 } else { 0.0 })?,
                None => random_boundary(&lattice, seed ^ radius as u64, trial as u64)?,
            };
            let (u, report) = solve_dirichlet(op, &lattice, &data, solver)?;
            let origin = u.get(&vec![0; op.dim()]).expect("origin is in every box");
            if !report.converged || !(origin > 0.0) {
                return Ok(None);
            }
            Ok(max_neighbor_ratio(&u, radius / 2))
        };
        let outcomes: Vec<Option<f64>> = {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..trials).into_par_iter().map(run).collect::<Result<_>>()?
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..trials).map(run).collect::<Result<_>>()?
            }
        };
        let mut entry = GammaRadius {
            radius,
            gamma: f64::NAN,
            trials_used: 0,
            dropped: 0,
            best_trial: None,
            profile_ratio: 0.0,
            profile_residual: 0.0,
        };
        for (trial, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Some(g) => {
                    entry.trials_used += 1;
                    if entry.best_trial.is_none() || g > entry.gamma {
                        entry.gamma = g;
                        entry.best_trial = Some(trial);
                    }
                }
                None => entry.dropped += 1,
            }
        }
        (entry.profile_ratio, entry.profile_residual) = profile(op, &lattice, root)?;
        per_radius.push(entry);
    }
    Ok(GammaEstimate {
        operator: op.label(),
        dim: op.dim(),
        lambda: op.declared_lambda(),
        radii: radii.to_vec(),
        trials,
        seed,
        root,
        per_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{EikonalSign, OperatorSpec};

    fn root(op: &OperatorSpec) -> f64 {
        gamma_root(op, &RootFinderConfig::default()).unwrap()
    }

    #[test]
    fn strong_operators_have_unit_root() {
        for op in [
            OperatorSpec::mean(1).unwrap(),
            OperatorSpec::mean(3).unwrap(),
            OperatorSpec::p_laplacian(2, 3.0).unwrap(),
            OperatorSpec::p_laplacian(2, 1.5).unwrap(),
            OperatorSpec::p_harmonious(2, 0.5).unwrap(),
        ] {
            assert!((root(&op) - 1.0).abs() < 1e-9, "{}", op.label());
        }
    }

    #[test]
    fn weighted_mean_root_is_the_ratio() {
        for a in [0.25, 1.0 / 3.0] {
            let op = OperatorSpec::weighted_mean(vec![a, 1.0 - a]).unwrap();
            assert!((root(&op) - (1.0 - a) / a).abs() < 1e-9);
        }
    }

    #[test]
    fn operators_without_lambda_are_rejected() {
        assert!(gamma_root(
            &OperatorSpec::eikonal(2, EikonalSign::Plus).unwrap(),
            &RootFinderConfig::default()
        )
        .is_err());
    }

    #[test]
    fn mean_gamma_decreases_with_radius() {
        let op = OperatorSpec::mean(2).unwrap();
        let est = estimate_gamma(&op, &[2, 4, 8], 8, 1, &SolverConfig::default()).unwrap();
        let g = est.gammas();
        assert!(g[0] >= g[1] && g[1] >= g[2], "{g:?}");
        assert!(g.iter().all(|v| *v >= 1.0 && *v <= 4.0 + 1e-9));
        assert!(est.per_radius.iter().all(|r| r.profile_ratio == 1.0));
    }

    #[test]
    fn weighted_profile_ratio_is_three() {
        let op = OperatorSpec::weighted_mean(vec![0.25, 0.75]).unwrap();
        let est = estimate_gamma(&op, &[4, 8, 16], 4, 0, &SolverConfig::default()).unwrap();
        for r in &est.per_radius {
            assert!((r.profile_ratio - 3.0).abs() < 1e-9, "{r:?}");
            assert!(r.profile_residual < 1e-12);
        }
    }

    #[test]
    fn estimate_is_deterministic() {
        let op = OperatorSpec::p_laplacian(2, 3.0).unwrap();
        let a = estimate_gamma(&op, &[3], 6, 9, &SolverConfig::default()).unwrap();
        let b = estimate_gamma(&op, &[3], 6, 9, &SolverConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
