use std::cmp::Ordering;

use rand::Rng;

use super::{
    check_monotone, MonotoneMode, Property, PropertyReport, SamplingPlan, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::operators::AveragingOperator;
use crate::sampling::{reduce_samples, rng_for, Probe};

const VI_TOL: f64 = 1e-9;
const TAG_VI: u64 = 20;
const PRECHECK_SAMPLES: usize = 2_000;
/// Largest battery of grid points per gamma.
const MAX_GRID: usize = 4096;
const SLOT_TOL: f64 = 1e-13;

/// Searches for `F(G, 1/G, t_3, ..., t_{2d-1}, s) = 1` with the free slots in
/// `[1/G, G]`, solving for the last slot `s` by bisection, and requires the
/// mean of `t_3, ..., s` to be at most 1.
///
/// For each gamma the free slots first run over the grid `{1/G, 1, G}` (or
/// its corners when that grid is too large), then over `sample_count`
/// uniform draws. Draws with no admissible `s` are counted as skipped. In
/// one dimension there are no free slots and the property holds vacuously.
pub fn check_property_vi<O: AveragingOperator + ?Sized>(
    op: &O,
    plan: &SamplingPlan,
    gamma_grid: &[f64],
) -> Result<PropertyReport> {
    plan.validate()?;
    if gamma_grid.is_empty() || gamma_grid.iter().any(|g| !(*g > 1.0) || !g.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "gamma grid must be nonempty with every entry > 1, got {gamma_grid:?}"
        )));
    }
    let dim = op.dim();
    if dim == 1 {
        return Ok(PropertyReport {
            property: Property::PropertyVi,
            form: None,
            verdict: Verdict::Pass,
            samples_run: 0,
            skipped: 0,
            worst_margin: None,
            witness: None,
            note: Some("vacuous for d = 1: there are no remaining slots".into()),
        });
    }
    let precheck = SamplingPlan {
        sample_count: plan.sample_count.min(PRECHECK_SAMPLES),
        ..*plan
    };
    if check_monotone(op, &precheck, MonotoneMode::Weak)?.failed() {
        return Err(Error::Precondition(
            "property vi) needs a monotone operator to solve for the last slot".into(),
        ));
    }

    let free = 2 * dim - 3;
    let grid = battery_points(free);
    let per_gamma = grid.len() + plan.sample_count;

    let tally = reduce_samples(gamma_grid.len() * per_gamma, |k| {
        let g = gamma_grid[k / per_gamma];
        let i = k % per_gamma;
        let inv = 1.0 / g;
        let mut v = Vec::with_capacity(2 * dim);
        v.push(g);
        v.push(inv);
        match grid.get(i) {
            Some(levels) => v.extend(levels.iter().map(|l| match l {
                0 => inv,
                1 => 1.0,
                _ => g,
            })),
            None => {
                let mut rng = rng_for(plan.seed, TAG_VI, k as u64);
                v.extend((0..free).map(|_| rng.random_range(inv..=g)));
            }
        }
        v.push(0.0);
        let Some(s) = solve_last_slot(op, &mut v, inv, g)? else {
            return Ok(None);
        };
        let mean = v[2..].iter().sum::<f64>() / (2 * dim - 2) as f64;
        let slack = 1.0 + VI_TOL - mean;
        Ok(Some(Probe::with(slack, || {
            let f = op.eval(&v).unwrap_or(f64::NAN);
            Witness {
                detail: format!(
                    "gamma = {g}: F(t) = {f} with last slot solved as {s}, but the mean of \
                     slots 3..{} is {mean} > 1",
                    2 * dim
                ),
                inputs: vec![v.clone()],
                values: vec![f, mean],
            }
        })))
    })?;

    let report = PropertyReport::from_tally(Property::PropertyVi, tally);
    let note = format!(
        "last slot solved, other slots sampled, gammas {gamma_grid:?}; {} draws had no \
         solution in [1/G, G]",
        report.skipped
    );
    Ok(report.with_note(note))
}

/// Level indices (0 = 1/G, 1 = 1, 2 = G) for the free slots.
fn battery_points(free: usize) -> Vec<Vec<u8>> {
    let (levels, count): (&[u8], usize) = if 3usize.pow(free as u32) <= MAX_GRID {
        (&[0, 1, 2], 3usize.pow(free as u32))
    } else if free < 12 {
        (&[0, 2], 1 << free)
    } else {
        return Vec::new();
    };
    (0..count)
        .map(|mut c| {
            (0..free)
                .map(|_| {
                    let l = levels[c % levels.len()];
                    c /= levels.len();
                    l
                })
                .collect()
        })
        .collect()
}

/// Bisects the last entry of `v` on `[lo, hi]` for `F(v) = 1`, using only
/// the ordering of `F(v)` against 1. `None` when 1 is not bracketed.
fn solve_last_slot<O: AveragingOperator + ?Sized>(
    op: &O,
    v: &mut [f64],
    lo: f64,
    hi: f64,
) -> Result<Option<f64>> {
    let last = v.len() - 1;
    let at = |s: f64, v: &mut [f64]| {
        v[last] = s;
        op.compare(v, 1.0)
    };
    if at(lo, v)? == Ordering::Greater || at(hi, v)? == Ordering::Less {
        return Ok(None);
    }
    let (mut a, mut b) = (lo, hi);
    // The mean is compared at 1e-9; this bracket is far below that.
    let width = SLOT_TOL * hi;
    while b - a > width {
        let mid = 0.5 * (a + b);
        match at(mid, v)? {
            Ordering::Less => a = mid,
            Ordering::Greater => b = mid,
            Ordering::Equal => {
                a = mid;
                b = mid;
                break;
            }
        }
    }
    let s = 0.5 * (a + b);
    v[last] = s;
    Ok(Some(s))
}
