use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    adversarial_battery, bracket_unit, sup_norm, MonotoneMode, Property, PropertyReport,
    SamplingPlan, Witness,
};
use crate::error::Result;
use crate::operators::{AveragingOperator, NeighborValues};
use crate::sampling::{reduce_samples, rng_for, Probe};

const NORMALIZATION_TOL: f64 = 1e-12;
const WEAK_MONOTONE_TOL: f64 = 1e-12;
const TRANSLATION_TOL: f64 = 1e-10;
const SCALING_TOL: f64 = 1e-10;
const PERMUTATION_TOL: f64 = 1e-12;
const GAUGE_TOL: f64 = 1e-10;
const ZERO_TOL: f64 = 1e-12;
const MAX_BOUND_TOL: f64 = 1e-12;
const LAMBDA_TOL: f64 = 1e-11;

// Sub-seed tags, one per check.
const TAG_MONOTONE_WEAK: u64 = 1;
const TAG_MONOTONE_STRICT: u64 = 2;
const TAG_TRANSLATION: u64 = 3;
const TAG_PERMUTATION: u64 = 4;
const TAG_GAUGE_SINGLE: u64 = 5;
const TAG_GAUGE_SUM: u64 = 6;
const TAG_COMPARISON_STRICT: u64 = 7;
const TAG_COMPARISON_WEAK: u64 = 8;
const TAG_MAX_BOUND: u64 = 9;

fn random_vector(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

/// The battery entry for `i`, or a fresh uniform sample from `[-R, R]`.
fn sample_input(
    battery: &[Vec<f64>],
    plan: &SamplingPlan,
    tag: u64,
    i: usize,
    n: usize,
) -> (Vec<f64>, rand_chacha::ChaCha8Rng) {
    let mut rng = rng_for(plan.seed, tag, i as u64);
    let t = match battery.get(i) {
        Some(t) => t.clone(),
        None => random_vector(&mut rng, n, -plan.value_range, plan.value_range),
    };
    (t, rng)
}

pub fn check_normalization<O: AveragingOperator + ?Sized>(op: &O) -> Result<PropertyReport> {
    let n = 2 * op.dim();
    let zeros = vec![0.0; n];
    let ones = vec![1.0; n];
    let f0 = op.eval(&zeros)?;
    let f1 = op.eval(&ones)?;
    let slack = NORMALIZATION_TOL - f0.abs().max((f1 - 1.0).abs());
    let witness = (slack < 0.0).then(|| Witness {
        detail: format!(
            "F(0,...,0) = {f0} and F(1,...,1) = {f1}; expected 0 and 1 within {NORMALIZATION_TOL:e}"
        ),
        inputs: vec![zeros, ones],
        values: vec![f0, f1],
    });
    Ok(PropertyReport {
        property: Property::Normalization,
        form: None,
        verdict: if witness.is_some() {
            super::Verdict::Fail
        } else {
            super::Verdict::Pass
        },
        samples_run: 2,
        skipped: 0,
        worst_margin: Some(slack),
        witness,
        note: None,
    })
}

/// Probes `F(t + h e_j) - F(t)` for every slot. Step sizes are measured in
/// units of the bracket width of `t`. The strict mode escalates the step
/// `delta, 10 delta, ...` up to half the bracket before declaring a slot flat,
/// since a strictly increasing `F` can have a tiny derivative at a given `t`.
pub fn check_monotone<O: AveragingOperator + ?Sized>(
    op: &O,
    plan: &SamplingPlan,
    mode: MonotoneMode,
) -> Result<PropertyReport> {
    plan.validate()?;
    let n = 2 * op.dim();
    let battery = adversarial_battery(op.dim(), plan.value_range);
    let tag = match mode {
        MonotoneMode::Weak => TAG_MONOTONE_WEAK,
        MonotoneMode::Strict => TAG_MONOTONE_STRICT,
    };
    let mut ladder = vec![plan.perturbation_scale];
    while mode == MonotoneMode::Strict && ladder[ladder.len() - 1] * 10.0 <= 0.5 {
        ladder.push(ladder[ladder.len() - 1] * 10.0);
    }

    let tally = reduce_samples(battery.len() + plan.sample_count, |i| {
        let (t, _) = sample_input(&battery, plan, tag, i, n);
        let base = op.eval(&t)?;
        let unit = bracket_unit(&t);
        let mut worst: Probe<Witness> = Probe::ok(f64::INFINITY);
        for j in 0..n {
            let mut best: Option<(f64, Vec<f64>, f64)> = None;
            let mut first_probe = None;
            for &step in &ladder {
                let mut moved = t.clone();
                moved[j] += step * unit;
                let value = op.eval(&moved)?;
                let slack = match mode {
                    MonotoneMode::Weak => (value - base) / unit + WEAK_MONOTONE_TOL,
                    MonotoneMode::Strict => (value - base) / unit - plan.strictness_margin,
                };
                if first_probe.is_none() {
                    first_probe = Some((moved.clone(), value, step * unit));
                }
                if best.as_ref().is_none_or(|b| slack > b.0) {
                    best = Some((slack, moved, value));
                }
                if slack >= 0.0 {
                    break;
                }
            }
            let (slack, _, _) = best.expect("ladder is nonempty");
            if slack < worst.slack {
                let (moved, value, h) = first_probe.expect("ladder is nonempty");
                worst = Probe::with(slack, || Witness {
                    detail: match mode {
                        MonotoneMode::Weak => format!(
                            "slot {}: F(t + {h:e} e_j) = {value} < F(t) = {base}",
                            j + 1
                        ),
                        MonotoneMode::Strict => format!(
                            "slot {}: F(t + h e_j) - F(t) stays below {:e} x bracket width for \
                             every probe h from {h:e} to {:e}",
                            j + 1,
                            plan.strictness_margin,
                            ladder[ladder.len() - 1] * unit
                        ),
                    },
                    inputs: vec![t.clone(), moved],
                    values: vec![base, value],
                });
            }
        }
        Ok(Some(worst))
    })?;
    let property = match mode {
        MonotoneMode::Weak => Property::MonotoneWeak,
        MonotoneMode::Strict => Property::MonotoneStrict,
    };
    Ok(PropertyReport::from_tally(property, tally))
}

/// Returns the translation report and the scaling report, in that order.
pub fn check_translation_scaling<O: AveragingOperator + ?Sized>(
    op: &O,
    plan: &SamplingPlan,
) -> Result<[PropertyReport; 2]> {
    plan.validate()?;
    let n = 2 * op.dim();
    // (1, ..., 1) with c = 2 first: the shortest scaling witness for
    // operators that shift constants.
    let mut battery = vec![vec![1.0; n]];
    battery.extend(adversarial_battery(op.dim(), plan.value_range));
    const BATTERY_SHIFTS: [f64; 5] = [2.0, -5.0, 0.5, -1.0, 3.0];

    let shift_for = |i: usize, rng: &mut rand_chacha::ChaCha8Rng| {
        if i < battery.len() {
            BATTERY_SHIFTS[i % BATTERY_SHIFTS.len()]
        } else {
            rng.random_range(-plan.value_range..=plan.value_range)
        }
    };

    let translation = reduce_samples(battery.len() + plan.sample_count, |i| {
        let (t, mut rng) = sample_input(&battery, plan, TAG_TRANSLATION, i, n);
        let c = shift_for(i, &mut rng);
        let shifted: Vec<f64> = t.iter().map(|v| v + c).collect();
        let lhs = op.eval(&shifted)?;
        let rhs = c + op.eval(&t)?;
        let slack = TRANSLATION_TOL - (lhs - rhs).abs();
        Ok(Some(Probe::with(slack, || Witness {
            detail: format!("c = {c}: F(t + c) = {lhs} but c + F(t) = {rhs}"),
            inputs: vec![t.clone(), shifted.clone()],
            values: vec![lhs, rhs],
        })))
    })?;

    let scaling = reduce_samples(battery.len() + plan.sample_count, |i| {
        // Same inputs and constants as the translation pass.
        let (t, mut rng) = sample_input(&battery, plan, TAG_TRANSLATION, i, n);
        let c = shift_for(i, &mut rng);
        let scaled: Vec<f64> = t.iter().map(|v| v * c).collect();
        let lhs = op.eval(&scaled)?;
        let rhs = c * op.eval(&t)?;
        let slack = SCALING_TOL * (c.abs() * sup_norm(&t)).max(1.0) - (lhs - rhs).abs();
        Ok(Some(Probe::with(slack, || Witness {
            detail: format!("c = {c}: F(c t) = {lhs} but c F(t) = {rhs}"),
            inputs: vec![t.clone(), scaled.clone()],
            values: vec![lhs, rhs],
        })))
    })?;

    Ok([
        PropertyReport::from_tally(Property::Translation, translation),
        PropertyReport::from_tally(Property::Scaling, scaling),
    ])
}

/// Battery inputs are compared with their reversal; random inputs with a
/// uniformly random permutation.
pub fn check_permutation<O: AveragingOperator + ?Sized>(
    op: &O,
    plan: &SamplingPlan,
) -> Result<PropertyReport> {
    plan.validate()?;
    let n = 2 * op.dim();
    let battery = adversarial_battery(op.dim(), plan.value_range);
    let tally = reduce_samples(battery.len() + plan.sample_count, |i| {
        let (t, mut rng) = sample_input(&battery, plan, TAG_PERMUTATION, i, n);
        let mut sigma: Vec<usize> = (0..n).collect();
        if i < battery.len() {
            sigma.reverse();
        } else {
            sigma.shuffle(&mut rng);
        }
        let permuted: Vec<f64> = sigma.iter().map(|&k| t[k]).collect();
        let a = op.eval(&t)?;
        let b = op.eval(&permuted)?;
        let slack = PERMUTATION_TOL * sup_norm(&t).max(1.0) - (a - b).abs();
        Ok(Some(Probe::with(slack, || Witness {
            detail: format!("F(t) = {a} but F(t permuted by {sigma:?}) = {b}"),
            inputs: vec![t.clone(), permuted.clone()],
            values: vec![a, b],
        })))
    })?;
    Ok(PropertyReport::from_tally(Property::Permutation, tally))
}

/// `min_k F(e_k)` over the unit coordinate vectors, or `None` when that
/// minimum is not positive.
pub fn estimate_lambda<O: AveragingOperator + ?Sized>(op: &O) -> Result<Option<f64>> {
    let (min, _) = min_unit_value(op)?;
    Ok((min > 0.0).then_some(min))
}

fn min_unit_value<O: AveragingOperator + ?Sized>(op: &O) -> Result<(f64, usize)> {
    let mut best = (f64::INFINITY, 0);
    for k in 0..2 * op.dim() {
        let v = op.eval(NeighborValues::unit(op.dim(), k).as_slice())?;
        if v < best.0 {
            best = (v, k);
        }
    }
    Ok(best)
}

/// Passes when `0 < min_k F(e_k) < 1` and the minimum is at least the
/// operator's declared constant, if any.
pub fn check_ellipticity<O: AveragingOperator + ?Sized>(op: &O) -> Result<PropertyReport> {
    let (min, k) = min_unit_value(op)?;
    let floor = op.declared_lambda().map_or(0.0, |l| l - LAMBDA_TOL);
    let slack = (min - floor).min(1.0 - min);
    let ok = min > 0.0 && min < 1.0 && slack >= 0.0;
    let e = NeighborValues::unit(op.dim(), k);
    let witness = (!ok).then(|| Witness {
        detail: match op.declared_lambda() {
            _ if min <= 0.0 => format!("F(e_{}) = {min} is not positive", k + 1),
            _ if min >= 1.0 => format!("F(e_{}) = {min} is not below 1", k + 1),
            Some(l) => format!("F(e_{}) = {min} is below the declared constant {l}", k + 1),
            None => format!("F(e_{}) = {min}", k + 1),
        },
        inputs: vec![e.as_slice().to_vec()],
        values: vec![min],
    });
    Ok(PropertyReport {
        property: Property::Ellipticity,
        form: None,
        verdict: if ok {
            super::Verdict::Pass
        } else {
            super::Verdict::Fail
        },
        samples_run: 2 * op.dim(),
        skipped: 0,
        worst_margin: Some(if ok { slack } else { slack.min(min) }),
        witness,
        note: Some(format!("estimated lambda = min_k F(e_k) = {min}")),
    })
}

/// Checks `|F(t) - F(t')| <= L_i |t_i - t_i'|` for single-slot changes and
/// the summed bound `sum_i L_i |t_i - t_i'|` for arbitrary pairs. Returns the
/// `single-slot` report then the `sum` report.
pub fn check_gauge_lipschitz<O: AveragingOperator + ?Sized>(
    op: &O,
    plan: &SamplingPlan,
) -> Result<[PropertyReport; 2]> {
    plan.validate()?;
    let Some(gauge) = op.declared_gauge() else {
        let na = |form| {
            PropertyReport::not_applicable(Property::GaugeLipschitz, "no gauge constants declared")
                .with_form(form)
        };
        return Ok([na("single-slot"), na("sum")]);
    };
    let n = 2 * op.dim();
    let r = plan.value_range;
    let battery = adversarial_battery(op.dim(), r);

    let single = reduce_samples(battery.len() + plan.sample_count, |i| {
        let (t, mut rng) = sample_input(&battery, plan, TAG_GAUGE_SINGLE, i, n);
        let (j, new) = if i < battery.len() {
            (i % n, t[i % n] + 1.0)
        } else {
            (rng.random_range(0..n), rng.random_range(-r..=r))
        };
        let mut other = t.clone();
        other[j] = new;
        let a = op.eval(&t)?;
        let b = op.eval(&other)?;
        let bound = gauge[j] * (t[j] - new).abs();
        let scale = sup_norm(&t).max(sup_norm(&other)).max(1.0);
        let slack = bound + GAUGE_TOL * scale - (a - b).abs();
        Ok(Some(Probe::with(slack, || Witness {
            detail: format!("slot {}: |F(t) - F(t')| = {} exceeds {bound}", j + 1, (a - b).abs()),
            inputs: vec![t.clone(), other.clone()],
            values: vec![a, b],
        })))
    })?;

    let sum = reduce_samples(battery.len() + plan.sample_count, |i| {
        let (t, mut rng) = sample_input(&battery, plan, TAG_GAUGE_SUM, i, n);
        let other = if i < battery.len() {
            battery[(i + 1) % battery.len()].clone()
        } else {
            random_vector(&mut rng, n, -r, r)
        };
        let a = op.eval(&t)?;
        let b = op.eval(&other)?;
        let bound: f64 = t
            .iter()
            .zip(&other)
            .zip(gauge)
            .map(|((x, y), l)| l * (x - y).abs())
            .sum();
        let scale = sup_norm(&t).max(sup_norm(&other)).max(1.0);
        let slack = bound + GAUGE_TOL * scale - (a - b).abs();
        Ok(Some(Probe::with(slack, || Witness {
            detail: format!("|F(t) - F(t')| = {} exceeds sum bound {bound}", (a - b).abs()),
            inputs: vec![t.clone(), other.clone()],
            values: vec![a, b],
        })))
    })?;

    Ok([
        PropertyReport::from_tally(Property::GaugeLipschitz, single).with_form("single-slot"),
        PropertyReport::from_tally(Property::GaugeLipschitz, sum).with_form("sum"),
    ])
}

/// Returns the `strict` report (`t' <= t`, `t' != t` implies `F(t') < F(t)`)
/// and the `weak` report (`t >= 0` and `F(t) = 0` imply `t = 0`, up to
/// `tolerance / lambda`).
pub fn check_comparison<O: AveragingOperator + ?Sized>(
    op: &O,
    plan: &SamplingPlan,
) -> Result<[PropertyReport; 2]> {
    plan.validate()?;
    let n = 2 * op.dim();
    let r = plan.value_range;
    let padded = |head: &[f64]| {
        let mut v = vec![0.0; n];
        for (slot, h) in v.iter_mut().zip(head) {
            *slot = *h;
        }
        v
    };
    // (upper, lower) pairs.
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = vec![
        (padded(&[2.0, 1.5]), padded(&[2.0, 1.0])),
        (padded(&[1.0, 2.0, 3.0, 4.5]), padded(&[1.0, 2.0, 3.0, 4.0])),
        (NeighborValues::unit(op.dim(), 0).as_slice().to_vec(), vec![0.0; n]),
        (vec![1.0; n], padded(&[0.0])),
    ]
    .into_iter()
    .filter(|(upper, lower)| upper != lower)
    .collect();

    let strict = reduce_samples(pairs.len() + plan.sample_count, |i| {
        let (upper, lower) = match pairs.get(i) {
            Some(p) => p.clone(),
            None => {
                let mut rng = rng_for(plan.seed, TAG_COMPARISON_STRICT, i as u64);
                let upper = random_vector(&mut rng, n, -r, r);
                let forced = rng.random_range(0..n);
                let lower = upper
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        if k == forced || rng.random_bool(0.5) {
                            v - rng.random_range(0.05 * r..=r)
                        } else {
                            *v
                        }
                    })
                    .collect();
                (upper, lower)
            }
        };
        let hi = op.eval(&upper)?;
        let lo = op.eval(&lower)?;
        let unit = bracket_unit(&upper).max(bracket_unit(&lower));
        let slack = (hi - lo) / unit - plan.strictness_margin;
        Ok(Some(Probe::with(slack, || Witness {
            detail: format!("t' <= t componentwise, t' != t, but F(t') = {lo} is not below F(t) = {hi}"),
            inputs: vec![upper.clone(), lower.clone()],
            values: vec![hi, lo],
        })))
    })?;

    let lambda = estimate_lambda(op)?;
    let mut nonneg_battery = vec![vec![0.0; n], padded(&[1e-13]), padded(&[1.0])];
    nonneg_battery.extend(
        adversarial_battery(op.dim(), r)
            .into_iter()
            .filter(|v| v.iter().all(|x| *x >= 0.0)),
    );
    let weak = reduce_samples(nonneg_battery.len() + plan.sample_count, |i| {
        let t = match nonneg_battery.get(i) {
            Some(t) => t.clone(),
            None => random_vector(&mut rng_for(plan.seed, TAG_COMPARISON_WEAK, i as u64), n, 0.0, r),
        };
        let f = op.eval(&t)?;
        let top = t.iter().copied().fold(0.0f64, f64::max);
        let allowed = lambda.map_or(ZERO_TOL, |l| ZERO_TOL / l);
        // The implication holds when F(t) is clearly nonzero or t is small.
        let slack = (f.abs() - ZERO_TOL).max(allowed - top);
        Ok(Some(Probe::with(slack, || Witness {
            detail: format!("t >= 0 and F(t) = {f} but max t_i = {top} exceeds {allowed:e}"),
            inputs: vec![t.clone()],
            values: vec![f],
        })))
    })?;

    Ok([
        PropertyReport::from_tally(Property::Comparison, strict).with_form("strict"),
        PropertyReport::from_tally(Property::Comparison, weak).with_form("weak"),
    ])
}

/// `|F(t)| <= max_i |t_i|`.
pub fn check_max_bound<O: AveragingOperator + ?Sized>(
    op: &O,
    plan: &SamplingPlan,
) -> Result<PropertyReport> {
    plan.validate()?;
    let n = 2 * op.dim();
    let battery = adversarial_battery(op.dim(), plan.value_range);
    let tally = reduce_samples(battery.len() + plan.sample_count, |i| {
        let (t, _) = sample_input(&battery, plan, TAG_MAX_BOUND, i, n);
        let f = op.eval(&t)?;
        let bound = sup_norm(&t);
        let slack = bound + MAX_BOUND_TOL * bound.max(1.0) - f.abs();
        Ok(Some(Probe::with(slack, || Witness {
            detail: format!("|F(t)| = {} exceeds max |t_i| = {bound}", f.abs()),
            inputs: vec![t.clone()],
            values: vec![f],
        })))
    })?;
    Ok(PropertyReport::from_tally(Property::MaxBound, tally))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{EikonalSign, OperatorSpec};
    use crate::verifier::Verdict;

    fn plan() -> SamplingPlan {
        SamplingPlan::new(3_000, 5)
    }

    #[test]
    fn normalization_examples() {
        assert!(check_normalization(&OperatorSpec::mean(3).unwrap()).unwrap().passed());
        assert!(check_normalization(&OperatorSpec::p_laplacian(3, 3.0).unwrap())
            .unwrap()
            .passed());
        let r = check_normalization(&OperatorSpec::eikonal(2, EikonalSign::Plus).unwrap()).unwrap();
        assert!(r.failed());
        let w = r.witness.unwrap();
        assert_eq!(w.inputs[0], vec![0.0; 4]);
        assert_eq!(w.values[0], -1.0);
    }

    #[test]
    fn monotone_examples() {
        let plap = OperatorSpec::p_laplacian(2, 2.5).unwrap();
        assert!(check_monotone(&plap, &plan(), MonotoneMode::Strict).unwrap().passed());

        let inf = OperatorSpec::infinity(2).unwrap();
        assert!(check_monotone(&inf, &plan(), MonotoneMode::Weak).unwrap().passed());
        let strict = check_monotone(&inf, &plan(), MonotoneMode::Strict).unwrap();
        assert!(strict.failed());
        let w = strict.witness.unwrap();
        assert_eq!(w.values[0], w.values[1]);
    }

    #[test]
    fn strict_monotone_survives_flat_directions_of_large_p() {
        let op = OperatorSpec::p_laplacian(2, 6.0).unwrap();
        assert!(check_monotone(&op, &plan(), MonotoneMode::Strict).unwrap().passed());
    }

    #[test]
    fn translation_and_scaling() {
        let [t, s] =
            check_translation_scaling(&OperatorSpec::p_harmonious(2, 0.3).unwrap(), &plan()).unwrap();
        assert!(t.passed() && s.passed());

        let [t, s] =
            check_translation_scaling(&OperatorSpec::eikonal(2, EikonalSign::Plus).unwrap(), &plan())
                .unwrap();
        assert!(t.passed());
        assert!(s.failed());
        let w = s.witness.unwrap();
        assert_eq!(w.inputs[0], vec![1.0; 4]);
        assert_eq!(w.values, vec![1.0, 0.0]);
    }

    #[test]
    fn permutation_examples() {
        assert!(check_permutation(&OperatorSpec::p_laplacian(3, 1.7).unwrap(), &plan())
            .unwrap()
            .passed());
        assert!(check_permutation(&OperatorSpec::median(2).unwrap(), &plan()).unwrap().passed());
        let r = check_permutation(&OperatorSpec::weighted_mean(vec![0.25, 0.75]).unwrap(), &plan())
            .unwrap();
        assert!(r.failed());
        let w = r.witness.unwrap();
        assert_eq!(w.inputs, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(w.values, vec![0.25, 0.75]);
    }

    #[test]
    fn lambda_estimates() {
        let l = estimate_lambda(&OperatorSpec::mean(3).unwrap()).unwrap().unwrap();
        assert!((l - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(estimate_lambda(&OperatorSpec::median(2).unwrap()).unwrap(), None);
        let l = estimate_lambda(&OperatorSpec::p_laplacian(2, 3.0).unwrap()).unwrap().unwrap();
        assert!((l - 0.366_025_403_784_438_6).abs() < 1e-12);
        assert!(check_ellipticity(&OperatorSpec::median(2).unwrap()).unwrap().failed());
        assert!(check_ellipticity(&OperatorSpec::infinity(3).unwrap()).unwrap().passed());
    }

    #[test]
    fn gauge_examples() {
        for op in [
            OperatorSpec::p_laplacian(2, 1.5).unwrap(),
            OperatorSpec::infinity(3).unwrap(),
            OperatorSpec::mean(2).unwrap(),
        ] {
            let [single, sum] = check_gauge_lipschitz(&op, &plan()).unwrap();
            assert!(single.passed() && sum.passed(), "{}", op.label());
        }
        let [single, _] = check_gauge_lipschitz(&OperatorSpec::median(2).unwrap(), &plan()).unwrap();
        assert_eq!(single.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn comparison_examples() {
        let [strict, weak] =
            check_comparison(&OperatorSpec::p_laplacian(2, 3.0).unwrap(), &plan()).unwrap();
        assert!(strict.passed() && weak.passed());
        let [strict, weak] = check_comparison(&OperatorSpec::infinity(2).unwrap(), &plan()).unwrap();
        assert!(strict.failed() && weak.passed());
        let w = strict.witness.unwrap();
        assert_eq!(w.inputs[0], vec![2.0, 1.5, 0.0, 0.0]);
        assert_eq!(w.values[0], w.values[1]);
    }

    #[test]
    fn max_bound_examples() {
        for op in [
            OperatorSpec::p_harmonious(2, 0.7).unwrap(),
            OperatorSpec::mean(2).unwrap(),
            OperatorSpec::infinity(2).unwrap(),
            OperatorSpec::p_laplacian(3, 1.3).unwrap(),
        ] {
            assert!(check_max_bound(&op, &plan()).unwrap().passed(), "{}", op.label());
        }
    }

    #[test]
    fn witnesses_reproduce_standalone() {
        let op = OperatorSpec::infinity(2).unwrap();
        let r = check_monotone(&op, &plan(), MonotoneMode::Strict).unwrap();
        let w = r.witness.unwrap();
        let a = op.eval(&w.inputs[0]).unwrap();
        let b = op.eval(&w.inputs[1]).unwrap();
        assert_eq!((a, b), (w.values[0], w.values[1]));
        assert!(b - a < plan().strictness_margin);
    }
}
