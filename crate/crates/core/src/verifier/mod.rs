//! Sampled certification of the averaging-operator axioms.
//!
//! Each check runs a fixed adversarial battery followed by `sample_count`
//! seeded random samples and reduces them to a [`PropertyReport`]: the
//! smallest slack seen and the lowest-index violation, if any. A pass means
//! that no violation was found among the samples run, not a proof.

mod axioms;
mod property_vi;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{AveragingOperator, Classification};
use crate::sampling::Tally;

pub use axioms::{
    check_comparison, check_ellipticity, check_gauge_lipschitz, check_max_bound, check_monotone,
    check_normalization, check_permutation, check_translation_scaling, estimate_lambda,
};
pub use property_vi::check_property_vi;

/// Gamma values probed by [`check_property_vi`] unless told otherwise.
pub const DEFAULT_GAMMA_GRID: [f64; 9] = [1.05, 1.1, 1.2, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Normalization,
    MonotoneWeak,
    MonotoneStrict,
    Translation,
    Scaling,
    Permutation,
    Ellipticity,
    GaugeLipschitz,
    PropertyVi,
    Comparison,
    MaxBound,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Normalization => "normalization",
            Property::MonotoneWeak => "monotone-weak",
            Property::MonotoneStrict => "monotone-strict",
            Property::Translation => "translation",
            Property::Scaling => "scaling",
            Property::Permutation => "permutation",
            Property::Ellipticity => "ellipticity",
            Property::GaugeLipschitz => "gauge-lipschitz",
            Property::PropertyVi => "property-vi",
            Property::Comparison => "comparison",
            Property::MaxBound => "max-bound",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonotoneMode {
    Weak,
    Strict,
}

/// A concrete violation: the inputs involved, what the operator returned and
/// the inequality that failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    /// Distinguishes variants of one property, e.g. `strict` and `weak`
    /// comparison or the `single-slot` and `sum` gauge bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    pub verdict: Verdict,
    pub samples_run: usize,
    #[serde(default)]
    pub skipped: usize,
    /// Smallest slack over all samples run; negative exactly when failing.
    pub worst_margin: Option<f64>,
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyReport {
    pub(crate) fn from_tally(property: Property, tally: Tally<Witness>) -> Self {
        let verdict = if tally.witness.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        Self {
            property,
            form: None,
            verdict,
            samples_run: tally.run,
            skipped: tally.skipped,
            worst_margin: tally.worst,
            witness: tally.witness.map(|(_, w)| w),
            note: None,
        }
    }

    pub(crate) fn not_applicable(property: Property, note: impl Into<String>) -> Self {
        Self {
            property,
            form: None,
            verdict: Verdict::NotApplicable,
            samples_run: 0,
            skipped: 0,
            worst_margin: None,
            witness: None,
            note: Some(note.into()),
        }
    }

    pub(crate) fn with_form(mut self, form: &str) -> Self {
        self.form = Some(form.to_owned());
        self
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// `property` or `property/form`.
    pub fn name(&self) -> String {
        match &self.form {
            Some(f) => format!("{}/{f}", self.property),
            None => self.property.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub sample_count: usize,
    /// Random entries are drawn uniformly from `[-R, R]`.
    pub value_range: f64,
    pub seed: u64,
    /// Monotonicity probe size, in units of the input's bracket width.
    pub perturbation_scale: f64,
    /// Required increase for strict monotonicity, in the same units.
    pub strictness_margin: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            sample_count: 100_000,
            value_range: 10.0,
            seed: 0,
            perturbation_scale: 1e-3,
            strictness_margin: 1e-10,
        }
    }
}

impl SamplingPlan {
    pub fn new(sample_count: usize, seed: u64) -> Self {
        Self {
            sample_count,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::InvalidConfig("sample_count must be at least 1".into()));
        }
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.value_range) {
            return Err(Error::InvalidConfig(format!(
                "value_range must be positive, got {}",
                self.value_range
            )));
        }
        if !positive(self.perturbation_scale) || self.perturbation_scale >= 0.5 {
            return Err(Error::InvalidConfig(format!(
                "perturbation_scale must lie in (0, 0.5), got {}",
                self.perturbation_scale
            )));
        }
        if !(self.strictness_margin >= 0.0) || !self.strictness_margin.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "strictness_margin must be nonnegative, got {}",
                self.strictness_margin
            )));
        }
        Ok(())
    }
}

/// Every report for one operator plus the classification they imply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomBattery {
    pub operator: String,
    pub dim: usize,
    pub declared_lambda: Option<f64>,
    pub estimated_lambda: Option<f64>,
    pub reports: Vec<PropertyReport>,
    pub classification: Classification,
}

impl AxiomBattery {
    pub fn report(&self, property: Property) -> Option<&PropertyReport> {
        self.reports.iter().find(|r| r.property == property)
    }

    pub fn reports_for(&self, property: Property) -> impl Iterator<Item = &PropertyReport> {
        self.reports.iter().filter(move |r| r.property == property)
    }
}

const WEAK_AXIOMS: [Property; 7] = [
    Property::Normalization,
    Property::MonotoneWeak,
    Property::Translation,
    Property::Scaling,
    Property::Permutation,
    Property::Ellipticity,
    Property::GaugeLipschitz,
];

const STRONG_AXIOMS: [Property; 2] = [Property::MonotoneStrict, Property::PropertyVi];

/// Weak when every report for i)-v) passes, strong when i') and vi) pass as
/// well. Comparison and max-bound reports are consequences and do not vote.
pub fn classify(reports: &[PropertyReport]) -> Classification {
    let all_pass = |props: &[Property]| {
        props.iter().all(|p| {
            let mut matching = reports.iter().filter(|r| r.property == *p).peekable();
            matching.peek().is_some() && matching.all(|r| r.passed())
        })
    };
    if !all_pass(&WEAK_AXIOMS) {
        Classification::NonAveraging
    } else if all_pass(&STRONG_AXIOMS) {
        Classification::Strong
    } else {
        Classification::Weak
    }
}

/// Runs every check in a fixed order and classifies the operator.
pub fn run_battery<O: AveragingOperator + ?Sized>(
    op: &O,
    plan: &SamplingPlan,
    gamma_grid: &[f64],
) -> Result<AxiomBattery> {
    plan.validate()?;
    let mut reports = vec![
        check_normalization(op)?,
        check_monotone(op, plan, MonotoneMode::Weak)?,
        check_monotone(op, plan, MonotoneMode::Strict)?,
    ];
    let [translation, scaling] = check_translation_scaling(op, plan)?;
    let consistent = reports[0].passed() && translation.passed() && scaling.passed();
    reports.push(translation);
    reports.push(scaling);
    reports.push(check_permutation(op, plan)?);
    reports.push(check_ellipticity(op)?);
    reports.extend(check_gauge_lipschitz(op, plan)?);
    reports.extend(check_comparison(op, plan)?);
    reports.push(if consistent {
        check_max_bound(op, plan)?
    } else {
        PropertyReport::not_applicable(
            Property::MaxBound,
            "requires normalization, translation and scaling to hold",
        )
    });
    reports.push(match check_property_vi(op, plan, gamma_grid) {
        Ok(r) => r,
        Err(Error::Precondition(msg)) => PropertyReport::not_applicable(Property::PropertyVi, msg),
        Err(e) => return Err(e),
    });

    Ok(AxiomBattery {
        operator: op.label(),
        dim: op.dim(),
        declared_lambda: op.declared_lambda(),
        estimated_lambda: estimate_lambda(op)?,
        classification: classify(&reports),
        reports,
    })
}

/// Fixed inputs every check starts from: all-equal vectors, unit coordinate
/// vectors, sign patterns, the `(2, 1, 0, ...)` family and near ties.
pub(crate) fn adversarial_battery(dim: usize, range: f64) -> Vec<Vec<f64>> {
    let n = 2 * dim;
    let mut out = vec![vec![0.0; n], vec![1.0; n], vec![0.5 * range; n], vec![-range / 3.0; n]];
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        out.push(e.clone());
        e[k] = -1.0;
        out.push(e);
    }
    if n <= 8 {
        for mask in 0..(1u32 << n) {
            out.push((0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect());
        }
    } else {
        out.push((0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect());
        out.push((0..n).map(|i| if i < dim { 1.0 } else { -1.0 }).collect());
    }
    let padded = |head: &[f64]| {
        let mut v = vec![0.0; n];
        for (slot, h) in v.iter_mut().zip(head) {
            *slot = *h;
        }
        v
    };
    out.push(padded(&[2.0, 1.0]));
    out.push(padded(&[2.0, 1.5]));
    out.push(padded(&[1.0, 2.0, 3.0, 4.0]));
    out.push(padded(&[range, -range]));
    let mut tie = vec![1.0; n];
    tie[0] += 1e-8;
    out.push(tie);
    let mut tie = vec![0.0; n];
    tie[n - 1] = 1e-8;
    out.push(tie);
    out
}

pub(crate) fn sup_norm(t: &[f64]) -> f64 {
    t.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `max - min`, or `max(1, |t|_inf)` for constant inputs.
pub(crate) fn bracket_unit(t: &[f64]) -> f64 {
    let (lo, hi) = crate::operators::min_max(t);
    if hi > lo {
        hi - lo
    } else {
        sup_norm(t).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{EikonalSign, OperatorSpec};

    fn plan() -> SamplingPlan {
        SamplingPlan::new(2_000, 11)
    }

    #[test]
    fn plan_validation() {
        assert!(SamplingPlan::default().validate().is_ok());
        assert!(SamplingPlan::new(0, 1).validate().is_err());
        let bad = SamplingPlan {
            value_range: -1.0,
            ..SamplingPlan::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn battery_contains_the_standard_shapes() {
        let b = adversarial_battery(2, 10.0);
        assert!(b.contains(&vec![0.0, 0.0, 1.0, 0.0]));
        assert!(b.contains(&vec![2.0, 1.0, 0.0, 0.0]));
        assert!(b.contains(&vec![1.0, -1.0, -1.0, 1.0]));
        assert!(b.iter().all(|v| v.len() == 4));
    }

    #[test]
    fn known_classifications() {
        let cases = [
            (OperatorSpec::mean(2).unwrap(), Classification::Strong),
            (OperatorSpec::p_harmonious(3, 0.3).unwrap(), Classification::Strong),
            (OperatorSpec::p_laplacian(2, 3.0).unwrap(), Classification::Strong),
            (OperatorSpec::p_laplacian(3, 3.0).unwrap(), Classification::Weak),
            (OperatorSpec::infinity(2).unwrap(), Classification::Weak),
            (OperatorSpec::median(2).unwrap(), Classification::NonAveraging),
            (
                OperatorSpec::eikonal(2, EikonalSign::Plus).unwrap(),
                Classification::NonAveraging,
            ),
            (
                OperatorSpec::weighted_mean(vec![0.25, 0.75]).unwrap(),
                Classification::NonAveraging,
            ),
        ];
        for (op, expected) in cases {
            let battery = run_battery(&op, &plan(), &DEFAULT_GAMMA_GRID).unwrap();
            assert_eq!(battery.classification, expected, "{}", op.label());
            assert_eq!(op.classification(), expected);
        }
    }

    #[test]
    fn battery_is_deterministic() {
        let op = OperatorSpec::p_laplacian(3, 1.5).unwrap();
        let a = run_battery(&op, &plan(), &DEFAULT_GAMMA_GRID).unwrap();
        let b = run_battery(&op, &plan(), &DEFAULT_GAMMA_GRID).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn report_serializes_with_kebab_names() {
        let r = check_normalization(&OperatorSpec::mean(1).unwrap()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["property"], "normalization");
        assert_eq!(json["verdict"], "pass");
        let vi = PropertyReport::not_applicable(Property::PropertyVi, "x");
        assert_eq!(serde_json::to_value(&vi).unwrap()["property"], "property-vi");
    }
}
