//! Isotropic averaging operators `F: R^{2d} -> R` and their built-in examples.
//!
//! Neighbour slots follow the lattice convention: slot `j < d` holds the value
//! at `x + e_{j+1}` and slot `d + j` the value at `x - e_{j+1}`.

mod plaplace;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::lattice::GridFunction;

pub use plaplace::{p_laplacian_lambda, RootFinderConfig};
pub(crate) use plaplace::min_max;
use plaplace::PLaplacian;

/// Tolerance used when re-checking a declared ellipticity constant.
const LAMBDA_CONTRACT_TOL: f64 = 1e-11;

/// The `2d` values at the neighbours of a lattice point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct NeighborValues(Vec<f64>);

impl NeighborValues {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::OddLength(values.len()));
        }
        ensure_finite(&values)?;
        Ok(Self(values))
    }

    pub fn for_dim(values: Vec<f64>, dim: usize) -> Result<Self> {
        if values.len() != 2 * dim {
            return Err(Error::DimensionMismatch {
                expected: 2 * dim,
                got: values.len(),
            });
        }
        Self::new(values)
    }

    /// The unit coordinate vector with a 1 in `slot`.
    pub fn unit(dim: usize, slot: usize) -> Self {
        let mut v = vec![0.0; 2 * dim];
        v[slot] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len() / 2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for NeighborValues {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<NeighborValues> for Vec<f64> {
    fn from(v: NeighborValues) -> Self {
        v.0
    }
}

impl AsRef<[f64]> for NeighborValues {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Anything that maps `2d` neighbour values to a real number.
///
/// The verifier, the Dirichlet solver and the analysis routines are generic
/// over this trait, so user-defined operators can be certified the same way
/// as the built-ins.
pub trait AveragingOperator: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, t: &[f64]) -> Result<f64>;

    /// Orders `F(t)` against `level`. Implementations may override this when
    /// the sign of `F(t) - level` can be decided more accurately than by
    /// evaluating `F`.
    fn compare(&self, t: &[f64], level: f64) -> Result<Ordering> {
        Ok(self.eval(t)?.total_cmp(&level))
    }

    fn declared_lambda(&self) -> Option<f64> {
        None
    }

    fn declared_gauge(&self) -> Option<&[f64]> {
        None
    }

    fn label(&self) -> String {
        "custom".to_owned()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EikonalSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OperatorKind {
    Mean,
    PLaplacian { p: f64 },
    PHarmonious { alpha: f64 },
    Infinity,
    Median,
    EikonalPlus,
    EikonalMinus,
    WeightedMean { weights: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Strong,
    Weak,
    NonAveraging,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Strong => "strong",
            Classification::Weak => "weak",
            Classification::NonAveraging => "non-averaging",
        })
    }
}

/// A built-in operator together with the structural constants declared for it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorSpec {
    kind: OperatorKind,
    dim: usize,
    lambda: Option<f64>,
    gauge_lipschitz: Option<Vec<f64>>,
    classification: Classification,
    #[serde(skip)]
    plap: Option<PLaplacian>,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, dim: usize) -> Result<Self> {
        Self::with_root_finder(kind, dim, RootFinderConfig::default())
    }

    pub fn with_root_finder(kind: OperatorKind, dim: usize, cfg: RootFinderConfig) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let unit_gauge = Some(vec![1.0; 2 * dim]);
        let mean_lambda = 1.0 / (2 * dim) as f64;
        let mut plap = None;
        let (lambda, gauge_lipschitz, classification) = match &kind {
            OperatorKind::Mean => (Some(mean_lambda), unit_gauge, Classification::Strong),
            OperatorKind::PLaplacian { p } => {
                plap = Some(PLaplacian::new(dim, *p, cfg)?);
                // Property vi) holds for d <= 2 (and trivially at p = 2).
                let class = if dim <= 2 || *p == 2.0 {
                    Classification::Strong
                } else {
                    Classification::Weak
                };
                (Some(p_laplacian_lambda(dim, *p)), unit_gauge, class)
            }
            OperatorKind::PHarmonious { alpha } => {
                check_alpha(*alpha)?;
                (Some(mean_lambda), unit_gauge, Classification::Strong)
            }
            OperatorKind::Infinity => {
                let class = if dim == 1 {
                    Classification::Strong
                } else {
                    Classification::Weak
                };
                (Some(0.5), unit_gauge, class)
            }
            // With two entries the median is the mean.
            OperatorKind::Median if dim == 1 => (Some(0.5), unit_gauge, Classification::Strong),
            OperatorKind::Median => (None, None, Classification::NonAveraging),
            OperatorKind::EikonalPlus | OperatorKind::EikonalMinus => {
                (None, None, Classification::NonAveraging)
            }
            OperatorKind::WeightedMean { weights } => {
                check_weights(weights, dim)?;
                let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
                let uniform = weights.iter().all(|w| (w - weights[0]).abs() < 1e-15);
                let class = if uniform {
                    Classification::Strong
                } else {
                    Classification::NonAveraging
                };
                (
                    (min > 0.0).then_some(min),
                    unit_gauge,
                    class,
                )
            }
        };
        let spec = Self {
            kind,
            dim,
            lambda,
            gauge_lipschitz,
            classification,
            plap,
        };
        spec.check_lambda_contract()?;
        Ok(spec)
    }

    pub fn mean(dim: usize) -> Result<Self> {
        Self::new(OperatorKind::Mean, dim)
    }

    pub fn p_laplacian(dim: usize, p: f64) -> Result<Self> {
        Self::new(OperatorKind::PLaplacian { p }, dim)
    }

    pub fn p_harmonious(dim: usize, alpha: f64) -> Result<Self> {
        Self::new(OperatorKind::PHarmonious { alpha }, dim)
    }

    pub fn infinity(dim: usize) -> Result<Self> {
        Self::new(OperatorKind::Infinity, dim)
    }

    pub fn median(dim: usize) -> Result<Self> {
        Self::new(OperatorKind::Median, dim)
    }

    pub fn eikonal(dim: usize, sign: EikonalSign) -> Result<Self> {
        let kind = match sign {
            EikonalSign::Plus => OperatorKind::EikonalPlus,
            EikonalSign::Minus => OperatorKind::EikonalMinus,
        };
        Self::new(kind, dim)
    }

    /// Weighted mean; the dimension is half the number of weights.
    pub fn weighted_mean(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || !weights.len().is_multiple_of(2) {
            return Err(Error::InvalidWeights(format!(
                "need an even, nonzero number of weights, got {}",
                weights.len()
            )));
        }
        let dim = weights.len() / 2;
        Self::new(OperatorKind::WeightedMean { weights }, dim)
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn gauge_lipschitz(&self) -> Option<&[f64]> {
        self.gauge_lipschitz.as_deref()
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    fn check_lambda_contract(&self) -> Result<()> {
        let Some(declared) = self.lambda else {
            return Ok(());
        };
        for slot in 0..2 * self.dim {
            let observed = self.eval_unchecked(NeighborValues::unit(self.dim, slot).as_slice())?;
            if observed < declared - LAMBDA_CONTRACT_TOL {
                return Err(Error::LambdaContract {
                    declared,
                    slot: slot + 1,
                    observed,
                });
            }
        }
        Ok(())
    }

    fn eval_unchecked(&self, t: &[f64]) -> Result<f64> {
        Ok(match &self.kind {
            OperatorKind::Mean => mean(t),
            OperatorKind::PLaplacian { .. } => {
                self.plap.as_ref().expect("p-laplacian kernel").eval(t)?
            }
            OperatorKind::PHarmonious { alpha } => p_harmonious(t, *alpha),
            OperatorKind::Infinity => midrange(t),
            OperatorKind::Median => median(t),
            OperatorKind::EikonalPlus => eikonal(t, EikonalSign::Plus),
            OperatorKind::EikonalMinus => eikonal(t, EikonalSign::Minus),
            OperatorKind::WeightedMean { weights } => weighted(t, weights),
        })
    }

    fn check_input(&self, t: &[f64]) -> Result<()> {
        if t.len() != 2 * self.dim {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.dim,
                got: t.len(),
            });
        }
        ensure_finite(t)
    }
}

impl AveragingOperator for OperatorSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: &[f64]) -> Result<f64> {
        self.check_input(t)?;
        self.eval_unchecked(t)
    }

    fn compare(&self, t: &[f64], level: f64) -> Result<Ordering> {
        self.check_input(t)?;
        match &self.plap {
            Some(k) => Ok(k.compare(t, level)),
            None => Ok(self.eval_unchecked(t)?.total_cmp(&level)),
        }
    }

    fn declared_lambda(&self) -> Option<f64> {
        self.lambda
    }

    fn declared_gauge(&self) -> Option<&[f64]> {
        self.gauge_lipschitz.as_deref()
    }

    fn label(&self) -> String {
        match &self.kind {
            OperatorKind::Mean => format!("mean(d={})", self.dim),
            OperatorKind::PLaplacian { p } => format!("p-laplacian(d={}, p={p})", self.dim),
            OperatorKind::PHarmonious { alpha } => {
                format!("p-harmonious(d={}, alpha={alpha})", self.dim)
            }
            OperatorKind::Infinity => format!("infinity(d={})", self.dim),
            OperatorKind::Median => format!("median(d={})", self.dim),
            OperatorKind::EikonalPlus => format!("eikonal-plus(d={})", self.dim),
            OperatorKind::EikonalMinus => format!("eikonal-minus(d={})", self.dim),
            OperatorKind::WeightedMean { weights } => {
                format!("weighted-mean(d={}, weights={weights:?})", self.dim)
            }
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn check_weights(weights: &[f64], dim: usize) -> Result<()> {
    if weights.len() != 2 * dim {
        return Err(Error::InvalidWeights(format!(
            "expected {} weights, got {}",
            2 * dim,
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidWeights(format!("weight {w} is negative or not finite")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

// Slice kernels. Inputs are already validated.

fn mean(t: &[f64]) -> f64 {
    t.iter().sum::<f64>() / t.len() as f64
}

fn midrange(t: &[f64]) -> f64 {
    let (lo, hi) = min_max(t);
    0.5 * (lo + hi)
}

fn p_harmonious(t: &[f64], alpha: f64) -> f64 {
    alpha * midrange(t) + (1.0 - alpha) * mean(t)
}

fn median(t: &[f64]) -> f64 {
    let mut s = t.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len() / 2;
    0.5 * (s[k - 1] + s[k])
}

fn eikonal(t: &[f64], sign: EikonalSign) -> f64 {
    let (lo, hi) = min_max(t);
    match sign {
        EikonalSign::Plus => hi - 1.0,
        EikonalSign::Minus => lo + 1.0,
    }
}

fn weighted(t: &[f64], weights: &[f64]) -> f64 {
    t.iter().zip(weights).map(|(v, w)| v * w).sum()
}

pub fn eval_mean(t: &NeighborValues) -> f64 {
    mean(t.as_slice())
}

pub fn eval_p_laplacian(t: &NeighborValues, p: f64, cfg: &RootFinderConfig) -> Result<f64> {
    PLaplacian::new(t.dim(), p, *cfg)?.eval(t.as_slice())
}

pub fn eval_p_harmonious(t: &NeighborValues, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(p_harmonious(t.as_slice(), alpha))
}

pub fn eval_infinity(t: &NeighborValues) -> f64 {
    midrange(t.as_slice())
}

/// Median of the `2d` entries; for the even count this is the mean of the two
/// middle order statistics.
pub fn eval_median(t: &NeighborValues) -> f64 {
    median(t.as_slice())
}

pub fn eval_eikonal(t: &NeighborValues, sign: EikonalSign) -> f64 {
    eikonal(t.as_slice(), sign)
}

pub fn eval_weighted_mean(t: &NeighborValues, weights: &[f64]) -> Result<f64> {
    check_weights(weights, t.dim())?;
    Ok(weighted(t.as_slice(), weights))
}

/// The game-theoretic weight `alpha = (p - 2) / (p + 2d)` matching a
/// p-laplacian; tends to 1 as `p -> infinity`.
pub fn alpha_from_p(p: f64, dim: usize) -> Result<f64> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::PBelowTwo(p));
    }
    Ok((p - 2.0) / (p + 2.0 * dim as f64))
}

/// `(u(n_1(x)) - u(x), ..., u(n_{2d}(x)) - u(x))`.
pub fn discrete_gradient(u: &GridFunction, x: &[i64]) -> Result<Vec<f64>> {
    let idx = u.lattice().interior_index(x)?;
    let centre = u.values()[idx];
    Ok(u.neighbor_values(idx).into_iter().map(|v| v - centre).collect())
}

/// `F(u(n_1(x)), ..., u(n_{2d}(x))) - u(x)`.
pub fn residual<O: AveragingOperator + ?Sized>(op: &O, u: &GridFunction, x: &[i64]) -> Result<f64> {
    let idx = u.lattice().interior_index(x)?;
    Ok(op.eval(&u.neighbor_values(idx))? - u.values()[idx])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_box, GridFunction};

    fn nv(v: &[f64]) -> NeighborValues {
        NeighborValues::new(v.to_vec()).unwrap()
    }

    #[test]
    fn neighbor_values_validation() {
        assert_eq!(NeighborValues::new(vec![]), Err(Error::OddLength(0)));
        assert_eq!(NeighborValues::new(vec![1.0; 3]), Err(Error::OddLength(3)));
        assert!(matches!(
            NeighborValues::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(matches!(
            NeighborValues::for_dim(vec![1.0; 4], 3),
            Err(Error::DimensionMismatch { expected: 6, got: 4 })
        ));
        assert!(serde_json::from_str::<NeighborValues>("[1.0, 2.0, 3.0]").is_err());
    }

    #[test]
    fn mean_examples() {
        assert_eq!(eval_mean(&nv(&[1.0, 2.0, 3.0, 4.0])), 2.5);
        assert_eq!(eval_mean(&nv(&[1.0, 0.0, 0.0, 0.0])), 0.25);
        assert_eq!(eval_mean(&nv(&[-7.5; 6])), -7.5);
    }

    #[test]
    fn p_laplacian_examples() {
        let cfg = RootFinderConfig::default();
        let v = eval_p_laplacian(&nv(&[0.0, 0.0, 1.0, 0.0]), 3.0, &cfg).unwrap();
        assert!((v - 0.366_025_4).abs() < 1e-7);
        for d in 1..=4 {
            let mut t = vec![0.0; 2 * d];
            t[0] = 1.0;
            t[1] = -1.0;
            for p in [1.3, 2.0, 4.0] {
                assert_eq!(eval_p_laplacian(&nv(&t), p, &cfg).unwrap(), 0.0);
            }
        }
        let v = eval_p_laplacian(&nv(&[1.0, 2.0, 3.0, 4.0]), 2.0, &cfg).unwrap();
        assert!((v - 2.5).abs() < 1e-11);
        assert_eq!(
            eval_p_laplacian(&nv(&[1.0, 2.0]), 0.9, &cfg),
            Err(Error::InvalidP(0.9))
        );
    }

    #[test]
    fn p_harmonious_examples() {
        assert_eq!(eval_p_harmonious(&nv(&[1.0, 0.0, 0.0, 0.0]), 0.5).unwrap(), 0.375);
        let t = nv(&[3.0, -1.0, 0.5, 8.0, 2.0, 2.0]);
        assert!((eval_p_harmonious(&t, 0.0).unwrap() - eval_mean(&t)).abs() < 1e-15);
        assert_eq!(eval_p_harmonious(&nv(&[4.25; 4]), 0.9).unwrap(), 4.25);
        assert_eq!(eval_p_harmonious(&t, 1.0), Err(Error::InvalidAlpha(1.0)));
        assert_eq!(eval_p_harmonious(&t, -0.1), Err(Error::InvalidAlpha(-0.1)));
    }

    #[test]
    fn infinity_examples() {
        assert_eq!(eval_infinity(&nv(&[2.0, 1.0, 0.0, 0.0])), 1.0);
        for eps in [0.01, 0.5, 0.99] {
            assert_eq!(eval_infinity(&nv(&[2.0, 1.0 + eps, 0.0, 0.0])), 1.0);
        }
        assert_eq!(eval_infinity(&nv(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0])), 0.5);
        assert_eq!(eval_infinity(&nv(&[0.3; 6])), 0.3);
    }

    #[test]
    fn median_examples() {
        assert_eq!(eval_median(&nv(&[0.0, 1.0, 0.0, 0.0])), 0.0);
        assert_eq!(eval_median(&nv(&[0.0, 0.0, 1.0, 1.0])), 0.5);
        assert_eq!(eval_median(&nv(&[9.0; 6])), 9.0);
    }

    #[test]
    fn median_even_convention_by_enumeration() {
        // Every ordering of (0, 0, 1, 1) has middle pair (0, 1).
        let base = [0.0, 0.0, 1.0, 1.0];
        let mut seen = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut sorted = idx;
                        sorted.sort();
                        if sorted != [0, 1, 2, 3] {
                            continue;
                        }
                        let t: Vec<f64> = idx.iter().map(|&i| base[i]).collect();
                        assert_eq!(eval_median(&nv(&t)), 0.5);
                        seen += 1;
                    }
                }
            }
        }
        assert_eq!(seen, 24);
    }

    #[test]
    fn eikonal_examples() {
        assert_eq!(eval_eikonal(&nv(&[0.0; 4]), EikonalSign::Plus), -1.0);
        assert_eq!(eval_eikonal(&nv(&[1.0; 4]), EikonalSign::Plus), 0.0);
        assert_eq!(eval_eikonal(&nv(&[3.0, 0.0, 0.0, 0.0]), EikonalSign::Plus), 2.0);
        assert_eq!(eval_eikonal(&nv(&[3.0, 0.0, 0.0, 0.0]), EikonalSign::Minus), 1.0);
    }

    #[test]
    fn weighted_mean_examples() {
        let v = eval_weighted_mean(&nv(&[3.0, 1.0 / 3.0]), &[0.25, 0.75]).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert_eq!(eval_weighted_mean(&nv(&[1.0, 3.0]), &[0.5, 0.5]).unwrap(), 2.0);
        assert_eq!(
            eval_weighted_mean(&nv(&[5.0, 1.0, 1.0, 1.0]), &[1.0, 0.0, 0.0, 0.0]).unwrap(),
            5.0
        );
        assert!(eval_weighted_mean(&nv(&[1.0, 3.0]), &[0.6, 0.6]).is_err());
        assert!(eval_weighted_mean(&nv(&[1.0, 3.0]), &[1.5, -0.5]).is_err());
        assert!(eval_weighted_mean(&nv(&[1.0, 3.0]), &[1.0]).is_err());
    }

    #[test]
    fn alpha_from_p_examples() {
        assert_eq!(alpha_from_p(2.0, 3).unwrap(), 0.0);
        assert!((alpha_from_p(6.0, 2).unwrap() - 0.4).abs() < 1e-15);
        assert!(alpha_from_p(1e12, 2).unwrap() > 1.0 - 1e-11);
        assert_eq!(alpha_from_p(1.5, 2), Err(Error::PBelowTwo(1.5)));
    }

    #[test]
    fn declared_metadata() {
        let m = OperatorSpec::mean(3).unwrap();
        assert_eq!(m.lambda(), Some(1.0 / 6.0));
        assert_eq!(m.classification(), Classification::Strong);

        let p = OperatorSpec::p_laplacian(3, 3.0).unwrap();
        assert_eq!(p.classification(), Classification::Weak);
        assert!((p.lambda().unwrap() - 1.0 / (1.0 + 5f64.sqrt())).abs() < 1e-15);
        assert_eq!(
            OperatorSpec::p_laplacian(2, 3.0).unwrap().classification(),
            Classification::Strong
        );

        assert_eq!(OperatorSpec::infinity(2).unwrap().classification(), Classification::Weak);
        assert_eq!(OperatorSpec::median(2).unwrap().lambda(), None);
        assert_eq!(
            OperatorSpec::eikonal(2, EikonalSign::Plus).unwrap().classification(),
            Classification::NonAveraging
        );
        let w = OperatorSpec::weighted_mean(vec![0.25, 0.75]).unwrap();
        assert_eq!(w.lambda(), Some(0.25));
        assert_eq!(w.classification(), Classification::NonAveraging);
        assert_eq!(
            OperatorSpec::weighted_mean(vec![0.5, 0.5]).unwrap().classification(),
            Classification::Strong
        );
    }

    #[test]
    fn construction_errors() {
        assert_eq!(OperatorSpec::mean(0), Err(Error::ZeroDimension));
        assert!(OperatorSpec::p_laplacian(2, 1.0).is_err());
        assert!(OperatorSpec::p_harmonious(2, 1.0).is_err());
        assert!(OperatorSpec::weighted_mean(vec![0.2, 0.2, 0.2]).is_err());
        let op = OperatorSpec::mean(2).unwrap();
        assert!(matches!(
            op.eval(&[1.0; 6]),
            Err(Error::DimensionMismatch { expected: 4, got: 6 })
        ));
        assert!(matches!(
            op.eval(&[1.0, f64::INFINITY, 0.0, 0.0]),
            Err(Error::NonFinite { index: 1, .. })
        ));
    }

    #[test]
    fn gradient_and_residual() {
        let b = make_box(2, 2).unwrap();
        let u = GridFunction::from_fn(b.clone(), |x| x[0] as f64).unwrap();
        assert_eq!(discrete_gradient(&u, &[0, 1]).unwrap(), vec![1.0, 0.0, -1.0, 0.0]);
        let mean = OperatorSpec::mean(2).unwrap();
        assert_eq!(residual(&mean, &u, &[1, -1]).unwrap(), 0.0);
        assert!(matches!(
            discrete_gradient(&u, &[2, 0]),
            Err(Error::NotInterior(_))
        ));

        let c = GridFunction::from_fn(b, |_| 4.5).unwrap();
        assert_eq!(discrete_gradient(&c, &[0, 0]).unwrap(), vec![0.0; 4]);
        for op in [
            OperatorSpec::p_laplacian(2, 1.5).unwrap(),
            OperatorSpec::infinity(2).unwrap(),
            OperatorSpec::median(2).unwrap(),
        ] {
            assert_eq!(residual(&op, &c, &[1, 1]).unwrap(), 0.0);
        }

        let line = make_box(1, 5).unwrap();
        let g = GridFunction::from_fn(line, |x| 3f64.powi(x[0] as i32)).unwrap();
        let grad = discrete_gradient(&g, &[0]).unwrap();
        assert!((grad[0] - 2.0).abs() < 1e-15 && (grad[1] + 2.0 / 3.0).abs() < 1e-15);
        let w = OperatorSpec::weighted_mean(vec![0.25, 0.75]).unwrap();
        for x in -4..=4 {
            assert!(residual(&w, &g, &[x]).unwrap().abs() < 1e-12);
        }
    }
}
