use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{make_box, GridFunction};
use crate::operators::{eval_p_laplacian, AveragingOperator, NeighborValues, OperatorSpec, RootFinderConfig};

const IDENTITY_TOL: f64 = 1e-9;
const GEOMETRIC_TOL: f64 = 1e-12;
const GEOMETRIC_RADIUS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleCase {
    PSmallD3,
    PLargeD3,
    Weighted1d,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub case: CounterexampleCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Admissible upper end for `gamma` in the large-p case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// The neighbour vector, or for the weighted case the values `r^x` on
    /// `B_8`.
    pub vector: Vec<f64>,
    /// `|F(vector) - 1|`, or the largest relative residual of `r^x`.
    pub identity_residual: f64,
    /// The arithmetic mean of slots 3 onwards, or the neighbour ratio `r`.
    pub violation: f64,
    pub violated: bool,
    pub inequality: String,
}

fn p_laplacian_identity(vector: &[f64], p: f64) -> Result<f64> {
    let t = NeighborValues::new(vector.to_vec())?;
    Ok((eval_p_laplacian(&t, p, &RootFinderConfig::default())? - 1.0).abs())
}

fn mean_of_rest(vector: &[f64]) -> f64 {
    vector[2..].iter().sum::<f64>() / (vector.len() - 2) as f64
}

/// `d = 3`, `1 < p < 2`: with `G = 2^(1/(p-1))` the vector
/// `(G, 1/G, 1/G, 1/G, 1/G, G)` has `F_p = 1` while the mean of its last four
/// entries, `(3/G + G) / 4`, exceeds 1.
pub fn counterexample_p_small(p: f64) -> Result<CounterexampleRecord> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::Precondition(format!("p-small case needs 1 < p < 2, got {p}")));
    }
    let g = 2f64.powf(1.0 / (p - 1.0));
    let vector = vec![g, 1.0 / g, 1.0 / g, 1.0 / g, 1.0 / g, g];
    let residual = p_laplacian_identity(&vector, p)?;
    if residual > IDENTITY_TOL {
        return Err(Error::NotHarmonic {
            residual,
            tolerance: IDENTITY_TOL,
        });
    }
    let mean = mean_of_rest(&vector);
    let violated = mean > 1.0;
    Ok(CounterexampleRecord {
        case: CounterexampleCase::PSmallD3,
        p: Some(p),
        gamma: Some(g),
        gamma_bound: None,
        t: None,
        a: None,
        r: None,
        inequality: if violated {
            format!("mean of slots 3..6 = {mean} > 1")
        } else {
            format!("mean of slots 3..6 = {mean} <= 1: no violation at this p")
        },
        vector,
        identity_residual: residual,
        violation: mean,
        violated,
    })
}

/// `(2 - 3^(2-p))^(1/(p-1))`, the largest gamma for the `p > 2` construction.
pub fn p_large_gamma_bound(p: f64) -> f64 {
    (2.0 - 3f64.powf(2.0 - p)).powf(1.0 / (p - 1.0))
}

/// `d = 3`, `p > 2`: for `1 < G <= bound(p)` and
/// `t = (G - 1) / 3^(1/(p-1)) * (2 / G^(p-1) - 1)^(1/(p-1))` the vector
/// `(G, 1/G, 1/G, 1+t, 1+t, 1+t)` has `F_p = 1`; its last four entries
/// average above 1 strictly inside the range and exactly 1 at the bound.
pub fn counterexample_p_large(p: f64, gamma: f64) -> Result<CounterexampleRecord> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(Error::Precondition(format!("p-large case needs p > 2, got {p}")));
    }
    let bound = p_large_gamma_bound(p);
    if !(gamma > 1.0 && gamma <= bound) {
        return Err(Error::Precondition(format!(
            "gamma = {gamma} is outside the admissible range (1, {bound}] for p = {p}"
        )));
    }
    let q = p - 1.0;
    let t = (gamma - 1.0) / 3f64.powf(1.0 / q) * (2.0 / gamma.powf(q) - 1.0).powf(1.0 / q);
    if 1.0 + t > gamma {
        return Err(Error::Precondition(format!(
            "1 + t = {} exceeds gamma = {gamma}",
            1.0 + t
        )));
    }
    let vector = vec![gamma, 1.0 / gamma, 1.0 / gamma, 1.0 + t, 1.0 + t, 1.0 + t];
    let residual = p_laplacian_identity(&vector, p)?;
    if residual > IDENTITY_TOL {
        return Err(Error::NotHarmonic {
            residual,
            tolerance: IDENTITY_TOL,
        });
    }
    let mean = mean_of_rest(&vector);
    let violated = mean > 1.0;
    Ok(CounterexampleRecord {
        case: CounterexampleCase::PLargeD3,
        p: Some(p),
        gamma: Some(gamma),
        gamma_bound: Some(bound),
        t: Some(t),
        a: None,
        r: None,
        inequality: if violated {
            format!("mean of slots 3..6 = {mean} > 1")
        } else {
            format!("mean of slots 3..6 = {mean} <= 1: no violation at this gamma")
        },
        vector,
        identity_residual: residual,
        violation: mean,
        violated,
    })
}

/// `d = 1`, `F(t) = a t_+ + (1 - a) t_-` with slot 1 the `+e_1` neighbour:
/// `u(x) = r^x` with `r = (1 - a) / a` is a positive, nonconstant
/// F-harmonic function on `Z` whenever `a != 1/2`.
pub fn weighted_geometric_solution(a: f64) -> Result<CounterexampleRecord> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Precondition(format!("weight a must lie in (0, 1), got {a}")));
    }
    if a == 0.5 {
        return Err(Error::Precondition(
            "a = 1/2 is the symmetric mean; its only geometric solution is constant".into(),
        ));
    }
    let r = (1.0 - a) / a;
    let op = OperatorSpec::weighted_mean(vec![a, 1.0 - a])?;
    let lattice = make_box(1, GEOMETRIC_RADIUS)?;
    let u = GridFunction::from_fn(lattice.clone(), |x| r.powi(x[0] as i32))?;
    let mut residual = 0.0f64;
    for x in lattice.points().filter(|x| lattice.is_interior(x)) {
        let here = u.get(&x).expect("point of the box");
        let f = op.eval(&u.neighbor_values_at(&x)?)?;
        residual = residual.max((f - here).abs() / here);
    }
    if residual > GEOMETRIC_TOL {
        return Err(Error::NotHarmonic {
            residual,
            tolerance: GEOMETRIC_TOL,
        });
    }
    Ok(CounterexampleRecord {
        case: CounterexampleCase::Weighted1d,
        p: None,
        gamma: None,
        gamma_bound: None,
        t: None,
        a: Some(a),
        r: Some(r),
        vector: u.values().to_vec(),
        identity_residual: residual,
        violation: r,
        violated: r != 1.0,
        inequality: format!("u(x) = {r}^x is positive and F-harmonic with neighbour ratio {r} != 1"),
    })
}

/// Whether `(G + 1/G) / 2 <= 1` up to `1e-12`, which by AM-GM forces
/// `G = 1`.
pub fn infinity_gamma_identity(gamma: f64) -> bool {
    gamma.is_finite() && gamma > 0.0 && 0.5 * (gamma + 1.0 / gamma) <= 1.0 + 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_small_golden_values() {
        let r = counterexample_p_small(1.5).unwrap();
        assert_eq!(r.gamma, Some(4.0));
        assert!((r.violation - 1.1875).abs() < 1e-15);
        assert!(r.violated && r.identity_residual <= 1e-9);

        let r = counterexample_p_small(1.2).unwrap();
        assert!((r.gamma.unwrap() - 32.0).abs() < 1e-9);
        assert!((r.violation - (32.0 + 3.0 / 32.0) / 4.0).abs() < 1e-9);

        let r = counterexample_p_small(1.99).unwrap();
        assert!(!r.violated);
        assert!(counterexample_p_small(2.0).is_err());
    }

    #[test]
    fn p_large_cases() {
        let r = counterexample_p_large(3.0, 1.1).unwrap();
        let t = 0.1 / 3f64.sqrt() * (2.0 / 1.21 - 1.0f64).sqrt();
        assert!((r.t.unwrap() - t).abs() < 1e-15);
        assert!(r.violation > 1.012 && r.violated);

        let bound = p_large_gamma_bound(3.0);
        assert!((bound - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let edge = counterexample_p_large(3.0, bound).unwrap();
        assert!((edge.violation - 1.0).abs() < 1e-6);

        assert!(matches!(counterexample_p_large(3.0, 1.4), Err(Error::Precondition(_))));
        assert!(counterexample_p_large(1.5, 1.1).is_err());
    }

    #[test]
    fn weighted_geometric() {
        let r = weighted_geometric_solution(0.25).unwrap();
        assert_eq!(r.r, Some(3.0));
        assert!(r.identity_residual <= 1e-12);
        assert_eq!(r.vector.len(), 17);
        let r = weighted_geometric_solution(0.75).unwrap();
        assert!((r.r.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(weighted_geometric_solution(0.5).is_err());
    }

    #[test]
    fn infinity_identity() {
        assert!(infinity_gamma_identity(1.0));
        assert!(!infinity_gamma_identity(1.01));
        assert!(!infinity_gamma_identity(2.0));
    }
}
