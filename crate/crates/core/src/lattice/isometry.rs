use serde::{Deserialize, Serialize};

use super::{GridFunction, LatticeBox};
use crate::error::{Error, Result};

/// A lattice isometry `T(x) = a + R(x)` with `R(e_j) = eps_j e_{pi(j)}`.
///
/// `permutation[j]` is `pi(j)` with 0-based coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometrySpec {
    translation: Vec<i64>,
    signs: Vec<i8>,
    permutation: Vec<usize>,
}

impl IsometrySpec {
    pub fn new(translation: Vec<i64>, signs: Vec<i8>, permutation: Vec<usize>) -> Result<Self> {
        let d = translation.len();
        if d == 0 || signs.len() != d || permutation.len() != d {
            return Err(Error::InvalidIsometry(
                "translation, signs and permutation must all have length d >= 1".into(),
            ));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidIsometry("signs must be +1 or -1".into()));
        }
        let mut seen = vec![false; d];
        for &p in &permutation {
            if p >= d || seen[p] {
                return Err(Error::InvalidIsometry(format!(
                    "{permutation:?} is not a permutation of 0..{d}"
                )));
            }
            seen[p] = true;
        }
        Ok(Self {
            translation,
            signs,
            permutation,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            translation: vec![0; dim],
            signs: vec![1; dim],
            permutation: (0..dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let mut y = self.translation.clone();
        for (j, &c) in x.iter().enumerate() {
            y[self.permutation[j]] += self.signs[j] as i64 * c;
        }
        y
    }
}

/// `v(x) = u(T(x))` for every `x` in `target`.
pub fn apply_isometry(t: &IsometrySpec, u: &GridFunction, target: &LatticeBox) -> Result<GridFunction> {
    if t.dim() != target.dim() || t.dim() != u.lattice().dim() {
        return Err(Error::InvalidIsometry(format!(
            "isometry has dimension {}, boxes have {} and {}",
            t.dim(),
            u.lattice().dim(),
            target.dim()
        )));
    }
    let mut values = Vec::with_capacity(target.len());
    for x in target.points() {
        let y = t.apply(&x);
        match u.get(&y) {
            Some(v) => values.push(v),
            None => return Err(Error::IsometryEscapes { from: x, to: y }),
        }
    }
    GridFunction::new(target.clone(), values)
}
