//! Order-independent seeded sampling and associative reduction.
//!
//! Every sample derives its own generator from `(seed, tag, index)`, so the
//! reduced result does not depend on thread count or scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn sub_seed(seed: u64, tag: u64, index: u64) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ tag) ^ index)
}

pub(crate) fn rng_for(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sub_seed(seed, tag, index))
}

/// Result of one sample: its slack (negative means violated) and, for
/// violations, a description to report.
#[derive(Debug, Clone)]
pub(crate) struct Probe<W> {
    pub slack: f64,
    pub witness: Option<W>,
}

impl<W> Probe<W> {
    pub fn ok(slack: f64) -> Self {
        Self {
            slack,
            witness: None,
        }
    }

    /// Attaches the witness only when the slack is negative.
    pub fn with(slack: f64, witness: impl FnOnce() -> W) -> Self {
        Self {
            slack,
            witness: (slack < 0.0).then(witness),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Tally<W> {
    pub run: usize,
    pub skipped: usize,
    pub worst: Option<f64>,
    /// Lowest-index violation.
    pub witness: Option<(usize, W)>,
}

impl<W> Tally<W> {
    fn empty() -> Self {
        Self {
            run: 0,
            skipped: 0,
            worst: None,
            witness: None,
        }
    }

    fn single(index: usize, probe: Option<Probe<W>>) -> Self {
        match probe {
            None => Self {
                skipped: 1,
                ..Self::empty()
            },
            Some(p) => Self {
                run: 1,
                skipped: 0,
                worst: Some(p.slack),
                witness: p.witness.map(|w| (index, w)),
            },
        }
    }

    fn merge(self, other: Self) -> Self {
        let worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        Self {
            run: self.run + other.run,
            skipped: self.skipped + other.skipped,
            worst,
            witness,
        }
    }
}

/// Runs `f` on `0..count` and reduces. `Ok(None)` from `f` counts as skipped.
pub(crate) fn reduce_samples<W, F>(count: usize, f: F) -> Result<Tally<W>>
where
    W: Send,
    F: Fn(usize) -> Result<Option<Probe<W>>> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count)
            .into_par_iter()
            .map(|i| f(i).map(|p| Tally::single(i, p)))
            .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = Tally::empty();
        for i in 0..count {
            acc = acc.merge(Tally::single(i, f(i)?));
        }
        Ok(acc)
    }
}
