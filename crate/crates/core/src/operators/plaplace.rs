//! The implicit discrete p-laplacian average.
//!
//! `F_p(t)` is the unique root of `g(s) = sum_i sign(s - t_i) |s - t_i|^(p-1)`.
//! Written in this signed-power form the summand is continuous for every
//! `p > 1`, including `1 < p < 2` where `(s - t_i)|s - t_i|^(p-2)` has an
//! apparent singularity at `s = t_i`. `g` is strictly increasing, negative at
//! `min t_i` and positive at `max t_i`, so a bracketed search on that interval
//! always converges.
//!
//! Inputs are shifted and scaled to the unit bracket `[0, 1]` before solving,
//! which is exact by translation and scaling equivariance and keeps every
//! power below 1 in magnitude. Each evaluation of `g` is further divided by
//! its largest term so that very large exponents cannot underflow the sum to
//! zero. The entries are sorted first, which makes the result bit-for-bit
//! independent of the order of the neighbours.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest ellipticity constant the solver accepts: an absolute floor, raised
/// to a multiple of the bracket tolerance for coarse configurations.
const MIN_LAMBDA: f64 = 1e-9;
const LAMBDA_RESOLUTION_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootFinderConfig {
    /// Iteration stops once the normalized bracket, or the last update, is
    /// this small.
    pub abs_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for RootFinderConfig {
    fn default() -> Self {
        Self {
            abs_tolerance: 1e-14,
            max_iterations: 200,
        }
    }
}

impl RootFinderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tolerance > 0.0) || !self.abs_tolerance.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "abs_tolerance must be positive, got {}",
                self.abs_tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// `x -> x^q` on `[0, 1]`, with exact shortcuts for the common exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Power {
    Linear,
    Sqrt,
    Int(i32),
    Real(f64),
}

impl Power {
    fn new(q: f64) -> Self {
        if q == 1.0 {
            Power::Linear
        } else if q == 0.5 {
            Power::Sqrt
        } else if q.fract() == 0.0 && q <= 16.0 {
            Power::Int(q as i32)
        } else {
            Power::Real(q)
        }
    }

    #[inline]
    fn apply(self, x: f64) -> f64 {
        match self {
            Power::Linear => x,
            Power::Sqrt => x.sqrt(),
            Power::Int(n) => x.powi(n),
            Power::Real(q) => x.powf(q),
        }
    }
}

/// `lambda_p = 1 / (1 + (2d - 1)^(1/(p-1)))`, the value of `F_p` on a unit
/// coordinate vector. Evaluated in log space so tiny `p - 1` gives 0 rather
/// than NaN.
pub fn p_laplacian_lambda(dim: usize, p: f64) -> f64 {
    let branches = (2 * dim - 1) as f64;
    let exponent = branches.ln() / (p - 1.0);
    if exponent > 700.0 {
        0.0
    } else {
        1.0 / (1.0 + exponent.exp())
    }
}

/// A validated p-laplacian kernel for a fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PLaplacian {
    pub p: f64,
    power: Power,
    pub cfg: RootFinderConfig,
}

impl PLaplacian {
    pub fn new(dim: usize, p: f64, cfg: RootFinderConfig) -> Result<Self> {
        cfg.validate()?;
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::InvalidP(p));
        }
        let lambda = p_laplacian_lambda(dim, p);
        let resolution = MIN_LAMBDA.max(LAMBDA_RESOLUTION_FACTOR * cfg.abs_tolerance);
        if p - 1.0 < 1e-6 || lambda < resolution {
            return Err(Error::PTooCloseToOne {
                p,
                dim,
                lambda,
                resolution,
            });
        }
        Ok(Self {
            p,
            power: Power::new(p - 1.0),
            cfg,
        })
    }

    /// Scaled `g(s)`; only its sign is meaningful.
    #[inline]
    fn balance(&self, values: &[f64], s: f64) -> f64 {
        self.balance_and_slope(values, s, false).0
    }

    /// `g(s)` and `g'(s)`, both divided by the same positive factor, so their
    /// ratio is the unscaled Newton correction.
    #[inline]
    fn balance_and_slope(&self, values: &[f64], s: f64, slope: bool) -> (f64, f64) {
        let scale = values
            .iter()
            .fold(0.0f64, |m, &z| m.max((s - z).abs()));
        if scale == 0.0 {
            return (0.0, f64::INFINITY);
        }
        let q = self.p - 1.0;
        let (mut g, mut dg) = (0.0, 0.0);
        for &z in values {
            let x = s - z;
            let ax = x.abs() / scale;
            let m = self.power.apply(ax);
            g += if x < 0.0 { -m } else { m };
            if slope {
                dg += if ax > 0.0 { q * m / ax } else if q < 1.0 { f64::INFINITY } else { 0.0 };
            }
        }
        (g, dg / scale)
    }

    /// Safeguarded Newton iteration on the unit bracket: a Newton step is
    /// taken when it stays inside the current bracket and at least halves the
    /// previous step, otherwise the bracket is bisected. The first iterate is
    /// the midpoint, so symmetric data resolve exactly.
    pub fn eval(&self, t: &[f64]) -> Result<f64> {
        let (lo, hi) = min_max(t);
        if lo == hi {
            return Ok(lo);
        }
        let width = hi - lo;
        let mut z: Vec<f64> = t.iter().map(|&v| (v - lo) / width).collect();
        z.sort_by(f64::total_cmp);
        let tol = self.cfg.abs_tolerance;
        let finish = |s: f64| Ok((lo + width * s).clamp(lo, hi));

        let (mut a, mut b) = (0.0f64, 1.0f64);
        let mut s = 0.5;
        let (mut step, mut prev_step) = (0.5f64, 1.0f64);
        for _ in 0..self.cfg.max_iterations {
            let (g, dg) = self.balance_and_slope(&z, s, true);
            if g == 0.0 {
                return finish(s);
            }
            if g < 0.0 {
                a = s;
            } else {
                b = s;
            }
            if b - a <= tol {
                return finish(0.5 * (a + b));
            }
            let newton = s - g / dg;
            let take_newton = dg.is_finite()
                && dg > 0.0
                && newton > a
                && newton < b
                && (2.0 * g).abs() <= (prev_step * dg).abs();
            prev_step = step;
            let next = if take_newton { newton } else { 0.5 * (a + b) };
            step = (next - s).abs();
            if step <= 0.5 * tol || next == s {
                return finish(next);
            }
            s = next;
        }
        Err(Error::NoConvergence {
            iterations: self.cfg.max_iterations,
            width: (b - a) * width,
        })
    }

    /// Orders `F_p(t)` against `level` from the sign of `g(level)` alone,
    /// without solving for the root.
    pub fn compare(&self, t: &[f64], level: f64) -> Ordering {
        let g = self.balance(t, level);
        if g < 0.0 {
            Ordering::Greater
        } else if g > 0.0 {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

pub(crate) fn min_max(t: &[f64]) -> (f64, f64) {
    t.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}
