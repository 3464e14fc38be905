//! Step functions on `[0, 1)` with Lebesgue measure.
//!
//! A step function is a finite partition `0 = b_0 < b_1 < … < b_n = 1` and one
//! value per cell `[b_i, b_{i+1})`. Binary operations work on the common
//! refinement of both partitions, so every norm and integral is a finite sum.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Builds a step function from `n + 1` breakpoints and `n` values.
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::InvalidArgument(
                "need n+1 breakpoints for n values".into(),
            ));
        }
        if breaks[0] != 0.0 || *breaks.last().unwrap() != 1.0 {
            return Err(Error::InvalidArgument("partition must span [0,1)".into()));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("values must be finite".into()));
        }
        Ok(StepFunction { breaks, values })
    }

    pub fn constant(c: f64) -> Self {
        StepFunction {
            breaks: vec![0.0, 1.0],
            values: vec![c],
        }
    }

    /// `value · χ_[a, b)`.
    pub fn indicator(a: f64, b: f64, value: f64) -> Result<Self> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidArgument("need 0 <= a < b <= 1".into()));
        }
        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        if a > 0.0 {
            breaks.push(a);
            values.push(0.0);
        }
        breaks.push(b);
        values.push(value);
        if b < 1.0 {
            breaks.push(1.0);
            values.push(0.0);
        }
        StepFunction::new(breaks, values)
    }

    /// Random step function with at most `max_pieces` cells whose breakpoints
    /// sit on the dyadic grid `2^-grid_bits` and whose values are uniform in
    /// `[-amplitude, amplitude]`. Dyadic breakpoints keep all measures exact.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        max_pieces: usize,
        grid_bits: u32,
        amplitude: f64,
    ) -> Self {
        let grid = 1u64 << grid_bits;
        let pieces = rng.random_range(1..=max_pieces.max(1)).min(grid as usize);
        let mut cuts: Vec<u64> = Vec::with_capacity(pieces + 1);
        while cuts.len() < pieces - 1 {
            let c = rng.random_range(1..grid);
            if !cuts.contains(&c) {
                cuts.push(c);
            }
        }
        cuts.sort_unstable();
        let mut breaks = vec![0.0];
        breaks.extend(cuts.iter().map(|&c| c as f64 / grid as f64));
        breaks.push(1.0);
        let values = (0..pieces)
            .map(|_| rng.random_range(-amplitude..=amplitude))
            .collect();
        StepFunction { breaks, values }
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(measure, value)` per cell.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breaks
            .windows(2)
            .zip(self.values.iter())
            .map(|(w, &v)| (w[1] - w[0], v))
    }

    /// Value at `x`, with `x` reduced mod 1.
    pub fn value_at(&self, x: f64) -> f64 {
        let x = x - libm::floor(x);
        let idx = self.breaks.partition_point(|&b| b <= x);
        let idx = idx.saturating_sub(1).min(self.values.len() - 1);
        self.values[idx]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        StepFunction {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Combines two step functions pointwise on the common refinement.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let breaks = refine(&self.breaks, &other.breaks);
        let values = breaks
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                f(self.value_at(mid), other.value_at(mid))
            })
            .collect();
        StepFunction { breaks, values }
    }

    /// Restates the function on a finer partition (which must contain all
    /// current breakpoints).
    pub fn on_partition(&self, breaks: &[f64]) -> Self {
        let values = breaks
            .windows(2)
            .map(|w| self.value_at(0.5 * (w[0] + w[1])))
            .collect();
        StepFunction {
            breaks: breaks.to_vec(),
            values,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn abs(&self) -> Self {
        self.map(libm::fabs)
    }

    pub fn positive_part(&self) -> Self {
        self.map(|v| v.max(0.0))
    }

    pub fn negative_part(&self) -> Self {
        self.map(|v| (-v).max(0.0))
    }

    pub fn integral(&self) -> f64 {
        self.pieces().map(|(m, v)| m * v).sum()
    }

    /// `∫ F(v)` summed cell by cell.
    pub fn integrate_with(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.pieces().map(|(m, v)| m * f(v)).sum()
    }

    /// Measure of `{x : pred(f(x))}`.
    pub fn measure_where(&self, pred: impl Fn(f64) -> bool) -> f64 {
        self.pieces().filter(|&(_, v)| pred(v)).map(|(m, _)| m).sum()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.linf_norm();
        }
        let s: f64 = self.pieces().map(|(m, v)| m * libm::pow(libm::fabs(v), p)).sum();
        libm::pow(s, 1.0 / p)
    }

    pub fn l1_norm(&self) -> f64 {
        self.pieces().map(|(m, v)| m * libm::fabs(v)).sum()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, &v| a.max(libm::fabs(v)))
    }
}

/// Sorted union of two partitions of `[0, 1]`.
pub fn refine(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), Some(&y)) if y < x => {
                j += 1;
                y
            }
            (Some(&x), Some(_)) => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}
