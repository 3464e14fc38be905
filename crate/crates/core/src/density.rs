//! The upper density functional
//! `D(f) = limsup_N (2N+1)^{-1} Σ_{|n| <= N} |f(n)|` on lattice functions.
//!
//! For periodic `f` the limit exists and equals the mean over one period,
//! which is computed exactly. Other functions only get the finite-`N` mean.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bigmath::to_int;
use crate::gauge::YoungFunctional;
use crate::real::Real;
use crate::{Error, Result};

/// A nonnegative function on the integers.
#[derive(Debug, Clone, PartialEq)]
pub enum LatticeFunction {
    /// `f(n) = value` when `n mod period` equals a listed residue, else 0.
    /// Residues are sorted, distinct and below `period`.
    Periodic {
        period: BigUint,
        support: Vec<(BigUint, Real)>,
    },
    /// Sorted distinct `(n, f(n))` pairs; zero elsewhere.
    FiniteSupport { entries: Vec<(BigInt, Real)> },
}

fn check_value(v: &Real) -> Result<()> {
    if v.compare(&Real::zero()) == Ordering::Less || !v.to_f64().is_finite() {
        return Err(Error::InvalidArgument(format!("lattice values must be finite and >= 0, got {v}")));
    }
    Ok(())
}

impl LatticeFunction {
    pub fn periodic(period: BigUint, mut support: Vec<(BigUint, Real)>) -> Result<Self> {
        if period.is_zero() {
            return Err(Error::InvalidArgument("period must be at least 1".into()));
        }
        support.sort_by(|a, b| a.0.cmp(&b.0));
        for w in support.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("residue {} listed twice", w[0].0)));
            }
        }
        for (r, v) in &support {
            if *r >= period {
                return Err(Error::InvalidArgument(format!("residue {r} not below period {period}")));
            }
            check_value(v)?;
        }
        Ok(LatticeFunction::Periodic { period, support })
    }

    /// A periodic function from its full value table `f(0), …, f(p-1)`.
    pub fn from_table(values: Vec<Real>) -> Result<Self> {
        let period = BigUint::from(values.len());
        let support = values
            .into_iter()
            .enumerate()
            .filter(|(_, v)| *v != Real::zero())
            .map(|(i, v)| (BigUint::from(i), v))
            .collect();
        Self::periodic(period, support)
    }

    pub fn finite_support(mut entries: Vec<(BigInt, Real)>) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("point {} listed twice", w[0].0)));
            }
        }
        for (_, v) in &entries {
            check_value(v)?;
        }
        Ok(LatticeFunction::FiniteSupport { entries })
    }

    pub fn zero() -> Self {
        LatticeFunction::FiniteSupport { entries: Vec::new() }
    }

    pub fn eval(&self, n: &BigInt) -> Real {
        match self {
            LatticeFunction::Periodic { period, support } => {
                let r = n.mod_floor(&to_int(period)).to_biguint().unwrap_or_default();
                support
                    .binary_search_by(|(s, _)| s.cmp(&r))
                    .map(|i| support[i].1.clone())
                    .unwrap_or_else(|_| Real::zero())
            }
            LatticeFunction::FiniteSupport { entries } => entries
                .binary_search_by(|(s, _)| s.cmp(n))
                .map(|i| entries[i].1.clone())
                .unwrap_or_else(|_| Real::zero()),
        }
    }

    /// `Φ ∘ f`, using `Φ(0) = 0` so the support is unchanged.
    pub fn compose(&self, phi: &YoungFunctional) -> LatticeFunction {
        match self {
            LatticeFunction::Periodic { period, support } => LatticeFunction::Periodic {
                period: period.clone(),
                support: support.iter().map(|(r, v)| (r.clone(), phi.eval_real(v))).collect(),
            },
            LatticeFunction::FiniteSupport { entries } => LatticeFunction::FiniteSupport {
                entries: entries.iter().map(|(n, v)| (n.clone(), phi.eval_real(v))).collect(),
            },
        }
    }

    pub fn max_value(&self) -> Real {
        let vals: Vec<&Real> = match self {
            LatticeFunction::Periodic { support, .. } => support.iter().map(|(_, v)| v).collect(),
            LatticeFunction::FiniteSupport { entries } => entries.iter().map(|(_, v)| v).collect(),
        };
        vals.into_iter()
            .fold(Real::zero(), |m, v| if v.compare(&m) == Ordering::Greater { v.clone() } else { m })
    }
}

/// Exact `D(f)` for periodic `f`: the mean over one period.
pub fn exact_density(f: &LatticeFunction) -> Result<Real> {
    match f {
        LatticeFunction::Periodic { period, support } => {
            let total = support.iter().fold(Real::zero(), |acc, (_, v)| acc.add(v));
            Ok(total.div(&Real::from(period)).unwrap_or(Real::zero()))
        }
        LatticeFunction::FiniteSupport { .. } => Err(Error::InvalidArgument(
            "exact density needs a periodic function; use finite_density".into(),
        )),
    }
}

/// `(2N+1)^{-1} Σ_{n=-N}^{N} f(n)`, exact.
pub fn finite_density(f: &LatticeFunction, n: &BigUint) -> Result<Real> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let hi = to_int(n);
    let lo = -hi.clone();
    let width = Real::from(&(n * 2u32 + 1u32));
    let total = match f {
        LatticeFunction::Periodic { period, support } => {
            let p = to_int(period);
            support.iter().fold(Real::zero(), |acc, (r, v)| {
                let r = to_int(r);
                // #{n in [lo, hi] : n ≡ r mod p}
                let c = (&hi - &r).div_floor(&p) - (&lo - BigInt::one() - &r).div_floor(&p);
                acc.add(&v.mul(&Real::from(&c.to_biguint().unwrap_or_default())))
            })
        }
        LatticeFunction::FiniteSupport { entries } => entries
            .iter()
            .filter(|(m, _)| *m >= lo && *m <= hi)
            .fold(Real::zero(), |acc, (_, v)| acc.add(v)),
    };
    Ok(total.div(&width).unwrap_or(Real::zero()))
}

/// `period · max f / (2N+1)`, a bound on `|finite_density - exact_density|`.
pub fn truncation_error_bound(f: &LatticeFunction, n: &BigUint) -> Result<f64> {
    match f {
        LatticeFunction::Periodic { period, .. } => {
            let num = crate::bigmath::ratio_f64(period, &(n * 2u32 + 1u32));
            Ok(num * f.max_value().to_f64())
        }
        LatticeFunction::FiniteSupport { .. } => Err(Error::InvalidArgument(
            "truncation bound needs a periodic function".into(),
        )),
    }
}

/// The fraction of residues `n mod M(u)` whose witness maximal average
/// (see [`crate::averages::shift_maxima`]) is at least `k`. By periodicity
/// this is the density of the shift set.
pub fn density_of_shift_set(shift_maxima: &[f64], k: f64) -> Result<f64> {
    if shift_maxima.is_empty() {
        return Err(Error::InvalidArgument("no shifts to measure".into()));
    }
    let hits = shift_maxima.iter().filter(|&&m| m >= k).count();
    Ok(hits as f64 / shift_maxima.len() as f64)
}
