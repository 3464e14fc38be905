//! Ergodic averages `|Λ(N)|^{-1} Σ_{m ∈ Λ(N)} f(T^m x)` along a sequence,
//! maximal averages over finite cutoff sets, and the sweep-out witness.
//!
//! Two systems are built in: the shift `n ↦ n + 1` on `ℤ`, acting on lattice
//! functions, and the rotation by `α = √2 − 1` on `[0, 1)`, acting on step
//! functions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::base_sequence::{BaseSequence, DEFAULT_ENUM_BUDGET};
use crate::bigmath::{big, ratio_f64, to_int};
use crate::construction::{PerturbationPlan, PerturbedSequence};
use crate::density::LatticeFunction;
use crate::real::{Radical, Real};
use crate::step::StepFunction;
use crate::{Error, Result};

/// `√2 − 1` as an unevaluated sum `hi + lo`.
pub const SQRT2_MINUS_1: (f64, f64) = (0.41421356237309503, 1.4349369327986523e-17);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DynamicalSystem {
    IntegerShift,
    /// Rotation `x ↦ x + α mod 1`, with `α = hi + lo`.
    Rotation { alpha: (f64, f64) },
}

impl DynamicalSystem {
    pub fn sqrt2_rotation() -> Self {
        DynamicalSystem::Rotation { alpha: SQRT2_MINUS_1 }
    }
}

/// A function the system acts on, with a starting point.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    Shift { f: LatticeFunction, x: BigInt },
    Rotation { f: StepFunction, x: f64 },
}

/// How an average is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Divide by the number of summed terms, `|Λ(N)|`.
    OwnCount,
    /// Divide by `|S(N)|` for a reference sequence `S`.
    Reference,
}

/// `frac(m α)` for `m < 2^53`, in double-double precision.
pub fn rotation_phase(alpha: (f64, f64), m: &BigUint) -> Result<f64> {
    let a = m
        .to_u64()
        .filter(|&a| a < (1u64 << 53))
        .ok_or_else(|| Error::ResourceLimit(format!("rotation orbit index {m} needs more than 53 bits")))?
        as f64;
    let p = a * alpha.0;
    let e = libm::fma(a, alpha.0, -p);
    let s = (p - libm::floor(p)) + (e + a * alpha.1);
    Ok(s - libm::floor(s))
}

fn guard(n: &BigUint, what: &str) -> Result<()> {
    if *n > big(DEFAULT_ENUM_BUDGET) {
        return Err(Error::ResourceLimit(format!("{n} terms in {what} exceed the enumeration budget")));
    }
    Ok(())
}

/// `Σ_{m ∈ Λ ∩ [1, N)} f(T^m x)`.
pub fn orbit_sum<S: BaseSequence + ?Sized>(seq: &S, obs: &Observation, n: &BigUint, alpha: (f64, f64)) -> Result<Real> {
    let one = BigUint::one();
    match obs {
        Observation::Shift { f, x } => match f {
            LatticeFunction::Periodic { period, support } => {
                let p = to_int(period);
                let mut total = Real::zero();
                for (r, v) in support {
                    // x + m ≡ r  ⇔  m ≡ r − x
                    let cls = (to_int(r) - x).mod_floor(&p).to_biguint().unwrap_or_default();
                    let c = seq.count_class(&one, n, period, &cls)?;
                    total = total.add(&v.mul(&Real::from(&c)));
                }
                Ok(total)
            }
            LatticeFunction::FiniteSupport { entries } => {
                let mut total = Real::zero();
                for (p, v) in entries {
                    let Some(m) = (p - x).to_biguint() else { continue };
                    if m.is_zero() || m >= *n {
                        continue;
                    }
                    if seq.count(&(&m + 1u32)) > seq.count(&m) {
                        total = total.add(v);
                    }
                }
                Ok(total)
            }
        },
        Observation::Rotation { f, x } => {
            guard(&seq.count(n), "the rotation average")?;
            let mut total = 0.0;
            for m in seq.elements_in(&one, n) {
                let y = x + rotation_phase(alpha, &m)?;
                total += f.value_at(y - libm::floor(y));
            }
            Ok(Real::Approx(total))
        }
    }
}

/// The average of `f(T^m x)` over `m ∈ seq(N)`, divided by `|seq(N)|` or by
/// `|reference(N)|`.
pub fn average_along<S: BaseSequence + ?Sized, B: BaseSequence + ?Sized>(
    seq: &S,
    sys: &DynamicalSystem,
    obs: &Observation,
    n: &BigUint,
    norm: Normalization,
    reference: &B,
) -> Result<Real> {
    let alpha = match (sys, obs) {
        (DynamicalSystem::IntegerShift, Observation::Shift { .. }) => (0.0, 0.0),
        (DynamicalSystem::Rotation { alpha }, Observation::Rotation { .. }) => *alpha,
        _ => return Err(Error::InvalidArgument("observation does not match the system".into())),
    };
    let count = match norm {
        Normalization::OwnCount => seq.count(n),
        Normalization::Reference => reference.count(n),
    };
    if count.is_zero() {
        return Err(Error::EmptyPrefix(format!("{n}")));
    }
    let sum = orbit_sum(seq, obs, n, alpha)?;
    Ok(sum.div(&Real::from(&count)).unwrap_or(Real::zero()))
}

/// `max_{N ∈ Λ}` of [`average_along`] with the sequence's own count.
pub fn max_average<S: BaseSequence + ?Sized>(
    seq: &S,
    sys: &DynamicalSystem,
    obs: &Observation,
    cutoffs: &[BigUint],
) -> Result<Real> {
    if cutoffs.is_empty() {
        return Err(Error::InvalidArgument("the cutoff set must be nonempty".into()));
    }
    let mut best: Option<Real> = None;
    for n in cutoffs {
        let a = average_along(seq, sys, obs, n, Normalization::OwnCount, seq)?;
        if best.as_ref().map_or(true, |b| a.compare(b) == Ordering::Greater) {
            best = Some(a);
        }
    }
    Ok(best.unwrap_or(Real::zero()))
}

/// Outcome of [`sweepout_witness`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepoutReport {
    pub u: u32,
    pub modulus: u64,
    /// `min_n max_{k ∈ A_u} |Δ(2n_k)|^{-1} Σ_{m ∈ Δ(2n_k)} F(n + m)`.
    pub achieved: f64,
    /// A shift attaining `achieved`.
    pub worst_shift: u64,
    pub bound: f64,
    /// `⌈R|S(n_k)|⌉ · v >= bound · 4|S(n_k)|` for every `k ∈ A_u`, exactly.
    pub chain_holds: bool,
    pub pass: bool,
    /// The max over `k` for every shift `n = 0, …, M(u) − 1`.
    pub shift_maxima: Vec<f64>,
}

/// `|Δ(2n_k)| <= 4|S(n_k)|` for every `k ∈ A_u`; returns the first `k`
/// where it fails.
pub fn size_condition<S: BaseSequence + ?Sized>(d: &PerturbedSequence<'_, S>, u: u32) -> Result<Option<u64>> {
    for c in d.plan().block_choices(u) {
        let total = d.delta_count(&(&c.n * 2u32))?;
        if total > &c.count_n * 4u32 {
            return Ok(Some(c.k));
        }
    }
    Ok(None)
}

/// Residue histogram mod `modulus` of `Δ ∩ [1, 2n_k)` for each `k ∈ A_u`,
/// fed to `visit(k, histogram, |Δ(2n_k)|)`.
fn block_histograms<S: BaseSequence + ?Sized>(
    d: &PerturbedSequence<'_, S>,
    u: u32,
    modulus: u64,
    mut visit: impl FnMut(u64, &[BigUint], &BigUint),
) -> Result<()> {
    let plan = d.plan();
    let mut extra = vec![BigUint::zero(); modulus as usize];
    let mut j = 0;
    for c in plan.block_choices(u) {
        while j < plan.choices.len() && plan.choices[j].k <= c.k {
            add_extras(d, j, modulus, &mut extra)?;
            j += 1;
        }
        let hi = &c.n * 2u32;
        let mut h = d.base().class_histogram(&hi, modulus)?;
        for (a, b) in h.iter_mut().zip(&extra) {
            *a += b;
        }
        let total = h.iter().fold(BigUint::zero(), |acc, x| acc + x);
        visit(c.k, &h, &total);
    }
    Ok(())
}

/// Adds `|E_j \ S|` per residue class mod `modulus`.
fn add_extras<S: BaseSequence + ?Sized>(
    d: &PerturbedSequence<'_, S>,
    j: usize,
    modulus: u64,
    out: &mut [BigUint],
) -> Result<()> {
    let c = &d.plan().choices[j];
    let e = &c.insertion;
    let m = big(modulus);
    if e.step.is_multiple_of(&m) {
        let r = (&e.first % &m).to_usize().unwrap_or(0);
        out[r] += &e.count - &d.overlaps()[j];
        return Ok(());
    }
    guard(&e.count, "an insertion set")?;
    let s = d.base();
    let mut x = e.first.clone();
    let mut i = BigUint::zero();
    while i < e.count {
        if s.count(&(&x + 1u32)) == s.count(&x) {
            out[(&x % &m).to_usize().unwrap_or(0)] += 1u32;
        }
        x += &e.step;
        i += 1u32;
    }
    Ok(())
}

/// Evaluates the witness `F_u` along `Δ` for every shift in a full residue
/// system mod `M(u)`.
pub fn sweepout_witness<S: BaseSequence + ?Sized>(
    d: &PerturbedSequence<'_, S>,
    u: u32,
    max_modulus: u64,
) -> Result<SweepoutReport> {
    let plan: &PerturbationPlan = d.plan();
    let sched = &plan.schedule;
    if !plan.covers_block(u)? {
        return Err(Error::PreconditionViolation(format!("the plan does not cover block u = {u}")));
    }
    if let Some(k) = size_condition(d, u)? {
        return Err(Error::PreconditionViolation(format!(
            "|Δ(2n_k)| > 4|S(n_k)| at k = {k} in block u = {u}"
        )));
    }
    let witness = sched.witness(u)?;
    let modulus = witness
        .modulus
        .to_u64()
        .filter(|&m| m <= max_modulus)
        .ok_or_else(|| Error::ResourceLimit(format!("M({u}) = {} exceeds the shift cap", witness.modulus)))?;
    let v = witness.value.to_f64();
    let mut best = vec![0.0f64; modulus as usize];
    block_histograms(d, u, modulus, |_, h, total| {
        for (r, b) in best.iter_mut().enumerate() {
            let val = v * ratio_f64(&h[r], total);
            if val > *b {
                *b = val;
            }
        }
    })?;
    // shift n sees the class −n mod M
    let shift_maxima: Vec<f64> = (0..modulus)
        .map(|n| best[((modulus - n % modulus) % modulus) as usize])
        .collect();
    let (worst_shift, achieved) = shift_maxima
        .iter()
        .enumerate()
        .fold((0u64, f64::INFINITY), |acc, (n, &x)| if x < acc.1 { (n as u64, x) } else { acc });
    let bound_r: Radical = sched.sweep_bound(u)?;
    let bound = bound_r.to_f64();
    let r = sched.r(u)?;
    let chain_holds = plan
        .block_choices(u)
        .iter()
        .all(|c| r.scaled_cmp(&Real::from(&c.count_n), &Real::from(&c.insert_count)) != Ordering::Greater);
    Ok(SweepoutReport {
        u,
        modulus,
        achieved,
        worst_shift,
        bound,
        chain_holds,
        pass: chain_holds && achieved >= bound,
        shift_maxima,
    })
}

/// Per-shift maxima for [`crate::density::density_of_shift_set`].
pub fn shift_maxima<S: BaseSequence + ?Sized>(d: &PerturbedSequence<'_, S>, u: u32, max_modulus: u64) -> Result<Vec<f64>> {
    Ok(sweepout_witness(d, u, max_modulus)?.shift_maxima)
}

/// The smallest `u <= max_u` covered by the plan where the size condition
/// holds for all of `A_u`.
pub fn smallest_valid_u<S: BaseSequence + ?Sized>(d: &PerturbedSequence<'_, S>, max_u: u32) -> Result<Option<u32>> {
    for u in 1..=max_u {
        if d.plan().covers_block(u)? && size_condition(d, u)?.is_none() {
            return Ok(Some(u));
        }
    }
    Ok(None)
}
