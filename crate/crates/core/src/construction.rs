//! Interval selection and the perturbed sequence `Δ = S ∪ ⋃ E_k`.
//!
//! For each `k` the search walks density-record points `m` of `S` and sets
//! `n_k = ⌊m/2⌋`, taking the first `m` at which every constraint holds:
//!
//! * the record ratio `|S(m)|/m <= 1/(R M)`,
//! * disjointness `n_k > 2 n_{k-1}`,
//! * capacity `n_k > R |S(n_k)| M` and the fit `n_k >= c_k M` with
//!   `c_k = ⌈R |S(n_k)|⌉`,
//! * the three-fold bound `|S(2 n_k)| <= 3 |S(n_k)|`,
//! * the predecessor bound `R |S(n_k)| > Σ_{j<k} |S(n_j)|`,
//! * the slack bound `Σ_{j<=k} c_j < 2 R |S(n_k)|`.
//!
//! `E_k` holds the `c_k` smallest members of the class `k mod M(u)` in
//! `[n_k, 2 n_k)`, stored as an arithmetic progression.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::base_sequence::{BaseSequence, DEFAULT_ENUM_BUDGET};
use crate::bigmath::{big, floor_root, rat_from_big, ratio_f64};
use crate::real::{Radical, Real};
use crate::schedule::Schedule;
use crate::{Error, Result};

/// Limits for [`select_intervals`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Record points examined per interval before giving up.
    pub step_budget: u64,
    /// Largest block index the plan may enter.
    pub max_u: u32,
    /// Largest bit length allowed for `n_k`.
    pub max_bits: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            step_budget: 100_000,
            max_u: 16,
            max_bits: 1 << 16,
        }
    }
}

/// `{first, first + step, …}` with `count` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionSet {
    pub first: BigUint,
    pub step: BigUint,
    pub count: BigUint,
}

impl InsertionSet {
    pub fn last(&self) -> Option<BigUint> {
        if self.count.is_zero() {
            None
        } else {
            Some(&self.first + &self.step * (&self.count - 1u32))
        }
    }

    /// Number of terms below `n`.
    pub fn count_below(&self, n: &BigUint) -> BigUint {
        if *n <= self.first {
            return BigUint::zero();
        }
        let k = (n - &self.first - 1u32) / &self.step + 1u32;
        k.min(self.count.clone())
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        *x >= self.first
            && (x - &self.first).is_multiple_of(&self.step)
            && (x - &self.first) / &self.step < self.count
    }

    /// The terms in `[lo, hi)`.
    pub fn elements_in(&self, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
        let a = self.count_below(lo);
        let b = self.count_below(hi);
        let mut out = Vec::new();
        let mut i = a;
        while i < b {
            out.push(&self.first + &self.step * &i);
            i += 1u32;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalChoice {
    pub k: u64,
    pub u: u32,
    pub n: BigUint,
    /// `M(u)`.
    pub modulus: BigUint,
    /// `k mod M(u)`.
    pub residue: BigUint,
    /// `c_k = ⌈R(u) |S(n_k)|⌉`.
    pub insert_count: BigUint,
    /// `|S(n_k)|`.
    pub count_n: BigUint,
    pub insertion: InsertionSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationPlan {
    pub schedule: Schedule,
    pub base_name: String,
    pub choices: Vec<IntervalChoice>,
}

/// Outcome of one exact constraint check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    pub k: u64,
    pub name: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

pub const DISJOINT: &str = "disjointness";
pub const RECORD_RATIO: &str = "record ratio";
pub const CAPACITY: &str = "capacity";
pub const FIT: &str = "insertion fit";
pub const THREEFOLD: &str = "three-fold count";
pub const PREDECESSOR: &str = "predecessor sum";
pub const SLACK: &str = "insertion slack";

/// Smallest `c` with `r·c > t`.
fn min_count_above(r: &Radical, t: &BigUint) -> BigUint {
    let mut c = match &r.radicand {
        Real::Exact(x) if !x.is_zero() => {
            let y = rat_from_big(&t.pow(r.index)) / x;
            floor_root(&y, r.index)
        }
        _ => Real::Approx(ratio_f64(t, &BigUint::one()) / r.to_f64())
            .floor_big()
            .unwrap_or_default(),
    };
    let above = |c: &BigUint| r.scaled_cmp(&Real::from(c), &Real::from(t)) == Ordering::Greater;
    for _ in 0..8 {
        if above(&c) {
            break;
        }
        c += 1u32;
    }
    for _ in 0..8 {
        if c.is_zero() || !above(&(&c - 1u32)) {
            break;
        }
        c -= 1u32;
    }
    c
}

struct Context<'a, S: ?Sized> {
    s: &'a S,
    r: Radical,
    m_u: BigUint,
    prev_n: Option<BigUint>,
    sum_counts: BigUint,
    sum_inserts: BigUint,
}

enum Verdict {
    Accept { count_n: BigUint, insert: BigUint },
    Reject { name: &'static str, next_m: BigUint },
}

impl<S: BaseSequence + ?Sized> Context<'_, S> {
    /// First `m` whose half has at least `c` elements of `S` below it.
    fn m_for_count(&self, c: &BigUint) -> BigUint {
        if c.is_zero() {
            return big(2);
        }
        match self.s.nth(c) {
            Some(a) => (a + 1u32) * 2u32,
            None => big(2),
        }
    }

    fn check(&self, m: &BigUint) -> Verdict {
        let n = m >> 1usize;
        let next = m + 1u32;
        let r = &self.r;
        let rm = |x: &BigUint| Real::from(&(x * &self.m_u));
        if n.is_zero() {
            return Verdict::Reject { name: PREDECESSOR, next_m: big(2).max(next) };
        }
        let count_m = self.s.count(m);
        if r.scaled_cmp(&rm(&count_m), &Real::from(m)) == Ordering::Greater {
            let need = r.ceil_times(&(&count_m * &self.m_u));
            return Verdict::Reject { name: RECORD_RATIO, next_m: need.max(next) };
        }
        if let Some(p) = &self.prev_n {
            let lo = p * 2u32;
            if n <= lo {
                return Verdict::Reject { name: DISJOINT, next_m: ((lo + 1u32) * 2u32).max(next) };
            }
        }
        let count_n = self.s.count(&n);
        let more = self.m_for_count(&(&count_n + 1u32)).max(next.clone());
        if r.scaled_cmp(&Real::from(&count_n), &Real::from(&self.sum_counts)) != Ordering::Greater {
            let need = self.m_for_count(&min_count_above(r, &self.sum_counts));
            return Verdict::Reject { name: PREDECESSOR, next_m: need.max(more) };
        }
        if r.scaled_cmp(&rm(&count_n), &Real::from(&n)) != Ordering::Less {
            let need = r.ceil_times(&(&count_n * &self.m_u)) * 2u32;
            return Verdict::Reject { name: CAPACITY, next_m: need.max(next) };
        }
        let insert = r.ceil_times(&count_n);
        if n < &insert * &self.m_u {
            let need = &insert * &self.m_u * 2u32;
            return Verdict::Reject { name: FIT, next_m: need.max(next) };
        }
        if self.s.count(&(&n * 2u32)) > &count_n * 3u32 {
            return Verdict::Reject { name: THREEFOLD, next_m: next };
        }
        let total = &self.sum_inserts + &insert;
        if r.scaled_cmp(&Real::from(&(&count_n * 2u32)), &Real::from(&total)) != Ordering::Greater {
            return Verdict::Reject { name: SLACK, next_m: more };
        }
        Verdict::Accept { count_n, insert }
    }
}

/// Chooses `n_0, …, n_{k_max}`.
pub fn select_intervals<S: BaseSequence + ?Sized>(
    s: &S,
    sched: &Schedule,
    k_max: u64,
    cfg: &SearchConfig,
) -> Result<Vec<IntervalChoice>> {
    let mut out: Vec<IntervalChoice> = Vec::new();
    let mut sum_counts = BigUint::zero();
    let mut sum_inserts = BigUint::zero();
    for k in 0..=k_max {
        let block = sched.block_of(&big(k), cfg.max_u)?;
        let ctx = Context {
            s,
            r: sched.r(block.u)?,
            m_u: block.length.clone(),
            prev_n: out.last().map(|c| c.n.clone()),
            sum_counts: sum_counts.clone(),
            sum_inserts: sum_inserts.clone(),
        };
        let mut m = ctx.m_for_count(&min_count_above(&ctx.r, &sum_counts));
        if let Some(p) = &ctx.prev_n {
            m = m.max((p * 2u32 + 1u32) * 2u32);
        }
        let mut last_failed = "density record search";
        let mut chosen = None;
        for _ in 0..cfg.step_budget {
            if m.bits() > cfg.max_bits + 1 {
                break;
            }
            let Some(rec) = s.next_record(&m, cfg.step_budget)? else {
                break;
            };
            match ctx.check(&rec) {
                Verdict::Accept { count_n, insert } => {
                    chosen = Some((rec >> 1usize, count_n, insert));
                    break;
                }
                Verdict::Reject { name, next_m } => {
                    last_failed = name;
                    m = next_m;
                }
            }
        }
        let Some((n, count_n, insert)) = chosen else {
            return Err(Error::SearchBudgetExhausted {
                k,
                constraint: last_failed.into(),
            });
        };
        let residue = big(k) % &block.length;
        let offset = (&residue + &block.length - (&n % &block.length)) % &block.length;
        let insertion = InsertionSet {
            first: &n + offset,
            step: block.length.clone(),
            count: insert.clone(),
        };
        sum_counts += &count_n;
        sum_inserts += &insert;
        out.push(IntervalChoice {
            k,
            u: block.u,
            n,
            modulus: block.length,
            residue,
            insert_count: insert,
            count_n,
            insertion,
        });
    }
    Ok(out)
}

/// Selects the intervals and wraps them in a plan.
pub fn build_plan<S: BaseSequence + ?Sized>(
    s: &S,
    sched: &Schedule,
    k_max: u64,
    cfg: &SearchConfig,
) -> Result<PerturbationPlan> {
    let choices = select_intervals(s, sched, k_max, cfg)?;
    Ok(PerturbationPlan {
        schedule: sched.clone(),
        base_name: s.name(),
        choices,
    })
}

impl PerturbationPlan {
    pub fn k_max(&self) -> Option<u64> {
        self.choices.last().map(|c| c.k)
    }

    /// `2 n_{k_max}`, the end of the last interval.
    pub fn horizon(&self) -> BigUint {
        self.choices.last().map(|c| &c.n * 2u32).unwrap_or_default()
    }

    /// The choices whose `k` lies in block `u`.
    pub fn block_choices(&self, u: u32) -> Vec<&IntervalChoice> {
        self.choices.iter().filter(|c| c.u == u).collect()
    }

    /// Whether every `k` of block `u` has an interval.
    pub fn covers_block(&self, u: u32) -> Result<bool> {
        let b = self.schedule.block(u)?;
        let have = big(self.block_choices(u).len() as u64);
        Ok(have == b.length && self.choices.len() as u64 >= b.end().to_u64().unwrap_or(u64::MAX))
    }

    /// Re-checks every selection constraint exactly, plus the shape of `E_k`.
    pub fn verify_constraints<S: BaseSequence + ?Sized>(&self, s: &S) -> Result<Vec<ConstraintCheck>> {
        let mut out = Vec::new();
        let mut sum_counts = BigUint::zero();
        let mut sum_inserts = BigUint::zero();
        let mut prev: Option<&BigUint> = None;
        for c in &self.choices {
            let r = self.schedule.r(c.u)?;
            let m_u = self.schedule.m(c.u)?;
            let count_n = s.count(&c.n);
            let row = |name, lhs: String, rhs: String, pass| ConstraintCheck { k: c.k, name, lhs, rhs, pass };
            out.push(row(
                DISJOINT,
                format!("{}", c.n),
                format!("{}", prev.map(|p| p * 2u32).unwrap_or_default()),
                prev.map_or(true, |p| c.n > p * 2u32),
            ));
            let m = &c.n * 2u32;
            let count_m = s.count(&m);
            let rec = r.scaled_cmp(&Real::from(&(&count_m * &m_u)), &Real::from(&m));
            out.push(row(
                RECORD_RATIO,
                format!("{:e}", r.to_f64() * ratio_f64(&(&count_m * &m_u), &BigUint::one())),
                format!("{m}"),
                rec != Ordering::Greater,
            ));
            let cap = r.scaled_cmp(&Real::from(&(&count_n * &m_u)), &Real::from(&c.n));
            out.push(row(
                CAPACITY,
                format!("{}", c.n),
                format!("{:e}", r.to_f64() * ratio_f64(&(&count_n * &m_u), &BigUint::one())),
                cap == Ordering::Less,
            ));
            let c2 = s.count(&(&c.n * 2u32));
            out.push(row(THREEFOLD, format!("{c2}"), format!("{}", &count_n * 3u32), c2 <= &count_n * 3u32));
            let pred = r.scaled_cmp(&Real::from(&count_n), &Real::from(&sum_counts));
            out.push(row(
                PREDECESSOR,
                format!("{:e}", r.to_f64() * ratio_f64(&count_n, &BigUint::one())),
                format!("{sum_counts}"),
                pred == Ordering::Greater,
            ));
            let insert = r.ceil_times(&count_n);
            let e = &c.insertion;
            let shape_ok = insert == c.insert_count
                && count_n == c.count_n
                && e.count == insert
                && e.step == m_u
                && c.modulus == m_u
                && c.residue == big(c.k) % &m_u
                && e.first >= c.n
                && &e.first % &m_u == c.residue
                && e.first < &c.n + &m_u
                && e.last().map_or(true, |l| l < &c.n * 2u32);
            out.push(row(FIT, format!("{}", e.count), format!("{insert}"), shape_ok));
            sum_inserts += &insert;
            let slack = r.scaled_cmp(&Real::from(&(&count_n * 2u32)), &Real::from(&sum_inserts));
            out.push(row(
                SLACK,
                format!("{sum_inserts}"),
                format!("{:e}", 2.0 * r.to_f64() * ratio_f64(&count_n, &BigUint::one())),
                slack == Ordering::Greater,
            ));
            sum_counts += &count_n;
            prev = Some(&c.n);
        }
        Ok(out)
    }
}

/// `Δ` as a sequence: `S` merged with the insertion sets of a plan.
pub struct PerturbedSequence<'a, S: ?Sized> {
    base: &'a S,
    plan: &'a PerturbationPlan,
    /// `|E_k ∩ S|` per choice.
    overlaps: Vec<BigUint>,
}

impl<'a, S: BaseSequence + ?Sized> PerturbedSequence<'a, S> {
    pub fn new(base: &'a S, plan: &'a PerturbationPlan) -> Result<Self> {
        let mut overlaps = Vec::with_capacity(plan.choices.len());
        for c in &plan.choices {
            overlaps.push(overlap_below(base, &c.insertion, None)?);
        }
        Ok(PerturbedSequence { base, plan, overlaps })
    }

    pub fn base(&self) -> &S {
        self.base
    }

    pub fn plan(&self) -> &PerturbationPlan {
        self.plan
    }

    /// `|E_k ∩ S|` for every `k`.
    pub fn overlaps(&self) -> &[BigUint] {
        &self.overlaps
    }

    /// `|(Δ \ S) ∩ [1, n)|`, from the insertion descriptors.
    pub fn extra_count(&self, n: &BigUint) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for (c, ov) in self.plan.choices.iter().zip(&self.overlaps) {
            let e = &c.insertion;
            if *n <= e.first {
                break;
            }
            let below = e.count_below(n);
            let inside = if e.last().map_or(true, |l| l < *n) {
                ov.clone()
            } else {
                overlap_below(self.base, e, Some(n))?
            };
            total += below - inside;
        }
        Ok(total)
    }

    /// `|Δ ∩ [1, n)|`.
    pub fn delta_count(&self, n: &BigUint) -> Result<BigUint> {
        Ok(self.base.count(n) + self.extra_count(n)?)
    }

    /// `|Δ(n) \ S| / |S(n)|`.
    pub fn perturbation_ratio(&self, n: &BigUint) -> Result<BigRational> {
        let cs = self.base.count(n);
        if cs.is_zero() {
            return Err(Error::DivisionByZero(format!("|S({n})| = 0")));
        }
        Ok(BigRational::new(
            rat_from_big(&self.extra_count(n)?).to_integer(),
            rat_from_big(&cs).to_integer(),
        ))
    }

    /// The elements of `Δ \ S` in `[lo, hi)`, ascending.
    pub fn extra_elements_in(&self, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
        let mut out = Vec::new();
        for c in &self.plan.choices {
            for x in c.insertion.elements_in(lo, hi) {
                if self.base.count(&(&x + 1u32)) == self.base.count(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Checkpoints `n_{k+1} - 1` with the block `u` of `k`.
    pub fn checkpoints(&self) -> Vec<(u64, u32, BigUint)> {
        self.plan
            .choices
            .windows(2)
            .map(|w| (w[0].k, w[0].u, &w[1].n - 1u32))
            .collect()
    }
}

/// `|E ∩ S ∩ [1, hi)|` (all of `E` when `hi` is `None`).
fn overlap_below<S: BaseSequence + ?Sized>(s: &S, e: &InsertionSet, hi: Option<&BigUint>) -> Result<BigUint> {
    let Some(last) = e.last() else {
        return Ok(BigUint::zero());
    };
    let mut end = last + 1u32;
    if let Some(h) = hi {
        end = end.min(h.clone());
    }
    if end <= e.first {
        return Ok(BigUint::zero());
    }
    s.count_class(&e.first, &end, &e.step, &(&e.first % &e.step))
}

impl<S: BaseSequence + ?Sized> BaseSequence for PerturbedSequence<'_, S> {
    fn name(&self) -> String {
        format!("perturbed {}", self.base.name())
    }

    fn declared_zero_density(&self) -> bool {
        self.base.declared_zero_density()
    }

    fn count(&self, n: &BigUint) -> BigUint {
        self.delta_count(n).unwrap_or_else(|_| self.base.count(n))
    }

    fn nth(&self, index: &BigUint) -> Option<BigUint> {
        if index.is_zero() {
            return None;
        }
        // smallest x with count(x + 1) >= index
        let mut hi = BigUint::one();
        while self.count(&(&hi + 1u32)) < *index {
            hi <<= 1usize;
            if hi.bits() > 1 << 20 {
                return None;
            }
        }
        let mut lo = BigUint::one();
        while lo < hi {
            let mid = (&lo + &hi) >> 1usize;
            if self.count(&(&mid + 1u32)) >= *index {
                hi = mid;
            } else {
                lo = mid + 1u32;
            }
        }
        Some(lo)
    }

    fn elements_in(&self, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
        let mut v = self.base.elements_in(lo, hi);
        for c in &self.plan.choices {
            v.extend(c.insertion.elements_in(lo, hi));
        }
        v.sort();
        v.dedup();
        v
    }

    fn count_class(&self, lo: &BigUint, hi: &BigUint, modulus: &BigUint, residue: &BigUint) -> Result<BigUint> {
        let base = self.base.count_class(lo, hi, modulus, residue)?;
        let r = residue % modulus;
        let extra = self
            .extra_elements_in(lo, hi)
            .into_iter()
            .filter(|x| x % modulus == r)
            .count();
        Ok(base + big(extra as u64))
    }

    fn class_histogram(&self, hi: &BigUint, modulus: u64) -> Result<Vec<BigUint>> {
        let mut h = self.base.class_histogram(hi, modulus)?;
        let one = BigUint::one();
        let extra = self.extra_elements_in(&one, hi);
        if extra.len() as u64 > DEFAULT_ENUM_BUDGET {
            return Err(Error::ResourceLimit("too many inserted elements to histogram".into()));
        }
        for x in extra {
            let r = (x % modulus).to_u64().unwrap_or(0) as usize;
            h[r] += 1u32;
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_sequence::{Squares, SyntheticBlocks};
    use crate::gauge::OrliczGauge;

    fn toy_a() -> Schedule {
        Schedule::theorem_a(OrliczGauge::power(0.5).unwrap(), 2.0).unwrap()
    }

    fn toy_b() -> Schedule {
        Schedule::theorem_b(OrliczGauge::log_power(1.0).unwrap())
    }

    fn brute_delta(s: &dyn BaseSequence, plan: &PerturbationPlan, hi: u64) -> Vec<u64> {
        let mut v: Vec<u64> = s.elements_in(&big(1), &big(hi)).iter().map(|x| x.to_u64().unwrap()).collect();
        for c in &plan.choices {
            let e = &c.insertion;
            let mut x = e.first.to_u64().unwrap();
            for _ in 0..e.count.to_u64().unwrap() {
                if x < hi {
                    v.push(x);
                }
                x += e.step.to_u64().unwrap();
            }
        }
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn first_interval_toy_a() {
        let plan = build_plan(&Squares, &toy_a(), 0, &SearchConfig::default()).unwrap();
        let c = &plan.choices[0];
        assert_eq!((c.u, c.n.clone(), c.insert_count.clone()), (1, big(2), big(1)));
        assert_eq!(c.insertion.elements_in(&big(0), &big(100)), alloc::vec![big(2)]);
    }

    #[test]
    fn toy_a_plan_satisfies_constraints() {
        let plan = build_plan(&Squares, &toy_a(), 6, &SearchConfig::default()).unwrap();
        for chk in plan.verify_constraints(&Squares).unwrap() {
            assert!(chk.pass, "{chk:?}");
        }
        for c in &plan.choices[1..] {
            assert_eq!(c.u, 2);
            let n = &c.n;
            // ⌊√(2n−1)⌋ <= 3⌊√(n−1)⌋
            assert!((n * 2u32 - 1u32).sqrt() <= (n - 1u32).sqrt() * 3u32);
        }
    }

    #[test]
    fn toy_b_plan_matches_brute_force() {
        let plan = build_plan(&SyntheticBlocks, &toy_b(), 1, &SearchConfig::default()).unwrap();
        // n = 3 fails the slack bound: |E_0| = 1 is not below 2 R(1) |S(3)| = 1
        assert_eq!(plan.choices[0].n, big(24));
        assert_eq!(plan.choices[0].insertion.first, big(24));
        let d = PerturbedSequence::new(&SyntheticBlocks, &plan).unwrap();
        let hi = plan.horizon().to_u64().unwrap();
        let brute = brute_delta(&SyntheticBlocks, &plan, hi + 1);
        for n in 1..=hi {
            let want = brute.iter().filter(|&&x| x < n).count() as u64;
            assert_eq!(d.delta_count(&big(n)).unwrap(), big(want), "n = {n}");
        }
    }

    #[test]
    fn budget_exhaustion_names_constraint() {
        let cfg = SearchConfig { step_budget: 1, ..SearchConfig::default() };
        let err = build_plan(&Squares, &toy_a(), 3, &cfg).unwrap_err();
        assert!(matches!(err, Error::SearchBudgetExhausted { .. }));
        let cfg = SearchConfig { max_bits: 12, ..SearchConfig::default() };
        assert!(matches!(
            build_plan(&Squares, &toy_a(), 3, &cfg),
            Err(Error::SearchBudgetExhausted { .. })
        ));
    }

    #[test]
    fn ratio_examples() {
        let plan = build_plan(&Squares, &toy_a(), 2, &SearchConfig::default()).unwrap();
        let d = PerturbedSequence::new(&Squares, &plan).unwrap();
        assert!(d.perturbation_ratio(&big(1)).is_err());
        assert!(d.perturbation_ratio(&big(2)).unwrap().is_zero());
        for (_, u, n) in d.checkpoints() {
            let r = plan.schedule.r(u).unwrap();
            let ratio = d.perturbation_ratio(&n).unwrap();
            let two_r = Radical::new(r.radicand.mul(&Real::from(2u64).powi(r.index)), r.index);
            assert_ne!(two_r.scaled_cmp(&Real::one(), &Real::Exact(ratio)), Ordering::Less);
        }
    }

    #[test]
    fn insertion_set_counting() {
        let e = InsertionSet { first: big(10), step: big(3), count: big(4) };
        assert_eq!(e.last(), Some(big(19)));
        assert_eq!(e.count_below(&big(10)), big(0));
        assert_eq!(e.count_below(&big(11)), big(1));
        assert_eq!(e.count_below(&big(17)), big(3));
        assert_eq!(e.count_below(&big(100)), big(4));
        assert!(e.contains(&big(16)) && !e.contains(&big(22)) && !e.contains(&big(11)));
        assert_eq!(e.elements_in(&big(12), &big(20)), alloc::vec![big(13), big(16), big(19)]);
    }
}
