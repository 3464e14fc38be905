//! Term-wise and partial-sum checks of the series behind the goodness halves
//! of the three constructions.
//!
//! * Theorem A: `M(u) R(u)^q <= 1/u² + u/v(u)^q`, exact when `v^q` is rational.
//! * Theorem B: `Σ u / 2^{g(u)(p-1)}`, split at `N^α` with
//!   `N = g^{-1}(1/(p-1))`, `α = n/(n-1)`, head `<= N^{2α}`, tail `<= A`.
//! * Lemma: `M(u)(2R(u))^p <= 4 u^k / 2^{g(u)(p-1)}` and the analogous split
//!   with head `<= N^{(k+1)α}`.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::bigmath::{big, to_int};
use crate::real::Real;
use crate::schedule::{Schedule, Variant};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub u: u32,
    pub term: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Polynomial growth fit `c u^n <= g(u) <= C u^n` over the tested range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub n: f64,
    pub c: f64,
    pub big_c: f64,
}

/// The head/tail split of a partial sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitBound {
    pub alpha: f64,
    /// `N = g^{-1}(1/(p-1))`.
    pub split: f64,
    pub head: f64,
    pub head_bound: f64,
    pub tail: f64,
    /// `A = Σ_{r>=1} r^k 2^{-K r}`.
    pub tail_bound: f64,
    /// `K = c/C`.
    pub k_rate: f64,
    /// Every tail term is at most `u^k 2^{-K u}`.
    pub tail_dominated: bool,
}

impl SplitBound {
    pub fn pass(&self) -> bool {
        self.head <= self.head_bound && self.tail <= self.tail_bound && self.tail_dominated
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    pub variant: &'static str,
    pub p: Option<f64>,
    pub rows: Vec<SeriesRow>,
    pub partial_sum: f64,
    /// The bound the partial sum is compared against.
    pub comparison: f64,
    pub split: Option<SplitBound>,
    /// `φ(e^{1/(p-1)})`, for the variants that feed extrapolation.
    pub phi_at_e: Option<f64>,
    pub pass: bool,
}

fn rational_root(r: &BigRational, e: u32) -> Option<BigRational> {
    let root = |n: &BigUint| {
        let x = n.nth_root(e);
        (x.pow(e) == *n).then_some(x)
    };
    let num = root(&r.numer().to_biguint()?)?;
    let den = root(&r.denom().to_biguint()?)?;
    Some(BigRational::new(to_int(&num), to_int(&den)))
}

/// Theorem A: `M(u) R(u)^q <= 1/u² + u/v(u)^q` for `u = 1..=U`.
pub fn theorem_a_series(sched: &Schedule, upto: u32) -> Result<SeriesReport> {
    let Variant::TheoremA { q } = sched.variant() else {
        return Err(Error::InvalidArgument("theorem_a_series needs a Theorem A schedule".into()));
    };
    let mut rows = Vec::with_capacity(upto as usize);
    let (mut partial, mut comparison) = (0.0, 0.0);
    for u in 1..=upto {
        let m = sched.m(u)?;
        let v = sched.value(u)?;
        let vq = match (&v, q.frac) {
            (Real::Exact(x), Some((a, b))) => rational_root(&num_traits::pow(x.clone(), a as usize), b).map(Real::Exact),
            _ => None,
        }
        .unwrap_or_else(|| Real::Approx(libm::exp2(q.value * libm::log2(v.to_f64()))));
        let uu = Real::from(u as u64);
        let u_over = uu.div(&vq).unwrap_or(Real::Approx(f64::INFINITY));
        // R^q = u / v^q
        let term = Real::from(&m).mul(&u_over);
        let bound = Real::from(BigRational::new(1.into(), to_int(&big(u as u64 * u as u64)))).add(&u_over);
        let pass = term.compare(&bound) != Ordering::Greater;
        partial += term.to_f64();
        comparison += bound.to_f64();
        rows.push(SeriesRow {
            u,
            term: term.to_f64(),
            bound: bound.to_f64(),
            pass,
        });
    }
    let pass = rows.iter().all(|r| r.pass) && partial <= comparison;
    Ok(SeriesReport {
        variant: "theorem-a",
        p: None,
        rows,
        partial_sum: partial,
        comparison,
        split: None,
        phi_at_e: None,
        pass,
    })
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::InvalidArgument(format!("p must lie in (1, 2], got {p}")));
    }
    Ok(())
}

/// Fits `g(u) ≈ u^n` by least squares on `log g` against `log u` over
/// `u = 2..=upto`, then takes `c` and `C` as the extreme ratios on `1..=upto`.
pub fn fit_growth(sched: &Schedule, upto: u32) -> Result<GrowthFit> {
    if upto < 3 {
        return Err(Error::InvalidArgument("the growth fit needs at least u = 1..3".into()));
    }
    let pts: Vec<(f64, f64)> = (2..=upto)
        .map(|u| Ok((libm::log(u as f64), libm::log(sched.g(u)?))))
        .collect::<Result<_>>()?;
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / k, sy / k);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx) * (p.0 - mx)));
    let n = num / den;
    // snap to an integer exponent when the fit is that close
    let n = if (n - libm::round(n)).abs() < 1e-9 { libm::round(n) } else { n };
    let (c, big_c) = ratio_range(sched, n, upto)?;
    Ok(GrowthFit { n, c, big_c })
}

fn ratio_range(sched: &Schedule, n: f64, upto: u32) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for u in 1..=upto {
        let r = sched.g(u)? / libm::pow(u as f64, n);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo, hi))
}

/// `N = g^{-1}(y)` by bisection on the real extension of `g`.
pub fn g_inverse(sched: &Schedule, y: f64) -> Result<f64> {
    if sched.g_at(1.0)? >= y {
        return Ok(1.0);
    }
    let mut hi = 2.0;
    while sched.g_at(hi)? < y {
        hi *= 2.0;
        if hi > 1e150 {
            return Err(Error::ResourceLimit("g^{-1} search overflowed".into()));
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sched.g_at(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(hi)
}

/// `Σ_{r>=1} r^k 2^{-K r}`.
pub fn tail_constant(k: u32, rate: f64) -> f64 {
    if !(rate > 0.0) {
        return f64::INFINITY;
    }
    let peak = k as f64 / (rate * core::f64::consts::LN_2);
    let mut total = 0.0;
    let mut r = 1.0f64;
    loop {
        let t = libm::pow(r, k as f64) * libm::exp2(-rate * r);
        total += t;
        if r > peak && t < 1e-18 * total.max(1e-300) {
            break;
        }
        r += 1.0;
        if r > 1e7 {
            return f64::INFINITY;
        }
    }
    total
}

/// `u^k / 2^{g(u)(p-1)}`.
fn series_term(sched: &Schedule, u: u32, k: u32, p: f64) -> Result<f64> {
    Ok(libm::exp2(k as f64 * libm::log2(u as f64) - sched.g(u)? * (p - 1.0)))
}

fn split_bound(sched: &Schedule, p: f64, upto: u32, k: u32, fit: &GrowthFit, terms: &[f64]) -> Result<SplitBound> {
    if !(fit.n > 1.0) {
        return Err(Error::NotAdmissible(format!("g grows like u^{:.3}, the split needs n > 1", fit.n)));
    }
    let alpha = fit.n / (fit.n - 1.0);
    let split = g_inverse(sched, 1.0 / (p - 1.0))?;
    let cut = libm::pow(split, alpha);
    let rate = fit.c / fit.big_c;
    let (mut head, mut tail) = (0.0, 0.0);
    let mut dominated = true;
    for u in 1..=upto {
        let t = terms[(u - 1) as usize];
        if (u as f64) <= cut {
            head += t;
        } else {
            tail += t;
            let dom = libm::pow(u as f64, k as f64) * libm::exp2(-rate * u as f64);
            dominated &= t <= dom * (1.0 + 1e-12);
        }
    }
    Ok(SplitBound {
        alpha,
        split,
        head,
        head_bound: libm::pow(split, (k + 1) as f64 * alpha),
        tail,
        tail_bound: tail_constant(k, rate),
        k_rate: rate,
        tail_dominated: dominated,
    })
}

/// `φ(e^{1/(p-1)})` without overflow.
pub fn phi_at_e(sched: &Schedule, p: f64) -> f64 {
    sched.gauge().eval_at_log2(core::f64::consts::LOG2_E / (p - 1.0))
}

/// Theorem B: `Σ_{u<=U} u / 2^{g(u)(p-1)} <= N^{2α} + A <= φ(e^{1/(p-1)}) + A`.
pub fn theorem_b_series(sched: &Schedule, p: f64, upto: u32) -> Result<SeriesReport> {
    if !matches!(sched.variant(), Variant::TheoremB) {
        return Err(Error::InvalidArgument("theorem_b_series needs a Theorem B schedule".into()));
    }
    check_p(p)?;
    let fit = fit_growth(sched, upto.max(3))?;
    split_report(sched, p, upto, 1, &fit, "theorem-b")
}

fn split_report(sched: &Schedule, p: f64, upto: u32, k: u32, fit: &GrowthFit, variant: &'static str) -> Result<SeriesReport> {
    let terms: Vec<f64> = (1..=upto).map(|u| series_term(sched, u, k, p)).collect::<Result<_>>()?;
    let split = split_bound(sched, p, upto, k, fit, &terms)?;
    let cut = libm::pow(split.split, split.alpha);
    let rows = terms
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let u = i as u32 + 1;
            let bound = if (u as f64) <= cut {
                libm::pow(u as f64, k as f64)
            } else {
                libm::pow(u as f64, k as f64) * libm::exp2(-split.k_rate * u as f64)
            };
            SeriesRow {
                u,
                term: t,
                bound,
                pass: t <= bound * (1.0 + 1e-12),
            }
        })
        .collect::<Vec<_>>();
    let partial: f64 = terms.iter().sum();
    let comparison = split.head_bound + split.tail_bound;
    let phi = phi_at_e(sched, p);
    let pass = rows.iter().all(|r| r.pass) && split.pass() && partial <= comparison;
    Ok(SeriesReport {
        variant,
        p: Some(p),
        rows,
        partial_sum: partial,
        comparison,
        split: Some(split),
        phi_at_e: Some(phi),
        pass,
    })
}

/// The Lemma series: per-term `M(u)(2R(u))^p <= 4 u^k / 2^{g(u)(p-1)}`, and
/// `Σ u^k / 2^{g(u)(p-1)} <= N^{(k+1)α} + A`.
pub fn lemma_series(sched: &Schedule, p: f64, upto: u32) -> Result<SeriesReport> {
    let Variant::Lemma { k, .. } = sched.variant() else {
        return Err(Error::InvalidArgument("lemma_series needs a Lemma schedule".into()));
    };
    let k = *k;
    check_p(p)?;
    let fit = fit_growth(sched, upto.max(3))?;
    let mut rep = split_report(sched, p, upto, k, &fit, "lemma")?;
    let mut rows = Vec::with_capacity(upto as usize);
    for u in 1..=upto {
        let m = match sched.m(u) {
            Ok(m) => m,
            Err(Error::ResourceLimit(_)) => break,
            Err(e) => return Err(e),
        };
        rows.push(cancellation_row(sched, u, k, p, &m)?);
    }
    rep.pass &= rows.iter().all(|r| r.pass);
    rep.rows = rows;
    Ok(rep)
}

/// `M(u)(2R(u))^p` against `4 u^k / 2^{g(u)(p-1)}`; exact at `p = 2`.
fn cancellation_row(sched: &Schedule, u: u32, k: u32, p: f64, m: &BigUint) -> Result<SeriesRow> {
    let r = sched.r(u)?;
    let v = sched.value(u)?;
    let uk = Real::from(&big(u as u64).pow(k));
    if p == 2.0 && r.index % 2 == 0 && r.is_exact() && v.is_exact() {
        // (4 M R²)^d against (4 u^k / v)^d, with R^{2d} the radicand
        let d = r.index / 2;
        let lhs = Real::from(&(m * 4u32)).powi(d).mul(&r.radicand);
        let rhs = uk.mul(&Real::from(4u64)).div(&v).unwrap_or(Real::zero()).powi(d);
        let lhs_f = 4.0 * crate::bigmath::ratio_f64(m, &BigUint::one()) * r.to_f64() * r.to_f64();
        let rhs_f = 4.0 * uk.to_f64() / v.to_f64();
        return Ok(SeriesRow {
            u,
            term: lhs_f,
            bound: rhs_f,
            pass: lhs.compare(&rhs) != Ordering::Greater,
        });
    }
    let log_lhs = libm::log2(crate::bigmath::ratio_f64(m, &BigUint::one())) + p * (1.0 + libm::log2(r.to_f64()));
    let log_rhs = 2.0 + libm::log2(uk.to_f64()) - sched.g(u)? * (p - 1.0);
    Ok(SeriesRow {
        u,
        term: libm::exp2(log_lhs),
        bound: libm::exp2(log_rhs),
        pass: log_lhs <= log_rhs + 1e-12 * log_rhs.abs().max(1.0),
    })
}

/// One member of the fixed-`n` family that replaces the `n → ∞` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedExponentCheck {
    pub n: f64,
    pub alpha: f64,
    pub partial_sum: f64,
    pub bound: f64,
    pub pass: bool,
}

/// For each `n`, takes `c = min g(u)/u^n` over `1..=U` and `C = g(N)/N^n`
/// and checks the Theorem B split with `α(n) = n/(n-1)`.
pub fn fixed_exponent_family(sched: &Schedule, p: f64, upto: u32, exponents: &[f64]) -> Result<Vec<FixedExponentCheck>> {
    check_p(p)?;
    let mut out = Vec::new();
    for &n in exponents {
        let split = g_inverse(sched, 1.0 / (p - 1.0))?;
        let (c, _) = ratio_range(sched, n, upto)?;
        let big_c = sched.g_at(split)? / libm::pow(split, n);
        let fit = GrowthFit { n, c, big_c };
        let rep = split_report(sched, p, upto, 1, &fit, "theorem-b")?;
        out.push(FixedExponentCheck {
            n,
            alpha: n / (n - 1.0),
            partial_sum: rep.partial_sum,
            bound: rep.comparison,
            pass: rep.pass,
        });
    }
    Ok(out)
}

/// `Σ_{u>U} u^k / 2^{g(u)(p-1)}`, summed until the terms vanish.
pub fn tail_beyond(sched: &Schedule, p: f64, upto: u32, k: u32) -> Result<f64> {
    let mut total = 0.0;
    let mut u = upto + 1;
    loop {
        let t = series_term(sched, u, k, p)?;
        total += t;
        if t < 1e-30 || u > upto + 1_000_000 {
            break;
        }
        u += 1;
    }
    Ok(total)
}

/// `2 S_p^{1/p}` against `φ(e^{1/(p-1)}) + A'` with `A' = 2(1 + A)`, the
/// quantity fed to the extrapolation theorem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YanoFeedRow {
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

pub fn yano_feed(sched: &Schedule, p_grid: &[f64], upto: u32) -> Result<Vec<YanoFeedRow>> {
    let mut out = Vec::new();
    for &p in p_grid {
        let rep = theorem_b_series(sched, p, upto)?;
        let a = rep.split.map(|s| s.tail_bound).unwrap_or(f64::INFINITY);
        let lhs = 2.0 * libm::pow(rep.partial_sum, 1.0 / p);
        let rhs = phi_at_e(sched, p) + 2.0 * (1.0 + a);
        out.push(YanoFeedRow { p, lhs, rhs, pass: lhs <= rhs });
    }
    Ok(out)
}

/// `{1 + 1/n : n = 1..=n_max}`.
pub fn p_grid(n_max: u32) -> Vec<f64> {
    (1..=n_max).map(|n| 1.0 + 1.0 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::OrliczGauge;

    fn toy_a() -> Schedule {
        Schedule::theorem_a(OrliczGauge::power(0.5).unwrap(), 2.0).unwrap()
    }

    fn toy_b() -> Schedule {
        Schedule::theorem_b(OrliczGauge::log_power(1.0).unwrap())
    }

    fn toy_lemma() -> Schedule {
        Schedule::lemma(
            OrliczGauge::log_power(1.0).unwrap(),
            OrliczGauge::log_power(1.0 / 3.0).unwrap(),
            1,
        )
        .unwrap()
    }

    #[test]
    fn theorem_a_examples() {
        let rep = theorem_a_series(&toy_a(), 100).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.rows[0].term, 1.0);
        assert_eq!(rep.rows[0].bound, 2.0);
        assert_eq!(rep.rows[1].term, 0.25);
        assert!((rep.rows[1].bound - (0.25 + 2.0 / 4096.0)).abs() < 1e-15);
        let short = theorem_a_series(&toy_a(), 50).unwrap();
        assert!(short.partial_sum <= rep.partial_sum);
        // M(u) R(u)^2 = u^9 · u/u^12 = 1/u²
        let zeta: f64 = (1..=100).map(|u| 1.0 / (u * u) as f64).sum();
        assert!((rep.partial_sum - zeta).abs() < 1e-12);
    }

    #[test]
    fn theorem_b_at_p2() {
        let rep = theorem_b_series(&toy_b(), 2.0, 100).unwrap();
        assert!((rep.partial_sum - 0.500030517578125).abs() < 1e-12);
        let s = rep.split.unwrap();
        assert_eq!(s.alpha, 4.0 / 3.0);
        assert!((s.k_rate - 1.0).abs() < 1e-12);
        assert!((s.tail_bound - 2.0).abs() < 1e-12);
        assert!(rep.pass);
        assert!(rep.partial_sum <= rep.phi_at_e.unwrap() + s.tail_bound);
    }

    #[test]
    fn theorem_b_grid_and_tail() {
        for p in p_grid(20) {
            let rep = theorem_b_series(&toy_b(), p, 100).unwrap();
            assert!(rep.pass, "p = {p}");
            assert!(rep.partial_sum <= rep.phi_at_e.unwrap() + rep.split.unwrap().tail_bound);
        }
        assert!(tail_beyond(&toy_b(), 1.05, 100, 1).unwrap() < 1e-6);
        // exponent -> 0 as p -> 1, so the first term tends to 1
        let near = theorem_b_series(&toy_b(), 1.0 + 1e-9, 3).unwrap();
        assert!((near.rows[0].term - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lemma_examples() {
        let rep = lemma_series(&toy_lemma(), 2.0, 3).unwrap();
        assert!(rep.pass);
        let r2 = &rep.rows[1];
        assert!((r2.term - 0.49215666011518483).abs() < 1e-12);
        assert_eq!(r2.bound, 0.5);
        // u = 1 sits exactly on the bound
        assert_eq!(rep.rows[0].term, rep.rows[0].bound);
        assert!(rep.rows[0].pass);
        let mut last = 0.0;
        for p in p_grid(20) {
            let rep = lemma_series(&toy_lemma(), p, 3).unwrap();
            assert!(rep.pass, "p = {p}");
            assert!(rep.partial_sum >= last);
            last = rep.partial_sum;
        }
    }

    #[test]
    fn fixed_family_and_yano_feed() {
        for row in fixed_exponent_family(&toy_b(), 1.1, 100, &[2.0, 4.0, 8.0]).unwrap() {
            assert!(row.pass, "{row:?}");
        }
        for row in yano_feed(&toy_b(), &p_grid(20), 100).unwrap() {
            assert!(row.pass, "{row:?}");
        }
    }

    #[test]
    fn tail_constant_closed_form() {
        // Σ r x^r = x/(1-x)^2
        for rate in [0.5, 1.0, 2.0] {
            let x = libm::exp2(-rate);
            assert!((tail_constant(1, rate) - x / ((1.0 - x) * (1.0 - x))).abs() < 1e-12);
        }
        assert!(tail_constant(1, 0.0).is_infinite());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(theorem_b_series(&toy_b(), 1.0, 10).is_err());
        assert!(theorem_b_series(&toy_b(), 2.5, 10).is_err());
        assert!(theorem_b_series(&toy_a(), 2.0, 10).is_err());
        assert!(theorem_a_series(&toy_b(), 10).is_err());
        assert_eq!(g_inverse(&toy_b(), 16.0).unwrap(), 2.0);
    }

    #[test]
    fn rational_roots() {
        let r = BigRational::new(8.into(), 27.into());
        assert_eq!(rational_root(&r, 3), Some(BigRational::new(2.into(), 3.into())));
        assert_eq!(rational_root(&r, 2), None);
    }
}
