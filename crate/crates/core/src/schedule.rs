//! Block partition `A_u` of `{0, 1, 2, …}` and the schedule functions
//! `M(u)`, `R(u)`, `g(u)` for the three constructions.
//!
//! | variant    | level `y(u)` | `v(u) = φ^{-1}(y)` | `M(u)`            | `R(u)`                    |
//! |------------|--------------|--------------------|-------------------|---------------------------|
//! | Theorem A  | `u³`         | `φ^{-1}(u³)`       | `⌊v^q / u³⌋`      | `u^{1/q} / v`             |
//! | Theorem B  | `u⁴`         | `2^{g(u)}`         | `⌊v⌋`             | `u^{1/2} / v`             |
//! | Lemma      | `u^{k+1}`    | `2^{g(u)}`         | `⌊v ψ(v)⌋`        | `(u^k / ψ(v))^{1/2} / v`  |
//!
//! with `g(u) = log₂ φ^{-1}(y(u))`. Blocks are consecutive: `A_1` starts at 0
//! and `|A_u| = M(u)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::bigmath::{big, floor_root, rat_from_big, to_int};
use crate::density::LatticeFunction;
use crate::gauge::{Exponent, OrliczGauge, YoungFunctional};
use crate::real::{Radical, Real};
use crate::{Error, Result};

/// Largest `log₂` of a schedule value that is still handled in `f64` when no
/// exact form exists.
const APPROX_LOG2_LIMIT: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    TheoremA { q: Exponent },
    TheoremB,
    Lemma { psi: OrliczGauge, k: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    variant: Variant,
    gauge: OrliczGauge,
    max_bits: u64,
}

/// One block `A_u = [start, start + length)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockIndex {
    pub u: u32,
    pub start: BigUint,
    pub length: BigUint,
}

impl BlockIndex {
    pub fn end(&self) -> BigUint {
        &self.start + &self.length
    }

    pub fn contains(&self, k: &BigUint) -> bool {
        *k >= self.start && *k < self.end()
    }
}

/// `F(n) = v(u)` when `n ≡ 0 (mod M(u))`, else 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessFunction {
    pub u: u32,
    pub modulus: BigUint,
    pub value: Real,
}

impl WitnessFunction {
    pub fn eval(&self, n: &BigInt) -> Real {
        if n.mod_floor(&to_int(&self.modulus)).is_zero() {
            self.value.clone()
        } else {
            Real::zero()
        }
    }

    pub fn to_lattice(&self) -> LatticeFunction {
        LatticeFunction::Periodic {
            period: self.modulus.clone(),
            support: vec![(BigUint::zero(), self.value.clone())],
        }
    }
}

impl Schedule {
    pub const DEFAULT_MAX_BITS: u64 = 1 << 20;

    pub fn theorem_a(gauge: OrliczGauge, q: f64) -> Result<Schedule> {
        if !(q > 1.0) {
            return Err(Error::InvalidArgument(format!("q must exceed 1, got {q}")));
        }
        Ok(Schedule {
            variant: Variant::TheoremA {
                q: Exponent::from_f64(q)?,
            },
            gauge,
            max_bits: Self::DEFAULT_MAX_BITS,
        })
    }

    pub fn theorem_b(gauge: OrliczGauge) -> Schedule {
        Schedule {
            variant: Variant::TheoremB,
            gauge,
            max_bits: Self::DEFAULT_MAX_BITS,
        }
    }

    pub fn lemma(gauge: OrliczGauge, psi: OrliczGauge, k: u32) -> Result<Schedule> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        Ok(Schedule {
            variant: Variant::Lemma { psi, k },
            gauge,
            max_bits: Self::DEFAULT_MAX_BITS,
        })
    }

    /// Caps the bit length of `v(u)` and `M(u)`; larger values raise a
    /// resource-limit error.
    pub fn with_max_bits(mut self, max_bits: u64) -> Schedule {
        self.max_bits = max_bits;
        self
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn gauge(&self) -> &OrliczGauge {
        &self.gauge
    }

    pub fn max_bits(&self) -> u64 {
        self.max_bits
    }

    /// The argument `y(u)` fed to `φ^{-1}`.
    pub fn level(&self, u: u32) -> BigUint {
        let e = match &self.variant {
            Variant::TheoremA { .. } => 3,
            Variant::TheoremB => 4,
            Variant::Lemma { k, .. } => k + 1,
        };
        big(u as u64).pow(e)
    }

    /// `v(u) = φ^{-1}(y(u))`, the witness value.
    pub fn value(&self, u: u32) -> Result<Real> {
        check_u(u)?;
        let y = self.level(u);
        if let Some(v) = self.gauge.exact_inverse(&y, self.max_bits)? {
            return Ok(Real::Exact(v));
        }
        let l = self.gauge.log2_inverse(crate::bigmath::ratio_f64(&y, &BigUint::one()))?;
        if l > APPROX_LOG2_LIMIT || l > self.max_bits as f64 {
            return Err(Error::ResourceLimit(format!(
                "v({u}) has about {l:.0} bits and no exact form"
            )));
        }
        Ok(Real::Approx(libm::exp2(l)))
    }

    /// `g(u) = log₂ v(u)`.
    pub fn g(&self, u: u32) -> Result<f64> {
        check_u(u)?;
        let y = self.level(u);
        self.gauge.log2_inverse(crate::bigmath::ratio_f64(&y, &BigUint::one()))
    }

    /// `g` extended to real `x >= 1`: `log₂ φ^{-1}(y(x))`.
    pub fn g_at(&self, x: f64) -> Result<f64> {
        if !(x >= 1.0) {
            return Err(Error::InvalidArgument(format!("g needs x >= 1, got {x}")));
        }
        let e = match &self.variant {
            Variant::TheoremA { .. } => 3,
            Variant::TheoremB => 4,
            Variant::Lemma { k, .. } => k + 1,
        };
        self.gauge.log2_inverse(libm::pow(x, e as f64))
    }

    /// Block size `M(u)`, at least 1.
    pub fn m(&self, u: u32) -> Result<BigUint> {
        let v = self.value(u)?;
        let uu = big(u as u64);
        let m = match (&self.variant, &v) {
            (Variant::TheoremA { q }, Real::Exact(v)) if q.frac.is_some() => {
                let (a, b) = q.frac.unwrap_or((1, 1));
                let y = num_traits::pow(v.clone(), a as usize) / rat_from_big(&uu.pow(3 * b));
                floor_root(&y, b)
            }
            (Variant::TheoremA { q }, _) => {
                let l = q.value * libm::log2(v.to_f64()) - 3.0 * libm::log2(u as f64);
                approx_floor_pow2(l, u)?
            }
            (Variant::TheoremB, Real::Exact(v)) => floor_rat(v),
            (Variant::TheoremB, _) => approx_floor_pow2(libm::log2(v.to_f64()), u)?,
            (Variant::Lemma { psi, .. }, Real::Exact(v)) => match psi.exact_eval_power(v) {
                Some((p, d)) => floor_root(&(num_traits::pow(v.clone(), d as usize) * p), d),
                None => {
                    let l = libm::log2(v_f64(v)) + libm::log2(psi.eval_real(&Real::Exact(v.clone())).to_f64());
                    approx_floor_pow2(l, u)?
                }
            },
            (Variant::Lemma { psi, .. }, _) => {
                let l = libm::log2(v.to_f64()) + libm::log2(psi.eval_real(&v).to_f64());
                approx_floor_pow2(l, u)?
            }
        };
        if m.is_zero() {
            return Err(Error::NotAdmissible(format!("M({u}) = 0, blocks must be nonempty")));
        }
        if m.bits() > self.max_bits {
            return Err(Error::ResourceLimit(format!(
                "M({u}) has {} bits, cap is {}",
                m.bits(),
                self.max_bits
            )));
        }
        Ok(m)
    }

    /// `R(u)` as a radical with rational radicand whenever possible.
    pub fn r(&self, u: u32) -> Result<Radical> {
        let v = self.value(u)?;
        let uu = Real::from(u as u64);
        Ok(match (&self.variant, &v) {
            (Variant::TheoremA { q }, Real::Exact(_)) if q.frac.is_some() => {
                let (a, b) = q.frac.unwrap_or((1, 1));
                Radical::new(uu.powi(b).div(&v.powi(a)).unwrap_or(Real::zero()), a)
            }
            (Variant::TheoremA { q }, _) => Radical::new(
                Real::Approx(libm::exp2(libm::log2(u as f64) / q.value - libm::log2(v.to_f64()))),
                1,
            ),
            (Variant::TheoremB, _) => Radical::new(uu.div(&v.powi(2)).unwrap_or(Real::zero()), 2),
            (Variant::Lemma { psi, k }, _) => {
                let (p, d) = match &v {
                    Real::Exact(r) => psi
                        .exact_eval_power(r)
                        .map(|(p, d)| (Real::Exact(p), d))
                        .unwrap_or_else(|| (psi.eval_real(&v), 1)),
                    Real::Approx(_) => (psi.eval_real(&v), 1),
                };
                let num = uu.powi(k * d);
                let den = p.mul(&v.powi(2 * d));
                Radical::new(num.div(&den).unwrap_or(Real::zero()), 2 * d)
            }
        })
    }

    /// The sweep-out lower bound `R(u) v(u) / 4`: `u^{1/q}/4`, `u^{1/2}/4`
    /// and `(u^k/ψ(v))^{1/2}/4` for the three variants.
    pub fn sweep_bound(&self, u: u32) -> Result<Radical> {
        let r = self.r(u)?;
        let v = self.value(u)?;
        let scale = v.div(&Real::from(4u64)).unwrap_or(Real::zero()).powi(r.index);
        Ok(Radical::new(r.radicand.mul(&scale), r.index))
    }

    /// The functional `Φ` for which `D(Φ(F_u)) <= 1` is claimed:
    /// `x^q/φ(x)`, `x`, and `x ψ(x)` respectively.
    pub fn density_functional(&self) -> YoungFunctional {
        match &self.variant {
            Variant::TheoremA { q } => YoungFunctional::PowerOverPhi {
                q: *q,
                gauge: self.gauge.clone(),
            },
            Variant::TheoremB => YoungFunctional::Identity,
            Variant::Lemma { psi, .. } => YoungFunctional::XPhi(psi.clone()),
        }
    }

    pub fn block(&self, u: u32) -> Result<BlockIndex> {
        check_u(u)?;
        let mut start = BigUint::zero();
        for j in 1..u {
            start += self.m(j)?;
        }
        Ok(BlockIndex {
            u,
            start,
            length: self.m(u)?,
        })
    }

    /// The block containing `k`, scanning `u = 1, 2, …, max_u`.
    pub fn block_of(&self, k: &BigUint, max_u: u32) -> Result<BlockIndex> {
        let mut start = BigUint::zero();
        for u in 1..=max_u {
            let length = self.m(u)?;
            let end = &start + &length;
            if *k < end {
                return Ok(BlockIndex { u, start, length });
            }
            start = end;
        }
        Err(Error::ResourceLimit(format!("k = {k} lies beyond block u = {max_u}")))
    }

    /// Prefix sums `Σ_{j<=u} M(j)` for `u = 1..=max_u`.
    pub fn prefix_sums(&self, max_u: u32) -> Result<Vec<BigUint>> {
        let mut acc = BigUint::zero();
        let mut out = Vec::with_capacity(max_u as usize);
        for u in 1..=max_u {
            acc += self.m(u)?;
            out.push(acc.clone());
        }
        Ok(out)
    }

    pub fn witness(&self, u: u32) -> Result<WitnessFunction> {
        Ok(WitnessFunction {
            u,
            modulus: self.m(u)?,
            value: self.value(u)?,
        })
    }

    /// Exhaustively checks that `{k mod M(u) : k ∈ A_u}` is every residue
    /// mod `M(u)`. Refuses blocks longer than `max_len`.
    pub fn residue_coverage(&self, u: u32, max_len: u64) -> Result<bool> {
        let b = self.block(u)?;
        let len = b
            .length
            .to_u64()
            .filter(|&l| l <= max_len)
            .ok_or_else(|| {
                Error::ResourceLimit(format!("M({u}) = {} exceeds the scan cap {max_len}", b.length))
            })?;
        let mut seen = vec![false; len as usize];
        let mut k = b.start.clone();
        let mut r = (&k % &b.length).to_u64().unwrap_or(0);
        for _ in 0..len {
            seen[r as usize] = true;
            k += 1u32;
            r += 1;
            if r == len {
                r = 0;
            }
        }
        Ok(seen.into_iter().all(|s| s))
    }
}

fn check_u(u: u32) -> Result<()> {
    if u == 0 {
        Err(Error::InvalidArgument("u must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn floor_rat(v: &BigRational) -> BigUint {
    v.floor().to_integer().to_biguint().unwrap_or_default()
}

fn v_f64(v: &BigRational) -> f64 {
    crate::bigmath::rat_to_f64(v)
}

fn approx_floor_pow2(l: f64, u: u32) -> Result<BigUint> {
    if !(l <= APPROX_LOG2_LIMIT) {
        return Err(Error::ResourceLimit(format!(
            "M({u}) has about {l:.0} bits and no exact form"
        )));
    }
    Ok(Real::Approx(libm::floor(libm::exp2(l))).floor_big().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::ratio;
    use core::cmp::Ordering;

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
    fn m_examples() {
        let a = toy_a();
        assert_eq!(a.m(1).unwrap(), big(1));
        assert_eq!(a.m(2).unwrap(), big(512));
        assert_eq!(a.m(3).unwrap(), big(19683));
        let b = toy_b();
        assert_eq!(b.m(1).unwrap(), big(2));
        assert_eq!(b.m(2).unwrap(), big(65536));
        assert_eq!(b.m(3).unwrap(), BigUint::one() << 81usize);
        let l = toy_lemma();
        assert_eq!(l.m(1).unwrap(), big(2));
        // 16 * 4^(1/3) = 25.39..., 512 * 9^(1/3) = 1065.0029...
        assert_eq!(l.m(2).unwrap(), big(25));
        assert_eq!(l.m(3).unwrap(), big(1065));
    }

    #[test]
    fn r_examples() {
        let a = toy_a();
        assert_eq!(a.r(1).unwrap().to_f64(), 1.0);
        assert!((a.r(2).unwrap().to_f64() - 0.022097086912079608).abs() < 1e-15);
        assert_eq!(a.r(2).unwrap().radicand, Real::from(ratio(2, 4096)));
        let b = toy_b();
        assert!((b.r(2).unwrap().to_f64() - libm::sqrt(2.0) / 65536.0).abs() < 1e-18);
        assert_eq!(b.r(1).unwrap().to_f64(), 0.5);
        let l = toy_lemma();
        let r2 = l.r(2).unwrap();
        assert!(r2.is_exact());
        assert!((r2.to_f64() - 0.070153878019335).abs() < 1e-12);
    }

    #[test]
    fn r_strictly_decreasing_m_nondecreasing() {
        for s in [toy_a(), toy_b(), toy_lemma()] {
            for u in 1..3 {
                assert!(s.r(u + 1).unwrap().to_f64() < s.r(u).unwrap().to_f64());
                assert!(s.m(u + 1).unwrap() >= s.m(u).unwrap());
            }
        }
    }

    #[test]
    fn theorem_b_g_dominates_u_squared() {
        let b = toy_b();
        for u in 1..=6 {
            assert!(b.g(u).unwrap() >= (u * u) as f64);
            assert_eq!(b.g(u).unwrap(), (u as f64).powi(4));
        }
    }

    #[test]
    fn block_of_examples() {
        let a = toy_a();
        assert_eq!(a.block_of(&big(0), 5).unwrap().u, 1);
        let b2 = a.block_of(&big(1), 5).unwrap();
        assert_eq!((b2.u, b2.start.clone(), b2.length.clone()), (2, big(1), big(512)));
        assert_eq!(a.block_of(&big(512), 5).unwrap().u, 2);
        assert_eq!(a.block_of(&big(513), 5).unwrap().u, 3);
        assert!(matches!(a.block_of(&big(10_000_000), 2), Err(Error::ResourceLimit(_))));
        assert_eq!(a.prefix_sums(3).unwrap(), vec![big(1), big(513), big(20196)]);
    }

    #[test]
    fn witness_examples() {
        let w = toy_a().witness(2).unwrap();
        assert_eq!(w.modulus, big(512));
        assert_eq!(w.eval(&BigInt::from(1024)), Real::from(64u64));
        assert_eq!(w.eval(&BigInt::from(-512)), Real::from(64u64));
        assert_eq!(w.eval(&BigInt::from(3)), Real::zero());
        let w = toy_b().witness(1).unwrap();
        assert_eq!((w.modulus, w.value), (big(2), Real::from(2u64)));
    }

    #[test]
    fn sweep_bounds() {
        let b = toy_a().sweep_bound(2).unwrap();
        assert!((b.to_f64() - libm::sqrt(2.0) / 4.0).abs() < 1e-15);
        assert_eq!(b.scaled_cmp(&Real::one(), &Real::from(ratio(1, 4))), Ordering::Greater);
        assert!((toy_b().sweep_bound(3).unwrap().to_f64() - libm::sqrt(3.0) / 4.0).abs() < 1e-15);
        assert!((toy_a().sweep_bound(1).unwrap().to_f64() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn residue_coverage_small_blocks() {
        for u in 1..=3 {
            assert!(toy_a().residue_coverage(u, 1 << 20).unwrap());
            assert!(toy_lemma().residue_coverage(u, 1 << 20).unwrap());
        }
        assert!(toy_b().residue_coverage(3, 1 << 20).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let b = toy_b().with_max_bits(64);
        assert!(b.m(2).is_ok());
        assert!(matches!(b.m(3), Err(Error::ResourceLimit(_))));
        assert!(toy_a().m(0).is_err());
    }

    #[test]
    fn approximate_fallback_for_table_gauge() {
        let g = OrliczGauge::table(vec![(1.0, 1.0), (10.0, 4.0)]).unwrap();
        let s = Schedule::theorem_a(g, 2.0).unwrap();
        assert_eq!(s.m(1).unwrap(), big(1));
        let v = s.value(2).unwrap();
        assert!(!v.is_exact());
        assert!((v.to_f64() - 22.0).abs() < 1e-9);
        // 22^2 / 8 = 60.5
        assert_eq!(s.m(2).unwrap(), big(60));
        assert!(matches!(
            Schedule::theorem_a(OrliczGauge::log_chain(), 2.0).unwrap().m(2),
            Err(Error::ResourceLimit(_))
        ));
    }
}
