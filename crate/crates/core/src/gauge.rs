//! Orlicz gauges `φ`, the Young functionals built from them, and the modular
//! integral on step functions.
//!
//! Every gauge satisfies `φ(x) = 1` for `x <= 1`, is nondecreasing, strictly
//! increasing past [`OrliczGauge::flat_until`], and unbounded. Logarithms are
//! base 2 throughout, so inverses of the log-power gauges at integer levels
//! are exact powers of two.
//!
//! The logarithmic gauges cannot be strictly increasing on all of `(1, ∞)`
//! while also equal to `(log₂ x)^j` on their natural range; they stay at 1 up
//! to `flat_until` (2 for log-power, 4 for log-log). The inverse is the
//! right-continuous one, `φ^{-1}(y) = sup{x : φ(x) <= y}`.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::bigmath::to_int;
use crate::real::Real;
use crate::step::StepFunction;
use crate::{Error, Result};

/// A positive rational exponent with its `f64` value. `num`/`den` are `None`
/// when the float has no small exact fraction, in which case exact
/// evaluation is unavailable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    pub value: f64,
    pub frac: Option<(u32, u32)>,
}

impl Exponent {
    pub fn new(num: u32, den: u32) -> Exponent {
        assert!(num > 0 && den > 0);
        let g = num_integer::gcd(num, den);
        Exponent {
            value: num as f64 / den as f64,
            frac: Some((num / g, den / g)),
        }
    }

    /// Recovers a fraction with denominator at most 1000 when it reproduces
    /// `x` exactly as an `f64`.
    pub fn from_f64(x: f64) -> Result<Exponent> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidArgument("exponent must be positive".into()));
        }
        for den in 1u32..=1000 {
            let num = libm::round(x * den as f64);
            if num >= 1.0 && num < u32::MAX as f64 && num / den as f64 == x {
                return Ok(Exponent::new(num as u32, den));
            }
        }
        Ok(Exponent { value: x, frac: None })
    }

    pub fn integer(&self) -> Option<u32> {
        match self.frac {
            Some((n, 1)) => Some(n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GaugeKind {
    /// `x^a` for `x > 1`.
    Power { a: Exponent },
    /// `(log₂ x)^j` for `x > 2`.
    LogPower { j: Exponent },
    /// `log₂ log₂ x` for `x > 4`.
    LogLog,
    /// The iterated-log chain `1 + log₂ x` on `[1,2)`, `2 + log₂log₂ x` on
    /// `[2,4)`, `3 + log₂log₂log₂ x` on `[4,16)`, and so on; equivalently
    /// `φ(x) = 1 + φ(log₂ x)` for `x >= 2`. Grows slower than any iterated log.
    LogChain,
    /// Piecewise-linear through the given points, starting at `(1, 1)` and
    /// continued past the last point with the last slope.
    Table { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrliczGauge {
    kind: GaugeKind,
}

const BISECT_REL_TOL: f64 = 1e-12;

impl OrliczGauge {
    pub fn power(a: f64) -> Result<Self> {
        Ok(OrliczGauge {
            kind: GaugeKind::Power {
                a: Exponent::from_f64(a)?,
            },
        })
    }

    pub fn log_power(j: f64) -> Result<Self> {
        Ok(OrliczGauge {
            kind: GaugeKind::LogPower {
                j: Exponent::from_f64(j)?,
            },
        })
    }

    pub fn log_log() -> Self {
        OrliczGauge {
            kind: GaugeKind::LogLog,
        }
    }

    pub fn log_chain() -> Self {
        OrliczGauge {
            kind: GaugeKind::LogChain,
        }
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 || points[0] != (1.0, 1.0) {
            return Err(Error::InvalidArgument(
                "table gauge needs at least two points starting at (1, 1)".into(),
            ));
        }
        if points
            .windows(2)
            .any(|w| !(w[0].0 < w[1].0 && w[0].1 < w[1].1) || !w[1].1.is_finite())
        {
            return Err(Error::InvalidArgument(
                "table gauge points must be strictly increasing in x and y".into(),
            ));
        }
        Ok(OrliczGauge {
            kind: GaugeKind::Table { points },
        })
    }

    pub fn kind(&self) -> &GaugeKind {
        &self.kind
    }

    /// Largest `x` with `φ(x) = 1`.
    pub fn flat_until(&self) -> f64 {
        match self.kind {
            GaugeKind::LogPower { .. } => 2.0,
            GaugeKind::LogLog => 4.0,
            _ => 1.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 1.0 {
            return 1.0;
        }
        match &self.kind {
            GaugeKind::Power { a } => libm::pow(x, a.value),
            GaugeKind::LogPower { j } => {
                if x <= 2.0 {
                    1.0
                } else {
                    libm::pow(libm::log2(x), j.value)
                }
            }
            GaugeKind::LogLog => {
                if x <= 4.0 {
                    1.0
                } else {
                    libm::log2(libm::log2(x))
                }
            }
            GaugeKind::LogChain => chain_eval_log2(libm::log2(x)),
            GaugeKind::Table { points } => table_eval(points, x),
        }
    }

    /// `φ(2^t)`, usable when `2^t` overflows `f64`.
    pub fn eval_at_log2(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        match &self.kind {
            GaugeKind::Power { a } => libm::exp2(a.value * t),
            GaugeKind::LogPower { j } => {
                if t <= 1.0 {
                    1.0
                } else {
                    libm::pow(t, j.value)
                }
            }
            GaugeKind::LogLog => {
                if t <= 2.0 {
                    1.0
                } else {
                    libm::log2(t)
                }
            }
            GaugeKind::LogChain => chain_eval_log2(t),
            GaugeKind::Table { .. } => self.eval(libm::exp2(t)),
        }
    }

    /// Right-continuous inverse `sup{x : φ(x) <= y}` for `y >= 1`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 1.0) {
            return Err(Error::InvalidArgument("gauge inverse needs y >= 1".into()));
        }
        Ok(match &self.kind {
            GaugeKind::Power { a } => libm::pow(y, 1.0 / a.value),
            GaugeKind::Table { points } => table_inverse(points, y),
            _ => libm::exp2(self.log2_inverse(y)?),
        })
    }

    /// `log₂ φ^{-1}(y)`, finite even when `φ^{-1}(y)` overflows `f64`.
    pub fn log2_inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 1.0) {
            return Err(Error::InvalidArgument("gauge inverse needs y >= 1".into()));
        }
        Ok(match &self.kind {
            GaugeKind::Power { a } => libm::log2(y) / a.value,
            GaugeKind::LogPower { j } => libm::pow(y, 1.0 / j.value),
            GaugeKind::LogLog => libm::exp2(y),
            GaugeKind::LogChain => chain_inverse_log2(y),
            GaugeKind::Table { points } => libm::log2(table_inverse(points, y)),
        })
    }

    /// Exact `φ^{-1}(y)` for an integer level `y >= 1`, when it is rational.
    /// Fails with a resource-limit error when the exact value would need more
    /// than `max_bits` bits.
    pub fn exact_inverse(&self, y: &BigUint, max_bits: u64) -> Result<Option<BigRational>> {
        if y.is_zero() {
            return Err(Error::InvalidArgument("gauge inverse needs y >= 1".into()));
        }
        let too_big = |bits: u64| {
            Error::ResourceLimit(alloc::format!(
                "exact gauge inverse needs {bits} bits, cap is {max_bits}"
            ))
        };
        match &self.kind {
            GaugeKind::Power { a } => {
                let Some((n, d)) = a.frac else { return Ok(None) };
                let bits = y.bits().saturating_mul(d as u64) / n as u64;
                if bits > max_bits {
                    return Err(too_big(bits));
                }
                Ok(exact_root(&y.pow(d), n).map(|r| BigRational::from_integer(to_int(&r))))
            }
            GaugeKind::LogPower { j } => {
                let Some((n, d)) = j.frac else { return Ok(None) };
                // t = y^(d/n) must be an integer
                let Some(t) = exact_root(&y.pow(d), n) else { return Ok(None) };
                let t = t.to_u64().filter(|&t| t <= max_bits).ok_or_else(|| too_big(u64::MAX))?;
                Ok(Some(pow2(t)))
            }
            GaugeKind::LogLog => {
                let y = y.to_u64().filter(|&y| y < 64).ok_or_else(|| too_big(u64::MAX))?;
                let t = 1u64 << y;
                if t > max_bits {
                    return Err(too_big(t));
                }
                Ok(Some(pow2(t)))
            }
            GaugeKind::LogChain | GaugeKind::Table { .. } => Ok(None),
        }
    }

    /// Exact `φ(x)` for a rational `x`, when it is rational.
    pub fn exact_eval(&self, x: &BigRational) -> Option<BigRational> {
        let one = BigRational::one();
        if *x <= one {
            return Some(one);
        }
        match &self.kind {
            GaugeKind::Power { a } => {
                let (n, d) = a.frac?;
                let xn = num_traits::pow(x.clone(), n as usize);
                let num = exact_root(&xn.numer().to_biguint()?, d)?;
                let den = exact_root(&xn.denom().to_biguint()?, d)?;
                Some(BigRational::new(to_int(&num), to_int(&den)))
            }
            GaugeKind::LogPower { j } => {
                let (n, d) = j.frac?;
                let t = exact_log2(x)?;
                if t <= 1 {
                    return Some(one);
                }
                let r = exact_root(&BigUint::from(t).pow(n), d)?;
                Some(BigRational::from_integer(to_int(&r)))
            }
            GaugeKind::LogLog => {
                let t = exact_log2(x)?;
                if t <= 2 {
                    return Some(one);
                }
                if !t.is_power_of_two() {
                    return None;
                }
                Some(BigRational::from_integer(t.trailing_zeros().into()))
            }
            GaugeKind::LogChain | GaugeKind::Table { .. } => None,
        }
    }

    /// `(φ(x)^d, d)` with `φ(x)^d` rational, for gauges whose value at `x` is
    /// a `d`-th root of a rational (power and log-power gauges with a
    /// fractional exponent).
    pub fn exact_eval_power(&self, x: &BigRational) -> Option<(BigRational, u32)> {
        let one = BigRational::one();
        if *x <= one {
            return Some((one, 1));
        }
        match &self.kind {
            GaugeKind::Power { a } => {
                let (n, d) = a.frac?;
                Some((num_traits::pow(x.clone(), n as usize), d))
            }
            GaugeKind::LogPower { j } => {
                let (n, d) = j.frac?;
                let t = exact_log2(x)?;
                if t <= 1 {
                    return Some((one, 1));
                }
                Some((BigRational::from_integer(to_int(&BigUint::from(t).pow(n))), d))
            }
            _ => self.exact_eval(x).map(|v| (v, 1)),
        }
    }

    /// `φ(x)` as a [`Real`], exact when both `x` and the value are rational.
    pub fn eval_real(&self, x: &Real) -> Real {
        if let Real::Exact(r) = x {
            if let Some(v) = self.exact_eval(r) {
                return Real::Exact(v);
            }
        }
        let f = x.to_f64();
        if f.is_finite() {
            Real::Approx(self.eval(f))
        } else {
            Real::Approx(self.eval_at_log2(x.ln() / core::f64::consts::LN_2))
        }
    }

    /// Sampled check of `φ(x) << x^q`: `φ(x)/x^q` is nonincreasing along a
    /// log-spaced grid on `[flat_until, 10^9]` and ends below its start.
    /// This is a declared attribute validated on samples, not a proof.
    pub fn sampled_power_domination(&self, q: f64) -> bool {
        let ratios: Vec<f64> = sample_grid(self.flat_until())
            .map(|x| self.eval(x) / libm::pow(x, q))
            .collect();
        nonincreasing_and_drops(&ratios)
    }

    /// Sampled check of `φ(x) << (log₂ x)^j`: the ratio is nonincreasing on
    /// the upper half of the grid `[10^4.5, 10^9]`.
    pub fn sampled_log_domination(&self, j: f64) -> bool {
        let ratios: Vec<f64> = sample_grid(libm::pow(10.0, 4.5))
            .map(|x| self.eval(x) / libm::pow(libm::log2(x), j))
            .collect();
        ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
    }

    /// Smallest grid point past which `eval(x) > bound`; witnesses unboundedness.
    pub fn unbounded_witness(&self, bound: f64) -> Result<f64> {
        let target = bound.max(1.0) + 1.0;
        let l2 = self.log2_inverse(target)?;
        if l2 > 1000.0 {
            return Err(Error::ResourceLimit(
                "witness for this bound exceeds the f64 range".into(),
            ));
        }
        Ok(libm::exp2(l2) * (1.0 + 1e-9))
    }
}

/// Log-spaced grid from `start` to `10^9`, 8 points per decade.
pub fn sample_grid(start: f64) -> impl Iterator<Item = f64> {
    let lo = libm::log10(start.max(1.0));
    let steps = libm::ceil((9.0 - lo) * 8.0) as usize;
    (1..=steps).map(move |i| libm::pow(10.0, lo + (9.0 - lo) * i as f64 / steps as f64))
}

fn nonincreasing_and_drops(r: &[f64]) -> bool {
    r.len() >= 2
        && r.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
        && r.last() < r.first()
}

fn pow2(t: u64) -> BigRational {
    BigRational::from_integer(num_bigint::BigInt::one() << (t as usize))
}

fn exact_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    (r.pow(k) == *n).then_some(r)
}

fn exact_log2(x: &BigRational) -> Option<u64> {
    if !x.is_integer() {
        return None;
    }
    let n = x.numer().to_biguint()?;
    let t = n.bits().checked_sub(1)?;
    (n == BigUint::one() << (t as usize)).then_some(t)
}

/// `φ(2^t)` for the chain, using `φ(x) = 1 + h(log₂ x)` where `h(s) = s` on
/// `[0, 1)` and `h = φ` on `[1, ∞)`.
fn chain_eval_log2(mut t: f64) -> f64 {
    let mut acc = 0.0;
    loop {
        if t <= 0.0 {
            return acc + 1.0;
        }
        if t < 1.0 {
            return acc + 1.0 + t;
        }
        acc += 1.0;
        t = libm::log2(t);
    }
}

/// `log₂ φ^{-1}(y)` for the chain: `y ∈ [1,2)` gives `y - 1`; otherwise
/// `φ^{-1}(y) = 2^{φ^{-1}(y - 1)}`.
fn chain_inverse_log2(y: f64) -> f64 {
    if y < 2.0 {
        return y - 1.0;
    }
    libm::exp2(chain_inverse_log2(y - 1.0))
}

fn table_eval(points: &[(f64, f64)], x: f64) -> f64 {
    let i = points.partition_point(|p| p.0 <= x);
    let (a, b) = if i >= points.len() {
        (points[points.len() - 2], points[points.len() - 1])
    } else {
        (points[i - 1], points[i])
    };
    a.1 + (x - a.0) * (b.1 - a.1) / (b.0 - a.0)
}

fn table_inverse(points: &[(f64, f64)], y: f64) -> f64 {
    if y <= 1.0 {
        return 1.0;
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    while table_eval(points, hi) < y {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > BISECT_REL_TOL * hi * 0.5 {
        let mid = 0.5 * (lo + hi);
        if table_eval(points, mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The Young functional `Φ` whose integral defines the space.
#[derive(Debug, Clone, PartialEq)]
pub enum YoungFunctional {
    /// `Φ(x) = x` (the space `L^1`).
    Identity,
    /// `Φ(x) = x φ(x)` (the space `L φ(L)`).
    XPhi(OrliczGauge),
    /// `Φ(x) = x^q / φ(x)` (the space `L^q / φ(L)`).
    PowerOverPhi { q: Exponent, gauge: OrliczGauge },
}

impl YoungFunctional {
    pub fn eval(&self, x: f64) -> f64 {
        let x = libm::fabs(x);
        if x == 0.0 {
            return 0.0;
        }
        match self {
            YoungFunctional::Identity => x,
            YoungFunctional::XPhi(g) => x * g.eval(x),
            YoungFunctional::PowerOverPhi { q, gauge } => libm::pow(x, q.value) / gauge.eval(x),
        }
    }

    /// `Φ(x)` for a nonnegative [`Real`], exact when possible.
    pub fn eval_real(&self, x: &Real) -> Real {
        if let Real::Exact(r) = x {
            if r.is_zero() {
                return Real::zero();
            }
        }
        match self {
            YoungFunctional::Identity => x.clone(),
            YoungFunctional::XPhi(g) => x.mul(&g.eval_real(x)),
            YoungFunctional::PowerOverPhi { q, gauge } => {
                let num = match q.integer() {
                    Some(n) => x.powi(n),
                    None => Real::Approx(libm::exp(q.value * x.ln())),
                };
                num.div(&gauge.eval_real(x)).unwrap_or(Real::Approx(f64::NAN))
            }
        }
    }

    /// `∫ Φ(|f|) dm`, summed exactly over the cells of `f`.
    pub fn orlicz_integral(&self, f: &StepFunction) -> f64 {
        f.integrate_with(|v| self.eval(v))
    }

    /// For `x^q/φ(x)`: the smallest grid point past which `x^{q-1}/φ(x)` is
    /// increasing on the sample grid up to `10^9`. `None` when it never settles.
    pub fn growth_threshold(&self) -> Option<f64> {
        let YoungFunctional::PowerOverPhi { q, gauge } = self else {
            return Some(1.0);
        };
        let grid: Vec<f64> = sample_grid(1.0).collect();
        let vals: Vec<f64> = grid
            .iter()
            .map(|&x| libm::pow(x, q.value - 1.0) / gauge.eval(x))
            .collect();
        let mut start = vals.len() - 1;
        while start > 0 && vals[start - 1] < vals[start] {
            start -= 1;
        }
        if start + 1 >= vals.len() {
            None
        } else {
            Some(grid[start])
        }
    }
}
