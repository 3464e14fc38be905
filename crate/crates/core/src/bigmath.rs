//! Small helpers on top of `num-bigint` for exact counting work: integer
//! roots of rationals, scaled conversion of huge integers to `f64`, and
//! exact conversion of finite floats to rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_int(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

pub fn rat_from_big(n: &BigUint) -> BigRational {
    BigRational::from_integer(to_int(n))
}

/// Largest `m` with `m^e <= y`; `y` must be nonnegative.
pub fn floor_root(y: &BigRational, e: u32) -> BigUint {
    assert!(!y.is_negative(), "floor_root of a negative rational");
    let fl = y.floor().to_integer();
    let fl = fl.to_biguint().unwrap_or_default();
    fl.nth_root(e)
}

/// Smallest `m` with `m^e >= y`; `y` must be nonnegative.
pub fn ceil_root(y: &BigRational, e: u32) -> BigUint {
    let r = floor_root(y, e);
    if rat_from_big(&r.pow(e)) >= *y {
        r
    } else {
        r + 1u32
    }
}

/// `ceil(sqrt(n))` for a big integer.
pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1u32
    }
}

/// A huge nonnegative integer as `mantissa * 2^exp` with `mantissa` in `[0.5, 1)`
/// (or zero), so that ratios of numbers far outside the `f64` range stay finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub exp: i64,
}

impl Scaled {
    pub fn of(n: &BigUint) -> Scaled {
        if n.is_zero() {
            return Scaled { mantissa: 0.0, exp: 0 };
        }
        let bits = n.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (n >> (shift as usize)).to_u64().unwrap_or(u64::MAX) as f64;
        // top < 2^64, so top * 2^-64 lies in [0.5, 1) up to rounding
        let m = top / 18446744073709551616.0;
        Scaled { mantissa: m, exp: shift + 64 }
    }

    pub fn ln(&self) -> f64 {
        libm::log(self.mantissa) + self.exp as f64 * core::f64::consts::LN_2
    }

    pub fn log2(&self) -> f64 {
        libm::log2(self.mantissa) + self.exp as f64
    }
}

/// `a / b` as an `f64`, valid even when `a` and `b` overflow `f64`.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let sa = Scaled::of(a);
    let sb = Scaled::of(b);
    if sb.mantissa == 0.0 {
        return f64::INFINITY;
    }
    if sa.mantissa == 0.0 {
        return 0.0;
    }
    let e = sa.exp - sb.exp;
    let e = e.clamp(-2000, 2000) as i32;
    libm::ldexp(sa.mantissa / sb.mantissa, e)
}

/// `log2(n)` for a positive big integer.
pub fn log2_big(n: &BigUint) -> f64 {
    Scaled::of(n).log2()
}

/// Conversion of a rational to `f64` that survives huge numerators and
/// denominators.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let n = r.numer().abs().to_biguint().unwrap_or_default();
    let d = r.denom().abs().to_biguint().unwrap_or_else(BigUint::one);
    sign * ratio_f64(&n, &d)
}

/// Exact rational value of a finite `f64`.
pub fn rat_from_f64(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(BigRational::zero());
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i32 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = if exp == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    let e = exp - 1075;
    let m = BigInt::from(mant) * sign;
    Some(if e >= 0 {
        BigRational::from_integer(m << (e as usize))
    } else {
        BigRational::new(m, BigInt::one() << ((-e) as usize))
    })
}

/// Number of integers `t` in `[0, count)` with `start + step * t ≡ residue (mod modulus)`.
pub fn ap_class_count(
    start: &BigUint,
    step: &BigUint,
    count: &BigUint,
    modulus: &BigUint,
    residue: &BigUint,
) -> BigUint {
    if count.is_zero() {
        return BigUint::zero();
    }
    let m = to_int(modulus);
    let a = to_int(&(start % modulus));
    let d = to_int(&(step % modulus));
    let r = to_int(&(residue % modulus));
    // d t ≡ r - a (mod m)
    let target = (r - a).mod_floor(&m);
    let g = d.gcd(&m);
    if g.is_zero() {
        // modulus == 1 is handled by gcd(0, 1) = 1; g == 0 only if m == 0
        return BigUint::zero();
    }
    if !(&target % &g).is_zero() {
        return BigUint::zero();
    }
    let m_red = &m / &g;
    let d_red = (&d / &g).mod_floor(&m_red);
    let t_red = (&target / &g).mod_floor(&m_red);
    let t0 = if m_red.is_one() {
        BigInt::zero()
    } else {
        let inv = mod_inverse(&d_red, &m_red);
        (t_red * inv).mod_floor(&m_red)
    };
    let c = to_int(count);
    if t0 >= c {
        return BigUint::zero();
    }
    let n: BigInt = (c - &t0 - 1) / &m_red + 1;
    n.to_biguint().unwrap_or_default()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}
