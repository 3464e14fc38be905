//! Ergodic averages along a sequence, as CSV rows.

use anyhow::{bail, Context, Result};
use num_bigint::{BigInt, BigUint};
use sweepout_core::averages::{average_along, DynamicalSystem, Normalization, Observation};
use sweepout_core::base_sequence::BaseSequence;
use sweepout_core::density::LatticeFunction;
use sweepout_core::real::Real;
use sweepout_core::schedule::Schedule;
use sweepout_core::step::StepFunction;

/// Parses `one`, `delta:P`, `witness:U` (integer shift) or `interval:A:B`
/// (rotation by `√2 - 1`) together with the starting point `x`.
pub fn parse_observation(spec: &str, x: &str, sched: &Schedule) -> Result<(DynamicalSystem, Observation)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let shift_x = || -> Result<BigInt> { x.parse().with_context(|| format!("x = {x:?} is not an integer")) };
    let shift = |f: LatticeFunction| -> Result<(DynamicalSystem, Observation)> {
        Ok((DynamicalSystem::IntegerShift, Observation::Shift { f, x: shift_x()? }))
    };
    match parts.as_slice() {
        ["one"] => shift(LatticeFunction::periodic(BigUint::from(1u32), vec![(BigUint::from(0u32), Real::one())])?),
        ["delta", p] => {
            let p: BigInt = p.parse().with_context(|| format!("bad point in {spec:?}"))?;
            shift(LatticeFunction::finite_support(vec![(p, Real::one())])?)
        }
        ["witness", u] => {
            let u: u32 = u.parse().with_context(|| format!("bad block index in {spec:?}"))?;
            shift(sched.witness(u)?.to_lattice())
        }
        ["interval", a, b] => {
            let a: f64 = a.parse().with_context(|| format!("bad endpoint in {spec:?}"))?;
            let b: f64 = b.parse().with_context(|| format!("bad endpoint in {spec:?}"))?;
            let x: f64 = x.parse().with_context(|| format!("x = {x:?} is not a number"))?;
            if !(0.0..1.0).contains(&x) {
                bail!("rotation start point must lie in [0, 1)");
            }
            Ok((
                DynamicalSystem::sqrt2_rotation(),
                Observation::Rotation { f: StepFunction::indicator(a, b, 1.0)?, x },
            ))
        }
        _ => bail!("unknown function spec {spec:?} (expected one, delta:P, witness:U or interval:A:B)"),
    }
}

pub fn parse_cutoffs(list: &str) -> Result<Vec<BigUint>> {
    let out: Vec<BigUint> = list
        .split(',')
        .map(|s| s.trim().parse().with_context(|| format!("{s:?} is not a cutoff")))
        .collect::<Result<_>>()?;
    if out.is_empty() {
        bail!("the N list is empty");
    }
    Ok(out)
}

/// `N,count,average` with `count = |Λ ∩ [1, N)|`.
pub fn csv<S: BaseSequence + ?Sized>(
    seq: &S,
    sys: &DynamicalSystem,
    obs: &Observation,
    cutoffs: &[BigUint],
) -> Result<String> {
    let mut out = String::from("N,count,average\n");
    for n in cutoffs {
        let avg = average_along(seq, sys, obs, n, Normalization::OwnCount, seq)?;
        out.push_str(&format!("{n},{},{}\n", seq.count(n), avg.to_f64()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sweepout_core::base_sequence::Squares;
    use sweepout_core::gauge::OrliczGauge;

    fn sched() -> Schedule {
        Schedule::theorem_a(OrliczGauge::power(0.5).unwrap(), 2.0).unwrap()
    }

    #[test]
    fn constant_one() {
        let (sys, obs) = parse_observation("one", "0", &sched()).unwrap();
        let text = csv(&Squares, &sys, &obs, &parse_cutoffs("2,10,1000").unwrap()).unwrap();
        assert_eq!(text, "N,count,average\n2,1,1\n10,3,1\n1000,31,1\n");
    }

    #[test]
    fn single_hit() {
        // squares below 100: 1, 4, …, 81; only m = 9 lands on 0 from x = -9
        let (sys, obs) = parse_observation("delta:0", "-9", &sched()).unwrap();
        let text = csv(&Squares, &sys, &obs, &parse_cutoffs("100").unwrap()).unwrap();
        assert_eq!(text, format!("N,count,average\n100,9,{}\n", 1.0 / 9.0));
    }

    #[test]
    fn equidistribution() {
        let (sys, obs) = parse_observation("interval:0:0.5", "0", &sched()).unwrap();
        let n = parse_cutoffs("100000").unwrap();
        let avg = average_along(&Squares, &sys, &obs, &n[0], Normalization::OwnCount, &Squares).unwrap();
        assert!((avg.to_f64() - 0.5).abs() < 0.01);
    }

    #[test]
    fn bad_specs() {
        assert!(parse_observation("cubic", "0", &sched()).is_err());
        assert!(parse_observation("interval:0:0.5", "1.5", &sched()).is_err());
        assert!(parse_cutoffs("3,x").is_err());
        let (sys, obs) = parse_observation("one", "0", &sched()).unwrap();
        assert!(csv(&Squares, &sys, &obs, &parse_cutoffs("1").unwrap()).is_err());
    }
}
