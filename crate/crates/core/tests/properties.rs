use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sweepout_core::base_sequence::{BaseSequence, Squares, SyntheticBlocks};
use sweepout_core::density::{exact_density, finite_density, truncation_error_bound, LatticeFunction};
use sweepout_core::extrapolation::{level_of, sampled_sublinear, DyadicAverage, Operator};
use sweepout_core::gauge::{OrliczGauge, YoungFunctional};
use sweepout_core::real::Real;
use sweepout_core::schedule::Schedule;
use sweepout_core::step::StepFunction;

fn step(seed: u64, amplitude: f64) -> StepFunction {
    StepFunction::random(&mut ChaCha8Rng::seed_from_u64(seed), 32, 10, amplitude)
}

fn gauge(kind: u8, param: f64) -> OrliczGauge {
    match kind % 4 {
        0 => OrliczGauge::power(param).unwrap(),
        1 => OrliczGauge::log_power(1.0 + 3.0 * param).unwrap(),
        2 => OrliczGauge::log_log(),
        _ => OrliczGauge::log_chain(),
    }
}

proptest! {
    #[test]
    fn gauge_round_trip(kind in 0u8..4, param in 0.05f64..0.95, e in 0.0f64..9.0) {
        let g = gauge(kind, param);
        let x = 10f64.powf(e).max(g.flat_until() * 1.01);
        let back = g.inverse(g.eval(x)).unwrap();
        prop_assert!((back - x).abs() <= 1e-12 * x, "{x} -> {back}");
    }

    #[test]
    fn gauge_monotone(kind in 0u8..4, param in 0.05f64..0.95, a in 0.0f64..9.0, b in 0.0f64..9.0) {
        let g = gauge(kind, param);
        let (lo, hi) = (10f64.powf(a.min(b)), 10f64.powf(a.max(b)));
        prop_assert!(g.eval(lo) <= g.eval(hi));
        prop_assert!(g.eval(lo) >= 1.0);
    }

    #[test]
    fn orlicz_integral_monotone(s1 in any::<u64>(), s2 in any::<u64>(), param in 0.05f64..0.95) {
        let f = step(s1, 50.0);
        let g = f.abs().add(&step(s2, 50.0).abs());
        let phi = YoungFunctional::XPhi(OrliczGauge::power(param).unwrap());
        prop_assert!(phi.orlicz_integral(&f) <= phi.orlicz_integral(&g) * (1.0 + 1e-12));
        let l1 = YoungFunctional::Identity.orlicz_integral(&f);
        prop_assert!((l1 - f.l1_norm()).abs() <= 1e-12 * f.l1_norm().max(1.0));
    }

    #[test]
    fn count_matches_enumeration(n in 1u64..200_000) {
        let big_n = BigUint::from(n);
        let one = BigUint::from(1u32);
        for s in [&Squares as &dyn BaseSequence, &SyntheticBlocks] {
            let c = s.count(&big_n);
            prop_assert_eq!(c.clone(), BigUint::from(s.elements_in(&one, &big_n).len()));
            if c > BigUint::from(0u32) {
                let last = s.nth(&c).unwrap();
                prop_assert!(last < big_n);
                prop_assert!(s.nth(&(c + 1u32)).unwrap() >= big_n);
            }
        }
    }

    #[test]
    fn finite_density_converges(period in 1u64..50, cells in proptest::collection::vec((0u64..50, 0u64..20), 0..10), n in 1u64..10_000) {
        let mut table = vec![Real::zero(); period as usize];
        for (r, v) in cells {
            table[(r % period) as usize] = Real::from(v);
        }
        let f = LatticeFunction::from_table(table).unwrap();
        let exact = exact_density(&f).unwrap().to_f64();
        let big_n = BigUint::from(n);
        let est = finite_density(&f, &big_n).unwrap().to_f64();
        prop_assert!((est - exact).abs() <= truncation_error_bound(&f, &big_n).unwrap() + 1e-12);
        let direct: f64 = (-(n.min(200) as i64)..=n.min(200) as i64)
            .map(|m| f.eval(&BigInt::from(m)).to_f64())
            .sum::<f64>() / (2 * n.min(200) + 1) as f64;
        let small = finite_density(&f, &BigUint::from(n.min(200))).unwrap().to_f64();
        prop_assert!((direct - small).abs() <= 1e-9 * direct.max(1.0));
    }

    #[test]
    fn level_sets_sandwich(g in 1.0f64..1e12) {
        let n = level_of(g) as f64;
        prop_assert!(n.exp() <= g && g < (n + 1.0).exp());
    }

    #[test]
    fn dyadic_average_sublinear(seed in any::<u64>(), level in 0u32..11) {
        let op = DyadicAverage { level };
        prop_assert!(sampled_sublinear(&op, &mut ChaCha8Rng::seed_from_u64(seed), 3));
        let f = step(seed, 10.0);
        let tf = op.apply(&f);
        prop_assert!((tf.integral() - f.integral()).abs() <= 1e-9);
    }

    #[test]
    fn blocks_tile_the_indices(u in 1u32..4, variant in 0u8..3) {
        let s = match variant {
            0 => Schedule::theorem_a(OrliczGauge::power(0.5).unwrap(), 2.0).unwrap(),
            1 => Schedule::theorem_b(OrliczGauge::log_power(1.0).unwrap()),
            _ => Schedule::lemma(
                OrliczGauge::log_power(1.0).unwrap(),
                OrliczGauge::log_power(1.0 / 3.0).unwrap(),
                1,
            )
            .unwrap(),
        };
        let b = s.block(u).unwrap();
        prop_assert_eq!(b.length.clone(), s.m(u).unwrap());
        let next = s.block(u + 1).unwrap();
        prop_assert_eq!(b.end(), next.start.clone());
        prop_assert_eq!(s.block_of(&next.start, u + 1).unwrap().u, u + 1);
    }
}
