//! Verification suites and the JSON report they produce.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use anyhow::{bail, Result};
use clap::ValueEnum;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sweepout_core::averages::{size_condition, smallest_valid_u, sweepout_witness};
use sweepout_core::base_sequence::BaseSequence;
use sweepout_core::construction::{PerturbationPlan, PerturbedSequence};
use sweepout_core::density::{exact_density, finite_density};
use sweepout_core::extrapolation::{builtin_operator, constant_a_phi, random_suite};
use sweepout_core::real::{Radical, Real};
use sweepout_core::schedule::Variant;
use sweepout_core::series_bounds::{lemma_series, p_grid, theorem_a_series, theorem_b_series, yano_feed};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Perturbation,
    Density,
    Sweepout,
    Series,
    Yano,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Perturbation => "perturbation",
            Suite::Density => "density",
            Suite::Sweepout => "sweepout",
            Suite::Series => "series",
            Suite::Yano => "yano",
            Suite::All => "all",
        }
    }

    pub fn needs_plan(self) -> bool {
        matches!(self, Suite::Perturbation | Suite::Sweepout | Suite::All)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Value,
    pub rhs: Value,
    pub pass: bool,
}

fn check(name: impl Into<String>, lhs: impl Into<Value>, rhs: impl Into<Value>, pass: bool) -> Check {
    Check { name: name.into(), lhs: lhs.into(), rhs: rhs.into(), pass }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: Suite, checks: Vec<Check>) -> Report {
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = Summary {
            checks: checks.len(),
            passed,
            failed: checks.len() - passed,
            pass: passed == checks.len(),
        };
        Report { suite: suite.name(), checks, summary }
    }
}

pub struct Context<'a> {
    pub cfg: &'a RunConfig,
    pub base: &'a (dyn BaseSequence + Send + Sync),
    pub plan: Option<&'a PerturbationPlan>,
}

impl Context<'_> {
    fn plan(&self) -> Result<&PerturbationPlan> {
        match self.plan {
            Some(p) => Ok(p),
            None => bail!("missing plan: this suite needs a plan from `sweepout construct`"),
        }
    }
}

fn ratio_value(r: &BigRational) -> Value {
    json!(r.to_f64().unwrap_or(f64::NAN))
}

/// `2R(u) >= ratio`, exactly.
fn within_two_r(r: &Radical, ratio: &BigRational) -> bool {
    let two_r = Radical::new(r.radicand.mul(&Real::from(2u64).powi(r.index)), r.index);
    two_r.scaled_cmp(&Real::one(), &Real::Exact(ratio.clone())) != Ordering::Less
}

fn perturbation(ctx: &Context) -> Result<Vec<Check>> {
    let plan = ctx.plan()?;
    let mut out = Vec::new();
    for c in plan.verify_constraints(ctx.base)? {
        out.push(check(format!("k={}: {}", c.k, c.name), c.lhs, c.rhs, c.pass));
    }
    let d = PerturbedSequence::new(ctx.base, plan)?;
    let mut block_max: Vec<(u32, BigRational)> = Vec::new();
    for (k, u, n) in d.checkpoints() {
        let ratio = d.perturbation_ratio(&n)?;
        let r = plan.schedule.r(u)?;
        let pass = within_two_r(&r, &ratio);
        out.push(check(
            format!("k={k}: |Δ(n) \\ S|/|S(n)| <= 2R({u}) at n = n_(k+1) - 1"),
            ratio_value(&ratio),
            2.0 * r.to_f64(),
            pass,
        ));
        match block_max.last_mut() {
            Some((bu, m)) if *bu == u => {
                if ratio > *m {
                    *m = ratio;
                }
            }
            _ => block_max.push((u, ratio)),
        }
    }
    for w in block_max.windows(2) {
        out.push(check(
            format!("block max ratio u={} <= u={}", w[1].0, w[0].0),
            ratio_value(&w[1].1),
            ratio_value(&w[0].1),
            w[1].1 <= w[0].1,
        ));
    }
    let hi = plan.horizon() * 2u32 + 1u32;
    if hi <= BigUint::from(ctx.cfg.caps.n_ceiling) {
        let one = BigUint::from(1u32);
        let mut delta: BTreeSet<BigUint> = ctx.base.elements_in(&one, &hi).into_iter().collect();
        for c in &plan.choices {
            delta.extend(c.insertion.elements_in(&one, &hi));
        }
        for c in &plan.choices {
            let n = &c.n * 2u32;
            let brute = delta.range(..&n).count();
            let fast = d.delta_count(&n)?;
            out.push(check(
                format!("k={}: |Δ(2n_k)| matches enumeration", c.k),
                fast.to_string(),
                brute.to_string(),
                fast == BigUint::from(brute),
            ));
        }
    }
    Ok(out)
}

fn density(ctx: &Context) -> Result<Vec<Check>> {
    let sched = ctx.cfg.schedule.build(ctx.cfg.caps.max_bits)?;
    let phi = sched.density_functional();
    let mut out = Vec::new();
    for u in 1..=ctx.cfg.caps.u_max {
        let f = sched.witness(u)?.to_lattice().compose(&phi);
        let d = exact_density(&f)?;
        out.push(check(format!("u={u}: D(Φ(F_u)) <= 1"), d.to_f64(), 1.0, d.le(&Real::one())));
        let n = sched.m(u)? * 1000u32;
        let est = finite_density(&f, &n)?;
        let gap = (est.to_f64() - d.to_f64()).abs();
        out.push(check(format!("u={u}: finite density at N = 1000 M(u) within 1e-3"), gap, 1e-3, gap <= 1e-3));
    }
    Ok(out)
}

fn sweepout(ctx: &Context) -> Result<Vec<Check>> {
    let plan = ctx.plan()?;
    let caps = &ctx.cfg.caps;
    let d = PerturbedSequence::new(ctx.base, plan)?;
    let Some(first) = smallest_valid_u(&d, caps.u_max)? else {
        return Ok(vec![check(
            "some u <= u_max has |Δ(2n_k)| <= 4|S(n_k)| on all of A_u",
            Value::Null,
            Value::Null,
            false,
        )]);
    };
    let mut out = Vec::new();
    for u in first..=caps.u_max {
        if !plan.covers_block(u)? || size_condition(&d, u)?.is_some() {
            break;
        }
        let r = sweepout_witness(&d, u, caps.memory_cap)?;
        out.push(check(
            format!("u={u}: ⌈R|S(n_k)|⌉ M(u) >= R M(u) |S(n_k)| on A_u"),
            r.chain_holds,
            true,
            r.chain_holds,
        ));
        out.push(check(
            format!("u={u}: min over {} shifts of max_k average >= sweep bound", r.modulus),
            r.achieved,
            r.bound,
            r.achieved >= r.bound,
        ));
    }
    Ok(out)
}

fn series(ctx: &Context) -> Result<Vec<Check>> {
    let sched = ctx.cfg.schedule.build(ctx.cfg.caps.max_bits)?;
    let upto = ctx.cfg.series_upto;
    let grid = p_grid(ctx.cfg.p_grid);
    let mut out = Vec::new();
    match sched.variant() {
        Variant::TheoremA { .. } => {
            for r in theorem_a_series(&sched, upto)?.rows {
                out.push(check(format!("u={}: M(u) R(u)^q <= 1/u² + u/v(u)^q", r.u), r.term, r.bound, r.pass));
            }
        }
        Variant::TheoremB => {
            for &p in &grid {
                let rep = theorem_b_series(&sched, p, upto)?;
                let tail = rep.split.map_or(f64::NAN, |s| s.tail_bound);
                let rhs = rep.phi_at_e.unwrap_or(f64::NAN) + tail;
                out.push(check(
                    format!("p={p}: Σ M(u) R(u)^(2(p-1)) <= φ(e^(1/(p-1))) + A"),
                    rep.partial_sum,
                    rhs,
                    rep.pass && rep.partial_sum <= rhs,
                ));
            }
            for row in yano_feed(&sched, &grid, upto)? {
                out.push(check(format!("p={}: 2 S_p^(1/p) <= φ(e^(1/(p-1))) + A'", row.p), row.lhs, row.rhs, row.pass));
            }
        }
        Variant::Lemma { .. } => {
            for &p in &grid {
                for r in lemma_series(&sched, p, upto)?.rows {
                    out.push(check(format!("p={p}, u={}: cancellation term <= bound", r.u), r.term, r.bound, r.pass));
                }
            }
        }
    }
    Ok(out)
}

fn yano(ctx: &Context) -> Result<Vec<Check>> {
    let phi = ctx.cfg.yano.phi.build()?;
    let a = constant_a_phi(&phi)?;
    let grid = p_grid(ctx.cfg.p_grid);
    let mut out = vec![check("A_φ is finite", a, Value::Null, a.is_finite())];
    for name in ["identity", "dyadic"] {
        let op = builtin_operator(name)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
        let s = random_suite(op.as_ref(), &phi, &grid, ctx.cfg.yano.functions, &mut rng)?;
        out.push(check(
            format!("{}: functions failing the hypothesis grid", s.operator),
            s.hypothesis_failures,
            0,
            s.hypothesis_failures == 0,
        ));
        let label = match &s.first_failure {
            Some(step) => format!("{}: functions failing the traced conclusion (first: {})", s.operator, step.name),
            None => format!("{}: functions failing the traced conclusion", s.operator),
        };
        out.push(check(label, s.conclusion_failures, 0, s.conclusion_failures == 0));
    }
    Ok(out)
}

fn run_one(suite: Suite, ctx: &Context) -> Result<Vec<Check>> {
    match suite {
        Suite::Perturbation => perturbation(ctx),
        Suite::Density => density(ctx),
        Suite::Sweepout => sweepout(ctx),
        Suite::Series => series(ctx),
        Suite::Yano => yano(ctx),
        Suite::All => unreachable!(),
    }
}

/// Runs a suite; `all` fans the others out to threads and joins them in a
/// fixed order.
pub fn run(suite: Suite, ctx: &Context) -> Result<Report> {
    if suite.needs_plan() {
        ctx.plan()?;
    }
    if suite != Suite::All {
        return Ok(Report::new(suite, run_one(suite, ctx)?));
    }
    let parts = [Suite::Perturbation, Suite::Density, Suite::Sweepout, Suite::Series, Suite::Yano];
    let results: Vec<Result<Vec<Check>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = parts.iter().map(|&s| scope.spawn(move || run_one(s, ctx))).collect();
        handles.into_iter().map(|h| h.join().expect("suite worker panicked")).collect()
    });
    let mut checks = Vec::new();
    for (s, r) in parts.iter().zip(results) {
        for mut c in r? {
            c.name = format!("{}: {}", s.name(), c.name);
            checks.push(c);
        }
    }
    Ok(Report::new(suite, checks))
}
