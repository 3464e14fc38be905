//! Plan files: big integers are written as decimal strings.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sweepout_core::base_sequence::BaseSequence;
use sweepout_core::construction::{InsertionSet, IntervalChoice, PerturbationPlan, PerturbedSequence};

use crate::config::{BaseSpec, ScheduleSpec};

pub const PLAN_FILE: &str = "plan.json";
pub const DUMP_FILE: &str = "delta.txt";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsertionRecord {
    pub first: String,
    pub step: String,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiceRecord {
    pub k: u64,
    pub u: u32,
    pub n: String,
    pub modulus: String,
    pub residue: String,
    pub insert_count: String,
    pub count_n: String,
    pub insertion: InsertionRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpInfo {
    pub path: String,
    /// Elements of `Δ` in `[1, below)` were written.
    pub below: String,
    pub elements: u64,
    /// Whether `below` is short of `2 n_{k_max} + 1`.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanFile {
    pub schedule: ScheduleSpec,
    pub base: BaseSpec,
    pub max_bits: u64,
    pub horizon: String,
    pub choices: Vec<ChoiceRecord>,
    pub dump: Option<DumpInfo>,
}

fn num(s: &str) -> Result<BigUint> {
    s.parse().with_context(|| format!("{s:?} is not a nonnegative integer"))
}

impl PlanFile {
    pub fn from_plan(plan: &PerturbationPlan, schedule: &ScheduleSpec, base: &BaseSpec) -> PlanFile {
        let choices = plan
            .choices
            .iter()
            .map(|c| ChoiceRecord {
                k: c.k,
                u: c.u,
                n: c.n.to_string(),
                modulus: c.modulus.to_string(),
                residue: c.residue.to_string(),
                insert_count: c.insert_count.to_string(),
                count_n: c.count_n.to_string(),
                insertion: InsertionRecord {
                    first: c.insertion.first.to_string(),
                    step: c.insertion.step.to_string(),
                    count: c.insertion.count.to_string(),
                },
            })
            .collect();
        PlanFile {
            schedule: schedule.clone(),
            base: base.clone(),
            max_bits: plan.schedule.max_bits(),
            horizon: plan.horizon().to_string(),
            choices,
            dump: None,
        }
    }

    pub fn to_plan(&self, base_name: String) -> Result<PerturbationPlan> {
        let schedule = self.schedule.build(self.max_bits)?;
        let choices = self
            .choices
            .iter()
            .map(|c| {
                Ok(IntervalChoice {
                    k: c.k,
                    u: c.u,
                    n: num(&c.n)?,
                    modulus: num(&c.modulus)?,
                    residue: num(&c.residue)?,
                    insert_count: num(&c.insert_count)?,
                    count_n: num(&c.count_n)?,
                    insertion: InsertionSet {
                        first: num(&c.insertion.first)?,
                        step: num(&c.insertion.step)?,
                        count: num(&c.insertion.count)?,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if choices.iter().enumerate().any(|(i, c)| c.k != i as u64) {
            bail!("plan intervals must be numbered 0, 1, 2, …");
        }
        Ok(PerturbationPlan { schedule, base_name, choices })
    }

    pub fn load(dir: &Path) -> Result<PlanFile> {
        let path = dir.join(PLAN_FILE);
        if !path.exists() {
            bail!("missing plan: {} not found (run `sweepout construct` first)", path.display());
        }
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        std::fs::write(dir.join(PLAN_FILE), text).context("writing plan")
    }
}

/// Writes `Δ ∩ [1, below)` one integer per line, at most `max_elements`
/// lines; returns the bound actually used and the element count.
pub fn dump_delta<S: BaseSequence + ?Sized>(
    d: &PerturbedSequence<'_, S>,
    below: &BigUint,
    max_elements: u64,
    path: &Path,
) -> Result<(BigUint, u64)> {
    let mut hi = below.clone();
    let one = BigUint::from(1u32);
    if hi > one && d.delta_count(&hi)? > BigUint::from(max_elements) {
        // largest hi with at most max_elements below it
        let (mut lo, mut top) = (one.clone(), hi.clone());
        while &top - &lo > one {
            let mid = (&lo + &top) >> 1usize;
            if d.delta_count(&mid)? <= BigUint::from(max_elements) {
                lo = mid;
            } else {
                top = mid;
            }
        }
        hi = lo;
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).context("creating sequence dump")?);
    let mut written = 0u64;
    if hi > one {
        for x in d.elements_in(&one, &hi) {
            writeln!(out, "{x}")?;
            written += 1;
        }
    }
    out.flush()?;
    Ok((hi, written))
}
