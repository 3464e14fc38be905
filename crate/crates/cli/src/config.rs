//! Run configuration: the JSON grammar and the two built-in presets.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sweepout_core::base_sequence::{BaseSequence, FileSequence, Naturals, Squares, SyntheticBlocks};
use sweepout_core::gauge::OrliczGauge;
use sweepout_core::schedule::Schedule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GaugeSpec {
    Power { a: f64 },
    LogPower { j: f64 },
    LogLog,
    LogChain,
    Table { points: Vec<(f64, f64)> },
}

impl GaugeSpec {
    pub fn build(&self) -> Result<OrliczGauge> {
        Ok(match self {
            GaugeSpec::Power { a } => OrliczGauge::power(*a)?,
            GaugeSpec::LogPower { j } => OrliczGauge::log_power(*j)?,
            GaugeSpec::LogLog => OrliczGauge::log_log(),
            GaugeSpec::LogChain => OrliczGauge::log_chain(),
            GaugeSpec::Table { points } => OrliczGauge::table(points.clone())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScheduleSpec {
    TheoremA { gauge: GaugeSpec, q: f64 },
    TheoremB { gauge: GaugeSpec },
    Lemma { gauge: GaugeSpec, psi: GaugeSpec, k: u32 },
}

impl ScheduleSpec {
    pub fn build(&self, max_bits: u64) -> Result<Schedule> {
        let s = match self {
            ScheduleSpec::TheoremA { gauge, q } => Schedule::theorem_a(gauge.build()?, *q)?,
            ScheduleSpec::TheoremB { gauge } => Schedule::theorem_b(gauge.build()?),
            ScheduleSpec::Lemma { gauge, psi, k } => Schedule::lemma(gauge.build()?, psi.build()?, *k)?,
        };
        Ok(s.with_max_bits(max_bits))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BaseSpec {
    Squares,
    Blocks,
    Naturals,
    /// One integer per line.
    File { path: PathBuf, zero_density: bool },
}

pub type DynSequence = Box<dyn BaseSequence + Send + Sync>;

impl BaseSpec {
    pub fn build(&self) -> Result<DynSequence> {
        Ok(match self {
            BaseSpec::Squares => Box::new(Squares),
            BaseSpec::Blocks => Box::new(SyntheticBlocks),
            BaseSpec::Naturals => Box::new(Naturals),
            BaseSpec::File { path, zero_density } => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading base sequence {}", path.display()))?;
                Box::new(FileSequence::parse(&text, *zero_density)?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub u_max: u32,
    pub k_max: u64,
    /// Largest `n` for the sequence dump and brute-force oracles.
    pub n_ceiling: u64,
    /// Largest number of dumped elements, and largest witness modulus.
    pub memory_cap: u64,
    pub max_bits: u64,
    pub step_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            u_max: 2,
            k_max: 1,
            n_ceiling: 1_000_000,
            memory_cap: 1 << 20,
            max_bits: 1 << 16,
            step_budget: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct YanoSpec {
    pub functions: usize,
    pub phi: GaugeSpec,
}

impl Default for YanoSpec {
    fn default() -> Self {
        YanoSpec { functions: 100, phi: GaugeSpec::Power { a: 0.5 } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schedule: ScheduleSpec,
    pub base: BaseSpec,
    #[serde(default)]
    pub caps: Caps,
    /// `p ∈ {1 + 1/n : n <= p_grid}`.
    #[serde(default = "default_p_grid")]
    pub p_grid: u32,
    #[serde(default = "default_series_upto")]
    pub series_upto: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub yano: YanoSpec,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_p_grid() -> u32 {
    20
}

fn default_series_upto() -> u32 {
    100
}

impl RunConfig {
    pub fn preset(name: &str) -> Result<RunConfig> {
        let (schedule, base) = match name {
            "toy-a" => (
                ScheduleSpec::TheoremA { gauge: GaugeSpec::Power { a: 0.5 }, q: 2.0 },
                BaseSpec::Squares,
            ),
            "toy-b" => (ScheduleSpec::TheoremB { gauge: GaugeSpec::LogPower { j: 1.0 } }, BaseSpec::Blocks),
            other => bail!("unknown preset {other:?} (expected toy-a or toy-b)"),
        };
        Ok(RunConfig {
            schedule,
            base,
            caps: Caps::default(),
            p_grid: default_p_grid(),
            series_upto: default_series_upto(),
            seed: 0,
            yano: YanoSpec::default(),
            out: None,
        })
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.caps;
        for (name, v) in [
            ("u_max", c.u_max as u64),
            ("n_ceiling", c.n_ceiling),
            ("memory_cap", c.memory_cap),
            ("max_bits", c.max_bits),
            ("step_budget", c.step_budget),
            ("p_grid", self.p_grid as u64),
            ("series_upto", self.series_upto as u64),
        ] {
            if v == 0 {
                bail!("{name} must be positive");
            }
        }
        self.schedule.build(c.max_bits)?;
        self.yano.phi.build()?;
        Ok(())
    }
}
