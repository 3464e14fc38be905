mod average;
mod config;
mod plan;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use sweepout_core::construction::{build_plan, PerturbedSequence, SearchConfig};

use config::RunConfig;
use plan::{DumpInfo, PlanFile, DUMP_FILE};
use suites::{Report, Suite};

#[derive(Parser)]
#[command(name = "sweepout", version, about = "Build perturbation plans and run the verification suites")]
struct Cli {
    /// Config JSON file.
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in config: toy-a or toy-b (default toy-a).
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Output directory (default: the config's `out`, else `sweepout-out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    u_max: Option<u32>,
    #[arg(long, global = true)]
    k_max: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select the intervals, write plan.json and the Δ dump.
    Construct,
    /// Run a verification suite and write report-<suite>.json.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Write averages.csv for f along Δ (or the base sequence without a plan).
    Average {
        /// one | delta:P | witness:U | interval:A:B
        #[arg(long = "f")]
        f: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        x: String,
        /// Comma-separated cutoffs N.
        #[arg(long = "n")]
        n: String,
        /// Average along the base sequence even if a plan exists.
        #[arg(long)]
        base_only: bool,
    },
}

fn load_config(cli: &Cli) -> Result<(RunConfig, PathBuf)> {
    let mut cfg = match (&cli.config, &cli.preset) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(name)) => RunConfig::preset(name)?,
        (None, None) => RunConfig::preset("toy-a")?,
    };
    if let Some(u) = cli.u_max {
        cfg.caps.u_max = u;
    }
    if let Some(k) = cli.k_max {
        cfg.caps.k_max = k;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let out = cli.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("sweepout-out"));
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    Ok((cfg, out))
}

fn construct(cfg: &RunConfig, out: &Path) -> Result<ExitCode> {
    let base = cfg.base.build()?;
    let sched = cfg.schedule.build(cfg.caps.max_bits)?;
    let search = SearchConfig {
        step_budget: cfg.caps.step_budget,
        max_bits: cfg.caps.max_bits,
        ..SearchConfig::default()
    };
    let plan = build_plan(base.as_ref(), &sched, cfg.caps.k_max, &search)?;
    let d = PerturbedSequence::new(base.as_ref(), &plan)?;
    let full = plan.horizon() * 2u32 + 1u32;
    let below = full.clone().min(BigUint::from(cfg.caps.n_ceiling) + 1u32);
    let (below, written) = plan::dump_delta(&d, &below, cfg.caps.memory_cap, &out.join(DUMP_FILE))?;
    let mut file = PlanFile::from_plan(&plan, &cfg.schedule, &cfg.base);
    file.dump = Some(DumpInfo {
        path: DUMP_FILE.into(),
        below: below.to_string(),
        elements: written,
        truncated: below < full,
    });
    file.save(out)?;
    println!(
        "plan: {} intervals, n_(k_max) has {} bits; {written} elements of Δ below {below} written",
        plan.choices.len(),
        plan.horizon().bits()
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(cfg: &RunConfig, out: &Path, suite: Suite) -> Result<ExitCode> {
    let file = if out.join(plan::PLAN_FILE).exists() || suite.needs_plan() {
        Some(PlanFile::load(out)?)
    } else {
        None
    };
    let base = match &file {
        Some(f) => f.base.build()?,
        None => cfg.base.build()?,
    };
    let plan = file.as_ref().map(|f| f.to_plan(base.name())).transpose()?;
    let ctx = suites::Context { cfg, base: base.as_ref(), plan: plan.as_ref() };
    let report: Report = suites::run(suite, &ctx)?;
    let path = out.join(format!("report-{}.json", suite.name()));
    std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n").context("writing report")?;
    let s = &report.summary;
    println!("{}: {} of {} checks pass ({})", report.suite, s.passed, s.checks, path.display());
    for c in report.checks.iter().filter(|c| !c.pass) {
        println!("FAIL {}: {} vs {}", c.name, c.lhs, c.rhs);
    }
    Ok(if s.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn averages(cfg: &RunConfig, out: &Path, f: &str, x: &str, n: &str, base_only: bool) -> Result<ExitCode> {
    let cutoffs = average::parse_cutoffs(n)?;
    let sched = cfg.schedule.build(cfg.caps.max_bits)?;
    let (sys, obs) = average::parse_observation(f, x, &sched)?;
    let file = if !base_only && out.join(plan::PLAN_FILE).exists() {
        Some(PlanFile::load(out)?)
    } else {
        None
    };
    let text = match &file {
        Some(file) => {
            let base = file.base.build()?;
            let plan = file.to_plan(base.name())?;
            let d = PerturbedSequence::new(base.as_ref(), &plan)?;
            average::csv(&d, &sys, &obs, &cutoffs)?
        }
        None => average::csv(cfg.base.build()?.as_ref(), &sys, &obs, &cutoffs)?,
    };
    std::fs::write(out.join("averages.csv"), &text).context("writing averages.csv")?;
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let (cfg, out) = load_config(cli)?;
    match &cli.command {
        Command::Construct => construct(&cfg, &out),
        Command::Verify { suite } => verify(&cfg, &out, *suite),
        Command::Average { f, x, n, base_only } => averages(&cfg, &out, f, x, n, *base_only),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
