//! `misfill` — run, sweep and replay maximal-independent-set filling
//! simulations on port-labeled graphs with door-entering luminous robots.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use misfill_cli::ops;

#[derive(Parser)]
#[command(
    name = "misfill",
    about = "Simulate and verify robots filling a maximal independent set of a graph",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation per seed and check every monitor
    Run(RunArgs),
    /// Batch-run random instances over a size range
    Sweep(SweepArgs),
    /// Re-execute a recorded trace and compare event for event
    Replay(ReplayArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Graph file (may carry `set key value` defaults)
    #[arg(long)]
    graph: PathBuf,
    /// ind | multind; default picked from the door count
    #[arg(long)]
    protocol: Option<String>,
    /// fsync | ssync | async; default fsync
    #[arg(long)]
    sched: Option<String>,
    /// Rotate single activations instead of random subsets (ssync/async)
    #[arg(long)]
    round_robin: bool,
    /// Seed for the adversary; repeat for several runs
    #[arg(long)]
    seed: Vec<u64>,
    /// Snapshot radius override
    #[arg(long)]
    visibility: Option<u32>,
    /// Allow a visibility below the protocol's requirement
    #[arg(long = "unsafe")]
    allow_unsafe: bool,
    /// Radius of the scan around candidate targets
    #[arg(long)]
    check_radius: Option<u32>,
    /// Tick safety cutoff
    #[arg(long)]
    max_ticks: Option<u64>,
    /// Bound on adversarial delays under async
    #[arg(long)]
    max_delay: Option<u32>,
    /// Also write per-epoch DOT frames
    #[arg(long)]
    frames: bool,
    /// Output directory for trace.jsonl and report.jsonl
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 4)]
    max_deg: u16,
    /// Number of doors per instance
    #[arg(long, default_value_t = 1)]
    doors: usize,
    /// Seeds per size
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    /// ind | multind; default picked from the door count
    #[arg(long)]
    protocol: Option<String>,
    /// fsync | ssync | async; default runs fsync and ssync
    #[arg(long)]
    sched: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    graph: PathBuf,
}

fn parse_protocol(s: &Option<String>) -> Result<Option<misfill_core::protocol::Protocol>> {
    Ok(match s.as_deref() {
        None => None,
        Some("ind") => Some(misfill_core::protocol::Protocol::Ind),
        Some("multind") => Some(misfill_core::protocol::Protocol::MultInd),
        Some(other) => anyhow::bail!("unknown protocol `{other}`"),
    })
}

fn parse_sched(s: &Option<String>) -> Result<Option<misfill_core::engine::SchedulerKind>> {
    Ok(match s.as_deref() {
        None => None,
        Some("fsync") => Some(misfill_core::engine::SchedulerKind::FSync),
        Some("ssync") => Some(misfill_core::engine::SchedulerKind::SSync),
        Some("async") => Some(misfill_core::engine::SchedulerKind::Async),
        Some(other) => anyhow::bail!("unknown scheduler `{other}`"),
    })
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run(a) => ops::cmd_run(ops::RunSpec {
            graph: a.graph,
            protocol: parse_protocol(&a.protocol)?,
            sched: parse_sched(&a.sched)?,
            round_robin: a.round_robin,
            seeds: a.seed,
            visibility: a.visibility,
            allow_unsafe: a.allow_unsafe,
            check_radius: a.check_radius,
            max_ticks: a.max_ticks,
            max_delay: a.max_delay,
            frames: a.frames,
            out: a.out,
        }),
        Command::Sweep(a) => ops::cmd_sweep(ops::SweepSpec {
            n_min: a.n_min,
            n_max: a.n_max,
            max_deg: a.max_deg,
            doors: a.doors,
            seeds: a.seeds,
            protocol: parse_protocol(&a.protocol)?,
            sched: parse_sched(&a.sched)?,
            out: a.out,
        }),
        Command::Replay(a) => ops::cmd_replay(&a.trace, &a.graph),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
