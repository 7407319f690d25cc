//! Command implementations behind the CLI: single runs with artifact
//! output, batch sweeps, and trace replay.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use misfill_core::engine::{
    replay, run, ActivationPolicy, Outcome, SchedulerKind, SchedulerPolicy, SimulationConfig,
};
use misfill_core::graph::{DoorAttachment, PortGraph, VertexId};
use misfill_core::protocol::{Protocol, ProtocolParams};
use misfill_core::verifier::{check_trace, enumerate_mis, CheckReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format;
use crate::{dot, jsonl};

/// Everything one `run` invocation needs, after flags and file settings are
/// merged.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub graph: PathBuf,
    pub protocol: Option<Protocol>,
    pub sched: Option<SchedulerKind>,
    pub round_robin: bool,
    pub seeds: Vec<u64>,
    pub visibility: Option<u32>,
    pub allow_unsafe: bool,
    pub check_radius: Option<u32>,
    pub max_ticks: Option<u64>,
    pub max_delay: Option<u32>,
    pub frames: bool,
    pub out: PathBuf,
}

fn parse_protocol(s: &str) -> Result<Protocol> {
    match s {
        "ind" => Ok(Protocol::Ind),
        "multind" => Ok(Protocol::MultInd),
        other => bail!("unknown protocol `{other}` (expected ind|multind)"),
    }
}

fn parse_sched(s: &str) -> Result<SchedulerKind> {
    match s {
        "fsync" => Ok(SchedulerKind::FSync),
        "ssync" => Ok(SchedulerKind::SSync),
        "async" => Ok(SchedulerKind::Async),
        other => bail!("unknown scheduler `{other}` (expected fsync|ssync|async)"),
    }
}

/// Folds `set key value` lines from the graph file into unset spec fields.
fn apply_settings(spec: &mut RunSpec, settings: &BTreeMap<String, String>) -> Result<()> {
    for (key, value) in settings {
        match key.as_str() {
            "protocol" => {
                if spec.protocol.is_none() {
                    spec.protocol = Some(parse_protocol(value)?);
                }
            }
            "sched" => {
                if spec.sched.is_none() {
                    spec.sched = Some(parse_sched(value)?);
                }
            }
            "seed" => {
                if spec.seeds.is_empty() {
                    spec.seeds = vec![value.parse().context("set seed")?];
                }
            }
            "visibility" => {
                if spec.visibility.is_none() {
                    spec.visibility = Some(value.parse().context("set visibility")?);
                }
            }
            "check-radius" => {
                if spec.check_radius.is_none() {
                    spec.check_radius = Some(value.parse().context("set check-radius")?);
                }
            }
            "max-ticks" => {
                if spec.max_ticks.is_none() {
                    spec.max_ticks = Some(value.parse().context("set max-ticks")?);
                }
            }
            "max-delay" => {
                if spec.max_delay.is_none() {
                    spec.max_delay = Some(value.parse().context("set max-delay")?);
                }
            }
            "unsafe" => {
                if value == "true" {
                    spec.allow_unsafe = true;
                }
            }
            "frames" => {
                if value == "true" {
                    spec.frames = true;
                }
            }
            other => bail!("unknown setting `{other}` in graph file"),
        }
    }
    Ok(())
}

pub struct PreparedRun {
    pub original: PortGraph,
    pub anchors: Vec<VertexId>,
    pub graph: PortGraph,
    pub doors: DoorAttachment,
    pub protocol: Protocol,
    pub kind: SchedulerKind,
    pub round_robin: bool,
    pub seeds: Vec<u64>,
    pub config: SimulationConfig,
}

/// Validates a spec against the loaded graph file.
pub fn prepare(mut spec: RunSpec) -> Result<PreparedRun> {
    let file = format::load(&spec.graph)?;
    apply_settings(&mut spec, &file.settings)?;
    if file.doors.count() == 0 {
        bail!("graph file declares no doors");
    }
    let protocol = spec.protocol.unwrap_or(if file.doors.count() > 1 {
        Protocol::MultInd
    } else {
        Protocol::Ind
    });
    if protocol == Protocol::Ind && file.doors.count() > 1 {
        bail!("the single-door protocol cannot run on a graph with several doors");
    }
    let kind = spec.sched.unwrap_or(SchedulerKind::FSync);
    let default_visibility = ProtocolParams::new(protocol, file.doors.count()).visibility;
    if let Some(z) = spec.visibility {
        if z < default_visibility && !spec.allow_unsafe {
            bail!(
                "visibility {z} is below the protocol's {default_visibility}; \
                 pass --unsafe to run the counterexample mode"
            );
        }
    }
    let mut config = SimulationConfig::new(protocol);
    config.visibility = spec.visibility;
    config.check_radius = spec.check_radius;
    config.max_ticks = spec.max_ticks;
    if let Some(d) = spec.max_delay {
        config.max_delay = d;
    }
    let seeds = if spec.seeds.is_empty() { vec![1] } else { spec.seeds.clone() };
    Ok(PreparedRun {
        original: file.original,
        anchors: file.anchors,
        graph: file.graph,
        doors: file.doors,
        protocol,
        kind,
        round_robin: spec.round_robin,
        seeds,
        config,
    })
}

pub fn policy_for(kind: SchedulerKind, round_robin: bool, seed: u64) -> SchedulerPolicy {
    let activation = if round_robin && kind != SchedulerKind::FSync {
        ActivationPolicy::RoundRobin
    } else {
        ActivationPolicy::SeededRandom(seed)
    };
    SchedulerPolicy { kind, activation, fairness_bound: 8 }
}

pub struct SeedResult {
    pub seed: u64,
    pub outcome: Outcome,
    pub reports: Vec<CheckReport>,
}

pub fn execute(prep: &PreparedRun, seed: u64) -> Result<SeedResult> {
    let policy = policy_for(prep.kind, prep.round_robin, seed);
    let outcome = run(&prep.graph, &prep.doors, &policy, &prep.config)
        .map_err(|e| anyhow!("simulation failed: {e}"))?;
    let reports = check_trace(&outcome.trace, &prep.graph, &prep.doors, prep.protocol);
    Ok(SeedResult { seed, outcome, reports })
}

fn write_artifacts(
    dir: &Path,
    prep: &PreparedRun,
    result: &SeedResult,
    frames: bool,
) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create {}", dir.display()))?;
    jsonl::save_trace(
        &dir.join("trace.jsonl"),
        &result.outcome.trace,
        &prep.original,
        &prep.anchors,
    )?;
    jsonl::save_report(&dir.join("report.jsonl"), &result.reports)?;
    if frames {
        let fdir = dir.join("frames");
        std::fs::create_dir_all(&fdir)?;
        for (i, text) in dot::frames(&result.outcome.trace, &prep.graph, &prep.doors) {
            std::fs::write(fdir.join(format!("epoch-{i}.dot")), text)?;
        }
    }
    Ok(())
}

/// Runs every seed, writes artifacts, prints one line per monitor, and
/// returns the process exit code: 0 when every hard monitor of every seed
/// passed, 1 otherwise.
pub fn cmd_run(spec: RunSpec) -> Result<i32> {
    let frames = spec.frames;
    let out_dir = spec.out.clone();
    let prep = prepare(spec)?;
    let single = prep.seeds.len() == 1;
    let mut all_pass = true;
    for &seed in &prep.seeds {
        let result = execute(&prep, seed)?;
        let dir = if single {
            out_dir.clone()
        } else {
            out_dir.join(format!("seed-{seed}"))
        };
        write_artifacts(&dir, &prep, &result, frames)?;
        let o = &result.outcome;
        println!(
            "seed {seed}: terminated={} occupied={} epochs={} collisions={}",
            o.terminated, o.mis_size, o.epochs, o.collision_count
        );
        for r in &result.reports {
            let status = if !r.evaluated {
                "skipped"
            } else if r.pass {
                "pass"
            } else {
                "FAIL"
            };
            let class = if r.hard { "hard" } else { "soft" };
            println!("  {:<22} {status} ({class})", r.name);
            if r.hard && !r.pass {
                all_pass = false;
            }
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

pub struct SweepSpec {
    pub n_min: usize,
    pub n_max: usize,
    pub max_deg: u16,
    pub doors: usize,
    pub seeds: u64,
    pub protocol: Option<Protocol>,
    pub sched: Option<SchedulerKind>,
    pub out: PathBuf,
}

struct SweepRow {
    n: usize,
    seed: u64,
    sched: SchedulerKind,
    m: usize,
    epochs: usize,
    bound: usize,
    pass: bool,
}

/// Deterministic random instance for sweeps: the graph, anchors and run all
/// derive from `(n, seed)`.
pub fn sweep_instance(
    n: usize,
    max_deg: u16,
    doors: usize,
    seed: u64,
) -> Result<(PortGraph, Vec<VertexId>, PortGraph, DoorAttachment)> {
    let h = PortGraph::random_connected(n, max_deg, seed.wrapping_mul(0x9e37_79b9).wrapping_add(n as u64))
        .map_err(|e| anyhow!("generator: {e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32 ^ 0x5eed);
    let mut anchors = std::collections::BTreeSet::new();
    while anchors.len() < doors.min(n) {
        anchors.insert(VertexId(rng.gen_range(0..n as u32)));
    }
    let anchors: Vec<VertexId> = anchors.into_iter().collect();
    let (g, att) = h.attach_doors(&anchors).map_err(|e| anyhow!("doors: {e}"))?;
    Ok((h, anchors, g, att))
}

/// Batch runs over a size range; writes `summary.tsv` and prints the
/// empirical epochs/m^2 constant.
pub fn cmd_sweep(spec: SweepSpec) -> Result<i32> {
    if spec.n_min == 0 || spec.n_min > spec.n_max {
        bail!("empty size range");
    }
    if spec.seeds == 0 {
        bail!("need at least one seed per size");
    }
    let protocol = spec.protocol.unwrap_or(if spec.doors > 1 {
        Protocol::MultInd
    } else {
        Protocol::Ind
    });
    let scheds: Vec<SchedulerKind> = match spec.sched {
        Some(k) => vec![k],
        None => vec![SchedulerKind::FSync, SchedulerKind::SSync],
    };
    let mut jobs = Vec::new();
    for n in spec.n_min..=spec.n_max {
        for seed in 1..=spec.seeds {
            for &sched in &scheds {
                jobs.push((n, seed, sched));
            }
        }
    }
    let rows: Vec<Result<SweepRow>> = jobs
        .into_iter()
        .map(|(n, seed, sched)| -> Result<SweepRow> {
            let (_, _, g, doors) = sweep_instance(n, spec.max_deg, spec.doors, seed)?;
            let policy = policy_for(sched, false, seed);
            let config = SimulationConfig::new(protocol);
            let outcome = run(&g, &doors, &policy, &config)
                .map_err(|e| anyhow!("simulation n={n} seed={seed}: {e}"))?;
            let reports = check_trace(&outcome.trace, &g, &doors, protocol);
            let m = outcome.mis_size;
            let bound = 7 * m * (m + 1) / 2 + 4 * m;
            let mut pass = outcome.terminated
                && outcome.collision_count == 0
                && reports.iter().filter(|r| r.hard).all(|r| r.pass);
            if g.vertex_count() <= 20 && pass {
                pass = enumerate_mis(&g)
                    .map(|all| all.contains(&outcome.final_occupied))
                    .unwrap_or(false);
            }
            Ok(SweepRow { n, seed, sched, m, epochs: outcome.epochs, bound, pass })
        })
        .collect();
    let mut table = Vec::new();
    for row in rows {
        table.push(row?);
    }
    table.sort_by_key(|r| (r.n, r.seed, r.sched as u8));

    let mut tsv = String::from("n\tseed\tsched\tm\tepochs\tbound\tpass\n");
    let mut worst_ratio = 0f64;
    let mut all_pass = true;
    for r in &table {
        let _ = writeln!(
            tsv,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.n, r.seed, r.sched, r.m, r.epochs, r.bound, r.pass
        );
        if r.m > 0 {
            worst_ratio = worst_ratio.max(r.epochs as f64 / (r.m * r.m) as f64);
        }
        all_pass &= r.pass;
    }
    std::fs::create_dir_all(&spec.out)?;
    std::fs::write(spec.out.join("summary.tsv"), tsv)?;
    println!(
        "{} runs, {} sizes, empirical epochs/m^2 constant: {:.3}",
        table.len(),
        spec.n_max - spec.n_min + 1,
        worst_ratio
    );
    Ok(if all_pass { 0 } else { 1 })
}

/// Re-executes a recorded trace against a graph file and compares event by
/// event.
pub fn cmd_replay(trace_path: &Path, graph_path: &Path) -> Result<i32> {
    let file = format::load(graph_path)?;
    let (_, trace) = jsonl::load_trace(trace_path)?;
    match replay(&trace, &file.graph, &file.doors) {
        Ok(()) => {
            println!("replay ok: {} events reproduced", trace.events.len());
            Ok(0)
        }
        Err(d) => {
            println!(
                "replay diverged at event {}: expected {:?}, got {:?}",
                d.index, d.expected, d.actual
            );
            Ok(1)
        }
    }
}
