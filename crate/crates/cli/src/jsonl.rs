//! JSON-lines serialization of traces and check reports.
//!
//! A trace file starts with one header object carrying the scheduler policy,
//! the configuration, and the original graph with its anchors — enough to
//! re-execute the run. Every further line is one event. Identical runs
//! produce byte-identical files.

use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use misfill_core::engine::{
    ActivationPolicy, SchedulerKind, SchedulerPolicy, Script, SimulationConfig, TraceLevel,
};
use misfill_core::graph::{EdgeSpec, Port, PortGraph, VertexId};
use misfill_core::protocol::Protocol;
use misfill_core::robot::{Color, RobotState, TwoHopPath};
use misfill_core::trace::{EventKind, RobotId, Trace, TraceEvent};
use misfill_core::verifier::CheckReport;

pub const TRACE_FORMAT: &str = "misfill-trace/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActivationRepr {
    RoundRobin,
    Random { seed: u64 },
    Scripted { rounds: Vec<Vec<u32>>, delays: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRepr {
    pub n: usize,
    pub edges: Vec<EdgeSpec>,
    pub doors: Vec<u32>,
}

impl GraphRepr {
    pub fn new(original: &PortGraph, anchors: &[VertexId]) -> Self {
        GraphRepr {
            n: original.vertex_count(),
            edges: original.edge_list(),
            doors: anchors.iter().map(|a| a.0).collect(),
        }
    }

    pub fn build(&self) -> Result<(PortGraph, misfill_core::graph::DoorAttachment)> {
        let h = PortGraph::build(self.n, &self.edges)
            .map_err(|e| anyhow!("trace header graph: {e}"))?;
        let anchors: Vec<VertexId> = self.doors.iter().map(|&a| VertexId(a)).collect();
        h.attach_doors(&anchors)
            .map_err(|e| anyhow!("trace header doors: {e}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub protocol: String,
    pub scheduler: String,
    pub activation: ActivationRepr,
    pub fairness: u32,
    pub visibility: Option<u32>,
    pub check_radius: Option<u32>,
    pub max_ticks: Option<u64>,
    pub max_delay: u32,
    pub trace_level: String,
    pub graph: GraphRepr,
}

impl Header {
    pub fn new(trace: &Trace, graph: GraphRepr) -> Self {
        Header {
            format: TRACE_FORMAT.to_string(),
            protocol: trace.config.protocol.to_string(),
            scheduler: trace.policy.kind.to_string(),
            activation: match &trace.policy.activation {
                ActivationPolicy::RoundRobin => ActivationRepr::RoundRobin,
                ActivationPolicy::SeededRandom(s) => ActivationRepr::Random { seed: *s },
                ActivationPolicy::Scripted(sc) => ActivationRepr::Scripted {
                    rounds: sc.rounds.clone(),
                    delays: sc.delays.clone(),
                },
            },
            fairness: trace.policy.fairness_bound,
            visibility: trace.config.visibility,
            check_radius: trace.config.check_radius,
            max_ticks: trace.config.max_ticks,
            max_delay: trace.config.max_delay,
            trace_level: match trace.config.trace_level {
                TraceLevel::Full => "full".to_string(),
                TraceLevel::Sparse => "sparse".to_string(),
            },
            graph,
        }
    }

    pub fn policy(&self) -> Result<SchedulerPolicy> {
        let kind = match self.scheduler.as_str() {
            "fsync" => SchedulerKind::FSync,
            "ssync" => SchedulerKind::SSync,
            "async" => SchedulerKind::Async,
            other => bail!("unknown scheduler `{other}`"),
        };
        let activation = match &self.activation {
            ActivationRepr::RoundRobin => ActivationPolicy::RoundRobin,
            ActivationRepr::Random { seed } => ActivationPolicy::SeededRandom(*seed),
            ActivationRepr::Scripted { rounds, delays } => ActivationPolicy::Scripted(Script {
                rounds: rounds.clone(),
                delays: delays.clone(),
            }),
        };
        Ok(SchedulerPolicy { kind, activation, fairness_bound: self.fairness })
    }

    pub fn config(&self) -> Result<SimulationConfig> {
        let protocol = match self.protocol.as_str() {
            "ind" => Protocol::Ind,
            "multind" => Protocol::MultInd,
            other => bail!("unknown protocol `{other}`"),
        };
        Ok(SimulationConfig {
            protocol,
            visibility: self.visibility,
            check_radius: self.check_radius,
            max_ticks: self.max_ticks,
            max_delay: self.max_delay,
            trace_level: match self.trace_level.as_str() {
                "sparse" => TraceLevel::Sparse,
                _ => TraceLevel::Full,
            },
        })
    }
}

/// One trace event as a flat JSON object; absent fields are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventLine {
    pub t: u64,
    pub s: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u32>,
    pub k: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub path: Option<[u16; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub state: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub color: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub robots: Option<Vec<u32>>,
}

impl EventLine {
    fn bare(e: &TraceEvent, kind: &str) -> Self {
        EventLine {
            t: e.tick,
            s: e.seq,
            r: e.robot.map(|RobotId(i)| i),
            k: kind.to_string(),
            v: None,
            rank: None,
            path: None,
            state: None,
            color: None,
            robots: None,
        }
    }
}

fn path_repr(p: &TwoHopPath) -> [u16; 2] {
    [p.first.get(), p.second.get()]
}

fn path_from(p: [u16; 2]) -> TwoHopPath {
    TwoHopPath { first: Port(p[0]), second: Port(p[1]) }
}

pub fn event_to_line(e: &TraceEvent) -> EventLine {
    match &e.kind {
        EventKind::Spawn { vertex, rank } => {
            let mut l = EventLine::bare(e, "spawn");
            l.v = Some(vertex.0);
            l.rank = Some(*rank);
            l
        }
        EventKind::Look { vertex } => {
            let mut l = EventLine::bare(e, "look");
            l.v = Some(vertex.0);
            l
        }
        EventKind::ComputeDone { moved } => {
            let mut l = EventLine::bare(e, "compute");
            l.path = moved.as_ref().map(path_repr);
            l
        }
        EventKind::StateChange { state } => {
            let mut l = EventLine::bare(e, "state");
            l.state = Some(state.to_string());
            l
        }
        EventKind::ColorChange { color } => {
            let mut l = EventLine::bare(e, "color");
            l.color = Some(color.to_string());
            l
        }
        EventKind::MoveStart { from, path } => {
            let mut l = EventLine::bare(e, "move_start");
            l.v = Some(from.0);
            l.path = Some(path_repr(path));
            l
        }
        EventKind::Hop { vertex } => {
            let mut l = EventLine::bare(e, "hop");
            l.v = Some(vertex.0);
            l
        }
        EventKind::MoveEnd { vertex } => {
            let mut l = EventLine::bare(e, "move_end");
            l.v = Some(vertex.0);
            l
        }
        EventKind::Finish { vertex } => {
            let mut l = EventLine::bare(e, "finish");
            l.v = Some(vertex.0);
            l
        }
        EventKind::Collision { vertex, robots } => {
            let mut l = EventLine::bare(e, "collision");
            l.v = Some(vertex.0);
            l.robots = Some(robots.iter().map(|RobotId(i)| *i).collect());
            l
        }
    }
}

pub fn line_to_event(l: &EventLine) -> Result<TraceEvent> {
    let need_v = || l.v.map(VertexId).ok_or_else(|| anyhow!("event `{}` missing vertex", l.k));
    let kind = match l.k.as_str() {
        "spawn" => EventKind::Spawn {
            vertex: need_v()?,
            rank: l.rank.ok_or_else(|| anyhow!("spawn missing rank"))?,
        },
        "look" => EventKind::Look { vertex: need_v()? },
        "compute" => EventKind::ComputeDone { moved: l.path.map(path_from) },
        "state" => EventKind::StateChange {
            state: match l.state.as_deref() {
                Some("none") => RobotState::None,
                Some("follower") => RobotState::Follower,
                Some("leader") => RobotState::Leader,
                Some("finished") => RobotState::Finished,
                other => bail!("unknown state {other:?}"),
            },
        },
        "color" => EventKind::ColorChange {
            color: l
                .color
                .as_deref()
                .and_then(|s| s.parse::<Color>().ok())
                .ok_or_else(|| anyhow!("bad color {:?}", l.color))?,
        },
        "move_start" => EventKind::MoveStart {
            from: need_v()?,
            path: path_from(l.path.ok_or_else(|| anyhow!("move_start missing path"))?),
        },
        "hop" => EventKind::Hop { vertex: need_v()? },
        "move_end" => EventKind::MoveEnd { vertex: need_v()? },
        "finish" => EventKind::Finish { vertex: need_v()? },
        "collision" => EventKind::Collision {
            vertex: need_v()?,
            robots: l
                .robots
                .clone()
                .unwrap_or_default()
                .into_iter()
                .map(RobotId)
                .collect(),
        },
        other => bail!("unknown event kind `{other}`"),
    };
    Ok(TraceEvent {
        tick: l.t,
        seq: l.s,
        robot: l.r.map(RobotId),
        kind,
    })
}

pub fn write_trace(
    mut sink: impl Write,
    trace: &Trace,
    original: &PortGraph,
    anchors: &[VertexId],
) -> Result<()> {
    let header = Header::new(trace, GraphRepr::new(original, anchors));
    serde_json::to_writer(&mut sink, &header)?;
    sink.write_all(b"\n")?;
    for e in &trace.events {
        serde_json::to_writer(&mut sink, &event_to_line(e))?;
        sink.write_all(b"\n")?;
    }
    Ok(())
}

pub fn save_trace(
    path: &Path,
    trace: &Trace,
    original: &PortGraph,
    anchors: &[VertexId],
) -> Result<()> {
    let file = std::fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    write_trace(std::io::BufWriter::new(file), trace, original, anchors)
}

/// Reads a trace back: the header and the reconstructed core trace.
pub fn load_trace(path: &Path) -> Result<(Header, Trace)> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| anyhow!("empty trace file"))??;
    let header: Header = serde_json::from_str(&header_line).context("trace header")?;
    if header.format != TRACE_FORMAT {
        bail!("unsupported trace format `{}`", header.format);
    }
    let mut events = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: EventLine =
            serde_json::from_str(&line).with_context(|| format!("trace line {}", i + 2))?;
        events.push(line_to_event(&parsed)?);
    }
    let trace = Trace {
        policy: header.policy()?,
        config: header.config()?,
        events,
    };
    Ok((header, trace))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportLine {
    pub check: String,
    pub pass: bool,
    pub hard: bool,
    pub evaluated: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tick: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl ReportLine {
    pub fn new(r: &CheckReport) -> Self {
        ReportLine {
            check: r.name.to_string(),
            pass: r.pass,
            hard: r.hard,
            evaluated: r.evaluated,
            tick: r.violation.as_ref().map(|v| v.tick),
            detail: r.violation.as_ref().map(|v| v.detail.clone()),
        }
    }
}

pub fn save_report(path: &Path, reports: &[CheckReport]) -> Result<()> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(&ReportLine::new(r))?);
        out.push('\n');
    }
    std::fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use misfill_core::engine::{run, SchedulerPolicy, SimulationConfig};

    #[test]
    fn traces_round_trip_through_jsonl() {
        let h = PortGraph::random_connected(6, 3, 3).unwrap();
        let anchors = vec![VertexId(1)];
        let (g, doors) = h.attach_doors(&anchors).unwrap();
        let cfg = SimulationConfig::new(Protocol::Ind);
        let out = run(&g, &doors, &SchedulerPolicy::ssync_random(9), &cfg).unwrap();

        let mut buf = Vec::new();
        write_trace(&mut buf, &out.trace, &h, &anchors).unwrap();
        let tmp = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(tmp.path(), &buf).unwrap();
        let (header, reread) = load_trace(tmp.path()).unwrap();
        assert_eq!(reread, out.trace);
        let (g2, doors2) = header.graph.build().unwrap();
        assert_eq!(g2, g);
        assert_eq!(doors2.count(), doors.count());
    }
}
