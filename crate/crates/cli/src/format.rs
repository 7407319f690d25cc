//! Line-oriented text format for graphs, doors, and run settings.
//!
//! ```text
//! # comment
//! graph <n>
//! edge <u> <pu> <v> <pv>      # 0-based vertex ids, 1-based ports
//! door <i> <anchor>           # i = 1 is the strongest rank
//! set <key> <value>           # optional run settings, flags override
//! ```
//!
//! Door arms are attached by the loader after all `door` lines are read, in
//! rank order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use misfill_core::graph::{DoorAttachment, EdgeSpec, PortGraph, VertexId};

/// Parsed file: the original graph and its anchors, the finished graph with
/// arms attached, the doors, and any `set` lines.
pub struct GraphFile {
    pub original: PortGraph,
    pub anchors: Vec<VertexId>,
    pub graph: PortGraph,
    pub doors: DoorAttachment,
    pub settings: BTreeMap<String, String>,
}

pub fn parse(text: &str) -> Result<GraphFile> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<EdgeSpec> = Vec::new();
    let mut door_lines: BTreeMap<u16, u32> = BTreeMap::new();
    let mut settings = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        let at = lineno + 1;
        match keyword {
            "graph" => {
                if n.is_some() {
                    bail!("line {at}: duplicate graph header");
                }
                let count: usize = one_arg(&rest, at, "graph <n>")?;
                n = Some(count);
            }
            "edge" => {
                if rest.len() != 4 {
                    bail!("line {at}: expected `edge <u> <pu> <v> <pv>`");
                }
                let u: u32 = num(rest[0], at)?;
                let pu: u16 = num(rest[1], at)?;
                let v: u32 = num(rest[2], at)?;
                let pv: u16 = num(rest[3], at)?;
                edges.push((u, pu, v, pv));
            }
            "door" => {
                if rest.len() != 2 {
                    bail!("line {at}: expected `door <rank> <anchor>`");
                }
                let rank: u16 = num(rest[0], at)?;
                let anchor: u32 = num(rest[1], at)?;
                if rank == 0 {
                    bail!("line {at}: door ranks start at 1");
                }
                if door_lines.insert(rank, anchor).is_some() {
                    bail!("line {at}: duplicate door rank {rank}");
                }
            }
            "set" => {
                if rest.len() != 2 {
                    bail!("line {at}: expected `set <key> <value>`");
                }
                settings.insert(rest[0].to_string(), rest[1].to_string());
            }
            other => bail!("line {at}: unknown keyword `{other}`"),
        }
    }
    let n = n.ok_or_else(|| anyhow!("missing `graph <n>` header"))?;
    let h = PortGraph::build(n, &edges).map_err(|e| anyhow!("invalid graph: {e}"))?;
    // ranks must be exactly 1..=k
    let k = door_lines.len();
    let mut anchors = Vec::with_capacity(k);
    for (i, (rank, anchor)) in door_lines.iter().enumerate() {
        if *rank as usize != i + 1 {
            bail!("door ranks must be exactly 1..={k}, found rank {rank}");
        }
        anchors.push(VertexId(*anchor));
    }
    let (graph, doors) = h
        .attach_doors(&anchors)
        .map_err(|e| anyhow!("invalid doors: {e}"))?;
    Ok(GraphFile { original: h, anchors, graph, doors, settings })
}

pub fn load(path: &Path) -> Result<GraphFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read graph file {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

/// Renders an original graph plus door anchors in the text format.
pub fn render(h: &PortGraph, anchors: &[VertexId]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {}", h.vertex_count());
    for (u, pu, v, pv) in h.edge_list() {
        let _ = writeln!(out, "edge {u} {pu} {v} {pv}");
    }
    for (i, a) in anchors.iter().enumerate() {
        let _ = writeln!(out, "door {} {}", i + 1, a.0);
    }
    out
}

fn one_arg<T: std::str::FromStr>(rest: &[&str], at: usize, usage: &str) -> Result<T> {
    if rest.len() != 1 {
        bail!("line {at}: expected `{usage}`");
    }
    num(rest[0], at)
}

fn num<T: std::str::FromStr>(s: &str, at: usize) -> Result<T> {
    s.parse()
        .map_err(|_| anyhow!("line {at}: cannot parse `{s}`"))
}
