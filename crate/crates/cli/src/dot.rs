//! Graphviz DOT snapshots of the configuration at each epoch boundary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use misfill_core::engine::epoch_boundaries;
use misfill_core::graph::{DoorAttachment, PortGraph, VertexId};
use misfill_core::trace::{EventKind, Trace};

/// One DOT document per epoch, rendering the occupancy at the epoch's final
/// tick. Vertices are labeled with their id and the occupant's color; door
/// vertices are boxed.
pub fn frames(trace: &Trace, g: &PortGraph, doors: &DoorAttachment) -> Vec<(usize, String)> {
    let bounds = epoch_boundaries(trace);
    let mut out = Vec::with_capacity(bounds.len());
    let mut occupancy: BTreeMap<VertexId, String> = BTreeMap::new();
    let mut positions: BTreeMap<u32, VertexId> = BTreeMap::new();
    let mut colors: BTreeMap<u32, String> = BTreeMap::new();
    let mut events = trace.events.iter().peekable();
    for (epoch, &end) in bounds.iter().enumerate() {
        while let Some(e) = events.peek() {
            if e.tick > end {
                break;
            }
            let e = events.next().unwrap();
            let id = match e.robot {
                Some(r) => r.0,
                None => continue,
            };
            match &e.kind {
                EventKind::Spawn { vertex, .. } => {
                    positions.insert(id, *vertex);
                    colors.insert(id, "ON".to_string());
                }
                EventKind::ColorChange { color } => {
                    colors.insert(id, color.to_string());
                }
                EventKind::Hop { vertex } => {
                    positions.insert(id, *vertex);
                }
                _ => {}
            }
        }
        occupancy.clear();
        for (id, v) in &positions {
            occupancy.insert(*v, colors.get(id).cloned().unwrap_or_default());
        }
        out.push((epoch, render(g, doors, &occupancy, epoch, end)));
    }
    out
}

fn render(
    g: &PortGraph,
    doors: &DoorAttachment,
    occupancy: &BTreeMap<VertexId, String>,
    epoch: usize,
    end_tick: u64,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph epoch_{epoch} {{");
    let _ = writeln!(s, "  label=\"epoch {epoch} (tick {end_tick})\";");
    let _ = writeln!(s, "  node [shape=circle];");
    for v in g.vertices() {
        let shape = if doors.rank_of(v).is_some() { " shape=box" } else { "" };
        match occupancy.get(&v) {
            Some(color) => {
                let _ = writeln!(
                    s,
                    "  v{} [label=\"{}\\n{}\" style=filled fillcolor=lightgray{}];",
                    v.0, v.0, color, shape
                );
            }
            None => {
                let _ = writeln!(s, "  v{} [label=\"{}\"{}];", v.0, v.0, shape);
            }
        }
    }
    for (u, _, v, _) in g.edge_list() {
        let _ = writeln!(s, "  v{u} -- v{v};");
    }
    let _ = writeln!(s, "}}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use misfill_core::engine::{run, SchedulerPolicy, SimulationConfig};
    use misfill_core::protocol::Protocol;

    #[test]
    fn emits_one_frame_per_epoch() {
        let h = PortGraph::build(1, &[]).unwrap();
        let (g, doors) = h.attach_doors(&[VertexId(0)]).unwrap();
        let cfg = SimulationConfig::new(Protocol::Ind);
        let out = run(&g, &doors, &SchedulerPolicy::fsync(), &cfg).unwrap();
        let frames = frames(&out.trace, &g, &doors);
        assert_eq!(frames.len(), out.epochs);
        assert!(frames[0].1.contains("graph epoch_0"));
        assert!(frames.last().unwrap().1.contains("OFF"));
    }
}
