//! Timestamped event log of one simulation run.
//!
//! The trace is the sole input of the verifier's monitors and carries enough
//! to replay the run: the scheduler policy, the resolved configuration, and
//! every observable event in deterministic order. Ticks are logical time;
//! `seq` orders events within one tick.

use alloc::vec::Vec;
use core::fmt;

use crate::engine::{SchedulerPolicy, SimulationConfig};
use crate::graph::VertexId;
use crate::robot::{Color, RobotState, TwoHopPath};

/// Simulation-internal robot id, assigned in spawn order. Never exposed to
/// protocol code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RobotId(pub u32);

impl fmt::Display for RobotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    /// Robot placed at a door with the initial light.
    Spawn { vertex: VertexId, rank: u16 },
    /// Look phase: snapshot taken at this vertex.
    Look { vertex: VertexId },
    /// Compute phase finished; `moved` carries the chosen two-hop path.
    ComputeDone { moved: Option<TwoHopPath> },
    StateChange { state: RobotState },
    ColorChange { color: Color },
    MoveStart { from: VertexId, path: TwoHopPath },
    /// One hop committed; the robot now occupies `vertex`.
    Hop { vertex: VertexId },
    MoveEnd { vertex: VertexId },
    /// Terminal event of a robot.
    Finish { vertex: VertexId },
    /// Two robots claimed the same vertex or edge. Conforming runs never
    /// produce this; the engine halts on the first one.
    Collision { vertex: VertexId, robots: Vec<RobotId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub tick: u64,
    pub seq: u32,
    pub robot: Option<RobotId>,
    pub kind: EventKind,
}

/// Complete record of a run: setup plus ordered events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub policy: SchedulerPolicy,
    pub config: SimulationConfig,
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn last_tick(&self) -> u64 {
        self.events.last().map(|e| e.tick).unwrap_or(0)
    }

    /// Events of one robot in order.
    pub fn of_robot(&self, id: RobotId) -> impl Iterator<Item = &TraceEvent> {
        self.events.iter().filter(move |e| e.robot == Some(id))
    }

    pub fn robot_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Spawn { .. }))
            .count()
    }
}
