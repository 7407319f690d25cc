//! Simulation and verification toolkit for filling a maximal independent set
//! of an anonymous, port-labeled graph with a swarm of myopic luminous robots.
//!
//! Robots enter the graph through dedicated door vertices, one at a time per
//! door, and coordinate purely through visible colors under Look-Compute-Move
//! scheduling. The crate provides:
//!
//! * [`graph`] — port-labeled graphs, door attachment and distance queries;
//! * [`robot`] — colors, persistent robot variables and the local snapshot a
//!   robot sees during its Look phase;
//! * [`protocol`] — the single-door and multi-door filling protocols as pure
//!   step functions over `(vars, snapshot)`;
//! * [`engine`] — discrete-event execution under FSYNC/SSYNC/ASYNC
//!   adversaries with trace emission, epoch accounting and replay;
//! * [`verifier`] — maximal-independent-set oracles and trace monitors that
//!   turn the protocol's safety and progress claims into pass/fail checks.
//!
//! The crate is `no_std` + `alloc` compatible; all IO lives in the companion
//! CLI crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod engine;
pub mod graph;
pub mod protocol;
pub mod robot;
pub mod trace;
pub mod verifier;

pub use engine::{run, ActivationPolicy, Outcome, SchedulerKind, SchedulerPolicy, SimulationConfig};
pub use graph::{DoorAttachment, Port, PortGraph, VertexId};
pub use protocol::{Action, Protocol, StepResult};
pub use robot::{Color, RobotState, RobotVars, Snapshot};
pub use trace::{EventKind, Trace, TraceEvent};
