//! Discrete-event execution of Look-Compute-Move cycles under adversarial
//! schedulers.
//!
//! Time is a logical tick counter. Under FSYNC every non-finished robot runs
//! one atomic cycle per tick; under SSYNC an adversary-chosen subset does;
//! under ASYNC each cycle decomposes into Look, a delayed move start, and
//! per-hop commits, so robots observe each other mid-move. A vacated door
//! vertex receives a fresh robot on the following tick until a robot
//! finishes on the door itself.
//!
//! Runs are pure functions of `(graph, doors, policy, config)`: all
//! randomness flows from the seeded activation policy, and every
//! iteration order is fixed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{DoorAttachment, PortGraph, VertexId};
use crate::protocol::{step, Action, Protocol, ProtocolParams, ProtocolViolation};
use crate::robot::{RobotState, RobotVars, SeenRobot, Snapshot, TwoHopPath};
use crate::trace::{EventKind, RobotId, Trace, TraceEvent};

/// How cycles interleave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulerKind {
    /// Everybody, every round, atomically.
    FSync,
    /// An adversary-chosen subset per round, atomically within the round.
    SSync,
    /// Phases decompose into ticks with adversarial finite delays.
    Async,
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchedulerKind::FSync => write!(f, "fsync"),
            SchedulerKind::SSync => write!(f, "ssync"),
            SchedulerKind::Async => write!(f, "async"),
        }
    }
}

/// Who gets activated (SSYNC) or how long delays run (ASYNC).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActivationPolicy {
    /// One robot per round, cycling by id; unit delays under ASYNC.
    RoundRobin,
    /// Coin-flip subsets per round, or uniform delays in `1..=max_delay`.
    SeededRandom(u64),
    /// Explicit activation sets per round / explicit delay sequence.
    Scripted(Script),
}

/// Script payload: `rounds[r]` lists robot ids activated in SSYNC round `r`
/// (exhausted script means everyone); `delays` are consumed one per delay
/// decision under ASYNC (exhausted means 1).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub rounds: Vec<Vec<u32>>,
    pub delays: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulerPolicy {
    pub kind: SchedulerKind,
    pub activation: ActivationPolicy,
    /// Max rounds a non-finished robot may stay inactive under SSYNC random
    /// activation before it is forced in. Epochs are unbounded without it.
    pub fairness_bound: u32,
}

impl SchedulerPolicy {
    pub fn fsync() -> Self {
        SchedulerPolicy {
            kind: SchedulerKind::FSync,
            activation: ActivationPolicy::RoundRobin,
            fairness_bound: 8,
        }
    }

    pub fn ssync_random(seed: u64) -> Self {
        SchedulerPolicy {
            kind: SchedulerKind::SSync,
            activation: ActivationPolicy::SeededRandom(seed),
            fairness_bound: 8,
        }
    }

    pub fn ssync_scripted(rounds: Vec<Vec<u32>>) -> Self {
        SchedulerPolicy {
            kind: SchedulerKind::SSync,
            activation: ActivationPolicy::Scripted(Script { rounds, delays: Vec::new() }),
            fairness_bound: 8,
        }
    }

    pub fn async_random(seed: u64) -> Self {
        SchedulerPolicy {
            kind: SchedulerKind::Async,
            activation: ActivationPolicy::SeededRandom(seed),
            fairness_bound: 8,
        }
    }
}

/// Which events land in the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceLevel {
    /// Everything, including Look and Compute events.
    #[default]
    Full,
    /// Spawns, colors, states, moves and collisions only. Epoch accounting
    /// needs the full level.
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationConfig {
    pub protocol: Protocol,
    /// Snapshot radius; defaults to the protocol's (3 single door, 5
    /// multi door). Values below the default break correctness and exist
    /// for the visibility counterexamples.
    pub visibility: Option<u32>,
    /// Radius of the scan around candidate targets; defaults per protocol.
    pub check_radius: Option<u32>,
    /// Safety cutoff; defaults to `64 * (n^2 + n)`.
    pub max_ticks: Option<u64>,
    /// Bound on adversarial delays and per-hop durations under ASYNC.
    pub max_delay: u32,
    pub trace_level: TraceLevel,
}

impl SimulationConfig {
    pub fn new(protocol: Protocol) -> Self {
        SimulationConfig {
            protocol,
            visibility: None,
            check_radius: None,
            max_ticks: None,
            max_delay: 5,
            trace_level: TraceLevel::Full,
        }
    }
}

/// Result of one run. `terminated` means every spawned robot finished and
/// every door is sealed by a finished robot. A conforming protocol never
/// produces collisions; on the first one the engine stops.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub terminated: bool,
    pub final_occupied: BTreeSet<VertexId>,
    pub mis_size: usize,
    pub epochs: usize,
    pub collision_count: usize,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimError {
    /// The graph has no doors attached.
    EmptyDoorList,
    /// Config values out of range (zero visibility, zero max ticks).
    BadConfig(&'static str),
    /// The protocol step rejected its input; this is an engine bug.
    Protocol(ProtocolViolation),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::EmptyDoorList => write!(f, "graph has no doors"),
            SimError::BadConfig(what) => write!(f, "bad config: {what}"),
            SimError::Protocol(v) => write!(f, "{v}"),
        }
    }
}

impl core::error::Error for SimError {}

impl From<ProtocolViolation> for SimError {
    fn from(v: ProtocolViolation) -> Self {
        SimError::Protocol(v)
    }
}

/// First difference between a recorded trace and its re-execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayDivergence {
    pub index: usize,
    pub expected: Option<TraceEvent>,
    pub actual: Option<TraceEvent>,
}

impl fmt::Display for ReplayDivergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "replay diverged at event {}", self.index)
    }
}

struct MoveProg {
    from: VertexId,
    path: TwoHopPath,
    mid: VertexId,
    to: VertexId,
    back: TwoHopPath,
    /// 0 = waiting to start, 1 = first hop in flight, 2 = second hop.
    hop: u8,
    due: u64,
}

struct Body {
    vars: RobotVars,
    at: VertexId,
    in_transit: bool,
    next_wake: u64,
    moving: Option<MoveProg>,
    idle_rounds: u32,
}

struct World<'a> {
    g: &'a PortGraph,
    doors: &'a DoorAttachment,
    params: ProtocolParams,
    visibility: u32,
    max_delay: u32,
    trace_level: TraceLevel,
    bodies: Vec<Body>,
    door_closed: Vec<bool>,
    events: Vec<TraceEvent>,
    seq: u32,
    tick: u64,
    rng: ChaCha8Rng,
    script: Script,
    script_round: usize,
    script_delay: usize,
    rr_cursor: usize,
    collisions: usize,
    /// Edge reservations under ASYNC: unordered edge -> (robot, busy until).
    edge_busy: BTreeMap<(VertexId, VertexId), (usize, u64)>,
}

impl<'a> World<'a> {
    fn emit(&mut self, robot: Option<usize>, kind: EventKind) {
        if matches!(self.trace_level, TraceLevel::Sparse)
            && matches!(kind, EventKind::Look { .. } | EventKind::ComputeDone { .. })
        {
            return;
        }
        self.events.push(TraceEvent {
            tick: self.tick,
            seq: self.seq,
            robot: robot.map(|i| RobotId(i as u32)),
            kind,
        });
        self.seq += 1;
    }

    fn occupancy(&self) -> BTreeMap<VertexId, SeenRobot> {
        self.bodies
            .iter()
            .map(|b| {
                (b.at, SeenRobot { color: b.vars.color, in_transit: b.in_transit })
            })
            .collect()
    }

    fn occupied(&self, v: VertexId) -> Option<usize> {
        self.bodies.iter().position(|b| b.at == v)
    }

    fn spawn_phase(&mut self) {
        for rank0 in 0..self.doors.count() {
            if self.door_closed[rank0] {
                continue;
            }
            let door = self.doors.doors()[rank0].door;
            if self.occupied(door).is_some() {
                continue;
            }
            let idx = self.bodies.len();
            let rank = (rank0 + 1) as u16;
            self.bodies.push(Body {
                vars: RobotVars::spawned(rank),
                at: door,
                in_transit: false,
                next_wake: self.tick,
                moving: None,
                idle_rounds: 0,
            });
            self.emit(Some(idx), EventKind::Spawn { vertex: door, rank });
        }
    }

    fn all_done(&self) -> bool {
        !self.bodies.is_empty()
            && self.bodies.iter().all(|b| b.vars.state == RobotState::Finished)
            && self.door_closed.iter().all(|&c| c)
    }

    /// Applies the step output, emitting state and color events. Returns the
    /// requested move, already resolved against the graph.
    fn apply_vars(
        &mut self,
        idx: usize,
        new: RobotVars,
        action: Action,
    ) -> Result<Option<MoveProg>, SimError> {
        let at = self.bodies[idx].at;
        let old_state = self.bodies[idx].vars.state;
        let old_color = self.bodies[idx].vars.color;
        if new.state != old_state {
            if new.state == RobotState::Finished {
                self.emit(Some(idx), EventKind::Finish { vertex: at });
                let rank0 = self.bodies[idx].vars.door_rank as usize - 1;
                if self.doors.doors()[rank0].door == at {
                    self.door_closed[rank0] = true;
                }
            } else {
                self.emit(Some(idx), EventKind::StateChange { state: new.state });
            }
        }
        if new.color != old_color {
            self.emit(Some(idx), EventKind::ColorChange { color: new.color });
        }
        self.bodies[idx].vars = new;
        match action {
            Action::Stay => Ok(None),
            Action::Move(path) => {
                let (mid, back_first) = self
                    .g
                    .neighbor_via(at, path.first)
                    .ok_or_else(|| ProtocolViolation(alloc::string::String::from(
                        "move through a nonexistent port",
                    )))?;
                let (to, back_second) = self
                    .g
                    .neighbor_via(mid, path.second)
                    .ok_or_else(|| ProtocolViolation(alloc::string::String::from(
                        "move through a nonexistent second port",
                    )))?;
                Ok(Some(MoveProg {
                    from: at,
                    path,
                    mid,
                    to,
                    back: TwoHopPath { first: back_second, second: back_first },
                    hop: 0,
                    due: self.tick,
                }))
            }
        }
    }

    fn finish_move(&mut self, idx: usize, taken: TwoHopPath, back: TwoHopPath, to: VertexId) {
        let old_color = self.bodies[idx].vars.color;
        self.bodies[idx].vars.complete_move(taken, back);
        self.bodies[idx].at = to;
        self.bodies[idx].in_transit = false;
        self.emit(Some(idx), EventKind::MoveEnd { vertex: to });
        let new_color = self.bodies[idx].vars.color;
        if new_color != old_color {
            self.emit(Some(idx), EventKind::ColorChange { color: new_color });
        }
    }

    fn collision(&mut self, vertex: VertexId, robots: Vec<usize>) {
        self.collisions += 1;
        let ids = robots.iter().map(|&i| RobotId(i as u32)).collect();
        self.emit(None, EventKind::Collision { vertex, robots: ids });
    }
}

fn edge_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Runs one simulation to termination, collision, or the tick cutoff.
pub fn run(
    g: &PortGraph,
    doors: &DoorAttachment,
    policy: &SchedulerPolicy,
    cfg: &SimulationConfig,
) -> Result<Outcome, SimError> {
    if doors.count() == 0 {
        return Err(SimError::EmptyDoorList);
    }
    let mut params = ProtocolParams::new(cfg.protocol, doors.count());
    if let Some(r) = cfg.check_radius {
        params.check_radius = r;
    }
    let visibility = cfg.visibility.unwrap_or(params.visibility);
    if visibility == 0 {
        return Err(SimError::BadConfig("visibility must be at least 1"));
    }
    if cfg.max_delay == 0 {
        return Err(SimError::BadConfig("max_delay must be at least 1"));
    }
    let n = g.vertex_count() as u64;
    let max_ticks = cfg.max_ticks.unwrap_or(64 * (n * n + n));
    if max_ticks == 0 {
        return Err(SimError::BadConfig("max_ticks must be at least 1"));
    }
    let (seed, script) = match &policy.activation {
        ActivationPolicy::RoundRobin => (0, Script::default()),
        ActivationPolicy::SeededRandom(s) => (*s, Script::default()),
        ActivationPolicy::Scripted(sc) => (0, sc.clone()),
    };
    let mut world = World {
        g,
        doors,
        params,
        visibility,
        max_delay: cfg.max_delay,
        trace_level: cfg.trace_level,
        bodies: Vec::new(),
        door_closed: vec![false; doors.count()],
        events: Vec::new(),
        seq: 0,
        tick: 0,
        rng: ChaCha8Rng::seed_from_u64(seed),
        script,
        script_round: 0,
        script_delay: 0,
        rr_cursor: 0,
        collisions: 0,
        edge_busy: BTreeMap::new(),
    };
    let terminated = match policy.kind {
        SchedulerKind::FSync | SchedulerKind::SSync => {
            run_rounds(&mut world, policy, max_ticks)?
        }
        SchedulerKind::Async => run_async(&mut world, policy, max_ticks)?,
    };
    let final_occupied: BTreeSet<VertexId> = world.bodies.iter().map(|b| b.at).collect();
    let mis_size = final_occupied.len();
    let trace = Trace {
        policy: policy.clone(),
        config: cfg.clone(),
        events: world.events,
    };
    let epochs = compute_epochs(&trace);
    Ok(Outcome {
        terminated,
        final_occupied,
        mis_size,
        epochs,
        collision_count: world.collisions,
        trace,
    })
}

/// Atomic-round execution (FSYNC is SSYNC with everyone activated).
fn run_rounds(
    world: &mut World,
    policy: &SchedulerPolicy,
    max_ticks: u64,
) -> Result<bool, SimError> {
    for tick in 0..max_ticks {
        world.tick = tick;
        world.seq = 0;
        world.spawn_phase();
        if world.all_done() {
            return Ok(true);
        }
        let active = pick_active(world, policy);
        // Look against the frozen round-start configuration
        let occ = world.occupancy();
        let mut moves: Vec<(usize, MoveProg)> = Vec::new();
        for &idx in &active {
            let at = world.bodies[idx].at;
            world.emit(Some(idx), EventKind::Look { vertex: at });
            let snap = Snapshot::capture(world.g, &occ, at, world.visibility);
            let res = step(&world.params, &world.bodies[idx].vars, &snap)?;
            let moved = match res.action {
                Action::Move(p) => Some(p),
                Action::Stay => None,
            };
            world.emit(Some(idx), EventKind::ComputeDone { moved });
            if let Some(m) = world.apply_vars(idx, res.vars, res.action)? {
                moves.push((idx, m));
            }
        }
        // simultaneous move commit: every claimed vertex must be empty at
        // round start and claimed at most once, and no edge is traversed
        // twice in the same round
        let mut claims: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        let mut edge_claims: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
        for (idx, m) in &moves {
            claims.entry(m.mid).or_default().push(*idx);
            claims.entry(m.to).or_default().push(*idx);
            edge_claims.entry(edge_key(m.from, m.mid)).or_default().push(*idx);
            edge_claims.entry(edge_key(m.mid, m.to)).or_default().push(*idx);
        }
        let mut bad = false;
        for (v, who) in &claims {
            let occupied = occ.contains_key(v);
            if who.len() > 1 || occupied {
                world.collision(*v, who.clone());
                bad = true;
            }
        }
        for (e, who) in &edge_claims {
            if who.len() > 1 {
                world.collision(e.0, who.clone());
                bad = true;
            }
        }
        if bad {
            return Ok(false);
        }
        for (idx, m) in moves {
            world.emit(Some(idx), EventKind::MoveStart { from: m.from, path: m.path });
            world.emit(Some(idx), EventKind::Hop { vertex: m.mid });
            world.emit(Some(idx), EventKind::Hop { vertex: m.to });
            world.finish_move(idx, m.path, m.back, m.to);
        }
    }
    Ok(world.all_done())
}

/// SSYNC activation set for this round; FSYNC takes everyone.
fn pick_active(world: &mut World, policy: &SchedulerPolicy) -> Vec<usize> {
    let alive: Vec<usize> = world
        .bodies
        .iter()
        .enumerate()
        .filter(|(_, b)| b.vars.state != RobotState::Finished)
        .map(|(i, _)| i)
        .collect();
    if alive.is_empty() {
        return alive;
    }
    let active: Vec<usize> = match (policy.kind, &policy.activation) {
        (SchedulerKind::FSync, _) => alive.clone(),
        (_, ActivationPolicy::RoundRobin) => {
            let pick = alive[world.rr_cursor % alive.len()];
            world.rr_cursor += 1;
            vec![pick]
        }
        (_, ActivationPolicy::SeededRandom(_)) => {
            let mut set: Vec<usize> = Vec::new();
            for &i in &alive {
                let coin = world.rng.gen_bool(0.5);
                if coin || world.bodies[i].idle_rounds + 1 >= policy.fairness_bound {
                    set.push(i);
                }
            }
            if set.is_empty() {
                // deterministic fallback: the longest-idle robot moves
                let pick = *alive
                    .iter()
                    .max_by_key(|&&i| (world.bodies[i].idle_rounds, usize::MAX - i))
                    .unwrap();
                set.push(pick);
            }
            set
        }
        (_, ActivationPolicy::Scripted(_)) => {
            let round = world.script_round;
            world.script_round += 1;
            match world.script.rounds.get(round) {
                Some(ids) => alive
                    .iter()
                    .copied()
                    .filter(|&i| ids.contains(&(i as u32)))
                    .collect(),
                None => alive.clone(),
            }
        }
    };
    for &i in &alive {
        if active.contains(&i) {
            world.bodies[i].idle_rounds = 0;
        } else {
            world.bodies[i].idle_rounds += 1;
        }
    }
    active
}

fn next_delay(world: &mut World, policy: &SchedulerPolicy) -> u64 {
    match &policy.activation {
        ActivationPolicy::RoundRobin => 1,
        ActivationPolicy::SeededRandom(_) => world.rng.gen_range(1..=world.max_delay) as u64,
        ActivationPolicy::Scripted(_) => {
            let i = world.script_delay;
            world.script_delay += 1;
            world.script.delays.get(i).copied().unwrap_or(1).max(1) as u64
        }
    }
}

/// Fully asynchronous execution: per-robot wake-ups, delayed move starts,
/// and per-hop commits with transit occupancy.
fn run_async(
    world: &mut World,
    policy: &SchedulerPolicy,
    max_ticks: u64,
) -> Result<bool, SimError> {
    for tick in 0..max_ticks {
        world.tick = tick;
        world.seq = 0;
        world.spawn_phase();
        if world.all_done() {
            return Ok(true);
        }
        // hop commits and move starts due this tick
        for idx in 0..world.bodies.len() {
            let due = matches!(&world.bodies[idx].moving, Some(m) if m.due == tick);
            if !due {
                continue;
            }
            let (hop, from, mid, to, path, back) = {
                let m = world.bodies[idx].moving.as_ref().unwrap();
                (m.hop, m.from, m.mid, m.to, m.path, m.back)
            };
            match hop {
                0 => {
                    // move start: reserve the first edge and leave the source
                    world.emit(Some(idx), EventKind::MoveStart { from, path });
                    world.bodies[idx].in_transit = true;
                    let key = edge_key(from, mid);
                    if let Some(&(other, until)) = world.edge_busy.get(&key) {
                        if until > tick && other != idx {
                            world.collision(mid, vec![other, idx]);
                            return Ok(false);
                        }
                    }
                    let dur = next_delay(world, policy);
                    world.edge_busy.insert(key, (idx, tick + dur));
                    let m = world.bodies[idx].moving.as_mut().unwrap();
                    m.hop = 1;
                    m.due = tick + dur;
                }
                1 => {
                    if let Some(other) = world.occupied(mid) {
                        world.collision(mid, vec![other, idx]);
                        return Ok(false);
                    }
                    world.bodies[idx].at = mid;
                    world.emit(Some(idx), EventKind::Hop { vertex: mid });
                    let key = edge_key(mid, to);
                    if let Some(&(other, until)) = world.edge_busy.get(&key) {
                        if until > tick && other != idx {
                            world.collision(to, vec![other, idx]);
                            return Ok(false);
                        }
                    }
                    let dur = next_delay(world, policy);
                    world.edge_busy.insert(key, (idx, tick + dur));
                    let m = world.bodies[idx].moving.as_mut().unwrap();
                    m.hop = 2;
                    m.due = tick + dur;
                }
                _ => {
                    if let Some(other) = world.occupied(to) {
                        world.collision(to, vec![other, idx]);
                        return Ok(false);
                    }
                    world.emit(Some(idx), EventKind::Hop { vertex: to });
                    world.bodies[idx].moving = None;
                    world.finish_move(idx, path, back, to);
                    let d = next_delay(world, policy);
                    world.bodies[idx].next_wake = tick + d;
                }
            }
        }
        // look+compute for idle robots due this tick
        for idx in 0..world.bodies.len() {
            let b = &world.bodies[idx];
            if b.vars.state == RobotState::Finished
                || b.moving.is_some()
                || b.next_wake != tick
            {
                continue;
            }
            let at = b.at;
            world.emit(Some(idx), EventKind::Look { vertex: at });
            let occ = world.occupancy();
            let snap = Snapshot::capture(world.g, &occ, at, world.visibility);
            let res = step(&world.params, &world.bodies[idx].vars, &snap)?;
            let moved = match res.action {
                Action::Move(p) => Some(p),
                Action::Stay => None,
            };
            world.emit(Some(idx), EventKind::ComputeDone { moved });
            match world.apply_vars(idx, res.vars, res.action)? {
                Some(mut m) => {
                    // adversarial pause between compute and move
                    m.due = tick + next_delay(world, policy);
                    world.bodies[idx].moving = Some(m);
                }
                None => {
                    if world.bodies[idx].vars.state != RobotState::Finished {
                        let d = next_delay(world, policy);
                        world.bodies[idx].next_wake = tick + d;
                    }
                }
            }
        }
    }
    Ok(world.all_done())
}

/// Runs the recorded policy and config again and compares event streams.
pub fn replay(
    trace: &Trace,
    g: &PortGraph,
    doors: &DoorAttachment,
) -> Result<(), ReplayDivergence> {
    let outcome = run(g, doors, &trace.policy, &trace.config).map_err(|_| ReplayDivergence {
        index: 0,
        expected: trace.events.first().cloned(),
        actual: None,
    })?;
    let a = &trace.events;
    let b = &outcome.trace.events;
    for i in 0..a.len().max(b.len()) {
        if a.get(i) != b.get(i) {
            return Err(ReplayDivergence {
                index: i,
                expected: a.get(i).cloned(),
                actual: b.get(i).cloned(),
            });
        }
    }
    Ok(())
}

/// Per-robot Look-to-completion cycles extracted from a trace.
struct CycleLog {
    spawn: u64,
    finish: u64,
    cycles: Vec<(u64, u64)>,
    looks: Vec<u64>,
}

fn cycle_logs(trace: &Trace) -> Vec<CycleLog> {
    let mut logs: Vec<CycleLog> = Vec::new();
    let mut pending: Vec<Option<(u64, bool)>> = Vec::new();
    for e in &trace.events {
        let idx = match e.robot {
            Some(RobotId(i)) => i as usize,
            None => continue,
        };
        match &e.kind {
            EventKind::Spawn { .. } => {
                logs.push(CycleLog {
                    spawn: e.tick,
                    finish: u64::MAX,
                    cycles: Vec::new(),
                    looks: Vec::new(),
                });
                pending.push(None);
            }
            EventKind::Look { .. } => {
                logs[idx].looks.push(e.tick);
                pending[idx] = Some((e.tick, false));
            }
            EventKind::ComputeDone { moved } => {
                if let Some((start, _)) = pending[idx] {
                    if moved.is_none() {
                        logs[idx].cycles.push((start, e.tick));
                        pending[idx] = None;
                    } else {
                        pending[idx] = Some((start, true));
                    }
                }
            }
            EventKind::MoveEnd { .. } => {
                if let Some((start, true)) = pending[idx] {
                    logs[idx].cycles.push((start, e.tick));
                    pending[idx] = None;
                }
            }
            EventKind::Finish { .. } => {
                logs[idx].finish = e.tick;
            }
            _ => {}
        }
    }
    logs
}

/// Tick at which each epoch ends. An epoch is the smallest window in which
/// every robot that stays unfinished throughout completes at least one full
/// cycle; a trailing window with activity but no full coverage counts as one
/// more epoch.
pub fn epoch_boundaries(trace: &Trace) -> Vec<u64> {
    let logs = cycle_logs(trace);
    if logs.is_empty() {
        return Vec::new();
    }
    let last_tick = trace.last_tick();
    let mut bounds = Vec::new();
    let mut s = 0u64;
    'outer: while s <= last_tick {
        // earliest completed-cycle end per robot from s on
        let firstend: Vec<Option<u64>> = logs
            .iter()
            .map(|l| {
                l.cycles
                    .iter()
                    .find(|&&(start, _)| start >= s)
                    .map(|&(_, end)| end)
            })
            .collect();
        let mut candidates: Vec<u64> = firstend.iter().flatten().copied().collect();
        candidates.extend(logs.iter().map(|l| l.finish).filter(|&f| f >= s && f <= last_tick));
        candidates.push(s);
        candidates.sort_unstable();
        candidates.dedup();
        for &e in &candidates {
            let ok = logs.iter().zip(&firstend).all(|(l, fe)| {
                if l.spawn <= s && l.finish > e {
                    matches!(fe, Some(f) if *f <= e)
                } else {
                    true
                }
            });
            let required = logs.iter().any(|l| l.spawn <= s && l.finish > e);
            if ok && (required || logs.iter().any(|l| l.looks.iter().any(|&t| t >= s))) {
                bounds.push(e);
                s = e + 1;
                continue 'outer;
            }
        }
        // no full epoch fits; count a trailing partial one if anything at
        // all happened after s
        if logs.iter().any(|l| l.looks.iter().any(|&t| t >= s)) {
            bounds.push(last_tick);
        }
        break;
    }
    bounds
}

/// Number of epochs spanned by the trace.
pub fn compute_epochs(trace: &Trace) -> usize {
    epoch_boundaries(trace).len()
}

/// 0-based epoch index containing tick `t`.
pub fn epoch_index(bounds: &[u64], t: u64) -> usize {
    bounds.partition_point(|&e| e < t)
}

/// Number of epochs touched by the inclusive tick interval.
pub fn span_epochs(bounds: &[u64], t0: u64, t1: u64) -> usize {
    if bounds.is_empty() {
        return 1;
    }
    epoch_index(bounds, t1).min(bounds.len() - 1) - epoch_index(bounds, t0).min(bounds.len() - 1)
        + 1
}
