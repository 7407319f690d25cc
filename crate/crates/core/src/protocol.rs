//! The filling protocols as pure step functions.
//!
//! A step consumes the robot's persistent variables and its snapshot and
//! yields updated variables plus an optional two-hop move. Nothing else is
//! consulted, so identical inputs always produce identical results.
//!
//! Robots form chains behind a leader that explores depth-first, two hops at
//! a time. A predecessor hands its move directions to its successor through
//! a four-stage color handshake (direction, confirm, confirm-confirm,
//! second direction), the chain re-packs behind it, and a stuck leader hands
//! leadership backwards by pointing a direction color at its successor.

use alloc::string::String;
use core::fmt;

use crate::robot::{
    dominates, successor_position, CellId, Color, RobotState, RobotVars, Snapshot, TwoHopPath,
};

/// What the robot does in its Move phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Stay,
    Move(TwoHopPath),
}

/// Updated variables plus the move decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub vars: RobotVars,
    pub action: Action,
}

impl StepResult {
    fn stay(vars: RobotVars) -> Self {
        StepResult { vars, action: Action::Stay }
    }
}

/// Protocol family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Single door, asynchronous-safe.
    Ind,
    /// Multiple ranked doors, semi-synchronous.
    MultInd,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Protocol::Ind => write!(f, "ind"),
            Protocol::MultInd => write!(f, "multind"),
        }
    }
}

/// Resolved per-run protocol parameters.
///
/// `check_radius` bounds the scan around a candidate target (how far from
/// the mover a blocking robot is looked for), `visibility` the snapshot
/// radius. With a single door the multi-door protocol degenerates to the
/// single-door one: no foreign leader ever exists, so the staged start and
/// the narrower target check would only make the two diverge for no reason.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolParams {
    pub protocol: Protocol,
    pub visibility: u32,
    pub check_radius: u32,
    /// Multi-door behavior: ranked wait colors shown before the first move
    /// and domination-aware target selection.
    pub multi_door: bool,
}

impl ProtocolParams {
    pub fn new(protocol: Protocol, doors: usize) -> Self {
        match protocol {
            Protocol::Ind => ProtocolParams {
                protocol,
                visibility: 3,
                check_radius: 3,
                multi_door: false,
            },
            Protocol::MultInd => {
                let multi = doors > 1;
                // With several chains a leader scans its candidate's
                // surroundings across the whole visibility ball: another
                // chain's robot two hops from the candidate means contention
                // now or a collision later, and a leader busy with its color
                // handshake shows direction colors instead of its ranked
                // wait color, so the domination comparison alone cannot see
                // it coming.
                ProtocolParams {
                    protocol,
                    visibility: 5,
                    check_radius: if multi { 5 } else { 3 },
                    multi_door: multi,
                }
            }
        }
    }
}

/// A snapshot that contradicts the robot's own variables. This means the
/// simulator fed the step function garbage, not that a robot misbehaved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolViolation(pub String);

impl fmt::Display for ProtocolViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "protocol violation: {}", self.0)
    }
}

impl core::error::Error for ProtocolViolation {}

/// One Compute phase of the single-door protocol (visibility 3).
pub fn ind_step(vars: &RobotVars, snap: &Snapshot) -> Result<StepResult, ProtocolViolation> {
    step(&ProtocolParams::new(Protocol::Ind, 1), vars, snap)
}

/// One Compute phase of the multi-door protocol (visibility 5). `doors` is
/// the number of doors the run was configured with.
pub fn multind_step(
    vars: &RobotVars,
    snap: &Snapshot,
    doors: usize,
) -> Result<StepResult, ProtocolViolation> {
    step(&ProtocolParams::new(Protocol::MultInd, doors), vars, snap)
}

/// Protocol dispatch on the robot's state.
pub fn step(
    params: &ProtocolParams,
    vars: &RobotVars,
    snap: &Snapshot,
) -> Result<StepResult, ProtocolViolation> {
    let mut vars = vars.clone();
    match vars.state {
        RobotState::Finished => Ok(StepResult::stay(vars)),
        RobotState::None => none_step(params, vars, snap),
        RobotState::Follower => follower_step(params, &mut vars, snap).map(|a| StepResult {
            vars,
            action: a,
        }),
        RobotState::Leader => leader_step(params, &mut vars, snap).map(|a| StepResult {
            vars,
            action: a,
        }),
    }
}

/// Fresh robot at a door: lead if nobody is within two hops, otherwise fall
/// in behind the nearest robot.
fn none_step(
    params: &ProtocolParams,
    mut vars: RobotVars,
    snap: &Snapshot,
) -> Result<StepResult, ProtocolViolation> {
    if snap.resolve_predecessor().is_none() {
        vars.state = RobotState::Leader;
        if params.multi_door {
            // show the ranked wait color for one activation so that leaders
            // of neighboring doors can settle dominance before anyone moves
            vars.color = Color::Wait(vars.door_rank);
            return Ok(StepResult::stay(vars));
        }
        // first move needs only a free target: the two-hop scan around it is
        // vacuous on the empty graph the first robot sees
        if let Some(path) = find_target(&vars, snap, &TargetRule::free_only()) {
            vars.target = Some(path);
            vars.color = Color::Mov;
            return Ok(StepResult { vars, action: Action::Move(path) });
        }
        return Ok(StepResult::stay(vars));
    }
    vars.state = RobotState::Follower;
    follower_bootstrap(&mut vars, snap);
    Ok(StepResult::stay(vars))
}

/// Adopt the predecessor's landing vertex as own target and confirm packing
/// when it shows a wait color.
fn follower_bootstrap(vars: &mut RobotVars, snap: &Snapshot) {
    if vars.target.is_none() {
        if let Some(c) = snap.nearest_robot(|r| r.color != Color::Off) {
            let settled = !snap.occupant(c).unwrap().in_transit;
            if snap.dist(c) == 2 && settled {
                let canon = snap.canonical(c);
                vars.target = Some(TwoHopPath { first: canon[0], second: canon[1] });
            }
        }
    }
    if vars.color == Color::On {
        if let Some(pred) = pred_cell(vars, snap) {
            if matches!(snap.occupant(pred).map(|r| r.color), Some(Color::Wait(_))) {
                vars.color = Color::Conf3;
            }
        }
    }
}

/// The predecessor stands where this robot is headed.
fn pred_cell(vars: &RobotVars, snap: &Snapshot) -> Option<CellId> {
    let target = vars.target?;
    let (_, end) = snap.resolve_two_hop(target)?;
    Some(end)
}

/// The successor stands two hops back along the reverse of the entry.
fn succ_cell(vars: &RobotVars, snap: &Snapshot) -> Option<CellId> {
    let back = successor_position(vars)?;
    let (_, end) = snap.resolve_two_hop(back)?;
    Some(end)
}

fn color_at(snap: &Snapshot, cell: CellId) -> Option<Color> {
    snap.occupant(cell).map(|r| r.color)
}

/// Clears chain bookkeeping when a follower inherits leadership.
fn promote_to_leader(vars: &mut RobotVars) {
    vars.state = RobotState::Leader;
    vars.target = None;
    vars.next_target.clear();
    vars.color = Color::Wait(vars.door_rank);
}

fn follower_step(
    params: &ProtocolParams,
    vars: &mut RobotVars,
    snap: &Snapshot,
) -> Result<Action, ProtocolViolation> {
    // leadership arrives: the predecessor went dark on its vertex
    let pred = match pred_cell(vars, snap) {
        Some(c) => Some(c),
        None if vars.target.is_none() => snap
            .nearest_robot(|_| true)
            .filter(|&c| snap.dist(c) <= 2),
        None => None,
    };
    if let Some(p) = pred {
        if color_at(snap, p) == Some(Color::Off) {
            promote_to_leader(vars);
            return Ok(Action::Stay);
        }
    }

    // just arrived: confirm packing once the robot behind is in position
    if vars.color == Color::Mov {
        match succ_cell(vars, snap).and_then(|c| color_at(snap, c)) {
            Some(Color::On) | Some(Color::Conf3) => vars.color = Color::Conf3,
            _ if !vars.has_successor => vars.color = Color::Conf3,
            _ => {}
        }
        return Ok(Action::Stay);
    }

    // fresh follower: latch onto the predecessor once it settles two hops
    // ahead, and confirm packing when it waits
    if vars.target.is_none() {
        follower_bootstrap(vars, snap);
        return Ok(Action::Stay);
    }
    if vars.color == Color::On {
        if let Some(p) = pred_cell(vars, snap) {
            if matches!(color_at(snap, p), Some(Color::Wait(_))) {
                vars.color = Color::Conf3;
                return Ok(Action::Stay);
            }
        }
    }

    if vars.next_target.complete().is_none() {
        receive_stage(vars, snap);
        return Ok(Action::Stay);
    }

    // a predecessor showing a wait color after the full exchange aborted its
    // move; drop the received directions and re-confirm packing
    if vars.color == Color::Conf2 {
        if let Some(p) = pred_cell(vars, snap) {
            if matches!(color_at(snap, p), Some(Color::Wait(_))) {
                vars.next_target.clear();
                vars.color = Color::Conf3;
                return Ok(Action::Stay);
            }
        }
    }

    communicate_stage(params, vars, snap)
}

/// Receiver automaton: store the two direction colors shown by the
/// predecessor, acknowledging each stage.
fn receive_stage(vars: &mut RobotVars, snap: &Snapshot) {
    let pred_color = match pred_cell(vars, snap).and_then(|c| color_at(snap, c)) {
        Some(c) => c,
        None => return,
    };
    match (vars.color, pred_color) {
        (Color::On | Color::Conf3, Color::Dir(p)) if vars.next_target.first.is_none() => {
            vars.next_target.first = Some(p);
            vars.color = Color::Conf;
        }
        (Color::Conf, Color::ConfC) => vars.color = Color::ConfC,
        (Color::ConfC, Color::Dir(q)) if vars.next_target.first.is_some() => {
            vars.next_target.second = Some(q);
            vars.color = Color::Conf2;
        }
        _ => {}
    }
}

/// Sender automaton of a follower: once the predecessor has vacated the
/// destination, show the two direction colors to the robot behind, then
/// move. Holding still until the vacancy keeps the follower's own
/// second-direction confirmation visible for exactly as long as its
/// predecessor needs it. A robot still at its door has nobody behind it and
/// moves without talking.
fn communicate_stage(
    _params: &ProtocolParams,
    vars: &mut RobotVars,
    snap: &Snapshot,
) -> Result<Action, ProtocolViolation> {
    let target = vars
        .target
        .ok_or_else(|| ProtocolViolation(String::from("communicate without a target")))?;
    let vacated = match pred_cell(vars, snap) {
        Some(c) => snap.occupant(c).is_none(),
        None => false,
    };
    if !vacated {
        return Ok(Action::Stay);
    }
    if !vars.has_successor {
        vars.color = Color::Mov;
        return Ok(Action::Move(target));
    }
    let succ_color = match succ_cell(vars, snap).and_then(|c| color_at(snap, c)) {
        Some(c) => c,
        None => return Ok(Action::Stay),
    };
    match succ_color {
        Color::On | Color::Conf3 => vars.color = Color::Dir(target.first),
        Color::Conf => vars.color = Color::ConfC,
        Color::ConfC => vars.color = Color::Dir(target.second),
        Color::Conf2 => {
            vars.color = Color::Mov;
            return Ok(Action::Move(target));
        }
        _ => {}
    }
    Ok(Action::Stay)
}

fn leader_step(
    params: &ProtocolParams,
    vars: &mut RobotVars,
    snap: &Snapshot,
) -> Result<Action, ProtocolViolation> {
    // hand-over in progress: waiting for the successor's acknowledgment
    if vars.target.is_none() {
        if let Color::Dir(_) = vars.color {
            if succ_cell(vars, snap).and_then(|c| color_at(snap, c)) == Some(Color::Conf) {
                vars.color = Color::Off;
                vars.state = RobotState::Finished;
            }
            return Ok(Action::Stay);
        }
    }

    // target chosen earlier: drive the handshake with the successor
    if let Some(target) = vars.target {
        if !vars.has_successor {
            vars.color = Color::Mov;
            return Ok(Action::Move(target));
        }
        let succ_color = match succ_cell(vars, snap).and_then(|c| color_at(snap, c)) {
            Some(c) => c,
            None => return Ok(Action::Stay),
        };
        match succ_color {
            Color::On | Color::Conf3 => vars.color = Color::Dir(target.first),
            Color::Conf => vars.color = Color::ConfC,
            Color::ConfC => vars.color = Color::Dir(target.second),
            Color::Conf2 => {
                if commit_check(params, vars, snap, target) {
                    vars.color = Color::Mov;
                    return Ok(Action::Move(target));
                }
                // abort: fall back to waiting; the successor sees the wait
                // color and re-confirms packing, after which selection runs
                // afresh
                vars.target = None;
                vars.color = Color::Wait(vars.door_rank);
            }
            _ => {}
        }
        return Ok(Action::Stay);
    }

    // only move once the chain is packed behind us
    let packed = if vars.has_successor {
        succ_cell(vars, snap).and_then(|c| color_at(snap, c)) == Some(Color::Conf3)
    } else {
        true
    };
    if !packed {
        return Ok(Action::Stay);
    }

    let decision = if params.multi_door {
        multind_decide(vars, snap, params.check_radius)
    } else {
        match find_target(vars, snap, &TargetRule::single_door(params.check_radius)) {
            Some(t) => TargetDecision::Found(t),
            None => TargetDecision::Stuck,
        }
    };
    match decision {
        TargetDecision::Found(target) => {
            vars.target = Some(target);
            if vars.has_successor {
                vars.color = Color::Dir(target.first);
                return Ok(Action::Stay);
            }
            vars.color = Color::Mov;
            return Ok(Action::Move(target));
        }
        TargetDecision::Blocked => return Ok(Action::Stay),
        TargetDecision::Stuck => {}
    }

    // stuck: hand leadership to the successor, or finish on the spot
    if vars.has_successor {
        let back = successor_position(vars)
            .ok_or_else(|| ProtocolViolation(String::from("successor without entry")))?;
        vars.color = Color::Dir(back.first);
    } else {
        vars.color = Color::Off;
        vars.state = RobotState::Finished;
    }
    Ok(Action::Stay)
}

/// Which robots deny the surroundings of a candidate target.
#[derive(Clone, Copy, PartialEq, Eq)]
enum BlockMode {
    /// Every robot that has not finished.
    AllActive,
    /// Robots waiting on a weaker rank yield to this leader and do not
    /// block.
    AssertRank(u16),
    /// Like `AssertRank`, but robots amid a color handshake do not block
    /// either: their colors resolve within a bounded number of epochs, so
    /// the blockage is worth waiting out rather than sealing over.
    SettledOnly(u16),
}

impl BlockMode {
    fn blocks(self, color: Color) -> bool {
        match (self, color) {
            (_, Color::Off) => false,
            (BlockMode::AllActive, _) => true,
            (BlockMode::AssertRank(mine), Color::Wait(j)) => j < mine,
            (BlockMode::AssertRank(_), _) => true,
            (BlockMode::SettledOnly(mine), Color::Wait(j)) => j < mine,
            (BlockMode::SettledOnly(_), Color::On | Color::Conf3 | Color::Mov) => true,
            (BlockMode::SettledOnly(_), _) => false,
        }
    }

    /// A robot three hops from the candidate denies it only when its color
    /// proves a move handshake in flight: a leader poised to land two hops
    /// from where it stands necessarily shows a direction color or the
    /// in-between confirmation, and its landing could be adjacent to the
    /// candidate. Waiting colors at that distance are handled by the
    /// domination rules instead, and the handshake colors resolve, so the
    /// settled-only scan ignores them.
    fn blocks_at_three(self, color: Color) -> bool {
        !matches!(self, BlockMode::SettledOnly(_))
            && matches!(color, Color::Dir(_) | Color::ConfC)
    }
}

/// Admissibility rules for a candidate target vertex.
struct TargetRule {
    /// Around the candidate, reject blocking robots at distance exactly two
    /// within this radius of the mover. `None` disables the scan.
    check_radius: Option<u32>,
    /// Also scan one ring further for handshake colors betraying another
    /// leader about to move (several doors only).
    contender_ring: bool,
    /// Reject candidates whose approach squeezes between robots of a chain.
    no_cut: bool,
    /// Cells the candidate must avoid (paths towards dominating leaders).
    forbidden: alloc::vec::Vec<bool>,
    mode: BlockMode,
}

impl TargetRule {
    fn free_only() -> Self {
        TargetRule {
            check_radius: None,
            contender_ring: false,
            no_cut: false,
            forbidden: alloc::vec::Vec::new(),
            mode: BlockMode::AllActive,
        }
    }

    fn single_door(check_radius: u32) -> Self {
        TargetRule {
            check_radius: Some(check_radius),
            contender_ring: false,
            no_cut: false,
            forbidden: alloc::vec::Vec::new(),
            mode: BlockMode::AllActive,
        }
    }

    /// Movement rules with other leaders around: a dominated leader
    /// additionally stays off every short path towards its dominators, and
    /// everyone avoids cutting through chains.
    fn multi_door(vars: &RobotVars, snap: &Snapshot, check_radius: u32) -> Self {
        let dominators: alloc::vec::Vec<CellId> = snap
            .robots()
            .filter(|&c| {
                snap.occupant(c)
                    .map(|r| dominates(r.color, Color::Wait(vars.door_rank)))
                    .unwrap_or(false)
            })
            .collect();
        let mut forbidden = alloc::vec::Vec::new();
        if !dominators.is_empty() {
            forbidden = alloc::vec![false; snap.cell_count()];
            for d in dominators {
                for (i, hit) in snap.path_set(snap.here(), d, 5).iter().enumerate() {
                    if *hit {
                        forbidden[i] = true;
                    }
                }
            }
        }
        TargetRule {
            check_radius: Some(check_radius),
            contender_ring: true,
            no_cut: true,
            forbidden,
            mode: BlockMode::AllActive,
        }
    }
}

/// Candidate test shared by target selection and the pre-move recheck:
/// target unoccupied and free, transit clear, surroundings clear per the
/// rule.
fn admissible(
    snap: &Snapshot,
    rule: &TargetRule,
    here_dists: &[u32],
    mid: CellId,
    v: CellId,
) -> bool {
    let here = snap.here();
    if snap.occupant(mid).is_some()
        || v == here
        || snap.occupant(v).is_some()
        || !snap.is_free_visible(v)
    {
        return false;
    }
    // a dominated leader keeps its whole move off the corridor towards its
    // dominators, the transit vertex included
    if !rule.forbidden.is_empty() && (rule.forbidden[v.0] || rule.forbidden[mid.0]) {
        return false;
    }
    if let Some(radius) = rule.check_radius {
        let from_v = snap.distances_from(v);
        let blocked = snap.cells().any(|x| {
            if x == here || here_dists[x.0] > radius {
                return false;
            }
            let color = match snap.occupant(x) {
                Some(r) => r.color,
                None => return false,
            };
            match from_v[x.0] {
                2 => rule.mode.blocks(color),
                3 if rule.contender_ring => rule.mode.blocks_at_three(color),
                _ => false,
            }
        });
        if blocked {
            return false;
        }
    }
    if rule.no_cut && cuts_through_chain(snap, mid) {
        return false;
    }
    true
}

/// Scans two-hop paths in ascending `(first, second)` port order and returns
/// the first admissible one. The intermediate vertex is a neighbor of the
/// target, so freeness already keeps the transit clear.
fn find_target(vars: &RobotVars, snap: &Snapshot, rule: &TargetRule) -> Option<TwoHopPath> {
    let _ = vars;
    let here = snap.here();
    let here_dists = snap.distances_from(here);
    for p1 in 1..=snap.degree(here) {
        let (mid, _) = match snap.follow(here, crate::graph::Port(p1)) {
            Some(x) => x,
            None => continue,
        };
        for p2 in 1..=snap.degree(mid) {
            let (v, _) = match snap.follow(mid, crate::graph::Port(p2)) {
                Some(x) => x,
                None => continue,
            };
            if admissible(snap, rule, &here_dists, mid, v) {
                return Some(TwoHopPath {
                    first: crate::graph::Port(p1),
                    second: crate::graph::Port(p2),
                });
            }
        }
    }
    None
}

/// Would the move still be taken now? Run just before committing: the color
/// handshake takes many activations and other chains move meanwhile. The
/// stored target must pass the same admissibility test that selected it —
/// conservative first, rank-asserting only when the conservative scan finds
/// nothing at all anywhere.
fn commit_check(
    params: &ProtocolParams,
    vars: &RobotVars,
    snap: &Snapshot,
    target: TwoHopPath,
) -> bool {
    let (mid, v) = match snap.resolve_two_hop(target) {
        Some(x) => x,
        None => return false,
    };
    let here_dists = snap.distances_from(snap.here());
    if !params.multi_door {
        let rule = TargetRule::single_door(params.check_radius);
        return admissible(snap, &rule, &here_dists, mid, v);
    }
    let mut rule = TargetRule::multi_door(vars, snap, params.check_radius);
    if admissible(snap, &rule, &here_dists, mid, v) {
        return true;
    }
    if find_target(vars, snap, &rule).is_some() {
        // a conservative candidate exists; re-select rather than force this
        return false;
    }
    rule.mode = BlockMode::AssertRank(vars.door_rank);
    admissible(snap, &rule, &here_dists, mid, v)
}

/// True when the intermediate vertex of a move squeezes between robots:
/// at least two of its neighbors are occupied (not counting the mover) and
/// at least one of the occupants is still active.
fn cuts_through_chain(snap: &Snapshot, mid: CellId) -> bool {
    let here = snap.here();
    let mut occupied = 0usize;
    let mut active = false;
    for (_, u) in snap.neighbors(mid) {
        if u == here {
            continue;
        }
        if let Some(r) = snap.occupant(u) {
            occupied += 1;
            if r.color != Color::Off {
                active = true;
            }
        }
    }
    occupied >= 2 && active
}

/// Target selection of the single-door protocol: a free, unoccupied vertex
/// two hops out whose two-hop surroundings within visibility hold no active
/// robot. Exposed for direct testing against a brute-force scan.
pub fn select_target(vars: &RobotVars, snap: &Snapshot) -> Option<TwoHopPath> {
    find_target(vars, snap, &TargetRule::single_door(3))
}

/// Outcome of multi-door target selection.
enum TargetDecision {
    Found(TwoHopPath),
    /// Every candidate is denied by colors that resolve on their own; hold
    /// the wait color and try again instead of sealing over the region.
    Blocked,
    /// Nothing will open up: hand leadership over.
    Stuck,
}

/// Selection runs in up to three passes. The first treats every nearby
/// active robot as a blocker, which keeps the leader away from spots another
/// chain is still working through. If nothing survives, the leader re-scans
/// counting only dominating wait colors and settled robots as blockers:
/// weaker waiting leaders must yield to it, and deferring to them as well
/// would deadlock all chains into sealing early and leave the region
/// unfilled. A final scan that also ignores in-flight handshake colors
/// decides between waiting the blockage out and handing leadership over.
fn multind_decide(vars: &RobotVars, snap: &Snapshot, check_radius: u32) -> TargetDecision {
    let mut rule = TargetRule::multi_door(vars, snap, check_radius);
    if let Some(t) = find_target(vars, snap, &rule) {
        return TargetDecision::Found(t);
    }
    rule.mode = BlockMode::AssertRank(vars.door_rank);
    if let Some(t) = find_target(vars, snap, &rule) {
        return TargetDecision::Found(t);
    }
    rule.mode = BlockMode::SettledOnly(vars.door_rank);
    if find_target(vars, snap, &rule).is_some() {
        return TargetDecision::Blocked;
    }
    // candidates denied only by the paths towards a dominator are not dead:
    // the dominator will advance, seal, or free them. Handing leadership
    // over here could orphan a region that only this chain can still reach.
    if !rule.forbidden.is_empty() {
        rule.forbidden = alloc::vec::Vec::new();
        if find_target(vars, snap, &rule).is_some() {
            return TargetDecision::Blocked;
        }
    }
    TargetDecision::Stuck
}

/// Target selection of the multi-door protocol with the given surroundings
/// radius; absent when no candidate qualifies right now.
pub fn multind_find_target(
    vars: &RobotVars,
    snap: &Snapshot,
    check_radius: u32,
) -> Option<TwoHopPath> {
    match multind_decide(vars, snap, check_radius) {
        TargetDecision::Found(t) => Some(t),
        _ => None,
    }
}
