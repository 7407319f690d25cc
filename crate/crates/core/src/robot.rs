//! Robot-visible state: the color palette, per-robot persistent variables,
//! and the snapshot a robot receives during its Look phase.
//!
//! A snapshot is the only input a protocol step may consult. It contains the
//! induced subgraph on the visibility ball, the port numbers of every visible
//! vertex, and the colors of visible robots. It carries no robot identities
//! and no global vertex ids; cells are addressed by canonical port paths.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Port, PortGraph, VertexId};

/// Externally visible light of a robot.
///
/// `Wait` carries the 1-based door rank; with a single door the rank is
/// always 1. Lower rank dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    /// Shown by a robot freshly placed at a door.
    On,
    /// Port number at the displaying robot's vertex; also used to point at
    /// the successor when handing leadership over.
    Dir(Port),
    /// First direction received.
    Conf,
    /// Confirmation of a confirmation; separates two equal direction colors.
    ConfC,
    /// Second direction received.
    Conf2,
    /// Chain is packed behind the displaying robot.
    Conf3,
    /// Leader waiting for the chain to pack, ranked by door.
    Wait(u16),
    /// Robot in movement.
    Mov,
    /// Finished.
    Off,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::On => write!(f, "ON"),
            Color::Dir(p) => write!(f, "DIR:{p}"),
            Color::Conf => write!(f, "CONF"),
            Color::ConfC => write!(f, "CONFC"),
            Color::Conf2 => write!(f, "CONF2"),
            Color::Conf3 => write!(f, "CONF3"),
            Color::Wait(r) => write!(f, "WAIT:{r}"),
            Color::Mov => write!(f, "MOV"),
            Color::Off => write!(f, "OFF"),
        }
    }
}

impl core::str::FromStr for Color {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "ON" => Color::On,
            "CONF" => Color::Conf,
            "CONFC" => Color::ConfC,
            "CONF2" => Color::Conf2,
            "CONF3" => Color::Conf3,
            "MOV" => Color::Mov,
            "OFF" => Color::Off,
            _ => {
                if let Some(p) = s.strip_prefix("DIR:") {
                    Color::Dir(Port(p.parse().map_err(|_| ())?))
                } else if let Some(r) = s.strip_prefix("WAIT:") {
                    Color::Wait(r.parse().map_err(|_| ())?)
                } else {
                    return Err(());
                }
            }
        })
    }
}

/// Full palette available to robots on a graph with maximum degree `delta`
/// and `doors` doors: one direction color per possible port, one wait color
/// per door, and the seven fixed colors.
pub fn palette(delta: u16, doors: u16) -> Vec<Color> {
    let mut out = vec![Color::On];
    out.extend((1..=delta).map(|p| Color::Dir(Port(p))));
    out.extend([Color::Conf, Color::ConfC, Color::Conf2, Color::Conf3]);
    out.extend((1..=doors).map(Color::Wait));
    out.extend([Color::Mov, Color::Off]);
    out
}

/// True iff `a` outranks `b`: both are wait colors and `a` belongs to a
/// stronger (lower-numbered) door.
pub fn dominates(a: Color, b: Color) -> bool {
    matches!((a, b), (Color::Wait(i), Color::Wait(j)) if i < j)
}

/// Lifecycle state of a robot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RobotState {
    None,
    Follower,
    Leader,
    Finished,
}

impl fmt::Display for RobotState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RobotState::None => write!(f, "none"),
            RobotState::Follower => write!(f, "follower"),
            RobotState::Leader => write!(f, "leader"),
            RobotState::Finished => write!(f, "finished"),
        }
    }
}

/// Two consecutive hops: the port taken at the current vertex, then the port
/// taken at the intermediate vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoHopPath {
    pub first: Port,
    pub second: Port,
}

impl TwoHopPath {
    pub fn new(first: u16, second: u16) -> Self {
        TwoHopPath { first: Port(first), second: Port(second) }
    }
}

/// Directions received from the predecessor, possibly with only the first
/// hop stored while the exchange is in flight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PartialTarget {
    pub first: Option<Port>,
    pub second: Option<Port>,
}

impl PartialTarget {
    pub fn is_empty(&self) -> bool {
        self.first.is_none() && self.second.is_none()
    }

    pub fn complete(&self) -> Option<TwoHopPath> {
        match (self.first, self.second) {
            (Some(a), Some(b)) => Some(TwoHopPath { first: a, second: b }),
            _ => None,
        }
    }

    pub fn clear(&mut self) {
        *self = PartialTarget::default();
    }
}

/// The two hops last moved: the ports taken, and the ports that lead back
/// from the current vertex to the previous one. The reverse gives the
/// successor's position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryRecord {
    pub taken: TwoHopPath,
    pub back: TwoHopPath,
}

/// Persistent per-robot memory.
///
/// Predecessor and successor are not stored as identities: the predecessor
/// sits at the target vertex, the successor at the reverse of the entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobotVars {
    pub state: RobotState,
    pub color: Color,
    pub target: Option<TwoHopPath>,
    pub next_target: PartialTarget,
    pub entry: Option<EntryRecord>,
    pub has_successor: bool,
    pub door_rank: u16,
}

impl RobotVars {
    /// Fresh robot placed at a door of the given 1-based rank.
    pub fn spawned(door_rank: u16) -> Self {
        RobotVars {
            state: RobotState::None,
            color: Color::On,
            target: None,
            next_target: PartialTarget::default(),
            entry: None,
            has_successor: false,
            door_rank,
        }
    }

    /// Bookkeeping applied by the engine when a move completes: record the
    /// entry, note that a successor now exists behind, and for a leader show
    /// the wait color and consume the target. A follower promotes the
    /// received directions into its own target.
    pub fn complete_move(&mut self, taken: TwoHopPath, back: TwoHopPath) {
        self.entry = Some(EntryRecord { taken, back });
        self.has_successor = true;
        match self.state {
            RobotState::Leader => {
                self.target = None;
                self.color = Color::Wait(self.door_rank);
            }
            RobotState::Follower => {
                debug_assert!(self.next_target.complete().is_some());
                self.target = self.next_target.complete();
                self.next_target.clear();
            }
            _ => {}
        }
    }
}

/// What an observer can tell about a robot on a visible vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeenRobot {
    pub color: Color,
    pub in_transit: bool,
}

/// Index of a vertex inside one snapshot. Cell 0 is the observer's vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
struct SnapCell {
    dist: u32,
    degree: u16,
    /// `ports[p-1]` is the visible endpoint of port `p` with its back port,
    /// or `None` when the edge leaves the visibility ball.
    ports: Vec<Option<(CellId, Port)>>,
    /// Lexicographically smallest shortest port path from the observer.
    canon: Vec<Port>,
    occupant: Option<SeenRobot>,
}

/// Everything a robot sees in its Look phase: the induced subgraph on the
/// visibility ball, per-vertex port counts, and robot colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    radius: u32,
    cells: Vec<SnapCell>,
}

impl Snapshot {
    /// Builds the snapshot for the robot standing on `here`. `occupancy`
    /// maps occupied vertices to what an observer may learn about their
    /// robots; it must contain `here`.
    pub fn capture(
        g: &PortGraph,
        occupancy: &BTreeMap<VertexId, SeenRobot>,
        here: VertexId,
        radius: u32,
    ) -> Snapshot {
        let dist = g.distances_from(here);
        // canonical paths by increasing distance
        let mut layers: Vec<Vec<VertexId>> = vec![Vec::new(); radius as usize + 1];
        for v in g.vertices() {
            let d = dist[v.index()];
            if d <= radius {
                layers[d as usize].push(v);
            }
        }
        let mut canon: BTreeMap<VertexId, Vec<Port>> = BTreeMap::new();
        canon.insert(here, Vec::new());
        for (d, layer) in layers.iter().enumerate().skip(1) {
            for &v in layer {
                let mut best: Option<Vec<Port>> = None;
                for (_, u, back) in g.neighbors(v) {
                    if dist[u.index()] + 1 != d as u32 {
                        continue;
                    }
                    let mut cand = canon[&u].clone();
                    // the port at u that leads to v is the back port of the
                    // edge record seen from v
                    cand.push(back);
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
                canon.insert(v, best.expect("layered BFS vertex must have a parent"));
            }
        }
        let mut order: Vec<VertexId> = canon.keys().copied().collect();
        order.sort_by(|a, b| {
            (dist[a.index()], &canon[a]).cmp(&(dist[b.index()], &canon[b]))
        });
        let cell_of: BTreeMap<VertexId, CellId> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, CellId(i)))
            .collect();
        debug_assert!(
            occupancy.contains_key(&here),
            "observer must occupy its own vertex"
        );
        let cells = order
            .iter()
            .map(|&v| {
                let ports = g
                    .neighbors(v)
                    .map(|(_, u, back)| cell_of.get(&u).map(|&c| (c, back)))
                    .collect();
                SnapCell {
                    dist: dist[v.index()],
                    degree: g.degree(v),
                    ports,
                    canon: canon[&v].clone(),
                    occupant: occupancy.get(&v).copied(),
                }
            })
            .collect();
        Snapshot { radius, cells }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// The observer's own cell.
    pub fn here(&self) -> CellId {
        CellId(0)
    }

    pub fn self_color(&self) -> Color {
        self.cells[0].occupant.expect("observer occupies cell 0").color
    }

    pub fn dist(&self, c: CellId) -> u32 {
        self.cells[c.0].dist
    }

    pub fn degree(&self, c: CellId) -> u16 {
        self.cells[c.0].degree
    }

    pub fn occupant(&self, c: CellId) -> Option<SeenRobot> {
        self.cells[c.0].occupant
    }

    pub fn canonical(&self, c: CellId) -> &[Port] {
        &self.cells[c.0].canon
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        (0..self.cells.len()).map(CellId)
    }

    /// Visible endpoint of `port` at `c`, with the port leading back.
    pub fn follow(&self, c: CellId, port: Port) -> Option<(CellId, Port)> {
        self.cells[c.0]
            .ports
            .get(port.get() as usize - 1)
            .copied()
            .flatten()
    }

    /// Resolves a port path starting at the observer's vertex.
    pub fn resolve(&self, path: &[Port]) -> Option<CellId> {
        let mut at = self.here();
        for &p in path {
            at = self.follow(at, p)?.0;
        }
        Some(at)
    }

    /// Resolves a two-hop path from the observer, returning the intermediate
    /// and final cells.
    pub fn resolve_two_hop(&self, path: TwoHopPath) -> Option<(CellId, CellId)> {
        let (mid, _) = self.follow(self.here(), path.first)?;
        let (end, _) = self.follow(mid, path.second)?;
        Some((mid, end))
    }

    /// Visible neighbors of `c` in port order.
    pub fn neighbors(&self, c: CellId) -> impl Iterator<Item = (Port, CellId)> + '_ {
        self.cells[c.0]
            .ports
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.map(|(cell, _)| (Port(i as u16 + 1), cell)))
    }

    /// True when no visible neighbor of `c` is occupied. Edges leaving the
    /// ball are treated as leading to unoccupied vertices; with the standard
    /// visibility radius every neighbor of a candidate target is visible.
    pub fn is_free_visible(&self, c: CellId) -> bool {
        self.neighbors(c).all(|(_, u)| self.cells[u.0].occupant.is_none())
    }

    /// Distances from `c` within the visible subgraph.
    pub fn distances_from(&self, c: CellId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.cells.len()];
        let mut queue = alloc::collections::VecDeque::new();
        dist[c.0] = 0;
        queue.push_back(c);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x.0];
            for (_, y) in self.neighbors(x) {
                if dist[y.0] == u32::MAX {
                    dist[y.0] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Union of all simple paths of length at most `k` between two visible
    /// cells, computed over the visible subgraph.
    pub fn path_set(&self, from: CellId, to: CellId, k: u32) -> Vec<bool> {
        let mut out = vec![false; self.cells.len()];
        let to_dist = self.distances_from(to);
        let mut on_path = vec![false; self.cells.len()];
        on_path[from.0] = true;
        let mut stack = vec![from];
        self.path_set_rec(from, to, k, &to_dist, &mut stack, &mut on_path, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn path_set_rec(
        &self,
        at: CellId,
        to: CellId,
        budget: u32,
        to_dist: &[u32],
        stack: &mut Vec<CellId>,
        on_path: &mut [bool],
        out: &mut [bool],
    ) {
        if at == to {
            for &c in stack.iter() {
                out[c.0] = true;
            }
            return;
        }
        if budget == 0 {
            return;
        }
        for (_, next) in self.neighbors(at) {
            if on_path[next.0] || to_dist[next.0] == u32::MAX || to_dist[next.0] > budget - 1 {
                continue;
            }
            on_path[next.0] = true;
            stack.push(next);
            self.path_set_rec(next, to, budget - 1, to_dist, stack, on_path, out);
            stack.pop();
            on_path[next.0] = false;
        }
    }

    /// Occupied cells other than the observer's own, nearest first.
    pub fn robots(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells().skip(1).filter(|c| self.cells[c.0].occupant.is_some())
    }

    /// Nearest visible robot matching the filter; cells are ordered by
    /// `(distance, canonical path)`, which settles ties.
    pub fn nearest_robot(&self, mut keep: impl FnMut(SeenRobot) -> bool) -> Option<CellId> {
        self.robots().find(|&c| keep(self.cells[c.0].occupant.unwrap()))
    }

    /// Position of the robot the caller should follow: the nearest visible
    /// robot not in the finished state. Absent when no such robot stands
    /// within two hops, in which case the caller leads.
    pub fn resolve_predecessor(&self) -> Option<CellId> {
        self.nearest_robot(|r| r.color != Color::Off)
            .filter(|&c| self.dist(c) <= 2)
    }
}

/// Where the successor sits relative to this robot: two hops back along the
/// reverse of the recorded entry. Absent before the first move or when no
/// robot follows.
pub fn successor_position(vars: &RobotVars) -> Option<TwoHopPath> {
    match (&vars.entry, vars.has_successor) {
        (Some(e), true) => Some(e.back),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PortGraph;

    #[test]
    fn palette_sizes_match_the_color_budget() {
        // single door: max degree + 8
        assert_eq!(palette(4, 1).len(), 4 + 8);
        assert_eq!(palette(1, 1).len(), 1 + 8);
        // k doors: max degree + k + 7
        assert_eq!(palette(4, 3).len(), 4 + 3 + 7);
        assert_eq!(palette(5, 2).len(), 5 + 2 + 7);
    }

    #[test]
    fn color_strings_round_trip() {
        for c in palette(3, 2) {
            let s = alloc::format!("{c}");
            assert_eq!(s.parse::<Color>().unwrap(), c);
        }
        assert_eq!("DIR:7".parse::<Color>().unwrap(), Color::Dir(Port(7)));
        assert!("DIR:x".parse::<Color>().is_err());
        assert!("BLUE".parse::<Color>().is_err());
    }

    #[test]
    fn domination_is_a_strict_order_on_wait_colors() {
        assert!(dominates(Color::Wait(1), Color::Wait(2)));
        assert!(!dominates(Color::Wait(2), Color::Wait(2)));
        assert!(!dominates(Color::Mov, Color::Wait(1)));
        assert!(!dominates(Color::Wait(2), Color::Wait(1)));
    }

    fn occupancy(
        entries: &[(VertexId, Color)],
    ) -> BTreeMap<VertexId, SeenRobot> {
        entries
            .iter()
            .map(|&(v, color)| (v, SeenRobot { color, in_transit: false }))
            .collect()
    }

    #[test]
    fn single_vertex_snapshot_sees_only_self() {
        let g = PortGraph::build(1, &[]).unwrap();
        let occ = occupancy(&[(VertexId(0), Color::On)]);
        let snap = Snapshot::capture(&g, &occ, VertexId(0), 3);
        assert_eq!(snap.cell_count(), 1);
        assert_eq!(snap.self_color(), Color::On);
        assert!(snap.robots().next().is_none());
    }

    fn path7() -> PortGraph {
        // a - b - c - d - e - f - g as 0..6
        PortGraph::build(
            7,
            &[
                (0, 1, 1, 1),
                (1, 2, 2, 1),
                (2, 2, 3, 1),
                (3, 2, 4, 1),
                (4, 2, 5, 1),
                (5, 2, 6, 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn observer_on_a_chain_sees_both_neighbours() {
        // robots on a (cell observer at c), e; like the worked communication
        // example: the middle robot sees its predecessor and successor
        let g = path7();
        let occ = occupancy(&[
            (VertexId(0), Color::On),
            (VertexId(2), Color::Conf3),
            (VertexId(4), Color::Wait(1)),
        ]);
        let snap = Snapshot::capture(&g, &occ, VertexId(2), 3);
        let seen: Vec<Color> = snap
            .robots()
            .map(|c| snap.occupant(c).unwrap().color)
            .collect();
        assert_eq!(seen.len(), 2);
        assert!(seen.contains(&Color::On));
        assert!(seen.contains(&Color::Wait(1)));
    }

    #[test]
    fn radius_zero_sees_only_self() {
        let g = path7();
        let occ = occupancy(&[(VertexId(3), Color::Mov), (VertexId(1), Color::On)]);
        let snap = Snapshot::capture(&g, &occ, VertexId(3), 0);
        assert_eq!(snap.cell_count(), 1);
    }

    #[test]
    fn resolve_predecessor_prefers_the_nearest() {
        let g = path7();
        // robots one and two hops away; the nearer one wins
        let occ = occupancy(&[
            (VertexId(2), Color::On),
            (VertexId(3), Color::Mov),
            (VertexId(4), Color::Conf3),
        ]);
        let snap = Snapshot::capture(&g, &occ, VertexId(2), 3);
        let pred = snap.resolve_predecessor().unwrap();
        assert_eq!(snap.dist(pred), 1);

        // no robot within two hops
        let occ = occupancy(&[(VertexId(0), Color::On), (VertexId(4), Color::Wait(1))]);
        let snap = Snapshot::capture(&g, &occ, VertexId(0), 3);
        assert!(snap.resolve_predecessor().is_none());

        // a finished robot does not count
        let occ = occupancy(&[(VertexId(0), Color::On), (VertexId(2), Color::Off)]);
        let snap = Snapshot::capture(&g, &occ, VertexId(0), 3);
        assert!(snap.resolve_predecessor().is_none());
    }

    #[test]
    fn predecessor_two_hops_via_unit_ports() {
        // door arm: both hops towards the anchor use port 1
        let g = PortGraph::build(1, &[]).unwrap();
        let (g, doors) = g.attach_doors(&[VertexId(0)]).unwrap();
        let d = doors.doors()[0];
        let occ = occupancy(&[(d.door, Color::On), (d.anchor, Color::Mov)]);
        let snap = Snapshot::capture(&g, &occ, d.door, 3);
        let pred = snap.resolve_predecessor().unwrap();
        assert_eq!(snap.canonical(pred), &[Port(1), Port(1)]);
        assert_eq!(snap.dist(pred), 2);
    }

    #[test]
    fn successor_position_reverses_the_entry() {
        let mut vars = RobotVars::spawned(1);
        vars.state = RobotState::Follower;
        assert!(successor_position(&vars).is_none());
        vars.entry = Some(EntryRecord {
            taken: TwoHopPath::new(1, 2),
            back: TwoHopPath::new(2, 1),
        });
        assert!(successor_position(&vars).is_none());
        vars.has_successor = true;
        assert_eq!(successor_position(&vars), Some(TwoHopPath::new(2, 1)));
    }

    #[test]
    fn snapshot_is_local() {
        let g = path7();
        let base = occupancy(&[(VertexId(0), Color::On), (VertexId(2), Color::Mov)]);
        let mut far = base.clone();
        far.insert(VertexId(6), SeenRobot { color: Color::Wait(1), in_transit: false });
        let a = Snapshot::capture(&g, &base, VertexId(0), 3);
        let b = Snapshot::capture(&g, &far, VertexId(0), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_paths_pick_the_smallest_ports() {
        // cycle of four: two shortest paths to the opposite vertex
        let g = PortGraph::build(
            4,
            &[(0, 1, 1, 1), (1, 2, 2, 1), (2, 2, 3, 1), (3, 2, 0, 2)],
        )
        .unwrap();
        let occ = occupancy(&[(VertexId(0), Color::On)]);
        let snap = Snapshot::capture(&g, &occ, VertexId(0), 3);
        let far = snap
            .cells()
            .find(|&c| snap.dist(c) == 2)
            .unwrap();
        // via port 1 to vertex 1 (its port 2 continues to vertex 2), not via
        // port 2 to vertex 3
        assert_eq!(snap.canonical(far), &[Port(1), Port(2)]);
    }
}
