//! Anonymous, connected, port-labeled graphs and door attachment.
//!
//! Vertices carry no identity visible to robots; each vertex `v` numbers its
//! incident edges with ports `1..=degree(v)`. The simulator uses dense
//! integer ids internally. A door is a degree-1 entry vertex wired to the
//! original graph through a buffer vertex, so that every vertex of the
//! original graph starts free.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense vertex index, stable within one graph. Door vertices are appended
/// after the vertices of the original graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// 1-based edge port local to a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port(pub u16);

impl Port {
    #[inline]
    pub fn get(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge description used to build graphs: `(u, port_at_u, v, port_at_v)`.
pub type EdgeSpec = (u32, u16, u32, u16);

/// Errors raised while constructing or querying graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// The edge list does not describe a connected graph.
    DisconnectedGraph,
    /// An edge joins a vertex to itself.
    SelfLoop { vertex: u32 },
    /// Two edges claim the same port at one vertex.
    DuplicatePort { vertex: u32, port: u16 },
    /// The same vertex pair appears twice.
    MultiEdge { u: u32, v: u32 },
    /// Ports at a vertex are not exactly `1..=degree`.
    PortGap { vertex: u32 },
    /// A vertex id is out of range.
    UnknownVertex { vertex: u32 },
    /// The same anchor was listed twice for door attachment.
    DuplicateAnchor { vertex: u32 },
    /// Generator parameters cannot produce a valid graph.
    InfeasibleParameters,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::DisconnectedGraph => write!(f, "graph is not connected"),
            GraphError::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            GraphError::DuplicatePort { vertex, port } => {
                write!(f, "duplicate port {port} at vertex {vertex}")
            }
            GraphError::MultiEdge { u, v } => write!(f, "multi-edge between {u} and {v}"),
            GraphError::PortGap { vertex } => {
                write!(f, "ports at vertex {vertex} are not exactly 1..=degree")
            }
            GraphError::UnknownVertex { vertex } => write!(f, "unknown vertex {vertex}"),
            GraphError::DuplicateAnchor { vertex } => write!(f, "duplicate anchor {vertex}"),
            GraphError::InfeasibleParameters => write!(f, "infeasible generator parameters"),
        }
    }
}

impl core::error::Error for GraphError {}

/// One door: the degree-1 entry vertex, its buffer, and the anchor vertex of
/// the original graph the buffer is wired to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Door {
    pub door: VertexId,
    pub buffer: VertexId,
    pub anchor: VertexId,
}

/// Doors in priority order; rank 1 (index 0) is the strongest in the wait
/// color hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoorAttachment {
    doors: Vec<Door>,
}

impl DoorAttachment {
    pub fn doors(&self) -> &[Door] {
        &self.doors
    }

    pub fn count(&self) -> usize {
        self.doors.len()
    }

    /// 1-based rank of the given door vertex, if it is one.
    pub fn rank_of(&self, v: VertexId) -> Option<u16> {
        self.doors
            .iter()
            .position(|d| d.door == v)
            .map(|i| (i + 1) as u16)
    }

    /// Door with the given 1-based rank.
    pub fn by_rank(&self, rank: u16) -> Option<&Door> {
        self.doors.get(rank as usize - 1)
    }
}

/// Connected simple graph with a per-vertex port numbering.
///
/// `adj[v][p-1]` holds the endpoint reached from `v` through port `p`
/// together with the port that leads back, so edge records are mutually
/// consistent by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortGraph {
    adj: Vec<Vec<(VertexId, Port)>>,
    max_degree: u16,
}

impl PortGraph {
    /// Validates an edge list and builds the graph. `n` is the vertex count;
    /// vertices without edges are only legal for `n == 1`.
    pub fn build(n: usize, edges: &[EdgeSpec]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InfeasibleParameters);
        }
        let mut ports: Vec<Vec<(u16, u32, u16)>> = vec![Vec::new(); n];
        let mut seen_pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
        for &(u, pu, v, pv) in edges {
            if u as usize >= n {
                return Err(GraphError::UnknownVertex { vertex: u });
            }
            if v as usize >= n {
                return Err(GraphError::UnknownVertex { vertex: v });
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            let pair = (u.min(v), u.max(v));
            if !seen_pairs.insert(pair) {
                return Err(GraphError::MultiEdge { u: pair.0, v: pair.1 });
            }
            ports[u as usize].push((pu, v, pv));
            ports[v as usize].push((pv, u, pu));
        }
        let mut adj: Vec<Vec<(VertexId, Port)>> = Vec::with_capacity(n);
        let mut max_degree = 0u16;
        for (v, mut list) in ports.into_iter().enumerate() {
            list.sort_unstable();
            let degree = list.len() as u16;
            max_degree = max_degree.max(degree);
            let mut row = Vec::with_capacity(list.len());
            for (i, &(p, other, back)) in list.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(GraphError::PortGap { vertex: v as u32 });
                }
                if i + 1 != p as usize {
                    // sorted, so a mismatch is either a duplicate or a gap
                    if i > 0 && list[i - 1].0 == p {
                        return Err(GraphError::DuplicatePort { vertex: v as u32, port: p });
                    }
                    return Err(GraphError::PortGap { vertex: v as u32 });
                }
                row.push((VertexId(other), Port(back)));
            }
            adj.push(row);
        }
        let g = PortGraph { adj, max_degree };
        if !g.is_connected() {
            return Err(GraphError::DisconnectedGraph);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn max_degree(&self) -> u16 {
        self.max_degree
    }

    pub fn degree(&self, v: VertexId) -> u16 {
        self.adj[v.index()].len() as u16
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.adj.len()
    }

    /// Endpoint and return port of the edge leaving `v` through `port`.
    pub fn neighbor_via(&self, v: VertexId, port: Port) -> Option<(VertexId, Port)> {
        self.adj
            .get(v.index())
            .and_then(|row| row.get(port.get() as usize - 1))
            .copied()
    }

    /// Iterates `(port, neighbor, back_port)` in port order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (Port, VertexId, Port)> + '_ {
        self.adj[v.index()]
            .iter()
            .enumerate()
            .map(|(i, &(u, back))| (Port(i as u16 + 1), u, back))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.adj.len() as u32).map(VertexId)
    }

    pub fn edge_list(&self) -> Vec<EdgeSpec> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for (p, u, back) in self.neighbors(v) {
                if v.0 < u.0 {
                    out.push((v.0, p.get(), u.0, back.get()));
                }
            }
        }
        out
    }

    fn is_connected(&self) -> bool {
        let d = self.distances_from(VertexId(0));
        d.iter().all(|&x| x != u32::MAX)
    }

    /// BFS distances from `v`; unreachable vertices get `u32::MAX`.
    pub fn distances_from(&self, v: VertexId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut queue = alloc::collections::VecDeque::new();
        dist[v.index()] = 0;
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x.index()];
            for &(y, _) in &self.adj[x.index()] {
                if dist[y.index()] == u32::MAX {
                    dist[y.index()] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: VertexId, w: VertexId) -> u32 {
        self.distances_from(u)[w.index()]
    }

    /// Vertices at distance exactly `k` from `v`.
    pub fn neighborhood(&self, v: VertexId, k: u32) -> Result<BTreeSet<VertexId>, GraphError> {
        if !self.contains(v) {
            return Err(GraphError::UnknownVertex { vertex: v.0 });
        }
        let dist = self.distances_from(v);
        Ok(self
            .vertices()
            .filter(|u| dist[u.index()] == k)
            .collect())
    }

    /// Vertices within `k` hops of `v`, always containing `v`.
    pub fn ball(&self, v: VertexId, k: u32) -> Result<BTreeSet<VertexId>, GraphError> {
        if !self.contains(v) {
            return Err(GraphError::UnknownVertex { vertex: v.0 });
        }
        let dist = self.distances_from(v);
        Ok(self
            .vertices()
            .filter(|u| dist[u.index()] <= k)
            .collect())
    }

    /// Union of the vertex sets of all simple paths from `u` to `w` of
    /// length at most `k`. Empty when no such path exists.
    pub fn path_set(
        &self,
        u: VertexId,
        w: VertexId,
        k: u32,
    ) -> Result<BTreeSet<VertexId>, GraphError> {
        if !self.contains(u) {
            return Err(GraphError::UnknownVertex { vertex: u.0 });
        }
        if !self.contains(w) {
            return Err(GraphError::UnknownVertex { vertex: w.0 });
        }
        let mut out = BTreeSet::new();
        // Prune with exact distances to the destination.
        let to_w = self.distances_from(w);
        let mut stack: Vec<VertexId> = vec![u];
        let mut on_path = vec![false; self.vertex_count()];
        on_path[u.index()] = true;
        self.path_set_rec(u, w, k, &to_w, &mut stack, &mut on_path, &mut out);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn path_set_rec(
        &self,
        at: VertexId,
        w: VertexId,
        budget: u32,
        to_w: &[u32],
        stack: &mut Vec<VertexId>,
        on_path: &mut [bool],
        out: &mut BTreeSet<VertexId>,
    ) {
        if at == w {
            out.extend(stack.iter().copied());
            // a longer simple path may still revisit other vertices, but it
            // cannot pass through w again, so stop here
            return;
        }
        if budget == 0 {
            return;
        }
        for &(next, _) in &self.adj[at.index()] {
            if on_path[next.index()] || to_w[next.index()] > budget - 1 {
                continue;
            }
            on_path[next.index()] = true;
            stack.push(next);
            self.path_set_rec(next, w, budget - 1, to_w, stack, on_path, out);
            stack.pop();
            on_path[next.index()] = false;
        }
    }

    /// A vertex is free when none of its neighbors is occupied. The vertex
    /// itself may be occupied; move legality is enforced by the protocols.
    pub fn is_free(&self, occupied: &BTreeSet<VertexId>, v: VertexId) -> bool {
        self.adj[v.index()].iter().all(|(u, _)| !occupied.contains(u))
    }

    /// Attaches one door per anchor: `door -> buffer -> anchor`. The new edge
    /// at the anchor gets the next port after its existing ones; buffers use
    /// port 1 toward the graph and port 2 toward the door. Anchor order
    /// defines the door rank hierarchy (first anchor is rank 1).
    pub fn attach_doors(
        &self,
        anchors: &[VertexId],
    ) -> Result<(PortGraph, DoorAttachment), GraphError> {
        let mut seen = BTreeSet::new();
        for &a in anchors {
            if !self.contains(a) {
                return Err(GraphError::UnknownVertex { vertex: a.0 });
            }
            if !seen.insert(a) {
                return Err(GraphError::DuplicateAnchor { vertex: a.0 });
            }
        }
        let n = self.vertex_count() as u32;
        let mut edges = self.edge_list();
        let mut doors = Vec::with_capacity(anchors.len());
        for (i, &a) in anchors.iter().enumerate() {
            let buffer = VertexId(n + 2 * i as u32);
            let door = VertexId(n + 2 * i as u32 + 1);
            edges.push((a.0, self.degree(a) + 1, buffer.0, 1));
            edges.push((buffer.0, 2, door.0, 1));
            doors.push(Door { door, buffer, anchor: a });
        }
        let g = PortGraph::build(self.vertex_count() + 2 * anchors.len(), &edges)?;
        Ok((g, DoorAttachment { doors }))
    }

    /// Deterministic random connected graph with max degree at most
    /// `max_deg` and dense ports. The same `(n, max_deg, seed)` triple always
    /// produces the same graph.
    pub fn random_connected(n: usize, max_deg: u16, seed: u64) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InfeasibleParameters);
        }
        if n >= 2 && max_deg < 1 || n >= 3 && max_deg < 2 {
            return Err(GraphError::InfeasibleParameters);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n];
        // random spanning tree honoring the degree bound
        for v in 1..n as u32 {
            let candidates: Vec<u32> = (0..v)
                .filter(|&u| neighbors[u as usize].len() < max_deg as usize)
                .collect();
            let parent = candidates[rng.gen_range(0..candidates.len())];
            neighbors[parent as usize].push(v);
            neighbors[v as usize].push(parent);
        }
        // extra edges
        if n >= 3 {
            let attempts = rng.gen_range(0..=n);
            for _ in 0..attempts {
                let u = rng.gen_range(0..n as u32);
                let v = rng.gen_range(0..n as u32);
                if u == v
                    || neighbors[u as usize].contains(&v)
                    || neighbors[u as usize].len() >= max_deg as usize
                    || neighbors[v as usize].len() >= max_deg as usize
                {
                    continue;
                }
                neighbors[u as usize].push(v);
                neighbors[v as usize].push(u);
            }
        }
        // dense ports in a per-vertex random order
        for list in neighbors.iter_mut() {
            list.shuffle(&mut rng);
        }
        let mut port_of = alloc::collections::BTreeMap::new();
        for (v, list) in neighbors.iter().enumerate() {
            for (i, &u) in list.iter().enumerate() {
                port_of.insert((v as u32, u), (i + 1) as u16);
            }
        }
        let mut edges = Vec::new();
        for (v, list) in neighbors.iter().enumerate() {
            for &u in list {
                if (v as u32) < u {
                    edges.push((v as u32, port_of[&(v as u32, u)], u, port_of[&(u, v as u32)]));
                }
            }
        }
        PortGraph::build(n, &edges)
    }
}

/// Fixed graph families on which the protocols' visibility ranges are
/// tight: running with a lower radius produces adjacent occupied vertices
/// under some schedule, while the standard radius stays safe.
pub mod families {
    use super::{DoorAttachment, PortGraph, VertexId};
    use alloc::vec;
    use alloc::vec::Vec;

    /// Single-door family before door attachment. Two legs meet at the
    /// anchor and close into a ring: anchor-b-c and anchor-w-y-x, joined by
    /// the c-z-x bridge where the two explorations meet.
    pub fn visibility_floor_single_door_original() -> (PortGraph, Vec<VertexId>) {
        // 0 = anchor, 1 = b, 2 = c, 3 = w, 4 = y, 5 = x, 6 = z
        let h = PortGraph::build(
            7,
            &[
                (0, 1, 1, 1),
                (0, 2, 3, 1),
                (1, 2, 2, 1),
                (2, 2, 6, 1),
                (3, 2, 4, 1),
                (4, 2, 5, 1),
                (5, 2, 6, 2),
            ],
        )
        .expect("fixed family must build");
        (h, vec![VertexId(0)])
    }

    /// Single-door family. With visibility 3 the run fills a maximal
    /// independent set; forced down to 2, the leader cannot see that a
    /// candidate's neighbor three hops away is occupied and settles next to
    /// an occupied vertex.
    pub fn visibility_floor_single_door() -> (PortGraph, DoorAttachment) {
        let (h, anchors) = visibility_floor_single_door_original();
        h.attach_doors(&anchors).expect("fixed family must attach")
    }

    /// Two-door family before door attachment: a six-vertex path with a
    /// door at each end.
    pub fn visibility_floor_two_door_original() -> (PortGraph, Vec<VertexId>) {
        let h = PortGraph::build(
            6,
            &[
                (0, 1, 1, 1),
                (1, 2, 2, 1),
                (2, 2, 3, 1),
                (3, 2, 4, 1),
                (4, 2, 5, 1),
            ],
        )
        .expect("fixed family must build");
        (h, vec![VertexId(0), VertexId(5)])
    }

    /// Two-door family. With visibility 5 the two leaders see each other's
    /// wait colors across the path and the weaker one holds back; at 4 they
    /// are mutually invisible and under a lockstep schedule both settle on
    /// the adjacent middle vertices.
    pub fn visibility_floor_two_door() -> (PortGraph, DoorAttachment) {
        let (h, anchors) = visibility_floor_two_door_original();
        h.attach_doors(&anchors).expect("fixed family must attach")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> PortGraph {
        // 1 - 2 - 3 in the spec's 1-based naming, 0-based here
        PortGraph::build(3, &[(0, 1, 1, 1), (1, 2, 2, 1)]).unwrap()
    }

    #[test]
    fn builds_smallest_path() {
        let g = path3();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.degree(VertexId(1)), 2);
    }

    #[test]
    fn builds_degenerate_single_vertex() {
        let g = PortGraph::build(1, &[]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.max_degree(), 0);
    }

    #[test]
    fn builds_triangle_and_validates_port_bijection() {
        let g = PortGraph::build(
            3,
            &[(0, 1, 1, 1), (1, 2, 2, 1), (2, 2, 0, 2)],
        )
        .unwrap();
        assert_eq!(g.max_degree(), 2);
        for v in g.vertices() {
            assert_eq!(g.degree(v), 2);
            // follow each port out and back
            for (p, u, back) in g.neighbors(v) {
                let (w, ret) = g.neighbor_via(u, back).unwrap();
                assert_eq!(w, v);
                assert_eq!(ret, p);
            }
        }
    }

    #[test]
    fn rejects_bad_edge_lists() {
        assert_eq!(
            PortGraph::build(2, &[(0, 1, 0, 2)]).unwrap_err(),
            GraphError::SelfLoop { vertex: 0 }
        );
        assert_eq!(
            PortGraph::build(3, &[(0, 1, 1, 1), (0, 1, 2, 1)]).unwrap_err(),
            GraphError::DuplicatePort { vertex: 0, port: 1 }
        );
        assert_eq!(
            PortGraph::build(3, &[(0, 1, 1, 1), (0, 2, 1, 2), (1, 3, 2, 1)]).unwrap_err(),
            GraphError::MultiEdge { u: 0, v: 1 }
        );
        assert_eq!(
            PortGraph::build(3, &[(0, 1, 1, 2), (1, 3, 2, 1)]).unwrap_err(),
            GraphError::PortGap { vertex: 1 }
        );
        assert_eq!(
            PortGraph::build(4, &[(0, 1, 1, 1), (2, 1, 3, 1)]).unwrap_err(),
            GraphError::DisconnectedGraph
        );
        assert_eq!(
            PortGraph::build(2, &[(0, 1, 5, 1)]).unwrap_err(),
            GraphError::UnknownVertex { vertex: 5 }
        );
    }

    #[test]
    fn attaches_door_to_single_vertex() {
        let g = PortGraph::build(1, &[]).unwrap();
        let (g2, doors) = g.attach_doors(&[VertexId(0)]).unwrap();
        assert_eq!(g2.vertex_count(), 3);
        assert_eq!(doors.count(), 1);
        let d = doors.doors()[0];
        assert_eq!(g2.degree(d.door), 1);
        assert_eq!(g2.degree(d.buffer), 2);
        assert_eq!(g2.neighbor_via(d.buffer, Port(1)).unwrap().0, d.anchor);
        assert_eq!(g2.neighbor_via(d.buffer, Port(2)).unwrap().0, d.door);
    }

    #[test]
    fn door_port_at_anchor_is_appended() {
        // path 1-2-3, anchor at the middle: degree goes 2 -> 3, new port is 3
        let g = path3();
        let (g2, doors) = g.attach_doors(&[VertexId(1)]).unwrap();
        assert_eq!(g2.vertex_count(), 5);
        assert_eq!(g2.degree(VertexId(1)), 3);
        let d = doors.doors()[0];
        assert_eq!(g2.neighbor_via(VertexId(1), Port(3)).unwrap().0, d.buffer);
        // original ports survive
        assert_eq!(g2.neighbor_via(VertexId(1), Port(1)).unwrap().0, VertexId(0));
        assert_eq!(g2.neighbor_via(VertexId(1), Port(2)).unwrap().0, VertexId(2));
    }

    #[test]
    fn attaches_three_doors_to_triangle() {
        let g = PortGraph::build(3, &[(0, 1, 1, 1), (1, 2, 2, 1), (2, 2, 0, 2)]).unwrap();
        let (g2, doors) = g
            .attach_doors(&[VertexId(0), VertexId(1), VertexId(2)])
            .unwrap();
        assert_eq!(g2.vertex_count(), 9);
        assert_eq!(doors.count(), 3);
        for d in doors.doors() {
            assert_eq!(g2.degree(d.door), 1);
        }
    }

    #[test]
    fn rejects_bad_anchors() {
        let g = path3();
        assert_eq!(
            g.attach_doors(&[VertexId(0), VertexId(0)]).unwrap_err(),
            GraphError::DuplicateAnchor { vertex: 0 }
        );
        assert_eq!(
            g.attach_doors(&[VertexId(9)]).unwrap_err(),
            GraphError::UnknownVertex { vertex: 9 }
        );
    }

    fn cycle4() -> PortGraph {
        PortGraph::build(
            4,
            &[(0, 1, 1, 1), (1, 2, 2, 1), (2, 2, 3, 1), (3, 2, 0, 2)],
        )
        .unwrap()
    }

    #[test]
    fn neighborhood_on_cycle() {
        let g = cycle4();
        let n1 = g.neighborhood(VertexId(0), 1).unwrap();
        assert_eq!(n1, BTreeSet::from([VertexId(1), VertexId(3)]));
        let n2 = g.neighborhood(VertexId(0), 2).unwrap();
        assert_eq!(n2, BTreeSet::from([VertexId(2)]));
        assert_eq!(
            g.neighborhood(VertexId(0), 0).unwrap(),
            BTreeSet::from([VertexId(0)])
        );
    }

    #[test]
    fn neighborhood_through_door_arm() {
        let g = PortGraph::build(1, &[]).unwrap();
        let (g2, doors) = g.attach_doors(&[VertexId(0)]).unwrap();
        let d = doors.doors()[0];
        let n2 = g2.neighborhood(d.door, 2).unwrap();
        assert_eq!(n2, BTreeSet::from([d.anchor]));
    }

    #[test]
    fn ball_examples() {
        let g = cycle4();
        assert_eq!(g.ball(VertexId(2), 0).unwrap(), BTreeSet::from([VertexId(2)]));
        // path of 6 vertices, endpoint, k=3 -> first four vertices
        let p6 = PortGraph::build(
            6,
            &[
                (0, 1, 1, 1),
                (1, 2, 2, 1),
                (2, 2, 3, 1),
                (3, 2, 4, 1),
                (4, 2, 5, 1),
            ],
        )
        .unwrap();
        assert_eq!(
            p6.ball(VertexId(0), 3).unwrap(),
            BTreeSet::from([VertexId(0), VertexId(1), VertexId(2), VertexId(3)])
        );
        // complete graph on 4 vertices, k=1 -> everything
        let k4 = PortGraph::build(
            4,
            &[
                (0, 1, 1, 1),
                (0, 2, 2, 1),
                (0, 3, 3, 1),
                (1, 2, 2, 2),
                (1, 3, 3, 2),
                (2, 3, 3, 3),
            ],
        )
        .unwrap();
        assert_eq!(k4.ball(VertexId(1), 1).unwrap().len(), 4);
    }

    #[test]
    fn path_set_examples() {
        let g = path3();
        assert_eq!(
            g.path_set(VertexId(0), VertexId(2), 2).unwrap(),
            BTreeSet::from([VertexId(0), VertexId(1), VertexId(2)])
        );
        let c4 = cycle4();
        assert_eq!(
            c4.path_set(VertexId(0), VertexId(2), 2).unwrap(),
            BTreeSet::from([VertexId(0), VertexId(1), VertexId(2), VertexId(3)])
        );
        let p7 = PortGraph::build(
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
        .unwrap();
        assert!(p7.path_set(VertexId(0), VertexId(6), 3).unwrap().is_empty());
    }

    #[test]
    fn is_free_examples() {
        let g = path3();
        let occupied = BTreeSet::from([VertexId(0)]);
        assert!(g.is_free(&occupied, VertexId(2)));
        assert!(!g.is_free(&occupied, VertexId(1)));
        let star = PortGraph::build(
            5,
            &[(0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1), (0, 4, 4, 1)],
        )
        .unwrap();
        let center = BTreeSet::from([VertexId(0)]);
        for leaf in 1..5 {
            assert!(!star.is_free(&center, VertexId(leaf)));
        }
    }

    #[test]
    fn random_graphs_are_deterministic_and_valid() {
        let a = PortGraph::random_connected(8, 3, 7).unwrap();
        let b = PortGraph::random_connected(8, 3, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.max_degree() <= 3);
        let single = PortGraph::random_connected(1, 0, 1).unwrap();
        assert_eq!(single.vertex_count(), 1);
        assert_eq!(
            PortGraph::random_connected(5, 1, 3).unwrap_err(),
            GraphError::InfeasibleParameters
        );
    }
}
