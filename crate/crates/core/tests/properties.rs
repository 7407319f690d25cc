//! Property tests: structural graph invariants, snapshot locality, and the
//! target-selection rule checked against a brute-force scan on the graph.

use std::collections::{BTreeMap, BTreeSet};
use std::collections::VecDeque;

use proptest::prelude::*;

use misfill_core::graph::{Port, PortGraph, VertexId};
use misfill_core::protocol::select_target;
use misfill_core::robot::{
    dominates, palette, successor_position, Color, EntryRecord, RobotState, RobotVars, SeenRobot,
    Snapshot, TwoHopPath,
};

fn reference_bfs(g: &PortGraph, from: VertexId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[from.index()] = 0;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        for (_, u, _) in g.neighbors(v) {
            if dist[u.index()] == u32::MAX {
                dist[u.index()] = dist[v.index()] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ports_form_a_bijection_and_edges_are_symmetric(
        n in 1usize..50, max_deg in 2u16..6, seed in 0u64..5000
    ) {
        let g = PortGraph::random_connected(n, max_deg, seed).unwrap();
        prop_assert!(g.max_degree() <= max_deg);
        for v in g.vertices() {
            let mut seen = BTreeSet::new();
            for (p, u, back) in g.neighbors(v) {
                prop_assert!(p.get() >= 1 && p.get() <= g.degree(v));
                prop_assert!(seen.insert(p));
                let (w, ret) = g.neighbor_via(u, back).unwrap();
                prop_assert_eq!(w, v);
                prop_assert_eq!(ret, p);
            }
            prop_assert_eq!(seen.len(), g.degree(v) as usize);
        }
    }

    #[test]
    fn neighborhood_and_ball_match_reference_bfs(
        n in 1usize..50, max_deg in 2u16..6, seed in 0u64..5000, k in 0u32..6
    ) {
        let g = PortGraph::random_connected(n, max_deg, seed).unwrap();
        let v = VertexId((seed % n as u64) as u32);
        let dist = reference_bfs(&g, v);
        let nbhd = g.neighborhood(v, k).unwrap();
        let ball = g.ball(v, k).unwrap();
        for u in g.vertices() {
            prop_assert_eq!(nbhd.contains(&u), dist[u.index()] == k);
            prop_assert_eq!(ball.contains(&u), dist[u.index()] <= k);
        }
        prop_assert!(ball.contains(&v));
    }

    #[test]
    fn path_set_is_contained_in_the_ball_and_symmetric(
        n in 2usize..16, max_deg in 2u16..5, seed in 0u64..2000, k in 1u32..6
    ) {
        let g = PortGraph::random_connected(n, max_deg, seed).unwrap();
        let u = VertexId(0);
        let w = VertexId((n - 1) as u32);
        let forward = g.path_set(u, w, k).unwrap();
        let backward = g.path_set(w, u, k).unwrap();
        prop_assert_eq!(&forward, &backward);
        let ball = g.ball(u, k).unwrap();
        prop_assert!(forward.is_subset(&ball));
        if !forward.is_empty() {
            prop_assert!(forward.contains(&u) && forward.contains(&w));
        }
    }

    #[test]
    fn door_attachment_adds_arms_and_keeps_originals_free(
        n in 1usize..20, max_deg in 2u16..5, seed in 0u64..2000, doors in 1usize..4
    ) {
        let g = PortGraph::random_connected(n, max_deg, seed).unwrap();
        let doors = doors.min(n);
        let anchors: Vec<VertexId> = (0..doors as u32).map(VertexId).collect();
        let (g2, att) = g.attach_doors(&anchors).unwrap();
        prop_assert_eq!(g2.vertex_count(), n + 2 * doors);
        prop_assert_eq!(
            g2.edge_list().len(),
            g.edge_list().len() + 2 * doors
        );
        // in the empty configuration every original vertex is free
        let empty = BTreeSet::new();
        for v in g.vertices() {
            prop_assert!(g2.is_free(&empty, v));
        }
        for d in att.doors() {
            prop_assert_eq!(g2.degree(d.door), 1);
            prop_assert_eq!(g2.degree(d.buffer), 2);
        }
    }

    #[test]
    fn palette_size_matches_the_budget(delta in 1u16..12, doors in 1u16..6) {
        let colors = palette(delta, doors);
        let expected = if doors == 1 {
            delta as usize + 8
        } else {
            delta as usize + doors as usize + 7
        };
        prop_assert_eq!(colors.len(), expected);
        let unique: BTreeSet<_> = colors.iter().collect();
        prop_assert_eq!(unique.len(), colors.len());
    }

    #[test]
    fn domination_is_a_strict_partial_order(delta in 1u16..5, doors in 1u16..6) {
        let colors = palette(delta, doors);
        for &a in &colors {
            prop_assert!(!dominates(a, a));
            for &b in &colors {
                for &c in &colors {
                    if dominates(a, b) && dominates(b, c) {
                        prop_assert!(dominates(a, c));
                    }
                }
                if dominates(a, b) {
                    prop_assert!(!dominates(b, a));
                }
            }
        }
    }

    #[test]
    fn snapshots_ignore_everything_outside_the_ball(
        n in 8usize..40, max_deg in 2u16..5, seed in 0u64..2000, radius in 1u32..4
    ) {
        let g = PortGraph::random_connected(n, max_deg, seed).unwrap();
        let here = VertexId(0);
        let dist = reference_bfs(&g, here);
        let mut occ: BTreeMap<VertexId, SeenRobot> = BTreeMap::new();
        occ.insert(here, SeenRobot { color: Color::Wait(1), in_transit: false });
        let base = Snapshot::capture(&g, &occ, here, radius);
        // drop a robot on every vertex strictly outside the ball
        let mut far = occ.clone();
        for v in g.vertices() {
            if dist[v.index()] > radius {
                far.insert(v, SeenRobot { color: Color::Conf3, in_transit: false });
            }
        }
        let with_far = Snapshot::capture(&g, &far, here, radius);
        prop_assert_eq!(base, with_far);
    }

    #[test]
    fn reversing_the_entry_returns_to_the_start(
        n in 3usize..30, max_deg in 2u16..6, seed in 0u64..2000
    ) {
        let g = PortGraph::random_connected(n, max_deg, seed).unwrap();
        // walk two hops from a random vertex and reverse the recorded entry
        let start = VertexId((seed % n as u64) as u32);
        for (p1, mid, back1) in g.neighbors(start) {
            for (p2, end, back2) in g.neighbors(mid) {
                if end == start {
                    continue;
                }
                let mut vars = RobotVars::spawned(1);
                vars.state = RobotState::Follower;
                vars.entry = Some(EntryRecord {
                    taken: TwoHopPath { first: p1, second: p2 },
                    back: TwoHopPath { first: back2, second: back1 },
                });
                vars.has_successor = true;
                let rev = successor_position(&vars).unwrap();
                let (m, _) = g.neighbor_via(end, rev.first).unwrap();
                prop_assert_eq!(m, mid);
                let (s, _) = g.neighbor_via(m, rev.second).unwrap();
                prop_assert_eq!(s, start);
            }
        }
    }

    /// Brute-force oracle for the single-door target rule, evaluated on the
    /// graph rather than through the snapshot.
    #[test]
    fn select_target_agrees_with_a_brute_force_scan(
        n in 3usize..20, max_deg in 2u16..6, seed in 0u64..3000, robots in 1usize..6
    ) {
        let g = PortGraph::random_connected(n, max_deg, seed).unwrap();
        let here = VertexId(0);
        let colors = [Color::On, Color::Conf3, Color::Mov, Color::Off, Color::Conf2];
        let mut occ: BTreeMap<VertexId, SeenRobot> = BTreeMap::new();
        occ.insert(here, SeenRobot { color: Color::Wait(1), in_transit: false });
        for i in 0..robots {
            let v = VertexId(((seed >> (i * 3)) % n as u64) as u32);
            let color = colors[(seed as usize >> i) % colors.len()];
            occ.entry(v).or_insert(SeenRobot { color, in_transit: false });
        }
        let snap = Snapshot::capture(&g, &occ, here, 3);
        let mut vars = RobotVars::spawned(1);
        vars.state = RobotState::Leader;
        vars.color = Color::Wait(1);
        let got = select_target(&vars, &snap);

        // oracle: first admissible (port, port) pair under the definition
        let occupied: BTreeSet<VertexId> = occ.keys().copied().collect();
        let dist_here = reference_bfs(&g, here);
        let mut expected = None;
        'scan: for (p1, mid, _) in g.neighbors(here) {
            if occupied.contains(&mid) {
                continue;
            }
            for (p2, v, _) in g.neighbors(mid) {
                if v == here || occupied.contains(&v) || !g.is_free(&occupied, v) {
                    continue;
                }
                let dist_v = reference_bfs(&g, v);
                let blocked = g.vertices().any(|x| {
                    x != here
                        && dist_v[x.index()] == 2
                        && dist_here[x.index()] <= 3
                        && occ.get(&x).map(|r| r.color != Color::Off).unwrap_or(false)
                });
                if !blocked {
                    expected = Some(TwoHopPath { first: p1, second: p2 });
                    break 'scan;
                }
            }
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn color_serialization_round_trips(delta in 1u16..9, doors in 1u16..5) {
        for c in palette(delta, doors) {
            let s = format!("{c}");
            prop_assert_eq!(s.parse::<Color>().unwrap(), c);
        }
    }
}

#[test]
fn canonical_positions_use_port_order_not_ids() {
    // two shortest paths of equal length: the smaller port sequence names
    // the cell regardless of vertex numbering
    let g = PortGraph::build(
        4,
        &[(0, 2, 1, 1), (0, 1, 2, 1), (1, 2, 3, 1), (2, 2, 3, 2)],
    )
    .unwrap();
    let mut occ = BTreeMap::new();
    occ.insert(VertexId(0), SeenRobot { color: Color::On, in_transit: false });
    let snap = Snapshot::capture(&g, &occ, VertexId(0), 2);
    let far = snap.cells().find(|&c| snap.dist(c) == 2).unwrap();
    // port 1 leads to vertex 2, then its port 2 reaches vertex 3
    assert_eq!(snap.canonical(far), &[Port(1), Port(2)]);
}
