//! End-to-end protocol runs on small random graphs with full monitoring.

use std::collections::BTreeSet;

use misfill_core::engine::{run, SchedulerPolicy, SimulationConfig};
use misfill_core::graph::{PortGraph, VertexId};
use misfill_core::protocol::Protocol;
use misfill_core::robot::Color;
use misfill_core::trace::{EventKind, Trace};
use misfill_core::verifier::{check_trace, enumerate_mis, is_maximal_independent};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(n: usize, max_deg: u16, seed: u64, doors: usize) -> (PortGraph, misfill_core::graph::DoorAttachment) {
    let h = PortGraph::random_connected(n, max_deg, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0ddba11);
    let mut anchors = BTreeSet::new();
    while anchors.len() < doors {
        anchors.insert(VertexId(rng.gen_range(0..n as u32)));
    }
    let anchors: Vec<VertexId> = anchors.into_iter().collect();
    h.attach_doors(&anchors).unwrap()
}

fn assert_conforming(
    g: &PortGraph,
    doors: &misfill_core::graph::DoorAttachment,
    protocol: Protocol,
    out: &misfill_core::engine::Outcome,
    label: &str,
) {
    assert!(out.terminated, "{label}: run did not terminate");
    assert_eq!(out.collision_count, 0, "{label}: collision");
    assert!(
        is_maximal_independent(g, &out.final_occupied),
        "{label}: final set {:?} not a maximal independent set",
        out.final_occupied
    );
    if g.vertex_count() <= 20 {
        let all = enumerate_mis(g).unwrap();
        assert!(
            all.contains(&out.final_occupied),
            "{label}: final set not among enumerated maximal independent sets"
        );
    }
    let reports = check_trace(&out.trace, g, doors, protocol);
    for r in reports.iter().filter(|r| r.hard) {
        assert!(
            r.pass,
            "{label}: monitor {} failed at {:?}",
            r.name, r.violation
        );
    }
}

#[test]
fn single_door_runs_fill_an_mis_under_every_scheduler() {
    for seed in 0..12u64 {
        let n = 3 + (seed as usize % 9);
        let (g, doors) = random_instance(n, 4, seed * 71 + 5, 1);
        for policy in [
            SchedulerPolicy::fsync(),
            SchedulerPolicy::ssync_random(seed),
            SchedulerPolicy::async_random(seed),
        ] {
            let kind = policy.kind;
            let cfg = SimulationConfig::new(Protocol::Ind);
            let out = run(&g, &doors, &policy, &cfg).unwrap();
            assert_conforming(&g, &doors, Protocol::Ind, &out, &format!("ind n={n} seed={seed} {kind}"));
        }
    }
}

#[test]
fn multi_door_runs_fill_an_mis_under_ssync() {
    for seed in 0..12u64 {
        let n = 4 + (seed as usize % 9);
        let k = 2 + (seed as usize % 2);
        let (g, doors) = random_instance(n, 4, seed * 131 + 17, k);
        for policy in [SchedulerPolicy::fsync(), SchedulerPolicy::ssync_random(seed)] {
            let kind = policy.kind;
            let cfg = SimulationConfig::new(Protocol::MultInd);
            let out = run(&g, &doors, &policy, &cfg).unwrap();
            assert_conforming(
                &g,
                &doors,
                Protocol::MultInd,
                &out,
                &format!("multind n={n} k={k} seed={seed} {kind}"),
            );
        }
    }
}

#[test]
fn handshake_colors_follow_the_confirmation_order() {
    // within one receive exchange the successor's light walks
    // CONF3 -> CONF -> CONFC -> CONF2 with no skips
    let (g, doors) = random_instance(8, 3, 99, 1);
    let cfg = SimulationConfig::new(Protocol::Ind);
    let out = run(&g, &doors, &SchedulerPolicy::fsync(), &cfg).unwrap();
    assert!(out.terminated);
    check_receive_order(&out.trace);
}

fn check_receive_order(trace: &Trace) {
    let robots = trace.robot_count();
    for r in 0..robots {
        let mut last = Color::On;
        for e in trace.of_robot(misfill_core::trace::RobotId(r as u32)) {
            if let EventKind::ColorChange { color } = e.kind {
                match color {
                    Color::Conf => assert!(
                        matches!(last, Color::On | Color::Conf3),
                        "robot {r}: CONF after {last}"
                    ),
                    Color::Conf2 => assert!(
                        matches!(last, Color::ConfC),
                        "robot {r}: CONF2 after {last}"
                    ),
                    _ => {}
                }
                last = color;
            }
        }
    }
}

#[test]
fn single_leader_at_all_times_single_door() {
    let (g, doors) = random_instance(10, 4, 4242, 1);
    let cfg = SimulationConfig::new(Protocol::Ind);
    for policy in [SchedulerPolicy::fsync(), SchedulerPolicy::async_random(7)] {
        let out = run(&g, &doors, &policy, &cfg).unwrap();
        let mut leaders = 0i32;
        for e in &out.trace.events {
            match e.kind {
                EventKind::StateChange { state: misfill_core::robot::RobotState::Leader } => {
                    leaders += 1;
                    assert!(leaders <= 1, "two leaders alive at tick {}", e.tick);
                }
                EventKind::Finish { .. } => {
                    // only leaders finish
                    leaders -= 1;
                }
                _ => {}
            }
        }
    }
}

#[test]
fn anchors_forming_a_clique_leave_one_active_door() {
    // three anchors pairwise adjacent: only the strongest door's chain may
    // enter the clique; the other doors seal at or next to their doors
    let h = PortGraph::build(
        3,
        &[(0, 1, 1, 1), (1, 2, 2, 1), (2, 2, 0, 2)],
    )
    .unwrap();
    let (g, doors) = h
        .attach_doors(&[VertexId(0), VertexId(1), VertexId(2)])
        .unwrap();
    let cfg = SimulationConfig::new(Protocol::MultInd);
    let out = run(&g, &doors, &SchedulerPolicy::fsync(), &cfg).unwrap();
    assert_conforming(&g, &doors, Protocol::MultInd, &out, "clique anchors");
    // door 1 fills its anchor; doors 2 and 3 finish on their door vertices
    assert!(out.final_occupied.contains(&doors.doors()[0].anchor));
    assert!(out.final_occupied.contains(&doors.doors()[1].door));
    assert!(out.final_occupied.contains(&doors.doors()[2].door));
    assert!(!out.final_occupied.contains(&doors.doors()[1].anchor));
    assert!(!out.final_occupied.contains(&doors.doors()[2].anchor));
}

#[test]
fn multind_on_one_door_reduces_to_ind() {
    for seed in 0..8u64 {
        let n = 3 + (seed as usize % 8);
        let (g, doors) = random_instance(n, 4, seed * 313 + 29, 1);
        let policy = SchedulerPolicy::ssync_random(seed);
        let a = run(&g, &doors, &policy, &SimulationConfig::new(Protocol::Ind)).unwrap();
        let b = run(&g, &doors, &policy, &SimulationConfig::new(Protocol::MultInd)).unwrap();
        assert_eq!(
            a.trace.events, b.trace.events,
            "single-door reduction diverged at n={n} seed={seed}"
        );
    }
}

#[test]
fn single_door_visibility_floor_is_tight() {
    let (g, doors) = misfill_core::graph::families::visibility_floor_single_door();
    // standard radius: fills a maximal independent set
    let cfg = SimulationConfig::new(Protocol::Ind);
    let out = run(&g, &doors, &SchedulerPolicy::fsync(), &cfg).unwrap();
    assert!(out.terminated);
    assert!(is_maximal_independent(&g, &out.final_occupied));

    // forced down to two hops, the same schedule ends with two occupied
    // vertices adjacent
    let mut unsafe_cfg = SimulationConfig::new(Protocol::Ind);
    unsafe_cfg.visibility = Some(2);
    let out = run(&g, &doors, &SchedulerPolicy::fsync(), &unsafe_cfg).unwrap();
    assert!(out.terminated);
    assert!(
        !misfill_core::verifier::is_independent(&g, &out.final_occupied)
            || !is_maximal_independent(&g, &out.final_occupied),
        "visibility 2 should break the protocol on this family"
    );
}

#[test]
fn two_door_visibility_floor_is_tight() {
    let (g, doors) = misfill_core::graph::families::visibility_floor_two_door();
    // lockstep semi-synchronous schedule: an empty script activates everyone
    let lockstep = || SchedulerPolicy::ssync_scripted(Vec::new());

    let cfg = SimulationConfig::new(Protocol::MultInd);
    let out = run(&g, &doors, &lockstep(), &cfg).unwrap();
    assert!(out.terminated);
    assert!(is_maximal_independent(&g, &out.final_occupied));

    let mut unsafe_cfg = SimulationConfig::new(Protocol::MultInd);
    unsafe_cfg.visibility = Some(4);
    let out = run(&g, &doors, &lockstep(), &unsafe_cfg).unwrap();
    assert!(out.terminated);
    assert!(
        !misfill_core::verifier::is_independent(&g, &out.final_occupied)
            || !is_maximal_independent(&g, &out.final_occupied),
        "visibility 4 should break the protocol on this family, got {:?}",
        out.final_occupied
    );
}

#[test]
fn finished_robots_never_vacate_and_wait_ranks_match_doors() {
    for seed in 0..6u64 {
        let (g, doors) = random_instance(4 + (seed as usize % 9), 4, seed * 97 + 3, 2);
        let cfg = SimulationConfig::new(Protocol::MultInd);
        let out = run(&g, &doors, &SchedulerPolicy::ssync_random(seed), &cfg).unwrap();
        assert!(out.terminated);
        let mut finished: Vec<bool> = vec![false; out.trace.robot_count()];
        let mut rank: Vec<u16> = vec![0; out.trace.robot_count()];
        for e in &out.trace.events {
            let id = match e.robot {
                Some(r) => r.0 as usize,
                None => continue,
            };
            match &e.kind {
                EventKind::Spawn { rank: r, .. } => rank[id] = *r,
                EventKind::Finish { .. } => finished[id] = true,
                EventKind::MoveStart { .. } | EventKind::Hop { .. } => {
                    assert!(!finished[id], "finished robot {id} moved");
                }
                EventKind::ColorChange { color: Color::Wait(r) } => {
                    assert_eq!(*r, rank[id], "robot {id} showed a foreign wait rank");
                }
                _ => {}
            }
        }
    }
}

#[test]
fn sparse_traces_drop_look_and_compute_events() {
    let (g, doors) = random_instance(6, 3, 44, 1);
    let mut cfg = SimulationConfig::new(Protocol::Ind);
    cfg.trace_level = misfill_core::engine::TraceLevel::Sparse;
    let out = run(&g, &doors, &SchedulerPolicy::fsync(), &cfg).unwrap();
    assert!(out.terminated);
    assert!(out.trace.events.iter().all(|e| !matches!(
        e.kind,
        EventKind::Look { .. } | EventKind::ComputeDone { .. }
    )));
    assert!(out
        .trace
        .events
        .iter()
        .any(|e| matches!(e.kind, EventKind::MoveEnd { .. })));
}

#[test]
fn round_robin_activation_also_fills() {
    use misfill_core::engine::{ActivationPolicy, SchedulerKind};
    for seed in 0..4u64 {
        let n = 4 + (seed as usize % 6);
        let (g, doors) = random_instance(n, 4, seed * 53 + 11, 1);
        let policy = misfill_core::engine::SchedulerPolicy {
            kind: SchedulerKind::SSync,
            activation: ActivationPolicy::RoundRobin,
            fairness_bound: 8,
        };
        let out = run(&g, &doors, &policy, &SimulationConfig::new(Protocol::Ind)).unwrap();
        assert_conforming(&g, &doors, Protocol::Ind, &out, &format!("rr n={n} seed={seed}"));
    }
}
