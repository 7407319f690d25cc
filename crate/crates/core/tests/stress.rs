//! Long-running randomized stress beyond the acceptance corpora. Ignored by
//! default; run with `cargo test --test stress -- --ignored`.

use std::collections::BTreeSet;

use misfill_core::engine::{run, SchedulerPolicy, SimulationConfig};
use misfill_core::graph::{DoorAttachment, PortGraph, VertexId};
use misfill_core::protocol::Protocol;
use misfill_core::verifier::{check_trace, is_maximal_independent};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(n: usize, max_deg: u16, seed: u64, doors: usize) -> (PortGraph, DoorAttachment) {
    let h = PortGraph::random_connected(n, max_deg, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
    let mut anchors = BTreeSet::new();
    while anchors.len() < doors.min(n) {
        anchors.insert(VertexId(rng.gen_range(0..n as u32)));
    }
    let anchors: Vec<VertexId> = anchors.into_iter().collect();
    h.attach_doors(&anchors).unwrap()
}

#[test]
#[ignore]
fn wide_randomized_stress() {
    let mut failures = Vec::new();
    let mut runs = 0usize;
    for i in 0..1500u64 {
        let n = 3 + (i as usize * 11) % 14;
        let k = 1 + (i as usize) % 4.min(n);
        let (g, doors) = instance(n, 2 + (i % 4) as u16 + 2, i * 7919 + 23, k);
        let protocol = if k == 1 { Protocol::Ind } else { Protocol::MultInd };
        let mut policies = vec![SchedulerPolicy::fsync()];
        for s in 0..3 {
            policies.push(SchedulerPolicy::ssync_random(i * 101 + s));
            if k == 1 {
                policies.push(SchedulerPolicy::async_random(i * 103 + s));
            }
        }
        for policy in policies {
            runs += 1;
            let kind = policy.kind;
            let cfg = SimulationConfig::new(protocol);
            let out = run(&g, &doors, &policy, &cfg).unwrap();
            let mut bad = Vec::new();
            if !out.terminated {
                bad.push("no-termination".to_string());
            }
            if out.collision_count != 0 {
                bad.push("collision".to_string());
            }
            if out.terminated && !is_maximal_independent(&g, &out.final_occupied) {
                bad.push("not-mis".to_string());
            }
            for r in check_trace(&out.trace, &g, &doors, protocol) {
                if r.hard && !r.pass {
                    bad.push(format!("{}: {:?}", r.name, r.violation));
                }
            }
            if !bad.is_empty() {
                failures.push(format!("n={n} k={k} i={i} {kind}: {}", bad.join("; ")));
            }
        }
    }
    eprintln!("stress: {runs} runs, {} failures", failures.len());
    for f in failures.iter().take(20) {
        eprintln!("  {f}");
    }
    assert!(failures.is_empty());
}

#[test]
#[ignore]
fn two_door_corridor_family_hammer() {
    let (g, doors) = misfill_core::graph::families::visibility_floor_two_door();
    let mut hard_failures = 0;
    let mut soft_rank_flags = 0;
    for seed in 0..500u64 {
        let policy = SchedulerPolicy::ssync_random(seed);
        let cfg = SimulationConfig::new(Protocol::MultInd);
        let out = run(&g, &doors, &policy, &cfg).unwrap();
        if !out.terminated
            || out.collision_count != 0
            || !is_maximal_independent(&g, &out.final_occupied)
        {
            hard_failures += 1;
            eprintln!("seed {seed}: term={} col={}", out.terminated, out.collision_count);
            continue;
        }
        for r in check_trace(&out.trace, &g, &doors, Protocol::MultInd) {
            if r.hard && !r.pass {
                hard_failures += 1;
                eprintln!("seed {seed}: {} {:?}", r.name, r.violation);
            }
            if r.name == "rank_safety" && !r.pass {
                soft_rank_flags += 1;
            }
        }
    }
    eprintln!("corridor hammer: 500 seeds, {hard_failures} hard failures, {soft_rank_flags} soft rank flags");
    assert_eq!(hard_failures, 0);
}

#[test]
#[ignore]
fn corridor_seed5_dump() {
    use misfill_core::trace::EventKind;
    use misfill_core::verifier::is_independent;
    let (g, doors) = misfill_core::graph::families::visibility_floor_two_door();
    let policy = SchedulerPolicy::ssync_random(5);
    let out = run(&g, &doors, &policy, &SimulationConfig::new(Protocol::MultInd)).unwrap();
    eprintln!(
        "final: {:?} independent={} maximal={}",
        out.final_occupied,
        is_independent(&g, &out.final_occupied),
        is_maximal_independent(&g, &out.final_occupied)
    );
    for e in &out.trace.events {
        if matches!(
            e.kind,
            EventKind::StateChange { .. }
                | EventKind::ColorChange { .. }
                | EventKind::MoveStart { .. }
                | EventKind::Finish { .. }
                | EventKind::Spawn { .. }
                | EventKind::MoveEnd { .. }
        ) {
            eprintln!("{:>4}.{:<3} {:?} {:?}", e.tick, e.seq, e.robot, e.kind);
        }
    }
}

#[test]
#[ignore]
fn stuck_dump() {
    use misfill_core::trace::EventKind;
    let base = 6u64 * 131 + 17;
    let h = PortGraph::random_connected(10, 4, base).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(base ^ 0x0ddba11);
    let mut anchors = BTreeSet::new();
    while anchors.len() < 2 {
        anchors.insert(VertexId(rng.gen_range(0..10u32)));
    }
    let anchors: Vec<VertexId> = anchors.into_iter().collect();
    let (g, doors) = h.attach_doors(&anchors).unwrap();
    eprintln!("edges: {:?}", g.edge_list());
    for d in doors.doors() {
        eprintln!("{:?}", d);
    }
    let mut cfg = SimulationConfig::new(Protocol::MultInd);
    cfg.max_ticks = Some(400);
    let out = run(&g, &doors, &SchedulerPolicy::fsync(), &cfg).unwrap();
    eprintln!("terminated={} final={:?}", out.terminated, out.final_occupied);
    let mut shown = 0;
    for e in out.trace.events.iter().rev() {
        if matches!(
            e.kind,
            EventKind::ColorChange { .. }
                | EventKind::StateChange { .. }
                | EventKind::MoveStart { .. }
                | EventKind::Finish { .. }
                | EventKind::Spawn { .. }
                | EventKind::MoveEnd { .. }
        ) {
            eprintln!("{:>4}.{:<3} {:?} {:?}", e.tick, e.seq, e.robot, e.kind);
            shown += 1;
            if shown > 30 {
                break;
            }
        }
    }
}
