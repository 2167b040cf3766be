mod common;

use auvsim::acoustics::uplink_energy_at;
use auvsim::env::{
    collision_penalty, jain_index, pair_collision_penalty, step, update_aoi, EnvParams, MotionParams,
    NodeState, WorldState,
};
use auvsim::geom::Vec2;
use common::{aoi_replay, random_episode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn aoi_matches_replay(delivered in prop::collection::vec(any::<bool>(), 1..60), k_reset in 1u32..5, a_max in 1u32..60) {
        let expected = aoi_replay(&delivered, k_reset, a_max);
        let mut node = NodeState::new(Vec2::new(0.0, 0.0), 0.0);
        for (t, &d) in delivered.iter().enumerate() {
            node = update_aoi(&node, d, k_reset, a_max);
            prop_assert_eq!((node.aoi, node.service_counter), expected[t + 1]);
        }
    }

    #[test]
    fn jain_is_bounded(counts in prop::collection::vec(0u32..50, 1..12)) {
        let j = jain_index(&counts);
        let k = counts.len() as f64;
        prop_assert!(j >= 1.0 / k - 1e-12 && j <= 1.0 + 1e-12);
    }

    #[test]
    fn jain_is_scale_invariant(counts in prop::collection::vec(1u32..20, 1..10), s in 2u32..5) {
        let scaled: Vec<u32> = counts.iter().map(|c| c * s).collect();
        prop_assert!((jain_index(&counts) - jain_index(&scaled)).abs() < 1e-12);
    }

    #[test]
    fn collision_penalty_non_positive_and_monotone(d in 0.0..300.0f64, closer in 0.0..50.0f64) {
        let m = MotionParams::default();
        let far = pair_collision_penalty(d + closer, &m, 5.0);
        let near = pair_collision_penalty(d, &m, 5.0);
        prop_assert!(near <= far + 1e-15);
        prop_assert!(near <= 0.0);
    }
}

#[test]
fn jain_extremes() {
    assert_eq!(jain_index(&[3, 3, 3, 3]), 1.0);
    assert!((jain_index(&[5, 0, 0, 0]) - 0.25).abs() < 1e-12);
    assert_eq!(jain_index(&[0, 0, 0]), 1.0);
}

#[test]
fn docked_pairs_are_exempt() {
    let m = MotionParams::default();
    let pos = [Vec2::new(1800.0, 1800.0), Vec2::new(1810.0, 1800.0)];
    assert_eq!(collision_penalty(&pos, &[true, true], &m, 5.0), 0.0);
    assert!(collision_penalty(&pos, &[true, false], &m, 5.0) < 0.0);
}

#[test]
fn random_episodes_respect_causality_and_bookkeeping() {
    for n_auvs in [1, 2] {
        let params = EnvParams::default().with_fleet(n_auvs, 5);
        for seed in 0..40 {
            for (prev, o) in random_episode(&params, seed) {
                assert!((o.reward - o.reward_terms.sum()).abs() < 1e-9);
                for (j, node) in o.next.nodes.iter().enumerate() {
                    assert!(node.energy_j >= 0.0, "node {j} energy {}", node.energy_j);
                    assert!(node.aoi >= 1 && node.aoi <= params.a_max());
                }
                for (i, ev) in o.events.iter().enumerate() {
                    let a = &o.next.auvs[i];
                    assert!(params.motion.arena.contains(a.pos));
                    assert!(a.heading > -std::f64::consts::PI && a.heading <= std::f64::consts::PI);
                    assert!(a.speed >= 0.0 && a.speed <= params.motion.v_max);
                    if ev.delivered {
                        let auv_pos = o.next.auvs[i].pos;
                        let node = &prev.nodes[ev.data_node];
                        let need = uplink_energy_at(
                            auv_pos.distance(node.pos).max(1.0),
                            params.motion.dt,
                            &params.channel,
                        )
                        .unwrap();
                        assert!((ev.required_j - need).abs() <= 1e-9 * need.max(1.0));
                    }
                }
                assert!(o.next.t == prev.t + 1);
            }
        }
    }
}

#[test]
fn stepping_a_finished_episode_is_refused() {
    let params = EnvParams::default().with_fleet(1, 3);
    let trace = random_episode(&params, 3);
    let last = &trace.last().unwrap().1.next;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let actions = common::random_controls(last, &params, &mut rng);
    assert!(step(last, &actions, &params).is_err());
}

#[test]
fn out_of_range_node_is_refused() {
    let params = EnvParams::default().with_fleet(1, 3);
    let s = WorldState::initial(&params, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut actions = common::random_controls(&s, &params, &mut rng);
    actions[0].data_node = 3;
    assert!(step(&s, &actions, &params).is_err());
    actions[0].data_node = 0;
    actions[0].dtheta = params.motion.dtheta_max * 1.5;
    assert!(step(&s, &actions, &params).is_err());
}
