#![allow(dead_code)]

use auvsim::env::{step, ControlAction, EnvParams, StepOutcome, WorldState};
use auvsim::ppo::{ppo_loss, NetworkParams, NetworkShape, PpoConfig, TrainSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent replay of the service-counter and AoI recursions, written
/// directly from the two case equations without sharing any library code.
/// Returns the (aoi, counter) trajectory including the initial pair.
pub fn aoi_replay(delivered: &[bool], k_reset: u32, a_max: u32) -> Vec<(u32, u32)> {
    let mut a = 1u32;
    let mut c = 0u32;
    let mut out = vec![(a, c)];
    for &d in delivered {
        let c_next = if d { c + 1 } else { c };
        let (a_next, c_next) = if c_next == k_reset {
            (1, 0)
        } else {
            (std::cmp::min(a + 1, a_max), c_next)
        };
        a = a_next;
        c = c_next;
        out.push((a, c));
    }
    out
}

/// Uniformly random control for every AUV.
pub fn random_controls(state: &WorldState, params: &EnvParams, rng: &mut impl Rng) -> Vec<ControlAction> {
    let m = &params.motion;
    (0..state.n_auvs())
        .map(|_| ControlAction {
            dtheta: rng.gen_range(-m.dtheta_max..=m.dtheta_max),
            dv: rng.gen_range(-m.dv_max..=m.dv_max),
            wet_node: rng.gen_range(0..state.n_nodes()),
            data_node: rng.gen_range(0..state.n_nodes()),
        })
        .collect()
}

/// Plays one random episode and returns every outcome.
pub fn random_episode(params: &EnvParams, seed: u64) -> Vec<(WorldState, StepOutcome)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = WorldState::initial(params, seed);
    let mut out = Vec::new();
    loop {
        let actions = random_controls(&state, params, &mut rng);
        let o = step(&state, &actions, params).unwrap();
        let done = o.done;
        let prev = std::mem::replace(&mut state, o.next.clone());
        out.push((prev, o));
        if done {
            return out;
        }
    }
}

/// Miniature network and batch whose probability ratios sit well inside the
/// smooth pieces of the clipped objective.
pub fn gradient_check_fixture() -> (NetworkParams, Vec<TrainSample>, PpoConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let shape = NetworkShape { obs_dim: 4, hidden: vec![6, 5], head_sizes: vec![3, 2, 4] };
    let mut params = NetworkParams::init(shape, &mut rng, 1.0);
    for p in params.data.iter_mut() {
        *p += rng.gen_range(-0.1..0.1);
    }
    let config = PpoConfig { clip_eps: 0.2, entropy_coef: 0.05, value_coef: 0.5, ..PpoConfig::default() };
    // log-ratio offsets: inside the trust region, clipped above, clipped below
    let offsets = [0.05, -0.08, 0.5, -0.6, 0.1, 0.45, -0.4, 0.0];
    let batch = offsets
        .iter()
        .enumerate()
        .map(|(i, &off)| {
            let obs: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let heads = vec![i % 3, i % 2, (i * 3) % 4];
            let lp = auvsim::ppo::dist::log_prob(&params.forward(&obs).unwrap().logits, &params.shape.head_sizes, &heads);
            TrainSample {
                obs,
                heads,
                old_log_prob: lp - off,
                advantage: if i % 2 == 0 { 1.3 } else { -0.7 },
                ret: rng.gen_range(-2.0..2.0),
            }
        })
        .collect();
    (params, batch, config)
}

/// Worst relative error between the analytic gradient of the full loss and
/// central differences, over all parameters.
pub fn loss_gradient_error(params: &NetworkParams, batch: &[TrainSample], config: &PpoConfig) -> f64 {
    let (_, analytic) = ppo_loss(params, batch, config).unwrap();
    let h = 1e-6;
    let mut worst = 0.0f64;
    let mut p = params.clone();
    for i in 0..p.data.len() {
        let x = p.data[i];
        p.data[i] = x + h;
        let up = ppo_loss(&p, batch, config).unwrap().0.total;
        p.data[i] = x - h;
        let down = ppo_loss(&p, batch, config).unwrap().0.total;
        p.data[i] = x;
        let numeric = (up - down) / (2.0 * h);
        let err = (numeric - analytic[i]).abs() / numeric.abs().max(analytic[i].abs()).max(1e-3);
        worst = worst.max(err);
    }
    worst
}
