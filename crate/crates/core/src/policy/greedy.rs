use super::Policy;
use crate::codec::{ActionIndices, CodecSpec};
use crate::env::{EnvParams, WorldState};
use crate::error::{Error, Result};
use crate::geom::{wrap_angle, Vec2};

/// Time-aware docking baseline.
///
/// Each AUV turns towards the dock as fast as allowed and paces its speed so
/// that it reaches the dock centre at the end of the horizon. Energy goes to
/// the node nearest to where the AUV will be after this slot's move; data is
/// requested round-robin, with the per-AUV cursor offset by the AUV index.
#[derive(Clone, Debug, Default)]
pub struct GreedyPolicy {
    cursors: Vec<usize>,
}

impl GreedyPolicy {
    pub fn new() -> Self {
        Self::default()
    }

    /// Heading and speed increments the rule asks for, before snapping.
    pub fn desired_increments(
        auv_pos: Vec2,
        heading: f64,
        speed: f64,
        t: u32,
        params: &EnvParams,
    ) -> (f64, f64) {
        let m = &params.motion;
        let bearing = (m.dock_center - auv_pos).angle();
        let dtheta = wrap_angle(bearing - heading).clamp(-m.dtheta_max, m.dtheta_max);

        // The speed chosen now applies from the next slot on.
        let after_move = auv_pos + Vec2::from_polar(speed * m.dt, heading);
        let remaining_d = after_move.distance(m.dock_center);
        let remaining_slots = m.t_max.saturating_sub(t + 1);
        let target = if remaining_slots == 0 {
            0.0
        } else {
            (remaining_d / (f64::from(remaining_slots) * m.dt)).clamp(0.0, m.v_max)
        };
        let dv = (target - speed).clamp(-m.dv_max, m.dv_max);
        (dtheta, dv)
    }
}

impl Policy for GreedyPolicy {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn reset(&mut self, _: u64) {
        self.cursors.clear();
    }

    fn act(
        &mut self,
        state: &WorldState,
        params: &EnvParams,
        codec: &CodecSpec,
    ) -> Result<Vec<ActionIndices>> {
        let k = state.n_nodes();
        if k == 0 {
            return Err(Error::Usage("greedy policy needs at least one node".into()));
        }
        if self.cursors.len() != state.n_auvs() {
            self.cursors = (0..state.n_auvs()).map(|i| i % k).collect();
        }
        let m = &params.motion;
        let actions = state
            .auvs
            .iter()
            .zip(self.cursors.iter_mut())
            .map(|(auv, cursor)| {
                let (dtheta, dv) =
                    Self::desired_increments(auv.pos, auv.heading, auv.speed, state.t, params);
                let after_move = auv.pos + Vec2::from_polar(auv.speed * m.dt, auv.heading);
                let wet_node = state
                    .nodes
                    .iter()
                    .enumerate()
                    .min_by(|a, b| {
                        after_move.distance(a.1.pos).total_cmp(&after_move.distance(b.1.pos))
                    })
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                let data_node = *cursor;
                *cursor = (*cursor + 1) % k;
                ActionIndices {
                    theta_idx: codec.heading_index_for(dtheta, m),
                    v_idx: codec.speed_index_for(dv, m),
                    wet_node,
                    data_node,
                }
            })
            .collect();
        Ok(actions)
    }
}
