//! Per-slot physical and bookkeeping models used by the transition function.

use super::params::MotionParams;
use super::state::{AuvState, NodeState};
use crate::error::{Error, Result};
use crate::geom::{wrap_angle, Vec2};

const INCREMENT_TOL: f64 = 1e-9;

/// Advances one AUV by a slot.
///
/// The position moves with the heading and speed held at the start of the
/// slot; the increments take effect for the next slot. Returns the new state
/// and the distance travelled (no arena clipping here).
pub fn kinematic_step(
    auv: &AuvState,
    dtheta: f64,
    dv: f64,
    motion: &MotionParams,
) -> Result<(AuvState, f64)> {
    if dtheta.abs() > motion.dtheta_max + INCREMENT_TOL || dv.abs() > motion.dv_max + INCREMENT_TOL
    {
        return Err(Error::Usage(format!(
            "control increment out of bounds: dtheta={dtheta}, dv={dv}"
        )));
    }
    let displacement = Vec2::from_polar(auv.speed * motion.dt, auv.heading);
    let next = AuvState {
        pos: auv.pos + displacement,
        heading: wrap_angle(auv.heading + dtheta),
        speed: (auv.speed + dv).clamp(0.0, motion.v_max),
        ..auv.clone()
    };
    Ok((next, auv.speed * motion.dt))
}

/// Propulsion plus hotel energy for covering `traveled` metres at speed `v`.
///
/// At `v = 0` the vehicle only pays the hotel load for the slot.
pub fn propulsion_energy(v: f64, traveled: f64, motion: &MotionParams) -> f64 {
    if v > 0.0 {
        (motion.drag_factor() * v.powi(3) + motion.hotel_w) * traveled / v
    } else {
        motion.hotel_w * motion.dt
    }
}

/// Service counter and AoI update for one node over one slot.
pub fn update_aoi(node: &NodeState, delivered: bool, k_reset: u32, a_max: u32) -> NodeState {
    let mut next = node.clone();
    if delivered {
        next.service_counter += 1;
    }
    if next.service_counter == k_reset {
        next.aoi = 1;
        next.service_counter = 0;
        next.service_count += 1;
    } else {
        next.aoi = (node.aoi + 1).min(a_max);
    }
    next
}

/// Jain's fairness index of the service counts; 1 when nobody has been served.
pub fn jain_index(service_counts: &[u32]) -> f64 {
    let k = service_counts.len() as f64;
    let sum: f64 = service_counts.iter().map(|&o| f64::from(o)).sum();
    let sum_sq: f64 = service_counts.iter().map(|&o| f64::from(o).powi(2)).sum();
    if sum_sq == 0.0 {
        1.0
    } else {
        sum * sum / (k * sum_sq)
    }
}

/// Penalty contribution of a single pair at separation `d`.
pub fn pair_collision_penalty(d: f64, motion: &MotionParams, alpha_c: f64) -> f64 {
    let intrusion = (motion.d_th - d).max(0.0);
    -alpha_c * (1.0 - (-intrusion * intrusion / (2.0 * motion.sigma_c * motion.sigma_c)).exp())
}

/// Smooth inter-AUV proximity penalty; pairs where both AUVs are docked are exempt.
pub fn collision_penalty(
    positions: &[Vec2],
    docked: &[bool],
    motion: &MotionParams,
    alpha_c: f64,
) -> f64 {
    let mut total = 0.0;
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            if docked[i] && docked[j] {
                continue;
            }
            total += pair_collision_penalty(positions[i].distance(positions[j]), motion, alpha_c);
        }
    }
    total
}

/// Energy-margin shaping over the data nodes chosen by the active AUVs.
///
/// The sum runs over the supplied selections and is divided by the fleet
/// size `n_auvs`.
pub fn margin_shaping(
    node_energies: &[f64],
    required: &[f64],
    alpha_m: f64,
    eps: f64,
    n_auvs: usize,
) -> f64 {
    let sum: f64 = node_energies
        .iter()
        .zip(required)
        .map(|(&e, &req)| ((e - req) / (req + eps)).tanh())
        .sum();
    alpha_m / n_auvs as f64 * sum
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn auv(heading: f64, speed: f64) -> AuvState {
        AuvState {
            pos: Vec2::new(100.0, 100.0),
            heading,
            speed,
            battery_j: 1e6,
            energy_used_j: 0.0,
            docked: false,
        }
    }

    #[test]
    fn straight_line_motion_uses_pre_update_state() {
        let m = MotionParams::default();
        let (next, traveled) = kinematic_step(&auv(0.0, 2.0), 0.3, 0.4, &m).unwrap();
        assert!((next.pos.x - 150.0).abs() < 1e-12);
        assert!(next.pos.y.abs() - 100.0 < 1e-12);
        assert_eq!(traveled, 50.0);
        assert!((next.heading - 0.3).abs() < 1e-12);
        assert!((next.speed - 2.4).abs() < 1e-12);
    }

    #[test]
    fn stationary_and_axis_aligned_motion() {
        let m = MotionParams::default();
        let (next, traveled) = kinematic_step(&auv(1.0, 0.0), 0.0, 0.0, &m).unwrap();
        assert_eq!(next.pos, Vec2::new(100.0, 100.0));
        assert_eq!(traveled, 0.0);

        let (next, _) = kinematic_step(&auv(FRAC_PI_2, 4.0), 0.0, 0.0, &m).unwrap();
        assert!((next.pos.x - 100.0).abs() < 1e-9);
        assert!((next.pos.y - 200.0).abs() < 1e-9);
    }

    #[test]
    fn speed_is_clamped_and_increments_checked() {
        let m = MotionParams::default();
        let (next, _) = kinematic_step(&auv(0.0, 3.9), 0.0, 0.4, &m).unwrap();
        assert_eq!(next.speed, 4.0);
        let (next, _) = kinematic_step(&auv(0.0, 0.1), 0.0, -0.4, &m).unwrap();
        assert_eq!(next.speed, 0.0);
        assert!(kinematic_step(&auv(0.0, 1.0), 1.0, 0.0, &m).is_err());
        assert!(kinematic_step(&auv(0.0, 1.0), 0.0, 0.5, &m).is_err());
    }

    #[test]
    fn heading_wraps() {
        let m = MotionParams::default();
        let (next, _) = kinematic_step(&auv(3.1, 1.0), m.dtheta_max, 0.0, &m).unwrap();
        assert!(next.heading < 0.0 && next.heading > -std::f64::consts::PI);
    }

    #[test]
    fn propulsion_examples() {
        let m = MotionParams::default();
        assert!((propulsion_energy(4.0, 100.0, &m) - 21571.4).abs() < 0.5);
        assert_eq!(propulsion_energy(0.0, 0.0, &m), 1000.0);
        let e = propulsion_energy(2.5, 40.0, &m);
        assert!((propulsion_energy(2.5, 80.0, &m) - 2.0 * e).abs() < 1e-9);
    }

    fn node(aoi: u32, counter: u32) -> NodeState {
        NodeState { aoi, service_counter: counter, ..NodeState::new(Vec2::default(), 1.0) }
    }

    #[test]
    fn aoi_reset_and_cap() {
        let n = update_aoi(&node(7, 2), true, 3, 55);
        assert_eq!((n.aoi, n.service_counter, n.service_count), (1, 0, 1));
        let n = update_aoi(&node(55, 1), false, 3, 55);
        assert_eq!((n.aoi, n.service_counter), (55, 1));
        let n = update_aoi(&node(5, 0), true, 3, 55);
        assert_eq!((n.aoi, n.service_counter), (6, 1));
        // single delivery suffices when k_reset = 1
        let n = update_aoi(&node(9, 0), true, 1, 55);
        assert_eq!((n.aoi, n.service_counter, n.service_count), (1, 0, 1));
    }

    #[test]
    fn jain_examples() {
        assert_eq!(jain_index(&[3, 3, 3, 3]), 1.0);
        assert!((jain_index(&[1, 0, 0, 0, 0, 0, 0]) - 1.0 / 7.0).abs() < 1e-15);
        assert!((jain_index(&[2, 1, 1]) - 16.0 / 18.0).abs() < 1e-15);
        assert_eq!(jain_index(&[0, 0, 0]), 1.0);
    }

    #[test]
    fn collision_examples() {
        let m = MotionParams::default();
        let a = Vec2::new(500.0, 500.0);
        let at_threshold = [a, Vec2::new(600.0, 500.0)];
        assert_eq!(collision_penalty(&at_threshold, &[false, false], &m, 5.0), 0.0);
        let overlap = [a, a];
        let expected = -5.0 * (1.0 - (-8.0f64).exp());
        assert!((collision_penalty(&overlap, &[false, false], &m, 5.0) - expected).abs() < 1e-12);
        assert!((expected / 5.0 + 0.99966).abs() < 1e-5);
        assert_eq!(collision_penalty(&overlap, &[true, true], &m, 5.0), 0.0);
        assert!(collision_penalty(&overlap, &[true, false], &m, 5.0) < 0.0);
        assert_eq!(collision_penalty(&[a], &[false], &m, 5.0), 0.0);
    }

    #[test]
    fn margin_examples() {
        assert_eq!(margin_shaping(&[2.0, 3.0], &[2.0, 3.0], 0.5, 1e-3, 2), 0.0);
        let v = margin_shaping(&[2e3], &[1e3], 0.5, 1e-9, 1);
        assert!((v - 0.5 * 1f64.tanh()).abs() < 1e-9);
        let v = margin_shaping(&[0.0], &[1e3], 0.5, 1e-9, 2);
        assert!((v + 0.7615941559557649 * 0.5 / 2.0).abs() < 1e-9);
    }
}
