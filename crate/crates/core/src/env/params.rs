use serde::{Deserialize, Serialize};

use crate::acoustics::ChannelParams;
use crate::error::{Error, Result};
use crate::geom::{Rect, Vec2};

/// Vehicle kinematics, propulsion and safety geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotionParams {
    /// Speed ceiling, m/s.
    pub v_max: f64,
    /// Largest heading change per slot, rad.
    pub dtheta_max: f64,
    /// Largest speed change per slot, m/s.
    pub dv_max: f64,
    /// Slot duration, s.
    pub dt: f64,
    /// Seawater density, kg/m³.
    pub rho: f64,
    pub c_d: f64,
    /// Reference cross-section, m².
    pub area: f64,
    pub eta_prop: f64,
    /// Hotel load, W.
    pub hotel_w: f64,
    /// Episode horizon in slots.
    pub t_max: u32,
    /// Inter-AUV safety distance, m.
    pub d_th: f64,
    /// Width of the collision penalty inside the unsafe region, m.
    pub sigma_c: f64,
    pub dock_center: Vec2,
    pub dock_radius: f64,
    pub arena: Rect,
}

impl Default for MotionParams {
    fn default() -> Self {
        Self {
            v_max: 4.0,
            dtheta_max: 25f64.to_radians(),
            dv_max: 0.4,
            dt: 25.0,
            rho: 1000.0,
            c_d: 0.006,
            area: 3.0,
            eta_prop: 0.7,
            hotel_w: 40.0,
            t_max: 55,
            d_th: 100.0,
            sigma_c: 25.0,
            dock_center: Vec2::new(1800.0, 1800.0),
            dock_radius: 150.0,
            arena: Rect::new(0.0, 0.0, 2000.0, 2000.0),
        }
    }
}

impl MotionParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("v_max", self.v_max > 0.0),
            ("dtheta_max", self.dtheta_max > 0.0 && self.dtheta_max <= std::f64::consts::PI),
            ("dv_max", self.dv_max > 0.0),
            ("dt", self.dt > 0.0),
            ("rho", self.rho > 0.0),
            ("c_d", self.c_d >= 0.0),
            ("area", self.area >= 0.0),
            ("eta_prop", self.eta_prop > 0.0 && self.eta_prop <= 1.0),
            ("hotel_w", self.hotel_w >= 0.0),
            ("t_max", self.t_max >= 1),
            ("d_th", self.d_th > 0.0),
            ("sigma_c", self.sigma_c > 0.0),
            ("dock_radius", self.dock_radius > 0.0),
            ("arena", self.arena.width() > 0.0 && self.arena.height() > 0.0),
            ("dock_center", self.arena.contains(self.dock_center)),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::Config(format!("motion parameter `{name}` is invalid")));
            }
        }
        Ok(())
    }

    /// Drag coefficient of the cubic propulsion law, W/(m/s)³.
    pub fn drag_factor(&self) -> f64 {
        self.rho * self.c_d * self.area / (2.0 * self.eta_prop)
    }
}

/// Reward coefficients plus the AoI bookkeeping constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RewardWeights {
    /// Goal progress per metre of distance closed to the dock.
    pub alpha_g: f64,
    pub alpha_a: f64,
    pub alpha_f: f64,
    pub alpha_c: f64,
    pub alpha_m: f64,
    /// Penalty per AUV whose motion was clipped at the arena edge.
    pub rho_bd: f64,
    /// Penalty per undocked AUV that moved less than `stall_eps`.
    pub rho_st: f64,
    pub r_dock_first: f64,
    pub r_dock_all: f64,
    /// Stall threshold, m.
    pub stall_eps: f64,
    /// Stabiliser of the energy-margin ratio, J.
    pub margin_eps: f64,
    /// Fairness weight of the evaluation objective.
    pub lambda_f: f64,
    pub k_reset: u32,
    /// AoI cap; `None` uses the horizon.
    pub a_max: Option<u32>,
}

impl Default for RewardWeights {
    fn default() -> Self {
        Self {
            alpha_g: 0.05,
            alpha_a: 0.1,
            alpha_f: 1.0,
            alpha_c: 5.0,
            alpha_m: 0.5,
            rho_bd: 10.0,
            rho_st: 0.5,
            r_dock_first: 20.0,
            r_dock_all: 50.0,
            stall_eps: 1.0,
            margin_eps: 1e-3,
            lambda_f: 1.0,
            k_reset: 3,
            a_max: None,
        }
    }
}

impl RewardWeights {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.alpha_g,
            self.alpha_a,
            self.alpha_f,
            self.alpha_c,
            self.alpha_m,
            self.rho_bd,
            self.rho_st,
            self.r_dock_first,
            self.r_dock_all,
            self.stall_eps,
            self.margin_eps,
            self.lambda_f,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Config("reward weights must be finite".into()));
        }
        if self.rho_bd < 0.0 || self.rho_st < 0.0 {
            return Err(Error::Config("boundary and stall penalties must be non-negative".into()));
        }
        if self.margin_eps <= 0.0 {
            return Err(Error::Config("margin_eps must be positive".into()));
        }
        if self.k_reset < 1 {
            return Err(Error::Config("k_reset must be at least 1".into()));
        }
        if self.a_max == Some(0) {
            return Err(Error::Config("a_max must be at least 1".into()));
        }
        Ok(())
    }

    pub fn a_max(&self, motion: &MotionParams) -> u32 {
        self.a_max.unwrap_or(motion.t_max)
    }
}

/// Fleet size, network size and initial conditions of an episode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioParams {
    pub n_auvs: usize,
    pub n_nodes: usize,
    /// Initial node energy, J.
    pub node_energy_j: f64,
    /// Initial AUV battery, J.
    pub battery_j: f64,
    /// Centre of the launch formation.
    pub launch_center: Vec2,
    /// Spacing between neighbouring AUVs in the launch line, m.
    pub launch_spacing: f64,
    pub initial_speed: f64,
    /// Initial heading, rad; `None` points every AUV at the dock.
    pub initial_heading: Option<f64>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            n_auvs: 1,
            n_nodes: 7,
            node_energy_j: 5.0,
            battery_j: 1e6,
            launch_center: Vec2::new(300.0, 300.0),
            launch_spacing: 400.0,
            initial_speed: 0.0,
            initial_heading: None,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self, motion: &MotionParams) -> Result<()> {
        if self.n_auvs < 1 || self.n_nodes < 1 {
            return Err(Error::Config("need at least one AUV and one node".into()));
        }
        if !(self.node_energy_j >= 0.0) || !(self.battery_j >= 0.0) {
            return Err(Error::Config("initial energies must be non-negative".into()));
        }
        if !(self.initial_speed >= 0.0 && self.initial_speed <= motion.v_max) {
            return Err(Error::Config("initial_speed must lie in [0, v_max]".into()));
        }
        if !(self.launch_spacing >= 0.0) {
            return Err(Error::Config("launch_spacing must be non-negative".into()));
        }
        for p in self.launch_positions(motion) {
            if !motion.arena.contains(p) {
                return Err(Error::Config(format!(
                    "launch position ({}, {}) lies outside the arena",
                    p.x, p.y
                )));
            }
        }
        Ok(())
    }

    /// AUVs start on a line through `launch_center`, perpendicular to the
    /// direction of the dock.
    pub fn launch_positions(&self, motion: &MotionParams) -> Vec<Vec2> {
        let to_dock = motion.dock_center - self.launch_center;
        let along = if to_dock.norm() > 0.0 { to_dock.scale(1.0 / to_dock.norm()) } else { Vec2::new(1.0, 0.0) };
        let across = Vec2::new(-along.y, along.x);
        let mid = (self.n_auvs as f64 - 1.0) / 2.0;
        (0..self.n_auvs)
            .map(|i| self.launch_center + across.scale((i as f64 - mid) * self.launch_spacing))
            .collect()
    }
}

/// Everything the transition function needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvParams {
    pub channel: ChannelParams,
    pub motion: MotionParams,
    pub reward: RewardWeights,
    pub scenario: ScenarioParams,
}

impl EnvParams {
    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.motion.validate()?;
        self.reward.validate()?;
        self.scenario.validate(&self.motion)
    }

    pub fn a_max(&self) -> u32 {
        self.reward.a_max(&self.motion)
    }

    pub fn with_fleet(mut self, n_auvs: usize, n_nodes: usize) -> Self {
        self.scenario.n_auvs = n_auvs;
        self.scenario.n_nodes = n_nodes;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        EnvParams::default().validate().unwrap();
        EnvParams::default().with_fleet(2, 10).validate().unwrap();
    }

    #[test]
    fn drag_factor_matches_table_values() {
        let m = MotionParams::default();
        assert!((m.drag_factor() - 12.857142857142858).abs() < 1e-12);
    }

    #[test]
    fn launch_line_is_perpendicular_to_dock_bearing() {
        let p = EnvParams::default().with_fleet(2, 4);
        let pos = p.scenario.launch_positions(&p.motion);
        let d0 = pos[0].distance(p.motion.dock_center);
        let d1 = pos[1].distance(p.motion.dock_center);
        assert!((d0 - d1).abs() < 1e-9);
        assert!((pos[0].distance(pos[1]) - 400.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_values() {
        let mut p = EnvParams::default();
        p.motion.dock_radius = 0.0;
        assert!(p.validate().is_err());
        let mut p = EnvParams::default();
        p.reward.k_reset = 0;
        assert!(p.validate().is_err());
        let mut p = EnvParams::default();
        p.scenario.launch_center = Vec2::new(-5.0, 10.0);
        assert!(p.validate().is_err());
    }
}
