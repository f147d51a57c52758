//! Ackermann-steering state propagation and the motion primitive set.
//!
//! States advance by one forward-Euler step of length `T_s`:
//!
//! ```text
//! x'     = x + T_s * v * cos(theta)
//! y'     = y + T_s * v * sin(theta)
//! theta' = theta + T_s * (v / L) * tan(phi)
//! ```
//!
//! evaluated at the pre-step state.

mod reeds_shepp;

pub use reeds_shepp::{reeds_shepp, reeds_shepp_length, sample_rs_path, ReedsSheppPath, RsSegment, Steer};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Footprint, GeometryError, OrientedRect, Pose};

/// Slack allowed when checking controls against their bounds.
const BOUND_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum KinematicsError {
    #[error("speed {v} outside [{min}, {max}]")]
    SpeedOutOfBounds { v: f64, min: f64, max: f64 },
    #[error("steering angle {phi} exceeds limit {limit}")]
    SteeringOutOfBounds { phi: f64, limit: f64 },
    #[error("invalid agent parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Geometric and kinematic description of a (homogeneous) fleet member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentParams {
    pub footprint: Footprint,
    pub wheelbase: f64,
    /// Maximum forward speed, m/s (> 0).
    pub v_forward_max: f64,
    /// Maximum reverse speed, m/s (< 0).
    pub v_backward_max: f64,
    /// Steering limit in radians, in (0, pi/2).
    pub phi_max: f64,
    /// Sample time in seconds.
    pub ts: f64,
}

impl AgentParams {
    pub fn new(
        footprint: Footprint,
        wheelbase: f64,
        v_forward_max: f64,
        v_backward_max: f64,
        phi_max: f64,
        ts: f64,
    ) -> Result<Self, KinematicsError> {
        let p = Self {
            footprint,
            wheelbase,
            v_forward_max,
            v_backward_max,
            phi_max,
            ts,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from a minimum turning radius instead of a steering
    /// limit: `phi_max = atan(L / r_min)`.
    pub fn with_turning_radius(
        footprint: Footprint,
        wheelbase: f64,
        v_max: f64,
        r_min: f64,
        ts: f64,
    ) -> Result<Self, KinematicsError> {
        if !(r_min > 0.0) {
            return Err(KinematicsError::InvalidParams(format!(
                "turning radius must be positive, got {r_min}"
            )));
        }
        Self::new(footprint, wheelbase, v_max, -v_max, (wheelbase / r_min).atan(), ts)
    }

    pub fn validate(&self) -> Result<(), KinematicsError> {
        let bad = |msg: String| Err(KinematicsError::InvalidParams(msg));
        Footprint::new(self.footprint.front, self.footprint.rear, self.footprint.width)?;
        if !(self.v_backward_max < 0.0 && self.v_forward_max > 0.0) {
            return bad(format!(
                "need v_backward_max < 0 < v_forward_max, got {} / {}",
                self.v_backward_max, self.v_forward_max
            ));
        }
        if !(self.phi_max > 0.0 && self.phi_max < std::f64::consts::FRAC_PI_2) {
            return bad(format!("phi_max must be in (0, pi/2), got {}", self.phi_max));
        }
        if !(self.ts > 0.0) {
            return bad(format!("sample time must be positive, got {}", self.ts));
        }
        if !(self.wheelbase > 0.0) {
            return bad(format!("wheelbase must be positive, got {}", self.wheelbase));
        }
        Ok(())
    }

    /// Minimum turning radius `L / tan(phi_max)`.
    pub fn r_min(&self) -> f64 {
        self.wheelbase / self.phi_max.tan()
    }

    pub fn body(&self, pose: Pose) -> OrientedRect {
        self.footprint.at(pose)
    }

    /// Nominal distance covered by one full-speed forward step.
    pub fn forward_step(&self) -> f64 {
        self.v_forward_max * self.ts
    }

    pub fn backward_step(&self) -> f64 {
        -self.v_backward_max * self.ts
    }
}

impl Default for AgentParams {
    /// 3 m x 2 m body (2 m ahead of and 1 m behind the rear axle), 2 m/s
    /// both ways, 3 m minimum turning radius, 0.5 s sample time.
    fn default() -> Self {
        Self::with_turning_radius(Footprint { front: 2.0, rear: 1.0, width: 2.0 }, 2.0, 2.0, 3.0, 0.5)
            .expect("default parameters are valid")
    }
}

/// The seven steering actions expanded by the planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    ForwardLeft,
    ForwardStraight,
    ForwardRight,
    BackwardLeft,
    BackwardStraight,
    BackwardRight,
    Wait,
}

impl Action {
    pub const ALL: [Action; 7] = [
        Action::ForwardLeft,
        Action::ForwardStraight,
        Action::ForwardRight,
        Action::BackwardLeft,
        Action::BackwardStraight,
        Action::BackwardRight,
        Action::Wait,
    ];

    pub fn is_turning(self) -> bool {
        matches!(
            self,
            Action::ForwardLeft | Action::ForwardRight | Action::BackwardLeft | Action::BackwardRight
        )
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Action::ForwardLeft => "FL",
            Action::ForwardStraight => "FS",
            Action::ForwardRight => "FR",
            Action::BackwardLeft => "BL",
            Action::BackwardStraight => "BS",
            Action::BackwardRight => "BR",
            Action::Wait => "WAIT",
        }
    }
}

/// A constant (speed, steering) command held for one sample period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Control {
    pub v: f64,
    pub phi: f64,
}

impl Control {
    pub const WAIT: Control = Control { v: 0.0, phi: 0.0 };

    pub fn is_turning(&self) -> bool {
        self.v != 0.0 && self.phi != 0.0
    }

    pub fn check(&self, params: &AgentParams) -> Result<(), KinematicsError> {
        if !(self.v >= params.v_backward_max - BOUND_EPS && self.v <= params.v_forward_max + BOUND_EPS) {
            return Err(KinematicsError::SpeedOutOfBounds {
                v: self.v,
                min: params.v_backward_max,
                max: params.v_forward_max,
            });
        }
        if !(self.phi.abs() <= params.phi_max + BOUND_EPS) {
            return Err(KinematicsError::SteeringOutOfBounds {
                phi: self.phi,
                limit: params.phi_max,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionPrimitive {
    pub action: Action,
    pub v: f64,
    pub phi: f64,
}

impl MotionPrimitive {
    /// Full-speed primitive for `action`; turning actions use the steering limit.
    pub fn new(action: Action, params: &AgentParams) -> Self {
        let (v, phi) = match action {
            Action::ForwardLeft => (params.v_forward_max, params.phi_max),
            Action::ForwardStraight => (params.v_forward_max, 0.0),
            Action::ForwardRight => (params.v_forward_max, -params.phi_max),
            Action::BackwardLeft => (params.v_backward_max, params.phi_max),
            Action::BackwardStraight => (params.v_backward_max, 0.0),
            Action::BackwardRight => (params.v_backward_max, -params.phi_max),
            Action::Wait => (0.0, 0.0),
        };
        Self { action, v, phi }
    }

    pub fn control(&self) -> Control {
        Control { v: self.v, phi: self.phi }
    }
}

/// The seven primitives in [`Action::ALL`] order.
pub fn primitives(params: &AgentParams) -> [MotionPrimitive; 7] {
    Action::ALL.map(|a| MotionPrimitive::new(a, params))
}

/// One Euler step without bound checks.
pub(crate) fn integrate(s: &Pose, c: Control, params: &AgentParams) -> Pose {
    integrate_rotated(s, s.theta.sin_cos(), c, params)
}

/// [`integrate`] with the sine and cosine of `s.theta` already known.
pub(crate) fn integrate_rotated(s: &Pose, (sin, cos): (f64, f64), c: Control, params: &AgentParams) -> Pose {
    let d = params.ts * c.v;
    Pose::new(
        s.x + d * cos,
        s.y + d * sin,
        s.theta + d / params.wheelbase * c.phi.tan(),
    )
}

/// Advances `s` by one sample period under control `c`.
pub fn step(s: &Pose, c: Control, params: &AgentParams) -> Result<Pose, KinematicsError> {
    c.check(params)?;
    Ok(integrate(s, c, params))
}
