//! Solution checker. It shares only plain data types with the solver: the
//! footprint corners, overlap tests and the kinematic back-solve are all
//! written out again here so the checker can serve as an oracle.

use std::fmt;

use thiserror::Error;

use crate::geometry::Pose;
use crate::kinematics::AgentParams;
use crate::problem::{metrics, Metrics, ProblemInstance, Solution};

/// Tolerance on reproduced poses when back-solving a transition.
pub const KINEMATIC_TOL: f64 = 1e-6;
/// Slack on the speed and steering limits.
pub const BOUND_TOL: f64 = 1e-9;
pub const ENDPOINT_POS_TOL: f64 = 1e-3;
pub const ENDPOINT_HEADING_TOL: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Condition (a): first pose is not the start.
    Start { agent: usize },
    /// Condition (a): last pose is not the goal.
    Goal { agent: usize },
    /// Condition (b): the body parked at the goal touches an obstacle or
    /// leaves the map.
    Parking { agent: usize },
    /// Condition (c): body outside the map or touching an obstacle.
    Collision { agent: usize, t: usize },
    /// Condition (d): no admissible control reproduces the step `t -> t + 1`.
    Kinematics { agent: usize, t: usize, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Start { agent } => write!(f, "agent {agent}: first pose is not the start"),
            Violation::Goal { agent } => write!(f, "agent {agent}: last pose is not the goal"),
            Violation::Parking { agent } => write!(f, "agent {agent}: goal body is not free"),
            Violation::Collision { agent, t } => write!(f, "agent {agent}: body collides at t={t}"),
            Violation::Kinematics { agent, t, reason } => write!(f, "agent {agent}: step {t}->{}: {reason}", t + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConflictRecord {
    pub i: usize,
    pub j: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Earliest conflict of every colliding pair.
    pub conflicts: Vec<ConflictRecord>,
    pub metrics: Metrics,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty() && self.conflicts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidateError {
    #[error("solution has {found} agents, instance has {expected}")]
    AgentCount { expected: usize, found: usize },
    #[error("agent {0} has an empty path")]
    EmptyPath(usize),
}

type V2 = (f64, f64);

fn wrap(a: f64) -> f64 {
    let r = (a + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
    if r == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        r
    }
}

fn corners(p: &Pose, params: &AgentParams) -> [V2; 4] {
    let fp = &params.footprint;
    let (s, c) = p.theta.sin_cos();
    let w = fp.width / 2.0;
    [(fp.front, -w), (fp.front, w), (-fp.rear, w), (-fp.rear, -w)].map(|(lx, ly)| (p.x + c * lx - s * ly, p.y + s * lx + c * ly))
}

fn project(poly: &[V2; 4], axis: V2) -> (f64, f64) {
    poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, y)| {
        let d = x * axis.0 + y * axis.1;
        (lo.min(d), hi.max(d))
    })
}

/// Closed convex quadrilateral overlap by separating axes (edge normals).
fn quads_touch(a: &[V2; 4], b: &[V2; 4]) -> bool {
    for poly in [a, b] {
        for k in 0..2 {
            let (p, q) = (poly[k], poly[k + 1]);
            let axis = (q.1 - p.1, p.0 - q.0);
            let (a0, a1) = project(a, axis);
            let (b0, b1) = project(b, axis);
            if a1 < b0 || b1 < a0 {
                return false;
            }
        }
    }
    true
}

fn quad_circle_touch(q: &[V2; 4], cx: f64, cy: f64, r: f64) -> bool {
    // Inside test via consistent edge orientation, else edge distance.
    let mut inside = true;
    let mut best = f64::INFINITY;
    for k in 0..4 {
        let (p0, p1) = (q[k], q[(k + 1) % 4]);
        let (ex, ey) = (p1.0 - p0.0, p1.1 - p0.1);
        let (wx, wy) = (cx - p0.0, cy - p0.1);
        if ex * wy - ey * wx < 0.0 {
            inside = false;
        }
        let s = ((wx * ex + wy * ey) / (ex * ex + ey * ey)).clamp(0.0, 1.0);
        best = best.min((wx - s * ex).hypot(wy - s * ey));
    }
    inside || best <= r
}

fn body_free(p: &Pose, instance: &ProblemInstance) -> bool {
    let q = corners(p, &instance.params);
    let b = &instance.bounds;
    q.iter().all(|&(x, y)| x >= 0.0 && x <= b.width && y >= 0.0 && y <= b.height)
        && !instance.obstacles.iter().any(|o| quad_circle_touch(&q, o.cx, o.cy, o.radius))
}

/// Back-solves the control for one transition, or explains why none exists.
pub fn back_solve(a: &Pose, b: &Pose, params: &AgentParams) -> Result<(f64, f64), String> {
    let (s, c) = a.theta.sin_cos();
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let along = c * dx + s * dy;
    let lateral = -s * dx + c * dy;
    let turn = wrap(b.theta - a.theta);
    if lateral.abs() > KINEMATIC_TOL {
        return Err(format!("lateral displacement {lateral:.3e}"));
    }
    if along.abs() <= KINEMATIC_TOL {
        if turn.abs() > KINEMATIC_TOL {
            return Err(format!("rotation {turn:.3e} without travel"));
        }
        return Ok((0.0, 0.0));
    }
    let v = along / params.ts;
    let phi = (turn * params.wheelbase / along).atan();
    if v > params.v_forward_max + BOUND_TOL || v < params.v_backward_max - BOUND_TOL {
        return Err(format!("speed {v:.6} outside [{}, {}]", params.v_backward_max, params.v_forward_max));
    }
    if phi.abs() > params.phi_max + BOUND_TOL {
        return Err(format!("steering {phi:.6} beyond {}", params.phi_max));
    }
    // Replay the recovered control and compare.
    let d = v * params.ts;
    let (x, y, th) = (a.x + d * c, a.y + d * s, a.theta + d / params.wheelbase * phi.tan());
    let err = (x - b.x).abs().max((y - b.y).abs()).max(wrap(th - b.theta).abs());
    if err > KINEMATIC_TOL {
        return Err(format!("replay error {err:.3e}"));
    }
    Ok((v, phi))
}

fn close(a: &Pose, b: &Pose) -> bool {
    (a.x - b.x).hypot(a.y - b.y) <= ENDPOINT_POS_TOL && wrap(a.theta - b.theta).abs() <= ENDPOINT_HEADING_TOL
}

/// Checks conditions (a) to (d) for every agent and scans all pairs for body
/// conflicts, holding finished agents at their last pose.
pub fn validate(instance: &ProblemInstance, solution: &Solution) -> Result<ValidationReport, ValidateError> {
    let paths = &solution.paths;
    if paths.len() != instance.agents.len() {
        return Err(ValidateError::AgentCount { expected: instance.agents.len(), found: paths.len() });
    }
    if let Some(i) = paths.iter().position(Vec::is_empty) {
        return Err(ValidateError::EmptyPath(i));
    }
    let params = &instance.params;
    let mut violations = Vec::new();
    for (agent, (path, task)) in paths.iter().zip(&instance.agents).enumerate() {
        if !close(&path[0], &task.start) {
            violations.push(Violation::Start { agent });
        }
        let last = path[path.len() - 1];
        if !close(&last, &task.goal) {
            violations.push(Violation::Goal { agent });
        }
        if !body_free(&last, instance) {
            violations.push(Violation::Parking { agent });
        }
        for (t, p) in path.iter().enumerate() {
            if !body_free(p, instance) {
                violations.push(Violation::Collision { agent, t });
            }
        }
        for (t, w) in path.windows(2).enumerate() {
            if let Err(reason) = back_solve(&w[0], &w[1], params) {
                violations.push(Violation::Kinematics { agent, t, reason });
            }
        }
    }

    let horizon = paths.iter().map(Vec::len).max().unwrap_or(1) - 1;
    let at = |i: usize, t: usize| corners(&paths[i][t.min(paths[i].len() - 1)], params);
    let mut conflicts = Vec::new();
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            if let Some(t) = (0..=horizon).find(|&t| quads_touch(&at(i, t), &at(j, t))) {
                conflicts.push(ConflictRecord { i, j, t });
            }
        }
    }
    Ok(ValidationReport { violations, conflicts, metrics: metrics(paths) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MapBounds;
    use crate::problem::{AgentTask, SolveStats};

    fn straight(y: f64, n: usize) -> Vec<Pose> {
        (0..=n).map(|i| Pose::new(5.0 + i as f64, y, 0.0)).collect()
    }

    fn setup(paths: Vec<Vec<Pose>>) -> (ProblemInstance, Solution) {
        let agents = paths
            .iter()
            .map(|p| AgentTask { start: p[0], goal: *p.last().unwrap() })
            .collect();
        let inst = ProblemInstance {
            bounds: MapBounds { width: 50.0, height: 50.0 },
            obstacles: Vec::new(),
            agents,
            params: AgentParams::default(),
        };
        (inst, Solution { paths, stats: SolveStats::default() })
    }

    #[test]
    fn clean_solution_passes() {
        let (inst, sol) = setup(vec![straight(10.0, 8), straight(20.0, 5)]);
        let r = validate(&inst, &sol).unwrap();
        assert!(r.is_ok(), "{r:?}");
        assert_eq!(r.metrics.sum_of_costs, 13.0);
    }

    #[test]
    fn teleport_breaks_kinematics() {
        let (inst, mut sol) = setup(vec![straight(10.0, 8)]);
        sol.paths[0][4].x += 10.0;
        let r = validate(&inst, &sol).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Kinematics { agent: 0, t: 3, .. })));
    }

    #[test]
    fn shared_pose_is_a_conflict() {
        let a = straight(10.0, 6);
        let mut b: Vec<Pose> = straight(30.0, 6);
        b[3] = a[3];
        let (inst, sol) = setup(vec![a, b]);
        let r = validate(&inst, &sol).unwrap();
        assert_eq!(r.conflicts, vec![ConflictRecord { i: 0, j: 1, t: 3 }]);
    }

    #[test]
    fn lateral_hop_and_spin_rejected() {
        let p = AgentParams::default();
        let a = Pose::new(0.0, 0.0, 0.0);
        assert!(back_solve(&a, &Pose::new(0.0, 0.1, 0.0), &p).is_err());
        assert!(back_solve(&a, &Pose::new(0.0, 0.0, 0.1), &p).is_err());
        assert_eq!(back_solve(&a, &a, &p), Ok((0.0, 0.0)));
        let (v, phi) = back_solve(&a, &Pose::new(-1.0, 0.0, 0.0), &p).unwrap();
        assert!((v + 2.0).abs() < 1e-12 && phi == 0.0);
    }

    #[test]
    fn count_mismatch_is_malformed() {
        let (inst, mut sol) = setup(vec![straight(10.0, 3)]);
        sol.paths.push(straight(20.0, 3));
        assert_eq!(validate(&inst, &sol), Err(ValidateError::AgentCount { expected: 1, found: 2 }));
    }
}
