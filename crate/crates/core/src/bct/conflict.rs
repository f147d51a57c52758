use crate::geometry::{rects_overlap, OrientedRect, Pose};
use crate::kinematics::AgentParams;

/// Two agents' bodies overlapping at timestep `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyConflict {
    pub i: usize,
    pub j: usize,
    pub body_i: OrientedRect,
    pub body_j: OrientedRect,
    pub t: usize,
}

/// Pose of an agent at `t`, holding the last pose after arrival.
pub fn pose_at(path: &[Pose], t: usize) -> Pose {
    path[t.min(path.len() - 1)]
}

/// Earliest body conflict, ties broken by the lowest `(i, j)` pair. Paths
/// that end early are held at their final pose.
pub fn detect_first_conflict(paths: &[&[Pose]], params: &AgentParams) -> Option<BodyConflict> {
    let horizon = paths.iter().map(|p| p.len() - 1).max()?;
    let mut bodies = Vec::with_capacity(paths.len());
    for t in 0..=horizon {
        bodies.clear();
        bodies.extend(paths.iter().map(|p| params.body(pose_at(p, t))));
        for i in 0..bodies.len() {
            for j in i + 1..bodies.len() {
                if rects_overlap(&bodies[i], &bodies[j]) {
                    return Some(BodyConflict { i, j, body_i: bodies[i], body_j: bodies[j], t });
                }
            }
        }
    }
    None
}
