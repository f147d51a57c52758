//! Multi-agent problem instances, solutions and their length metrics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{rects_overlap, CircleObstacle, MapBounds, Pose, Workspace};
use crate::kinematics::AgentParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentTask {
    pub start: Pose,
    pub goal: Pose,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("instance has no agents")]
    NoAgents,
    #[error("agent {agent} {which} pose leaves the map")]
    OutOfMap { agent: usize, which: &'static str },
    #[error("agents {a} and {b} overlap at their {which} poses")]
    Overlap { a: usize, b: usize, which: &'static str },
}

/// A homogeneous fleet on a bounded map with circular obstacles.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub bounds: MapBounds,
    pub obstacles: Vec<CircleObstacle>,
    pub agents: Vec<AgentTask>,
    pub params: AgentParams,
}

impl ProblemInstance {
    pub fn workspace(&self) -> Workspace {
        Workspace::new(self.bounds, self.obstacles.clone())
    }

    /// Checks that every start and goal body is inside the map and that no
    /// two starts (or two goals) overlap. Obstacle clearance is left to the
    /// solver, which reports blocked endpoints as infeasible.
    pub fn check(&self) -> Result<(), InstanceError> {
        if self.agents.is_empty() {
            return Err(InstanceError::NoAgents);
        }
        let starts: Vec<_> = self.agents.iter().map(|a| self.params.body(a.start)).collect();
        let goals: Vec<_> = self.agents.iter().map(|a| self.params.body(a.goal)).collect();
        for (which, bodies) in [("start", starts), ("goal", goals)] {
            for (i, b) in bodies.iter().enumerate() {
                if !self.bounds.contains_rect(b) {
                    return Err(InstanceError::OutOfMap { agent: i, which });
                }
                if let Some(j) = (i + 1..bodies.len()).find(|&j| rects_overlap(b, &bodies[j])) {
                    return Err(InstanceError::Overlap { a: i, b: j, which });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub runtime_s: f64,
    pub bct_expanded: usize,
    pub low_level_expanded: usize,
    pub makespan: f64,
    pub sum_of_costs: f64,
}

/// One timestamped pose sequence per agent; index `t` is timestep `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub paths: Vec<Vec<Pose>>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub makespan: f64,
    pub sum_of_costs: f64,
}

/// Sum of chord lengths; waiting steps add nothing.
pub fn path_length(path: &[Pose]) -> f64 {
    path.windows(2).map(|w| w[0].dist(&w[1])).sum()
}

pub fn metrics(paths: &[Vec<Pose>]) -> Metrics {
    let lengths = paths.iter().map(|p| path_length(p));
    Metrics {
        makespan: lengths.clone().fold(0.0, f64::max),
        sum_of_costs: lengths.sum(),
    }
}
