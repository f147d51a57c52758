use std::f64::consts::PI;

use clcbs::geometry::{CircleObstacle, MapBounds, Pose};
use clcbs::kinematics::AgentParams;
use clcbs::problem::{AgentTask, ProblemInstance};

/// A wall of unit circles at x = 20 with a single gap around y = 10. Agent 0
/// parks inside the gap; agent 1 starts just east of the wall and must pass
/// through the gap to reach its goal in the west. Agent 0 would get there
/// first: planned jointly it is made to wait, planned on its own it parks
/// and seals the gap for good.
pub fn corridor_fail_case() -> ProblemInstance {
    let obstacles = (0..10)
        .map(|k| 1.0 + 2.0 * k as f64)
        .filter(|&y| y != 9.0 && y != 11.0)
        .map(|y| CircleObstacle::new(20.0, y, 1.0).unwrap())
        .collect();
    ProblemInstance {
        bounds: MapBounds { width: 40.0, height: 20.0 },
        obstacles,
        agents: vec![
            AgentTask { start: Pose::new(13.0, 10.0, 0.0), goal: Pose::new(19.5, 10.0, 0.0) },
            AgentTask { start: Pose::new(31.0, 10.0, PI), goal: Pose::new(6.0, 17.0, PI) },
        ],
        params: AgentParams::default(),
    }
}

/// Goal surrounded by a closed ring of overlapping circles.
pub fn walled_goal() -> ProblemInstance {
    let mut obstacles = Vec::new();
    let mut ring = |x: f64, y: f64| obstacles.push(CircleObstacle::new(x, y, 1.0).unwrap());
    for k in 0..=5 {
        let x = 7.0 + 1.4 * k as f64;
        ring(x, 6.5);
        ring(x, 13.5);
    }
    for k in 1..5 {
        let y = 6.5 + 1.4 * k as f64;
        ring(7.0, y);
        ring(14.0, y);
    }
    ProblemInstance {
        bounds: MapBounds { width: 40.0, height: 20.0 },
        obstacles,
        agents: vec![AgentTask { start: Pose::new(30.0, 10.0, 0.0), goal: Pose::new(10.0, 10.0, 0.0) }],
        params: AgentParams::default(),
    }
}
