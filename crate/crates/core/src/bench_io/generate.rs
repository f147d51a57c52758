use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{normalize_angle, CircleObstacle, MapBounds, Pose};
use crate::kinematics::AgentParams;
use crate::problem::{AgentTask, ProblemInstance};

/// Side of the square reserved around every start and goal, centred on the
/// rear axle. Any body up to this size fits inside it at every heading.
pub const RESERVED_SQUARE: f64 = 5.0;
pub const OBSTACLE_RADIUS: f64 = 1.0;
/// Fraction of the map area covered by obstacles.
pub const OBSTACLE_AREA_FRACTION: f64 = 0.01;
/// Rejection-sampling attempts allowed per placed item.
const ATTEMPTS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub width: f64,
    pub height: f64,
    pub agents: usize,
    pub obstacles: bool,
    pub seed: u64,
}

impl GeneratorSpec {
    /// File stem such as `50x50_agents10_obs`.
    pub fn stem(&self) -> String {
        format!(
            "{}x{}_agents{}_{}",
            self.width,
            self.height,
            self.agents,
            if self.obstacles { "obs" } else { "empty" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("could not place {what} {index} after {ATTEMPTS} attempts")]
    Overcrowded { what: &'static str, index: usize },
}

/// Number of unit circles covering the given fraction of the map, rounded.
pub fn obstacle_count(width: f64, height: f64) -> usize {
    (OBSTACLE_AREA_FRACTION * width * height / (PI * OBSTACLE_RADIUS * OBSTACLE_RADIUS)).round() as usize
}

fn squares_overlap(a: &Pose, b: &Pose) -> bool {
    (a.x - b.x).abs() <= RESERVED_SQUARE && (a.y - b.y).abs() <= RESERVED_SQUARE
}

fn circle_hits_square(cx: f64, cy: f64, r: f64, p: &Pose) -> bool {
    let h = RESERVED_SQUARE / 2.0;
    let dx = ((cx - p.x).abs() - h).max(0.0);
    let dy = ((cy - p.y).abs() - h).max(0.0);
    dx.hypot(dy) <= r
}

fn sample_pose(rng: &mut ChaCha8Rng, width: f64, height: f64) -> Pose {
    let h = RESERVED_SQUARE / 2.0;
    let x = rng.gen_range(h..=width - h);
    let y = rng.gen_range(h..=height - h);
    Pose::new(x, y, normalize_angle(rng.gen_range(-PI..PI)))
}

/// Deterministic random instance: reserved squares lie inside the map,
/// starts are pairwise apart, goals are pairwise apart, every start-goal
/// distance exceeds a quarter of the map width, and obstacles (when on)
/// avoid all reserved squares and each other.
pub fn generate(spec: &GeneratorSpec, params: AgentParams) -> Result<ProblemInstance, GenerateError> {
    if spec.agents == 0 {
        return Err(GenerateError::InvalidSpec("agent count must be at least 1".into()));
    }
    if !(spec.width >= RESERVED_SQUARE && spec.height >= RESERVED_SQUARE) {
        return Err(GenerateError::InvalidSpec(format!(
            "map must be at least {RESERVED_SQUARE} m on each side, got {} x {}",
            spec.width, spec.height
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let min_dist = spec.width / 4.0;

    let mut agents: Vec<AgentTask> = Vec::with_capacity(spec.agents);
    for index in 0..spec.agents {
        let task = (0..ATTEMPTS)
            .map(|_| AgentTask {
                start: sample_pose(&mut rng, spec.width, spec.height),
                goal: sample_pose(&mut rng, spec.width, spec.height),
            })
            .find(|t| {
                t.start.dist(&t.goal) > min_dist
                    && agents.iter().all(|o| !squares_overlap(&o.start, &t.start) && !squares_overlap(&o.goal, &t.goal))
            })
            .ok_or(GenerateError::Overcrowded { what: "agent", index })?;
        agents.push(task);
    }

    let mut obstacles: Vec<CircleObstacle> = Vec::new();
    if spec.obstacles {
        let r = OBSTACLE_RADIUS;
        for index in 0..obstacle_count(spec.width, spec.height) {
            let o = (0..ATTEMPTS)
                .map(|_| (rng.gen_range(r..=spec.width - r), rng.gen_range(r..=spec.height - r)))
                .find(|&(x, y)| {
                    agents
                        .iter()
                        .all(|a| !circle_hits_square(x, y, r, &a.start) && !circle_hits_square(x, y, r, &a.goal))
                        && obstacles.iter().all(|o| (o.cx - x).hypot(o.cy - y) > 2.0 * r)
                })
                .ok_or(GenerateError::Overcrowded { what: "obstacle", index })?;
            obstacles.push(CircleObstacle::new(o.0, o.1, r).expect("positive radius"));
        }
    }

    Ok(ProblemInstance {
        bounds: MapBounds { width: spec.width, height: spec.height },
        obstacles,
        agents,
        params,
    })
}
