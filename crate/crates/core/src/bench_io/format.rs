use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{CircleObstacle, MapBounds, Pose};
use crate::kinematics::AgentParams;
use crate::problem::{AgentTask, ProblemInstance, Solution, SolveStats};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema error: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("invalid content: {0}")]
    Content(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSection {
    dimensions: [f64; 2],
    obstacle_radius: f64,
    obstacles: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentEntry {
    name: String,
    start: [f64; 3],
    goal: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    map: MapSection,
    agents: Vec<AgentEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    t: usize,
    x: f64,
    y: f64,
    yaw: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionFile {
    schedule: IndexMap<String, Vec<Record>>,
    stats: SolveStats,
}

fn pose([x, y, th]: [f64; 3]) -> Pose {
    Pose::new(x, y, th)
}

fn triple(p: &Pose) -> [f64; 3] {
    [p.x, p.y, p.theta]
}

/// Agent names used in files: `agent0`, `agent1`, ...
pub fn agent_name(i: usize) -> String {
    format!("agent{i}")
}

pub fn instance_to_string(instance: &ProblemInstance) -> Result<String, FormatError> {
    let radius = instance.obstacles.first().map_or(1.0, |o| o.radius);
    if instance.obstacles.iter().any(|o| o.radius != radius) {
        return Err(FormatError::Content("obstacles must share one radius".into()));
    }
    let file = InstanceFile {
        map: MapSection {
            dimensions: [instance.bounds.width, instance.bounds.height],
            obstacle_radius: radius,
            obstacles: instance.obstacles.iter().map(|o| [o.cx, o.cy]).collect(),
        },
        agents: instance
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| AgentEntry { name: agent_name(i), start: triple(&a.start), goal: triple(&a.goal) })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

/// Parses an instance; the fleet parameters are not part of the file.
pub fn instance_from_str(text: &str, params: AgentParams) -> Result<ProblemInstance, FormatError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let [width, height] = file.map.dimensions;
    if !(width > 0.0 && height > 0.0) {
        return Err(FormatError::Content(format!("map.dimensions must be positive, got [{width}, {height}]")));
    }
    let obstacles = file
        .map
        .obstacles
        .iter()
        .map(|&[x, y]| CircleObstacle::new(x, y, file.map.obstacle_radius))
        .collect::<Result<_, _>>()
        .map_err(|e| FormatError::Content(format!("map.obstacles: {e}")))?;
    Ok(ProblemInstance {
        bounds: MapBounds { width, height },
        obstacles,
        agents: file.agents.iter().map(|a| AgentTask { start: pose(a.start), goal: pose(a.goal) }).collect(),
        params,
    })
}

pub fn solution_to_string(solution: &Solution) -> Result<String, FormatError> {
    let schedule = solution
        .paths
        .iter()
        .enumerate()
        .map(|(i, path)| {
            let records = path
                .iter()
                .enumerate()
                .map(|(t, p)| Record { t, x: p.x, y: p.y, yaw: p.theta })
                .collect();
            (agent_name(i), records)
        })
        .collect();
    let file = SolutionFile { schedule, stats: solution.stats.clone() };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

/// Parses a solution. Agents are taken in file order and timesteps must
/// count up from zero.
pub fn solution_from_str(text: &str) -> Result<Solution, FormatError> {
    let file: SolutionFile = serde_json::from_str(text)?;
    let mut paths = Vec::with_capacity(file.schedule.len());
    for (name, records) in &file.schedule {
        if records.is_empty() {
            return Err(FormatError::Content(format!("schedule.{name} is empty")));
        }
        if let Some((k, r)) = records.iter().enumerate().find(|(k, r)| r.t != *k) {
            return Err(FormatError::Content(format!("schedule.{name}[{k}]: expected t = {k}, found {}", r.t)));
        }
        paths.push(records.iter().map(|r| Pose::new(r.x, r.y, r.yaw)).collect());
    }
    Ok(Solution { paths, stats: file.stats })
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

pub fn read_instance(path: &Path, params: AgentParams) -> Result<ProblemInstance, FormatError> {
    instance_from_str(&read(path)?, params)
}

pub fn write_instance(path: &Path, instance: &ProblemInstance) -> Result<(), FormatError> {
    write(path, &instance_to_string(instance)?)
}

pub fn read_solution(path: &Path) -> Result<Solution, FormatError> {
    solution_from_str(&read(path)?)
}

pub fn write_solution(path: &Path, solution: &Solution) -> Result<(), FormatError> {
    write(path, &solution_to_string(solution)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ProblemInstance {
        ProblemInstance {
            bounds: MapBounds { width: 50.0, height: 40.0 },
            obstacles: vec![CircleObstacle::new(10.1, 20.2, 1.0).unwrap()],
            agents: vec![AgentTask { start: Pose::new(1.0 / 3.0, 5.0, 0.1), goal: Pose::new(40.0, 30.0, -2.9) }],
            params: AgentParams::default(),
        }
    }

    #[test]
    fn instance_round_trips_exactly() {
        let inst = sample();
        let back = instance_from_str(&instance_to_string(&inst).unwrap(), inst.params).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn missing_agents_names_the_field() {
        let text = r#"{"map": {"dimensions": [10, 10], "obstacle_radius": 1, "obstacles": []}}"#;
        let err = instance_from_str(text, AgentParams::default()).unwrap_err();
        assert!(err.to_string().contains("missing field `agents`"), "{err}");
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn solution_round_trips_and_keeps_order() {
        let sol = Solution {
            paths: (0..12).map(|i| vec![Pose::new(i as f64, 0.5, 0.25), Pose::new(i as f64 + 1.0, 0.5, 0.25)]).collect(),
            stats: SolveStats { runtime_s: 0.5, bct_expanded: 3, low_level_expanded: 99, makespan: 1.0, sum_of_costs: 12.0 },
        };
        let text = solution_to_string(&sol).unwrap();
        assert!(text.find("\"agent2\"").unwrap() < text.find("\"agent10\"").unwrap());
        assert_eq!(solution_from_str(&text).unwrap(), sol);
    }

    #[test]
    fn timestep_gaps_are_rejected() {
        let text = r#"{"schedule": {"agent0": [{"t": 0, "x": 0, "y": 0, "yaw": 0}, {"t": 2, "x": 0, "y": 0, "yaw": 0}]},
            "stats": {"runtime_s": 0, "bct_expanded": 0, "low_level_expanded": 0, "makespan": 0, "sum_of_costs": 0}}"#;
        let err = solution_from_str(text).unwrap_err();
        assert!(err.to_string().contains("agent0[1]"), "{err}");
    }
}
