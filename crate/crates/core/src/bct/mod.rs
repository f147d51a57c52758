//! Body conflict tree: best-first search over per-agent constraint sets.
//!
//! Each tree node holds one path per agent. The earliest body conflict in a
//! node is resolved by two children, each forbidding one of the agents from
//! an inflated copy of the other's body around the conflict time.

mod conflict;
mod sequential;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use conflict::{detect_first_conflict, pose_at, BodyConflict};
pub use sequential::{batch_sizes, solve_sequential};

use crate::geometry::{rects_overlap, GeometryError, Workspace};
use crate::kinematics::AgentParams;
use crate::problem::{metrics, AgentTask, InstanceError, ProblemInstance, Solution, SolveStats};
use crate::sha_star::{Constraint, HeuristicCache, PlanError, PlannedPath, Planner, PlannerConfig, TimeWindow};

/// Quantity minimised by the high-level search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Objective {
    #[default]
    SumOfCosts,
    Makespan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Constraint inflation coefficient `k >= 1`.
    pub inflation: f64,
    /// Constraint half-window in timesteps.
    pub delta_t: usize,
    pub planner: PlannerConfig,
    pub time_limit: Option<Duration>,
    /// High-level nodes expanded before giving up.
    pub node_limit: usize,
    pub objective: Objective,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            inflation: 1.2,
            delta_t: 1,
            planner: PlannerConfig::default(),
            time_limit: Some(Duration::from_secs(90)),
            node_limit: 10_000,
            objective: Objective::SumOfCosts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid instance: {0}")]
    InvalidInstance(#[from] InstanceError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("agent {agent} has no path: {source}")]
    Infeasible { agent: usize, source: PlanError },
    #[error("every branch of the conflict tree failed")]
    Exhausted,
    #[error("time limit reached")]
    Timeout,
    #[error("high-level node limit of {0} reached")]
    NodeLimit(usize),
    #[error("batch {batch} failed: {source}")]
    Batch { batch: usize, source: Box<SolveError> },
}

impl SolveError {
    /// True when the solver ran out of time or nodes rather than proving
    /// the instance unsolvable.
    pub fn is_budget(&self) -> bool {
        match self {
            SolveError::Timeout | SolveError::NodeLimit(_) => true,
            SolveError::Batch { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}

impl From<GeometryError> for SolveError {
    fn from(e: GeometryError) -> Self {
        SolveError::InvalidConfig(e.to_string())
    }
}

/// The two constraints that resolve `c`: agent `i` must avoid the inflated
/// body of `j` and vice versa, over `[t - delta_t, t + delta_t]` clamped at 0.
pub fn conflict_constraints(c: &BodyConflict, inflation: f64, delta_t: usize) -> Result<[Constraint; 2], GeometryError> {
    let window = TimeWindow::around(c.t, delta_t);
    Ok([
        Constraint { agent: c.i, region: c.body_j.inflate(inflation)?, window },
        Constraint { agent: c.j, region: c.body_i.inflate(inflation)?, window },
    ])
}

#[derive(Debug, Clone)]
pub struct BctNode {
    /// Constraints added by the tree; `agent` is the constrained agent.
    pub constraints: Vec<Constraint>,
    pub paths: Vec<Arc<PlannedPath>>,
    pub cost: f64,
    /// Search key: never below the parent's, so popped keys never decrease
    /// even when a replan happens to shorten a path.
    pub priority: f64,
}

impl BctNode {
    pub fn states(&self) -> Vec<&[crate::geometry::Pose]> {
        self.paths.iter().map(|p| p.states.as_slice()).collect()
    }
}

/// Scores a node by the low-level path costs. These charge for waiting,
/// unlike the reported chord lengths; a chord-length score would let a
/// chain of "wait two more steps" children go on forever at no cost.
fn node_cost(paths: &[Arc<PlannedPath>], objective: Objective) -> f64 {
    let lengths = paths.iter().map(|p| p.cost);
    match objective {
        Objective::SumOfCosts => lengths.sum(),
        Objective::Makespan => lengths.fold(0.0, f64::max),
    }
}

struct Queued {
    priority: f64,
    constraints: usize,
    seq: u64,
    node: BctNode,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl Ord for Queued {
    // Reversed for the max-heap: lowest priority, fewest constraints, FIFO.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .priority
            .total_cmp(&self.priority)
            .then(other.constraints.cmp(&self.constraints))
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Everything one tree search needs besides the tree itself.
pub(crate) struct Search<'a> {
    pub params: &'a AgentParams,
    pub workspace: &'a Workspace,
    pub agents: &'a [AgentTask],
    /// Constraints every agent must respect (earlier batches).
    pub shared: &'a [Constraint],
    pub config: &'a SolverConfig,
    pub deadline: Option<Instant>,
    /// One per agent, shared by all of that agent's replans.
    pub caches: Vec<HeuristicCache>,
}

/// Outcome of a tree search plus its counters.
pub(crate) struct SearchResult {
    pub paths: Result<Vec<Arc<PlannedPath>>, SolveError>,
    pub expanded: usize,
    pub low_level: usize,
    /// Priorities of expanded nodes in pop order.
    pub popped: Vec<f64>,
}

impl Search<'_> {
    fn replan(&self, agent: usize, own: &[Constraint]) -> Result<PlannedPath, PlanError> {
        let task = &self.agents[agent];
        let mine = own.iter().filter(|c| c.agent == agent);
        Planner::new(self.params, self.workspace, self.shared.iter().chain(mine), task.goal, &self.config.planner)
            .with_cache(&self.caches[agent])
            .plan(task.start, self.deadline)
    }

    /// Debug re-check that every path honours its full constraint set,
    /// including while parked after arrival.
    fn assert_consistent(&self, node: &BctNode) {
        for (agent, path) in node.paths.iter().enumerate() {
            let states = &path.states;
            let own = node.constraints.iter().filter(|c| c.agent == agent);
            for c in self.shared.iter().chain(own) {
                let end = c.window.hi.unwrap_or(c.window.lo).max(states.len() - 1);
                for t in c.window.lo..=end {
                    let body = self.params.body(pose_at(states, t));
                    assert!(
                        !(c.window.contains(t) && rects_overlap(&body, &c.region)),
                        "agent {agent} violates a constraint at t={t}"
                    );
                }
            }
        }
    }

    fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn run(&self) -> SearchResult {
        let mut out = SearchResult { paths: Err(SolveError::Exhausted), expanded: 0, low_level: 0, popped: Vec::new() };

        let mut root = Vec::with_capacity(self.agents.len());
        for agent in 0..self.agents.len() {
            match self.replan(agent, &[]) {
                Ok(p) => {
                    out.low_level += p.expanded;
                    root.push(Arc::new(p));
                }
                Err(PlanError::Timeout) => {
                    out.paths = Err(SolveError::Timeout);
                    return out;
                }
                Err(source) => {
                    out.paths = Err(SolveError::Infeasible { agent, source });
                    return out;
                }
            }
        }
        let cost = node_cost(&root, self.config.objective);
        let mut open = BinaryHeap::new();
        let mut seq = 0;
        open.push(Queued {
            priority: cost,
            constraints: 0,
            seq,
            node: BctNode { constraints: Vec::new(), paths: root, cost, priority: cost },
        });

        while let Some(Queued { node, .. }) = open.pop() {
            if self.timed_out() {
                out.paths = Err(SolveError::Timeout);
                return out;
            }
            if out.expanded >= self.config.node_limit {
                out.paths = Err(SolveError::NodeLimit(self.config.node_limit));
                return out;
            }
            out.expanded += 1;
            out.popped.push(node.priority);
            if cfg!(debug_assertions) {
                self.assert_consistent(&node);
            }

            let Some(conflict) = detect_first_conflict(&node.states(), self.params) else {
                out.paths = Ok(node.paths);
                return out;
            };
            let pair = match conflict_constraints(&conflict, self.config.inflation, self.config.delta_t) {
                Ok(pair) => pair,
                Err(e) => {
                    out.paths = Err(e.into());
                    return out;
                }
            };
            for c in pair {
                let mut constraints = node.constraints.clone();
                constraints.push(c);
                match self.replan(c.agent, &constraints) {
                    Ok(p) => {
                        out.low_level += p.expanded;
                        let mut paths = node.paths.clone();
                        paths[c.agent] = Arc::new(p);
                        let cost = node_cost(&paths, self.config.objective);
                        let priority = cost.max(node.priority);
                        seq += 1;
                        open.push(Queued {
                            priority,
                            constraints: constraints.len(),
                            seq,
                            node: BctNode { constraints, paths, cost, priority },
                        });
                    }
                    Err(PlanError::Timeout) => {
                        out.paths = Err(SolveError::Timeout);
                        return out;
                    }
                    // The child is pruned.
                    Err(_) => {}
                }
            }
        }
        out
    }
}

pub(crate) fn check_config(config: &SolverConfig) -> Result<(), SolveError> {
    if !(config.inflation >= 1.0) {
        return Err(SolveError::InvalidConfig(format!("inflation must be >= 1, got {}", config.inflation)));
    }
    let pen = &config.planner.penalties;
    if !(pen.turn >= 1.0 && pen.reverse >= 1.0 && pen.switch >= 1.0) {
        return Err(SolveError::InvalidConfig(format!("penalties must be >= 1, got {pen:?}")));
    }
    if config.node_limit == 0 || config.planner.max_expansions == 0 {
        return Err(SolveError::InvalidConfig("limits must be positive".into()));
    }
    Ok(())
}

pub(crate) fn into_solution(paths: Vec<Arc<PlannedPath>>, stats: SolveStats) -> Solution {
    let paths: Vec<_> = paths.iter().map(|p| p.states.clone()).collect();
    let m = metrics(&paths);
    Solution {
        paths,
        stats: SolveStats { makespan: m.makespan, sum_of_costs: m.sum_of_costs, ..stats },
    }
}

/// Solves all agents jointly.
pub fn solve(instance: &ProblemInstance, config: &SolverConfig) -> Result<Solution, SolveError> {
    solve_traced(instance, config).0
}

/// Like [`solve`], also returning the priorities of expanded tree nodes in
/// pop order.
pub fn solve_traced(instance: &ProblemInstance, config: &SolverConfig) -> (Result<Solution, SolveError>, Vec<f64>) {
    let started = Instant::now();
    if let Err(e) = instance.check().map_err(SolveError::from).and_then(|_| check_config(config)) {
        return (Err(e), Vec::new());
    }
    let workspace = instance.workspace();
    let search = Search {
        params: &instance.params,
        workspace: &workspace,
        agents: &instance.agents,
        shared: &[],
        config,
        deadline: config.time_limit.map(|d| started + d),
        caches: instance.agents.iter().map(|a| HeuristicCache::new(a.goal)).collect(),
    };
    let r = search.run();
    let stats = SolveStats {
        runtime_s: started.elapsed().as_secs_f64(),
        bct_expanded: r.expanded,
        low_level_expanded: r.low_level,
        ..SolveStats::default()
    };
    (r.paths.map(|p| into_solution(p, stats)), r.popped)
}
