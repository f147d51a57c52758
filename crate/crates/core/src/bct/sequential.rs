use std::sync::Arc;
use std::time::Instant;

use super::{check_config, into_solution, solve, Search, SolveError, SolverConfig};
use crate::geometry::Pose;
use crate::kinematics::AgentParams;
use crate::problem::{ProblemInstance, Solution, SolveStats};
use crate::sha_star::{Constraint, HeuristicCache, PlannedPath, TimeWindow};

/// Batch sizes for `k` agents split into batches of `ceil(k / batches)` in
/// input order. The last batch takes the remainder, so fewer than `batches`
/// batches can result (e.g. 9 agents in 4 batches gives 3, 3, 3).
pub fn batch_sizes(k: usize, batches: usize) -> Vec<usize> {
    let size = k.div_ceil(batches.max(1)).max(1);
    let mut out = vec![size; k / size];
    if k % size != 0 {
        out.push(k % size);
    }
    out
}

/// Turns a frozen path into constraints for everyone planned later: the
/// inflated body at every step before arrival, then the parked body forever.
fn freeze(agent: usize, path: &[Pose], params: &AgentParams, config: &SolverConfig) -> Result<Vec<Constraint>, SolveError> {
    let arrival = path.len() - 1;
    let mut out = Vec::with_capacity(path.len());
    for (t, pose) in path[..arrival].iter().enumerate() {
        out.push(Constraint {
            agent,
            region: params.body(*pose).inflate(config.inflation)?,
            window: TimeWindow::around(t, config.delta_t),
        });
    }
    out.push(Constraint {
        agent,
        region: params.body(path[arrival]).inflate(config.inflation)?,
        window: TimeWindow::from(arrival.saturating_sub(config.delta_t)),
    });
    Ok(out)
}

/// Solves agents in `batches` consecutive groups. Paths of earlier groups
/// are fixed and act as moving obstacles for later ones; in the shared
/// constraints, `agent` names the agent whose body is being avoided.
pub fn solve_sequential(instance: &ProblemInstance, batches: usize, config: &SolverConfig) -> Result<Solution, SolveError> {
    let k = instance.agents.len();
    if batches == 0 || batches > k.max(1) {
        return Err(SolveError::InvalidConfig(format!("batch count must be in 1..={k}, got {batches}")));
    }
    if batches == 1 {
        return solve(instance, config);
    }
    let started = Instant::now();
    instance.check()?;
    check_config(config)?;
    let workspace = instance.workspace();
    let deadline = config.time_limit.map(|d| started + d);

    let mut shared = Vec::new();
    let mut paths: Vec<Arc<PlannedPath>> = Vec::with_capacity(k);
    let mut stats = SolveStats::default();
    let mut first = 0;
    for (batch, size) in batch_sizes(k, batches).into_iter().enumerate() {
        let agents = &instance.agents[first..first + size];
        let search = Search {
            params: &instance.params,
            workspace: &workspace,
            agents,
            shared: &shared,
            config,
            deadline,
            caches: agents.iter().map(|a| HeuristicCache::new(a.goal)).collect(),
        };
        let r = search.run();
        stats.bct_expanded += r.expanded;
        stats.low_level_expanded += r.low_level;
        let solved = r.paths.map_err(|e| SolveError::Batch { batch, source: Box::new(e) })?;
        for (offset, p) in solved.iter().enumerate() {
            shared.extend(freeze(first + offset, &p.states, &instance.params, config)?);
        }
        paths.extend(solved);
        first += size;
    }
    stats.runtime_s = started.elapsed().as_secs_f64();
    Ok(into_solution(paths, stats))
}
