//! Single-agent hybrid A* in (x, y, heading, time).
//!
//! Nodes are expanded with the seven motion primitives. Whenever a popped
//! node is close enough to the goal, a Reeds-Shepp shot is attempted and, if
//! it is collision-free and the goal can be held afterwards, the search ends.

mod analytic;
mod constraints;

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;
use std::time::Instant;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use analytic::{euler_shot, EulerShot};
pub(crate) use constraints::ConstraintTable;
pub use constraints::{Constraint, TimeWindow};

use crate::geometry::{Pose, Workspace};
use crate::kinematics::{integrate_rotated, primitives, reeds_shepp_length, AgentParams, Control, MotionPrimitive};

/// Position tolerance for accepting a node as the goal.
pub const GOAL_POS_TOL: f64 = 1e-3;
/// Heading tolerance for accepting a node as the goal.
pub const GOAL_HEADING_TOL: f64 = 1e-2;
/// A finishing shot is returned once its cost is within this factor of the
/// smallest open f. The heuristic ignores penalties, so an exact bound would
/// expand far more nodes.
const SHOT_SUBOPTIMALITY: f64 = 1.05;
/// After the first shot, the search spends at most as many expansions again
/// as it took to find it, and never fewer than this.
const SHOT_MIN_EXTRA: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Penalties {
    pub turn: f64,
    pub reverse: f64,
    pub switch: f64,
}

impl Penalties {
    pub const NONE: Penalties = Penalties { turn: 1.0, reverse: 1.0, switch: 1.0 };
}

impl Default for Penalties {
    fn default() -> Self {
        Self { turn: 1.5, reverse: 2.0, switch: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub penalties: Penalties,
    /// Duplicate-detection cell size in x and y.
    pub xy_resolution: f64,
    /// Duplicate-detection bin width in heading.
    pub theta_resolution: f64,
    /// Distance-to-go below which analytic shots are tried.
    /// `None` means three minimum turning radii.
    pub analytic_radius: Option<f64>,
    /// Expansions allowed per call before giving up.
    pub max_expansions: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            penalties: Penalties::default(),
            xy_resolution: 0.5,
            theta_resolution: TAU / 72.0,
            analytic_radius: None,
            max_expansions: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("start pose collides with the workspace or a constraint")]
    StartBlocked,
    #[error("goal pose collides with the workspace or stays occupied forever")]
    GoalBlocked,
    #[error("search space exhausted after {expanded} expansions")]
    Exhausted { expanded: usize },
    #[error("expansion limit of {limit} reached")]
    NodeLimit { limit: usize },
    #[error("deadline passed")]
    Timeout,
}

impl PlanError {
    /// True when the search ran out of budget rather than proving infeasibility.
    pub fn is_budget(&self) -> bool {
        matches!(self, PlanError::NodeLimit { .. } | PlanError::Timeout)
    }
}

/// Travel direction of the last moving primitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gear {
    Forward,
    Reverse,
}

impl Gear {
    fn of(c: Control) -> Option<Gear> {
        if c.v > 0.0 {
            Some(Gear::Forward)
        } else if c.v < 0.0 {
            Some(Gear::Reverse)
        } else {
            None
        }
    }
}

/// Cost of applying `c` after last moving in `gear`.
pub fn transition_cost(c: Control, gear: Option<Gear>, params: &AgentParams, penalties: &Penalties) -> f64 {
    let mut cost = if c.v == 0.0 { params.forward_step() } else { c.v.abs() * params.ts };
    if c.is_turning() {
        cost *= penalties.turn;
    }
    let now = Gear::of(c);
    if now == Some(Gear::Reverse) {
        cost *= penalties.reverse;
    }
    if now.is_some() && gear.is_some() && now != gear {
        cost *= penalties.switch;
    }
    cost
}

/// Reeds-Shepp length at the minimum turning radius, never below the
/// straight-line distance.
pub fn heuristic(pose: &Pose, goal: &Pose, params: &AgentParams) -> f64 {
    reeds_shepp_length(pose, goal, params.r_min()).max(pose.dist(goal))
}

/// Heuristic values toward one goal, keyed by exact pose bits. Replans of
/// the same agent revisit the same poses, so one cache can serve them all.
pub struct HeuristicCache {
    goal: Pose,
    values: RefCell<FxHashMap<[u64; 3], f64>>,
}

impl HeuristicCache {
    /// Entries kept before the cache is flushed.
    const CAPACITY: usize = 2_000_000;

    pub fn new(goal: Pose) -> Self {
        Self { goal, values: RefCell::default() }
    }

    fn get(&self, pose: &Pose, params: &AgentParams) -> f64 {
        let key = [pose.x.to_bits(), pose.y.to_bits(), pose.theta.to_bits()];
        if let Some(&h) = self.values.borrow().get(&key) {
            return h;
        }
        let h = heuristic(pose, &self.goal, params);
        let mut values = self.values.borrow_mut();
        if values.len() >= Self::CAPACITY {
            values.clear();
        }
        values.insert(key, h);
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchNode {
    pub pose: Pose,
    pub t: usize,
    pub g: f64,
    pub f: f64,
    pub parent: Option<usize>,
    /// Control that produced this node; `WAIT` at the root.
    pub control: Control,
    pub gear: Option<Gear>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannedPath {
    /// Pose at each timestep, starting with the start pose.
    pub states: Vec<Pose>,
    /// `controls[i]` takes `states[i]` to `states[i + 1]`.
    pub controls: Vec<Control>,
    pub cost: f64,
    pub expanded: usize,
    /// Index of the first state produced by the analytic shot.
    pub shot_start: usize,
}

impl PlannedPath {
    /// Arrival time at the goal.
    pub fn arrival(&self) -> usize {
        self.states.len() - 1
    }

    /// Sum of chord lengths between consecutive states.
    pub fn length(&self) -> f64 {
        self.states.windows(2).map(|w| w[0].dist(&w[1])).sum()
    }
}

type BinKey = (i64, i64, i64, usize);

#[derive(PartialEq)]
struct OpenItem {
    f: f64,
    g: f64,
    seq: u64,
    node: usize,
}

impl Eq for OpenItem {}

impl Ord for OpenItem {
    // BinaryHeap is a max-heap: smallest f first, then larger g, then FIFO.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.total_cmp(&other.g))
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for OpenItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One configured low-level search problem.
pub struct Planner<'a> {
    params: &'a AgentParams,
    workspace: &'a Workspace,
    config: &'a PlannerConfig,
    table: ConstraintTable,
    goal: Pose,
    primitives: [MotionPrimitive; 7],
    cache: Option<&'a HeuristicCache>,
    /// Earliest arrival the constraints allow; `None` if never.
    park_from: Option<usize>,
    /// Lower bound on the cost of any single timestep.
    step_floor: f64,
}

impl<'a> Planner<'a> {
    pub fn new<'c>(
        params: &'a AgentParams,
        workspace: &'a Workspace,
        constraints: impl IntoIterator<Item = &'c Constraint>,
        goal: Pose,
        config: &'a PlannerConfig,
    ) -> Self {
        let table = ConstraintTable::new(constraints);
        let park_from = table.earliest_parking(&params.body(goal));
        Self {
            params,
            workspace,
            config,
            table,
            goal,
            primitives: primitives(params),
            cache: None,
            park_from,
            step_floor: params.forward_step().min(params.backward_step()),
        }
    }

    /// Memoises heuristic values in `cache`, which must target the same goal.
    pub fn with_cache(mut self, cache: &'a HeuristicCache) -> Self {
        assert_eq!(cache.goal, self.goal, "heuristic cache built for another goal");
        self.cache = Some(cache);
        self
    }

    fn distance_to_go(&self, pose: &Pose) -> f64 {
        match self.cache {
            Some(c) => c.get(pose, self.params),
            None => heuristic(pose, &self.goal, self.params),
        }
    }

    /// Distance-to-go, raised when the goal stays occupied for a while.
    /// Every primitive step costs at least `step_floor`; a closing shot
    /// spends at most one cheaper step per driving direction, of which a
    /// Reeds-Shepp word has at most three.
    fn h(&self, pose: &Pose, t: usize) -> f64 {
        let h = self.distance_to_go(pose);
        let wait = self.park_from.unwrap_or(0).saturating_sub(t + 3);
        h.max(wait as f64 * self.step_floor)
    }

    pub fn state_valid(&self, pose: &Pose, t: usize) -> bool {
        let body = self.params.body(*pose);
        self.workspace.is_free(&body) && !self.table.violated(&body, t)
    }

    /// Whether the agent could stay parked at the goal from `t` on.
    fn can_park(&self, t: usize) -> bool {
        !self.table.blocks_parking(&self.params.body(self.goal), t)
    }

    fn at_goal(&self, pose: &Pose) -> bool {
        pose.dist(&self.goal) <= GOAL_POS_TOL && pose.heading_diff(&self.goal) <= GOAL_HEADING_TOL
    }

    fn bin(&self, pose: &Pose, t: usize) -> BinKey {
        let xy = self.config.xy_resolution;
        let th = self.config.theta_resolution;
        let bins = (TAU / th).round() as i64;
        (
            (pose.x / xy).floor() as i64,
            (pose.y / xy).floor() as i64,
            ((pose.theta / th).floor() as i64).rem_euclid(bins),
            t.min(self.table.horizon() + 1),
        )
    }

    /// Collision-free children of `node` (stored at `index`) under all primitives.
    pub fn expand(&self, node: &SearchNode, index: usize) -> Vec<SearchNode> {
        let t = node.t + 1;
        let rot = node.pose.theta.sin_cos();
        self.primitives
            .iter()
            .filter_map(|p| {
                let c = p.control();
                let pose = integrate_rotated(&node.pose, rot, c, self.params);
                let body = self.params.body(pose);
                // A waiting agent keeps a pose the workspace already accepted.
                let free = c.v == 0.0 || self.workspace.is_free(&body);
                if !free || self.table.violated(&body, t) {
                    return None;
                }
                let g = node.g + transition_cost(c, node.gear, self.params, &self.config.penalties);
                Some(SearchNode {
                    pose,
                    t,
                    g,
                    f: g + self.h(&pose, t),
                    parent: Some(index),
                    control: c,
                    gear: Gear::of(c).or(node.gear),
                })
            })
            .collect()
    }

    /// Tries to finish from `node` with a Reeds-Shepp shot. Returns the
    /// shot, which is empty if `node` is already at the goal.
    pub fn analytic_expand(&self, node: &SearchNode) -> Option<EulerShot> {
        if self.at_goal(&node.pose) {
            return self.can_park(node.t).then(|| EulerShot { controls: Vec::new(), states: Vec::new() });
        }
        let shot = euler_shot(&node.pose, &self.goal, self.params)?;
        let clear = shot
            .states
            .iter()
            .enumerate()
            .all(|(i, s)| self.state_valid(s, node.t + i + 1));
        (clear && self.can_park(node.t + shot.states.len())).then_some(shot)
    }

    fn shot_cost(&self, node: &SearchNode, shot: &EulerShot) -> f64 {
        let pen = &self.config.penalties;
        let mut gear = node.gear;
        let mut cost = 0.0;
        for &c in &shot.controls {
            // Shot controls steer continuously; any nonzero angle is a turn.
            cost += transition_cost(c, gear, self.params, pen);
            gear = Gear::of(c).or(gear);
        }
        cost
    }

    pub fn plan(&self, start: Pose, deadline: Option<Instant>) -> Result<PlannedPath, PlanError> {
        self.search(start, deadline, None)
    }

    /// Like [`Planner::plan`] but also records the f-value of every expanded node.
    pub fn plan_traced(&self, start: Pose, deadline: Option<Instant>) -> (Result<PlannedPath, PlanError>, Vec<f64>) {
        let mut trace = Vec::new();
        let r = self.search(start, deadline, Some(&mut trace));
        (r, trace)
    }

    fn search(&self, start: Pose, deadline: Option<Instant>, mut trace: Option<&mut Vec<f64>>) -> Result<PlannedPath, PlanError> {
        if self.park_from.is_none() || !self.workspace.is_free(&self.params.body(self.goal)) {
            return Err(PlanError::GoalBlocked);
        }
        if !self.state_valid(&start, 0) {
            return Err(PlanError::StartBlocked);
        }
        let radius = self.config.analytic_radius.unwrap_or(3.0 * self.params.r_min());

        let mut nodes = vec![SearchNode {
            pose: start,
            t: 0,
            g: 0.0,
            f: self.h(&start, 0),
            parent: None,
            control: Control::WAIT,
            gear: None,
        }];
        let mut best_g: FxHashMap<BinKey, f64> = FxHashMap::default();
        let mut closed: FxHashSet<BinKey> = FxHashSet::default();
        let mut open = BinaryHeap::new();
        let mut seq = 0u64;
        best_g.insert(self.bin(&start, 0), 0.0);
        open.push(OpenItem { f: nodes[0].f, g: 0.0, seq, node: 0 });

        let mut expanded = 0;
        // Best finish so far: cost, node, shot, expansions when first found.
        let mut incumbent: Option<(f64, usize, EulerShot, usize)> = None;
        while let Some(item) = open.pop() {
            let node = nodes[item.node];
            let key = self.bin(&node.pose, node.t);
            if !closed.insert(key) {
                continue;
            }
            if let Some((cost, _, _, found_at)) = &incumbent {
                if item.f * SHOT_SUBOPTIMALITY >= *cost || expanded >= found_at + (*found_at).max(SHOT_MIN_EXTRA) {
                    break;
                }
            }
            if expanded >= self.config.max_expansions {
                if incumbent.is_some() {
                    break;
                }
                return Err(PlanError::NodeLimit { limit: self.config.max_expansions });
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(PlanError::Timeout);
            }
            expanded += 1;
            if let Some(tr) = trace.as_deref_mut() {
                tr.push(node.f);
            }

            // A shot is only a candidate: a cheaper finish may still turn up
            // while open nodes have f well below its cost.
            let to_go = self.distance_to_go(&node.pose);
            let can_improve = incumbent.as_ref().is_none_or(|(best, ..)| node.g + to_go < *best);
            if to_go <= radius && can_improve {
                if let Some(shot) = self.analytic_expand(&node) {
                    let cost = node.g + self.shot_cost(&node, &shot);
                    match &mut incumbent {
                        Some((best, last, kept, _)) => {
                            if cost < *best {
                                (*best, *last, *kept) = (cost, item.node, shot);
                            }
                        }
                        None => incumbent = Some((cost, item.node, shot, expanded)),
                    }
                }
            }

            for child in self.expand(&node, item.node) {
                let ck = self.bin(&child.pose, child.t);
                if closed.contains(&ck) {
                    continue;
                }
                match best_g.entry(ck) {
                    Entry::Occupied(mut e) => {
                        if *e.get() <= child.g {
                            continue;
                        }
                        e.insert(child.g);
                    }
                    Entry::Vacant(e) => {
                        e.insert(child.g);
                    }
                }
                seq += 1;
                open.push(OpenItem { f: child.f, g: child.g, seq, node: nodes.len() });
                nodes.push(child);
            }
        }
        match incumbent {
            Some((_, last, shot, _)) => Ok(self.assemble(&nodes, last, shot, expanded)),
            None => Err(PlanError::Exhausted { expanded }),
        }
    }

    fn assemble(&self, nodes: &[SearchNode], last: usize, shot: EulerShot, expanded: usize) -> PlannedPath {
        let mut states = Vec::new();
        let mut controls = Vec::new();
        let mut i = Some(last);
        while let Some(k) = i {
            states.push(nodes[k].pose);
            if nodes[k].parent.is_some() {
                controls.push(nodes[k].control);
            }
            i = nodes[k].parent;
        }
        states.reverse();
        controls.reverse();
        let shot_start = states.len();
        let cost = nodes[last].g + self.shot_cost(&nodes[last], &shot);
        states.extend(shot.states);
        controls.extend(shot.controls);
        PlannedPath { states, controls, cost, expanded, shot_start }
    }
}

/// Plans one agent from `start` to `goal` under `constraints`.
pub fn plan<'c>(
    params: &AgentParams,
    workspace: &Workspace,
    start: Pose,
    goal: Pose,
    constraints: impl IntoIterator<Item = &'c Constraint>,
    config: &PlannerConfig,
    deadline: Option<Instant>,
) -> Result<PlannedPath, PlanError> {
    Planner::new(params, workspace, constraints, goal, config).plan(start, deadline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CircleObstacle, MapBounds, OrientedRect};
    use crate::kinematics::{integrate, reeds_shepp, Action};
    use approx::assert_abs_diff_eq;

    fn open_map() -> Workspace {
        Workspace::new(MapBounds { width: 60.0, height: 60.0 }, Vec::new())
    }

    fn root(pose: Pose) -> SearchNode {
        SearchNode { pose, t: 0, g: 0.0, f: 0.0, parent: None, control: Control::WAIT, gear: None }
    }

    #[test]
    fn costs_compose_multiplicatively() {
        let p = AgentParams::default();
        let prim = |a| MotionPrimitive::new(a, &p).control();
        let fwd = Some(Gear::Forward);
        assert_abs_diff_eq!(transition_cost(prim(Action::ForwardStraight), fwd, &p, &Penalties::NONE), 1.0);
        let pen = Penalties::default();
        assert_abs_diff_eq!(transition_cost(prim(Action::ForwardLeft), fwd, &p, &pen), 1.5);
        assert_abs_diff_eq!(transition_cost(prim(Action::BackwardStraight), fwd, &p, &pen), 4.0);
        assert_abs_diff_eq!(transition_cost(Control::WAIT, fwd, &p, &pen), 1.0);
    }

    #[test]
    fn heuristic_examples() {
        let p = AgentParams::default();
        let o = Pose::new(0.0, 0.0, 0.0);
        assert_eq!(heuristic(&o, &o, &p), 0.0);
        assert_abs_diff_eq!(heuristic(&o, &Pose::new(10.0, 0.0, 0.0), &p), 10.0, epsilon = 1e-9);
        let flip = Pose::new(0.0, 0.0, std::f64::consts::PI);
        assert_abs_diff_eq!(heuristic(&o, &flip, &p), reeds_shepp(&o, &flip, 3.0).length(), epsilon = 1e-12);
    }

    #[test]
    fn open_space_gives_seven_children() {
        let p = AgentParams::default();
        let ws = open_map();
        let cfg = PlannerConfig::default();
        let planner = Planner::new(&p, &ws, &[], Pose::new(50.0, 50.0, 0.0), &cfg);
        let kids = planner.expand(&root(Pose::new(30.0, 30.0, 0.3)), 0);
        assert_eq!(kids.len(), 7);
        assert!(kids.iter().all(|k| k.t == 1 && k.parent == Some(0) && k.f >= k.g));
    }

    #[test]
    fn walls_at_arc_endpoints_leave_only_wait() {
        let p = AgentParams::default();
        let start = Pose::new(30.0, 30.0, 0.0);
        let here = p.body(start);
        // One small obstacle per moving primitive, touching its endpoint body
        // but not the start body.
        let mut obstacles = Vec::new();
        for prim in primitives(&p).iter().filter(|m| m.action != Action::Wait) {
            let end = integrate(&start, prim.control(), &p);
            let body = p.body(end);
            let probe = body
                .corners()
                .into_iter()
                .find(|c| !here.contains(*c) && here.distance_to(*c) > 0.06)
                .expect("endpoint corner outside start body");
            obstacles.push(CircleObstacle::new(probe.x, probe.y, 0.05).unwrap());
        }
        let ws = Workspace::new(MapBounds { width: 60.0, height: 60.0 }, obstacles);
        assert!(ws.is_free(&here));
        let cfg = PlannerConfig::default();
        let planner = Planner::new(&p, &ws, &[], Pose::new(50.0, 50.0, 0.0), &cfg);
        let kids = planner.expand(&root(start), 0);
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].control, Control::WAIT);
    }

    #[test]
    fn full_blockage_gives_no_children() {
        let p = AgentParams::default();
        let ws = open_map();
        let cfg = PlannerConfig::default();
        let wall = Constraint {
            agent: 0,
            region: OrientedRect::new(Pose::new(30.0, 30.0, 0.0), 10.0, 10.0, 20.0).unwrap(),
            window: TimeWindow::new(1, 1),
        };
        let planner = Planner::new(&p, &ws, [&wall], Pose::new(50.0, 50.0, 0.0), &cfg);
        assert!(planner.expand(&root(Pose::new(30.0, 30.0, 0.0)), 0).is_empty());
    }

    #[test]
    fn bins_differ_by_time_below_horizon() {
        let p = AgentParams::default();
        let ws = open_map();
        let cfg = PlannerConfig::default();
        let c = Constraint {
            agent: 1,
            region: OrientedRect::new(Pose::new(5.0, 5.0, 0.0), 1.0, 1.0, 1.0).unwrap(),
            window: TimeWindow::new(0, 10),
        };
        let planner = Planner::new(&p, &ws, [&c], Pose::new(50.0, 50.0, 0.0), &cfg);
        let pose = Pose::new(20.0, 20.0, 0.0);
        assert_ne!(planner.bin(&pose, 3), planner.bin(&pose, 4));
        assert_eq!(planner.bin(&pose, 11), planner.bin(&pose, 500));
    }

    #[test]
    fn start_equal_goal_is_trivial() {
        let p = AgentParams::default();
        let ws = open_map();
        let s = Pose::new(10.0, 10.0, 1.0);
        let path = plan(&p, &ws, s, s, &[], &PlannerConfig::default(), None).unwrap();
        assert_eq!(path.states, vec![s]);
        assert_eq!(path.cost, 0.0);
    }

    #[test]
    fn straight_twenty_meters() {
        let p = AgentParams::default();
        let ws = open_map();
        let (s, g) = (Pose::new(5.0, 10.0, 0.0), Pose::new(25.0, 10.0, 0.0));
        let path = plan(&p, &ws, s, g, &[], &PlannerConfig::default(), None).unwrap();
        assert_abs_diff_eq!(path.length(), reeds_shepp(&s, &g, p.r_min()).length(), epsilon = 1e-6);
        assert_eq!(path.arrival(), 20);
        assert!(path.states.iter().all(|q| q.y.abs() - 10.0 < 1e-9 && q.theta.abs() < 1e-9));
    }

    #[test]
    fn enclosed_goal_fails() {
        let p = AgentParams::default();
        let goal = Pose::new(30.0, 30.0, 0.0);
        let ring = (0..16)
            .map(|i| {
                let a = i as f64 * TAU / 16.0;
                CircleObstacle::new(30.5 + 1.5 * a.cos(), 30.0 + 1.5 * a.sin(), 0.5).unwrap()
            })
            .collect();
        let ws = Workspace::new(MapBounds { width: 60.0, height: 60.0 }, ring);
        let r = plan(&p, &ws, Pose::new(10.0, 10.0, 0.0), goal, &[], &PlannerConfig::default(), None);
        assert_eq!(r, Err(PlanError::GoalBlocked));
    }

    #[test]
    fn node_at_goal_expands_to_nothing() {
        let p = AgentParams::default();
        let ws = open_map();
        let cfg = PlannerConfig::default();
        let g = Pose::new(20.0, 20.0, 0.0);
        let planner = Planner::new(&p, &ws, &[], g, &cfg);
        let shot = planner.analytic_expand(&root(g)).unwrap();
        assert!(shot.states.is_empty());
    }

    #[test]
    fn straight_shot_matches_rs_samples() {
        let p = AgentParams::default();
        let ws = open_map();
        let cfg = PlannerConfig::default();
        let (s, g) = (Pose::new(10.0, 10.0, 0.0), Pose::new(15.0, 10.0, 0.0));
        let planner = Planner::new(&p, &ws, &[], g, &cfg);
        let shot = planner.analytic_expand(&root(s)).unwrap();
        let samples = crate::kinematics::sample_rs_path(&reeds_shepp(&s, &g, p.r_min()), p.ts, p.v_forward_max);
        assert_eq!(shot.states.len() + 1, samples.len());
        for (a, b) in shot.states.iter().zip(&samples[1..]) {
            assert!(a.dist(b) < 1e-9 && a.heading_diff(b) < 1e-9);
        }
    }

    #[test]
    fn shot_through_constraint_is_refused() {
        let p = AgentParams::default();
        let ws = open_map();
        let cfg = PlannerConfig::default();
        let (s, g) = (Pose::new(10.0, 10.0, 0.0), Pose::new(15.0, 10.0, 0.0));
        let free = Planner::new(&p, &ws, &[], g, &cfg).analytic_expand(&root(s)).unwrap();
        // Block the third shot state exactly at the time it would be occupied.
        let c = Constraint { agent: 1, region: p.body(free.states[2]), window: TimeWindow::new(3, 3) };
        let planner = Planner::new(&p, &ws, [&c], g, &cfg);
        assert!(planner.analytic_expand(&root(s)).is_none());
        // A constraint on the goal long after arrival still forbids parking there.
        let parked = Constraint { region: p.body(g), window: TimeWindow::new(40, 41), ..c };
        let planner = Planner::new(&p, &ws, [&parked], g, &cfg);
        assert!(planner.analytic_expand(&root(s)).is_none());
    }

    #[test]
    fn budget_errors_are_distinct() {
        let p = AgentParams::default();
        let ws = open_map();
        let cfg = PlannerConfig { max_expansions: 3, ..PlannerConfig::default() };
        let r = plan(&p, &ws, Pose::new(5.0, 5.0, 0.0), Pose::new(50.0, 50.0, 3.0), &[], &cfg, None);
        assert!(matches!(r, Err(PlanError::NodeLimit { limit: 3 })));
        let past = Instant::now();
        let r = plan(&p, &ws, Pose::new(5.0, 5.0, 0.0), Pose::new(50.0, 50.0, 3.0), &[], &PlannerConfig::default(), Some(past));
        assert_eq!(r, Err(PlanError::Timeout));
        assert!(r.unwrap_err().is_budget());
    }
}
