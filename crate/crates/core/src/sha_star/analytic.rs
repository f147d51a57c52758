//! Reeds-Shepp shots expressed as exact forward-Euler control sequences.
//!
//! An Euler step translates along the heading held at the start of the
//! step and only then rotates, so the vertices of an Euler path can sit
//! exactly on a circular arc provided each vertex heading equals the
//! direction of the chord leaving it. The shot is therefore built on a
//! curve of slightly enlarged radius: vertices are placed on the curve,
//! headings follow the chords, and the final rotation lands on the goal
//! heading. The curve is planned from a virtual start heading chosen so the
//! first chord leaves along the real heading.

use crate::geometry::{normalize_angle, Point, Pose};
use crate::kinematics::{integrate, reeds_shepp, AgentParams, Control, ReedsSheppPath};

/// Radius multipliers tried in order. Steps inside an arc need only a
/// fraction of a percent; the rest absorbs the uneven turns at cusps.
const RADIUS_MARGINS: [f64; 4] = [1.05, 1.25, 1.6, 2.2];
const SECANT_ITERS: usize = 30;
const HEADING_TOL: f64 = 1e-13;
const LANDING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EulerShot {
    pub controls: Vec<Control>,
    /// States after each control; the last one is the goal.
    pub states: Vec<Pose>,
}

/// Vertices on the curve and the driving direction of each step. Each run
/// between cusps is split into equal arc-length steps, so consecutive
/// chords turn by at most about one step's worth of curvature.
fn vertices(path: &ReedsSheppPath, params: &AgentParams) -> (Vec<Point>, Vec<f64>) {
    let mut points = vec![path.start.position()];
    let mut signs = Vec::new();
    let mut offset = 0.0;
    let mut i = 0;
    while i < path.segments.len() {
        let backward = path.segments[i].is_backward();
        let mut run = 0.0;
        while i < path.segments.len() && path.segments[i].is_backward() == backward {
            run += path.segments[i].length.abs();
            i += 1;
        }
        let limit = if backward { params.backward_step() } else { params.forward_step() };
        let n = ((run / limit) - 1e-9).ceil().max(1.0) as usize;
        for k in 1..=n {
            let s = if k == n { offset + run } else { offset + run * k as f64 / n as f64 };
            points.push(path.pose_at(s).position());
            signs.push(if backward { -1.0 } else { 1.0 });
        }
        offset += run;
    }
    (points, signs)
}

/// Heading mismatch between `from` and the first chord of the curve planned
/// from virtual heading `psi`.
fn first_chord_error(from: &Pose, goal: &Pose, psi: f64, radius: f64, params: &AgentParams) -> Option<(f64, Vec<Point>, Vec<f64>)> {
    let path = reeds_shepp(&Pose::new(from.x, from.y, psi), goal, radius);
    if path.is_empty() {
        return None;
    }
    let (pts, signs) = vertices(&path, params);
    let err = normalize_angle(from.theta - chord_heading(pts[0], pts[1], signs[0]));
    Some((err, pts, signs))
}

fn chord_heading(a: Point, b: Point, sign: f64) -> f64 {
    let h = (b.y - a.y).atan2(b.x - a.x);
    if sign < 0.0 {
        normalize_angle(h + std::f64::consts::PI)
    } else {
        h
    }
}

fn shot_with_margin(from: &Pose, goal: &Pose, params: &AgentParams, margin: f64) -> Option<EulerShot> {
    let radius = params.r_min() * margin;
    // Secant iteration on the first-chord error; the error falls by about
    // one radian per radian of virtual heading.
    let mut psi_prev = from.theta;
    let (mut err_prev, mut pts, mut signs) = first_chord_error(from, goal, psi_prev, radius, params)?;
    let mut psi = normalize_angle(psi_prev + err_prev);
    let mut converged = err_prev.abs() < HEADING_TOL;
    for _ in 0..SECANT_ITERS {
        if converged {
            break;
        }
        let (err, p, s) = first_chord_error(from, goal, psi, radius, params)?;
        (pts, signs) = (p, s);
        if err.abs() < HEADING_TOL {
            converged = true;
            break;
        }
        let slope = (err - err_prev) / normalize_angle(psi - psi_prev);
        let next = if slope.is_finite() && slope < -0.2 { psi - err / slope } else { psi + err };
        (psi_prev, err_prev) = (psi, err);
        psi = normalize_angle(next);
    }
    if !converged {
        return None;
    }

    let n = signs.len();
    let mut headings: Vec<f64> = (0..n).map(|i| chord_heading(pts[i], pts[i + 1], signs[i])).collect();
    headings.push(goal.theta);

    let mut controls = Vec::with_capacity(n);
    for i in 0..n {
        let ds = signs[i] * pts[i].dist(pts[i + 1]);
        let turn = normalize_angle(headings[i + 1] - headings[i]);
        let c = Control {
            v: ds / params.ts,
            phi: (turn * params.wheelbase / ds).atan(),
        };
        // Strict limits: shots must not lean on the validator's slack.
        if c.v > params.v_forward_max || c.v < params.v_backward_max || c.phi.abs() > params.phi_max {
            return None;
        }
        controls.push(c);
    }

    let mut states = Vec::with_capacity(n);
    let mut s = *from;
    for c in &controls {
        s = integrate(&s, *c, params);
        states.push(s);
    }
    let last = states.last()?;
    (last.dist(goal) <= LANDING_TOL && last.heading_diff(goal) <= LANDING_TOL).then_some(EulerShot { controls, states })
}

/// Builds an Euler-consistent shot from `from` to `goal`, or `None` if no
/// tried discretisation respects the speed and steering limits.
pub fn euler_shot(from: &Pose, goal: &Pose, params: &AgentParams) -> Option<EulerShot> {
    RADIUS_MARGINS
        .iter()
        .find_map(|&m| shot_with_margin(from, goal, params, m))
}
