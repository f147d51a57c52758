//! Shortest Reeds-Shepp curves.
//!
//! Candidate words are produced by the closed-form solutions for the five
//! base families (CSC, CCC, CCCC, CCSC, CCSCC); time-flip, reflection and
//! reversal symmetries cover the full 48-word set. All formulas work on a
//! unit turning radius in the start frame.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::geometry::{normalize_angle, Pose};

const ZERO: f64 = 10.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Steer {
    Left,
    Straight,
    Right,
}

/// One constant-curvature piece. `length` is signed arc length in meters;
/// negative means driving backwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsSegment {
    pub steer: Steer,
    pub length: f64,
}

impl RsSegment {
    /// Signed curvature for this steer at turning radius `radius`.
    pub fn curvature(&self, radius: f64) -> f64 {
        match self.steer {
            Steer::Left => 1.0 / radius,
            Steer::Straight => 0.0,
            Steer::Right => -1.0 / radius,
        }
    }

    pub fn is_backward(&self) -> bool {
        self.length < 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReedsSheppPath {
    pub start: Pose,
    pub radius: f64,
    pub segments: Vec<RsSegment>,
}

impl ReedsSheppPath {
    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.length.abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Number of direction switches (cusps).
    pub fn reversals(&self) -> usize {
        self.segments
            .windows(2)
            .filter(|w| w[0].is_backward() != w[1].is_backward())
            .count()
    }

    pub fn end_pose(&self) -> Pose {
        self.segments
            .iter()
            .fold(self.start, |p, seg| advance(&p, seg.steer, seg.length, self.radius))
    }

    /// Pose after travelling arc length `s` (clamped to the path) from the start.
    pub fn pose_at(&self, s: f64) -> Pose {
        let mut remaining = s.max(0.0);
        let mut pose = self.start;
        for seg in &self.segments {
            let len = seg.length.abs();
            if remaining <= len {
                return advance(&pose, seg.steer, remaining.copysign(seg.length), self.radius);
            }
            pose = advance(&pose, seg.steer, seg.length, self.radius);
            remaining -= len;
        }
        pose
    }
}

/// Exact motion along a circle of the given radius (or a straight line).
pub(crate) fn advance(p: &Pose, steer: Steer, signed_len: f64, radius: f64) -> Pose {
    let th = p.theta;
    match steer {
        Steer::Straight => Pose::new(p.x + signed_len * th.cos(), p.y + signed_len * th.sin(), th),
        Steer::Left => {
            let d = signed_len / radius;
            Pose::new(
                p.x + radius * ((th + d).sin() - th.sin()),
                p.y + radius * (th.cos() - (th + d).cos()),
                th + d,
            )
        }
        Steer::Right => {
            let d = signed_len / radius;
            Pose::new(
                p.x + radius * (th.sin() - (th - d).sin()),
                p.y + radius * ((th - d).cos() - th.cos()),
                th - d,
            )
        }
    }
}

/// Samples `path` every `v * ts` meters of arc length, always including both
/// end poses.
pub fn sample_rs_path(path: &ReedsSheppPath, ts: f64, v: f64) -> Vec<Pose> {
    let total = path.length();
    let ds = v * ts;
    let n = ((total / ds) - 1e-9).ceil().max(0.0) as usize;
    let mut out: Vec<Pose> = (0..n).map(|i| path.pose_at(i as f64 * ds)).collect();
    out.push(path.end_pose());
    out
}

fn mod2pi(x: f64) -> f64 {
    // Arguments are sums of a few angles; stepping is much cheaper than fmod.
    if x.abs() <= 4.0 * TAU {
        let mut v = x;
        while v > PI {
            v -= TAU;
        }
        while v < -PI {
            v += TAU;
        }
        return v;
    }
    let v = x % TAU;
    if v < -PI {
        v + TAU
    } else if v > PI {
        v - TAU
    } else {
        v
    }
}

fn polar(x: f64, y: f64) -> (f64, f64) {
    ((x * x + y * y).sqrt(), y.atan2(x))
}

fn tau_omega(u: f64, v: f64, xi: f64, eta: f64, phi: f64) -> (f64, f64) {
    let delta = mod2pi(u - v);
    let a = u.sin() - delta.sin();
    let b = u.cos() - delta.cos() - 1.0;
    let t1 = (eta * a - xi * b).atan2(xi * a + eta * b);
    let t2 = 2.0 * (delta.cos() - v.cos() - u.cos()) + 3.0;
    let tau = if t2 < 0.0 { mod2pi(t1 + PI) } else { mod2pi(t1) };
    (tau, mod2pi(tau - u + v - phi))
}

/// Goal pose in the unit-radius start frame, with the heading's sine and
/// cosine computed once.
#[derive(Clone, Copy)]
struct Goal {
    x: f64,
    y: f64,
    phi: f64,
    sin: f64,
    cos: f64,
}

type Tuv = (f64, f64, f64);

fn lp_sp_lp(g: &Goal) -> Option<Tuv> {
    let (u, t) = polar(g.x - g.sin, g.y - 1.0 + g.cos);
    if t >= -ZERO {
        let v = mod2pi(g.phi - t);
        if v >= -ZERO {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_sp_rp(g: &Goal) -> Option<Tuv> {
    let (u1, t1) = polar(g.x + g.sin, g.y - 1.0 - g.cos);
    let u1 = u1 * u1;
    if u1 >= 4.0 {
        let u = (u1 - 4.0).sqrt();
        let theta = 2f64.atan2(u);
        let t = mod2pi(t1 + theta);
        let v = mod2pi(t - g.phi);
        if t >= -ZERO && v >= -ZERO {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_rm_l(g: &Goal) -> Option<Tuv> {
    let (u1, theta) = polar(g.x - g.sin, g.y - 1.0 + g.cos);
    if u1 <= 4.0 {
        let u = -2.0 * (0.25 * u1).asin();
        let t = mod2pi(theta + 0.5 * u + PI);
        let v = mod2pi(g.phi - t + u);
        if t >= -ZERO && u <= ZERO {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_rup_lum_rm(g: &Goal) -> Option<Tuv> {
    let xi = g.x + g.sin;
    let eta = g.y - 1.0 - g.cos;
    let rho = 0.25 * (2.0 + xi.hypot(eta));
    if rho <= 1.0 {
        let u = rho.acos();
        let (t, v) = tau_omega(u, -u, xi, eta, g.phi);
        if t >= -ZERO && v <= ZERO {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_rum_lum_rp(g: &Goal) -> Option<Tuv> {
    let xi = g.x + g.sin;
    let eta = g.y - 1.0 - g.cos;
    let rho = (20.0 - xi * xi - eta * eta) / 16.0;
    if (0.0..=1.0).contains(&rho) {
        let u = -rho.acos();
        if u >= -FRAC_PI_2 {
            let (t, v) = tau_omega(u, u, xi, eta, g.phi);
            if t >= -ZERO && v >= -ZERO {
                return Some((t, u, v));
            }
        }
    }
    None
}

fn lp_rm_sm_lm(g: &Goal) -> Option<Tuv> {
    let (rho, theta) = polar(g.x - g.sin, g.y - 1.0 + g.cos);
    if rho >= 2.0 {
        let r = (rho * rho - 4.0).sqrt();
        let u = 2.0 - r;
        let t = mod2pi(theta + r.atan2(-2.0));
        let v = mod2pi(g.phi - FRAC_PI_2 - t);
        if t >= -ZERO && u <= ZERO && v <= ZERO {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_rm_sm_rm(g: &Goal) -> Option<Tuv> {
    let xi = g.x + g.sin;
    let eta = g.y - 1.0 - g.cos;
    let (rho, theta) = polar(-eta, xi);
    if rho >= 2.0 {
        let t = theta;
        let u = 2.0 - rho;
        let v = mod2pi(t + FRAC_PI_2 - g.phi);
        if t >= -ZERO && u <= ZERO && v <= ZERO {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_rm_s_lm_rp(g: &Goal) -> Option<Tuv> {
    let xi = g.x + g.sin;
    let eta = g.y - 1.0 - g.cos;
    let rho = xi.hypot(eta);
    if rho >= 2.0 {
        let u = 4.0 - (rho * rho - 4.0).sqrt();
        if u <= ZERO {
            let t = mod2pi(((4.0 - u) * xi - 2.0 * eta).atan2(-2.0 * xi + (u - 4.0) * eta));
            let v = mod2pi(t - g.phi);
            if t >= -ZERO && v >= -ZERO {
                return Some((t, u, v));
            }
        }
    }
    None
}

use Steer::{Left as L, Right as R, Straight as S};

/// Unit-radius candidate: steer word plus signed lengths (first `n` used).
#[derive(Clone, Copy)]
struct Candidate {
    word: [Steer; 5],
    lengths: [f64; 5],
    n: usize,
}

impl Candidate {
    fn length(&self) -> f64 {
        self.lengths[..self.n].iter().map(|l| l.abs()).sum()
    }
}

fn reflect(s: Steer) -> Steer {
    match s {
        L => R,
        R => L,
        S => S,
    }
}

/// The four symmetric variants of a base formula: identity, time-flip,
/// reflection, and both. `build` maps the solved (t, u, v) to lengths.
fn symmetric(
    emit: &mut impl FnMut(&Candidate),
    g: &Goal,
    word: &[Steer],
    solve: fn(&Goal) -> Option<Tuv>,
    build: fn(Tuv) -> [f64; 5],
) {
    let n = word.len();
    let mut plain = [S; 5];
    plain[..n].copy_from_slice(word);
    let mirrored = plain.map(reflect);
    let variants = [
        (*g, plain, 1.0),
        (Goal { x: -g.x, phi: -g.phi, sin: -g.sin, ..*g }, plain, -1.0),
        (Goal { y: -g.y, phi: -g.phi, sin: -g.sin, ..*g }, mirrored, 1.0),
        (Goal { x: -g.x, y: -g.y, ..*g }, mirrored, -1.0),
    ];
    for (goal, word, sign) in variants {
        if let Some(s) = solve(&goal) {
            emit(&Candidate { word, lengths: build(s).map(|l| l * sign), n });
        }
    }
}

fn for_each_candidate(x: f64, y: f64, phi: f64, mut emit: impl FnMut(&Candidate)) {
    let (sin, cos) = phi.sin_cos();
    let g = Goal { x, y, phi, sin, cos };
    // CCC and CCSC reversed in time run backwards from the goal.
    let gb = Goal { x: x * cos + y * sin, y: x * sin - y * cos, ..g };
    let e = &mut emit;
    // CSC
    symmetric(e, &g, &[L, S, L], lp_sp_lp, |(t, u, v)| [t, u, v, 0.0, 0.0]);
    symmetric(e, &g, &[L, S, R], lp_sp_rp, |(t, u, v)| [t, u, v, 0.0, 0.0]);

    // CCC, forwards and backwards
    symmetric(e, &g, &[L, R, L], lp_rm_l, |(t, u, v)| [t, u, v, 0.0, 0.0]);
    symmetric(e, &gb, &[L, R, L], lp_rm_l, |(t, u, v)| [v, u, t, 0.0, 0.0]);

    // CCCC
    symmetric(e, &g, &[L, R, L, R], lp_rup_lum_rm, |(t, u, v)| [t, u, -u, v, 0.0]);
    symmetric(e, &g, &[L, R, L, R], lp_rum_lum_rp, |(t, u, v)| [t, u, u, v, 0.0]);

    // CCSC and its reversal CSCC
    symmetric(e, &g, &[L, R, S, L], lp_rm_sm_lm, |(t, u, v)| [t, -FRAC_PI_2, u, v, 0.0]);
    symmetric(e, &g, &[L, R, S, R], lp_rm_sm_rm, |(t, u, v)| [t, -FRAC_PI_2, u, v, 0.0]);
    symmetric(e, &gb, &[L, S, R, L], lp_rm_sm_lm, |(t, u, v)| [v, u, -FRAC_PI_2, t, 0.0]);
    symmetric(e, &gb, &[R, S, R, L], lp_rm_sm_rm, |(t, u, v)| [v, u, -FRAC_PI_2, t, 0.0]);

    // CCSCC
    symmetric(e, &g, &[L, R, S, L, R], lp_rm_s_lm_rp, |(t, u, v)| [t, -FRAC_PI_2, u, -FRAC_PI_2, v]);
}

fn unit_goal(start: &Pose, goal: &Pose, r_min: f64) -> (f64, f64, f64) {
    let local = start.to_local(goal.position());
    (local.x / r_min, local.y / r_min, normalize_angle(goal.theta - start.theta))
}

/// Shortest Reeds-Shepp path from `start` to `goal` at turning radius `r_min`.
///
/// Equal-length candidates prefer fewer cusps, then fewer segments.
pub fn reeds_shepp(start: &Pose, goal: &Pose, r_min: f64) -> ReedsSheppPath {
    let (x, y, phi) = unit_goal(start, goal, r_min);
    let mut best: Option<((f64, usize, usize), Candidate)> = None;
    for_each_candidate(x, y, phi, |cand| {
        let used = || cand.lengths[..cand.n].iter().filter(|l| l.abs() > 1e-12);
        let segments = used().count();
        let reversals = used()
            .zip(used().skip(1))
            .filter(|(a, b)| (**a < 0.0) != (**b < 0.0))
            .count();
        let key = (cand.length() * r_min, reversals, segments);
        let better = match &best {
            None => true,
            Some(((len, rev, n), _)) => {
                let tol = 1e-9 * (1.0 + len);
                key.0 < len - tol || (key.0 <= len + tol && (key.1, key.2) < (*rev, *n))
            }
        };
        if better {
            best = Some((key, *cand));
        }
    });
    let (_, cand) = best.expect("a Reeds-Shepp path exists between any two poses");
    let segments = cand.word[..cand.n]
        .iter()
        .zip(&cand.lengths[..cand.n])
        .filter(|(_, l)| l.abs() > 1e-12)
        .map(|(&steer, &l)| RsSegment { steer, length: l * r_min })
        .collect();
    ReedsSheppPath { start: *start, radius: r_min, segments }
}

/// Length of the shortest Reeds-Shepp path, without building it.
pub fn reeds_shepp_length(start: &Pose, goal: &Pose, r_min: f64) -> f64 {
    let (x, y, phi) = unit_goal(start, goal, r_min);
    let mut best = f64::INFINITY;
    for_each_candidate(x, y, phi, |cand| best = best.min(cand.length()));
    best * r_min
}
