//! Brute-force Reeds-Shepp minimiser used as an independent oracle.
//!
//! Every one of the 48 Reeds-Shepp words is written down explicitly (nine
//! base families expanded by time-flip and reflection). For each word the
//! three free segment lengths are found numerically with a damped Newton
//! solve from a grid of starting points; the shortest valid solution over
//! all words is the optimum. Nothing here touches the closed-form code.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

#[derive(Clone, Copy, PartialEq, Debug)]
enum Turn {
    L,
    R,
    S,
}

#[derive(Clone, Copy, Debug)]
enum Len {
    Var(usize),
    HalfPi,
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    turn: Turn,
    dir: f64,
    len: Len,
}

fn word(spec: &[(Turn, f64, Len)]) -> Vec<Piece> {
    spec.iter().map(|&(turn, dir, len)| Piece { turn, dir, len }).collect()
}

fn base_words() -> Vec<Vec<Piece>> {
    use Len::*;
    use Turn::*;
    let (p, m) = (1.0, -1.0);
    vec![
        // C|C|C
        word(&[(L, p, Var(0)), (R, m, Var(1)), (L, p, Var(2))]),
        // CC|C
        word(&[(L, p, Var(0)), (R, p, Var(1)), (L, m, Var(2))]),
        // C|CC
        word(&[(L, p, Var(0)), (R, m, Var(1)), (L, m, Var(2))]),
        // CSC
        word(&[(L, p, Var(0)), (S, p, Var(1)), (L, p, Var(2))]),
        word(&[(L, p, Var(0)), (S, p, Var(1)), (R, p, Var(2))]),
        // CCu|CuC
        word(&[(L, p, Var(0)), (R, p, Var(1)), (L, m, Var(1)), (R, m, Var(2))]),
        // C|CuCu|C
        word(&[(L, p, Var(0)), (R, m, Var(1)), (L, m, Var(1)), (R, p, Var(2))]),
        // C|C(pi/2)SC
        word(&[(L, p, Var(0)), (R, m, HalfPi), (S, m, Var(1)), (L, m, Var(2))]),
        word(&[(L, p, Var(0)), (R, m, HalfPi), (S, m, Var(1)), (R, m, Var(2))]),
        // CSC(pi/2)|C
        word(&[(L, p, Var(0)), (S, p, Var(1)), (R, p, HalfPi), (L, m, Var(2))]),
        word(&[(L, p, Var(0)), (S, p, Var(1)), (L, p, HalfPi), (R, m, Var(2))]),
        // C|C(pi/2)SC(pi/2)|C
        word(&[(L, p, Var(0)), (R, m, HalfPi), (S, m, Var(1)), (L, m, HalfPi), (R, p, Var(2))]),
    ]
}

fn all_words() -> Vec<Vec<Piece>> {
    let mut out = Vec::new();
    for w in base_words() {
        for flip in [false, true] {
            for refl in [false, true] {
                out.push(
                    w.iter()
                        .map(|pc| Piece {
                            turn: match (pc.turn, refl) {
                                (Turn::L, true) => Turn::R,
                                (Turn::R, true) => Turn::L,
                                (t, _) => t,
                            },
                            dir: if flip { -pc.dir } else { pc.dir },
                            len: pc.len,
                        })
                        .collect(),
                );
            }
        }
    }
    out
}

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Integrates a word on the unit circle from the origin, heading 0.
fn endpoint(w: &[Piece], vars: &[f64; 3]) -> [f64; 3] {
    let (mut x, mut y, mut th) = (0.0f64, 0.0f64, 0.0f64);
    for pc in w {
        let mag = match pc.len {
            Len::Var(i) => vars[i],
            Len::HalfPi => FRAC_PI_2,
        };
        let s = pc.dir * mag;
        match pc.turn {
            Turn::S => {
                x += s * th.cos();
                y += s * th.sin();
            }
            Turn::L => {
                // centre of curvature on the left
                let (cx, cy) = (x - th.sin(), y + th.cos());
                th += s;
                x = cx + th.sin();
                y = cy - th.cos();
            }
            Turn::R => {
                let (cx, cy) = (x + th.sin(), y - th.cos());
                th -= s;
                x = cx - th.sin();
                y = cy + th.cos();
            }
        }
    }
    [x, y, th]
}

fn residual(w: &[Piece], vars: &[f64; 3], goal: &[f64; 3]) -> [f64; 3] {
    let e = endpoint(w, vars);
    [e[0] - goal[0], e[1] - goal[1], wrap(e[2] - goal[2])]
}

fn norm(r: &[f64; 3]) -> f64 {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        *o = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
            / det;
    }
    Some(out)
}

/// Levenberg-Marquardt on the three segment magnitudes.
fn newton(w: &[Piece], start: [f64; 3], goal: &[f64; 3]) -> Option<[f64; 3]> {
    let mut v = start;
    let mut r = residual(w, &v, goal);
    let mut lambda = 1e-3;
    for _ in 0..60 {
        if norm(&r) < 1e-12 {
            break;
        }
        let h = 1e-7;
        let mut jac = [[0.0; 3]; 3];
        for k in 0..3 {
            let mut vp = v;
            vp[k] += h;
            let rp = residual(w, &vp, goal);
            for i in 0..3 {
                jac[i][k] = (rp[i] - r[i]) / h;
            }
        }
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for a in 0..3 {
            for b in 0..3 {
                jtj[a][b] = (0..3).map(|i| jac[i][a] * jac[i][b]).sum();
            }
            jtr[a] = -(0..3).map(|i| jac[i][a] * r[i]).sum::<f64>();
        }
        let mut improved = false;
        for _ in 0..8 {
            let mut damped = jtj;
            for (d, row) in damped.iter_mut().enumerate() {
                row[d] += lambda * (1.0 + jtj[d][d]);
            }
            let Some(delta) = solve3(damped, jtr) else { break };
            let cand = [v[0] + delta[0], v[1] + delta[1], v[2] + delta[2]];
            let rc = residual(w, &cand, goal);
            if norm(&rc) < norm(&r) {
                v = cand;
                r = rc;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (norm(&r) < 1e-9).then_some(v)
}

fn word_length(w: &[Piece], v: &[f64; 3]) -> f64 {
    w.iter()
        .map(|pc| match pc.len {
            Len::Var(i) => v[i],
            Len::HalfPi => FRAC_PI_2,
        })
        .sum()
}

/// Shortest Reeds-Shepp length from (0, 0, 0) to `(x, y, phi)`, unit radius.
pub fn brute_force_unit(x: f64, y: f64, phi: f64) -> f64 {
    let goal = [x, y, phi];
    let d = x.hypot(y);
    let arcs = [0.0, 1.1, 2.3, 3.7];
    let lines = [0.0, d, d + 3.0];
    let mut best = f64::INFINITY;
    for w in all_words() {
        let straight_var = w
            .iter()
            .find(|pc| pc.turn == Turn::S)
            .and_then(|pc| match pc.len {
                Len::Var(i) => Some(i),
                Len::HalfPi => None,
            });
        let grid = |i: usize| -> &[f64] {
            if Some(i) == straight_var {
                &lines
            } else {
                &arcs
            }
        };
        for &a in grid(0) {
            for &b in grid(1) {
                for &c in grid(2) {
                    if let Some(v) = newton(&w, [a, b, c], &goal) {
                        if v.iter().all(|&m| m >= -1e-9) {
                            best = best.min(word_length(&w, &v));
                        }
                    }
                }
            }
        }
    }
    best
}

/// Oracle length between two world poses at turning radius `r`.
pub fn brute_force_length(start: (f64, f64, f64), goal: (f64, f64, f64), r: f64) -> f64 {
    let (s, c) = start.2.sin_cos();
    let dx = goal.0 - start.0;
    let dy = goal.1 - start.1;
    let lx = c * dx + s * dy;
    let ly = -s * dx + c * dy;
    r * brute_force_unit(lx / r, ly / r, wrap(goal.2 - start.2))
}
