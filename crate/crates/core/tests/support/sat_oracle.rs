//! Brute-force body conflict search. Corners, projections and the timestep
//! scan are written from scratch and test every edge normal of both boxes.

type V = (f64, f64);

pub struct Body {
    pub front: f64,
    pub rear: f64,
    pub width: f64,
}

pub fn corners(b: &Body, (x, y, th): (f64, f64, f64)) -> [V; 4] {
    let (s, c) = th.sin_cos();
    let h = b.width / 2.0;
    let local = [(b.front, h), (-b.rear, h), (-b.rear, -h), (b.front, -h)];
    local.map(|(u, v)| (x + u * c - v * s, y + u * s + v * c))
}

fn span(poly: &[V; 4], axis: V) -> (f64, f64) {
    let d: Vec<f64> = poly.iter().map(|p| p.0 * axis.0 + p.1 * axis.1).collect();
    (d.iter().cloned().fold(f64::INFINITY, f64::min), d.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

/// Closed boxes touch unless some edge normal separates them strictly.
pub fn boxes_touch(a: &[V; 4], b: &[V; 4]) -> bool {
    for poly in [a, b] {
        for k in 0..4 {
            let (p, q) = (poly[k], poly[(k + 1) % 4]);
            let axis = (p.1 - q.1, q.0 - p.0);
            let (a0, a1) = span(a, axis);
            let (b0, b1) = span(b, axis);
            if a1 < b0 || b1 < a0 {
                return false;
            }
        }
    }
    true
}

/// Earliest `(t, i, j)` at which two bodies touch, padding short paths with
/// their last pose.
pub fn first_conflict(body: &Body, paths: &[Vec<(f64, f64, f64)>]) -> Option<(usize, usize, usize)> {
    let end = paths.iter().map(|p| p.len()).max()?;
    for t in 0..end {
        let at: Vec<[V; 4]> = paths.iter().map(|p| corners(body, p[t.min(p.len() - 1)])).collect();
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                if boxes_touch(&at[i], &at[j]) {
                    return Some((t, i, j));
                }
            }
        }
    }
    None
}
