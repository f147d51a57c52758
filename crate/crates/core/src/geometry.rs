//! Continuous-plane primitives: poses, oriented rectangular footprints,
//! circular obstacles and closed-set overlap predicates.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("inflation coefficient must be >= 1, got {0}")]
    InflationBelowOne(f64),
    #[error("invalid rectangle extents: front={front}, rear={rear}, width={width}")]
    InvalidExtents { front: f64, rear: f64, width: f64 },
    #[error("circle radius must be positive, got {0}")]
    InvalidRadius(f64),
}

/// Wraps an angle into (-pi, pi].
pub fn normalize_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

/// Robot configuration: rear-axle position and heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    /// Builds a pose, wrapping `theta` into (-pi, pi].
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn dist(&self, other: &Pose) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Absolute wrapped heading difference in [0, pi].
    pub fn heading_diff(&self, other: &Pose) -> f64 {
        normalize_angle(self.theta - other.theta).abs()
    }

    /// Maps a point given in this pose's body frame to the world frame.
    pub fn to_world(&self, local: Point) -> Point {
        let (s, c) = self.theta.sin_cos();
        Point::new(
            self.x + c * local.x - s * local.y,
            self.y + s * local.x + c * local.y,
        )
    }

    /// Maps a world point into this pose's body frame.
    pub fn to_local(&self, world: Point) -> Point {
        let (s, c) = self.theta.sin_cos();
        let dx = world.x - self.x;
        let dy = world.y - self.y;
        Point::new(c * dx + s * dy, -s * dx + c * dy)
    }
}

/// Agent body extents relative to the rear axle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    /// Rear axle to front bumper.
    pub front: f64,
    /// Rear axle to rear bumper.
    pub rear: f64,
    pub width: f64,
}

impl Footprint {
    pub fn new(front: f64, rear: f64, width: f64) -> Result<Self, GeometryError> {
        let valid = front > 0.0 && rear >= 0.0 && width > 0.0;
        if !valid || !(front + rear + width).is_finite() {
            return Err(GeometryError::InvalidExtents { front, rear, width });
        }
        Ok(Self { front, rear, width })
    }

    pub fn at(&self, pose: Pose) -> OrientedRect {
        OrientedRect {
            pose,
            front: self.front,
            rear: self.rear,
            width: self.width,
        }
    }

    /// Radius of the smallest circle about the rear axle containing the body.
    pub fn bounding_radius(&self) -> f64 {
        self.front.max(self.rear).hypot(self.width / 2.0)
    }
}

/// Oriented rectangle anchored at a rear-axle pose. The body spans `rear`
/// behind and `front` ahead of the anchor along the heading, and `width`
/// split evenly on either side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedRect {
    pub pose: Pose,
    pub front: f64,
    pub rear: f64,
    pub width: f64,
}

impl OrientedRect {
    pub fn new(pose: Pose, front: f64, rear: f64, width: f64) -> Result<Self, GeometryError> {
        let fp = Footprint::new(front, rear, width)?;
        Ok(fp.at(pose))
    }

    /// Corners in counterclockwise order starting at front-right.
    pub fn corners(&self) -> [Point; 4] {
        let hw = self.width / 2.0;
        [
            Point::new(self.front, -hw),
            Point::new(self.front, hw),
            Point::new(-self.rear, hw),
            Point::new(-self.rear, -hw),
        ]
        .map(|p| self.pose.to_world(p))
    }

    pub fn center(&self) -> Point {
        self.pose
            .to_world(Point::new((self.front - self.rear) / 2.0, 0.0))
    }

    /// Half the diagonal; every point of the rectangle is within this
    /// distance of [`center`](Self::center).
    pub fn circumradius(&self) -> f64 {
        ((self.front + self.rear) / 2.0).hypot(self.width / 2.0)
    }

    /// Scales all three extents by `k` about the same anchor pose.
    pub fn inflate(&self, k: f64) -> Result<OrientedRect, GeometryError> {
        if !(k >= 1.0) {
            return Err(GeometryError::InflationBelowOne(k));
        }
        Ok(OrientedRect {
            pose: self.pose,
            front: self.front * k,
            rear: self.rear * k,
            width: self.width * k,
        })
    }

    /// Closed-set containment test.
    pub fn contains(&self, p: Point) -> bool {
        let l = self.pose.to_local(p);
        l.x >= -self.rear && l.x <= self.front && l.y.abs() <= self.width / 2.0
    }

    /// Distance from `p` to the closed rectangle (zero inside).
    pub fn distance_to(&self, p: Point) -> f64 {
        let l = self.pose.to_local(p);
        let cx = l.x.clamp(-self.rear, self.front);
        let cy = l.y.clamp(-self.width / 2.0, self.width / 2.0);
        (l.x - cx).hypot(l.y - cy)
    }

    fn axes(&self) -> [Point; 2] {
        let (s, c) = self.pose.theta.sin_cos();
        [Point::new(c, s), Point::new(-s, c)]
    }
}

fn project(corners: &[Point; 4], axis: Point) -> (f64, f64) {
    corners.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
        let d = c.dot(axis);
        (lo.min(d), hi.max(d))
    })
}

/// Separating-axis overlap test. Touching boundaries count as overlap.
pub fn rects_overlap(a: &OrientedRect, b: &OrientedRect) -> bool {
    let reach = a.circumradius() + b.circumradius();
    if a.center().dist(b.center()) > reach {
        return false;
    }
    let ca = a.corners();
    let cb = b.corners();
    for axis in a.axes().into_iter().chain(b.axes()) {
        let (alo, ahi) = project(&ca, axis);
        let (blo, bhi) = project(&cb, axis);
        if ahi < blo || bhi < alo {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleObstacle {
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
}

impl CircleObstacle {
    pub fn new(cx: f64, cy: f64, radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0) {
            return Err(GeometryError::InvalidRadius(radius));
        }
        Ok(Self { cx, cy, radius })
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }
}

/// True iff the circle reaches the closed rectangle.
pub fn rect_circle_overlap(r: &OrientedRect, c: &CircleObstacle) -> bool {
    r.distance_to(c.center()) <= c.radius
}

/// Axis-aligned map bounds `[0, width] x [0, height]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapBounds {
    pub width: f64,
    pub height: f64,
}

impl MapBounds {
    pub fn contains_point(&self, p: Point) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }

    pub fn contains_rect(&self, r: &OrientedRect) -> bool {
        r.corners().iter().all(|&c| self.contains_point(c))
    }
}

/// Static environment: map bounds plus circular obstacles, bucketed on a
/// uniform grid for footprint queries.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub bounds: MapBounds,
    obstacles: Vec<CircleObstacle>,
    cell: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<u32>>,
}

impl Workspace {
    pub fn new(bounds: MapBounds, obstacles: Vec<CircleObstacle>) -> Self {
        let cell = 5.0;
        let cols = ((bounds.width / cell).ceil() as usize).max(1);
        let rows = ((bounds.height / cell).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); cols * rows];
        let mut ws = Self { bounds, obstacles: Vec::new(), cell, cols, rows, buckets: Vec::new() };
        for (i, o) in obstacles.iter().enumerate() {
            let (c0, c1, r0, r1) = ws.cell_range(o.cx - o.radius, o.cx + o.radius, o.cy - o.radius, o.cy + o.radius);
            for r in r0..=r1 {
                for c in c0..=c1 {
                    buckets[r * cols + c].push(i as u32);
                }
            }
        }
        ws.obstacles = obstacles;
        ws.buckets = buckets;
        ws
    }

    pub fn obstacles(&self) -> &[CircleObstacle] {
        &self.obstacles
    }

    fn cell_range(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> (usize, usize, usize, usize) {
        let clamp = |v: f64, n: usize| ((v / self.cell).floor().max(0.0) as usize).min(n - 1);
        (clamp(x0, self.cols), clamp(x1, self.cols), clamp(y0, self.rows), clamp(y1, self.rows))
    }

    /// True iff the footprint lies inside the map and touches no obstacle.
    pub fn is_free(&self, r: &OrientedRect) -> bool {
        let corners = r.corners();
        if !corners.iter().all(|&c| self.bounds.contains_point(c)) {
            return false;
        }
        let (x0, x1, y0, y1) = corners.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), p| (a.min(p.x), b.max(p.x), c.min(p.y), d.max(p.y)),
        );
        let (c0, c1, r0, r1) = self.cell_range(x0, x1, y0, y1);
        for row in r0..=r1 {
            for col in c0..=c1 {
                for &i in &self.buckets[row * self.cols + col] {
                    if rect_circle_overlap(r, &self.obstacles[i as usize]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}
