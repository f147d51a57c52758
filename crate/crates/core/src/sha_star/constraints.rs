use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::geometry::{rects_overlap, OrientedRect, Point};

/// Inclusive timestep window. `hi == None` extends forever.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub lo: usize,
    pub hi: Option<usize>,
}

impl TimeWindow {
    pub fn new(lo: usize, hi: usize) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi: Some(hi) }
    }

    pub fn from(lo: usize) -> Self {
        Self { lo, hi: None }
    }

    /// `[t - delta, t + delta]`, clamped at zero.
    pub fn around(t: usize, delta: usize) -> Self {
        Self::new(t.saturating_sub(delta), t + delta)
    }

    pub fn contains(&self, t: usize) -> bool {
        t >= self.lo && self.hi.is_none_or(|hi| t <= hi)
    }

    /// True if any timestep `>= t` lies in the window.
    pub fn reaches(&self, t: usize) -> bool {
        self.hi.is_none_or(|hi| hi >= t)
    }
}

/// Forbids `agent`'s footprint from touching `region` during `window`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub agent: usize,
    pub region: OrientedRect,
    pub window: TimeWindow,
}

impl Constraint {
    pub fn is_violated_by(&self, body: &OrientedRect, t: usize) -> bool {
        self.window.contains(t) && rects_overlap(body, &self.region)
    }
}

struct Entry {
    region: OrientedRect,
    center: Point,
    reach: f64,
    window: TimeWindow,
}

impl Entry {
    fn hits(&self, body: &OrientedRect, body_center: Point, body_reach: f64) -> bool {
        body_center.dist(self.center) <= body_reach + self.reach && rects_overlap(body, &self.region)
    }
}

/// Time-indexed view of one agent's constraint set.
pub(crate) struct ConstraintTable {
    entries: Vec<Entry>,
    by_time: FxHashMap<usize, Vec<u32>>,
    open_ended: Vec<u32>,
    horizon: usize,
}

impl ConstraintTable {
    pub fn new<'a>(constraints: impl IntoIterator<Item = &'a Constraint>) -> Self {
        let mut table = Self {
            entries: Vec::new(),
            by_time: FxHashMap::default(),
            open_ended: Vec::new(),
            horizon: 0,
        };
        for c in constraints {
            let id = table.entries.len() as u32;
            table.entries.push(Entry {
                region: c.region,
                center: c.region.center(),
                reach: c.region.circumradius(),
                window: c.window,
            });
            match c.window.hi {
                Some(hi) => {
                    for t in c.window.lo..=hi {
                        table.by_time.entry(t).or_default().push(id);
                    }
                    table.horizon = table.horizon.max(hi);
                }
                None => {
                    table.open_ended.push(id);
                    table.horizon = table.horizon.max(c.window.lo);
                }
            }
        }
        table
    }

    /// Last timestep at which the constraint picture can still change.
    /// From `horizon + 1` on, the set of active constraints is fixed.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn violated(&self, body: &OrientedRect, t: usize) -> bool {
        if self.entries.is_empty() {
            return false;
        }
        let center = body.center();
        let reach = body.circumradius();
        let timed = self.by_time.get(&t).map(Vec::as_slice).unwrap_or(&[]);
        timed
            .iter()
            .chain(self.open_ended.iter().filter(|&&i| self.entries[i as usize].window.lo <= t))
            .any(|&i| self.entries[i as usize].hits(body, center, reach))
    }

    /// First timestep from which `body` could stay put forever, or `None`
    /// if an open-ended constraint covers it.
    pub fn earliest_parking(&self, body: &OrientedRect) -> Option<usize> {
        let center = body.center();
        let reach = body.circumradius();
        let mut from = 0;
        for e in self.entries.iter().filter(|e| e.hits(body, center, reach)) {
            from = from.max(e.window.hi? + 1);
        }
        Some(from)
    }

    /// Whether a body parked from `t` onwards would ever violate a constraint.
    pub fn blocks_parking(&self, body: &OrientedRect, t: usize) -> bool {
        let center = body.center();
        let reach = body.circumradius();
        self.entries
            .iter()
            .any(|e| e.window.reaches(t) && e.hits(body, center, reach))
    }
}
