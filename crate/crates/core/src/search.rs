//! Baseline best-first searches on the octile lattice: A* and dynamically
//! weighted A*, instrumented with the counters the benchmark reports.
//!
//! Counter definitions:
//! - `expansions`: non-stale states popped from OPEN, the goal pop included.
//! - `peak_storage`: max over time of distinct states in OPEN plus CLOSED.
//! - `pushes`: states inserted into OPEN (a g-improvement of a state already
//!   in OPEN is not an insertion).
//! - `recomputes`: OPEN entries whose f was recomputed after a target change;
//!   always zero here.
//!
//! Ties on f prefer the larger g, then the lexicographically smaller (x, y).
//! CLOSED states are never reopened.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{Environment, Point, MOVES};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicKind {
    #[default]
    Euclidean,
    Chebyshev,
}

impl HeuristicKind {
    pub fn eval(self, s: Point, goal: Point) -> f64 {
        match self {
            HeuristicKind::Euclidean => s.distance(goal),
            HeuristicKind::Chebyshev => (s.x - goal.x).abs().max((s.y - goal.y).abs()) as f64,
        }
    }
}

impl std::str::FromStr for HeuristicKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(HeuristicKind::Euclidean),
            "chebyshev" => Ok(HeuristicKind::Chebyshev),
            other => Err(format!("unknown heuristic `{other}` (expected euclidean|chebyshev)")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub expansions: u64,
    pub peak_storage: u64,
    pub recomputes: u64,
    pub pushes: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub path: Option<Vec<Point>>,
    /// g-cost of the goal when a path was found.
    pub cost: Option<f64>,
    pub stats: SearchStats,
    /// Every expanded state in pop order, the goal last when found.
    pub expanded: Vec<Point>,
}

impl SearchResult {
    pub fn found(&self) -> bool {
        self.path.is_some()
    }

    /// The CLOSED set at termination. The goal is popped but never closed.
    pub fn closed(&self) -> &[Point] {
        match self.path {
            Some(_) => &self.expanded[..self.expanded.len() - 1],
            None => &self.expanded,
        }
    }

    /// A result for a search that never ran.
    pub fn empty() -> Self {
        SearchResult {
            path: None,
            cost: None,
            stats: SearchStats::default(),
            expanded: Vec::new(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("endpoint {0} is blocked or out of bounds")]
    BlockedEndpoint(Point),
    #[error("invalid weight schedule: w0 = {w0}, decay = {decay} (need w0 >= 1 and 0 < decay <= 1)")]
    InvalidWeights { w0: f64, decay: f64 },
    #[error("malformed parent chain: no root reached from {end} within {bound} steps")]
    MalformedParents { end: Point, bound: usize },
}

/// The discretized lattice with obstacle flags rasterized once per search.
///
/// Barriers are axis-aligned with integer coordinates, so a unit lattice move
/// can only touch a barrier at one of its endpoints; move validity therefore
/// reduces to both endpoints being free.
pub(crate) struct Lattice {
    x0: i64,
    y0: i64,
    cols: i64,
    rows: i64,
    blocked: Vec<bool>,
}

impl Lattice {
    pub(crate) fn new(env: &Environment) -> Self {
        let [x0, x1] = env.x_range();
        let [y0, y1] = env.y_range();
        let cols = x1 - x0 + 1;
        let rows = y1 - y0 + 1;
        let mut lattice = Lattice {
            x0,
            y0,
            cols,
            rows,
            blocked: vec![false; (cols * rows) as usize],
        };
        for b in env.barriers() {
            let (a, z) = b.endpoints();
            for x in a.x..=z.x {
                for y in a.y..=z.y {
                    let i = lattice.raw_index(x, y);
                    lattice.blocked[i] = true;
                }
            }
        }
        lattice
    }

    fn raw_index(&self, x: i64, y: i64) -> usize {
        ((y - self.y0) * self.cols + (x - self.x0)) as usize
    }

    pub(crate) fn len(&self) -> usize {
        self.blocked.len()
    }

    pub(crate) fn index(&self, p: Point) -> Option<usize> {
        let inside = p.x >= self.x0
            && p.x < self.x0 + self.cols
            && p.y >= self.y0
            && p.y < self.y0 + self.rows;
        inside.then(|| self.raw_index(p.x, p.y))
    }

    pub(crate) fn point(&self, idx: usize) -> Point {
        let idx = idx as i64;
        Point::new(self.x0 + idx % self.cols, self.y0 + idx / self.cols)
    }

    pub(crate) fn is_free(&self, p: Point) -> bool {
        self.index(p).is_some_and(|i| !self.blocked[i])
    }

    /// Same moves, order, and costs as [`Environment::neighbors`].
    pub(crate) fn neighbors(&self, p: Point) -> impl Iterator<Item = (usize, Point, f64)> + '_ {
        MOVES.iter().filter_map(move |&(dx, dy, cost)| {
            let n = Point::new(p.x + dx, p.y + dy);
            let i = self.index(n)?;
            (!self.blocked[i]).then_some((i, n, cost))
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct OpenEntry {
    pub(crate) f: f64,
    pub(crate) g: f64,
    pub(crate) point: Point,
    pub(crate) idx: usize,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// BinaryHeap pops the greatest entry: lowest f, then highest g, then smallest (x, y).
impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| self.g.total_cmp(&other.g))
            .then_with(|| (other.point.x, other.point.y).cmp(&(self.point.x, self.point.y)))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Unseen,
    Open,
    Closed,
}

const NO_PARENT: usize = usize::MAX;

/// OPEN/CLOSED bookkeeping shared by every search variant.
pub(crate) struct Frontier {
    pub(crate) g: Vec<f64>,
    parent: Vec<usize>,
    pub(crate) status: Vec<Status>,
    pub(crate) heap: BinaryHeap<OpenEntry>,
    open_len: u64,
    closed_len: u64,
    pub(crate) stats: SearchStats,
    pub(crate) expanded: Vec<Point>,
}

impl Frontier {
    pub(crate) fn new(size: usize) -> Self {
        Frontier {
            g: vec![f64::INFINITY; size],
            parent: vec![NO_PARENT; size],
            status: vec![Status::Unseen; size],
            heap: BinaryHeap::new(),
            open_len: 0,
            closed_len: 0,
            stats: SearchStats::default(),
            expanded: Vec::new(),
        }
    }

    pub(crate) fn open_len(&self) -> u64 {
        self.open_len
    }

    /// Records `g` and `f` for a state reached from `parent` and queues it.
    pub(crate) fn relax(&mut self, idx: usize, point: Point, g: f64, f: f64, parent: usize) {
        if self.status[idx] == Status::Unseen {
            self.status[idx] = Status::Open;
            self.open_len += 1;
            self.stats.pushes += 1;
        }
        self.g[idx] = g;
        self.parent[idx] = parent;
        self.heap.push(OpenEntry { f, g, point, idx });
    }

    /// Pops the best live entry, discarding stale ones, and counts it as an
    /// expansion. The state leaves OPEN but is not yet closed.
    pub(crate) fn pop(&mut self) -> Option<OpenEntry> {
        while let Some(entry) = self.heap.pop() {
            let live = self.status[entry.idx] == Status::Open
                && self.g[entry.idx].to_bits() == entry.g.to_bits();
            if live {
                self.open_len -= 1;
                self.status[entry.idx] = Status::Unseen;
                self.stats.expansions += 1;
                self.expanded.push(entry.point);
                return Some(entry);
            }
        }
        None
    }

    pub(crate) fn close(&mut self, idx: usize) {
        self.status[idx] = Status::Closed;
        self.closed_len += 1;
    }

    pub(crate) fn is_open(&self, idx: usize) -> bool {
        self.status[idx] == Status::Open
    }

    pub(crate) fn note_storage(&mut self) {
        let resident = self.open_len + self.closed_len;
        self.stats.peak_storage = self.stats.peak_storage.max(resident);
    }

    pub(crate) fn finish(self, lattice: &Lattice, goal: Option<usize>) -> Result<SearchResult, SearchError> {
        let path = match goal {
            Some(end) => {
                let parent = &self.parent;
                let idx_path = walk_parents(end, lattice.len(), |i| {
                    let p = parent[i];
                    (p != NO_PARENT).then_some(p)
                })
                .map_err(|_| SearchError::MalformedParents {
                    end: lattice.point(end),
                    bound: lattice.len(),
                })?;
                Some(idx_path.into_iter().map(|i| lattice.point(i)).collect::<Vec<_>>())
            }
            None => None,
        };
        Ok(SearchResult {
            cost: goal.map(|i| self.g[i]),
            path,
            stats: self.stats,
            expanded: self.expanded,
        })
    }
}

/// Follows parent links from `end` to a root, returning the forward path.
/// Fails if no root is reached within `bound` links.
fn walk_parents<T: Copy>(end: T, bound: usize, parent_of: impl Fn(T) -> Option<T>) -> Result<Vec<T>, ()> {
    let mut path = vec![end];
    let mut cur = end;
    while let Some(p) = parent_of(cur) {
        if path.len() > bound {
            return Err(());
        }
        path.push(p);
        cur = p;
    }
    path.reverse();
    Ok(path)
}

/// Rebuilds the forward path ending at `end` from a child → parent map.
pub fn reconstruct_path(parents: &HashMap<Point, Point>, end: Point) -> Result<Vec<Point>, SearchError> {
    let bound = parents.len();
    walk_parents(end, bound, |p| parents.get(&p).copied())
        .map_err(|_| SearchError::MalformedParents { end, bound })
}

pub(crate) fn check_endpoints(lattice: &Lattice, s0: Point, sg: Point) -> Result<(), SearchError> {
    for p in [s0, sg] {
        if !lattice.is_free(p) {
            return Err(SearchError::BlockedEndpoint(p));
        }
    }
    Ok(())
}

/// Classical A*: f = g + h.
pub fn astar(env: &Environment, s0: Point, sg: Point, h: HeuristicKind) -> Result<SearchResult, SearchError> {
    weighted_astar(env, s0, sg, h, 1.0, 1.0)
}

/// A* with f = g + w·h where w starts at `w0` and decays multiplicatively
/// after every expansion, never dropping below 1. Entries already in OPEN
/// keep the f they were queued with.
pub fn weighted_astar(
    env: &Environment,
    s0: Point,
    sg: Point,
    h: HeuristicKind,
    w0: f64,
    decay: f64,
) -> Result<SearchResult, SearchError> {
    if !(w0 >= 1.0 && w0.is_finite() && decay > 0.0 && decay <= 1.0) {
        return Err(SearchError::InvalidWeights { w0, decay });
    }
    let lattice = Lattice::new(env);
    check_endpoints(&lattice, s0, sg)?;

    let mut frontier = Frontier::new(lattice.len());
    let mut w = w0;
    let start = lattice.index(s0).expect("start checked");
    frontier.relax(start, s0, 0.0, w * h.eval(s0, sg), NO_PARENT);
    frontier.note_storage();

    while let Some(current) = frontier.pop() {
        if current.point == sg {
            return frontier.finish(&lattice, Some(current.idx));
        }
        frontier.close(current.idx);
        for (idx, next, step) in lattice.neighbors(current.point) {
            if frontier.status[idx] == Status::Closed {
                continue;
            }
            let tentative = current.g + step;
            if !frontier.is_open(idx) || tentative < frontier.g[idx] {
                let f = tentative + w * h.eval(next, sg);
                frontier.relax(idx, next, tentative, f, current.idx);
            }
        }
        frontier.note_storage();
        w = (w * decay).max(1.0);
    }
    frontier.finish(&lattice, None)
}
