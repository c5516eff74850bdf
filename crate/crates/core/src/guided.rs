//! A* guided by an ordered list of waypoint targets.
//!
//! The search keeps a current target `t`. Priorities are
//! `f(s) = g(s) + h(s) + |s - t|`. Whenever a generated neighbor equals `t`
//! (and `t` is not the goal), the target advances to the next waypoint and
//! every state in OPEN gets its f recomputed against the new target. The
//! target check runs before the CLOSED check, so a closed neighbor can still
//! advance the target.
//!
//! The extra target term makes the heuristic inadmissible: paths are always
//! valid but may be longer than optimal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{Environment, Point};
use crate::search::{check_endpoints, Frontier, HeuristicKind, Lattice, SearchError, SearchResult, Status};

/// Sanitized waypoints: starts at s0, ends at sg, every point free, no two
/// consecutive points equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetList {
    waypoints: Vec<Point>,
    cursor: usize,
}

impl TargetList {
    pub fn waypoints(&self) -> &[Point] {
        &self.waypoints
    }

    /// Index of the first target the search pursues.
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn current(&self) -> Point {
        self.waypoints[self.cursor]
    }

    pub fn goal(&self) -> Point {
        *self.waypoints.last().expect("target list is never empty")
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }
}

/// Repairs a raw waypoint list into a [`TargetList`].
///
/// Raw points are clamped into bounds and dropped when they land on a
/// barrier; `s0` is prepended and `sg` appended unless already in place;
/// consecutive duplicates collapse. The cursor starts past any leading
/// waypoints equal to `s0`.
pub fn sanitize_targets(env: &Environment, raw: &[Point], s0: Point, sg: Point) -> TargetList {
    let mut waypoints: Vec<Point> = Vec::with_capacity(raw.len() + 2);
    // A leading s0 in the raw list collapses into this one.
    waypoints.push(s0);
    waypoints.extend(
        raw.iter()
            .map(|&q| env.clamp(q))
            .filter(|&q| !env.point_blocked(q)),
    );
    if waypoints.last() != Some(&sg) {
        waypoints.push(sg);
    }
    waypoints.dedup();

    let cursor = waypoints
        .iter()
        .position(|&q| q != s0)
        .unwrap_or(waypoints.len() - 1);
    TargetList { waypoints, cursor }
}

#[derive(Debug, Error, PartialEq)]
#[error("non-finite f-cost input: g = {g}, h = {h}, target distance = {d}")]
pub struct NonFiniteCost {
    pub g: f64,
    pub h: f64,
    pub d: f64,
}

/// `g + h + d`, with the two heuristic terms summed first so that at
/// `t = sg` the result is bit-identical to `g + 2h`.
pub fn current_f(g_cost: f64, h_value: f64, dist_to_target: f64) -> Result<f64, NonFiniteCost> {
    if !(g_cost.is_finite() && h_value.is_finite() && dist_to_target.is_finite()) {
        return Err(NonFiniteCost {
            g: g_cost,
            h: h_value,
            d: dist_to_target,
        });
    }
    Ok(f_cost(g_cost, h_value, dist_to_target))
}

#[inline]
fn f_cost(g: f64, h: f64, d: f64) -> f64 {
    g + (h + d)
}

/// Runs the guided search. `targets` must have been produced by
/// [`sanitize_targets`] for the same `s0`, `sg`, and environment.
pub fn llm_astar_search(
    env: &Environment,
    s0: Point,
    sg: Point,
    targets: &TargetList,
    h: HeuristicKind,
) -> Result<SearchResult, SearchError> {
    let lattice = Lattice::new(env);
    check_endpoints(&lattice, s0, sg)?;
    debug_assert_eq!(targets.waypoints.first(), Some(&s0));
    debug_assert_eq!(targets.waypoints.last(), Some(&sg));

    let mut cursor = targets.cursor;
    let mut target = targets.waypoints[cursor];
    let mut frontier = Frontier::new(lattice.len());

    let start = lattice.index(s0).expect("start checked");
    frontier.relax(start, s0, 0.0, f_cost(0.0, h.eval(s0, sg), s0.distance(target)), usize::MAX);
    frontier.note_storage();

    while let Some(current) = frontier.pop() {
        if current.point == sg {
            return frontier.finish(&lattice, Some(current.idx));
        }
        frontier.close(current.idx);
        for (idx, next, step) in lattice.neighbors(current.point) {
            if next == target && target != sg {
                cursor += 1;
                target = targets.waypoints[cursor];
                recompute_open(&mut frontier, h, sg, target);
            }
            if frontier.status[idx] == Status::Closed {
                continue;
            }
            let tentative = current.g + step;
            if !frontier.is_open(idx) || tentative < frontier.g[idx] {
                let f = f_cost(tentative, h.eval(next, sg), next.distance(target));
                frontier.relax(idx, next, tentative, f, current.idx);
            }
        }
        frontier.note_storage();
    }
    frontier.finish(&lattice, None)
}

// Rebuilds OPEN with priorities against the new target. Stale heap entries
// are dropped on the way; each live state contributes one recompute.
fn recompute_open(frontier: &mut Frontier, h: HeuristicKind, sg: Point, target: Point) {
    let entries = std::mem::take(&mut frontier.heap).into_vec();
    let mut live = Vec::with_capacity(frontier.open_len() as usize);
    for mut e in entries {
        if frontier.status[e.idx] == Status::Open && frontier.g[e.idx].to_bits() == e.g.to_bits() {
            e.f = f_cost(e.g, h.eval(e.point, sg), e.point.distance(target));
            live.push(e);
        }
    }
    debug_assert_eq!(live.len() as u64, frontier.open_len());
    debug_assert!(live
        .iter()
        .all(|e| e.f == e.g + (h.eval(e.point, sg) + e.point.distance(target))));
    frontier.stats.recomputes += live.len() as u64;
    frontier.heap = live.into();
}
