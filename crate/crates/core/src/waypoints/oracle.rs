//! Offline waypoint source: samples the optimal path.

use crate::env::{Environment, Point};
use crate::search::{astar, HeuristicKind};

use super::ProviderError;

/// Runs A* and returns `[s0, samples…, sg]`, where sample `i` of `n` is the
/// path vertex whose arc length is closest to fraction `i / (n + 1)` of the
/// total (earlier vertex on ties). Interior vertices only; a sample equal to
/// its predecessor is skipped, so short paths yield fewer than `n` samples.
pub fn oracle_waypoints(env: &Environment, s0: Point, sg: Point, n: usize) -> Result<Vec<Point>, ProviderError> {
    let result = astar(env, s0, sg, HeuristicKind::Euclidean)
        .map_err(|e| ProviderError::NoPath(e.to_string()))?;
    let path = result
        .path
        .ok_or_else(|| ProviderError::NoPath(format!("no path from {s0} to {sg}")))?;

    let mut arc = Vec::with_capacity(path.len());
    let mut acc = 0.0;
    arc.push(0.0);
    for w in path.windows(2) {
        acc += w[0].distance(w[1]);
        arc.push(acc);
    }
    let total = acc;

    let mut out = vec![s0];
    if path.len() > 2 {
        let interior = 1..path.len() - 1;
        for i in 1..=n {
            let want = total * i as f64 / (n + 1) as f64;
            let best = interior
                .clone()
                .min_by(|&a, &b| (arc[a] - want).abs().total_cmp(&(arc[b] - want).abs()))
                .expect("interior is nonempty");
            if out.last() != Some(&path[best]) {
                out.push(path[best]);
            }
        }
    }
    out.push(sg);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guided::sanitize_targets;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn zero_samples() {
        let env = Environment::empty([0, 10], [0, 10]).unwrap();
        assert_eq!(oracle_waypoints(&env, p(0, 0), p(8, 8), 0).unwrap(), vec![p(0, 0), p(8, 8)]);
    }

    #[test]
    fn diagonal_midpoint() {
        let env = Environment::empty([0, 10], [0, 10]).unwrap();
        let path = astar(&env, p(0, 0), p(8, 8), HeuristicKind::Euclidean).unwrap().path.unwrap();
        assert_eq!(path.len(), 9);
        assert_eq!(path[4], p(4, 4));
        assert_eq!(oracle_waypoints(&env, p(0, 0), p(8, 8), 1).unwrap(), vec![p(0, 0), p(4, 4), p(8, 8)]);
    }

    #[test]
    fn demo_env_three_samples() {
        let env = Environment::from_triples([0, 50], [0, 30], &[[10, 0, 25], [15, 30, 50]], &[[25, 10, 22]])
            .unwrap();
        let pts = oracle_waypoints(&env, p(5, 5), p(20, 20), 3).unwrap();
        assert_eq!(pts.len(), 5);
        let path = astar(&env, p(5, 5), p(20, 20), HeuristicKind::Euclidean).unwrap().path.unwrap();
        let positions: Vec<usize> = pts.iter().map(|q| path.iter().position(|r| r == q).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        for q in &pts {
            assert!(!env.point_blocked(*q));
        }
        let t = sanitize_targets(&env, &pts, p(5, 5), p(20, 20));
        assert_eq!(t.waypoints(), pts.as_slice());
    }

    #[test]
    fn unreachable_goal_errors() {
        let env = Environment::from_triples([0, 10], [0, 10], &[[4, 3, 7], [8, 3, 7]], &[[3, 4, 8], [7, 4, 8]])
            .unwrap();
        assert!(matches!(oracle_waypoints(&env, p(0, 0), p(5, 6), 2), Err(ProviderError::NoPath(_))));
    }
}
