//! Continuous 2D environments with axis-aligned segment barriers.
//!
//! All geometry is exact integer arithmetic. A barrier is a closed, zero-width
//! segment; a point is "inside" an obstacle only when it lies on a barrier.
//! Touching a barrier endpoint counts as contact.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A lattice point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Euclidean distance. Symmetric bit-for-bit: `a.distance(b) == b.distance(a)`.
    pub fn distance(self, other: Point) -> f64 {
        let dx = (self.x - other.x) as f64;
        let dy = (self.y - other.y) as f64;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn scaled(self, k: i64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point::new(x, y)
    }
}

// Points travel as `[x, y]` pairs in every file format.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [x, y] = <[i64; 2]>::deserialize(deserializer)?;
        Ok(Point::new(x, y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// An axis-aligned barrier segment.
///
/// `fixed` is the y coordinate of a horizontal barrier or the x coordinate of
/// a vertical one; `span_lo..=span_hi` is the extent along the other axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Barrier {
    pub orientation: Orientation,
    pub fixed: i64,
    pub span_lo: i64,
    pub span_hi: i64,
}

impl Barrier {
    /// Builds a barrier, swapping the span ends if they arrive reversed.
    pub fn new(orientation: Orientation, fixed: i64, a: i64, b: i64) -> Self {
        Self {
            orientation,
            fixed,
            span_lo: a.min(b),
            span_hi: a.max(b),
        }
    }

    pub fn horizontal(y: i64, x_start: i64, x_end: i64) -> Self {
        Self::new(Orientation::Horizontal, y, x_start, x_end)
    }

    pub fn vertical(x: i64, y_start: i64, y_end: i64) -> Self {
        Self::new(Orientation::Vertical, x, y_start, y_end)
    }

    /// Endpoints of the barrier as a segment.
    pub fn endpoints(&self) -> (Point, Point) {
        match self.orientation {
            Orientation::Horizontal => (
                Point::new(self.span_lo, self.fixed),
                Point::new(self.span_hi, self.fixed),
            ),
            Orientation::Vertical => (
                Point::new(self.fixed, self.span_lo),
                Point::new(self.fixed, self.span_hi),
            ),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        let (along, across) = match self.orientation {
            Orientation::Horizontal => (p.x, p.y),
            Orientation::Vertical => (p.y, p.x),
        };
        across == self.fixed && (self.span_lo..=self.span_hi).contains(&along)
    }

    /// The `[fixed, start, end]` triple used by the JSON schema and prompts.
    pub fn as_triple(&self) -> [i64; 3] {
        [self.fixed, self.span_lo, self.span_hi]
    }

    fn scaled(&self, k: i64) -> Barrier {
        Barrier {
            orientation: self.orientation,
            fixed: self.fixed * k,
            span_lo: self.span_lo * k,
            span_hi: self.span_hi * k,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnvError {
    #[error("empty range for {axis}: [{min}, {max}]")]
    EmptyRange { axis: &'static str, min: i64, max: i64 },
    #[error("{kind} barrier {index} {triple:?} lies outside the environment bounds")]
    BarrierOutOfBounds {
        kind: &'static str,
        index: usize,
        triple: [i64; 3],
    },
}

/// A bounded map with horizontal and vertical barriers.
///
/// The search lattice is every integer point of `x_range × y_range`,
/// boundaries included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Environment {
    x_range: [i64; 2],
    y_range: [i64; 2],
    h_barriers: Vec<Barrier>,
    v_barriers: Vec<Barrier>,
}

impl Environment {
    pub fn new(
        x_range: [i64; 2],
        y_range: [i64; 2],
        h_barriers: Vec<Barrier>,
        v_barriers: Vec<Barrier>,
    ) -> Result<Self, EnvError> {
        if x_range[0] >= x_range[1] {
            return Err(EnvError::EmptyRange {
                axis: "x_range",
                min: x_range[0],
                max: x_range[1],
            });
        }
        if y_range[0] >= y_range[1] {
            return Err(EnvError::EmptyRange {
                axis: "y_range",
                min: y_range[0],
                max: y_range[1],
            });
        }
        let env = Self {
            x_range,
            y_range,
            h_barriers,
            v_barriers,
        };
        for (kind, list) in [("horizontal", &env.h_barriers), ("vertical", &env.v_barriers)] {
            for (index, b) in list.iter().enumerate() {
                let (a, z) = b.endpoints();
                if !env.in_bounds(a) || !env.in_bounds(z) {
                    return Err(EnvError::BarrierOutOfBounds {
                        kind,
                        index,
                        triple: b.as_triple(),
                    });
                }
            }
        }
        Ok(env)
    }

    /// Builds from the `[y, x_start, x_end]` / `[x, y_start, y_end]` triples.
    pub fn from_triples(
        x_range: [i64; 2],
        y_range: [i64; 2],
        horizontal: &[[i64; 3]],
        vertical: &[[i64; 3]],
    ) -> Result<Self, EnvError> {
        Self::new(
            x_range,
            y_range,
            horizontal
                .iter()
                .map(|&[y, a, b]| Barrier::horizontal(y, a, b))
                .collect(),
            vertical
                .iter()
                .map(|&[x, a, b]| Barrier::vertical(x, a, b))
                .collect(),
        )
    }

    /// An obstacle-free environment.
    pub fn empty(x_range: [i64; 2], y_range: [i64; 2]) -> Result<Self, EnvError> {
        Self::new(x_range, y_range, Vec::new(), Vec::new())
    }

    pub fn x_range(&self) -> [i64; 2] {
        self.x_range
    }

    pub fn y_range(&self) -> [i64; 2] {
        self.y_range
    }

    pub fn h_barriers(&self) -> &[Barrier] {
        &self.h_barriers
    }

    pub fn v_barriers(&self) -> &[Barrier] {
        &self.v_barriers
    }

    pub fn barriers(&self) -> impl Iterator<Item = &Barrier> {
        self.h_barriers.iter().chain(self.v_barriers.iter())
    }

    pub fn width(&self) -> i64 {
        self.x_range[1] - self.x_range[0]
    }

    pub fn height(&self) -> i64 {
        self.y_range[1] - self.y_range[0]
    }

    pub fn in_bounds(&self, p: Point) -> bool {
        (self.x_range[0]..=self.x_range[1]).contains(&p.x)
            && (self.y_range[0]..=self.y_range[1]).contains(&p.y)
    }

    /// Clamps a point into the bounding box.
    pub fn clamp(&self, p: Point) -> Point {
        Point::new(
            p.x.clamp(self.x_range[0], self.x_range[1]),
            p.y.clamp(self.y_range[0], self.y_range[1]),
        )
    }

    /// True when `p` is out of bounds or lies on a barrier.
    pub fn point_blocked(&self, p: Point) -> bool {
        !self.in_bounds(p) || self.barriers().any(|b| b.contains(p))
    }

    /// True when both endpoints are free and the segment touches no barrier.
    pub fn move_valid(&self, a: Point, b: Point) -> bool {
        if self.point_blocked(a) || self.point_blocked(b) {
            return false;
        }
        self.barriers().all(|barrier| {
            let (q1, q2) = barrier.endpoints();
            !segments_intersect(a, b, q1, q2)
        })
    }

    /// 8-connected neighbors reachable by a valid move, in E, NE, N, NW, W,
    /// SW, S, SE order, with octile step costs.
    pub fn neighbors(&self, p: Point) -> Vec<(Point, f64)> {
        MOVES
            .iter()
            .map(|&(dx, dy, cost)| (Point::new(p.x + dx, p.y + dy), cost))
            .filter(|&(n, _)| self.move_valid(p, n))
            .collect()
    }

    /// True when `path` starts at `s0`, ends at `sg`, and every hop is a
    /// valid move. Hops may be arbitrarily long.
    pub fn path_valid(&self, path: &[Point], s0: Point, sg: Point) -> bool {
        match (path.first(), path.last()) {
            (Some(&first), Some(&last)) if first == s0 && last == sg => {}
            _ => return false,
        }
        if path.len() == 1 {
            return !self.point_blocked(s0);
        }
        path.windows(2).all(|w| self.move_valid(w[0], w[1]))
    }

    /// Multiplies every bound and barrier coordinate by `k`.
    pub fn scaled(&self, k: i64) -> Environment {
        assert!(k >= 1, "scale factor must be positive, got {k}");
        Environment {
            x_range: [self.x_range[0] * k, self.x_range[1] * k],
            y_range: [self.y_range[0] * k, self.y_range[1] * k],
            h_barriers: self.h_barriers.iter().map(|b| b.scaled(k)).collect(),
            v_barriers: self.v_barriers.iter().map(|b| b.scaled(k)).collect(),
        }
    }
}

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Lattice moves counterclockwise from East: (dx, dy, cost).
pub const MOVES: [(i64, i64, f64); 8] = [
    (1, 0, 1.0),
    (1, 1, SQRT_2),
    (0, 1, 1.0),
    (-1, 1, SQRT_2),
    (-1, 0, 1.0),
    (-1, -1, SQRT_2),
    (0, -1, 1.0),
    (1, -1, SQRT_2),
];

/// Sum of Euclidean hop lengths. Zero for a single point.
pub fn path_length(path: &[Point]) -> f64 {
    path.windows(2).map(|w| w[0].distance(w[1])).sum()
}

fn orientation(a: Point, b: Point, c: Point) -> i32 {
    let cross = (b.x - a.x) as i128 * (c.y - a.y) as i128 - (b.y - a.y) as i128 * (c.x - a.x) as i128;
    cross.signum() as i32
}

// `c` is known collinear with `a`-`b`; checks it falls inside their bounding box.
fn within_box(a: Point, b: Point, c: Point) -> bool {
    a.x.min(b.x) <= c.x && c.x <= a.x.max(b.x) && a.y.min(b.y) <= c.y && c.y <= a.y.max(b.y)
}

/// True iff the closed segments `p1p2` and `q1q2` share a point.
/// Zero-length segments are allowed.
pub fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let o1 = orientation(p1, p2, q1);
    let o2 = orientation(p1, p2, q2);
    let o3 = orientation(q1, q2, p1);
    let o4 = orientation(q1, q2, p2);

    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == 0 && within_box(p1, p2, q1))
        || (o2 == 0 && within_box(p1, p2, q2))
        || (o3 == 0 && within_box(q1, q2, p1))
        || (o4 == 0 && within_box(q1, q2, p2))
}

// The wire shape: field names are fixed by the file format.
#[derive(Serialize, Deserialize)]
struct EnvironmentJson {
    x_range: [i64; 2],
    y_range: [i64; 2],
    horizontal_barriers: Vec<[i64; 3]>,
    vertical_barriers: Vec<[i64; 3]>,
}

impl Serialize for Environment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        EnvironmentJson {
            x_range: self.x_range,
            y_range: self.y_range,
            horizontal_barriers: self.h_barriers.iter().map(Barrier::as_triple).collect(),
            vertical_barriers: self.v_barriers.iter().map(Barrier::as_triple).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Environment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = EnvironmentJson::deserialize(deserializer)?;
        Environment::from_triples(
            raw.x_range,
            raw.y_range,
            &raw.horizontal_barriers,
            &raw.vertical_barriers,
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    fn simple_env() -> Environment {
        Environment::from_triples([0, 50], [0, 30], &[[10, 0, 25]], &[]).unwrap()
    }

    pub(crate) fn demo_env() -> Environment {
        Environment::from_triples([0, 50], [0, 30], &[[10, 0, 25], [15, 30, 50]], &[[25, 10, 22]])
            .unwrap()
    }

    // Samples the segment densely and checks whether any sample sits on the
    // horizontal line y = c within [lo, hi]. Exact because samples are
    // rational: y is checked as N*y == N*c.
    fn dense_hits_horizontal(a: Point, b: Point, c: i64, lo: i64, hi: i64) -> bool {
        const N: i64 = 10_000;
        (0..=N).any(|k| {
            let sx = a.x * N + k * (b.x - a.x);
            let sy = a.y * N + k * (b.y - a.y);
            sy == c * N && sx >= lo * N && sx <= hi * N
        })
    }

    #[test]
    fn crossing_diagonals_intersect() {
        assert!(segments_intersect(p(0, 0), p(2, 2), p(0, 2), p(2, 0)));
    }

    #[test]
    fn disjoint_collinear_segments() {
        assert!(!segments_intersect(p(0, 0), p(1, 0), p(3, 0), p(4, 0)));
    }

    #[test]
    fn segment_below_barrier_misses() {
        assert!(!dense_hits_horizontal(p(5, 5), p(26, 9), 10, 0, 25));
        assert!(!segments_intersect(p(5, 5), p(26, 9), p(0, 10), p(25, 10)));
    }

    #[test]
    fn touching_endpoint_counts() {
        assert!(segments_intersect(p(0, 0), p(2, 2), p(2, 2), p(5, 2)));
        assert!(segments_intersect(p(3, 3), p(3, 3), p(0, 0), p(6, 6)));
        assert!(!segments_intersect(p(3, 4), p(3, 4), p(0, 0), p(6, 6)));
    }

    #[test]
    fn point_blocked_cases() {
        let env = simple_env();
        assert!(env.point_blocked(p(5, 10)));
        assert!(!env.point_blocked(p(5, 5)));
        assert!(env.point_blocked(p(51, 5)));
        assert!(!env.point_blocked(p(50, 30)));
    }

    #[test]
    fn move_validity() {
        let env = simple_env();
        assert!(dense_hits_horizontal(p(5, 9), p(5, 11), 10, 0, 25));
        assert!(!env.move_valid(p(5, 9), p(5, 11)));
        assert!(!dense_hits_horizontal(p(30, 9), p(30, 11), 10, 0, 25));
        assert!(env.move_valid(p(30, 9), p(30, 11)));
        assert!(env.move_valid(p(7, 7), p(7, 7)));
    }

    #[test]
    fn neighbor_counts() {
        let env = Environment::empty([0, 10], [0, 10]).unwrap();
        assert_eq!(env.neighbors(p(5, 5)).len(), 8);
        let corner = env.neighbors(p(0, 0));
        assert_eq!(
            corner.iter().map(|&(q, _)| q).collect::<Vec<_>>(),
            vec![p(1, 0), p(1, 1), p(0, 1)]
        );
        assert_eq!(corner[1].1, SQRT_2);
    }

    #[test]
    fn neighbors_below_barrier_lose_upward_moves() {
        let env = simple_env();
        let got: Vec<Point> = env.neighbors(p(5, 9)).into_iter().map(|(q, _)| q).collect();
        let expected: Vec<Point> = MOVES
            .iter()
            .map(|&(dx, dy, _)| p(5 + dx, 9 + dy))
            .filter(|&q| env.move_valid(p(5, 9), q))
            .collect();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 5);
        for up in [p(6, 10), p(5, 10), p(4, 10)] {
            assert!(!got.contains(&up));
        }
    }

    #[test]
    fn demo_path_validity() {
        let env = demo_env();
        let path = [p(5, 5), p(26, 9), p(25, 23), p(20, 20)];
        assert!(env.path_valid(&path, p(5, 5), p(20, 20)));
        assert!(!env.path_valid(&[p(5, 5), p(20, 20)], p(5, 5), p(20, 20)));
        assert!(!env.path_valid(&[], p(5, 5), p(20, 20)));
        assert!(!env.path_valid(&path, p(5, 5), p(20, 21)));
    }

    #[test]
    fn lengths() {
        assert_eq!(path_length(&[p(0, 0), p(3, 4)]), 5.0);
        assert_eq!(path_length(&[p(0, 0)]), 0.0);
        let expected = 457f64.sqrt() + 197f64.sqrt() + 34f64.sqrt();
        let got = path_length(&[p(5, 5), p(26, 9), p(25, 23), p(20, 20)]);
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 41.244179).abs() < 1e-6);
    }

    #[test]
    fn scaling() {
        let env = simple_env();
        assert_eq!(env.scaled(1), env);
        assert_eq!(env.scaled(10).x_range(), [0, 500]);
        assert_eq!(env.scaled(3).h_barriers()[0].as_triple(), [30, 0, 75]);
    }

    #[test]
    fn json_schema_field_names() {
        let json = serde_json::to_string(&demo_env()).unwrap();
        assert_eq!(
            json,
            r#"{"x_range":[0,50],"y_range":[0,30],"horizontal_barriers":[[10,0,25],[15,30,50]],"vertical_barriers":[[25,10,22]]}"#
        );
        let back: Environment = serde_json::from_str(&json).unwrap();
        assert_eq!(back, demo_env());
    }

    #[test]
    fn rejects_bad_environments() {
        assert!(Environment::empty([5, 5], [0, 1]).is_err());
        assert!(Environment::from_triples([0, 10], [0, 10], &[[11, 0, 3]], &[]).is_err());
        let reversed = Environment::from_triples([0, 10], [0, 10], &[[3, 8, 2]], &[]).unwrap();
        assert_eq!(reversed.h_barriers()[0].as_triple(), [3, 2, 8]);
    }

    fn arb_point(r: i64) -> impl Strategy<Value = Point> {
        (-r..=r, -r..=r).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn intersect_symmetry(a in arb_point(20), b in arb_point(20), c in arb_point(20), d in arb_point(20)) {
            let r = segments_intersect(a, b, c, d);
            prop_assert_eq!(r, segments_intersect(c, d, a, b));
            prop_assert_eq!(r, segments_intersect(b, a, c, d));
            prop_assert_eq!(r, segments_intersect(a, b, d, c));
        }

        #[test]
        fn move_valid_symmetric(a in arb_point(12), b in arb_point(12)) {
            let env = Environment::from_triples([-10, 10], [-10, 10], &[[0, -5, 5], [7, -10, 2]], &[[3, -8, 8]]).unwrap();
            prop_assert_eq!(env.move_valid(a, b), env.move_valid(b, a));
        }

        #[test]
        fn neighbors_are_free(x in 0i64..=50, y in 0i64..=30) {
            let env = demo_env();
            let q = Point::new(x, y);
            prop_assume!(!env.point_blocked(q));
            for (n, cost) in env.neighbors(q) {
                prop_assert!(!env.point_blocked(n));
                prop_assert!(env.move_valid(q, n));
                prop_assert!(cost == 1.0 || cost == SQRT_2);
            }
        }

        #[test]
        fn length_scales_linearly(pts in prop::collection::vec(arb_point(1000), 1..12), k in 1i64..=10) {
            let scaled: Vec<Point> = pts.iter().map(|q| q.scaled(k)).collect();
            let base = path_length(&pts);
            let got = path_length(&scaled);
            prop_assert!((got - k as f64 * base).abs() <= 1e-9 * got.max(1.0));
        }
    }
}
