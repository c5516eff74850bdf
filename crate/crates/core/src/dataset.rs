//! Seeded random map generation and JSON persistence.
//!
//! Each map is drawn from its own ChaCha8 stream (`seed`, stream = map
//! index), so a dataset is a pure function of [`GenParams`] and maps can be
//! generated independently.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{Barrier, Environment, Point};
use crate::search::{astar, HeuristicKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub x_range: [i64; 2],
    pub y_range: [i64; 2],
    /// Inclusive range for the number of horizontal barriers.
    pub h_barriers: [usize; 2],
    pub v_barriers: [usize; 2],
    /// Barrier length as an inclusive fraction range of the axis it spans.
    pub span_fraction: [f64; 2],
    pub n_pairs: usize,
    /// Minimum Euclidean start-goal distance.
    pub min_separation: f64,
    pub seed: u64,
    /// Barrier layouts tried per map before giving up.
    pub max_layouts: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            x_range: [0, 50],
            y_range: [0, 30],
            h_barriers: [3, 6],
            v_barriers: [2, 4],
            span_fraction: [0.2, 0.6],
            n_pairs: 10,
            min_separation: 20.0,
            seed: 0,
            max_layouts: 200,
        }
    }
}

/// One map and its start/goal queries.
#[derive(Clone, Debug, PartialEq)]
pub struct MapRecord {
    pub id: u32,
    pub environment: Environment,
    pub start_goal: Vec<(Point, Point)>,
}

/// Identifies one query of a dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SampleId {
    pub map: u32,
    pub pair: u32,
}

impl std::fmt::Display for SampleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "map {} pair {}", self.map, self.pair)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Sample<'a> {
    pub id: SampleId,
    pub env: &'a Environment,
    pub start: Point,
    pub goal: Point,
}

/// Every query of the dataset in map order.
pub fn samples(maps: &[MapRecord]) -> Vec<Sample<'_>> {
    maps.iter()
        .flat_map(|m| {
            m.start_goal.iter().enumerate().map(move |(i, &(start, goal))| Sample {
                id: SampleId { map: m.id, pair: i as u32 },
                env: &m.environment,
                start,
                goal,
            })
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error("map {map}: no valid layout found in {attempts} attempts (parameters over-constrained)")]
    Exhausted { map: u32, attempts: usize },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
}

impl GenParams {
    fn validate(&self) -> Result<(), DatasetError> {
        let bad = |m: &str| Err(DatasetError::InvalidParams(m.to_string()));
        if self.x_range[0] >= self.x_range[1] || self.y_range[0] + 1 >= self.y_range[1] {
            return bad("x_range and y_range must be nonempty");
        }
        if self.x_range[0] + 1 >= self.x_range[1] {
            return bad("x_range must span at least two units");
        }
        if self.h_barriers[0] > self.h_barriers[1] || self.v_barriers[0] > self.v_barriers[1] {
            return bad("barrier count ranges must be nonempty");
        }
        let [lo, hi] = self.span_fraction;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return bad("span_fraction must satisfy 0 <= lo <= hi <= 1");
        }
        if self.n_pairs == 0 || self.max_layouts == 0 {
            return bad("n_pairs and max_layouts must be positive");
        }
        if self.min_separation.is_nan() || self.min_separation < 0.0 {
            return bad("min_separation must be nonnegative");
        }
        Ok(())
    }

    fn rng_for(&self, map: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(map as u64);
        rng
    }
}

// A barrier along one axis: fixed coordinate strictly inside the other
// axis, span length drawn as a fraction of this axis.
fn draw_barrier(
    rng: &mut impl Rng,
    along: [i64; 2],
    across: [i64; 2],
    span_fraction: [f64; 2],
) -> (i64, i64, i64) {
    let extent = (along[1] - along[0]) as f64;
    let min_len = ((span_fraction[0] * extent).ceil() as i64).max(0);
    let max_len = ((span_fraction[1] * extent).floor() as i64).max(min_len);
    let len = rng.random_range(min_len..=max_len);
    let start = rng.random_range(along[0]..=along[1] - len);
    let fixed = rng.random_range(across[0] + 1..=across[1] - 1);
    (fixed, start, start + len)
}

fn draw_layout(params: &GenParams, rng: &mut impl Rng) -> Environment {
    let nh = rng.random_range(params.h_barriers[0]..=params.h_barriers[1]);
    let nv = rng.random_range(params.v_barriers[0]..=params.v_barriers[1]);
    let h = (0..nh)
        .map(|_| {
            let (y, a, b) = draw_barrier(rng, params.x_range, params.y_range, params.span_fraction);
            Barrier::horizontal(y, a, b)
        })
        .collect();
    let v = (0..nv)
        .map(|_| {
            let (x, a, b) = draw_barrier(rng, params.y_range, params.x_range, params.span_fraction);
            Barrier::vertical(x, a, b)
        })
        .collect();
    Environment::new(params.x_range, params.y_range, h, v).expect("barriers drawn inside bounds")
}

fn draw_free_point(env: &Environment, rng: &mut impl Rng) -> Option<Point> {
    let [x0, x1] = env.x_range();
    let [y0, y1] = env.y_range();
    (0..1000).find_map(|_| {
        let p = Point::new(rng.random_range(x0..=x1), rng.random_range(y0..=y1));
        (!env.point_blocked(p)).then_some(p)
    })
}

/// Draws one map: a barrier layout plus `n_pairs` distinct, separated,
/// solvable start/goal pairs. Layouts that cannot host enough pairs are
/// redrawn up to `max_layouts` times.
pub fn generate_map(params: &GenParams, id: u32, rng: &mut impl Rng) -> Result<MapRecord, DatasetError> {
    params.validate()?;
    let pair_attempts = 50 * params.n_pairs;
    for _ in 0..params.max_layouts {
        let env = draw_layout(params, rng);
        let mut pairs: Vec<(Point, Point)> = Vec::with_capacity(params.n_pairs);
        for _ in 0..pair_attempts {
            if pairs.len() == params.n_pairs {
                break;
            }
            let (Some(s), Some(g)) = (draw_free_point(&env, rng), draw_free_point(&env, rng)) else {
                break;
            };
            if s.distance(g) < params.min_separation || pairs.contains(&(s, g)) {
                continue;
            }
            let solvable = astar(&env, s, g, HeuristicKind::Euclidean).is_ok_and(|r| r.found());
            if solvable {
                pairs.push((s, g));
            }
        }
        if pairs.len() == params.n_pairs {
            return Ok(MapRecord {
                id,
                environment: env,
                start_goal: pairs,
            });
        }
    }
    Err(DatasetError::Exhausted {
        map: id,
        attempts: params.max_layouts,
    })
}

/// Generates `n_maps` maps, map `i` from stream `i` of the seed.
pub fn generate_dataset(params: &GenParams, n_maps: usize) -> Result<Vec<MapRecord>, DatasetError> {
    params.validate()?;
    if n_maps == 0 {
        return Err(DatasetError::InvalidParams("n_maps must be at least 1".into()));
    }
    (0..n_maps as u32)
        .into_par_iter()
        .map(|i| generate_map(params, i, &mut params.rng_for(i)))
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapRecordJson {
    id: u32,
    x_range: [i64; 2],
    y_range: [i64; 2],
    horizontal_barriers: Vec<[i64; 3]>,
    vertical_barriers: Vec<[i64; 3]>,
    start_goal: Vec<[Point; 2]>,
}

impl From<&MapRecord> for MapRecordJson {
    fn from(m: &MapRecord) -> Self {
        let env = &m.environment;
        MapRecordJson {
            id: m.id,
            x_range: env.x_range(),
            y_range: env.y_range(),
            horizontal_barriers: env.h_barriers().iter().map(Barrier::as_triple).collect(),
            vertical_barriers: env.v_barriers().iter().map(Barrier::as_triple).collect(),
            start_goal: m.start_goal.iter().map(|&(s, g)| [s, g]).collect(),
        }
    }
}

fn schema(path: String, message: impl ToString) -> DatasetError {
    DatasetError::Schema {
        path,
        message: message.to_string(),
    }
}

impl MapRecordJson {
    fn into_record(self, index: usize) -> Result<MapRecord, DatasetError> {
        let environment = Environment::from_triples(
            self.x_range,
            self.y_range,
            &self.horizontal_barriers,
            &self.vertical_barriers,
        )
        .map_err(|e| schema(format!("[{index}]"), e))?;
        let mut start_goal = Vec::with_capacity(self.start_goal.len());
        for (i, [s, g]) in self.start_goal.into_iter().enumerate() {
            for (j, p) in [s, g].into_iter().enumerate() {
                if environment.point_blocked(p) {
                    return Err(schema(
                        format!("[{index}].start_goal[{i}][{j}]"),
                        format!("point {p} is blocked or out of bounds"),
                    ));
                }
            }
            start_goal.push((s, g));
        }
        Ok(MapRecord {
            id: self.id,
            environment,
            start_goal,
        })
    }
}

pub fn to_json(maps: &[MapRecord]) -> String {
    let raw: Vec<MapRecordJson> = maps.iter().map(MapRecordJson::from).collect();
    let mut s = serde_json::to_string_pretty(&raw).expect("dataset serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Vec<MapRecord>, DatasetError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: Vec<MapRecordJson> = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner())
    })?;
    raw.into_iter()
        .enumerate()
        .map(|(i, m)| m.into_record(i))
        .collect()
}

pub fn save_dataset(path: &Path, maps: &[MapRecord]) -> Result<(), DatasetError> {
    fs::write(path, to_json(maps)).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_dataset(path: &Path) -> Result<Vec<MapRecord>, DatasetError> {
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_json(&text)
}
