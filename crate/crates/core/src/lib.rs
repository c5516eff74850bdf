//! A* guided by an ordered list of waypoints, with plain and dynamically
//! weighted A* baselines, waypoint providers (language model or offline
//! oracle), dataset generation, metrics and a benchmark CLI.

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod env;
pub mod guided;
pub mod metrics;
pub mod search;
pub mod svg;
pub mod waypoints;
