//! Airspace-aware contingency landing planning toolkit.
//!
//! Converts ADS-B trajectory logs, polyhedral airspace volumes, and
//! population rasters into 3-D risk fields, then plans fixed-wing engine-out
//! landing trajectories minimizing exposure to congested airspace and
//! overflown population, benchmarked against a 3-D Dubins baseline.

pub mod bench;
pub mod config;
pub mod dubins;
pub mod error;
pub mod geodesy;
pub mod landing_sites;
pub mod par;
pub mod planner;
pub mod polyhedra;
pub mod population;
pub mod risk;
pub mod traffic_grid;
pub mod units;

pub use error::{Error, Result};
