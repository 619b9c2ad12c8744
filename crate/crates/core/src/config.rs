//! Application configuration: one JSON file covering grid construction, the
//! risk model, the planner, and the benchmark harness. Every field has a
//! default so a partial file (or none at all) works.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::planner::PlannerConfig;
use crate::risk::RiskWeights;
use crate::traffic_grid::{GridSpec, MeanDenominator, DEFAULT_GAP_S};
use crate::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct AppConfig {
    pub grid: GridSpec,
    pub mean_denominator: MeanDenominator,
    /// Trajectory resampling step, feet.
    pub d_step_ft: f64,
    /// Track split threshold for ADS-B ingestion, seconds.
    pub gap_s: f64,
    /// Accept OpenSky column names (baroaltitude in meters).
    pub opensky: bool,
    pub risk_weights: RiskWeights,
    pub d_max_ft: f64,
    pub adaptive_ground_weights: bool,
    pub additive_wa: bool,
    pub planner: PlannerConfig,
    pub bench: crate::bench::BenchConfig,
    /// Force the sequential code path even when built with rayon.
    pub sequential: bool,
}

impl Default for AppConfig {
    fn default() -> Self {
        Self {
            grid: default_grid(),
            mean_denominator: MeanDenominator::default(),
            d_step_ft: crate::traffic_grid::D_STEP_FT,
            gap_s: DEFAULT_GAP_S,
            opensky: false,
            risk_weights: RiskWeights::default(),
            d_max_ft: crate::polyhedra::D_MAX_FT,
            adaptive_ground_weights: true,
            additive_wa: false,
            planner: PlannerConfig::default(),
            bench: crate::bench::BenchConfig::default(),
            sequential: false,
        }
    }
}

/// Default 30 x 30 x 10 grid over the sample metro area.
fn default_grid() -> GridSpec {
    GridSpec {
        lat_min: 38.5,
        lat_max: 39.1,
        lon_min: -77.6,
        lon_max: -76.6,
        alt_min_ft: 0.0,
        alt_max_ft: 10_000.0,
        n_lat: 30,
        n_lon: 30,
        n_alt: 10,
    }
}

impl AppConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: AppConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.risk_weights.validate()?;
        self.planner.envelope.validate()?;
        self.planner.cone.validate()?;
        self.bench.validate()?;
        Ok(())
    }

    pub fn parallelism(&self) -> crate::par::Parallelism {
        if self.sequential {
            crate::par::Parallelism::Sequential
        } else {
            crate::par::Parallelism::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        AppConfig::default().validate().unwrap();
    }

    #[test]
    fn partial_file_fills_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cfg.json");
        std::fs::write(&p, r#"{"d_step_ft": 50.0, "bench": {"n": 7}}"#).unwrap();
        let cfg = AppConfig::load(&p).unwrap();
        assert_eq!(cfg.d_step_ft, 50.0);
        assert_eq!(cfg.bench.n, 7);
        assert_eq!(cfg.grid.n_lat, 30);
    }

    #[test]
    fn roundtrip() {
        let cfg = AppConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: AppConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.grid, cfg.grid);
        assert_eq!(back.planner.max_expansions, cfg.planner.max_expansions);
    }
}
