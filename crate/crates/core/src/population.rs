//! Normalized population density raster (2-D lat/lon grid) with nearest-cell
//! lookup, CSV loading and a seeded synthetic generator for tests.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strict upper bound convention for the normalization ceiling.
const ETA_CAP: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PopulationRaster {
    /// Latitude bin edges, ascending, length n_lat + 1.
    pub lat_edges: Vec<f64>,
    /// Longitude bin edges, ascending, length n_lon + 1.
    pub lon_edges: Vec<f64>,
    /// Row-major normalized density values in [0, 1], n_lat x n_lon.
    pub values: Vec<f64>,
}

impl PopulationRaster {
    pub fn zero(lat_edges: Vec<f64>, lon_edges: Vec<f64>) -> Self {
        let n = (lat_edges.len() - 1) * (lon_edges.len() - 1);
        Self {
            lat_edges,
            lon_edges,
            values: vec![0.0; n],
        }
    }

    pub fn n_lat(&self) -> usize {
        self.lat_edges.len() - 1
    }

    pub fn n_lon(&self) -> usize {
        self.lon_edges.len() - 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.lat_edges.len() < 2 || self.lon_edges.len() < 2 {
            return Err(Error::Input("raster needs at least one cell".into()));
        }
        if !self.lat_edges.windows(2).all(|w| w[0] < w[1])
            || !self.lon_edges.windows(2).all(|w| w[0] < w[1])
        {
            return Err(Error::Input("raster edges must ascend".into()));
        }
        if self.values.len() != self.n_lat() * self.n_lon() {
            return Err(Error::Input("raster value count mismatch".into()));
        }
        if self.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Input("raster values must lie in [0,1]".into()));
        }
        Ok(())
    }

    /// Nearest-cell (containing-cell) lookup; 0 outside the raster.
    pub fn density_at(&self, lat: f64, lon: f64) -> f64 {
        let i = match edge_bin(&self.lat_edges, lat) {
            Some(i) => i,
            None => return 0.0,
        };
        let j = match edge_bin(&self.lon_edges, lon) {
            Some(j) => j,
            None => return 0.0,
        };
        self.values[i * self.n_lon() + j]
    }

    /// Area-weighted mean normalized density.
    pub fn mean_density(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..self.n_lat() {
            let dlat = self.lat_edges[i + 1] - self.lat_edges[i];
            let mid = 0.5 * (self.lat_edges[i + 1] + self.lat_edges[i]);
            let coslat = mid.to_radians().cos();
            for j in 0..self.n_lon() {
                let dlon = self.lon_edges[j + 1] - self.lon_edges[j];
                let area = dlat * dlon * coslat;
                num += area * self.values[i * self.n_lon() + j];
                den += area;
            }
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }

    /// Raster maximum, capped strictly below 1.
    pub fn eta_w_max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(0.0, f64::max)
            .min(ETA_CAP)
    }

    /// CSV format: header row is `lat\lon` followed by the n_lon + 1
    /// longitude edges; each data row starts with a latitude edge followed by
    /// that row's n_lon values; a final row carries the last latitude edge.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_path(path)?;
        let mut rows = rdr.records();
        let header = rows
            .next()
            .ok_or_else(|| Error::Input("empty raster csv".into()))??;
        let lon_edges: Vec<f64> = header
            .iter()
            .skip(1)
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Input(format!("bad lon edge: {e}")))?;
        let mut lat_edges = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            let row = row?;
            let lat: f64 = row
                .get(0)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Input("bad lat edge".into()))?;
            lat_edges.push(lat);
            let vals: Vec<f64> = row
                .iter()
                .skip(1)
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Input(format!("bad raster value: {e}")))?;
            if !vals.is_empty() {
                values.extend(vals);
            }
        }
        let raster = Self {
            lat_edges,
            lon_edges,
            values,
        };
        raster.validate()?;
        Ok(raster)
    }

    pub fn to_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_path(path)?;
        let mut header = vec!["lat\\lon".to_string()];
        header.extend(self.lon_edges.iter().map(|e| e.to_string()));
        w.write_record(&header)?;
        for i in 0..self.n_lat() {
            let mut row = vec![self.lat_edges[i].to_string()];
            row.extend(
                self.values[i * self.n_lon()..(i + 1) * self.n_lon()]
                    .iter()
                    .map(|v| v.to_string()),
            );
            w.write_record(&row)?;
        }
        w.write_record([self.lat_edges[self.n_lat()].to_string()])?;
        w.flush()?;
        Ok(())
    }

    /// Seeded synthetic raster: a handful of Gaussian population blobs over
    /// the box, normalized so the maximum cell equals 1.
    pub fn synthetic(
        seed: u64,
        lat_min: f64,
        lat_max: f64,
        lon_min: f64,
        lon_max: f64,
        n_lat: usize,
        n_lon: usize,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blobs: Vec<(f64, f64, f64, f64)> = (0..6)
            .map(|_| {
                (
                    rng.gen_range(lat_min..lat_max),
                    rng.gen_range(lon_min..lon_max),
                    rng.gen_range(0.05..0.25) * (lat_max - lat_min),
                    rng.gen_range(0.3..1.0),
                )
            })
            .collect();
        let lat_edges: Vec<f64> = (0..=n_lat)
            .map(|i| lat_min + (lat_max - lat_min) * i as f64 / n_lat as f64)
            .collect();
        let lon_edges: Vec<f64> = (0..=n_lon)
            .map(|j| lon_min + (lon_max - lon_min) * j as f64 / n_lon as f64)
            .collect();
        let mut values = Vec::with_capacity(n_lat * n_lon);
        for i in 0..n_lat {
            let lat = 0.5 * (lat_edges[i] + lat_edges[i + 1]);
            for j in 0..n_lon {
                let lon = 0.5 * (lon_edges[j] + lon_edges[j + 1]);
                let mut v = 0.0;
                for &(blat, blon, sigma, amp) in &blobs {
                    let d2 = (lat - blat).powi(2) + (lon - blon).powi(2);
                    v += amp * (-d2 / (2.0 * sigma * sigma)).exp();
                }
                values.push(v);
            }
        }
        let max = values.iter().copied().fold(f64::MIN, f64::max);
        if max > 0.0 {
            for v in &mut values {
                *v /= max;
            }
        }
        Self {
            lat_edges,
            lon_edges,
            values,
        }
    }
}

fn edge_bin(edges: &[f64], v: f64) -> Option<usize> {
    if v < edges[0] || v >= edges[edges.len() - 1] {
        return None;
    }
    match edges.binary_search_by(|e| e.total_cmp(&v)) {
        Ok(i) => Some(i.min(edges.len() - 2)),
        Err(i) => Some(i - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_bounds() {
        let mut r = PopulationRaster::zero(vec![38.0, 38.5, 39.0], vec![-78.0, -77.5, -77.0]);
        r.values = vec![0.1, 0.2, 0.3, 0.4];
        r.validate().unwrap();
        assert_eq!(r.density_at(38.25, -77.75), 0.1);
        assert_eq!(r.density_at(38.75, -77.25), 0.4);
        assert_eq!(r.density_at(40.0, -77.25), 0.0);
        // lower edge contained, upper excluded
        assert_eq!(r.density_at(38.0, -78.0), 0.1);
        assert_eq!(r.density_at(39.0, -77.25), 0.0);
    }

    #[test]
    fn mean_density_recomputable() {
        let r = PopulationRaster::synthetic(42, 38.0, 39.0, -78.0, -77.0, 20, 20);
        r.validate().unwrap();
        let mu = r.mean_density();
        // direct recomputation
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..20 {
            let mid = 38.0 + (i as f64 + 0.5) / 20.0;
            let w = mid.to_radians().cos() * (1.0 / 20.0) * (1.0 / 20.0);
            for j in 0..20 {
                num += w * r.values[i * 20 + j];
                den += w;
            }
        }
        assert!((mu - num / den).abs() < 1e-9);
    }

    #[test]
    fn synthetic_deterministic_and_capped() {
        let a = PopulationRaster::synthetic(7, 38.0, 39.0, -78.0, -77.0, 10, 10);
        let b = PopulationRaster::synthetic(7, 38.0, 39.0, -78.0, -77.0, 10, 10);
        assert_eq!(a.values, b.values);
        assert!(a.eta_w_max() < 1.0);
        assert!(a.eta_w_max() > 0.99);
    }

    #[test]
    fn csv_roundtrip() {
        let r = PopulationRaster::synthetic(3, 38.0, 39.0, -78.0, -77.0, 8, 6);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pop.csv");
        r.to_csv(&path).unwrap();
        let loaded = PopulationRaster::from_csv(&path).unwrap();
        assert_eq!(loaded.lat_edges, r.lat_edges);
        assert_eq!(loaded.lon_edges, r.lon_edges);
        for (a, b) in loaded.values.iter().zip(&r.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
