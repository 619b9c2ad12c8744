//! Runway catalog, approach-fix construction, headwind and slope terms, and
//! utility-based landing site ranking.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy::{
    forward_destination, great_circle_distance, wrap_angle, GeoPoint, GeoState, TAU,
};
use crate::units::FT_PER_NM;

/// Final approach fix stands 1 NM from the runway threshold.
pub const D_FIX_FT: f64 = FT_PER_NM;

/// One runway end.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LandingSite {
    pub id: String,
    pub lat: f64,
    pub lon: f64,
    pub elev_ft: f64,
    pub true_heading_deg: f64,
    pub length_ft: f64,
    pub width_ft: f64,
    pub commercial: bool,
    pub military: bool,
}

impl LandingSite {
    pub fn heading_rad(&self) -> f64 {
        wrap_angle(self.true_heading_deg.to_radians(), TAU)
    }

    pub fn touchdown(&self) -> GeoPoint {
        GeoPoint::new(self.lat, self.lon, self.elev_ft)
    }
}

/// Ranking weights: slope, headwind, dimensions, commercial, military.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UtilityWeights {
    pub w_gamma: f64,
    pub w_wind: f64,
    pub w_dim: f64,
    pub w_com: f64,
    pub w_mil: f64,
}

impl Default for UtilityWeights {
    fn default() -> Self {
        Self {
            w_gamma: 0.5,
            w_wind: 0.1,
            w_dim: 0.05,
            w_com: 0.15,
            w_mil: 0.15,
        }
    }
}

/// Steady wind: speed and the direction it blows from.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Wind {
    pub speed_kts: f64,
    pub from_rad: f64,
}

impl Wind {
    pub const CALM: Wind = Wind {
        speed_kts: 0.0,
        from_rad: 0.0,
    };
}

#[derive(Debug, Clone)]
pub struct SiteEvaluation {
    pub site: LandingSite,
    /// Approach fix: 1 NM out on the reciprocal heading, course = runway
    /// heading, altitude above touchdown per the glide path angle.
    pub approach_fix: GeoState,
    pub gamma_to_fix_rad: f64,
    pub headwind_kts: f64,
    pub utility: f64,
}

/// Approach fix for a site: position 1 NM from touchdown along the
/// reciprocal runway heading, inbound course, altitude z + d_f tan(gamma).
pub fn approach_fix(site: &LandingSite, gamma_bg_rad: f64) -> GeoState {
    debug_assert!(gamma_bg_rad >= 0.0);
    let reciprocal = wrap_angle(site.heading_rad() - std::f64::consts::PI, TAU);
    let pos = forward_destination(&site.touchdown(), D_FIX_FT, reciprocal)
        .with_alt(site.elev_ft + D_FIX_FT * gamma_bg_rad.tan());
    GeoState::new(pos, site.heading_rad())
}

/// Signed flight path angle from a state to the fix: altitude drop over
/// great-circle range.
pub fn slope_to_fix(s0: &GeoState, fix: &GeoState) -> Result<f64> {
    let d = great_circle_distance(&s0.pos, &fix.pos);
    if d <= 0.0 {
        return Err(Error::Input("slope undefined at zero range".into()));
    }
    Ok(((s0.pos.alt_ft - fix.pos.alt_ft) / d).atan())
}

/// Headwind component on final at the runway heading; negative = tailwind.
pub fn headwind_component(site: &LandingSite, wind: &Wind) -> f64 {
    wind.speed_kts * (wind.from_rad - site.heading_rad()).cos()
}

#[derive(Debug, Clone, Default)]
pub struct RankingStatus {
    pub excluded_unreachable: usize,
}

/// Scores and ranks sites by the utility function with per-set suprema
/// normalization, descending, deterministic id tie-break. Sites the aircraft
/// cannot glide to (slope below the required minimum) are excluded.
pub fn rank_sites(
    sites: &[LandingSite],
    s0: &GeoState,
    wind: &Wind,
    weights: &UtilityWeights,
    gamma_bg_rad: f64,
    min_slope_rad: f64,
) -> Result<(Vec<SiteEvaluation>, RankingStatus)> {
    if sites.is_empty() {
        return Err(Error::Input("no candidate landing sites".into()));
    }
    let mut status = RankingStatus::default();
    let mut evals: Vec<SiteEvaluation> = Vec::new();
    for site in sites {
        let fix = approach_fix(site, gamma_bg_rad);
        let gamma = slope_to_fix(s0, &fix)?;
        if gamma < min_slope_rad {
            status.excluded_unreachable += 1;
            continue;
        }
        evals.push(SiteEvaluation {
            site: site.clone(),
            approach_fix: fix,
            gamma_to_fix_rad: gamma,
            headwind_kts: headwind_component(site, wind),
            utility: 0.0,
        });
    }
    if evals.is_empty() {
        return Ok((evals, status));
    }

    let gamma_max = evals
        .iter()
        .map(|e| e.gamma_to_fix_rad)
        .fold(f64::NEG_INFINITY, f64::max);
    let hw_max = evals
        .iter()
        .map(|e| e.headwind_kts)
        .fold(f64::NEG_INFINITY, f64::max);
    let hw_min = evals
        .iter()
        .map(|e| e.headwind_kts)
        .fold(f64::INFINITY, f64::min);
    let len_max = evals.iter().map(|e| e.site.length_ft).fold(0.0, f64::max);
    let wid_max = evals.iter().map(|e| e.site.width_ft).fold(0.0, f64::max);

    for e in &mut evals {
        // Reachable sites have gamma > 0, so the supremum is positive.
        let u_gamma = e.gamma_to_fix_rad / gamma_max;
        let u_wind = if hw_max > 0.0 {
            e.headwind_kts / hw_max
        } else {
            // All-tailwind guard: the published ratio is undefined or
            // order-reversing when the supremum is non-positive.
            (e.headwind_kts - hw_min) / (hw_max - hw_min + 1e-9)
        };
        let u_dim = 0.5 * (e.site.length_ft / len_max + e.site.width_ft / wid_max);
        let u_com = if e.site.commercial { 0.0 } else { 1.0 };
        let u_mil = if e.site.military { 0.0 } else { 1.0 };
        e.utility = weights.w_gamma * u_gamma
            + weights.w_wind * u_wind
            + weights.w_dim * u_dim
            + weights.w_com * u_com
            + weights.w_mil * u_mil;
    }
    evals.sort_by(|a, b| {
        b.utility
            .total_cmp(&a.utility)
            .then_with(|| a.site.id.cmp(&b.site.id))
    });
    Ok((evals, status))
}

pub fn load_catalog(path: &Path) -> Result<Vec<LandingSite>> {
    let f = std::fs::File::open(path)?;
    let sites: Vec<LandingSite> = serde_json::from_reader(std::io::BufReader::new(f))?;
    if sites.is_empty() {
        return Err(Error::Input("empty site catalog".into()));
    }
    Ok(sites)
}

/// Built-in sample catalog (Washington, D.C. area runway ends; values from
/// public charts, editable via an external catalog file).
pub fn sample_catalog() -> Vec<LandingSite> {
    serde_json::from_str(include_str!("../data/landing_sites.json"))
        .expect("embedded catalog is valid")
}
