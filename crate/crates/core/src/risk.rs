//! Composite risk model: pointwise airspace risk g_a, adaptive scaling w_a,
//! cumulative exposure integral g, cone look-ahead h_a, ground-risk heuristic
//! h_p, and the trajectory-level metrics sigma_a / sigma_g / sigma_t.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy::{
    angle_diff, forward_destination, great_circle_distance, wrap_angle, GeoPoint, GeoState, TAU,
};
use crate::polyhedra::{query_point, PolyhedronSet};
use crate::population::PopulationRaster;
use crate::traffic_grid::AirspaceGrid;

/// Integration step for airspace risk, seconds.
pub const SIGMA_A_DT: f64 = 0.05;
/// Integration step for ground risk, seconds.
pub const SIGMA_G_DT: f64 = 0.5;
/// Ground risk is ignored above this crossover altitude, feet MSL.
pub const GROUND_CROSSOVER_FT: f64 = 5000.0;

/// Airspace component weights; must sum to 1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RiskWeights {
    pub w_kappa: f64,
    pub w_corridor: f64,
    pub w_nofly: f64,
}

impl Default for RiskWeights {
    fn default() -> Self {
        Self {
            w_kappa: 0.5,
            w_corridor: 0.25,
            w_nofly: 0.25,
        }
    }
}

impl RiskWeights {
    pub fn validate(&self) -> Result<()> {
        if self.w_kappa < 0.0 || self.w_corridor < 0.0 || self.w_nofly < 0.0 {
            return Err(Error::Input("risk weights must be nonnegative".into()));
        }
        let sum = self.w_kappa + self.w_corridor + self.w_nofly;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Input(format!("risk weights must sum to 1, got {sum}")));
        }
        Ok(())
    }
}

/// Forward look-ahead cone geometry and sampling counts.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConeSpec {
    pub alpha_h_rad: f64,
    pub alpha_v_rad: f64,
    pub n_r: usize,
    pub n_l: usize,
    pub n_p: usize,
    /// Ray sample spacing, feet (10x the planner's straight-segment step).
    pub delta_d_ft: f64,
}

impl Default for ConeSpec {
    fn default() -> Self {
        Self {
            alpha_h_rad: 60f64.to_radians(),
            alpha_v_rad: 10f64.to_radians(),
            n_r: 5,
            n_l: 3,
            n_p: 1,
            delta_d_ft: 10_000.0,
        }
    }
}

impl ConeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_p == 0 || self.n_r == 0 || self.n_l == 0 {
            return Err(Error::Input("cone sample counts must be positive".into()));
        }
        if (self.alpha_h_rad > 0.0 && self.n_r < 2) || (self.alpha_v_rad > 0.0 && self.n_l < 2) {
            return Err(Error::Input(
                "cone needs >= 2 rays along any nonzero angular spread".into(),
            ));
        }
        Ok(())
    }
}

/// A state with its arrival time along a trajectory.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TimedState {
    pub state: GeoState,
    pub t: f64,
}

pub type TimedPath = Vec<TimedState>;

#[derive(Debug, Clone)]
pub struct RiskModel {
    pub grid: AirspaceGrid,
    pub corridors: PolyhedronSet,
    pub noflys: PolyhedronSet,
    pub raster: PopulationRaster,
    pub weights: RiskWeights,
    pub d_max_ft: f64,
    /// Upper/lower thresholds for the adaptive scale w_a, feet.
    pub h_upper_ft: f64,
    pub h_lower_ft: f64,
    /// Apply the altitude/remaining-traversal downscaling in h_p.
    pub adaptive_ground_weights: bool,
    /// Apply w_a inside the exposure integrand instead of scaling the whole
    /// integral (comparison variant; off reproduces the published form).
    pub additive_wa: bool,
}

impl RiskModel {
    pub fn new(
        grid: AirspaceGrid,
        corridors: PolyhedronSet,
        noflys: PolyhedronSet,
        raster: PopulationRaster,
        weights: RiskWeights,
        d_max_ft: f64,
    ) -> Result<Self> {
        weights.validate()?;
        raster.validate()?;
        if d_max_ft <= 0.0 {
            return Err(Error::Input("d_max must be positive".into()));
        }
        Ok(Self {
            grid,
            corridors,
            noflys,
            raster,
            weights,
            d_max_ft,
            h_upper_ft: 1500.0,
            h_lower_ft: 1000.0,
            adaptive_ground_weights: true,
            additive_wa: false,
        })
    }

    /// A model with no traffic, no volumes and zero population.
    pub fn empty() -> Self {
        use crate::traffic_grid::GridSpec;
        let spec = GridSpec {
            lat_min: 0.0,
            lat_max: 1.0,
            lon_min: 0.0,
            lon_max: 1.0,
            alt_min_ft: 0.0,
            alt_max_ft: 1.0,
            n_lat: 1,
            n_lon: 1,
            n_alt: 1,
        };
        Self {
            grid: AirspaceGrid::empty(spec),
            corridors: PolyhedronSet::default(),
            noflys: PolyhedronSet::default(),
            raster: PopulationRaster::zero(vec![0.0, 1.0], vec![0.0, 1.0]),
            weights: RiskWeights::default(),
            d_max_ft: crate::polyhedra::D_MAX_FT,
            h_upper_ft: 1500.0,
            h_lower_ft: 1000.0,
            adaptive_ground_weights: true,
            additive_wa: false,
        }
    }

    /// Pointwise airspace risk of a position, in [0, 1].
    pub fn ga(&self, p: &GeoPoint) -> f64 {
        let ecef = query_point(p);
        self.weights.w_kappa * self.grid.density_at(p)
            + self.weights.w_corridor * self.corridors.set_cost(ecef, self.d_max_ft)
            + self.weights.w_nofly * self.noflys.set_cost(ecef, self.d_max_ft)
    }

    /// Normalized population density under a position.
    pub fn eta(&self, p: &GeoPoint) -> f64 {
        self.raster.density_at(p.lat_deg, p.lon_deg)
    }

    /// Adaptive cumulative-risk scale: 1 when the goal is clean or plenty of
    /// descent altitude remains, ramping to 0 as the aircraft commits to a
    /// risky goal.
    pub fn wa(&self, alt_ft: f64, goal: &GeoState) -> f64 {
        let dh = alt_ft - goal.pos.alt_ft;
        if self.ga(&goal.pos) <= 0.0 || dh >= self.h_upper_ft {
            1.0
        } else if dh <= self.h_lower_ft {
            0.0
        } else {
            (dh - self.h_lower_ft) / (self.h_upper_ft - self.h_lower_ft)
        }
    }

    /// Unweighted time integral of g_a along the path, trapezoidal at `dt`.
    pub fn integrate_ga(&self, path: &[TimedState], dt: f64) -> Result<f64> {
        validate_path(path)?;
        Ok(integrate_along(path, dt, |s| self.ga(s)))
    }

    /// Cumulative airspace exposure cost g(s): w_a at the path's terminal
    /// state times the exposure integral (published form), or the additive
    /// variant with the scale inside the integrand.
    pub fn cumulative_airspace_cost(&self, path: &[TimedState], goal: &GeoState) -> Result<f64> {
        validate_path(path)?;
        if self.additive_wa {
            Ok(integrate_along(path, SIGMA_A_DT, |s| {
                self.wa(s.alt_ft, goal) * self.ga(s)
            }))
        } else {
            let last = path.last().unwrap();
            let raw = integrate_along(path, SIGMA_A_DT, |s| self.ga(s));
            Ok(self.wa(last.state.pos.alt_ft, goal) * raw)
        }
    }

    /// Cone look-ahead heuristic h_a: w_a-scaled average of g_a over the
    /// forward-cone samples.
    pub fn lookahead_cost(
        &self,
        s: &GeoState,
        cone: &ConeSpec,
        gamma_bg_rad: f64,
        goal: &GeoState,
    ) -> f64 {
        let mut sum = 0.0;
        for i in 0..cone.n_r {
            let theta_i = if cone.n_r > 1 {
                s.course_rad - cone.alpha_h_rad / 2.0
                    + i as f64 * cone.alpha_h_rad / (cone.n_r - 1) as f64
            } else {
                s.course_rad
            };
            let theta_i = wrap_angle(theta_i, TAU);
            for j in 0..cone.n_l {
                let theta_j = if cone.n_l > 1 {
                    gamma_bg_rad + j as f64 * cone.alpha_v_rad / (cone.n_l - 1) as f64
                } else {
                    gamma_bg_rad
                };
                for k in 1..=cone.n_p {
                    let range = k as f64 * cone.delta_d_ft;
                    let pos = forward_destination(&s.pos, range, theta_i)
                        .with_alt(s.pos.alt_ft - range * theta_j.tan());
                    sum += self.ga(&pos);
                }
            }
        }
        let n = (cone.n_r * cone.n_l * cone.n_p) as f64;
        self.wa(s.pos.alt_ft, goal) * sum / n
    }

    /// Time-averaged normalized overflown-population cost between two
    /// consecutive states. Zero above the crossover altitude; optionally
    /// downscaled by altitude and remaining traversal.
    pub fn ground_heuristic(
        &self,
        from: &TimedState,
        to: &TimedState,
        goal: &GeoState,
        d_initial_ft: f64,
    ) -> f64 {
        let dt_total = to.t - from.t;
        if dt_total <= 0.0 {
            return 0.0;
        }
        let eta_max = self.raster.eta_w_max();
        if eta_max <= 0.0 {
            return 0.0;
        }
        let seg = [*from, *to];
        let integral = integrate_along(&seg, SIGMA_G_DT, |s| {
            if s.alt_ft >= GROUND_CROSSOVER_FT {
                return 0.0;
            }
            let (w1, w2) = if self.adaptive_ground_weights {
                let w1 = (1.0 - s.alt_ft / GROUND_CROSSOVER_FT).clamp(0.0, 1.0);
                let d_rem = great_circle_distance(s, &goal.pos);
                let w2 = if d_initial_ft > 0.0 {
                    (d_rem / d_initial_ft).clamp(0.0, 1.0)
                } else {
                    1.0
                };
                (w1, w2)
            } else {
                (1.0, 1.0)
            };
            w1 * w2 * self.eta(s)
        });
        (integral / (eta_max * dt_total)).clamp(0.0, 1.0)
    }

    /// Unweighted airspace exposure of a full trajectory, seconds.
    pub fn sigma_a(&self, path: &[TimedState]) -> Result<f64> {
        validate_path(path)?;
        Ok(integrate_along(path, SIGMA_A_DT, |s| self.ga(s)))
    }

    /// Unweighted ground exposure of a full trajectory, seconds.
    pub fn sigma_g(&self, path: &[TimedState]) -> Result<f64> {
        validate_path(path)?;
        Ok(integrate_along(path, SIGMA_G_DT, |s| self.eta(s)))
    }
}

/// Joint risk: a blend of airspace and ground exposure with
/// a = mu_eta / (mu_kappa + mu_eta).
pub fn sigma_t(sigma_a: f64, sigma_g: f64, mu_kappa: f64, mu_eta: f64) -> Result<f64> {
    let denom = mu_kappa + mu_eta;
    if denom <= 0.0 {
        return Err(Error::Input("mu_kappa + mu_eta must be positive".into()));
    }
    let a = mu_eta / denom;
    Ok(a * sigma_a + (1.0 - a) * sigma_g)
}

/// Relative difference between two risk values, in [0, 1]; 0 when both are 0.
pub fn relative_difference(sigma_s: f64, sigma_d: f64) -> f64 {
    let m = sigma_s.max(sigma_d);
    if m <= 0.0 {
        0.0
    } else {
        (sigma_s - sigma_d).abs() / m
    }
}

fn validate_path(path: &[TimedState]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::Input("empty path".into()));
    }
    if path.windows(2).any(|w| w[1].t < w[0].t) {
        return Err(Error::Input("path timestamps must be non-decreasing".into()));
    }
    Ok(())
}

/// State at time `t` along a timed path, linearly interpolated in
/// (lat, lon, alt, unwrapped course).
pub fn state_at(path: &[TimedState], t: f64) -> GeoState {
    let first = &path[0];
    let last = &path[path.len() - 1];
    if t <= first.t {
        return first.state;
    }
    if t >= last.t {
        return last.state;
    }
    let idx = match path.binary_search_by(|s| s.t.total_cmp(&t)) {
        Ok(i) => return path[i].state,
        Err(i) => i - 1,
    };
    let a = &path[idx];
    let b = &path[idx + 1];
    let span = b.t - a.t;
    if span <= 0.0 {
        return a.state;
    }
    let f = (t - a.t) / span;
    let pos = GeoPoint {
        lat_deg: a.state.pos.lat_deg + f * (b.state.pos.lat_deg - a.state.pos.lat_deg),
        lon_deg: a.state.pos.lon_deg + f * (b.state.pos.lon_deg - a.state.pos.lon_deg),
        alt_ft: a.state.pos.alt_ft + f * (b.state.pos.alt_ft - a.state.pos.alt_ft),
    };
    let course = a.state.course_rad + f * angle_diff(b.state.course_rad, a.state.course_rad);
    GeoState::new(pos, course)
}

/// Trapezoidal integral of `f(state(t))` over the path's time span at fixed
/// step `dt`, with a partial final interval.
pub fn integrate_along<F: Fn(&GeoPoint) -> f64>(path: &[TimedState], dt: f64, f: F) -> f64 {
    let t0 = path[0].t;
    let t1 = path[path.len() - 1].t;
    if t1 <= t0 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut t = t0;
    let mut prev = f(&state_at(path, t).pos);
    while t < t1 {
        let next_t = (t + dt).min(t1);
        let cur = f(&state_at(path, next_t).pos);
        acc += 0.5 * (prev + cur) * (next_t - t);
        prev = cur;
        t = next_t;
    }
    acc
}
