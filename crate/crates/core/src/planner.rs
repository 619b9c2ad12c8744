//! Gradient-guided best-first tree search over the 4-D state space
//! (position, altitude, course) producing a non-ascending emergency landing
//! trajectory minimizing f(s) = g(s) + h(s), with heuristic suppression near
//! high-risk starts and a goal-region termination test closed by a Dubins
//! segment.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dubins::{self, RiskMetric};
use crate::geodesy::{
    angle_diff, forward_destination, great_circle_distance, initial_bearing, wrap_angle, GeoState,
    TAU,
};
use crate::landing_sites::{rank_sites, LandingSite, SiteEvaluation, UtilityWeights, Wind};
use crate::risk::{sigma_t, ConeSpec, RiskModel, TimedState};
use crate::units::{EARTH_RADIUS_FT, FPS_PER_KT, FT_PER_NM, G_FPS2};
use crate::{Error, Result};

const PI: f64 = std::f64::consts::PI;

/// Engine-out glide performance envelope.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GlideEnvelope {
    pub v_bg_kts: f64,
    pub v_fe_kts: f64,
    /// Best-glide path angle, air-mass relative, radians.
    pub gamma_bg_rad: f64,
    /// Steepest commanded descent accepted by the Dubins profiles, radians.
    pub gamma_max_rad: f64,
    pub phi_max_rad: f64,
}

impl Default for GlideEnvelope {
    fn default() -> Self {
        Self {
            v_bg_kts: 70.0,
            v_fe_kts: 100.0,
            gamma_bg_rad: 4.9f64.to_radians(),
            gamma_max_rad: 15.0f64.to_radians(),
            phi_max_rad: 30.0f64.to_radians(),
        }
    }
}

impl GlideEnvelope {
    /// Reference speed: midpoint of best-glide and max flap-extended.
    pub fn v_ref_kts(&self) -> f64 {
        0.5 * (self.v_bg_kts + self.v_fe_kts)
    }

    pub fn v_ref_fps(&self) -> f64 {
        self.v_ref_kts() * FPS_PER_KT
    }

    pub fn turn_radius_ft(&self) -> f64 {
        let v = self.v_ref_fps();
        v * v / (G_FPS2 * self.phi_max_rad.tan())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_bg_kts > 0.0 && self.v_bg_kts < self.v_fe_kts) {
            return Err(Error::Input("need 0 < v_bg < v_FE".into()));
        }
        if self.gamma_bg_rad <= 0.0 || self.gamma_max_rad <= self.gamma_bg_rad {
            return Err(Error::Input("need 0 < gamma_bg < gamma_max".into()));
        }
        if self.phi_max_rad <= 0.0 || self.phi_max_rad >= PI / 2.0 {
            return Err(Error::Input("bank limit out of range".into()));
        }
        Ok(())
    }
}

/// Discrete course-change actions applied each expansion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionSet {
    pub delta_chi_deg: Vec<f64>,
    /// Straight-step arc length, feet.
    pub step_ft: f64,
}

impl Default for ActionSet {
    fn default() -> Self {
        Self {
            delta_chi_deg: vec![0.0, 22.5, -22.5, 45.0, -45.0],
            step_ft: 1000.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerConfig {
    pub envelope: GlideEnvelope,
    pub actions: ActionSet,
    /// Heuristic weights (h_d1, h_d2, h_chi, h_p, h_a).
    pub weights: [f64; 5],
    pub cone: ConeSpec,
    pub max_expansions: usize,
    /// Normalizer for the descent-angle heuristic, radians.
    pub gamma_span_rad: f64,
    /// Range inside which the heading-alignment heuristic is active, NM.
    pub chi_gate_nm: f64,
    pub goal_min_nm: f64,
    pub goal_max_nm: f64,
    pub goal_alt_surplus_ft: f64,
    pub goal_course_tol_rad: f64,
    /// Altitude that must be lost before heuristics resume when the start
    /// state itself is at risk, feet.
    pub suppression_cutoff_ft: f64,
    /// Reachability margin over best glide for site pre-checks, radians.
    pub reach_margin_rad: f64,
    /// Sampling step for Dubins segments and risk integration, feet.
    pub sample_step_ft: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            envelope: GlideEnvelope::default(),
            actions: ActionSet::default(),
            weights: airspace_only_weights(),
            cone: ConeSpec::default(),
            max_expansions: 3000,
            gamma_span_rad: 10.0f64.to_radians(),
            chi_gate_nm: 3.0,
            goal_min_nm: 0.25,
            goal_max_nm: 1.5,
            goal_alt_surplus_ft: 800.0,
            goal_course_tol_rad: 30.0f64.to_radians(),
            suppression_cutoff_ft: 500.0,
            reach_margin_rad: 0.5f64.to_radians(),
            sample_step_ft: 200.0,
        }
    }
}

/// Heuristic weights for the airspace-only configuration.
pub fn airspace_only_weights() -> [f64; 5] {
    [0.2, 0.2, 0.1, 0.0, 0.5]
}

/// Heuristic weights for the joint airspace + ground configuration.
pub fn joint_weights() -> [f64; 5] {
    [0.1, 0.1, 0.05, 0.5, 0.25]
}

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub state: GeoState,
    /// Arrival time, seconds from the emergency.
    pub t: f64,
    /// Raw exposure integral up to this node, seconds.
    pub exposure_s: f64,
    pub parent: Option<usize>,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodTag {
    Search,
    DubinsFallback,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanResult {
    pub path: Vec<TimedState>,
    pub method: MethodTag,
    pub sigma_a: f64,
    pub sigma_g: f64,
    pub sigma_t: f64,
    pub runtime_ms: f64,
    pub expansions: usize,
    pub site_id: String,
}

/// One expanded node, for diagnostics and the suppression-rule audit.
#[derive(Debug, Clone, Copy)]
pub struct TraceEntry {
    pub alt_ft: f64,
    pub h: f64,
    pub suppressed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SearchStats {
    pub expansions: usize,
    pub trace: Vec<TraceEntry>,
}

struct HeapEntry {
    f: f64,
    h_d2: f64,
    seq: u64,
    idx: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    // max-heap; invert so the smallest (f, h_d2, seq) pops first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(other.h_d2.total_cmp(&self.h_d2))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Applies one course-change action: advance through the air mass (straight
/// step or constant-radius arc chord), drift with the wind over the segment
/// duration, descend by air distance at the best-glide angle.
pub fn expand(
    node: &SearchNode,
    actions: &ActionSet,
    envelope: &GlideEnvelope,
    wind: &Wind,
) -> Vec<SearchNode> {
    let v = envelope.v_ref_fps();
    let r = envelope.turn_radius_ft();
    let chi = node.state.course_rad;
    actions
        .delta_chi_deg
        .iter()
        .map(|&dchi_deg| {
            let dchi = dchi_deg.to_radians();
            let (air_dist, advance, bearing, course) = if dchi == 0.0 {
                (actions.step_ft, actions.step_ft, chi, chi)
            } else {
                let arc = r * dchi.abs();
                let chord = 2.0 * r * (dchi.abs() / 2.0).sin();
                (arc, chord, chi + dchi / 2.0, chi + dchi)
            };
            let duration = air_dist / v;
            let mut pos = forward_destination(&node.state.pos, advance, wrap_angle(bearing, TAU));
            if wind.speed_kts != 0.0 {
                let drift = wind.speed_kts * FPS_PER_KT * duration;
                pos = forward_destination(&pos, drift, wrap_angle(wind.from_rad + PI, TAU));
            }
            let alt = node.state.pos.alt_ft - air_dist * envelope.gamma_bg_rad.tan();
            SearchNode {
                state: GeoState::new(pos.with_alt(alt), wrap_angle(course, TAU)),
                t: node.t + duration,
                exposure_s: node.exposure_s,
                parent: None,
                f: 0.0,
                g: 0.0,
                h: 0.0,
            }
        })
        .collect()
}

/// Ground-relative best-glide angle with the headwind component along the
/// current course folded into ground speed.
fn gamma_bg_ground(envelope: &GlideEnvelope, wind: &Wind, course_rad: f64) -> f64 {
    let v = envelope.v_ref_fps();
    let headwind = wind.speed_kts * FPS_PER_KT * (wind.from_rad - course_rad).cos();
    let ground_speed = (v * envelope.gamma_bg_rad.cos() - headwind).max(1.0);
    (v * envelope.gamma_bg_rad.sin() / ground_speed).atan()
}

/// The five heuristic terms (h_d1, h_d2, h_chi, h_p, h_a) at a state.
pub fn heuristic_terms(
    node: &SearchNode,
    model: &RiskModel,
    fix: &GeoState,
    d_initial_ft: f64,
    cfg: &PlannerConfig,
    wind: &Wind,
) -> [f64; 5] {
    let s = &node.state;
    let d = great_circle_distance(&s.pos, &fix.pos);
    let gamma_g = gamma_bg_ground(&cfg.envelope, wind, s.course_rad);
    let h_d1 = if d > 1.0 {
        // aim at the middle of the goal-region altitude window, not the fix
        // itself, so the equilibrium surplus lands inside the window
        let target_alt = fix.pos.alt_ft + 0.5 * cfg.goal_alt_surplus_ft;
        let gamma_req = ((s.pos.alt_ft - target_alt) / d).atan();
        ((gamma_req - gamma_g).abs() / cfg.gamma_span_rad).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let h_d2 = if d_initial_ft > 0.0 {
        (d / d_initial_ft).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let h_chi = if d <= cfg.chi_gate_nm * FT_PER_NM && d > 1.0 {
        angle_diff(s.course_rad, initial_bearing(&s.pos, &fix.pos)).abs() / PI
    } else {
        0.0
    };
    // h_p over a one-step straight look-ahead segment
    let ahead = forward_destination(&s.pos, cfg.actions.step_ft, s.course_rad)
        .with_alt(s.pos.alt_ft - cfg.actions.step_ft * cfg.envelope.gamma_bg_rad.tan());
    let from = TimedState { state: *s, t: node.t };
    let to = TimedState {
        state: GeoState::new(ahead, s.course_rad),
        t: node.t + cfg.actions.step_ft / cfg.envelope.v_ref_fps(),
    };
    let h_p = model.ground_heuristic(&from, &to, fix, d_initial_ft);
    let h_a = model.lookahead_cost(s, &cfg.cone, cfg.envelope.gamma_bg_rad, fix);
    [h_d1, h_d2, h_chi, h_p, h_a]
}

/// f = g + h with the start-at-risk suppression rule: h is forced to zero
/// until the path has shed `suppression_cutoff_ft` below the start altitude.
/// Returns (f, g, h, h_d2, suppressed).
pub fn total_cost(
    node: &SearchNode,
    model: &RiskModel,
    fix: &GeoState,
    start: &GeoState,
    start_at_risk: bool,
    d_initial_ft: f64,
    cfg: &PlannerConfig,
    wind: &Wind,
) -> (f64, f64, f64, f64, bool) {
    let g = if model.additive_wa {
        node.exposure_s
    } else {
        model.wa(node.state.pos.alt_ft, fix) * node.exposure_s
    };
    let terms = heuristic_terms(node, model, fix, d_initial_ft, cfg, wind);
    let suppressed =
        start_at_risk && (start.pos.alt_ft - node.state.pos.alt_ft) < cfg.suppression_cutoff_ft;
    let h = if suppressed {
        0.0
    } else {
        cfg.weights.iter().zip(terms.iter()).map(|(w, t)| w * t).sum()
    };
    (g + h, g, h, terms[1], suppressed)
}

/// Exposure added over one segment: Simpson on g_a (or w_a·g_a in the
/// additive variant).
fn segment_exposure(model: &RiskModel, a: &TimedState, b: &TimedState, fix: &GeoState) -> f64 {
    let dt = b.t - a.t;
    if dt <= 0.0 {
        return 0.0;
    }
    let seg = [*a, *b];
    let mid = crate::risk::state_at(&seg, a.t + 0.5 * dt);
    let eval = |s: &GeoState| {
        if model.additive_wa {
            model.wa(s.pos.alt_ft, fix) * model.ga(&s.pos)
        } else {
            model.ga(&s.pos)
        }
    };
    dt / 6.0 * (eval(&a.state) + 4.0 * eval(&mid) + eval(&b.state))
}

fn state_key(s: &GeoState, cos_lat0: f64, cfg: &PlannerConfig) -> (i64, i64, i64, i64) {
    let res_h = cfg.actions.step_ft / 2.0;
    let res_alt = (cfg.actions.step_ft * cfg.envelope.gamma_bg_rad.tan() / 2.0).max(1.0);
    let res_chi = cfg
        .actions
        .delta_chi_deg
        .iter()
        .map(|d| d.abs().to_radians())
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min)
        / 2.0;
    (
        (s.pos.lat_deg.to_radians() * EARTH_RADIUS_FT / res_h).round() as i64,
        (s.pos.lon_deg.to_radians() * EARTH_RADIUS_FT * cos_lat0 / res_h).round() as i64,
        (s.pos.alt_ft / res_alt).round() as i64,
        (wrap_angle(s.course_rad, TAU) / res_chi).round() as i64,
    )
}

/// Goal-region membership: horizontal band around the approach fix, altitude
/// surplus window over the direct-glide requirement, course alignment, and
/// Dubins connectability. Returns the chosen closing path on success.
fn goal_check(
    s: &GeoState,
    fix: &GeoState,
    cfg: &PlannerConfig,
) -> Option<dubins::DubinsPath> {
    let d = great_circle_distance(&s.pos, &fix.pos);
    if d < cfg.goal_min_nm * FT_PER_NM || d > cfg.goal_max_nm * FT_PER_NM {
        return None;
    }
    let required = fix.pos.alt_ft + d * cfg.envelope.gamma_bg_rad.tan();
    let surplus = s.pos.alt_ft - required;
    if !(0.0..=cfg.goal_alt_surplus_ft).contains(&surplus) {
        return None;
    }
    if angle_diff(s.course_rad, fix.course_rad).abs() > cfg.goal_course_tol_rad {
        return None;
    }
    let cands = dubins::candidates(
        s,
        fix,
        cfg.envelope.turn_radius_ft(),
        cfg.envelope.gamma_bg_rad,
        cfg.envelope.gamma_max_rad,
    );
    cands
        .into_iter()
        .min_by(|a, b| {
            a.length_ft
                .total_cmp(&b.length_ft)
                .then(a.word.cmp(&b.word))
                .then(a.s_turn.cmp(&b.s_turn))
        })
}

/// Best-first search toward one site's approach fix. Returns the plan (None
/// when the expansion cap is exhausted before the goal region is reached)
/// plus expansion statistics.
pub fn search(
    s0: &GeoState,
    eval: &SiteEvaluation,
    model: &RiskModel,
    wind: &Wind,
    cfg: &PlannerConfig,
) -> (Option<PlanResult>, SearchStats) {
    let started = Instant::now();
    let fix = eval.approach_fix;
    let d_initial = great_circle_distance(&s0.pos, &fix.pos);
    let start_at_risk = model.ga(&s0.pos) > 0.0;
    let cos_lat0 = s0.pos.lat_deg.to_radians().cos();

    let mut arena: Vec<SearchNode> = Vec::new();
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut closed: HashMap<(i64, i64, i64, i64), f64> = HashMap::new();
    let mut stats = SearchStats::default();
    let mut seq: u64 = 0;

    let mut root = SearchNode {
        state: *s0,
        t: 0.0,
        exposure_s: 0.0,
        parent: None,
        f: 0.0,
        g: 0.0,
        h: 0.0,
    };
    let (f, g, h, h_d2, _) =
        total_cost(&root, model, &fix, s0, start_at_risk, d_initial, cfg, wind);
    root.f = f;
    root.g = g;
    root.h = h;
    arena.push(root);
    closed.insert(state_key(s0, cos_lat0, cfg), g);
    heap.push(HeapEntry { f, h_d2, seq, idx: 0 });
    seq += 1;

    while let Some(entry) = heap.pop() {
        if stats.expansions >= cfg.max_expansions {
            return (None, stats);
        }
        let idx = entry.idx;
        let node = arena[idx].clone();
        let suppressed = start_at_risk
            && (s0.pos.alt_ft - node.state.pos.alt_ft) < cfg.suppression_cutoff_ft;
        stats.trace.push(TraceEntry {
            alt_ft: node.state.pos.alt_ft,
            h: node.h,
            suppressed,
        });
        stats.expansions += 1;

        if let Some(closing) = goal_check(&node.state, &fix, cfg) {
            let path = reconstruct(&arena, idx, &closing, cfg);
            let result = finish(path, model, &fix, MethodTag::Search, started, &stats, eval);
            return (Some(result), stats);
        }

        for mut child in expand(&node, &cfg.actions, &cfg.envelope, wind) {
            if child.state.pos.alt_ft < fix.pos.alt_ft {
                continue;
            }
            let a = TimedState { state: node.state, t: node.t };
            let b = TimedState { state: child.state, t: child.t };
            child.exposure_s = node.exposure_s + segment_exposure(model, &a, &b, &fix);
            child.parent = Some(idx);
            let (f, g, h, h_d2, _) =
                total_cost(&child, model, &fix, s0, start_at_risk, d_initial, cfg, wind);
            child.f = f;
            child.g = g;
            child.h = h;
            let key = state_key(&child.state, cos_lat0, cfg);
            match closed.get(&key) {
                Some(&prev_g) if prev_g <= g => continue,
                _ => {
                    closed.insert(key, g);
                }
            }
            let child_idx = arena.len();
            arena.push(child);
            heap.push(HeapEntry { f, h_d2, seq, idx: child_idx });
            seq += 1;
        }
    }
    (None, stats)
}

fn reconstruct(
    arena: &[SearchNode],
    goal_idx: usize,
    closing: &dubins::DubinsPath,
    cfg: &PlannerConfig,
) -> Vec<TimedState> {
    let mut chain = Vec::new();
    let mut cur = Some(goal_idx);
    while let Some(i) = cur {
        chain.push(TimedState { state: arena[i].state, t: arena[i].t });
        cur = arena[i].parent;
    }
    chain.reverse();
    let t0 = chain.last().map(|s| s.t).unwrap_or(0.0);
    let closing_samples = closing.sample(cfg.sample_step_ft, cfg.envelope.v_ref_kts());
    for ts in closing_samples.into_iter().skip(1) {
        chain.push(TimedState { state: ts.state, t: t0 + ts.t });
    }
    chain
}

fn blend_constants(model: &RiskModel) -> (f64, f64) {
    (model.grid.mu_kappa, model.raster.mean_density())
}

fn finish(
    path: Vec<TimedState>,
    model: &RiskModel,
    _fix: &GeoState,
    method: MethodTag,
    started: Instant,
    stats: &SearchStats,
    eval: &SiteEvaluation,
) -> PlanResult {
    let sigma_a = model.sigma_a(&path).unwrap_or(f64::NAN);
    let sigma_g = model.sigma_g(&path).unwrap_or(f64::NAN);
    let (mu_k, mu_e) = blend_constants(model);
    let st = if mu_k + mu_e > 0.0 {
        sigma_t(sigma_a, sigma_g, mu_k, mu_e).unwrap_or(sigma_a)
    } else {
        sigma_a
    };
    PlanResult {
        path,
        method,
        sigma_a,
        sigma_g,
        sigma_t: st,
        runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        expansions: stats.expansions,
        site_id: eval.site.id.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanStatus {
    /// Search succeeded on the highest-utility site.
    BestSite,
    /// Search failed on the best site but succeeded on an alternate.
    MultipleSite,
    /// All searches failed; the minimum-risk Dubins path is the answer.
    DubinsFallback,
    /// No search solution and no feasible Dubins word.
    TotalFailure,
}

/// Complete planning outcome: the search result (if any), the best-site
/// Dubins baseline (always attempted), and the status tag. Both results are
/// retained for benchmarking.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanEnvelope {
    pub search: Option<PlanResult>,
    pub dubins: Option<PlanResult>,
    pub status: PlanStatus,
    pub best_site: bool,
}

/// Ranks sites, runs the search in utility order until one succeeds, and
/// always computes the minimum-risk Dubins solution for the best site.
pub fn plan(
    s0: &GeoState,
    catalog: &[LandingSite],
    model: &RiskModel,
    wind: &Wind,
    cfg: &PlannerConfig,
    metric: RiskMetric,
) -> Result<PlanEnvelope> {
    cfg.envelope.validate()?;
    let min_slope = cfg.envelope.gamma_bg_rad + cfg.reach_margin_rad;
    let (evals, _) = rank_sites(
        catalog,
        s0,
        wind,
        &UtilityWeights::default(),
        cfg.envelope.gamma_bg_rad,
        min_slope,
    )?;
    if evals.is_empty() {
        return Ok(PlanEnvelope {
            search: None,
            dubins: None,
            status: PlanStatus::TotalFailure,
            best_site: false,
        });
    }

    let dubins_result = {
        let started = Instant::now();
        let best = &evals[0];
        let cands = dubins::candidates(
            s0,
            &best.approach_fix,
            cfg.envelope.turn_radius_ft(),
            cfg.envelope.gamma_bg_rad,
            cfg.envelope.gamma_max_rad,
        );
        let (mu_k, mu_e) = blend_constants(model);
        dubins::min_risk_select(
            &cands,
            model,
            metric,
            cfg.envelope.v_ref_kts(),
            cfg.sample_step_ft,
            mu_k,
            mu_e,
        )
        .map(|sel| PlanResult {
            path: sel.timed,
            method: MethodTag::DubinsFallback,
            sigma_a: sel.sigma_a,
            sigma_g: sel.sigma_g,
            sigma_t: sel.sigma_t,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
            expansions: 0,
            site_id: best.site.id.clone(),
        })
    };

    let mut search_result = None;
    let mut best_site = false;
    for (i, eval) in evals.iter().enumerate() {
        let (result, _) = search(s0, eval, model, wind, cfg);
        if let Some(r) = result {
            best_site = i == 0;
            search_result = Some(r);
            break;
        }
    }

    let status = match (&search_result, &dubins_result) {
        (Some(_), _) if best_site => PlanStatus::BestSite,
        (Some(_), _) => PlanStatus::MultipleSite,
        (None, Some(_)) => PlanStatus::DubinsFallback,
        (None, None) => PlanStatus::TotalFailure,
    };
    Ok(PlanEnvelope {
        search: search_result,
        dubins: dubins_result,
        status,
        best_site,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesy::GeoPoint;
    use crate::landing_sites::approach_fix;

    fn test_site() -> LandingSite {
        LandingSite {
            id: "TST18".into(),
            lat: 38.8,
            lon: -77.0,
            elev_ft: 50.0,
            true_heading_deg: 180.0,
            length_ft: 5000.0,
            width_ft: 150.0,
            commercial: false,
            military: false,
        }
    }

    fn eval_for(site: &LandingSite, cfg: &PlannerConfig, s0: &GeoState) -> SiteEvaluation {
        let fix = approach_fix(site, cfg.envelope.gamma_bg_rad);
        SiteEvaluation {
            site: site.clone(),
            approach_fix: fix,
            gamma_to_fix_rad: crate::landing_sites::slope_to_fix(s0, &fix).unwrap(),
            headwind_kts: 0.0,
            utility: 1.0,
        }
    }

    fn node_at(state: GeoState) -> SearchNode {
        SearchNode {
            state,
            t: 0.0,
            exposure_s: 0.0,
            parent: None,
            f: 0.0,
            g: 0.0,
            h: 0.0,
        }
    }

    #[test]
    fn straight_step_drop_and_advance() {
        let env = GlideEnvelope::default();
        let actions = ActionSet::default();
        let node = node_at(GeoState::new(GeoPoint::new(38.8, -77.0, 5000.0), 0.0));
        let kids = expand(&node, &actions, &env, &Wind::CALM);
        assert_eq!(kids.len(), 5);
        let straight = &kids[0];
        let d = great_circle_distance(&node.state.pos, &straight.state.pos);
        assert!((d - 1000.0).abs() < 0.1);
        let drop = 5000.0 - straight.state.pos.alt_ft;
        assert!((drop - 1000.0 * 4.9f64.to_radians().tan()).abs() < 1e-6);
        assert!((drop - 85.7).abs() < 0.1);
        assert_eq!(straight.state.course_rad, 0.0);
        let dur = straight.t - node.t;
        assert!((dur - 1000.0 / env.v_ref_fps()).abs() < 1e-12);
    }

    #[test]
    fn wind_drift_displacement() {
        let env = GlideEnvelope::default();
        let actions = ActionSet::default();
        let node = node_at(GeoState::new(GeoPoint::new(38.8, -77.0, 5000.0), 0.0));
        let wind = Wind { speed_kts: 7.0, from_rad: 90.0f64.to_radians() };
        let calm = &expand(&node, &actions, &env, &Wind::CALM)[0];
        let blown = &expand(&node, &actions, &env, &wind)[0];
        let dur = calm.t - node.t;
        let expected = 7.0 * FPS_PER_KT * dur;
        let moved = great_circle_distance(&calm.state.pos, &blown.state.pos);
        assert!((moved - expected).abs() < 0.5, "moved {moved} expected {expected}");
        // 6.5 s at 7 kt is about 77 ft
        assert!((7.0 * FPS_PER_KT * 6.5 - 76.8).abs() < 0.5);
    }

    #[test]
    fn turn_children_mirror_in_still_air() {
        let env = GlideEnvelope::default();
        let actions = ActionSet::default();
        let node = node_at(GeoState::new(GeoPoint::new(38.8, -77.0, 5000.0), 0.0));
        let kids = expand(&node, &actions, &env, &Wind::CALM);
        let left = kids
            .iter()
            .find(|k| (k.state.course_rad - 315f64.to_radians()).abs() < 1e-9)
            .unwrap();
        let right = kids
            .iter()
            .find(|k| (k.state.course_rad - 45f64.to_radians()).abs() < 1e-9)
            .unwrap();
        assert!((left.state.pos.lat_deg - right.state.pos.lat_deg).abs() < 1e-9);
        assert!(
            ((left.state.pos.lon_deg - node.state.pos.lon_deg)
                + (right.state.pos.lon_deg - node.state.pos.lon_deg))
                .abs()
                < 1e-9
        );
        assert_eq!(left.state.pos.alt_ft, right.state.pos.alt_ft);
    }

    #[test]
    fn turn_rate_respects_radius() {
        let env = GlideEnvelope::default();
        let r = env.turn_radius_ft();
        let v = env.v_ref_fps();
        assert!((r - v * v / (G_FPS2 * 30f64.to_radians().tan())).abs() < 1e-9);
        // chord of the 45 deg arc
        let actions = ActionSet::default();
        let node = node_at(GeoState::new(GeoPoint::new(38.8, -77.0, 5000.0), 0.0));
        let kids = expand(&node, &actions, &env, &Wind::CALM);
        let right = kids
            .iter()
            .find(|k| (k.state.course_rad - 45f64.to_radians()).abs() < 1e-9)
            .unwrap();
        let chord = great_circle_distance(&node.state.pos, &right.state.pos);
        assert!((chord - 2.0 * r * (22.5f64.to_radians()).sin()).abs() < 0.5);
    }

    #[test]
    fn clean_straight_in_scenario_succeeds_with_zero_risk() {
        let cfg = PlannerConfig::default();
        let model = RiskModel::empty();
        let site = test_site();
        let fix = approach_fix(&site, cfg.envelope.gamma_bg_rad);
        // 8 NM north of the fix on extended final, on glide with 300 ft to spare
        let d = 8.0 * FT_PER_NM;
        let pos = forward_destination(&fix.pos, d, 0.0)
            .with_alt(fix.pos.alt_ft + d * cfg.envelope.gamma_bg_rad.tan() + 300.0);
        let s0 = GeoState::new(pos, 180f64.to_radians());
        let eval = eval_for(&site, &cfg, &s0);
        let (result, stats) = search(&s0, &eval, &model, &Wind::CALM, &cfg);
        let result = result.expect("search should reach the goal");
        assert!(stats.expansions < cfg.max_expansions);
        assert_eq!(result.sigma_a, 0.0);
        assert_eq!(result.method, MethodTag::Search);
        for w in result.path.windows(2) {
            assert!(w[1].state.pos.alt_ft <= w[0].state.pos.alt_ft + 1e-9);
            assert!(w[1].t > w[0].t);
        }
        let last = &result.path.last().unwrap().state;
        assert!(great_circle_distance(&last.pos, &fix.pos) < 10.0);
    }

    #[test]
    fn search_is_deterministic() {
        let cfg = PlannerConfig::default();
        let model = RiskModel::empty();
        let site = test_site();
        let fix = approach_fix(&site, cfg.envelope.gamma_bg_rad);
        let d = 6.0 * FT_PER_NM;
        let pos = forward_destination(&fix.pos, d, 30f64.to_radians())
            .with_alt(fix.pos.alt_ft + d * cfg.envelope.gamma_bg_rad.tan() + 500.0);
        let s0 = GeoState::new(pos, 200f64.to_radians());
        let eval = eval_for(&site, &cfg, &s0);
        let (a, sa) = search(&s0, &eval, &model, &Wind::CALM, &cfg);
        let (b, sb) = search(&s0, &eval, &model, &Wind::CALM, &cfg);
        assert_eq!(sa.expansions, sb.expansions);
        let (a, b) = (a.unwrap(), b.unwrap());
        assert_eq!(a.path.len(), b.path.len());
        for (x, y) in a.path.iter().zip(b.path.iter()) {
            assert_eq!(x.state.pos.lat_deg, y.state.pos.lat_deg);
            assert_eq!(x.t, y.t);
        }
    }

    #[test]
    fn plan_tags_best_site() {
        let cfg = PlannerConfig::default();
        let model = RiskModel::empty();
        let site = test_site();
        let fix = approach_fix(&site, cfg.envelope.gamma_bg_rad);
        let d = 8.0 * FT_PER_NM;
        // enough altitude to clear the reachability margin over best glide
        let pos = forward_destination(&fix.pos, d, 0.0)
            .with_alt(fix.pos.alt_ft + d * (cfg.envelope.gamma_bg_rad + 0.6f64.to_radians()).tan());
        let s0 = GeoState::new(pos, 180f64.to_radians());
        let env = plan(&s0, &[site], &model, &Wind::CALM, &cfg, RiskMetric::Airspace).unwrap();
        assert_eq!(env.status, PlanStatus::BestSite);
        assert!(env.search.is_some());
        assert!(env.dubins.is_some(), "baseline Dubins always attempted");
    }

    #[test]
    fn plan_unreachable_is_total_failure() {
        let cfg = PlannerConfig::default();
        let model = RiskModel::empty();
        let site = test_site();
        // 40 NM away at 2000 ft: slope far below best glide
        let pos = GeoPoint::new(38.8, -76.2, 2000.0);
        let s0 = GeoState::new(pos, 270f64.to_radians());
        let out = plan(&s0, &[site], &model, &Wind::CALM, &cfg, RiskMetric::Airspace).unwrap();
        assert_eq!(out.status, PlanStatus::TotalFailure);
    }

    #[test]
    fn heap_tie_break_orders_by_f_then_hd2_then_seq() {
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry { f: 1.0, h_d2: 0.5, seq: 2, idx: 0 });
        heap.push(HeapEntry { f: 1.0, h_d2: 0.2, seq: 3, idx: 1 });
        heap.push(HeapEntry { f: 0.5, h_d2: 0.9, seq: 4, idx: 2 });
        heap.push(HeapEntry { f: 1.0, h_d2: 0.2, seq: 1, idx: 3 });
        let order: Vec<usize> = std::iter::from_fn(|| heap.pop()).map(|e| e.idx).collect();
        assert_eq!(order, vec![2, 3, 1, 0]);
    }
}
