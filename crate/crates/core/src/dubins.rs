//! 3-D Dubins baseline and fallback: turn-straight-turn paths at fixed turn
//! radius with a glide-consistent altitude profile, S-turn extension for
//! excess-altitude dissipation, and minimum-risk candidate selection.
//!
//! Geometry is computed in a local tangent plane anchored at the midpoint of
//! start and goal, then mapped back to geodetic coordinates; the error is
//! negligible at the sub-60 NM ranges involved.

use serde::{Deserialize, Serialize};

use crate::geodesy::{wrap_angle, GeoPoint, GeoState, TAU};
use crate::risk::{RiskModel, TimedState};
use crate::units::{EARTH_RADIUS_FT, FPS_PER_KT};

const PI: f64 = std::f64::consts::PI;
const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// Turn-straight-turn word, in deterministic tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Word {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
}

pub const ALL_WORDS: [Word; 4] = [Word::Lsl, Word::Rsr, Word::Lsr, Word::Rsl];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum STurnSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Segment {
    /// Left arc, radians.
    Left(f64),
    /// Right arc, radians.
    Right(f64),
    /// Straight run, feet.
    Straight(f64),
}

impl Segment {
    fn length_ft(&self, radius_ft: f64) -> f64 {
        match self {
            Segment::Left(a) | Segment::Right(a) => radius_ft * a,
            Segment::Straight(l) => *l,
        }
    }
}

/// Local equirectangular tangent plane: x east, y north, feet.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Frame {
    lat0_deg: f64,
    lon0_deg: f64,
    cos_lat0: f64,
}

impl Frame {
    pub fn anchored_between(a: &GeoPoint, b: &GeoPoint) -> Self {
        let lat0 = 0.5 * (a.lat_deg + b.lat_deg);
        Self {
            lat0_deg: lat0,
            lon0_deg: 0.5 * (a.lon_deg + b.lon_deg),
            cos_lat0: lat0.to_radians().cos(),
        }
    }

    pub fn to_planar(&self, p: &GeoPoint) -> (f64, f64) {
        let x = (p.lon_deg - self.lon0_deg).to_radians() * EARTH_RADIUS_FT * self.cos_lat0;
        let y = (p.lat_deg - self.lat0_deg).to_radians() * EARTH_RADIUS_FT;
        (x, y)
    }

    pub fn to_geo(&self, x: f64, y: f64, alt_ft: f64) -> GeoPoint {
        GeoPoint {
            lat_deg: self.lat0_deg + (y / EARTH_RADIUS_FT).to_degrees(),
            lon_deg: self.lon0_deg + (x / (EARTH_RADIUS_FT * self.cos_lat0)).to_degrees(),
            alt_ft,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DubinsPath {
    pub word: Word,
    pub s_turn: Option<STurnSide>,
    pub segments: Vec<Segment>,
    pub radius_ft: f64,
    pub frame: Frame,
    /// Planar start pose (x, y, math heading).
    start: (f64, f64, f64),
    pub start_alt_ft: f64,
    pub end_alt_ft: f64,
    /// Total horizontal length, feet.
    pub length_ft: f64,
    /// Commanded (constant) descent angle, radians.
    pub gamma_rad: f64,
}

impl DubinsPath {
    /// Samples the path into a timed state sequence at roughly `step_ft`
    /// spacing, flown at `ground_speed_kts`. Endpoints are exact.
    pub fn sample(&self, step_ft: f64, ground_speed_kts: f64) -> Vec<TimedState> {
        let v = ground_speed_kts * FPS_PER_KT;
        let mut out = Vec::new();
        let (mut x, mut y, mut theta) = self.start;
        let mut s_total = 0.0;
        let drop_rate = self.gamma_rad.tan();
        let push = |x: f64, y: f64, theta: f64, s: f64, out: &mut Vec<TimedState>| {
            let alt = self.start_alt_ft - s * drop_rate;
            let pos = self.frame.to_geo(x, y, alt);
            out.push(TimedState {
                state: GeoState::new(pos, wrap_angle(HALF_PI - theta, TAU)),
                t: s / v,
            });
        };
        push(x, y, theta, 0.0, &mut out);
        for seg in &self.segments {
            let len = seg.length_ft(self.radius_ft);
            if len <= 0.0 {
                continue;
            }
            let n = (len / step_ft).ceil().max(1.0) as usize;
            for i in 1..=n {
                let ds = len * i as f64 / n as f64;
                let (nx, ny, nt) = advance(x, y, theta, seg, ds, self.radius_ft);
                push(nx, ny, nt, s_total + ds, &mut out);
            }
            let (nx, ny, nt) = advance(x, y, theta, seg, len, self.radius_ft);
            x = nx;
            y = ny;
            theta = nt;
            s_total += len;
        }
        out
    }

    /// Planar end pose (x, y, math heading).
    pub fn end_pose(&self) -> (f64, f64, f64) {
        let (mut x, mut y, mut theta) = self.start;
        for seg in &self.segments {
            let len = seg.length_ft(self.radius_ft);
            let (nx, ny, nt) = advance(x, y, theta, seg, len, self.radius_ft);
            x = nx;
            y = ny;
            theta = nt;
        }
        (x, y, theta)
    }
}

/// Pose after traveling `ds` along a segment from (x, y, theta).
fn advance(x: f64, y: f64, theta: f64, seg: &Segment, ds: f64, r: f64) -> (f64, f64, f64) {
    match seg {
        Segment::Straight(_) => (x + ds * theta.cos(), y + ds * theta.sin(), theta),
        Segment::Left(_) => {
            // compass course decreases on a left turn, so the math
            // heading theta = pi/2 - chi increases (counterclockwise)
            let dpsi = ds / r;
            let nt = theta + dpsi;
            (
                x + r * (nt.sin() - theta.sin()),
                y - r * (nt.cos() - theta.cos()),
                nt,
            )
        }
        Segment::Right(_) => {
            let dpsi = ds / r;
            let nt = theta - dpsi;
            (
                x - r * (nt.sin() - theta.sin()),
                y + r * (nt.cos() - theta.cos()),
                nt,
            )
        }
    }
}

fn mod2pi(x: f64) -> f64 {
    wrap_angle(x, TAU)
}

/// Planar Dubins word parameters in units of the turn radius:
/// (first arc, straight, last arc). None when the word is infeasible.
pub fn planar_word(word: Word, alpha: f64, beta: f64, d: f64) -> Option<(f64, f64, f64)> {
    let sa = alpha.sin();
    let sb = beta.sin();
    let ca = alpha.cos();
    let cb = beta.cos();
    let c_ab = (alpha - beta).cos();
    match word {
        Word::Lsl => {
            let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb);
            if p_sq < 0.0 {
                return None;
            }
            let tmp = (cb - ca).atan2(d + sa - sb);
            Some((mod2pi(-alpha + tmp), p_sq.sqrt(), mod2pi(beta - tmp)))
        }
        Word::Rsr => {
            let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa);
            if p_sq < 0.0 {
                return None;
            }
            let tmp = (ca - cb).atan2(d - sa + sb);
            Some((mod2pi(alpha - tmp), p_sq.sqrt(), mod2pi(-beta + tmp)))
        }
        Word::Lsr => {
            let p_sq = -2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb);
            if p_sq < 0.0 {
                return None;
            }
            let p = p_sq.sqrt();
            let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
            Some((mod2pi(-alpha + tmp), p, mod2pi(-mod2pi(beta) + tmp)))
        }
        Word::Rsl => {
            let p_sq = d * d - 2.0 + 2.0 * c_ab - 2.0 * d * (sa + sb);
            if p_sq < 0.0 {
                return None;
            }
            let p = p_sq.sqrt();
            let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
            Some((mod2pi(alpha - tmp), p, mod2pi(beta - tmp)))
        }
    }
}

fn word_segments(word: Word, t: f64, p_ft: f64, q: f64) -> Vec<Segment> {
    match word {
        Word::Lsl => vec![Segment::Left(t), Segment::Straight(p_ft), Segment::Left(q)],
        Word::Rsr => vec![
            Segment::Right(t),
            Segment::Straight(p_ft),
            Segment::Right(q),
        ],
        Word::Lsr => vec![
            Segment::Left(t),
            Segment::Straight(p_ft),
            Segment::Right(q),
        ],
        Word::Rsl => vec![
            Segment::Right(t),
            Segment::Straight(p_ft),
            Segment::Left(q),
        ],
    }
}

/// All kinematically feasible turn-straight-turn words between two states
/// whose altitude drop fits the commanded descent-angle band
/// [gamma_min, gamma_max]. Infeasible words are omitted; an empty result
/// signals Dubins infeasibility.
pub fn solve(
    s0: &GeoState,
    fix: &GeoState,
    radius_ft: f64,
    gamma_min_rad: f64,
    gamma_max_rad: f64,
) -> Vec<DubinsPath> {
    assert!(radius_ft > 0.0 && gamma_min_rad > 0.0);
    let mut out = Vec::new();
    for path in all_words(s0, fix, radius_ft) {
        let drop = s0.pos.alt_ft - fix.pos.alt_ft;
        if drop < 0.0 {
            continue;
        }
        let gamma_cmd = (drop / path.length_ft).atan();
        if gamma_cmd >= gamma_min_rad && gamma_cmd <= gamma_max_rad {
            let mut p = path;
            p.gamma_rad = gamma_cmd;
            out.push(p);
        }
    }
    out
}

/// Raw geometric words with no altitude gating; gamma left at zero.
fn all_words(s0: &GeoState, fix: &GeoState, radius_ft: f64) -> Vec<DubinsPath> {
    let frame = Frame::anchored_between(&s0.pos, &fix.pos);
    let (x0, y0) = frame.to_planar(&s0.pos);
    let (x1, y1) = frame.to_planar(&fix.pos);
    let theta0 = HALF_PI - s0.course_rad;
    let theta1 = HALF_PI - fix.course_rad;
    let dx = x1 - x0;
    let dy = y1 - y0;
    let dist = (dx * dx + dy * dy).sqrt();
    let phi = dy.atan2(dx);
    let alpha = mod2pi(theta0 - phi);
    let beta = mod2pi(theta1 - phi);
    let d = dist / radius_ft;
    let mut out = Vec::new();
    for word in ALL_WORDS {
        if let Some((t, p, q)) = planar_word(word, alpha, beta, d) {
            let segments = word_segments(word, t, p * radius_ft, q);
            let length_ft: f64 = segments.iter().map(|s| s.length_ft(radius_ft)).sum();
            out.push(DubinsPath {
                word,
                s_turn: None,
                segments,
                radius_ft,
                frame,
                start: (x0, y0, theta0),
                start_alt_ft: s0.pos.alt_ft,
                end_alt_ft: fix.pos.alt_ft,
                length_ft,
                gamma_rad: 0.0,
            });
        }
    }
    out
}

/// Replaces part of the straight segment with an alternating-arc weave that
/// adds exactly the horizontal length needed to dissipate `excess_alt_ft`
/// at the path's commanded glide angle. Returns None when the required
/// extension cannot fit on the straight segment.
pub fn extend_s_turn(
    path: &DubinsPath,
    excess_alt_ft: f64,
    side: STurnSide,
) -> Option<DubinsPath> {
    if excess_alt_ft <= 0.0 {
        return Some(path.clone());
    }
    let gamma = path.gamma_rad;
    if gamma <= 0.0 {
        return None;
    }
    let extra_ft = excess_alt_ft / gamma.tan();
    let r = path.radius_ft;
    let straight_idx = path
        .segments
        .iter()
        .position(|s| matches!(s, Segment::Straight(_)))?;
    let straight_len = match path.segments[straight_idx] {
        Segment::Straight(l) => l,
        _ => unreachable!(),
    };

    // One weave (psi, 2psi, psi alternating arcs) returns to the original
    // line and heading, advancing 4R sin(psi) while flying 4R psi.
    let psi_max = 0.9 * PI;
    let extra_per_weave_max = 4.0 * r * (psi_max - psi_max.sin());
    for count in 1..=32usize {
        if extra_ft > count as f64 * extra_per_weave_max {
            continue;
        }
        let target = extra_ft / count as f64;
        // bisection on psi: 4R(psi - sin psi) = target
        let mut lo = 0.0f64;
        let mut hi = psi_max;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 4.0 * r * (mid - mid.sin()) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let psi = 0.5 * (lo + hi);
        let advance_ft = count as f64 * 4.0 * r * psi.sin();
        if advance_ft > straight_len {
            continue;
        }
        let lead = 0.5 * (straight_len - advance_ft);
        let mut segments: Vec<Segment> = path.segments[..straight_idx].to_vec();
        segments.push(Segment::Straight(lead));
        for _ in 0..count {
            match side {
                STurnSide::Left => {
                    segments.push(Segment::Left(psi));
                    segments.push(Segment::Right(2.0 * psi));
                    segments.push(Segment::Left(psi));
                }
                STurnSide::Right => {
                    segments.push(Segment::Right(psi));
                    segments.push(Segment::Left(2.0 * psi));
                    segments.push(Segment::Right(psi));
                }
            }
        }
        segments.push(Segment::Straight(lead));
        segments.extend_from_slice(&path.segments[straight_idx + 1..]);
        let length_ft: f64 = segments.iter().map(|s| s.length_ft(r)).sum();
        let drop = path.start_alt_ft - path.end_alt_ft;
        return Some(DubinsPath {
            segments,
            length_ft,
            gamma_rad: (drop / length_ft).atan(),
            s_turn: Some(side),
            ..path.clone()
        });
    }
    None
}

/// Full candidate set between two states: direct words flown within the
/// descent band, plus left/right S-turn extensions (flown at `gamma_bg`)
/// for words with excess altitude.
pub fn candidates(
    s0: &GeoState,
    fix: &GeoState,
    radius_ft: f64,
    gamma_bg_rad: f64,
    gamma_max_rad: f64,
) -> Vec<DubinsPath> {
    let drop = s0.pos.alt_ft - fix.pos.alt_ft;
    if drop <= 0.0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for path in all_words(s0, fix, radius_ft) {
        let gamma_cmd = (drop / path.length_ft).atan();
        if gamma_cmd >= gamma_bg_rad && gamma_cmd <= gamma_max_rad {
            let mut p = path;
            p.gamma_rad = gamma_cmd;
            out.push(p);
        } else if gamma_cmd > gamma_max_rad {
            // excess altitude: lengthen with S-turns, flown at best glide
            let mut base = path;
            base.gamma_rad = gamma_bg_rad;
            let excess = drop - base.length_ft * gamma_bg_rad.tan();
            if excess <= 0.0 {
                continue;
            }
            for side in [STurnSide::Left, STurnSide::Right] {
                if let Some(ext) = extend_s_turn(&base, excess, side) {
                    out.push(ext);
                }
            }
        }
        // gamma_cmd below best glide: altitude deficit, word infeasible
    }
    out
}

/// Risk metric used to pick among candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RiskMetric {
    Airspace,
    Joint,
}

#[derive(Debug, Clone)]
pub struct SelectedDubins {
    pub path: DubinsPath,
    pub timed: Vec<TimedState>,
    pub sigma_a: f64,
    pub sigma_g: f64,
    pub sigma_t: f64,
}

/// Scores every candidate with the configured metric and returns the
/// minimum-risk path. Deterministic tie-break: word order, then left-S
/// before right-S.
pub fn min_risk_select(
    candidates: &[DubinsPath],
    model: &RiskModel,
    metric: RiskMetric,
    ground_speed_kts: f64,
    sample_step_ft: f64,
    mu_kappa: f64,
    mu_eta: f64,
) -> Option<SelectedDubins> {
    let mut best: Option<(f64, SelectedDubins)> = None;
    for path in candidates {
        let timed = path.sample(sample_step_ft, ground_speed_kts);
        let sigma_a = model.sigma_a(&timed).ok()?;
        let sigma_g = model.sigma_g(&timed).ok()?;
        let sigma_t = if mu_kappa + mu_eta > 0.0 {
            crate::risk::sigma_t(sigma_a, sigma_g, mu_kappa, mu_eta).unwrap_or(sigma_a)
        } else {
            sigma_a
        };
        let score = match metric {
            RiskMetric::Airspace => sigma_a,
            RiskMetric::Joint => sigma_t,
        };
        let sel = SelectedDubins {
            path: path.clone(),
            timed,
            sigma_a,
            sigma_g,
            sigma_t,
        };
        let better = match &best {
            None => true,
            Some((bs, b)) => {
                score < *bs
                    || (score == *bs
                        && (path.word, path.s_turn.map(|s| s as u8))
                            < (b.path.word, b.path.s_turn.map(|s| s as u8)))
            }
        };
        if better {
            best = Some((score, sel));
        }
    }
    best.map(|(_, s)| s)
}
