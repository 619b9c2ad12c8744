//! Coordinate transforms, great-circle distance, forward geodesic destination
//! and angle wrapping.
//!
//! Horizontal geodesics use a spherical Earth (mean radius 6371 km), which is
//! accurate to well under 0.5% at the ~60 NM scales this toolkit operates at.
//! `lla_to_ecef` uses the full WGS-84 ellipsoid because the polyhedron vector
//! math downstream needs Cartesian fidelity.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::units::{EARTH_RADIUS_FT, M_PER_FT};

/// WGS-84 semi-major axis, meters.
pub const WGS84_A: f64 = 6_378_137.0;
/// WGS-84 first eccentricity squared.
pub const WGS84_E2: f64 = 0.006_694_379_990_14;

pub const TAU: f64 = std::f64::consts::TAU;

/// 3-D Cartesian vector (ECEF meters unless stated otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        Vec3::new(self.x / n, self.y / n, self.z / n)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Geodetic position: latitude/longitude in degrees, altitude in feet MSL.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub alt_ft: f64,
}

impl GeoPoint {
    pub fn new(lat_deg: f64, lon_deg: f64, alt_ft: f64) -> Self {
        debug_assert!((-90.0..=90.0).contains(&lat_deg));
        debug_assert!((-180.0..=180.0).contains(&lon_deg));
        Self {
            lat_deg,
            lon_deg,
            alt_ft,
        }
    }

    pub fn with_alt(self, alt_ft: f64) -> Self {
        Self { alt_ft, ..self }
    }
}

/// 4-D aircraft state: position plus course angle in radians, [0, 2pi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoState {
    pub pos: GeoPoint,
    pub course_rad: f64,
}

impl GeoState {
    pub fn new(pos: GeoPoint, course_rad: f64) -> Self {
        Self {
            pos,
            course_rad: wrap_angle(course_rad, TAU),
        }
    }
}

/// WGS-84 geodetic to Earth-Centered Earth-Fixed, meters.
pub fn lla_to_ecef(p: &GeoPoint) -> Vec3 {
    let lat = p.lat_deg.to_radians();
    let lon = p.lon_deg.to_radians();
    let h = p.alt_ft * M_PER_FT;
    let sin_lat = lat.sin();
    let cos_lat = lat.cos();
    let n = WGS84_A / (1.0 - WGS84_E2 * sin_lat * sin_lat).sqrt();
    Vec3::new(
        (n + h) * cos_lat * lon.cos(),
        (n + h) * cos_lat * lon.sin(),
        (n * (1.0 - WGS84_E2) + h) * sin_lat,
    )
}

/// Great-circle (haversine) distance in feet. Altitude is ignored.
pub fn great_circle_distance(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let lat1 = a.lat_deg.to_radians();
    let lat2 = b.lat_deg.to_radians();
    let dlat = lat2 - lat1;
    let dlon = (b.lon_deg - a.lon_deg).to_radians();
    let s = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_FT * s.sqrt().min(1.0).asin()
}

/// Initial great-circle bearing from `a` to `b`, radians in [0, 2pi).
pub fn initial_bearing(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let lat1 = a.lat_deg.to_radians();
    let lat2 = b.lat_deg.to_radians();
    let dlon = (b.lon_deg - a.lon_deg).to_radians();
    let y = dlon.sin() * lat2.cos();
    let x = lat1.cos() * lat2.sin() - lat1.sin() * lat2.cos() * dlon.cos();
    wrap_angle(y.atan2(x), TAU)
}

/// Destination point `distance_ft` along `bearing_rad` from `origin` on the
/// spherical direct geodesic. Altitude of the result carries the origin's.
pub fn forward_destination(origin: &GeoPoint, distance_ft: f64, bearing_rad: f64) -> GeoPoint {
    if distance_ft == 0.0 {
        return *origin;
    }
    let delta = distance_ft / EARTH_RADIUS_FT;
    let lat1 = origin.lat_deg.to_radians();
    let lon1 = origin.lon_deg.to_radians();
    let lat2 =
        (lat1.sin() * delta.cos() + lat1.cos() * delta.sin() * bearing_rad.cos()).asin();
    let lon2 = lon1
        + (bearing_rad.sin() * delta.sin() * lat1.cos())
            .atan2(delta.cos() - lat1.sin() * lat2.sin());
    let lon2 = wrap_angle(lon2 + std::f64::consts::PI, TAU) - std::f64::consts::PI;
    GeoPoint {
        lat_deg: lat2.to_degrees(),
        lon_deg: lon2.to_degrees(),
        alt_ft: origin.alt_ft,
    }
}

/// Wraps `x` into [0, modulus).
pub fn wrap_angle(x: f64, modulus: f64) -> f64 {
    debug_assert!(modulus > 0.0);
    let r = x.rem_euclid(modulus);
    if r == modulus {
        0.0
    } else {
        r
    }
}

/// Signed smallest angular difference a - b, in (-pi, pi].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b, TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}
