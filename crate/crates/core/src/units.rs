//! Unit conversion constants. Altitudes and distances are carried in feet
//! throughout; ECEF vector math uses meters.

pub const FT_PER_M: f64 = 1.0 / 0.3048;
pub const M_PER_FT: f64 = 0.3048;
pub const FT_PER_NM: f64 = 1852.0 * FT_PER_M;
pub const FPS_PER_KT: f64 = FT_PER_NM / 3600.0;

/// Mean Earth radius (spherical model), feet.
pub const EARTH_RADIUS_FT: f64 = 6_371_000.0 * FT_PER_M;

/// Standard gravity, ft/s^2.
pub const G_FPS2: f64 = 32.17405;

pub fn deg(rad: f64) -> f64 {
    rad.to_degrees()
}

pub fn rad(deg: f64) -> f64 {
    deg.to_radians()
}
