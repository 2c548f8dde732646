//! Thin wrappers over `libm` so the rest of the crate reads like ordinary float code.

pub use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x.clamp(-1.0, 1.0))
}

#[inline]
pub fn asin(x: f64) -> f64 {
    libm::asin(x.clamp(-1.0, 1.0))
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn signum(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Reduces `t` into `[0, period)` and returns the number of whole periods removed.
#[inline]
pub fn wrap(t: f64, period: f64) -> (f64, i64) {
    let m = floor(t / period);
    let mut r = t - m * period;
    let mut m = m as i64;
    if r >= period {
        r -= period;
        m += 1;
    }
    if r < 0.0 {
        r += period;
        m -= 1;
    }
    (r, m)
}

/// Distance between two parameters on a circle of length `period`.
#[inline]
pub fn circle_dist(a: f64, b: f64, period: f64) -> f64 {
    let d = wrap(a - b, period).0;
    d.min(period - d)
}

/// `sign^m` for a closure sign of ±1.
#[inline]
pub fn sign_pow(sign: f64, m: i64) -> f64 {
    if sign < 0.0 && m.rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    }
}
