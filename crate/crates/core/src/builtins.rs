//! Analytic fixture families.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::curve::{CurveModel, CurveSource, PlanarLift};
use crate::jet::{VJet, ORDER};
use crate::math::{cos, sin, FRAC_PI_2, FRAC_PI_4, PI, TAU};
use crate::projective::Vec3;

/// Margin below `π/4` for lifted planar fixtures.
pub const LIFT_MARGIN: f64 = 0.05;

/// Names accepted by front ends, with their parameter lists.
pub const NAMES: &[(&str, &str)] = &[
    ("latitude_circle", "theta"),
    ("wavy_great_circle", "amplitude, harmonics, phases"),
    ("fig7_left", ""),
    ("fig7_right", ""),
    ("right_angle", ""),
    ("half_pi_support", ""),
    ("cusped", "cusps, c1, c2, cap"),
    ("dual_wavy", "amplitude, harmonics, phases"),
    ("ellipse", "a, b"),
    ("limacon", "b, skew"),
    ("figure_eight", "skew"),
    ("bean", ""),
    ("peanut", ""),
];

struct Latitude {
    theta: f64,
}

impl CurveSource for Latitude {
    fn period(&self) -> f64 {
        TAU
    }
    fn closure(&self) -> f64 {
        1.0
    }
    fn raw_jet(&self, t: f64) -> VJet {
        let (s, c) = (sin(self.theta), cos(self.theta));
        let mut out = [Vec3::ZERO; ORDER];
        let mut f = 1.0;
        for (k, o) in out.iter_mut().enumerate() {
            let ph = t + k as f64 * PI / 2.0;
            *o = Vec3::new(s * cos(ph), s * sin(ph), if k == 0 { c } else { 0.0 }) / f;
            f *= (k + 1) as f64;
        }
        VJet(out)
    }
}

/// Small circle at polar angle `theta` about the north pole.
pub fn latitude_circle(theta: f64) -> CurveModel {
    CurveModel::new(Arc::new(Latitude { theta }), Vec::new())
}

struct Wavy {
    terms: Vec<(f64, f64, f64)>,
    period: f64,
}

impl CurveSource for Wavy {
    fn period(&self) -> f64 {
        self.period
    }
    fn closure(&self) -> f64 {
        if self.period < TAU {
            -1.0
        } else {
            1.0
        }
    }
    fn raw_jet(&self, t: f64) -> VJet {
        let mut out = [Vec3::ZERO; ORDER];
        let mut f = 1.0;
        for (j, o) in out.iter_mut().enumerate() {
            let ph = j as f64 * PI / 2.0;
            let mut z = 0.0;
            for &(a, k, phi) in &self.terms {
                z += a * libm::pow(k, j as f64) * sin(k * t + phi + ph);
            }
            *o = Vec3::new(cos(t + ph), sin(t + ph), z) / f;
            f *= (j + 1) as f64;
        }
        VJet(out)
    }
}

/// The equator pushed up and down by `amplitude · sin(k t + φ_k)` for each harmonic.
///
/// With only odd harmonics the curve closes antipodally after half a turn, so
/// the period is π.
pub fn wavy_great_circle(amplitude: f64, harmonics: &[u32], phases: &[f64]) -> CurveModel {
    let terms: Vec<(f64, f64, f64)> = harmonics
        .iter()
        .enumerate()
        .map(|(i, &k)| (amplitude, k as f64, phases.get(i).copied().unwrap_or(0.0)))
        .collect();
    let all_odd = !harmonics.is_empty() && harmonics.iter().all(|k| k % 2 == 1);
    let period = if all_odd { PI } else { TAU };
    CurveModel::new(Arc::new(Wavy { terms, period }), Vec::new())
}

/// Planar trigonometric curve `z(t) = Σ a_k e^{ikt}`, reported with `z = 0` jets.
pub struct PlanarFourier {
    terms: Vec<(i32, f64, f64)>,
}

impl PlanarFourier {
    pub fn new(terms: Vec<(i32, f64, f64)>) -> Self {
        PlanarFourier { terms }
    }
}

impl CurveSource for PlanarFourier {
    fn period(&self) -> f64 {
        TAU
    }
    fn closure(&self) -> f64 {
        1.0
    }
    fn raw_jet(&self, t: f64) -> VJet {
        let mut out = [Vec3::ZERO; ORDER];
        for &(k, re, im) in &self.terms {
            let kf = k as f64;
            let (s, c) = (sin(kf * t), cos(kf * t));
            // a e^{ikt} (ik)^j / j!
            let (mut x, mut y) = (re * c - im * s, re * s + im * c);
            let mut f = 1.0;
            for (j, o) in out.iter_mut().enumerate() {
                o.x += x / f;
                o.y += y / f;
                let (nx, ny) = (-kf * y, kf * x);
                x = nx;
                y = ny;
                f *= (j + 1) as f64;
            }
        }
        VJet(out)
    }
}

/// Lifts a planar Fourier curve into a cap of radius `cap` about the north pole.
pub fn lifted(terms: Vec<(i32, f64, f64)>, cusps: Vec<f64>, cap: f64) -> CurveModel {
    let planar: Arc<dyn CurveSource> = Arc::new(PlanarFourier::new(terms));
    CurveModel::new(Arc::new(PlanarLift::fit(planar, cap)), cusps)
}

fn small_cap() -> f64 {
    FRAC_PI_4 - LIFT_MARGIN
}

/// Limaçon `r = b + cos θ` with an inner loop for `b < 1`, plus a small
/// asymmetric term so no accidental symmetry makes it degenerate.
pub fn limacon(b: f64, skew: f64) -> CurveModel {
    lifted(
        alloc::vec![(0, 0.5, 0.0), (1, b, 0.0), (2, 0.5, 0.0), (3, skew, 0.6 * skew)],
        Vec::new(),
        small_cap(),
    )
}

/// Curve with a type 2 crossing and four type 1 normal-tangent pairs.
pub fn fig7_left() -> CurveModel {
    limacon(0.85, 0.02)
}

/// Curve with a type 1 crossing and no normal-tangent pairs.
pub fn fig7_right() -> CurveModel {
    limacon(0.2, 0.02)
}

/// Symmetric limaçon whose lifted self-crossing has perpendicular tangents.
///
/// Without the skew term the crossing sits at the planar origin, at
/// `t = ±acos(-b)`, so the angle there can be bisected directly.
pub fn right_angle() -> CurveModel {
    let angle = |b: f64| {
        let k = limacon(b, 0.0);
        let t0 = crate::math::acos(-b);
        crate::projective::line_angle(k.velocity(t0), k.velocity(TAU - t0))
    };
    let (mut lo, mut hi) = (0.6, 0.8);
    let slope = |b: f64| {
        let k = limacon(b, 0.0);
        let t0 = crate::math::acos(-b);
        k.velocity(t0).dot(k.velocity(TAU - t0))
    };
    let s_lo = slope(lo);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if (slope(mid) > 0.0) == (s_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!((angle(lo) - FRAC_PI_2).abs() < 1e-9);
    limacon(0.5 * (lo + hi), 0.0)
}

/// Wavy great circle with a double supporting geodesic whose support points
/// are exactly `π/2` apart; the amplitude is bisected to put them there.
pub fn half_pi_support() -> CurveModel {
    let cfg = crate::config::Config::default();
    let build = |a: f64| wavy_great_circle(a, &[3, 4], &[0.0, 1.5]);
    let dot = |a: f64| {
        let k = build(a);
        let f = crate::events::find_double_supporting(&k, &cfg);
        let e = f
            .events
            .iter()
            .min_by(|x, y| (x.t - 1.412).abs().total_cmp(&(y.t - 1.412).abs()))
            .expect("double supporting geodesic near t = 1.412");
        k.point(e.t).dot(k.point(e.q()))
    };
    let (mut lo, mut hi) = (0.28, 0.29);
    let s_lo = dot(lo) > 0.0;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if (dot(mid) > 0.0) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    build(0.5 * (lo + hi))
}

/// Ellipse with semi-axes `a`, `b`, lifted.
pub fn ellipse(a: f64, b: f64) -> CurveModel {
    lifted(
        alloc::vec![(1, 0.5 * (a + b), 0.0), (-1, 0.5 * (a - b), 0.0)],
        Vec::new(),
        small_cap(),
    )
}

/// Lemniscate-like figure eight `(sin t, sin 2t / 2)` with a skew term.
pub fn figure_eight(skew: f64) -> CurveModel {
    // sin t = (e^{it} - e^{-it}) / 2i, i/2 sin 2t ...
    lifted(
        alloc::vec![
            (1, 0.0, -0.5),
            (-1, 0.0, 0.5),
            (2, 0.25, 0.0),
            (-2, -0.25, 0.0),
            (3, skew, 0.4 * skew),
        ],
        Vec::new(),
        small_cap(),
    )
}

/// Convex-concave bean with two inflections.
pub fn bean() -> CurveModel {
    lifted(
        alloc::vec![(1, 1.0, 0.0), (-1, 0.15, 0.05), (2, 0.22, 0.03)],
        Vec::new(),
        small_cap(),
    )
}

/// Peanut with eight inflections.
pub fn peanut() -> CurveModel {
    lifted(
        alloc::vec![(1, 1.0, 0.0), (-1, 0.2, 0.02), (-3, 0.18, 0.01), (2, 0.02, 0.01)],
        Vec::new(),
        small_cap(),
    )
}

/// Epicycloid-type planar curve with `u` type 1 cusps at `2πj/u`, lifted into a
/// cap of radius `cap`.
///
/// The velocity is `i e^{it}(1 − e^{iut})(1 + c₁e^{it} + c₂e^{2it})`, which
/// vanishes exactly at the cusp parameters as long as `|c₁| + |c₂| < 1`.
pub fn cusped(u: u32, c1: f64, c2: f64, cap: f64) -> CurveModel {
    cusped_complex(u, (c1, 0.3 * c1), (c2, -0.2 * c2), cap)
}

pub fn cusped_complex(u: u32, c1: (f64, f64), c2: (f64, f64), cap: f64) -> CurveModel {
    let uf = u as i32;
    let mut terms = Vec::new();
    let factors = [(0, 1.0, 0.0), (1, c1.0, c1.1), (2, c2.0, c2.1)];
    for &(j, re, im) in &factors {
        // + e^{i(1+j)t} term and − e^{i(1+j+u)t} term, integrated
        let k = 1 + j;
        terms.push((k, re / k as f64, im / k as f64));
        let k = 1 + j + uf;
        terms.push((k, -re / k as f64, -im / k as f64));
    }
    let cusps = (0..u).map(|j| TAU * j as f64 / u as f64).collect();
    lifted(terms, cusps, cap)
}

/// The generic fixtures used across the test suites, by name.
pub fn fixture_suite() -> Vec<(&'static str, CurveModel)> {
    let cfg = crate::config::Config::default();
    alloc::vec![
        ("fig7_left", fig7_left()),
        ("fig7_right", fig7_right()),
        ("ellipse", ellipse(1.0, 0.6)),
        ("bean", bean()),
        ("figure_eight", figure_eight(0.05)),
        ("limacon95", limacon(0.95, 0.02)),
        ("limacon98", limacon(0.98, 0.05)),
        ("peanut", peanut()),
        ("dual_fig8", figure_eight(0.05).dual_curve(&cfg)),
        ("dual_limacon95", limacon(0.95, 0.02).dual_curve(&cfg)),
        ("wavy3", wavy_great_circle(0.2, &[3], &[0.0])),
        ("wavy35", wavy_great_circle(0.15, &[3, 5], &[0.2, 1.1])),
        ("cusp1", cusped(1, 0.15, -0.1, 0.6)),
        ("cusp2", cusped(2, 0.15, -0.1, 0.6)),
        ("cusp3", cusped(3, 0.15, -0.1, 0.6)),
        ("dual_wavy3", dual_wavy(0.2, &[3], &[0.0])),
    ]
}

/// The dual of a wavy great circle: a large spherical curve whose cusps are
/// the inflections of the wavy curve.
pub fn dual_wavy(amplitude: f64, harmonics: &[u32], phases: &[f64]) -> CurveModel {
    wavy_great_circle(amplitude, harmonics, phases).dual_curve(&crate::config::Config::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_fourier_jet_matches_values() {
        let p = PlanarFourier::new(alloc::vec![(1, 0.3, 0.1), (-2, 0.2, -0.4)]);
        let t = 0.8;
        let h = 1e-5;
        let j = p.raw_jet(t);
        let fd = (p.raw_jet(t + h).value() - p.raw_jet(t - h).value()) / (2.0 * h);
        assert!((fd - j.d1()).norm() < 1e-9);
        let fd2 = (p.raw_jet(t + h).d1() - p.raw_jet(t - h).d1()) / (2.0 * h);
        assert!((fd2 - j.d2()).norm() < 1e-8);
    }

    #[test]
    fn wavy_jet_matches_values() {
        let k = wavy_great_circle(0.2, &[3, 5], &[0.3, 1.0]);
        assert_eq!(k.period(), PI);
        assert_eq!(k.closure(), -1.0);
        let t = 0.4;
        let h = 1e-5;
        let fd = (k.point(t + h) - k.point(t - h)) / (2.0 * h);
        assert!((fd - k.velocity(t)).norm() < 1e-8);
        assert_eq!(wavy_great_circle(0.2, &[2, 3], &[]).period(), TAU);
    }

    #[test]
    fn cusped_velocity_vanishes_at_cusps() {
        for u in 1..=3 {
            let k = cusped(u, 0.15, -0.1, 0.6);
            for &c in k.cusps() {
                assert!(k.speed(c) < 1e-12, "u={u} c={c} speed={}", k.speed(c));
            }
            assert!(k.speed(0.5 * TAU / u as f64) > 0.01);
        }
    }
}
