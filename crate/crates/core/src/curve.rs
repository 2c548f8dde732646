//! Closed curves on the unit sphere, read projectively.
//!
//! A [`CurveModel`] wraps a [`CurveSource`] that produces Taylor jets on one
//! fundamental period `[0, L)`. The source may close up either on the sphere
//! (`γ(t+L) = γ(t)`) or only projectively (`γ(t+L) = −γ(t)`); the model
//! handles wrapping and renormalises every jet onto the sphere.
//!
//! Across a cusp the raw unit tangent `γ'/|γ'|` flips. The *lifted* tangent
//! multiplies it by `(−1)^(cusps passed)`, which keeps it continuous; the
//! dual curve `γ × T_lift` and the tangent indicatrix are built from it.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;
use crate::jet::{VJet, ORDER};
use crate::math::{acos, atan2, circle_dist, sign_pow, wrap, FRAC_PI_4, PI, TAU};
use crate::projective::{ProjectivePoint, Vec3};
use crate::spline::CubicSpline;

#[derive(Clone, Debug, PartialEq)]
pub enum CurveError {
    TooFewSamples { got: usize, min: usize },
    /// Two consecutive samples (index of the first) are more than π/8 apart.
    GapTooLarge { index: usize, gap: f64 },
    NotClosed,
    EmptyInput,
    /// A declared cusp does not sit on a sample parameter.
    CuspOffSample { t: f64 },
    AtCusp { t: f64, cusp: f64 },
    AtInflection { t: f64, k_g: f64 },
    /// A curve evaluation produced a zero or non-finite vector.
    Degenerate { t: f64 },
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::TooFewSamples { got, min } => {
                write!(f, "{got} samples given, at least {min} required")
            }
            CurveError::GapTooLarge { index, gap } => {
                write!(f, "samples {index} and {} are {gap:.4} rad apart", index + 1)
            }
            CurveError::NotClosed => f.write_str("open curves are not supported"),
            CurveError::EmptyInput => f.write_str("no points given"),
            CurveError::CuspOffSample { t } => {
                write!(f, "declared cusp at t={t} is not a sample parameter")
            }
            CurveError::AtCusp { t, cusp } => write!(f, "t={t} is within the cusp window of {cusp}"),
            CurveError::AtInflection { t, k_g } => {
                write!(f, "t={t} is an inflection (k_g={k_g:e})")
            }
            CurveError::Degenerate { t } => write!(f, "curve is degenerate at t={t}"),
        }
    }
}

impl core::error::Error for CurveError {}

/// Anything that can produce raw (not necessarily unit) jets on `[0, period)`.
pub trait CurveSource: Send + Sync {
    fn period(&self) -> f64;
    /// `+1` if the curve closes on the sphere, `-1` if it closes antipodally.
    fn closure(&self) -> f64;
    fn raw_jet(&self, t: f64) -> VJet;
}

#[derive(Clone)]
pub struct CurveModel {
    src: Arc<dyn CurveSource>,
    period: f64,
    closure: f64,
    cusps: Vec<f64>,
}

impl fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveModel")
            .field("period", &self.period)
            .field("closure", &self.closure)
            .field("cusps", &self.cusps)
            .finish()
    }
}

/// Local geometry at a regular, non-inflection parameter.
///
/// All vectors are taken with the representative `x` of the point, so the
/// whole frame flips together if the other representative is used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramedPoint {
    pub t: f64,
    pub x: Vec3,
    /// Unit tangent in the direction of travel.
    pub tangent: Vec3,
    /// Unit normal the curve bends towards.
    pub normal: Vec3,
    pub k_g: f64,
    /// Radius of the osculating circle, `arccot |k_g|`.
    pub rho: f64,
    /// Center of curvature `cos ρ · x + sin ρ · n`.
    pub center: Vec3,
}

impl FramedPoint {
    pub fn p(&self) -> ProjectivePoint {
        ProjectivePoint::from_vec(self.x)
    }

    pub fn c_p(&self) -> ProjectivePoint {
        ProjectivePoint::from_vec(self.center)
    }

    pub fn a_p(&self) -> ProjectivePoint {
        ProjectivePoint::from_vec(self.tangent)
    }

    pub fn p_dual(&self) -> ProjectivePoint {
        ProjectivePoint::from_vec(self.normal)
    }
}

fn det(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    a.dot(b.cross(c))
}

impl CurveModel {
    /// Wraps a source; `cusps` are parameters in `[0, period)` (sorted here).
    pub fn new(src: Arc<dyn CurveSource>, mut cusps: Vec<f64>) -> Self {
        let period = src.period();
        let closure = if src.closure() < 0.0 { -1.0 } else { 1.0 };
        for c in cusps.iter_mut() {
            *c = wrap(*c, period).0;
        }
        cusps.sort_by(f64::total_cmp);
        CurveModel { src, period, closure, cusps }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn closure(&self) -> f64 {
        self.closure
    }

    pub fn cusps(&self) -> &[f64] {
        &self.cusps
    }

    pub fn source(&self) -> &Arc<dyn CurveSource> {
        &self.src
    }

    /// Unit position jet at any real `t`.
    pub fn jet(&self, t: f64) -> VJet {
        let (r, m) = wrap(t, self.period);
        let j = self.src.raw_jet(r).normalized();
        if sign_pow(self.closure, m) < 0.0 {
            -j
        } else {
            j
        }
    }

    pub fn point(&self, t: f64) -> Vec3 {
        self.jet(t).value()
    }

    pub fn velocity(&self, t: f64) -> Vec3 {
        self.jet(t).d1()
    }

    /// Closure sign of the lifted tangent: `T_lift(t+L) = closure_tangent · T_lift(t)`.
    pub fn closure_tangent(&self) -> f64 {
        self.closure * sign_pow(-1.0, self.cusps.len() as i64)
    }

    /// `T_lift = sign · γ'/|γ'|` at `t`.
    pub fn tangent_sign(&self, t: f64) -> f64 {
        let (r, m) = wrap(t, self.period);
        let passed = self.cusps.iter().filter(|&&c| c < r).count() as i64;
        sign_pow(-1.0, passed) * sign_pow(-1.0, m * self.cusps.len() as i64)
    }

    /// Index of a cusp within `delta` of `t`, if any.
    pub fn near_cusp(&self, t: f64, delta: f64) -> Option<usize> {
        self.cusps
            .iter()
            .position(|&c| circle_dist(c, t, self.period) < delta)
    }

    /// Jet of the lifted unit tangent, continuous through cusps.
    pub fn lifted_tangent_jet(&self, t: f64) -> VJet {
        let (r, m) = wrap(t, self.period);
        let snap = 1e-9 * self.period;
        if let Some(k) = self.cusps.iter().position(|&c| circle_dist(c, r, self.period) < snap) {
            // expand at the cusp itself: γ'(c+h)/h is regular there
            let c = self.cusps[k];
            let shift = if c + 0.5 * self.period < r {
                c + self.period
            } else if c - 0.5 * self.period > r {
                c - self.period
            } else {
                c
            };
            let d = self.jet(shift + m as f64 * self.period).derivative();
            let mut q = [Vec3::ZERO; ORDER];
            q[..ORDER - 1].copy_from_slice(&d.0[1..]);
            let sign = self.tangent_sign(shift + m as f64 * self.period + snap);
            return VJet(q).normalized().scale_by(sign);
        }
        let sign = self.tangent_sign(t);
        self.jet(t).derivative().normalized().scale_by(sign)
    }

    pub fn lifted_tangent(&self, t: f64) -> Vec3 {
        self.lifted_tangent_jet(t).value()
    }

    /// Jet of the pole of the tangent geodesic, `γ × T_lift`.
    pub fn dual_jet(&self, t: f64) -> VJet {
        self.jet(t).cross(&self.lifted_tangent_jet(t))
    }

    /// Signed geodesic curvature with respect to the raw parametrisation.
    pub fn k_g(&self, t: f64) -> f64 {
        let j = self.jet(t);
        let v = j.d1();
        let s = v.norm();
        det(j.value(), v, j.d2()) / (s * s * s)
    }

    pub fn speed(&self, t: f64) -> f64 {
        self.velocity(t).norm()
    }

    pub fn frame_at(&self, t: f64, cfg: &Config) -> Result<FramedPoint, CurveError> {
        if let Some(k) = self.near_cusp(t, cfg.delta_cusp_len(self.period)) {
            return Err(CurveError::AtCusp { t, cusp: self.cusps[k] });
        }
        let f = self.frame_unchecked(t);
        if !f.k_g.is_finite() {
            return Err(CurveError::Degenerate { t });
        }
        if f.k_g.abs() <= cfg.tol_kg {
            return Err(CurveError::AtInflection { t, k_g: f.k_g });
        }
        Ok(f)
    }

    /// Frame without the cusp and inflection checks.
    pub fn frame_unchecked(&self, t: f64) -> FramedPoint {
        let j = self.jet(t);
        let x = j.value();
        let v = j.d1();
        let s = v.norm();
        let tangent = v / s;
        let k_g = det(x, v, j.d2()) / (s * s * s);
        let normal = x.cross(tangent) * if k_g < 0.0 { -1.0 } else { 1.0 };
        let rho = atan2(1.0, k_g.abs());
        let center = x * crate::math::cos(rho) + normal * crate::math::sin(rho);
        FramedPoint { t, x, tangent, normal, k_g, rho, center }
    }

    /// The same curve traversed backwards: `t ↦ γ(L − t)`.
    pub fn reversed(&self) -> CurveModel {
        let cusps = self
            .cusps
            .iter()
            .map(|&c| wrap(self.period - c, self.period).0)
            .collect();
        CurveModel::new(Arc::new(Reversed(self.clone())), cusps)
    }

    /// The curve moved by a rotation matrix (rows).
    pub fn rotated(&self, rot: [[f64; 3]; 3]) -> CurveModel {
        CurveModel::new(Arc::new(Rotated { base: self.clone(), rot }), self.cusps.clone())
    }

    /// The curve traced by the lifted unit tangent.
    pub fn tangent_indicatrix(&self) -> CurveModel {
        CurveModel::new(Arc::new(Indicatrix(self.clone())), Vec::new())
    }

    /// The dual curve `t ↦ γ × T_lift`; `inflections` become its cusps.
    pub fn dual_with_cusps(&self, inflections: Vec<f64>) -> CurveModel {
        CurveModel::new(Arc::new(Dual(self.clone())), inflections)
    }

    /// The dual curve, with cusps at the detected inflections of `self`.
    pub fn dual_curve(&self, cfg: &Config) -> CurveModel {
        let infl = crate::events::inflection_params(self, cfg);
        self.dual_with_cusps(infl)
    }
}

impl CurveSource for CurveModel {
    fn period(&self) -> f64 {
        self.period
    }
    fn closure(&self) -> f64 {
        self.closure
    }
    fn raw_jet(&self, t: f64) -> VJet {
        self.jet(t)
    }
}

struct Reversed(CurveModel);

impl CurveSource for Reversed {
    fn period(&self) -> f64 {
        self.0.period
    }
    fn closure(&self) -> f64 {
        self.0.closure
    }
    fn raw_jet(&self, t: f64) -> VJet {
        self.0.jet(self.0.period - t).mirrored()
    }
}

struct Rotated {
    base: CurveModel,
    rot: [[f64; 3]; 3],
}

impl CurveSource for Rotated {
    fn period(&self) -> f64 {
        self.base.period
    }
    fn closure(&self) -> f64 {
        self.base.closure
    }
    fn raw_jet(&self, t: f64) -> VJet {
        let r = self.rot;
        self.base.jet(t).map(|v| {
            Vec3::new(
                r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
                r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
                r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
            )
        })
    }
}

struct Indicatrix(CurveModel);

impl CurveSource for Indicatrix {
    fn period(&self) -> f64 {
        self.0.period
    }
    fn closure(&self) -> f64 {
        self.0.closure_tangent()
    }
    fn raw_jet(&self, t: f64) -> VJet {
        self.0.lifted_tangent_jet(t)
    }
}

struct Dual(CurveModel);

impl CurveSource for Dual {
    fn period(&self) -> f64 {
        self.0.period
    }
    fn closure(&self) -> f64 {
        self.0.closure * self.0.closure_tangent()
    }
    fn raw_jet(&self, t: f64) -> VJet {
        self.0.dual_jet(t)
    }
}

/// Spline source through unit vectors, periodic or antiperiodic.
struct SampledSource {
    spline: CubicSpline,
    period: f64,
    closure: f64,
}

impl CurveSource for SampledSource {
    fn period(&self) -> f64 {
        self.period
    }
    fn closure(&self) -> f64 {
        self.closure
    }
    fn raw_jet(&self, t: f64) -> VJet {
        self.spline.jet(t)
    }
}

pub const MIN_SAMPLES: usize = 16;
const MAX_GAP: f64 = PI / 8.0;

fn angle(a: Vec3, b: Vec3) -> f64 {
    atan2(a.cross(b).norm(), a.dot(b))
}

/// Interpolates unit vectors sampled at `t_i = 2π i / n`.
///
/// If the last sample is nearer the antipode of the first, the curve is taken
/// to close projectively (period 2π, `γ(t+2π) = −γ(t)`).
pub fn from_samples(points: &[Vec3], closed: bool) -> Result<CurveModel, CurveError> {
    from_samples_with_cusps(points, closed, &[])
}

/// As [`from_samples`], with cusps declared at sample parameters.
pub fn from_samples_with_cusps(
    points: &[Vec3],
    closed: bool,
    cusps: &[f64],
) -> Result<CurveModel, CurveError> {
    if !closed {
        return Err(CurveError::NotClosed);
    }
    let n = points.len();
    if n < MIN_SAMPLES {
        return Err(CurveError::TooFewSamples { got: n, min: MIN_SAMPLES });
    }
    let mut pts = Vec::with_capacity(n);
    for (i, p) in points.iter().enumerate() {
        let norm = p.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(CurveError::Degenerate { t: TAU * i as f64 / n as f64 });
        }
        pts.push(*p / norm);
    }
    for i in 0..n - 1 {
        let g = angle(pts[i], pts[i + 1]);
        if g > MAX_GAP {
            return Err(CurveError::GapTooLarge { index: i, gap: g });
        }
    }
    let direct = angle(pts[n - 1], pts[0]);
    let flipped = angle(pts[n - 1], -pts[0]);
    let closure = if flipped < direct { -1.0 } else { 1.0 };
    if direct.min(flipped) > MAX_GAP {
        return Err(CurveError::GapTooLarge { index: n - 1, gap: direct.min(flipped) });
    }
    let h = TAU / n as f64;
    let mut breaks = Vec::new();
    for &c in cusps {
        let c = wrap(c, TAU).0;
        let k = crate::math::round(c / h) as usize % n;
        if circle_dist(k as f64 * h, c, TAU) > 1e-6 * h {
            return Err(CurveError::CuspOffSample { t: c });
        }
        breaks.push(k);
    }
    breaks.sort_unstable();
    breaks.dedup();
    let cusp_params: Vec<f64> = breaks.iter().map(|&k| k as f64 * h).collect();
    let spline = if closure > 0.0 {
        CubicSpline::with_breaks(&pts, h, &breaks)
    } else {
        let mut doubled = pts.clone();
        doubled.extend(pts.iter().map(|p| -*p));
        let mut b2 = breaks.clone();
        b2.extend(breaks.iter().map(|k| k + n));
        CubicSpline::with_breaks(&doubled, h, &b2)
    };
    Ok(CurveModel::new(
        Arc::new(SampledSource { spline, period: TAU, closure }),
        cusp_params,
    ))
}

/// Gnomonic lift `(x, y) ↦ (s(x − cx), s(y − cy), 1)` of a planar source.
///
/// The planar source reports jets with zero `z` components.
pub struct PlanarLift {
    inner: Arc<dyn CurveSource>,
    center: (f64, f64),
    scale: f64,
}

impl PlanarLift {
    /// Centers the curve on its bounding box and scales it into a cap of the
    /// given spherical radius about `(0, 0, 1)`.
    pub fn fit(inner: Arc<dyn CurveSource>, cap_radius: f64) -> Self {
        let n = 8192;
        let l = inner.period();
        let pts: Vec<Vec3> = (0..n).map(|i| inner.raw_jet(l * i as f64 / n as f64).value()).collect();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &pts {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        let center = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let r = pts
            .iter()
            .map(|p| {
                let dx = p.x - center.0;
                let dy = p.y - center.1;
                crate::math::sqrt(dx * dx + dy * dy)
            })
            .fold(0.0, f64::max)
            * 1.001;
        let scale = libm::tan(cap_radius) / r;
        PlanarLift { inner, center, scale }
    }
}

impl CurveSource for PlanarLift {
    fn period(&self) -> f64 {
        self.inner.period()
    }
    fn closure(&self) -> f64 {
        1.0
    }
    fn raw_jet(&self, t: f64) -> VJet {
        let j = self.inner.raw_jet(t);
        let mut out = [Vec3::ZERO; ORDER];
        for (k, c) in j.0.iter().enumerate() {
            out[k] = if k == 0 {
                Vec3::new(
                    self.scale * (c.x - self.center.0),
                    self.scale * (c.y - self.center.1),
                    1.0,
                )
            } else {
                Vec3::new(self.scale * c.x, self.scale * c.y, 0.0)
            };
        }
        VJet(out)
    }
}

/// Lifts a closed planar polyline into a cap of radius `π/4 − margin`.
pub fn lift_planar(points: &[(f64, f64)], margin: f64) -> Result<CurveModel, CurveError> {
    if points.is_empty() {
        return Err(CurveError::EmptyInput);
    }
    let n = points.len();
    if n < MIN_SAMPLES {
        return Err(CurveError::TooFewSamples { got: n, min: MIN_SAMPLES });
    }
    let pts: Vec<Vec3> = points.iter().map(|&(x, y)| Vec3::new(x, y, 0.0)).collect();
    let h = TAU / n as f64;
    let spline = CubicSpline::periodic(&pts, h);
    let planar: Arc<dyn CurveSource> = Arc::new(SampledSource { spline, period: TAU, closure: 1.0 });
    Ok(CurveModel::new(
        Arc::new(PlanarLift::fit(planar, FRAC_PI_4 - margin)),
        Vec::new(),
    ))
}

/// Maximum projective distance between `a(t)` and `b(t)` over a sampled period.
pub fn max_trace_distance(a: &CurveModel, b: &CurveModel, samples: usize) -> f64 {
    let l = a.period();
    (0..samples)
        .map(|i| {
            let t = l * (i as f64 + 0.5) / samples as f64;
            acos(a.point(t).dot(b.point(t)).abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::math::{cos, sin, FRAC_PI_2};

    fn latitude_samples(theta: f64, n: usize) -> Vec<Vec3> {
        (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Vec3::new(sin(theta) * cos(t), sin(theta) * sin(t), cos(theta))
            })
            .collect()
    }

    #[test]
    fn sampled_latitude_circle_stays_on_sphere() {
        let k = from_samples(&latitude_samples(FRAC_PI_4, 64), true).unwrap();
        for i in 0..1000 {
            let t = TAU * i as f64 / 1000.0;
            assert!((k.point(t).norm() - 1.0).abs() < 1e-10);
        }
        let f = k.frame_at(0.3, &Config::default()).unwrap();
        assert!((f.k_g - 1.0).abs() < 1e-2);
    }

    #[test]
    fn sample_errors() {
        assert_eq!(
            from_samples(&latitude_samples(0.5, 8), true).unwrap_err(),
            CurveError::TooFewSamples { got: 8, min: 16 }
        );
        assert_eq!(
            from_samples(&latitude_samples(0.5, 64), false).unwrap_err(),
            CurveError::NotClosed
        );
        let mut pts = latitude_samples(1.0, 64);
        pts.truncate(40);
        assert!(matches!(
            from_samples(&pts, true).unwrap_err(),
            CurveError::GapTooLarge { index: 39, .. }
        ));
        assert_eq!(lift_planar(&[], 0.1).unwrap_err(), CurveError::EmptyInput);
    }

    #[test]
    fn antiperiodic_samples() {
        // half a great circle closes projectively
        let pts: Vec<Vec3> = (0..32)
            .map(|i| {
                let t = PI * i as f64 / 32.0;
                Vec3::new(cos(t), sin(t), 0.1 * sin(3.0 * t))
            })
            .collect();
        let k = from_samples(&pts, true).unwrap();
        assert_eq!(k.closure(), -1.0);
        let a = k.jet(TAU - 1e-9);
        let b = k.jet(TAU);
        assert!((a.value() - b.value()).norm() < 1e-8);
        assert!((a.d2() - b.d2()).norm() < 1e-6);
    }

    #[test]
    fn derivative_consistency() {
        let k = from_samples(&latitude_samples(0.7, 48), true).unwrap();
        let t = 1.0;
        let h = 1e-5;
        let fd1 = (k.point(t + h) - k.point(t - h)) / (2.0 * h);
        let fd2 = (k.point(t + h) - k.point(t) * 2.0 + k.point(t - h)) / (h * h);
        let j = k.jet(t);
        assert!((fd1 - j.d1()).norm() <= 1e-5 * j.d1().norm());
        assert!((fd2 - j.d2()).norm() <= 1e-4 * j.d2().norm());
    }

    #[test]
    fn latitude_frame() {
        let k = builtins::latitude_circle(FRAC_PI_4);
        let cfg = Config::default();
        for &t in &[0.0, 0.7, 2.0, 5.5] {
            let f = k.frame_at(t, &cfg).unwrap();
            assert!((f.k_g - 1.0).abs() < 1e-12);
            assert!((f.rho - FRAC_PI_4).abs() < 1e-12);
            assert!((f.center - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
            assert!((f.tangent - Vec3::new(-sin(t), cos(t), 0.0)).norm() < 1e-12);
            assert!(f.x.dot(f.tangent).abs() < 1e-12);
            assert!(f.x.dot(f.normal).abs() < 1e-12);
            assert!(f.tangent.dot(f.normal).abs() < 1e-12);
        }
    }

    #[test]
    fn latitude_dual_and_indicatrix() {
        let cfg = Config::default();
        let k = builtins::latitude_circle(FRAC_PI_4);
        let d = k.dual_curve(&cfg);
        assert!(d.cusps().is_empty());
        for &t in &[0.1, 1.0, 4.0] {
            let p = d.point(t);
            assert!((p.z.abs() - cos(FRAC_PI_4)).abs() < 1e-12);
        }
        let k = builtins::latitude_circle(0.5);
        let d = k.dual_curve(&cfg);
        assert!((d.point(0.3).z.abs() - cos(FRAC_PI_2 - 0.5)).abs() < 1e-12);
        let ind = k.tangent_indicatrix();
        for &t in &[0.2, 3.0] {
            assert!(ind.point(t).z.abs() < 1e-12);
            assert!(proj(ind.point(t), k.frame_at(t, &cfg).unwrap().tangent) < 1e-12);
        }
        assert!(max_trace_distance(&k, &d.dual_curve(&cfg), 500) < 1e-6);
    }

    fn proj(a: Vec3, b: Vec3) -> f64 {
        crate::projective::proj_distance(ProjectivePoint::from_vec(a), ProjectivePoint::from_vec(b))
    }

    #[test]
    fn lifted_tangent_is_continuous_through_cusps() {
        let k = builtins::cusped(3, 0.15, -0.1, 0.9);
        assert_eq!(k.cusps().len(), 3);
        for &c in k.cusps() {
            let a = k.lifted_tangent(c - 1e-5);
            let b = k.lifted_tangent(c + 1e-5);
            let m = k.lifted_tangent(c);
            assert!((a - b).norm() < 1e-3);
            assert!((a - m).norm() < 1e-3);
        }
        let l = k.period();
        let a = k.lifted_tangent(l - 1e-7);
        let b = k.lifted_tangent(l + 1e-7);
        assert!((a - b).norm() < 1e-5);
    }

    #[test]
    fn reversed_and_rotated_trace_same_set() {
        let k = builtins::wavy_great_circle(0.3, &[2, 3], &[0.1, 0.7]);
        let r = k.reversed();
        let l = k.period();
        for &t in &[0.0, 0.4, 2.0] {
            assert!(proj(r.point(t), k.point(l - t)) < 1e-14);
        }
        let rot = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        let q = k.rotated(rot);
        let p = k.point(0.3);
        assert!((q.point(0.3) - Vec3::new(-p.y, p.x, p.z)).norm() < 1e-14);
    }
}
