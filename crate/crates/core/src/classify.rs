//! Type 1 / type 2 labels.
//!
//! Crossings and double supporting geodesics are labelled by probing the curve
//! at parameter offsets `±ε` and checking the label survives halving `ε`.
//! Antipodal and normal-tangent pairs are labelled from the frame at `p`.
//! The closed-form sign tests at the bottom are used by the oracle.

use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;
use crate::curve::{CurveError, CurveModel};
use crate::events::{Event, EventKind, Label};
use crate::math::{atan2, circle_dist, sin, FRAC_PI_2, FRAC_PI_4, PI};
use crate::projective::{line_angle, point_along, region_class, OrientedGeodesic, ProjectivePoint, Vec3};

#[derive(Clone, Debug, PartialEq)]
pub enum ClassifyError {
    SectorAmbiguous { t: f64, t2: f64 },
    PerpendicularTangents { t: f64, t2: f64, angle: f64 },
    ParallelTangents { t: f64, t2: f64, angle: f64 },
    NearHalfPi { t: f64, t2: f64 },
    /// The curve leaves a tangency point on both sides of the supporting geodesic.
    MixedSideAtTangency { t: f64, t2: f64 },
    /// `τ_q` coincides with `τ_p` or `Y_p` at an antipodal pair.
    OnBoundary { t: f64, t2: f64 },
    CenterHit { t: f64, t2: f64 },
    /// The region test and the closed-form test disagree.
    Inconsistent { t: f64, t2: f64 },
    Frame(CurveError),
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::SectorAmbiguous { t, t2 } => {
                write!(f, "sector of a segment at ({t:.6}, {t2:.6}) is ambiguous")
            }
            ClassifyError::PerpendicularTangents { t, t2, angle } => {
                write!(f, "crossing ({t:.6}, {t2:.6}) has perpendicular tangents ({angle:.6} rad)")
            }
            ClassifyError::ParallelTangents { t, t2, angle } => {
                write!(f, "crossing ({t:.6}, {t2:.6}) has parallel tangents ({angle:e} rad)")
            }
            ClassifyError::NearHalfPi { t, t2 } => {
                write!(f, "support points ({t:.6}, {t2:.6}) are π/2 apart")
            }
            ClassifyError::MixedSideAtTangency { t, t2 } => {
                write!(f, "curve crosses the supporting geodesic at ({t:.6}, {t2:.6})")
            }
            ClassifyError::OnBoundary { t, t2 } => {
                write!(f, "tangent at q lies on τ_p or Y_p for pair ({t:.6}, {t2:.6})")
            }
            ClassifyError::CenterHit { t, t2 } => {
                write!(f, "q is the center of curvature of p for pair ({t:.6}, {t2:.6})")
            }
            ClassifyError::Inconsistent { t, t2 } => {
                write!(f, "label tests disagree for ({t:.6}, {t2:.6})")
            }
            ClassifyError::Frame(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ClassifyError {}

impl From<CurveError> for ClassifyError {
    fn from(e: CurveError) -> Self {
        ClassifyError::Frame(e)
    }
}

const HALVINGS: usize = 6;

/// One branch through a crossing: its unit tangent and the two probe points.
#[derive(Clone, Copy, Debug)]
pub struct Branch {
    pub tangent: Vec3,
    pub back: Vec3,
    pub ahead: Vec3,
}

fn sgn(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Sector count at a crossing point `x`: label 1 if the acute sectors each hold
/// one segment, label 2 if one holds two. `None` when a segment sits on a
/// tangent line or the counts fit neither case.
pub fn sector_label(x: Vec3, b1: &Branch, b2: &Branch) -> Option<Label> {
    let u1 = x.cross(b1.tangent);
    let u2 = x.cross(b2.tangent);
    let s = if b1.tangent.dot(b2.tangent) >= 0.0 { 1.0 } else { -1.0 };
    let d = b1.tangent + b2.tangent * s;
    let alpha = (sgn(d.dot(u1)), sgn(d.dot(u2)));
    let (mut na, mut nb) = (0, 0);
    for y in [b1.back, b1.ahead, b2.back, b2.ahead] {
        let y = if y.dot(x) < 0.0 { -y } else { y };
        let m = y - x * y.dot(x);
        let scale = m.norm() * 1e-12;
        let (p, q) = (m.dot(u1), m.dot(u2));
        if p.abs() <= scale || q.abs() <= scale {
            return None;
        }
        let sig = (sgn(p), sgn(q));
        if sig == alpha {
            na += 1;
        } else if sig == (-alpha.0, -alpha.1) {
            nb += 1;
        }
    }
    match (na, nb) {
        (1, 1) => Some(Label::One),
        (2, 0) | (0, 2) => Some(Label::Two),
        _ => None,
    }
}

/// Repeats `probe(ε)` with halving until two consecutive offsets agree.
pub fn stable_label(eps: f64, probe: impl Fn(f64) -> Option<Label>) -> Option<Label> {
    let mut prev = probe(eps);
    let mut e = eps;
    for _ in 0..HALVINGS {
        e *= 0.5;
        let cur = probe(e);
        if cur.is_some() && cur == prev {
            return cur;
        }
        prev = cur;
    }
    None
}

fn branch(k: &CurveModel, t: f64, eps: f64, lift: f64) -> Branch {
    Branch {
        tangent: k.velocity(t).normalized() * lift,
        back: k.point(t - eps) * lift,
        ahead: k.point(t + eps) * lift,
    }
}

pub fn classify_crossing(k: &CurveModel, e: &Event, cfg: &Config) -> Result<Label, ClassifyError> {
    let (s, t) = (e.t, e.q());
    let x = k.point(s);
    let lift = if k.point(t).dot(x) < 0.0 { -1.0 } else { 1.0 };
    let angle = line_angle(k.velocity(s), k.velocity(t));
    if angle < cfg.tol_ang {
        return Err(ClassifyError::ParallelTangents { t: s, t2: t, angle });
    }
    if angle > FRAC_PI_2 - cfg.tol_ang {
        return Err(ClassifyError::PerpendicularTangents { t: s, t2: t, angle });
    }
    stable_label(cfg.eps_len(k.period()), |eps| {
        sector_label(x, &branch(k, s, eps, 1.0), &branch(k, t, eps, lift))
    })
    .ok_or(ClassifyError::SectorAmbiguous { t: s, t2: t })
}

fn is_cusp(k: &CurveModel, t: f64) -> bool {
    k.cusps().iter().any(|&c| circle_dist(c, t, k.period()) < 1e-9 * k.period())
}

/// Side of the supporting plane `w` on which the curve leaves the support point `t`.
fn support_side(k: &CurveModel, t: f64, x: Vec3, w: Vec3, eps: f64) -> Option<i8> {
    let lift = |y: Vec3| if y.dot(x) < 0.0 { -y } else { y };
    let a = sgn(lift(k.point(t - eps)).dot(w));
    let b = sgn(lift(k.point(t + eps)).dot(w));
    if a == b && a != 0 {
        Some(a)
    } else {
        None
    }
}

pub fn classify_double_supporting(
    k: &CurveModel,
    e: &Event,
    cfg: &Config,
) -> Result<Label, ClassifyError> {
    let (s, t) = (e.t, e.q());
    let x1 = k.point(s);
    let mut x2 = k.point(t);
    if x1.dot(x2) < 0.0 {
        x2 = -x2;
    }
    let d = atan2(x1.cross(x2).norm(), x1.dot(x2));
    if (d - FRAC_PI_2).abs() < cfg.tol_ang {
        return Err(ClassifyError::NearHalfPi { t: s, t2: t });
    }
    let w = x1.cross(x2).normalized();
    let label = stable_label(cfg.eps_len(k.period()), |eps| {
        let a = support_side(k, s, x1, w, eps)?;
        let b = support_side(k, t, x2, w, eps)?;
        Some(if a == b { Label::One } else { Label::Two })
    });
    match label {
        Some(l) => Ok(l),
        None if is_cusp(k, s) || is_cusp(k, t) => Err(ClassifyError::SectorAmbiguous { t: s, t2: t }),
        None => Err(ClassifyError::MixedSideAtTangency { t: s, t2: t }),
    }
}

/// Unit tangent at `q`; at a cusp this is the limiting direction.
fn tangent_at(k: &CurveModel, q: f64) -> Vec3 {
    if is_cusp(k, q) {
        k.lifted_tangent(q)
    } else {
        k.velocity(q).normalized()
    }
}

pub fn classify_antipodal_pair(
    k: &CurveModel,
    e: &Event,
    cfg: &Config,
) -> Result<Label, ClassifyError> {
    let (s, t) = (e.t, e.q());
    if is_cusp(k, s) {
        return cusp_antipodal_label(k, s, t, cfg);
    }
    let f = k.frame_at(s, cfg)?;
    let q = k.point(t);
    let tq = tangent_at(k, t);
    let tau_q = OrientedGeodesic::from_pole(q.cross(tq)).map_err(|_| ClassifyError::OnBoundary { t: s, t2: t })?;
    let probe = point_along(tau_q, ProjectivePoint::from_vec(q), FRAC_PI_4, 1e-6)
        .map_err(|_| ClassifyError::OnBoundary { t: s, t2: t })?;
    let g1 = OrientedGeodesic::from_pole(f.normal).expect("unit normal");
    let g2 = OrientedGeodesic::from_pole(f.center).expect("unit center");
    let region = region_class(probe, g1, g2, sin(cfg.tol_ang) * sin(FRAC_PI_4))
        .map_err(|_| ClassifyError::OnBoundary { t: s, t2: t })?;
    let label = if region > 0 { Label::One } else { Label::Two };
    if antipodal_label_closed_form(f.normal, f.center, tq) != label {
        return Err(ClassifyError::Inconsistent { t: s, t2: t });
    }
    Ok(label)
}

/// Antipodal pair whose first point is the cusp `c`. The normal and center at
/// `c` are the limits along the smoothing whose tangent geodesic passes through
/// `q`, approached from the incoming branch.
fn cusp_antipodal_label(k: &CurveModel, c: f64, t: f64, cfg: &Config) -> Result<Label, ClassifyError> {
    let x = k.point(c);
    let q = k.point(t);
    let incoming = k.velocity(c - 1e-5 * k.period());
    let d = if q.dot(x.cross(incoming)) < 0.0 { -q } else { q };
    let normal = x.cross(d);
    let tq = tangent_at(k, t);
    let (a, b) = (tq.dot(normal), tq.dot(x));
    if a.abs() < sin(cfg.tol_ang) || b.abs() < sin(cfg.tol_ang) {
        return Err(ClassifyError::OnBoundary { t: c, t2: t });
    }
    Ok(antipodal_label_closed_form(normal, x, tq))
}

/// Position of `q` along `ν_p` from `p` towards the center, reduced to `[0, π)`.
pub fn normal_position(x: Vec3, normal: Vec3, q: Vec3) -> f64 {
    let th = atan2(q.dot(normal), q.dot(x));
    if th < 0.0 {
        th + PI
    } else if th >= PI {
        th - PI
    } else {
        th
    }
}

pub fn classify_normal_tangent_pair(
    k: &CurveModel,
    e: &Event,
    cfg: &Config,
) -> Result<Label, ClassifyError> {
    let (s, t) = (e.t, e.q());
    let f = k.frame_at(s, cfg)?;
    let theta = normal_position(f.x, f.normal, k.point(t));
    nt_label(theta, f.rho, cfg.tol_ang).ok_or(ClassifyError::CenterHit { t: s, t2: t })
}

/// Label 2 when `q` lies between `p` and the center (`θ < ρ`).
pub fn nt_label(theta: f64, rho: f64, tol: f64) -> Option<Label> {
    if (theta - rho).abs() < tol {
        None
    } else if theta < rho {
        Some(Label::Two)
    } else {
        Some(Label::One)
    }
}

pub fn classify(k: &CurveModel, e: &Event, cfg: &Config) -> Result<Option<Label>, ClassifyError> {
    match e.kind {
        EventKind::Crossing => classify_crossing(k, e, cfg).map(Some),
        EventKind::DoubleSupporting => classify_double_supporting(k, e, cfg).map(Some),
        EventKind::AntipodalPair => classify_antipodal_pair(k, e, cfg).map(Some),
        EventKind::NormalTangentPair => classify_normal_tangent_pair(k, e, cfg).map(Some),
        EventKind::Inflection | EventKind::Cusp => Ok(None),
    }
}

/// Labels every event in place; returns the failures with their event index.
pub fn classify_all(k: &CurveModel, events: &mut [Event], cfg: &Config) -> Vec<(usize, ClassifyError)> {
    let results = crate::par::map_range(events.len(), |i| classify(k, &events[i], cfg));
    let mut errs = Vec::new();
    for (i, (e, r)) in events.iter_mut().zip(results).enumerate() {
        match r {
            Ok(l) => e.label = l,
            Err(err) => errs.push((i, err)),
        }
    }
    errs
}

/// Crossing label from the tangents and bending normals of the two branches,
/// taken with sign-matched representatives.
pub fn crossing_label_closed_form(t1: Vec3, n1: Vec3, t2: Vec3, n2: Vec3) -> Label {
    if n1.dot(t2) * n2.dot(t1) * t1.dot(t2) > 0.0 {
        Label::Two
    } else {
        Label::One
    }
}

/// Antipodal label: type 1 iff the tangent at `q` separates like `c_p`.
pub fn antipodal_label_closed_form(normal_p: Vec3, center_p: Vec3, tangent_q: Vec3) -> Label {
    if tangent_q.dot(normal_p) * tangent_q.dot(center_p) > 0.0 {
        Label::One
    } else {
        Label::Two
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::events::{find_crossings, find_double_supporting};

    #[test]
    fn fig7_crossing_labels() {
        let cfg = Config::default();
        let right = builtins::fig7_right();
        let c = find_crossings(&right, &cfg).events;
        assert_eq!(classify_crossing(&right, &c[0], &cfg), Ok(Label::One));
        let left = builtins::fig7_left();
        let c = find_crossings(&left, &cfg).events;
        assert_eq!(classify_crossing(&left, &c[0], &cfg), Ok(Label::Two));
        for k in [&left, &right] {
            let d = find_double_supporting(k, &cfg).events;
            assert_eq!(classify_double_supporting(k, &d[0], &cfg), Ok(Label::One));
        }
    }

    #[test]
    fn right_angle_crossing_is_rejected() {
        let cfg = Config::default();
        let k = builtins::right_angle();
        let c = find_crossings(&k, &cfg).events;
        assert_eq!(c.len(), 1);
        assert!(matches!(
            classify_crossing(&k, &c[0], &cfg),
            Err(ClassifyError::PerpendicularTangents { .. })
        ));
    }

    #[test]
    fn synthetic_antipodal_labels() {
        // p on the equator heading +y, bending towards +z: c_p has positive z
        let n = Vec3::new(0.0, 0.0, 1.0);
        let c = Vec3::new(0.6, 0.0, 0.8);
        assert_eq!(antipodal_label_closed_form(n, c, Vec3::new(0.0, 0.1, 1.0).normalized()), Label::One);
        assert_eq!(antipodal_label_closed_form(n, c, Vec3::new(0.9, 0.1, -0.3).normalized()), Label::Two);
    }

    #[test]
    fn synthetic_normal_tangent_labels() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let n = Vec3::new(0.0, 0.0, 1.0);
        let rho = 0.6;
        let between = Vec3::new(crate::math::cos(0.3), 0.0, sin(0.3));
        let beyond = Vec3::new(crate::math::cos(1.2), 0.0, sin(1.2));
        assert_eq!(nt_label(normal_position(x, n, between), rho, 1e-4), Some(Label::Two));
        assert_eq!(nt_label(normal_position(x, n, -beyond), rho, 1e-4), Some(Label::One));
        assert_eq!(nt_label(normal_position(x, n, Vec3::new(crate::math::cos(rho), 0.0, sin(rho))), rho, 1e-4), None);
    }
}
