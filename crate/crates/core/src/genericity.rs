//! Checks the genericity conditions the counting identities rely on.
//!
//! Violations are data: an empty list means the curve passed every check at
//! tolerance scale. Nothing here proves genericity.

use alloc::vec::Vec;
use core::fmt;

use crate::classify::ClassifyError;
use crate::config::Config;
use crate::curve::{CurveError, CurveModel};
use crate::events::{undeclared_cusps, Event, EventError, EventKind, Support};
use crate::kbar::KbarError;
use crate::math::{circle_dist, sin, FRAC_PI_2};
use crate::projective::{line_angle, proj_distance, ProjectivePoint, Vec3};
use crate::roots::roots_1d;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// A detector saw an event it could not pin down.
    DetectionFailed { kind: EventKind, s: f64, t: f64 },
    ParallelTangents { s: f64, t: f64, angle: f64 },
    PerpendicularTangents { s: f64, t: f64, angle: f64 },
    /// The tangent geodesic at an inflection or cusp `t` touches the curve at `q`.
    TangentNotTransverse { t: f64, q: f64, angle: f64 },
    /// One geodesic is tangent to the curve or passes through a cusp at three points.
    CollinearSupports { s: f64, t: f64, u: f64 },
    /// A branch crosses through an inflection or a cusp.
    CrossingAtSingularPoint { s: f64, t: f64, at: f64 },
    /// The normal geodesic at `p` is tangent to the curve at two points.
    NormalTangentTwice { p: f64, q1: f64, q2: f64 },
    NearHalfPi { s: f64, t: f64, distance: f64 },
    /// `τ_q` is `τ_p` or `Y_p` at an antipodal pair.
    AntipodalOnAxis { s: f64, t: f64 },
    CenterHit { s: f64, t: f64 },
    /// `k_g` touches zero without changing sign.
    FlatPoint { t: f64 },
    Type2Cusp { t: f64 },
    /// The curve stops at `t` but no cusp is declared there.
    UndeclaredCusp { t: f64 },
    /// A declared cusp where the curve keeps moving.
    MovingCusp { t: f64, speed: f64 },
    /// The local label tests disagree or depend on the probe scale.
    AmbiguousLabel { kind: EventKind, s: f64, t: f64 },
    /// A frame was needed at a point where it is undefined.
    FrameUndefined { t: f64 },
    /// A label on K̄ depends on the bend of an inflection geodesic.
    BendUnstable { geodesic: usize },
}

impl Violation {
    /// Machine-readable code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::DetectionFailed { .. } => "detection_failed",
            Violation::ParallelTangents { .. } => "parallel_tangents",
            Violation::PerpendicularTangents { .. } => "perpendicular_tangents",
            Violation::TangentNotTransverse { .. } => "tangent_not_transverse",
            Violation::CollinearSupports { .. } => "collinear_supports",
            Violation::CrossingAtSingularPoint { .. } => "crossing_at_singular_point",
            Violation::NormalTangentTwice { .. } => "normal_tangent_twice",
            Violation::NearHalfPi { .. } => "near_half_pi",
            Violation::AntipodalOnAxis { .. } => "antipodal_on_axis",
            Violation::CenterHit { .. } => "center_hit",
            Violation::FlatPoint { .. } => "flat_point",
            Violation::Type2Cusp { .. } => "type2_cusp",
            Violation::UndeclaredCusp { .. } => "undeclared_cusp",
            Violation::MovingCusp { .. } => "moving_cusp",
            Violation::AmbiguousLabel { .. } => "ambiguous_label",
            Violation::FrameUndefined { .. } => "frame_undefined",
            Violation::BendUnstable { .. } => "bend_unstable",
        }
    }

    /// Curve parameters the violation refers to.
    pub fn params(&self) -> Vec<f64> {
        use Violation::*;
        match *self {
            DetectionFailed { s, t, .. }
            | ParallelTangents { s, t, .. }
            | PerpendicularTangents { s, t, .. }
            | NearHalfPi { s, t, .. }
            | AntipodalOnAxis { s, t }
            | CenterHit { s, t }
            | AmbiguousLabel { s, t, .. } => alloc::vec![s, t],
            TangentNotTransverse { t, q, .. } => alloc::vec![t, q],
            CollinearSupports { s, t, u } => alloc::vec![s, t, u],
            CrossingAtSingularPoint { s, t, at } => alloc::vec![s, t, at],
            NormalTangentTwice { p, q1, q2 } => alloc::vec![p, q1, q2],
            FlatPoint { t } | Type2Cusp { t } | UndeclaredCusp { t } | MovingCusp { t, .. } => {
                alloc::vec![t]
            }
            FrameUndefined { t } => alloc::vec![t],
            BendUnstable { .. } => Vec::new(),
        }
    }

    /// Converts a detector error; `None` for errors the checks here recompute.
    pub fn from_event_error(e: &EventError) -> Option<Violation> {
        Some(match *e {
            EventError::RefinementDiverged { kind, s, t } => Violation::DetectionFailed { kind, s, t },
            EventError::UncertifiedBitangent { s, t, .. } => {
                Violation::DetectionFailed { kind: EventKind::DoubleSupporting, s, t }
            }
            EventError::DoubleZero { t } => Violation::FlatPoint { t },
            EventError::Type2Cusp { t } => Violation::Type2Cusp { t },
            EventError::VelocityNotZero { t, speed } => Violation::MovingCusp { t, speed },
            EventError::TangentialContact { .. }
            | EventError::NearHalfPi { .. }
            | EventError::CenterHit { .. } => return None,
        })
    }

    pub fn from_classify_error(kind: EventKind, e: &ClassifyError) -> Violation {
        match *e {
            ClassifyError::PerpendicularTangents { t, t2, angle } => {
                Violation::PerpendicularTangents { s: t, t: t2, angle }
            }
            ClassifyError::ParallelTangents { t, t2, angle } => {
                Violation::ParallelTangents { s: t, t: t2, angle }
            }
            ClassifyError::NearHalfPi { t, t2 } => {
                Violation::NearHalfPi { s: t, t: t2, distance: FRAC_PI_2 }
            }
            ClassifyError::OnBoundary { t, t2 } => Violation::AntipodalOnAxis { s: t, t: t2 },
            ClassifyError::CenterHit { t, t2 } => Violation::CenterHit { s: t, t: t2 },
            ClassifyError::SectorAmbiguous { t, t2 }
            | ClassifyError::MixedSideAtTangency { t, t2 }
            | ClassifyError::Inconsistent { t, t2 } => Violation::AmbiguousLabel { kind, s: t, t: t2 },
            ClassifyError::Frame(ref c) => Violation::FrameUndefined { t: frame_param(c) },
        }
    }

    pub fn from_kbar_error(e: &KbarError) -> Violation {
        match *e {
            KbarError::BendUnstable { geodesic, .. } => Violation::BendUnstable { geodesic },
            KbarError::DegenerateAngle { geodesic, .. } => Violation::BendUnstable { geodesic },
            KbarError::CenterHit { t, .. } => Violation::CenterHit { s: t, t },
        }
    }
}

fn frame_param(e: &CurveError) -> f64 {
    match *e {
        CurveError::AtCusp { t, .. } | CurveError::AtInflection { t, .. } | CurveError::Degenerate { t } => t,
        CurveError::CuspOffSample { t } => t,
        _ => f64::NAN,
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DetectionFailed { kind, s, t } => {
                write!(f, "{} detection failed near ({s:.6}, {t:.6})", kind.name())
            }
            ParallelTangents { s, t, angle } => {
                write!(f, "crossing ({s:.6}, {t:.6}) has parallel tangents ({angle:e} rad)")
            }
            PerpendicularTangents { s, t, angle } => {
                write!(f, "crossing ({s:.6}, {t:.6}) has perpendicular tangents ({angle:.6} rad)")
            }
            TangentNotTransverse { t, q, angle } => {
                write!(f, "tangent geodesic at t={t:.6} meets the curve at t={q:.6} at angle {angle:e}")
            }
            CollinearSupports { s, t, u } => {
                write!(f, "one geodesic supports the curve at {s:.6}, {t:.6} and {u:.6}")
            }
            CrossingAtSingularPoint { s, t, at } => {
                write!(f, "crossing ({s:.6}, {t:.6}) passes through the singular point {at:.6}")
            }
            NormalTangentTwice { p, q1, q2 } => {
                write!(f, "normal geodesic at {p:.6} is tangent at {q1:.6} and {q2:.6}")
            }
            NearHalfPi { s, t, distance } => {
                write!(f, "support points ({s:.6}, {t:.6}) are {distance:.6} apart")
            }
            AntipodalOnAxis { s, t } => {
                write!(f, "tangent at q lies on τ_p or Y_p for antipodal pair ({s:.6}, {t:.6})")
            }
            CenterHit { s, t } => write!(f, "q={t:.6} is the center of curvature of p={s:.6}"),
            FlatPoint { t } => write!(f, "curvature touches zero at {t:.6}"),
            Type2Cusp { t } => write!(f, "cusp at {t:.6} is not type 1"),
            UndeclaredCusp { t } => write!(f, "the curve stops at {t:.6} but no cusp is declared"),
            MovingCusp { t, speed } => write!(f, "declared cusp at {t:.6} has speed {speed:e}"),
            AmbiguousLabel { kind, s, t } => {
                write!(f, "{} at ({s:.6}, {t:.6}) has no stable label", kind.name())
            }
            FrameUndefined { t } => write!(f, "frame undefined at {t:.6}"),
            BendUnstable { geodesic } => {
                write!(f, "a label on inflection geodesic {geodesic} depends on the bend")
            }
        }
    }
}

/// Unit pole of the geodesic supporting a double supporting event.
fn support_pole(k: &CurveModel, e: &Event) -> Vec3 {
    match e.support {
        Some(Support::TangentTangent) | None => k.dual_jet(e.t).value(),
        _ => k.point(e.t).cross(k.point(e.q())).normalized(),
    }
}

fn singular_params(k: &CurveModel, events: &[Event]) -> Vec<f64> {
    let mut out: Vec<f64> = events
        .iter()
        .filter(|e| e.kind == EventKind::Inflection)
        .map(|e| e.t)
        .collect();
    out.extend_from_slice(k.cusps());
    out
}

fn check_crossings(k: &CurveModel, events: &[Event], cfg: &Config, out: &mut Vec<Violation>) {
    let l = k.period();
    let delta = cfg.delta_cusp_len(l);
    let singular = singular_params(k, events);
    for e in events.iter().filter(|e| e.kind == EventKind::Crossing) {
        let (s, t) = (e.t, e.q());
        if let Some(&at) = singular
            .iter()
            .find(|&&c| circle_dist(c, s, l) < delta || circle_dist(c, t, l) < delta)
        {
            out.push(Violation::CrossingAtSingularPoint { s, t, at });
            continue;
        }
        let angle = line_angle(k.velocity(s), k.velocity(t));
        if angle < cfg.tol_ang {
            out.push(Violation::ParallelTangents { s, t, angle });
        } else if angle > FRAC_PI_2 - cfg.tol_ang {
            out.push(Violation::PerpendicularTangents { s, t, angle });
        }
    }
}

/// Tangent geodesics at inflections and cusps must cross the curve transversally.
fn check_singular_tangents(k: &CurveModel, events: &[Event], cfg: &Config, out: &mut Vec<Violation>) {
    let l = k.period();
    let delta = cfg.delta_cusp_len(l);
    for t in singular_params(k, events) {
        let x = k.point(t);
        let tan = k.lifted_tangent(t);
        let pole = x.cross(tan).normalized();
        let r = roots_1d(|q| k.point(q).dot(pole), l, cfg.grid, cfg.tol_on, |q| circle_dist(q, t, l) < delta);
        for q in r.touches {
            out.push(Violation::TangentNotTransverse { t, q, angle: 0.0 });
        }
        for q in r.roots {
            if k.near_cusp(q, delta).is_some() {
                continue;
            }
            let along = pole.cross(k.point(q));
            let angle = line_angle(k.velocity(q), along);
            if angle < cfg.tol_ang {
                out.push(Violation::TangentNotTransverse { t, q, angle });
            }
        }
    }
}

fn check_supports(k: &CurveModel, events: &[Event], cfg: &Config, out: &mut Vec<Violation>) {
    let l = k.period();
    let ds: Vec<&Event> = events.iter().filter(|e| e.kind == EventKind::DoubleSupporting).collect();
    let poles: Vec<Vec3> = ds.iter().map(|e| support_pole(k, e)).collect();
    let same = |a: f64, b: f64| circle_dist(a, b, l) < cfg.tol_dedup_len(l);
    for (i, e) in ds.iter().enumerate() {
        let d = proj_distance(e.location, e.location2.expect("pair event"));
        if (d - FRAC_PI_2).abs() < cfg.tol_ang {
            out.push(Violation::NearHalfPi { s: e.t, t: e.q(), distance: d });
        }
        for &c in k.cusps() {
            if !same(c, e.t) && !same(c, e.q()) && k.point(c).dot(poles[i]).abs() < cfg.tol_on {
                out.push(Violation::CollinearSupports { s: e.t, t: e.q(), u: c });
            }
        }
        for j in i + 1..ds.len() {
            let f = ds[j];
            if line_angle(poles[i], poles[j]) < cfg.tol_sep {
                let u = if same(f.t, e.t) || same(f.t, e.q()) { f.q() } else { f.t };
                out.push(Violation::CollinearSupports { s: e.t, t: e.q(), u });
            }
        }
    }
}

fn check_pairs(k: &CurveModel, events: &[Event], cfg: &Config, out: &mut Vec<Violation>) {
    let l = k.period();
    let tol = sin(cfg.tol_ang);
    let nt: Vec<&Event> = events.iter().filter(|e| e.kind == EventKind::NormalTangentPair).collect();
    for (i, a) in nt.iter().enumerate() {
        for b in &nt[i + 1..] {
            if circle_dist(a.t, b.t, l) < cfg.tol_dedup_len(l) {
                out.push(Violation::NormalTangentTwice { p: a.t, q1: a.q(), q2: b.q() });
            }
        }
        let f = k.frame_unchecked(a.t);
        if proj_distance(ProjectivePoint::from_vec(k.point(a.q())), f.c_p()) < cfg.tol_ang {
            out.push(Violation::CenterHit { s: a.t, t: a.q() });
        }
    }
    let is_cusp = |t: f64| k.near_cusp(t, 1e-9 * l).is_some();
    for e in events.iter().filter(|e| e.kind == EventKind::AntipodalPair) {
        if is_cusp(e.t) {
            continue;
        }
        let f = k.frame_unchecked(e.t);
        let tq = k.lifted_tangent(e.q());
        if tq.dot(f.normal).abs() < tol || tq.dot(f.center).abs() < tol {
            out.push(Violation::AntipodalOnAxis { s: e.t, t: e.q() });
        }
    }
}

/// Runs every geometric check on detected events. Detector and classifier
/// failures are converted separately with the `from_*` constructors.
pub fn check_genericity(k: &CurveModel, events: &[Event], cfg: &Config) -> Vec<Violation> {
    let mut out = Vec::new();
    check_crossings(k, events, cfg, &mut out);
    check_singular_tangents(k, events, cfg, &mut out);
    check_supports(k, events, cfg, &mut out);
    check_pairs(k, events, cfg, &mut out);
    for t in undeclared_cusps(k, cfg) {
        out.push(Violation::UndeclaredCusp { t });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::pipeline::detect;

    fn violations(k: &CurveModel) -> Vec<Violation> {
        let cfg = Config::default();
        let (events, _) = detect(k, &cfg);
        check_genericity(k, &events, &cfg)
    }

    #[test]
    fn circle_is_generic() {
        assert!(violations(&builtins::latitude_circle(0.7)).is_empty());
    }

    #[test]
    fn right_angle_is_flagged() {
        let v = violations(&builtins::right_angle());
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].code(), "perpendicular_tangents");
    }

    #[test]
    fn half_pi_support_is_flagged() {
        let v = violations(&builtins::half_pi_support());
        assert!(v.iter().any(|v| v.code() == "near_half_pi"), "{v:?}");
    }

    #[test]
    fn codes_are_distinct() {
        let all = [
            Violation::DetectionFailed { kind: EventKind::Crossing, s: 0.0, t: 0.0 },
            Violation::ParallelTangents { s: 0.0, t: 0.0, angle: 0.0 },
            Violation::PerpendicularTangents { s: 0.0, t: 0.0, angle: 0.0 },
            Violation::TangentNotTransverse { t: 0.0, q: 0.0, angle: 0.0 },
            Violation::CollinearSupports { s: 0.0, t: 0.0, u: 0.0 },
            Violation::CrossingAtSingularPoint { s: 0.0, t: 0.0, at: 0.0 },
            Violation::NormalTangentTwice { p: 0.0, q1: 0.0, q2: 0.0 },
            Violation::NearHalfPi { s: 0.0, t: 0.0, distance: 0.0 },
            Violation::AntipodalOnAxis { s: 0.0, t: 0.0 },
            Violation::CenterHit { s: 0.0, t: 0.0 },
            Violation::FlatPoint { t: 0.0 },
            Violation::Type2Cusp { t: 0.0 },
            Violation::UndeclaredCusp { t: 0.0 },
            Violation::MovingCusp { t: 0.0, speed: 0.0 },
            Violation::AmbiguousLabel { kind: EventKind::Crossing, s: 0.0, t: 0.0 },
            Violation::FrameUndefined { t: 0.0 },
            Violation::BendUnstable { geodesic: 0 },
        ];
        let mut codes: Vec<&str> = all.iter().map(|v| v.code()).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), all.len());
    }
}
