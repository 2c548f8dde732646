//! Detection of the six singularity classes.

use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;
use crate::curve::CurveModel;
use crate::math::{circle_dist, wrap, FRAC_PI_2};
use crate::projective::{line_angle, proj_distance, ProjectivePoint, Vec3};
use crate::roots::{pair_roots, roots_1d, ModelTrack, PairOptions, TrackKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Crossing,
    DoubleSupporting,
    Inflection,
    Cusp,
    AntipodalPair,
    NormalTangentPair,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Crossing => "crossing",
            EventKind::DoubleSupporting => "double_supporting",
            EventKind::Inflection => "inflection",
            EventKind::Cusp => "cusp",
            EventKind::AntipodalPair => "antipodal_pair",
            EventKind::NormalTangentPair => "normal_tangent_pair",
        }
    }
}

/// How a double supporting geodesic touches the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Support {
    TangentTangent,
    TangentCusp,
    CuspCusp,
}

impl Support {
    pub fn name(self) -> &'static str {
        match self {
            Support::TangentTangent => "tangent-tangent",
            Support::TangentCusp => "tangent-cusp",
            Support::CuspCusp => "cusp-cusp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    One,
    Two,
}

impl Label {
    pub fn number(self) -> u8 {
        match self {
            Label::One => 1,
            Label::Two => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    /// First parameter; for ordered pairs this is `p`.
    pub t: f64,
    /// Second parameter of pair events; for ordered pairs this is `q`.
    pub t2: Option<f64>,
    pub support: Option<Support>,
    pub label: Option<Label>,
    pub location: ProjectivePoint,
    pub location2: Option<ProjectivePoint>,
}

impl Event {
    pub(crate) fn single(kind: EventKind, k: &CurveModel, t: f64) -> Event {
        Event {
            kind,
            t,
            t2: None,
            support: None,
            label: None,
            location: ProjectivePoint::from_vec(k.point(t)),
            location2: None,
        }
    }

    pub(crate) fn pair(kind: EventKind, k: &CurveModel, t: f64, t2: f64) -> Event {
        Event {
            kind,
            t,
            t2: Some(t2),
            support: None,
            label: None,
            location: ProjectivePoint::from_vec(k.point(t)),
            location2: Some(ProjectivePoint::from_vec(k.point(t2))),
        }
    }

    /// Second parameter, panicking for single-point events.
    pub fn q(&self) -> f64 {
        self.t2.expect("pair event")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EventError {
    /// A pair scan saw the sampled polylines cross but no root converged there.
    RefinementDiverged { kind: EventKind, s: f64, t: f64 },
    /// `k_g` touches zero without changing sign.
    DoubleZero { t: f64 },
    Type2Cusp { t: f64 },
    /// A declared cusp where the curve does not stop.
    VelocityNotZero { t: f64, speed: f64 },
    /// Crossing branches are nearly parallel.
    TangentialContact { s: f64, t: f64, angle: f64 },
    /// Support points of a double supporting geodesic are π/2 apart.
    NearHalfPi { s: f64, t: f64, distance: f64 },
    /// A normal-tangent pair with `q` at the center of curvature of `p`.
    CenterHit { s: f64, t: f64 },
    /// A refined double tangent that fails the direct tangency check.
    UncertifiedBitangent { s: f64, t: f64, residual: f64 },
}

impl fmt::Display for EventError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventError::RefinementDiverged { kind, s, t } => {
                write!(f, "{} refinement diverged near ({s:.6}, {t:.6})", kind.name())
            }
            EventError::DoubleZero { t } => write!(f, "curvature touches zero at {t:.6}"),
            EventError::Type2Cusp { t } => write!(f, "cusp at {t:.6} is not type 1"),
            EventError::VelocityNotZero { t, speed } => {
                write!(f, "declared cusp at {t:.6} has speed {speed:e}")
            }
            EventError::TangentialContact { s, t, angle } => {
                write!(f, "branches at ({s:.6}, {t:.6}) meet at angle {angle:e}")
            }
            EventError::NearHalfPi { s, t, distance } => {
                write!(f, "support points ({s:.6}, {t:.6}) are {distance:.6} apart")
            }
            EventError::CenterHit { s, t } => {
                write!(f, "normal-tangent pair ({s:.6}, {t:.6}) hits the center of curvature")
            }
            EventError::UncertifiedBitangent { s, t, residual } => {
                write!(f, "bitangent ({s:.6}, {t:.6}) fails tangency check ({residual:e})")
            }
        }
    }
}

impl core::error::Error for EventError {}

/// Events found by one detector plus whatever went wrong on the way.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Found {
    pub events: Vec<Event>,
    pub errors: Vec<EventError>,
}

fn pair_options(k: &CurveModel, cfg: &Config, symmetric: bool) -> PairOptions {
    let l = k.period();
    PairOptions {
        grid: cfg.grid,
        symmetric,
        exclude: if symmetric { 4.0 * l / cfg.grid as f64 } else { 0.0 },
        newton_iters: cfg.newton_iters,
        newton_tol: cfg.newton_tol,
        dedup: cfg.tol_dedup_len(l),
    }
}

fn near_any(params: &[f64], t: f64, delta: f64, period: f64) -> bool {
    params.iter().any(|&c| circle_dist(c, t, period) < delta)
}

pub fn find_crossings(k: &CurveModel, cfg: &Config) -> Found {
    let track = ModelTrack::new(k, TrackKind::Position);
    let res = pair_roots(&track, &track, &pair_options(k, cfg, true));
    let mut out = Found::default();
    for (s, t) in res.diverged {
        out.errors.push(EventError::RefinementDiverged { kind: EventKind::Crossing, s, t });
    }
    for r in res.roots {
        let angle = line_angle(k.velocity(r.s), k.velocity(r.t));
        if angle < cfg.tol_ang {
            out.errors.push(EventError::TangentialContact { s: r.s, t: r.t, angle });
        }
        out.events.push(Event::pair(EventKind::Crossing, k, r.s, r.t));
    }
    out
}

pub fn find_inflections(k: &CurveModel, cfg: &Config) -> Found {
    let l = k.period();
    let delta = cfg.delta_cusp_len(l);
    let cusps = k.cusps().to_vec();
    let r = roots_1d(
        |t| k.k_g(t),
        l,
        cfg.grid.max(256),
        cfg.tol_kg.max(1e-6),
        |t| near_any(&cusps, t, delta, l),
    );
    let mut out = Found::default();
    for t in r.roots {
        out.events.push(Event::single(EventKind::Inflection, k, t));
    }
    for t in r.touches {
        out.errors.push(EventError::DoubleZero { t });
    }
    out
}

/// Parameters of the inflections of `k`.
pub fn inflection_params(k: &CurveModel, cfg: &Config) -> Vec<f64> {
    find_inflections(k, cfg).events.iter().map(|e| e.t).collect()
}

/// Parameters where the speed dips below `v_min` that are not declared cusps.
pub fn undeclared_cusps(k: &CurveModel, cfg: &Config) -> Vec<f64> {
    let l = k.period();
    let m = cfg.grid.max(256) * 4;
    let h = l / m as f64;
    let speeds = crate::par::map_range(m, |i| k.speed((i as f64 + 0.5) * h));
    let delta = cfg.delta_cusp_len(l);
    let mut out = Vec::new();
    for i in 0..m {
        let a = speeds[(i + m - 1) % m];
        let b = speeds[i];
        let c = speeds[(i + 1) % m];
        if b <= a && b <= c {
            let t = (i as f64 + 0.5) * h;
            let (tm, v) = golden_min(|x| k.speed(x), t - h, t + h);
            if v < cfg.v_min && !near_any(k.cusps(), tm, delta, l) {
                out.push(crate::math::wrap(tm, l).0);
            }
        }
    }
    out
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (crate::math::sqrt(5.0) - 1.0);
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let m = 0.5 * (a + b);
    (m, f(m))
}

/// Verifies each declared cusp: the curve stops there and leaves on opposite
/// sides of the limiting tangent geodesic.
pub fn find_cusps(k: &CurveModel, cfg: &Config) -> Found {
    let mut out = Found::default();
    let eps = cfg.eps_len(k.period());
    for &c in k.cusps() {
        let speed = k.speed(c);
        let ev = Event::single(EventKind::Cusp, k, c);
        if speed >= cfg.v_min {
            out.errors.push(EventError::VelocityNotZero { t: c, speed });
            continue;
        }
        if cusp_is_type1(k, c, eps) {
            out.events.push(ev);
        } else {
            out.errors.push(EventError::Type2Cusp { t: c });
        }
    }
    out
}

/// One-sided normal offsets at a cusp have opposite signs.
pub fn cusp_is_type1(k: &CurveModel, c: f64, eps: f64) -> bool {
    let p = k.point(c);
    let w = k.dual_jet(c).value();
    let a = (k.point(c - eps) - p).dot(w);
    let b = (k.point(c + eps) - p).dot(w);
    a * b < 0.0
}

pub fn find_double_supporting(k: &CurveModel, cfg: &Config) -> Found {
    let l = k.period();
    let mut out = Found::default();
    let delta = cfg.delta_cusp_len(l);

    let dual = ModelTrack::new(k, TrackKind::Dual);
    let res = pair_roots(&dual, &dual, &pair_options(k, cfg, true));
    for (s, t) in res.diverged {
        out.errors.push(EventError::RefinementDiverged { kind: EventKind::DoubleSupporting, s, t });
    }
    for r in res.roots {
        let bs = k.dual_jet(r.s).value();
        let bt = k.dual_jet(r.t).value();
        let residual = k.point(r.s).dot(bt).abs().max(k.point(r.t).dot(bs).abs());
        if residual > 1e3 * cfg.newton_tol {
            out.errors.push(EventError::UncertifiedBitangent { s: r.s, t: r.t, residual });
            continue;
        }
        let mut e = Event::pair(EventKind::DoubleSupporting, k, r.s, r.t);
        e.support = Some(Support::TangentTangent);
        out.events.push(e);
    }

    let cusps = k.cusps().to_vec();
    for &c in &cusps {
        let pc = k.point(c);
        let r = roots_1d(
            |s| k.dual_jet(s).value().dot(pc),
            l,
            cfg.grid,
            0.0,
            |s| circle_dist(s, c, l) < delta,
        );
        for s in r.roots {
            let (a, b) = if s < c { (s, c) } else { (c, s) };
            let mut e = Event::pair(EventKind::DoubleSupporting, k, a, b);
            e.support = Some(Support::TangentCusp);
            out.events.push(e);
        }
    }
    for i in 0..cusps.len() {
        for j in i + 1..cusps.len() {
            let mut e = Event::pair(EventKind::DoubleSupporting, k, cusps[i], cusps[j]);
            e.support = Some(Support::CuspCusp);
            out.events.push(e);
        }
    }

    for e in &out.events {
        let d = proj_distance(e.location, e.location2.unwrap());
        if (d - FRAC_PI_2).abs() < cfg.tol_ang {
            out.errors.push(EventError::NearHalfPi { s: e.t, t: e.q(), distance: d });
        }
    }
    out.events.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.q().total_cmp(&b.q())));
    out
}

pub fn find_antipodal_pairs(k: &CurveModel, cfg: &Config) -> Found {
    let tan = ModelTrack::new(k, TrackKind::LiftedTangent);
    let pos = ModelTrack::new(k, TrackKind::Position);
    let res = pair_roots(&tan, &pos, &pair_options(k, cfg, false));
    let mut out = Found::default();
    for (s, t) in res.diverged {
        out.errors.push(EventError::RefinementDiverged { kind: EventKind::AntipodalPair, s, t });
    }
    for r in res.roots {
        out.events.push(Event::pair(EventKind::AntipodalPair, k, r.s, r.t));
    }
    // every geodesic through a cusp supports it, so each point of the curve at
    // distance π/2 from the cusp is antipodal to it
    let l = k.period();
    let delta = cfg.delta_cusp_len(l);
    for &c in k.cusps() {
        let pc = k.point(c);
        let r = roots_1d(
            |t| k.point(wrap(t, l).0).dot(pc),
            l,
            cfg.grid,
            0.0,
            |t| circle_dist(t, c, l) < delta,
        );
        for t in r.roots {
            out.events.push(Event::pair(EventKind::AntipodalPair, k, c, t));
        }
    }
    out
}

pub fn find_normal_tangent_pairs(k: &CurveModel, cfg: &Config) -> Found {
    let tan = ModelTrack::new(k, TrackKind::LiftedTangent);
    let dual = ModelTrack::new(k, TrackKind::Dual);
    let res = pair_roots(&tan, &dual, &pair_options(k, cfg, false));
    let mut out = Found::default();
    for (s, t) in res.diverged {
        out.errors.push(EventError::RefinementDiverged {
            kind: EventKind::NormalTangentPair,
            s,
            t,
        });
    }
    for r in res.roots {
        let f = k.frame_unchecked(r.s);
        let q = k.point(r.t);
        if proj_distance(ProjectivePoint::from_vec(q), f.c_p()) < cfg.tol_ang {
            out.errors.push(EventError::CenterHit { s: r.s, t: r.t });
        }
        out.events.push(Event::pair(EventKind::NormalTangentPair, k, r.s, r.t));
    }
    out
}

/// Unit tangent-plane direction of a curve point, for diagnostics.
pub fn tangent_line(k: &CurveModel, t: f64) -> Vec3 {
    k.velocity(t).normalized()
}
