//! Brute-force counts on dense polylines.
//!
//! Nothing here uses Newton steps or the refined detectors. Crossings and
//! double supporting geodesics are segment intersections of the sampled curve
//! and of its sampled dual, found through a uniform spatial hash. Antipodal and
//! normal-tangent pairs are intersections of the sampled tangent indicatrix with
//! the sampled curve and dual. Inflections and cusps come from the discrete
//! turning and from direction reversals of the polyline. Labels are taken from
//! [`classify`](crate::classify) at the parameters found here; events it cannot
//! label are counted but left untyped.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::classify;
use crate::config::Config;
use crate::curve::CurveModel;
use crate::events::{Event, EventKind, Support};
use crate::identities::CountReport;
use crate::math::{circle_dist, floor, wrap};
use crate::projective::Vec3;

pub const MIN_RESOLUTION: usize = 10_000;

/// Samples sit at `(i + PHASE)·L/n`, off the symmetry points of the builtins.
const PHASE: f64 = core::f64::consts::FRAC_1_PI;

const KINDS: [EventKind; 6] = [
    EventKind::Crossing,
    EventKind::DoubleSupporting,
    EventKind::Inflection,
    EventKind::Cusp,
    EventKind::AntipodalPair,
    EventKind::NormalTangentPair,
];

#[derive(Clone, Debug, PartialEq)]
pub enum OracleError {
    ResolutionBelowMinimum { resolution: usize },
    /// The number of events of `kind` differs between `resolution` and twice that.
    ResolutionTooLow { kind: EventKind, resolution: usize, coarse: usize, fine: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::ResolutionBelowMinimum { resolution } => {
                write!(f, "oracle resolution {resolution} is below {MIN_RESOLUTION}")
            }
            OracleError::ResolutionTooLow { kind, resolution, coarse, fine } => write!(
                f,
                "{} count changes from {coarse} to {fine} when resolution {resolution} is doubled",
                kind.name()
            ),
        }
    }
}

impl core::error::Error for OracleError {}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub resolution: usize,
    /// Every event found, labelled where possible.
    pub events: Vec<Event>,
    /// Counts over the labelled events, residuals filled in.
    pub report: CountReport,
    /// Events of each kind, in the order of [`EventKind`], labelled or not.
    pub totals: [usize; 6],
}

impl OracleReport {
    pub fn total(&self, kind: EventKind) -> usize {
        self.totals[kind as usize]
    }

    pub fn unlabelled(&self) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(|e| e.label.is_none() && !matches!(e.kind, EventKind::Inflection | EventKind::Cusp))
    }
}

/// Counts at `resolution` samples per period, checked against twice that.
pub fn oracle_counts(k: &CurveModel, resolution: usize, cfg: &Config) -> Result<OracleReport, OracleError> {
    if resolution < MIN_RESOLUTION {
        return Err(OracleError::ResolutionBelowMinimum { resolution });
    }
    let coarse = oracle_at(k, resolution, cfg);
    let fine = oracle_at(k, 2 * resolution, cfg);
    for kind in KINDS {
        let (a, b) = (coarse.total(kind), fine.total(kind));
        if a != b {
            return Err(OracleError::ResolutionTooLow { kind, resolution, coarse: a, fine: b });
        }
    }
    if !coarse.report.same_counts(&fine.report) {
        // same totals, different labels: report the first kind that moved
        let kind = first_label_change(&coarse.report, &fine.report);
        return Err(OracleError::ResolutionTooLow {
            kind,
            resolution,
            coarse: coarse.total(kind),
            fine: fine.total(kind),
        });
    }
    Ok(coarse)
}

fn first_label_change(a: &CountReport, b: &CountReport) -> EventKind {
    if (a.c1, a.c2) != (b.c1, b.c2) {
        EventKind::Crossing
    } else if (a.t1, a.t2) != (b.t1, b.t2) {
        EventKind::DoubleSupporting
    } else if (a.a1, a.a2) != (b.a1, b.a2) {
        EventKind::AntipodalPair
    } else {
        EventKind::NormalTangentPair
    }
}

/// One pass at `n` samples per period, without the doubling check.
pub fn oracle_at(k: &CurveModel, n: usize, cfg: &Config) -> OracleReport {
    let l = k.period();
    let step = l / n as f64;
    let window = cfg.delta_cusp_len(l).max(4.0 * step);

    let cusps = reversals(k, n);
    let inflections = turning_changes(k, n, &cusps, window);

    let pos = Poly::sample(n, k.closure(), l, |t| k.point(t));
    let tan = Poly::sample(n, k.closure_tangent(), l, |t| k.lifted_tangent(t));
    let dual = Poly::sample(n, k.closure() * k.closure_tangent(), l, |t| k.dual_jet(t).value());

    let near = |list: &[f64], s: f64, t: f64| {
        list.iter().any(|&c| circle_dist(s, c, l) < window && circle_dist(t, c, l) < window)
    };
    let tol = 4.0 * step;

    let crossings = self_hits(&pos, tol, |s, t| near(&cusps, s, t));
    let bitangents = self_hits(&dual, tol, |s, t| near(&inflections, s, t));
    let antipodal = cross_hits(&tan, &pos, tol);
    let normal_tangent = cross_hits(&tan, &dual, tol);

    let declared = |c: f64| {
        k.cusps()
            .iter()
            .copied()
            .find(|&d| circle_dist(c, d, l) < tol)
            .unwrap_or(c)
    };
    let cusp_params: Vec<f64> = cusps.iter().map(|&c| declared(c)).collect();

    let mut events = Vec::new();
    let single = |kind, t: f64| Event::single(kind, k, t);
    let pair = |kind, s: f64, t: f64| Event::pair(kind, k, s, t);
    for (s, t) in crossings {
        events.push(pair(EventKind::Crossing, s, t));
    }
    for (s, t) in bitangents {
        let mut e = pair(EventKind::DoubleSupporting, s, t);
        e.support = Some(Support::TangentTangent);
        events.push(e);
    }
    for (i, &c) in cusp_params.iter().enumerate() {
        let pc = k.point(c);
        for q in sign_changes(n, l, |t| k.dual_jet(t).value().dot(pc), |t| circle_dist(t, c, l) < window) {
            let (a, b) = if q < c { (q, c) } else { (c, q) };
            let mut e = pair(EventKind::DoubleSupporting, a, b);
            e.support = Some(Support::TangentCusp);
            events.push(e);
        }
        for &d in &cusp_params[i + 1..] {
            let (a, b) = if c < d { (c, d) } else { (d, c) };
            let mut e = pair(EventKind::DoubleSupporting, a, b);
            e.support = Some(Support::CuspCusp);
            events.push(e);
        }
    }
    for &t in &inflections {
        events.push(single(EventKind::Inflection, t));
    }
    for &c in &cusp_params {
        events.push(single(EventKind::Cusp, c));
    }
    for (s, t) in antipodal {
        events.push(pair(EventKind::AntipodalPair, s, t));
    }
    for &c in &cusp_params {
        let pc = k.point(c);
        for q in sign_changes(n, l, |t| k.point(t).dot(pc), |t| circle_dist(t, c, l) < window) {
            events.push(pair(EventKind::AntipodalPair, c, q));
        }
    }
    for (s, t) in normal_tangent {
        events.push(pair(EventKind::NormalTangentPair, s, t));
    }

    let labels = crate::par::map_range(events.len(), |i| classify(k, &events[i], cfg).ok().flatten());
    for (e, lab) in events.iter_mut().zip(labels) {
        e.label = lab;
    }
    let mut totals = [0usize; 6];
    for e in &events {
        totals[e.kind as usize] += 1;
    }
    let labelled: Vec<Event> = events
        .iter()
        .filter(|e| e.label.is_some() || matches!(e.kind, EventKind::Inflection | EventKind::Cusp))
        .cloned()
        .collect();
    let report = CountReport::from_events(&labelled).expect("only labelled events are tallied");
    OracleReport { resolution: n, events, report, totals }
}

/// Events in `a` with no partner in `b` of the same kind within `tol`, and
/// vice versa, matched greedily. Returns indices into `a` and into `b`.
pub fn unmatched(a: &[Event], b: &[Event], period: f64, tol: f64) -> (Vec<usize>, Vec<usize>) {
    let mut used = alloc::vec![false; b.len()];
    let mut lost_a = Vec::new();
    for (i, e) in a.iter().enumerate() {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, f)| !used[*j] && f.kind == e.kind)
            .map(|(j, f)| (j, event_distance(e, f, period)))
            .filter(|&(_, d)| d < tol)
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((j, _)) => used[j] = true,
            None => lost_a.push(i),
        }
    }
    let lost_b = (0..b.len()).filter(|&j| !used[j]).collect();
    (lost_a, lost_b)
}

fn event_distance(e: &Event, f: &Event, l: f64) -> f64 {
    let d = circle_dist(e.t, f.t, l);
    match (e.t2, f.t2) {
        (Some(a), Some(b)) => {
            let direct = d.max(circle_dist(a, b, l));
            let symmetric = matches!(e.kind, EventKind::Crossing | EventKind::DoubleSupporting);
            if symmetric {
                direct.min(circle_dist(e.t, b, l).max(circle_dist(a, f.t, l)))
            } else {
                direct
            }
        }
        _ => d,
    }
}

/// A closed spherical polyline covering `copies` periods.
struct Poly {
    pts: Vec<Vec3>,
    n: usize,
    period: f64,
}

impl Poly {
    fn sample(n: usize, closure: f64, period: f64, f: impl Fn(f64) -> Vec3 + Sync + Send) -> Poly {
        let copies = if closure < 0.0 { 2 } else { 1 };
        let step = period / n as f64;
        let pts = crate::par::map_range(copies * n, |i| f((i as f64 + PHASE) * step));
        Poly { pts, n, period }
    }

    fn len(&self) -> usize {
        self.pts.len()
    }

    fn seg(&self, i: usize, sign: f64) -> (Vec3, Vec3) {
        (self.pts[i] * sign, self.pts[(i + 1) % self.len()] * sign)
    }

    /// Parameter, reduced to one period, at fraction `u` along segment `i`.
    fn param(&self, i: usize, u: f64) -> f64 {
        wrap((i as f64 + PHASE + u) * self.period / self.n as f64, self.period).0
    }

    fn max_seg(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.seg(i, 1.0);
                (b - a).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Crossing of two short arcs on the sphere, as fractions along each.
fn seg_cross(a0: Vec3, a1: Vec3, b0: Vec3, b1: Vec3) -> Option<(f64, f64)> {
    if a0.dot(b0) <= 0.0 {
        return None;
    }
    // det(a0, a1, b) written through differences, which stay accurate for
    // segments far shorter than the rounding error of a0 × a1
    let (da, db) = (a1 - a0, b1 - b0);
    let s0 = da.cross(b0 - a0).dot(a0);
    let s1 = da.cross(b1 - a0).dot(a0);
    let r0 = db.cross(a0 - b0).dot(b0);
    let r1 = db.cross(a1 - b0).dot(b0);
    // a vertex exactly on the other arc counts on the non-negative side
    if (s0 >= 0.0) == (s1 >= 0.0) || (r0 >= 0.0) == (r1 >= 0.0) {
        return None;
    }
    Some((r0 / (r0 - r1), s0 / (s0 - s1)))
}

/// Uniform hash of segment start points.
struct Grid {
    cell: f64,
    map: BTreeMap<(i64, i64, i64), Vec<u32>>,
}

impl Grid {
    fn build(p: &Poly, sign: f64, cell: f64) -> Grid {
        let mut map: BTreeMap<(i64, i64, i64), Vec<u32>> = BTreeMap::new();
        for i in 0..p.len() {
            map.entry(key(p.pts[i] * sign, cell)).or_default().push(i as u32);
        }
        Grid { cell, map }
    }

    fn near(&self, x: Vec3, mut f: impl FnMut(usize)) {
        let (a, b, c) = key(x, self.cell);
        for da in -1..=1 {
            for db in -1..=1 {
                for dc in -1..=1 {
                    if let Some(v) = self.map.get(&(a + da, b + db, c + dc)) {
                        v.iter().for_each(|&j| f(j as usize));
                    }
                }
            }
        }
    }
}

fn key(x: Vec3, cell: f64) -> (i64, i64, i64) {
    let q = |v: f64| floor(v / cell) as i64;
    (q(x.x), q(x.y), q(x.z))
}

/// All segment pairs of `a` against `b·sign`, as raw parameter pairs.
fn raw_hits(a: &Poly, b: &Poly, sign: f64, keep: impl Fn(usize, usize) -> bool + Sync + Send) -> Vec<(f64, f64)> {
    // intersecting segments have start points at most two segment lengths apart
    let cell = 2.0 * a.max_seg().max(b.max_seg()) + 1e-12;
    let grid = Grid::build(b, sign, cell);
    let block = 4096;
    let blocks = a.len().div_ceil(block);
    crate::par::flat_map_range(blocks, |bi| {
        let mut out = Vec::new();
        for i in bi * block..((bi + 1) * block).min(a.len()) {
            let (a0, a1) = a.seg(i, 1.0);
            grid.near(a0, |j| {
                if !keep(i, j) {
                    return;
                }
                let (b0, b1) = b.seg(j, sign);
                if let Some((u, v)) = seg_cross(a0, a1, b0, b1) {
                    out.push((a.param(i, u), b.param(j, v)));
                }
            });
        }
        out
    })
}

/// Self-intersections in RP², as unordered pairs `s < t`.
fn self_hits(p: &Poly, tol: f64, exclude: impl Fn(f64, f64) -> bool) -> Vec<(f64, f64)> {
    let m = p.len();
    let apart = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        d.min(m - d) > 1
    };
    let mut hits = raw_hits(p, p, 1.0, move |i, j| i < j && apart(i, j));
    if m == p.n {
        // a curve closed on the sphere also meets its antipodal copy
        hits.extend(raw_hits(p, p, -1.0, |_, _| true));
    }
    let hits = hits
        .into_iter()
        .map(|(s, t)| if s <= t { (s, t) } else { (t, s) })
        .filter(|&(s, t)| circle_dist(s, t, p.period) > tol && !exclude(s, t))
        .collect();
    merge(hits, p.period, tol, true)
}

/// Meetings of `a` with `b` in RP², as ordered pairs `(s on a, t on b)`.
fn cross_hits(a: &Poly, b: &Poly, tol: f64) -> Vec<(f64, f64)> {
    let mut hits = raw_hits(a, b, 1.0, |_, _| true);
    hits.extend(raw_hits(a, b, -1.0, |_, _| true));
    merge(hits, a.period, tol, false)
}

/// Collapses repeated hits of one event; a doubled lift sees each twice.
fn merge(mut hits: Vec<(f64, f64)>, l: f64, tol: f64, symmetric: bool) -> Vec<(f64, f64)> {
    hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for h in hits {
        let dup = out.iter().any(|o| {
            let d = circle_dist(o.0, h.0, l).max(circle_dist(o.1, h.1, l));
            let sw = circle_dist(o.0, h.1, l).max(circle_dist(o.1, h.0, l));
            d < tol || (symmetric && sw < tol)
        });
        if !dup {
            out.push(h);
        }
    }
    out
}

/// Sign changes of `f` between consecutive samples over one period, skipping
/// brackets that touch the excluded set. `f` is evaluated on unreduced
/// parameters so antiperiodic curves do not produce a change at the seam.
fn sign_changes(
    n: usize,
    l: f64,
    f: impl Fn(f64) -> f64 + Sync + Send,
    skip: impl Fn(f64) -> bool + Sync + Send,
) -> Vec<f64> {
    let step = l / n as f64;
    let vals = crate::par::map_range(n + 1, |i| f((i as f64 + PHASE) * step));
    (0..n)
        .filter_map(|i| {
            let (t0, t1) = ((i as f64 + PHASE) * step, (i as f64 + 1.0 + PHASE) * step);
            if skip(wrap(t0, l).0) || skip(wrap(t1, l).0) {
                return None;
            }
            let (a, b) = (vals[i], vals[i + 1]);
            if (a >= 0.0) != (b >= 0.0) {
                Some(wrap(t0 + step * a / (a - b), l).0)
            } else {
                None
            }
        })
        .collect()
}

/// Parameters where the polyline doubles back on itself.
fn reversals(k: &CurveModel, n: usize) -> Vec<f64> {
    let l = k.period();
    let step = l / n as f64;
    let pts = crate::par::map_range(n + 2, |i| k.point((i as f64 - 1.0 + PHASE) * step));
    let mut out: Vec<f64> = Vec::new();
    for i in 1..=n {
        let d = (pts[i] - pts[i - 1]).dot(pts[i + 1] - pts[i]);
        if d < 0.0 {
            let t = (i as f64 - 1.0 + PHASE) * step;
            if out.last().is_none_or(|&p| t - p > 2.5 * step) {
                out.push(t);
            }
        }
    }
    // a reversal straddling the seam is seen at both ends
    if out.len() > 1 && circle_dist(out[0], *out.last().unwrap(), l) < 2.5 * step {
        out.pop();
    }
    out
}

/// Sign changes of the discrete turning `((p - p₋) × (p₊ - p))·p`, away from cusps.
fn turning_changes(k: &CurveModel, n: usize, cusps: &[f64], window: f64) -> Vec<f64> {
    let l = k.period();
    let step = l / n as f64;
    let pts = crate::par::map_range(n + 3, |i| k.point((i as f64 - 1.0 + PHASE) * step));
    let turn: Vec<f64> = (1..=n + 1)
        .map(|i| (pts[i] - pts[i - 1]).cross(pts[i + 1] - pts[i]).dot(pts[i]))
        .collect();
    let skip = |t: f64| cusps.iter().any(|&c| circle_dist(t, c, l) < window);
    (0..n)
        .filter_map(|i| {
            let (t0, t1) = ((i as f64 + PHASE) * step, (i as f64 + 1.0 + PHASE) * step);
            if skip(wrap(t0, l).0) || skip(wrap(t1, l).0) {
                return None;
            }
            let (a, b) = (turn[i], turn[i + 1]);
            if (a >= 0.0) != (b >= 0.0) {
                Some(wrap(t0 + step * a / (a - b), l).0)
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn circle_is_empty() {
        let r = oracle_at(&builtins::latitude_circle(0.6), 20_000, &Config::default());
        assert!(r.events.is_empty(), "{:?}", r.events);
    }

    #[test]
    fn low_resolution_is_rejected() {
        let e = oracle_counts(&builtins::latitude_circle(0.6), 100, &Config::default()).unwrap_err();
        assert_eq!(e, OracleError::ResolutionBelowMinimum { resolution: 100 });
    }

    #[test]
    fn seg_cross_finds_the_fractions() {
        let a0 = Vec3::new(-0.01, 0.0, 1.0).normalized();
        let a1 = Vec3::new(0.03, 0.0, 1.0).normalized();
        let b0 = Vec3::new(0.0, -0.01, 1.0).normalized();
        let b1 = Vec3::new(0.0, 0.01, 1.0).normalized();
        let (u, v) = seg_cross(a0, a1, b0, b1).unwrap();
        assert!((u - 0.25).abs() < 1e-3 && (v - 0.5).abs() < 1e-3, "{u} {v}");
        assert!(seg_cross(a0, a1, -b0, -b1).is_none());
    }
}
