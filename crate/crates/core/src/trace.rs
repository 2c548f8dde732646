//! The step functions `M_p` and `V_p` along a traversal of the curve.
//!
//! `M_p` counts signed intersections of the curve with the tangent geodesic at
//! `p`: `+1` on the half from `p` to `a_p`, `-1` on the half back. `V_p` counts
//! geodesics through `p` tangent to the curve elsewhere, `+1` when they lie in
//! the white quadrants of the tangent-normal frame and `-1` in the black ones.

use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;
use crate::curve::CurveModel;
use crate::events::Event;
use crate::math::{atan2, wrap, FRAC_PI_2, PI};
use crate::roots::roots_1d;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraceSample {
    pub t: u64,
    pub mp_plus: i64,
    pub mp_minus: i64,
    pub wp: i64,
    pub bp: i64,
}

impl TraceSample {
    pub fn param(&self) -> f64 {
        f64::from_bits(self.t)
    }

    pub fn mp(&self) -> i64 {
        self.mp_plus - self.mp_minus
    }

    pub fn vp(&self) -> i64 {
        self.wp - self.bp
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceKind {
    Mp,
    Vp,
}

impl TraceKind {
    pub fn name(self) -> &'static str {
        match self {
            TraceKind::Mp => "Mp",
            TraceKind::Vp => "Vp",
        }
    }

    fn value(self, s: &TraceSample) -> i64 {
        match self {
            TraceKind::Mp => s.mp(),
            TraceKind::Vp => s.vp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceError {
    /// An intersection sits on `p`, `a_p`, or is tangential at this parameter.
    EventAtParameter { t: f64 },
    /// A tangent geodesic through `p` runs along `τ_p` or `ν_p`.
    DirectionOnAxis { t: f64 },
    /// The trace changed inside an interval that holds no detected event.
    UnattributedJump { from: f64, to: f64, jump: i64 },
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::EventAtParameter { t } => write!(f, "t={t:.6} sits on an event"),
            TraceError::DirectionOnAxis { t } => {
                write!(f, "a tangent geodesic through t={t:.6} lies on a frame axis")
            }
            TraceError::UnattributedJump { from, to, jump } => {
                write!(f, "trace jumps by {jump} between {from:.6} and {to:.6} with no event")
            }
        }
    }
}

impl core::error::Error for TraceError {}

const AXIS_TOL: f64 = 1e-9;

/// Roots in `y ∈ (-L/2, L/2)` of `f(t + y)` where `f` vanishes doubly at
/// `y = 0`. Dividing by the squared sine of the chord removes that zero, so
/// roots close to `t` survive. The parameter is never wrapped, which keeps `f`
/// continuous on curves that close up antipodally.
fn roots_away_from(k: &CurveModel, t: f64, cfg: &Config, f: impl Fn(f64) -> f64 + Sync) -> (Vec<f64>, bool) {
    let l = k.period();
    let grid = cfg.grid.max(256);
    let h = l / grid as f64;
    let x0 = k.point(t);
    let start = t - 0.5 * l;
    let g = |x: f64| {
        let q = start + x;
        let c = k.point(q).dot(x0);
        f(q) / (1.0 - c * c)
    };
    let r = roots_1d(g, l, grid, 1e-9, |_| false);
    let touched = r.touches.iter().any(|&x| (x - 0.5 * l).abs() > 2.0 * h);
    (r.roots.into_iter().map(|x| start + x).collect(), touched)
}

fn reduce_pi(th: f64) -> f64 {
    if th < 0.0 {
        th + PI
    } else if th >= PI {
        th - PI
    } else {
        th
    }
}

/// `M_p` at parameter `t`.
pub fn trace_mp(k: &CurveModel, t: f64, cfg: &Config) -> Result<TraceSample, TraceError> {
    let x = k.point(t);
    let tan = k.velocity(t).normalized();
    let pole = x.cross(tan);
    let (roots, touched) = roots_away_from(k, t, cfg, |q| k.point(q).dot(pole));
    if touched {
        return Err(TraceError::EventAtParameter { t });
    }
    let mut s = TraceSample { t: t.to_bits(), ..Default::default() };
    for q in roots {
        let y = k.point(q);
        let th = reduce_pi(atan2(y.dot(tan), y.dot(x)));
        if th < AXIS_TOL || PI - th < AXIS_TOL || (th - FRAC_PI_2).abs() < AXIS_TOL {
            return Err(TraceError::EventAtParameter { t });
        }
        if th < FRAC_PI_2 {
            s.mp_plus += 1;
        } else {
            s.mp_minus += 1;
        }
    }
    Ok(s)
}

/// `V_p` at parameter `t`.
pub fn trace_vp(k: &CurveModel, t: f64, cfg: &Config) -> Result<TraceSample, TraceError> {
    let f = k.frame_unchecked(t);
    let (roots, touched) = roots_away_from(k, t, cfg, |q| f.x.dot(k.dual_jet(q).value()));
    if touched {
        return Err(TraceError::EventAtParameter { t });
    }
    let mut s = TraceSample { t: t.to_bits(), ..Default::default() };
    for q in roots {
        let d = k.dual_jet(q).value().cross(f.x);
        let n = d.norm();
        let (a, b) = (d.dot(f.tangent) / n, d.dot(f.normal) / n);
        if a.abs() < AXIS_TOL || b.abs() < AXIS_TOL {
            return Err(TraceError::DirectionOnAxis { t });
        }
        if a * b > 0.0 {
            s.wp += 1;
        } else {
            s.bp += 1;
        }
    }
    Ok(s)
}

pub fn trace_at(k: &CurveModel, kind: TraceKind, t: f64, cfg: &Config) -> Result<TraceSample, TraceError> {
    match kind {
        TraceKind::Mp => trace_mp(k, t, cfg),
        TraceKind::Vp => trace_vp(k, t, cfg),
    }
}

/// What makes the trace change at a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cause {
    /// Index into the event list.
    Event(usize),
    /// The curve crosses the tangent geodesic at an inflection; the dual has a
    /// cusp there, so `V_p` may gain or lose a pair of tangent geodesics.
    InflectionGeodesic(usize),
}

/// Where an event touches the traversal, with the role it plays there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Role {
    pub cause: Cause,
    pub t: f64,
}

/// A change of the trace as `p` passes one cluster of event parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Jump {
    pub t: f64,
    pub roles: Vec<Role>,
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ledger {
    pub kind: TraceKind,
    pub samples: Vec<TraceSample>,
    pub jumps: Vec<Jump>,
    pub errors: Vec<TraceError>,
}

impl Ledger {
    /// Sum of all jumps; zero for a consistent traversal.
    pub fn net(&self) -> i64 {
        self.jumps.iter().map(|j| j.delta).sum()
    }

    /// Total jump attributed to each event, for jumps caused by a single
    /// event; `None` where the event shares a jump with another cause.
    pub fn per_event(&self, n_events: usize) -> Vec<Option<i64>> {
        let mut out: Vec<Option<i64>> = alloc::vec![Some(0); n_events];
        for j in &self.jumps {
            let first = j.roles[0].cause;
            let single = j.roles.iter().all(|r| r.cause == first);
            for r in &j.roles {
                if let Cause::Event(i) = r.cause {
                    if single {
                        if let Some(v) = out[i].as_mut() {
                            *v += j.delta;
                        }
                    } else {
                        out[i] = None;
                    }
                }
            }
        }
        out
    }

    /// Sum of the jumps at crossings with inflection geodesics.
    pub fn geodesic_total(&self) -> i64 {
        self.jumps
            .iter()
            .filter(|j| j.roles.iter().all(|r| matches!(r.cause, Cause::InflectionGeodesic(_))))
            .map(|j| j.delta)
            .sum()
    }
}

/// Every parameter at which `p` sits on some event; the trace can only change there.
pub fn roles(events: &[Event]) -> Vec<Role> {
    let mut out = Vec::new();
    for (i, e) in events.iter().enumerate() {
        out.push(Role { cause: Cause::Event(i), t: e.t });
        if let Some(t2) = e.t2 {
            out.push(Role { cause: Cause::Event(i), t: t2 });
        }
    }
    out
}

/// Samples the trace between consecutive event parameters over one period and
/// attributes every change to the events in between. `geodesic_hits` holds the
/// parameters where the curve crosses inflection geodesic `i`, as `(i, t)`.
pub fn traverse(
    k: &CurveModel,
    events: &[Event],
    geodesic_hits: &[(usize, f64)],
    kind: TraceKind,
    cfg: &Config,
) -> Ledger {
    let l = k.period();
    let mut rs = roles(events);
    rs.extend(geodesic_hits.iter().map(|&(i, t)| Role { cause: Cause::InflectionGeodesic(i), t }));
    for r in rs.iter_mut() {
        r.t = wrap(r.t, l).0;
    }
    // the trace is not probed inside a cusp window; whatever happens there is
    // part of the cusp's jump
    let delta = cfg.delta_cusp_len(l);
    let key = |t: f64| match k.near_cusp(t, delta) {
        Some(j) => (k.cusps()[j], delta),
        None => (t, 0.0),
    };
    let mut rs: Vec<(f64, f64, Role)> = rs
        .into_iter()
        .map(|r| {
            let (t, w) = key(r.t);
            (t, w, r)
        })
        .collect();
    rs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.t.total_cmp(&b.2.t)));
    // cluster coincident parameters
    let tol = 1e-7 * l;
    let mut clusters: Vec<(f64, f64, Vec<Role>)> = Vec::new();
    for (t, w, r) in rs {
        match clusters.last_mut() {
            Some(c) if t - c.0 < tol => c.2.push(r),
            _ => clusters.push((t, w, alloc::vec![r])),
        }
    }
    if clusters.len() > 1 {
        let last = clusters.len() - 1;
        if clusters[0].0 + l - clusters[last].0 < tol {
            let tail = clusters.pop().unwrap();
            clusters[0].2.splice(0..0, tail.2);
        }
    }
    let mut errors = Vec::new();
    if clusters.is_empty() {
        let s = trace_at(k, kind, 0.25 * l, cfg);
        let samples = match s {
            Ok(s) => alloc::vec![s],
            Err(e) => {
                errors.push(e);
                Vec::new()
            }
        };
        return Ledger { kind, samples, jumps: Vec::new(), errors };
    }
    let n = clusters.len();
    // interval i runs from cluster i to cluster i+1, outside any cusp window
    let intervals: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let (a, wa, _) = clusters[i];
            let (mut b, wb, _) = clusters[(i + 1) % n];
            if b <= a {
                b += l;
            }
            if b - wb > a + wa {
                (a + wa, b - wb)
            } else {
                (a, b)
            }
        })
        .collect();
    let clusters: Vec<(f64, Vec<Role>)> = clusters.into_iter().map(|(t, _, r)| (t, r)).collect();
    let probes = crate::par::map_range(n * 3, |j| {
        let (a, b) = intervals[j / 3];
        let f = [0.25, 0.5, 0.75][j % 3];
        trace_at(k, kind, a + f * (b - a), cfg)
    });
    let mut samples = Vec::with_capacity(n);
    let mut mids: Vec<Option<i64>> = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = intervals[i];
        let vals: Vec<Option<TraceSample>> = (0..3)
            .map(|j| match &probes[3 * i + j] {
                Ok(s) => Some(*s),
                Err(e) => {
                    errors.push(e.clone());
                    None
                }
            })
            .collect();
        let vs: Vec<i64> = vals.iter().flatten().map(|s| kind.value(s)).collect();
        if vs.windows(2).any(|w| w[0] != w[1]) {
            errors.push(TraceError::UnattributedJump {
                from: a,
                to: b,
                jump: vs[vs.len() - 1] - vs[0],
            });
        }
        mids.push(vals[1].map(|s| kind.value(&s)));
        if let Some(s) = vals[1] {
            samples.push(s);
        }
    }
    let mut jumps = Vec::new();
    for i in 0..n {
        let before = mids[(i + n - 1) % n];
        let after = mids[i];
        if let (Some(b), Some(a)) = (before, after) {
            jumps.push(Jump { t: clusters[i].0, roles: clusters[i].1.clone(), delta: a - b });
        }
    }
    Ledger { kind, samples, jumps, errors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn circle_traces_are_constant() {
        let k = builtins::latitude_circle(0.6);
        let cfg = Config::default();
        for i in 0..8 {
            let t = 0.3 + i as f64 * 0.7;
            assert_eq!(trace_mp(&k, t, &cfg).unwrap().mp(), 0);
            assert_eq!(trace_vp(&k, t, &cfg).unwrap().vp(), trace_vp(&k, 0.3, &cfg).unwrap().vp());
        }
    }
}
