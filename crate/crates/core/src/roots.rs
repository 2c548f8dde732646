//! Grid-seeded root finding.
//!
//! [`pair_roots`] finds all parameter pairs where two closed spherical tracks
//! meet projectively (`A(s) ∥ B(t)`): a grid scan marks cells whose samples are
//! close, seeds Gauss–Newton on `A(s) × B(t) = 0` from local minima and from
//! cells where the two sampled polylines actually cross, then clusters the
//! refined roots. [`roots_1d`] brackets sign changes of a scalar function.

use alloc::vec;
use alloc::vec::Vec;

use crate::curve::CurveModel;
use crate::math::{circle_dist, sqrt, wrap};
use crate::par;
use crate::projective::Vec3;

/// A closed track sampled through its position and derivative.
pub trait Track: Sync {
    fn period(&self) -> f64;
    /// Point and derivative at any real parameter.
    fn eval(&self, t: f64) -> (Vec3, Vec3);
}

/// Which curve derived from a model a track follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrackKind {
    Position,
    LiftedTangent,
    Dual,
}

pub struct ModelTrack<'a> {
    pub model: &'a CurveModel,
    pub kind: TrackKind,
}

impl<'a> ModelTrack<'a> {
    pub fn new(model: &'a CurveModel, kind: TrackKind) -> Self {
        ModelTrack { model, kind }
    }
}

impl Track for ModelTrack<'_> {
    fn period(&self) -> f64 {
        self.model.period()
    }
    fn eval(&self, t: f64) -> (Vec3, Vec3) {
        let j = match self.kind {
            TrackKind::Position => self.model.jet(t),
            TrackKind::LiftedTangent => self.model.lifted_tangent_jet(t),
            TrackKind::Dual => self.model.dual_jet(t),
        };
        (j.value(), j.d1())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairRoot {
    pub s: f64,
    pub t: f64,
    /// `|A(s) × B(t)|` at the root.
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PairResult {
    pub roots: Vec<PairRoot>,
    /// Parameters of polyline crossings that no refined root explains.
    pub diverged: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug)]
pub struct PairOptions {
    pub grid: usize,
    /// Search only `s < t` and drop roots with `|s − t|` below `exclude`.
    pub symmetric: bool,
    pub exclude: f64,
    pub newton_iters: usize,
    pub newton_tol: f64,
    pub dedup: f64,
}

struct Sampled {
    t: Vec<f64>,
    p: Vec<Vec3>,
    step: f64,
}

fn sample(track: &dyn Track, m: usize) -> Sampled {
    let l = track.period();
    // one extra sample closes the polyline across the seam
    let t: Vec<f64> = (0..=m).map(|i| (i as f64 + 0.5) * l / m as f64).collect();
    let p = par::map_range(m + 1, |i| track.eval(t[i]).0);
    let step = p.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
    Sampled { t, p, step }
}

/// Whether short great-circle arcs `a0a1` and `b0b1` meet in RP².
pub fn arcs_cross(a0: Vec3, a1: Vec3, b0: Vec3, b1: Vec3) -> bool {
    let na = a0.cross(a1);
    for sgn in [1.0, -1.0] {
        let (c0, c1) = (b0 * sgn, b1 * sgn);
        let nb = c0.cross(c1);
        let s0 = na.dot(c0);
        let s1 = na.dot(c1);
        let r0 = nb.dot(a0);
        let r1 = nb.dot(a1);
        if s0 * s1 < 0.0 && r0 * r1 < 0.0 {
            let x = na.cross(nb);
            let x = if x.dot(a0 + a1) < 0.0 { -x } else { x };
            if x.dot(c0 + c1) > 0.0 {
                return true;
            }
        }
    }
    false
}

/// Gauss–Newton on `A(s) × B(t) = 0`.
pub fn refine_pair(
    a: &dyn Track,
    b: &dyn Track,
    s0: f64,
    t0: f64,
    iters: usize,
    tol: f64,
) -> Option<PairRoot> {
    let (mut s, mut t) = (s0, t0);
    let (mut pa, mut da) = a.eval(s);
    let (mut pb, mut db) = b.eval(t);
    let mut f = pa.cross(pb);
    let mut r = f.norm();
    let max_step = 0.05 * a.period().min(b.period());
    for _ in 0..iters {
        if r < tol * 1e-3 {
            break;
        }
        let ja = da.cross(pb);
        let jb = pa.cross(db);
        let (m11, m12, m22) = (ja.dot(ja), ja.dot(jb), jb.dot(jb));
        let (g1, g2) = (ja.dot(f), jb.dot(f));
        let det = m11 * m22 - m12 * m12;
        if det.is_nan() || det.abs() <= 1e-300 {
            break;
        }
        let mut ds = -(m22 * g1 - m12 * g2) / det;
        let mut dt = -(m11 * g2 - m12 * g1) / det;
        let len = sqrt(ds * ds + dt * dt);
        if len > max_step {
            ds *= max_step / len;
            dt *= max_step / len;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let (ns, nt) = (s + lambda * ds, t + lambda * dt);
            let (qa, qda) = a.eval(ns);
            let (qb, qdb) = b.eval(nt);
            let nf = qa.cross(qb);
            let nr = nf.norm();
            if nr < r {
                s = ns;
                t = nt;
                pa = qa;
                da = qda;
                pb = qb;
                db = qdb;
                f = nf;
                r = nr;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if r < tol {
        Some(PairRoot {
            s: wrap(s, a.period()).0,
            t: wrap(t, b.period()).0,
            residual: r,
        })
    } else {
        None
    }
}

/// All projective meeting points of two tracks.
pub fn pair_roots(a: &dyn Track, b: &dyn Track, opts: &PairOptions) -> PairResult {
    let m = opts.grid;
    let la = a.period();
    let lb = b.period();
    let sa = sample(a, m);
    let sb = if opts.symmetric { None } else { Some(sample(b, m)) };
    let sb = sb.as_ref().unwrap_or(&sa);
    let diag = sqrt(sa.step * sa.step + sb.step * sb.step);
    let thr = 3.0 * diag;
    let band = if opts.symmetric {
        // grid cells closer than the exclusion window never seed
        libm::ceil((opts.exclude / la) * m as f64) as usize + 1
    } else {
        0
    };

    let merit = |i: usize, j: usize| -> f64 {
        let i = i % m;
        let j = j % m;
        sa.p[i].cross(sb.p[j]).norm()
    };
    let in_scope = |i: usize, j: usize| -> bool {
        if !opts.symmetric {
            return true;
        }
        let d = i.abs_diff(j);
        let d = d.min(m - d);
        i < j && d > band
    };

    // rows in parallel, each row yields its seed cells in column order
    let seeds: Vec<(usize, usize, bool)> = par::flat_map_range(m, |i| {
        let mut out = Vec::new();
        for j in 0..m {
            if !in_scope(i, j) {
                continue;
            }
            let v = merit(i, j);
            if v >= thr {
                continue;
            }
            let crossing = arcs_cross(sa.p[i], sa.p[i + 1], sb.p[j], sb.p[j + 1]);
            let mut local_min = true;
            'nb: for di in [m - 1, 0, 1] {
                for dj in [m - 1, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    if merit(i + di, j + dj) < v {
                        local_min = false;
                        break 'nb;
                    }
                }
            }
            if local_min || crossing {
                out.push((i, j, crossing));
            }
        }
        out
    });

    let refined: Vec<Option<PairRoot>> = par::map_range(seeds.len(), |k| {
        let (i, j, crossing) = seeds[k];
        // start crossing cells at the segment midpoints
        let off = if crossing { 0.5 } else { 0.0 };
        let s0 = sa.t[i] + off * la / m as f64;
        let t0 = sb.t[j] + off * lb / m as f64;
        refine_pair(a, b, s0, t0, opts.newton_iters, opts.newton_tol)
    });

    let mut roots: Vec<PairRoot> = refined
        .iter()
        .flatten()
        .map(|r| {
            if opts.symmetric && r.s > r.t {
                PairRoot { s: r.t, t: r.s, residual: r.residual }
            } else {
                *r
            }
        })
        .filter(|r| !opts.symmetric || circle_dist(r.s, r.t, la) >= opts.exclude)
        .collect();
    roots = dedup_pairs(roots, la, lb, opts.dedup, opts.symmetric);

    let cell = 4.0 * (la + lb) / m as f64;
    let mut diverged = Vec::new();
    for (k, &(i, j, crossing)) in seeds.iter().enumerate() {
        if !crossing || refined[k].is_some() {
            continue;
        }
        let (s, t) = (sa.t[i], sb.t[j]);
        let explained = roots.iter().any(|r| {
            let direct = circle_dist(r.s, s, la) + circle_dist(r.t, t, lb) < cell;
            let swapped = opts.symmetric
                && circle_dist(r.t, s, la) + circle_dist(r.s, t, lb) < cell;
            direct || swapped
        });
        let near_diagonal = opts.symmetric && circle_dist(s, t, la) < opts.exclude + cell;
        if !explained && !near_diagonal {
            diverged.push((s, t));
        }
    }
    PairResult { roots, diverged }
}

/// Merges roots closer than `tol` in both parameters; keeps the smallest residual.
pub fn dedup_pairs(mut roots: Vec<PairRoot>, la: f64, lb: f64, tol: f64, symmetric: bool) -> Vec<PairRoot> {
    roots.sort_by(|x, y| x.s.total_cmp(&y.s).then(x.t.total_cmp(&y.t)));
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (roots[i], roots[j]);
            let close = circle_dist(x.s, y.s, la) < tol && circle_dist(x.t, y.t, lb) < tol;
            let close_swapped =
                symmetric && circle_dist(x.s, y.t, la) < tol && circle_dist(x.t, y.s, lb) < tol;
            if close || close_swapped {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj.max(ri)] = ri.min(rj);
                }
            }
        }
    }
    let mut best: Vec<Option<PairRoot>> = vec![None; n];
    for (i, &root) in roots.iter().enumerate() {
        let r = find(&mut parent, i);
        match best[r] {
            Some(b) if b.residual <= root.residual => {}
            _ => best[r] = Some(root),
        }
    }
    let mut out: Vec<PairRoot> = best.into_iter().flatten().collect();
    out.sort_by(|x, y| x.s.total_cmp(&y.s).then(x.t.total_cmp(&y.t)));
    out
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalarRoots {
    pub roots: Vec<f64>,
    /// Near-zero minima of `|f|` without a sign change.
    pub touches: Vec<f64>,
}

/// Sign changes of `f` over one period (the function may be antiperiodic;
/// evaluation beyond the period is left to `f`), refined by bisection.
///
/// Brackets whose midpoint satisfies `skip` are ignored.
pub fn roots_1d<F, S>(f: F, period: f64, grid: usize, touch_tol: f64, skip: S) -> ScalarRoots
where
    F: Fn(f64) -> f64 + Sync,
    S: Fn(f64) -> bool,
{
    let h = period / grid as f64;
    let ts: Vec<f64> = (0..=grid + 1).map(|i| (i as f64 + 0.5) * h).collect();
    let vs = par::map_range(grid + 2, |i| f(ts[i]));
    let mut out = ScalarRoots::default();
    for i in 0..grid {
        let (a, b) = (vs[i], vs[i + 1]);
        if skip(0.5 * (ts[i] + ts[i + 1])) {
            continue;
        }
        if a == 0.0 {
            out.roots.push(wrap(ts[i], period).0);
            continue;
        }
        if a * b < 0.0 {
            out.roots.push(wrap(bisect(&f, ts[i], ts[i + 1], a), period).0);
        } else if b != 0.0 {
            // look for a touch at the interior sample between two same-sign brackets
            let c = vs[i + 2];
            if b.abs() < a.abs()
                && b.abs() < c.abs()
                && b * c > 0.0
                && !skip(0.5 * (ts[i + 1] + ts[i + 2]))
            {
                // the dip may hide a pair of close roots
                let sg = if b > 0.0 { 1.0 } else { -1.0 };
                let g = |t: f64| sg * f(t);
                let (tm, fm) = golden_min(&g, ts[i], ts[i + 2]);
                if fm < 0.0 {
                    out.roots.push(wrap(bisect(&f, ts[i], tm, a), period).0);
                    out.roots.push(wrap(bisect(&f, tm, ts[i + 2], f(tm)), period).0);
                } else if fm < touch_tol {
                    out.touches.push(wrap(tm, period).0);
                }
            }
        }
    }
    out.roots.sort_by(f64::total_cmp);
    out.touches.sort_by(f64::total_cmp);
    out
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let mut slo = flo > 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == slo {
            lo = mid;
            slo = fm > 0.0;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimum of `f` on `[a, b]` by golden section, as `(t, f(t))`.
fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (sqrt(5.0) - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    (m, f(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::math::{cos, sin, TAU};

    #[test]
    fn arcs_cross_basic() {
        let a0 = Vec3::new(1.0, -0.1, 0.0).normalized();
        let a1 = Vec3::new(1.0, 0.1, 0.0).normalized();
        let b0 = Vec3::new(1.0, 0.0, -0.1).normalized();
        let b1 = Vec3::new(1.0, 0.0, 0.1).normalized();
        assert!(arcs_cross(a0, a1, b0, b1));
        assert!(arcs_cross(a0, a1, -b0, -b1));
        let b0 = Vec3::new(1.0, 0.2, -0.1).normalized();
        let b1 = Vec3::new(1.0, 0.2, 0.1).normalized();
        assert!(!arcs_cross(a0, a1, b0, b1));
    }

    #[test]
    fn scalar_roots_of_sine() {
        let r = roots_1d(|t| sin(3.0 * t), TAU, 256, 1e-8, |_| false);
        assert_eq!(r.roots.len(), 6);
        for (k, x) in r.roots.iter().enumerate() {
            assert!((x - k as f64 * TAU / 6.0).abs() < 1e-12 || (k == 0 && (x - TAU).abs() < 1e-12));
        }
        let r = roots_1d(|t| 1.0 - cos(t - 1.0), TAU, 256, 1e-8, |_| false);
        assert!(r.roots.is_empty());
        assert_eq!(r.touches.len(), 1);
    }

    #[test]
    fn great_circles_meet_once_projectively() {
        // the equator and a tilted great circle, each period 2π, meet at two
        // antipodal points, which is twice in each parameter
        let a = builtins::wavy_great_circle(0.0, &[], &[]);
        let b = builtins::latitude_circle(1.0);
        let opts = PairOptions {
            grid: 256,
            symmetric: false,
            exclude: 0.0,
            newton_iters: 50,
            newton_tol: 1e-10,
            dedup: 1e-6,
        };
        let ta = ModelTrack::new(&a, TrackKind::Position);
        let tb = ModelTrack::new(&b, TrackKind::Position);
        let res = pair_roots(&ta, &tb, &opts);
        assert!(res.roots.is_empty());
        assert!(res.diverged.is_empty());
        let c = a.rotated([[1.0, 0.0, 0.0], [0.0, cos(0.4), -sin(0.4)], [0.0, sin(0.4), cos(0.4)]]);
        let tc = ModelTrack::new(&c, TrackKind::Position);
        let res = pair_roots(&ta, &tc, &opts);
        assert_eq!(res.roots.len(), 4);
    }
}
