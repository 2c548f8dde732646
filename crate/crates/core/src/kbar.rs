//! K̄: the curve together with the tangent geodesics at its inflections.
//!
//! Near a crossing an inflection geodesic is treated as bending slightly
//! towards its normal direction. Ahead of the inflection (`α·T > 0`) the normal
//! direction is the curve's bending normal just before `t_i`; behind it, the
//! normal just after. Each half of the geodesic thus bends away from the branch
//! of the curve that leaves the inflection along it.

use alloc::vec::Vec;
use core::fmt;

use crate::classify::{crossing_label_closed_form, nt_label, sector_label, stable_label, Branch};
use crate::config::Config;
use crate::curve::CurveModel;
use crate::events::{Event, EventKind, Label};
use crate::identities::CountReport;
use crate::math::{atan2, circle_dist, FRAC_PI_2, PI};
use crate::projective::{line_angle, ProjectivePoint, Vec3};
use crate::roots::roots_1d;

/// The tangent geodesic at one inflection, with its normal-direction convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InflectionGeodesic {
    /// Parameter of the anchor inflection on the base curve.
    pub t: f64,
    pub point: Vec3,
    pub tangent: Vec3,
    /// Unit pole; it is also the dual point `p′` where centers of curvature sit.
    pub pole: Vec3,
    /// Bending normal of the base curve just before the inflection.
    pub normal: Vec3,
}

impl InflectionGeodesic {
    /// Normal direction at a point `alpha` of the geodesic, matched to the
    /// representative `alpha` as given.
    pub fn normal_at(&self, alpha: Vec3) -> Vec3 {
        if alpha.dot(self.tangent) < 0.0 {
            -self.normal
        } else {
            self.normal
        }
    }

    /// Unit direction of travel at `alpha`.
    pub fn direction_at(&self, alpha: Vec3) -> Vec3 {
        self.pole.cross(alpha).normalized()
    }

    /// Point of the geodesic bent by `kappa` towards its normal, `s` along from `alpha`.
    pub fn bent_point(&self, alpha: Vec3, s: f64, kappa: f64) -> Vec3 {
        let d = self.direction_at(alpha);
        (alpha + d * s + self.normal_at(alpha) * (0.5 * kappa * s * s)).normalized()
    }
}

#[derive(Clone, Debug)]
pub struct AugmentedModel {
    pub base: CurveModel,
    pub geodesics: Vec<InflectionGeodesic>,
}

/// What the second branch of a K̄ event is.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Partner {
    /// A point of the base curve, by parameter.
    Curve(f64),
    /// Another inflection geodesic, by index.
    Geodesic(usize),
}

/// A crossing or normal-tangent pair that involves an inflection geodesic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KbarEvent {
    pub kind: EventKind,
    /// Index of the inflection geodesic carrying the point `p` (or one branch).
    pub geodesic: usize,
    pub partner: Partner,
    pub location: ProjectivePoint,
    pub label: Option<Label>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum KbarError {
    /// The label changed as the bend went to zero.
    BendUnstable { geodesic: usize, partner: Partner },
    /// The crossing angle is within `tol_ang` of 0 or `π/2`.
    DegenerateAngle { geodesic: usize, partner: Partner, angle: f64 },
    /// `q` sits at the center of curvature `p′` of the geodesic point.
    CenterHit { geodesic: usize, t: f64 },
}

impl fmt::Display for KbarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KbarError::BendUnstable { geodesic, partner } => {
                write!(f, "label at inflection geodesic {geodesic} and {partner:?} depends on the bend")
            }
            KbarError::DegenerateAngle { geodesic, partner, angle } => {
                write!(f, "inflection geodesic {geodesic} meets {partner:?} at angle {angle:.6}")
            }
            KbarError::CenterHit { geodesic, t } => {
                write!(f, "tangent point t={t:.6} is the center for inflection geodesic {geodesic}")
            }
        }
    }
}

impl core::error::Error for KbarError {}

/// Attaches one geodesic per inflection parameter.
pub fn build_kbar(k: &CurveModel, inflections: &[f64]) -> AugmentedModel {
    let l = k.period();
    let geodesics = inflections
        .iter()
        .map(|&t| {
            let point = k.point(t);
            let tangent = k.velocity(t).normalized();
            let pole = point.cross(tangent).normalized();
            // sample the bending side a little before the inflection
            let h = 1e-3 * l;
            let before = k.frame_unchecked(t - h);
            let normal = if before.k_g < 0.0 { -pole } else { pole };
            InflectionGeodesic { t, point, tangent, pole, normal }
        })
        .collect();
    AugmentedModel { base: k.clone(), geodesics }
}

/// Builds K̄ from the inflections detected on `k`.
pub fn build_kbar_detected(k: &CurveModel, cfg: &Config) -> AugmentedModel {
    build_kbar(k, &crate::events::inflection_params(k, cfg))
}

fn curve_branch(k: &CurveModel, t: f64, eps: f64, lift: f64) -> Branch {
    Branch {
        tangent: k.velocity(t).normalized() * lift,
        back: k.point(t - eps) * lift,
        ahead: k.point(t + eps) * lift,
    }
}

fn geodesic_branch(g: &InflectionGeodesic, alpha: Vec3, eps: f64, kappa: f64) -> Branch {
    Branch {
        tangent: g.direction_at(alpha),
        back: g.bent_point(alpha, -eps, kappa),
        ahead: g.bent_point(alpha, eps, kappa),
    }
}

/// Runs the sector test for each bend in `cfg.kappa_bend`; all must agree
/// with each other and with the closed form.
fn bent_label(
    cfg: &Config,
    eps: f64,
    closed: Label,
    probe: impl Fn(f64, f64) -> Option<Label>,
) -> Option<Label> {
    let mut out = None;
    for &kappa in &cfg.kappa_bend {
        let l = stable_label(eps, |e| probe(e, kappa))?;
        if out.is_some_and(|o| o != l) {
            return None;
        }
        out = Some(l);
    }
    out.filter(|&l| l == closed)
}

/// Crossings of K with the geodesics and of the geodesics with each other,
/// plus normal-tangent pairs whose normal point lies on a geodesic.
pub fn kbar_events(a: &AugmentedModel, cfg: &Config) -> (Vec<KbarEvent>, Vec<KbarError>) {
    let k = &a.base;
    let l = k.period();
    let h = l / cfg.grid as f64;
    let window = cfg.delta_cusp_len(l).max(2.0 * h);
    let eps = cfg.eps_len(l);
    let mut events = Vec::new();
    let mut errors = Vec::new();

    for (gi, g) in a.geodesics.iter().enumerate() {
        // K against τ_i
        let r = roots_1d(
            |t| k.point(t).dot(g.pole),
            l,
            cfg.grid,
            0.0,
            |t| circle_dist(t, g.t, l) < window,
        );
        for t in r.roots {
            let partner = Partner::Curve(t);
            let x = k.point(t);
            let f = k.frame_unchecked(t);
            let d = g.direction_at(x);
            let angle = line_angle(f.tangent, d);
            let mut ev = KbarEvent {
                kind: EventKind::Crossing,
                geodesic: gi,
                partner,
                location: ProjectivePoint::from_vec(x),
                label: None,
            };
            if angle < cfg.tol_ang || angle > FRAC_PI_2 - cfg.tol_ang {
                errors.push(KbarError::DegenerateAngle { geodesic: gi, partner, angle });
                events.push(ev);
                continue;
            }
            let closed = crossing_label_closed_form(f.tangent, f.normal, d, g.normal_at(x));
            let arc = eps * k.speed(t);
            ev.label = bent_label(cfg, 1.0, closed, |e, kappa| {
                sector_label(x, &curve_branch(k, t, eps * e, 1.0), &geodesic_branch(g, x, arc * e, kappa))
            });
            if ev.label.is_none() {
                errors.push(KbarError::BendUnstable { geodesic: gi, partner });
            }
            events.push(ev);
        }

        // τ_i against τ_j
        for (gj, g2) in a.geodesics.iter().enumerate().skip(gi + 1) {
            let partner = Partner::Geodesic(gj);
            let c = g.pole.cross(g2.pole);
            let mut ev = KbarEvent {
                kind: EventKind::Crossing,
                geodesic: gi,
                partner,
                location: ProjectivePoint::new(c).unwrap_or(ProjectivePoint::from_vec(g.point)),
                label: None,
            };
            let angle = line_angle(g.pole, g2.pole);
            if c.norm() < cfg.tol_sep || angle < cfg.tol_ang || angle > FRAC_PI_2 - cfg.tol_ang {
                errors.push(KbarError::DegenerateAngle { geodesic: gi, partner, angle });
                events.push(ev);
                continue;
            }
            let x = c.normalized();
            let (d1, d2) = (g.direction_at(x), g2.direction_at(x));
            let closed = crossing_label_closed_form(d1, g.normal_at(x), d2, g2.normal_at(x));
            let arc = eps;
            ev.label = bent_label(cfg, 1.0, closed, |e, kappa| {
                sector_label(x, &geodesic_branch(g, x, arc * e, kappa), &geodesic_branch(g2, x, arc * e, kappa))
            });
            if ev.label.is_none() {
                errors.push(KbarError::BendUnstable { geodesic: gi, partner });
            }
            events.push(ev);
        }

        // normal-tangent pairs (α, q): τ_q passes through p′ = pole
        let r = roots_1d(
            |q| k.dual_jet(q).value().dot(g.pole),
            l,
            cfg.grid,
            0.0,
            |q| circle_dist(q, g.t, l) < window,
        );
        for q in r.roots {
            let xq = k.point(q);
            let bq = k.dual_jet(q).value();
            let alpha = bq.cross(g.pole);
            if alpha.norm() < cfg.tol_sep {
                continue;
            }
            let alpha = alpha.normalized();
            let n = g.normal_at(alpha);
            let mut th = atan2(xq.dot(n), xq.dot(alpha));
            if th < 0.0 {
                th += PI;
            }
            let label = nt_label(th, FRAC_PI_2, cfg.tol_ang);
            if label.is_none() {
                errors.push(KbarError::CenterHit { geodesic: gi, t: q });
            }
            events.push(KbarEvent {
                kind: EventKind::NormalTangentPair,
                geodesic: gi,
                partner: Partner::Curve(q),
                location: ProjectivePoint::from_vec(alpha),
                label,
            });
        }
    }
    (events, errors)
}

/// Counts on K̄: the base report plus the crossings and normal-tangent pairs
/// involving inflection geodesics. Inflection points stay inflections.
pub fn kbar_counts(base: &CountReport, extra: &[KbarEvent]) -> CountReport {
    let mut r = *base;
    for e in extra {
        let slot = match e.kind {
            EventKind::Crossing => (&mut r.c1, &mut r.c2),
            EventKind::NormalTangentPair => (&mut r.n1, &mut r.n2),
            _ => continue,
        };
        match e.label {
            Some(Label::One) => *slot.0 += 1,
            Some(Label::Two) => *slot.1 += 1,
            None => {}
        }
    }
    r.kbar = true;
    r.fill_residuals();
    r
}

/// K̄ report straight from a curve and its classified events.
pub fn analyze_kbar(
    k: &CurveModel,
    events: &[Event],
    base: &CountReport,
    cfg: &Config,
) -> (CountReport, Vec<KbarEvent>, Vec<KbarError>) {
    let infl: Vec<f64> = events
        .iter()
        .filter(|e| e.kind == EventKind::Inflection)
        .map(|e| e.t)
        .collect();
    let a = build_kbar(k, &infl);
    let (extra, errs) = kbar_events(&a, cfg);
    (kbar_counts(base, &extra), extra, errs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn no_inflections_gives_base_counts() {
        let k = builtins::latitude_circle(0.5);
        let cfg = Config::default();
        let a = build_kbar_detected(&k, &cfg);
        assert!(a.geodesics.is_empty());
        let base = CountReport::default();
        let (extra, errs) = kbar_events(&a, &cfg);
        assert!(extra.is_empty() && errs.is_empty());
        assert!(kbar_counts(&base, &extra).same_counts(&base));
    }

    #[test]
    fn normal_flips_through_the_inflection() {
        let k = builtins::figure_eight(0.05);
        let a = build_kbar_detected(&k, &Config::default());
        assert_eq!(a.geodesics.len(), 2);
        let g = a.geodesics[0];
        let ahead = g.point + g.tangent * 1e-3;
        let behind = g.point - g.tangent * 1e-3;
        assert!(g.normal_at(ahead).dot(g.normal_at(behind)) < 0.0);
        // each half bends away from the adjacent branch of the curve
        let h = 1e-3 * k.period();
        let fa = k.frame_unchecked(g.t + h);
        let fb = k.frame_unchecked(g.t - h);
        assert!(g.normal_at(fa.x).dot(fa.normal) < 0.0);
        assert!(g.normal_at(fb.x).dot(fb.normal) < 0.0);
    }
}
