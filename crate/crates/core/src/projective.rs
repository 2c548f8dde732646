//! Points and lines of RP² with the round metric of the unit sphere.
//!
//! A [`ProjectivePoint`] is a unit vector in sign-canonical form: the
//! coordinate of largest magnitude is positive (ties go to the lower index).
//! An [`OrientedGeodesic`] is a great circle stored by its signed unit pole;
//! at a point `x` on it the direction of travel is `pole × x`.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::math::{acos, atan2, cos, sin, sqrt};

/// Default separation below which two projective points are treated as equal.
pub const TOL_SEP: f64 = 1e-8;
/// Default distance below which a point counts as lying on a geodesic.
pub const TOL_ON: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm(self) -> f64 {
        sqrt(self.dot(self))
    }

    #[inline]
    pub fn normalized(self) -> Vec3 {
        self / self.norm()
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn from_array(a: [f64; 3]) -> Vec3 {
        Vec3::new(a[0], a[1], a[2])
    }

    /// Largest absolute coordinate.
    #[inline]
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Any unit vector orthogonal to `self` (assumed nonzero).
    pub fn any_orthogonal(self) -> Vec3 {
        let a = if self.x.abs() <= self.y.abs() && self.x.abs() <= self.z.abs() {
            Vec3::new(1.0, 0.0, 0.0)
        } else if self.y.abs() <= self.z.abs() {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        self.cross(a).normalized()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    #[inline]
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectiveError {
    /// The two points coincide in RP² within the separation tolerance.
    DegeneratePair,
    /// The start point of a walk is not on the geodesic.
    PointNotOnGeodesic,
    /// The query point lies on one of the bounding geodesics.
    OnBoundary,
    /// A zero or non-finite vector cannot represent a point.
    Degenerate,
}

impl fmt::Display for ProjectiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveError::DegeneratePair => f.write_str("points coincide in RP²"),
            ProjectiveError::PointNotOnGeodesic => f.write_str("point is not on the geodesic"),
            ProjectiveError::OnBoundary => f.write_str("point lies on a region boundary"),
            ProjectiveError::Degenerate => f.write_str("vector does not define a point"),
        }
    }
}

impl core::error::Error for ProjectiveError {}

/// A point of RP², stored as a sign-canonical unit vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint {
    rep: Vec3,
}

/// Flips `v` so that its largest-magnitude coordinate is positive.
pub fn canonical_sign(v: Vec3) -> f64 {
    let a = [v.x, v.y, v.z];
    let mut best = 0;
    for i in 1..3 {
        if a[i].abs() > a[best].abs() {
            best = i;
        }
    }
    if a[best] < 0.0 {
        -1.0
    } else {
        1.0
    }
}

impl ProjectivePoint {
    /// Normalises and canonicalises any nonzero vector.
    pub fn new(v: Vec3) -> Result<Self, ProjectiveError> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(ProjectiveError::Degenerate);
        }
        let u = v / n;
        Ok(ProjectivePoint { rep: u * canonical_sign(u) })
    }

    /// Same as [`ProjectivePoint::new`] for vectors known to be nonzero.
    pub fn from_vec(v: Vec3) -> Self {
        Self::new(v).expect("nonzero vector")
    }

    #[inline]
    pub fn rep(&self) -> Vec3 {
        self.rep
    }

    /// The representative lying in the same hemisphere as `near`.
    #[inline]
    pub fn lift_near(&self, near: Vec3) -> Vec3 {
        if self.rep.dot(near) < 0.0 {
            -self.rep
        } else {
            self.rep
        }
    }
}

/// A great circle with an orientation; `pole × x` is the direction of travel at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedGeodesic {
    pole: Vec3,
}

impl OrientedGeodesic {
    pub fn from_pole(pole: Vec3) -> Result<Self, ProjectiveError> {
        let n = pole.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(ProjectiveError::Degenerate);
        }
        Ok(OrientedGeodesic { pole: pole / n })
    }

    #[inline]
    pub fn pole(&self) -> Vec3 {
        self.pole
    }

    pub fn reversed(&self) -> Self {
        OrientedGeodesic { pole: -self.pole }
    }

    /// The unoriented projective line, as its canonical pole.
    pub fn line(&self) -> ProjectivePoint {
        ProjectivePoint::from_vec(self.pole)
    }

    /// Spherical distance from `x` to the geodesic, in `[0, π/2]`.
    pub fn distance_to(&self, x: ProjectivePoint) -> f64 {
        crate::math::asin(x.rep.dot(self.pole).abs())
    }

    /// Unit direction of travel at `x` (for `x` on the geodesic).
    pub fn direction_at(&self, x: Vec3) -> Vec3 {
        self.pole.cross(x).normalized()
    }
}

/// Distance in RP², in `[0, π/2]`.
pub fn proj_distance(p: ProjectivePoint, q: ProjectivePoint) -> f64 {
    // atan2 form stays accurate near 0 and near π/2
    let c = p.rep.dot(q.rep).abs();
    let s = p.rep.cross(q.rep).norm();
    atan2(s, c)
}

pub fn dualize_point(p: ProjectivePoint) -> OrientedGeodesic {
    OrientedGeodesic { pole: p.rep }
}

pub fn dualize_geodesic(g: OrientedGeodesic) -> ProjectivePoint {
    // the pole is already unit; only the sign is canonicalised
    ProjectivePoint { rep: g.pole * canonical_sign(g.pole) }
}

/// The geodesic through two distinct points, oriented from `p` towards `q` along the short arc.
pub fn geodesic_through(
    p: ProjectivePoint,
    q: ProjectivePoint,
    tol_sep: f64,
) -> Result<OrientedGeodesic, ProjectiveError> {
    if proj_distance(p, q) <= tol_sep {
        return Err(ProjectiveError::DegeneratePair);
    }
    OrientedGeodesic::from_pole(p.rep.cross(q.rep))
}

/// Advances arc length `s` from `start` along `g` in its orientation.
pub fn point_along(
    g: OrientedGeodesic,
    start: ProjectivePoint,
    s: f64,
    tol_on: f64,
) -> Result<ProjectivePoint, ProjectiveError> {
    let x = start.rep;
    if x.dot(g.pole).abs() > tol_on {
        return Err(ProjectiveError::PointNotOnGeodesic);
    }
    let dir = g.pole.cross(x);
    ProjectivePoint::new(x * cos(s) + dir * sin(s))
}

/// Which of the two regions cut out by `g1 ∪ g2` contains `x`: `+1` or `-1`.
///
/// The sign is `sign((x·pole₁)(x·pole₂))`, which does not depend on the
/// representative of `x`.
pub fn region_class(
    x: ProjectivePoint,
    g1: OrientedGeodesic,
    g2: OrientedGeodesic,
    tol_on: f64,
) -> Result<i8, ProjectiveError> {
    let a = x.rep.dot(g1.pole);
    let b = x.rep.dot(g2.pole);
    if a.abs() <= tol_on || b.abs() <= tol_on {
        return Err(ProjectiveError::OnBoundary);
    }
    Ok(if a * b > 0.0 { 1 } else { -1 })
}

/// Unsigned angle between two unit vectors, in `[0, π]`.
pub fn angle_between(a: Vec3, b: Vec3) -> f64 {
    atan2(a.cross(b).norm(), a.dot(b))
}

/// Angle between the lines spanned by two directions, in `[0, π/2]`.
pub fn line_angle(a: Vec3, b: Vec3) -> f64 {
    acos(a.dot(b).abs() / (a.norm() * b.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{FRAC_PI_2, FRAC_PI_4, PI};

    fn pp(x: f64, y: f64, z: f64) -> ProjectivePoint {
        ProjectivePoint::from_vec(Vec3::new(x, y, z))
    }

    #[test]
    fn distance_examples() {
        assert!((proj_distance(pp(1.0, 0.0, 0.0), pp(0.0, 1.0, 0.0)) - FRAC_PI_2).abs() < 1e-15);
        let p = pp(0.3, -0.4, 0.2);
        assert_eq!(proj_distance(p, p), 0.0);
        assert!((proj_distance(pp(1.0, 0.0, 0.0), pp(1.0, 1.0, 0.0)) - FRAC_PI_4).abs() < 1e-15);
        // antipodal representatives are the same point
        assert!(proj_distance(pp(1.0, 2.0, 3.0), pp(-1.0, -2.0, -3.0)) < 1e-15);
    }

    #[test]
    fn canonical_form() {
        let p = pp(-0.2, -0.9, 0.1);
        assert!(p.rep().y > 0.0);
        assert_eq!(ProjectivePoint::from_vec(p.rep()), p);
        assert_eq!(ProjectivePoint::from_vec(-p.rep()), p);
        // ties go to the lower index
        let t = pp(-1.0, 1.0, 0.0);
        assert!(t.rep().x > 0.0);
        assert!((p.rep().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duality_examples() {
        let north = pp(0.0, 0.0, 1.0);
        assert_eq!(dualize_point(north).pole(), Vec3::new(0.0, 0.0, 1.0));
        let q = pp(0.4, -0.1, 0.7);
        assert_eq!(dualize_geodesic(dualize_point(q)), q);
        let g = geodesic_through(pp(1.0, 0.0, 0.0), pp(0.0, 1.0, 0.0), TOL_SEP).unwrap();
        assert_eq!(dualize_geodesic(g), north);
    }

    #[test]
    fn geodesic_through_examples() {
        let g = geodesic_through(pp(1.0, 0.0, 0.0), pp(0.0, 1.0, 0.0), TOL_SEP).unwrap();
        assert!((g.pole() - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
        assert_eq!(
            geodesic_through(pp(1.0, 0.0, 0.0), pp(1.0, 1e-9, 0.0), TOL_SEP),
            Err(ProjectiveError::DegeneratePair)
        );
        let g = geodesic_through(pp(1.0, 0.0, 0.0), pp(0.0, 0.0, 1.0), TOL_SEP).unwrap();
        assert!((g.line().rep() - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        assert!((g.pole() - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn point_along_examples() {
        let eq = OrientedGeodesic::from_pole(Vec3::new(0.0, 0.0, 1.0)).unwrap();
        let x = pp(1.0, 0.0, 0.0);
        let q = point_along(eq, x, FRAC_PI_2, TOL_ON).unwrap();
        assert!(proj_distance(q, pp(0.0, 1.0, 0.0)) < 1e-15);
        assert_eq!(point_along(eq, x, 0.0, TOL_ON).unwrap(), x);
        assert!(proj_distance(point_along(eq, x, PI, TOL_ON).unwrap(), x) < 1e-15);
        assert_eq!(
            point_along(eq, pp(0.0, 0.0, 1.0), 0.1, TOL_ON),
            Err(ProjectiveError::PointNotOnGeodesic)
        );
    }

    #[test]
    fn region_examples() {
        let g1 = OrientedGeodesic::from_pole(Vec3::new(0.0, 0.0, 1.0)).unwrap();
        let g2 = OrientedGeodesic::from_pole(Vec3::new(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(region_class(pp(1.0, 1.0, 1.0), g1, g2, TOL_ON), Ok(1));
        assert_eq!(region_class(pp(1.0, -1.0, 1.0), g1, g2, TOL_ON), Ok(-1));
        assert_eq!(
            region_class(pp(1.0, 1.0, 0.0), g1, g2, TOL_ON),
            Err(ProjectiveError::OnBoundary)
        );
    }
}
