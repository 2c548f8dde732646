//! Uniform cubic splines of 3-vectors on a circle.
//!
//! Knots sit at `i·h`. Without breaks the spline is the periodic C² interpolant.
//! Break knots split the circle into pieces, each a clamped spline with zero
//! end velocity, which is how sampled cusps are represented.

use alloc::vec;
use alloc::vec::Vec;

use crate::jet::{VJet, ORDER};
use crate::math::floor;
use crate::projective::Vec3;

#[derive(Clone, Debug)]
pub struct CubicSpline {
    h: f64,
    // per segment: value, first, second/2, third/6 coefficients in the local offset
    segs: Vec<[Vec3; 4]>,
}

impl CubicSpline {
    /// Periodic spline through `pts` (at least 3 points).
    pub fn periodic(pts: &[Vec3], h: f64) -> Self {
        let n = pts.len();
        let rhs: Vec<Vec3> = (0..n)
            .map(|i| (pts[(i + 1) % n] - pts[i] * 2.0 + pts[(i + n - 1) % n]) * (6.0 / (h * h)))
            .collect();
        let m = solve_cyclic(&rhs);
        let segs = (0..n)
            .map(|i| segment(pts[i], pts[(i + 1) % n], m[i], m[(i + 1) % n], h))
            .collect();
        CubicSpline { h, segs }
    }

    /// Spline through `pts` (taken cyclically) with zero velocity at each break index.
    pub fn with_breaks(pts: &[Vec3], h: f64, breaks: &[usize]) -> Self {
        if breaks.is_empty() {
            return Self::periodic(pts, h);
        }
        let n = pts.len();
        let mut segs = vec![[Vec3::ZERO; 4]; n];
        for (k, &a) in breaks.iter().enumerate() {
            let b = if k + 1 < breaks.len() { breaks[k + 1] } else { breaks[0] + n };
            let piece: Vec<Vec3> = (a..=b).map(|i| pts[i % n]).collect();
            let m = solve_clamped(&piece, h);
            for j in 0..piece.len() - 1 {
                segs[(a + j) % n] = segment(piece[j], piece[j + 1], m[j], m[j + 1], h);
            }
        }
        CubicSpline { h, segs }
    }

    pub fn period(&self) -> f64 {
        self.h * self.segs.len() as f64
    }

    /// Jet at `t` in `[0, period)`.
    pub fn jet(&self, t: f64) -> VJet {
        let n = self.segs.len();
        let mut i = floor(t / self.h) as isize;
        if i < 0 {
            i = 0;
        }
        let i = (i as usize).min(n - 1);
        let u = t - i as f64 * self.h;
        let [a, b, c, d] = self.segs[i];
        let mut out = [Vec3::ZERO; ORDER];
        out[0] = a + (b + (c + d * u) * u) * u;
        out[1] = b + (c * 2.0 + d * (3.0 * u)) * u;
        out[2] = c + d * (3.0 * u);
        out[3] = d;
        VJet(out)
    }
}

fn segment(p0: Vec3, p1: Vec3, m0: Vec3, m1: Vec3, h: f64) -> [Vec3; 4] {
    let b = (p1 - p0) / h - (m0 * 2.0 + m1) * (h / 6.0);
    [p0, b, m0 * 0.5, (m1 - m0) / (6.0 * h)]
}

// Solves the cyclic system M[i-1] + 4 M[i] + M[i+1] = r[i].
fn solve_cyclic(r: &[Vec3]) -> Vec<Vec3> {
    let n = r.len();
    // Sherman–Morrison on the tridiagonal part with corner terms folded in
    let gamma = -4.0;
    let mut diag = vec![4.0; n];
    diag[0] -= gamma;
    diag[n - 1] -= 1.0 / gamma;
    let x = solve_tridiag(&diag, r);
    let mut u = vec![Vec3::ZERO; n];
    u[0] = Vec3::new(gamma, gamma, gamma);
    u[n - 1] = Vec3::new(1.0, 1.0, 1.0);
    let z = solve_tridiag(&diag, &u);
    let vx = x[0] + x[n - 1] / gamma;
    let vz = z[0] + z[n - 1] / gamma;
    let fx = Vec3::new(vx.x / (1.0 + vz.x), vx.y / (1.0 + vz.y), vx.z / (1.0 + vz.z));
    x.iter()
        .zip(&z)
        .map(|(xi, zi)| *xi - Vec3::new(fx.x * zi.x, fx.y * zi.y, fx.z * zi.z))
        .collect()
}

// Unit off-diagonals, given diagonal.
fn solve_tridiag(diag: &[f64], r: &[Vec3]) -> Vec<Vec3> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![Vec3::ZERO; n];
    c[0] = 1.0 / diag[0];
    d[0] = r[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - c[i - 1];
        c[i] = 1.0 / m;
        d[i] = (r[i] - d[i - 1]) / m;
    }
    let mut x = vec![Vec3::ZERO; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - x[i + 1] * c[i];
    }
    x
}

// Clamped spline second derivatives with zero end slopes.
fn solve_clamped(p: &[Vec3], h: f64) -> Vec<Vec3> {
    let n = p.len();
    let k = 6.0 / (h * h);
    let mut diag = vec![4.0; n];
    diag[0] = 2.0;
    diag[n - 1] = 2.0;
    let mut r = vec![Vec3::ZERO; n];
    r[0] = (p[1] - p[0]) * k;
    r[n - 1] = (p[n - 2] - p[n - 1]) * k;
    for i in 1..n - 1 {
        r[i] = (p[i + 1] - p[i] * 2.0 + p[i - 1]) * k;
    }
    solve_tridiag(&diag, &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin, TAU};

    fn circle(n: usize) -> (Vec<Vec3>, f64) {
        let h = TAU / n as f64;
        let pts = (0..n)
            .map(|i| {
                let t = i as f64 * h;
                Vec3::new(cos(t), sin(t), 0.3 * sin(2.0 * t))
            })
            .collect();
        (pts, h)
    }

    #[test]
    fn periodic_interpolates_and_is_c2() {
        let (pts, h) = circle(64);
        let s = CubicSpline::periodic(&pts, h);
        for (i, p) in pts.iter().enumerate() {
            assert!((s.jet(i as f64 * h).value() - *p).norm() < 1e-12);
        }
        for i in 1..64 {
            let t = i as f64 * h;
            let l = s.jet(t - 1e-12);
            let r = s.jet(t);
            assert!((l.d1() - r.d1()).norm() < 1e-9);
            assert!((l.d2() - r.d2()).norm() < 1e-8);
        }
        // seam
        let l = s.jet(s.period() - 1e-12);
        let r = s.jet(0.0);
        assert!((l.d2() - r.d2()).norm() < 1e-8);
    }

    #[test]
    fn periodic_is_accurate() {
        let (pts, h) = circle(256);
        let s = CubicSpline::periodic(&pts, h);
        let t = 1.2345;
        let exact = Vec3::new(cos(t), sin(t), 0.3 * sin(2.0 * t));
        assert!((s.jet(t).value() - exact).norm() < 1e-7);
    }

    #[test]
    fn breaks_have_zero_velocity() {
        let (pts, h) = circle(64);
        let s = CubicSpline::with_breaks(&pts, h, &[0, 20, 41]);
        for &b in &[0usize, 20, 41] {
            assert!(s.jet(b as f64 * h).d1().norm() < 1e-12);
            assert!((s.jet(b as f64 * h).value() - pts[b]).norm() < 1e-12);
        }
    }
}
