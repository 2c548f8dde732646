//! Truncated Taylor series ("jets") in one variable.
//!
//! A jet stores `f(t₀ + h) = Σ cₖ hᵏ` for `k < ORDER`. Products, reciprocals and
//! square roots are exact on the truncated series, which gives analytic
//! derivatives of normalised and crossed curve expressions without finite
//! differences. Differentiation drops the top coefficient, so each derived
//! curve (tangent, dual) has one fewer valid order than its source.

#![allow(clippy::needless_range_loop)]

use core::ops::{Add, Mul, Neg, Sub};

use crate::math::sqrt;
use crate::projective::Vec3;

pub const ORDER: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet(pub [f64; ORDER]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VJet(pub [Vec3; ORDER]);

impl Jet {
    pub fn constant(c: f64) -> Jet {
        let mut a = [0.0; ORDER];
        a[0] = c;
        Jet(a)
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative_at(&self, k: usize) -> f64 {
        self.0[k] * factorial(k)
    }

    pub fn recip(&self) -> Jet {
        let a = &self.0;
        let mut r = [0.0; ORDER];
        r[0] = 1.0 / a[0];
        for k in 1..ORDER {
            let mut s = 0.0;
            for i in 1..=k {
                s += a[i] * r[k - i];
            }
            r[k] = -s * r[0];
        }
        Jet(r)
    }

    pub fn sqrt(&self) -> Jet {
        let a = &self.0;
        let mut s = [0.0; ORDER];
        s[0] = sqrt(a[0]);
        for k in 1..ORDER {
            let mut acc = a[k];
            for i in 1..k {
                acc -= s[i] * s[k - i];
            }
            s[k] = acc / (2.0 * s[0]);
        }
        Jet(s)
    }

    pub fn scale(&self, c: f64) -> Jet {
        let mut r = self.0;
        for x in r.iter_mut() {
            *x *= c;
        }
        Jet(r)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut r = self.0;
        for (x, y) in r.iter_mut().zip(o.0) {
            *x += y;
        }
        Jet(r)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut r = self.0;
        for (x, y) in r.iter_mut().zip(o.0) {
            *x -= y;
        }
        Jet(r)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut r = [0.0; ORDER];
        for k in 0..ORDER {
            let mut s = 0.0;
            for i in 0..=k {
                s += self.0[i] * o.0[k - i];
            }
            r[k] = s;
        }
        Jet(r)
    }
}

impl VJet {
    pub const ZERO: VJet = VJet([Vec3::ZERO; ORDER]);

    #[inline]
    pub fn value(&self) -> Vec3 {
        self.0[0]
    }

    /// First derivative.
    #[inline]
    pub fn d1(&self) -> Vec3 {
        self.0[1]
    }

    /// Second derivative.
    #[inline]
    pub fn d2(&self) -> Vec3 {
        self.0[2] * 2.0
    }

    /// Third derivative.
    #[inline]
    pub fn d3(&self) -> Vec3 {
        self.0[3] * 6.0
    }

    pub fn dot(&self, o: &VJet) -> Jet {
        let mut r = [0.0; ORDER];
        for k in 0..ORDER {
            let mut s = 0.0;
            for i in 0..=k {
                s += self.0[i].dot(o.0[k - i]);
            }
            r[k] = s;
        }
        Jet(r)
    }

    pub fn cross(&self, o: &VJet) -> VJet {
        let mut r = [Vec3::ZERO; ORDER];
        for k in 0..ORDER {
            let mut s = Vec3::ZERO;
            for i in 0..=k {
                s += self.0[i].cross(o.0[k - i]);
            }
            r[k] = s;
        }
        VJet(r)
    }

    pub fn scale(&self, c: &Jet) -> VJet {
        let mut r = [Vec3::ZERO; ORDER];
        for k in 0..ORDER {
            let mut s = Vec3::ZERO;
            for i in 0..=k {
                s += self.0[i] * c.0[k - i];
            }
            r[k] = s;
        }
        VJet(r)
    }

    pub fn scale_by(&self, c: f64) -> VJet {
        let mut r = self.0;
        for v in r.iter_mut() {
            *v = *v * c;
        }
        VJet(r)
    }

    pub fn norm_sq(&self) -> Jet {
        self.dot(self)
    }

    /// `v / |v|`, exact to the jet order.
    pub fn normalized(&self) -> VJet {
        self.scale(&self.norm_sq().sqrt().recip())
    }

    /// Jet of the derivative; the top coefficient becomes zero.
    pub fn derivative(&self) -> VJet {
        let mut r = [Vec3::ZERO; ORDER];
        for k in 0..ORDER - 1 {
            r[k] = self.0[k + 1] * (k + 1) as f64;
        }
        VJet(r)
    }

    /// Jet of `t ↦ f(-t)` about the mirrored point.
    pub fn mirrored(&self) -> VJet {
        let mut r = self.0;
        for (k, v) in r.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
        VJet(r)
    }

    /// Jet of `t ↦ f(c·t)`.
    pub fn reparametrized(&self, c: f64) -> VJet {
        let mut r = self.0;
        let mut f = 1.0;
        for v in r.iter_mut() {
            *v = *v * f;
            f *= c;
        }
        VJet(r)
    }

    pub fn map(&self, f: impl Fn(Vec3) -> Vec3) -> VJet {
        let mut r = self.0;
        for v in r.iter_mut() {
            *v = f(*v);
        }
        VJet(r)
    }

    /// Evaluates the truncated series at offset `h`.
    pub fn eval(&self, h: f64) -> Vec3 {
        let mut acc = Vec3::ZERO;
        for k in (0..ORDER).rev() {
            acc = acc * h + self.0[k];
        }
        acc
    }
}

impl Add for VJet {
    type Output = VJet;
    fn add(self, o: VJet) -> VJet {
        let mut r = self.0;
        for (x, y) in r.iter_mut().zip(o.0) {
            *x += y;
        }
        VJet(r)
    }
}

impl Neg for VJet {
    type Output = VJet;
    fn neg(self) -> VJet {
        self.scale_by(-1.0)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, b| a * b as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin};

    fn trig_jet(t: f64) -> VJet {
        // (cos t, sin t, 0.5 sin 2t) expanded at t
        let mut c = [Vec3::ZERO; ORDER];
        let mut f = 1.0;
        for (k, ck) in c.iter_mut().enumerate() {
            let ph = k as f64 * core::f64::consts::FRAC_PI_2;
            *ck = Vec3::new(
                cos(t + ph),
                sin(t + ph),
                0.5 * 2f64.powi(k as i32) * sin(2.0 * t + ph),
            ) / f;
            f *= (k + 1) as f64;
        }
        VJet(c)
    }

    #[test]
    fn normalized_matches_finite_differences() {
        let t = 0.37;
        let h = 1e-4;
        let n = trig_jet(t).normalized();
        let fwd = trig_jet(t + h).value().normalized();
        let bwd = trig_jet(t - h).value().normalized();
        let mid = trig_jet(t).value().normalized();
        let d1 = (fwd - bwd) / (2.0 * h);
        let d2 = (fwd - mid * 2.0 + bwd) / (h * h);
        assert!((n.value() - mid).norm() < 1e-14);
        assert!((n.d1() - d1).norm() < 1e-7);
        assert!((n.d2() - d2).norm() < 1e-5);
    }

    #[test]
    fn recip_and_sqrt_invert() {
        let a = Jet([2.0, 0.3, -0.1, 0.05, 0.2, -0.7]);
        let one = a * a.recip();
        assert!((one.0[0] - 1.0).abs() < 1e-15);
        for k in 1..ORDER {
            assert!(one.0[k].abs() < 1e-14);
        }
        let s = a.sqrt();
        let back = s * s;
        for k in 0..ORDER {
            assert!((back.0[k] - a.0[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn eval_reproduces_series() {
        let j = trig_jet(1.1);
        let h = 1e-3;
        assert!((j.eval(h) - trig_jet(1.1 + h).value()).norm() < 1e-15 * 1e3 + 1e-16);
    }
}
