use core::f64::consts::TAU;

use fbcount_core::builtins::{limacon, right_angle};
use fbcount_core::{analyze, Config};
use proptest::prelude::*;

/// The limaçon parameter at which the lifted crossing is a right angle.
fn right_b() -> f64 {
    let dot = |b: f64| {
        let k = limacon(b, 0.0);
        let t0 = (-b).acos();
        k.velocity(t0).dot(k.velocity(TAU - t0))
    };
    let (mut lo, mut hi) = (0.6, 0.8);
    let s_lo = dot(lo) > 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if (dot(mid) > 0.0) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn codes(a: &fbcount_core::Analysis) -> Vec<&'static str> {
    a.violations.iter().map(|v| v.code()).collect()
}

#[test]
fn right_angle_is_flagged() {
    let a = analyze(&right_angle(), &Config::default());
    assert!(codes(&a).contains(&"perpendicular_tangents"), "{:?}", codes(&a));
    assert!(a.report.residuals.r1.is_none());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn perturbed_right_angle_is_generic(db in 2e-3f64..2e-2, sign in prop::bool::ANY, skew in -2e-2f64..2e-2) {
        let b = right_b() + if sign { db } else { -db };
        let a = analyze(&limacon(b, skew), &Config::default());
        prop_assert!(a.is_generic(), "b={} skew={} {:?}", b, skew, codes(&a));
        prop_assert!(a.residuals_zero());
    }
}
