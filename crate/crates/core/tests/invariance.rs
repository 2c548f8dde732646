use fbcount_core::builtins::{self, cusped, fig7_left, figure_eight, wavy_great_circle};
use fbcount_core::{analyze, Config, CountReport, CurveModel, Event};
use proptest::prelude::*;

fn rotation(q: [f64; 4]) -> [[f64; 3]; 3] {
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn quaternion() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0f64..1.0).prop_filter("degenerate", |q| q.iter().map(|x| x * x).sum::<f64>() > 0.05)
}

fn counts(r: &CountReport) -> [i64; 12] {
    [r.t1, r.t2, r.c1, r.c2, r.i, r.u, r.a1, r.a2, r.n1, r.n2, r.tc1, r.tc2]
}

fn labels(events: &[Event]) -> Vec<(&'static str, Option<u8>)> {
    let mut v: Vec<_> = events.iter().map(|e| (e.kind.name(), e.label.map(|l| l.number()))).collect();
    v.sort();
    v
}

fn model(i: usize) -> CurveModel {
    match i {
        0 => fig7_left(),
        1 => figure_eight(0.05),
        2 => wavy_great_circle(0.15, &[3, 5], &[0.2, 1.1]),
        _ => cusped(2, 0.15, -0.1, 0.6),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn counts_are_rotation_invariant(i in 0usize..4, q in quaternion()) {
        let cfg = Config::default();
        let k = model(i);
        let a = analyze(&k, &cfg);
        let b = analyze(&k.rotated(rotation(q)), &cfg);
        prop_assert!(b.is_generic(), "{:?}", b.violations);
        prop_assert_eq!(counts(&a.report), counts(&b.report));
        prop_assert_eq!(labels(&a.events), labels(&b.events));
    }
}

#[test]
fn counts_survive_reversal_and_a_smaller_eps() {
    let cfg = Config::default();
    let fine = Config { eps: cfg.eps / 2.0, ..cfg.clone() };
    for (name, k) in builtins::fixture_suite() {
        let a = analyze(&k, &cfg);
        let r = analyze(&k.reversed(), &cfg);
        assert_eq!(counts(&a.report), counts(&r.report), "{name} reversed");
        assert_eq!(labels(&a.events), labels(&r.events), "{name} reversed");
        let f = analyze(&k, &fine);
        assert_eq!(counts(&a.report), counts(&f.report), "{name} eps/2");
        assert_eq!(labels(&a.events), labels(&f.events), "{name} eps/2");
    }
}
