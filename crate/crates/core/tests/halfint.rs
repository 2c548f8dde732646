use fbcount_core::identities::{evaluate, Identity};
use fbcount_core::{CountReport, HalfInt};
use proptest::prelude::*;

proptest! {
    #[test]
    fn display_round_trips(n in -1_000_000i64..1_000_000) {
        let h = HalfInt(n);
        prop_assert_eq!(HalfInt::parse(&h.to_string()), Some(h));
    }

    #[test]
    fn theorem1_residual_matches_rationals(c in prop::array::uniform10(0i64..40)) {
        let [t1, t2, c1, c2, i, u, a1, a2, n1, n2] = c;
        let r = CountReport { t1, t2, c1, c2, i, u, a1, a2, n1, n2, ..CountReport::default() };
        let [res, _] = evaluate(&r, Identity::Theorem1).unwrap();
        let want = (t1 - t2) as f64 - (c1 + c2) as f64 - i as f64 / 2.0 - u as f64 + a1 as f64 / 2.0 - a2 as f64 / 2.0;
        prop_assert_eq!(res.halves() as f64 / 2.0, want);
    }
}

#[test]
fn parse_rejects_even_halves() {
    assert_eq!(HalfInt::parse("4/2"), None);
    assert_eq!(HalfInt::parse("-3/2"), Some(HalfInt(-3)));
    assert_eq!(HalfInt::parse(" 2 "), Some(HalfInt(4)));
    assert_eq!(HalfInt(-1).to_string(), "-1/2");
}
