//! Counters and the four counting identities, in exact half-integer arithmetic.

use core::fmt;

use crate::events::{Event, EventKind, Label, Support};

/// An exact multiple of one half, stored as the number of halves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn halves(self) -> i64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Parses `"3"`, `"-1/2"` and the like.
    pub fn parse(s: &str) -> Option<HalfInt> {
        let s = s.trim();
        if let Some(num) = s.strip_suffix("/2") {
            let n: i64 = num.parse().ok()?;
            if n % 2 == 0 {
                return None;
            }
            Some(HalfInt(n))
        } else {
            s.parse::<i64>().ok().map(|n| HalfInt(2 * n))
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `T₁ − T₂ = C₁ + C₂ + I/2 + U − A₁/2 + A₂/2`
    Theorem1,
    /// `C₁ − C₂ = T₁ + T₂ + U/2 − N₁/2 + N₂/2`, for curves without inflections.
    /// Here `T` counts only geodesics tangent at both ends; see [`CountReport::tangent_only`].
    Theorem3,
    /// `C₁ − C₂ = T₁ + T₂ + U/2 + I − N₁/2 + N₂/2`, with counts taken on K̄.
    Theorem4,
    /// `4T₁ − 4C₁ = N₁ − N₂` and `4T₂ + 4C₂ = N₁ − N₂`, for curves without
    /// cusps, inflections or antipodal pairs.
    Corollary5,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::Theorem1 => "theorem1",
            Identity::Theorem3 => "theorem3",
            Identity::Theorem4 => "theorem4",
            Identity::Corollary5 => "corollary5",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityError {
    PreconditionViolated { identity: Identity, reason: &'static str },
    UnclassifiedEvent { kind: EventKind, t: u64 },
}

impl fmt::Display for IdentityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityError::PreconditionViolated { identity, reason } => {
                write!(f, "{} does not apply: {reason}", identity.name())
            }
            IdentityError::UnclassifiedEvent { kind, t } => {
                write!(f, "{} at t={} has no type label", kind.name(), f64::from_bits(*t))
            }
        }
    }
}

impl core::error::Error for IdentityError {}

/// Left-minus-right residuals of the identities that apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Residuals {
    pub r1: Option<HalfInt>,
    pub r3: Option<HalfInt>,
    pub r4: Option<HalfInt>,
    pub r5a: Option<HalfInt>,
    pub r5b: Option<HalfInt>,
}

impl Residuals {
    pub fn all_zero(&self) -> bool {
        [self.r1, self.r3, self.r4, self.r5a, self.r5b]
            .iter()
            .flatten()
            .all(|r| r.is_zero())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountReport {
    pub t1: i64,
    pub t2: i64,
    pub c1: i64,
    pub c2: i64,
    pub i: i64,
    pub u: i64,
    pub a1: i64,
    pub a2: i64,
    pub n1: i64,
    pub n2: i64,
    /// Double supporting geodesics of each type that pass through a cusp.
    /// They are part of `t1`/`t2` but are left out of the dual identities.
    pub tc1: i64,
    pub tc2: i64,
    /// Counts were taken on K together with its inflection geodesics.
    pub kbar: bool,
    pub residuals: Residuals,
}

impl CountReport {
    /// Tallies classified events and fills in every applicable residual.
    pub fn from_events(events: &[Event]) -> Result<CountReport, IdentityError> {
        let mut r = CountReport::default();
        for e in events {
            let slot = match e.kind {
                EventKind::Inflection => {
                    r.i += 1;
                    continue;
                }
                EventKind::Cusp => {
                    r.u += 1;
                    continue;
                }
                EventKind::Crossing => (&mut r.c1, &mut r.c2),
                EventKind::DoubleSupporting => {
                    if matches!(e.support, Some(Support::TangentCusp | Support::CuspCusp)) {
                        match e.label {
                            Some(Label::One) => r.tc1 += 1,
                            Some(Label::Two) => r.tc2 += 1,
                            None => {}
                        }
                    }
                    (&mut r.t1, &mut r.t2)
                }
                EventKind::AntipodalPair => (&mut r.a1, &mut r.a2),
                EventKind::NormalTangentPair => (&mut r.n1, &mut r.n2),
            };
            match e.label {
                Some(Label::One) => *slot.0 += 1,
                Some(Label::Two) => *slot.1 += 1,
                None => {
                    return Err(IdentityError::UnclassifiedEvent { kind: e.kind, t: e.t.to_bits() })
                }
            }
        }
        r.fill_residuals();
        Ok(r)
    }

    pub fn fill_residuals(&mut self) {
        let get = |id| evaluate(self, id).ok();
        let r1 = get(Identity::Theorem1).map(|v| v[0]);
        let r3 = get(Identity::Theorem3).map(|v| v[0]);
        let r4 = get(Identity::Theorem4).map(|v| v[0]);
        let r5 = get(Identity::Corollary5);
        self.residuals = Residuals {
            r1,
            r3,
            r4,
            r5a: r5.map(|v| v[0]),
            r5b: r5.map(|v| v[1]),
        };
    }

    pub fn total_events(&self) -> i64 {
        self.t1 + self.t2 + self.c1 + self.c2 + self.i + self.u + self.a1 + self.a2 + self.n1 + self.n2
    }

    /// `T₁ + T₂` restricted to geodesics tangent at both support points.
    pub fn tangent_only(&self) -> i64 {
        self.t1 + self.t2 - self.tc1 - self.tc2
    }

    /// Same counters, ignoring residuals and the K̄ flag.
    pub fn same_counts(&self, o: &CountReport) -> bool {
        (self.t1, self.t2, self.c1, self.c2, self.i, self.u, self.a1, self.a2, self.n1, self.n2)
            == (o.t1, o.t2, o.c1, o.c2, o.i, o.u, o.a1, o.a2, o.n1, o.n2)
    }
}

/// Residuals (left minus right) of one identity; the corollary yields two.
pub fn evaluate(r: &CountReport, id: Identity) -> Result<[HalfInt; 2], IdentityError> {
    let fail = |reason| Err(IdentityError::PreconditionViolated { identity: id, reason });
    match id {
        Identity::Theorem1 => {
            if r.kbar {
                return fail("counts are taken on K̄");
            }
            let lhs = 2 * (r.t1 - r.t2);
            let rhs = 2 * (r.c1 + r.c2) + r.i + 2 * r.u - r.a1 + r.a2;
            Ok([HalfInt(lhs - rhs), HalfInt::ZERO])
        }
        Identity::Theorem3 => {
            if r.kbar {
                return fail("counts are taken on K̄");
            }
            if r.i != 0 {
                return fail("the curve has inflection points");
            }
            let lhs = 2 * (r.c1 - r.c2);
            let rhs = 2 * r.tangent_only() + r.u - r.n1 + r.n2;
            Ok([HalfInt(lhs - rhs), HalfInt::ZERO])
        }
        Identity::Theorem4 => {
            if !r.kbar {
                return fail("counts are not taken on K̄");
            }
            let lhs = 2 * (r.c1 - r.c2);
            let rhs = 2 * r.tangent_only() + r.u + 2 * r.i - r.n1 + r.n2;
            Ok([HalfInt(lhs - rhs), HalfInt::ZERO])
        }
        Identity::Corollary5 => {
            if r.kbar {
                return fail("counts are taken on K̄");
            }
            if r.u != 0 || r.i != 0 || r.a1 != 0 || r.a2 != 0 {
                return fail("the curve has cusps, inflections or antipodal pairs");
            }
            let d = r.n1 - r.n2;
            Ok([
                HalfInt(2 * (4 * r.t1 - 4 * r.c1 - d)),
                HalfInt(2 * (4 * r.t2 + 4 * r.c2 - d)),
            ])
        }
    }
}
