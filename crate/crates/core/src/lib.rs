//! Singularity analysis for closed curves in the real projective plane.
//!
//! Curves live on the unit sphere (the double cover of RP²) and are compared
//! projectively, so a curve may close up either on the sphere or only up to the
//! antipodal map. The crate detects crossings, inflections, cusps, double
//! supporting geodesics, antipodal pairs and normal-tangent pairs, labels them
//! type 1 or type 2, and evaluates the counting identities that relate them in
//! exact half-integer arithmetic.
//!
//! The crate is `no_std` with `alloc`. Enabling the `std` feature parallelises
//! the grid scans with rayon; results are identical either way.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod builtins;
pub mod classify;
pub mod config;
pub mod curve;
pub mod events;
pub mod genericity;
pub mod identities;
pub mod jet;
pub mod kbar;
pub mod math;
pub mod oracle;
pub mod pipeline;
pub mod projective;
pub mod roots;
pub mod spline;
pub mod trace;

mod par;

pub use config::Config;
pub use curve::{CurveError, CurveModel, FramedPoint};
pub use events::{Event, EventKind, Label, Support};
pub use identities::{CountReport, HalfInt, Identity};
pub use genericity::Violation;
pub use pipeline::{analyze, Analysis};
pub use projective::{OrientedGeodesic, ProjectivePoint, Vec3};
