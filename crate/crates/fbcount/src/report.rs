//! Report JSON.
//!
//! A report carries everything needed to redraw the curve, so rendering an SVG
//! from a report read back from disk gives the same bytes as rendering it
//! straight after analysis.

use std::collections::BTreeMap;

use fbcount_core::identities::Residuals;
use fbcount_core::kbar::{KbarEvent, Partner};
use fbcount_core::trace::{Cause, Ledger};
use fbcount_core::{Analysis, CountReport, CurveModel, Event, Vec3};
use serde::{Deserialize, Serialize};

/// Points per period stored for drawing.
pub const DRAW_POINTS: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NonzeroResidual,
    NonGeneric,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::NonzeroResidual => 2,
            Status::NonGeneric => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
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
    /// Double supporting geodesics through a cusp, included in `t1`/`t2`.
    pub tc1: i64,
    pub tc2: i64,
}

impl From<&CountReport> for Counts {
    fn from(r: &CountReport) -> Self {
        Counts {
            t1: r.t1,
            t2: r.t2,
            c1: r.c1,
            c2: r.c2,
            i: r.i,
            u: r.u,
            a1: r.a1,
            a2: r.a2,
            n1: r.n1,
            n2: r.n2,
            tc1: r.tc1,
            tc2: r.tc2,
        }
    }
}

/// Residuals keyed by identity, as exact strings such as `"0"` or `"-1/2"`.
pub fn residual_strings(r: &Residuals) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    for (name, v) in [
        ("theorem1", r.r1),
        ("theorem3", r.r3),
        ("theorem4", r.r4),
        ("corollary5a", r.r5a),
        ("corollary5b", r.r5b),
    ] {
        if let Some(v) = v {
            m.insert(name.to_string(), v.to_string());
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub kind: String,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u8>,
    pub location: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location2: Option<[f64; 3]>,
}

impl From<&Event> for EventRow {
    fn from(e: &Event) -> Self {
        EventRow {
            kind: e.kind.name().to_string(),
            t: e.t,
            t2: e.t2,
            support: e.support.map(|s| s.name().to_string()),
            label: e.label.map(|l| l.number()),
            location: e.location.rep().to_array(),
            location2: e.location2.map(|p| p.rep().to_array()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationRow {
    pub code: String,
    pub message: String,
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpRow {
    pub t: f64,
    pub delta: i64,
    /// `event:<index into events>` or `inflection_geodesic:<index>`.
    pub causes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub net: i64,
    pub jumps: Vec<JumpRow>,
    pub errors: Vec<String>,
}

pub fn cause_name(c: Cause) -> String {
    match c {
        Cause::Event(i) => format!("event:{i}"),
        Cause::InflectionGeodesic(i) => format!("inflection_geodesic:{i}"),
    }
}

impl From<&Ledger> for LedgerRow {
    fn from(l: &Ledger) -> Self {
        LedgerRow {
            net: l.net(),
            jumps: l
                .jumps
                .iter()
                .map(|j| {
                    let mut causes: Vec<String> = j.roles.iter().map(|r| cause_name(r.cause)).collect();
                    causes.dedup();
                    JumpRow { t: j.t, delta: j.delta, causes }
                })
                .collect(),
            errors: l.errors.iter().map(|e| e.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRows {
    pub mp: LedgerRow,
    pub vp: LedgerRow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KbarEventRow {
    pub kind: String,
    pub geodesic: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_geodesic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u8>,
    pub location: [f64; 3],
}

impl From<&KbarEvent> for KbarEventRow {
    fn from(e: &KbarEvent) -> Self {
        let (curve_t, other_geodesic) = match e.partner {
            Partner::Curve(t) => (Some(t), None),
            Partner::Geodesic(g) => (None, Some(g)),
        };
        KbarEventRow {
            kind: e.kind.name().to_string(),
            geodesic: e.geodesic,
            curve_t,
            other_geodesic,
            label: e.label.map(|l| l.number()),
            location: e.location.rep().to_array(),
        }
    }
}

/// Counts on K together with its inflection geodesics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KbarReport {
    pub kbar: bool,
    pub counts: Counts,
    pub residuals: BTreeMap<String, String>,
    /// Events involving an inflection geodesic; the rest are those of K.
    pub extra_events: Vec<KbarEventRow>,
}

/// Sampled curve for drawing; `closure` is `-1` when it closes antipodally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub closure: f64,
    pub points: Vec<[f64; 3]>,
}

impl Polyline {
    pub fn sample(k: &CurveModel, n: usize) -> Polyline {
        let l = k.period();
        Polyline {
            closure: k.closure(),
            points: (0..n).map(|i| k.point(l * i as f64 / n as f64).to_array()).collect(),
        }
    }

    pub fn vec(&self, i: usize) -> Vec3 {
        Vec3::from_array(self.points[i])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kbar: bool,
    pub status: Status,
    pub generic: bool,
    pub period: f64,
    pub closure: f64,
    pub cusps: Vec<f64>,
    pub counts: Counts,
    pub residuals: BTreeMap<String, String>,
    pub events: Vec<EventRow>,
    pub violations: Vec<ViolationRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kbar_report: Option<KbarReport>,
    pub curve: Polyline,
}

pub fn status_of(a: &Analysis) -> Status {
    if !a.is_generic() {
        Status::NonGeneric
    } else if a.residuals_zero() {
        Status::Ok
    } else {
        Status::NonzeroResidual
    }
}

impl Report {
    pub fn new(k: &CurveModel, a: &Analysis, traces: Option<&[Ledger; 2]>) -> Report {
        Report {
            kbar: false,
            status: status_of(a),
            generic: a.is_generic(),
            period: k.period(),
            closure: k.closure(),
            cusps: k.cusps().to_vec(),
            counts: Counts::from(&a.report),
            residuals: residual_strings(&a.report.residuals),
            events: a.events.iter().map(EventRow::from).collect(),
            violations: a
                .violations
                .iter()
                .map(|v| ViolationRow { code: v.code().to_string(), message: v.to_string(), params: v.params() })
                .collect(),
            trace: traces.map(|[mp, vp]| TraceRows { mp: mp.into(), vp: vp.into() }),
            kbar_report: a.kbar.as_ref().map(|r| KbarReport {
                kbar: true,
                counts: Counts::from(r),
                residuals: residual_strings(&r.residuals),
                extra_events: a.kbar_events.iter().map(KbarEventRow::from).collect(),
            }),
            curve: Polyline::sample(k, DRAW_POINTS),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }
}
