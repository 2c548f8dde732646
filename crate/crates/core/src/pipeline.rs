//! Detection, classification, genericity and counting in one pass.

use alloc::vec::Vec;

use crate::classify::classify_all;
use crate::config::Config;
use crate::curve::CurveModel;
use crate::events::{self, Event, EventError, EventKind};
use crate::genericity::{check_genericity, Violation};
use crate::identities::{CountReport, Residuals};
use crate::kbar::{analyze_kbar, KbarEvent, Partner};
use crate::trace::{traverse, Ledger, TraceKind};

/// Runs every detector; events come back sorted by kind, then parameter.
pub fn detect(k: &CurveModel, cfg: &Config) -> (Vec<Event>, Vec<EventError>) {
    let mut events = Vec::new();
    let mut errors = Vec::new();
    for f in [
        events::find_crossings(k, cfg),
        events::find_inflections(k, cfg),
        events::find_cusps(k, cfg),
        events::find_double_supporting(k, cfg),
        events::find_antipodal_pairs(k, cfg),
        events::find_normal_tangent_pairs(k, cfg),
    ] {
        events.extend(f.events);
        errors.extend(f.errors);
    }
    events.sort_by(|a, b| {
        (a.kind as u8)
            .cmp(&(b.kind as u8))
            .then(a.t.total_cmp(&b.t))
            .then(a.t2.unwrap_or(0.0).total_cmp(&b.t2.unwrap_or(0.0)))
    });
    (events, errors)
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub events: Vec<Event>,
    /// Counts on K. Residuals are left empty when the curve is not generic.
    pub report: CountReport,
    /// Counts on K̄, present when the curve has inflections.
    pub kbar: Option<CountReport>,
    pub kbar_events: Vec<KbarEvent>,
    pub violations: Vec<Violation>,
}

impl Analysis {
    pub fn is_generic(&self) -> bool {
        self.violations.is_empty()
    }

    /// Every applicable residual, on K and on K̄, is zero.
    pub fn residuals_zero(&self) -> bool {
        self.report.residuals.all_zero() && self.kbar.is_none_or(|r| r.residuals.all_zero())
    }

    /// Parameters where the curve crosses an inflection geodesic, as `(geodesic, t)`.
    pub fn geodesic_hits(&self) -> Vec<(usize, f64)> {
        self.kbar_events
            .iter()
            .filter_map(|e| match e.partner {
                Partner::Curve(t) if e.kind == EventKind::Crossing => Some((e.geodesic, t)),
                _ => None,
            })
            .collect()
    }
}

/// Tallies whatever got a label; events without one are already violations.
fn tally(events: &[Event]) -> CountReport {
    let labelled: Vec<Event> = events
        .iter()
        .filter(|e| e.label.is_some() || matches!(e.kind, EventKind::Inflection | EventKind::Cusp))
        .cloned()
        .collect();
    CountReport::from_events(&labelled).expect("unlabelled events were filtered out")
}

pub fn analyze(k: &CurveModel, cfg: &Config) -> Analysis {
    let (mut events, errors) = detect(k, cfg);
    let mut violations: Vec<Violation> = errors.iter().filter_map(Violation::from_event_error).collect();
    for (i, err) in classify_all(k, &mut events, cfg) {
        violations.push(Violation::from_classify_error(events[i].kind, &err));
    }
    violations.extend(check_genericity(k, &events, cfg));
    dedup(&mut violations);

    let mut report = tally(&events);
    let has_inflections = report.i > 0;
    let (kbar, kbar_events) = if has_inflections {
        let (r, extra, kerrs) = analyze_kbar(k, &events, &report, cfg);
        violations.extend(kerrs.iter().map(Violation::from_kbar_error));
        (Some(r), extra)
    } else {
        (None, Vec::new())
    };
    let generic = violations.is_empty();
    let kbar = kbar.map(|mut r| {
        if !generic {
            r.residuals = Residuals::default();
        }
        r
    });
    if !generic {
        report.residuals = Residuals::default();
    }
    Analysis { events, report, kbar, kbar_events, violations }
}

fn dedup(v: &mut Vec<Violation>) {
    let mut out: Vec<Violation> = Vec::with_capacity(v.len());
    for x in v.drain(..) {
        let dup = out.iter().any(|y| {
            y.code() == x.code()
                && y.params().len() == x.params().len()
                && y.params().iter().zip(x.params()).all(|(a, b)| (a - b).abs() < 1e-9)
        });
        if !dup {
            out.push(x);
        }
    }
    *v = out;
}

/// Both trace ledgers over one traversal.
pub fn traces(k: &CurveModel, a: &Analysis, cfg: &Config) -> [Ledger; 2] {
    let hits = a.geodesic_hits();
    [
        traverse(k, &a.events, &hits, TraceKind::Mp, cfg),
        traverse(k, &a.events, &hits, TraceKind::Vp, cfg),
    ]
}
