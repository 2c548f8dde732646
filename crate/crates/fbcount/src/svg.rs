//! Disk-model drawings.
//!
//! Each projective point is drawn from its upper-hemisphere representative,
//! projected orthographically onto the `(x, y)` plane. The boundary circle is
//! the equator, covered twice: a curve leaving through the boundary re-enters
//! at the opposite point, so paths are split there.

use std::fmt::Write;

use fbcount_core::Vec3;

use crate::report::{EventRow, Report};

const SIZE: f64 = 560.0;
const RADIUS: f64 = 250.0;
const CENTER: f64 = 270.0;

/// Fill colors per event kind, for type 1 and type 2.
fn color(kind: &str, label: Option<u8>) -> &'static str {
    match (kind, label) {
        ("crossing", Some(1)) => "#d62728",
        ("crossing", Some(2)) => "#ff9896",
        ("double_supporting", Some(1)) => "#1f77b4",
        ("double_supporting", Some(2)) => "#aec7e8",
        ("antipodal_pair", Some(1)) => "#ff7f0e",
        ("antipodal_pair", Some(2)) => "#ffbb78",
        ("normal_tangent_pair", Some(1)) => "#17becf",
        ("normal_tangent_pair", Some(2)) => "#9edae5",
        ("inflection", _) => "#2ca02c",
        ("cusp", _) => "#9467bd",
        _ => "#7f7f7f",
    }
}

fn upper(v: Vec3) -> Vec3 {
    if v.z < 0.0 || (v.z == 0.0 && (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0))) {
        -v
    } else {
        v
    }
}

fn xy(v: Vec3) -> (f64, f64) {
    (CENTER + RADIUS * v.x, CENTER - RADIUS * v.y)
}

fn push_point(d: &mut String, cmd: char, v: Vec3) {
    let (x, y) = xy(v);
    let _ = write!(d, "{cmd}{x:.3} {y:.3} ");
}

/// SVG path data for the curve, split where it meets the boundary.
pub fn curve_path(report: &Report) -> String {
    let c = &report.curve;
    let n = c.points.len();
    let mut d = String::new();
    if n == 0 {
        return d;
    }
    let first = c.vec(0);
    push_point(&mut d, 'M', upper(first));
    for i in 0..n {
        let a = c.vec(i);
        let b = if i + 1 < n { c.vec(i + 1) } else { first * c.closure };
        if (a.z >= 0.0) == (b.z >= 0.0) {
            push_point(&mut d, 'L', upper(b));
            continue;
        }
        let s = a.z / (a.z - b.z);
        let mut w = a + (b - a) * s;
        w.z = 0.0;
        let w = w.normalized();
        push_point(&mut d, 'L', if a.z >= 0.0 { w } else { -w });
        push_point(&mut d, 'M', if b.z >= 0.0 { w } else { -w });
        push_point(&mut d, 'L', upper(b));
    }
    d.pop();
    d
}

fn marker(out: &mut String, e: &EventRow, at: [f64; 3], r: f64) {
    let (x, y) = xy(upper(Vec3::from_array(at)));
    let fill = color(&e.kind, e.label);
    let label = e.label.map(|l| format!(" type {l}")).unwrap_or_default();
    let _ = writeln!(
        out,
        r#"  <circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{fill}" stroke="black" stroke-width="0.5"><title>{}{label} t={:.6}</title></circle>"#,
        e.kind, e.t
    );
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r##"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"##);
    let _ = writeln!(
        out,
        r##"  <circle cx="{CENTER}" cy="{CENTER}" r="{RADIUS}" fill="none" stroke="#444" stroke-width="1"/>"##
    );
    let _ = writeln!(
        out,
        r##"  <path d="{}" fill="none" stroke="#222" stroke-width="1.5" stroke-linejoin="round"/>"##,
        curve_path(report)
    );
    for e in &report.events {
        marker(&mut out, e, e.location, 4.5);
        if let Some(q) = e.location2 {
            marker(&mut out, e, q, 2.5);
        }
    }
    let c = &report.counts;
    let _ = writeln!(
        out,
        r#"  <text x="10" y="{}" font-family="monospace" font-size="11">T={}/{} C={}/{} I={} U={} A={}/{} N={}/{} ({})</text>"#,
        SIZE - 8.0,
        c.t1,
        c.t2,
        c.c1,
        c.c2,
        c.i,
        c.u,
        c.a1,
        c.a2,
        c.n1,
        c.n2,
        match report.status {
            crate::report::Status::Ok => "ok",
            crate::report::Status::NonzeroResidual => "nonzero residual",
            crate::report::Status::NonGeneric => "not generic",
        }
    );
    out.push_str("</svg>\n");
    out
}
