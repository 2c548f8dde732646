//! Curve spec files.
//!
//! ```json
//! {"kind": "spherical", "samples": [[x, y, z], ...], "cusps": [t, ...]}
//! {"kind": "planar", "samples": [[x, y], ...]}
//! {"kind": "spherical", "builtin": {"name": "limacon", "params": {"b": 0.9}}}
//! ```
//!
//! Sample `i` of `n` sits at parameter `2πi/n`; declared cusps must be sample
//! parameters. Any of these may carry a `"config"` block overriding [`Config`].

use std::f64::consts::{FRAC_PI_4, TAU};
use std::path::Path;

use fbcount_core::builtins;
use fbcount_core::curve::{from_samples_with_cusps, lift_planar};
use fbcount_core::{Config, CurveModel, Vec3};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Margin below `π/4` for the cap that planar samples are lifted into.
pub const PLANAR_MARGIN: f64 = 0.1;

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// `field` is a dotted path into the spec, e.g. `config.grid` or `samples[3]`.
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl SpecError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        SpecError::Field { field: field.into(), message: message.into() }
    }

    /// The offending field, when the error is about one.
    pub fn field_name(&self) -> Option<&str> {
        match self {
            SpecError::Field { field, .. } => Some(field),
            SpecError::Io { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Spherical,
    Planar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Builtin {
    pub name: String,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
}

/// Overrides for [`Config`]; absent fields keep their defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_sep: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_on: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_cusp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_kg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_dedup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_ang: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_bend: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_resolution: Option<usize>,
}

impl ConfigBlock {
    pub fn apply(&self, base: &Config) -> Result<Config, SpecError> {
        let mut c = base.clone();
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = self.$f {
                    c.$f = v;
                }
            )*};
        }
        set!(grid, tol_sep, tol_on, v_min, delta_cusp, tol_kg, tol_dedup, tol_ang, eps, kappa_bend);
        set!(newton_iters, newton_tol, oracle_resolution);
        let positive = [
            ("tol_sep", c.tol_sep),
            ("tol_on", c.tol_on),
            ("v_min", c.v_min),
            ("delta_cusp", c.delta_cusp),
            ("tol_kg", c.tol_kg),
            ("tol_dedup", c.tol_dedup),
            ("tol_ang", c.tol_ang),
            ("eps", c.eps),
            ("newton_tol", c.newton_tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(SpecError::field(format!("config.{name}"), "must be a positive number"));
            }
        }
        if c.kappa_bend.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
            return Err(SpecError::field("config.kappa_bend", "bends must be positive"));
        }
        if c.grid < 64 {
            return Err(SpecError::field("config.grid", "must be at least 64"));
        }
        if c.oracle_resolution < fbcount_core::oracle::MIN_RESOLUTION {
            return Err(SpecError::field(
                "config.oracle_resolution",
                format!("must be at least {}", fbcount_core::oracle::MIN_RESOLUTION),
            ));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cusps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigBlock>,
}

impl CurveSpec {
    pub fn parse(text: &str) -> Result<CurveSpec, SpecError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "(root)".to_string() } else { path };
            SpecError::field(field, e.inner().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<CurveSpec, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| SpecError::Io { path: path.display().to_string(), source })?;
        CurveSpec::parse(&text)
    }

    pub fn config(&self) -> Result<Config, SpecError> {
        match &self.config {
            Some(b) => b.apply(&Config::default()),
            None => Ok(Config::default()),
        }
    }

    pub fn build(&self) -> Result<CurveModel, SpecError> {
        match (&self.samples, &self.builtin) {
            (Some(_), Some(_)) => Err(SpecError::field("builtin", "give either samples or a builtin, not both")),
            (None, None) => Err(SpecError::field("samples", "give either samples or a builtin")),
            (None, Some(b)) => {
                if !self.cusps.is_empty() {
                    return Err(SpecError::field("cusps", "builtins declare their own cusps"));
                }
                build_builtin(b)
            }
            (Some(s), None) => self.build_samples(s),
        }
    }

    fn build_samples(&self, s: &[Vec<f64>]) -> Result<CurveModel, SpecError> {
        let dim = match self.kind {
            Kind::Spherical => 3,
            Kind::Planar => 2,
        };
        for (i, p) in s.iter().enumerate() {
            if p.len() != dim {
                return Err(SpecError::field(
                    format!("samples[{i}]"),
                    format!("expected {dim} coordinates, got {}", p.len()),
                ));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(SpecError::field(format!("samples[{i}]"), "coordinates must be finite"));
            }
        }
        for (i, c) in self.cusps.iter().enumerate() {
            if !c.is_finite() {
                return Err(SpecError::field(format!("cusps[{i}]"), "must be finite"));
            }
        }
        let curve_err = |e: fbcount_core::CurveError| {
            let field = match e {
                fbcount_core::CurveError::CuspOffSample { .. } => "cusps",
                _ => "samples",
            };
            SpecError::field(field, e.to_string())
        };
        match self.kind {
            Kind::Spherical => {
                let pts: Vec<Vec3> = s.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect();
                from_samples_with_cusps(&pts, true, &self.cusps).map_err(curve_err)
            }
            Kind::Planar => {
                if !self.cusps.is_empty() {
                    return Err(SpecError::field("cusps", "cusps are only supported on spherical samples"));
                }
                let pts: Vec<(f64, f64)> = s.iter().map(|p| (p[0], p[1])).collect();
                lift_planar(&pts, PLANAR_MARGIN).map_err(curve_err)
            }
        }
    }
}

struct Params<'a> {
    map: &'a Map<String, Value>,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn new(map: &'a Map<String, Value>) -> Self {
        Params { map, used: Vec::new() }
    }

    fn path(name: &str) -> String {
        format!("builtin.params.{name}")
    }

    fn f64(&mut self, name: &'static str, default: f64) -> Result<f64, SpecError> {
        self.used.push(name);
        match self.map.get(name) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| SpecError::field(Self::path(name), "expected a number")),
        }
    }

    fn u32(&mut self, name: &'static str, default: u32) -> Result<u32, SpecError> {
        self.used.push(name);
        match self.map.get(name) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| SpecError::field(Self::path(name), "expected a non-negative integer")),
        }
    }

    fn f64_list(&mut self, name: &'static str, default: &[f64]) -> Result<Vec<f64>, SpecError> {
        self.used.push(name);
        match self.map.get(name) {
            None => Ok(default.to_vec()),
            Some(Value::Array(a)) => a
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.as_f64()
                        .ok_or_else(|| SpecError::field(format!("{}[{i}]", Self::path(name)), "expected a number"))
                })
                .collect(),
            Some(_) => Err(SpecError::field(Self::path(name), "expected a list of numbers")),
        }
    }

    fn u32_list(&mut self, name: &'static str, default: &[u32]) -> Result<Vec<u32>, SpecError> {
        self.used.push(name);
        match self.map.get(name) {
            None => Ok(default.to_vec()),
            Some(Value::Array(a)) => a
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| {
                        SpecError::field(format!("{}[{i}]", Self::path(name)), "expected a positive integer")
                    })
                })
                .collect(),
            Some(_) => Err(SpecError::field(Self::path(name), "expected a list of integers")),
        }
    }

    fn finish(self) -> Result<(), SpecError> {
        match self.map.keys().find(|k| !self.used.contains(&k.as_str())) {
            Some(k) => Err(SpecError::field(Self::path(k), "unknown parameter")),
            None => Ok(()),
        }
    }
}

/// Builds a builtin family by name; missing parameters take the listed defaults.
pub fn build_builtin(b: &Builtin) -> Result<CurveModel, SpecError> {
    let mut p = Params::new(&b.params);
    let range = |name: &'static str, v: f64, lo: f64, hi: f64| {
        if v > lo && v < hi {
            Ok(v)
        } else {
            Err(SpecError::field(Params::path(name), format!("must lie in ({lo}, {hi})")))
        }
    };
    let model = match b.name.as_str() {
        "latitude_circle" => {
            let theta = p.f64("theta", FRAC_PI_4)?;
            builtins::latitude_circle(range("theta", theta, 0.0, std::f64::consts::PI)?)
        }
        "wavy_great_circle" | "dual_wavy" => {
            let a = p.f64("amplitude", 0.2)?;
            let harmonics = p.u32_list("harmonics", &[3])?;
            let phases = p.f64_list("phases", &[])?;
            if harmonics.is_empty() || harmonics.contains(&0) {
                return Err(SpecError::field(Params::path("harmonics"), "expected positive harmonics"));
            }
            let a = range("amplitude", a, 0.0, 1.0)?;
            if b.name == "dual_wavy" {
                builtins::dual_wavy(a, &harmonics, &phases)
            } else {
                builtins::wavy_great_circle(a, &harmonics, &phases)
            }
        }
        "fig7_left" => builtins::fig7_left(),
        "fig7_right" => builtins::fig7_right(),
        "right_angle" => builtins::right_angle(),
        "half_pi_support" => builtins::half_pi_support(),
        "cusped" => {
            let u = p.u32("cusps", 3)?;
            if u == 0 {
                return Err(SpecError::field(Params::path("cusps"), "expected at least one cusp"));
            }
            let c1 = p.f64("c1", 0.15)?;
            let c2 = p.f64("c2", -0.1)?;
            if c1.abs() + c2.abs() >= 1.0 {
                return Err(SpecError::field(Params::path("c2"), "|c1| + |c2| must be below 1"));
            }
            let cap = p.f64("cap", 0.6)?;
            builtins::cusped(u, c1, c2, range("cap", cap, 0.0, FRAC_PI_4)?)
        }
        "ellipse" => {
            let a = p.f64("a", 1.0)?;
            let bb = p.f64("b", 0.6)?;
            builtins::ellipse(range("a", a, 0.0, f64::INFINITY)?, range("b", bb, 0.0, f64::INFINITY)?)
        }
        "limacon" => {
            let bb = p.f64("b", 0.95)?;
            let skew = p.f64("skew", 0.02)?;
            builtins::limacon(range("b", bb, 0.0, f64::INFINITY)?, skew)
        }
        "figure_eight" => builtins::figure_eight(p.f64("skew", 0.05)?),
        "bean" => builtins::bean(),
        "peanut" => builtins::peanut(),
        other => {
            let names: Vec<&str> = builtins::NAMES.iter().map(|(n, _)| *n).collect();
            return Err(SpecError::field(
                "builtin.name",
                format!("unknown builtin `{other}`; known: {}", names.join(", ")),
            ));
        }
    };
    p.finish()?;
    Ok(model)
}

/// A sampled spec for `k`, with `n` samples spread so every cusp is a sample.
///
/// Samples are uniform in the curve parameter between consecutive cusps; the
/// counts per arc are proportional to the arc's parameter length.
pub fn sampled_spec(k: &CurveModel, n: usize) -> CurveSpec {
    let l = k.period();
    let cusps = k.cusps();
    let mut params = Vec::with_capacity(n);
    let mut cusp_params = Vec::new();
    if cusps.is_empty() {
        params.extend((0..n).map(|i| l * i as f64 / n as f64));
    } else {
        let m = cusps.len();
        let mut counts: Vec<usize> = (0..m)
            .map(|j| {
                let next = if j + 1 < m { cusps[j + 1] } else { cusps[0] + l };
                (((next - cusps[j]) / l * n as f64).round() as usize).max(4)
            })
            .collect();
        let total: usize = counts.iter().sum();
        // absorb rounding in the longest arc
        let longest = (0..m).max_by_key(|&j| counts[j]).unwrap();
        counts[longest] = (counts[longest] + n).saturating_sub(total).max(4);
        for j in 0..m {
            let next = if j + 1 < m { cusps[j + 1] } else { cusps[0] + l };
            cusp_params.push(params.len());
            let c = counts[j];
            params.extend((0..c).map(|i| cusps[j] + (next - cusps[j]) * i as f64 / c as f64));
        }
    }
    let total = params.len();
    let samples = params
        .iter()
        .map(|&t| {
            let p = k.point(t);
            vec![p.x, p.y, p.z]
        })
        .collect();
    let cusps = cusp_params.iter().map(|&i| TAU * i as f64 / total as f64).collect();
    CurveSpec { kind: Kind::Spherical, samples: Some(samples), cusps, builtin: None, config: None }
}
