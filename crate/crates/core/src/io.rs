//! Input parsing and deterministic table output for the command-line tool.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::constants::ev_to_rad_per_s;
use crate::error::{CasimirError, Result};
use crate::models::GammaMap;
use crate::yukawa::{BodySpec, Configuration, Layer, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(format_number(*v)),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// Shortest round-trip representation; `inf`, `-inf`, `nan` otherwise.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

/// A result table plus the provenance that goes into its header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub config_hash: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(command: &str, config_hash: String, columns: Vec<Column>) -> Self {
        Self {
            command: command.into(),
            config_hash,
            columns,
            rows: Vec::new(),
            meta: Map::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# casimir {}\n", self.command));
        let units: Vec<String> = self.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)).collect();
        out.push_str(&format!("# units: {}\n", units.join(", ")));
        out.push_str(&format!("# config-sha256: {}\n", self.config_hash));
        if !self.meta.is_empty() {
            out.push_str(&format!("# {}\n", Value::Object(self.meta.clone())));
        }
        for n in &self.notes {
            out.push_str(&format!("# note: {n}\n"));
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let units: Map<String, Value> = self.columns.iter().map(|c| (c.name.clone(), json!(c.unit))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.name.clone(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "config_sha256": self.config_hash,
            "columns": self.columns.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
            "units": units,
            "rows": rows,
            "meta": self.meta,
            "notes": self.notes,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }
}

/// SHA-256 of the canonical JSON form of a configuration.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let value = serde_json::to_value(config).expect("config serializes");
    let bytes = serde_json::to_vec(&value).expect("config serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Length with an optional unit suffix (`nm`, `um`, `μm`, `mm`, `m`);
/// bare numbers are metres.
pub fn parse_length(s: &str) -> Result<f64> {
    let t = s.trim();
    // Dividing by an exact power of ten keeps "100nm" == 1e-7.
    let (num, per_metre) = [("nm", 1e9), ("um", 1e6), ("μm", 1e6), ("mm", 1e3), ("m", 1.0)]
        .iter()
        .find_map(|(suffix, per)| t.strip_suffix(suffix).map(|n| (n, *per)))
        .unwrap_or((t, 1.0));
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| CasimirError::Parse(format!("cannot read length '{s}'")))?;
    let v = v / per_metre;
    if !(v > 0.0) || !v.is_finite() {
        return Err(CasimirError::Parse(format!("length must be positive, got '{s}'")));
    }
    Ok(v)
}

/// `points` log-spaced values from `min` to `max` (both included).
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(CasimirError::Parse("grid needs at least one point".into()));
    }
    if !(min > 0.0) || !(max >= min) || !max.is_finite() {
        return Err(CasimirError::Parse(format!("bad grid range {min} .. {max}")));
    }
    if points == 1 {
        if min != max {
            return Err(CasimirError::Parse("a one-point grid needs min = max".into()));
        }
        return Ok(vec![min]);
    }
    if min == max {
        return Err(CasimirError::Parse("grid range is empty".into()));
    }
    let step = (max / min).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => min,
            i if i == points - 1 => max,
            i => min * (step * i as f64).exp(),
        })
        .collect())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    body: Vec<BodyEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BodyEntry {
    shape: String,
    /// kg/m³.
    density: f64,
    /// m.
    thickness: Option<f64>,
    /// m.
    radius: Option<f64>,
    #[serde(default)]
    coating: Vec<CoatingEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoatingEntry {
    thickness: f64,
    density: f64,
}

/// Two `[[body]]` tables; lengths in m, densities in kg/m³.
pub fn parse_geometry(text: &str) -> Result<Configuration> {
    let file: GeometryFile = toml::from_str(text).map_err(|e| CasimirError::Parse(format!("geometry file: {e}")))?;
    if file.body.len() != 2 {
        return Err(CasimirError::Parse(format!(
            "geometry file must list exactly two bodies, found {}",
            file.body.len()
        )));
    }
    let mut bodies = Vec::new();
    for b in file.body {
        let need = |v: Option<f64>, what: &str| {
            v.ok_or_else(|| CasimirError::Parse(format!("{} body needs '{what}'", b.shape)))
        };
        let shape = match b.shape.as_str() {
            "semispace" | "semispace-plate" => Shape::SemispacePlate,
            "slab" | "finite-slab" => Shape::FiniteSlab {
                thickness: need(b.thickness, "thickness")?,
            },
            "sphere" => Shape::Sphere {
                radius: need(b.radius, "radius")?,
            },
            other => return Err(CasimirError::Parse(format!("unknown body shape '{other}'"))),
        };
        let coatings = b
            .coating
            .iter()
            .map(|c| Layer {
                thickness: c.thickness,
                density: c.density,
            })
            .collect();
        bodies.push(BodySpec::new(shape, b.density, coatings).map_err(as_parse)?);
    }
    let second = bodies.pop().expect("two bodies");
    let first = bodies.pop().expect("two bodies");
    Configuration::new(first, second).map_err(as_parse)
}

fn as_parse(e: CasimirError) -> CasimirError {
    match e {
        CasimirError::Parse(_) => e,
        other => CasimirError::Parse(other.to_string()),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GammaFile {
    kind: String,
    /// `[T in K, γ in eV]` pairs.
    points: Option<Vec<[f64; 2]>>,
    reference_t: Option<f64>,
    debye_t: Option<f64>,
    residual_ev: Option<f64>,
}

/// Relaxation map from TOML: `kind = "table"` with `points`, or
/// `kind = "bloch-gruneisen"` with `debye_t`, optional `reference_t`
/// (default 300 K) and `residual_ev` (default 0).
pub fn parse_gamma_map(text: &str) -> Result<GammaMap> {
    let f: GammaFile = toml::from_str(text).map_err(|e| CasimirError::Parse(format!("gamma map: {e}")))?;
    match f.kind.as_str() {
        "table" => {
            let pts = f
                .points
                .ok_or_else(|| CasimirError::Parse("gamma table needs 'points'".into()))?;
            GammaMap::table(pts.iter().map(|p| (p[0], ev_to_rad_per_s(p[1]))).collect())
        }
        "bloch-gruneisen" => {
            let debye = f
                .debye_t
                .ok_or_else(|| CasimirError::Parse("bloch-gruneisen map needs 'debye_t'".into()))?;
            let reference = f.reference_t.unwrap_or(300.0);
            let residual = f.residual_ev.unwrap_or(0.0);
            if !(debye > 0.0) || !(reference > 0.0) || !(residual >= 0.0) {
                return Err(CasimirError::Parse("gamma map parameters must be positive".into()));
            }
            Ok(GammaMap::with_residual(reference, debye, ev_to_rad_per_s(residual)))
        }
        other => Err(CasimirError::Parse(format!("unknown gamma map kind '{other}'"))),
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CasimirError::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(parse_length("100nm").unwrap(), 100e-9);
        assert_eq!(parse_length("1.5um").unwrap(), 1.5e-6);
        assert_eq!(parse_length("2 μm").unwrap(), 2e-6);
        assert_eq!(parse_length("3e-7").unwrap(), 3e-7);
        assert!(parse_length("-1nm").is_err());
        assert!(parse_length("abc").is_err());
    }

    #[test]
    fn grids() {
        let g = log_grid(1e-7, 1e-5, 3).unwrap();
        assert_eq!(g[0], 1e-7);
        assert!((g[1] - 1e-6).abs() < 1e-20);
        assert_eq!(g[2], 1e-5);
        assert!(log_grid(1e-7, 1e-5, 0).is_err());
        assert!(log_grid(1e-5, 1e-7, 5).is_err());
        assert_eq!(log_grid(1e-6, 1e-6, 1).unwrap(), vec![1e-6]);
    }

    #[test]
    fn table_rendering_is_stable() {
        let mut t = Table::new("demo", config_hash(&("a", 1)), vec![Column::new("x", "m"), Column::new("y", "Pa")]);
        t.push(vec![Cell::Num(1e-6), Cell::Num(f64::INFINITY)]);
        t.notes.push("hello".into());
        let csv = t.render(Format::Csv);
        assert!(csv.contains("# units: x [m], y [Pa]"));
        assert!(csv.ends_with("x,y\n1e-6,inf\n"));
        let j: Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(j["rows"][0]["y"], "inf");
        assert_eq!(t.render(Format::Json), t.render(Format::Json));
        assert_eq!(config_hash(&("a", 1)).len(), 64);
        assert_ne!(config_hash(&("a", 1)), config_hash(&("a", 2)));
    }

    #[test]
    fn geometry_files() {
        let text = r#"
[[body]]
shape = "sphere"
radius = 1e-4
density = 2500.0
[[body.coating]]
thickness = 1e-7
density = 19300.0

[[body]]
shape = "semispace"
density = 19300.0
"#;
        let c = parse_geometry(text).unwrap();
        assert!(matches!(c, Configuration::SpherePlate { .. }));
        assert!(parse_geometry("[[body]]\nshape = \"semispace\"\ndensity = 1.0\n").is_err());
        assert!(parse_geometry(&text.replace("density = 2500.0", "density = 2500.0\ncolour = 1")).is_err());
    }

    #[test]
    fn gamma_files() {
        let m = parse_gamma_map("kind = \"table\"\npoints = [[0.0, 0.0035], [300.0, 0.035]]\n").unwrap();
        assert!(matches!(m, GammaMap::Table { .. }));
        let bg = parse_gamma_map("kind = \"bloch-gruneisen\"\ndebye_t = 165.0\n").unwrap();
        assert!(matches!(bg, GammaMap::BlochGruneisenLike { residual, .. } if residual == 0.0));
        assert!(parse_gamma_map("kind = \"table\"\npoints = [[300.0, 0.035], [0.0, 0.0]]\n").is_err());
        assert!(parse_gamma_map("kind = 3").is_err());
        assert!(parse_gamma_map("kind = \"table\"\nextra = 1\n").is_err());
    }
}
