//! Bundled material presets (versioned data directory `data/presets-v1`).

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{CasimirError, Result};
use crate::models::DrudeParameters;
use crate::optics::{Extrapolation, OpticalTable};

pub const PRESET_FORMAT_VERSION: u32 = 1;

const PRESETS_TOML: &str = include_str!("../data/presets-v1/presets.toml");
const SI_STATIC_TABLE: &str = include_str!("../data/presets-v1/si-static.txt");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetFile {
    preset: Vec<PresetEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetEntry {
    name: String,
    kind: String,
    omega_p_ev: Option<f64>,
    gamma_ev: Option<f64>,
    table: Option<String>,
    extrapolation: Option<String>,
    eps0: Option<f64>,
    #[allow(dead_code)]
    note: Option<String>,
}

/// A named material.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Drude { name: String, params: DrudeParameters },
    Table { name: String, table: Arc<OpticalTable> },
}

impl Preset {
    pub fn name(&self) -> &str {
        match self {
            Preset::Drude { name, .. } | Preset::Table { name, .. } => name,
        }
    }

    pub fn drude_parameters(&self) -> Result<&DrudeParameters> {
        match self {
            Preset::Drude { params, .. } => Ok(params),
            Preset::Table { name, .. } => Err(CasimirError::Parse(format!(
                "preset '{name}' is tabulated and has no Drude parameters"
            ))),
        }
    }
}

fn bundled_table(file: &str) -> Result<&'static str> {
    match file {
        "si-static.txt" => Ok(SI_STATIC_TABLE),
        other => Err(CasimirError::Parse(format!("preset table '{other}' is not bundled"))),
    }
}

fn build(entry: PresetEntry, load_table: &dyn Fn(&str) -> Result<String>) -> Result<Preset> {
    let missing = |field: &str| CasimirError::Parse(format!("preset '{}' lacks '{field}'", entry.name));
    match entry.kind.as_str() {
        "drude" => {
            let wp = entry.omega_p_ev.ok_or_else(|| missing("omega_p_ev"))?;
            let g = entry.gamma_ev.ok_or_else(|| missing("gamma_ev"))?;
            Ok(Preset::Drude {
                params: DrudeParameters::from_ev(wp, g)?,
                name: entry.name,
            })
        }
        "table" => {
            let file = entry.table.as_deref().ok_or_else(|| missing("table"))?;
            let extrapolation = match entry.extrapolation.as_deref() {
                Some("constant-eps") => Extrapolation::ConstantEps {
                    eps0: entry.eps0.ok_or_else(|| missing("eps0"))?,
                },
                Some("none") | None => Extrapolation::None,
                Some(other) => {
                    return Err(CasimirError::Parse(format!("unknown preset extrapolation '{other}'")))
                }
            };
            let table = OpticalTable::parse(&load_table(file)?, &entry.name, extrapolation)?;
            Ok(Preset::Table {
                name: entry.name,
                table: Arc::new(table),
            })
        }
        other => Err(CasimirError::Parse(format!("unknown preset kind '{other}'"))),
    }
}

/// All bundled presets in file order.
pub fn all() -> Result<Vec<Preset>> {
    let file: PresetFile =
        toml::from_str(PRESETS_TOML).map_err(|e| CasimirError::Parse(format!("presets.toml: {e}")))?;
    file.preset
        .into_iter()
        .map(|e| build(e, &|f| bundled_table(f).map(str::to_string)))
        .collect()
}

/// Presets from a user file in the bundled format; table paths are
/// relative to the file.
pub fn load_file(path: &Path) -> Result<Vec<Preset>> {
    let text = std::fs::read_to_string(path).map_err(|e| CasimirError::Parse(format!("{}: {e}", path.display())))?;
    let file: PresetFile =
        toml::from_str(&text).map_err(|e| CasimirError::Parse(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let load = |f: &str| {
        let p = dir.join(f);
        std::fs::read_to_string(&p).map_err(|e| CasimirError::Parse(format!("{}: {e}", p.display())))
    };
    file.preset.into_iter().map(|e| build(e, &load)).collect()
}

/// A bundled preset by name, or the first preset of a file when `spec`
/// names an existing path.
pub fn resolve(spec: &str) -> Result<Preset> {
    let path = Path::new(spec);
    if path.is_file() {
        return load_file(path)?
            .into_iter()
            .next()
            .ok_or_else(|| CasimirError::Parse(format!("{spec}: no presets")));
    }
    lookup(spec)
}

pub fn names() -> Vec<String> {
    all().map(|v| v.iter().map(|p| p.name().to_string()).collect()).unwrap_or_default()
}

pub fn lookup(name: &str) -> Result<Preset> {
    all()?
        .into_iter()
        .find(|p| p.name().eq_ignore_ascii_case(name))
        .ok_or_else(|| CasimirError::Parse(format!("unknown preset '{name}' (known: {})", names().join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::rad_per_s_to_ev;

    #[test]
    fn au_presets() {
        let p = lookup("Au-paper").unwrap();
        let d = p.drude_parameters().unwrap();
        assert!((rad_per_s_to_ev(d.omega_p) - 9.0).abs() < 1e-12);
        assert!((rad_per_s_to_ev(d.gamma) - 0.035).abs() < 1e-12);
        let r = lookup("au-resistivity").unwrap();
        let d = r.drude_parameters().unwrap();
        assert!((rad_per_s_to_ev(d.omega_p) - 8.9).abs() < 1e-12);
        assert!((rad_per_s_to_ev(d.gamma) - 0.0357).abs() < 1e-12);
        assert!(lookup("Cu").is_err());
    }

    #[test]
    fn user_file_overrides() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("t.txt"), "0.1 1.0\n1.0 0.5\n10.0 0.01\n").unwrap();
        let p = dir.path().join("mine.toml");
        std::fs::write(
            &p,
            "[[preset]]\nname = \"Au-paper\"\nkind = \"drude\"\nomega_p_ev = 7.0\ngamma_ev = 0.05\n\n[[preset]]\nname = \"glass\"\nkind = \"table\"\ntable = \"t.txt\"\nextrapolation = \"constant-eps\"\neps0 = 4.0\n",
        )
        .unwrap();
        let all = load_file(&p).unwrap();
        assert_eq!(all.len(), 2);
        let first = resolve(p.to_str().unwrap()).unwrap();
        assert!((rad_per_s_to_ev(first.drude_parameters().unwrap().omega_p) - 7.0).abs() < 1e-12);
        assert!(matches!(&all[1], Preset::Table { .. }));
        assert!(resolve("Au-paper").is_ok());
        std::fs::write(&p, "[[preset]]\nname = \"x\"\nkind = \"drude\"\nbogus = 1\n").unwrap();
        assert!(load_file(&p).is_err());
    }

    #[test]
    fn si_static_limit() {
        let Preset::Table { table, .. } = lookup("Si-static").unwrap() else {
            panic!("Si-static should be tabulated")
        };
        let w0 = table.omega()[0];
        let eps = table.eps_at(1e-6 * w0).unwrap();
        assert!((eps - 11.66).abs() < 1e-6, "{eps}");
        let high = table.eps_at(1e3 * w0).unwrap();
        assert!((1.0..1.1).contains(&high));
    }
}
