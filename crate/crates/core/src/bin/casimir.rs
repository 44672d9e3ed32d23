use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map};
use sha2::{Digest, Sha256};

use casimir::constants::{ev_to_rad_per_s, rad_per_s_to_ev};
use casimir::geometry::{exact_cylinder_force, pft_force, sphere_pft_error_bar, GeometryCase, GeometryKind};
use casimir::io::{self, Cell, Column, Format, Table};
use casimir::lifshitz::{free_energy, EvaluationConfig};
use casimir::models::{GammaMap, MaterialResponse, ZeroFrequencyRule};
use casimir::optics::{Extrapolation, OpticalTable};
use casimir::presets::{self, Preset};
use casimir::thermo::{nernst_verdict_with, ScanSettings};
use casimir::yukawa::{exclusion_bound, ResidualBound};
use casimir::{CasimirError, Result};

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir and Yukawa force calculations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    format: OutputFormat,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative tolerance for the Lifshitz evaluation.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Free energy and pressure between two parallel plates over a z grid.
    Pressure(PlateArgs),
    /// Free energy between two parallel plates over a z grid.
    FreeEnergy(PlateArgs),
    /// Entropy scan toward T = 0 with a Nernst verdict.
    Entropy(EntropyArgs),
    /// Proximity-force estimate for a cylinder or sphere above a plate.
    Pft(PftArgs),
    /// Yukawa exclusion curve from a residual bound.
    Yukawa(YukawaArgs),
    /// Permittivity at imaginary frequency from an optical table.
    OpticsConvert(OpticsArgs),
}

#[derive(Args, Serialize)]
struct ModelArgs {
    /// ideal, drude, plasma, impedance-ir, impedance-skin or tabulated.
    #[arg(long)]
    model: Option<String>,
    /// Bundled preset name or a preset file.
    #[arg(long, default_value = "Au-paper")]
    preset: String,
    /// Override the l = 0 rule: ideal, drude, plasma, impedance-ir or dielectric:<eps0>.
    #[arg(long)]
    l0: Option<String>,
    /// Optical table (ω in eV, Im ε) for the tabulated model.
    #[arg(long)]
    optics: Option<PathBuf>,
    /// Static permittivity closing the optical table below its grid.
    #[arg(long)]
    eps0: Option<f64>,
}

#[derive(Args, Serialize)]
struct GridArgs {
    /// Explicit separations, comma separated (e.g. 1um,2um).
    #[arg(long, value_delimiter = ',')]
    z: Vec<String>,
    #[arg(long)]
    z_min: Option<String>,
    #[arg(long)]
    z_max: Option<String>,
    /// Number of log-spaced grid points.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Serialize)]
struct PlateArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Temperature in K.
    #[arg(long, default_value_t = 300.0)]
    temperature: f64,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Serialize)]
struct EntropyArgs {
    #[arg(long)]
    z: String,
    #[command(flatten)]
    model: ModelArgs,
    /// constant, perfect-lattice, residual:<fraction of γ(300 K)> or a TOML file.
    #[arg(long)]
    gamma_map: Option<String>,
    /// Debye temperature for the built-in maps, K.
    #[arg(long, default_value_t = 165.0)]
    debye_t: f64,
    #[arg(long, default_value_t = 300.0)]
    t_high: f64,
    #[arg(long)]
    t_low: Option<f64>,
    #[arg(long, default_value_t = 25)]
    points: usize,
    #[arg(long, default_value_t = 5)]
    fit_points: usize,
}

#[derive(Args, Serialize)]
struct PftArgs {
    /// cylinder or sphere.
    #[arg(long)]
    kind: String,
    /// Separations, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    z: Vec<String>,
    #[arg(long)]
    radius: String,
}

#[derive(Args, Serialize)]
struct YukawaArgs {
    /// Residual bound file: z in nm, Δ in mPa.
    #[arg(long)]
    bound: PathBuf,
    /// Geometry TOML with two [[body]] tables.
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    lambda_min: String,
    #[arg(long)]
    lambda_max: String,
    #[arg(long, default_value_t = 40)]
    points: usize,
}

#[derive(Args, Serialize)]
struct OpticsArgs {
    /// Optical table (ω in eV, Im ε); otherwise --preset.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    eps0: Option<f64>,
    /// Lowest imaginary frequency, eV.
    #[arg(long)]
    xi_min: Option<f64>,
    /// Highest imaginary frequency, eV.
    #[arg(long)]
    xi_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    points: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(msg) => {
                    eprintln!("casimir: {msg}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("casimir: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let format = match cli.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    let cfg = match cli.tol {
        Some(t) => EvaluationConfig::with_tolerance(t)?,
        None => EvaluationConfig::default(),
    };
    let table = match &cli.command {
        Command::Pressure(a) => plates(cli, a, &cfg, true)?,
        Command::FreeEnergy(a) => plates(cli, a, &cfg, false)?,
        Command::Entropy(a) => entropy(cli, a)?,
        Command::Pft(a) => pft(cli, a)?,
        Command::Yukawa(a) => yukawa(cli, a)?,
        Command::OpticsConvert(a) => optics_convert(cli, a)?,
    };
    Ok(table.render(format))
}

/// Hash of everything that determines the output: arguments (minus the
/// output path) and the contents of every input file.
fn run_hash(cli: &Cli, inputs: &[&Path]) -> Result<String> {
    let mut files = Map::new();
    for p in inputs {
        let bytes = std::fs::read(p).map_err(|e| CasimirError::Parse(format!("{}: {e}", p.display())))?;
        let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        files.insert(p.display().to_string(), json!(digest));
    }
    Ok(io::config_hash(&json!({
        "command": cli.command,
        "format": cli.format,
        "tol": cli.tol,
        "inputs": files,
        "version": env!("CARGO_PKG_VERSION"),
    })))
}

fn parse_rule(s: &str) -> Result<ZeroFrequencyRule> {
    match s {
        "ideal" => Ok(ZeroFrequencyRule::Ideal),
        "drude" => Ok(ZeroFrequencyRule::Drude),
        _ => match s.strip_prefix("dielectric:") {
            Some(v) => {
                let eps0: f64 = v
                    .parse()
                    .map_err(|_| CasimirError::Parse(format!("bad static permittivity in '{s}'")))?;
                Ok(ZeroFrequencyRule::Dielectric { eps0 })
            }
            None => Err(CasimirError::Parse(format!("unknown l = 0 rule '{s}'"))),
        },
    }
}

fn read_table(path: &Path, eps0: Option<f64>) -> Result<OpticalTable> {
    let text = io::read_text(path)?;
    let extrapolation = match eps0 {
        Some(eps0) => Extrapolation::ConstantEps { eps0 },
        None => Extrapolation::None,
    };
    let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into());
    OpticalTable::parse(&text, &name, extrapolation)
}

fn build_model(m: &ModelArgs) -> Result<(MaterialResponse, Vec<PathBuf>)> {
    let mut inputs = Vec::new();
    let preset = presets::resolve(&m.preset)?;
    if Path::new(&m.preset).is_file() {
        inputs.push(PathBuf::from(&m.preset));
    }
    let kind = m.model.clone().unwrap_or_else(|| match (&preset, &m.optics) {
        (Preset::Table { .. }, _) | (_, Some(_)) => "tabulated".into(),
        _ => "drude".into(),
    });
    let bulk = match kind.as_str() {
        "ideal" => MaterialResponse::IdealMetalSchwinger,
        "drude" => MaterialResponse::drude(preset.drude_parameters()?.clone()),
        "plasma" => MaterialResponse::plasma(preset.drude_parameters()?.omega_p)?,
        "impedance-ir" => MaterialResponse::ImpedanceInfraredOptics {
            omega_p: preset.drude_parameters()?.omega_p,
        },
        "impedance-skin" => MaterialResponse::ImpedanceSkinEffect(preset.drude_parameters()?.clone()),
        "tabulated" => match (&m.optics, &preset) {
            (Some(path), _) => {
                inputs.push(path.clone());
                MaterialResponse::TabulatedEps(Arc::new(read_table(path, m.eps0)?))
            }
            (None, Preset::Table { table, .. }) => MaterialResponse::TabulatedEps(table.clone()),
            (None, Preset::Drude { name, .. }) => {
                return Err(CasimirError::Parse(format!(
                    "tabulated model needs --optics or a tabulated preset, '{name}' is Drude"
                )))
            }
        },
        other => return Err(CasimirError::Parse(format!("unknown model '{other}'"))),
    };
    let model = match &m.l0 {
        None => bulk,
        Some(rule) => {
            let omega_p = || {
                preset
                    .drude_parameters()
                    .map(|p| p.omega_p)
                    .map_err(|_| CasimirError::Parse(format!("l = 0 rule '{rule}' needs a Drude preset")))
            };
            let rule = match rule.as_str() {
                "plasma" => ZeroFrequencyRule::Plasma { omega_p: omega_p()? },
                "impedance-ir" => ZeroFrequencyRule::ImpedanceInfrared { omega_p: omega_p()? },
                other => parse_rule(other)?,
            };
            MaterialResponse::mixed(bulk, rule)
        }
    };
    Ok((model, inputs))
}

fn z_grid(g: &GridArgs) -> Result<Vec<f64>> {
    if !g.z.is_empty() {
        if g.z_min.is_some() || g.z_max.is_some() || g.points.is_some() {
            return Err(CasimirError::Parse("give either --z or --z-min/--z-max/--points".into()));
        }
        return g.z.iter().map(|s| io::parse_length(s)).collect();
    }
    match (&g.z_min, &g.z_max, g.points) {
        (Some(a), Some(b), Some(n)) => io::log_grid(io::parse_length(a)?, io::parse_length(b)?, n),
        (Some(a), None, None) => Ok(vec![io::parse_length(a)?]),
        _ => Err(CasimirError::Parse(
            "empty separation grid: give --z or --z-min, --z-max and --points".into(),
        )),
    }
}

fn plates(cli: &Cli, a: &PlateArgs, cfg: &EvaluationConfig, with_pressure: bool) -> Result<Table> {
    let grid = z_grid(&a.grid)?;
    let (model, inputs) = build_model(&a.model)?;
    let inputs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
    let results = grid
        .par_iter()
        .map(|&z| free_energy(z, a.temperature, &model, cfg))
        .collect::<Result<Vec<_>>>()?;

    let mut columns = vec![Column::new("z", "m"), Column::new("free_energy", "J/m^2")];
    if with_pressure {
        columns.push(Column::new("pressure", "Pa"));
    }
    columns.extend([
        Column::new("terms_used", "1"),
        Column::new("zero_frequency_share", "1"),
        Column::new("error_estimate", "relative"),
    ]);
    let name = if with_pressure { "pressure" } else { "free-energy" };
    let mut t = Table::new(name, run_hash(cli, &inputs)?, columns);
    for r in &results {
        let mut row = vec![Cell::Num(r.z), Cell::Num(r.free_energy_per_area)];
        if with_pressure {
            row.push(Cell::Num(r.pressure));
        }
        row.extend([
            Cell::Int(r.terms_used),
            Cell::Num(r.zero_frequency_share),
            Cell::Num(r.quadrature_error_estimate),
        ]);
        t.push(row);
    }
    t.meta.insert("model".into(), json!(model.tag()));
    t.meta.insert("preset".into(), json!(a.model.preset));
    t.meta.insert("temperature_K".into(), json!(a.temperature));
    t.meta.insert("rel_tol".into(), json!(cfg.rel_tol));
    if results.iter().any(|r| r.mixed_prescription) {
        t.notes.push("mixed prescription: l = 0 rule differs from the bulk model".into());
    }
    if results.iter().any(|r| r.euler_maclaurin_tail) {
        t.notes.push("Matsubara tail summed by the Euler-Maclaurin formula".into());
    }
    Ok(t)
}

fn gamma_map(a: &EntropyArgs, model: &MaterialResponse) -> Result<(Option<GammaMap>, Vec<PathBuf>)> {
    let Some(spec) = &a.gamma_map else {
        return Ok((None, Vec::new()));
    };
    let reference_gamma = || {
        model
            .drude_parameters()
            .map(|p| p.gamma)
            .ok_or_else(|| CasimirError::Parse(format!("gamma map '{spec}' needs a Drude-like model")))
    };
    let map = match spec.as_str() {
        "constant" => GammaMap::Constant,
        "perfect-lattice" => GammaMap::perfect_lattice(300.0, a.debye_t),
        s => match s.strip_prefix("residual:") {
            Some(frac) => {
                let f: f64 = frac
                    .parse()
                    .map_err(|_| CasimirError::Parse(format!("bad residual fraction in '{s}'")))?;
                if !(0.0..=1.0).contains(&f) {
                    return Err(CasimirError::Parse(format!("residual fraction must lie in [0, 1], got {f}")));
                }
                GammaMap::with_residual(300.0, a.debye_t, f * reference_gamma()?)
            }
            None => {
                let path = PathBuf::from(s);
                let map = io::parse_gamma_map(&io::read_text(&path)?)?;
                return Ok((Some(map), vec![path]));
            }
        },
    };
    Ok((Some(map), Vec::new()))
}

fn entropy(cli: &Cli, a: &EntropyArgs) -> Result<Table> {
    let z = io::parse_length(&a.z)?;
    let (model, mut inputs) = build_model(&a.model)?;
    let (map, more) = gamma_map(a, &model)?;
    inputs.extend(more);
    let settings = ScanSettings {
        t_high: a.t_high,
        t_low: a.t_low,
        points: a.points,
        fit_points: a.fit_points,
        ..ScanSettings::default()
    };
    let scan = nernst_verdict_with(&model, z, map, &settings)?;

    let inputs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
    let mut t = Table::new(
        "entropy",
        run_hash(cli, &inputs)?,
        vec![
            Column::new("temperature", "K"),
            Column::new("entropy", "J/(K m^2)"),
            Column::new("converged", "bool"),
        ],
    );
    for ((&temp, &s), &ok) in scan.temperatures.iter().zip(&scan.entropies).zip(&scan.converged) {
        t.push(vec![Cell::Num(temp), Cell::Num(s), Cell::Bool(ok)]);
    }
    t.meta.insert("verdict".into(), json!(scan.verdict.as_str()));
    t.meta.insert("z_m".into(), json!(scan.z));
    t.meta.insert("prescription".into(), json!(scan.prescription));
    t.meta.insert("gamma_map".into(), serde_json::to_value(&scan.gamma_map).expect("serializes"));
    t.meta.insert("entropy_at_zero".into(), json!(scan.extrapolated));
    t.meta.insert("uncertainty".into(), json!(scan.uncertainty));
    t.meta.insert("fit_degree".into(), json!(scan.fit_degree));
    Ok(t)
}

fn pft(cli: &Cli, a: &PftArgs) -> Result<Table> {
    let kind = GeometryKind::parse(&a.kind)?;
    let radius = io::parse_length(&a.radius)?;
    let zs = a.z.iter().map(|s| io::parse_length(s)).collect::<Result<Vec<_>>>()?;
    let unit = match kind {
        GeometryKind::CylinderPlate => "N/m",
        _ => "N",
    };
    let mut t = Table::new(
        "pft",
        run_hash(cli, &[])?,
        vec![
            Column::new("kind", "-"),
            Column::new("z", "m"),
            Column::new("radius", "m"),
            Column::new("pft", unit),
            Column::new("exact", unit),
            Column::new("relative_error", "1"),
            Column::new("valid", "bool"),
            Column::new("note", "-"),
        ],
    );
    for z in zs {
        let case = GeometryCase::new(kind, z, Some(radius))?;
        let force = pft_force(&case)?;
        let (exact, rel, note) = match kind {
            GeometryKind::CylinderPlate => {
                let c = exact_cylinder_force(z, radius)?;
                (Cell::Num(c.value), Cell::Num(c.relative_deviation), String::new())
            }
            _ => (
                Cell::Empty,
                Cell::Empty,
                format!(
                    "exact electromagnetic result not available; PFT error bar ~ z/R = {}",
                    io::format_number(sphere_pft_error_bar(&case))
                ),
            ),
        };
        t.push(vec![
            Cell::Text(kind.as_str().into()),
            Cell::Num(z),
            Cell::Num(radius),
            Cell::Num(force),
            exact,
            rel,
            Cell::Bool(case.asymptotics_valid()),
            Cell::Text(note),
        ]);
    }
    Ok(t)
}

fn yukawa(cli: &Cli, a: &YukawaArgs) -> Result<Table> {
    let name = a.bound.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let bound = ResidualBound::from_csv(&io::read_text(&a.bound)?, name)?;
    let configuration = io::parse_geometry(&io::read_text(&a.geometry)?)?;
    let lambdas = io::log_grid(io::parse_length(&a.lambda_min)?, io::parse_length(&a.lambda_max)?, a.points)?;
    let curve = exclusion_bound(&bound, &configuration, &lambdas)?;
    let mut t = Table::new(
        "yukawa",
        run_hash(cli, &[&a.bound, &a.geometry])?,
        vec![Column::new("lambda", "m"), Column::new("alpha_max", "1")],
    );
    for (&l, &alpha) in curve.lambda.iter().zip(&curve.alpha_max) {
        t.push(vec![Cell::Num(l), Cell::Num(alpha)]);
    }
    t.meta.insert("configuration".into(), json!(curve.configuration));
    t.meta.insert("bound".into(), json!(curve.bound));
    if curve.alpha_max.iter().any(|v| v.is_infinite()) {
        t.notes.push("alpha_max = inf where no bound point constrains the coupling".into());
    }
    Ok(t)
}

fn optics_convert(cli: &Cli, a: &OpticsArgs) -> Result<Table> {
    let (table, inputs): (Arc<OpticalTable>, Vec<&Path>) = match (&a.table, &a.preset) {
        (Some(path), None) => (Arc::new(read_table(path, a.eps0)?), vec![path.as_path()]),
        (None, Some(name)) => match presets::resolve(name)? {
            Preset::Table { table, .. } => (table, Vec::new()),
            Preset::Drude { name, .. } => {
                return Err(CasimirError::Parse(format!("preset '{name}' is not tabulated")))
            }
        },
        _ => return Err(CasimirError::Parse("give exactly one of --table or --preset".into())),
    };
    let w = table.omega();
    let lo = a.xi_min.map_or(w[0], ev_to_rad_per_s);
    let hi = a.xi_max.map_or(w[w.len() - 1], ev_to_rad_per_s);
    let grid = io::log_grid(lo, hi, a.points)?;
    let eps = grid.par_iter().map(|&xi| table.eps_at(xi)).collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(
        "optics-convert",
        run_hash(cli, &inputs)?,
        vec![Column::new("xi", "rad/s"), Column::new("xi_ev", "eV"), Column::new("eps", "1")],
    );
    for (&xi, &e) in grid.iter().zip(&eps) {
        t.push(vec![Cell::Num(xi), Cell::Num(rad_per_s_to_ev(xi)), Cell::Num(e)]);
    }
    t.meta.insert("provenance".into(), json!(table.provenance));
    t.meta.insert("extrapolation".into(), serde_json::to_value(table.extrapolation).expect("serializes"));
    Ok(t)
}
