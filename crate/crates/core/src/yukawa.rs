//! Yukawa-type corrections to Newtonian gravity between Casimir test bodies
//! and the exclusion bounds they imply.
//!
//! Only the `α e^{-r/λ}` part of the pair potential is integrated. A plate
//! at height `x` above its surface feels, per unit mass,
//! `V(x) = −2πGαλ Φ e^{-x/λ}` with the form factor
//! `Φ = ∫ ρ(x′) e^{-x′/λ} dx′` taken over the plate depth. Layered bodies are
//! superpositions of homogeneous pieces.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::G;
use crate::error::{domain, CasimirError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YukawaParams {
    pub alpha: f64,
    /// m.
    pub lambda: f64,
}

impl YukawaParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return domain(format!("Yukawa range must be positive, got {lambda}"));
        }
        if !alpha.is_finite() {
            return domain("Yukawa strength must be finite");
        }
        Ok(Self { alpha, lambda })
    }
}

/// `−G m₁ m₂ (1 + α e^{-r/λ}) / r`.
pub fn yukawa_potential(r: f64, m1: f64, m2: f64, p: &YukawaParams) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("distance must be positive, got {r}"));
    }
    Ok(-G * m1 * m2 * (1.0 + p.alpha * (-r / p.lambda).exp()) / r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Layer {
    /// m.
    pub thickness: f64,
    /// kg/m³.
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    SemispacePlate,
    FiniteSlab { thickness: f64 },
    Sphere { radius: f64 },
}

/// A test body: bulk shape and density plus coatings listed outermost first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BodySpec {
    pub shape: Shape,
    pub density: f64,
    pub coatings: Vec<Layer>,
}

impl BodySpec {
    pub fn new(shape: Shape, density: f64, coatings: Vec<Layer>) -> Result<Self> {
        let body = Self {
            shape,
            density,
            coatings,
        };
        body.validate()?;
        Ok(body)
    }

    pub fn semispace(density: f64) -> Result<Self> {
        Self::new(Shape::SemispacePlate, density, Vec::new())
    }

    pub fn slab(thickness: f64, density: f64) -> Result<Self> {
        Self::new(Shape::FiniteSlab { thickness }, density, Vec::new())
    }

    pub fn sphere(radius: f64, density: f64) -> Result<Self> {
        Self::new(Shape::Sphere { radius }, density, Vec::new())
    }

    pub fn with_coating(mut self, thickness: f64, density: f64) -> Result<Self> {
        self.coatings.push(Layer { thickness, density });
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.density) {
            return domain(format!("density must be positive, got {}", self.density));
        }
        for l in &self.coatings {
            if !positive(l.thickness) || !positive(l.density) {
                return domain("coating thickness and density must be positive");
            }
        }
        match self.shape {
            Shape::SemispacePlate => {}
            Shape::FiniteSlab { thickness } if positive(thickness) => {}
            Shape::FiniteSlab { thickness } => return domain(format!("slab thickness must be positive, got {thickness}")),
            Shape::Sphere { radius } if positive(radius) => {
                let total: f64 = self.coatings.iter().map(|l| l.thickness).sum();
                if total >= radius {
                    return domain("sphere coatings must be thinner than the radius");
                }
            }
            Shape::Sphere { radius } => return domain(format!("sphere radius must be positive, got {radius}")),
        }
        Ok(())
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.shape, Shape::Sphere { .. })
    }

    /// `∫ ρ(x) e^{-x/λ} dx` over the depth of a plate, kg/m².
    pub fn plate_form_factor(&self, lambda: f64) -> Result<f64> {
        let mut depth = 0.0;
        let mut phi = 0.0;
        for l in &self.coatings {
            phi += l.density * lambda * (-depth / lambda).exp() * -(-l.thickness / lambda).exp_m1();
            depth += l.thickness;
        }
        let top = (-depth / lambda).exp();
        phi += match self.shape {
            Shape::SemispacePlate => self.density * lambda * top,
            Shape::FiniteSlab { thickness } => self.density * lambda * top * -(-thickness / lambda).exp_m1(),
            Shape::Sphere { .. } => {
                return Err(CasimirError::UnsupportedGeometry("a sphere is not a plate".into()));
            }
        };
        Ok(phi)
    }

    /// `Σ_j Δρ_j Ψ(R_j) e^{-(R − R_j)/λ}` over concentric balls, kg·m.
    fn sphere_form_factor(&self, lambda: f64) -> Result<(f64, f64)> {
        let Shape::Sphere { radius } = self.shape else {
            return Err(CasimirError::UnsupportedGeometry("body is not a sphere".into()));
        };
        let psi = |r: f64| 2.0 * PI * lambda * lambda * (r - lambda + (r + lambda) * (-2.0 * r / lambda).exp());
        let mut outer_density = 0.0;
        let mut r = radius;
        let mut sum = 0.0;
        let densities = self.coatings.iter().map(|l| (l.thickness, l.density));
        for (thickness, density) in densities.chain(std::iter::once((0.0, self.density))) {
            sum += (density - outer_density) * psi(r) * (-(radius - r) / lambda).exp();
            outer_density = density;
            r -= thickness;
        }
        Ok((sum, radius))
    }
}

/// Yukawa energy per unit area between two plates, J/m².
pub fn yukawa_energy_plates(z: f64, a: &BodySpec, b: &BodySpec, p: &YukawaParams) -> Result<f64> {
    check_z(z)?;
    let phi = a.plate_form_factor(p.lambda)? * b.plate_form_factor(p.lambda)?;
    Ok(-2.0 * PI * G * p.alpha * p.lambda * phi * (-z / p.lambda).exp())
}

/// Yukawa pressure between two plates, Pa (negative for attraction).
pub fn yukawa_pressure_plates(z: f64, a: &BodySpec, b: &BodySpec, p: &YukawaParams) -> Result<f64> {
    check_z(z)?;
    let phi = a.plate_form_factor(p.lambda)? * b.plate_form_factor(p.lambda)?;
    Ok(-2.0 * PI * G * p.alpha * phi * (-z / p.lambda).exp())
}

/// Yukawa force between a sphere and a plate at closest separation `z`, N.
pub fn yukawa_force_sphere_plate(z: f64, sphere: &BodySpec, plate: &BodySpec, p: &YukawaParams) -> Result<f64> {
    check_z(z)?;
    let (s, _) = sphere.sphere_form_factor(p.lambda)?;
    let phi = plate.plate_form_factor(p.lambda)?;
    Ok(-2.0 * PI * G * p.alpha * phi * s * (-z / p.lambda).exp())
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("separation must be positive, got {z}"));
    }
    Ok(())
}

/// Test-body pair for an exclusion analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Configuration {
    PlatePlate { a: BodySpec, b: BodySpec },
    /// The bound constrains the equivalent pressure `−(1/2πR) ∂F/∂z`.
    SpherePlate { sphere: BodySpec, plate: BodySpec },
}

impl Configuration {
    pub fn new(first: BodySpec, second: BodySpec) -> Result<Self> {
        match (first.is_sphere(), second.is_sphere()) {
            (false, false) => Ok(Self::PlatePlate { a: first, b: second }),
            (true, false) => Ok(Self::SpherePlate {
                sphere: first,
                plate: second,
            }),
            (false, true) => Ok(Self::SpherePlate {
                sphere: second,
                plate: first,
            }),
            (true, true) => Err(CasimirError::UnsupportedGeometry("sphere-sphere is not supported".into())),
        }
    }

    /// Hypothetical pressure (or equivalent pressure) at `α = p.alpha`.
    pub fn pressure(&self, z: f64, p: &YukawaParams) -> Result<f64> {
        match self {
            Self::PlatePlate { a, b } => yukawa_pressure_plates(z, a, b, p),
            Self::SpherePlate { sphere, plate } => {
                let f = yukawa_force_sphere_plate(z, sphere, plate, p)?;
                let Shape::Sphere { radius } = sphere.shape else { unreachable!() };
                // F ∝ e^{-z/λ}, so ∂F/∂z = −F/λ
                Ok(f / (2.0 * PI * radius * p.lambda))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::PlatePlate { .. } => "plate-plate".into(),
            Self::SpherePlate { .. } => "sphere-plate".into(),
        }
    }
}

/// Half-widths `Δ_tot(z)` of the confidence interval on `P_th − P_exp`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualBound {
    /// m, strictly increasing.
    pub z: Vec<f64>,
    /// Pa, positive.
    pub delta: Vec<f64>,
    pub provenance: String,
}

impl ResidualBound {
    pub fn new(z: Vec<f64>, delta: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if z.is_empty() || z.len() != delta.len() {
            return Err(CasimirError::Parse("residual bound needs matching, nonempty columns".into()));
        }
        if z.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(CasimirError::Parse("residual bound separations must be positive".into()));
        }
        if z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CasimirError::Parse("residual bound separations must be strictly increasing".into()));
        }
        if delta.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(CasimirError::Parse("residual bound half-widths must be positive".into()));
        }
        Ok(Self {
            z,
            delta,
            provenance: provenance.into(),
        })
    }

    /// Two columns: `z` in nm and `Δ_tot` in mPa; `#` starts a comment.
    pub fn from_csv(text: &str, provenance: impl Into<String>) -> Result<Self> {
        let mut z = Vec::new();
        let mut delta = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            let parsed: Vec<f64> = cols.iter().filter_map(|c| c.parse().ok()).collect();
            if parsed.len() != 2 || cols.len() != 2 {
                if z.is_empty() && parsed.is_empty() {
                    // header row
                    continue;
                }
                return Err(CasimirError::Parse(format!("line {}: expected 'z_nm, delta_mPa'", n + 1)));
            }
            z.push(parsed[0] * 1e-9);
            delta.push(parsed[1] * 1e-3);
        }
        Self::new(z, delta, provenance)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.z.clone(),
            self.delta.iter().map(|d| d * factor).collect(),
            format!("{} x{factor}", self.provenance),
        )
    }
}

/// Largest `|α|` compatible with the bound at each `λ`; `∞` where no grid
/// point constrains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionCurve {
    pub lambda: Vec<f64>,
    pub alpha_max: Vec<f64>,
    pub bound: String,
    pub configuration: String,
}

pub fn exclusion_bound(bound: &ResidualBound, configuration: &Configuration, lambdas: &[f64]) -> Result<ExclusionCurve> {
    if lambdas.is_empty() {
        return domain("lambda grid is empty");
    }
    let mut alpha_max = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let unit = YukawaParams::new(1.0, lambda)?;
        let mut best = f64::INFINITY;
        for (&z, &d) in bound.z.iter().zip(&bound.delta) {
            let p = configuration.pressure(z, &unit)?.abs();
            if p > 0.0 && p.is_finite() {
                best = best.min(d / p);
            }
        }
        alpha_max.push(best);
    }
    Ok(ExclusionCurve {
        lambda: lambdas.to_vec(),
        alpha_max,
        bound: bound.provenance.clone(),
        configuration: configuration.describe(),
    })
}
