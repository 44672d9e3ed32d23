//! Ideal-metal Casimir forces for plate, cylinder and sphere configurations,
//! with the proximity-force approximation (PFT) and its leading correction.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{C, HBAR};
use crate::error::{domain, CasimirError, Result};

/// Beyond this `z/R` the asymptotic expressions are flagged.
pub const VALIDITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryKind {
    PlatePlate,
    CylinderPlate,
    SpherePlate,
}

impl GeometryKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "plate-plate" | "plate" => Ok(Self::PlatePlate),
            "cylinder-plate" | "cylinder" => Ok(Self::CylinderPlate),
            "sphere-plate" | "sphere" => Ok(Self::SpherePlate),
            _ => Err(CasimirError::Parse(format!("unknown geometry '{s}'"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PlatePlate => "plate-plate",
            Self::CylinderPlate => "cylinder-plate",
            Self::SpherePlate => "sphere-plate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryCase {
    pub kind: GeometryKind,
    pub z: f64,
    pub radius: Option<f64>,
}

impl GeometryCase {
    pub fn new(kind: GeometryKind, z: f64, radius: Option<f64>) -> Result<Self> {
        if !(z > 0.0) || !z.is_finite() {
            return domain(format!("separation must be positive, got {z}"));
        }
        match (kind, radius) {
            (GeometryKind::PlatePlate, None) => {}
            (GeometryKind::PlatePlate, Some(_)) => return domain("plate-plate takes no radius"),
            (_, Some(r)) if r > 0.0 && r.is_finite() => {}
            (_, Some(r)) => return domain(format!("radius must be positive, got {r}")),
            (_, None) => return domain(format!("{} needs a radius", kind.as_str())),
        }
        Ok(Self { kind, z, radius })
    }

    pub fn plate(z: f64) -> Result<Self> {
        Self::new(GeometryKind::PlatePlate, z, None)
    }

    pub fn cylinder(z: f64, radius: f64) -> Result<Self> {
        Self::new(GeometryKind::CylinderPlate, z, Some(radius))
    }

    pub fn sphere(z: f64, radius: f64) -> Result<Self> {
        Self::new(GeometryKind::SpherePlate, z, Some(radius))
    }

    /// `z/R`, zero for plates.
    pub fn aspect(&self) -> f64 {
        self.radius.map_or(0.0, |r| self.z / r)
    }

    /// False when `z/R` exceeds [`VALIDITY_LIMIT`].
    pub fn asymptotics_valid(&self) -> bool {
        self.aspect() <= VALIDITY_LIMIT
    }
}

/// `−π² ħc / (240 z⁴)`.
pub fn ideal_plate_pressure(z: f64) -> f64 {
    -PI * PI * HBAR * C / (240.0 * z.powi(4))
}

/// `−π² ħc / (720 z³)`.
pub fn ideal_plate_energy(z: f64) -> f64 {
    -PI * PI * HBAR * C / (720.0 * z.powi(3))
}

/// PFT force: N per unit length for a cylinder, N for a sphere.
pub fn pft_force(case: &GeometryCase) -> Result<f64> {
    let z = case.z;
    match (case.kind, case.radius) {
        (GeometryKind::CylinderPlate, Some(r)) => {
            Ok(-PI.powi(3) / (384.0 * 2f64.sqrt()) * (r / z).sqrt() * HBAR * C / z.powi(3))
        }
        (GeometryKind::SpherePlate, Some(r)) => Ok(-PI.powi(3) / 360.0 * HBAR * C * r / z.powi(3)),
        _ => Err(CasimirError::UnsupportedGeometry(
            "the proximity force approximation needs a curved body".into(),
        )),
    }
}

/// `dF/dz` of the PFT force, analytic.
pub fn pft_force_gradient(case: &GeometryCase) -> Result<f64> {
    let f = pft_force(case)?;
    let exponent = match case.kind {
        GeometryKind::CylinderPlate => -3.5,
        _ => -3.0,
    };
    Ok(exponent * f / case.z)
}

/// `(3/5)(20/(3π²) − 7/36)`.
pub fn cylinder_correction_coefficient() -> f64 {
    0.6 * (20.0 / (3.0 * PI * PI) - 7.0 / 36.0)
}

/// Exact cylinder-plate force to first order in `z/R`, N/m.
pub fn exact_cylinder_force(z: f64, radius: f64) -> Result<CylinderForce> {
    let case = GeometryCase::cylinder(z, radius)?;
    let pft = pft_force(&case)?;
    let aspect = case.aspect();
    let value = pft * (1.0 - cylinder_correction_coefficient() * aspect);
    Ok(CylinderForce {
        value,
        pft,
        relative_deviation: (value - pft) / pft,
        valid: case.asymptotics_valid(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderForce {
    /// N/m.
    pub value: f64,
    pub pft: f64,
    /// `(F_exact − F_PFT)/F_PFT`.
    pub relative_deviation: f64,
    pub valid: bool,
}

/// Relative PFT errors per unit `z/R` for the cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PftErrorCoefficients {
    pub force: f64,
    pub energy: f64,
    pub ratio: f64,
}

pub fn pft_error_coefficients() -> PftErrorCoefficients {
    let force = -0.288618;
    let energy = -0.48103;
    PftErrorCoefficients {
        force,
        energy,
        ratio: energy / force,
    }
}

/// Equivalent plate pressure from a sphere-plate force gradient.
pub fn pressure_from_gradient(d_f_dz: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return domain(format!("radius must be positive, got {radius}"));
    }
    Ok(-d_f_dz / (2.0 * PI * radius))
}

/// Conservative relative error bar on the sphere-plate PFT value.
pub fn sphere_pft_error_bar(case: &GeometryCase) -> f64 {
    case.aspect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plate_pressure() {
        let p = ideal_plate_pressure(1e-6);
        assert!((p + 1.3e-3).abs() < 0.01e-3, "{p}");
        assert!((ideal_plate_pressure(1e-6) / ideal_plate_pressure(2e-6) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn pft_examples() {
        let s = GeometryCase::sphere(100e-9, 100e-6).unwrap();
        let f = pft_force(&s).unwrap();
        let direct = -PI.powi(3) / 360.0 * HBAR * C * 1e-4 / 1e-21;
        assert!(((f - direct) / direct).abs() < 1e-15);
        assert!((f + 2.72e-10).abs() < 0.01e-10, "{f:e}");
        let e = 2.0 * PI * 100e-6 * ideal_plate_energy(100e-9);
        assert!(((f - e) / e).abs() < 1e-14);

        let c1 = pft_force(&GeometryCase::cylinder(1e-7, 1e-4).unwrap()).unwrap();
        let c2 = pft_force(&GeometryCase::cylinder(2e-7, 1e-4).unwrap()).unwrap();
        assert!((c1 / c2 - 2f64.powf(3.5)).abs() < 1e-12);

        assert!(matches!(
            pft_force(&GeometryCase::plate(1e-7).unwrap()),
            Err(CasimirError::UnsupportedGeometry(_))
        ));
    }

    #[test]
    fn cylinder_correction() {
        assert!((cylinder_correction_coefficient() - 0.288618).abs() < 1e-6);
        let c = exact_cylinder_force(100e-9, 100e-6).unwrap();
        assert!((c.relative_deviation + 2.886e-4).abs() < 1e-6);
        assert!(c.valid);
        let tiny = exact_cylinder_force(1e-12, 1.0).unwrap();
        assert!((tiny.value / tiny.pft - 1.0).abs() < 1e-11);
        assert!(!exact_cylinder_force(2e-6, 1e-5).unwrap().valid);
        for i in 1..=100 {
            let aspect = 1e-3 * i as f64;
            let c = exact_cylinder_force(aspect, 1.0).unwrap();
            assert!(c.value.abs() < c.pft.abs());
            let expect = -0.288618 * aspect;
            assert!((c.relative_deviation - expect).abs() <= 1e-6 * aspect);
        }
    }

    #[test]
    fn coefficients() {
        let k = pft_error_coefficients();
        assert!((k.ratio - 1.6667).abs() < 1e-3);
        assert!((k.energy - k.force * 5.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn gradient_recovers_plate_pressure() {
        assert_eq!(pressure_from_gradient(0.0, 1e-4).unwrap(), 0.0);
        let r = 1e-4;
        assert!((pressure_from_gradient(2.0 * PI * r, r).unwrap() + 1.0).abs() < 1e-15);
        for &z in &[1e-8, 1e-7, 1e-6] {
            let s = GeometryCase::sphere(z, r).unwrap();
            let p = pressure_from_gradient(pft_force_gradient(&s).unwrap(), r).unwrap();
            let expect = ideal_plate_pressure(z);
            assert!(((p - expect) / expect).abs() < 1e-12);
        }
        assert!(pressure_from_gradient(1.0, 0.0).is_err());
    }

    #[test]
    fn validity_flag_and_error_bar() {
        let s = GeometryCase::sphere(2e-6, 1e-5).unwrap();
        assert!(!s.asymptotics_valid());
        assert!((sphere_pft_error_bar(&s) - 0.2).abs() < 1e-15);
        assert!(GeometryCase::sphere(1e-6, -1.0).is_err());
        assert!(GeometryCase::new(GeometryKind::CylinderPlate, 1e-6, None).is_err());
    }
}
