//! Brute-force Yukawa reference: nested Gauss quadrature over the body
//! volumes, independent of the library's closed forms.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use casimir::constants::G;
use gauss_quad::{FiniteAboveNegOneF64, GaussLaguerre, GaussLegendre};

/// Depth profile of a plate: `(start, end, density)`, depth from the
/// facing surface. `end = inf` for a semispace.
pub type Profile = Vec<(f64, f64, f64)>;

pub struct Oracle {
    legendre: GaussLegendre,
    laguerre: GaussLaguerre,
}

impl Default for Oracle {
    fn default() -> Self {
        Self {
            legendre: GaussLegendre::new(NonZeroUsize::new(96).unwrap()),
            laguerre: GaussLaguerre::new(NonZeroUsize::new(64).unwrap(), FiniteAboveNegOneF64::new(0.0).unwrap()),
        }
    }
}

impl Oracle {
    /// `∂/∂s` of the lateral integral `∫ d²ρ e^{-r/λ}/r`, `r² = ρ² + s²`,
    /// done numerically in `r` over `[s, ∞)`.
    pub fn lateral_derivative(&self, s: f64, lambda: f64) -> f64 {
        let inner = self.laguerre.integrate(|u| {
            let r = s + lambda * u;
            -s * (1.0 / (r * r) + 1.0 / (lambda * r))
        });
        2.0 * PI * lambda * (-s / lambda).exp() * inner
    }

    fn depth_integral(&self, profile: &Profile, lambda: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut total = 0.0;
        for &(a, b, rho) in profile {
            let b = b.min(a + 60.0 * lambda);
            total += rho * self.legendre.integrate(a, b, &mut f);
        }
        total
    }

    /// Pressure between two plates, Pa.
    pub fn plate_pressure(&self, z: f64, a: &Profile, b: &Profile, alpha: f64, lambda: f64) -> f64 {
        let v = self.depth_integral(a, lambda, |t1| {
            self.depth_integral(b, lambda, |t2| self.lateral_derivative(z + t1 + t2, lambda))
        });
        G * alpha * v
    }

    /// Force on a homogeneous sphere of radius `r` above a plate, N.
    pub fn sphere_force(&self, z: f64, r: f64, rho_sphere: f64, plate: &Profile, alpha: f64, lambda: f64) -> f64 {
        let span = (2.0 * r).min(60.0 * lambda);
        let v = self.legendre.integrate(0.0, span, |w| {
            let area = PI * (2.0 * r * w - w * w);
            area * self.depth_integral(plate, lambda, |t| self.lateral_derivative(z + w + t, lambda))
        });
        G * alpha * rho_sphere * v
    }
}
