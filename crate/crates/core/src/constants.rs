//! CODATA 2018 constants and the electron-volt conversion point.
//!
//! Everything inside the library is SI. Electron-volt values enter only
//! through [`ev_to_rad_per_s`] and leave through [`rad_per_s_to_ev`].

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Newtonian constant of gravitation, m³/(kg·s²).
pub const G: f64 = 6.674_30e-11;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Angular frequency corresponding to 1 eV, rad/s (e/ħ).
pub const EV_TO_RAD_PER_S: f64 = ELEMENTARY_CHARGE / HBAR;

/// ζ(3), Apéry's constant.
pub const ZETA3: f64 = 1.202_056_903_159_594_2;

/// Bundle of the constants for callers that prefer a value type.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
    pub g: f64,
    pub ev_to_rad_per_s: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: Self = Self {
        hbar: HBAR,
        c: C,
        k_b: K_B,
        g: G,
        ev_to_rad_per_s: EV_TO_RAD_PER_S,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

#[inline]
pub fn ev_to_rad_per_s(ev: f64) -> f64 {
    ev * EV_TO_RAD_PER_S
}

#[inline]
pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega / EV_TO_RAD_PER_S
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ev_conversion_is_e_over_hbar() {
        let direct = ELEMENTARY_CHARGE / HBAR;
        assert!(((EV_TO_RAD_PER_S - direct) / direct).abs() < 1e-10);
        assert!((ev_to_rad_per_s(1.0) - 1.519_267_447e15).abs() / 1.519e15 < 1e-8);
        assert!((rad_per_s_to_ev(ev_to_rad_per_s(9.0)) - 9.0).abs() < 1e-14);
    }
}
