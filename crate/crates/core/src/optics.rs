//! Tabulated optical data and its conversion to `ε(iξ)`.
//!
//! The dispersion relation
//!
//! ```text
//! ε(iξ) = 1 + (2/π) ∫₀^∞ ω Im ε(ω) / (ω² + ξ²) dω
//! ```
//!
//! is evaluated in `ln ω`, one adaptive panel per grid interval. Between grid
//! points `Im ε` is interpolated as a power law (log-log) when both ends are
//! positive and linearly in `ln ω` otherwise. Above the grid the last two
//! points set a power-law tail; below it the table's [`Extrapolation`] rule
//! applies.

use std::f64::consts::FRAC_2_PI;

use serde::Serialize;

use crate::constants::ev_to_rad_per_s;
use crate::error::{domain, CasimirError, Result};
use crate::quadrature::{integrate, integrate_decaying, Tolerance};

/// Behaviour of `Im ε` below the first grid frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Extrapolation {
    /// `Im ε = ω_p² γ / (ω (ω² + γ²))` (rad/s).
    DrudeTail { omega_p: f64, gamma: f64 },
    /// The region below the grid is lossless and closes the static
    /// permittivity to `eps0` through a lumped oscillator at the grid edge.
    ConstantEps { eps0: f64 },
    None,
}

/// Frequency grid (rad/s, strictly increasing) with `Im ε(ω)` samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpticalTable {
    omega: Vec<f64>,
    im_eps: Vec<f64>,
    pub provenance: String,
    pub extrapolation: Extrapolation,
}

/// Share of the dispersion integral above which a missing low-frequency
/// rule is an error.
const TAIL_SHARE_LIMIT: f64 = 0.01;
const PANEL_TOL: f64 = 1e-9;

impl OpticalTable {
    pub fn new(
        omega: Vec<f64>,
        im_eps: Vec<f64>,
        provenance: impl Into<String>,
        extrapolation: Extrapolation,
    ) -> Result<Self> {
        if omega.is_empty() {
            return Err(CasimirError::Parse("optical table is empty".into()));
        }
        if omega.len() != im_eps.len() {
            return Err(CasimirError::Parse(format!(
                "optical table has {} frequencies but {} values",
                omega.len(),
                im_eps.len()
            )));
        }
        if !(omega[0] > 0.0) {
            return Err(CasimirError::Parse("optical table frequencies must be positive".into()));
        }
        for w in omega.windows(2) {
            if !(w[1] > w[0]) {
                return Err(CasimirError::Parse(format!(
                    "optical table frequencies must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if let Some(bad) = im_eps.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(CasimirError::Parse(format!(
                "Im eps must be finite and nonnegative (passivity), got {bad}"
            )));
        }
        match extrapolation {
            Extrapolation::DrudeTail { omega_p, gamma } if !(omega_p > 0.0 && gamma > 0.0) => {
                return domain("Drude tail needs positive omega_p and gamma");
            }
            Extrapolation::ConstantEps { eps0 } if !(eps0 >= 1.0) => {
                return domain(format!("static permittivity must be >= 1, got {eps0}"));
            }
            _ => {}
        }
        Ok(Self {
            omega,
            im_eps,
            provenance: provenance.into(),
            extrapolation,
        })
    }

    /// Parse the two-column text format: `ω [eV]  Im ε`, `#` comments.
    pub fn parse(text: &str, provenance: &str, extrapolation: Extrapolation) -> Result<Self> {
        let mut omega = Vec::new();
        let mut im = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty());
            let (Some(a), Some(b), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(CasimirError::Parse(format!(
                    "{provenance}:{}: expected two columns, got '{line}'",
                    n + 1
                )));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| CasimirError::Parse(format!("{provenance}:{}: bad number '{s}'", n + 1)))
            };
            omega.push(ev_to_rad_per_s(parse(a)?));
            im.push(parse(b)?);
        }
        Self::new(omega, im, provenance, extrapolation)
    }

    /// Table sampled from the Drude model on a log grid, with a matching
    /// Drude tail below the grid.
    pub fn synthesize_drude(omega_p: f64, gamma: f64, omega_min: f64, omega_max: f64, points: usize) -> Result<Self> {
        if points < 2 || !(omega_max > omega_min) || !(omega_min > 0.0) {
            return domain("synthetic grid needs >= 2 points on a positive increasing range");
        }
        let (lo, hi) = (omega_min.ln(), omega_max.ln());
        let omega: Vec<f64> = (0..points)
            .map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp())
            .collect();
        let im = omega.iter().map(|&w| drude_im_eps(w, omega_p, gamma)).collect();
        Self::new(
            omega,
            im,
            format!("synthetic Drude ({points} points)"),
            Extrapolation::DrudeTail { omega_p, gamma },
        )
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn im_eps(&self) -> &[f64] {
        &self.im_eps
    }

    pub fn with_extrapolation(mut self, extrapolation: Extrapolation) -> Self {
        self.extrapolation = extrapolation;
        self
    }

    fn interpolate(&self, i: usize, u: f64) -> f64 {
        let (u0, u1) = (self.omega[i].ln(), self.omega[i + 1].ln());
        let (v0, v1) = (self.im_eps[i], self.im_eps[i + 1]);
        let s = (u - u0) / (u1 - u0);
        if v0 > 0.0 && v1 > 0.0 {
            (v0.ln() + s * (v1.ln() - v0.ln())).exp()
        } else {
            v0 + s * (v1 - v0)
        }
    }

    /// `∫ ω Im ε / (ω² + ξ²) dω` over the tabulated grid.
    fn grid_integral(&self, xi: f64) -> f64 {
        let xi2 = xi * xi;
        let mut total = 0.0_f64;
        for i in 0..self.omega.len().saturating_sub(1) {
            if self.im_eps[i] == 0.0 && self.im_eps[i + 1] == 0.0 {
                continue;
            }
            let (u0, u1) = (self.omega[i].ln(), self.omega[i + 1].ln());
            let est = integrate(
                |u: f64| {
                    let w2 = (2.0 * u).exp();
                    w2 * self.interpolate(i, u) / (w2 + xi2)
                },
                u0,
                u1,
                Tolerance::relative(PANEL_TOL).with_abs(1e-3 * PANEL_TOL * total.abs()),
            );
            total += est.value;
        }
        total
    }

    /// Power-law continuation above the grid.
    fn high_tail_integral(&self, xi: f64) -> f64 {
        let n = self.omega.len();
        let last = self.im_eps[n - 1];
        if last == 0.0 {
            return 0.0;
        }
        let w_n = self.omega[n - 1];
        let exponent = if n >= 2 && self.im_eps[n - 2] > 0.0 {
            -(last / self.im_eps[n - 2]).ln() / (w_n / self.omega[n - 2]).ln()
        } else {
            3.0
        };
        // slower than ω⁻¹ would not converge
        let p = exponent.clamp(1.0, 8.0);
        let xi2 = xi * xi;
        integrate_decaying(
            |t: f64| {
                let w2 = (w_n * t.exp()).powi(2);
                last * (-p * t).exp() * w2 / (w2 + xi2)
            },
            0.0,
            1.0 / p,
            4.0 / p,
            Tolerance::relative(PANEL_TOL),
            1e-12,
        )
        .value
    }

    /// Contribution below the grid under the table's rule, plus the
    /// closure weight for [`Extrapolation::ConstantEps`].
    fn low_tail(&self, xi: f64) -> Result<f64> {
        let w0 = self.omega[0];
        match self.extrapolation {
            Extrapolation::DrudeTail { omega_p, gamma } => Ok(drude_low_integral(xi, omega_p, gamma, w0)),
            Extrapolation::ConstantEps { eps0 } => {
                // ε(i0) from the grid alone, then the missing static weight
                let at_zero = FRAC_2_PI * (self.grid_integral(0.0) + self.high_tail_integral(0.0));
                let missing = eps0 - 1.0 - at_zero;
                Ok(missing / FRAC_2_PI * w0 * w0 / (w0 * w0 + xi * xi))
            }
            Extrapolation::None => Ok(0.0),
        }
    }

    /// `ε(iξ)` from the dispersion relation.
    pub fn eps_at(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return domain("zero-frequency term must use the prescription rule (xi must be > 0)");
        }
        let body = self.grid_integral(xi) + self.high_tail_integral(xi);
        if matches!(self.extrapolation, Extrapolation::None) {
            // constant continuation of the first sample estimates what is missing
            let w0 = self.omega[0];
            let guess = 0.5 * self.im_eps[0] * (1.0 + (w0 / xi).powi(2)).ln();
            let total = body + guess;
            if total > 0.0 && guess / total > TAIL_SHARE_LIMIT {
                return Err(CasimirError::ExtrapolationRequired {
                    tail_share: guess / total,
                });
            }
        }
        let low = self.low_tail(xi)?;
        Ok((1.0 + FRAC_2_PI * (body + low)).max(1.0))
    }
}

pub fn drude_im_eps(omega: f64, omega_p: f64, gamma: f64) -> f64 {
    omega_p * omega_p * gamma / (omega * (omega * omega + gamma * gamma))
}

/// `∫₀^{w0} ω Im ε_D(ω) / (ω² + ξ²) dω` in closed form.
fn drude_low_integral(xi: f64, omega_p: f64, gamma: f64, w0: f64) -> f64 {
    let wp2g = omega_p * omega_p * gamma;
    let d = xi * xi - gamma * gamma;
    if d.abs() > 1e-6 * xi * xi {
        wp2g / d * ((w0 / gamma).atan() / gamma - (w0 / xi).atan() / xi)
    } else {
        integrate(
            |w: f64| wp2g / ((w * w + gamma * gamma) * (w * w + xi * xi)),
            0.0,
            w0,
            Tolerance::relative(1e-12),
        )
        .value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{eps_drude, DrudeParameters};

    fn au() -> (f64, f64) {
        (ev_to_rad_per_s(9.0), ev_to_rad_per_s(0.035))
    }

    #[test]
    fn drude_low_integral_matches_quadrature() {
        let (wp, g) = au();
        for &xi in &[0.1 * g, g * (1.0 + 1e-9), 3.0 * g, 100.0 * g] {
            let closed = drude_low_integral(xi, wp, g, 0.5 * g);
            let num = integrate(
                |w: f64| w * drude_im_eps(w, wp, g) / (w * w + xi * xi),
                0.0,
                0.5 * g,
                Tolerance::relative(1e-12),
            )
            .value;
            assert!((closed - num).abs() < 1e-9 * num.abs(), "xi={xi}: {closed} vs {num}");
        }
    }

    #[test]
    fn drude_round_trip_within_half_percent() {
        let (wp, g) = au();
        let table = OpticalTable::synthesize_drude(wp, g, 1e-2 * g, 1e3 * wp, 200).unwrap();
        let p = DrudeParameters::new(wp, g).unwrap();
        let (lo, hi) = ((0.1 * g).ln(), (10.0 * wp).ln());
        for i in 0..40 {
            let xi = (lo + (hi - lo) * i as f64 / 39.0).exp();
            let a = table.eps_at(xi).unwrap();
            let b = eps_drude(xi, &p, 300.0).unwrap();
            assert!(((a - b) / b).abs() < 5e-3, "xi={xi:e}: {a} vs {b}");
        }
    }

    #[test]
    fn refinement_converges_at_second_order() {
        let (wp, g) = au();
        let p = DrudeParameters::new(wp, g).unwrap();
        let xi = 2.0 * g;
        let exact = eps_drude(xi, &p, 300.0).unwrap();
        let err = |n: usize| {
            let t = OpticalTable::synthesize_drude(wp, g, g, 10.0 * wp, n).unwrap();
            ((t.eps_at(xi).unwrap() - exact) / exact).abs()
        };
        let (e1, e2, e3) = (err(9), err(17), err(33));
        assert!(e1 / e2 >= 3.0 && e2 / e3 >= 3.0, "{e1:e} {e2:e} {e3:e}");
    }

    #[test]
    fn lossless_table_tends_to_vacuum() {
        let omega: Vec<f64> = (0..20).map(|i| ev_to_rad_per_s(0.1 * (i + 1) as f64)).collect();
        let t = OpticalTable::new(
            omega,
            vec![0.0; 20],
            "zeros",
            Extrapolation::ConstantEps { eps0: 4.0 },
        )
        .unwrap();
        let w0 = t.omega()[0];
        assert!((t.eps_at(1e-6 * w0).unwrap() - 4.0).abs() < 1e-9);
        let far = t.eps_at(1e4 * w0).unwrap();
        assert!(far - 1.0 < 1e-6 && far >= 1.0);
    }

    #[test]
    fn missing_rule_with_low_frequency_weight_is_an_error() {
        let (wp, g) = au();
        let t = OpticalTable::synthesize_drude(wp, g, 10.0 * g, 1e2 * wp, 80)
            .unwrap()
            .with_extrapolation(Extrapolation::None);
        assert!(matches!(t.eps_at(g), Err(CasimirError::ExtrapolationRequired { .. })));
    }

    #[test]
    fn parse_rejects_bad_tables() {
        let ok = "# header\n0.1 1.0\n0.2 0.5 # trailing\n\n0.4 0.25\n";
        let t = OpticalTable::parse(ok, "ok", Extrapolation::None).unwrap();
        assert_eq!(t.omega().len(), 3);
        assert!((t.omega()[1] - ev_to_rad_per_s(0.2)).abs() < 1.0);
        for bad in ["0.2 1\n0.1 1\n", "0.1 1\n0.1 1\n", "0.1 -1\n", "0.1\n", "0.1 x\n", "", "0 1\n"] {
            assert!(OpticalTable::parse(bad, "bad", Extrapolation::None).is_err(), "{bad:?}");
        }
    }
}
