//! Casimir entropy `S = −∂𝓕/∂T` and a numerical check of the Nernst heat
//! theorem for each zero-frequency prescription.
//!
//! Free-energy differences are taken on the thermal excess of the
//! Euler–Maclaurin split (see [`crate::lifshitz::ThermalSplit`]) so that small
//! entropies near `T = 0` are not lost against the zero-point energy. The
//! zero-point energy itself only moves with `T` through `γ(T)`; its change is
//! integrated from the pointwise integrand difference.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{C, HBAR, K_B, ZETA3};
use crate::error::{domain, CasimirError, Result};
use crate::lifshitz::{thermal_excess, zero_point_energy_delta};
use crate::models::{GammaMap, MaterialResponse};
use crate::quadrature::{integrate_decaying, Tolerance};

/// Inner tolerance for the free energies entering a difference quotient.
const DIFFERENCE_TOL: f64 = 1e-11;
/// Richardson refinement stops once successive estimates change by less
/// than this fraction.
const RICHARDSON_TOL: f64 = 1e-3;
const RICHARDSON_LEVELS: usize = 5;

/// `k_B ζ(3) / (16π z²)`, the natural entropy scale at separation `z`.
fn entropy_scale(z: f64) -> f64 {
    K_B * ZETA3 / (16.0 * PI * z * z)
}

/// `−k_B ζ(3)/(16π z²)`.
pub fn entropy_large_z_limit(z: f64) -> f64 {
    -entropy_scale(z)
}

/// Zero-temperature entropy of the Drude prescription with a perfect lattice:
///
/// ```text
/// S(z, 0) = k_B/(16π z²) ∫₀^∞ y ln[1 − ((y − s)/(y + s))² e^{-y}] dy,   s = √(y² + ŷ²)
/// ```
///
/// with `ŷ = 2zω_p/c`.
#[allow(non_snake_case)]
pub fn drude_zero_T_entropy(z: f64, omega_p: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("separation must be positive, got {z}"));
    }
    if !(omega_p > 0.0) || !omega_p.is_finite() {
        return domain(format!("plasma frequency must be positive, got {omega_p}"));
    }
    let yhat = 2.0 * z * omega_p / C;
    let f = |y: f64| {
        let s = (y * y + yhat * yhat).sqrt();
        let r = yhat * yhat / ((s + y) * (s + y));
        y * (-(r * r) * (-y).exp()).ln_1p()
    };
    let est = integrate_decaying(f, 0.0, 1.0, 10.0, Tolerance::relative(1e-10), 1e-14);
    let value = K_B / (16.0 * PI * z * z) * est.value;
    if !est.converged {
        return Err(CasimirError::NonConvergence {
            best: value,
            achieved: est.relative_error(),
            requested: 1e-10,
        });
    }
    Ok(value)
}

/// One entropy evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyPoint {
    pub temperature: f64,
    /// J/(K·m²).
    pub entropy: f64,
    /// Final finite-difference half-step, K.
    pub step: f64,
    /// Richardson refinement met its tolerance.
    pub converged: bool,
}

/// Initial half-step: `max(T/50, 0.5 K)`, shrunk to `T/2` below 1 K.
pub fn entropy_step(temperature: f64) -> f64 {
    (temperature / 50.0).max(0.5_f64.min(0.5 * temperature))
}

/// Relative γ change below which the zero-point shift is linearised.
const LINEAR_GAMMA_STEP: f64 = 1e-4;

fn zero_point_shift(z: f64, model: &MaterialResponse, t_hi: f64, t_lo: f64) -> Result<f64> {
    let Some(p) = model.drude_parameters() else {
        return Ok(0.0);
    };
    let (g_hi, g_lo) = (p.gamma_at(t_hi), p.gamma_at(t_lo));
    if g_hi == g_lo {
        return Ok(0.0);
    }
    let centre = p.gamma_at(0.5 * (t_hi + t_lo)).max(0.5 * (g_hi + g_lo));
    if (g_hi - g_lo).abs() >= LINEAR_GAMMA_STEP * centre {
        let d = zero_point_energy_delta(z, &model.with_fixed_gamma(g_hi), &model.with_fixed_gamma(g_lo), 1e-7)?;
        return Ok(d.value);
    }
    let step = LINEAR_GAMMA_STEP * centre;
    let up = model.with_fixed_gamma(centre + step);
    let down = model.with_fixed_gamma(centre - step);
    let slope = zero_point_energy_delta(z, &up, &down, 1e-7)?.value / (2.0 * step);
    Ok(slope * (g_hi - g_lo))
}

fn free_energy_difference(z: f64, model: &MaterialResponse, t_hi: f64, t_lo: f64) -> Result<f64> {
    let hi = thermal_excess(z, t_hi, model, t_hi, DIFFERENCE_TOL)?;
    let lo = thermal_excess(z, t_lo, model, t_lo, DIFFERENCE_TOL)?;
    Ok(hi.thermal_excess - lo.thermal_excess + zero_point_shift(z, model, t_hi, t_lo)?)
}

/// `S = −∂𝓕/∂T` by central differences with Richardson refinement.
pub fn entropy(z: f64, temperature: f64, model: &MaterialResponse) -> Result<EntropyPoint> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("separation must be positive, got {z}"));
    }
    if !(temperature > 0.0) || !temperature.is_finite() {
        return domain(format!("temperature must be positive, got {temperature}"));
    }
    let floor = 1e-7 * entropy_scale(z);
    let quotient = |h: f64| -> Result<f64> {
        Ok(-free_energy_difference(z, model, temperature + h, temperature - h)? / (2.0 * h))
    };

    let mut h = entropy_step(temperature);
    let mut raw = vec![quotient(h)?];
    let mut best = raw[0];
    let mut previous: Option<f64> = None;
    for _ in 1..RICHARDSON_LEVELS {
        h *= 0.5;
        let s = quotient(h)?;
        let extrapolated = (4.0 * s - raw[raw.len() - 1]) / 3.0;
        raw.push(s);
        let reference = previous.unwrap_or(s);
        let change = (extrapolated - reference).abs();
        best = extrapolated;
        if change <= RICHARDSON_TOL * extrapolated.abs() || change <= floor {
            return Ok(EntropyPoint {
                temperature,
                entropy: best,
                step: h,
                converged: true,
            });
        }
        previous = Some(extrapolated);
    }
    Ok(EntropyPoint {
        temperature,
        entropy: best,
        step: h,
        converged: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NernstOk,
    NernstViolated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NernstOk => "nernst-ok",
            Verdict::NernstViolated => "nernst-violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Temperature grid and extrapolation controls.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSettings {
    pub t_high: f64,
    /// Lowest grid temperature; `None` picks it from the model.
    pub t_low: Option<f64>,
    pub points: usize,
    /// Lowest-T points used for the extrapolation fit.
    pub fit_points: usize,
    pub max_degree: usize,
    /// Explicit grid, descending; overrides the log grid when set.
    pub grid: Option<Vec<f64>>,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            t_high: 300.0,
            t_low: None,
            points: 25,
            fit_points: 5,
            max_degree: 2,
            grid: None,
        }
    }
}

/// Temperature below which a residual relaxation `γ(0)` makes the Drude
/// `ξ > 0` terms deviate from the plasma ones: `ħ γ(0) / (2π k_B ŷ²)`.
pub fn residual_crossover_temperature(z: f64, model: &MaterialResponse) -> Option<f64> {
    let p = model.drude_parameters()?;
    let g0 = p.gamma_of_t.zero_temperature_value(p.gamma);
    if g0 <= 0.0 {
        return None;
    }
    let yhat = 2.0 * z * p.omega_p / C;
    Some(HBAR * g0 / (yhat * yhat) / (2.0 * PI * K_B))
}

impl ScanSettings {
    /// Descending grid for `model` at `z`.
    pub fn temperatures(&self, z: f64, model: &MaterialResponse) -> Result<Vec<f64>> {
        if let Some(g) = &self.grid {
            if g.len() < 2 || g.windows(2).any(|w| !(w[1] < w[0])) || g.iter().any(|&t| !(t > 0.0)) {
                return domain("temperature grid must be positive and strictly descending");
            }
            return Ok(g.clone());
        }
        let t_low = self.t_low.unwrap_or_else(|| match residual_crossover_temperature(z, model) {
            Some(t_star) => 1.0_f64.min(t_star / 1000.0),
            None => 1.0,
        });
        if !(t_low > 0.0 && t_low < self.t_high) || self.points < 2 {
            return domain(format!("bad temperature grid {} → {t_low} K", self.t_high));
        }
        let n = self.points;
        let ratio = (t_low / self.t_high).ln() / (n - 1) as f64;
        Ok((0..n)
            .map(|i| match i {
                0 => self.t_high,
                i if i == n - 1 => t_low,
                i => self.t_high * (ratio * i as f64).exp(),
            })
            .collect())
    }
}

/// Entropy over a descending temperature grid with the extrapolated
/// `S(z, 0⁺)` and its classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyScan {
    pub z: f64,
    pub prescription: String,
    pub gamma_map: GammaMap,
    pub temperatures: Vec<f64>,
    pub entropies: Vec<f64>,
    pub converged: Vec<bool>,
    pub extrapolated: f64,
    pub uncertainty: f64,
    pub fit_degree: usize,
    pub verdict: Verdict,
}

fn polyfit_intercept(t: &[f64], s: &[f64], degree: usize) -> Option<(f64, f64)> {
    let n = t.len();
    let m = degree + 1;
    if n < m {
        return None;
    }
    let scale = t.iter().cloned().fold(0.0, f64::max);
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    for (&ti, &si) in t.iter().zip(s) {
        let x = ti / scale;
        let pw: Vec<f64> = (0..m).map(|k| x.powi(k as i32)).collect();
        for r in 0..m {
            b[r] += pw[r] * si;
            for c in 0..m {
                a[r][c] += pw[r] * pw[c];
            }
        }
    }
    let inv = invert(&a)?;
    let coef: Vec<f64> = (0..m).map(|r| (0..m).map(|c| inv[r][c] * b[c]).sum()).collect();
    let rss: f64 = t
        .iter()
        .zip(s)
        .map(|(&ti, &si)| {
            let x = ti / scale;
            let fit: f64 = coef.iter().enumerate().map(|(k, c)| c * x.powi(k as i32)).sum();
            (si - fit).powi(2)
        })
        .sum();
    let se = if n > m {
        (rss / (n - m) as f64 * inv[0][0]).sqrt()
    } else {
        0.0
    };
    Some((coef[0], se))
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                if f != 0.0 {
                    let pivot_row = m[col].clone();
                    for (v, pv) in m[row].iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Entropy scan toward `T = 0` and Nernst verdict. A `gamma_map` replaces
/// the relaxation map of Drude-like models.
pub fn nernst_verdict(model: &MaterialResponse, z: f64, gamma_map: Option<GammaMap>) -> Result<EntropyScan> {
    nernst_verdict_with(model, z, gamma_map, &ScanSettings::default())
}

pub fn nernst_verdict_with(
    model: &MaterialResponse,
    z: f64,
    gamma_map: Option<GammaMap>,
    settings: &ScanSettings,
) -> Result<EntropyScan> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("separation must be positive, got {z}"));
    }
    let model = match gamma_map {
        Some(map) => model.clone().with_gamma_map(map),
        None => model.clone(),
    };
    let temperatures = settings.temperatures(z, &model)?;
    let points: Vec<EntropyPoint> = temperatures
        .par_iter()
        .map(|&t| entropy(z, t, &model))
        .collect::<Result<Vec<_>>>()?;

    let k = settings.fit_points.clamp(2, temperatures.len());
    let low_t: Vec<f64> = temperatures[temperatures.len() - k..].to_vec();
    let low_s: Vec<f64> = points[points.len() - k..].iter().map(|p| p.entropy).collect();

    let max_degree = settings.max_degree.min(k - 1).min(2);
    let fits: Vec<(f64, f64)> = (0..=max_degree)
        .filter_map(|d| polyfit_intercept(&low_t, &low_s, d))
        .collect();
    let (extrapolated, se) = *fits.last().ok_or_else(|| CasimirError::Domain("extrapolation fit failed".into()))?;
    let spread = if fits.len() >= 2 {
        (fits[fits.len() - 1].0 - fits[fits.len() - 2].0).abs()
    } else {
        0.0
    };
    let uncertainty = se.max(spread).max(1e-4 * entropy_scale(z));
    let all_converged = points[points.len() - k..].iter().all(|p| p.converged);

    let verdict = if extrapolated.abs() > 5.0 * uncertainty {
        Verdict::NernstViolated
    } else if extrapolated.abs() < uncertainty && all_converged {
        Verdict::NernstOk
    } else {
        Verdict::Inconclusive
    };

    Ok(EntropyScan {
        z,
        prescription: model.tag().to_string(),
        gamma_map: model
            .drude_parameters()
            .map(|p| p.gamma_of_t.clone())
            .unwrap_or(GammaMap::Constant),
        converged: points.iter().map(|p| p.converged).collect(),
        entropies: points.iter().map(|p| p.entropy).collect(),
        temperatures,
        extrapolated,
        uncertainty,
        fit_degree: max_degree,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ev_to_rad_per_s;
    use crate::models::DrudeParameters;

    #[test]
    fn zero_t_entropy_is_negative_and_approaches_limit() {
        let zs = [1e-7, 3.16e-7, 1e-6, 3.16e-6, 1e-5];
        let wps = [1.0, 2.0, 4.0, 8.0, 15.0];
        for &z in &zs {
            for &wp in &wps {
                let s = drude_zero_T_entropy(z, ev_to_rad_per_s(wp)).unwrap();
                assert!(s < 0.0);
                let lim = entropy_large_z_limit(z);
                let rel = ((s - lim) / lim).abs();
                let yhat = 2.0 * z * ev_to_rad_per_s(wp) / C;
                assert!(rel < 8.0 / yhat, "z={z} wp={wp} rel={rel}");
                let s2 = drude_zero_T_entropy(2.0 * z, ev_to_rad_per_s(wp)).unwrap();
                let rel2 = ((s2 - entropy_large_z_limit(2.0 * z)) / entropy_large_z_limit(2.0 * z)).abs();
                if yhat > 60.0 {
                    let halving = rel / rel2;
                    assert!((halving - 2.0).abs() < 0.15, "z={z} wp={wp} ratio={halving}");
                }
            }
        }
    }

    #[test]
    fn zero_t_entropy_vanishes_for_transparent_plates() {
        let s = drude_zero_T_entropy(1e-6, 1.0).unwrap();
        assert!(s.abs() < 1e-12 * entropy_scale(1e-6));
    }

    #[test]
    fn large_z_limit_scaling() {
        assert!(entropy_large_z_limit(1e-6) < 0.0);
        assert!((entropy_large_z_limit(1e-6) / entropy_large_z_limit(2e-6) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn step_rule() {
        assert_eq!(entropy_step(300.0), 6.0);
        assert_eq!(entropy_step(10.0), 0.5);
        assert_eq!(entropy_step(1.0), 0.5);
        assert_eq!(entropy_step(0.1), 0.05);
    }

    #[test]
    fn ideal_entropy_is_positive_at_high_t() {
        let z = 5e-6;
        let s = entropy(z, 300.0, &MaterialResponse::IdealMetalSchwinger).unwrap();
        assert!(s.converged);
        let classical = K_B * ZETA3 / (8.0 * PI * z * z);
        assert!(s.entropy > 0.0);
        assert!(((s.entropy - classical) / classical).abs() < 0.05, "{s:?} vs {classical:e}");
    }

    #[test]
    fn perfect_lattice_entropy_tends_to_drude_value() {
        let z = 1e-6;
        let p = DrudeParameters::from_ev(9.0, 0.035)
            .unwrap()
            .with_gamma_map(GammaMap::perfect_lattice(300.0, 165.0));
        let s = entropy(z, 1.0, &MaterialResponse::Drude(p.clone())).unwrap();
        let expect = drude_zero_T_entropy(z, p.omega_p).unwrap();
        assert!(((s.entropy - expect) / expect).abs() < 0.02, "{s:?} vs {expect:e}");
    }

    #[test]
    fn polyfit_recovers_quadratic() {
        let t = [1.0, 2.0, 3.0, 4.0, 5.0];
        let s: Vec<f64> = t.iter().map(|x| 0.5 - 0.2 * x + 0.03 * x * x).collect();
        let (c, se) = polyfit_intercept(&t, &s, 2).unwrap();
        assert!((c - 0.5).abs() < 1e-12 && se < 1e-10);
    }

    #[test]
    fn log_grid_is_descending() {
        let m = MaterialResponse::IdealMetalSchwinger;
        let g = ScanSettings::default().temperatures(1e-6, &m).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], 300.0);
        assert_eq!(g[24], 1.0);
        assert!(g.windows(2).all(|w| w[1] < w[0]));
    }
}
