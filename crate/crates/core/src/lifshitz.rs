//! Reflection coefficients and the Matsubara-summed Lifshitz free energy
//! between two identical semispaces.
//!
//! Every `k⊥` integral is taken in the variable `y = 2 q_l z`, which runs
//! over `[y_l, ∞)` with `y_l = 2 ξ_l z / c` and carries an `e^{-y}` weight:
//!
//! ```text
//! 𝓕 = (k_B T / 2π) Σ' (1/4z²) ∫ y [ln(1 − r²_TM e^{-y}) + ln(1 − r²_TE e^{-y})] dy
//! P = −(k_B T / π) Σ' (1/8z³) ∫ y² Σ_pol r² e^{-y} / (1 − r² e^{-y}) dy
//! ```
//!
//! In this variable both reflection formulas depend only on `y`, `y_l` and
//! the material response, which keeps every integrand dimensionless.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{C, HBAR, K_B, ZETA3};
use crate::error::{domain, CasimirError, Result};
use crate::models::{matsubara_frequency, MaterialResponse, Response, ZeroFrequencyRule};
use crate::quadrature::{integrate, integrate_decaying, Estimate, Tolerance};

/// Reflection coefficients at imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionPair {
    pub tm: f64,
    pub te: f64,
}

fn check_xi_k(xi: f64, k_perp: f64) -> Result<()> {
    if !(xi > 0.0) || !xi.is_finite() {
        return domain(format!("xi must be positive, got {xi}"));
    }
    if !(k_perp >= 0.0) || !k_perp.is_finite() {
        return domain(format!("k_perp must be nonnegative, got {k_perp}"));
    }
    Ok(())
}

/// Fresnel coefficients for a local dielectric response `ε(iξ)`.
pub fn fresnel_reflection(xi: f64, k_perp: f64, eps: f64) -> Result<ReflectionPair> {
    check_xi_k(xi, k_perp)?;
    if !(eps >= 1.0) {
        return domain(format!("permittivity must be >= 1, got {eps}"));
    }
    let a = xi / C;
    let q = (k_perp * k_perp + a * a).sqrt();
    let (tm, te) = fresnel_dimensionless(q, a, eps);
    Ok(ReflectionPair { tm, te })
}

/// Shared by the public coefficient and the integrands: `q` and `a = ξ/c`
/// in any common unit.
#[inline]
fn fresnel_dimensionless(q: f64, a: f64, eps: f64) -> (f64, f64) {
    if eps.is_infinite() {
        return (1.0, 1.0);
    }
    let extra = (eps - 1.0) * a * a;
    let k = (q * q + extra).sqrt();
    let tm = if eps > 1e200 { 1.0 } else { (eps * q - k) / (eps * q + k) };
    // k − q without cancellation
    let te = extra / ((k + q) * (k + q));
    (tm, te)
}

/// Leontovich-impedance coefficients.
pub fn impedance_reflection(xi: f64, k_perp: f64, impedance: f64) -> Result<ReflectionPair> {
    check_xi_k(xi, k_perp)?;
    if !(impedance > 0.0 && impedance <= 1.0) {
        return domain(format!(
            "impedance must lie in (0, 1] for the Leontovich condition to hold, got {impedance}"
        ));
    }
    let a = xi / C;
    let q = (k_perp * k_perp + a * a).sqrt();
    let (tm, te) = impedance_dimensionless(q, a, impedance);
    Ok(ReflectionPair { tm, te })
}

#[inline]
fn impedance_dimensionless(q: f64, a: f64, z: f64) -> (f64, f64) {
    ((q - z * a) / (q + z * a), (a - q * z) / (a + q * z))
}

/// Zero-frequency coefficients for a dimensionless `y = 2 k⊥ z` and
/// `ŷ = 2 z ω_p / c`.
#[inline]
fn zero_dimensionless(rule: ZeroFrequencyRule, y: f64, yhat: f64) -> (f64, f64) {
    match rule {
        ZeroFrequencyRule::Ideal => (1.0, 1.0),
        ZeroFrequencyRule::Drude => (1.0, 0.0),
        ZeroFrequencyRule::Plasma { .. } => {
            let s = (y * y + yhat * yhat).sqrt();
            // (s − y)/(s + y) = ŷ²/(s + y)²
            (1.0, yhat * yhat / ((s + y) * (s + y)))
        }
        ZeroFrequencyRule::ImpedanceInfrared { .. } => (1.0, (yhat - y) / (yhat + y)),
        ZeroFrequencyRule::Dielectric { eps0 } => ((eps0 - 1.0) / (eps0 + 1.0), 0.0),
    }
}

fn rule_frequency(rule: ZeroFrequencyRule) -> f64 {
    match rule {
        ZeroFrequencyRule::Plasma { omega_p } | ZeroFrequencyRule::ImpedanceInfrared { omega_p } => omega_p,
        _ => 0.0,
    }
}

/// Coefficients for the `l = 0` term at transverse wave number `k_perp`.
pub fn zero_frequency_reflection(model: &MaterialResponse, k_perp: f64) -> Result<ReflectionPair> {
    if !(k_perp > 0.0) || !k_perp.is_finite() {
        return domain(format!("k_perp must be positive, got {k_perp}"));
    }
    let rule = model.zero_frequency_rule()?;
    // y/ŷ only enters as the ratio c k⊥ / ω_p
    let omega_p = rule_frequency(rule);
    let (tm, te) = zero_dimensionless(rule, C * k_perp, omega_p);
    Ok(ReflectionPair { tm, te })
}

/// Which large-separation asymptote to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalPrescription {
    Ideal,
    DrudeLike,
}

/// `−k_B T ζ(3)/(8π z²)` (ideal) or `−k_B T ζ(3)/(16π z²)` (Drude-like).
pub fn classical_limit(z: f64, temperature: f64, prescription: ClassicalPrescription) -> f64 {
    let ideal = -K_B * temperature * ZETA3 / (8.0 * PI * z * z);
    match prescription {
        ClassicalPrescription::Ideal => ideal,
        ClassicalPrescription::DrudeLike => 0.5 * ideal,
    }
}

/// Quadrature scheme for the `k⊥` integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureScheme {
    /// Adaptive Gauss–Kronrod (10/21) on doubling panels in `y`.
    GaussKronrod21,
}

/// Numerical controls for a Lifshitz evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvaluationConfig {
    pub rel_tol: f64,
    /// Number of consecutive negligible Matsubara terms before stopping.
    pub small_terms_to_stop: usize,
    pub scheme: QuadratureScheme,
    /// Above this count the direct sum hands over to the Euler–Maclaurin
    /// hybrid (explicit head plus continuous tail).
    pub max_direct_terms: u64,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-7,
            small_terms_to_stop: 3,
            scheme: QuadratureScheme::GaussKronrod21,
            max_direct_terms: 50_000,
        }
    }
}

impl EvaluationConfig {
    pub fn with_tolerance(rel_tol: f64) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return domain(format!("relative tolerance must lie in (0, 1e-2], got {}", self.rel_tol));
        }
        if self.small_terms_to_stop == 0 {
            return domain("small_terms_to_stop must be at least 1");
        }
        Ok(())
    }
}

/// Free energy per unit area and pressure at one `(z, T)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifshitzResult {
    pub z: f64,
    pub temperature: f64,
    pub model: String,
    /// J/m².
    pub free_energy_per_area: f64,
    /// Pa.
    pub pressure: f64,
    /// Matsubara terms evaluated explicitly, `l = 0` included.
    pub terms_used: u64,
    /// Relative error bound covering quadrature and series truncation.
    pub quadrature_error_estimate: f64,
    /// `|𝓕_{l=0}| / Σ_l |𝓕_l|`.
    pub zero_frequency_share: f64,
    /// The `l = 0` rule was supplied separately from the bulk response.
    pub mixed_prescription: bool,
    /// The series tail was summed as a continuous integral.
    pub euler_maclaurin_tail: bool,
}

/// Bulk response resolved at one frequency.
#[derive(Debug, Clone, Copy)]
enum Surface {
    Zero { rule: ZeroFrequencyRule, yhat: f64 },
    Ideal,
    Fresnel { eps: f64 },
    Impedance { z: f64 },
}

impl Surface {
    fn resolve(model: &MaterialResponse, xi: f64, gamma_temperature: f64) -> Result<Self> {
        Ok(match model.response(xi, gamma_temperature)? {
            Response::Ideal => Surface::Ideal,
            Response::Permittivity(eps) => Surface::Fresnel { eps },
            Response::Impedance(z) => Surface::Impedance { z },
        })
    }

    fn zero(model: &MaterialResponse, z: f64) -> Result<Self> {
        let rule = model.zero_frequency_rule()?;
        Ok(Surface::Zero {
            rule,
            yhat: 2.0 * z * rule_frequency(rule) / C,
        })
    }

    /// `(r_TM², r_TE²)` at `y` for `y₀ = 2ξz/c`.
    #[inline]
    fn squares(&self, y: f64, y0: f64) -> (f64, f64) {
        let (tm, te) = match *self {
            Surface::Zero { rule, yhat } => zero_dimensionless(rule, y, yhat),
            Surface::Ideal => (1.0, 1.0),
            Surface::Fresnel { eps } => fresnel_dimensionless(y, y0, eps),
            Surface::Impedance { z } => impedance_dimensionless(y, y0, z),
        };
        (tm * tm, te * te)
    }
}

#[inline]
fn energy_kernel(y: f64, tm2: f64, te2: f64) -> f64 {
    let e = (-y).exp();
    y * ((-tm2 * e).ln_1p() + (-te2 * e).ln_1p())
}

#[inline]
fn pressure_kernel(y: f64, tm2: f64, te2: f64) -> f64 {
    let e = (-y).exp();
    y * y * (tm2 * e / (1.0 - tm2 * e) + te2 * e / (1.0 - te2 * e))
}

fn y_integral(surface: &Surface, y0: f64, tol: Tolerance, pressure: bool) -> Estimate {
    let f = |y: f64| {
        let (tm2, te2) = surface.squares(y, y0);
        if pressure {
            pressure_kernel(y, tm2, te2)
        } else {
            energy_kernel(y, tm2, te2)
        }
    };
    integrate_decaying(f, y0, 1.0, 6.0, tol, 1e-2 * tol.rel)
}

/// `∫_{y₀}^∞ y [ln(1−r²_TM e^{-y}) + ln(1−r²_TE e^{-y})] dy` for the bulk
/// response at `y₀ = 2ξz/c` (or the zero-frequency rule when `y₀ = 0`).
pub(crate) fn spectral_energy(
    model: &MaterialResponse,
    z: f64,
    y0: f64,
    gamma_temperature: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    let surface = if y0 == 0.0 {
        Surface::zero(model, z)?
    } else {
        Surface::resolve(model, y0 * C / (2.0 * z), gamma_temperature)?
    };
    Ok(y_integral(&surface, y0, tol, false))
}

/// Difference of [`spectral_energy`] between two bulk responses at the
/// same frequency, integrated pointwise.
pub(crate) fn spectral_energy_delta(
    a: &MaterialResponse,
    b: &MaterialResponse,
    z: f64,
    y0: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    let xi = y0 * C / (2.0 * z);
    let sa = Surface::resolve(a, xi, 0.0)?;
    let sb = Surface::resolve(b, xi, 0.0)?;
    let f = |y: f64| {
        let (tm_a, te_a) = sa.squares(y, y0);
        let (tm_b, te_b) = sb.squares(y, y0);
        energy_kernel(y, tm_a, te_a) - energy_kernel(y, tm_b, te_b)
    };
    Ok(integrate_decaying(f, y0, 1.0, 6.0, tol, 1e-3 * tol.rel))
}

fn check_zt(z: f64, temperature: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("separation must be positive, got {z}"));
    }
    if !(temperature > 0.0) || !temperature.is_finite() {
        return domain(format!("temperature must be positive, got {temperature}"));
    }
    Ok(())
}

/// Dimensionless Matsubara spacing `2 ξ₁ z / c`.
pub(crate) fn matsubara_step(z: f64, temperature: f64) -> f64 {
    4.0 * PI * K_B * temperature * z / (HBAR * C)
}

fn term_cap(spacing: f64, rel_tol: f64) -> u64 {
    let reach = 20.0_f64.max((1.0 / rel_tol).ln() + 10.0);
    (reach / spacing).ceil() as u64
}

/// Lifshitz free energy per unit area with its pressure.
pub fn free_energy(z: f64, temperature: f64, model: &MaterialResponse, cfg: &EvaluationConfig) -> Result<LifshitzResult> {
    check_zt(z, temperature)?;
    cfg.validate()?;
    let spacing = matsubara_step(z, temperature);
    if term_cap(spacing, cfg.rel_tol) > cfg.max_direct_terms {
        return hybrid_free_energy(z, temperature, model, cfg);
    }
    direct_sum(z, temperature, model, cfg)
}

/// `P = −∂𝓕/∂z`.
pub fn pressure(z: f64, temperature: f64, model: &MaterialResponse, cfg: &EvaluationConfig) -> Result<f64> {
    Ok(free_energy(z, temperature, model, cfg)?.pressure)
}

fn direct_sum(z: f64, temperature: f64, model: &MaterialResponse, cfg: &EvaluationConfig) -> Result<LifshitzResult> {
    let spacing = matsubara_step(z, temperature);
    let cap = term_cap(spacing, cfg.rel_tol);
    let ratio = (-spacing).exp();
    let term_tol = Tolerance::relative(0.1 * cfg.rel_tol);

    let energy_scale = K_B * temperature / (2.0 * PI) / (4.0 * z * z);
    let pressure_scale = -K_B * temperature / PI / (8.0 * z * z * z);

    let zero = Surface::zero(model, z)?;
    let e0 = y_integral(&zero, 0.0, term_tol, false);
    let p0 = y_integral(&zero, 0.0, term_tol, true);

    let mut e_sum = 0.5 * e0.value;
    let mut p_sum = 0.5 * p0.value;
    let mut e_abs = e_sum.abs();
    let mut e_err = 0.5 * e0.abs_error;
    let mut p_err = 0.5 * p0.abs_error;
    let mut converged = e0.converged && p0.converged;
    let mut terms = 1_u64;
    let mut quiet = 0_usize;
    let mut last = (e_sum.abs(), p_sum.abs());
    let mut prev = (f64::INFINITY, f64::INFINITY);
    let mut finished = false;

    for l in 1..=cap {
        let xi = matsubara_frequency(l, temperature)?;
        let surface = Surface::resolve(model, xi, temperature)?;
        let y0 = l as f64 * spacing;
        let e = y_integral(&surface, y0, term_tol, false);
        let p = y_integral(&surface, y0, term_tol, true);
        e_sum += e.value;
        p_sum += p.value;
        e_abs += e.value.abs();
        e_err += e.abs_error;
        p_err += p.abs_error;
        converged &= e.converged && p.converged;
        terms += 1;
        prev = last;
        last = (e.value.abs(), p.value.abs());

        let gate = 0.1 * cfg.rel_tol * (1.0 - ratio);
        let small = last.0 <= gate * e_sum.abs() && last.1 <= gate * p_sum.abs();
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= cfg.small_terms_to_stop {
            finished = true;
            break;
        }
    }

    // geometric bound on what was left out
    let observed = |a: f64, b: f64| if b > 0.0 && b.is_finite() { (a / b).min(0.999) } else { ratio };
    let rho_e = ratio.max(observed(last.0, prev.0));
    let rho_p = ratio.max(observed(last.1, prev.1));
    let tail_e = last.0 * rho_e / (1.0 - rho_e);
    let tail_p = last.1 * rho_p / (1.0 - rho_p);

    let free = energy_scale * e_sum;
    let press = pressure_scale * p_sum;
    let rel = |err: f64, sum: f64| if sum == 0.0 { if err == 0.0 { 0.0 } else { f64::INFINITY } } else { err / sum.abs() };
    let achieved = rel(e_err + tail_e, e_sum).max(rel(p_err + tail_p, p_sum));
    let share = if e_abs > 0.0 { 0.5 * e0.value.abs() / e_abs } else { 0.0 };

    if achieved > cfg.rel_tol || !(finished || converged) {
        return Err(CasimirError::NonConvergence {
            best: free,
            achieved,
            requested: cfg.rel_tol,
        });
    }

    Ok(LifshitzResult {
        z,
        temperature,
        model: model.tag().to_string(),
        free_energy_per_area: free,
        pressure: press,
        terms_used: terms,
        quadrature_error_estimate: achieved,
        zero_frequency_share: share,
        mixed_prescription: model.is_mixed(),
        euler_maclaurin_tail: false,
    })
}

/// Pieces of the Euler–Maclaurin representation of the Matsubara sum.
///
/// With `Δ = 2ξ₁z/c`, `G(y₀)` the spectral energy and `y_s = (L + ½)Δ`,
///
/// ```text
/// Σ' G(lΔ) = D + (1/Δ) ∫₀^∞ G
/// D = ½G(0) + Σ_{l=1}^{L} G(lΔ) − (1/Δ) ∫₀^{y_s} G + (Δ/24) G'(y_s) − (7Δ³/5760) G'''(y_s)
/// ```
///
/// so that `𝓕(T) = (k_B T / 2π)(1/4z²) D + 𝓕₀[γ(T)]`. The first piece is the
/// thermal excess and never involves cancellation against `𝓕₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalSplit {
    /// `(k_B T / 2π)(1/4z²) D`, J/m².
    pub thermal_excess: f64,
    /// Absolute error estimate of `thermal_excess`.
    pub thermal_excess_error: f64,
    pub explicit_terms: u64,
}

const EXPLICIT_HEAD: u64 = 64;

pub(crate) fn thermal_excess(
    z: f64,
    temperature: f64,
    model: &MaterialResponse,
    gamma_temperature: f64,
    rel_tol: f64,
) -> Result<ThermalSplit> {
    check_zt(z, temperature)?;
    let spacing = matsubara_step(z, temperature);
    let tol = Tolerance::relative(rel_tol);
    let g = |y0: f64| spectral_energy(model, z, y0, gamma_temperature, tol);

    let g0 = g(0.0)?;
    let mut sum = 0.5 * g0.value;
    let mut err = 0.5 * g0.abs_error;
    let mut explicit = 0_u64;
    for l in 1..=EXPLICIT_HEAD {
        let v = g(l as f64 * spacing)?;
        sum += v.value;
        err += v.abs_error;
        explicit = l;
        if v.value.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    let ys = (explicit as f64 + 0.5) * spacing;

    // (1/Δ)∫₀^{y_s} G on geometric panels so features at tiny y₀ are resolved
    let mut integral = 0.0_f64;
    let mut integral_err = 0.0;
    let mut hi = ys;
    let mut failure: Option<CasimirError> = None;
    for _ in 0..80 {
        let lo = 0.5 * hi;
        let panel = integrate(
            |y0: f64| match g(y0) {
                Ok(v) => v.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            lo,
            hi,
            Tolerance::relative(rel_tol).with_abs(0.1 * rel_tol * integral.abs()),
        );
        integral += panel.value;
        integral_err += panel.abs_error;
        hi = lo;
        if hi * g0.value.abs() <= 1e-3 * rel_tol * integral.abs() {
            break;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    // remaining sliver [0, hi] with G ≈ G(0)
    integral += hi * g0.value;
    integral_err += hi * g0.value.abs() * 1e-2;

    // G'(y_s) and G'''(y_s), five-point stencils
    let h = 0.25 * spacing.min(ys);
    let gs = |k: f64| g(ys + k * h).map(|v| v.value);
    let (m2, m1, p1, p2) = (gs(-2.0)?, gs(-1.0)?, gs(1.0)?, gs(2.0)?);
    let first = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let third = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h);
    let cubic = 7.0 / 5760.0 * spacing.powi(3) * third;

    let d = sum - integral / spacing + spacing / 24.0 * first - cubic;
    let d_err = err + integral_err / spacing + cubic.abs();

    let scale = K_B * temperature / (2.0 * PI) / (4.0 * z * z);
    Ok(ThermalSplit {
        thermal_excess: scale * d,
        thermal_excess_error: scale * d_err,
        explicit_terms: explicit + 1,
    })
}

/// `𝓕₀ = ħc/(32π² z³) ∫₀^∞ G(y₀) dy₀` with the bulk response evaluated
/// with relaxation at `gamma_temperature`.
pub(crate) fn zero_point_energy(
    z: f64,
    model: &MaterialResponse,
    gamma_temperature: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    let inner = Tolerance::relative(0.1 * rel_tol);
    zero_point_integral(z, rel_tol, 0.0, |y0| {
        if y0 == 0.0 {
            return Ok(0.0);
        }
        spectral_energy(model, z, y0, gamma_temperature, inner).map(|v| v.value)
    })
    .map(|est| scale_estimate(est, HBAR * C / (32.0 * PI * PI * z * z * z)))
}

/// `𝓕₀[a] − 𝓕₀[b]` from the pointwise integrand difference, for two
/// responses that differ only slightly.
pub(crate) fn zero_point_energy_delta(
    z: f64,
    a: &MaterialResponse,
    b: &MaterialResponse,
    rel_tol: f64,
) -> Result<Estimate> {
    // differences below ~1e-14 of the kernel are rounding noise
    let inner = Tolerance::relative(0.1 * rel_tol).with_abs(1e-14);
    zero_point_integral(z, rel_tol, 1e-14, |y0| {
        if y0 == 0.0 {
            return Ok(0.0);
        }
        spectral_energy_delta(a, b, z, y0, inner).map(|v| v.value)
    })
    .map(|est| scale_estimate(est, HBAR * C / (32.0 * PI * PI * z * z * z)))
}

fn scale_estimate(est: Estimate, s: f64) -> Estimate {
    Estimate {
        value: s * est.value,
        abs_error: s.abs() * est.abs_error,
        converged: est.converged,
    }
}

/// `∫₀^∞ f(y₀) dy₀` for a spectral function decaying like `e^{-y₀}`, with
/// geometric refinement toward `y₀ → 0`.
fn zero_point_integral<F>(_z: f64, rel_tol: f64, abs_floor: f64, f: F) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut failure: Option<CasimirError> = None;
    let mut eval = |y0: f64| match f(y0) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let tail = integrate_decaying(
        &mut eval,
        1.0,
        1.0,
        8.0,
        Tolerance::relative(rel_tol).with_abs(abs_floor),
        1e-3 * rel_tol,
    );
    let mut value = tail.value;
    let mut abs_error = tail.abs_error;
    let mut converged = tail.converged;
    let mut hi = 1.0;
    for _ in 0..80 {
        let lo = 0.5 * hi;
        let panel = integrate(
            &mut eval,
            lo,
            hi,
            Tolerance::relative(rel_tol).with_abs(abs_floor.max(0.1 * rel_tol * value.abs())),
        );
        value += panel.value;
        abs_error += panel.abs_error;
        converged &= panel.converged;
        let edge = eval(lo).abs();
        hi = lo;
        if hi * edge <= (1e-3 * rel_tol * value.abs()).max(abs_floor) {
            value += hi * eval(0.5 * hi);
            break;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Estimate {
        value,
        abs_error,
        converged,
    })
}

/// Zero-temperature free energy and pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroTemperatureResult {
    pub free_energy_per_area: f64,
    pub pressure: f64,
    pub quadrature_error_estimate: f64,
}

/// `T → 0` limit of the Lifshitz formula, where the Matsubara sum becomes a
/// frequency integral. Drude relaxation is taken at `γ(0)`.
pub fn zero_temperature(z: f64, model: &MaterialResponse, cfg: &EvaluationConfig) -> Result<ZeroTemperatureResult> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("separation must be positive, got {z}"));
    }
    cfg.validate()?;
    let energy = zero_point_energy(z, model, 0.0, cfg.rel_tol)?;
    let inner = Tolerance::relative(0.1 * cfg.rel_tol);
    let p = zero_point_integral(z, cfg.rel_tol, 0.0, |y0| {
        if y0 == 0.0 {
            return Ok(0.0);
        }
        let surface = Surface::resolve(model, y0 * C / (2.0 * z), 0.0)?;
        Ok(y_integral(&surface, y0, inner, true).value)
    })?;
    // P₀ = −(ħ/2π²)(1/8z³)(c/2z) ∫ dy₀ ∫ y² (...)
    let p_scale = -HBAR * C / (32.0 * PI * PI * z.powi(4));
    let rel = (energy.abs_error / energy.value.abs()).max(p.abs_error / p.value.abs());
    Ok(ZeroTemperatureResult {
        free_energy_per_area: energy.value,
        pressure: p_scale * p.value,
        quadrature_error_estimate: if rel.is_finite() { rel } else { 0.0 },
    })
}

fn hybrid_free_energy(z: f64, temperature: f64, model: &MaterialResponse, cfg: &EvaluationConfig) -> Result<LifshitzResult> {
    let tol = 0.1 * cfg.rel_tol;
    let split = thermal_excess(z, temperature, model, temperature, tol)?;
    let zero = zero_point_energy(z, model, temperature, tol)?;
    let free = split.thermal_excess + zero.value;
    let err = (split.thermal_excess_error + zero.abs_error) / free.abs();

    // pressure from the same representation, differentiated in z
    let h = 1e-3 * z;
    let f = |zz: f64| -> Result<f64> {
        let s = thermal_excess(zz, temperature, model, temperature, tol)?;
        let e = zero_point_energy(zz, model, temperature, tol)?;
        Ok(s.thermal_excess + e.value)
    };
    let press = -(f(z - 2.0 * h)? - 8.0 * f(z - h)? + 8.0 * f(z + h)? - f(z + 2.0 * h)?) / (12.0 * h);

    let g0 = spectral_energy(model, z, 0.0, temperature, Tolerance::relative(tol))?;
    let zero_term = K_B * temperature / (2.0 * PI) / (4.0 * z * z) * 0.5 * g0.value;
    if err > cfg.rel_tol {
        return Err(CasimirError::NonConvergence {
            best: free,
            achieved: err,
            requested: cfg.rel_tol,
        });
    }
    Ok(LifshitzResult {
        z,
        temperature,
        model: model.tag().to_string(),
        free_energy_per_area: free,
        pressure: press,
        terms_used: split.explicit_terms,
        quadrature_error_estimate: err,
        zero_frequency_share: (zero_term.abs() / free.abs()).min(1.0),
        mixed_prescription: model.is_mixed(),
        euler_maclaurin_tail: true,
    })
}
