//! Matsubara frequencies and the material-response models.
//!
//! A [`MaterialResponse`] answers two separate questions: what the plate
//! looks like at a Matsubara frequency `ξ_l > 0` (a permittivity, an
//! impedance, or the ideal-metal limit), and which reflection rule applies at
//! `l = 0`. The second is never derived from the first.

use std::sync::Arc;

use serde::Serialize;

use crate::constants::{ev_to_rad_per_s, HBAR, K_B};
use crate::error::{domain, CasimirError, Result};
use crate::optics::{Extrapolation, OpticalTable};

/// `ξ_l = 2π k_B T l / ħ` in rad/s.
pub fn matsubara_frequency(l: u64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return domain(format!("temperature must be positive, got {temperature}"));
    }
    Ok(2.0 * std::f64::consts::PI * K_B * temperature * l as f64 / HBAR)
}

/// Temperature dependence of the Drude relaxation parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GammaMap {
    /// γ(T) equals the reference value at every temperature.
    Constant,
    /// Piecewise-linear interpolation of `(T [K], γ [rad/s])` samples,
    /// clamped to the end values outside the table.
    Table { points: Vec<(f64, f64)> },
    /// Linear-in-T phonon scattering above a quarter of the Debye
    /// temperature, T⁵ below it, plus a constant residual (impurity) part.
    /// Normalised so that γ(reference_t) equals the reference γ.
    BlochGruneisenLike {
        reference_t: f64,
        debye_t: f64,
        residual: f64,
    },
}

impl GammaMap {
    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(CasimirError::Parse("gamma map has no points".into()));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(CasimirError::Parse(format!(
                    "gamma map temperatures must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(CasimirError::Parse(format!(
                    "gamma map must be nondecreasing in T (γ drops from {} to {} at T = {})",
                    w[0].1, w[1].1, w[1].0
                )));
            }
        }
        if points.iter().any(|&(t, g)| t < 0.0 || g < 0.0 || !t.is_finite() || !g.is_finite()) {
            return Err(CasimirError::Parse("gamma map entries must be finite and nonnegative".into()));
        }
        Ok(Self::Table { points })
    }

    /// Perfect lattice: γ → 0 as T → 0.
    pub fn perfect_lattice(reference_t: f64, debye_t: f64) -> Self {
        Self::BlochGruneisenLike {
            reference_t,
            debye_t,
            residual: 0.0,
        }
    }

    /// Lattice with impurities: γ(0) = `residual` (rad/s).
    pub fn with_residual(reference_t: f64, debye_t: f64, residual: f64) -> Self {
        Self::BlochGruneisenLike {
            reference_t,
            debye_t,
            residual,
        }
    }

    fn evaluate(&self, reference_gamma: f64, t: f64) -> f64 {
        match self {
            GammaMap::Constant => reference_gamma,
            GammaMap::Table { points } => {
                let first = points[0];
                let last = points[points.len() - 1];
                if t <= first.0 {
                    return first.1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let i = points.partition_point(|p| p.0 <= t);
                let (t0, g0) = points[i - 1];
                let (t1, g1) = points[i];
                g0 + (g1 - g0) * (t - t0) / (t1 - t0)
            }
            GammaMap::BlochGruneisenLike {
                reference_t,
                debye_t,
                residual,
            } => {
                let shape = |t: f64| {
                    let knee = 0.25 * debye_t;
                    if t >= knee {
                        t
                    } else {
                        knee * (t / knee).powi(5)
                    }
                };
                let phonon = (reference_gamma - residual).max(0.0);
                residual + phonon * shape(t) / shape(*reference_t)
            }
        }
    }

    /// Value of γ as T → 0⁺.
    pub fn zero_temperature_value(&self, reference_gamma: f64) -> f64 {
        self.evaluate(reference_gamma, 0.0)
    }
}

/// Drude plasma frequency and relaxation parameter, both in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrudeParameters {
    pub omega_p: f64,
    /// Relaxation parameter at the reference temperature.
    pub gamma: f64,
    pub gamma_of_t: GammaMap,
}

impl DrudeParameters {
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self> {
        if !(omega_p > 0.0) || !omega_p.is_finite() {
            return domain(format!("plasma frequency must be positive, got {omega_p}"));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return domain(format!("relaxation parameter must be nonnegative, got {gamma}"));
        }
        Ok(Self {
            omega_p,
            gamma,
            gamma_of_t: GammaMap::Constant,
        })
    }

    pub fn from_ev(omega_p_ev: f64, gamma_ev: f64) -> Result<Self> {
        Self::new(ev_to_rad_per_s(omega_p_ev), ev_to_rad_per_s(gamma_ev))
    }

    pub fn with_gamma_map(mut self, map: GammaMap) -> Self {
        self.gamma_of_t = map;
        self
    }

    /// γ(T) in rad/s.
    pub fn gamma_at(&self, temperature: f64) -> f64 {
        self.gamma_of_t.evaluate(self.gamma, temperature)
    }
}

/// `ε(iξ) = 1 + ω_p² / (ξ (ξ + γ(T)))`.
pub fn eps_drude(xi: f64, p: &DrudeParameters, temperature: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return domain("zero-frequency term must use the prescription rule (xi must be > 0)");
    }
    let g = p.gamma_at(temperature);
    Ok(1.0 + p.omega_p * p.omega_p / (xi * (xi + g)))
}

/// `ε(iξ) = 1 + ω_p² / ξ²`.
pub fn eps_plasma(xi: f64, omega_p: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return domain("zero-frequency term must use the prescription rule (xi must be > 0)");
    }
    let r = omega_p / xi;
    Ok(1.0 + r * r)
}

/// Leontovich impedance `Z = 1/√ε` where both descriptions hold.
pub fn impedance_from_eps(_xi: f64, eps: f64) -> Result<f64> {
    if !(eps >= 1.0) {
        return domain(format!("permittivity at imaginary frequency must be >= 1, got {eps}"));
    }
    Ok(1.0 / eps.sqrt())
}

/// Reflection rule for the `l = 0` Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum ZeroFrequencyRule {
    /// `r_TM = r_TE = 1`.
    Ideal,
    /// `r_TM = 1`, `r_TE = 0`.
    Drude,
    /// `r_TM = 1`, `r_TE = (√(c²k⊥² + ω_p²) − ck⊥)/(√(c²k⊥² + ω_p²) + ck⊥)`.
    Plasma { omega_p: f64 },
    /// `r_TM = 1`, `r_TE = (ω_p − ck⊥)/(ω_p + ck⊥)`.
    ImpedanceInfrared { omega_p: f64 },
    /// Finite static permittivity: `r_TM = (ε₀ − 1)/(ε₀ + 1)`, `r_TE = 0`.
    Dielectric { eps0: f64 },
}

/// What the plate presents at a Matsubara frequency `ξ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Response {
    Ideal,
    Permittivity(f64),
    Impedance(f64),
}

/// Material response prescription: bulk response for `ξ > 0` together with
/// an explicit zero-frequency reflection rule.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialResponse {
    IdealMetalSchwinger,
    Drude(DrudeParameters),
    Plasma { omega_p: f64 },
    TabulatedEps(Arc<OpticalTable>),
    ImpedanceInfraredOptics { omega_p: f64 },
    /// Normal skin effect: `Z = 1/√ε_Drude`, which tends to `√(ξγ)/ω_p` for
    /// `ξ ≪ γ`; zero-frequency reflection as for an ideal metal.
    ImpedanceSkinEffect(DrudeParameters),
    /// Any of the above with its own `l = 0` rule replaced.
    Mixed {
        bulk: Box<MaterialResponse>,
        zero_frequency: ZeroFrequencyRule,
    },
}

impl MaterialResponse {
    pub fn drude(p: DrudeParameters) -> Self {
        Self::Drude(p)
    }

    pub fn plasma(omega_p: f64) -> Result<Self> {
        if !(omega_p > 0.0) {
            return domain(format!("plasma frequency must be positive, got {omega_p}"));
        }
        Ok(Self::Plasma { omega_p })
    }

    /// Pair a bulk response with a different zero-frequency rule.
    pub fn mixed(bulk: MaterialResponse, zero_frequency: ZeroFrequencyRule) -> Self {
        let bulk = match bulk {
            MaterialResponse::Mixed { bulk, .. } => bulk,
            other => Box::new(other),
        };
        Self::Mixed {
            bulk,
            zero_frequency,
        }
    }

    /// Replace the relaxation map of a Drude-like bulk response; other
    /// models are returned unchanged.
    pub fn with_gamma_map(self, map: GammaMap) -> Self {
        match self {
            MaterialResponse::Drude(p) => MaterialResponse::Drude(p.with_gamma_map(map)),
            MaterialResponse::ImpedanceSkinEffect(p) => MaterialResponse::ImpedanceSkinEffect(p.with_gamma_map(map)),
            MaterialResponse::Mixed { bulk, zero_frequency } => MaterialResponse::Mixed {
                bulk: Box::new(bulk.with_gamma_map(map)),
                zero_frequency,
            },
            other => other,
        }
    }

    /// Drude-like bulk response frozen at relaxation `gamma` (rad/s).
    pub fn with_fixed_gamma(&self, gamma: f64) -> Self {
        let freeze = |p: &DrudeParameters| DrudeParameters {
            gamma,
            gamma_of_t: GammaMap::Constant,
            ..p.clone()
        };
        match self {
            MaterialResponse::Drude(p) => MaterialResponse::Drude(freeze(p)),
            MaterialResponse::ImpedanceSkinEffect(p) => MaterialResponse::ImpedanceSkinEffect(freeze(p)),
            MaterialResponse::Mixed { bulk, zero_frequency } => MaterialResponse::Mixed {
                bulk: Box::new(bulk.with_fixed_gamma(gamma)),
                zero_frequency: *zero_frequency,
            },
            other => other.clone(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            MaterialResponse::IdealMetalSchwinger => "ideal",
            MaterialResponse::Drude(_) => "drude",
            MaterialResponse::Plasma { .. } => "plasma",
            MaterialResponse::TabulatedEps(_) => "tabulated",
            MaterialResponse::ImpedanceInfraredOptics { .. } => "impedance-ir",
            MaterialResponse::ImpedanceSkinEffect(_) => "impedance-skin",
            MaterialResponse::Mixed { .. } => "mixed",
        }
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self, MaterialResponse::Mixed { .. })
    }

    /// Drude parameters, if the bulk response is Drude-like.
    pub fn drude_parameters(&self) -> Option<&DrudeParameters> {
        match self {
            MaterialResponse::Drude(p) | MaterialResponse::ImpedanceSkinEffect(p) => Some(p),
            MaterialResponse::Mixed { bulk, .. } => bulk.drude_parameters(),
            _ => None,
        }
    }

    /// Plasma frequency used by the model, if it has one.
    pub fn plasma_frequency(&self) -> Option<f64> {
        match self {
            MaterialResponse::Drude(p) | MaterialResponse::ImpedanceSkinEffect(p) => Some(p.omega_p),
            MaterialResponse::Plasma { omega_p }
            | MaterialResponse::ImpedanceInfraredOptics { omega_p } => Some(*omega_p),
            MaterialResponse::Mixed { bulk, .. } => bulk.plasma_frequency(),
            MaterialResponse::TabulatedEps(t) => match t.extrapolation {
                Extrapolation::DrudeTail { omega_p, .. } => Some(omega_p),
                _ => None,
            },
            MaterialResponse::IdealMetalSchwinger => None,
        }
    }

    /// Response at Matsubara frequency `xi > 0` and temperature `t`.
    pub fn response(&self, xi: f64, temperature: f64) -> Result<Response> {
        if !(xi > 0.0) {
            return domain("zero-frequency term must use the prescription rule (xi must be > 0)");
        }
        Ok(match self {
            MaterialResponse::IdealMetalSchwinger => Response::Ideal,
            MaterialResponse::Drude(p) => Response::Permittivity(eps_drude(xi, p, temperature)?),
            MaterialResponse::Plasma { omega_p } => Response::Permittivity(eps_plasma(xi, *omega_p)?),
            MaterialResponse::TabulatedEps(table) => Response::Permittivity(table.eps_at(xi)?),
            MaterialResponse::ImpedanceInfraredOptics { omega_p } => {
                Response::Impedance(impedance_from_eps(xi, eps_plasma(xi, *omega_p)?)?)
            }
            MaterialResponse::ImpedanceSkinEffect(p) => {
                Response::Impedance(impedance_from_eps(xi, eps_drude(xi, p, temperature)?)?)
            }
            MaterialResponse::Mixed { bulk, .. } => bulk.response(xi, temperature)?,
        })
    }

    /// The `l = 0` reflection rule carried by this model.
    pub fn zero_frequency_rule(&self) -> Result<ZeroFrequencyRule> {
        Ok(match self {
            MaterialResponse::IdealMetalSchwinger | MaterialResponse::ImpedanceSkinEffect(_) => {
                ZeroFrequencyRule::Ideal
            }
            MaterialResponse::Drude(_) => ZeroFrequencyRule::Drude,
            MaterialResponse::Plasma { omega_p } => ZeroFrequencyRule::Plasma { omega_p: *omega_p },
            MaterialResponse::ImpedanceInfraredOptics { omega_p } => {
                ZeroFrequencyRule::ImpedanceInfrared { omega_p: *omega_p }
            }
            MaterialResponse::TabulatedEps(table) => match table.extrapolation {
                Extrapolation::DrudeTail { .. } => ZeroFrequencyRule::Drude,
                Extrapolation::ConstantEps { eps0 } => ZeroFrequencyRule::Dielectric { eps0 },
                Extrapolation::None => {
                    return Err(CasimirError::PrescriptionRequired(format!(
                        "table '{}' has no low-frequency extrapolation; supply one or pair it with an explicit rule",
                        table.provenance
                    )))
                }
            },
            MaterialResponse::Mixed { zero_frequency, .. } => *zero_frequency,
        })
    }
}
