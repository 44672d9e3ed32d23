//! C interface to the Casimir library.
//!
//! Every function returns a [`CasimirStatus`] and writes results through
//! out-pointers. On failure the message is kept per thread and can be read
//! with [`casimir_last_error_message`]. Models are opaque handles created by
//! the `casimir_model_*` constructors and released with
//! [`casimir_model_free`]. Frequencies cross the boundary in eV, everything
//! else in SI units.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use casimir::constants::ev_to_rad_per_s;
use casimir::geometry::{self, GeometryCase};
use casimir::lifshitz::{self, EvaluationConfig};
use casimir::models::{DrudeParameters, MaterialResponse};
use casimir::presets::{self, Preset};
use casimir::thermo;
use casimir::yukawa::{self, BodySpec, YukawaParams};
use casimir::CasimirError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirStatus {
    Ok = 0,
    Domain = 1,
    PrescriptionRequired = 2,
    ExtrapolationRequired = 3,
    UnsupportedGeometry = 4,
    NonConvergence = 5,
    Parse = 6,
    NullPointer = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirGeometry {
    CylinderPlate = 1,
    SpherePlate = 2,
}

/// Opaque material model.
pub struct CasimirModel {
    inner: MaterialResponse,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CasimirLifshitzResult {
    /// J/m².
    pub free_energy_per_area: f64,
    /// Pa.
    pub pressure: f64,
    pub terms_used: u64,
    pub quadrature_error_estimate: f64,
    pub zero_frequency_share: f64,
    pub mixed_prescription: bool,
    pub euler_maclaurin_tail: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CasimirCylinderForce {
    /// N/m.
    pub value: f64,
    pub pft: f64,
    pub relative_deviation: f64,
    pub valid: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &CasimirError) -> CasimirStatus {
    match e {
        CasimirError::Domain(_) => CasimirStatus::Domain,
        CasimirError::PrescriptionRequired(_) => CasimirStatus::PrescriptionRequired,
        CasimirError::ExtrapolationRequired { .. } => CasimirStatus::ExtrapolationRequired,
        CasimirError::UnsupportedGeometry(_) => CasimirStatus::UnsupportedGeometry,
        CasimirError::NonConvergence { .. } => CasimirStatus::NonConvergence,
        CasimirError::Parse(_) => CasimirStatus::Parse,
    }
}

enum Failure {
    Lib(CasimirError),
    Null(&'static str),
}

impl From<CasimirError> for Failure {
    fn from(e: CasimirError) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CasimirStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            CasimirStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            CasimirStatus::NullPointer
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            CasimirStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn model<'a>(p: *const CasimirModel) -> Result<&'a MaterialResponse, Failure> {
    p.as_ref().map(|m| &m.inner).ok_or(Failure::Null("model"))
}

fn boxed(inner: MaterialResponse) -> *mut CasimirModel {
    Box::into_raw(Box::new(CasimirModel { inner }))
}

fn config(rel_tol: f64) -> Result<EvaluationConfig, Failure> {
    if rel_tol > 0.0 {
        Ok(EvaluationConfig::with_tolerance(rel_tol)?)
    } else {
        Ok(EvaluationConfig::default())
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn casimir_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn casimir_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Drude model (Drude bulk, `r_TE = 0` at zero frequency) from a bundled
/// preset such as `"Au-paper"`; tabulated presets give a tabulated model.
#[no_mangle]
pub unsafe extern "C" fn casimir_model_preset(name: *const c_char, model_out: *mut *mut CasimirModel) -> CasimirStatus {
    guard(|| {
        let dst = out(model_out, "model_out")?;
        if name.is_null() {
            return Err(Failure::Null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| CasimirError::Parse("preset name is not UTF-8".into()))?;
        let inner = match presets::lookup(name)? {
            Preset::Drude { params, .. } => MaterialResponse::drude(params),
            Preset::Table { table, .. } => MaterialResponse::TabulatedEps(table),
        };
        *dst = boxed(inner);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn casimir_model_drude(
    omega_p_ev: f64,
    gamma_ev: f64,
    model_out: *mut *mut CasimirModel,
) -> CasimirStatus {
    guard(|| {
        let dst = out(model_out, "model_out")?;
        *dst = boxed(MaterialResponse::drude(DrudeParameters::from_ev(omega_p_ev, gamma_ev)?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn casimir_model_plasma(omega_p_ev: f64, model_out: *mut *mut CasimirModel) -> CasimirStatus {
    guard(|| {
        let dst = out(model_out, "model_out")?;
        *dst = boxed(MaterialResponse::plasma(ev_to_rad_per_s(omega_p_ev))?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn casimir_model_impedance_ir(omega_p_ev: f64, model_out: *mut *mut CasimirModel) -> CasimirStatus {
    guard(|| {
        let dst = out(model_out, "model_out")?;
        let omega_p = ev_to_rad_per_s(omega_p_ev);
        if omega_p <= 0.0 || !omega_p.is_finite() {
            return Err(CasimirError::Domain(format!("plasma frequency must be positive, got {omega_p_ev} eV")).into());
        }
        *dst = boxed(MaterialResponse::ImpedanceInfraredOptics { omega_p });
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn casimir_model_ideal(model_out: *mut *mut CasimirModel) -> CasimirStatus {
    guard(|| {
        *out(model_out, "model_out")? = boxed(MaterialResponse::IdealMetalSchwinger);
        Ok(())
    })
}

/// Releases a model; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn casimir_model_free(model: *mut CasimirModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Plate-plate free energy and pressure. `rel_tol <= 0` selects the default.
#[no_mangle]
pub unsafe extern "C" fn casimir_free_energy(
    model: *const CasimirModel,
    z: f64,
    temperature: f64,
    rel_tol: f64,
    result_out: *mut CasimirLifshitzResult,
) -> CasimirStatus {
    guard(|| {
        let m = self::model(model)?;
        let dst = out(result_out, "result_out")?;
        let r = lifshitz::free_energy(z, temperature, m, &config(rel_tol)?)?;
        *dst = CasimirLifshitzResult {
            free_energy_per_area: r.free_energy_per_area,
            pressure: r.pressure,
            terms_used: r.terms_used,
            quadrature_error_estimate: r.quadrature_error_estimate,
            zero_frequency_share: r.zero_frequency_share,
            mixed_prescription: r.mixed_prescription,
            euler_maclaurin_tail: r.euler_maclaurin_tail,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn casimir_pressure(
    model: *const CasimirModel,
    z: f64,
    temperature: f64,
    rel_tol: f64,
    pressure_out: *mut f64,
) -> CasimirStatus {
    guard(|| {
        let m = self::model(model)?;
        let dst = out(pressure_out, "pressure_out")?;
        *dst = lifshitz::pressure(z, temperature, m, &config(rel_tol)?)?;
        Ok(())
    })
}

/// Ideal-metal PFT force: N/m for a cylinder, N for a sphere. `kind` is a
/// [`CasimirGeometry`] value.
#[no_mangle]
pub unsafe extern "C" fn casimir_pft_force(
    kind: u32,
    z: f64,
    radius: f64,
    force_out: *mut f64,
) -> CasimirStatus {
    guard(|| {
        let dst = out(force_out, "force_out")?;
        let case = match kind {
            k if k == CasimirGeometry::CylinderPlate as u32 => GeometryCase::cylinder(z, radius)?,
            k if k == CasimirGeometry::SpherePlate as u32 => GeometryCase::sphere(z, radius)?,
            k => return Err(CasimirError::UnsupportedGeometry(format!("unknown geometry kind {k}")).into()),
        };
        *dst = geometry::pft_force(&case)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn casimir_exact_cylinder_force(
    z: f64,
    radius: f64,
    result_out: *mut CasimirCylinderForce,
) -> CasimirStatus {
    guard(|| {
        let dst = out(result_out, "result_out")?;
        let c = geometry::exact_cylinder_force(z, radius)?;
        *dst = CasimirCylinderForce {
            value: c.value,
            pft: c.pft,
            relative_deviation: c.relative_deviation,
            valid: c.valid,
        };
        Ok(())
    })
}

/// Zero-temperature entropy per area of Drude plates, J/(K m²).
#[no_mangle]
pub unsafe extern "C" fn casimir_drude_zero_t_entropy(z: f64, omega_p_ev: f64, entropy_out: *mut f64) -> CasimirStatus {
    guard(|| {
        let dst = out(entropy_out, "entropy_out")?;
        *dst = thermo::drude_zero_T_entropy(z, ev_to_rad_per_s(omega_p_ev))?;
        Ok(())
    })
}

/// Yukawa pressure between two homogeneous semispaces (densities in kg/m³).
#[no_mangle]
pub unsafe extern "C" fn casimir_yukawa_pressure_semispaces(
    z: f64,
    density_a: f64,
    density_b: f64,
    alpha: f64,
    lambda: f64,
    pressure_out: *mut f64,
) -> CasimirStatus {
    guard(|| {
        let dst = out(pressure_out, "pressure_out")?;
        let a = BodySpec::semispace(density_a)?;
        let b = BodySpec::semispace(density_b)?;
        *dst = yukawa::yukawa_pressure_plates(z, &a, &b, &YukawaParams::new(alpha, lambda)?)?;
        Ok(())
    })
}
