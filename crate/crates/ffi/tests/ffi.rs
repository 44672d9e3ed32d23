use std::ffi::{CStr, CString};
use std::ptr;

use casimir_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(casimir_last_error_message()) }.to_string_lossy().into_owned()
}

fn preset(name: &str) -> *mut CasimirModel {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { casimir_model_preset(name.as_ptr(), &mut m) }, CasimirStatus::Ok);
    assert!(!m.is_null());
    m
}

#[test]
fn drude_plasma_split_through_handles() {
    let drude = preset("Au-paper");
    let mut plasma = ptr::null_mut();
    assert_eq!(unsafe { casimir_model_plasma(9.0, &mut plasma) }, CasimirStatus::Ok);
    let mut pd = 0.0;
    let mut pp = 0.0;
    unsafe {
        assert_eq!(casimir_pressure(drude, 1e-6, 300.0, 0.0, &mut pd), CasimirStatus::Ok);
        assert_eq!(casimir_pressure(plasma, 1e-6, 300.0, 1e-8, &mut pp), CasimirStatus::Ok);
    }
    let split = (pd - pp).abs() / pp.abs();
    assert!((split - 0.19).abs() < 0.04, "{split}");

    let mut r = CasimirLifshitzResult::default();
    assert_eq!(unsafe { casimir_free_energy(drude, 1e-6, 300.0, 0.0, &mut r) }, CasimirStatus::Ok);
    assert!(r.free_energy_per_area < 0.0 && r.terms_used > 0);
    assert!((r.pressure - pd).abs() <= 1e-6 * pd.abs());
    assert!(last_error().is_empty());
    unsafe {
        casimir_model_free(drude);
        casimir_model_free(plasma);
        casimir_model_free(ptr::null_mut());
    }
}

#[test]
fn library_errors_map_to_status() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { casimir_model_drude(-1.0, 0.035, &mut m) }, CasimirStatus::Domain);
    assert!(m.is_null());
    assert!(!last_error().is_empty());

    let name = CString::new("Unobtainium").unwrap();
    assert_eq!(unsafe { casimir_model_preset(name.as_ptr(), &mut m) }, CasimirStatus::Parse);
    assert!(last_error().contains("Unobtainium"));

    let ideal = {
        let mut p = ptr::null_mut();
        assert_eq!(unsafe { casimir_model_ideal(&mut p) }, CasimirStatus::Ok);
        p
    };
    let mut v = 0.0;
    assert_eq!(unsafe { casimir_pressure(ideal, -1.0, 300.0, 0.0, &mut v) }, CasimirStatus::Domain);
    assert_eq!(unsafe { casimir_pressure(ideal, 1e-6, 300.0, 0.5, &mut v) }, CasimirStatus::Domain);
    assert_eq!(unsafe { casimir_pressure(ptr::null(), 1e-6, 300.0, 0.0, &mut v) }, CasimirStatus::NullPointer);
    assert_eq!(unsafe { casimir_pressure(ideal, 1e-6, 300.0, 0.0, ptr::null_mut()) }, CasimirStatus::NullPointer);
    assert_eq!(unsafe { casimir_pft_force(7, 1e-7, 1e-4, &mut v) }, CasimirStatus::UnsupportedGeometry);
    unsafe { casimir_model_free(ideal) };
}

#[test]
fn closed_forms() {
    let mut f = 0.0;
    let sphere = CasimirGeometry::SpherePlate as u32;
    assert_eq!(unsafe { casimir_pft_force(sphere, 100e-9, 100e-6, &mut f) }, CasimirStatus::Ok);
    assert!((f + 2.72e-10).abs() < 0.01e-10);

    let mut c = CasimirCylinderForce::default();
    assert_eq!(unsafe { casimir_exact_cylinder_force(100e-9, 100e-6, &mut c) }, CasimirStatus::Ok);
    assert!((c.relative_deviation + 2.886e-4).abs() < 1e-6 && c.valid);

    let mut s = 0.0;
    assert_eq!(unsafe { casimir_drude_zero_t_entropy(1e-6, 9.0, &mut s) }, CasimirStatus::Ok);
    assert!(s < 0.0);

    let mut p1 = 0.0;
    let mut p2 = 0.0;
    unsafe {
        assert_eq!(casimir_yukawa_pressure_semispaces(1e-6, 19300.0, 19300.0, 1e10, 1e-6, &mut p1), CasimirStatus::Ok);
        assert_eq!(casimir_yukawa_pressure_semispaces(1e-6, 19300.0, 19300.0, 2e10, 1e-6, &mut p2), CasimirStatus::Ok);
    }
    assert!(p1 < 0.0);
    assert_eq!(p2, 2.0 * p1);
}

#[test]
fn errors_are_per_thread() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { casimir_model_drude(-1.0, 0.0, &mut m) }, CasimirStatus::Domain);
    let other = std::thread::spawn(last_error).join().unwrap();
    assert!(other.is_empty());
    assert!(!last_error().is_empty());
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(casimir_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api_and_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = std::fs::read_to_string(dir.join("casimir.h")).unwrap();
    for name in [
        "casimir_model_preset",
        "casimir_model_free",
        "casimir_free_energy",
        "casimir_pressure",
        "casimir_pft_force",
        "casimir_exact_cylinder_force",
        "casimir_drude_zero_t_entropy",
        "casimir_yukawa_pressure_semispaces",
        "casimir_last_error_message",
        "typedef struct CasimirModel CasimirModel;",
    ] {
        assert!(header.contains(name), "{name}");
    }
    let src = std::env::temp_dir().join(format!("casimir_header_check_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"casimir.h\"\nint main(void) { CasimirModel *m = 0; CasimirLifshitzResult r;\n\
         (void)r; return casimir_model_ideal(&m) == CASIMIR_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&dir)
        .arg(&src)
        .status();
    let _ = std::fs::remove_file(&src);
    match status {
        Ok(s) => assert!(s.success(), "header does not compile as C99"),
        Err(_) => eprintln!("no C compiler found; skipped syntax check"),
    }
}
