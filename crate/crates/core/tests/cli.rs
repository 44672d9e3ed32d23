use std::path::Path;
use std::process::{Command, Output};

use casimir::constants::{K_B, ZETA3};

fn casimir(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV table as string cells.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn json_header(text: &str) -> serde_json::Value {
    let line = text.lines().find(|l| l.starts_with("# {")).expect("json header line");
    serde_json::from_str(&line[2..]).unwrap()
}

#[test]
fn error_paths_exit_nonzero_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad-map.toml"), "kind = \"table\"\npoints = [[300.0]]\n").unwrap();
    std::fs::write(d.join("bound.csv"), "z_nm,delta_mPa\n500,1.0\n200,1.0\n").unwrap();
    std::fs::write(
        d.join("geometry.toml"),
        "[[body]]\nshape = \"semispace\"\ndensity = 1.0\n[[body]]\nshape = \"semispace\"\ndensity = 1.0\n",
    )
    .unwrap();
    let two_percent_table: String = (0..40)
        .map(|i| {
            let w = 10f64.powf(i as f64 / 13.0);
            format!("{w} {}\n", 81.0 * 0.035 / (w * (w * w + 0.035 * 0.035)))
        })
        .collect();
    std::fs::write(d.join("cut.txt"), two_percent_table).unwrap();

    let cases: &[(&[&str], i32)] = &[
        (&["pressure"], 2),
        (&["pressure", "--z-min", "1um", "--z-max", "2um", "--points", "0"], 2),
        (&["pressure", "--z", "1um", "--model", "copper"], 2),
        (&["pressure", "--z", "-3nm"], 2),
        (&["pressure", "--z", "1um", "--tol", "0.5"], 2),
        (&["pressure", "--z", "1um", "--bogus"], 2),
        (&["entropy", "--z", "1um", "--gamma-map", "bad-map.toml"], 2),
        (&["entropy", "--z", "1um", "--gamma-map", "missing.toml"], 2),
        (&["pft", "--kind", "plate", "--z", "1um", "--radius", "1mm"], 2),
        (&["yukawa", "--bound", "bound.csv", "--geometry", "geometry.toml", "--lambda-min", "1um", "--lambda-max", "2um"], 2),
        (&["optics-convert", "--preset", "Au-paper"], 2),
        (&["pressure", "--z", "1um", "--model", "tabulated", "--optics", "cut.txt"], 2),
        (&["pressure", "--z", "1um", "--model", "tabulated", "--optics", "cut.txt", "--l0", "drude"], 3),
    ];
    for (args, code) in cases {
        let mut a = args.to_vec();
        a.extend(["--out", "result.txt"]);
        let o = casimir(d, &a);
        assert_eq!(o.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
        assert!(!d.join("result.txt").exists(), "{args:?} wrote output");
    }
}

#[test]
fn pressure_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&casimir(
        dir.path(),
        &["pressure", "--z-min", "6um", "--z-max", "15um", "--points", "5", "--model", "ideal"],
    ));
    assert!(out.contains("# units: z [m], free_energy [J/m^2], pressure [Pa]"));
    let r = rows(&out);
    assert_eq!(r.len(), 5);
    for row in &r[3..] {
        let z: f64 = row[0].parse().unwrap();
        let f: f64 = row[1].parse().unwrap();
        let classical = -K_B * 300.0 * ZETA3 / (8.0 * std::f64::consts::PI * z * z);
        assert!(((f - classical) / classical).abs() < 0.01);
    }

    let p = |model: &str| -> f64 {
        let out = stdout(&casimir(dir.path(), &["pressure", "--z", "1um", "--model", model]));
        rows(&out)[0][2].parse().unwrap()
    };
    let split = (p("drude") - p("plasma")).abs() / p("plasma").abs();
    assert!((split - 0.19).abs() < 0.04, "{split}");
}

#[test]
fn free_energy_json_carries_units() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&casimir(dir.path(), &["--format", "json", "free-energy", "--z", "1um,2um"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["units"]["free_energy"], "J/m^2");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(v["rows"][0].get("pressure").is_none());
    assert_eq!(v["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn pft_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&casimir(dir.path(), &["pft", "--kind", "cylinder", "--z", "100nm,20um", "--radius", "100um"]));
    let r = rows(&out);
    let err: f64 = r[0][5].parse().unwrap();
    assert!((err.abs() - 3e-4).abs() < 0.2e-4, "{err}");
    assert_eq!(r[0][6], "true");
    assert_eq!(r[1][6], "false");

    let out = stdout(&casimir(dir.path(), &["pft", "--kind", "sphere", "--z", "100nm", "--radius", "100um"]));
    let r = rows(&out);
    assert_eq!(r[0][4], "");
    assert!(r[0][7].contains("not available"));
    let f: f64 = r[0][3].parse().unwrap();
    assert!((f + 2.72e-10).abs() < 0.01e-10);
}

#[test]
fn entropy_verdicts_in_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&casimir(dir.path(), &["entropy", "--z", "1um", "--gamma-map", "perfect-lattice"]));
    assert_eq!(json_header(&out)["verdict"], "nernst-violated");
    assert_eq!(rows(&out).len(), 25);
    let out = stdout(&casimir(dir.path(), &["entropy", "--z", "1um", "--model", "plasma"]));
    assert_eq!(json_header(&out)["verdict"], "nernst-ok");
}

#[test]
fn gamma_map_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("map.toml"),
        "kind = \"bloch-gruneisen\"\ndebye_t = 165.0\nresidual_ev = 0.0\n",
    )
    .unwrap();
    let grid = ["--t-low", "1", "--points", "4"];
    let mut a = vec!["entropy", "--z", "1um", "--gamma-map", "map.toml"];
    a.extend(grid);
    let from_file = stdout(&casimir(dir.path(), &a));
    let mut b = vec!["entropy", "--z", "1um", "--gamma-map", "perfect-lattice"];
    b.extend(grid);
    let builtin = stdout(&casimir(dir.path(), &b));
    assert_eq!(rows(&from_file), rows(&builtin));
}

#[test]
fn optics_convert_table_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.txt"), "# w_eV im_eps\n0.5 2.0\n1.0 1.0\n2.0 0.3\n4.0 0.05\n").unwrap();
    let out = stdout(&casimir(
        dir.path(),
        &["optics-convert", "--table", "t.txt", "--eps0", "3.0", "--points", "5"],
    ));
    let eps: Vec<f64> = rows(&out).iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(eps.len(), 5);
    assert!(eps.windows(2).all(|w| w[1] < w[0]));
    assert!(eps.iter().all(|&e| e > 1.0 && e < 3.0));
}

#[test]
fn preset_file_overrides_bundled() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("au.toml"),
        "[[preset]]\nname = \"Au-paper\"\nkind = \"drude\"\nomega_p_ev = 7.5\ngamma_ev = 0.035\n",
    )
    .unwrap();
    let p = |preset: &str| -> f64 {
        let out = stdout(&casimir(dir.path(), &["pressure", "--z", "1um", "--model", "plasma", "--preset", preset]));
        rows(&out)[0][2].parse().unwrap()
    };
    let bundled = p("Au-paper");
    let file = p("au.toml");
    assert!(file.abs() < bundled.abs());
}

#[test]
fn mixed_prescription_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&casimir(dir.path(), &["pressure", "--z", "1um", "--model", "plasma", "--l0", "drude"]));
    assert!(out.contains("# note: mixed prescription"));
}
