use std::path::Path;
use std::process::Command;

use hencky::config::{parse_config, to_json, Mode, PathConfig, PathKind, ProbeMethod, RegionConfig, RunConfig, ScanConfig};
use hencky::analysis::hessian::EnergyPart;
use hencky::driver::build_path;
use hencky::path::drive_path;
use hencky::plasticity::PlasticState;
use hencky::{MaterialParams, ToleranceSet};
use proptest::prelude::*;

fn hencky(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hencky")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i]).collect()
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    let material = (1.0..200.0f64, 1.0..500.0f64, 0.0..2.0f64, 0.0..2.0f64, 0.01..10.0f64, prop::bool::ANY)
        .prop_map(|(mu, kappa, k, k_hat, sigma_y, planar)| MaterialParams { mu, kappa, k, k_hat, sigma_y, n: if planar { 2 } else { 3 } });
    let path = (prop::sample::select(vec![PathKind::Uniaxial, PathKind::SimpleShear, PathKind::Dilatation]), 0.5..1.5f64, 1..500usize, prop::bool::ANY)
        .prop_map(|(kind, a, steps, cycle)| PathConfig { kind, amplitude: Some(a), steps: Some(steps), table: None, cycle });
    let scan = (0.0..10.0f64, 10.0..30.0f64, 0.0..1.0f64, 1..100usize, 1..100usize, prop::option::of(1e-6..1e-3f64), prop::bool::ANY).prop_map(
        |(lo, hi, vol, n_states, n_dirs, h, exact)| ScanConfig {
            region: RegionConfig::Cone { cone_min: lo, cone_max: hi, vol },
            n_states,
            n_dirs,
            h,
            energy: if exact { EnergyPart::Distortional } else { EnergyPart::Full },
            method: if exact { ProbeMethod::Exact } else { ProbeMethod::FiniteDifference },
        },
    );
    (material, prop::option::of(path), prop::option::of(scan), any::<u64>(), 0..3u8).prop_map(|(material, path, scan, seed, mode)| {
        let mode = [Mode::Simulate, Mode::Scan, Mode::Verify][mode as usize];
        let mut c = RunConfig::new(mode);
        c.material = material;
        c.seed = seed;
        c.path = if mode == Mode::Simulate { Some(path.unwrap_or(PathConfig { kind: PathKind::Uniaxial, amplitude: Some(1.1), steps: Some(3), table: None, cycle: false })) } else { path };
        c.scan = if mode == Mode::Scan { Some(scan.unwrap_or(ScanConfig { region: RegionConfig::Cone { cone_min: 0.0, cone_max: 1.0, vol: 0.0 }, n_states: 1, n_dirs: 1, h: None, energy: EnergyPart::Full, method: ProbeMethod::Exact })) } else { scan };
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn config_round_trips(c in arb_config()) {
        prop_assert_eq!(parse_config(&to_json(&c)).unwrap(), c);
    }
}

#[test]
fn exit_codes_follow_the_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let ok = write(dir.path(), "ok.json", r#"{"path": {"kind": "simple_shear", "amplitude": 0.01, "steps": 5}}"#);
    assert_eq!(hencky(&["simulate", "--config", &ok, "--out", out]).0, 0);

    assert_eq!(hencky(&["verify", "--suite", "cone_3d", "--out", out]).0, 1);

    let bad = write(dir.path(), "bad.json", r#"{"material": {"mu": -1}}"#);
    let (code, stderr) = hencky(&["simulate", "--config", &bad, "--out", out]);
    assert_eq!(code, 2);
    assert!(stderr.contains("material.mu"), "{stderr}");
    let conflict = write(dir.path(), "conflict.json", r#"{"mode": "scan"}"#);
    assert_eq!(hencky(&["simulate", "--config", &conflict, "--out", out]).0, 2);
    assert_eq!(hencky(&["verify", "--suite", "nope", "--out", out]).0, 2);
    assert_eq!(hencky(&["simulate", "--config", "/nonexistent.json", "--out", out]).0, 2);

    let blowup = write(dir.path(), "blowup.json", r#"{"path": {"kind": "table", "table": [{"t": 1, "F": [[1e100, 0, 0], [0, 1e100, 0], [0, 0, 1e100]]}]}}"#);
    assert_eq!(hencky(&["simulate", "--config", &blowup, "--out", out]).0, 3);
}

#[test]
fn verify_reports_are_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("c.json"));
    for (p, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        assert_eq!(hencky(&["--seed", seed, "verify", "--suite", "tsts", "--out", p.to_str().unwrap()]).0, 0);
    }
    let (a, b, c) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), std::fs::read(c).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn scan_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scan.json", r#"{"scan": {"region": {"cone_max": 2.0, "vol": 0.2}, "n_states": 10, "n_dirs": 4}}"#);
    let out = dir.path().join("scan.json.out");
    assert_eq!(hencky(&["scan", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["samples"], 40);
    assert!(v["witness"].is_null());
    assert!(v["min_d2"].as_f64().unwrap() > 0.0);
}

#[test]
fn identity_path_is_stress_free() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "id.json", r#"{"path": {"kind": "table", "table": [{"t": 0.5, "F": [[1,0,0],[0,1,0],[0,0,1]]}, {"t": 1, "F": [[1,0,0],[0,1,0],[0,0,1]]}]}}"#);
    let out = dir.path().join("id.csv");
    assert_eq!(hencky(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let (header, rows) = read_csv(&out);
    for name in ["tau11", "tau22", "tau12", "sigma33", "dissipation_cum", "gamma_acc"] {
        assert!(column(&header, &rows, name).iter().all(|&x| x == 0.0), "{name}");
    }
    // the energy column carries the constant offset of W_eH at the identity
    let w0 = MaterialParams::default().reference_energy();
    assert!(column(&header, &rows, "energy").iter().all(|&x| x == w0));
}

#[test]
fn elastic_run_has_one_row_per_step_and_no_dissipation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "el.json", r#"{"material": {"sigma_y": 100}, "path": {"kind": "uniaxial", "amplitude": 1.001, "steps": 3}}"#);
    let out = dir.path().join("el.csv");
    assert_eq!(hencky(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let (header, rows) = read_csv(&out);
    assert_eq!(rows.len(), 3);
    assert!(column(&header, &rows, "dissipation_cum").iter().all(|&x| x == 0.0));
    assert!(column(&header, &rows, "det_Fp").iter().all(|&x| x == 1.0));
    assert!(column(&header, &rows, "f").iter().all(|&x| x < 0.0));
}

#[test]
fn plastic_run_matches_the_library() {
    let text = r#"{"mode": "simulate", "path": {"kind": "simple_shear", "amplitude": 0.1, "steps": 200, "cycle": true}}"#;
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "pl.json", text);
    let out = dir.path().join("pl.csv");
    assert_eq!(hencky(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let (header, rows) = read_csv(&out);

    let c = parse_config(text).unwrap();
    let (history, _) = drive_path(&build_path::<3>(c.path.as_ref().unwrap()), PlasticState::default(), &c.material, &ToleranceSet::default()).unwrap();
    assert_eq!(rows.len(), history.len());
    let dg = column(&header, &rows, "delta_gamma");
    for (x, s) in dg.iter().zip(&history.steps) {
        assert_eq!(*x, s.delta_gamma);
    }
    assert!(dg.iter().any(|&x| x > 0.0));
    let diss = column(&header, &rows, "dissipation_cum");
    assert!(diss.windows(2).all(|w| w[1] >= w[0]));
    assert!(column(&header, &rows, "det_Fp").iter().all(|&x| (x - 1.0).abs() <= 1e-8));
}
