use std::path::Path;
use std::process::{Command, Output};

use twosite::spectral::power_spectrum;

fn twosite(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twosite"))
        .args(args)
        .current_dir(dir)
        .env_remove("TWOSITE_OUT")
        .output()
        .expect("binary runs")
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    v.sort();
    v
}

struct Csv {
    header: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Csv {
    fn read(path: &Path) -> Csv {
        let text = std::fs::read_to_string(path).unwrap();
        let header: Vec<String> = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(String::from)
            .collect();
        let mut body = text.lines().skip(header.len());
        let columns = body.next().unwrap().split(',').map(String::from).collect();
        let rows = body
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect();
        Csv { header, columns, rows }
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let i = self
            .columns
            .iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i]).collect()
    }
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn empty_sweep_exits_2_without_files() {
    let dir = tempfile::tempdir().unwrap();
    for sweep in ["U/J=1:0:0.1", "U/J=0:1:0", "U/J=0:1:-0.5"] {
        let o = twosite(dir.path(), &["spectrum", "--sweep", sweep]);
        assert_eq!(o.status.code(), Some(2), "{sweep}");
        assert!(stderr(&o).contains("sweep"), "{}", stderr(&o));
    }
    assert!(files_in(dir.path()).is_empty());
}

#[test]
fn sweep_variable_must_fit_the_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(dir.path(), &["spectrum", "--sweep", "a_s/nm=1:2:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sweep.variable"));
    assert!(files_in(dir.path()).is_empty());
}

#[test]
fn unknown_key_is_a_field_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[model]\nU = { value = 1.0, unit = \"J\" }\ncolour = 3\n").unwrap();
    let o = twosite(dir.path(), &["spectrum", "--config", "run.toml", "--out", "out"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn units_are_whitelisted() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[model]\nU = { value = 1.0, unit = \"kHz\" }\n", "model.U"),
        ("[model]\nU = { value = 1.0, unit = \"nm\" }\n", "model.U"),
        ("[dynamics]\nt_max = { value = 1.0, unit = \"s\" }\n", "dynamics.t_max"),
        (
            "[trap]\nomega_z = { value = 1.0, unit = \"a_z\" }\neta = { value = 1.0, unit = \"a_z\" }\n",
            "trap.omega_z",
        ),
        ("[model]\nU = { value = 1.0 }\n", "unit"),
    ];
    for (text, field) in cases {
        std::fs::write(dir.path().join("run.toml"), text).unwrap();
        let o = twosite(dir.path(), &["dynamics", "--config", "run.toml", "--out", "out"]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(stderr(&o).contains(field), "{text}: {}", stderr(&o));
    }
    assert!(!dir.path().join("out").exists());
}

#[test]
fn preset_must_match_the_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(dir.path(), &["entropy", "--preset", "fig4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = twosite(dir.path(), &["entropy", "--preset", "fig99"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(files_in(dir.path()).is_empty());
}

#[test]
fn numeric_failure_exits_3() {
    // a step this coarse cannot resolve the dynamics for the time average
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(
        dir.path(),
        &["dynamics", "--sweep", "U/J=0:1:1", "--t-max", "10", "--dt", "0.1"],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("time average"), "{}", stderr(&o));
    assert!(files_in(dir.path()).is_empty());
}

#[test]
fn fig4_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(dir.path(), &["spectrum", "--preset", "fig4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(files_in(dir.path()), ["fig4-boson.csv", "fig4-fermion.csv"]);
    let f = Csv::read(&dir.path().join("fig4-fermion.csv"));
    assert_eq!(f.columns, ["U_over_J", "E_a", "E_b", "E_c", "E_d"]);
    assert_eq!(f.rows.len(), 401);
    let b = Csv::read(&dir.path().join("fig4-boson.csv"));
    assert_eq!(b.columns, ["U_over_J", "E_a", "E_b", "E_c"]);
    // with U_i = I = K = 0: E_a,c = (U ∓ √(U² + 16J²))/2, E_b = U, E_d = 0
    for r in &f.rows {
        let u = r[0];
        let root = (u * u + 16.0).sqrt();
        for (got, want) in r[1..].iter().zip([(u - root) / 2.0, u, (u + root) / 2.0, 0.0]) {
            assert!((got - want).abs() < 1e-12, "U = {u}: {got} vs {want}");
        }
    }
    assert!(f.header[0].starts_with("# twosite "));
    assert!(f.header.iter().any(|l| l.contains("statistics = \"fermion\"")));
}

#[test]
fn spectrum_from_flags_matches_preset_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(
        dir.path(),
        &["spectrum", "--model", "fermion", "--sweep", "U/J=-20:20:0.1"],
    );
    assert!(o.status.success());
    let flags = Csv::read(&dir.path().join("spectrum.csv"));
    twosite(dir.path(), &["spectrum", "--preset", "fig4"]);
    let preset = Csv::read(&dir.path().join("fig4-fermion.csv"));
    assert_eq!(flags.rows, preset.rows);
}

#[test]
fn fig5a_pair_tunneling_frequencies() {
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(dir.path(), &["dynamics", "--preset", "fig5a"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = Csv::read(&dir.path().join("fig5a.csv"));
    let mut expect = vec!["t_in_1_over_J", "rho_s", "rho_d", "P_pair", "P_single", "P_none"];
    expect.extend(["re_c0", "im_c0", "re_c1", "im_c1", "re_c2", "im_c2", "re_c3", "im_c3"]);
    assert_eq!(csv.columns, expect);
    let t = csv.column("t_in_1_over_J");
    let p = csv.column("P_pair");
    let s = power_spectrum(&p, t[1] - t[0]).unwrap();
    let pi = std::f64::consts::PI;
    assert!(s.has_peak_near(1.0 / pi, 2, 0.05), "no peak at J/π");
    assert!(s.has_peak_near(2.0 / pi, 2, 0.05), "no peak at 2J/π");
    // probabilities add up
    for r in &csv.rows {
        assert!((r[3] + r[4] + r[5] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn split_start_has_no_tunneling_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(
        dir.path(),
        &["dynamics", "--init", "split", "--t-max", "1", "--dt", "0.5"],
    );
    assert!(o.status.success());
    let csv = Csv::read(&dir.path().join("dynamics.csv"));
    assert_eq!(csv.rows.len(), 3);
    assert!(csv.column("P_pair").iter().all(|p| p.is_nan()));
    let o = twosite(
        dir.path(),
        &["entropy", "--model", "boson", "--init", "split-antisymmetric"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn couplings_in_hertz() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[model]\nJ = { value = 150.0, unit = \"Hz\" }\nU = { value = 1500.0, unit = \"Hz\" }\nU_i = { value = 15.0, unit = \"Hz\" }\n";
    std::fs::write(dir.path().join("hz.toml"), cfg).unwrap();
    let o = twosite(dir.path(), &["spectrum", "--config", "hz.toml"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let hz = Csv::read(&dir.path().join("spectrum.csv"));
    std::fs::write(
        dir.path().join("j.toml"),
        "[model]\nU = { value = 10.0, unit = \"J\" }\nU_i = { value = 0.1, unit = \"J\" }\n",
    )
    .unwrap();
    twosite(dir.path(), &["spectrum", "--config", "j.toml"]);
    let j = Csv::read(&dir.path().join("spectrum.csv"));
    for (a, b) in hz.rows[0].iter().zip(&j.rows[0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn config_file_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("short.toml"),
        "[sweep]\nvariable = \"U/J\"\nstart = 0.0\nstop = 1.0\nstep = 0.5\n",
    )
    .unwrap();
    let o = twosite(dir.path(), &["spectrum", "--preset", "fig4", "--config", "short.toml"]);
    assert!(o.status.success());
    let f = Csv::read(&dir.path().join("fig4-fermion.csv"));
    assert_eq!(f.column("U_over_J"), [0.0, 0.5, 1.0]);
    // a flag beats both
    twosite(
        dir.path(),
        &[
            "spectrum",
            "--preset",
            "fig4",
            "--config",
            "short.toml",
            "--sweep",
            "U/J=2:2:1",
        ],
    );
    assert_eq!(Csv::read(&dir.path().join("fig4-boson.csv")).column("U_over_J"), [2.0]);
}

#[test]
fn output_directory_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_twosite"));
        c.args(args).current_dir(dir.path()).env_remove("TWOSITE_OUT");
        if let Some(e) = env {
            c.env("TWOSITE_OUT", e);
        }
        assert!(c.output().unwrap().status.success());
    };
    run(&["fluct"], Some("env"));
    assert!(dir.path().join("env/fluct.csv").exists());
    run(&["fluct", "--out", "flag"], Some("env"));
    assert!(dir.path().join("flag/fluct.csv").exists());
    std::fs::write(dir.path().join("o.toml"), "[output]\ndir = \"cfg\"\n").unwrap();
    run(&["fluct", "--config", "o.toml"], Some("env"));
    assert!(dir.path().join("cfg/fluct.csv").exists());
    // the directory does not enter the header
    let a = std::fs::read(dir.path().join("env/fluct.csv")).unwrap();
    let b = std::fs::read(dir.path().join("flag/fluct.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn json_output_is_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(dir.path(), &["fluct", "--sweep", "U/J=-1:1:1", "--format", "json"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("fluct.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(v["columns"][0], "U_over_J");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["config"]["output"]["format"], "json");
    // ΔN at U = 0 is 1/(2√2)
    let dn = v["rows"][1][3].as_f64().unwrap();
    assert!((dn - 0.5 / 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn trap_preset_reports_j_near_150_hz() {
    let dir = tempfile::tempdir().unwrap();
    let o = twosite(dir.path(), &["trap", "--preset", "trap", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("trap.json")).unwrap()).unwrap();
    let j = v["summary"]["J_Hz"].as_f64().unwrap();
    assert!((j - 150.0).abs() < 5.0, "J = {j} Hz");
    assert!((v["summary"]["a_rho_over_a_z"].as_f64().unwrap() - 0.1).abs() < 1e-12);
}

#[test]
fn scatter_recovers_inputs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.toml"),
        "[potential]\nkind = \"jost-kohn\"\na_s = { value = -9.54, unit = \"nm\" }\nr0 = { value = 1.66, unit = \"nm\" }\n",
    )
    .unwrap();
    let o = twosite(dir.path(), &["scatter", "--config", "s.toml", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scatter.json")).unwrap()).unwrap();
    assert!((v["summary"]["a_s_fit"].as_f64().unwrap() + 9.54).abs() < 1e-6);
    assert!((v["summary"]["r0_fit"].as_f64().unwrap() - 1.66).abs() < 1e-5);
    assert_eq!(v["columns"], serde_json::json!(["k", "delta_k", "kcotdelta"]));
}

#[test]
fn rerun_is_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    twosite(
        dir.path(),
        &["entropy", "--preset", "fig7", "--threads", "1", "--out", "a"],
    );
    twosite(
        dir.path(),
        &["entropy", "--preset", "fig7", "--threads", "3", "--out", "b"],
    );
    let a = std::fs::read(dir.path().join("a/fig7.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/fig7.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
