use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn symcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcomp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn collapses_of_one_three_has_three_layers() {
    let o = symcomp(&["collapses", "--lambda", "1+3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p,members\n0,1+1+1+1\n1,1+1+2\n2,2+2\n");
}

#[test]
fn orientable_surface_range_is_j_plus_one_for_k_two() {
    let o = symcomp(&["ranges", "--dim", "2", "--orientable", "--k", "2", "--jmax", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let j = row["j"].as_u64().unwrap();
        assert_eq!(row["f"].as_str().unwrap(), (j + 1).to_string());
    }
    let caveats = v["caveats"].as_array().unwrap();
    assert!(caveats.iter().any(|c| c.as_str().unwrap().contains("torsion")));
}

#[test]
fn ranges_csv_comes_with_caveats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = symcomp(&["ranges", "--dim", "2", "--orientable", "--open", "--k", "1", "--jmax", "2", "--output", out]);
    assert_eq!(o.status.code(), Some(0));
    let table = std::fs::read_to_string(dir.path().join("ranges.csv")).unwrap();
    assert_eq!(table, "j,f\n0,0\n1,1\n2,2\n");
    let notes = std::fs::read_to_string(dir.path().join("caveats.txt")).unwrap();
    assert!(notes.contains("(j+k)/2 applies"));
}

#[test]
fn suite_is_deterministic_and_passes() {
    let a = symcomp(&["suite", "--seed", "7"]);
    let b = symcomp(&["suite", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert!(v["items"].as_array().unwrap().iter().all(|it| it["passed"] == true));
}

#[test]
fn suite_output_dir_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = symcomp(&["suite", "--seed", "3", "--output", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read(dir.path().join("suite.json")).unwrap();
    assert_eq!(written, symcomp(&["suite", "--seed", "3"]).stdout);
}

#[test]
fn homology_of_circle() {
    let o = symcomp(&["homology", &fixture("circle.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "degree,betti\n0,1\n1,1\n");
}

#[test]
fn malformed_input_exits_two() {
    let o = symcomp(&["homology", &fixture("malformed.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parsing"));
    assert_eq!(symcomp(&["homology", &fixture("missing.json")]).status.code(), Some(2));
    assert_eq!(symcomp(&["collapses", "--lambda", "1+0"]).status.code(), Some(2));
    assert_eq!(symcomp(&["collapses"]).status.code(), Some(2));
}

#[test]
fn caps_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_symcomp"))
        .args(["collapses", "--lambda", "1+3"])
        .env("SYMCOMP_MAX_WEIGHT", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds cap"));
    let o = Command::new(env!("CARGO_BIN_EXE_symcomp"))
        .args(["oracle", "--lambda", "1+1+1+1"])
        .env("SYMCOMP_PLANE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_symcomp")).args(["suite"]).env("SYMCOMP_ORDER_CAP", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectral_commands_pass_on_fixtures() {
    for args in [
        vec!["ss".to_string(), fixture("circle_filtered.json")],
        vec!["compare".to_string(), fixture("compare_identity.json")],
        vec!["totalize".to_string(), fixture("interval.json"), "--augmented".to_string()],
        vec!["flag".to_string(), "--star".to_string(), "3".to_string()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = symcomp(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn augmented_interval_is_acyclic() {
    let o = symcomp(&["totalize", &fixture("interval.json"), "--augmented", "--format", "json"]);
    let text = stdout(&o);
    let first: serde_json::Value = serde_json::Deserializer::from_str(&text).into_iter().next().unwrap().unwrap();
    assert!(first["betti"].as_object().unwrap().values().all(|b| b == 0));
}

#[test]
fn transfer_system_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = symcomp(&["transfer", "--sites", "2", "--kind", "mixed", "--top", "3", "--output", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let system = dir.path().join("system.json");
    assert_eq!(symcomp(&["verify", "dold", system.to_str().unwrap()]).status.code(), Some(0));

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&system).unwrap()).unwrap();
    v["matrices"]["theta_0_0"] = serde_json::json!([[0, 0, "2"]]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = symcomp(&["verify", "dold", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn transfer_respects_site_cap() {
    let o = symcomp(&["transfer", "--sites", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn weakened_certificate_fails_with_itemized_report() {
    let ok = symcomp(&["certificate", "--dim", "4", "--k", "2", "--j", "3", "--case", "high"]);
    assert_eq!(ok.status.code(), Some(0));
    let weak = symcomp(&["certificate", "--dim", "4", "--k", "2", "--j", "3", "--case", "high", "--slack", "1"]);
    assert_eq!(weak.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&weak.stderr).contains("p=0 q=18"));
}

#[test]
fn e1_emits_table_certificate_and_euler_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = symcomp(&["e1", "--lambda", "1+3", "--class", "plane", "--oracle", "builtin", "--output", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let table = std::fs::read_to_string(dir.path().join("e1.csv")).unwrap();
    let cols: std::collections::BTreeSet<&str> = table.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(cols.into_iter().collect::<Vec<_>>(), ["0", "1", "2"]);
    let euler: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("euler.json")).unwrap()).unwrap();
    assert_eq!(euler["consistent"], true);
    assert!(dir.path().join("certificate.json").exists());
}

#[test]
fn e1_without_oracle_data_reports_missing_strata() {
    let o = symcomp(&["e1", "--lambda", "1+2", "--oracle", "none", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::Deserializer::from_str(&stdout(&o)).into_iter().next().unwrap().unwrap();
    assert_eq!(v["incomplete"], true);
}

#[test]
fn euler_against_configuration_space_reference() {
    // W(1+2) in the plane has the Euler characteristic of three ordered points.
    let o = symcomp(&["euler", "--lambda", "1+2", "--reference", "1,3,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = symcomp(&["euler", "--lambda", "1+2", "--reference", "1,3,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn monodromy_reports_all_four_signs() {
    let o = symcomp(&["monodromy", &fixture("loop.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["s1", "s2", "o1", "o2"] {
        assert!(v[key] == 1 || v[key] == -1, "{key}");
    }
    let o = symcomp(&["monodromy", &fixture("even_swap.json")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_ne!(v["pair"]["weighted"], v["pair"]["unweighted"]);
    assert_eq!(v["agreement"], "not_applicable");
}

#[test]
fn csv_is_refused_for_reports_without_a_table() {
    let o = symcomp(&["monodromy", &fixture("loop.json"), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}
