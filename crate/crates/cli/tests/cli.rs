use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkz-mirror"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn coeff(file: &serde_json::Value, m: &[u32]) -> Option<(String, String)> {
    file["terms"].as_array()?.iter().find_map(|t| {
        let exps: Vec<u32> = serde_json::from_value(t["m"].clone()).ok()?;
        (exps == m).then(|| {
            (
                t["num"].as_str().unwrap().to_string(),
                t["den"].as_str().unwrap().to_string(),
            )
        })
    })
}

#[test]
fn series_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let out = run(&["series", "bvs-33", "--what", "F", "--degree", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file["d"], 2);
    assert_eq!(file["D"], 4);
    assert_eq!(coeff(&file, &[1, 1]), Some(("720".into(), "1".into())));
    assert_eq!(coeff(&file, &[0, 0]), Some(("1".into(), "1".into())));
}

#[test]
fn csv_and_table_formats() {
    let out = run(&["series", "bvs-33", "--what", "F", "--degree", "2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("m1,m2,num,den"));
    assert!(text.lines().any(|l| l == "1,1,720,1"));

    let out = run(&["series", "bvs-33", "--what", "F", "--degree", "2", "--format", "table"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("720"));
}

#[test]
fn output_is_deterministic() {
    let args = ["series", "bvs-33", "--what", "q-i", "--i", "1", "--degree", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let args = ["check", "bvs-33", "--degree", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn canonical_coordinate_starts_with_fifteen() {
    let out = run(&["series", "bvs-33", "--what", "q-i", "--i", "1", "--degree", "2"]);
    assert_eq!(code(&out), 0);
    let file = json(&out);
    assert_eq!(coeff(&file, &[1, 0]), Some(("1".into(), "1".into())));
    assert_eq!(coeff(&file, &[2, 0]), Some(("15".into(), "1".into())));
    assert_eq!(coeff(&file, &[1, 1]), Some(("33".into(), "1".into())));
}

#[test]
fn negative_control_exits_one_with_witness() {
    let out = run(&["check", "N=((1));L=(2)", "--degree", "1", "--check", "integrality"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["pass"], false);
    assert_eq!(report["failures"], 1);
    let w = &report["witnesses"][0];
    assert_eq!(w["params"]["m"], serde_json::json!([1]));
    assert_eq!(w["value"]["num"], "3");
    assert_eq!(w["value"]["den"], "2");
}

#[test]
fn pipeline_passes_on_catalog_spec() {
    let out = run(&["check", "bvs-33", "--degree", "6", "--primes", "2,3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["series", "bvs-33", "--what", "q-L"])), 2);
    assert_eq!(code(&run(&["check", "bvs-33", "--primes", "4"])), 2);
    assert_eq!(code(&run(&["series", "no-such-spec"])), 2);
    assert_eq!(code(&run(&["series", "N=((1,2)"])), 2);
    assert_eq!(code(&run(&["verify", "--lemma", "bogus"])), 2);
    assert_eq!(code(&run(&["specialize", "bvs-33", "--map", "z1=z1"])), 2);
}

#[test]
fn diagonal_specialization() {
    let out = run(&["specialize", "bvs-33", "--what", "F", "--map", "z1=z2", "--degree", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let values: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(values, ["1", "12", "900", "94080"]);
}

#[test]
fn catalog_lists_examples() {
    let out = run(&["catalog"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in ["bvs-33", "bvs-33-diagonal", "apery-zeta2", "apery-zeta3"] {
        assert!(text.contains(name), "missing {name}");
    }
    assert_eq!(code(&run(&["catalog", "bvs-33"])), 0);
}

#[test]
fn spec_file_matches_inline_spec() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, r#"{"d": 2, "k": 1, "N": [[3, 3]], "L": [1, 0]}"#).unwrap();
    let from_file = run(&["series", path.to_str().unwrap(), "--what", "G-L", "--degree", "3"]);
    let inline = run(&["series", "N=((3,3));L=(1,0)", "--what", "G-L", "--degree", "3"]);
    assert_eq!(code(&from_file), 0, "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(from_file.stdout, inline.stdout);
}

#[test]
fn verifiers_report_pass_and_fail() {
    let out = run(&["verify", "--lemma", "comb", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["verify", "--lemma", "harmonic-shift", "--spec", "N=((2,1))", "--L", "(1,1)", "--box", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["verify", "--lemma", "gamma-p", "--primes", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["pass"], false);
}
