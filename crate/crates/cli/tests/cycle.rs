mod common;

use common::{code, run, schema, stderr, stdout, validate};
use serde_json::Value;

const PRESSURE_PAIR: [&str; 8] = ["--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "20"];

fn cycle(extra: &[&str]) -> std::process::Output {
    let mut args = vec!["cycle"];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn table_reports_heat_engine_below_carnot() {
    let out = cycle(&PRESSURE_PAIR);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# ja-k = -42, jb-k = -32, th = 40, tc = 20\n"));
    let field = |name: &str| -> String {
        let line = text
            .lines()
            .find(|l| l.split_whitespace().next() == Some(name))
            .unwrap();
        line.split_whitespace().nth(1).unwrap().to_string()
    };
    assert_eq!(field("mode"), "heat_engine");
    let eta: f64 = field("eta").parse().unwrap();
    assert!(eta > 0.0 && eta < 0.5, "eta = {eta}");
    for name in ["Q_AB", "Q_BC", "Q_CD", "Q_DA", "W", "Q_in", "Q_out"] {
        let line = text.lines().find(|l| l.starts_with(name)).unwrap();
        assert_eq!(line.split_whitespace().count(), 3, "{line}");
    }
}

#[test]
fn json_matches_schema_and_units_agree() {
    let out = cycle(&[&PRESSURE_PAIR[..], &["--json"]].concat());
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    validate(&schema("cycle.schema.json"), &doc).unwrap();
    assert_eq!(doc["mode"], "heat_engine");
    let eta = doc["eta"].as_f64().unwrap();
    assert!(eta < doc["eta_carnot"].as_f64().unwrap());
    let w_k = doc["ledger_K"]["work"].as_f64().unwrap();
    let w_ev = doc["ledger_eV"]["work"].as_f64().unwrap();
    assert!((w_ev / w_k - 8.617_333_262e-5).abs() < 1e-15);
}

#[test]
fn non_engine_modes_report_null_eta() {
    let out = cycle(&[
        "--ja-k", "10", "--jb-k", "40", "--th", "30", "--tc", "20", "--json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    validate(&schema("cycle.schema.json"), &doc).unwrap();
    assert_ne!(doc["mode"], "heat_engine");
    assert!(doc["eta"].is_null());
}

#[test]
fn output_is_byte_identical_across_runs() {
    for extra in [&[][..], &["--json"][..]] {
        let args = [&PRESSURE_PAIR[..], extra].concat();
        assert_eq!(cycle(&args).stdout, cycle(&args).stdout);
    }
}

#[test]
fn reversed_temperatures_exit_2_naming_the_flags() {
    let out = cycle(&["--ja-k", "-42", "--jb-k", "-32", "--th", "20", "--tc", "40"]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("t_hot must exceed t_cold"), "{err}");
    assert!(err.contains("--th"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn zero_width_cycle_exits_2() {
    let out = cycle(&["--ja-k", "-32", "--jb-k", "-32", "--th", "40", "--tc", "20"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("zero-width"));
}

#[test]
fn each_bad_value_names_its_flag() {
    let cases: [(&[&str], &str); 4] = [
        (
            &["--ja-k", "1e9", "--jb-k", "-32", "--th", "40", "--tc", "20"],
            "--ja-k",
        ),
        (
            &["--ja-k", "-42", "--jb-k", "nan", "--th", "40", "--tc", "20"],
            "--jb-k",
        ),
        (
            &["--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "-1"],
            "--tc",
        ),
        (&["--ja-k", "-42", "--jb-k", "-32", "--tc", "20"], "--th"),
    ];
    for (args, flag) in cases {
        let out = cycle(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn unparsable_number_exits_2() {
    let out = cycle(&[
        "--ja-k", "cold", "--jb-k", "-32", "--th", "40", "--tc", "20",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn warm_corners_warn_on_stderr_only() {
    let out = cycle(&PRESSURE_PAIR);
    let err = stderr(&out);
    assert!(err.contains("corner B"), "{err}");
    assert!(!stdout(&out).contains("warning"));
}
