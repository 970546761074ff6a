mod common;

use common::{code, run, stderr, stdout};

fn write(dir: &std::path::Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn file_supplies_values_and_flags_override_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "[cycle]\nja-k = -42\njb-k = -32\nth = 40\ntc = 20\n",
    );
    let from_file = run(&["--config", &cfg, "cycle", "--json"]);
    let from_flags = run(&[
        "cycle", "--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "20", "--json",
    ]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, from_flags.stdout);

    let overridden = run(&["--config", &cfg, "cycle", "--th", "60", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&overridden)).unwrap();
    assert_eq!(doc["config"]["th"], 60.0);
    assert_eq!(doc["config"]["ja_k"], -42.0);
}

#[test]
fn other_sections_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "[sweep]\nbranch = \"b-positive\"\n\n[cycle]\nja-k = -42\njb-k = -32\nth = 40\ntc = 20\n",
    );
    assert_eq!(code(&run(&["--config", &cfg, "cycle"])), 0);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "[cycle]\nja_k = -42\n",
        "[cycle]\nth = \"warm\"\n",
        "[cycle]\nth = [40, 50]\n",
        "[cycle\n",
        "ja-k = -42\n",
    ] {
        let cfg = write(dir.path(), text);
        let out = run(&[
            "--config", &cfg, "cycle", "--ja-k", "-42", "--jb-k", "-32", "--tc", "20",
        ]);
        assert_eq!(code(&out), 2, "{text:?}: {}", stderr(&out));
    }
}

#[test]
fn flags_shadow_unused_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "[cycle]\nth = \"warm\"\n");
    let out = run(&[
        "--config", &cfg, "cycle", "--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "20",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn missing_config_file_exits_3() {
    let out = run(&["--config", "/does/not/exist.toml", "cycle"]);
    assert_eq!(code(&out), 3);
}
