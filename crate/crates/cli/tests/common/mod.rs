#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spin-stirling"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn data_file(name: &str) -> String {
    workspace_root()
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn schema(name: &str) -> Value {
    let path = workspace_root().join("schemas").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).expect("schema is JSON")
}

/// Validates `doc` against `schema`, covering the draft 2020-12 keywords the
/// shipped schemas use. Unknown keywords panic so a schema can never pass by
/// being silently ignored.
pub fn validate(schema: &Value, doc: &Value) -> Result<(), String> {
    check(schema, schema, doc, "$")
}

const ANNOTATIONS: [&str; 5] = ["$schema", "$id", "$defs", "title", "description"];

fn check(root: &Value, schema: &Value, doc: &Value, at: &str) -> Result<(), String> {
    let obj = schema.as_object().expect("schema node is an object");
    for (key, rule) in obj {
        match key.as_str() {
            k if ANNOTATIONS.contains(&k) => {}
            "$ref" => {
                let target = rule
                    .as_str()
                    .and_then(|r| r.strip_prefix("#/"))
                    .expect("local $ref");
                let node = target.split('/').fold(root, |n, part| &n[part]);
                assert!(!node.is_null(), "dangling $ref {target}");
                check(root, node, doc, at)?;
            }
            "type" => {
                let allowed: Vec<&str> = match rule {
                    Value::String(s) => vec![s.as_str()],
                    Value::Array(a) => a.iter().map(|t| t.as_str().unwrap()).collect(),
                    _ => panic!("bad type rule"),
                };
                if !allowed.iter().any(|t| has_type(doc, t)) {
                    return Err(format!("{at}: expected {allowed:?}, got {doc}"));
                }
            }
            "enum" => {
                if !rule.as_array().unwrap().contains(doc) {
                    return Err(format!("{at}: {doc} not in {rule}"));
                }
            }
            "required" => {
                if let Some(map) = doc.as_object() {
                    for name in rule.as_array().unwrap() {
                        if !map.contains_key(name.as_str().unwrap()) {
                            return Err(format!("{at}: missing {name}"));
                        }
                    }
                }
            }
            "properties" => {
                if let Some(map) = doc.as_object() {
                    for (name, sub) in rule.as_object().unwrap() {
                        if let Some(v) = map.get(name) {
                            check(root, sub, v, &format!("{at}.{name}"))?;
                        }
                    }
                }
            }
            "additionalProperties" => {
                assert_eq!(rule, &Value::Bool(false), "only `false` is supported");
                if let Some(map) = doc.as_object() {
                    let known = obj.get("properties").and_then(Value::as_object);
                    if let Some(extra) = map
                        .keys()
                        .find(|k| !known.is_some_and(|p| p.contains_key(*k)))
                    {
                        return Err(format!("{at}: unexpected property {extra}"));
                    }
                }
            }
            "items" => {
                if let Some(items) = doc.as_array() {
                    for (i, item) in items.iter().enumerate() {
                        check(root, rule, item, &format!("{at}[{i}]"))?;
                    }
                }
            }
            "minItems" => {
                if let Some(items) = doc.as_array() {
                    if (items.len() as u64) < rule.as_u64().unwrap() {
                        return Err(format!("{at}: fewer than {rule} items"));
                    }
                }
            }
            "minimum" | "maximum" | "exclusiveMinimum" => {
                if let Some(x) = doc.as_f64() {
                    let bound = rule.as_f64().unwrap();
                    let ok = match key.as_str() {
                        "minimum" => x >= bound,
                        "maximum" => x <= bound,
                        _ => x > bound,
                    };
                    if !ok {
                        return Err(format!("{at}: {x} violates {key} {bound}"));
                    }
                }
            }
            other => panic!("schema keyword `{other}` not supported by the test validator"),
        }
    }
    Ok(())
}

fn has_type(v: &Value, t: &str) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        other => panic!("unknown type `{other}`"),
    }
}
