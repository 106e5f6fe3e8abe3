//! Binary-invocation helpers and a small interpreter for the committed JSON
//! schema (the draft-07 subset it actually uses: type, enum, properties,
//! required, additionalProperties, items, oneOf, $ref into $defs).

// not every test file uses every helper
#![allow(dead_code)]

use serde_json::Value;
use std::process::Command;

pub struct RunResult {
    pub records: Vec<Value>,
    pub code: i32,
}

/// Runs the stabint binary and parses each stdout line as JSON.
pub fn run(args: &[&str]) -> RunResult {
    let out = Command::new(env!("CARGO_BIN_EXE_stabint"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    let records = stdout
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("bad JSON {:?}: {}", l, e)))
        .collect();
    RunResult {
        records,
        code: out.status.code().expect("exit code"),
    }
}

pub fn run_one(args: &[&str]) -> (Value, i32) {
    let r = run(args);
    assert_eq!(r.records.len(), 1, "expected exactly one record");
    (r.records.into_iter().next().unwrap(), r.code)
}

fn schema() -> Value {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../docs/schema.json"
    ))
    .expect("committed schema file");
    serde_json::from_str(&text).expect("schema parses")
}

fn resolve<'a>(root: &'a Value, node: &'a Value) -> &'a Value {
    if let Some(r) = node.get("$ref").and_then(|v| v.as_str()) {
        let name = r.strip_prefix("#/$defs/").expect("local $defs ref");
        return &root["$defs"][name];
    }
    node
}

fn type_matches(ty: &str, value: &Value) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "integer" => value.is_i64() || value.is_u64(),
        "number" => value.is_number(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn check(root: &Value, node: &Value, value: &Value, path: &str) -> Result<(), String> {
    let node = resolve(root, node);
    if let Some(one_of) = node.get("oneOf").and_then(|v| v.as_array()) {
        let hits: Vec<usize> = one_of
            .iter()
            .enumerate()
            .filter(|(_, alt)| check(root, alt, value, path).is_ok())
            .map(|(i, _)| i)
            .collect();
        return match hits.len() {
            1 => Ok(()),
            0 => Err(format!("{}: no oneOf alternative matches", path)),
            _ => Err(format!("{}: ambiguous oneOf match {:?}", path, hits)),
        };
    }
    if let Some(ty) = node.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(t, value),
            Value::Array(ts) => ts
                .iter()
                .filter_map(|t| t.as_str())
                .any(|t| type_matches(t, value)),
            _ => false,
        };
        if !ok {
            return Err(format!("{}: type mismatch (have {})", path, value));
        }
    }
    if let Some(allowed) = node.get("enum").and_then(|v| v.as_array()) {
        if !allowed.contains(value) {
            return Err(format!("{}: {} not in enum", path, value));
        }
    }
    if let Some(obj) = value.as_object() {
        let props = node.get("properties").and_then(|v| v.as_object());
        if let Some(required) = node.get("required").and_then(|v| v.as_array()) {
            for key in required.iter().filter_map(|k| k.as_str()) {
                if !obj.contains_key(key) {
                    return Err(format!("{}: missing required {:?}", path, key));
                }
            }
        }
        if let Some(props) = props {
            let strict = node.get("additionalProperties").and_then(|v| v.as_bool()) == Some(false);
            for (k, v) in obj {
                match props.get(k) {
                    Some(sub) => check(root, sub, v, &format!("{}/{}", path, k))?,
                    None if strict => return Err(format!("{}: unexpected property {:?}", path, k)),
                    None => {}
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (node.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            check(root, items, v, &format!("{}/{}", path, i))?;
        }
    }
    Ok(())
}

/// Panics unless the record validates against the committed schema.
pub fn assert_valid(record: &Value) {
    let root = schema();
    if let Err(e) = check(&root, &root, record, "$") {
        panic!("schema violation: {}\nrecord: {}", e, record);
    }
}

/// Runs the binary, validates every record, returns the result.
pub fn run_validated(args: &[&str]) -> RunResult {
    let r = run(args);
    for rec in &r.records {
        assert_valid(rec);
    }
    r
}

pub fn run_one_validated(args: &[&str]) -> (Value, i32) {
    let r = run_validated(args);
    assert_eq!(r.records.len(), 1, "expected exactly one record");
    (r.records.into_iter().next().unwrap(), r.code)
}
