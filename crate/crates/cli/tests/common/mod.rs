//! Shared helpers for the CLI test suites: binary invocation and a small
//! JSON-Schema checker covering the subset used by the shipped schemas
//! (type/required/properties/additionalProperties/enum).
#![allow(dead_code)] // each test target uses a different subset

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_twinbeam")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .env_remove("TWINBEAM_OUT_DIR")
        .output()
        .expect("binary failed to launch")
}

pub fn tmp_path(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    p.push(name);
    p.to_str().unwrap().to_string()
}

pub fn repo_file(rel: &str) -> PathBuf {
    // crates/cli → workspace root
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

/// Validate `value` against the subset of JSON Schema the shipped
/// schemas use. Returns every violation found.
pub fn schema_violations(schema: &Value, value: &Value, path: &str) -> Vec<String> {
    let mut errs = Vec::new();
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "number" => value.is_number(),
            "integer" => value.is_u64() || value.is_i64(),
            "string" => value.is_string(),
            "array" => value.is_array(),
            "boolean" => value.is_boolean(),
            other => {
                errs.push(format!("{path}: unsupported schema type {other}"));
                true
            }
        };
        if !ok {
            errs.push(format!("{path}: expected {ty}, got {value}"));
            return errs;
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            errs.push(format!("{path}: {value} not in enum {allowed:?}"));
        }
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    errs.push(format!("{path}: missing required key {key}"));
                }
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
            if let Some(props) = props {
                for key in obj.keys() {
                    if !props.contains_key(key) {
                        errs.push(format!("{path}: unexpected key {key}"));
                    }
                }
            }
        }
        if let Some(props) = props {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    errs.extend(schema_violations(sub, v, &format!("{path}.{key}")));
                }
            }
        }
    }
    errs
}

pub fn assert_matches_schema(schema_rel: &str, json_text: &str) {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(repo_file(schema_rel)).unwrap()).unwrap();
    let value: Value = serde_json::from_str(json_text).unwrap();
    let errs = schema_violations(&schema, &value, "$");
    assert!(errs.is_empty(), "schema violations: {errs:?}");
}
