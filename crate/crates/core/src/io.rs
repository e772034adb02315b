//! Subgroup files and report rendering.
//!
//! A subgroup file is `{"level": n, "generators": [[16 integers], ...]}` with
//! row-major entries, reduced mod n on load. Reports are rendered from one
//! serde value, so the JSON, CSV and text forms carry the same data.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chain::Subgroup;
use crate::error::{Error, Result};
use crate::modular::check_modulus;
use crate::symplectic::GroupElement;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgroupFile {
    level: i64,
    generators: Vec<[i64; 16]>,
}

/// Parses subgroup JSON. Syntax and shape errors carry line and column;
/// a non-symplectic generator is reported by index.
pub fn parse_subgroup(text: &str, adjoin_center: bool) -> Result<Subgroup> {
    let file: SubgroupFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let n = check_modulus(file.level)?;
    let mut gens = Vec::with_capacity(file.generators.len());
    for (index, entries) in file.generators.iter().enumerate() {
        let g = GroupElement::from_flat(entries, n).map_err(|e| match e {
            Error::NotSymplectic(level) => Error::NonSymplecticGenerator { index, level },
            other => other,
        })?;
        gens.push(g);
    }
    let h = Subgroup::new(n, gens)?;
    Ok(if adjoin_center { h.adjoin_center() } else { h })
}

pub fn read_subgroup(path: &Path, adjoin_center: bool) -> Result<Subgroup> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_subgroup(&text, adjoin_center).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// The file form of a subgroup's generators.
pub fn subgroup_json(h: &Subgroup) -> String {
    let gens: Vec<Vec<u32>> = h.generators().iter().map(|g| g.flat().to_vec()).collect();
    serde_json::json!({ "level": h.level(), "generators": gens }).to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// Envelope for every command's output.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub command: String,
    pub version: &'static str,
    pub config: BTreeMap<String, Value>,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: impl Into<String>, config: BTreeMap<String, Value>, result: T) -> Self {
        Report { command: command.into(), version: env!("CARGO_PKG_VERSION"), config, result, wall_time_ms: None }
    }

    /// JSON and text render the whole envelope; CSV renders `result` only.
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => render(self, Format::Json),
            Format::Text => render(self, Format::Text),
            Format::Csv => render(&self.result, Format::Csv),
        }
    }
}

fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
}

pub fn render<T: Serialize>(value: &T, format: Format) -> Result<String> {
    let v = to_value(value)?;
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&v)?,
        Format::Text => {
            let mut s = String::new();
            text(&v, 0, &mut s);
            s
        }
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(" ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        x => out.push((prefix.to_string(), scalar(x))),
    }
}

/// An array of records becomes one row per record; anything else becomes
/// `field,value` rows with dotted paths.
fn to_csv(v: &Value) -> Result<String> {
    let mut w = csv::WriterBuilder::new().quote_style(csv::QuoteStyle::NonNumeric).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    match v {
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let flat: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    let mut out = Vec::new();
                    flatten("", r, &mut out);
                    out
                })
                .collect();
            let mut header: Vec<String> = Vec::new();
            for r in &flat {
                for (k, _) in r {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            w.write_record(&header).map_err(io)?;
            for r in &flat {
                let m: BTreeMap<&str, &str> = r.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
                w.write_record(header.iter().map(|k| m.get(k.as_str()).copied().unwrap_or(""))).map_err(io)?;
            }
        }
        other => {
            let mut out = Vec::new();
            flatten("", other, &mut out);
            w.write_record(["field", "value"]).map_err(io)?;
            for (k, x) in out {
                w.write_record([if k.is_empty() { "value".to_string() } else { k }, x]).map_err(io)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Object(_) => None,
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => None,
        Value::Array(a) => Some(format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", "))),
        Value::Null => Some("none".into()),
        x => Some(scalar(x)),
    }
}

fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match inline(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match inline(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}-").unwrap();
                        text(x, depth + 1, out);
                    }
                }
            }
        }
        x => writeln!(out, "{pad}{}", scalar(x)).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::phi0;

    #[test]
    fn identity_only_is_trivial() {
        let h = parse_subgroup(r#"{"level": 5, "generators": [[1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]]}"#, false).unwrap();
        assert_eq!(h.order().unwrap(), 1);
    }

    #[test]
    fn phi0_with_center() {
        let entries: Vec<i64> = phi0(5).flat().iter().map(|&x| x as i64 - 5).collect();
        let text = format!(r#"{{"level": 5, "generators": [{entries:?}]}}"#);
        let h = parse_subgroup(&text, true).unwrap();
        assert_eq!(h.generators().len(), 2);
        assert_eq!(h.order().unwrap(), 4);
        assert_eq!(parse_subgroup(&text, false).unwrap().order().unwrap(), 2);
        let back = parse_subgroup(&subgroup_json(&h), false).unwrap();
        assert_eq!(back.order().unwrap(), 4);
    }

    #[test]
    fn errors() {
        let bad =
            r#"{"level": 5, "generators": [[1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1], [2,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1]]}"#;
        assert_eq!(parse_subgroup(bad, false).unwrap_err(), Error::NonSymplecticGenerator { index: 1, level: 5 });
        let e = parse_subgroup(r#"{"generators": []}"#, false).unwrap_err().to_string();
        assert!(e.contains("level") && e.contains("line 1"), "{e}");
        let e = parse_subgroup("{\"level\": 5,\n \"generators\": [[1,2,3]]}", false).unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = parse_subgroup(r#"{"level": 5, "generators": [[1,0,]]}"#, false).unwrap_err().to_string();
        assert!(e.contains("column"), "{e}");
        assert_eq!(
            parse_subgroup(r#"{"level": 256, "generators": []}"#, false).unwrap_err(),
            Error::ModulusOutOfRange(256)
        );
    }

    #[derive(Serialize)]
    struct Row {
        name: &'static str,
        #[serde(serialize_with = "crate::rational::serialize")]
        value: num_rational::Rational64,
        list: Vec<u32>,
    }

    #[test]
    fn rendering() {
        let rows = vec![
            Row { name: "a", value: num_rational::Rational64::new(1, 2), list: vec![1, 2] },
            Row { name: "b", value: 3.into(), list: vec![] },
        ];
        let csv = render(&rows, Format::Csv).unwrap();
        assert_eq!(csv, "\"name\",\"value\",\"list\"\n\"a\",\"1/2\",\"1 2\"\n\"b\",3,\"\"\n");
        let json = render(&rows, Format::Json).unwrap();
        assert!(json.contains("\"1/2\""));
        let text = render(&rows, Format::Text).unwrap();
        assert!(text.contains("value: 1/2") && text.contains("list: [1, 2]"), "{text}");
        let r = Report::new("x", BTreeMap::from([("seed".to_string(), Value::from(7))]), 40u32);
        assert_eq!(r.render(Format::Csv).unwrap(), "\"field\",\"value\"\n\"value\",40\n");
        assert!(r.render(Format::Text).unwrap().contains("result: 40"));
    }
}
