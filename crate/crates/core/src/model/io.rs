//! Instance files.
//!
//! Text format (UTF-8, line oriented, `#` starts a comment):
//!
//! ```text
//! # name: example
//! # family: random01
//! # seed: 7
//! n m l
//! a_11 … a_1n b_1        (m lines)
//! c_11 … c_1n d_1        (l lines)
//! ```
//!
//! Numbers are decimal integers, decimal fractions or `p/q` ratios.
//! `# key: value` comments before the header are kept as metadata. A JSON
//! mirror `{"name", "A", "b", "C", "d"}` is accepted interchangeably.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Family, Instance, LinearSystem, ModelError};
use crate::linalg::Matrix;

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    #[serde(default)]
    name: String,
    #[serde(default)]
    n: Option<usize>,
    #[serde(rename = "A", default)]
    a: Vec<Vec<f64>>,
    #[serde(default)]
    b: Vec<f64>,
    #[serde(rename = "C", default)]
    c: Vec<Vec<f64>>,
    #[serde(default)]
    d: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut inst = parse_instance(&text)?;
    if inst.name.is_empty() {
        inst.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(inst)
}

/// Writes the text format, or the JSON mirror when the extension is `.json`.
pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    let body = if path.extension().is_some_and(|e| e == "json") {
        format_json(inst)?
    } else {
        format_instance(inst)
    };
    std::fs::write(path, body)?;
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance, ModelError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn format_instance(inst: &Instance) -> String {
    let s = &inst.system;
    let mut out = String::new();
    if !inst.name.is_empty() {
        let _ = writeln!(out, "# name: {}", inst.name);
    }
    let _ = writeln!(out, "# family: {}", inst.family);
    let _ = writeln!(out, "# seed: {}", inst.seed);
    for (k, v) in &inst.meta {
        let _ = writeln!(out, "# {k}: {v}");
    }
    let _ = writeln!(out, "{} {} {}", s.n(), s.m(), s.l());
    let mut write_rows = |m: &Matrix, rhs: &[f64]| {
        for (r, v) in m.iter_rows().zip(rhs) {
            let line: Vec<String> = r.iter().chain(std::iter::once(v)).map(|x| format_number(*x)).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    };
    write_rows(s.a(), s.b());
    write_rows(s.c(), s.d());
    out
}

fn format_number(x: f64) -> String {
    if x == 0.0 {
        // normalizes -0
        "0".into()
    } else {
        // `Display` for f64 prints the shortest string that parses back exactly
        format!("{x}")
    }
}

fn format_json(inst: &Instance) -> Result<String, ModelError> {
    let s = &inst.system;
    let j = JsonInstance {
        name: inst.name.clone(),
        n: Some(s.n()),
        a: s.a().to_rows(),
        b: s.b().to_vec(),
        c: s.c().to_rows(),
        d: s.d().to_vec(),
        family: Some(inst.family),
        seed: Some(inst.seed),
    };
    Ok(serde_json::to_string_pretty(&j)? + "\n")
}

fn parse_json(text: &str) -> Result<Instance, ModelError> {
    let j: JsonInstance = serde_json::from_str(text)?;
    let n =
        j.n.or_else(|| j.a.first().or(j.c.first()).map(Vec::len))
            .ok_or_else(|| ModelError::DimensionMismatch("cannot infer n from an empty system".into()))?;
    let system = LinearSystem::from_rows(n, &j.a, &j.b, &j.c, &j.d)?;
    Ok(Instance {
        name: j.name,
        system,
        family: j.family.unwrap_or(Family::File),
        seed: j.seed.unwrap_or(0),
        meta: BTreeMap::new(),
    })
}

struct Token<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn parse_number(tok: &Token<'_>) -> Result<f64, ModelError> {
    let bad = || ModelError::Parse {
        line: tok.line,
        column: tok.column,
        message: format!("invalid number `{}`", tok.text),
    };
    let value = match tok.text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.parse().map_err(|_| bad())?;
            let q: f64 = q.parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => tok.text.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_text(text: &str) -> Result<Instance, ModelError> {
    let mut meta = BTreeMap::new();
    let mut data_lines: Vec<(usize, Vec<Token<'_>>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (content, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(comment) = comment {
            if data_lines.is_empty() && content.trim().is_empty() {
                if let Some((k, v)) = comment.split_once(':') {
                    meta.insert(k.trim().to_string(), v.trim().to_string());
                }
            }
        }
        let mut tokens = Vec::new();
        let mut offset = 0;
        for piece in content.split_whitespace() {
            let start = content[offset..].find(piece).unwrap() + offset;
            offset = start + piece.len();
            tokens.push(Token {
                line: line_no,
                column: start + 1,
                text: piece,
            });
        }
        if !tokens.is_empty() {
            data_lines.push((line_no, tokens));
        }
    }
    let Some((header_line, header)) = data_lines.first() else {
        return Err(ModelError::Parse {
            line: 1,
            column: 1,
            message: "missing `n m l` header".into(),
        });
    };
    if header.len() != 3 {
        return Err(ModelError::Parse {
            line: *header_line,
            column: 1,
            message: format!("header needs 3 integers `n m l`, found {} fields", header.len()),
        });
    }
    let mut dims = [0usize; 3];
    for (slot, tok) in dims.iter_mut().zip(header) {
        *slot = tok.text.parse().map_err(|_| ModelError::Parse {
            line: tok.line,
            column: tok.column,
            message: format!("invalid dimension `{}`", tok.text),
        })?;
    }
    let [n, m, l] = dims;
    let rows = &data_lines[1..];
    if rows.len() != m + l {
        let (line, column) = rows
            .get(m + l)
            .map_or((header_line + rows.len() + 1, 1), |(ln, t)| (*ln, t[0].column));
        return Err(ModelError::Parse {
            line,
            column,
            message: format!("expected {} data rows (m + l), found {}", m + l, rows.len()),
        });
    }
    let mut parsed: Vec<(Vec<f64>, f64)> = Vec::with_capacity(m + l);
    for (line, tokens) in rows {
        if tokens.len() != n + 1 {
            let column = tokens
                .get(n + 1)
                .map_or(tokens.last().map_or(1, |t| t.column + t.text.len()), |t| t.column);
            return Err(ModelError::Parse {
                line: *line,
                column,
                message: format!("row needs {} numbers (n + 1), found {}", n + 1, tokens.len()),
            });
        }
        let values = tokens.iter().map(parse_number).collect::<Result<Vec<_>, _>>()?;
        let rhs = values[n];
        parsed.push((values[..n].to_vec(), rhs));
    }
    let (eq, ineq) = parsed.split_at(m);
    let a: Vec<Vec<f64>> = eq.iter().map(|(r, _)| r.clone()).collect();
    let b: Vec<f64> = eq.iter().map(|(_, v)| *v).collect();
    let c: Vec<Vec<f64>> = ineq.iter().map(|(r, _)| r.clone()).collect();
    let d: Vec<f64> = ineq.iter().map(|(_, v)| *v).collect();
    let system = LinearSystem::from_rows(n, &a, &b, &c, &d)?;

    let name = meta.remove("name").unwrap_or_default();
    let family = meta
        .remove("family")
        .and_then(|f| f.parse().ok())
        .unwrap_or(Family::File);
    let seed = meta.remove("seed").and_then(|s| s.parse().ok()).unwrap_or(0);
    Ok(Instance {
        name,
        system,
        family,
        seed,
        meta,
    })
}
