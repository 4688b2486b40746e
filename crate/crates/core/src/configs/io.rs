//! JSON configuration files.
//!
//! ```json
//! {
//!   "label": "d4",
//!   "ambient_dim": 3,
//!   "symbols": [{"name": "u", "order": 3}, {"name": "t", "minpoly": [1, -1, 1]}],
//!   "points": [["1", "u^2", "0", "-1"]],
//!   "prime": 1073741827,
//!   "seed": 0,
//!   "tags": {"shape": [3, 4]}
//! }
//! ```
//!
//! `prime`, `seed` and `tags` are optional. Without `prime` the smallest
//! admissible prime above the default bound is used. Configurations without
//! symbolic coordinates are written as residues together with their prime.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BuildOptions, ConfigError, Configuration, Tags};
use crate::field::{Symbol, SymbolConstraint};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SymbolEntry {
    Order { name: String, order: u64 },
    MinPoly { name: String, minpoly: Vec<i64> },
}

#[derive(Serialize, Deserialize)]
struct FileFormat {
    label: String,
    ambient_dim: usize,
    #[serde(default)]
    symbols: Vec<SymbolEntry>,
    points: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "is_default_tags")]
    tags: Tags,
}

fn is_default_tags(t: &Tags) -> bool {
    *t == Tags::default()
}

/// Serialize to the JSON file format.
pub fn to_json(cfg: &Configuration) -> String {
    let symbols = cfg
        .spec
        .symbols
        .iter()
        .map(|s| match &s.constraint {
            SymbolConstraint::Order(n) => SymbolEntry::Order { name: s.name.clone(), order: *n },
            SymbolConstraint::MinPoly(c) => SymbolEntry::MinPoly { name: s.name.clone(), minpoly: c.clone() },
        })
        .collect();
    let points = match &cfg.exprs {
        Some(rows) => rows.clone(),
        None => cfg.points.iter().map(|p| p.coords().iter().map(|c| c.0.to_string()).collect()).collect(),
    };
    let file = FileFormat {
        label: cfg.label.clone(),
        ambient_dim: cfg.ambient_dim,
        symbols,
        points,
        prime: Some(cfg.prime()),
        seed: Some(cfg.spec.seed),
        tags: cfg.tags.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn save(cfg: &Configuration, path: &Path) -> Result<(), ConfigError> {
    std::fs::write(path, to_json(cfg))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Configuration, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    load_str(&text, None)
}

/// Parse a configuration; `prime_override` replaces the file's prime.
pub fn load_str(text: &str, prime_override: Option<u64>) -> Result<Configuration, ConfigError> {
    let file: FileFormat = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let symbols: Vec<Symbol> = file
        .symbols
        .iter()
        .map(|s| match s {
            SymbolEntry::Order { name, order } => Symbol::order(name, *order),
            SymbolEntry::MinPoly { name, minpoly } => Symbol::minpoly(name, minpoly),
        })
        .collect();
    let opts = BuildOptions { prime: prime_override.or(file.prime), seed: file.seed.unwrap_or(0), ..BuildOptions::default() };
    let spec = opts.field_spec(&symbols)?;
    let width = file.ambient_dim + 1;
    for (k, row) in file.points.iter().enumerate() {
        if row.len() != width {
            return Err(ConfigError::WrongLength { point: k, got: row.len(), expected: width });
        }
    }
    match Configuration::from_exprs(&file.label, spec, file.points.clone(), file.tags) {
        Err(ConfigError::Expr { point, coord, source }) => {
            let (line, column) = locate(text, &file.points, point, coord);
            match source {
                super::ExprError::UnknownSymbol { name, .. } => Err(ConfigError::UnresolvableSymbol(format!(
                    "`{name}` at line {line}, column {}",
                    column + source_column(&file.points[point][coord], &name)
                ))),
                other => Err(ConfigError::Parse { line, column: column + other.column(), message: other.to_string() }),
            }
        }
        other => other,
    }
}

fn source_column(expr: &str, name: &str) -> usize {
    expr.find(name).map_or(1, |b| expr[..b].chars().count() + 1)
}

/// Line and column (of the opening quote) of the expression at `(point, coord)`.
///
/// Finds the `points` key and walks string literals in order; identical
/// expressions earlier in the list are skipped by counting.
fn locate(text: &str, rows: &[Vec<String>], point: usize, coord: usize) -> (usize, usize) {
    let start = text.find("\"points\"").map_or(0, |i| i + "\"points\"".len());
    let target = &rows[point][coord];
    let earlier = rows.iter().flatten().take(point * rows[0].len() + coord).filter(|e| *e == target).count();
    let needle = serde_json::to_string(target).expect("strings serialize");
    let mut from = start;
    let mut offset = None;
    for _ in 0..=earlier {
        match text[from..].find(&needle) {
            Some(i) => {
                offset = Some(from + i);
                from += i + needle.len();
            }
            None => break,
        }
    }
    let Some(offset) = offset else {
        return (0, 0);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    // column points at the opening quote; expression columns start one further on
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::named;

    #[test]
    fn round_trip_named() {
        for label in ["d4", "penrose", "pts120", "klein"] {
            let z = named(label, &BuildOptions::default()).unwrap();
            let back = load_str(&to_json(&z), None).unwrap();
            assert_eq!(back.points, z.points, "{label}");
            assert_eq!(back.spec, z.spec, "{label}");
            assert_eq!(back.tags, z.tags, "{label}");
            assert_eq!(back.label, z.label, "{label}");
        }
    }

    #[test]
    fn symbol_resolution_in_files() {
        let text = r#"{"label":"x","ambient_dim":2,"symbols":[{"name":"u","order":3}],"points":[["1","-u^2","0"]]}"#;
        let z = load_str(text, None).unwrap();
        let f = z.field();
        let u = z.spec.get("u").unwrap();
        let expected = crate::projgeom::ProjPoint::new(f, vec![f.one(), f.neg(f.mul(u, u)), f.zero()]).unwrap();
        assert_eq!(z.points[0], expected);
        assert_eq!(z.prime() % 3, 1);
    }

    #[test]
    fn malformed_exponent_reports_position() {
        let text = "{\"label\":\"x\",\"ambient_dim\":1,\"symbols\":[{\"name\":\"u\",\"order\":3}],\n\"points\":[[\"1\",\"u^x\"]]}";
        match load_str(text, None) {
            Err(ConfigError::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                // `"points":[["1","u^x"]]` puts the quote of "u^x" at column 16; `x` is the third character
                assert_eq!(column, 16 + 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_symbol() {
        let text = r#"{"label":"x","ambient_dim":1,"points":[["1","w"]]}"#;
        assert!(matches!(load_str(text, None), Err(ConfigError::UnresolvableSymbol(_))));
    }

    #[test]
    fn json_syntax_error() {
        assert!(matches!(load_str("{\"label\": }", None), Err(ConfigError::Parse { line: 1, .. })));
    }
}
