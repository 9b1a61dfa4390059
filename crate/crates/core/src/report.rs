//! A small ordered tree used for every human- and machine-readable output.
//!
//! Floats are written with 17 significant digits (`{:.16e}`) so values round
//! trip exactly; NaN and infinities are written as strings in JSON.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Tree {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    List(Vec<Tree>),
    Map(Vec<(String, Tree)>),
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl Tree {
    pub fn map() -> MapBuilder {
        MapBuilder(Vec::new())
    }

    pub fn str(s: impl Into<String>) -> Tree {
        Tree::Str(s.into())
    }

    pub fn get(&self, key: &str) -> Option<&Tree> {
        match self {
            Tree::Map(entries) => entries.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    /// Indented `key: value` text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Tree::Map(_) | Tree::List(_) => self.write_block(&mut out, 0),
            leaf => {
                out.push_str(&leaf.leaf_text());
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        self.write_json(&mut out);
        out
    }

    /// `key,value` rows with dotted paths (list items by index).
    pub fn to_flat_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        self.write_flat("", &mut out);
        out
    }

    fn write_flat(&self, path: &str, out: &mut String) {
        let join = |k: &str| {
            if path.is_empty() {
                k.to_string()
            } else {
                format!("{path}.{k}")
            }
        };
        match self {
            Tree::Map(entries) if !entries.is_empty() => {
                for (k, v) in entries {
                    v.write_flat(&join(k), out);
                }
            }
            Tree::List(items) if !items.is_empty() => {
                for (i, v) in items.iter().enumerate() {
                    v.write_flat(&join(&i.to_string()), out);
                }
            }
            leaf => {
                let _ = writeln!(out, "{},{}", csv_field(path), csv_field(&leaf.leaf_text()));
            }
        }
    }

    fn leaf_text(&self) -> String {
        match self {
            Tree::Num(x) => fmt_f64(*x),
            Tree::Int(i) => i.to_string(),
            Tree::Bool(b) => b.to_string(),
            Tree::Str(s) => s.clone(),
            Tree::List(l) if l.is_empty() => "[]".to_string(),
            Tree::Map(m) if m.is_empty() => "{}".to_string(),
            _ => unreachable!("containers are written as blocks"),
        }
    }

    fn is_block(&self) -> bool {
        match self {
            Tree::List(l) => !l.is_empty(),
            Tree::Map(m) => !m.is_empty(),
            _ => false,
        }
    }

    fn write_block(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        match self {
            Tree::Map(entries) => {
                for (k, v) in entries {
                    if v.is_block() {
                        let _ = writeln!(out, "{pad}{k}:");
                        v.write_block(out, indent + 1);
                    } else {
                        let _ = writeln!(out, "{pad}{k}: {}", v.leaf_text());
                    }
                }
            }
            Tree::List(items) => {
                for item in items {
                    if item.is_block() {
                        let _ = writeln!(out, "{pad}-");
                        item.write_block(out, indent + 1);
                    } else {
                        let _ = writeln!(out, "{pad}- {}", item.leaf_text());
                    }
                }
            }
            leaf => {
                let _ = writeln!(out, "{pad}{}", leaf.leaf_text());
            }
        }
    }

    fn write_json(&self, out: &mut String) {
        match self {
            Tree::Num(x) if x.is_finite() => out.push_str(&fmt_f64(*x)),
            Tree::Num(x) => out.push_str(&json_string(&fmt_f64(*x))),
            Tree::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Tree::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Tree::Str(s) => out.push_str(&json_string(s)),
            Tree::List(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write_json(out);
                }
                out.push(']');
            }
            Tree::Map(entries) => {
                out.push('{');
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&json_string(k));
                    out.push(':');
                    v.write_json(out);
                }
                out.push('}');
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Builder for [`Tree::Map`] preserving insertion order.
pub struct MapBuilder(Vec<(String, Tree)>);

impl MapBuilder {
    pub fn entry(mut self, key: &str, value: Tree) -> Self {
        self.0.push((key.to_string(), value));
        self
    }

    pub fn num(self, key: &str, x: f64) -> Self {
        self.entry(key, Tree::Num(x))
    }

    pub fn int(self, key: &str, i: i64) -> Self {
        self.entry(key, Tree::Int(i))
    }

    pub fn bool(self, key: &str, b: bool) -> Self {
        self.entry(key, Tree::Bool(b))
    }

    pub fn str(self, key: &str, s: impl Into<String>) -> Self {
        self.entry(key, Tree::Str(s.into()))
    }

    pub fn build(self) -> Tree {
        Tree::Map(self.0)
    }
}

/// Conversion into the output tree.
pub trait ToTree {
    fn to_tree(&self) -> Tree;
}
