//! Loading bicharacters and diagrams from a path, `-` or inline JSON.

use std::fs;
use std::io::Read;

use arsys_core::bicharacter::BicharacterRepr;
use arsys_core::diagram::DiagramRepr;
use arsys_core::{Bicharacter, DynkinDiagram};
use serde_json::Value;

/// An input failure; always exit status 3.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub enum Loaded {
    Bicharacter(Bicharacter),
    Diagram(DynkinDiagram),
}

impl Loaded {
    pub fn bicharacter(&self) -> Bicharacter {
        match self {
            Loaded::Bicharacter(b) => b.clone(),
            Loaded::Diagram(d) => d.to_bicharacter(),
        }
    }
}

pub fn read_source(arg: &str) -> Result<(String, String), InputError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(("<inline>".into(), arg.to_string()));
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| InputError(format!("reading stdin: {e}")))?;
        return Ok(("<stdin>".into(), s));
    }
    let text = fs::read_to_string(arg).map_err(|e| InputError(format!("{arg}: {e}")))?;
    Ok((arg.to_string(), text))
}

/// A bicharacter (`q` matrix) or a diagram (`vertices`, `edges`), told apart
/// by their keys.
pub fn load(arg: &str) -> Result<Loaded, InputError> {
    let (name, text) = read_source(arg)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        InputError(format!(
            "{name}: malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let shape_err = |e: serde_json::Error| InputError(format!("{name}: {e}"));
    let engine_err = |e: arsys_core::Error| InputError(format!("{name}: {e}"));
    if value.get("q").is_some() {
        let repr: BicharacterRepr = serde_json::from_value(value).map_err(shape_err)?;
        Ok(Loaded::Bicharacter(Bicharacter::from_repr(&repr).map_err(engine_err)?))
    } else if value.get("vertices").is_some() {
        let repr: DiagramRepr = serde_json::from_value(value).map_err(shape_err)?;
        Ok(Loaded::Diagram(DynkinDiagram::from_repr(&repr).map_err(engine_err)?))
    } else {
        Err(InputError(format!(
            "{name}: expected a bicharacter (key \"q\") or a diagram (key \"vertices\")"
        )))
    }
}

/// `"1,1,0; 0,0,1"` as integer vectors of length `n`.
pub fn parse_roots(s: &str, n: usize) -> Result<Vec<Vec<i64>>, InputError> {
    let mut out = Vec::new();
    for (k, part) in s.split(';').enumerate() {
        let v: Vec<i64> = part
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| InputError(format!("--roots entry {}: {e}", k + 1)))?;
        if v.len() != n {
            return Err(InputError(format!(
                "--roots entry {} has {} coordinates, rank is {n}",
                k + 1,
                v.len()
            )));
        }
        out.push(v);
    }
    Ok(out)
}
