//! Loader for the lattice text format:
//!
//! ```text
//! lattice sierpinski
//! elements: 0 u 1
//! leq: 0 u
//! leq: u 1
//! ```
//!
//! `leq` lines list covering pairs; the loader takes the reflexive-transitive
//! closure. Several lattices may share one file.

use crate::syntax::{content_lines, key_value, SyntaxError};

use super::FiniteFrame;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    pub name: String,
    pub line: usize,
    pub elements: Vec<String>,
    pub pairs: Vec<(String, String)>,
}

impl LatticeSpec {
    pub fn build(&self) -> Result<FiniteFrame, SyntaxError> {
        FiniteFrame::new(&self.name, &self.elements, &self.pairs)
            .map_err(|e| SyntaxError::new(self.line, format!("lattice {}: {e}", self.name)))
    }
}

fn parse_specs(text: &str) -> Result<Vec<LatticeSpec>, SyntaxError> {
    let mut specs: Vec<LatticeSpec> = Vec::new();
    for (no, line) in content_lines(text) {
        if let Some(name) = line.strip_prefix("lattice ") {
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(SyntaxError::new(no, "expected `lattice <name>`"));
            }
            specs.push(LatticeSpec {
                name: name.to_string(),
                line: no,
                elements: Vec::new(),
                pairs: Vec::new(),
            });
            continue;
        }
        let current = specs
            .last_mut()
            .ok_or_else(|| SyntaxError::new(no, "expected `lattice <name>` header"))?;
        match key_value(line) {
            Some(("elements", rest)) => {
                if !current.elements.is_empty() {
                    return Err(SyntaxError::new(no, "duplicate `elements:` line"));
                }
                current.elements = rest.split_whitespace().map(str::to_string).collect();
                if current.elements.is_empty() {
                    return Err(SyntaxError::new(no, "empty element list"));
                }
            }
            Some(("leq", rest)) => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [a, b] = parts[..] else {
                    return Err(SyntaxError::new(no, "expected `leq: <a> <b>`"));
                };
                for e in [a, b] {
                    if !current.elements.iter().any(|x| x == e) {
                        return Err(SyntaxError::new(no, format!("unknown element {e:?}")));
                    }
                }
                current.pairs.push((a.to_string(), b.to_string()));
            }
            _ => return Err(SyntaxError::new(no, format!("unrecognised line {line:?}"))),
        }
    }
    Ok(specs)
}

/// Parses and validates every lattice in `text`.
pub fn parse_lattices(text: &str) -> Result<Vec<FiniteFrame>, SyntaxError> {
    parse_specs(text)?.iter().map(LatticeSpec::build).collect()
}
