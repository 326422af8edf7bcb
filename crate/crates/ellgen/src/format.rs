//! Line-oriented diagram files.
//!
//! ```text
//! diagram resolved_conifold
//! vertex v1 trivalent (0,1) (-1,-1) (1,0)
//! vertex v1_leg1 univalent
//! edge v1:1 v1_leg1:0
//! ```
//!
//! `#` starts a comment. Whitespace between tokens, and inside weight
//! pairs, is free.

use std::fmt::Write as _;

use ellgen_core::toric::{Edge, EdgeEnd, ModelError, TrivalentVertex, UnivalentVertex};
use ellgen_core::{ToricDiagram, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::SyntaxError { line, msg: msg.into() }
}

fn parse_int(line: usize, s: &str) -> Result<i32, FormatError> {
    s.parse().map_err(|_| syntax(line, format!("expected an integer, found `{s}`")))
}

/// Parses `(a,b)(a,b)(a,b)` with all whitespace already removed.
fn parse_weights(line: usize, compact: &str) -> Result<[WeightVector; 3], FormatError> {
    let mut out = Vec::with_capacity(3);
    let mut rest = compact;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| syntax(line, format!("expected `(` at `{rest}`")))?;
        let close = body.find(')').ok_or_else(|| syntax(line, "unclosed weight pair"))?;
        let (a, b) = body[..close]
            .split_once(',')
            .ok_or_else(|| syntax(line, format!("weight pair `({})` needs two entries", &body[..close])))?;
        out.push(WeightVector::new(parse_int(line, a)?, parse_int(line, b)?));
        rest = &body[close + 1..];
    }
    out.try_into()
        .map_err(|w: Vec<WeightVector>| syntax(line, format!("trivalent vertex needs 3 weight pairs, found {}", w.len())))
}

fn parse_end(line: usize, token: &str) -> Result<EdgeEnd, FormatError> {
    let (id, slot) = token
        .rsplit_once(':')
        .ok_or_else(|| syntax(line, format!("edge end `{token}` is not of the form id:slot")))?;
    if id.is_empty() {
        return Err(syntax(line, format!("edge end `{token}` has an empty vertex id")));
    }
    let slot = slot
        .parse::<u8>()
        .map_err(|_| syntax(line, format!("slot `{slot}` is not a small non-negative integer")))?;
    Ok(EdgeEnd::new(id, slot))
}

/// Parses a diagram. Structure (ids, edge references, slot use) is checked;
/// the balancing conditions are left to [`ellgen_core::toric::validate`].
pub fn parse_diagram(text: &str) -> Result<ToricDiagram, FormatError> {
    let mut name: Option<String> = None;
    let mut trivalent = Vec::new();
    let mut univalent = Vec::new();
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().expect("non-empty line has a token");
        if name.is_none() && keyword != "diagram" {
            return Err(syntax(line, "file must start with `diagram <name>`"));
        }
        match keyword {
            "diagram" => {
                if name.is_some() {
                    return Err(syntax(line, "second `diagram` line"));
                }
                let n = tokens.next().ok_or_else(|| syntax(line, "`diagram` needs a name"))?;
                if let Some(extra) = tokens.next() {
                    return Err(syntax(line, format!("unexpected `{extra}` after diagram name")));
                }
                name = Some(n.to_string());
            }
            "vertex" => {
                let id = tokens.next().ok_or_else(|| syntax(line, "`vertex` needs an id"))?;
                if id.contains([':', '(', ')', ',']) {
                    return Err(syntax(line, format!("vertex id `{id}` contains a reserved character")));
                }
                match tokens.next() {
                    Some("trivalent") => {
                        let compact: String = tokens.flat_map(|t| t.chars()).collect();
                        trivalent.push(TrivalentVertex {
                            id: id.to_string(),
                            weights: parse_weights(line, &compact)?,
                        });
                    }
                    Some("univalent") => {
                        if let Some(extra) = tokens.next() {
                            return Err(syntax(line, format!("unexpected `{extra}` after univalent vertex")));
                        }
                        univalent.push(UnivalentVertex { id: id.to_string() });
                    }
                    Some(other) => {
                        return Err(syntax(line, format!("vertex kind `{other}` is neither trivalent nor univalent")))
                    }
                    None => return Err(syntax(line, "`vertex` needs a kind")),
                }
            }
            "edge" => {
                let ends: Vec<&str> = tokens.collect();
                let [a, b] = ends[..] else {
                    return Err(syntax(line, format!("`edge` needs exactly two ends, found {}", ends.len())));
                };
                edges.push(Edge {
                    a: parse_end(line, a)?,
                    b: parse_end(line, b)?,
                });
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| syntax(1, "empty input; expected `diagram <name>`"))?;
    Ok(ToricDiagram::new(name, trivalent, univalent, edges)?)
}

/// Canonical text form: vertices in stored order, then edges.
pub fn serialize(d: &ToricDiagram) -> String {
    let mut out = String::new();
    writeln!(out, "diagram {}", d.name()).unwrap();
    for v in d.trivalent() {
        let [a, b, c] = v.weights;
        writeln!(out, "vertex {} trivalent {a} {b} {c}", v.id).unwrap();
    }
    for v in d.univalent() {
        writeln!(out, "vertex {} univalent", v.id).unwrap();
    }
    for e in d.edges() {
        writeln!(out, "edge {} {}", e.a, e.b).unwrap();
    }
    out
}
