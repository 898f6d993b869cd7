//! Text formats: `.scx` simplex lists with optional values, a subset of OFF
//! meshes, and DOT export of the Hasse diagram with gradient arrows.
//!
//! An `.scx` file has one simplex per line as whitespace-separated vertex
//! ids, optionally followed by ` : value`. `#` starts a comment. Either every
//! line carries a value or none does; without values the face closure of the
//! listed simplices is taken, with values the list must already be closed.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::complex::SimplicialComplex;
use crate::error::{DmtError, Result};
use crate::morse::MorseFunction;
use crate::simplex::Simplex;

fn parse_err(line: usize, reason: impl Into<String>) -> DmtError {
    DmtError::Parse {
        line,
        reason: reason.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_scx(text: &str) -> Result<(SimplicialComplex, Option<MorseFunction>)> {
    let mut entries: Vec<(usize, Simplex, Option<f64>)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(':');
        let ids = parts.next().unwrap_or("");
        let value = match (parts.next(), parts.next()) {
            (None, _) => None,
            (Some(v), None) => Some(
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(line_no, format!("bad value {:?}", v.trim())))?,
            ),
            (Some(_), Some(_)) => return Err(parse_err(line_no, "more than one ':'")),
        };
        let vertices = ids
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(line_no, format!("bad vertex id {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let simplex = Simplex::new(vertices).map_err(|e| match e {
            DmtError::MalformedSimplex { reason, .. } => parse_err(line_no, reason),
            other => other,
        })?;
        if !seen.insert(simplex.clone()) {
            return Err(parse_err(line_no, format!("duplicate simplex {simplex}")));
        }
        if let Some((_, _, first)) = entries.first() {
            if first.is_some() != value.is_some() {
                return Err(parse_err(
                    line_no,
                    "either every simplex has a value or none does",
                ));
            }
        }
        entries.push((line_no, simplex, value));
    }
    if entries.is_empty() {
        return Err(DmtError::EmptyInput);
    }
    let complex = SimplicialComplex::closure(entries.iter().map(|(_, s, _)| s.clone()));
    if entries[0].2.is_none() {
        return Ok((complex, None));
    }
    let values: HashMap<Simplex, f64> = entries
        .into_iter()
        .map(|(_, s, v)| (s, v.expect("all values present")))
        .collect();
    let f = MorseFunction::validate(complex.clone(), &values)?;
    Ok((complex, Some(f)))
}

/// One line per simplex in complex order. `f64` display is the shortest
/// text that parses back to the same value, so the round trip is exact.
pub fn emit_scx(f: &MorseFunction) -> String {
    let mut out = String::new();
    for (s, v) in f.complex().simplices().iter().zip(f.values()) {
        let _ = writeln!(out, "{} : {v}", join(s.vertices(), " "));
    }
    out
}

pub fn emit_complex_scx(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for s in k.simplices() {
        let _ = writeln!(out, "{}", join(s.vertices(), " "));
    }
    out
}

fn join(v: &[usize], sep: &str) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// Reads the combinatorics of an ASCII OFF mesh: polygons are split into
/// triangle fans and the result is the face closure of the faces. Vertex
/// coordinates are checked for shape and otherwise ignored.
pub fn parse_off(text: &str) -> Result<SimplicialComplex> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or_else(|| parse_err(1, "missing OFF header"))?;
    let rest = header
        .strip_prefix("OFF")
        .ok_or_else(|| parse_err(n, "missing OFF header"))?
        .trim();
    let (n, counts) = if rest.is_empty() {
        lines.next().ok_or_else(|| parse_err(n + 1, "missing counts"))?
    } else {
        (n, rest)
    };
    let counts = counts
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(n, format!("bad count {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let (nv, nf) = match counts[..] {
        [nv, nf] | [nv, nf, _] => (nv, nf),
        _ => return Err(parse_err(n, "expected vertex, face and edge counts")),
    };
    let mut last = n;
    for _ in 0..nv {
        let (n, line) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, "file ends inside the vertex list"))?;
        let coords = line.split_whitespace().take(3).filter(|t| t.parse::<f64>().is_ok()).count();
        if coords < 3 {
            return Err(parse_err(n, "vertex line needs three coordinates"));
        }
        last = n;
    }
    let mut simplices = Vec::new();
    for _ in 0..nf {
        let (n, line) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, "file ends inside the face list"))?;
        let mut tokens = line.split_whitespace();
        let size = tokens
            .next()
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| parse_err(n, "bad face size"))?;
        if size < 3 {
            return Err(parse_err(n, "faces need at least three vertices"));
        }
        let ids = tokens
            .by_ref()
            .take(size)
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(n, format!("bad vertex index {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if ids.len() < size {
            return Err(parse_err(n, "face lists fewer indices than declared"));
        }
        if let Some(&bad) = ids.iter().find(|&&i| i >= nv) {
            return Err(parse_err(n, format!("vertex index {bad} out of range")));
        }
        for k in 1..size - 1 {
            let tri = Simplex::new(vec![ids[0], ids[k], ids[k + 1]]).map_err(|e| match e {
                DmtError::MalformedSimplex { reason, .. } => parse_err(n, reason),
                other => other,
            })?;
            simplices.push(tri);
        }
        last = n;
    }
    SimplicialComplex::build(simplices)
}

fn node_id(s: &Simplex) -> String {
    format!("s{}", join(s.vertices(), "_"))
}

/// Hasse diagram in DOT. Face relations are dotted undirected edges; each
/// gradient pair `(s, t)` is a bold arrow from `s` to `t`; critical cells
/// are double circles.
pub fn to_dot(k: &SimplicialComplex, f: Option<&MorseFunction>) -> Result<String> {
    let field = f.map(MorseFunction::gradient_field).transpose()?;
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
    for (i, s) in k.simplices().iter().enumerate() {
        let mut label = join(s.vertices(), ",");
        let mut shape = "";
        if let Some(f) = f {
            let _ = write!(label, "\\nf={}", f.value_at(i));
            if f.is_critical_index(i) {
                shape = ", shape=doublecircle";
            }
        }
        let _ = writeln!(out, "  {} [label=\"{label}\"{shape}];", node_id(s));
    }
    for (i, s) in k.simplices().iter().enumerate() {
        for &j in k.cofaces_of(i) {
            let paired = field.as_ref().is_some_and(|g| g.up_partner(i) == Some(j));
            let style = if paired { "style=bold" } else { "style=dotted, dir=none" };
            let _ = writeln!(out, "  {} -> {} [{style}];", node_id(s), node_id(k.simplex(j)));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
