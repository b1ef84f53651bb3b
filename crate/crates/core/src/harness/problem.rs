//! Line-oriented text format for decomposable functions.
//!
//! ```text
//! # comment
//! n 3
//! c 0.5 -1 0            # or: c sparse 1:-1 0:0.5
//! threshold d=2 y=1 0:1 1:0.5
//! concave 0:1 2:1 | curve (0,0);(1,1);(2,1.5)
//! offset 0.25
//! ```
//!
//! `n` must come first. Several `c` lines accumulate. `offset` adds a constant that is
//! reported alongside the value but never enters `f`, which keeps `f(∅) = 0`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{
    ConcaveCurve, ConcavePotential, DecomposableFunction, FunctionBuilder, SparseWeights, Subset,
    ThresholdPotential,
};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn at_line(line: usize) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        e @ (Error::Parse { .. } | Error::AtLine { .. }) => e,
        e => Error::AtLine {
            line,
            source: Box::new(e),
        },
    }
}

fn float(s: &str, line: usize, column: usize) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| syntax(line, column, format!("expected a number, found `{s}`")))
}

fn index_value(tok: &Token<'_>, line: usize) -> Result<(usize, f64)> {
    let (i, v) = tok
        .text
        .split_once(':')
        .ok_or_else(|| syntax(line, tok.column, format!("expected `i:w`, found `{}`", tok.text)))?;
    let value_column = tok.column + i.len() + 1;
    let i = i
        .parse::<usize>()
        .map_err(|_| syntax(line, tok.column, format!("bad index `{i}`")))?;
    Ok((i, float(v, line, value_column)?))
}

fn keyed(tok: &Token<'_>, key: &str, line: usize) -> Result<Option<f64>> {
    match tok.text.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
        Some(v) => float(v, line, tok.column + key.len() + 1).map(Some),
        None => Ok(None),
    }
}

fn parse_curve(text: &str, line: usize, column: usize) -> Result<Vec<(f64, f64)>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(syntax(line, column, "empty curve"));
    }
    compact
        .split(';')
        .filter(|p| !p.is_empty())
        .map(|p| {
            let inner = p
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| syntax(line, column, format!("expected `(t,v)`, found `{p}`")))?;
            let (t, v) = inner
                .split_once(',')
                .ok_or_else(|| syntax(line, column, format!("expected `(t,v)`, found `{p}`")))?;
            Ok((float(t, line, column)?, float(v, line, column)?))
        })
        .collect()
}

/// Parses a problem file; errors carry the 1-based line (and column for syntax errors).
pub fn parse_problem(text: &str) -> Result<DecomposableFunction> {
    let mut builder: Option<FunctionBuilder> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first() else { continue };
        if head.text == "n" {
            if builder.is_some() {
                return Err(syntax(line, head.column, "duplicate `n` line"));
            }
            let [_, size] = toks.as_slice() else {
                return Err(syntax(line, head.column, "expected `n <int>`"));
            };
            let n = size
                .text
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| syntax(line, size.column, "ground set size must be a positive integer"))?;
            builder = Some(FunctionBuilder::new(n));
            continue;
        }
        let Some(b) = builder.as_mut() else {
            return Err(syntax(line, head.column, "`n` must be declared first"));
        };
        let n = b.n();
        match head.text {
            "c" => {
                if toks.get(1).map(|t| t.text) == Some("sparse") {
                    for tok in &toks[2..] {
                        let (i, v) = index_value(tok, line)?;
                        if i >= n {
                            return Err(syntax(line, tok.column, format!("index {i} out of range for n = {n}")));
                        }
                        b.add_modular(i, v);
                    }
                } else {
                    if toks.len() != n + 1 {
                        return Err(syntax(
                            line,
                            head.column,
                            format!("expected {n} values, found {}", toks.len() - 1),
                        ));
                    }
                    for (k, tok) in toks[1..].iter().enumerate() {
                        b.add_modular(k, float(tok.text, line, tok.column)?);
                    }
                }
            }
            "threshold" => {
                let (mut d, mut y) = (None, None);
                let mut entries = Vec::new();
                for tok in &toks[1..] {
                    if let Some(v) = keyed(tok, "d", line)? {
                        d = Some(v);
                    } else if let Some(v) = keyed(tok, "y", line)? {
                        y = Some(v);
                    } else {
                        entries.push(index_value(tok, line)?);
                    }
                }
                let d = d.ok_or_else(|| syntax(line, head.column, "missing `d=`"))?;
                let y = y.ok_or_else(|| syntax(line, head.column, "missing `y=`"))?;
                let w = SparseWeights::new(n, entries).map_err(at_line(line))?;
                b.add_threshold(ThresholdPotential::new(w, y, d).map_err(at_line(line))?);
            }
            "concave" => {
                let bar = toks
                    .iter()
                    .position(|t| t.text == "|")
                    .ok_or_else(|| syntax(line, head.column, "missing `| curve`"))?;
                let entries = toks[1..bar]
                    .iter()
                    .map(|t| index_value(t, line))
                    .collect::<Result<Vec<_>>>()?;
                let kw = toks
                    .get(bar + 1)
                    .filter(|t| t.text == "curve")
                    .ok_or_else(|| syntax(line, toks[bar].column, "expected `curve` after `|`"))?;
                let rest_col = kw.column + kw.text.len();
                let points = parse_curve(&content[rest_col - 1..], line, rest_col)?;
                let w = SparseWeights::new(n, entries).map_err(at_line(line))?;
                let curve = ConcaveCurve::new(&points).map_err(at_line(line))?;
                b.add_concave(ConcavePotential::new(w, curve).map_err(at_line(line))?);
            }
            "offset" => {
                let [_, v] = toks.as_slice() else {
                    return Err(syntax(line, head.column, "expected `offset <float>`"));
                };
                b.add_offset(float(v.text, line, v.column)?);
            }
            other => {
                return Err(syntax(line, head.column, format!("unknown directive `{other}`")));
            }
        }
    }
    builder
        .ok_or_else(|| syntax(last_line.max(1), 1, "missing `n` line"))?
        .build()
}

/// Canonical text form; parsing it back yields an identical function.
pub fn serialize_problem(f: &DecomposableFunction) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n {}", f.n());
    out.push('c');
    for v in f.modular_part() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    for t in f.thresholds() {
        let _ = write!(out, "threshold d={} y={}", t.d(), t.y());
        for &(k, w) in t.weights().entries() {
            let _ = write!(out, " {k}:{w}");
        }
        out.push('\n');
    }
    for p in f.concaves() {
        out.push_str("concave");
        for &(k, w) in p.weights().entries() {
            let _ = write!(out, " {k}:{w}");
        }
        out.push_str(" | curve ");
        let points: Vec<String> = p
            .curve()
            .raw_points()
            .iter()
            .map(|(t, v)| format!("({t},{v})"))
            .collect();
        out.push_str(&points.join(";"));
        out.push('\n');
    }
    if f.extra_offset() != 0.0 {
        let _ = writeln!(out, "offset {}", f.extra_offset());
    }
    out
}

/// Comma- or whitespace-separated list of floats, optionally in brackets.
pub fn parse_point(s: &str) -> Result<Vec<f64>> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parameter(format!("bad coordinate `{p}`")))
        })
        .collect()
}

/// Subset written as `{0,2}`, `0,2` or `{}`.
pub fn parse_subset(n: usize, s: &str) -> Result<Subset> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let members = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| Error::InvalidSubset(format!("bad element `{p}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Subset::from_indices(n, &members)
}
