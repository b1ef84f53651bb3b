//! DIMACS-style undirected cut files.
//!
//! ```text
//! c comment
//! p cut <nodes> <edges>
//! e <u> <v> <weight>      # 1-indexed
//! ```

use crate::error::{Error, Result};
use crate::reformulate::WeightedGraph;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a cut file; repeated edges are merged by summing their weights.
///
/// The edge count in the header is informational and not checked against the body.
pub fn parse_dimacs_cut(text: &str) -> Result<WeightedGraph> {
    let mut graph: Option<WeightedGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if graph.is_some() {
                    return Err(parse_err(line, 1, "duplicate problem line"));
                }
                let ["p", "cut", n, m] = fields.as_slice() else {
                    return Err(parse_err(line, 1, "expected `p cut <nodes> <edges>`"));
                };
                let n: usize = n
                    .parse()
                    .map_err(|_| parse_err(line, 1, format!("bad node count `{n}`")))?;
                m.parse::<usize>()
                    .map_err(|_| parse_err(line, 1, format!("bad edge count `{m}`")))?;
                graph = Some(WeightedGraph::new(n));
            }
            Some("e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| parse_err(line, 1, "edge before `p cut` header"))?;
                let ["e", u, v, w] = fields.as_slice() else {
                    return Err(parse_err(line, 1, "expected `e <u> <v> <weight>`"));
                };
                let node = |s: &str| -> Result<usize> {
                    match s.parse::<usize>() {
                        Ok(k) if k >= 1 && k <= g.node_count() => Ok(k - 1),
                        _ => Err(Error::AtLine {
                            line,
                            source: Box::new(Error::InvalidSubset(format!(
                                "node `{s}` out of range 1..={}",
                                g.node_count()
                            ))),
                        }),
                    }
                };
                let (u, v) = (node(u)?, node(v)?);
                let w: f64 = w
                    .parse()
                    .map_err(|_| parse_err(line, 1, format!("bad weight `{w}`")))?;
                g.add_edge(u, v, w).map_err(|e| Error::AtLine {
                    line,
                    source: Box::new(e),
                })?;
            }
            Some(other) => {
                return Err(parse_err(line, 1, format!("unknown line type `{other}`")));
            }
        }
    }
    graph.ok_or_else(|| parse_err(1, 1, "missing `p cut` header"))
}
