//! Plain-text edge lists: a header `n d m_edges`, then one `u v` line per
//! undirected edge, 0-indexed. Blank lines and `#` comments are skipped.

use std::io::{BufRead, Write};

use super::BoundedDegreeGraph;
use crate::error::{Error, Result};

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<BoundedDegreeGraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut graph: Option<BoundedDegreeGraph> = None;
    let mut seen = 0usize;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields = parse_fields(body, lineno)?;
        match header {
            None => {
                let [n, d, m] = fields[..] else {
                    return Err(parse_err(lineno, "header must be `n d m_edges`"));
                };
                graph = Some(
                    BoundedDegreeGraph::new(n, d).map_err(|e| parse_err(lineno, e.to_string()))?,
                );
                header = Some((n, d, m));
            }
            Some((_, _, m)) => {
                let [u, v] = fields[..] else {
                    return Err(parse_err(lineno, "edge line must be `u v`"));
                };
                if seen == m {
                    return Err(parse_err(lineno, format!("more than the declared {m} edges")));
                }
                let g = graph.as_mut().expect("graph exists once header is read");
                g.add_edge(u, v).map_err(|e| parse_err(lineno, e.to_string()))?;
                seen += 1;
            }
        }
    }

    match (graph, header) {
        (Some(g), Some((_, _, m))) if seen == m => Ok(g),
        (Some(_), Some((_, _, m))) => Err(Error::Parse {
            line: 0,
            msg: format!("declared {m} edges but found {seen}"),
        }),
        _ => Err(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        }),
    }
}

pub fn parse_edge_list(text: &str) -> Result<BoundedDegreeGraph> {
    read_edge_list(text.as_bytes())
}

pub fn write_edge_list<W: Write>(g: &BoundedDegreeGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {} {}", g.n(), g.d(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

fn parse_fields(body: &str, lineno: usize) -> Result<Vec<usize>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
