//! Line-oriented instance files:
//!
//! ```text
//! # comment
//! p rel <n> <m>
//! e <u> <v> <prob>      (m lines, 0-based vertices)
//! s <source>
//! t <v1> <v2> ...
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Multigraph, VertexId};
use crate::reliability::{PlainInstance, Probability};

#[derive(Debug, Error, PartialEq)]
pub enum InstanceParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("header declares {declared} edges but {found} `e` lines were given")]
    EdgeCount { declared: usize, found: usize },
    #[error("invalid instance: {0}")]
    Invalid(String),
}

fn syntax(line: usize, message: impl Into<String>) -> InstanceParseError {
    InstanceParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize, InstanceParseError> {
    match tok.parse::<usize>() {
        Ok(v) if v < n => Ok(v),
        Ok(v) => Err(syntax(line, format!("vertex {v} outside 0..{n}"))),
        Err(_) => Err(syntax(line, format!("expected a vertex id, got `{tok}`"))),
    }
}

pub fn parse_instance(text: &str) -> Result<PlainInstance, InstanceParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut probs = Vec::new();
    let mut source = None;
    let mut targets: Option<Vec<VertexId>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let Some((n, m)) = header else {
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "rel" {
                return Err(syntax(line, "expected `p rel <n> <m>`"));
            }
            let parse = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| syntax(line, format!("expected a count, got `{t}`")))
            };
            header = Some((parse(toks[2])?, parse(toks[3])?));
            continue;
        };
        match toks[0] {
            "p" => return Err(syntax(line, "duplicate header")),
            "e" => {
                if toks.len() != 4 {
                    return Err(syntax(line, "expected `e <u> <v> <prob>`"));
                }
                if edges.len() == m {
                    return Err(InstanceParseError::EdgeCount {
                        declared: m,
                        found: m + 1,
                    });
                }
                let u = vertex(line, toks[1], n)?;
                let v = vertex(line, toks[2], n)?;
                let prob: f64 = toks[3].parse().map_err(|_| {
                    syntax(line, format!("expected a probability, got `{}`", toks[3]))
                })?;
                if !(0.0..=1.0).contains(&prob) {
                    return Err(syntax(line, format!("probability {prob} outside [0, 1]")));
                }
                edges.push((u, v));
                probs.push(Probability::new(prob).expect("range checked"));
            }
            "s" => {
                if toks.len() != 2 {
                    return Err(syntax(line, "expected `s <source>`"));
                }
                if source.is_some() {
                    return Err(syntax(line, "duplicate source line"));
                }
                source = Some(VertexId::from(vertex(line, toks[1], n)?));
            }
            "t" => {
                if targets.is_some() {
                    return Err(syntax(line, "duplicate target line"));
                }
                if toks.len() < 2 {
                    return Err(syntax(line, "target line lists no vertices"));
                }
                targets = Some(
                    toks[1..]
                        .iter()
                        .map(|t| vertex(line, t, n).map(VertexId::from))
                        .collect::<Result<_, _>>()?,
                );
            }
            other => return Err(syntax(line, format!("unknown line type `{other}`"))),
        }
    }

    let (n, m) = header.ok_or(InstanceParseError::Missing("p rel"))?;
    if edges.len() != m {
        return Err(InstanceParseError::EdgeCount {
            declared: m,
            found: edges.len(),
        });
    }
    let source = source.ok_or(InstanceParseError::Missing("s"))?;
    let targets = targets.ok_or(InstanceParseError::Missing("t"))?;
    let graph =
        Multigraph::from_edges(n, edges).map_err(|e| InstanceParseError::Invalid(e.to_string()))?;
    PlainInstance::new(graph, probs, source, targets)
        .map_err(|e| InstanceParseError::Invalid(e.to_string()))
}

pub fn write_instance(p: &PlainInstance) -> String {
    let g = p.graph();
    let mut out = String::new();
    let _ = writeln!(out, "p rel {} {}", g.vertex_count(), g.edge_count());
    for (e, q) in g.edges().iter().zip(p.probs()) {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, q.value());
    }
    let _ = writeln!(out, "s {}", p.source());
    let _ = write!(out, "t");
    for t in p.targets() {
        let _ = write!(out, " {t}");
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SERIES: &str = "# two edges in series\np rel 3 2\ne 0 1 0.5\ne 1 2 0.5\ns 0\nt 2\n";

    #[test]
    fn parses_series() {
        let p = parse_instance(SERIES).unwrap();
        assert_eq!(p.graph().edge_count(), 2);
        assert_eq!(p.source(), VertexId(0));
        assert_eq!(p.targets(), &[VertexId(2)]);
        assert_eq!(parse_instance(&write_instance(&p)).unwrap(), p);
    }

    #[test]
    fn rejects_bad_files() {
        assert_eq!(
            parse_instance("p rel 3 2\ne 0 1 0.5\ne 1 2 0.5\nt 2\n"),
            Err(InstanceParseError::Missing("s"))
        );
        assert!(matches!(
            parse_instance("p rel 3 1\ne 0 3 0.5\ns 0\nt 2\n"),
            Err(InstanceParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("p rel 3 1\ne 0 1 1.5\ns 0\nt 2\n"),
            Err(InstanceParseError::Syntax { line: 2, .. })
        ));
        assert_eq!(
            parse_instance("p rel 3 2\ne 0 1 0.5\ns 0\nt 2\n"),
            Err(InstanceParseError::EdgeCount {
                declared: 2,
                found: 1
            })
        );
        assert!(matches!(
            parse_instance("p rel 3 1\ne 0 1 0.5\ns 0\nt\n"),
            Err(InstanceParseError::Syntax { line: 4, .. })
        ));
    }
}
