//! PACE 2017 `.td` files. Bag ids and vertices are 1-based on disk and
//! 0-based in memory.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::VertexId;

use super::TreeDecomposition;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `s td` header")]
    MissingHeader,
    #[error("header declares {declared} bags but {found} `b` lines were given")]
    BagCountMismatch { declared: usize, found: usize },
    #[error(
        "header declares maximum bag size {declared} but the largest bag has {found} vertices"
    )]
    BagSizeMismatch { declared: usize, found: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> TdParseError {
    TdParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn number(line: usize, tok: &str) -> Result<usize, TdParseError> {
    tok.parse().map_err(|_| {
        syntax(
            line,
            format!("expected a non-negative integer, got `{tok}`"),
        )
    })
}

/// 1-based id in `1..=limit`, shifted to 0-based.
fn one_based(line: usize, tok: &str, limit: usize, what: &str) -> Result<usize, TdParseError> {
    let x = number(line, tok)?;
    if x == 0 || x > limit {
        return Err(syntax(line, format!("{what} {x} outside 1..={limit}")));
    }
    Ok(x - 1)
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, TdParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<VertexId>>> = Vec::new();
    let mut found = 0;
    let mut tree_edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() || toks[0] == "c" {
            continue;
        }
        let Some((n_bags, _, n_vertices)) = header else {
            if toks.len() != 5 || toks[0] != "s" || toks[1] != "td" {
                return Err(syntax(
                    line,
                    "expected `s td <bags> <max-bag-size> <vertices>`",
                ));
            }
            let h = (
                number(line, toks[2])?,
                number(line, toks[3])?,
                number(line, toks[4])?,
            );
            bags = vec![None; h.0];
            header = Some(h);
            continue;
        };
        match toks[0] {
            "s" => return Err(syntax(line, "duplicate header")),
            "b" => {
                if toks.len() < 2 {
                    return Err(syntax(line, "bag line without id"));
                }
                found += 1;
                let id = number(line, toks[1])?;
                if id == 0 || id > n_bags {
                    return Err(TdParseError::BagCountMismatch {
                        declared: n_bags,
                        found: found.max(id),
                    });
                }
                if bags[id - 1].is_some() {
                    return Err(syntax(line, format!("bag {id} defined twice")));
                }
                let vs = toks[2..]
                    .iter()
                    .map(|t| one_based(line, t, n_vertices, "vertex").map(VertexId::from))
                    .collect::<Result<Vec<_>, _>>()?;
                bags[id - 1] = Some(vs);
            }
            _ => {
                if toks.len() != 2 {
                    return Err(syntax(line, "expected a tree edge `<bag> <bag>`"));
                }
                let a = one_based(line, toks[0], n_bags, "bag")?;
                let b = one_based(line, toks[1], n_bags, "bag")?;
                tree_edges.push((a, b));
            }
        }
    }

    let (n_bags, max_size, n_vertices) = header.ok_or(TdParseError::MissingHeader)?;
    if found != n_bags || bags.iter().any(Option::is_none) {
        return Err(TdParseError::BagCountMismatch {
            declared: n_bags,
            found,
        });
    }
    let td = TreeDecomposition::new(n_vertices, bags.into_iter().flatten().collect(), tree_edges);
    if td.max_bag_size() != max_size {
        return Err(TdParseError::BagSizeMismatch {
            declared: max_size,
            found: td.max_bag_size(),
        });
    }
    Ok(td)
}

pub fn emit_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "s td {} {} {}",
        td.bags.len(),
        td.max_bag_size(),
        td.vertex_count
    );
    for bag in &td.bags {
        let _ = write!(out, "b {}", bag.id + 1);
        for v in &bag.vertices {
            let _ = write!(out, " {}", v.0 + 1);
        }
        out.push('\n');
    }
    for &(a, b) in &td.tree_edges {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}
