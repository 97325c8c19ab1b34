//! Plain-text edge lists.
//!
//! The first significant line holds the vertex count `N`; every further
//! line holds one edge `i j` with 0-based endpoints. Blank lines and text
//! after `#` are ignored. Duplicate edges are accepted and merged.

use std::path::Path;

use oscnet_core::{build_from_edges, SymmetricMatrix};

#[derive(Debug, thiserror::Error)]
pub enum EdgeListError {
    #[error("edge list is empty (expected a vertex count on the first line)")]
    Empty,
    #[error("line {line}: expected a positive vertex count, found {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: expected two vertex indices \"i j\", found {text:?}")]
    BadEdge { line: usize, text: String },
    #[error("line {line}: vertex {index} out of range for {count} vertices")]
    OutOfRange { line: usize, index: usize, count: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub vertices: usize,
    /// In file order, duplicates kept.
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn adjacency(&self) -> oscnet_core::Result<SymmetricMatrix> {
        build_from_edges(self.vertices, &self.edges)
    }
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList, EdgeListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(EdgeListError::Empty)?;
    let vertices = match header.parse::<usize>() {
        Ok(n) if n > 0 => n,
        _ => {
            return Err(EdgeListError::BadHeader {
                line: header_line,
                text: header.to_string(),
            })
        }
    };

    let mut edges = Vec::new();
    for (line, body) in lines {
        let bad = || EdgeListError::BadEdge {
            line,
            text: body.to_string(),
        };
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(bad());
        }
        let i: usize = fields[0].parse().map_err(|_| bad())?;
        let j: usize = fields[1].parse().map_err(|_| bad())?;
        for index in [i, j] {
            if index >= vertices {
                return Err(EdgeListError::OutOfRange {
                    line,
                    index,
                    count: vertices,
                });
            }
        }
        if i == j {
            return Err(EdgeListError::SelfLoop { line, vertex: i });
        }
        edges.push((i, j));
    }
    Ok(EdgeList { vertices, edges })
}

pub fn read_edge_list(path: &Path) -> Result<EdgeList, EdgeListError> {
    let text = std::fs::read_to_string(path).map_err(|source| EdgeListError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text)
}
