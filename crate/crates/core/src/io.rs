// SPDX-License-Identifier: Apache-2.0

//! File formats: DIMACS `.col` and adjacency JSON for graphs, JSON for list
//! assignments, correspondence assignments and `K_n − M` instances.

use crate::correspondence::{CorrespondenceAssignment, CorrespondenceError};
use crate::graph::{Graph, GraphError, Matching};
use crate::knm::{KnmError, KnmInstance};
use crate::lists::{ListAssignment, ListError};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lists(#[from] ListError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
    #[error(transparent)]
    Knm(#[from] KnmError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line, msg: msg.into() }
}

/// Parses `p edge n m` / `e u v` with 1-indexed vertices. Comment lines
/// start with `c`; repeated edges are merged.
pub fn parse_dimacs(text: &str) -> Result<Graph, IoError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tok = raw.split_whitespace();
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(parse_err(line, "second problem line"));
                }
                let format = tok.next().ok_or_else(|| parse_err(line, "missing format"))?;
                if format != "edge" && format != "col" {
                    return Err(parse_err(line, format!("unsupported format {format:?}")));
                }
                let count = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line, "missing or bad vertex count"))?;
                n = Some(count);
            }
            Some("e") => {
                let n = n.ok_or_else(|| parse_err(line, "edge before problem line"))?;
                let mut endpoint = || -> Result<usize, IoError> {
                    let v: usize = tok
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| parse_err(line, "missing or bad endpoint"))?;
                    if v == 0 || v > n {
                        return Err(parse_err(line, format!("vertex {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let (u, v) = (endpoint()?, endpoint()?);
                if u == v {
                    return Err(parse_err(line, format!("self-loop at {}", u + 1)));
                }
                edges.push((u.min(v), u.max(v)));
            }
            Some(other) => return Err(parse_err(line, format!("unknown line type {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "no problem line"))?;
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph::from_edges(n, edges)?)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).expect("writing to a String");
    }
    out
}

/// An array of 0-indexed neighbor arrays.
pub fn parse_adjacency_json(text: &str) -> Result<Graph, IoError> {
    let adj: Vec<Vec<usize>> = serde_json::from_str(text)?;
    Ok(Graph::from_adjacency(adj)?)
}

pub fn write_adjacency_json(g: &Graph) -> String {
    serde_json::to_string(g.adjacency()).expect("adjacency serializes")
}

#[derive(Serialize, Deserialize)]
struct ListsFile {
    lists: Vec<Vec<u32>>,
}

pub fn parse_lists_json(text: &str) -> Result<ListAssignment, IoError> {
    let file: ListsFile = serde_json::from_str(text)?;
    Ok(ListAssignment::new(file.lists)?)
}

pub fn write_lists_json(lists: &ListAssignment) -> String {
    serde_json::to_string(&ListsFile { lists: lists.lists().to_vec() }).expect("lists serialize")
}

#[derive(Serialize, Deserialize)]
struct EdgePairs {
    u: usize,
    v: usize,
    pairs: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct CorrespondenceFile {
    edges: Vec<EdgePairs>,
}

/// Edges absent from the file get empty matchings.
pub fn parse_correspondence_json(
    g: &Graph,
    lists: ListAssignment,
    text: &str,
) -> Result<CorrespondenceAssignment, IoError> {
    let file: CorrespondenceFile = serde_json::from_str(text)?;
    let mut given: std::collections::BTreeMap<(usize, usize), Vec<(u32, u32)>> =
        g.edges().map(|e| (e, vec![])).collect();
    for e in file.edges {
        if e.u >= e.v {
            return Err(parse_err(0, format!("edge ({}, {}) must have u < v", e.u, e.v)));
        }
        match given.get_mut(&(e.u, e.v)) {
            Some(slot) => *slot = e.pairs,
            None => return Err(CorrespondenceError::NotAnEdge(e.u, e.v).into()),
        }
    }
    Ok(CorrespondenceAssignment::new(g, lists, given)?)
}

pub fn write_correspondence_json(ca: &CorrespondenceAssignment) -> String {
    let edges = ca.matchings().iter().map(|(&(u, v), pairs)| EdgePairs { u, v, pairs: pairs.clone() }).collect();
    serde_json::to_string(&CorrespondenceFile { edges }).expect("correspondence serializes")
}

#[derive(Serialize, Deserialize)]
struct KnmFile {
    n: usize,
    lists: Vec<Vec<u32>>,
    matching: Vec<(usize, usize)>,
}

pub fn parse_knm_json(text: &str) -> Result<KnmInstance, IoError> {
    let file: KnmFile = serde_json::from_str(text)?;
    let matching = Matching::new(file.matching)?;
    Ok(KnmInstance::new(file.n, matching, ListAssignment::new(file.lists)?)?)
}

pub fn write_knm_json(inst: &KnmInstance) -> String {
    serde_json::to_string(&KnmFile {
        n: inst.n,
        lists: inst.lists.lists().to_vec(),
        matching: inst.matching.pairs().to_vec(),
    })
    .expect("instance serializes")
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

/// Reads a graph, choosing adjacency JSON for `.json` files and DIMACS otherwise.
pub fn read_graph(path: &Path) -> Result<Graph, IoError> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        parse_adjacency_json(&text)
    } else {
        parse_dimacs(&text)
    }
}
