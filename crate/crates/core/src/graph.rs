//! Undirected simple graphs stored as sorted neighbor lists and as a
//! compressed-sparse-column adjacency matrix.
//!
//! Edge-list text format: one `u v` pair of 0-based ids per line, `#` lines
//! ignored. An optional first line `n m` declares the vertex and edge count;
//! it is recognised as a header when `m` equals the number of remaining data
//! lines. Edges are symmetrized, self-loops dropped and duplicates merged.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// CSC storage of the symmetric 0/1 adjacency matrix. Values are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csc {
    pub col_ptr: Vec<usize>,
    pub row_idx: Vec<usize>,
}

impl Csc {
    pub fn n(&self) -> usize {
        self.col_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// Row indices of the nonzeros in column `j`, ascending.
    #[inline]
    pub fn column(&self, j: usize) -> &[usize] {
        &self.row_idx[self.col_ptr[j]..self.col_ptr[j + 1]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeStats {
    pub avg_degree: f64,
    pub max_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    neighbors: Vec<Vec<usize>>,
    csc: Csc,
}

impl Graph {
    /// Builds a graph on `n` vertices from arbitrary (possibly duplicated,
    /// reversed or self-looping) edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut neighbors = vec![Vec::new(); n];
        for (u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::VertexOutOfRange { id, n });
                }
            }
            if u == v {
                continue;
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        let m = neighbors.iter().map(Vec::len).sum::<usize>() / 2;
        let csc = build_csc(&neighbors);
        Ok(Graph { n, m, neighbors, csc })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn csc(&self) -> &Csc {
        &self.csc
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    pub fn degree_stats(&self) -> DegreeStats {
        DegreeStats {
            avg_degree: 2.0 * self.m as f64 / self.n as f64,
            max_degree: self.neighbors.iter().map(Vec::len).max().unwrap_or(0),
        }
    }

    /// Relabels vertex `v` as `perm[v]`. This is the hook for externally
    /// computed locality orderings (e.g. reverse Cuthill-McKee); no ordering
    /// algorithm is applied here.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Config(format!(
                "permutation has length {}, graph has {} vertices",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Config("not a permutation".into()));
            }
        }
        Graph::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Canonical text form: header `n m`, then `u v` with `u < v` in order.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::with_capacity(16 * (self.m + 1));
        writeln!(out, "{} {}", self.n, self.m).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_edge_list_string()).map_err(|e| Error::io(path, e))
    }
}

fn build_csc(neighbors: &[Vec<usize>]) -> Csc {
    // The matrix is symmetric, so column j holds exactly the neighbors of j.
    let mut col_ptr = Vec::with_capacity(neighbors.len() + 1);
    col_ptr.push(0);
    let mut row_idx = Vec::with_capacity(neighbors.iter().map(Vec::len).sum());
    for list in neighbors {
        row_idx.extend_from_slice(list);
        col_ptr.push(row_idx.len());
    }
    Csc { col_ptr, row_idx }
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

/// Parses lines of `u v` pairs. Returns `(line number, pair)` for each data
/// line; shared with the template parser.
pub(crate) fn parse_pairs(text: &str) -> Result<Vec<(usize, (usize, usize))>> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let mut fields = line.split_whitespace();
        let mut next = |what: &str| -> Result<usize> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("missing {what}"),
            })?;
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid {what} {tok:?}"),
            })
        };
        let u = next("first vertex id")?;
        let v = next("second vertex id")?;
        if let Some(extra) = fields.next() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("unexpected trailing field {extra:?}"),
            });
        }
        pairs.push((lineno, (u, v)));
    }
    Ok(pairs)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let pairs = parse_pairs(text)?;
    let (declared_n, edges) = match pairs.split_first() {
        // A first line `n m` is a header when m counts the remaining lines
        // and n leaves room for an edge.
        Some((&(_, (n, m)), rest)) if m == rest.len() && (m == 0 || n >= 2) => (Some(n), rest),
        _ => (None, &pairs[..]),
    };
    let n = match declared_n {
        Some(n) => {
            if let Some(&(line, (u, v))) = edges.iter().find(|(_, (u, v))| *u >= n || *v >= n) {
                return Err(Error::Parse {
                    line,
                    message: format!("edge ({u}, {v}) references a vertex outside n = {n}"),
                });
            }
            n
        }
        None => edges.iter().map(|&(_, (u, v))| u.max(v) + 1).max().unwrap_or(0),
    };
    Graph::from_edges(n, edges.iter().map(|&(_, e)| e))
}
