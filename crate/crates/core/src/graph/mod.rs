//! Labelled simple graphs on the vertex set `0..n`.
//!
//! A [`Graph`] keeps its edge list sorted lexicographically and its adjacency
//! lists sorted, so two graphs with the same edge set compare equal. The text
//! format is
//!
//! ```text
//! n 4
//! 0 1
//! 0 2
//! ```
//!
//! one `i j` line per edge with `i < j`, newline terminated.

mod builtin;
mod density;
mod iso;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use builtin::builtin_graph;
pub use density::{densest_subgraph, density, Density};
pub use iso::{
    automorphism_count, canonical_form, contains_copy, count_copies_in, count_labelled_copies,
    falling_factorial, CanonicalForm, MAX_AUTOMORPHISM_VERTICES, MAX_PATTERN_VERTICES,
};

/// An undirected edge `(i, j)` with `i < j`.
pub type Edge = (usize, usize);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

/// Number of potential edges on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of edge `{i, j}` in the lexicographic order
/// `{0,1}, {0,2}, ..., {n-2,n-1}` of all pairs.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n);
    // rows 0..i hold (n-1) + (n-2) + ... + (n-i) pairs
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_from_index(n: usize, mut idx: usize) -> Edge {
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
        i += 1;
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect::<Vec<_>>();
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Graph { n, edges, adj }
    }

    /// Builds a graph, rejecting loops, duplicate edges and out-of-range
    /// endpoints. Endpoints may be given in either order.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Domain(format!("loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::Domain(format!(
                    "edge {{{a},{b}}} has an endpoint outside 0..{n}"
                )));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!(
                "duplicate edge {{{},{}}}",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    /// Builds a graph from edges already known to be valid, in any order.
    /// Used on hot paths (prefixes of the random edge process).
    pub(crate) fn from_valid_edges(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        debug_assert!(edges.windows(2).all(|w| w[0] != w[1]));
        debug_assert!(edges.iter().all(|&(i, j)| i < j && j < n));
        Self::from_sorted_unique(n, edges)
    }

    fn from_sorted_unique(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in &edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v || u >= self.n || v >= self.n {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// The graph with one more edge; `None` if the edge is already present
    /// or invalid.
    pub fn with_edge(&self, u: usize, v: usize) -> Option<Graph> {
        if u == v || u >= self.n || v >= self.n || self.has_edge(u, v) {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.push((u.min(v), u.max(v)));
        Some(Self::from_valid_edges(self.n, edges))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges = self
            .edges
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (perm[i], perm[j]);
                (a.min(b), a.max(b))
            })
            .collect();
        Self::from_valid_edges(self.n, edges)
    }

    /// Disjoint union, with `other`'s vertices shifted past this graph's.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(i, j)| (i + shift, j + shift)))
            .collect();
        Self::from_valid_edges(self.n + other.n, edges)
    }

    /// Subgraph induced by the vertices whose bits are set in `mask`,
    /// relabelled `0..popcount` in increasing order. Requires `n <= 64`.
    pub fn induced(&self, mask: u64) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in keep.iter().enumerate() {
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(i, j)| index[i] != usize::MAX && index[j] != usize::MAX)
            .map(|&(i, j)| (index[i], index[j]))
            .collect();
        Self::from_valid_edges(keep.len(), edges)
    }

    /// Graph spanned by a subset of this graph's edges, dropping vertices the
    /// subset does not touch. Returns the graph and the kept original labels.
    pub fn edge_subgraph(&self, edge_mask: u64) -> (Graph, Vec<usize>) {
        let chosen: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(k, _)| edge_mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let mut touched: Vec<usize> = chosen.iter().flat_map(|&(i, j)| [i, j]).collect();
        touched.sort_unstable();
        touched.dedup();
        let index = |v: usize| touched.binary_search(&v).unwrap();
        let edges = chosen.iter().map(|&(i, j)| (index(i), index(j))).collect();
        (Self::from_valid_edges(touched.len(), edges), touched)
    }

    /// Adjacency rows as bitmasks. Requires `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bitmask adjacency needs n <= 64");
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &u| m | 1 << u))
            .collect()
    }

    pub fn isolated_vertex_count(&self) -> usize {
        self.adj.iter().filter(|l| l.is_empty()).count()
    }

    /// Same graph with degree-zero vertices removed (relabelled in order).
    pub fn without_isolated(&self) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) > 0).collect();
        if keep.len() == self.n {
            return self.clone();
        }
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in keep.iter().enumerate() {
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(i, j)| (index[i], index[j]))
            .collect();
        Self::from_valid_edges(keep.len(), edges)
    }

    /// Serializes to the `n <count>` / `i j` text format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the text format. Duplicate edges, loops, `i > j`, and
    /// endpoints `>= n` are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (first_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input, expected `n <count>`".into(),
        })?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count.parse::<usize>().map_err(|e| Error::Parse {
                line: first_no,
                msg: format!("bad vertex count: {e}"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line: first_no,
                    msg: format!("expected `n <count>`, got `{header}`"),
                })
            }
        };

        let mut edges = Vec::new();
        for (line, content) in lines {
            let parts: Vec<&str> = content.split_whitespace().collect();
            let [a, b] = parts.as_slice() else {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected `<i> <j>`, got `{content}`"),
                });
            };
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line,
                    msg: format!("bad vertex `{s}`: {e}"),
                })
            };
            let (i, j) = (parse(a)?, parse(b)?);
            let msg = if i == j {
                Some(format!("loop at vertex {i}"))
            } else if i > j {
                Some(format!("edge `{i} {j}` must be written with i < j"))
            } else if j >= n {
                Some(format!("vertex {j} is not below n = {n}"))
            } else {
                None
            };
            if let Some(msg) = msg {
                return Err(Error::Parse { line, msg });
            }
            edges.push(((i, j), line));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse {
                line: w[0].1.max(w[1].1),
                msg: format!("duplicate edge `{} {}`", w[0].0 .0, w[0].0 .1),
            });
        }
        Ok(Self::from_sorted_unique(
            n,
            edges.into_iter().map(|(e, _)| e).collect(),
        ))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for (i, j) in &self.edges {
            writeln!(f, "{i} {j}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse(s)
    }
}

impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Graph", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edges)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_roundtrip() {
        for n in 2..9 {
            let mut expected = 0;
            for i in 0..n {
                for j in i + 1..n {
                    assert_eq!(edge_index(n, i, j), expected);
                    assert_eq!(edge_from_index(n, expected), (i, j));
                    expected += 1;
                }
            }
            assert_eq!(expected, pair_count(n));
        }
    }

    #[test]
    fn rejects_loops_duplicates_and_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::from_edges(3, [(2, 0)]).is_ok());
    }

    #[test]
    fn text_format_roundtrip() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4), (1, 2)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "n 5\n0 1\n1 2\n3 4\n");
        assert_eq!(Graph::parse(&text).unwrap(), g);
    }

    #[test]
    fn parser_errors() {
        let err = |s: &str| match Graph::parse(s) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(err(""), 1);
        assert_eq!(err("nodes 3\n"), 1);
        assert_eq!(err("n 3\n0 0\n"), 2);
        assert_eq!(err("n 3\n1 0\n"), 2);
        assert_eq!(err("n 3\n0 1\n1 2\n0 1\n"), 4);
        assert_eq!(err("n 3\n0 3\n"), 2);
        assert_eq!(err("n 3\n0 1 2\n"), 2);
        assert_eq!(err("n x\n"), 1);
    }

    #[test]
    fn with_edge_and_has_edge() {
        let g = Graph::empty(3);
        let g = g.with_edge(2, 0).unwrap();
        assert!(g.has_edge(0, 2) && g.has_edge(2, 0));
        assert!(g.with_edge(0, 2).is_none());
        assert!(g.with_edge(1, 1).is_none());
        assert_eq!(g.edges(), &[(0, 2)]);
    }

    #[test]
    fn edge_subgraph_drops_untouched_vertices() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let (sub, labels) = g.edge_subgraph(0b101);
        assert_eq!(labels, vec![0, 1, 3, 4]);
        assert_eq!(sub.edges(), &[(0, 1), (2, 3)]);
    }
}
