use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;

use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count for the exhaustive densest-subgraph search.
pub const MAX_DENSEST_VERTICES: usize = 24;

/// Edge-to-vertex ratio kept as the raw pair of counts.
///
/// Comparisons cross-multiply, so `1/2 == 2/4` and nothing is rounded.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct Density {
    pub edges: u64,
    pub vertices: u64,
}

impl Density {
    pub fn new(edges: u64, vertices: u64) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::Domain("density of a graph with no vertices".into()));
        }
        Ok(Density { edges, vertices })
    }

    /// The reduced rational value.
    pub fn value(&self) -> Ratio<u64> {
        Ratio::new(self.edges, self.vertices)
    }

    pub fn as_f64(&self) -> f64 {
        self.edges as f64 / self.vertices as f64
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.edges as u128 * other.vertices as u128;
        let rhs = other.edges as u128 * self.vertices as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.edges, self.vertices)
    }
}

/// `e(g) / v(g)`.
pub fn density(g: &Graph) -> Result<Density> {
    Density::new(g.edge_count() as u64, g.n() as u64)
}

/// Vertex subset maximising induced edges per vertex.
///
/// Exhaustive over all non-empty vertex subsets; an optimal subgraph on a
/// fixed vertex set always keeps every induced edge, so subsets of vertices
/// suffice. Ties go to the fewest vertices, then to the lexicographically
/// smallest sorted vertex list.
pub fn densest_subgraph(g: &Graph) -> Result<(Vec<usize>, Density)> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Domain("densest subgraph of the empty vertex set".into()));
    }
    if n > MAX_DENSEST_VERTICES {
        return Err(Error::capacity(
            "vertex count for densest subgraph",
            MAX_DENSEST_VERTICES,
            n,
        ));
    }
    let adj = g.adjacency_masks();

    let mut best_mask = 1u64;
    let mut best = Density { edges: 0, vertices: 1 };
    for mask in 1u64..(1u64 << n) {
        let vertices = mask.count_ones() as u64;
        let mut twice_edges = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_edges += (adj[v] & mask).count_ones() as u64;
        }
        let cand = Density { edges: twice_edges / 2, vertices };
        let better = match cand.cmp(&best) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match vertices.cmp(&best.vertices) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => lex_less(mask, best_mask),
            },
        };
        if better {
            best = cand;
            best_mask = mask;
        }
    }
    let subset = (0..n).filter(|&v| best_mask >> v & 1 == 1).collect();
    Ok((subset, best))
}

/// For equal popcounts: is the sorted vertex list of `a` lexicographically
/// smaller than that of `b`? The first differing vertex decides, and the
/// list holding it is smaller.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let first = diff.trailing_zeros();
    a >> first & 1 == 1
}
