//! Small-graph symmetry and embedding counts.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{edge_index, Graph};
use crate::error::{Error, Result};

/// Largest graph whose automorphisms are enumerated permutation by permutation.
pub const MAX_AUTOMORPHISM_VERTICES: usize = 10;

/// Largest pattern for subgraph search and copy counting.
pub const MAX_PATTERN_VERTICES: usize = 8;

/// `n (n-1) ... (n-k+1)`, zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (n - k + 1..=n).fold(BigUint::one(), |acc, x| acc * x)
}

/// Number of vertex permutations mapping the edge set onto itself.
pub fn automorphism_count(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > MAX_AUTOMORPHISM_VERTICES {
        return Err(Error::capacity(
            "vertex count for automorphism enumeration",
            MAX_AUTOMORPHISM_VERTICES,
            n,
        ));
    }
    let adj = g.adjacency_masks();
    let mut image = vec![0usize; n];
    Ok(count_automorphisms(&adj, 0, 0, &mut image))
}

fn count_automorphisms(adj: &[u64], v: usize, used: u64, image: &mut [usize]) -> u64 {
    let n = adj.len();
    if v == n {
        return 1;
    }
    let mut total = 0;
    for w in 0..n {
        if used >> w & 1 == 1 || adj[v].count_ones() != adj[w].count_ones() {
            continue;
        }
        let consistent =
            (0..v).all(|u| (adj[u] >> v & 1) == (adj[image[u]] >> w & 1));
        if consistent {
            image[v] = w;
            total += count_automorphisms(adj, v + 1, used | 1 << w, image);
        }
    }
    total
}

/// Number of labelled copies of `f` in `K_n`: `n!/(n-v)! / |Aut(f)|`.
///
/// Matchings (maximum degree at most one) use the closed form
/// `|Aut| = 2^k k! i!` for `k` edges and `i` isolated vertices, so they are
/// not subject to the automorphism enumeration limit.
pub fn count_labelled_copies(f: &Graph, n: usize) -> Result<BigUint> {
    let v = f.n();
    if v > n {
        return Ok(BigUint::zero());
    }
    let injections = falling_factorial(n as u64, v as u64);
    let is_matching = (0..v).all(|x| f.degree(x) <= 1);
    let aut = if is_matching {
        let k = f.edge_count() as u64;
        let iso = f.isolated_vertex_count() as u64;
        (BigUint::one() << k as usize) * falling_factorial(k, k) * falling_factorial(iso, iso)
    } else {
        BigUint::from(automorphism_count(f)?)
    };
    debug_assert!((&injections % &aut).is_zero());
    Ok(injections / aut)
}

/// Isomorphism-invariant code for graphs on at most
/// [`MAX_AUTOMORPHISM_VERTICES`] vertices: the minimum adjacency bit string
/// over relabellings that respect a degree-based vertex partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: u8,
    pub code: u64,
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let n = g.n();
    if n > MAX_AUTOMORPHISM_VERTICES {
        return Err(Error::capacity(
            "vertex count for canonical form",
            MAX_AUTOMORPHISM_VERTICES,
            n,
        ));
    }
    let adj = g.adjacency_masks();
    let degrees = g.degrees();
    // One refinement round: degree, then the sorted degrees of the neighbours.
    let mut keyed: Vec<((usize, Vec<usize>), usize)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&u| degrees[u]).collect();
            nd.sort_unstable();
            ((degrees[v], nd), v)
        })
        .collect();
    keyed.sort();
    // block[p]: vertices that may be placed at position p.
    let mut block_of_pos = Vec::with_capacity(n);
    let mut blocks: Vec<u64> = Vec::new();
    let mut prev: Option<&(usize, Vec<usize>)> = None;
    for (key, v) in &keyed {
        if prev != Some(key) {
            blocks.push(0);
            prev = Some(key);
        }
        let b = blocks.len() - 1;
        blocks[b] |= 1 << v;
        block_of_pos.push(b);
    }

    let mut best = u64::MAX;
    let mut placed = vec![0usize; n];
    min_code(&adj, &blocks, &block_of_pos, 0, 0, &mut placed, &mut best);
    Ok(CanonicalForm {
        n: n as u8,
        code: if n < 2 { 0 } else { best },
    })
}

fn min_code(
    adj: &[u64],
    blocks: &[u64],
    block_of_pos: &[usize],
    pos: usize,
    used: u64,
    placed: &mut [usize],
    best: &mut u64,
) {
    let n = adj.len();
    if pos == n {
        let mut code = 0u64;
        for j in 1..n {
            for i in 0..j {
                if adj[placed[i]] >> placed[j] & 1 == 1 {
                    code |= 1 << edge_index(n, i, j);
                }
            }
        }
        *best = (*best).min(code);
        return;
    }
    let mut avail = blocks[block_of_pos[pos]] & !used;
    while avail != 0 {
        let v = avail.trailing_zeros() as usize;
        avail &= avail - 1;
        placed[pos] = v;
        min_code(adj, blocks, block_of_pos, pos + 1, used | 1 << v, placed, best);
    }
}

/// Matching plan for a pattern: the order in which pattern vertices are
/// mapped, and for each position the earlier positions it must be adjacent to.
struct Plan {
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
    degree: Vec<usize>,
}

impl Plan {
    fn new(f: &Graph) -> Self {
        let n = f.n();
        let mut order = Vec::with_capacity(n);
        let mut in_order = vec![false; n];
        while order.len() < n {
            // Most links into the ordered prefix, then highest degree,
            // then smallest label.
            let next = (0..n)
                .filter(|&v| !in_order[v])
                .max_by_key(|&v| {
                    let links = f.neighbors(v).iter().filter(|&&u| in_order[u]).count();
                    (links, f.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            in_order[next] = true;
            order.push(next);
        }
        let mut pos_of = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            pos_of[v] = p;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(p, &v)| {
                let mut b: Vec<usize> = f
                    .neighbors(v)
                    .iter()
                    .map(|&u| pos_of[u])
                    .filter(|&q| q < p)
                    .collect();
                b.sort_unstable();
                b
            })
            .collect();
        let degree = order.iter().map(|&v| f.degree(v)).collect();
        Plan { order, back, degree }
    }

    /// Walks every injective edge-preserving map of the pattern into `g`.
    /// `visit` returns `false` to stop the search; the return value says
    /// whether the search ran to completion.
    fn for_each_embedding(&self, g: &Graph, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let mut image = vec![usize::MAX; self.order.len()];
        let mut used = vec![false; g.n()];
        self.extend(g, 0, &mut image, &mut used, visit)
    }

    fn extend(
        &self,
        g: &Graph,
        pos: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if pos == self.order.len() {
            return visit(image);
        }
        let need = self.degree[pos];
        let back = &self.back[pos];
        let mut try_vertex = |w: usize, image: &mut Vec<usize>, used: &mut Vec<bool>| -> bool {
            if used[w] || g.degree(w) < need {
                return true;
            }
            if back.iter().skip(1).any(|&q| !g.has_edge(image[q], w)) {
                return true;
            }
            image[pos] = w;
            used[w] = true;
            let go_on = self.extend(g, pos + 1, image, used, visit);
            used[w] = false;
            go_on
        };
        match back.first() {
            Some(&anchor) => {
                let anchor_image = image[anchor];
                for &w in g.neighbors(anchor_image) {
                    if !try_vertex(w, image, used) {
                        return false;
                    }
                }
            }
            None => {
                for w in 0..g.n() {
                    if !try_vertex(w, image, used) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn check_pattern(f: &Graph) -> Result<()> {
    if f.n() > MAX_PATTERN_VERTICES {
        return Err(Error::capacity(
            "pattern vertex count",
            MAX_PATTERN_VERTICES,
            f.n(),
        ));
    }
    Ok(())
}

/// Does `g` contain a (not necessarily induced) copy of `f`?
pub fn contains_copy(g: &Graph, f: &Graph) -> Result<bool> {
    check_pattern(f)?;
    if g.n() < f.n() || g.edge_count() < f.edge_count() {
        return Ok(false);
    }
    let core = f.without_isolated();
    if core.n() == 0 {
        return Ok(true);
    }
    let plan = Plan::new(&core);
    let exhausted = plan.for_each_embedding(g, &mut |_| false);
    Ok(!exhausted)
}

/// Number of distinct edge subsets of `g` that form a copy of `f`.
///
/// Isolated vertices of `f` only require room in `g`; they never
/// distinguish two copies.
pub fn count_copies_in(f: &Graph, g: &Graph) -> Result<u64> {
    check_pattern(f)?;
    if g.n() < f.n() {
        return Ok(0);
    }
    let core = f.without_isolated();
    if core.n() == 0 {
        return Ok(1);
    }
    let plan = Plan::new(&core);
    let mut injections = 0u64;
    plan.for_each_embedding(g, &mut |_| {
        injections += 1;
        true
    });
    let aut = automorphism_count(&core)?;
    debug_assert_eq!(injections % aut, 0);
    Ok(injections / aut)
}
