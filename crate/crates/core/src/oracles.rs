//! Increasing graph properties used as oracles by the samplers, estimators
//! and hitting-time experiments.
//!
//! Every predicate here is monotone: adding an edge never turns `true`
//! into `false`. The perfect-matching test is randomized above
//! [`EXACT_MATCHING_MAX_N`] vertices, with one-sided error (it can only
//! miss a matching) below `2^-40`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{builtin_graph, contains_copy, Graph, MAX_PATTERN_VERTICES};
use crate::random::RandomStream;

/// Above this many vertices the perfect-matching oracle switches from
/// exhaustive search to the Tutte-matrix rank test.
pub const EXACT_MATCHING_MAX_N: usize = 12;
pub const MAX_HAMILTONIAN_N: usize = 24;
pub const MAX_TRIANGLE_FACTOR_N: usize = 18;

/// Target bound on the probability of missing an existing perfect matching.
pub const MATCHING_ERROR_BITS: f64 = 40.0;

/// Mersenne prime `2^61 - 1`, the field for the Tutte-matrix test.
const TUTTE_PRIME: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Default)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the size of the merged set.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return self.size[ra];
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.size[ra]
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

pub fn largest_component_size(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    let mut uf = UnionFind::new(g.n());
    let mut best = 1;
    for &(i, j) in g.edges() {
        best = best.max(uf.union(i, j));
    }
    best
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1 || (g.edge_count() + 1 >= g.n() && largest_component_size(g) == g.n())
}

pub fn has_isolated_vertex(g: &Graph) -> bool {
    (0..g.n()).any(|v| g.degree(v) == 0)
}

pub fn min_degree(g: &Graph) -> usize {
    (0..g.n()).map(|v| g.degree(v)).min().unwrap_or(0)
}

/// Not-necessarily-induced containment of `f` in `g`.
pub fn contains_subgraph(g: &Graph, f: &Graph) -> Result<bool> {
    contains_copy(g, f)
}

pub fn every_vertex_in_triangle(g: &Graph) -> bool {
    (0..g.n()).all(|v| vertex_in_triangle(g, v))
}

fn vertex_in_triangle(g: &Graph, v: usize) -> bool {
    let nv = g.neighbors(v);
    nv.iter().any(|&u| {
        // sorted-list intersection of N(v) and N(u)
        let nu = g.neighbors(u);
        let (mut a, mut b) = (0, 0);
        while a < nv.len() && b < nu.len() {
            match nv[a].cmp(&nu[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    })
}

/// Perfect matching test with a fixed internal random stream.
/// See [`has_perfect_matching_with`].
pub fn has_perfect_matching(g: &Graph) -> bool {
    let mut rng = RandomStream::new(0x7475_7474_6521, 0).rng();
    has_perfect_matching_with(g, &mut rng)
}

/// Exhaustive for `n <= 12`; above that, the Tutte matrix with random
/// entries from `GF(2^61 - 1)` is tested for full rank, repeating until the
/// Schwartz–Zippel miss probability is below `2^-40`.
pub fn has_perfect_matching_with<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> bool {
    let n = g.n();
    if n % 2 == 1 {
        return false;
    }
    if n == 0 {
        return true;
    }
    if has_isolated_vertex(g) || g.edge_count() < n / 2 {
        return false;
    }
    if n <= EXACT_MATCHING_MAX_N {
        return exact_perfect_matching(g);
    }
    (0..tutte_repetitions(n)).any(|_| tutte_full_rank(g, rng))
}

/// Independent repetitions needed so that `(n/p)^k < 2^-40`.
pub fn tutte_repetitions(n: usize) -> usize {
    let per_round = (TUTTE_PRIME as f64 / n as f64).log2();
    (MATCHING_ERROR_BITS / per_round).ceil().max(1.0) as usize
}

pub(crate) fn exact_perfect_matching(g: &Graph) -> bool {
    let adj = g.adjacency_masks();
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    fn go(adj: &[u64], free: u64) -> bool {
        if free == 0 {
            return true;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut cand = adj[v] & rest;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if go(adj, rest & !(1 << u)) {
                return true;
            }
        }
        false
    }
    go(&adj, full)
}

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let prod = a as u128 * b as u128;
    let lo = (prod as u64) & TUTTE_PRIME;
    let hi = (prod >> 61) as u64;
    let s = lo + hi;
    if s >= TUTTE_PRIME {
        s - TUTTE_PRIME
    } else {
        s
    }
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn tutte_full_rank<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> bool {
    let n = g.n();
    let mut m = vec![0u64; n * n];
    for &(i, j) in g.edges() {
        let x = rng.gen_range(0..TUTTE_PRIME);
        m[i * n + j] = x;
        m[j * n + i] = (TUTTE_PRIME - x) % TUTTE_PRIME;
    }
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return false;
        };
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
        }
        let inv = pow_mod(m[col * n + col], TUTTE_PRIME - 2);
        for r in col + 1..n {
            let lead = m[r * n + col];
            if lead == 0 {
                continue;
            }
            let factor = mul_mod(lead, inv);
            for k in col..n {
                let sub = mul_mod(factor, m[col * n + k]);
                let cur = m[r * n + k];
                m[r * n + k] = if cur >= sub {
                    cur - sub
                } else {
                    cur + TUTTE_PRIME - sub
                };
            }
        }
    }
    true
}

/// Exact Hamiltonian-cycle test by dynamic programming over vertex subsets.
pub fn has_hamiltonian_cycle(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n > MAX_HAMILTONIAN_N {
        return Err(Error::capacity(
            "vertex count for Hamiltonicity",
            MAX_HAMILTONIAN_N,
            n,
        ));
    }
    if n < 3 || min_degree(g) < 2 || !is_connected(g) {
        return Ok(false);
    }
    // Paths start at vertex 0; subsets range over vertices 1..n, shifted down.
    let adj = g.adjacency_masks();
    let m = n - 1;
    let shifted: Vec<u32> = (1..n).map(|v| (adj[v] >> 1) as u32).collect();
    let from_start = (adj[0] >> 1) as u32;
    let full = (1u32 << m) - 1;
    // reach[mask]: endpoints v such that some path 0 -> ... -> v visits
    // exactly {0} ∪ mask.
    let mut reach = vec![0u32; 1 << m];
    for u in 0..m {
        if from_start >> u & 1 == 1 {
            reach[1 << u] = 1 << u;
        }
    }
    for mask in 1..=full {
        let ends = reach[mask as usize];
        if ends == 0 {
            continue;
        }
        let mut outside = full & !mask;
        while outside != 0 {
            let u = outside.trailing_zeros();
            outside &= outside - 1;
            if shifted[u as usize] & ends != 0 {
                reach[(mask | 1 << u) as usize] |= 1 << u;
            }
        }
    }
    Ok(reach[full as usize] & from_start != 0)
}

/// Partition of the vertices into vertex-disjoint triangles.
/// `false` (not an error) when `3` does not divide `n`.
pub fn has_triangle_factor(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n > MAX_TRIANGLE_FACTOR_N {
        return Err(Error::capacity(
            "vertex count for triangle factor",
            MAX_TRIANGLE_FACTOR_N,
            n,
        ));
    }
    if n % 3 != 0 {
        return Ok(false);
    }
    if n == 0 {
        return Ok(true);
    }
    let adj = g.adjacency_masks();
    let mut dead = vec![false; 1 << n];
    fn go(adj: &[u64], uncovered: u64, dead: &mut [bool]) -> bool {
        if uncovered == 0 {
            return true;
        }
        if dead[uncovered as usize] {
            return false;
        }
        let v = uncovered.trailing_zeros() as usize;
        let rest = uncovered & !(1 << v);
        let mut us = adj[v] & rest;
        while us != 0 {
            let u = us.trailing_zeros() as usize;
            us &= us - 1;
            // w > u so each triangle is tried once
            let mut ws = adj[v] & adj[u] & rest & !((2u64 << u) - 1);
            while ws != 0 {
                let w = ws.trailing_zeros() as usize;
                ws &= ws - 1;
                if go(adj, rest & !(1 << u) & !(1 << w), dead) {
                    return true;
                }
            }
        }
        dead[uncovered as usize] = true;
        false
    }
    let full = (1u64 << n) - 1;
    Ok(go(&adj, full, &mut dead))
}

type Predicate = dyn Fn(&Graph) -> bool + Send + Sync;

/// A named increasing graph property.
///
/// The string identifiers accepted by [`Oracle::parse`] and produced by
/// [`Oracle::name`] are `connected`, `giant:<fraction>`, `no-isolated`,
/// `mindeg:<k>`, `contains:<builtin|file>`, `perfect-matching`,
/// `hamiltonian`, `triangle-factor` and `vertex-in-triangle`.
#[derive(Clone)]
pub enum Oracle {
    Connected,
    /// Largest component has at least `fraction * n` vertices.
    Giant(f64),
    NoIsolated,
    MinDegree(usize),
    Contains { label: String, pattern: Graph },
    PerfectMatching,
    Hamiltonian,
    TriangleFactor,
    VertexInTriangle,
    /// Caller-supplied deterministic predicate; the caller vouches for
    /// monotonicity.
    Custom { label: String, predicate: Arc<Predicate> },
}

impl Oracle {
    pub fn parse(spec: &str) -> Result<Oracle> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let oracle = match (head, arg) {
            ("connected", None) => Oracle::Connected,
            ("no-isolated", None) => Oracle::NoIsolated,
            ("perfect-matching", None) => Oracle::PerfectMatching,
            ("hamiltonian", None) => Oracle::Hamiltonian,
            ("triangle-factor", None) => Oracle::TriangleFactor,
            ("vertex-in-triangle", None) => Oracle::VertexInTriangle,
            ("giant", Some(a)) => {
                let fraction: f64 = a
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad giant fraction `{a}`")))?;
                if !(0.0..=1.0).contains(&fraction) {
                    return Err(Error::Usage(format!("giant fraction {fraction} not in [0,1]")));
                }
                Oracle::Giant(fraction)
            }
            ("mindeg", Some(a)) => Oracle::MinDegree(
                a.parse()
                    .map_err(|_| Error::Usage(format!("bad minimum degree `{a}`")))?,
            ),
            ("contains", Some(a)) => Oracle::contains_named(a)?,
            _ => return Err(Error::Usage(format!("unknown oracle `{spec}`"))),
        };
        Ok(oracle)
    }

    /// `contains:<name>` where `name` is a builtin graph or a path to a file
    /// in the graph text format.
    pub fn contains_named(name: &str) -> Result<Oracle> {
        let pattern = match builtin_graph(name) {
            Ok(g) => g,
            Err(_) => {
                let text = std::fs::read_to_string(name).map_err(|e| {
                    Error::Usage(format!("`{name}` is neither a builtin graph nor a readable file: {e}"))
                })?;
                Graph::parse(&text)?
            }
        };
        if pattern.n() > MAX_PATTERN_VERTICES {
            return Err(Error::capacity(
                "pattern vertex count",
                MAX_PATTERN_VERTICES,
                pattern.n(),
            ));
        }
        Ok(Oracle::Contains {
            label: name.to_string(),
            pattern,
        })
    }

    pub fn contains(label: impl Into<String>, pattern: Graph) -> Oracle {
        Oracle::Contains {
            label: label.into(),
            pattern,
        }
    }

    pub fn custom<F>(label: impl Into<String>, predicate: F) -> Oracle
    where
        F: Fn(&Graph) -> bool + Send + Sync + 'static,
    {
        Oracle::Custom {
            label: label.into(),
            predicate: Arc::new(predicate),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Oracle::Connected => "connected".into(),
            Oracle::Giant(f) => format!("giant:{f}"),
            Oracle::NoIsolated => "no-isolated".into(),
            Oracle::MinDegree(k) => format!("mindeg:{k}"),
            Oracle::Contains { label, .. } => format!("contains:{label}"),
            Oracle::PerfectMatching => "perfect-matching".into(),
            Oracle::Hamiltonian => "hamiltonian".into(),
            Oracle::TriangleFactor => "triangle-factor".into(),
            Oracle::VertexInTriangle => "vertex-in-triangle".into(),
            Oracle::Custom { label, .. } => label.clone(),
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, Oracle::PerfectMatching)
    }

    /// Upper bound on the one-sided error of a single evaluation on `n`
    /// vertices (zero for exact oracles).
    pub fn error_bound(&self, n: usize) -> f64 {
        if self.is_randomized() && n > EXACT_MATCHING_MAX_N {
            (n as f64 / TUTTE_PRIME as f64).powi(tutte_repetitions(n) as i32)
        } else {
            0.0
        }
    }

    /// Fails with a capacity error if the oracle cannot be evaluated on
    /// graphs with `n` vertices.
    pub fn check_capacity(&self, n: usize) -> Result<()> {
        match self {
            Oracle::Hamiltonian if n > MAX_HAMILTONIAN_N => Err(Error::capacity(
                "vertex count for Hamiltonicity",
                MAX_HAMILTONIAN_N,
                n,
            )),
            Oracle::TriangleFactor if n > MAX_TRIANGLE_FACTOR_N => Err(Error::capacity(
                "vertex count for triangle factor",
                MAX_TRIANGLE_FACTOR_N,
                n,
            )),
            _ => Ok(()),
        }
    }

    /// Evaluates the property. Only the perfect-matching oracle draws from
    /// `rng`.
    pub fn evaluate<R: Rng + ?Sized>(&self, g: &Graph, rng: &mut R) -> Result<bool> {
        Ok(match self {
            Oracle::Connected => is_connected(g),
            Oracle::Giant(f) => largest_component_size(g) as f64 >= f * g.n() as f64,
            Oracle::NoIsolated => !has_isolated_vertex(g),
            Oracle::MinDegree(k) => min_degree(g) >= *k,
            Oracle::Contains { pattern, .. } => contains_subgraph(g, pattern)?,
            Oracle::PerfectMatching => has_perfect_matching_with(g, rng),
            Oracle::Hamiltonian => has_hamiltonian_cycle(g)?,
            Oracle::TriangleFactor => has_triangle_factor(g)?,
            Oracle::VertexInTriangle => every_vertex_in_triangle(g),
            Oracle::Custom { predicate, .. } => predicate(g),
        })
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle({})", self.name())
    }
}
