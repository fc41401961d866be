//! Increasing families on a small ground set, given by their minimal
//! elements, and the quantities attached to them: `mu_p`, `p_c`, covers,
//! `q`, the fractional `q_f` and `ell`.

mod cover;
mod simplex;

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{edge_index, pair_count, Graph};
use crate::oracles::Oracle;
use crate::random::RandomStream;

pub use cover::{is_cover, q_exact, q_for_cover, q_fractional, Cover, MAX_CANDIDATES};
pub use simplex::{maximize, LpSolution};

/// Subsets are `u32` bitmasks.
pub const MAX_GROUND: usize = 24;

/// Largest ground set for exact `mu_p` (`2^N` subsets are enumerated).
pub const MAX_EXACT_GROUND: usize = 22;

/// Largest `n` for [`family_from_graph_property`].
pub const MAX_BRIDGE_N: usize = 5;

pub type Subset = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroundSet {
    pub size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Domain("ground set must be non-empty".into()));
        }
        if size > MAX_GROUND {
            return Err(Error::capacity("ground set size", MAX_GROUND, size));
        }
        Ok(GroundSet { size })
    }

    pub fn full(&self) -> Subset {
        (1u32 << self.size) - 1
    }
}

/// An increasing family, stored as its antichain of minimal elements
/// (sorted, so equal families compare equal).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IncreasingFamily {
    ground: GroundSet,
    minimal: Vec<Subset>,
}

impl IncreasingFamily {
    /// Validates that `minimal` is a non-empty antichain of non-empty subsets
    /// of the ground set.
    pub fn new(ground: usize, mut minimal: Vec<Subset>) -> Result<Self> {
        let ground = GroundSet::new(ground)?;
        if minimal.is_empty() {
            return Err(Error::Degenerate("family has no minimal elements".into()));
        }
        for &m in &minimal {
            if m == 0 {
                return Err(Error::Degenerate("the empty set cannot be minimal".into()));
            }
            if m & !ground.full() != 0 {
                return Err(Error::Domain(format!(
                    "subset {m:#b} is outside a ground set of size {}",
                    ground.size
                )));
            }
        }
        minimal.sort_unstable();
        minimal.dedup();
        for (i, &a) in minimal.iter().enumerate() {
            for &b in &minimal[i + 1..] {
                if a & b == a || a & b == b {
                    return Err(Error::Domain(format!(
                        "minimal elements {a:#b} and {b:#b} are nested"
                    )));
                }
            }
        }
        Ok(IncreasingFamily { ground, minimal })
    }

    /// The up-closure of `generators`, reduced to its minimal elements.
    pub fn from_generators(ground: usize, generators: &[Subset]) -> Result<Self> {
        let mut gens = generators.to_vec();
        gens.sort_by_key(|s| (s.count_ones(), *s));
        gens.dedup();
        let mut minimal: Vec<Subset> = Vec::new();
        for g in gens {
            if !minimal.iter().any(|&m| m & g == m) {
                minimal.push(g);
            }
        }
        IncreasingFamily::new(ground, minimal)
    }

    /// All `size` singletons.
    pub fn singletons(size: usize) -> Result<Self> {
        IncreasingFamily::new(size, (0..size).map(|i| 1 << i).collect())
    }

    /// The principal family above `set`.
    pub fn principal(ground: usize, set: Subset) -> Result<Self> {
        IncreasingFamily::new(ground, vec![set])
    }

    /// Subgraphs of `K_n` (edges labelled by [`edge_index`]) containing a
    /// copy of `f`; the minimal elements are the labelled copies.
    pub fn contains_graph(f: &Graph, n: usize) -> Result<Self> {
        let ground = pair_count(n);
        GroundSet::new(ground)?;
        if f.edge_count() == 0 {
            return Err(Error::Degenerate("pattern has no edges".into()));
        }
        if f.n() > n {
            return Err(Error::Degenerate(format!("pattern does not fit in K_{n}")));
        }
        let mut copies = HashSet::new();
        let mut image = vec![usize::MAX; f.n()];
        place(f, n, 0, 0, &mut image, &mut copies);
        IncreasingFamily::new(ground, copies.into_iter().collect())
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn ground_size(&self) -> usize {
        self.ground.size
    }

    pub fn minimal_elements(&self) -> &[Subset] {
        &self.minimal
    }

    pub fn contains(&self, set: Subset) -> bool {
        self.minimal.iter().any(|&m| set & m == m)
    }

    /// `counts[k]`: number of members of size `k`.
    pub fn member_counts(&self) -> Result<Vec<u64>> {
        let n = self.ground.size;
        if n > MAX_EXACT_GROUND {
            return Err(Error::capacity("ground set for exact mu_p", MAX_EXACT_GROUND, n));
        }
        let mut member = vec![false; 1 << n];
        for &m in &self.minimal {
            member[m as usize] = true;
        }
        for bit in 0..n {
            let b = 1usize << bit;
            for mask in 0..member.len() {
                if mask & b == 0 && member[mask] {
                    member[mask | b] = true;
                }
            }
        }
        let mut counts = vec![0u64; n + 1];
        for (mask, &is_member) in member.iter().enumerate() {
            if is_member {
                counts[mask.count_ones() as usize] += 1;
            }
        }
        Ok(counts)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `N <size>` header".into(),
        })?;
        let size: usize = header
            .strip_prefix("N ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line,
                msg: format!("expected `N <size>`, found `{header}`"),
            })?;
        GroundSet::new(size)?;
        let mut minimal = Vec::new();
        for (line, text) in lines {
            let mut set: Subset = 0;
            for tok in text.split_whitespace() {
                let x: usize = tok.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad element `{tok}`"),
                })?;
                if x >= size {
                    return Err(Error::Parse {
                        line,
                        msg: format!("element {x} outside ground set of size {size}"),
                    });
                }
                set |= 1 << x;
            }
            minimal.push(set);
        }
        IncreasingFamily::new(size, minimal)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for IncreasingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N {}", self.ground.size)?;
        for &m in &self.minimal {
            let elems: Vec<String> = elements(m).map(|x| x.to_string()).collect();
            writeln!(f, "{}", elems.join(" "))?;
        }
        Ok(())
    }
}

/// Indices of the set bits.
pub fn elements(set: Subset) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| set >> i & 1 == 1)
}

fn place(
    f: &Graph,
    n: usize,
    v: usize,
    used: u64,
    image: &mut [usize],
    out: &mut HashSet<Subset>,
) {
    if v == f.n() {
        let mask = f
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (image[a].min(image[b]), image[a].max(image[b]));
                1u32 << edge_index(n, x, y)
            })
            .fold(0, |acc, bit| acc | bit);
        out.insert(mask);
        return;
    }
    for w in 0..n {
        if used >> w & 1 == 0 {
            image[v] = w;
            place(f, n, v + 1, used | 1 << w, image, out);
        }
    }
}

/// `sum_k counts[k] p^k (1-p)^(N-k)`.
fn mu_from_counts(counts: &[u64], p: f64) -> f64 {
    let n = counts.len() - 1;
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| c as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32))
        .sum()
}

/// `mu_p(F)`: probability that a `p`-random subset lies in the family.
pub fn mu_p_exact(fam: &IncreasingFamily, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} not in [0,1]")));
    }
    Ok(mu_from_counts(&fam.member_counts()?, p))
}

/// The unique `p` with `mu_p = 1/2`, by bisection.
pub fn p_c_exact(fam: &IncreasingFamily) -> Result<f64> {
    let counts = fam.member_counts()?;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let mu = mu_from_counts(&counts, mid);
        if (mu - 0.5).abs() <= 1e-15 {
            return Ok(mid);
        }
        if mu < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Size of a largest minimal element.
pub fn ell(fam: &IncreasingFamily) -> usize {
    fam.minimal
        .iter()
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Threshold-versus-cover summary of one family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KKReport {
    pub p_c: f64,
    pub q: f64,
    pub q_f: f64,
    pub ell: usize,
    /// `p_c / (q max(log2 ell, 1))`.
    pub ratio: f64,
    /// `q_f / q`.
    pub ratio_fractional: f64,
}

/// Slack for the `q <= q_f <= p_c` checks.
pub const CHAIN_TOLERANCE: f64 = 1e-9;

pub fn kk_report(fam: &IncreasingFamily) -> Result<KKReport> {
    let p_c = p_c_exact(fam)?;
    let (q, _) = q_exact(fam)?;
    let q_f = q_fractional(fam)?;
    let ell = ell(fam);
    if q > q_f + CHAIN_TOLERANCE || q_f > p_c + CHAIN_TOLERANCE {
        return Err(Error::Assertion(format!(
            "q <= q_f <= p_c fails: q = {q}, q_f = {q_f}, p_c = {p_c}"
        )));
    }
    Ok(KKReport {
        p_c,
        q,
        q_f,
        ell,
        ratio: p_c / (q * (ell as f64).log2().max(1.0)),
        ratio_fractional: q_f / q,
    })
}

/// The family of edge sets of `K_n` (bit `k` is the edge with
/// [`edge_index`] `k`) on which `oracle` holds.
pub fn family_from_graph_property(n: usize, oracle: &Oracle) -> Result<IncreasingFamily> {
    if n > MAX_BRIDGE_N {
        return Err(Error::capacity("n for graph-property families", MAX_BRIDGE_N, n));
    }
    if n < 2 {
        return Err(Error::Degenerate(format!("K_{n} has no edges")));
    }
    oracle.check_capacity(n)?;
    let all: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let m = all.len();
    let mut rng = RandomStream::new(0x6661_6d69_6c79, n as u64).aux_rng();
    let mut holds = vec![false; 1 << m];
    for (mask, slot) in holds.iter_mut().enumerate() {
        let edges = all
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        *slot = oracle.evaluate(&Graph::from_valid_edges(n, edges), &mut rng)?;
    }
    if holds[0] {
        return Err(Error::Degenerate(format!(
            "{} already holds on the empty graph",
            oracle.name()
        )));
    }
    let minimal: Vec<Subset> = (0..holds.len())
        .filter(|&mask| holds[mask] && (0..m).all(|k| mask >> k & 1 == 0 || !holds[mask ^ 1 << k]))
        .map(|mask| mask as Subset)
        .collect();
    if minimal.is_empty() {
        return Err(Error::Degenerate(format!("{} never holds on K_{n}", oracle.name())));
    }
    IncreasingFamily::new(m, minimal)
}

/// A random family on at most `max_ground` elements: the up-closure of a
/// few random non-empty generators.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, max_ground: usize) -> Result<IncreasingFamily> {
    let ground = rng.gen_range(1..=max_ground);
    let count = rng.gen_range(1..=6);
    let mut gens = Vec::with_capacity(count);
    for _ in 0..count {
        let mut s: Subset = 0;
        while s == 0 {
            for i in 0..ground {
                if rng.gen_bool(0.35) {
                    s |= 1 << i;
                }
            }
        }
        gens.push(s);
    }
    IncreasingFamily::from_generators(ground, &gens)
}
