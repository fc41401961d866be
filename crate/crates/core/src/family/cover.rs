use std::collections::HashSet;

use serde::Serialize;

use super::simplex::maximize;
use super::{IncreasingFamily, Subset};
use crate::error::{Error, Result};

/// Limit on the candidate pool (distinct non-empty subsets of minimal
/// elements) for [`q_exact`] and [`q_fractional`].
pub const MAX_CANDIDATES: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub members: Vec<Subset>,
}

impl Cover {
    pub fn new(members: Vec<Subset>) -> Self {
        Cover { members }
    }

    /// `sum_S q^|S|`.
    pub fn cost(&self, q: f64) -> f64 {
        self.members.iter().map(|s| q.powi(s.count_ones() as i32)).sum()
    }
}

/// Every minimal element contains some member; larger members of the family
/// then do too.
pub fn is_cover(c: &Cover, fam: &IncreasingFamily) -> bool {
    fam.minimal_elements()
        .iter()
        .all(|&a| c.members.iter().any(|&s| s & a == s))
}

/// Largest `q` in `[0, 1]` with `feasible(q)`, for a predicate that holds
/// at 0 and fails beyond some point.
fn largest_feasible(mut feasible: impl FnMut(f64) -> Result<bool>) -> Result<f64> {
    if feasible(1.0)? {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(lo);
        }
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Largest `q` with `sum_S q^|S| <= 1/2` over the members of `c`.
pub fn q_for_cover(c: &Cover, fam: &IncreasingFamily) -> Result<f64> {
    if c.members.contains(&0) {
        return Err(Error::NoFeasibleQ);
    }
    if !is_cover(c, fam) {
        return Err(Error::Domain("the sets do not cover the family".into()));
    }
    largest_feasible(|q| Ok(c.cost(q) <= 0.5))
}

fn candidate_pool(fam: &IncreasingFamily) -> Result<Vec<Subset>> {
    let mut pool = HashSet::new();
    for &m in fam.minimal_elements() {
        let mut s = m;
        while s != 0 {
            pool.insert(s);
            if pool.len() > MAX_CANDIDATES {
                return Err(Error::capacity("cover candidate pool", MAX_CANDIDATES, pool.len()));
            }
            s = (s - 1) & m;
        }
    }
    let mut pool: Vec<Subset> = pool.into_iter().collect();
    pool.sort_unstable_by_key(|s| (s.count_ones(), *s));
    Ok(pool)
}

/// Candidates and, for each, the set of minimal elements it lies inside.
struct Instance {
    sets: Vec<Subset>,
    covers: Vec<Vec<u64>>,
    by_element: Vec<Vec<usize>>,
    words: usize,
}

impl Instance {
    fn new(fam: &IncreasingFamily) -> Result<Self> {
        let sets = candidate_pool(fam)?;
        let minimal = fam.minimal_elements();
        let words = minimal.len().div_ceil(64);
        let mut by_element = vec![Vec::new(); minimal.len()];
        let covers = sets
            .iter()
            .enumerate()
            .map(|(c, &s)| {
                let mut bits = vec![0u64; words];
                for (i, &a) in minimal.iter().enumerate() {
                    if s & a == s {
                        bits[i / 64] |= 1 << (i % 64);
                        by_element[i].push(c);
                    }
                }
                bits
            })
            .collect();
        Ok(Instance {
            sets,
            covers,
            by_element,
            words,
        })
    }

    fn weights(&self, q: f64) -> Vec<f64> {
        self.sets.iter().map(|s| q.powi(s.count_ones() as i32)).collect()
    }

    /// Cheapest cover with cost at most `budget`, if any.
    fn min_cover(&self, weights: &[f64], budget: f64) -> Option<(f64, Vec<usize>)> {
        let mut uncovered = vec![0u64; self.words];
        for i in 0..self.by_element.len() {
            uncovered[i / 64] |= 1 << (i % 64);
        }
        let mut best = (budget, None);
        let mut chosen = Vec::new();
        self.search(weights, &uncovered, 0.0, &mut chosen, &mut best);
        best.1.map(|c| (best.0, c))
    }

    fn search(
        &self,
        w: &[f64],
        uncovered: &[u64],
        cost: f64,
        chosen: &mut Vec<usize>,
        best: &mut (f64, Option<Vec<usize>>),
    ) {
        if uncovered.iter().all(|&x| x == 0) {
            if best.1.is_none() || cost < best.0 {
                *best = (cost, Some(chosen.clone()));
            }
            return;
        }
        let gain = |c: usize| -> u32 {
            self.covers[c]
                .iter()
                .zip(uncovered)
                .map(|(a, b)| (a & b).count_ones())
                .sum()
        };
        // Each uncovered element pays at least its cheapest per-element share.
        let mut bound = cost;
        let mut branch: Option<(usize, usize)> = None;
        for (e, cands) in self.by_element.iter().enumerate() {
            if uncovered[e / 64] >> (e % 64) & 1 == 0 {
                continue;
            }
            let share = cands
                .iter()
                .map(|&c| w[c] / gain(c) as f64)
                .fold(f64::INFINITY, f64::min);
            bound += share;
            if branch.is_none_or(|(_, len)| cands.len() < len) {
                branch = Some((e, cands.len()));
            }
        }
        if bound > best.0 * (1.0 + 1e-12) {
            return;
        }
        let (e, _) = branch.expect("some element is uncovered");
        let mut options: Vec<(f64, usize)> = self.by_element[e]
            .iter()
            .map(|&c| (w[c] / gain(c) as f64, c))
            .collect();
        options.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut next = vec![0u64; self.words];
        for (_, c) in options {
            let new_cost = cost + w[c];
            if new_cost > best.0 * (1.0 + 1e-12) {
                continue;
            }
            for (k, slot) in next.iter_mut().enumerate() {
                *slot = uncovered[k] & !self.covers[c][k];
            }
            chosen.push(c);
            self.search(w, &next, new_cost, chosen, best);
            chosen.pop();
        }
    }
}

/// `q(F)`: the largest `q` admitting a cover with `sum_S q^|S| <= 1/2`,
/// with a cover attaining it.
pub fn q_exact(fam: &IncreasingFamily) -> Result<(f64, Cover)> {
    let inst = Instance::new(fam)?;
    let feasible_at = |q: f64| inst.min_cover(&inst.weights(q), 0.5);
    let mut witness = None;
    let q = largest_feasible(|q| {
        Ok(match feasible_at(q) {
            Some((_, chosen)) => {
                witness = Some(chosen);
                true
            }
            None => false,
        })
    })?;
    let chosen = match witness {
        Some(c) => c,
        None => feasible_at(q).map(|(_, c)| c).ok_or_else(|| {
            Error::Numeric("no cover found at the located q".into())
        })?,
    };
    let mut members: Vec<Subset> = chosen.iter().map(|&c| inst.sets[c]).collect();
    members.sort_unstable();
    let cover = Cover::new(members);
    // Report the witness's own root, free of the search tolerance.
    let q_witness = q_for_cover(&cover, fam)?;
    Ok((q_witness, cover))
}

/// Fractional relaxation `q_f(F)`: as [`q_exact`] with covers replaced by
/// non-negative weightings `lambda_S` that put total weight at least one
/// inside every minimal element. Each LP is solved through its dual,
/// `max sum_A y_A` subject to `sum_{A >= S} y_A <= q^|S|`.
pub fn q_fractional(fam: &IncreasingFamily) -> Result<f64> {
    let inst = Instance::new(fam)?;
    let m = fam.minimal_elements().len();
    let a: Vec<Vec<f64>> = inst
        .covers
        .iter()
        .map(|bits| (0..m).map(|i| (bits[i / 64] >> (i % 64) & 1) as f64).collect())
        .collect();
    let c = vec![1.0; m];
    largest_feasible(|q| {
        let sol = maximize(&c, &a, &inst.weights(q))?;
        Ok(sol.value <= 0.5)
    })
}
