//! Seeded random graphs and Monte Carlo estimators of `mu_p` and `p_c`.
//!
//! Every trial draws from its own [`RandomStream`], a ChaCha8 generator keyed
//! by `(seed, trial_index)`. Trials therefore give the same results in any
//! order and on any number of threads, and all aggregates here are computed
//! from per-trial values collected in trial-index order.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{edge_index, pair_count, Edge, Graph};
use crate::oracles::Oracle;

/// Default seed for every experiment.
pub const DEFAULT_SEED: u64 = 20060614;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

pub type TrialRng = ChaCha8Rng;

/// Substream selector: the ChaCha key comes from `seed`, the 64-bit stream
/// id is `trial_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RandomStream {
    pub seed: u64,
    pub trial_index: u64,
}

impl RandomStream {
    pub fn new(seed: u64, trial_index: u64) -> Self {
        RandomStream { seed, trial_index }
    }

    /// Generator for sampling the random structure of this trial.
    pub fn rng(&self) -> TrialRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.trial_index);
        rng
    }

    /// Independent generator for randomized oracles in this trial, so that
    /// oracle draws never shift the structure's draws.
    pub fn aux_rng(&self) -> TrialRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9E37_79B9_7F4A_7C15);
        rng.set_stream(self.trial_index);
        rng
    }
}

/// `G(n, p)` by geometric skipping over the lexicographic pair order, so the
/// cost is proportional to the number of edges drawn.
pub fn sample_gnp(n: usize, p: f64, rs: RandomStream) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("edge probability {p} not in [0,1]")));
    }
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = rs.rng();
    let log_q = (-p).ln_1p();
    let mut edges = Vec::with_capacity((p * pair_count(n) as f64 * 1.1) as usize + 16);
    // Walk pairs (w, v), w < v, row v at a time.
    let mut v = 1usize;
    let mut w: i64 = -1;
    while v < n {
        let u: f64 = rng.gen();
        let skip = ((-u).ln_1p() / log_q).floor().min(1e15) as i64;
        w += 1 + skip;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Ok(Graph::from_valid_edges(n, edges))
}

/// The random graph process on `n` vertices, revealed lazily: edges come out
/// in a uniformly random order (partial Fisher–Yates) together with their
/// weights, which are the increasing order statistics of `C(n,2)`
/// independent uniforms. Thresholding the weights at `p` gives `G(n, p)`;
/// stopping after `m` edges gives `G_m`.
pub struct EdgeProcess {
    total: usize,
    revealed: usize,
    displaced: HashMap<usize, usize>,
    log_survival: f64,
    rng: TrialRng,
}

impl EdgeProcess {
    pub fn new(n: usize, rs: RandomStream) -> Self {
        EdgeProcess {
            total: pair_count(n),
            revealed: 0,
            displaced: HashMap::new(),
            log_survival: 0.0,
            rng: rs.rng(),
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

impl Iterator for EdgeProcess {
    type Item = (Edge, f64);

    fn next(&mut self) -> Option<(Edge, f64)> {
        if self.revealed == self.total {
            return None;
        }
        let k = self.revealed;
        let j = self.rng.gen_range(k..self.total);
        let at_j = self.displaced.get(&j).copied().unwrap_or(j);
        let at_k = self.displaced.remove(&k).unwrap_or(k);
        if j != k {
            self.displaced.insert(j, at_k);
        }
        // Minimum of the `remaining` weights above the previous one:
        // 1 - w_new = (1 - w_prev) * V^(1/remaining), V uniform on (0, 1].
        let remaining = (self.total - k) as f64;
        let v = 1.0 - self.rng.gen::<f64>();
        self.log_survival += v.ln() / remaining;
        let weight = -self.log_survival.exp_m1();
        self.revealed += 1;
        Some((colex_edge(at_j), weight))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.revealed;
        (left, Some(left))
    }
}

/// Pair with colex rank `k`: `(i, j)` with `i < j` and `k = j(j-1)/2 + i`.
fn colex_edge(k: usize) -> Edge {
    let mut j = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as usize;
    while j * (j - 1) / 2 > k {
        j -= 1;
    }
    while (j + 1) * j / 2 <= k {
        j += 1;
    }
    (k - j * (j - 1) / 2, j)
}

/// Uniformly random ordering of all `C(n,2)` edges; its length-`m` prefix
/// is `G_m`.
pub fn sample_process(n: usize, rs: RandomStream) -> Vec<Edge> {
    EdgeProcess::new(n, rs).map(|(e, _)| e).collect()
}

/// One uniform weight per potential edge of `K_n`, indexed by
/// [`edge_index`].
#[derive(Clone, Debug)]
pub struct EdgeWeighting {
    n: usize,
    weights: Vec<f64>,
}

impl EdgeWeighting {
    /// Materializes the weights of the process drawn from `rs`; the same
    /// stream drives [`critical_value`], so the two are coupled exactly.
    pub fn sample(n: usize, rs: RandomStream) -> Self {
        let mut weights = vec![0.0; pair_count(n)];
        for ((i, j), w) in EdgeProcess::new(n, rs) {
            weights[edge_index(n, i, j)] = w;
        }
        EdgeWeighting { n, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[edge_index(self.n, i, j)]
    }

    /// `{e : w_e <= p}`.
    pub fn threshold(&self, p: f64) -> Graph {
        let n = self.n;
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .zip(&self.weights)
            .filter(|&(_, &w)| w <= p)
            .map(|(e, _)| e)
            .collect();
        Graph::from_valid_edges(n, edges)
    }
}

fn prefix_graph(n: usize, edges: &[(Edge, f64)]) -> Graph {
    Graph::from_valid_edges(n, edges.iter().map(|&(e, _)| e).collect())
}

/// Smallest `m` in `(lo, hi]` with `holds(m)`, given `!holds(lo)` and
/// `holds(hi)` for a monotone predicate.
fn bisect_prefix(
    mut lo: usize,
    mut hi: usize,
    mut holds: impl FnMut(usize) -> Result<bool>,
) -> Result<usize> {
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Where an increasing property first holds along the edge process.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hit {
    /// Number of edges in the first prefix with the property (0 when the
    /// empty graph already has it).
    pub index: usize,
    /// Weight of the edge that completed the property: the critical value.
    pub weight: f64,
}

/// First prefix of the edge process with the property, found by doubling
/// and then bisecting over prefixes (monotonicity makes this exact).
pub fn first_hit(oracle: &Oracle, n: usize, rs: RandomStream) -> Result<Hit> {
    oracle.check_capacity(n)?;
    let mut process = EdgeProcess::new(n, rs);
    let total = process.total();
    let mut aux = rs.aux_rng();
    let mut revealed: Vec<(Edge, f64)> = Vec::new();

    if oracle.evaluate(&Graph::empty(n), &mut aux)? {
        return Ok(Hit { index: 0, weight: 0.0 });
    }
    let mut lo = 0;
    let mut len = 1;
    let hi = loop {
        len = len.min(total);
        while revealed.len() < len {
            revealed.push(process.next().expect("process has C(n,2) edges"));
        }
        if len > 0 && oracle.evaluate(&prefix_graph(n, &revealed[..len]), &mut aux)? {
            break len;
        }
        if len == total {
            return Err(Error::NoThreshold(format!(
                "{} is false on K_{n}",
                oracle.name()
            )));
        }
        lo = len;
        len *= 2;
    };
    let index = bisect_prefix(lo, hi, |m| {
        oracle.evaluate(&prefix_graph(n, &revealed[..m]), &mut aux)
    })?;
    Ok(Hit {
        index,
        weight: revealed[index - 1].1,
    })
}

/// The critical value `p*` of one trial: the weight at which the property
/// first holds, so `P(p* <= p) = mu_p(property)`.
pub fn critical_value(oracle: &Oracle, n: usize, rs: RandomStream) -> Result<f64> {
    first_hit(oracle, n, rs).map(|h| h.weight)
}

/// First prefix length of a fixed edge ordering at which the property
/// holds; `None` if it never does.
pub fn hitting_index<R: Rng + ?Sized>(
    oracle: &Oracle,
    n: usize,
    order: &[Edge],
    rng: &mut R,
) -> Result<Option<usize>> {
    let mut holds = |m: usize| {
        let g = Graph::from_valid_edges(n, order[..m].to_vec());
        oracle.evaluate(&g, rng)
    };
    if holds(0)? {
        return Ok(Some(0));
    }
    if !holds(order.len())? {
        return Ok(None);
    }
    bisect_prefix(0, order.len(), holds).map(Some)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let nf = trials as f64;
    let phat = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (phat + z2 / (2.0 * nf)) / denom;
    let half = z * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

/// A proportion with its Wilson 95% interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Proportion {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials, Z95);
        Proportion {
            successes,
            trials,
            estimate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_low,
            ci_high,
        }
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Fraction of `G(n, p)` samples with the property. Trial `t` uses
/// `RandomStream::new(seed, t)`.
pub fn estimate_mu(
    oracle: &Oracle,
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<Proportion> {
    if trials == 0 {
        return Err(Error::Usage("estimate_mu needs at least one trial".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("edge probability {p} not in [0,1]")));
    }
    oracle.check_capacity(n)?;
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let rs = RandomStream::new(seed, t);
            let g = sample_gnp(n, p, rs)?;
            oracle.evaluate(&g, &mut rs.aux_rng())
        })
        .collect::<Result<Vec<bool>>>()?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    Ok(Proportion::from_counts(successes, trials))
}

/// Point estimate of `p_c` with a 95% interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Critical values of trials `0..trials`, in trial order.
pub fn critical_values(oracle: &Oracle, n: usize, trials: u64, seed: u64) -> Result<Vec<f64>> {
    oracle.check_capacity(n)?;
    (0..trials)
        .into_par_iter()
        .map(|t| critical_value(oracle, n, RandomStream::new(seed, t)))
        .collect()
}

/// Median of the critical values with a distribution-free interval from
/// the order statistics around it.
pub fn median_with_ci(values: &[f64]) -> ThresholdEstimate {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    assert!(n > 0, "median of an empty sample");
    let point = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let half = Z95 * (n as f64).sqrt() / 2.0;
    let lo_rank = ((n as f64 / 2.0 - half).floor() as usize).clamp(1, n);
    let hi_rank = ((n as f64 / 2.0 + half).ceil() as usize).clamp(1, n);
    ThresholdEstimate {
        point,
        ci_low: sorted[lo_rank - 1].min(point),
        ci_high: sorted[hi_rank - 1].max(point),
        trials: n as u64,
        seed: 0,
    }
}

pub fn estimate_pc(oracle: &Oracle, n: usize, trials: u64, seed: u64) -> Result<ThresholdEstimate> {
    if trials < 100 {
        return Err(Error::Usage(format!(
            "estimate_pc needs at least 100 trials, got {trials}"
        )));
    }
    let values = critical_values(oracle, n, trials, seed)?;
    Ok(ThresholdEstimate {
        seed,
        ..median_with_ci(&values)
    })
}

/// Uniform draws from `{1..n}` until every value has been seen.
pub fn coupon_collector_draws(n: usize, rs: RandomStream) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("coupon collector needs n >= 1".into()));
    }
    let mut rng = rs.rng();
    let mut seen = vec![false; n];
    let mut missing = n;
    let mut draws = 0u64;
    while missing > 0 {
        let c = rng.gen_range(0..n);
        draws += 1;
        if !seen[c] {
            seen[c] = true;
            missing -= 1;
        }
    }
    Ok(draws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_graph;

    #[test]
    fn colex_decoding() {
        let mut k = 0;
        for j in 1..300 {
            for i in 0..j {
                assert_eq!(colex_edge(k), (i, j));
                k += 1;
            }
        }
    }

    #[test]
    fn gnp_extremes() {
        let rs = RandomStream::new(7, 3);
        assert_eq!(sample_gnp(9, 0.0, rs).unwrap(), Graph::empty(9));
        assert_eq!(sample_gnp(9, 1.0, rs).unwrap(), Graph::complete(9));
        assert!(matches!(sample_gnp(3, 1.5, rs), Err(Error::Domain(_))));
        assert!(matches!(sample_gnp(3, -0.1, rs), Err(Error::Domain(_))));
        assert!(matches!(sample_gnp(3, f64::NAN, rs), Err(Error::Domain(_))));
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a = sample_gnp(30, 0.3, RandomStream::new(1, 5)).unwrap();
        let b = sample_gnp(30, 0.3, RandomStream::new(1, 5)).unwrap();
        let c = sample_gnp(30, 0.3, RandomStream::new(1, 6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn process_is_a_permutation_with_increasing_weights() {
        let items: Vec<_> = EdgeProcess::new(7, RandomStream::new(3, 1)).collect();
        assert_eq!(items.len(), 21);
        let mut edges: Vec<_> = items.iter().map(|x| x.0).collect();
        edges.sort_unstable();
        assert_eq!(edges, Graph::complete(7).edges());
        assert!(items.windows(2).all(|w| w[0].1 < w[1].1));
        assert!(items.iter().all(|x| (0.0..1.0).contains(&x.1)));
        assert_eq!(sample_process(2, RandomStream::new(0, 0)), vec![(0, 1)]);
    }

    #[test]
    fn weighting_threshold_matches_process_prefix() {
        let rs = RandomStream::new(11, 2);
        let w = EdgeWeighting::sample(6, rs);
        let order = sample_process(6, rs);
        for m in 0..=15 {
            let p = if m == 0 { 0.0 } else { w.weight(order[m - 1].0, order[m - 1].1) };
            let g = w.threshold(p);
            let expected = Graph::from_edges(6, order[..m].iter().copied()).unwrap();
            if m > 0 {
                assert_eq!(g, expected);
            }
        }
    }

    #[test]
    fn critical_value_is_the_hitting_weight() {
        let oracle = Oracle::Connected;
        for t in 0..20 {
            let rs = RandomStream::new(5, t);
            let p_star = critical_value(&oracle, 8, rs).unwrap();
            let w = EdgeWeighting::sample(8, rs);
            let mut rng = rs.aux_rng();
            assert!(oracle.evaluate(&w.threshold(p_star), &mut rng).unwrap());
            assert!(!oracle
                .evaluate(&w.threshold(p_star - 1e-12), &mut rng)
                .unwrap());
        }
    }

    #[test]
    fn critical_value_special_oracles() {
        let rs = RandomStream::new(2, 9);
        let w = EdgeWeighting::sample(6, rs);
        let min = w.weights().iter().copied().fold(f64::INFINITY, f64::min);
        let max = w.weights().iter().copied().fold(0.0, f64::max);
        let any_edge = Oracle::contains("edge", builtin_graph("edge").unwrap());
        assert_eq!(critical_value(&any_edge, 6, rs).unwrap(), min);
        let complete = Oracle::MinDegree(5);
        assert_eq!(critical_value(&complete, 6, rs).unwrap(), max);
        // Already true on the empty graph.
        assert_eq!(critical_value(&Oracle::Connected, 1, rs).unwrap(), 0.0);
    }

    #[test]
    fn no_threshold_error() {
        let never = Oracle::MinDegree(10);
        assert!(matches!(
            critical_value(&never, 5, RandomStream::new(0, 0)),
            Err(Error::NoThreshold(_))
        ));
    }

    #[test]
    fn hitting_index_on_fixed_order() {
        let order = vec![(0, 1), (2, 3), (1, 2), (0, 3)];
        let mut rng = RandomStream::new(0, 0).aux_rng();
        let idx = hitting_index(&Oracle::NoIsolated, 4, &order, &mut rng).unwrap();
        assert_eq!(idx, Some(2));
        let idx = hitting_index(&Oracle::Connected, 4, &order, &mut rng).unwrap();
        assert_eq!(idx, Some(3));
        let idx = hitting_index(&Oracle::MinDegree(3), 4, &order, &mut rng).unwrap();
        assert_eq!(idx, None);
    }

    #[test]
    fn estimate_mu_extremes() {
        let p1 = estimate_mu(&Oracle::Connected, 6, 1.0, 50, 1).unwrap();
        assert_eq!(p1.estimate, 1.0);
        let any_edge = Oracle::contains("edge", builtin_graph("edge").unwrap());
        let p0 = estimate_mu(&any_edge, 6, 0.0, 50, 1).unwrap();
        assert_eq!(p0.estimate, 0.0);
        assert!(matches!(
            estimate_mu(&Oracle::Connected, 6, 0.5, 0, 1),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn wilson_is_sane() {
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((hi - lo - 0.1918).abs() < 1e-3);
        assert_eq!(wilson_interval(0, 10, Z95).0, 0.0);
        assert_eq!(wilson_interval(10, 10, Z95).1, 1.0);
    }

    #[test]
    fn median_interval_brackets_the_point() {
        let values: Vec<f64> = (0..101).map(|k| k as f64 / 100.0).collect();
        let est = median_with_ci(&values);
        assert_eq!(est.point, 0.5);
        assert!(est.ci_low < 0.5 && est.ci_high > 0.5);
        assert!(matches!(
            estimate_pc(&Oracle::Connected, 3, 99, 0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn coupon_small_cases() {
        assert_eq!(coupon_collector_draws(1, RandomStream::new(0, 0)).unwrap(), 1);
        assert!(coupon_collector_draws(0, RandomStream::new(0, 0)).is_err());
        for t in 0..50 {
            assert!(coupon_collector_draws(5, RandomStream::new(0, t)).unwrap() >= 5);
        }
    }
}
