//! Experiment runners behind the command-line tool. Each returns an
//! [`ExperimentReport`] whose rows are ordered by trial index (or by grid
//! point), so identical configurations give identical output.

mod report;

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::expectation::{compute_pe, exponent_fit, single_graph_exponent, single_graph_threshold};
use crate::family::{
    ell, family_from_graph_property, mu_p_exact, p_c_exact, q_exact, q_fractional, random_family,
    Cover, IncreasingFamily, KKReport, CHAIN_TOLERANCE,
};
use crate::graph::{builtin_graph, Graph};
use crate::oracles::{largest_component_size, Oracle};
use crate::random::{
    coupon_collector_draws, estimate_mu, estimate_pc, hitting_index, sample_gnp, sample_process,
    Proportion, RandomStream,
};

pub use report::{format_sig, Cell, ExperimentConfig, ExperimentReport, CSV_DIGITS, VERSION};

fn timed(mut f: impl FnMut() -> Result<ExperimentReport>) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut report = f()?;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

fn require_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::Usage("trials must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Nearest-rank quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = ((q * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// `G(n, p)` samples with a few statistics each.
pub fn sample_experiment(
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
    oracle: Option<&Oracle>,
) -> Result<ExperimentReport> {
    require_trials(trials)?;
    if let Some(o) = oracle {
        o.check_capacity(n)?;
    }
    timed(|| {
        let mut config = ExperimentConfig::new("sample", seed);
        config.n = Some(n);
        config.p = Some(p);
        config.trials = Some(trials);
        config.oracle = oracle.map(Oracle::name);
        let mut columns = vec!["trial", "edges", "isolated", "largest_component"];
        if oracle.is_some() {
            columns.push("holds");
        }
        let mut report = ExperimentReport::new(config, columns);
        let rows = (0..trials)
            .into_par_iter()
            .map(|t| {
                let rs = RandomStream::new(seed, t);
                let g = sample_gnp(n, p, rs)?;
                let mut row: Vec<Cell> = vec![
                    t.into(),
                    g.edge_count().into(),
                    g.isolated_vertex_count().into(),
                    largest_component_size(&g).into(),
                ];
                if let Some(o) = oracle {
                    row.push(o.evaluate(&g, &mut rs.aux_rng())?.into());
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        let edges: Vec<f64> = rows.iter().filter_map(|r| r[1].as_f64()).collect();
        report.add_summary("mean_edges", mean(&edges));
        report.add_summary("expected_edges", p * crate::graph::pair_count(n) as f64);
        if oracle.is_some() {
            let hits = rows.iter().filter(|r| r[4] == Cell::Bool(true)).count() as u64;
            let prop = Proportion::from_counts(hits, trials);
            report.add_summary("holds_fraction", prop.estimate);
            report.add_summary("ci_low", prop.ci_low);
            report.add_summary("ci_high", prop.ci_high);
        }
        report.rows = rows;
        Ok(report)
    })
}

/// Median critical value with its interval, per `n` in the grid.
pub fn pc_experiment(oracle: &Oracle, grid: &[usize], trials: u64, seed: u64) -> Result<ExperimentReport> {
    for &n in grid {
        oracle.check_capacity(n)?;
    }
    timed(|| {
        let mut config = ExperimentConfig::new("pc", seed);
        config.grid = grid.to_vec();
        config.trials = Some(trials);
        config.oracle = Some(oracle.name());
        let mut report = ExperimentReport::new(
            config,
            vec!["n", "oracle", "trials", "seed", "pc_hat", "ci_low", "ci_high"],
        );
        let mut pairs = Vec::new();
        for &n in grid {
            let est = estimate_pc(oracle, n, trials, seed)?;
            pairs.push((n as f64, est.point));
            report.push_row(vec![
                n.into(),
                oracle.name().into(),
                trials.into(),
                seed.into(),
                est.point.into(),
                est.ci_low.into(),
                est.ci_high.into(),
            ]);
        }
        if pairs.len() >= 3 && pairs.iter().all(|p| p.1 > 0.0) {
            let fit = exponent_fit(&pairs)?;
            report.add_summary("pc_slope", fit.slope);
            report.add_summary("pc_intercept", fit.intercept);
            report.add_summary("pc_residual", fit.residual);
        }
        Ok(report)
    })
}

/// The pattern whose copies the oracle looks for, if it is a containment
/// property (perfect matchings count as containing `matching_{n/2}`).
fn pattern_for(oracle: &Oracle, n: usize) -> Option<Graph> {
    match oracle {
        Oracle::Contains { pattern, .. } => Some(pattern.clone()),
        Oracle::PerfectMatching if n % 2 == 0 && n >= 2 => {
            builtin_graph(&format!("matching_{}", n / 2)).ok()
        }
        Oracle::TriangleFactor if n % 3 == 0 && n >= 3 && n <= 6 => {
            let mut edges = Vec::new();
            for b in 0..n / 3 {
                let v = 3 * b;
                edges.extend([(v, v + 1), (v, v + 2), (v + 1, v + 2)]);
            }
            Graph::from_edges(n, edges).ok()
        }
        _ => None,
    }
}

/// Exact expectation thresholds over a grid of `n`.
pub fn pe_experiment(oracle: &Oracle, grid: &[usize]) -> Result<ExperimentReport> {
    timed(|| {
        let mut config = ExperimentConfig::new("pe", 0);
        config.grid = grid.to_vec();
        config.oracle = Some(oracle.name());
        let mut report = ExperimentReport::new(
            config,
            vec![
                "n",
                "oracle",
                "pe",
                "n_pe",
                "binding_edges",
                "binding_vertices",
                "binding_copies",
                "single_graph_pe",
            ],
        );
        let mut details = Vec::new();
        let mut pe_pairs = Vec::new();
        let mut single_pairs = Vec::new();
        let mut exponent = None;
        for &n in grid {
            let f = pattern_for(oracle, n).ok_or_else(|| {
                Error::Usage(format!(
                    "pE needs a containment oracle (or perfect-matching with even n), got {} at n = {n}",
                    oracle.name()
                ))
            })?;
            let r = compute_pe(&f, n)?;
            let single = single_graph_threshold(&f, n)?;
            exponent = Some(single_graph_exponent(&f)?);
            pe_pairs.push((n as f64, r.pe));
            single_pairs.push((n as f64, single));
            let b = r.binding_entry();
            report.push_row(vec![
                n.into(),
                oracle.name().into(),
                r.pe.into(),
                (n as f64 * r.pe).into(),
                b.edges.into(),
                b.representative.n().into(),
                b.labelled_copies.to_string().into(),
                single.into(),
            ]);
            details.push(serde_json::to_value(&r)?);
        }
        if pe_pairs.len() >= 3 {
            report.add_summary("pe_slope", exponent_fit(&pe_pairs)?.slope);
            report.add_summary("single_graph_slope", exponent_fit(&single_pairs)?.slope);
        }
        if let Some(e) = exponent {
            report.add_summary("single_graph_exponent", e.to_string());
        }
        report.details = json!({ "reports": details });
        Ok(report)
    })
}

/// `p_c` estimates alongside `pE` and the fitted exponent over a grid.
pub fn threshold_sweep(oracle: &Oracle, grid: &[usize], trials: u64, seed: u64) -> Result<ExperimentReport> {
    for &n in grid {
        oracle.check_capacity(n)?;
    }
    timed(|| {
        let mut config = ExperimentConfig::new("sweep", seed);
        config.grid = grid.to_vec();
        config.trials = Some(trials);
        config.oracle = Some(oracle.name());
        let mut report = ExperimentReport::new(
            config,
            vec![
                "n",
                "oracle",
                "trials",
                "pc_hat",
                "ci_low",
                "ci_high",
                "pe",
                "pc_over_pe",
                "pc_n_over_ln_n",
            ],
        );
        let mut pc_pairs = Vec::new();
        let mut pe_pairs = Vec::new();
        let mut single_pairs = Vec::new();
        let mut exponent = None;
        for &n in grid {
            let est = estimate_pc(oracle, n, trials, seed)?;
            pc_pairs.push((n as f64, est.point));
            let pe = match pattern_for(oracle, n) {
                Some(f) => {
                    let r = compute_pe(&f, n)?;
                    if f.n() <= crate::graph::MAX_AUTOMORPHISM_VERTICES {
                        single_pairs.push((n as f64, single_graph_threshold(&f, n)?));
                        exponent = Some(single_graph_exponent(&f)?);
                    }
                    pe_pairs.push((n as f64, r.pe));
                    r.pe
                }
                None => f64::NAN,
            };
            report.push_row(vec![
                n.into(),
                oracle.name().into(),
                trials.into(),
                est.point.into(),
                est.ci_low.into(),
                est.ci_high.into(),
                pe.into(),
                (est.point / pe).into(),
                (est.point * n as f64 / (n as f64).ln()).into(),
            ]);
        }
        if pc_pairs.len() >= 3 && pc_pairs.iter().all(|p| p.1 > 0.0) {
            let fit = exponent_fit(&pc_pairs)?;
            report.add_summary("pc_slope", fit.slope);
            report.add_summary("pc_residual", fit.residual);
        }
        if pe_pairs.len() >= 3 {
            report.add_summary("pe_slope", exponent_fit(&pe_pairs)?.slope);
        }
        if single_pairs.len() >= 3 {
            report.add_summary("single_graph_slope", exponent_fit(&single_pairs)?.slope);
        }
        if let Some(e) = exponent {
            report.add_summary("single_graph_exponent", e.to_string());
            report.add_summary("single_graph_exponent_value", *e.numer() as f64 / *e.denom() as f64);
        }
        Ok(report)
    })
}

/// Hitting-time experiment kinds: the target property and the local
/// obstruction ("barrier") whose disappearance should coincide with it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HittingKind {
    PerfectMatching,
    Hamiltonian,
    TriangleFactor,
}

impl HittingKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pm" | "perfect-matching" => Ok(HittingKind::PerfectMatching),
            "hamiltonian" => Ok(HittingKind::Hamiltonian),
            "triangle-factor" => Ok(HittingKind::TriangleFactor),
            _ => Err(Error::Usage(format!(
                "unknown hitting kind `{s}` (expected pm, hamiltonian or triangle-factor)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HittingKind::PerfectMatching => "pm",
            HittingKind::Hamiltonian => "hamiltonian",
            HittingKind::TriangleFactor => "triangle-factor",
        }
    }

    pub fn barrier(&self) -> Oracle {
        match self {
            HittingKind::PerfectMatching => Oracle::NoIsolated,
            HittingKind::Hamiltonian => Oracle::MinDegree(2),
            HittingKind::TriangleFactor => Oracle::VertexInTriangle,
        }
    }

    pub fn target(&self) -> Oracle {
        match self {
            HittingKind::PerfectMatching => Oracle::PerfectMatching,
            HittingKind::Hamiltonian => Oracle::Hamiltonian,
            HittingKind::TriangleFactor => Oracle::TriangleFactor,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Usage(msg));
        match self {
            HittingKind::PerfectMatching if n < 2 || n % 2 == 1 => {
                bad(format!("pm hitting needs even n >= 2, got {n}"))
            }
            HittingKind::TriangleFactor if n < 3 || n % 3 != 0 || n > 18 => {
                bad(format!("triangle-factor hitting needs 3 | n and 3 <= n <= 18, got {n}"))
            }
            HittingKind::Hamiltonian if !(3..=24).contains(&n) => {
                bad(format!("hamiltonian hitting needs 3 <= n <= 24, got {n}"))
            }
            _ => Ok(()),
        }
    }
}

/// How many edge orderings to examine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trials {
    Count(u64),
    /// Every ordering of the edges of `K_n` once (`n <= 4`).
    Exhaustive,
}

impl Trials {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "exhaustive" {
            return Ok(Trials::Exhaustive);
        }
        let t: u64 = s
            .parse()
            .map_err(|_| Error::Usage(format!("trials must be a positive integer or `exhaustive`, got `{s}`")))?;
        require_trials(t)?;
        Ok(Trials::Count(t))
    }
}

/// Largest `n` for exhaustive hitting runs (`6! = 720` orderings).
pub const MAX_EXHAUSTIVE_N: usize = 4;

/// Lexicographic successor; `false` once `v` is the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Clone, Copy, Debug)]
struct HittingTrial {
    hitting_index: usize,
    isolated_index: usize,
    target_at_hitting: bool,
    target_before_hitting: bool,
}

fn run_hitting_trial(
    kind: HittingKind,
    n: usize,
    order: &[(usize, usize)],
    rs: RandomStream,
) -> Result<HittingTrial> {
    let mut rng = rs.aux_rng();
    let barrier = kind.barrier();
    let target = kind.target();
    let hit = hitting_index(&barrier, n, order, &mut rng)?
        .ok_or_else(|| Error::NoThreshold(format!("{} never holds", barrier.name())))?;
    let isolated_index = hitting_index(&Oracle::NoIsolated, n, order, &mut rng)?
        .ok_or_else(|| Error::NoThreshold("no-isolated never holds".into()))?;
    let prefix = |m: usize| Graph::from_edges(n, order[..m].iter().copied());
    let target_at_hitting = target.evaluate(&prefix(hit)?, &mut rng)?;
    let target_before_hitting = hit > 0 && target.evaluate(&prefix(hit - 1)?, &mut rng)?;
    Ok(HittingTrial {
        hitting_index: hit,
        isolated_index,
        target_at_hitting,
        target_before_hitting,
    })
}

/// Runs the random graph process, stops where the barrier property first
/// holds and checks whether the target property holds at that moment.
pub fn hitting_experiment(kind: HittingKind, n: usize, trials: Trials, seed: u64) -> Result<ExperimentReport> {
    kind.validate(n)?;
    if trials == Trials::Exhaustive && n > MAX_EXHAUSTIVE_N {
        return Err(Error::Usage(format!(
            "exhaustive mode enumerates all orderings and needs n <= {MAX_EXHAUSTIVE_N}"
        )));
    }
    timed(|| {
        let mut config = ExperimentConfig::new("hitting", seed);
        config.n = Some(n);
        config.kind = Some(kind.name().into());
        match trials {
            Trials::Count(t) => config.trials = Some(t),
            Trials::Exhaustive => config.exhaustive = true,
        }
        let mut report = ExperimentReport::new(
            config,
            vec![
                "trial",
                "hitting_index",
                "no_isolated_index",
                "target_at_hitting",
                "target_before_hitting",
            ],
        );
        let results: Vec<HittingTrial> = match trials {
            Trials::Count(t) => (0..t)
                .into_par_iter()
                .map(|i| {
                    let rs = RandomStream::new(seed, i);
                    run_hitting_trial(kind, n, &sample_process(n, rs), rs)
                })
                .collect::<Result<_>>()?,
            Trials::Exhaustive => {
                let edges = Graph::complete(n).edges().to_vec();
                let mut perm: Vec<usize> = (0..edges.len()).collect();
                let mut out = Vec::new();
                let mut i = 0;
                loop {
                    let order: Vec<_> = perm.iter().map(|&k| edges[k]).collect();
                    out.push(run_hitting_trial(kind, n, &order, RandomStream::new(seed, i))?);
                    i += 1;
                    if !next_permutation(&mut perm) {
                        break;
                    }
                }
                out
            }
        };
        let total = results.len() as u64;
        let successes = results.iter().filter(|r| r.target_at_hitting).count() as u64;
        let mut barrier_violations = 0u64;
        let mut coupling_violations = 0u64;
        for (i, r) in results.iter().enumerate() {
            if r.target_before_hitting {
                barrier_violations += 1;
            }
            if r.hitting_index < r.isolated_index {
                coupling_violations += 1;
            }
            report.push_row(vec![
                i.into(),
                r.hitting_index.into(),
                r.isolated_index.into(),
                r.target_at_hitting.into(),
                r.target_before_hitting.into(),
            ]);
        }
        let prop = Proportion::from_counts(successes, total);
        report.add_summary("orderings", total);
        report.add_summary("successes", successes);
        report.add_summary("success_fraction", prop.estimate);
        if trials == Trials::Exhaustive {
            report.add_summary("ci_low", prop.estimate);
            report.add_summary("ci_high", prop.estimate);
        } else {
            report.add_summary("ci_low", prop.ci_low);
            report.add_summary("ci_high", prop.ci_high);
        }
        let mut idx: Vec<f64> = results.iter().map(|r| r.hitting_index as f64).collect();
        idx.sort_by(f64::total_cmp);
        report.add_summary("hitting_index_mean", mean(&idx));
        report.add_summary("hitting_index_min", idx[0]);
        report.add_summary("hitting_index_median", quantile(&idx, 0.5));
        report.add_summary("hitting_index_max", idx[idx.len() - 1]);
        report.add_summary("barrier_violations", barrier_violations);
        report.add_summary("coupling_violations", coupling_violations);
        if barrier_violations > 0 {
            report.failures.push(format!(
                "{barrier_violations} trials had the target property before the barrier cleared"
            ));
        }
        if coupling_violations > 0 {
            report.failures.push(format!(
                "{coupling_violations} trials cleared the barrier before the last isolated vertex vanished"
            ));
        }
        Ok(report)
    })
}

/// Perfect matchings in `G(n, (ln n + c)/n)` against the limit
/// `exp(-exp(-c))`, one row per `c`. A `c` that puts `p` outside `[0, 1]`
/// at this `n` is run at the nearest end point and flagged in `p_clamped`.
pub fn pm_limit_experiment(n: usize, cs: &[f64], trials: u64, seed: u64) -> Result<ExperimentReport> {
    require_trials(trials)?;
    if n < 2 || n % 2 == 1 {
        return Err(Error::Usage(format!("pm-limit needs even n >= 2, got {n}")));
    }
    if let Some(c) = cs.iter().find(|c| !c.is_finite()) {
        return Err(Error::Usage(format!("c = {c} is not finite")));
    }
    timed(|| {
        let mut config = ExperimentConfig::new("pm-limit", seed);
        config.n = Some(n);
        config.c = cs.to_vec();
        config.trials = Some(trials);
        let mut report = ExperimentReport::new(
            config,
            vec!["n", "c", "p", "p_clamped", "trials", "estimate", "ci_low", "ci_high", "limit"],
        );
        for &c in cs {
            let raw = ((n as f64).ln() + c) / n as f64;
            let p = raw.clamp(0.0, 1.0);
            let prop = estimate_mu(&Oracle::PerfectMatching, n, p, trials, seed)?;
            report.push_row(vec![
                n.into(),
                c.into(),
                p.into(),
                (p != raw).into(),
                trials.into(),
                prop.estimate.into(),
                prop.ci_low.into(),
                prop.ci_high.into(),
                (-(-c).exp()).exp().into(),
            ]);
        }
        Ok(report)
    })
}

/// Largest component of `G(n, c/n)`, one row per `c`.
pub fn giant_component_experiment(n: usize, cs: &[f64], trials: u64, seed: u64) -> Result<ExperimentReport> {
    require_trials(trials)?;
    if n == 0 {
        return Err(Error::Usage("giant needs n >= 1".into()));
    }
    // one vertex has no pairs, so any positive c is fine there
    if let Some(c) = cs.iter().find(|&&c| !(c > 0.0 && (n < 2 || c <= n as f64))) {
        return Err(Error::Usage(format!("c = {c} must satisfy 0 < c <= n")));
    }
    timed(|| {
        let mut config = ExperimentConfig::new("giant", seed);
        config.n = Some(n);
        config.c = cs.to_vec();
        config.trials = Some(trials);
        let mut report = ExperimentReport::new(
            config,
            vec![
                "n",
                "c",
                "trials",
                "mean_fraction",
                "q05_fraction",
                "median_fraction",
                "q95_fraction",
                "mean_over_ln_n",
                "max_over_ln_n",
                "at_most_30_ln_n",
                "at_least_0_3_n",
            ],
        );
        let ln_n = (n as f64).ln();
        for &c in cs {
            let p = (c / n as f64).min(1.0);
            let sizes = (0..trials)
                .into_par_iter()
                .map(|t| sample_gnp(n, p, RandomStream::new(seed, t)).map(|g| largest_component_size(&g)))
                .collect::<Result<Vec<usize>>>()?;
            let mut frac: Vec<f64> = sizes.iter().map(|&l| l as f64 / n as f64).collect();
            frac.sort_by(f64::total_cmp);
            let over_ln: Vec<f64> = sizes.iter().map(|&l| l as f64 / ln_n).collect();
            let small = sizes.iter().filter(|&&l| l as f64 <= 30.0 * ln_n).count();
            let large = sizes.iter().filter(|&&l| l as f64 >= 0.3 * n as f64).count();
            report.push_row(vec![
                n.into(),
                c.into(),
                trials.into(),
                mean(&frac).into(),
                quantile(&frac, 0.05).into(),
                quantile(&frac, 0.5).into(),
                quantile(&frac, 0.95).into(),
                mean(&over_ln).into(),
                over_ln.iter().copied().fold(f64::NEG_INFINITY, f64::max).into(),
                small.into(),
                large.into(),
            ]);
        }
        Ok(report)
    })
}

/// Largest `n` for triangle counting.
pub const MAX_SECOND_MOMENT_N: usize = 500;

/// Number of triangles, via common neighbours above each edge.
pub fn triangle_count(g: &Graph) -> u64 {
    let n = g.n();
    let words = n.div_ceil(64).max(1);
    let mut adj = vec![0u64; n * words];
    for &(u, v) in g.edges() {
        adj[u * words + v / 64] |= 1 << (v % 64);
        adj[v * words + u / 64] |= 1 << (u % 64);
    }
    let mut total = 0u64;
    for &(u, v) in g.edges() {
        // Common neighbours w > v.
        let start = (v + 1) / 64;
        for k in start..words {
            let mut common = adj[u * words + k] & adj[v * words + k];
            if k == start {
                let shift = (v + 1) % 64;
                common &= if shift == 0 { u64::MAX } else { u64::MAX << shift };
            }
            total += common.count_ones() as u64;
        }
    }
    total
}

/// Exact mean and variance of the triangle count in `G(n, p)`.
pub fn triangle_moments(n: usize, p: f64) -> (f64, f64) {
    let nf = n as f64;
    let t = nf * (nf - 1.0) * (nf - 2.0) / 6.0;
    let p3 = p.powi(3);
    let mean = t * p3;
    // Pairs of triangles sharing one edge: 3 (n - 3) partners each.
    let shared = if n >= 4 { t * 3.0 * (nf - 3.0) } else { 0.0 };
    let var = t * p3 * (1.0 - p3) + shared * (p.powi(5) - p.powi(6));
    (mean, var)
}

/// Concentration of the triangle count.
pub fn second_moment_experiment(n: usize, p: f64, trials: u64, seed: u64) -> Result<ExperimentReport> {
    require_trials(trials)?;
    if n > MAX_SECOND_MOMENT_N {
        return Err(Error::capacity("n for triangle counting", MAX_SECOND_MOMENT_N, n));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("edge probability {p} not in [0,1]")));
    }
    timed(|| {
        let mut config = ExperimentConfig::new("second-moment", seed);
        config.n = Some(n);
        config.p = Some(p);
        config.trials = Some(trials);
        let mut report = ExperimentReport::new(
            config,
            vec![
                "n",
                "p",
                "trials",
                "mean",
                "variance",
                "exact_mean",
                "exact_variance",
                "var_over_mean_sq",
                "p_zero",
                "p_zero_ci_high",
            ],
        );
        let counts = (0..trials)
            .into_par_iter()
            .map(|t| sample_gnp(n, p, RandomStream::new(seed, t)).map(|g| triangle_count(&g)))
            .collect::<Result<Vec<u64>>>()?;
        let xs: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let m = mean(&xs);
        let v = variance(&xs);
        let (exact_mean, exact_var) = triangle_moments(n, p);
        let zeros = counts.iter().filter(|&&c| c == 0).count() as u64;
        let pz = Proportion::from_counts(zeros, trials);
        let ratio = if m > 0.0 { v / (m * m) } else { f64::NAN };
        report.push_row(vec![
            n.into(),
            p.into(),
            trials.into(),
            m.into(),
            v.into(),
            exact_mean.into(),
            exact_var.into(),
            ratio.into(),
            pz.estimate.into(),
            pz.ci_high.into(),
        ]);
        report.add_summary("relative_mean_error", (m - exact_mean).abs() / exact_mean);
        report.add_summary("chebyshev_bound", exact_var / (exact_mean * exact_mean));
        if trials >= 10_000 && exact_mean >= 10.0 && (m - exact_mean).abs() > 0.05 * exact_mean {
            report.failures.push(format!(
                "sample mean {m} is more than 5% away from the exact mean {exact_mean}"
            ));
        }
        Ok(report)
    })
}

/// `n H_n`, the expected number of draws to collect all `n` coupons.
pub fn coupon_expectation(n: usize) -> f64 {
    (1..=n).map(|k| n as f64 / k as f64).sum()
}

pub fn coupon_experiment(n: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    require_trials(trials)?;
    if n == 0 {
        return Err(Error::Usage("coupon needs n >= 1".into()));
    }
    timed(|| {
        let mut config = ExperimentConfig::new("coupon", seed);
        config.n = Some(n);
        config.trials = Some(trials);
        let mut report = ExperimentReport::new(
            config,
            vec!["n", "trials", "mean", "sd", "exact_mean", "relative_error", "n_ln_n"],
        );
        let draws = (0..trials)
            .into_par_iter()
            .map(|t| coupon_collector_draws(n, RandomStream::new(seed, t)))
            .collect::<Result<Vec<u64>>>()?;
        let total: u64 = draws.iter().sum();
        let xs: Vec<f64> = draws.iter().map(|&d| d as f64).collect();
        let m = total as f64 / trials as f64;
        let exact = coupon_expectation(n);
        report.push_row(vec![
            n.into(),
            trials.into(),
            m.into(),
            variance(&xs).sqrt().into(),
            exact.into(),
            ((m - exact) / exact).into(),
            (n as f64 * (n as f64).ln()).into(),
        ]);
        Ok(report)
    })
}

/// One `p_c`, `q`, `q_f` row.
pub fn kk_row(fam: &IncreasingFamily) -> Result<(KKReport, Cover, bool)> {
    let p_c = p_c_exact(fam)?;
    let (q, witness) = q_exact(fam)?;
    let q_f = q_fractional(fam)?;
    let ell = ell(fam);
    // Union bound along the witness: mu_q(F) <= sum_S q^|S| <= 1/2.
    let union_ok = mu_p_exact(fam, q)? <= 0.5 + CHAIN_TOLERANCE
        && witness.cost(q) <= 0.5 + CHAIN_TOLERANCE;
    Ok((
        KKReport {
            p_c,
            q,
            q_f,
            ell,
            ratio: p_c / (q * (ell as f64).log2().max(1.0)),
            ratio_fractional: q_f / q,
        },
        witness,
        union_ok,
    ))
}

const KK_COLUMNS: [&str; 11] = [
    "family",
    "ground",
    "minimal_elements",
    "p_c",
    "q",
    "q_f",
    "ell",
    "ratio",
    "ratio_fractional",
    "chain_ok",
    "union_bound_ok",
];

fn kk_cells(label: String, fam: &IncreasingFamily, r: &KKReport, union_ok: bool) -> Vec<Cell> {
    let chain_ok = r.q <= r.q_f + CHAIN_TOLERANCE && r.q_f <= r.p_c + CHAIN_TOLERANCE;
    vec![
        label.into(),
        fam.ground_size().into(),
        fam.minimal_elements().len().into(),
        r.p_c.into(),
        r.q.into(),
        r.q_f.into(),
        r.ell.into(),
        r.ratio.into(),
        r.ratio_fractional.into(),
        chain_ok.into(),
        union_ok.into(),
    ]
}

/// Where a family for `q` comes from.
#[derive(Clone, Debug)]
pub enum FamilySource {
    /// A family in the text format.
    File(String),
    /// A graph property on the edges of `K_n`.
    Property { oracle: Oracle, n: usize },
}

pub fn load_family(source: &FamilySource) -> Result<(String, IncreasingFamily)> {
    match source {
        FamilySource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok((path.clone(), IncreasingFamily::parse(&text)?))
        }
        FamilySource::Property { oracle, n } => {
            let fam = match oracle {
                Oracle::Contains { pattern, .. } if *n > crate::family::MAX_BRIDGE_N => {
                    IncreasingFamily::contains_graph(pattern, *n)?
                }
                _ => family_from_graph_property(*n, oracle)?,
            };
            Ok((format!("{}@K_{n}", oracle.name()), fam))
        }
    }
}

/// `p_c`, `q`, `q_f` and `ell` of one family, with a witness cover.
pub fn q_experiment(source: &FamilySource) -> Result<ExperimentReport> {
    timed(|| {
        let (label, fam) = load_family(source)?;
        let mut config = ExperimentConfig::new("q", 0);
        match source {
            FamilySource::File(p) => config.family = Some(p.clone()),
            FamilySource::Property { oracle, n } => {
                config.oracle = Some(oracle.name());
                config.n = Some(*n);
            }
        }
        let mut report = ExperimentReport::new(config, KK_COLUMNS.to_vec());
        let (r, witness, union_ok) = kk_row(&fam)?;
        let row = kk_cells(label, &fam, &r, union_ok);
        if row[9] == Cell::Bool(false) || !union_ok {
            report
                .failures
                .push(format!("q <= q_f <= p_c or the union bound fails: {r:?}"));
        }
        report.push_row(row);
        report.add_summary("witness_size", witness.members.len());
        report.details = json!({ "report": r, "witness": witness, "family": fam.to_text() });
        Ok(report)
    })
}

/// Graph properties bridged to families for `n <= 4`.
pub fn bridged_corpus() -> Vec<(String, IncreasingFamily)> {
    let mut out = Vec::new();
    let oracles = [
        "connected",
        "no-isolated",
        "mindeg:2",
        "perfect-matching",
        "hamiltonian",
        "triangle-factor",
        "vertex-in-triangle",
        "contains:edge",
        "contains:triangle",
        "contains:path_3",
        "contains:matching_2",
        "contains:cycle_4",
        "contains:H",
    ];
    for n in 2..=4 {
        for spec in oracles {
            let oracle = Oracle::parse(spec).expect("builtin oracle spec");
            if let Ok(fam) = family_from_graph_property(n, &oracle) {
                out.push((format!("{spec}@K_{n}"), fam));
            }
        }
    }
    out
}

/// Corpus check of `q <= q_f <= p_c`: principal families of sizes 1..=10,
/// `families` random families on at most `max_ground` elements, and the
/// bridged graph properties.
pub fn verify_kk(families: usize, max_ground: usize, seed: u64) -> Result<ExperimentReport> {
    if !(1..=crate::family::MAX_EXACT_GROUND).contains(&max_ground) {
        return Err(Error::Usage(format!(
            "max ground size must be in 1..={}",
            crate::family::MAX_EXACT_GROUND
        )));
    }
    timed(|| {
        let mut config = ExperimentConfig::new("verify-kk", seed);
        config.families = Some(families);
        config.max_ground = Some(max_ground);
        let mut report = ExperimentReport::new(config, KK_COLUMNS.to_vec());

        let mut corpus: Vec<(String, IncreasingFamily)> = (1..=10)
            .map(|k| {
                let fam = IncreasingFamily::principal(10, (1 << k) - 1)?;
                Ok((format!("principal_{k}"), fam))
            })
            .collect::<Result<_>>()?;
        for i in 0..families {
            let mut rng = RandomStream::new(seed, i as u64).rng();
            let fam = random_family(&mut rng, max_ground)?;
            corpus.push((format!("random_{i}"), fam));
        }
        corpus.extend(bridged_corpus());

        let rows = corpus
            .par_iter()
            .map(|(label, fam)| {
                let (r, _, union_ok) = kk_row(fam)?;
                Ok(kk_cells(label.clone(), fam, &r, union_ok))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut chain_violations = 0u64;
        let mut union_violations = 0u64;
        let mut max_ratio = f64::NEG_INFINITY;
        let mut max_frac = f64::NEG_INFINITY;
        for row in &rows {
            if row[9] == Cell::Bool(false) {
                chain_violations += 1;
                report.failures.push(format!("chain q <= q_f <= p_c fails for {:?}", row[0]));
            }
            if row[10] == Cell::Bool(false) {
                union_violations += 1;
                report.failures.push(format!("union bound fails for {:?}", row[0]));
            }
            max_ratio = max_ratio.max(row[7].as_f64().unwrap_or(f64::NAN));
            max_frac = max_frac.max(row[8].as_f64().unwrap_or(f64::NAN));
        }
        report.rows = rows;
        report.add_summary("families", corpus.len());
        report.add_summary("chain_violations", chain_violations);
        report.add_summary("union_bound_violations", union_violations);
        report.add_summary("max_ratio", max_ratio);
        report.add_summary("max_ratio_fractional", max_frac);
        Ok(report)
    })
}
