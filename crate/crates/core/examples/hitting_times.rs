//! Hitting times along the random graph process.

use threshold_lab::experiments::{hitting_experiment, Cell, HittingKind, Trials};
use threshold_lab::random::DEFAULT_SEED;

fn main() -> threshold_lab::Result<()> {
    let runs = [
        (HittingKind::PerfectMatching, 4, Trials::Exhaustive),
        (HittingKind::PerfectMatching, 40, Trials::Count(300)),
        (HittingKind::Hamiltonian, 16, Trials::Count(200)),
        (HittingKind::TriangleFactor, 12, Trials::Count(200)),
    ];
    for (kind, n, trials) in runs {
        let r = hitting_experiment(kind, n, trials, DEFAULT_SEED)?;
        let get = |k: &str| r.summary_value(k).and_then(Cell::as_f64).unwrap_or(f64::NAN);
        println!(
            "{:<16} n={n:<3} success {:.3} [{:.3}, {:.3}]  median hitting index {}  violations {}/{}",
            kind.name(),
            get("success_fraction"),
            get("ci_low"),
            get("ci_high"),
            get("hitting_index_median"),
            get("barrier_violations"),
            get("coupling_violations"),
        );
    }
    Ok(())
}
