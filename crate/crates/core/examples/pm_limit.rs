//! P(G(n, (ln n + c)/n) has a perfect matching) against exp(-exp(-c)).

use threshold_lab::experiments::pm_limit_experiment;
use threshold_lab::random::DEFAULT_SEED;

fn main() -> threshold_lab::Result<()> {
    let cs = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let r = pm_limit_experiment(100, &cs, 400, DEFAULT_SEED)?;
    let est = r.column("estimate").unwrap();
    let lim = r.column("limit").unwrap();
    for ((c, e), l) in cs.iter().zip(est).zip(lim) {
        println!("c = {c:>4}: empirical {:<8} limit {}", e.to_csv(), l.to_csv());
    }
    Ok(())
}
