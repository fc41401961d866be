//! Largest component of G(n, c/n) on both sides of c = 1.

use threshold_lab::experiments::giant_component_experiment;
use threshold_lab::random::DEFAULT_SEED;

fn main() -> threshold_lab::Result<()> {
    let n = 20_000;
    let cs = [0.5, 0.8, 1.0, 1.2, 1.5, 2.0];
    let r = giant_component_experiment(n, &cs, 20, DEFAULT_SEED)?;
    print!("{}", r.to_csv());
    Ok(())
}
