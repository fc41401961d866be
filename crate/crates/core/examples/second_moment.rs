//! Triangle counts: sample moments against the exact mean and variance.

use threshold_lab::experiments::{second_moment_experiment, triangle_moments};
use threshold_lab::random::DEFAULT_SEED;

fn main() -> threshold_lab::Result<()> {
    let n = 100;
    for c in [1.0, 3.0, 5.0, 10.0] {
        let p = c / n as f64;
        let (mean, var) = triangle_moments(n, p);
        let r = second_moment_experiment(n, p, 2000, DEFAULT_SEED)?;
        let cell = |k: &str| r.column(k).unwrap()[0].to_csv();
        println!(
            "p = {p:<5} E[X] = {mean:>9.3} Var = {var:>9.3} | sample mean {} var {} P(X=0) {}",
            cell("mean"),
            cell("variance"),
            cell("p_zero")
        );
    }
    Ok(())
}
