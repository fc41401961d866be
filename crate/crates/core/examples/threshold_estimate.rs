//! Monte Carlo mu_p and p_c for connectivity, against ln n / n.

use threshold_lab::oracles::Oracle;
use threshold_lab::random::{estimate_mu, estimate_pc, DEFAULT_SEED};

fn main() -> threshold_lab::Result<()> {
    let oracle = Oracle::Connected;
    let n = 60;
    for p in [0.03, 0.05, 0.07, 0.09, 0.12] {
        let m = estimate_mu(&oracle, n, p, 2000, DEFAULT_SEED)?;
        println!("mu_{p:<4} = {:.3}  [{:.3}, {:.3}]", m.estimate, m.ci_low, m.ci_high);
    }

    println!("{:>6} {:>10} {:>22} {:>10}", "n", "p_c", "95% CI", "p_c n/ln n");
    for n in [16, 64, 256, 1024] {
        let e = estimate_pc(&oracle, n, 400, DEFAULT_SEED)?;
        let scaled = e.point * n as f64 / (n as f64).ln();
        println!("{n:>6} {:>10.5} [{:>9.5}, {:>9.5}] {scaled:>10.3}", e.point, e.ci_low, e.ci_high);
    }
    Ok(())
}
