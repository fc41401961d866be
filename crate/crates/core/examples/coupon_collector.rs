//! Coupon collector draws against n H_n and n ln n.

use threshold_lab::experiments::coupon_expectation;
use threshold_lab::random::{coupon_collector_draws, RandomStream, DEFAULT_SEED};

fn main() -> threshold_lab::Result<()> {
    for n in [10, 100, 1000] {
        let trials = 1000u64;
        let total: u64 = (0..trials)
            .map(|t| coupon_collector_draws(n, RandomStream::new(DEFAULT_SEED, t)))
            .sum::<threshold_lab::Result<u64>>()?;
        let mean = total as f64 / trials as f64;
        println!(
            "n = {n:<5} mean {mean:>9.2}  n H_n {:>9.2}  n ln n {:>9.2}",
            coupon_expectation(n),
            n as f64 * (n as f64).ln()
        );
    }
    Ok(())
}
