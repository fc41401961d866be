//! G(n,p), the random graph process and the weight coupling between them.

use threshold_lab::random::{sample_gnp, sample_process, EdgeWeighting, RandomStream};

fn main() -> threshold_lab::Result<()> {
    let seed = 7;
    let g = sample_gnp(12, 0.25, RandomStream::new(seed, 0))?;
    println!("G(12, 0.25): {} edges, degrees {:?}", g.edge_count(), g.degrees());

    let order = sample_process(5, RandomStream::new(seed, 1));
    println!("process on K_5: {order:?}");

    // Thresholding one weighting at increasing p gives nested graphs.
    let w = EdgeWeighting::sample(30, RandomStream::new(seed, 2));
    for p in [0.02, 0.05, 0.1, 0.2] {
        println!("p = {p:<4} -> {:>3} edges", w.threshold(p).edge_count());
    }

    // Same (seed, trial) gives the same graph.
    let again = sample_gnp(12, 0.25, RandomStream::new(seed, 0))?;
    assert_eq!(g, again);
    Ok(())
}
