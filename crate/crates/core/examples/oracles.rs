//! Evaluating increasing properties on a few graphs.

use threshold_lab::graph::{builtin_graph, Graph};
use threshold_lab::oracles::{has_hamiltonian_cycle, Oracle};
use threshold_lab::random::RandomStream;

fn main() -> threshold_lab::Result<()> {
    let two_triangles = Graph::complete(3).disjoint_union(&Graph::complete(3));
    let graphs = [
        ("C_6", builtin_graph("cycle_6")?),
        ("2K_3", two_triangles),
        ("K_6", Graph::complete(6)),
        ("petersen", builtin_graph("petersen")?),
    ];
    let specs = [
        "connected",
        "giant:0.5",
        "no-isolated",
        "mindeg:3",
        "contains:triangle",
        "perfect-matching",
        "triangle-factor",
        "vertex-in-triangle",
    ];
    // only the Tutte test (n > 12) draws randomness
    let mut rng = RandomStream::new(1, 0).aux_rng();
    print!("{:>10}", "");
    for s in specs {
        print!(" {s:>18}");
    }
    println!();
    for (label, g) in &graphs {
        print!("{label:>10}");
        for s in specs {
            print!(" {:>18}", Oracle::parse(s)?.evaluate(g, &mut rng)?);
        }
        println!();
    }

    println!("petersen hamiltonian: {}", has_hamiltonian_cycle(&builtin_graph("petersen")?)?);

    let bipartite = Oracle::custom("has-4-edges", |g: &Graph| g.edge_count() >= 4);
    println!("{} on C_6: {}", bipartite.name(), bipartite.evaluate(&graphs[0].1, &mut rng)?);
    Ok(())
}
