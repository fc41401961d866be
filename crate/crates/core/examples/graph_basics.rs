//! Builtin graphs, densities, automorphisms and copy counts.

use threshold_lab::graph::{
    automorphism_count, builtin_graph, count_copies_in, count_labelled_copies, densest_subgraph, density,
    Graph,
};

fn main() -> threshold_lab::Result<()> {
    for name in ["edge", "triangle", "H", "H_tilde", "cycle_5", "petersen"] {
        let g = builtin_graph(name)?;
        let (core, best) = densest_subgraph(&g)?;
        println!(
            "{name:>9}: v={:<2} e={:<2} density={} densest={} on {:?} |Aut|={}",
            g.n(),
            g.edge_count(),
            density(&g)?.value(),
            best.value(),
            core,
            automorphism_count(&g)?
        );
    }

    let h = builtin_graph("H")?;
    for n in [4, 10, 100] {
        println!("labelled copies of H in K_{n}: {}", count_labelled_copies(&h, n)?);
    }

    // copies inside a fixed host graph
    let host = Graph::parse("n 5\n0 1\n0 2\n1 2\n1 3\n2 3\n3 4\n")?;
    println!("triangles in host: {}", count_copies_in(&builtin_graph("triangle")?, &host)?);
    println!("host in text form:\n{}", host.to_text());
    Ok(())
}
