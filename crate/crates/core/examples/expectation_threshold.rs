//! pE for a pattern: the subgraph inventory and which subgraph binds.

use threshold_lab::expectation::{compute_pe, exponent_fit, single_graph_exponent, single_graph_threshold};
use threshold_lab::graph::builtin_graph;

fn main() -> threshold_lab::Result<()> {
    let h_tilde = builtin_graph("H_tilde")?;
    let report = compute_pe(&h_tilde, 100)?;
    println!("inventory of H_tilde at n = 100:");
    for (i, e) in report.inventory.iter().enumerate() {
        let mark = if i == report.binding { "  <- binds" } else { "" };
        println!(
            "  v={} e={} N={:<12} N^(-1/e)={:.6}{mark}",
            e.representative.n(),
            e.edges,
            e.labelled_copies,
            e.binding_value
        );
    }
    println!("pE = {:.6}", report.pe);

    let grid = [50, 100, 200, 400, 800];
    let pe: Vec<(f64, f64)> = grid
        .iter()
        .map(|&n| Ok((n as f64, compute_pe(&h_tilde, n)?.pe)))
        .collect::<threshold_lab::Result<_>>()?;
    let single: Vec<(f64, f64)> = grid
        .iter()
        .map(|&n| Ok((n as f64, single_graph_threshold(&h_tilde, n)?)))
        .collect::<threshold_lab::Result<_>>()?;
    println!("pE slope over {grid:?}: {:.4}", exponent_fit(&pe)?.slope);
    println!(
        "H_tilde alone: slope {:.4}, exact exponent {}",
        exponent_fit(&single)?.slope,
        single_graph_exponent(&h_tilde)?
    );
    Ok(())
}
