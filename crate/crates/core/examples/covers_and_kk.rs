//! Covers, q, q_f and p_c of increasing families, including contains-H_tilde
//! on the edges of K_6.

use threshold_lab::expectation::expected_copies;
use threshold_lab::family::{
    ell, kk_report, mu_p_exact, q_exact, q_for_cover, Cover, IncreasingFamily,
};
use threshold_lab::graph::builtin_graph;

fn main() -> threshold_lab::Result<()> {
    // connectivity on the three edges of K_3
    let k3 = IncreasingFamily::parse("N 3\n0 1\n0 2\n1 2\n")?;
    let r = kk_report(&k3)?;
    println!("K_3 connectivity: {r:?}");
    println!("mu_0.5 = {}", mu_p_exact(&k3, 0.5)?);

    let fam = IncreasingFamily::new(6, vec![0b000111, 0b011100, 0b110001, 0b101010])?;
    let (q, witness) = q_exact(&fam)?;
    println!("q = {q:.6} with witness {:?} (ell = {})", witness.members, ell(&fam));

    let h_tilde = builtin_graph("H_tilde")?;
    let fam = IncreasingFamily::contains_graph(&h_tilde, 6)?;
    let h_copies = IncreasingFamily::contains_graph(&builtin_graph("H")?, 6)?;
    let all_h_tilde = Cover::new(fam.minimal_elements().to_vec());
    let all_h = Cover::new(h_copies.minimal_elements().to_vec());
    let q_ht = q_for_cover(&all_h_tilde, &fam)?;
    let q_h = q_for_cover(&all_h, &fam)?;
    println!("contains H_tilde in K_6: {} copies", fam.minimal_elements().len());
    println!("  cover by all H_tilde copies: q = {q_ht:.5}");
    println!("  cover by all H copies:       q = {q_h:.5}");
    println!(
        "  cost of the H_tilde cover at q equals E[#H_tilde]: {:.6} = {:.6}",
        all_h_tilde.cost(0.3),
        expected_copies(&h_tilde, 6, 0.3)?
    );
    Ok(())
}
