//! Partition function two ways: dense diagonalisation of the Hamiltonian
//! and the character decomposition, for a spin-1 chain in a field.

use ortho_spin::spectra::{convert_parameters, log_z_decomposed, log_z_direct, HamiltonianSpec, Params};

fn main() -> ortho_spin::Result<()> {
    let theta = 3;
    let c = convert_parameters(theta, Params::Blbq { j1: 0.7, j2: -1.3 })?;
    println!("L1 = {}, L2 = {}, shift per edge = {}", c.l1, c.l2, c.constant_shift);
    println!("{:>3} {:>22} {:>22} {:>10}", "n", "log Z (dense)", "log Z (characters)", "rel. err");
    for n in 1..=6 {
        let spec = HamiltonianSpec::new(theta, n, c.l1, c.l2).with_field(0.4);
        let dense = log_z_direct(&spec)?;
        let chars = log_z_decomposed(n, theta, c.l1, c.l2, 0.4)?;
        println!("{n:>3} {dense:>22.15} {chars:>22.15} {:>10.1e}", ((dense - chars) / dense).abs());
    }
    // The decomposition keeps working far past any dense cap.
    let n = 200;
    println!("log Z / n at n = {n}: {}", log_z_decomposed(n, theta, c.l1, c.l2, 0.4)? / n as f64);
    Ok(())
}
