//! Branching coefficients: exact combinatorial rules where they apply,
//! and numerical extraction from a dense spectrum where they do not.

use ortho_spin::branching::{b_coefficient, enumerate_pn_with_oracle, BValue};
use ortho_spin::partitions::enumerate_lambda_rho;

fn main() -> ortho_spin::Result<()> {
    for (n, theta) in [(4, 3), (6, 4)] {
        let pairs = enumerate_lambda_rho(n, theta);
        let unknown: Vec<_> =
            pairs.iter().filter(|p| matches!(b_coefficient(p, theta), Ok(BValue::Unknown))).collect();
        println!("θ = {theta}, n = {n}: {} pairs, {} outside the exact rules", pairs.len(), unknown.len());
        for p in unknown.iter().take(5) {
            println!("  unresolved: λ = {}, ρ = {}", p.lambda, p.rho);
        }
    }
    // θ = 4, n = 4 is small enough to fill gaps from the spectrum.
    let table = enumerate_pn_with_oracle(4, 4, 7)?;
    println!("θ = 4, n = 4 positive pairs (with spectral extraction):");
    for (p, b) in table {
        println!("  λ = {:<8} ρ = {:<10} b = {b}", p.lambda.to_string(), p.rho.to_string());
    }
    Ok(())
}
