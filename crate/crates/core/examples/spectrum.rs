//! Spectral lines (λ, k, ρ) with branching coefficients and eigenvalues,
//! checked against the dimension count θⁿ.

use ortho_spin::spectra::spectral_lines;

fn main() -> ortho_spin::Result<()> {
    let (n, theta, l1, l2) = (5, 3, 0.3, 0.8);
    let lines = spectral_lines(n, theta, l1, l2)?;
    println!("{:<10} {:>2} {:<12} {:>3} {:>4} {:>5} {:>12} {:>6}", "lambda", "k", "rho", "b", "d_O", "d_Sn", "eigenvalue", "mult");
    for l in &lines {
        println!(
            "{:<10} {:>2} {:<12} {:>3} {:>4} {:>5} {:>12.6} {:>6}",
            l.lambda.to_string(),
            l.k,
            l.rho.to_string(),
            l.b,
            l.d_o,
            l.d_sn,
            l.eigenvalue,
            l.multiplicity
        );
    }
    let total: u128 = lines.iter().map(|l| l.multiplicity).sum();
    println!("total multiplicity {total} = {theta}^{n} = {}", theta.pow(n as u32));
    let ground = lines.iter().min_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue)).unwrap();
    println!("ground line: λ = {}, ρ = {}, E = {}", ground.lambda, ground.rho, ground.eigenvalue);
    Ok(())
}
