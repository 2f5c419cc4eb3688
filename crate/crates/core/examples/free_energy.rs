//! Limiting free energy from the variational formula, in each of the
//! three parameterisations.

use ortho_spin::free_energy::free_energy;
use ortho_spin::spectra::Params;

fn main() -> ortho_spin::Result<()> {
    let cases = [
        (2, Params::Xxz { k1: 2.0, k2: 1.0 }),
        (2, Params::Xxz { k1: 6.0, k2: 0.0 }),
        (3, Params::Blbq { j1: 0.0, j2: 4.0 * 2f64.ln() }),
        (3, Params::Blbq { j1: 1.0, j2: -2.0 }),
        (4, Params::Canonical { l1: 1.5, l2: 0.5 }),
    ];
    for (theta, params) in cases {
        let f = free_energy(theta, params)?;
        let best = f.result.best();
        println!("θ = {theta} {params:?}");
        println!("  canonical (L1, L2) = ({}, {})", f.canonical.l1, f.canonical.l2);
        println!("  max φ = {:.12}, original parameterisation = {:.12}", f.value, f.original_value);
        println!("  x* = {:?}, y1 range = {:?}, {} maximiser(s)", best.point.x, best.y1_range, f.result.maximizers.len());
    }
    Ok(())
}
