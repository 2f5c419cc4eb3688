//! Whether the two bar representations are unitarily equivalent: an
//! explicit intertwiner for odd θ, an invariant obstruction for even θ.

use ortho_spin::appendix_checks::verify_pq_equivalence;

fn main() -> ortho_spin::Result<()> {
    for theta in 2..=7 {
        let r = verify_pq_equivalence(theta, 3)?;
        if r.obstructed {
            println!(
                "θ = {theta}: obstructed, tr(TQ) = {}, tr(TP) = {}, antisymmetry {:?}",
                r.trace_witness.0, r.trace_witness.1, r.antisymmetry
            );
        } else {
            println!(
                "θ = {theta}: equivalent, unitarity {:.1e}, chain {:.1e}, spectra {:.1e}",
                r.unitarity_residual.unwrap_or(0.0),
                r.chain_residual.unwrap_or(0.0),
                r.spectrum_residual.unwrap_or(0.0)
            );
        }
    }
    Ok(())
}
