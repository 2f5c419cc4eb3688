//! Brauer diagrams: composition with loop counting, generator words, and
//! the check that the tensor representation is a homomorphism.

use ortho_spin::brauer::{all_diagrams, multiply, verify_homomorphism, BrauerDiagram};
use ortho_spin::tensor::Flavor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ortho_spin::Result<()> {
    let bar = BrauerDiagram::bar(3, 1, 2)?;
    let swap = BrauerDiagram::transposition(3, 2, 3)?;
    let (d, loops) = multiply(&bar, &bar)?;
    println!("bar·bar = {d} with {loops} loop(s)");
    let (d, loops) = multiply(&bar, &swap)?;
    println!("bar·swap = {d} ({loops} loops), word {:?}", d.decompose());
    println!("diagrams on 4 strands: {}", all_diagrams(4).len());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (theta, flavor) in [(3, Flavor::Q), (3, Flavor::P), (2, Flavor::Q)] {
        let r = verify_homomorphism(3, theta, None, flavor, &mut rng)?;
        println!("θ = {theta} {flavor:?}: {} pairs, max residual {:.1e}, passed {}", r.pairs_checked, r.max_residual, r.passed);
    }
    Ok(())
}
