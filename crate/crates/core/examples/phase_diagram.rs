//! A coarse text phase diagram for the spin-½ and spin-1 models.

use ortho_spin::free_energy::{classify_phase, Phase};
use ortho_spin::spectra::Params;

fn glyph(p: Phase, conjectured: bool) -> char {
    let c = match p {
        Phase::Disordered => '.',
        Phase::Ising => 'I',
        Phase::Xy => 'X',
        Phase::Nematic => 'N',
        Phase::Ferromagnetic => 'F',
        Phase::FourthPhase => '4',
        Phase::Boundary => '|',
    };
    if conjectured {
        c.to_ascii_lowercase()
    } else {
        c
    }
}

fn draw(theta: usize, make: impl Fn(f64, f64) -> Params, range: (f64, f64)) -> ortho_spin::Result<()> {
    let steps = 24;
    let at = |i: usize| range.0 + (range.1 - range.0) * i as f64 / steps as f64;
    for row in (0..=steps).rev() {
        let mut line = String::new();
        for col in 0..=steps {
            let label = classify_phase(theta, make(at(col), at(row)))?;
            line.push(if label.not_proven { '?' } else { glyph(label.phase, label.conjectured) });
        }
        println!("{:>6.2} {line}", at(row));
    }
    Ok(())
}

fn main() -> ortho_spin::Result<()> {
    println!("θ = 2, horizontal K1, vertical K2 in [-8, 8]");
    draw(2, |k1, k2| Params::Xxz { k1, k2 }, (-8.0, 8.0))?;
    println!("\nθ = 3, horizontal J1, vertical J2 in [-6, 6] (lower case: conjectured)");
    draw(3, |j1, j2| Params::Blbq { j1, j2 }, (-6.0, 6.0))?;
    Ok(())
}
