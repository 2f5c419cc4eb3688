//! Traces the boundary of the region where the uniform point is the
//! global maximiser in the spin-1 model, and checks its convexity.

use ortho_spin::free_energy::{trace_curve_c, uniform_is_global_max_j};

fn main() -> ortho_spin::Result<()> {
    let pts = trace_curve_c(16, -1.0)?;
    println!("{:>12} {:>12} {:>12}", "J1", "J2", "slope");
    let mut last: Option<(f64, f64)> = None;
    for &(j1, j2) in &pts {
        let slope = last.map(|(a, b)| (j2 - b) / (j1 - a));
        println!("{j1:>12.6} {j2:>12.6} {:>12}", slope.map_or(String::new(), |s| format!("{s:.6}")));
        last = Some((j1, j2));
    }
    let (j1, j2) = pts[pts.len() / 2];
    println!(
        "just inside: {}, just outside: {}",
        uniform_is_global_max_j(j1 - 0.05, j2)?,
        uniform_is_global_max_j(j1 + 0.05, j2)?
    );
    Ok(())
}
