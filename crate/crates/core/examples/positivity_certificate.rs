//! Interval-arithmetic positivity certificate and contour zero count.

use ortho_spin::appendix_checks::verify_appendix_a;

fn main() -> ortho_spin::Result<()> {
    let r = verify_appendix_a(40)?;
    let c = &r.certify;
    println!("positive on [{}, {}]: {} ({} leaves, depth {})", c.lo, c.hi, c.certified, c.leaves, c.max_depth);
    println!("root enclosed in [{:.15}, {:.15}], left of the range: {}", r.root_r.0, r.root_r.1, r.root_left_of_range);
    println!(
        "winding estimate {:.12} + {:.1e}i, verified count {:?}",
        r.winding.estimate_re, r.winding.estimate_im, r.winding.verified
    );
    Ok(())
}
