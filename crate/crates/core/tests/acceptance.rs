//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

use std::time::{Duration, Instant};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ortho_spin::appendix_checks::{verify_appendix_a, verify_pq_equivalence};
use ortho_spin::branching::{
    b_coefficient, enumerate_pn, is_positive_closed_form, spectral_extract_branching, BValue,
};
use ortho_spin::brauer::{represent, BrauerDiagram};
use ortho_spin::free_energy::{
    beta_c, free_energy, locate_jump, maximize_phi, maximize_phi_field, one_sided_derivatives, trace_curve_c,
};
use ortho_spin::group_chars::char_ratio_o;
use ortho_spin::partitions::enumerate_lambda_rho;
use ortho_spin::spectra::{
    build_hamiltonian_real, convert_parameters, dense_spectrum, dimer_ground_state, dimer_eigenvalue,
    ising_product_states, lines_from_table, log_z_decomposed, log_z_direct, total_spin_observable, HamiltonianSpec,
    Params,
};
use ortho_spin::tensor::Flavor;
use ortho_spin::Partition;

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn grids() -> Vec<(usize, usize)> {
    (2..=8).map(|n| (2, n)).chain((2..=6).map(|n| (3, n))).collect()
}

/// Largest |Z_dense − Z_decomposed|/Z_dense over 20 random couplings per grid point.
fn oracle_error(h: f64, seed: u64) -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for (theta, n) in grids() {
        for _ in 0..20 {
            let (l1, l2) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
            let direct = log_z_direct(&HamiltonianSpec::new(theta, n, l1, l2).with_field(h)).map_err(err)?;
            let dec = log_z_decomposed(n, theta, l1, l2, h).map_err(err)?;
            let rel = (dec - direct).exp_m1().abs();
            if !(rel <= worst) {
                worst = rel;
            }
        }
    }
    Ok(worst)
}

fn c1_oracle() -> Check {
    let t = Instant::now();
    let worst = oracle_error(0.0, 1)?;
    let dt = t.elapsed();
    ensure(worst <= 1e-9 && dt <= Duration::from_secs(120), format!("max rel err {worst:.2e} in {dt:.2?}"))
}

fn c2_magnetised_oracle() -> Check {
    let mut worst: f64 = 0.0;
    for (i, h) in [-1.0, 0.3, 1.0].into_iter().enumerate() {
        worst = worst.max(oracle_error(h, 10 + i as u64)?);
    }
    ensure(worst <= 1e-9, format!("max rel err {worst:.2e} over h ∈ {{−1, 0.3, 1}}"))
}

fn total_multiplicity(table: &[(ortho_spin::LambdaRhoPair, u64)], theta: usize) -> Result<u128, String> {
    Ok(lines_from_table(table, theta, 0.0, 0.0).map_err(err)?.iter().map(|l| l.multiplicity).sum())
}

fn c3_dimension_identity() -> Check {
    let mut cases: Vec<(usize, usize, bool)> = (1..=10).map(|n| (2, n, false)).collect();
    cases.extend((1..=8).map(|n| (3, n, false)));
    cases.extend((1..=5).map(|n| (4, n, true)));
    for (theta, n, oracle) in cases {
        let table = if oracle {
            let extracted: Vec<_> = spectral_extract_branching(n, theta, 0.6173, 0.9241)
                .map_err(err)?
                .into_iter()
                .filter(|(_, b)| *b > 0)
                .collect();
            // Where the exact rules also apply they must agree.
            if let Ok(exact) = enumerate_pn(n, theta) {
                if exact != extracted {
                    return Err(format!("θ={theta} n={n}: extraction disagrees with the exact rules"));
                }
            }
            extracted
        } else {
            enumerate_pn(n, theta).map_err(err)?
        };
        let total = total_multiplicity(&table, theta)?;
        let expected = (theta as u128).pow(n as u32);
        if total != expected {
            return Err(format!("θ={theta} n={n}: Σ = {total}, θⁿ = {expected}"));
        }
    }
    Ok("θ=2 n≤10, θ=3 n≤8 exact; θ=4 n≤5 via extraction".into())
}

fn c4_branching() -> Check {
    let mut compared = 0usize;
    for theta in [2, 3] {
        for n in 1..=6 {
            for (pair, b) in spectral_extract_branching(n, theta, 0.8731, -0.4127).map_err(err)? {
                let pos = is_positive_closed_form(&pair, theta).map_err(err)?;
                let exact = b_coefficient(&pair, theta).map_err(err)?;
                if pos != (b > 0) || exact != BValue::Exact(b) {
                    return Err(format!("θ={theta} {pair:?}: extracted {b}, rule {exact:?}, closed form {pos}"));
                }
                compared += 1;
            }
        }
        for n in 1..=12 {
            for pair in enumerate_lambda_rho(n, theta) {
                let pos = is_positive_closed_form(&pair, theta).map_err(err)?;
                match b_coefficient(&pair, theta).map_err(err)? {
                    BValue::Exact(b) if (b > 0) == pos => compared += 1,
                    other => return Err(format!("θ={theta} {pair:?}: reduction {other:?}, closed form {pos}")),
                }
            }
        }
    }
    let mut columns = 0usize;
    for n in [4, 5] {
        for (pair, b) in spectral_extract_branching(n, 4, 0.8731, -0.4127).map_err(err)? {
            let lam = pair.lambda.parts();
            if !lam.is_empty() && lam.iter().all(|&p| p == 1) {
                let rule = b_coefficient(&pair, 4).map_err(err)?;
                if rule != BValue::Exact(b) {
                    return Err(format!("θ=4 {pair:?}: extracted {b}, column rule {rule:?}"));
                }
                columns += 1;
            }
        }
    }
    Ok(format!("{compared} coefficient comparisons, {columns} column cases at θ=4"))
}

fn c5_critical() -> Check {
    let b2 = beta_c(2).map_err(err)?;
    let b3 = beta_c(3).map_err(err)?;
    if b2 != 2.0 || (b3 - 2.7725887222397812).abs() > 1e-12 {
        return Err(format!("β_c(2) = {b2}, β_c(3) = {b3}"));
    }
    let mut worst: f64 = 0.0;
    for theta in 3..=6 {
        let bc = beta_c(theta).map_err(err)?;
        let l1 = locate_jump(theta, 1.0, bc - 1.5, bc - 0.5, 1e-6).map_err(err)?;
        worst = worst.max((l1 + 1.0 - bc).abs());
    }
    ensure(worst <= 1e-3, format!("β_c(3) = {b3:.16}; jump offset ≤ {worst:.2e} for θ = 3..6"))
}

fn xxz(k1: f64, k2: f64) -> Result<f64, String> {
    Ok(free_energy(2, Params::Xxz { k1, k2 }).map_err(err)?.original_value)
}

fn c6_spin_half() -> Check {
    // Second differences along K₂ = 0.
    let step = 0.01;
    let ks: Vec<f64> = (0..=200).map(|i| 3.0 + i as f64 * step).collect();
    let phis: Vec<f64> = ks.iter().map(|&k| xxz(k, 0.0)).collect::<Result<_, _>>()?;
    let d2: Vec<f64> = (1..ks.len() - 1).map(|i| phis[i + 1] - 2.0 * phis[i] + phis[i - 1]).collect();
    // The transition is continuous: the second difference steps up rather
    // than peaking, so locate the step with a centred difference.
    let (mut at, mut spike) = (0.0, 0.0);
    for i in 1..d2.len() - 1 {
        let jump = (d2[i + 1] - d2[i - 1]).abs();
        if jump > spike {
            spike = jump;
            at = ks[i + 1];
        }
    }
    // Directional derivatives across K₁ = K₂ = 6, normal to the diagonal.
    let e = 1e-4;
    let d = std::f64::consts::FRAC_1_SQRT_2;
    let f0 = xxz(6.0, 6.0)?;
    let right = (xxz(6.0 + e * d, 6.0 - e * d)? - f0) / e;
    let left = (f0 - xxz(6.0 - e * d, 6.0 + e * d)?) / e;
    let gap = (right - left).abs();
    // Independence of K₁ in the Ising region.
    let vals: Vec<f64> = (0..=30).map(|i| xxz(4.5 + 0.05 * i as f64, 6.0)).collect::<Result<_, _>>()?;
    let var = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(
        (at - 4.0).abs() <= 1e-2 + 1e-12 && gap > 0.01 && var <= 1e-9,
        format!("spike at K₁ = {at:.2} ({spike:.3e}); gap {gap:.4}; Ising variation {var:.1e}"),
    )
}

fn c7_curve_c() -> Check {
    let pts = trace_curve_c(24, -1.0).map_err(err)?;
    let dist = |p: (f64, f64)| {
        pts.windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
                ((a.0 + t * dx - p.0).powi(2) + (a.1 + t * dy - p.1).powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let l16 = 16f64.ln();
    let d_a = dist((2.25, 1.5));
    let d_b = dist((l16, l16));
    let linear = pts.iter().filter(|p| p.1 <= 1.4).map(|p| (p.1 - (2.0 * p.0 - 3.0)).abs()).fold(0.0, f64::max);
    let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    let in_range = slopes.iter().all(|&s| (2.0 - 1e-3..=3.0 + 1e-3).contains(&s));
    // Bisection noise is ~1e-9 in J₁; allow that much slack on monotonicity.
    let monotone = slopes.windows(2).all(|w| w[1] >= w[0] - 1e-5);
    ensure(
        d_a <= 1e-2 && d_b <= 1e-2 && linear <= 1e-3 && in_range && monotone,
        format!(
            "dist (9/4,3/2) {d_a:.1e}, (log16,log16) {d_b:.1e}; linear dev {linear:.1e}; slopes {:.4}..{:.4} monotone={monotone}",
            slopes[0],
            slopes[slopes.len() - 1]
        ),
    )
}

fn c8_magnetisation() -> Check {
    let mut detail = Vec::new();
    let h = 1e-6;
    for ((k1, k2), positive) in [((0.0, 6.0), true), ((6.0, 0.0), false), ((6.0, 6.0), true)] {
        let c = convert_parameters(2, Params::Xxz { k1, k2 }).map_err(err)?;
        let (up, _) = one_sided_derivatives(2, c.l1, c.l2).map_err(err)?;
        let fd = (maximize_phi_field(2, c.l1, c.l2, h).map_err(err)?.value
            - maximize_phi_field(2, c.l1, c.l2, 0.0).map_err(err)?.value)
            / h;
        let pattern = if positive { up > 1e-3 } else { up.abs() < 1e-6 };
        detail.push(format!("({k1},{k2}): y₁↑ {up:.5} fd {fd:.5}"));
        if (fd - up).abs() > 1e-4 || !pattern {
            return Err(detail.join("; "));
        }
    }
    Ok(detail.join("; "))
}

fn c9_total_spin() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for theta in [2, 3] {
        for n in 2..=6 {
            let (l1, l2) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
            let ts = total_spin_observable(n, theta, l1, l2, 0.7).map_err(err)?;
            let dense = ts.dense.ok_or("dense trace unavailable")?;
            worst = worst.max(((ts.character - dense) / dense).abs());
        }
    }
    let n = 10_000;
    let ratio = char_ratio_o(&Partition::row(n / 2), 3, 1.0 / n as f64).map_err(err)?;
    let target = 0.5f64.sinh() / 0.5;
    ensure(
        worst <= 1e-9 && (ratio - target).abs() <= 1e-3,
        format!("finite-n rel err {worst:.1e}; asymptotic ratio {ratio:.6} vs {target:.6}"),
    )
}

fn c10_ground_states() -> Check {
    let mut worst: f64 = 0.0;
    for (theta, n) in [(2, 4), (2, 6), (3, 4)] {
        let spec = HamiltonianSpec::new(theta, n, 1.0, 1.0);
        let h = build_hamiltonian_real(&spec).map_err(err)?;
        let e_min = dense_spectrum(&spec).map_err(err)?[0];
        if (e_min - dimer_eigenvalue(n, theta, 1.0, 1.0)).abs() > 1e-10 {
            return Err(format!("θ={theta} n={n}: E_min {e_min} ≠ dimer line"));
        }
        let v = dimer_ground_state(n, theta, Flavor::Q).map_err(err)?;
        let v = &v / v.norm();
        worst = worst.max((&h * &v - &v * e_min).amax());
    }
    if worst > 1e-10 {
        return Err(format!("dimer residual {worst:.1e}"));
    }
    let n = 4;
    for state in ising_product_states(n).map_err(err)? {
        for x in 1..=n {
            for y in x + 1..=n {
                let q = represent(&BrauerDiagram::bar(n, x, y).map_err(err)?, 2, Flavor::Q).map_err(err)?;
                let t = represent(&BrauerDiagram::transposition(n, x, y).map_err(err)?, 2, Flavor::Q).map_err(err)?;
                let qv: DVector<Complex64> = q.map(|a| Complex64::new(a, 0.0)) * &state;
                let tv: DVector<Complex64> = t.map(|a| Complex64::new(a, 0.0)) * &state;
                if qv.iter().any(|c| *c != Complex64::new(0.0, 0.0)) || tv != state {
                    return Err(format!("product state not annihilated/fixed at ({x},{y})"));
                }
            }
        }
    }
    Ok(format!("dimer residual {worst:.1e}; product states exact"))
}

fn c11_positivity() -> Check {
    let t = Instant::now();
    let r = verify_appendix_a(40).map_err(err)?;
    let dt = t.elapsed();
    ensure(
        r.certify.certified
            && r.certify.max_depth <= 40
            && r.winding.verified == Some(4)
            && (r.winding.estimate_re - 4.0).abs() <= 1e-3
            && dt <= Duration::from_secs(60),
        format!(
            "certified={} ({} leaves, depth {}); winding {:.8} → {:?}; {dt:.2?}",
            r.certify.certified, r.certify.leaves, r.certify.max_depth, r.winding.estimate_re, r.winding.verified
        ),
    )
}

fn c12_unitary_equivalence() -> Check {
    let mut detail = Vec::new();
    for theta in [3, 5] {
        let r = verify_pq_equivalence(theta, 2).map_err(err)?;
        let res = r.pair_residual.unwrap_or(f64::INFINITY);
        detail.push(format!("θ={theta} residual {res:.1e}"));
        if r.obstructed || res > 1e-12 {
            return Err(detail.join("; "));
        }
    }
    for theta in [2, 4] {
        let r = verify_pq_equivalence(theta, 2).map_err(err)?;
        if !r.obstructed || !r.passed() {
            return Err(format!("θ={theta} not reported OBSTRUCTED"));
        }
    }
    detail.push("θ=2,4 OBSTRUCTED".into());
    let q = dense_spectrum(&HamiltonianSpec::new(3, 4, 0.731, -0.412)).map_err(err)?;
    let p = dense_spectrum(&HamiltonianSpec::new(3, 4, 0.731, -0.412).with_flavor(Flavor::P)).map_err(err)?;
    let gap = q.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    detail.push(format!("θ=3 n=4 Q/P spectra differ by {gap:.1e}"));
    ensure(q.len() == p.len() && gap <= 1e-10, detail.join("; "))
}

fn c13_convergence() -> Check {
    let phi = maximize_phi(2, 1.0, 0.0).map_err(err)?.value;
    let gaps: Vec<f64> = [4, 6, 8]
        .iter()
        .map(|&n| {
            log_z_direct(&HamiltonianSpec::new(2, n, 1.0, 0.0))
                .map(|lz| (lz / n as f64 - phi).abs())
                .map_err(err)
        })
        .collect::<Result<_, _>>()?;
    ensure(gaps[0] > gaps[1] && gaps[1] > gaps[2], format!("gaps {gaps:.4?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("1 oracle equivalence", c1_oracle),
        ("2 magnetised oracle", c2_magnetised_oracle),
        ("3 dimension identity", c3_dimension_identity),
        ("4 branching closed forms", c4_branching),
        ("5 critical couplings", c5_critical),
        ("6 spin-1/2 phase structure", c6_spin_half),
        ("7 spin-1 curve", c7_curve_c),
        ("8 magnetisation derivatives", c8_magnetisation),
        ("9 total spin", c9_total_spin),
        ("10 ground states", c10_ground_states),
        ("11 positivity certificate and zero count", c11_positivity),
        ("12 Q/P unitary equivalence", c12_unitary_equivalence),
        ("13 convergence to the variational limit", c13_convergence),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let t = Instant::now();
        let outcome = check();
        let dt = t.elapsed();
        match outcome {
            Ok(d) => println!("PASS [{name}] {d} ({dt:.1?})"),
            Err(d) => {
                println!("FAIL [{name}] {d} ({dt:.1?})");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", criteria.len());
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
