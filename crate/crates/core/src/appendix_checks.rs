//! Computer-assisted checks behind the spin-1 curve analysis, and the
//! unitary that intertwines the Q and P bar representations.
//!
//! w(z) = 3/2 + log z (1+5z)/(4(1−z)) + log(−z log z / D(z)),
//! D(z) = 3(1−z) + (1+z) log z, is the x₂-derivative of φ along the curve
//! where the x₁-derivative vanishes. It is positive on (r, 1), r the root
//! of D in (0, 1). Positivity away from both ends is certified with
//! interval arithmetic; near z = 1 the zero count inside a small circle is
//! obtained from the argument principle.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::spectra::{build_hamiltonian_real, HamiltonianSpec};
use crate::tensor::{Flavor, PairOp, TensorSpace};

/// The dyadic end points of the certified range, as (numerator, 2^30).
pub const CERTIFIED_LO: (i64, i64) = (81_714_053, 1 << 30);
pub const CERTIFIED_HI: (i64, i64) = (1_013_243_800, 1 << 30);

fn inner_denominator(z: Interval, lz: Interval) -> Interval {
    (Interval::point(1.0) - z) * 3.0 + (z + 1.0) * lz
}

/// Naive interval evaluation of w.
fn w_naive(z: Interval) -> Result<Interval> {
    let lz = z.ln()?;
    let one_minus = Interval::point(1.0) - z;
    let a = (lz * (z * 5.0 + 1.0)).checked_div(one_minus * 4.0)?;
    let d = inner_denominator(z, lz);
    let arg = (-(z * lz)).checked_div(d)?;
    Ok(a + arg.ln()? + 1.5)
}

/// Interval evaluation of w′ (hand-differentiated).
fn w_prime_naive(z: Interval) -> Result<Interval> {
    let lz = z.ln()?;
    let one = Interval::point(1.0);
    let om = one - z;
    let n = lz * (z * 5.0 + 1.0);
    let n_prime = (z * 5.0 + 1.0).checked_div(z)? + lz * 5.0;
    let a_prime = n_prime.checked_div(om * 4.0)? + n.checked_div(om.sqr() * 4.0)?;
    let b1 = (lz + 1.0).checked_div(z * lz)?;
    let d = inner_denominator(z, lz);
    let d_prime = lz - 3.0 + (z + 1.0).checked_div(z)?;
    Ok(a_prime + b1 - d_prime.checked_div(d)?)
}

/// Enclosure of w over `z`: the naive enclosure intersected with the
/// mean-value form w(m) + w′(z)(z − m).
pub fn w_of_z(z: Interval) -> Result<Interval> {
    let naive = w_naive(z)?;
    if z.width() == 0.0 {
        return Ok(naive);
    }
    let m = Interval::point(z.mid());
    let centred = w_naive(m)? + w_prime_naive(z)? * (z - m);
    Ok(naive.intersect(&centred).unwrap_or(naive))
}

pub fn w_point(z: f64) -> f64 {
    let lz = z.ln();
    let d = 3.0 * (1.0 - z) + (1.0 + z) * lz;
    1.5 + lz * (1.0 + 5.0 * z) / (4.0 * (1.0 - z)) + (-z * lz / d).ln()
}

pub fn w_complex(z: Complex64) -> Complex64 {
    let lz = z.ln();
    let one = Complex64::new(1.0, 0.0);
    let d = (one - z) * 3.0 + (one + z) * lz;
    1.5 + lz * (one + z * 5.0) / ((one - z) * 4.0) + (-z * lz / d).ln()
}

pub fn w_prime_complex(z: Complex64) -> Complex64 {
    let lz = z.ln();
    let one = Complex64::new(1.0, 0.0);
    let om = one - z;
    let n = lz * (one + z * 5.0);
    let np = (one + z * 5.0) / z + lz * 5.0;
    let d = om * 3.0 + (one + z) * lz;
    let dp = lz - 3.0 + (one + z) / z;
    np / (om * 4.0) + n / (om * om * 4.0) + (lz + 1.0) / (z * lz) - dp / d
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifyReport {
    pub certified: bool,
    pub lo: f64,
    pub hi: f64,
    pub leaves: usize,
    pub max_depth: usize,
    /// First sub-interval that could not be certified at the depth limit.
    pub witness: Option<(f64, f64)>,
}

/// Certifies f > 0 on [lo, hi] by adaptive bisection.
pub fn certify_positive_with<F>(f: F, range: Interval, max_depth: usize) -> Result<CertifyReport>
where
    F: Fn(Interval) -> Result<Interval>,
{
    let mut stack = vec![(range, 0usize)];
    let mut leaves = 0;
    let mut deepest = 0;
    while let Some((iv, depth)) = stack.pop() {
        deepest = deepest.max(depth);
        // Overestimation on wide boxes can push a denominator or log
        // argument across 0; that only counts once the depth is exhausted.
        match f(iv) {
            Ok(v) if v.lo() > 0.0 => {
                leaves += 1;
                continue;
            }
            Err(e @ Error::Domain(_)) if depth >= max_depth => return Err(e),
            Err(Error::Domain(_)) | Ok(_) => {}
            Err(e) => return Err(e),
        }
        if depth >= max_depth {
            return Ok(CertifyReport {
                certified: false,
                lo: range.lo(),
                hi: range.hi(),
                leaves,
                max_depth: deepest,
                witness: Some((iv.lo(), iv.hi())),
            });
        }
        let (a, b) = iv.bisect();
        stack.push((b, depth + 1));
        stack.push((a, depth + 1));
    }
    Ok(CertifyReport { certified: true, lo: range.lo(), hi: range.hi(), leaves, max_depth: deepest, witness: None })
}

/// Certifies w > 0 on [a, b] for rationals a = (p, q), b = (p, q).
pub fn certify_positive(a: (i64, i64), b: (i64, i64), max_depth: usize) -> Result<CertifyReport> {
    let ia = Interval::from_ratio(a.0, a.1)?;
    let ib = Interval::from_ratio(b.0, b.1)?;
    let range = Interval::new(ia.lo(), ib.hi())?;
    certify_positive_with(w_of_z, range, max_depth)
}

/// Encloses the root r of D(z) = 3(1−z) + (1+z) log z in (0.05, 0.1) to
/// the requested width.
pub fn enclose_root_r(width: f64) -> Result<Interval> {
    let d = |z: f64| {
        let iz = Interval::point(z);
        iz.ln().map(|lz| inner_denominator(iz, lz))
    };
    let (mut a, mut b) = (0.05, 0.1);
    if d(a)?.hi() >= 0.0 || d(b)?.lo() <= 0.0 {
        return Err(Error::Verification("D does not change sign on [0.05, 0.1]".into()));
    }
    while b - a > width {
        let m = 0.5 * (a + b);
        let v = d(m)?;
        if v.hi() < 0.0 {
            a = m;
        } else if v.lo() > 0.0 {
            b = m;
        } else {
            break;
        }
    }
    Interval::new(a, b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindingReport {
    pub estimate_re: f64,
    pub estimate_im: f64,
    /// Nearest integer, when the estimate is within 1e−3 of it.
    pub verified: Option<i64>,
    /// Smallest |f| seen at a quadrature node.
    pub min_abs_f: f64,
}

/// (1/2πi)∮ f′/f over |z − c| = radius by double-exponential quadrature
/// with step `h` and nodes k = −n..=n.
pub fn winding_count_with<F, G>(f: F, fp: G, center: Complex64, radius: f64, h: f64, n: usize) -> Result<WindingReport>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    use std::f64::consts::{FRAC_PI_2, PI};
    let mut sum = Complex64::new(0.0, 0.0);
    let mut min_abs: f64 = f64::INFINITY;
    let n = n as i64;
    for k in -n..=n {
        let t = k as f64 * h;
        let s = FRAC_PI_2 * t.sinh();
        let x = s.tanh();
        let weight = h * FRAC_PI_2 * t.cosh() / s.cosh().powi(2);
        if weight == 0.0 || !weight.is_finite() {
            continue;
        }
        let e = Complex64::from_polar(1.0, PI * x);
        let z = center + e * radius;
        let fz = f(z);
        min_abs = min_abs.min(fz.norm());
        if !(fz.norm() > 0.0) || !fz.is_finite() {
            return Err(Error::Domain(format!("contour meets a zero or singularity near {z}")));
        }
        // dz = iπ r e^{iπx} dx, and the 1/(2πi) prefactor leaves r e^{iπx}/2.
        sum += fp(z) / fz * e * (0.5 * radius) * weight;
    }
    let nearest = sum.re.round();
    let verified = ((sum.re - nearest).abs() <= 1e-3 && sum.im.abs() <= 1e-3).then_some(nearest as i64);
    Ok(WindingReport { estimate_re: sum.re, estimate_im: sum.im, verified, min_abs_f: min_abs })
}

pub fn winding_zero_count(center: Complex64, radius: f64, h: f64, n: usize) -> Result<WindingReport> {
    winding_count_with(w_complex, w_prime_complex, center, radius, h, n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixAReport {
    pub certify: CertifyReport,
    pub root_r: (f64, f64),
    pub root_left_of_range: bool,
    pub winding: WindingReport,
}

/// The full positivity argument: certified range, root location and the
/// zero count in the circle |z − 1| = 1/16.
pub fn verify_appendix_a(max_depth: usize) -> Result<AppendixAReport> {
    let certify = certify_positive(CERTIFIED_LO, CERTIFIED_HI, max_depth)?;
    let r = enclose_root_r(1e-12)?;
    let a = Interval::from_ratio(CERTIFIED_LO.0, CERTIFIED_LO.1)?;
    let winding = winding_zero_count(Complex64::new(1.0, 0.0), 1.0 / 16.0, 0.15, 91)?;
    Ok(AppendixAReport {
        certify,
        root_r: (r.lo(), r.hi()),
        root_left_of_range: r.hi() < a.lo(),
        winding,
    })
}

// ---------------------------------------------------------------------
// Q ↔ P equivalence.

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// g₁ with g₁g₁ᵀ = [[0,1],[1,0]] and g₂ with g₂g₂ᵀ = −[[0,1],[1,0]].
pub fn blocks() -> [DMatrix<Complex64>; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        DMatrix::from_row_slice(2, 2, &[c(-s, 0.0), c(0.0, s), c(-s, 0.0), c(0.0, -s)]),
        DMatrix::from_row_slice(2, 2, &[c(-s, 0.0), c(0.0, s), c(s, 0.0), c(0.0, s)]),
    ]
}

/// Antidiagonal M with M_{i,θ−1−i} = (−1)^{S−i} (a phase choice for even θ).
pub fn target_matrix(theta: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(theta, theta);
    for i in 0..theta {
        // (−1)^{S−i} = (−1)^{(θ−1)/2 − i}; for even θ take (−1)^{½} = i.
        let twice = theta as i64 - 1 - 2 * i as i64;
        m[(i, theta - 1 - i)] = Complex64::new(0.0, 1.0).powi(twice as i32);
    }
    m
}

fn embed(theta: usize, choice: &[usize]) -> DMatrix<Complex64> {
    let g = blocks();
    let mut psi = DMatrix::zeros(theta, theta);
    psi[(theta / 2, theta / 2)] = c(1.0, 0.0);
    for (i, &which) in choice.iter().enumerate() {
        let j = theta - 1 - i;
        let b = &g[which];
        psi[(i, i)] = b[(0, 0)];
        psi[(i, j)] = b[(0, 1)];
        psi[(j, i)] = b[(1, 0)];
        psi[(j, j)] = b[(1, 1)];
    }
    psi
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| c(v, 0.0))
}

fn kron_power(m: &DMatrix<Complex64>, n: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for _ in 0..n {
        out = out.kronecker(m);
    }
    out
}

/// ψ with ψψᵀ = M, built from a central 1 and nested g₁/g₂ blocks (θ odd).
pub fn construct_psi(theta: usize) -> Result<DMatrix<Complex64>> {
    if theta % 2 == 0 {
        return Err(Error::Obstructed(format!(
            "θ = {theta} is even: the target is antisymmetric and non-zero, ψψᵀ is symmetric"
        )));
    }
    let s = (theta - 1) / 2;
    let target = target_matrix(theta);
    for code in 0..(1usize << s) {
        let choice: Vec<usize> = (0..s).map(|i| (code >> i) & 1).collect();
        let psi = embed(theta, &choice);
        if (&psi * psi.transpose() - &target).camax() <= 1e-14 {
            return Ok(psi);
        }
    }
    Err(Error::Verification(format!("no block assignment reproduces M for θ = {theta}")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitaryReport {
    pub theta: usize,
    pub n: usize,
    pub obstructed: bool,
    /// ‖ψψᵀ − M‖_max (odd θ).
    pub gram_residual: Option<f64>,
    /// ‖ψ†ψ − 1‖_max.
    pub unitarity_residual: Option<f64>,
    /// ‖(ψ⊗ψ)Q(ψ⊗ψ)⁻¹ − P‖_max on two sites.
    pub pair_residual: Option<f64>,
    /// ‖ψ^{⊗n} H_Q (ψ^{⊗n})⁻¹ − H_P‖_max at generic couplings.
    pub chain_residual: Option<f64>,
    /// Largest difference between the sorted Q and P spectra.
    pub spectrum_residual: Option<f64>,
    /// Even θ: ‖M + Mᵀ‖ (zero: antisymmetric) and ‖M‖ (non-zero).
    pub antisymmetry: Option<(f64, f64)>,
    /// tr(T·Q) and tr(T·P) on two sites: a similarity invariant that
    /// differs exactly when the representations are inequivalent.
    pub trace_witness: (f64, f64),
}

pub fn verify_pq_equivalence(theta: usize, n: usize) -> Result<UnitaryReport> {
    let sp2 = TensorSpace::new(theta, 2)?;
    let t = sp2.pair_matrix(PairOp::Swap, 0, 1);
    let q = sp2.pair_matrix(PairOp::Bar(Flavor::Q), 0, 1);
    let p = sp2.pair_matrix(PairOp::Bar(Flavor::P), 0, 1);
    let trace_witness = ((&t * &q).trace(), (&t * &p).trace());
    let mut report = UnitaryReport {
        theta,
        n,
        obstructed: false,
        gram_residual: None,
        unitarity_residual: None,
        pair_residual: None,
        chain_residual: None,
        spectrum_residual: None,
        antisymmetry: None,
        trace_witness,
    };
    let psi = match construct_psi(theta) {
        Ok(psi) => psi,
        Err(Error::Obstructed(_)) => {
            let m = target_matrix(theta);
            report.obstructed = true;
            report.antisymmetry = Some(((&m + m.transpose()).camax(), m.camax()));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let m = target_matrix(theta);
    report.gram_residual = Some((&psi * psi.transpose() - m).camax());
    let id = DMatrix::<Complex64>::identity(theta, theta);
    report.unitarity_residual = Some((psi.adjoint() * &psi - id).camax());

    // ψ is unitary, so (ψ⊗ψ)⁻¹ = (ψ⊗ψ)†.
    let psi2 = psi.kronecker(&psi);
    let conj_q = &psi2 * to_complex(&q) * psi2.adjoint();
    report.pair_residual = Some((conj_q - to_complex(&p)).camax());

    let (l1, l2) = (0.731, -0.412);
    let hq = build_hamiltonian_real(&HamiltonianSpec::new(theta, n, l1, l2))?;
    let hp = build_hamiltonian_real(&HamiltonianSpec::new(theta, n, l1, l2).with_flavor(Flavor::P))?;
    let psin = kron_power(&psi, n);
    let conj_h = &psin * to_complex(&hq) * psin.adjoint();
    report.chain_residual = Some((conj_h - to_complex(&hp)).camax());
    let mut eq: Vec<f64> = SymmetricEigen::new(hq).eigenvalues.iter().copied().collect();
    let mut ep: Vec<f64> = SymmetricEigen::new(hp).eigenvalues.iter().copied().collect();
    eq.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ep.sort_by(|a, b| a.partial_cmp(b).unwrap());
    report.spectrum_residual = Some(eq.iter().zip(&ep).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    Ok(report)
}

impl UnitaryReport {
    /// Residual gates for odd θ; the obstruction certificate for even θ.
    pub fn passed(&self) -> bool {
        if self.obstructed {
            return matches!(self.antisymmetry, Some((a, m)) if a == 0.0 && m > 0.0)
                && self.trace_witness.0 != self.trace_witness.1;
        }
        let ok = |v: Option<f64>, tol: f64| v.is_some_and(|r| r <= tol);
        ok(self.gram_residual, 1e-14)
            && ok(self.pair_residual, 1e-12)
            && ok(self.chain_residual, 1e-10)
            && ok(self.spectrum_residual, 1e-10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_values() {
        let v = w_of_z(Interval::point(0.5)).unwrap();
        assert!(v.contains(0.003254286626325221760) || (v.mid() - 0.0032542866263252218).abs() < 1e-15);
        assert!(w_of_z(Interval::point(0.9)).unwrap().lo() > 0.0);
        assert!(matches!(w_of_z(Interval::new(0.07, 0.08).unwrap()), Err(Error::Domain(_))));
        assert!(matches!(w_of_z(Interval::point(0.05)), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for z in [c(0.3, 0.1), c(0.95, -0.05), c(1.0 + 1.0 / 16.0, 0.0), c(1.0, 1.0 / 16.0)] {
            let e = 1e-8;
            let fd = (w_complex(z + e) - w_complex(z - e)) / (2.0 * e);
            let an = w_prime_complex(z);
            assert!((fd - an).norm() < 1e-6 * an.norm().max(1.0), "{z}: {fd} vs {an}");
        }
    }

    #[test]
    fn negative_controls() {
        let cube = winding_count_with(
            |z| (z - 1.0).powi(3),
            |z| (z - 1.0).powi(2) * 3.0,
            c(1.0, 0.0),
            1.0 / 16.0,
            0.15,
            91,
        )
        .unwrap();
        assert_eq!(cube.verified, Some(3));
        let r = certify_positive_with(|z| Ok(z - 0.5), Interval::new(0.4, 0.6).unwrap(), 20).unwrap();
        assert!(!r.certified && r.witness.is_some());
    }

    #[test]
    fn psi_for_odd_theta() {
        for theta in [3, 5, 7] {
            let r = verify_pq_equivalence(theta, 2).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        for theta in [2, 4] {
            let r = verify_pq_equivalence(theta, 2).unwrap();
            assert!(r.obstructed && r.passed(), "{r:?}");
        }
    }
}
