//! Branching coefficients b^{n,θ}_{λ,ρ}: multiplicity of the S_n irreducible
//! ρ in the restriction of the Brauer irreducible λ.
//!
//! Exact values come from the recurrence (strip ρ_θ full columns, flipping
//! λ once per column), after which the reduced pair satisfies
//! ρ₁ᵀ+ρ₂ᵀ ≤ θ+1 for θ ≤ 3 and b equals the cell-module number b̃. One-column
//! λ = (1ʲ) are covered for every θ by the odd-parts rule. Everything else
//! is reported as unknown unless the spectral oracle is asked for.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_chars::{dim_o, o_character};
use crate::partitions::{enumerate_lambda_rho, LambdaRhoPair, Partition};
use crate::spectra::{build_hamiltonian_real, line_eigenvalue, HamiltonianSpec};
use crate::tableaux::{cell_branching, cycle_types, dim_sn, permutation_of_cycle_type, sn_character};
use crate::tensor::TensorSpace;

/// A branching coefficient, or an honest "not known by these methods".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BValue {
    Exact(u64),
    /// Only positivity-type information is available for this pair.
    Unknown,
}

impl BValue {
    pub fn exact(self) -> Option<u64> {
        match self {
            BValue::Exact(b) => Some(b),
            BValue::Unknown => None,
        }
    }
}

/// (λ*, ρ*) after removing all ρ_θ full-height columns from ρ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub lambda: Partition,
    pub rho: Partition,
}

impl Reduced {
    /// The defect of the reduced pair, if it is a valid pair at all.
    pub fn k(&self) -> Option<usize> {
        let (l, r) = (self.lambda.size(), self.rho.size());
        (l <= r && (r - l) % 2 == 0).then(|| (r - l) / 2)
    }
}

pub fn reduce_by_recurrence(pair: &LambdaRhoPair, theta: usize) -> Result<Reduced> {
    let m = pair.rho.part(theta - 1);
    let rho = pair.rho.minus_rectangle(theta, m)?;
    let lambda = if m % 2 == 1 {
        pair.lambda.column_flip(theta)?
    } else {
        pair.lambda.clone()
    };
    Ok(Reduced { lambda, rho })
}

/// The odd-parts rule for λ = (1ʲ): b = 1 iff ρ has exactly j odd parts.
pub fn okada_column_rule(j: usize, rho: &Partition) -> u64 {
    u64::from(rho.parts().iter().filter(|&&p| p % 2 == 1).count() == j)
}

fn is_column(lambda: &Partition) -> bool {
    lambda.parts().iter().all(|&p| p == 1)
}

fn check_pair(pair: &LambdaRhoPair, theta: usize) -> Result<()> {
    if pair.lambda.size() + 2 * pair.k != pair.rho.size() || !pair.in_lambda_set(theta) {
        return Err(Error::InvalidInput(format!(
            "({}, {}, {}) is not in Λ_n({theta})",
            pair.lambda, pair.k, pair.rho
        )));
    }
    Ok(())
}

pub fn b_coefficient(pair: &LambdaRhoPair, theta: usize) -> Result<BValue> {
    check_pair(pair, theta)?;
    if theta >= 4 && is_column(&pair.lambda) {
        return Ok(BValue::Exact(okada_column_rule(pair.lambda.len(), &pair.rho)));
    }
    let red = reduce_by_recurrence(pair, theta)?;
    if red.k().is_none() {
        return Ok(BValue::Exact(0));
    }
    let fits = red.rho.column_len(0) + red.rho.column_len(1) <= theta + 1;
    if fits {
        Ok(BValue::Exact(cell_branching(&red.lambda, &red.rho)?))
    } else {
        Ok(BValue::Unknown)
    }
}

/// Positivity exactly as the closed-form criteria state it for θ ∈ {2, 3}.
pub fn is_positive_closed_form(pair: &LambdaRhoPair, theta: usize) -> Result<bool> {
    check_pair(pair, theta)?;
    let l = &pair.lambda;
    let r = &pair.rho;
    let (r1, r2, r3) = (r.part(0), r.part(1), r.part(2));
    match theta {
        2 => Ok(if l.is_empty() {
            r1 % 2 == 0 && r2 % 2 == 0
        } else if l.parts() == [1, 1] {
            r1 % 2 == 1 && r2 % 2 == 1
        } else {
            l.part(0) <= r1 - r2
        }),
        3 => {
            if is_column(l) {
                return Ok(okada_column_rule(l.len(), r) == 1);
            }
            let odd = |x: usize| x % 2 == 1;
            if l.len() == 1 && ((r2 == r3 && odd(r2)) || (r1 == r2 && odd(r1))) {
                return Ok(false);
            }
            if l.len() == 2 && l.part(1) == 1 && ((r2 == r3 && !odd(r2)) || (r1 == r2 && !odd(r1))) {
                return Ok(false);
            }
            Ok(l.part(0) <= r1 - r3)
        }
        _ => Err(Error::InvalidInput(format!(
            "closed-form positivity is stated for θ ∈ {{2,3}} only, got {theta}"
        ))),
    }
}

/// P_n(θ) with multiplicities, from the exact rules. Fails with
/// `NotProven` if any coefficient is unknown (use the oracle instead).
pub fn enumerate_pn(n: usize, theta: usize) -> Result<Vec<(LambdaRhoPair, u64)>> {
    let mut out = Vec::new();
    for pair in enumerate_lambda_rho(n, theta) {
        match b_coefficient(&pair, theta)? {
            BValue::Exact(0) => {}
            BValue::Exact(b) => out.push((pair, b)),
            BValue::Unknown => {
                return Err(Error::NotProven(format!(
                    "b for ({}, {}, {}) at θ = {theta} is not covered by the exact rules",
                    pair.lambda, pair.k, pair.rho
                )))
            }
        }
    }
    Ok(out)
}

/// P_n(θ) with unknown coefficients filled in by spectral extraction.
pub fn enumerate_pn_with_oracle(n: usize, theta: usize, seed: u64) -> Result<Vec<(LambdaRhoPair, u64)>> {
    match enumerate_pn(n, theta) {
        Err(Error::NotProven(_)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (l1, l2) = generic_point(&mut rng);
            Ok(spectral_extract_branching(n, theta, l1, l2)?
                .into_iter()
                .filter(|(_, b)| *b > 0)
                .collect())
        }
        other => other,
    }
}

fn generic_point<R: Rng>(rng: &mut R) -> (f64, f64) {
    (rng.gen_range(0.3..1.7), rng.gen_range(-1.7..-0.3) * if rng.gen() { 1.0 } else { -1.0 })
}

/// Probe group elements: identity, two generic rotations and two
/// determinant −1 elements, as (matrix, eigenvalues).
fn probe_elements(theta: usize) -> Vec<(DMatrix<f64>, Vec<Complex64>)> {
    let r = theta / 2;
    let build = |angles: &[f64], reflect: bool| {
        let mut g = DMatrix::identity(theta, theta);
        let mut ev = Vec::new();
        for (j, &phi) in angles.iter().enumerate() {
            let (c, s) = (phi.cos(), phi.sin());
            let (a, b) = (2 * j, 2 * j + 1);
            let last_even_plane = theta % 2 == 0 && j == r - 1;
            if reflect && last_even_plane {
                g[(b, b)] = -1.0;
                ev.push(Complex64::new(1.0, 0.0));
                ev.push(Complex64::new(-1.0, 0.0));
            } else {
                g[(a, a)] = c;
                g[(a, b)] = -s;
                g[(b, a)] = s;
                g[(b, b)] = c;
                ev.push(Complex64::from_polar(1.0, phi));
                ev.push(Complex64::from_polar(1.0, -phi));
            }
        }
        if theta % 2 == 1 {
            let last = if reflect { -1.0 } else { 1.0 };
            g[(theta - 1, theta - 1)] = last;
            ev.push(Complex64::new(last, 0.0));
        }
        (g, ev)
    };
    let a1: Vec<f64> = (0..r).map(|j| 0.71 + 0.53 * j as f64).collect();
    let a2: Vec<f64> = (0..r).map(|j| 1.93 + 0.37 * j as f64).collect();
    vec![build(&[], false), build(&a1, false), build(&a2, false), build(&a1, true), build(&a2, true)]
    .into_iter()
    .map(|(g, ev)| if ev.len() < theta { (DMatrix::identity(theta, theta), vec![Complex64::new(1.0, 0.0); theta]) } else { (g, ev) })
    .collect()
}

/// g^{⊗n}·σ·v, σ permuting tensor factors.
fn apply_probe(sp: &TensorSpace, g: &DMatrix<f64>, sigma: &[usize], v: &[f64]) -> Vec<f64> {
    let n = sp.n;
    let mut w = vec![0.0; v.len()];
    for (idx, wi) in w.iter_mut().enumerate() {
        let d = sp.digits(idx);
        let permuted: Vec<usize> = (0..n).map(|s| d[sigma[s]]).collect();
        *wi = v[sp.index(&permuted)];
    }
    for site in 0..n {
        let stride = sp.stride(site);
        let mut out = vec![0.0; w.len()];
        for (idx, o) in out.iter_mut().enumerate() {
            let ds = sp.digit(idx, site);
            let base = idx - ds * stride;
            *o = (0..sp.theta).map(|c| g[(ds, c)] * w[base + c * stride]).sum();
        }
        w = out;
    }
    w
}

/// Recovers every b in Λ_n(θ) from the dense spectrum of H(L₁, L₂).
///
/// Each eigenspace dimension is divided by d^O_λ·d^S_ρ. Accidental
/// coincidences of predicted eigenvalues are removed by resampling
/// (L₁, L₂); coincidences forced by equal contents are resolved by
/// probe traces tr(Π_E g^{⊗n}σ) = Σ_c b_c χ^O_{λ_c}(g) χ^S_{ρ_c}(σ).
pub fn spectral_extract_branching(
    n: usize,
    theta: usize,
    l1: f64,
    l2: f64,
) -> Result<Vec<(LambdaRhoPair, u64)>> {
    let sp = TensorSpace::new(theta, n)?;
    let candidates = enumerate_lambda_rho(n, theta);
    let dims: Vec<(f64, f64)> = candidates
        .iter()
        .map(|c| Ok((dim_o(&c.lambda, theta)? as f64, dim_sn(&c.rho)? as f64)))
        .collect::<Result<_>>()?;
    let key = |c: &LambdaRhoPair| {
        let cas = c.lambda.content_sum() - (c.k as i64) * (theta as i64 - 1);
        (c.rho.content_sum(), cas)
    };
    let tol = 1e-8 * n as f64;

    // Pick (L₁, L₂) with no accidental coincidences.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut point = (l1, l2);
    let mut groups = Vec::new();
    for attempt in 0..=10 {
        groups = group_candidates(&candidates, theta, point, tol);
        let accidental = groups.iter().any(|g| {
            let k0 = key(&candidates[g[0]]);
            g.iter().any(|&i| key(&candidates[i]) != k0)
        });
        if !accidental {
            break;
        }
        if attempt == 10 {
            return Err(Error::Unresolved(format!(
                "eigenvalue coincidences persist after resampling at n = {n}, θ = {theta}"
            )));
        }
        point = generic_point(&mut rng);
    }

    let spec = HamiltonianSpec::new(theta, n, point.0, point.1);
    let h = build_hamiltonian_real(&spec)?;
    let needs_vectors = groups.iter().any(|g| g.len() > 1);
    let (values, vectors) = if needs_vectors {
        let e = SymmetricEigen::new(h);
        (e.eigenvalues.iter().copied().collect::<Vec<_>>(), Some(e.eigenvectors))
    } else {
        (h.symmetric_eigenvalues().iter().copied().collect(), None)
    };

    // Assign each dense eigenvalue to its predicted group.
    let predicted: Vec<f64> = groups
        .iter()
        .map(|g| line_eigenvalue(&candidates[g[0]], theta, point.0, point.1))
        .collect();
    let scale = 1.0 + point.0.abs() + point.1.abs();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); groups.len()];
    for (i, &e) in values.iter().enumerate() {
        let (best, dist) = predicted
            .iter()
            .enumerate()
            .map(|(gi, &p)| (gi, (p - e).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .ok_or_else(|| Error::Unresolved("no candidates".into()))?;
        if dist > 1e-7 * scale * n as f64 {
            return Err(Error::Verification(format!(
                "dense eigenvalue {e} matches no (λ, k, ρ) line (nearest off by {dist:e})"
            )));
        }
        members[best].push(i);
    }

    let mut b = vec![0u64; candidates.len()];
    let probes = probe_elements(theta);
    let classes = cycle_types(n);
    for (gi, group) in groups.iter().enumerate() {
        let count = members[gi].len() as f64;
        if group.len() == 1 {
            let c = group[0];
            let v = count / (dims[c].0 * dims[c].1);
            b[c] = snap(v)?;
            continue;
        }
        let vecs = vectors.as_ref().expect("eigenvectors computed for collisions");
        let rows = probes.len() * classes.len();
        let mut a = DMatrix::zeros(rows, group.len());
        let mut rhs = DVector::zeros(rows);
        let mut row = 0;
        for (g, ev) in &probes {
            for mu in &classes {
                let sigma = permutation_of_cycle_type(mu);
                let mut tr = 0.0;
                for &i in &members[gi] {
                    let v = vecs.column(i);
                    let w = apply_probe(&sp, g, &sigma, v.as_slice());
                    tr += v.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>();
                }
                rhs[row] = tr;
                for (col, &c) in group.iter().enumerate() {
                    let chi_o = o_character(&candidates[c].lambda, ev)?.re;
                    let chi_s = sn_character(&candidates[c].rho, mu)? as f64;
                    a[(row, col)] = chi_o * chi_s;
                }
                row += 1;
            }
        }
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.max();
        if svd.singular_values.min() < 1e-9 * smax {
            return Err(Error::Unresolved(format!(
                "probe system is rank deficient for a cluster of {} candidates",
                group.len()
            )));
        }
        let sol = svd
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::Unresolved(e.to_string()))?;
        for (col, &c) in group.iter().enumerate() {
            b[c] = snap(sol[col])?;
        }
        // The rounded solution must reproduce the eigenspace dimension.
        let dim: f64 = group.iter().map(|&c| b[c] as f64 * dims[c].0 * dims[c].1).sum();
        if (dim - count).abs() > 0.5 {
            return Err(Error::Unresolved(format!(
                "cluster dimension {count} not reproduced by solved multiplicities ({dim})"
            )));
        }
    }
    Ok(candidates.into_iter().zip(b).collect())
}

fn snap(v: f64) -> Result<u64> {
    let r = v.round();
    if (v - r).abs() >= 0.01 || r < 0.0 {
        return Err(Error::Unresolved(format!("multiplicity estimate {v} is not an integer")));
    }
    Ok(r as u64)
}

/// Groups candidate indices whose predicted eigenvalues agree within `tol`.
fn group_candidates(cands: &[LambdaRhoPair], theta: usize, point: (f64, f64), tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<(f64, usize)> = cands
        .iter()
        .enumerate()
        .map(|(i, c)| (line_eigenvalue(c, theta, point.0, point.1), i))
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (e, i) in order {
        if e - last <= tol {
            groups.last_mut().unwrap().push(i);
        } else {
            groups.push(vec![i]);
        }
        last = e;
    }
    groups
}

/// b for every pair, as a map, using exact rules where available.
pub fn branching_table(n: usize, theta: usize) -> Result<BTreeMap<LambdaRhoPair, BValue>> {
    enumerate_lambda_rho(n, theta)
        .into_iter()
        .map(|p| {
            let b = b_coefficient(&p, theta)?;
            Ok((p, b))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn pair(l: &[usize], r: &[usize]) -> LambdaRhoPair {
        LambdaRhoPair::new(p(l), p(r)).unwrap()
    }

    #[test]
    fn stated_examples() {
        assert_eq!(b_coefficient(&pair(&[2], &[3, 1]), 2).unwrap(), BValue::Exact(1));
        assert_eq!(b_coefficient(&pair(&[], &[3, 1]), 2).unwrap(), BValue::Exact(0));
        assert_eq!(b_coefficient(&pair(&[1, 1], &[2, 1, 1]), 4).unwrap(), BValue::Exact(1));
        assert!(is_positive_closed_form(&pair(&[1, 1], &[3, 3]), 2).unwrap());
        assert!(!is_positive_closed_form(&pair(&[4], &[3, 3, 0]), 3).unwrap());
        assert!(!is_positive_closed_form(&pair(&[2, 1], &[3, 2, 2]), 3).unwrap());
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_by_recurrence(&pair(&[2], &[4, 2]), 2).unwrap();
        assert_eq!(r, Reduced { lambda: p(&[2]), rho: p(&[2]) });
        let r = reduce_by_recurrence(&pair(&[2], &[4, 3, 3]), 3).unwrap();
        assert_eq!(r, Reduced { lambda: p(&[2, 1]), rho: p(&[1]) });
        assert_eq!(r.k(), None);
    }

    #[test]
    fn pn_two_sites() {
        let got = enumerate_pn(2, 2).unwrap();
        let want = vec![(pair(&[2], &[2]), 1), (pair(&[1, 1], &[1, 1]), 1), (pair(&[], &[2]), 1)];
        for w in &want {
            assert!(got.contains(w), "missing {w:?}");
        }
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn extraction_two_sites() {
        let mut got = spectral_extract_branching(2, 2, 0.7, 0.3).unwrap();
        got.retain(|(_, b)| *b > 0);
        let mut want = enumerate_pn(2, 2).unwrap();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }
}
