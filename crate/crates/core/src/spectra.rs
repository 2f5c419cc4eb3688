//! Hamiltonians on (ℂ^θ)^{⊗n}, their exact spectra from the (λ, k, ρ)
//! decomposition, and dense-trace partition functions.
//!
//! H = −Σ_{x<y} (L₁ T_{xy} + L₂ B_{xy}) − n·h·Σ_x W_x with B = Q or P, and
//! Z = tr e^{−H/n}. The field is scaled by n so that the field enters Z as
//! e^{hΣW}, i.e. the group element e^{hW} of the character formula.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::branching;
use crate::error::{Error, Result};
use crate::group_chars::{char_o_field, dim_o, FieldDirection};
use crate::partitions::{LambdaRhoPair, Partition};
use crate::tableaux::{dim_sn, ln_dim_sn};
use crate::tensor::{Flavor, PairOp, TensorSpace};

/// The three ways of writing the two coupling constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Params {
    Canonical { l1: f64, l2: f64 },
    /// Spin-½ XXZ couplings (θ = 2).
    Xxz { k1: f64, k2: f64 },
    /// Spin-1 bilinear–biquadratic couplings (θ = 3).
    Blbq { j1: f64, j2: f64 },
}

/// Canonical couplings plus the per-edge constant the rewrite drops:
/// H_original = H_canonical + constant_shift · (number of edges).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Canonical {
    pub l1: f64,
    pub l2: f64,
    pub constant_shift: f64,
}

pub fn convert_parameters(theta: usize, params: Params) -> Result<Canonical> {
    match params {
        Params::Canonical { l1, l2 } => Ok(Canonical { l1, l2, constant_shift: 0.0 }),
        Params::Xxz { k1, k2 } => {
            if theta != 2 {
                return Err(Error::InvalidInput(format!("XXZ couplings need θ = 2, got {theta}")));
            }
            // K₁(S¹S¹+S³S³) + K₂S²S² = ¼[(K₁+K₂)T + (K₁−K₂)Q − K₁].
            Ok(Canonical { l1: (k1 + k2) / 4.0, l2: (k1 - k2) / 4.0, constant_shift: k1 / 4.0 })
        }
        Params::Blbq { j1, j2 } => {
            if theta != 3 {
                return Err(Error::InvalidInput(format!("BLBQ couplings need θ = 3, got {theta}")));
            }
            // J₁ S·S + J₂ (S·S)² = J₁T + (J₂−J₁)P + J₂.
            Ok(Canonical { l1: j1, l2: j2 - j1, constant_shift: -j2 })
        }
    }
}

/// 1/√2-normalised spin-1 S^y in the basis (+1, 0, −1).
fn spin_one_y() -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, s);
    let z = Complex64::new(0.0, 0.0);
    DMatrix::from_row_slice(3, 3, &[z, -i, z, i, z, -i, z, i, z])
}

/// The default field generator: [[0, i], [−i, 0]] for θ = 2, spin-1 S^y for
/// θ = 3, and unit-weight 2×2 blocks otherwise.
pub fn default_field_matrix(theta: usize) -> DMatrix<Complex64> {
    match theta {
        3 => spin_one_y(),
        _ => field_matrix(&FieldDirection::default_for(theta)),
    }
}

/// Block-diagonal skew-symmetric Hermitian W with eigenvalues ±wⱼ (and 0 for
/// odd θ).
pub fn field_matrix(dir: &FieldDirection) -> DMatrix<Complex64> {
    let mut w = DMatrix::zeros(dir.theta, dir.theta);
    for (j, &wj) in dir.weights.iter().enumerate() {
        w[(2 * j, 2 * j + 1)] = Complex64::new(0.0, wj);
        w[(2 * j + 1, 2 * j)] = Complex64::new(0.0, -wj);
    }
    w
}

#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    pub theta: usize,
    pub n: usize,
    pub l1: f64,
    pub l2: f64,
    pub h: f64,
    pub flavor: Flavor,
    pub field: DMatrix<Complex64>,
}

impl HamiltonianSpec {
    pub fn new(theta: usize, n: usize, l1: f64, l2: f64) -> Self {
        HamiltonianSpec {
            theta,
            n,
            l1,
            l2,
            h: 0.0,
            flavor: Flavor::Q,
            field: default_field_matrix(theta),
        }
    }

    pub fn with_field(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_flavor(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let w = &self.field;
        if w.nrows() != self.theta || w.ncols() != self.theta {
            return Err(Error::InvalidInput("field matrix must be θ×θ".into()));
        }
        if (w + w.transpose()).camax() > 1e-14 {
            return Err(Error::InvalidInput("field matrix must satisfy Wᵀ = −W".into()));
        }
        if (w - w.adjoint()).camax() > 1e-14 {
            return Err(Error::InvalidInput("field matrix must be Hermitian".into()));
        }
        Ok(())
    }
}

/// The zero-field part −Σ_{x<y}(L₁T + L₂B) as a real symmetric matrix.
pub fn build_hamiltonian_real(spec: &HamiltonianSpec) -> Result<DMatrix<f64>> {
    let sp = TensorSpace::new(spec.theta, spec.n)?;
    let mut h = DMatrix::zeros(sp.dim(), sp.dim());
    for x in 0..spec.n {
        for y in x + 1..spec.n {
            sp.accumulate_pair(PairOp::Swap, x, y, -spec.l1, &mut h);
            sp.accumulate_pair(PairOp::Bar(spec.flavor), x, y, -spec.l2, &mut h);
        }
    }
    Ok(h)
}

/// The full Hermitian Hamiltonian including −n·h·ΣW.
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<DMatrix<Complex64>> {
    spec.validate()?;
    let real = build_hamiltonian_real(spec)?;
    let mut h = real.map(|v| Complex64::new(v, 0.0));
    if spec.h != 0.0 {
        let sp = TensorSpace::new(spec.theta, spec.n)?;
        let coef = Complex64::new(-(spec.n as f64) * spec.h, 0.0);
        for site in 0..spec.n {
            let stride = sp.stride(site);
            for b in 0..sp.dim() {
                let bs = sp.digit(b, site);
                for a_s in 0..spec.theta {
                    let w = spec.field[(a_s, bs)];
                    if w != Complex64::new(0.0, 0.0) {
                        let a = b - bs * stride + a_s * stride;
                        h[(a, b)] += coef * w;
                    }
                }
            }
        }
    }
    Ok(h)
}

/// (A acting on `site`)·M.
fn apply_site_left(sp: &TensorSpace, site: usize, a: &DMatrix<Complex64>, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let stride = sp.stride(site);
    let t = sp.theta;
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        let col = m.column(j);
        let mut oc = out.column_mut(j);
        for r in 0..m.nrows() {
            let rs = sp.digit(r, site);
            let base = r - rs * stride;
            let mut s = Complex64::new(0.0, 0.0);
            for c in 0..t {
                s += a[(rs, c)] * col[base + c * stride];
            }
            oc[r] = s;
        }
    }
    out
}

/// All eigenvalues of H (sorted ascending).
///
/// With a field, H commutes with ΣW; the matrix is rotated into the
/// site-wise eigenbasis of W, where it is block diagonal by total weight,
/// and each block is diagonalised separately.
pub fn dense_spectrum(spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = if spec.h == 0.0 {
        spec.validate()?;
        build_hamiltonian_real(spec)?.symmetric_eigenvalues().iter().copied().collect()
    } else {
        field_sector_spectrum(spec)?
    };
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ev)
}

fn field_sector_spectrum(spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    let h = build_hamiltonian(spec)?;
    let sp = TensorSpace::new(spec.theta, spec.n)?;
    let weig = SymmetricEigen::new(spec.field.clone());
    let v_adj = weig.eigenvectors.adjoint();
    let weights: Vec<f64> = weig.eigenvalues.iter().copied().collect();
    // H' = U†HU with U = V^{⊗n}: X = U†H, then H' = (U†X†)†.
    let mut x = h;
    for s in 0..spec.n {
        x = apply_site_left(&sp, s, &v_adj, &x);
    }
    let mut y = x.adjoint();
    for s in 0..spec.n {
        y = apply_site_left(&sp, s, &v_adj, &y);
    }
    let rotated = y.adjoint();
    let mut sectors: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for idx in 0..sp.dim() {
        let m: f64 = (0..spec.n).map(|s| weights[sp.digit(idx, s)]).sum();
        sectors.entry((m * 1e6).round() as i64).or_default().push(idx);
    }
    let scale = rotated.camax().max(1.0);
    let mut leak: f64 = 0.0;
    let mut ev = Vec::with_capacity(sp.dim());
    for (key, idx) in &sectors {
        for (other, jdx) in &sectors {
            if other != key {
                for &i in idx {
                    for &j in jdx {
                        leak = leak.max(rotated[(i, j)].norm());
                    }
                }
            }
        }
        let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| rotated[(idx[r], idx[c])]);
        let e = SymmetricEigen::new(block);
        ev.extend(e.eigenvalues.iter().copied());
    }
    if leak > 1e-9 * scale {
        return Err(Error::Verification(format!(
            "field does not commute with the Hamiltonian (off-sector entry {leak:e})"
        )));
    }
    Ok(ev)
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// log tr e^{−H/n} from the dense spectrum.
pub fn log_z_direct(spec: &HamiltonianSpec) -> Result<f64> {
    let ev = dense_spectrum(spec)?;
    let n = spec.n as f64;
    Ok(log_sum_exp(ev.iter().map(|e| -e / n)))
}

pub fn z_direct(spec: &HamiltonianSpec) -> Result<f64> {
    log_z_direct(spec).map(f64::exp)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralLine {
    pub lambda: Partition,
    pub k: usize,
    pub rho: Partition,
    pub b: u64,
    pub d_o: u128,
    pub d_sn: u128,
    pub eigenvalue: f64,
    pub multiplicity: u128,
}

/// −(L₁+L₂)c(ρ) + L₂[c(λ) + k(1−θ)].
pub fn line_eigenvalue(pair: &LambdaRhoPair, theta: usize, l1: f64, l2: f64) -> f64 {
    let c_rho = pair.rho.content_sum() as f64;
    let cas = pair.lambda.content_sum() as f64 + pair.k as f64 * (1.0 - theta as f64);
    -(l1 + l2) * c_rho + l2 * cas
}

/// Lines for a given table of (pair, b) with b > 0.
pub fn lines_from_table(
    table: &[(LambdaRhoPair, u64)],
    theta: usize,
    l1: f64,
    l2: f64,
) -> Result<Vec<SpectralLine>> {
    table
        .iter()
        .filter(|(_, b)| *b > 0)
        .map(|(pair, b)| {
            let d_o = dim_o(&pair.lambda, theta)?;
            let d_sn = dim_sn(&pair.rho)?;
            Ok(SpectralLine {
                lambda: pair.lambda.clone(),
                k: pair.k,
                rho: pair.rho.clone(),
                b: *b,
                d_o,
                d_sn,
                eigenvalue: line_eigenvalue(pair, theta, l1, l2),
                multiplicity: d_o * (*b as u128) * d_sn,
            })
        })
        .collect()
}

/// One line per (λ, k, ρ) ∈ P_n(θ).
pub fn spectral_lines(n: usize, theta: usize, l1: f64, l2: f64) -> Result<Vec<SpectralLine>> {
    let table = branching::enumerate_pn(n, theta)?;
    lines_from_table(&table, theta, l1, l2)
}

/// log Z from the decomposition, with χ_λ(e^{hW}) in place of d^O_λ.
pub fn log_z_decomposed_with(
    n: usize,
    theta: usize,
    l1: f64,
    l2: f64,
    h: f64,
    dir: &FieldDirection,
) -> Result<f64> {
    let table = branching::enumerate_pn(n, theta)?;
    log_z_from_table(&table, n, theta, l1, l2, h, dir)
}

/// ln(χ_λ(e^{hW})·b·d^S_ρ), with d^S_ρ taken in log form so any n works.
fn ln_weight(lambda: &Partition, rho: &Partition, b: u64, theta: usize, h: f64, dir: &FieldDirection) -> Result<f64> {
    let chi = if h == 0.0 {
        dim_o(lambda, theta)? as f64
    } else {
        char_o_field(lambda, theta, h, dir)?
    };
    Ok(chi.ln() + (b as f64).ln() + ln_dim_sn(rho))
}

/// log Σ χ_λ(e^{hW})·b·d^S_ρ·e^{−E/n} over a table of (pair, b).
pub fn log_z_from_table(
    table: &[(LambdaRhoPair, u64)],
    n: usize,
    theta: usize,
    l1: f64,
    l2: f64,
    h: f64,
    dir: &FieldDirection,
) -> Result<f64> {
    let terms = table
        .iter()
        .filter(|(_, b)| *b > 0)
        .map(|(pair, b)| {
            let e = line_eigenvalue(pair, theta, l1, l2);
            Ok(ln_weight(&pair.lambda, &pair.rho, *b, theta, h, dir)? - e / n as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(log_sum_exp(terms.iter().copied()))
}

pub fn log_z_decomposed(n: usize, theta: usize, l1: f64, l2: f64, h: f64) -> Result<f64> {
    log_z_decomposed_with(n, theta, l1, l2, h, &FieldDirection::default_for(theta))
}

pub fn z_decomposed(n: usize, theta: usize, l1: f64, l2: f64, h: f64) -> Result<f64> {
    log_z_decomposed(n, theta, l1, l2, h).map(f64::exp)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TotalSpin {
    /// Character-weighted line sum.
    pub character: f64,
    /// Dense trace, when the tensor space fits under the cap.
    pub dense: Option<f64>,
}

/// tr(e^{(h/n)ΣW} e^{−H/n}) / Z, computed both ways.
pub fn total_spin_observable(n: usize, theta: usize, l1: f64, l2: f64, h: f64) -> Result<TotalSpin> {
    if !(theta == 2 || theta == 3) {
        return Err(Error::InvalidInput(format!("total spin needs θ ∈ {{2,3}}, got {theta}")));
    }
    let hn = h / n as f64;
    let character =
        (log_z_decomposed(n, theta, l1, l2, hn)? - log_z_decomposed(n, theta, l1, l2, 0.0)?).exp();
    let dense = match TensorSpace::new(theta, n) {
        Ok(_) => {
            let base = HamiltonianSpec::new(theta, n, l1, l2);
            let with = base.clone().with_field(hn);
            Some((log_z_direct(&with)? - log_z_direct(&base)?).exp())
        }
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(TotalSpin { character, dense })
}

/// cosh(h y₁*) for θ = 2, sinh(h y₁*)/(h y₁*) for θ = 3.
pub fn total_spin_limit(theta: usize, h: f64, y1star: f64) -> Result<f64> {
    let x = h * y1star;
    match theta {
        2 => Ok(x.cosh()),
        3 => Ok(if x == 0.0 { 1.0 } else { x.sinh() / x }),
        _ => Err(Error::InvalidInput(format!("total spin limit needs θ ∈ {{2,3}}, got {theta}"))),
    }
}

/// All perfect matchings of {0..n}.
pub fn pairings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(rest: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        for (i, &other) in tail.iter().enumerate() {
            let remaining: Vec<usize> =
                tail.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            cur.push((first, other));
            go(&remaining, cur, out);
            cur.pop();
        }
    }
    let sites: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    go(&sites, &mut Vec::new(), &mut out);
    out
}

/// Σ over pairings of ⊗ (Σ_a |a,a⟩) for Q, or of the signed singlets
/// Σ_a (−1)^{S−a}|a,−a⟩ for P (odd θ only, where the singlet is symmetric).
pub fn dimer_ground_state(n: usize, theta: usize, flavor: Flavor) -> Result<DVector<f64>> {
    if n % 2 != 0 {
        return Err(Error::InvalidInput(format!("dimer states need even n, got {n}")));
    }
    if flavor == Flavor::P && theta % 2 == 0 {
        return Err(Error::InvalidInput(
            "the P-flavour singlet is antisymmetric for even θ; dimer sums need odd θ".into(),
        ));
    }
    let sp = TensorSpace::new(theta, n)?;
    let mut v = DVector::zeros(sp.dim());
    let half = n / 2;
    for pairing in pairings(n) {
        let combos = theta.pow(half as u32);
        for code in 0..combos {
            let mut digits = vec![0; n];
            let mut c = code;
            let mut sign = 1.0;
            for &(x, y) in &pairing {
                let i = c % theta;
                c /= theta;
                digits[x] = i;
                match flavor {
                    Flavor::Q => digits[y] = i,
                    Flavor::P => {
                        digits[y] = theta - 1 - i;
                        if i % 2 == 1 {
                            sign = -sign;
                        }
                    }
                }
            }
            v[sp.index(&digits)] += sign;
        }
    }
    Ok(v)
}

/// Lowest line eigenvalue, attained at (∅, n/2, (n)) when L₁+L₂ > 0, L₂ > 0.
pub fn dimer_eigenvalue(n: usize, theta: usize, l1: f64, l2: f64) -> f64 {
    let pair = LambdaRhoPair { lambda: Partition::empty(), k: n / 2, rho: Partition::row(n) };
    line_eigenvalue(&pair, theta, l1, l2)
}

/// ⊗(|½⟩ ± i|−½⟩) for θ = 2.
pub fn ising_product_states(n: usize) -> Result<[DVector<Complex64>; 2]> {
    let sp = TensorSpace::new(2, n)?;
    let make = |s: f64| {
        DVector::from_fn(sp.dim(), |idx, _| {
            let downs = (0..n).filter(|&site| sp.digit(idx, site) == 1).count();
            Complex64::new(0.0, s).powu(downs as u32)
        })
    };
    Ok([make(1.0), make(-1.0)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_spectrum() {
        let (l1, l2) = (0.7, 0.3);
        let ev = dense_spectrum(&HamiltonianSpec::new(2, 2, l1, l2)).unwrap();
        let mut want = vec![-l1 - 2.0 * l2, -l1, -l1, l1];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn small_partition_functions() {
        let z = z_direct(&HamiltonianSpec::new(2, 2, 1.0, 1.0)).unwrap();
        let want = 1.5f64.exp() + 2.0 * 0.5f64.exp() + (-0.5f64).exp();
        assert!((z - want).abs() < 1e-12 * want);
        assert!((z_direct(&HamiltonianSpec::new(3, 3, 0.0, 0.0)).unwrap() - 27.0).abs() < 1e-11);
        assert!((z_decomposed(3, 3, 0.0, 0.0, 0.0).unwrap() - 27.0).abs() < 1e-11);
    }

    #[test]
    fn conversions() {
        let c = convert_parameters(2, Params::Xxz { k1: 4.0, k2: 4.0 }).unwrap();
        assert_eq!((c.l1, c.l2), (2.0, 0.0));
        let c = convert_parameters(3, Params::Blbq { j1: 0.0, j2: 16f64.ln() }).unwrap();
        assert_eq!((c.l1, c.l2), (0.0, 16f64.ln()));
        assert!(convert_parameters(3, Params::Xxz { k1: 1.0, k2: 1.0 }).is_err());
    }

    #[test]
    fn field_matrices_are_skew() {
        for theta in 2..=6 {
            let spec = HamiltonianSpec::new(theta, 1, 0.0, 0.0);
            spec.validate().unwrap();
        }
    }

    #[test]
    fn dimer_two_sites() {
        let v = dimer_ground_state(2, 2, Flavor::Q).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 0.0, 0.0, 1.0]);
    }
}
