//! Dimensions and characters of O(θ), SO(θ) and GL(θ).
//!
//! O(θ) characters are evaluated from the eigenvalues of the group element
//! with the Koike–Terada determinant
//! `o_λ = det(h_{λᵢ−i+j} − h_{λᵢ−i−j})`, valid for every λ with
//! λ₁ᵀ + λ₂ᵀ ≤ θ and for elements of either determinant.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Positive half of the spectrum of the skew-symmetric field generator W:
/// W has eigenvalues ±wᵢ, plus a 0 when θ is odd.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDirection {
    pub theta: usize,
    pub weights: Vec<f64>,
}

impl FieldDirection {
    pub fn new(theta: usize, mut weights: Vec<f64>) -> Result<Self> {
        if weights.len() != theta / 2 {
            return Err(Error::InvalidInput(format!(
                "θ = {theta} needs {} weights, got {}",
                theta / 2,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidInput("weights must be non-negative".into()));
        }
        weights.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(FieldDirection { theta, weights })
    }

    /// (1, 0, …, 0).
    pub fn default_for(theta: usize) -> Self {
        let mut weights = vec![0.0; theta / 2];
        if let Some(w) = weights.first_mut() {
            *w = 1.0;
        }
        FieldDirection { theta, weights }
    }

    /// Eigenvalues of e^{hW}.
    pub fn exp_eigenvalues(&self, h: f64) -> Vec<Complex64> {
        let mut ev = Vec::with_capacity(self.theta);
        for &w in &self.weights {
            ev.push(Complex64::new((h * w).exp(), 0.0));
            ev.push(Complex64::new((-h * w).exp(), 0.0));
        }
        if self.theta % 2 == 1 {
            ev.push(Complex64::new(1.0, 0.0));
        }
        ev
    }
}

type Q = Ratio<i128>;

/// Weyl dimension of the SO(θ) irreducible with highest weight λ (at most
/// ⌊θ/2⌋ rows).
pub fn dim_so(lambda: &Partition, theta: usize) -> Result<u128> {
    let r = theta / 2;
    if lambda.len() > r {
        return Err(Error::InvalidInput(format!(
            "{lambda} has more than ⌊θ/2⌋ = {r} rows"
        )));
    }
    // Doubled shifted weights keep everything integral for odd θ.
    let odd = theta % 2 == 1;
    let shift = |i: usize| -> i128 {
        let base = 2 * (r - 1 - i) as i128;
        if odd {
            base + 1
        } else {
            base
        }
    };
    let mut d = Q::from_integer(1);
    for i in 0..r {
        let li = 2 * lambda.part(i) as i128 + shift(i);
        let di = shift(i);
        for j in i + 1..r {
            let lj = 2 * lambda.part(j) as i128 + shift(j);
            let dj = shift(j);
            d *= Q::new(li * li - lj * lj, di * di - dj * dj);
        }
        if odd {
            d *= Q::new(li, di);
        }
    }
    debug_assert!(d.is_integer());
    Ok(d.to_integer() as u128)
}

/// Dimension of the O(θ) irreducible labelled by λ (λ₁ᵀ + λ₂ᵀ ≤ θ).
pub fn dim_o(lambda: &Partition, theta: usize) -> Result<u128> {
    let mu = so_label(lambda, theta)?;
    let d = dim_so(&mu, theta)?;
    if theta % 2 == 0 && mu.len() == theta / 2 && theta > 0 {
        Ok(2 * d)
    } else {
        Ok(d)
    }
}

/// The λ with at most θ/2 rows whose SO restriction matches that of the
/// O(θ) label (flipping the first column when λ₁ᵀ > θ/2).
pub fn so_label(lambda: &Partition, theta: usize) -> Result<Partition> {
    if !lambda.is_o_admissible(theta) {
        return Err(Error::InvalidInput(format!(
            "{lambda} is not an O({theta}) label"
        )));
    }
    if 2 * lambda.column_len(0) > theta {
        lambda.column_flip(theta)
    } else {
        Ok(lambda.clone())
    }
}

/// Weyl dimension of the GL(θ) polynomial irreducible ρ.
pub fn dim_gl(rho: &Partition, theta: usize) -> Result<u128> {
    if rho.len() > theta {
        return Err(Error::InvalidInput(format!("{rho} has more than {theta} rows")));
    }
    let mut d = Q::from_integer(1);
    for i in 0..theta {
        for j in i + 1..theta {
            let num = rho.part(i) as i128 - rho.part(j) as i128 + (j - i) as i128;
            d *= Q::new(num, (j - i) as i128);
        }
    }
    Ok(d.to_integer() as u128)
}

/// Complete homogeneous symmetric polynomials h_0..=h_max of `x`.
fn complete_homogeneous(x: &[Complex64], max: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); max + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for &xi in x {
        for k in 1..=max {
            let prev = h[k - 1];
            h[k] += xi * prev;
        }
    }
    h
}

/// χ^{O(θ)}_λ at a group element with the given θ eigenvalues.
pub fn o_character(lambda: &Partition, eigenvalues: &[Complex64]) -> Result<Complex64> {
    let theta = eigenvalues.len();
    if !lambda.is_o_admissible(theta) {
        return Err(Error::InvalidInput(format!(
            "{lambda} is not an O({theta}) label"
        )));
    }
    let l = lambda.len();
    if l == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let max = lambda.part(0) + l;
    let h = complete_homogeneous(eigenvalues, max);
    let hk = |k: i64| -> Complex64 {
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            h[k as usize]
        }
    };
    let mut m = vec![vec![Complex64::new(0.0, 0.0); l]; l];
    for (i, row) in m.iter_mut().enumerate() {
        let a = lambda.part(i) as i64 - (i as i64 + 1);
        for (j, e) in row.iter_mut().enumerate() {
            let jj = j as i64 + 1;
            *e = hk(a + jj) - hk(a - jj);
        }
    }
    Ok(determinant(m))
}

/// Determinant by Bareiss fraction-free elimination (with row pivoting).
/// Every division is exact for integer-valued entries, so the character
/// at the identity comes out as an exact integer.
pub(crate) fn determinant(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut sign = 1.0;
    let mut prev = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].norm().partial_cmp(&m[b][c].norm()).unwrap())
            .unwrap();
        if m[p][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..n {
            for k in c + 1..n {
                m[r][k] = (m[r][k] * m[c][c] - m[r][c] * m[c][k]) / prev;
            }
        }
        prev = m[c][c];
    }
    if n == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        m[n - 1][n - 1] * sign
    }
}

/// χ^{O(θ)}_λ(e^{hW}) for W with the given spectrum.
pub fn char_o_field(lambda: &Partition, theta: usize, h: f64, dir: &FieldDirection) -> Result<f64> {
    if dir.theta != theta {
        return Err(Error::InvalidInput("field direction has the wrong θ".into()));
    }
    let mu = so_label(lambda, theta)?;
    let w = dir.weights.first().copied().unwrap_or(0.0);
    match theta {
        2 => {
            if mu.is_empty() {
                Ok(1.0)
            } else {
                Ok(2.0 * (h * w * mu.part(0) as f64).cosh())
            }
        }
        3 => {
            let a = mu.part(0) as i64;
            Ok((-a..=a).map(|j| (h * w * j as f64).exp()).sum())
        }
        _ => Ok(o_character(lambda, &dir.exp_eigenvalues(h))?.re),
    }
}

/// χ_λ(e^{(h/n)W}) / d_λ for θ ∈ {2, 3} with the default unit weight.
pub fn char_ratio_o(lambda: &Partition, theta: usize, h_over_n: f64) -> Result<f64> {
    let mu = so_label(lambda, theta)?;
    let t = h_over_n;
    match theta {
        2 => {
            if mu.is_empty() {
                Ok(1.0)
            } else {
                Ok((t * mu.part(0) as f64).cosh())
            }
        }
        3 => {
            let a = mu.part(0) as f64 + 0.5;
            if t == 0.0 {
                return Ok(1.0);
            }
            Ok((t * a).sinh() / (t * 0.5).sinh() * 0.5 / a)
        }
        _ => Err(Error::InvalidInput(format!(
            "character ratio closed form only for θ ∈ {{2,3}}, got {theta}"
        ))),
    }
}
