//! Symmetric-group data: hook-length dimensions, Murnaghan–Nakayama
//! characters, Littlewood–Richardson coefficients and the cell-module
//! branching numbers b̃.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_even_partitions, enumerate_partitions, Partition};

/// Number of standard Young tableaux of shape ρ (hook-length formula).
///
/// Exact for |ρ| ≤ 33 (n! must fit in a u128); larger shapes are rejected.
pub fn dim_sn(rho: &Partition) -> Result<u128> {
    let n = rho.size();
    let mut num: u128 = 1;
    for i in 2..=n as u128 {
        num = num.checked_mul(i).ok_or_else(|| overflow(rho))?;
    }
    let conj = rho.transpose();
    let mut den: u128 = 1;
    for (i, &row) in rho.parts().iter().enumerate() {
        for j in 0..row {
            let hook = (row - j - 1) + (conj.part(j) - i - 1) + 1;
            den = den.checked_mul(hook as u128).ok_or_else(|| overflow(rho))?;
        }
    }
    Ok(num / den)
}

fn overflow(rho: &Partition) -> Error {
    Error::InvalidInput(format!("dimension of {rho} does not fit in 128 bits"))
}

/// `ln` of the hook-length dimension; usable for any size.
pub fn ln_dim_sn(rho: &Partition) -> f64 {
    let n = rho.size();
    let conj = rho.transpose();
    let mut s: f64 = (2..=n).map(|i| (i as f64).ln()).sum();
    for (i, &row) in rho.parts().iter().enumerate() {
        for j in 0..row {
            s -= (((row - j - 1) + (conj.part(j) - i - 1) + 1) as f64).ln();
        }
    }
    s
}

/// Littlewood–Richardson coefficient c^ρ_{λ,π}: the number of LR skew
/// tableaux of shape ρ∖λ and weight π.
pub fn lr_coefficient(lambda: &Partition, pi: &Partition, rho: &Partition) -> u64 {
    if lambda.size() + pi.size() != rho.size() || !lambda.contained_in(rho) {
        return 0;
    }
    if !pi.contained_in(rho) {
        return 0;
    }
    // Cells in reading order: rows top to bottom, each right to left.
    let mut cells = Vec::new();
    for r in 0..rho.len() {
        for c in (lambda.part(r)..rho.part(r)).rev() {
            cells.push((r, c));
        }
    }
    let mut fill = vec![vec![0usize; rho.part(0)]; rho.len()];
    let mut counts = vec![0usize; pi.len() + 1];
    let mut total = 0;
    lr_fill(0, &cells, lambda, pi, &mut fill, &mut counts, &mut total);
    total
}

fn lr_fill(
    idx: usize,
    cells: &[(usize, usize)],
    lambda: &Partition,
    pi: &Partition,
    fill: &mut [Vec<usize>],
    counts: &mut [usize],
    total: &mut u64,
) {
    let Some(&(r, c)) = cells.get(idx) else {
        *total += 1;
        return;
    };
    // Right neighbour (already filled) bounds from above, the cell above
    // bounds strictly from below when it is part of the skew shape.
    let hi = if c + 1 < fill[r].len() && fill[r][c + 1] != 0 {
        fill[r][c + 1]
    } else {
        pi.len()
    };
    let lo = if r > 0 && c >= lambda.part(r - 1) { fill[r - 1][c] + 1 } else { 1 };
    for v in lo..=hi.min(r + 1) {
        if counts[v] >= pi.part(v - 1) {
            continue;
        }
        if v > 1 && counts[v] + 1 > counts[v - 1] {
            continue;
        }
        counts[v] += 1;
        fill[r][c] = v;
        lr_fill(idx + 1, cells, lambda, pi, fill, counts, total);
        fill[r][c] = 0;
        counts[v] -= 1;
    }
}

/// b̃ = Σ over even π ⊢ |ρ|−|λ| of c^ρ_{λ,π}.
pub fn cell_branching(lambda: &Partition, rho: &Partition) -> Result<u64> {
    let (l, r) = (lambda.size(), rho.size());
    if l > r || (r - l) % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "|ρ| − |λ| must be even and non-negative for λ={lambda}, ρ={rho}"
        )));
    }
    if !lambda.contained_in(rho) {
        return Ok(0);
    }
    Ok(enumerate_even_partitions(r - l, rho.len())?
        .iter()
        .map(|pi| lr_coefficient(lambda, pi, rho))
        .sum())
}

/// Irreducible S_n character χ^ρ at cycle type μ (Murnaghan–Nakayama, via
/// β-numbers).
pub fn sn_character(rho: &Partition, mu: &Partition) -> Result<i64> {
    if rho.size() != mu.size() {
        return Err(Error::InvalidInput(format!(
            "χ^{rho} evaluated at a cycle type {mu} of a different size"
        )));
    }
    let len = rho.len();
    let beta: Vec<usize> = (0..len).map(|i| rho.part(i) + len - 1 - i).collect();
    let mut memo = HashMap::new();
    Ok(mn(beta, mu.parts(), &mut memo))
}

fn mn(beta: Vec<usize>, mu: &[usize], memo: &mut HashMap<(Vec<usize>, usize), i64>) -> i64 {
    let Some((&m, rest)) = mu.split_first() else {
        return 1;
    };
    let key = (beta.clone(), mu.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < m || beta.contains(&(b - m)) {
            continue;
        }
        let target = b - m;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[i] = target;
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn(next, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// z_μ = Π i^{m_i} m_i!, the centraliser order of a permutation of cycle type μ.
pub fn centralizer_order(mu: &Partition) -> u128 {
    let mut z: u128 = 1;
    let mut i = 0;
    let parts = mu.parts();
    while i < parts.len() {
        let v = parts[i];
        let mut m = 0;
        while i < parts.len() && parts[i] == v {
            m += 1;
            i += 1;
            z *= v as u128 * m as u128;
        }
    }
    z
}

/// A permutation of {0..n} with cycle type μ, cycles laid out consecutively.
pub fn permutation_of_cycle_type(mu: &Partition) -> Vec<usize> {
    let mut perm = Vec::with_capacity(mu.size());
    let mut start = 0;
    for &len in mu.parts() {
        for j in 0..len {
            perm.push(start + (j + 1) % len);
        }
        start += len;
    }
    perm
}

/// All cycle types of S_n.
pub fn cycle_types(n: usize) -> Vec<Partition> {
    enumerate_partitions(n, n)
}
