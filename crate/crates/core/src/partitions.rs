//! Integer partitions and Young-diagram combinatorics.
//!
//! A [`Partition`] stores its parts weakly decreasing with trailing zeros
//! trimmed, so structural equality is partition equality. The empty
//! partition is a perfectly good partition of zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, rejecting vectors that are not weakly decreasing.
    /// Trailing zeros are dropped.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        Ok(Self::from_sorted(parts))
    }

    /// Sorts arbitrary parts into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted(parts)
    }

    fn from_sorted(mut parts: Vec<usize>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(m)`, or ∅ when `m == 0`.
    pub fn row(m: usize) -> Self {
        Self::from_sorted(vec![m])
    }

    /// The one-column partition `(1^j)`.
    pub fn column(j: usize) -> Self {
        Partition { parts: vec![1; j] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Column lengths, i.e. the conjugate partition.
    pub fn transpose(&self) -> Partition {
        let width = self.part(0);
        let cols = (0..width)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts: cols }
    }

    /// Length of column `j` (0-based).
    pub fn column_len(&self, j: usize) -> usize {
        self.parts.iter().take_while(|&&p| p > j).count()
    }

    /// Σ (j − i) over boxes (i, j).
    pub fn content_sum(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let p = p as i64;
                let i = i as i64;
                p * (p - 1) / 2 - i * p
            })
            .sum()
    }

    /// Whether the diagram of `self` fits inside the diagram of `other`.
    pub fn contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// Replaces the first column (length λ₁ᵀ) by one of length θ − λ₁ᵀ.
    pub fn column_flip(&self, theta: usize) -> Result<Partition> {
        let c1 = self.column_len(0);
        let c2 = self.column_len(1);
        if c1 + c2 > theta {
            return Err(Error::InvalidInput(format!(
                "{self} has λ₁ᵀ+λ₂ᵀ = {} > θ = {theta}",
                c1 + c2
            )));
        }
        let new_c1 = theta - c1;
        // Rows 0..c2 keep their arms; the first column then runs to new_c1.
        let rows = new_c1.max(c2);
        let parts = (0..rows)
            .map(|i| {
                let arm = self.part(i).saturating_sub(1);
                arm + usize::from(i < new_c1)
            })
            .collect();
        Ok(Partition::from_sorted(parts))
    }

    /// Whether λ₁ᵀ + λ₂ᵀ ≤ θ.
    pub fn is_o_admissible(&self, theta: usize) -> bool {
        self.column_len(0) + self.column_len(1) <= theta
    }

    /// Subtracts `m` from every one of the first `rows` parts.
    pub fn minus_rectangle(&self, rows: usize, m: usize) -> Result<Partition> {
        if (0..rows).any(|i| self.part(i) < m) {
            return Err(Error::InvalidInput(format!(
                "cannot remove a {rows}×{m} rectangle from {self}"
            )));
        }
        let parts = (0..rows.max(self.len()))
            .map(|i| if i < rows { self.part(i) - m } else { self.part(i) })
            .collect();
        Ok(Partition::from_sorted(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"[5,5,3,1]"`; brackets optional, `"[]"` is ∅.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad part {t:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

/// A triple (λ, k, ρ) with |λ| + 2k = |ρ|.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LambdaRhoPair {
    pub lambda: Partition,
    pub k: usize,
    pub rho: Partition,
}

impl LambdaRhoPair {
    pub fn new(lambda: Partition, rho: Partition) -> Result<Self> {
        let (l, r) = (lambda.size(), rho.size());
        if l > r || (r - l) % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "|ρ| − |λ| must be even and non-negative, got {rho} and {lambda}"
            )));
        }
        Ok(LambdaRhoPair { lambda, k: (r - l) / 2, rho })
    }

    pub fn n(&self) -> usize {
        self.rho.size()
    }

    /// Membership in Λ_n(θ).
    pub fn in_lambda_set(&self, theta: usize) -> bool {
        self.lambda.is_o_admissible(theta) && self.rho.len() <= theta
    }
}

/// All partitions of `n` with at most `max_parts` parts, reverse
/// lexicographic order (largest first part first).
pub fn enumerate_partitions(n: usize, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, max_parts, &mut cur, &mut out);
    out
}

fn fill(rest: usize, cap: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=cap.min(rest)).rev() {
        cur.push(p);
        fill(rest - p, p, slots - 1, cur, out);
        cur.pop();
    }
}

/// Partitions of `m` into even parts, at most `max_parts` of them.
pub fn enumerate_even_partitions(m: usize, max_parts: usize) -> Result<Vec<Partition>> {
    if m % 2 != 0 {
        return Err(Error::InvalidInput(format!("{m} is odd")));
    }
    Ok(enumerate_partitions(m / 2, max_parts)
        .into_iter()
        .map(|p| Partition { parts: p.parts.iter().map(|x| 2 * x).collect() })
        .collect())
}

/// Λ_n(θ): every (λ, k, ρ) with λ ⊢ n−2k, λ₁ᵀ+λ₂ᵀ ≤ θ, ρ ⊢ n, ρ₁ᵀ ≤ θ.
pub fn enumerate_lambda_rho(n: usize, theta: usize) -> Vec<LambdaRhoPair> {
    let rhos = enumerate_partitions(n, theta);
    let mut out = Vec::new();
    for k in 0..=n / 2 {
        let lambdas: Vec<_> = enumerate_partitions(n - 2 * k, theta)
            .into_iter()
            .filter(|l| l.is_o_admissible(theta))
            .collect();
        for lambda in &lambdas {
            for rho in &rhos {
                out.push(LambdaRhoPair { lambda: lambda.clone(), k, rho: rho.clone() });
            }
        }
    }
    out
}
