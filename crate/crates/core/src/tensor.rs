//! The tensor space (ℂ^θ)^{⊗n} and the two-site operators acting on it.
//!
//! Basis states are indexed with site 0 most significant. Local index `i`
//! carries the spin label a = S − i with S = (θ−1)/2, so index 0 is the
//! highest weight.

use std::ops::{AddAssign, Neg};
use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::{DMatrix, Scalar};
use num_traits::Zero;

use crate::error::{Error, Result};

/// Default cap on the dense dimension θⁿ.
pub const DEFAULT_DENSE_CAP: usize = 4096;

static CAP_OVERRIDE: AtomicUsize = AtomicUsize::new(0);

/// Sets a process-wide cap that takes precedence over the environment
/// (`None` clears it).
pub fn set_dense_cap(cap: Option<usize>) {
    CAP_OVERRIDE.store(cap.unwrap_or(0), Ordering::Relaxed);
}

/// The explicit override if set, else `ORTHO_SPIN_DENSE_CAP`, else
/// [`DEFAULT_DENSE_CAP`].
pub fn dense_cap() -> usize {
    let o = CAP_OVERRIDE.load(Ordering::Relaxed);
    if o > 0 {
        return o;
    }
    std::env::var("ORTHO_SPIN_DENSE_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

/// Which projector family represents the bars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Flavor {
    /// ⟨a_x a_y|Q|b_x b_y⟩ = δ_{a_x a_y} δ_{b_x b_y}.
    Q,
    /// ⟨a_x a_y|P|b_x b_y⟩ = (−1)^{a_x−b_x} δ_{a_x,−a_y} δ_{b_x,−b_y}.
    P,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" => Ok(Flavor::Q),
            "P" | "p" => Ok(Flavor::P),
            _ => Err(Error::Parse(format!("unknown flavor {s:?}"))),
        }
    }
}

/// Two-site operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOp {
    Swap,
    Bar(Flavor),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorSpace {
    pub theta: usize,
    pub n: usize,
    dim: usize,
}

impl TensorSpace {
    pub fn new(theta: usize, n: usize) -> Result<Self> {
        Self::with_cap(theta, n, dense_cap())
    }

    pub fn with_cap(theta: usize, n: usize, cap: usize) -> Result<Self> {
        if theta < 2 {
            return Err(Error::InvalidInput(format!("θ must be at least 2, got {theta}")));
        }
        let dim = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(theta));
        match dim {
            Some(d) if d <= cap => Ok(TensorSpace { theta, n, dim: d }),
            Some(d) => Err(Error::CapExceeded { dim: d, cap }),
            None => Err(Error::CapExceeded { dim: usize::MAX, cap }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stride(&self, site: usize) -> usize {
        self.theta.pow((self.n - 1 - site) as u32)
    }

    pub fn digit(&self, index: usize, site: usize) -> usize {
        (index / self.stride(site)) % self.theta
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.n).map(|s| self.digit(index, s)).collect()
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.theta + d)
    }

    fn with_digits(&self, index: usize, x: usize, dx: usize, y: usize, dy: usize) -> usize {
        let (sx, sy) = (self.stride(x), self.stride(y));
        let cx = (index / sx) % self.theta;
        let cy = (index / sy) % self.theta;
        index - cx * sx - cy * sy + dx * sx + dy * sy
    }

    /// out = G·input for the two-site operator G on sites x ≠ y.
    pub fn apply_pair<C>(&self, op: PairOp, x: usize, y: usize, input: &[C], out: &mut [C])
    where
        C: Copy + Zero + AddAssign + Neg<Output = C>,
    {
        let t = self.theta;
        for (a, o) in out.iter_mut().enumerate() {
            let ax = self.digit(a, x);
            let ay = self.digit(a, y);
            *o = match op {
                PairOp::Swap => input[self.with_digits(a, x, ay, y, ax)],
                PairOp::Bar(Flavor::Q) => {
                    if ax != ay {
                        C::zero()
                    } else {
                        let mut s = C::zero();
                        for c in 0..t {
                            s += input[self.with_digits(a, x, c, y, c)];
                        }
                        s
                    }
                }
                PairOp::Bar(Flavor::P) => {
                    if ay != t - 1 - ax {
                        C::zero()
                    } else {
                        let mut s = C::zero();
                        for c in 0..t {
                            let v = input[self.with_digits(a, x, c, y, t - 1 - c)];
                            // (−1)^{a_x − b_x} with a = S − index.
                            if (c + ax) % 2 == 0 {
                                s += v;
                            } else {
                                s += -v;
                            }
                        }
                        s
                    }
                }
            };
        }
    }

    /// G·M column by column.
    pub fn apply_pair_left<C>(&self, op: PairOp, x: usize, y: usize, m: &DMatrix<C>) -> DMatrix<C>
    where
        C: Scalar + Copy + Zero + AddAssign + Neg<Output = C>,
    {
        let mut out = DMatrix::from_element(m.nrows(), m.ncols(), C::zero());
        for j in 0..m.ncols() {
            let col = m.column(j);
            let src: &[C] = col.as_slice();
            let mut buf = vec![C::zero(); m.nrows()];
            self.apply_pair(op, x, y, src, &mut buf);
            out.column_mut(j).copy_from_slice(&buf);
        }
        out
    }

    /// Dense matrix of a two-site operator.
    pub fn pair_matrix(&self, op: PairOp, x: usize, y: usize) -> DMatrix<f64> {
        self.apply_pair_left(op, x, y, &DMatrix::identity(self.dim, self.dim))
    }

    /// Adds `coef·G` into `acc` without forming an identity product.
    pub fn accumulate_pair(&self, op: PairOp, x: usize, y: usize, coef: f64, acc: &mut DMatrix<f64>) {
        let t = self.theta;
        for b in 0..self.dim {
            let bx = self.digit(b, x);
            let by = self.digit(b, y);
            match op {
                PairOp::Swap => {
                    let a = self.with_digits(b, x, by, y, bx);
                    acc[(a, b)] += coef;
                }
                PairOp::Bar(Flavor::Q) => {
                    if bx == by {
                        for c in 0..t {
                            acc[(self.with_digits(b, x, c, y, c), b)] += coef;
                        }
                    }
                }
                PairOp::Bar(Flavor::P) => {
                    if by == t - 1 - bx {
                        for c in 0..t {
                            let a = self.with_digits(b, x, c, y, t - 1 - c);
                            let sign = if (c + bx) % 2 == 0 { 1.0 } else { -1.0 };
                            acc[(a, b)] += coef * sign;
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_matrices() {
        let sp = TensorSpace::new(2, 2).unwrap();
        let q = sp.pair_matrix(PairOp::Bar(Flavor::Q), 0, 1);
        assert_eq!(q.trace(), 2.0);
        assert_eq!(q.rank(1e-12), 1);
        let sp3 = TensorSpace::new(3, 2).unwrap();
        let p = sp3.pair_matrix(PairOp::Bar(Flavor::P), 0, 1);
        assert_eq!(p.trace(), 3.0);
        assert!((&p * &p - &p * 3.0).amax() < 1e-14);
        assert_eq!(p, p.transpose());
    }

    #[test]
    fn accumulate_matches_apply() {
        let sp = TensorSpace::new(3, 3).unwrap();
        for op in [PairOp::Swap, PairOp::Bar(Flavor::Q), PairOp::Bar(Flavor::P)] {
            let mut acc = DMatrix::zeros(sp.dim(), sp.dim());
            sp.accumulate_pair(op, 0, 2, 1.0, &mut acc);
            assert_eq!(acc, sp.pair_matrix(op, 0, 2));
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            TensorSpace::with_cap(3, 8, 4096),
            Err(Error::CapExceeded { dim: 6561, cap: 4096 })
        ));
    }
}
