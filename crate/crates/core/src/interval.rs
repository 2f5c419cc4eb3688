//! Closed real intervals with outward rounding.
//!
//! Every operation rounds to nearest and then widens the result by one ulp
//! on each side (a few ulps for `ln`/`exp`, whose libm error bound is
//! looser), so the exact image of the operands is always contained.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

const TRANSCENDENTAL_ULPS: u32 = 4;

fn down(x: f64, k: u32) -> f64 {
    (0..k).fold(x, |v, _| v.next_down())
}

fn up(x: f64, k: u32) -> f64 {
    (0..k).fold(x, |v, _| v.next_up())
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::Domain(format!("[{lo}, {hi}] is not an interval")));
        }
        Ok(Interval { lo, hi })
    }

    /// The degenerate interval [x, x]; `x` is taken as exact.
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// An enclosure of the rational p/q.
    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Interval::point(p as f64).checked_div(Interval::point(q as f64))
    }

    fn outward(lo: f64, hi: f64) -> Self {
        Interval { lo: lo.next_down(), hi: hi.next_up() }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::Domain(format!("division by {rhs:?}, which contains 0")));
        }
        let q = [self.lo / rhs.lo, self.lo / rhs.hi, self.hi / rhs.lo, self.hi / rhs.hi];
        Ok(Interval::outward(min4(q), max4(q)))
    }

    pub fn ln(self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(Error::Domain(format!("log of {self:?}, which reaches ≤ 0")));
        }
        Ok(Interval {
            lo: down(self.lo.ln(), TRANSCENDENTAL_ULPS),
            hi: up(self.hi.ln(), TRANSCENDENTAL_ULPS),
        })
    }

    pub fn exp(self) -> Interval {
        Interval {
            lo: down(self.lo.exp(), TRANSCENDENTAL_ULPS).max(0.0),
            hi: up(self.hi.exp(), TRANSCENDENTAL_ULPS),
        }
    }

    pub fn sqr(self) -> Interval {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.contains_zero() {
            Interval { lo: 0.0, hi: a.max(b).next_up() }
        } else {
            Interval::outward(a.min(b), a.max(b))
        }
    }
}

fn min4(v: [f64; 4]) -> f64 {
    v.into_iter().fold(f64::INFINITY, f64::min)
}

fn max4(v: [f64; 4]) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::outward(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::outward(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        Interval::outward(min4(p), max4(p))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}
