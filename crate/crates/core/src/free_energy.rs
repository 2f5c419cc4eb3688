//! The variational free energy
//! φ(x, y) = ½[(L₁+L₂)Σxᵢ² − L₂Σyᵢ²] − Σxᵢ log xᵢ,
//! its maximisation, critical couplings and phase labels.
//!
//! Only y₁ is ever non-zero here. The inner y-problem is solved in closed
//! form (it is a concave or convex quadratic in y₁ on [0, x₁−x_θ]); the
//! remaining x-problem is handled by a grid over the ordered simplex
//! followed by damped Newton ascent from the best grid cells.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::{convert_parameters, Canonical, Params};

/// Maximiser values within this distance of the maximum are ties.
pub const TIE_TOLERANCE: f64 = 1e-8;
/// Width of the band around a transition line that is labelled `Boundary`.
pub const BOUNDARY_BAND: f64 = 1e-6;

const STATIONARITY: f64 = 1e-10;
const START_WINDOW: f64 = 1e-4;
const MAX_STARTS: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        SimplexPoint { x, y }
    }

    /// The uniform point (1/θ, …) with y = 0.
    pub fn uniform(theta: usize) -> Self {
        SimplexPoint { x: vec![1.0 / theta as f64; theta], y: vec![0.0; theta] }
    }

    fn check(&self, theta: usize) -> Result<()> {
        let bad = |m: &str| Err(Error::Domain(format!("{m}: {self:?}")));
        if self.x.len() != theta || self.y.len() != theta {
            return bad("x and y need θ entries");
        }
        let tol = 1e-12;
        if self.x.iter().any(|&v| v < -tol) || (self.x.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad("x must be a probability vector");
        }
        if self.x.windows(2).any(|w| w[1] > w[0] + tol) {
            return bad("x must be weakly decreasing");
        }
        if self.y.iter().skip(theta / 2).any(|&v| v != 0.0) || self.y.iter().any(|&v| v < -tol) {
            return bad("y must be non-negative and vanish past ⌊θ/2⌋");
        }
        if theta <= 3 && self.y[0] > self.x[0] - self.x[theta - 1] + tol {
            return bad("y₁ exceeds x₁ − x_θ");
        }
        Ok(())
    }
}

fn xlogx(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

pub fn phi(theta: usize, l1: f64, l2: f64, p: &SimplexPoint) -> Result<f64> {
    p.check(theta)?;
    let sx2: f64 = p.x.iter().map(|v| v * v).sum();
    let sy2: f64 = p.y.iter().map(|v| v * v).sum();
    let ent: f64 = p.x.iter().map(|&v| xlogx(v)).sum();
    Ok(0.5 * ((l1 + l2) * sx2 - l2 * sy2) - ent)
}

/// max over y₁ ∈ [0, d] of −(L₂/2)y₁² + |h|y₁, with value, first and second
/// derivative in d.
#[derive(Clone, Copy, Debug)]
struct Inner {
    value: f64,
    d1: f64,
    d2: f64,
    y_lo: f64,
    y_hi: f64,
}

fn inner(l2: f64, h: f64, d: f64) -> Inner {
    let a = h.abs();
    if l2 > 0.0 {
        let y = (a / l2).min(d);
        if a / l2 < d {
            Inner { value: a * a / (2.0 * l2), d1: 0.0, d2: 0.0, y_lo: y, y_hi: y }
        } else {
            Inner { value: a * d - 0.5 * l2 * d * d, d1: a - l2 * d, d2: -l2, y_lo: y, y_hi: y }
        }
    } else {
        let lo = if l2 == 0.0 && a == 0.0 { 0.0 } else { d };
        Inner { value: a * d - 0.5 * l2 * d * d, d1: a - l2 * d, d2: -l2, y_lo: lo, y_hi: d }
    }
}

/// One maximiser with its admissible y₁ range (an interval only when
/// L₂ = 0 and h = 0).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Maximizer {
    pub point: SimplexPoint,
    pub y1_range: (f64, f64),
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxResult {
    pub theta: usize,
    pub l1: f64,
    pub l2: f64,
    pub h: f64,
    pub value: f64,
    /// All maximisers within [`TIE_TOLERANCE`], best first.
    pub maximizers: Vec<Maximizer>,
    /// Largest |∇| over the reported maximisers after refinement.
    pub stationarity: f64,
}

impl MaxResult {
    pub fn best(&self) -> &Maximizer {
        &self.maximizers[0]
    }
}

/// Grid resolution used for each θ.
pub fn grid_resolution(theta: usize) -> usize {
    match theta {
        2 => 1000,
        3 => 999,
        4 => 120,
        5 => 60,
        _ => 42,
    }
}

struct Objective {
    theta: usize,
    a: f64,
    l2: f64,
    h: f64,
}

impl Objective {
    fn value(&self, x: &[f64]) -> f64 {
        let (mx, mn) = extremes(x);
        let sx2: f64 = x.iter().map(|v| v * v).sum();
        let ent: f64 = x.iter().map(|&v| xlogx(v)).sum();
        0.5 * self.a * sx2 - ent + inner(self.l2, self.h, x[mx] - x[mn]).value
    }

    /// Gradient and Hessian in u = (x₁, …, x_{θ−1}), x_θ = 1 − Σu.
    fn derivatives(&self, x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let t = self.theta;
        let (mx, mn) = extremes(x);
        let g = inner(self.l2, self.h, x[mx] - x[mn]);
        let mut e = vec![0.0; t];
        if mx != mn {
            e[mx] += 1.0;
            e[mn] -= 1.0;
        }
        let grad_x: Vec<f64> = (0..t).map(|i| self.a * x[i] - x[i].ln() - 1.0 + g.d1 * e[i]).collect();
        let hess_x = |i: usize, j: usize| {
            let diag = if i == j { self.a - 1.0 / x[i] } else { 0.0 };
            diag + g.d2 * e[i] * e[j]
        };
        let m = t - 1;
        let grad = DVector::from_fn(m, |j, _| grad_x[j] - grad_x[m]);
        let hess = DMatrix::from_fn(m, m, |j, k| hess_x(j, k) - hess_x(j, m) - hess_x(m, k) + hess_x(m, m));
        (grad, hess)
    }
}

fn extremes(x: &[f64]) -> (usize, usize) {
    let mut mx = 0;
    let mut mn = 0;
    for i in 1..x.len() {
        if x[i] > x[mx] {
            mx = i;
        }
        if x[i] < x[mn] {
            mn = i;
        }
    }
    (mx, mn)
}

fn sorted_desc(mut x: Vec<f64>) -> Vec<f64> {
    x.sort_by(|a, b| b.partial_cmp(a).unwrap());
    x
}

/// Damped Newton ascent (gradient ascent where the Hessian is not negative
/// definite). Returns the refined point and its final gradient norm.
fn ascend(obj: &Objective, start: &[f64]) -> (Vec<f64>, f64) {
    let t = obj.theta;
    let mut x: Vec<f64> = start.iter().map(|&v| v.max(1e-9)).collect();
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
    let mut f = obj.value(&x);
    let mut gnorm = f64::INFINITY;
    for _ in 0..500 {
        let (grad, hess) = obj.derivatives(&x);
        gnorm = grad.amax();
        if gnorm < STATIONARITY * 1e-2 {
            break;
        }
        let neg = -hess;
        let dir = match neg.clone().cholesky() {
            Some(ch) => ch.solve(&grad),
            None => grad.clone(),
        };
        let mut step = 1.0;
        let mut moved = false;
        while step > 1e-20 {
            let mut y = x.clone();
            let mut last = 1.0;
            for j in 0..t - 1 {
                y[j] += step * dir[j];
                last -= y[j];
            }
            y[t - 1] = last;
            if y.iter().all(|&v| v > 0.0) {
                let fy = obj.value(&y);
                if fy >= f {
                    moved = fy > f || step == 1.0;
                    x = y;
                    f = fy;
                    break;
                }
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (sorted_desc(x), gnorm)
}

/// Ordered integer compositions m₁ ≥ … ≥ m_θ ≥ 0 of `total`.
fn ordered_grid(theta: usize, total: usize) -> Vec<Vec<u32>> {
    fn go(theta: usize, left: usize, cap: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == theta - 1 {
            if left <= cap {
                cur.push(left as u32);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let slots = theta - cur.len();
        let lo = left.div_ceil(slots);
        for v in (lo..=cap.min(left)).rev() {
            cur.push(v as u32);
            go(theta, left - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(theta, total, total, &mut Vec::new(), &mut out);
    out
}

/// Global maximum of φ + max_y(…) over the ordered simplex.
pub fn maximize_phi_field(theta: usize, l1: f64, l2: f64, h: f64) -> Result<MaxResult> {
    maximize_on_grid(theta, l1, l2, h, grid_resolution(theta))
}

/// As [`maximize_phi_field`] with an explicit grid resolution `m`.
pub fn maximize_on_grid(theta: usize, l1: f64, l2: f64, h: f64, m: usize) -> Result<MaxResult> {
    if theta < 2 {
        return Err(Error::InvalidInput(format!("θ must be at least 2, got {theta}")));
    }
    if theta >= 4 && l2 < 0.0 {
        return Err(Error::NotProven(format!(
            "the free energy for θ = {theta} with L₂ < 0 is not known"
        )));
    }
    if theta >= 4 && h != 0.0 {
        return Err(Error::InvalidInput("field free energies need θ ∈ {2,3}".into()));
    }
    if ![l1, l2, h].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("couplings must be finite".into()));
    }
    if m < theta {
        return Err(Error::InvalidInput(format!("grid resolution {m} is too coarse")));
    }
    let obj = Objective { theta, a: l1 + l2, l2, h };
    let grid = ordered_grid(theta, m);
    let to_x = |g: &[u32]| g.iter().map(|&v| v as f64 / m as f64).collect::<Vec<_>>();
    let values: Vec<f64> = grid.par_iter().map(|g| obj.value(&to_x(g))).collect();
    let gmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    // Starts: near-best cells plus every discrete local maximum.
    let index: HashMap<&[u32], usize> = grid.iter().enumerate().map(|(i, g)| (g.as_slice(), i)).collect();
    let is_local_max = |i: usize| {
        let g = &grid[i];
        for a in 0..theta {
            for b in 0..theta {
                if a == b || g[a] == 0 {
                    continue;
                }
                let mut nb = g.clone();
                nb[a] -= 1;
                nb[b] += 1;
                nb.sort_unstable_by(|p, q| q.cmp(p));
                if let Some(&j) = index.get(nb.as_slice()) {
                    if values[j] > values[i] {
                        return false;
                    }
                }
            }
        }
        true
    };
    let mut cand: Vec<usize> = (0..grid.len())
        .into_par_iter()
        .filter(|&i| values[i] >= gmax - START_WINDOW || is_local_max(i))
        .collect();
    cand.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap().then(i.cmp(&j)));
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for i in cand {
        let x = to_x(&grid[i]);
        if starts.iter().all(|s| dist(s, &x) > 0.02) {
            starts.push(x);
        }
        if starts.len() >= MAX_STARTS {
            break;
        }
    }

    let refined: Vec<(Vec<f64>, f64, f64)> = starts
        .par_iter()
        .map(|s| {
            let (x, g) = ascend(&obj, s);
            let v = obj.value(&x);
            (x, v, g)
        })
        .collect();
    let best = refined.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let mut kept: Vec<(Vec<f64>, f64, f64)> = Vec::new();
    let mut order: Vec<_> = refined.into_iter().filter(|r| r.1 >= best - TIE_TOLERANCE).collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    for r in order {
        if kept.iter().all(|k| dist(&k.0, &r.0) > 1e-5) {
            kept.push(r);
        }
    }
    let stationarity = kept.iter().map(|k| k.2).fold(0.0, f64::max);
    let maximizers = kept
        .into_iter()
        .map(|(x, value, _)| {
            let d = x[0] - x[theta - 1];
            let inn = inner(l2, h, d);
            let mut y = vec![0.0; theta];
            y[0] = inn.y_lo;
            Maximizer { point: SimplexPoint { x, y }, y1_range: (inn.y_lo, inn.y_hi), value }
        })
        .collect();
    Ok(MaxResult { theta, l1, l2, h, value: best, maximizers, stationarity })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Maximum of φ (zero field).
pub fn maximize_phi(theta: usize, l1: f64, l2: f64) -> Result<MaxResult> {
    maximize_phi_field(theta, l1, l2, 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeEnergy {
    pub canonical: Canonical,
    /// max φ for the canonical couplings.
    pub value: f64,
    /// Free energy of the model as originally parameterised:
    /// `value − constant_shift/2`.
    pub original_value: f64,
    pub result: MaxResult,
}

pub fn free_energy(theta: usize, params: Params) -> Result<FreeEnergy> {
    field_free_energy(theta, params, 0.0)
}

/// Φ(h) = max[φ + |h|y₁].
pub fn field_free_energy(theta: usize, params: Params, h: f64) -> Result<FreeEnergy> {
    let c = convert_parameters(theta, params)?;
    if h != 0.0 && !(theta == 2 || theta == 3) {
        return Err(Error::InvalidInput(format!("field free energy needs θ ∈ {{2,3}}, got {theta}")));
    }
    let result = maximize_phi_field(theta, c.l1, c.l2, h)?;
    Ok(FreeEnergy {
        canonical: c,
        value: result.value,
        original_value: result.value - c.constant_shift / 2.0,
        result,
    })
}

/// (y₁↑, y₁↓): extreme y₁ over the zero-field maximiser set.
pub fn one_sided_derivatives(theta: usize, l1: f64, l2: f64) -> Result<(f64, f64)> {
    if !(theta == 2 || theta == 3) {
        return Err(Error::InvalidInput(format!("one-sided derivatives need θ ∈ {{2,3}}, got {theta}")));
    }
    let r = maximize_phi(theta, l1, l2)?;
    let up = r.maximizers.iter().map(|m| m.y1_range.1).fold(f64::NEG_INFINITY, f64::max);
    let down = r.maximizers.iter().map(|m| m.y1_range.0).fold(f64::INFINITY, f64::min);
    Ok((up, down))
}

pub fn beta_c(theta: usize) -> Result<f64> {
    match theta {
        0 | 1 => Err(Error::InvalidInput(format!("θ must be at least 2, got {theta}"))),
        2 => Ok(2.0),
        _ => {
            let t = theta as f64;
            Ok(2.0 * ((t - 1.0) / (t - 2.0)) * (t - 1.0).ln())
        }
    }
}

/// The coupling β = L₁+L₂ at which x* is the non-trivial critical point.
pub fn beta_of_xstar(theta: usize, x: f64) -> Result<f64> {
    let t = theta as f64;
    if theta < 2 || !(x > 1.0 - 1.0 / t && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} outside (1 − 1/θ, 1) for θ = {theta}")));
    }
    Ok((t - 1.0) / (t * x - 1.0) * (x * (t - 1.0) / (1.0 - x)).ln())
}

/// L₁ at which the maximiser leaves the uniform point along L₂ = `l2`,
/// found by bisection on [lo, hi].
pub fn locate_jump(theta: usize, l2: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let off = |l1: f64| -> Result<bool> {
        let r = maximize_phi(theta, l1, l2)?;
        Ok(r.best().point.x[0] > 1.0 / theta as f64 + 1e-2)
    };
    let (mut a, mut b) = (lo, hi);
    if off(a)? || !off(b)? {
        return Err(Error::Verification(format!("no jump bracketed in [{lo}, {hi}]")));
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if off(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Phase {
    Disordered,
    Ising,
    #[serde(rename = "XY")]
    Xy,
    Nematic,
    Ferromagnetic,
    FourthPhase,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseLabel {
    pub phase: Phase,
    /// Labels resting on the unproved description right of 𝒞.
    pub conjectured: bool,
    /// Set where the label cannot be decided (J₁ = 0, J₂ ≤ −3).
    pub not_proven: bool,
    pub result: MaxResult,
}

/// (K₁, K₂) for θ = 2 canonical couplings.
fn to_xxz(c: &Canonical) -> (f64, f64) {
    (2.0 * (c.l1 + c.l2), 2.0 * (c.l1 - c.l2))
}

pub fn classify_phase(theta: usize, params: Params) -> Result<PhaseLabel> {
    let c = convert_parameters(theta, params)?;
    let result = maximize_phi(theta, c.l1, c.l2)?;
    let band = BOUNDARY_BAND;
    let label = |phase, conjectured, not_proven, result| PhaseLabel { phase, conjectured, not_proven, result };
    match theta {
        2 => {
            let (k1, k2) = to_xxz(&c);
            let near = |a: f64, b: f64| (a - b).abs() <= band;
            let on_line = (near(k1, 4.0) && k2 <= 4.0 + band)
                || (near(k2, 4.0) && k1 <= 4.0 + band)
                || (near(k1, k2) && k1 >= 4.0 - band);
            let phase = if on_line {
                Phase::Boundary
            } else if k1 <= 4.0 && k2 <= 4.0 {
                Phase::Disordered
            } else if k2 > k1 {
                Phase::Ising
            } else {
                Phase::Xy
            };
            Ok(label(phase, false, false, result))
        }
        3 => {
            let (j1, j2) = (c.l1, c.l1 + c.l2);
            let sym = phi(3, c.l1, c.l2, &SimplexPoint::uniform(3))?;
            let in_a = result.value - sym <= TIE_TOLERANCE;
            let tie = in_a && result.maximizers.len() > 1;
            let log16 = 16f64.ln();
            if (j1.abs() <= band && j2 <= -3.0) || (j1 == 0.0 && j2 <= -3.0) {
                return Ok(label(Phase::Boundary, false, true, result));
            }
            let on_known_line = ((j2 - log16).abs() <= band && j1 <= j2 + band)
                || ((j1 - j2).abs() <= band && j2 >= log16 - band);
            if tie || on_known_line {
                return Ok(label(Phase::Boundary, false, false, result));
            }
            if in_a {
                return Ok(label(Phase::Disordered, false, false, result));
            }
            if j2 > j1 {
                Ok(label(Phase::Nematic, false, false, result))
            } else if j1 >= 0.0 {
                Ok(label(Phase::Ferromagnetic, true, false, result))
            } else {
                Ok(label(Phase::FourthPhase, true, false, result))
            }
        }
        _ => {
            let beta = c.l1 + c.l2;
            let bc = beta_c(theta)?;
            let phase = if (beta - bc).abs() <= band {
                Phase::Boundary
            } else if beta < bc {
                Phase::Disordered
            } else {
                Phase::Nematic
            };
            Ok(label(phase, false, false, result))
        }
    }
}

/// φ on region R for J₁ ≥ J₂, with y₁ = x₁ − x₃ and x₃ = 1 − x₁ − x₂.
pub fn phi_j_region(j1: f64, j2: f64, x1: f64, x2: f64) -> f64 {
    let x3 = 1.0 - x1 - x2;
    let y = 2.0 * x1 + x2 - 1.0;
    0.5 * (j2 * (-2.0 * x1 * x1 + x2 * x2 - 2.0 * x1 * x2 + 2.0 * x1) + j1 * y * y)
        - xlogx(x1)
        - xlogx(x2)
        - xlogx(x3)
}

/// (∂φ/∂x₁, ∂φ/∂x₂) of [`phi_j_region`].
pub fn phi_j_region_gradient(j1: f64, j2: f64, x1: f64, x2: f64) -> (f64, f64) {
    let x3 = 1.0 - x1 - x2;
    let y = 2.0 * x1 + x2 - 1.0;
    (
        (2.0 * j1 - j2) * y - x1.ln() + x3.ln(),
        j1 * y + j2 * (x2 - x1) - x2.ln() + x3.ln(),
    )
}

/// [[φ₁₁, φ₁₂], [φ₁₂, φ₂₂]] of [`phi_j_region`].
pub fn phi_j_region_hessian(j1: f64, j2: f64, x1: f64, x2: f64) -> [[f64; 2]; 2] {
    let x3 = 1.0 - x1 - x2;
    let a = 2.0 * j1 - j2;
    let h11 = 2.0 * a - 1.0 / x1 - 1.0 / x3;
    let h12 = a - 1.0 / x3;
    let h22 = j1 + j2 - 1.0 / x2 - 1.0 / x3;
    [[h11, h12], [h12, h22]]
}

/// Whether (⅓,⅓) is a global maximiser of φ on region R.
pub fn uniform_is_global_max_j(j1: f64, j2: f64) -> Result<bool> {
    // The refinement does the precise work; a coarser grid only seeds it.
    let r = maximize_on_grid(3, j1, j2 - j1, 0.0, 330)?;
    let sym = phi_j_region(j1, j2, 1.0 / 3.0, 1.0 / 3.0);
    Ok(r.value - sym <= 1e-12)
}

/// Boundary 𝒞 of the disordered region inside J₁ ≥ J₂, traced at
/// `resolution` evenly spaced heights J₂ ∈ [`j2_min`, log 16).
///
/// At each height the boundary is bracketed between the diagonal (inside)
/// and J₁ = (J₂+3)/2 + 1 (outside, past the local-maximum line) and found
/// by bisection.
pub fn trace_curve_c(resolution: usize, j2_min: f64) -> Result<Vec<(f64, f64)>> {
    if resolution < 10 {
        return Err(Error::InvalidInput(format!("resolution must be at least 10, got {resolution}")));
    }
    let top = 16f64.ln() - 1e-4;
    let heights: Vec<f64> = (0..resolution)
        .map(|i| j2_min + (top - j2_min) * i as f64 / (resolution - 1) as f64)
        .collect();
    heights
        .par_iter()
        .map(|&j2| {
            let mut a = j2;
            let mut b = (j2 + 3.0) / 2.0 + 1.0;
            if !uniform_is_global_max_j(a, j2)? || uniform_is_global_max_j(b, j2)? {
                return Err(Error::Verification(format!(
                    "boundary of the disordered region not bracketed at J₂ = {j2}"
                )));
            }
            while b - a > 1e-9 {
                let m = 0.5 * (a + b);
                if uniform_is_global_max_j(m, j2)? {
                    a = m;
                } else {
                    b = m;
                }
            }
            Ok((0.5 * (a + b), j2))
        })
        .collect()
}

/// Asymptotic position α of the largest coordinate in the ferromagnetic
/// wedge (α = 1) and the fourth phase (α = J₂/(J₁+J₂)), clamped to [½, 1].
pub fn quadratic_alpha(j1: f64, j2: f64) -> Result<f64> {
    if j1 < 0.0 && j1 >= 0.5 * j2 {
        Ok((j2 / (j1 + j2)).clamp(0.5, 1.0))
    } else if j1 > 0.0 && j1 >= j2 {
        Ok(1.0)
    } else {
        Err(Error::Domain(format!(
            "({j1}, {j2}) is in neither the fourth-phase nor the ferromagnetic wedge"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        let p = SimplexPoint::new(vec![0.5, 0.5], vec![0.0, 0.0]);
        assert!((phi(2, 0.0, 0.0, &p).unwrap() - 2f64.ln()).abs() < 1e-15);
        let u = SimplexPoint::uniform(3);
        assert!((phi(3, 0.7, 1.1, &u).unwrap() - (1.8 / 6.0 + 3f64.ln())).abs() < 1e-14);
        let e = SimplexPoint::new(vec![1.0, 0.0], vec![1.0, 0.0]);
        assert!((phi(2, 0.4, 0.9, &e).unwrap() - 0.2).abs() < 1e-15);
        assert!(phi(2, 0.0, 0.0, &SimplexPoint::new(vec![0.4, 0.6], vec![0.0; 2])).is_err());
    }

    #[test]
    fn grid_counts() {
        assert_eq!(ordered_grid(2, 10).len(), 6);
        assert_eq!(ordered_grid(3, 6).len(), 7);
    }

    #[test]
    fn critical_values() {
        assert_eq!(beta_c(2).unwrap(), 2.0);
        assert!((beta_c(3).unwrap() - 16f64.ln()).abs() < 1e-15);
        assert!((beta_c(4).unwrap() - 3.0 * 3f64.ln()).abs() < 1e-14);
        assert!((beta_of_xstar(2, 0.9).unwrap() - 9f64.ln() / 0.8).abs() < 1e-14);
        assert!((beta_of_xstar(3, 2.0 / 3.0 + 1e-7).unwrap() - 16f64.ln()).abs() < 1e-5);
    }

    #[test]
    fn subcritical_maximiser_is_uniform() {
        let r = maximize_phi(2, 0.9, 0.5).unwrap();
        assert_eq!(r.maximizers.len(), 1);
        assert!((r.best().point.x[0] - 0.5).abs() < 1e-8);
        assert!((r.value - (2f64.ln() + 1.4 / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn spin_one_critical_pair() {
        let r = maximize_phi(3, 16f64.ln() - 1.0, 1.0).unwrap();
        let xs: Vec<f64> = r.maximizers.iter().map(|m| m.point.x[0]).collect();
        assert_eq!(xs.len(), 2, "{xs:?}");
        assert!(xs.iter().any(|x| (x - 1.0 / 3.0).abs() < 1e-6));
        assert!(xs.iter().any(|x| (x - 2.0 / 3.0).abs() < 1e-6));
    }

    #[test]
    fn alpha() {
        assert!((quadratic_alpha(-1.0, -4.0).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(quadratic_alpha(1.0, 0.5).unwrap(), 1.0);
        assert!((quadratic_alpha(-1.0, -2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(quadratic_alpha(-1.0, 0.0).is_err());
    }

    #[test]
    fn region_gradient_matches_finite_differences() {
        let (j1, j2) = (1.3, 0.4);
        let (x1, x2) = (0.45, 0.3);
        let (g1, g2) = phi_j_region_gradient(j1, j2, x1, x2);
        let e = 1e-6;
        let f1 = (phi_j_region(j1, j2, x1 + e, x2) - phi_j_region(j1, j2, x1 - e, x2)) / (2.0 * e);
        let f2 = (phi_j_region(j1, j2, x1, x2 + e) - phi_j_region(j1, j2, x1, x2 - e)) / (2.0 * e);
        assert!((g1 - f1).abs() < 1e-7 && (g2 - f2).abs() < 1e-7);
    }
}
