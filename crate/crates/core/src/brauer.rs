//! Brauer diagrams, loop-counted multiplication and the tensor-space
//! representations generated by swaps and bars.
//!
//! Points `0..n` are the north row (1⁺..n⁺), points `n..2n` the south row
//! (1⁻..n⁻). In a product `d1·d2` the north row of `d1` is glued to the
//! south row of `d2`. Under [`represent`] the south labels index rows and
//! the north labels index columns, so `represent(d1)·represent(d2) =
//! θ^loops · represent(d1·d2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::tensor::{Flavor, PairOp, TensorSpace};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerDiagram {
    n: usize,
    partner: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Adjacent transposition of sites i, i+1 (0-based).
    Swap(usize),
    /// Bar joining sites i, i+1 in both rows (0-based).
    Bar(usize),
}

impl BrauerDiagram {
    /// Builds a diagram from its partner map over the 2n points.
    pub fn from_partner(n: usize, partner: Vec<usize>) -> Result<Self> {
        if partner.len() != 2 * n
            || partner
                .iter()
                .enumerate()
                .any(|(i, &j)| j >= 2 * n || j == i || partner[j] != i)
        {
            return Err(Error::InvalidInput(format!(
                "{partner:?} is not a perfect matching on {} points",
                2 * n
            )));
        }
        Ok(BrauerDiagram { n, partner })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![usize::MAX; 2 * n];
        for &(a, b) in pairs {
            if a >= 2 * n || b >= 2 * n || partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::InvalidInput(format!("bad pair ({a},{b})")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        Self::from_partner(n, partner)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, point: usize) -> usize {
        self.partner[point]
    }

    pub fn north(&self, i: usize) -> usize {
        i
    }

    pub fn south(&self, i: usize) -> usize {
        self.n + i
    }

    /// Canonical pair list: each pair sorted, list sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n)
            .filter(|&i| i < self.partner[i])
            .map(|i| (i, self.partner[i]))
            .collect()
    }

    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
        BrauerDiagram { n, partner }
    }

    /// The transposition (x y), 1-based with x < y.
    pub fn transposition(n: usize, x: usize, y: usize) -> Result<Self> {
        check_sites(n, x, y)?;
        let mut d = Self::identity(n);
        let (x, y) = (x - 1, y - 1);
        d.link(n + x, y);
        d.link(n + y, x);
        Ok(d)
    }

    /// The bar (x̄ y), 1-based with x < y.
    pub fn bar(n: usize, x: usize, y: usize) -> Result<Self> {
        check_sites(n, x, y)?;
        let mut d = Self::identity(n);
        let (x, y) = (x - 1, y - 1);
        d.link(x, y);
        d.link(n + x, n + y);
        Ok(d)
    }

    /// The permutation diagram joining x⁻ to σ(x)⁺.
    pub fn permutation(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        let pairs: Vec<_> = sigma.iter().enumerate().map(|(x, &s)| (n + x, s)).collect();
        Self::from_pairs(n, &pairs)
    }

    fn link(&mut self, a: usize, b: usize) {
        self.partner[a] = b;
        self.partner[b] = a;
    }

    pub fn generator(n: usize, g: Generator) -> Self {
        match g {
            Generator::Swap(i) => Self::transposition(n, i + 1, i + 2).unwrap(),
            Generator::Bar(i) => Self::bar(n, i + 1, i + 2).unwrap(),
        }
    }

    /// Number of bars in the north row (equal to the number in the south row).
    pub fn bar_count(&self) -> usize {
        (0..self.n).filter(|&i| self.partner[i] < self.n).count() / 2
    }

    /// Writes the diagram as a word in adjacent swaps and bars whose
    /// loop-free product is the diagram.
    pub fn decompose(&self) -> Vec<Generator> {
        let n = self.n;
        let is_north = |p: usize| p < n;
        let mut south_bars = Vec::new();
        let mut north_bars = Vec::new();
        let mut through = Vec::new();
        for i in 0..n {
            let s = n + i;
            let q = self.partner[s];
            if is_north(q) {
                through.push((i, q));
            } else if s < q {
                south_bars.push((i, q - n));
            }
            let q = self.partner[i];
            if is_north(q) && i < q {
                north_bars.push((i, q));
            }
        }
        let k = south_bars.len();
        let mut alpha = vec![0; n];
        let mut beta = vec![0; n];
        for (m, (&(p, q), &(r, s))) in south_bars.iter().zip(&north_bars).enumerate() {
            alpha[p] = 2 * m;
            alpha[q] = 2 * m + 1;
            beta[2 * m] = r;
            beta[2 * m + 1] = s;
        }
        for (j, &(u, v)) in through.iter().enumerate() {
            alpha[u] = 2 * k + j;
            beta[2 * k + j] = v;
        }
        let mut word = permutation_word(&alpha);
        word.extend((0..k).map(|m| Generator::Bar(2 * m)));
        word.extend(permutation_word(&beta));
        word
    }
}

fn check_sites(n: usize, x: usize, y: usize) -> Result<()> {
    if !(1 <= x && x < y && y <= n) {
        return Err(Error::InvalidInput(format!(
            "need 1 ≤ x < y ≤ n, got x={x}, y={y}, n={n}"
        )));
    }
    Ok(())
}

/// Adjacent swaps s_{j₁}, …, s_{j_m} with σ = s_{j_m}∘…∘s_{j₁}, found by
/// bubble-sorting σ's one-line notation.
fn permutation_word(sigma: &[usize]) -> Vec<Generator> {
    let mut a = sigma.to_vec();
    let mut word = Vec::new();
    let n = a.len();
    for pass in 0..n {
        for j in 0..n.saturating_sub(1 + pass) {
            if a[j] > a[j + 1] {
                a.swap(j, j + 1);
                word.push(Generator::Swap(j));
            }
        }
    }
    word
}

/// Concatenates `d1` below `d2`; returns the product and its loop count.
pub fn multiply(d1: &BrauerDiagram, d2: &BrauerDiagram) -> Result<(BrauerDiagram, usize)> {
    if d1.n != d2.n {
        return Err(Error::InvalidInput(format!(
            "diagram sizes differ: {} and {}",
            d1.n, d2.n
        )));
    }
    let n = d1.n;
    let mut partner = vec![usize::MAX; 2 * n];
    let mut seen_middle = vec![false; n];
    // Outer points: south of d1 (result south) and north of d2 (result north).
    // Walk each strand until it exits on an outer point.
    for start in 0..2 * n {
        if partner[start] != usize::MAX {
            continue;
        }
        // in_d1 = current point lives in d1's coordinate system.
        let (mut in_d1, mut p) = if start >= n { (true, start) } else { (false, start) };
        let end = loop {
            if in_d1 {
                let q = d1.partner[p];
                if q >= n {
                    break q;
                }
                seen_middle[q] = true;
                in_d1 = false;
                p = n + q;
            } else {
                let q = d2.partner[p];
                if q < n {
                    break q;
                }
                seen_middle[q - n] = true;
                in_d1 = true;
                p = q - n;
            }
        };
        partner[start] = end;
        partner[end] = start;
    }
    let mut loops = 0;
    for m in 0..n {
        if seen_middle[m] {
            continue;
        }
        loops += 1;
        // Alternate d1 (north side) and d2 (south side) around the loop.
        let mut p = m;
        loop {
            seen_middle[p] = true;
            let q = d1.partner[p];
            seen_middle[q] = true;
            let r = d2.partner[n + q] - n;
            if r == m {
                break;
            }
            p = r;
        }
    }
    Ok((BrauerDiagram { n, partner }, loops))
}

impl fmt::Display for BrauerDiagram {
    /// `1+:3+ 2+:2- 1-:3-`: 1-based points, `+` north, `-` south.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |p: usize| {
            if p < self.n {
                format!("{}+", p + 1)
            } else {
                format!("{}-", p - self.n + 1)
            }
        };
        let s: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(a, b)| format!("{}:{}", label(a), label(b)))
            .collect();
        write!(f, "{}", s.join(" "))
    }
}

impl fmt::Debug for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BrauerDiagram({self})")
    }
}

impl FromStr for BrauerDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for tok in s.split_whitespace() {
            let (a, b) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected point:point, got {tok:?}")))?;
            raw.push((parse_point(a)?, parse_point(b)?));
        }
        let n = raw.len();
        let pairs: Vec<_> = raw
            .into_iter()
            .map(|((i, north), (j, north2))| {
                let p = if north { i } else { n + i };
                let q = if north2 { j } else { n + j };
                (p, q)
            })
            .collect();
        if pairs.iter().any(|&(p, q)| p >= 2 * n || q >= 2 * n) {
            return Err(Error::Parse(format!("point out of range in {s:?}")));
        }
        BrauerDiagram::from_pairs(n, &pairs).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn parse_point(t: &str) -> Result<(usize, bool)> {
    let (num, north) = if let Some(r) = t.strip_suffix('+') {
        (r, true)
    } else if let Some(r) = t.strip_suffix('-') {
        (r, false)
    } else {
        return Err(Error::Parse(format!("point {t:?} lacks a +/- row marker")));
    };
    let i: usize = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad point index in {t:?}")))?;
    if i == 0 {
        return Err(Error::Parse("points are 1-based".into()));
    }
    Ok((i - 1, north))
}

/// Every diagram on 2n points; there are (2n−1)!! of them.
pub fn all_diagrams(n: usize) -> Vec<BrauerDiagram> {
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; 2 * n];
    matchings(&mut partner, n, &mut out);
    out
}

fn matchings(partner: &mut Vec<usize>, n: usize, out: &mut Vec<BrauerDiagram>) {
    let Some(first) = partner.iter().position(|&p| p == usize::MAX) else {
        out.push(BrauerDiagram { n, partner: partner.clone() });
        return;
    };
    for j in first + 1..2 * n {
        if partner[j] == usize::MAX {
            partner[first] = j;
            partner[j] = first;
            matchings(partner, n, out);
            partner[first] = usize::MAX;
            partner[j] = usize::MAX;
        }
    }
}

/// A uniformly random diagram.
pub fn random_diagram<R: Rng>(n: usize, rng: &mut R) -> BrauerDiagram {
    let mut pts: Vec<usize> = (0..2 * n).collect();
    pts.shuffle(rng);
    let pairs: Vec<_> = pts.chunks(2).map(|c| (c[0], c[1])).collect();
    BrauerDiagram::from_pairs(n, &pairs).expect("shuffled points form a matching")
}

/// Formal real combination of diagrams.
#[derive(Clone, Debug, PartialEq)]
pub struct BrauerElement {
    pub n: usize,
    terms: BTreeMap<BrauerDiagram, f64>,
}

impl BrauerElement {
    pub fn zero(n: usize) -> Self {
        BrauerElement { n, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: BrauerDiagram) -> Self {
        let n = d.n;
        let mut e = Self::zero(n);
        e.add_term(d, 1.0);
        e
    }

    pub fn add_term(&mut self, d: BrauerDiagram, c: f64) {
        let entry = self.terms.entry(d.clone()).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&d);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BrauerDiagram, f64)> {
        self.terms.iter().map(|(d, &c)| (d, c))
    }

    pub fn coefficient(&self, d: &BrauerDiagram) -> f64 {
        self.terms.get(d).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Bilinear extension of [`multiply`], each loop contributing a factor θ.
pub fn element_multiply(a: &BrauerElement, b: &BrauerElement, theta: f64) -> Result<BrauerElement> {
    if a.n != b.n {
        return Err(Error::InvalidInput("element sizes differ".into()));
    }
    let mut out = BrauerElement::zero(a.n);
    for (d1, c1) in a.terms() {
        for (d2, c2) in b.terms() {
            let (d, loops) = multiply(d1, d2)?;
            out.add_term(d, c1 * c2 * theta.powi(loops as i32));
        }
    }
    Ok(out)
}

/// Dense matrix of a diagram: swaps act as T, bars as Q or P.
pub fn represent(d: &BrauerDiagram, theta: usize, flavor: Flavor) -> Result<DMatrix<f64>> {
    let sp = TensorSpace::new(theta, d.n)?;
    let mut m = DMatrix::identity(sp.dim(), sp.dim());
    // Left-multiplying builds the product from the right end of the word.
    for g in d.decompose().into_iter().rev() {
        let (op, i) = match g {
            Generator::Swap(i) => (PairOp::Swap, i),
            Generator::Bar(i) => (PairOp::Bar(flavor), i),
        };
        m = sp.apply_pair_left(op, i, i + 1, &m);
    }
    Ok(m)
}

/// Dense matrix of a formal combination.
pub fn represent_element(e: &BrauerElement, theta: usize, flavor: Flavor) -> Result<DMatrix<f64>> {
    let sp = TensorSpace::new(theta, e.n)?;
    let mut m = DMatrix::zeros(sp.dim(), sp.dim());
    for (d, c) in e.terms() {
        m += represent(d, theta, flavor)? * c;
    }
    Ok(m)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HomomorphismReport {
    pub n: usize,
    pub theta: usize,
    pub flavor: Flavor,
    pub pairs_checked: usize,
    pub max_residual: f64,
    pub passed: bool,
    /// First failing pair in the textual diagram format.
    pub first_failure: Option<(String, String)>,
}

/// Checks represent(d1)·represent(d2) = θ^loops·represent(d1·d2).
/// `samples = None` runs over all pairs of diagrams.
pub fn verify_homomorphism<R: Rng>(
    n: usize,
    theta: usize,
    samples: Option<usize>,
    flavor: Flavor,
    rng: &mut R,
) -> Result<HomomorphismReport> {
    let pairs: Vec<(BrauerDiagram, BrauerDiagram)> = match samples {
        None => {
            let all = all_diagrams(n);
            all.iter()
                .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
                .collect()
        }
        Some(s) => (0..s)
            .map(|_| (random_diagram(n, rng), random_diagram(n, rng)))
            .collect(),
    };
    let mut max_residual: f64 = 0.0;
    let mut first_failure = None;
    for (a, b) in &pairs {
        let (c, loops) = multiply(a, b)?;
        let lhs = represent(a, theta, flavor)? * represent(b, theta, flavor)?;
        let rhs = represent(&c, theta, flavor)? * (theta as f64).powi(loops as i32);
        let r = (lhs - rhs).amax();
        max_residual = max_residual.max(r);
        if r > 1e-12 && first_failure.is_none() {
            first_failure = Some((a.to_string(), b.to_string()));
        }
    }
    Ok(HomomorphismReport {
        n,
        theta,
        flavor,
        pairs_checked: pairs.len(),
        max_residual,
        passed: first_failure.is_none(),
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts() {
        for (n, c) in [(1, 1), (2, 3), (3, 15), (4, 105), (5, 945)] {
            assert_eq!(all_diagrams(n).len(), c);
        }
    }

    #[test]
    fn bar_squares_to_loop() {
        let e = BrauerDiagram::bar(3, 1, 2).unwrap();
        let (d, l) = multiply(&e, &e).unwrap();
        assert_eq!((d, l), (e.clone(), 1));
        let id = BrauerDiagram::identity(3);
        assert_eq!(multiply(&id, &e).unwrap(), (e.clone(), 0));
        let t = BrauerDiagram::transposition(3, 1, 2).unwrap();
        assert_eq!(multiply(&t, &t).unwrap(), (id, 0));
        assert_eq!(multiply(&e, &t).unwrap(), (e, 0));
    }

    #[test]
    fn figure_style_generators() {
        let t = BrauerDiagram::transposition(6, 2, 4).unwrap();
        assert_eq!(t.partner(t.south(1)), t.north(3));
        assert_eq!(t.partner(t.south(3)), t.north(1));
        let b = BrauerDiagram::bar(6, 3, 4).unwrap();
        assert_eq!(b.partner(2), 3);
        assert_eq!(b.to_string(), "1+:1- 2+:2- 3+:4+ 5+:5- 6+:6- 3-:4-");
        // Swap (2 4) stacked with bar (3 4) closes no loop; the bar then
        // stacked on itself closes one.
        let (tb, l) = multiply(&b, &t).unwrap();
        assert_eq!(l, 0);
        let (_, l2) = multiply(&tb, &b).unwrap();
        assert_eq!(l2, 0);
        assert_eq!(multiply(&b, &b).unwrap().1, 1);
    }

    #[test]
    fn decompositions_multiply_back() {
        for n in 1..=4 {
            for d in all_diagrams(n) {
                let mut acc = BrauerDiagram::identity(n);
                for g in d.decompose() {
                    let (next, loops) = multiply(&acc, &BrauerDiagram::generator(n, g)).unwrap();
                    assert_eq!(loops, 0);
                    acc = next;
                }
                assert_eq!(acc, d, "word for {d} multiplies to {acc}");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let d: BrauerDiagram = "1+:3+ 2+:2- 1-:3-".parse().unwrap();
        assert_eq!(d.to_string(), "1+:3+ 2+:2- 1-:3-");
        assert!("1+:1+".parse::<BrauerDiagram>().is_err());
    }

    #[test]
    fn homomorphism_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(verify_homomorphism(2, 2, None, Flavor::Q, &mut rng).unwrap().passed);
        assert!(verify_homomorphism(3, 3, Some(50), Flavor::P, &mut rng).unwrap().passed);
        assert!(verify_homomorphism(3, 2, Some(50), Flavor::Q, &mut rng).unwrap().passed);
    }
}
