//! Main terms, constants and normalized deviations of exact counts from
//! their asymptotic predictions.
//!
//! Deviation convention: the normalizing logarithms are clamped below at 1
//! (`max(log X, 1)`), so scales stay positive near `X = 1`.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arith::ArithTable;
use crate::closed_forms::f_closed;
use crate::counts::{m_fast, w_counts, HeightCounter};
use crate::error::{Error, Result};
use crate::quadrature::CompensatedSum;

/// `zeta(3)` by Euler–Maclaurin: `sum_{n < 100} n^-3` plus the integral
/// tail, the half end term and three Bernoulli corrections. The first
/// omitted correction is below `1e-17`.
pub fn zeta3_value() -> f64 {
    const N: u32 = 100;
    let mut s = CompensatedSum::new();
    for n in 1..N {
        s.add(1.0 / (n as f64).powi(3));
    }
    let nf = N as f64;
    s.add(1.0 / (2.0 * nf * nf));
    s.add(1.0 / (2.0 * nf.powi(3)));
    s.add(1.0 / (4.0 * nf.powi(4)));
    s.add(-1.0 / (12.0 * nf.powi(6)));
    s.add(1.0 / (12.0 * nf.powi(8)));
    s.value()
}

/// The constants of the leading terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantSet {
    pub zeta2: f64,
    pub zeta3: f64,
    /// `66 - 2 pi^2`.
    pub c: f64,
    /// `c zeta(2) / zeta(3)`, the leading constant of `M(X, Y)` and `P(X)`.
    pub c0: f64,
    /// `(33 - 6 zeta(2)) / (2 zeta(2) zeta(3))`, the `B log B` coefficient of `N(B)`.
    pub kappa2: f64,
    /// `48 / zeta(3) - 12 / zeta(2)`, the coefficient of `B` in `N(B) - N0(B)`.
    pub boundary: f64,
}

impl ConstantSet {
    pub fn new() -> Self {
        let zeta2 = PI * PI / 6.0;
        let zeta3 = zeta3_value();
        let c = 66.0 - 2.0 * PI * PI;
        Self {
            zeta2,
            zeta3,
            c,
            c0: c * zeta2 / zeta3,
            kappa2: (33.0 - 6.0 * zeta2) / (2.0 * zeta2 * zeta3),
            boundary: 48.0 / zeta3 - 12.0 / zeta2,
        }
    }

    /// `zeta(2) / zeta(3)`, the full singular series.
    pub fn singular_series(&self) -> f64 {
        self.zeta2 / self.zeta3
    }

    /// Leading constant of `W_3 / Z^2`.
    pub fn w3_density(&self) -> f64 {
        48.0 / self.zeta2
    }
}

impl Default for ConstantSet {
    fn default() -> Self {
        Self::new()
    }
}

/// `sum_{q <= Q} phi(q) / q^3`, ascending.
pub fn singular_series_partial(q_max: usize, arith: &ArithTable) -> Result<f64> {
    if q_max == 0 || q_max > arith.limit() {
        return Err(Error::InvalidArgument(format!(
            "Q = {q_max} outside the arithmetic table 1..={}",
            arith.limit()
        )));
    }
    Ok((1..=q_max)
        .map(|q| arith.phi(q) as f64 / (q as f64).powi(3))
        .collect::<CompensatedSum>()
        .value())
}

/// Memoized `F(n)` as `f64`.
#[derive(Debug, Default)]
pub struct FCache(HashMap<u64, f64>);

impl FCache {
    pub fn get(&mut self, n: u64) -> f64 {
        *self.0.entry(n).or_insert_with(|| f_closed(n).to_f64())
    }
}

/// `4 Y^2 sum_q (phi(q) / q) F(floor(X / q))`; terms with `q > X` vanish.
pub fn main_term_thm1(x: f64, y: f64) -> Result<f64> {
    if !(x >= 1.5) || !(y >= x) || !y.is_finite() {
        return Err(Error::InvalidArgument(format!("need 3/2 <= X <= Y, got ({x}, {y})")));
    }
    let q_max = x.floor() as usize;
    let arith = ArithTable::new(q_max)?;
    let mut cache = FCache::default();
    let s: CompensatedSum = (1..=q_max)
        .map(|q| arith.phi(q) as f64 / q as f64 * cache.get((x / q as f64).floor() as u64))
        .collect();
    Ok(4.0 * y * y * s.value())
}

/// `2 (33 - pi^2) (zeta(2) / zeta(3)) (XY)^2`.
pub fn main_term_simple(x: f64, y: f64) -> f64 {
    let k = ConstantSet::new();
    k.c0 * (x * y).powi(2)
}

/// An exact count set against its predicted main term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationRecord {
    pub x: Option<u64>,
    pub y: Option<u64>,
    pub b: Option<u64>,
    pub exact: u64,
    pub main_term: f64,
    /// Error-term scale the deviation is divided by.
    pub scale: f64,
    /// `|exact - main_term| / scale`.
    pub deviation: f64,
}

impl DeviationRecord {
    fn new(x: Option<u64>, y: Option<u64>, b: Option<u64>, exact: u64, main_term: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() || !main_term.is_finite() {
            return Err(Error::InvalidArgument(format!("degenerate deviation scale {scale}")));
        }
        let deviation = (exact as f64 - main_term).abs() / scale;
        Ok(Self { x, y, b, exact, main_term, scale, deviation })
    }
}

/// `(XY)^{3/2} max(log X, 1) log Y`.
pub fn thm1_scale(x: f64, y: f64) -> f64 {
    (x * y).powf(1.5) * x.ln().max(1.0) * y.ln()
}

/// `M(X, Y)` against [`main_term_thm1`].
pub fn deviation_thm1(x: u64, y: u64) -> Result<DeviationRecord> {
    let exact = m_fast(x, y)?;
    let main = main_term_thm1(x as f64, y as f64)?;
    DeviationRecord::new(Some(x), Some(y), None, exact, main, thm1_scale(x as f64, y as f64))
}

/// Singular-integral sum `sum_{q <= X} (phi(q)/q) J(q)` against `M(X, Y)`,
/// normalized like [`deviation_thm1`].
pub fn deviation_singular_sum(x: u64, y: u64) -> Result<DeviationRecord> {
    let exact = m_fast(x, y)?;
    let arith = ArithTable::new(x as usize)?;
    let s: CompensatedSum = (1..=x)
        .map(|q| arith.phi(q as usize) as f64 / q as f64 * crate::special::j_closed(q, x as f64, y as f64))
        .collect();
    DeviationRecord::new(Some(x), Some(y), None, exact, s.value(), thm1_scale(x as f64, y as f64))
}

/// Least-squares fit `N(B) ~ kappa B log B + C B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Fit {
    pub kappa: f64,
    pub c: f64,
}

impl Theorem2Fit {
    pub fn predict(&self, b: f64) -> f64 {
        self.kappa * b * b.ln() + self.c * b
    }
}

/// Solves the 2x2 normal equations for samples `(B, N(B))`.
pub fn fit_theorem2(samples: &[(f64, f64)]) -> Result<Theorem2Fit> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("fit needs at least two samples".into()));
    }
    let (mut s11, mut s12, mut s22, mut r1, mut r2) =
        (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for &(b, n) in samples {
        if !(b > 1.0) {
            return Err(Error::InvalidArgument(format!("sample height {b} must exceed 1")));
        }
        let u = b * b.ln();
        s11.add(u * u);
        s12.add(u * b);
        s22.add(b * b);
        r1.add(u * n);
        r2.add(b * n);
    }
    let (a11, a12, a22) = (s11.value(), s12.value(), s22.value());
    let det = a11 * a22 - a12 * a12;
    if !(det.abs() > 1e-12 * a11 * a22) {
        return Err(Error::InvalidArgument("singular fit: samples need two distinct heights".into()));
    }
    let (b1, b2) = (r1.value(), r2.value());
    Ok(Theorem2Fit { kappa: (b1 * a22 - b2 * a12) / det, c: (a11 * b2 - a12 * b1) / det })
}

/// `(B, N(B))` for every height in the grid, from one height profile.
pub fn theorem2_samples(grid: &[u64]) -> Result<Vec<(u64, u64)>> {
    let top = *grid.iter().max().ok_or_else(|| Error::InvalidArgument("empty grid".into()))?;
    let counter = HeightCounter::for_height(top)?;
    grid.iter().map(|&b| Ok((b, counter.n_times4(b)? / 4))).collect()
}

/// `B^{7/8} max(log B, 1)^2`.
pub fn thm2_scale(b: f64) -> f64 {
    b.powf(0.875) * b.ln().max(1.0).powi(2)
}

/// `N(B) - N0(B)` from the boundary counts, against `(48/zeta(3) - 12/zeta(2)) B`,
/// normalized by `B^{3/4} max(log B, 1)^2`.
pub fn boundary_check(b: u64) -> Result<DeviationRecord> {
    let w = w_counts(b)?;
    let k = ConstantSet::new();
    let bf = b as f64;
    DeviationRecord::new(None, None, Some(b), w.total() / 4, k.boundary * bf, bf.powf(0.75) * bf.ln().max(1.0).powi(2))
}

/// `sum (|x| |y|)^{-2s}` over primitive orthogonal pairs with `|x| |y| <= cutoff`,
/// grouped by the height product and summed in ascending order.
pub fn height_zeta_truncated(s: f64, cutoff: u64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::InvalidArgument(format!("need s > 1, got {s}")));
    }
    let counter = HeightCounter::new(cutoff)?;
    Ok((1..=cutoff)
        .map(|h| counter.primitive_at_height_product(h) as f64 * (h as f64).powf(-2.0 * s))
        .collect::<CompensatedSum>()
        .value())
}
