//! Hyperbola method with quadratic sample points `l^2`, `1 <= l <= L`.
//!
//! Real second arguments `sqrt(B) / l^2` are floored. Since
//! `floor(sqrt(B) / k) = floor(floor(sqrt B) / k)` for integer `k`, every
//! bound is computed from `Z = isqrt(B)` in integer arithmetic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{isqrt, ArithTable};
use crate::asymptotics::{ConstantSet, FCache};
use crate::closed_forms::{f_leading_coefficient, g_value};
use crate::counts::{m_fast, HeightCounter};
use crate::error::{overflow, Error, Result};
use crate::quadrature::CompensatedSum;

/// `L` minimal with `B^{1/4} <= L^2`, i.e. `(L - 1)^8 < B <= L^8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticPartition {
    pub b: u64,
    pub l: u64,
    /// `isqrt(B)`.
    pub z: u64,
}

impl QuadraticPartition {
    pub fn sample_points(&self) -> Vec<u64> {
        (1..=self.l).map(|l| l * l).collect()
    }
}

fn pow8(l: u64) -> u128 {
    (l as u128).pow(8)
}

pub fn quadratic_partition(b: u64) -> Result<QuadraticPartition> {
    if b == 0 {
        return Err(Error::InvalidArgument("height bound must be at least 1".into()));
    }
    let mut l = isqrt(isqrt(isqrt(b))).max(1);
    while pow8(l) < b as u128 {
        l += 1;
    }
    while l > 1 && pow8(l - 1) >= b as u128 {
        l -= 1;
    }
    Ok(QuadraticPartition { b, l, z: isqrt(b) })
}

fn m(x: u64, y: u64) -> Result<u64> {
    if x == 0 || y == 0 {
        Ok(0)
    } else {
        m_fast(x, y)
    }
}

fn diff(a: u64, b: u64) -> Result<u64> {
    a.checked_sub(b).ok_or_else(|| overflow("non-monotone box counts"))
}

/// `Xi = sum_{l < L} [M(l^2, Z / l^2) - M(l^2, Z / (l + 1)^2)]`.
pub fn xi_sum(b: u64) -> Result<u64> {
    let p = quadratic_partition(b)?;
    let terms: Result<Vec<u64>> = (1..p.l)
        .into_par_iter()
        .map(|l| diff(m(l * l, p.z / (l * l))?, m(l * l, p.z / ((l + 1) * (l + 1)))?))
        .collect();
    terms?.into_iter().try_fold(0u64, |a, t| a.checked_add(t)).ok_or_else(|| overflow("Xi"))
}

/// `Xi` recomputed shell by shell: the `l`-th term counts the pairs with
/// `|x| <= l^2` and `|y|` in `(Z/(l+1)^2, Z/l^2]`, i.e. the sum over
/// `|x| = 1..l^2` of exact-norm tallies in that band.
pub fn xi_sum_by_shells(b: u64, counter: &HeightCounter) -> Result<u64> {
    let p = quadratic_partition(b)?;
    if p.z > counter.zmax() {
        return Err(Error::InvalidArgument(format!("profile too small for B = {b}")));
    }
    let mut total = 0u64;
    for l in 1..p.l {
        let (lo, hi) = (p.z / ((l + 1) * (l + 1)), p.z / (l * l));
        for x in 1..=l * l {
            for y in lo + 1..=hi {
                if x * y <= counter.zmax() {
                    total += counter.exact_norm(x, y).nonzero;
                }
            }
        }
    }
    Ok(total)
}

/// `(lower, M'(B), upper)` for the two hyperbola bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sandwich {
    pub b: u64,
    pub lower: u64,
    pub exact: u64,
    pub upper: u64,
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        self.lower <= self.exact && self.exact <= self.upper
    }
}

/// Lower: `M(Z/L^2, Z/L^2) + 2 Xi`.
pub fn sandwich_lower(b: u64) -> Result<u64> {
    let p = quadratic_partition(b)?;
    let s = p.z / (p.l * p.l);
    let xi = xi_sum(b)?;
    xi.checked_mul(2).and_then(|v| v.checked_add(m(s, s).ok()?)).ok_or_else(|| overflow("hyperbola lower bound"))
}

/// Upper: `M(B^{1/4}, B^{1/4}) + 2 sum_{l=2}^{L} [M(l^2, Z/(l-1)^2) - M(l^2, Z/l^2)]`.
pub fn sandwich_upper(b: u64) -> Result<u64> {
    let p = quadratic_partition(b)?;
    let r = isqrt(p.z);
    let terms: Result<Vec<u64>> = (2..=p.l)
        .into_par_iter()
        .map(|l| diff(m(l * l, p.z / ((l - 1) * (l - 1)))?, m(l * l, p.z / (l * l))?))
        .collect();
    let shells = terms?.into_iter().try_fold(0u64, |a, t| a.checked_add(t));
    shells
        .and_then(|s| s.checked_mul(2))
        .and_then(|s| s.checked_add(m(r, r).ok()?))
        .ok_or_else(|| overflow("hyperbola upper bound"))
}

pub fn sandwich(b: u64) -> Result<Sandwich> {
    let exact = HeightCounter::for_height(b)?.mprime(b)?;
    Ok(Sandwich { b, lower: sandwich_lower(b)?, exact, upper: sandwich_upper(b)? })
}

/// `sum_{l < L} (1 - l^4 / (l + 1)^4) - 4 log L`.
pub fn telescope_constant(l: u64) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidArgument("telescope needs L >= 2".into()));
    }
    let s: CompensatedSum = (1..l)
        .map(|k| {
            let r = k as f64 / (k + 1) as f64;
            1.0 - r.powi(4)
        })
        .collect();
    Ok(s.value() - 4.0 * (l as f64).ln())
}

/// Main term of `Xi`, evaluated directly and through the `c`/`G` split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiMainTerm {
    pub b: u64,
    /// `4B sum_{l<L} sum_{q <= l^2} (phi(q)/q) F(floor(l^2/q)) (l^-4 - (l+1)^-4)`.
    pub direct: f64,
    /// `c B (zeta(2)/zeta(3)) sum_l (1 - l^4/(l+1)^4)`.
    pub c_part: f64,
    /// The remainder carried by `G` and the singular-series tails.
    pub g_part: f64,
}

impl XiMainTerm {
    pub fn split(&self) -> f64 {
        self.c_part + self.g_part
    }
}

pub fn xi_main_term(b: u64) -> Result<XiMainTerm> {
    let p = quadratic_partition(b)?;
    let top = ((p.l.max(2) - 1) * (p.l.max(2) - 1)) as usize;
    let arith = ArithTable::new(top)?;
    let k = ConstantSet::new();
    let lead = f_leading_coefficient();
    let mut cache = FCache::default();
    let (mut direct, mut c_sum, mut g_sum) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for l in 1..p.l {
        let l2 = l * l;
        let lf = l as f64;
        let weight = lf.powi(-4) - (lf + 1.0).powi(-4);
        let (mut fs, mut gs, mut partial) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
        for q in 1..=l2 {
            let phi_q = arith.phi(q as usize) as f64 / q as f64;
            fs.add(phi_q * cache.get(l2 / q));
            gs.add(phi_q * g_value(l2 as f64 / q as f64));
            partial.add(phi_q / (q * q) as f64);
        }
        direct.add(weight * fs.value());
        c_sum.add(1.0 - (lf / (lf + 1.0)).powi(4));
        let l4 = lf.powi(4);
        g_sum.add(weight * (gs.value() - lead * l4 * (k.singular_series() - partial.value())));
    }
    let bf = b as f64;
    Ok(XiMainTerm {
        b,
        direct: 4.0 * bf * direct.value(),
        c_part: k.c * bf * k.singular_series() * c_sum.value(),
        g_part: 4.0 * bf * g_sum.value(),
    })
}

/// `|2 Xi - 2 Xi_main| / (B^{7/8} max(log B, 1)^2)`.
pub fn xi_deviation(b: u64) -> Result<f64> {
    let xi = xi_sum(b)? as f64;
    let main = xi_main_term(b)?.direct;
    let bf = b as f64;
    Ok(2.0 * (xi - main).abs() / (bf.powf(0.875) * bf.ln().max(1.0).powi(2)))
}
