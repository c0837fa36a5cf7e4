//! Exact solution counts for `x . y = 0`.
//!
//! * `M(X, Y)`: all-nonzero `x, y` in the box `|x| <= X`, `|y| <= Y`
//!   ([`m_fast`], oracle [`m_naive`]).
//! * `P(X)`: all integer solutions with coordinates bounded by `X` ([`p_count`]).
//! * Height-bounded counts `M'(B)`, `4 N0(B)`, `4 N(B)` and the boundary
//!   counts `W_1..W_4` ([`HeightCounter`], oracle [`PairCensus`],
//!   structural [`w_counts`]).
//!
//! `|.|` is the sup norm throughout. A height bound `B` only enters through
//! `Z = floor(sqrt(B))` since `|x|^2 |y|^2 <= B` iff `|x| |y| <= Z`.

mod boundary;
mod census;
mod profile;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use boundary::{coprime_pairs_positive, w_counts, WCounts};
pub use census::PairCensus;
pub use profile::{HeightCounter, NormTally};

use crate::arith::{build_r_table_with_budget, DEFAULT_TABLE_BUDGET};
use crate::error::{overflow, Error, Result};

/// Cap on `min(X,Y)^3 * max(X,Y)^2` for [`m_naive`].
pub const M_NAIVE_CAP: u128 = 1_000_000_000;
/// Largest `X` accepted by [`p_count`].
pub const P_COUNT_CAP: u64 = 40;

/// `M(X, Y)` together with its box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxCount {
    pub x: u64,
    pub y: u64,
    pub count: u64,
}

/// Height-bounded counts at one `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightCounts {
    pub b: u64,
    pub mprime: u64,
    pub n0_times4: u64,
    pub n_times4: u64,
    pub w: WCounts,
}

/// Floors a real box bound; negative or non-finite bounds are rejected.
pub fn floor_bound(v: f64) -> Result<u64> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::InvalidArgument(format!("bound must be finite and >= 0, got {v}")));
    }
    Ok(v.floor() as u64)
}

/// Number of distinct orderings of a sorted triple.
pub(crate) fn permutations_of_sorted(v: [i64; 3]) -> u64 {
    match (v[0] == v[1], v[1] == v[2]) {
        (true, true) => 1,
        (false, false) => 6,
        _ => 3,
    }
}

/// `M(X, Y)` by enumeration: `x` over sorted positive representatives of
/// the shorter side (weighted by their signed-permutation orbit), `(y0, y1)`
/// over the longer side's box and `y2` solved from the linear relation.
pub fn m_naive(x: u64, y: u64) -> Result<u64> {
    if x == 0 || y == 0 {
        return Err(Error::InvalidArgument("box bounds must be positive".into()));
    }
    let (s, b) = if x <= y { (x, y) } else { (y, x) };
    let cost = (s as u128).pow(3) * (b as u128).pow(2);
    if cost > M_NAIVE_CAP {
        return Err(Error::ResourceLimit { what: "naive box enumeration", needed: cost, limit: M_NAIVE_CAP });
    }
    let (s, b) = (s as i64, b as i64);
    let total: u64 = (1..=s)
        .into_par_iter()
        .map(|x2| {
            let mut acc = 0u64;
            for x1 in 1..=x2 {
                for x0 in 1..=x1 {
                    let w = 8 * permutations_of_sorted([x0, x1, x2]);
                    let mut hits = 0u64;
                    for y0 in -b..=b {
                        if y0 == 0 {
                            continue;
                        }
                        for y1 in -b..=b {
                            if y1 == 0 {
                                continue;
                            }
                            let t = x0 * y0 + x1 * y1;
                            if t % x2 == 0 {
                                let y2 = -t / x2;
                                if y2 != 0 && y2.abs() <= b {
                                    hits += 1;
                                }
                            }
                        }
                    }
                    acc += w * hits;
                }
            }
            acc
        })
        .sum();
    Ok(total)
}

/// `M(X, Y)` from the divisor-pair table:
/// `M = sum_{a+b+c=0, abc != 0} r(a) r(b) r(c) = 6 sum_{p,q >= 1} r(p) r(q) r(p+q)`,
/// the factor 6 counting which of the three entries is negative (3) and a
/// global sign flip (2).
pub fn m_fast(x: u64, y: u64) -> Result<u64> {
    m_fast_with_budget(x, y, DEFAULT_TABLE_BUDGET)
}

pub fn m_fast_with_budget(x: u64, y: u64, budget: u64) -> Result<u64> {
    let table = build_r_table_with_budget(x, y, budget)?;
    let r = table.as_slice();
    let n = r.len();
    let support = table.support();
    let partial: Result<Vec<u64>> = support
        .par_iter()
        .map(|&p| {
            let rp = r[p as usize - 1];
            let mut acc = 0u64;
            for &q in &support {
                let s = (p + q) as usize;
                if s > n {
                    break;
                }
                let rs = r[s - 1];
                if rs == 0 {
                    continue;
                }
                let term = r[q as usize - 1]
                    .checked_mul(rs)
                    .and_then(|v| v.checked_mul(rp))
                    .ok_or_else(|| overflow("M(X, Y) convolution"))?;
                acc = acc.checked_add(term).ok_or_else(|| overflow("M(X, Y) convolution"))?;
            }
            Ok(acc)
        })
        .collect();
    partial?
        .into_iter()
        .try_fold(0u64, |a, v| a.checked_add(v))
        .and_then(|v| v.checked_mul(6))
        .ok_or_else(|| overflow("M(X, Y) convolution"))
}

/// [`m_fast`] for real bounds, flooring both.
pub fn m_fast_real(x: f64, y: f64) -> Result<u64> {
    let (x, y) = (floor_bound(x)?, floor_bound(y)?);
    if x == 0 || y == 0 {
        return Ok(0);
    }
    m_fast(x, y)
}

pub fn box_count(x: u64, y: u64) -> Result<BoxCount> {
    Ok(BoxCount { x, y, count: m_fast(x, y)? })
}

/// `P(X)`: all integer solutions with every coordinate in `[-X, X]`.
///
/// `x` runs over sorted nonnegative representatives `a <= b <= c`, weighted
/// by their signed-permutation orbit size; `y2` is solved from `c != 0`.
pub fn p_count(x: u64) -> Result<u64> {
    if x > P_COUNT_CAP {
        return Err(Error::ResourceLimit { what: "P(X) enumeration", needed: x as u128, limit: P_COUNT_CAP as u128 });
    }
    let b = x as i64;
    let side = (2 * b + 1) as u64;
    let mut total = side.pow(3);
    for c in 1..=b {
        for bb in 0..=c {
            for a in 0..=bb {
                let nonzero = [a, bb, c].iter().filter(|&&v| v != 0).count() as u32;
                let w = permutations_of_sorted([a, bb, c]) << nonzero;
                let mut hits = 0u64;
                for y0 in -b..=b {
                    for y1 in -b..=b {
                        let t = a * y0 + bb * y1;
                        if t % c == 0 && (t / c).abs() <= b {
                            hits += 1;
                        }
                    }
                }
                total += w * hits;
            }
        }
    }
    Ok(total)
}

/// `P(X)` by the plain six-fold loop with no symmetry reduction; `X <= 3`.
pub fn p_count_brute(x: u64) -> Result<u64> {
    if x > 3 {
        return Err(Error::ResourceLimit { what: "P(X) brute enumeration", needed: x as u128, limit: 3 });
    }
    let b = x as i64;
    let mut n = 0u64;
    for y0 in -b..=b {
        for y1 in -b..=b {
            for y2 in -b..=b {
                for x0 in -b..=b {
                    for x1 in -b..=b {
                        for x2 in -b..=b {
                            if x0 * y0 + x1 * y1 + x2 * y2 == 0 {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain enumeration of all six coordinates for tiny boxes.
    fn m_brute(x: i64, y: i64) -> u64 {
        let xs: Vec<i64> = (-x..=x).filter(|&v| v != 0).collect();
        let ys: Vec<i64> = (-y..=y).filter(|&v| v != 0).collect();
        let mut n = 0;
        for &a in &xs {
            for &b in &xs {
                for &c in &xs {
                    for &d in &ys {
                        for &e in &ys {
                            for &f in &ys {
                                if a * d + b * e + c * f == 0 {
                                    n += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn m_examples() {
        assert_eq!(m_naive(1, 1).unwrap(), 0);
        assert_eq!(m_fast(1, 1).unwrap(), 0);
        assert_eq!(m_naive(1, 2).unwrap(), 48);
        assert_eq!(m_fast(1, 2).unwrap(), 48);
        assert_eq!(m_naive(2, 1).unwrap(), 48);
    }

    #[test]
    fn m_against_plain_enumeration() {
        for (x, y) in [(1, 3), (2, 2), (2, 3), (3, 2), (3, 3)] {
            let b = m_brute(x, y);
            assert_eq!(m_naive(x as u64, y as u64).unwrap(), b);
            assert_eq!(m_fast(x as u64, y as u64).unwrap(), b);
        }
    }

    #[test]
    fn m_small_grid_and_symmetry() {
        for x in 1..=6 {
            for y in 1..=6 {
                let f = m_fast(x, y).unwrap();
                assert_eq!(f, m_naive(x, y).unwrap(), "({x}, {y})");
                assert_eq!(f, m_fast(y, x).unwrap());
                assert_eq!(f % 16, 0);
            }
        }
    }

    #[test]
    fn m_naive_cap() {
        assert!(matches!(m_naive(100, 100), Err(Error::ResourceLimit { .. })));
        assert!(matches!(m_naive(0, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn m_fast_budget() {
        assert!(matches!(m_fast_with_budget(100, 100, 1000), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn m_fast_real_floors() {
        assert_eq!(m_fast_real(2.9, 3.2).unwrap(), m_fast(2, 3).unwrap());
        assert_eq!(m_fast_real(0.5, 3.0).unwrap(), 0);
        assert!(m_fast_real(-1.0, 3.0).is_err());
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_count(0).unwrap(), 1);
        assert_eq!(p_count(1).unwrap(), 245);
        assert_eq!(p_count_brute(1).unwrap(), 245);
        assert_eq!(p_count(2).unwrap(), p_count_brute(2).unwrap());
        assert_eq!(p_count(3).unwrap(), p_count_brute(3).unwrap());
        for x in 1..=8 {
            assert!(p_count(x).unwrap() >= m_fast(x, x).unwrap());
        }
        assert!(p_count(41).is_err());
    }
}
