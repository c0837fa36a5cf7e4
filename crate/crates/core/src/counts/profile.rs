use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boundary::WCounts;
use super::{permutations_of_sorted, HeightCounts};
use crate::arith::{gcd3, isqrt, ArithTable};
use crate::error::{overflow, Error, Result};

/// Largest `Z = floor(sqrt(B))` a [`HeightCounter`] will tabulate.
pub const PROFILE_Z_CAP: u64 = 4_000;

/// Pair counts at one exact norm pair `(|x|, |y|)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormTally {
    /// All six coordinates nonzero (primitive or not).
    pub nonzero: u64,
    /// Both vectors primitive, indexed by the number of zero coordinates.
    pub primitive: [u64; 5],
}

impl NormTally {
    fn add(&mut self, o: &NormTally) {
        self.nonzero += o.nonzero;
        for (a, b) in self.primitive.iter_mut().zip(&o.primitive) {
            *a += b;
        }
    }

    pub fn primitive_total(&self) -> u64 {
        self.primitive.iter().sum()
    }
}

/// Tabulates `t(X, Y)`, the pairs with `|x| = X` and `|y| = Y` exactly,
/// for every `X * Y <= zmax`. Height-bounded counts follow from shell sums
/// over this table.
///
/// The table is filled by enumerating sorted nonnegative representatives
/// `x0 <= x1 <= x2 = X` (each standing for its signed-permutation orbit)
/// and only pairs with `|y| >= |x|`; the rest follow from `t(X, Y) = t(Y, X)`.
#[derive(Debug, Clone)]
pub struct HeightCounter {
    zmax: u64,
    /// `rows[X - 1][Y - X]` for `1 <= X <= sqrt(zmax)`, `X <= Y <= zmax / X`.
    rows: Vec<Vec<NormTally>>,
    arith: ArithTable,
}

impl HeightCounter {
    /// Counter covering all heights `B < (zmax + 1)^2`.
    pub fn new(zmax: u64) -> Result<Self> {
        if zmax == 0 {
            return Err(Error::InvalidArgument("zmax must be at least 1".into()));
        }
        if zmax > PROFILE_Z_CAP {
            return Err(Error::ResourceLimit {
                what: "height profile",
                needed: zmax as u128,
                limit: PROFILE_Z_CAP as u128,
            });
        }
        let rows = (1..=isqrt(zmax) as i64)
            .into_par_iter()
            .map(|x| profile_row(x, zmax as i64))
            .collect();
        Ok(Self { zmax, rows, arith: ArithTable::new(zmax as usize)? })
    }

    /// Counter sized for height bound `b`.
    pub fn for_height(b: u64) -> Result<Self> {
        Self::new(isqrt(b).max(1))
    }

    pub fn zmax(&self) -> u64 {
        self.zmax
    }

    /// `t(X, Y)` for `X, Y >= 1`, `X Y <= zmax`.
    pub fn exact_norm(&self, x: u64, y: u64) -> NormTally {
        assert!(x >= 1 && y >= 1 && x * y <= self.zmax, "({x}, {y}) outside the profile");
        let (s, l) = if x <= y { (x, y) } else { (y, x) };
        self.rows[s as usize - 1][(l - s) as usize]
    }

    /// `sum_{j <= Y} t(k, j)`, i.e. `M(k, Y) - M(k - 1, Y)` for the nonzero tally.
    fn shell(&self, k: u64, y: u64) -> NormTally {
        let mut acc = NormTally::default();
        for j in 1..=y {
            acc.add(&self.exact_norm(k, j));
        }
        acc
    }

    /// `sum_{k <= Z} shell(k, floor(Z / k))`.
    fn shell_sum(&self, z: u64) -> NormTally {
        let mut acc = NormTally::default();
        for k in 1..=z {
            acc.add(&self.shell(k, z / k));
        }
        acc
    }

    fn z_of(&self, b: u64) -> Result<u64> {
        let z = isqrt(b);
        if z > self.zmax {
            return Err(Error::InvalidArgument(format!(
                "profile covers Z <= {}, asked for B = {b} (Z = {z})",
                self.zmax
            )));
        }
        Ok(z)
    }

    /// `M(X, Y)` for `X Y <= zmax`, as a 2-D prefix sum of the exact-norm table.
    pub fn box_count(&self, x: u64, y: u64) -> Result<u64> {
        if x * y > self.zmax {
            return Err(Error::InvalidArgument(format!("box ({x}, {y}) exceeds profile {}", self.zmax)));
        }
        Ok((1..=x).map(|k| self.shell(k, y).nonzero).sum())
    }

    /// `M'(B)` through the shell sum
    /// `sum_k [M(k, floor(Z/k)) - M(k - 1, floor(Z/k))]`, `Z = floor(sqrt B)`.
    pub fn mprime(&self, b: u64) -> Result<u64> {
        Ok(self.shell_sum(self.z_of(b)?).nonzero)
    }

    fn mprime_z(&self, z: u64) -> u64 {
        self.shell_sum(z).nonzero
    }

    /// `4 N0(B) = sum_{nm <= sqrt B} mu(n) mu(m) M'(B / (nm)^2)`.
    pub fn n0_times4(&self, b: u64) -> Result<u64> {
        let z = self.z_of(b)?;
        let mut acc = 0i128;
        for n in 1..=z {
            let mu_n = self.arith.mu(n as usize);
            if mu_n == 0 {
                continue;
            }
            for m in 1..=z / n {
                let mu_m = self.arith.mu(m as usize);
                if mu_m == 0 {
                    continue;
                }
                // floor(sqrt(B / (nm)^2)) = floor(Z / (nm))
                acc += (mu_n * mu_m) as i128 * self.mprime_z(z / (n * m)) as i128;
            }
        }
        u64::try_from(acc).map_err(|_| overflow("Möbius sum for 4 N0(B)"))
    }

    /// `4 N0(B)` read directly from the primitive, zero-free tally.
    pub fn n0_times4_direct(&self, b: u64) -> Result<u64> {
        Ok(self.shell_sum(self.z_of(b)?).primitive[0])
    }

    /// `4 N(B)`: all primitive orthogonal pairs of height at most `B`.
    pub fn n_times4(&self, b: u64) -> Result<u64> {
        Ok(self.shell_sum(self.z_of(b)?).primitive_total())
    }

    /// `W_1..W_4` read from the profile (compare [`super::w_counts`]).
    pub fn w_counts(&self, b: u64) -> Result<WCounts> {
        let p = self.shell_sum(self.z_of(b)?).primitive;
        Ok(WCounts { w1: p[1], w2: p[2], w3: p[3], w4: p[4] })
    }

    pub fn height_counts(&self, b: u64) -> Result<HeightCounts> {
        let all = self.shell_sum(self.z_of(b)?);
        Ok(HeightCounts {
            b,
            mprime: all.nonzero,
            n0_times4: self.n0_times4(b)?,
            n_times4: all.primitive_total(),
            w: WCounts { w1: all.primitive[1], w2: all.primitive[2], w3: all.primitive[3], w4: all.primitive[4] },
        })
    }

    /// Primitive pairs with `|x| |y| = h` exactly, for `1 <= h <= zmax`.
    pub fn primitive_at_height_product(&self, h: u64) -> u64 {
        assert!(h >= 1 && h <= self.zmax);
        let mut n = 0;
        for x in 1..=h {
            if h % x == 0 {
                n += self.exact_norm(x, h / x).primitive_total();
            }
        }
        n
    }
}

/// Row `X` of the exact-norm table: tallies for `Y = X..=zmax / X`.
fn profile_row(x2: i64, zmax: i64) -> Vec<NormTally> {
    let ymax = zmax / x2;
    let len = (ymax - x2 + 1) as usize;
    let reps: Vec<(i64, i64)> = (0..=x2).flat_map(|x1| (0..=x1).map(move |x0| (x0, x1))).collect();
    reps.par_iter()
        .fold(
            || vec![NormTally::default(); len],
            |mut row, &(x0, x1)| {
                let x = [x0, x1, x2];
                let x_nonzero = x0 != 0;
                let x_prim = gcd3(x) == 1;
                if !x_nonzero && !x_prim {
                    return row;
                }
                let nonzero_coords = x.iter().filter(|&&c| c != 0).count() as u32;
                let weight = permutations_of_sorted(x) << nonzero_coords;
                let x_zeros = 3 - nonzero_coords as usize;
                for y0 in -ymax..=ymax {
                    let t0 = x0 * y0;
                    for y1 in -ymax..=ymax {
                        let t = t0 + x1 * y1;
                        if t % x2 != 0 {
                            continue;
                        }
                        let y2 = -t / x2;
                        let ny = y0.abs().max(y1.abs()).max(y2.abs());
                        if ny < x2 || ny > ymax {
                            continue;
                        }
                        let cell = &mut row[(ny - x2) as usize];
                        let y = [y0, y1, y2];
                        if x_nonzero && y0 != 0 && y1 != 0 && y2 != 0 {
                            cell.nonzero += weight;
                        }
                        if x_prim && gcd3(y) == 1 {
                            let zeros = x_zeros + y.iter().filter(|&&c| c == 0).count();
                            cell.primitive[zeros] += weight;
                        }
                    }
                }
                row
            },
        )
        .reduce(
            || vec![NormTally::default(); len],
            |mut a, b| {
                for (u, v) in a.iter_mut().zip(&b) {
                    u.add(v);
                }
                a
            },
        )
}

#[cfg(test)]
mod tests {
    use super::super::{m_fast, PairCensus};
    use super::*;

    #[test]
    fn small_heights() {
        let h = HeightCounter::new(2).unwrap();
        assert_eq!(h.n_times4(1).unwrap(), 192);
        assert_eq!(h.n_times4(2).unwrap(), 192);
        assert_eq!(h.mprime(1).unwrap(), 0);
        assert_eq!(h.mprime(3).unwrap(), 0);
        assert_eq!(h.n0_times4(1).unwrap(), 0);
    }

    #[test]
    fn box_counts_match_convolution() {
        let h = HeightCounter::new(60).unwrap();
        for x in 1..=60u64 {
            for y in 1..=60 / x {
                assert_eq!(h.box_count(x, y).unwrap(), m_fast(x, y).unwrap(), "({x}, {y})");
            }
        }
    }

    #[test]
    fn matches_census() {
        let c = PairCensus::enumerate(40).unwrap();
        let h = HeightCounter::new(40).unwrap();
        for z in 1..=40u64 {
            let b = z * z;
            assert_eq!(h.mprime(b).unwrap(), c.mprime(b).unwrap(), "M' at Z = {z}");
            assert_eq!(h.n_times4(b).unwrap(), c.n_times4(b).unwrap(), "4N at Z = {z}");
            assert_eq!(h.n0_times4_direct(b).unwrap(), c.n0_times4(b).unwrap(), "4N0 at Z = {z}");
            assert_eq!(h.n0_times4(b).unwrap(), c.n0_times4(b).unwrap(), "Möbius 4N0 at Z = {z}");
            assert_eq!(h.w_counts(b).unwrap(), c.w_counts(b).unwrap());
        }
    }

    #[test]
    fn range_errors() {
        let h = HeightCounter::new(10).unwrap();
        assert!(h.mprime(121).is_err());
        assert!(h.mprime(120).is_ok());
        assert!(HeightCounter::new(0).is_err());
        assert!(HeightCounter::new(PROFILE_Z_CAP + 1).is_err());
    }

    #[test]
    fn height_product_counts_sum_to_total() {
        let h = HeightCounter::new(30).unwrap();
        let s: u64 = (1..=30).map(|n| h.primitive_at_height_product(n)).sum();
        assert_eq!(s, h.n_times4(900).unwrap());
        assert_eq!(h.primitive_at_height_product(1), 192);
    }
}
