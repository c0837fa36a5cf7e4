use rayon::prelude::*;

use super::boundary::WCounts;
use crate::arith::{gcd3, isqrt};
use crate::error::{Error, Result};

/// Largest `Z` the plain census will enumerate.
pub const CENSUS_Z_CAP: u64 = 150;

/// Per-height tallies of every orthogonal pair `(x, y)` with
/// `|x| |y| <= zmax`, produced by plain enumeration with no symmetry
/// reduction. This is the oracle for [`super::HeightCounter`] and
/// [`super::w_counts`].
#[derive(Debug, Clone)]
pub struct PairCensus {
    zmax: u64,
    /// `nonzero[n]`: pairs with all six coordinates nonzero and `|x||y| = n`.
    nonzero: Vec<u64>,
    /// `primitive[j][n]`: primitive pairs with exactly `j` zero coordinates.
    primitive: [Vec<u64>; 5],
}

impl PairCensus {
    pub fn enumerate(zmax: u64) -> Result<Self> {
        if zmax > CENSUS_Z_CAP {
            return Err(Error::ResourceLimit {
                what: "plain pair census",
                needed: zmax as u128,
                limit: CENSUS_Z_CAP as u128,
            });
        }
        let z = zmax as i64;
        let len = zmax as usize + 1;
        let empty = || (vec![0u64; len], std::array::from_fn::<_, 5, _>(|_| vec![0u64; len]));
        let (nonzero, primitive) = (-z..=z)
            .into_par_iter()
            .fold(empty, |(mut nz, mut pr), x0| {
                for x1 in -z..=z {
                    for x2 in -z..=z {
                        tally_x([x0, x1, x2], z, &mut nz, &mut pr);
                    }
                }
                (nz, pr)
            })
            .reduce(empty, |(mut a, mut pa), (b, pb)| {
                add_into(&mut a, &b);
                for (u, v) in pa.iter_mut().zip(&pb) {
                    add_into(u, v);
                }
                (a, pa)
            });
        Ok(Self { zmax, nonzero, primitive })
    }

    pub fn zmax(&self) -> u64 {
        self.zmax
    }

    fn z_of(&self, b: u64) -> Result<usize> {
        let z = isqrt(b);
        if z > self.zmax {
            return Err(Error::InvalidArgument(format!(
                "census covers heights up to {}, asked for B = {b}",
                self.zmax * self.zmax
            )));
        }
        Ok(z as usize)
    }

    /// `M'(B)`.
    pub fn mprime(&self, b: u64) -> Result<u64> {
        let z = self.z_of(b)?;
        Ok(self.nonzero[..=z].iter().sum())
    }

    /// `4 N0(B)`: primitive pairs with no zero coordinate.
    pub fn n0_times4(&self, b: u64) -> Result<u64> {
        let z = self.z_of(b)?;
        Ok(self.primitive[0][..=z].iter().sum())
    }

    /// `4 N(B)`: all primitive pairs.
    pub fn n_times4(&self, b: u64) -> Result<u64> {
        let z = self.z_of(b)?;
        Ok(self.primitive.iter().map(|p| p[..=z].iter().sum::<u64>()).sum())
    }

    pub fn w_counts(&self, b: u64) -> Result<WCounts> {
        let z = self.z_of(b)?;
        let w = |j: usize| self.primitive[j][..=z].iter().sum::<u64>();
        Ok(WCounts { w1: w(1), w2: w(2), w3: w(3), w4: w(4) })
    }
}

fn add_into(a: &mut [u64], b: &[u64]) {
    for (u, v) in a.iter_mut().zip(b) {
        *u += v;
    }
}

/// Adds every `y` orthogonal to `x` with `|x| |y| <= z` to the tallies.
fn tally_x(x: [i64; 3], z: i64, nonzero: &mut [u64], primitive: &mut [Vec<u64>; 5]) {
    let nx = x.iter().map(|c| c.abs()).max().unwrap();
    if nx == 0 {
        return;
    }
    let ymax = z / nx;
    // Solve for the coordinate where |x_i| is largest.
    let i = (0..3).find(|&i| x[i].abs() == nx).unwrap();
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let x_nonzero = x.iter().all(|&c| c != 0);
    let x_zeros = x.iter().filter(|&&c| c == 0).count();
    let x_prim = gcd3(x) == 1;
    for yj in -ymax..=ymax {
        for yk in -ymax..=ymax {
            let t = x[j] * yj + x[k] * yk;
            if t % x[i] != 0 {
                continue;
            }
            let yi = -t / x[i];
            if yi.abs() > ymax {
                continue;
            }
            let ny = yi.abs().max(yj.abs()).max(yk.abs());
            if ny == 0 {
                continue;
            }
            let n = (nx * ny) as usize;
            let y = [yi, yj, yk];
            if x_nonzero && y.iter().all(|&c| c != 0) {
                nonzero[n] += 1;
            }
            if x_prim && gcd3(y) == 1 {
                let zeros = x_zeros + y.iter().filter(|&&c| c == 0).count();
                primitive[zeros][n] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_one() {
        let c = PairCensus::enumerate(1).unwrap();
        assert_eq!(c.n_times4(1).unwrap(), 192);
        assert_eq!(c.n0_times4(1).unwrap(), 0);
        assert_eq!(c.mprime(1).unwrap(), 0);
        let w = c.w_counts(1).unwrap();
        assert_eq!(w.w4, 24);
        assert_eq!(w.w1 + w.w2 + w.w3 + w.w4, 192);
    }

    #[test]
    fn cap_and_range() {
        assert!(PairCensus::enumerate(151).is_err());
        let c = PairCensus::enumerate(3).unwrap();
        assert!(c.mprime(16).is_err());
        assert_eq!(c.mprime(3).unwrap(), 0);
        assert!(c.mprime(4).unwrap() > 0);
    }
}
