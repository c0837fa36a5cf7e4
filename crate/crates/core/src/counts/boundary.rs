use serde::{Deserialize, Serialize};

use crate::arith::{gcd, isqrt, ArithTable};
use crate::error::{overflow, Error, Result};

/// Primitive orthogonal pairs of bounded height with exactly `j` zero
/// coordinates (among all six), `j = 1..=4`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WCounts {
    pub w1: u64,
    pub w2: u64,
    pub w3: u64,
    pub w4: u64,
}

impl WCounts {
    pub fn total(&self) -> u64 {
        self.w1 + self.w2 + self.w3 + self.w4
    }
}

/// `#{1 <= a, b <= z : gcd(a, b) = 1} = 2 sum_{b <= z} phi(b) - 1`.
pub fn coprime_pairs_positive(z: u64, arith: &ArithTable) -> u64 {
    if z == 0 {
        return 0;
    }
    2 * (1..=z as usize).map(|b| arith.phi(b)).sum::<u64>() - 1
}

/// `W_1..W_4` at height `B` from the structural parametrizations, with
/// `Z = floor(sqrt B)`:
///
/// * `W_4 = 24`: `x = +-e_i`, `y = +-e_j`, `i != j`.
/// * `W_3 = 12 C(Z)`: one vector is `+-e_k`, the other has its single zero
///   at `k` and a coprime nonzero pair elsewhere; `C(Z) = 4 #{coprime
///   1 <= a, b <= Z}`.
/// * `W_2 = 6 C(floor(sqrt Z))`: both zeros in the same slot and
///   `(x1, x2) = +-(y2, -y1)`.
/// * `W_1 = 96 (W1_0 + 2 W1_plus)`: with `x0 = 0`, `y2 = u x1`, `y1 = -u x2`;
///   `W1_0` is the `x1 = x2 = 1` part and `W1_plus` the `x1 < x2` part.
pub fn w_counts(b: u64) -> Result<WCounts> {
    if b == 0 {
        return Err(Error::InvalidArgument("height bound must be at least 1".into()));
    }
    let z = isqrt(b);
    let arith = ArithTable::new(z as usize)?;
    let signed_coprime = |n: u64| 4 * coprime_pairs_positive(n, &arith);

    let w3 = 12 * signed_coprime(z);
    let w2 = 6 * signed_coprime(isqrt(z));

    let w1_zero = coprime_pairs_positive(z, &arith);
    let mut w1_plus = 0u64;
    for x in 2..=isqrt(z) {
        let phi = arith.phi(x as usize);
        let y_max = z / x;
        let mut pairs = 0u64;
        for u in 1..=z / (x * x) {
            pairs += (1..=y_max).filter(|&y| gcd(u, y) == 1).count() as u64;
        }
        w1_plus = phi
            .checked_mul(pairs)
            .and_then(|v| v.checked_add(w1_plus))
            .ok_or_else(|| overflow("W1 parametrization"))?;
    }
    let w1 = w1_plus
        .checked_mul(2)
        .and_then(|v| v.checked_add(w1_zero))
        .and_then(|v| v.checked_mul(96))
        .ok_or_else(|| overflow("W1 parametrization"))?;
    Ok(WCounts { w1, w2, w3, w4: 24 })
}
