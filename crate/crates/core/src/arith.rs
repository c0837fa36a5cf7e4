//! Sieved arithmetic functions and the divisor-pair coefficient table.

use crate::error::{Error, Result};

/// Default cap on the number of `r(n)` entries a table may hold.
pub const DEFAULT_TABLE_BUDGET: u64 = 10_000_000;

/// Totient and Möbius values for `1 <= n <= limit`, filled by a linear sieve.
#[derive(Debug, Clone)]
pub struct ArithTable {
    limit: usize,
    phi: Vec<u64>,
    mu: Vec<i8>,
}

impl ArithTable {
    pub fn new(limit: usize) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidArgument("sieve limit must be at least 1".into()));
        }
        let mut phi = vec![0u64; limit + 1];
        let mut mu = vec![0i8; limit + 1];
        let mut composite = vec![false; limit + 1];
        let mut primes: Vec<usize> = Vec::new();
        phi[1] = 1;
        mu[1] = 1;
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i);
                phi[i] = (i - 1) as u64;
                mu[i] = -1;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > limit {
                    break;
                }
                composite[ip] = true;
                if i % p == 0 {
                    phi[ip] = phi[i] * p as u64;
                    mu[ip] = 0;
                    break;
                }
                phi[ip] = phi[i] * (p as u64 - 1);
                mu[ip] = -mu[i];
            }
        }
        Ok(Self { limit, phi, mu })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Euler's totient. Panics when `n` is 0 or beyond the table.
    pub fn phi(&self, n: usize) -> u64 {
        assert!(n >= 1 && n <= self.limit, "phi({n}) outside table 1..={}", self.limit);
        self.phi[n]
    }

    /// Möbius function. Panics when `n` is 0 or beyond the table.
    pub fn mu(&self, n: usize) -> i8 {
        assert!(n >= 1 && n <= self.limit, "mu({n}) outside table 1..={}", self.limit);
        self.mu[n]
    }
}

/// Shorthand for [`ArithTable::new`].
pub fn build_arith_tables(limit: usize) -> Result<ArithTable> {
    ArithTable::new(limit)
}

/// `r(n) = #{(x, y) : xy = n, 1 <= |x| <= X, 1 <= |y| <= Y}` for `1 <= n <= XY`.
///
/// Only positive `n` are stored; `r(-n) = r(n)`.
#[derive(Debug, Clone)]
pub struct RTable {
    x: u64,
    y: u64,
    r: Vec<u64>,
}

impl RTable {
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    /// Largest index with a possibly nonzero entry, `X * Y`.
    pub fn len(&self) -> u64 {
        self.r.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `r(n)` for `n != 0`, resolving negative `n` by evenness.
    pub fn get(&self, n: i64) -> u64 {
        assert!(n != 0, "r(0) is not defined");
        let m = n.unsigned_abs();
        if m > self.len() {
            0
        } else {
            self.r[(m - 1) as usize]
        }
    }

    /// Entries `r(1), ..., r(XY)`.
    pub fn as_slice(&self) -> &[u64] {
        &self.r
    }

    /// Indices `n >= 1` with `r(n) > 0`, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.r
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(i, _)| i as u64 + 1)
            .collect()
    }
}

/// Builds the `r` table for the box `(X, Y)` under [`DEFAULT_TABLE_BUDGET`].
pub fn build_r_table(x: u64, y: u64) -> Result<RTable> {
    build_r_table_with_budget(x, y, DEFAULT_TABLE_BUDGET)
}

pub fn build_r_table_with_budget(x: u64, y: u64, budget: u64) -> Result<RTable> {
    if x == 0 || y == 0 {
        return Err(Error::InvalidArgument("box bounds must be positive".into()));
    }
    let n = x as u128 * y as u128;
    if n > budget as u128 {
        return Err(Error::ResourceLimit {
            what: "r table entries",
            needed: n,
            limit: budget as u128,
        });
    }
    let n = n as usize;
    let mut r = vec![0u64; n];
    for d in 1..=x as usize {
        let mut idx = d;
        for _ in 0..y {
            r[idx - 1] += 2;
            idx += d;
        }
    }
    Ok(RTable { x, y, r })
}

/// `r(n)` by divisor enumeration up to `sqrt(n)`; the oracle for [`build_r_table`].
pub fn r_direct(n: u64, x: u64, y: u64) -> u64 {
    assert!(n >= 1, "r_direct needs n >= 1");
    let mut count = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            let e = n / d;
            if d <= x && e <= y {
                count += 1;
            }
            if e != d && e <= x && d <= y {
                count += 1;
            }
        }
        d += 1;
    }
    2 * count
}

/// `floor(sqrt(n))`, corrected so that the result is exact for every `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut s = (n as f64).sqrt() as u64;
    while s > 0 && s.checked_mul(s).map_or(true, |sq| sq > n) {
        s -= 1;
    }
    while (s + 1).checked_mul(s + 1).is_some_and(|sq| sq <= n) {
        s += 1;
    }
    s
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of the absolute values of a triple, exiting early once it reaches 1.
pub fn gcd3(v: [i64; 3]) -> u64 {
    let mut g = 0u64;
    for c in v {
        g = gcd(g, c.unsigned_abs());
        if g == 1 {
            return 1;
        }
    }
    g
}
