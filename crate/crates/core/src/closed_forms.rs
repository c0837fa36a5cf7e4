//! Exact rational evaluation of the harmonic-number closed forms and their
//! brute-force triple and double sums.
//!
//! Brute sums are accumulated over the common denominator `lcm(1..=n)^k`
//! so every partial result is an integer; the single reduction happens at
//! the end.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`s_brute`] and brute-mode [`s_parts`].
pub const S_BRUTE_CAP: u64 = 100;
/// Largest `n` accepted by brute-mode [`tu_sums`].
pub const TU_BRUTE_CAP: u64 = 200;

/// Exact rational with a positive, reduced denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalValue(BigRational);

impl RationalValue {
    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`, reduced. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        Self(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Self(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Debug for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<BigRational> for RationalValue {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl Add for RationalValue {
    type Output = RationalValue;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for RationalValue {
    type Output = RationalValue;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for RationalValue {
    type Output = RationalValue;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Neg for RationalValue {
    type Output = RationalValue;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

fn int(n: u64) -> RationalValue {
    RationalValue::from_integer(n as i64)
}

fn frac(num: i64, den: i64) -> RationalValue {
    RationalValue::new(num, den)
}

/// `lcm(1, ..., n)`, with `lcm() = 1` for `n = 0`.
fn lcm_upto(n: u64) -> BigInt {
    let mut l = BigInt::one();
    for k in 2..=n {
        let k = BigInt::from(k);
        let g = l.gcd(&k);
        l = l * (k / g);
    }
    l
}

/// Common-denominator tables: `lcm` and the cofactors `lcm / j` for `1 <= j <= n`.
struct Cofactors {
    lcm: BigInt,
    cof: Vec<BigInt>,
}

impl Cofactors {
    fn new(n: u64) -> Self {
        let lcm = lcm_upto(n);
        let cof = (0..=n)
            .map(|j| if j == 0 { BigInt::zero() } else { &lcm / BigInt::from(j) })
            .collect();
        Self { lcm, cof }
    }

    fn c(&self, j: i64) -> &BigInt {
        &self.cof[j as usize]
    }
}

/// `A(n) = sum_{j <= n} 1/j`.
pub fn harmonic_a(n: u64) -> RationalValue {
    let c = Cofactors::new(n);
    let num: BigInt = (1..=n as i64).map(|j| c.c(j)).sum();
    RationalValue::from_big(num, c.lcm)
}

/// `B(n) = sum_{j <= n} 1/j^2`.
pub fn harmonic_b(n: u64) -> RationalValue {
    let c = Cofactors::new(n);
    let num: BigInt = (1..=n as i64).map(|j| c.c(j) * c.c(j)).sum();
    RationalValue::from_big(num, &c.lcm * &c.lcm)
}

/// `F(n) = (33/2 - 3B(n)) n^2 - (21/2 + 3B(n)) n + 6A(n)`, with `F(0) = 0`.
pub fn f_closed(n: u64) -> RationalValue {
    let a = harmonic_a(n);
    let b = harmonic_b(n);
    let three_b = int(3) * b;
    let n2 = int(n * n);
    (frac(33, 2) - three_b.clone()) * n2 - (frac(21, 2) + three_b) * int(n) + int(6) * a
}

/// `(33 - pi^2) / 2`, the smoothed leading coefficient of `F`.
pub fn f_leading_coefficient() -> f64 {
    (33.0 - std::f64::consts::PI.powi(2)) / 2.0
}

/// `G(t) = F(floor t) - (33 - pi^2)/2 * t^2` for `t > 0`.
pub fn g_value(t: f64) -> f64 {
    assert!(t > 0.0 && t.is_finite(), "G needs a finite positive argument");
    f_closed(t.floor() as u64).to_f64() - f_leading_coefficient() * t * t
}

fn check_cap(n: u64, cap: u64, what: &'static str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(format!("{what} needs n >= 1")));
    }
    if n > cap {
        return Err(Error::ResourceLimit { what, needed: n as u128, limit: cap as u128 });
    }
    Ok(())
}

/// Exact `sum term(x1, x2, x3) / (x1 x2 x3)` over `1 <= x_i <= n`, skipping `None`.
fn triple_sum<F>(n: u64, term: F) -> RationalValue
where
    F: Fn(i64, i64, i64) -> Option<i64> + Sync,
{
    let c = Cofactors::new(n);
    let n = n as i64;
    let num: BigInt = (1..=n)
        .into_par_iter()
        .map(|x1| {
            let mut outer = BigInt::zero();
            for x2 in 1..=n {
                let mut inner = BigInt::zero();
                for x3 in 1..=n {
                    if let Some(t) = term(x1, x2, x3) {
                        if t != 0 {
                            inner += c.c(x3) * t;
                        }
                    }
                }
                if !inner.is_zero() {
                    outer += inner * c.c(x2);
                }
            }
            outer * c.c(x1)
        })
        .reduce(BigInt::zero, |a, b| a + b);
    let l3 = &c.lcm * &c.lcm * &c.lcm;
    RationalValue::from_big(num, l3)
}

/// Exact `sum term(x1, x2) / (x1 x2)` over `1 <= x_i <= n`, skipping `None`.
fn double_sum<F>(n: u64, term: F) -> RationalValue
where
    F: Fn(i64, i64) -> Option<i64>,
{
    let c = Cofactors::new(n);
    let n = n as i64;
    let mut num = BigInt::zero();
    for x1 in 1..=n {
        let mut inner = BigInt::zero();
        for x2 in 1..=n {
            if let Some(t) = term(x1, x2) {
                if t != 0 {
                    inner += c.c(x2) * t;
                }
            }
        }
        num += inner * c.c(x1);
    }
    RationalValue::from_big(num, &c.lcm * &c.lcm)
}

/// The defining triple sum of `S(n)`; equals [`f_closed`] for every `n >= 1`.
pub fn s_brute(n: u64) -> Result<RationalValue> {
    check_cap(n, S_BRUTE_CAP, "S brute sum")?;
    Ok(triple_sum(n, |x1, x2, x3| {
        let s = x1 + x2 + x3;
        let nu = x1 - x2 - x3;
        Some(s * s + 3 * nu * nu.abs())
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    Brute,
    Closed,
}

/// The pieces of `S = S1 + 6 S2 - 3 S3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SParts {
    pub s1: RationalValue,
    pub s2: RationalValue,
    pub s3: RationalValue,
}

impl SParts {
    pub fn combined(&self) -> RationalValue {
        self.s1.clone() + int(6) * self.s2.clone() - int(3) * self.s3.clone()
    }
}

pub fn s_parts(n: u64, mode: SumMode) -> Result<SParts> {
    if n == 0 {
        return Err(Error::InvalidArgument("S parts need n >= 1".into()));
    }
    match mode {
        SumMode::Brute => {
            check_cap(n, S_BRUTE_CAP, "S parts brute sum")?;
            let s1 = triple_sum(n, |a, b, c| Some((a + b + c).pow(2)));
            let s2 = triple_sum(n, |a, b, c| (b + c <= a).then(|| (a - b - c).pow(2)));
            let s3 = triple_sum(n, |a, b, c| Some((a - b - c).pow(2)));
            Ok(SParts { s1, s2, s3 })
        }
        SumMode::Closed => {
            let a = harmonic_a(n);
            let b = harmonic_b(n);
            let a2 = a.clone() * a.clone();
            let nn1 = int(n * (n + 1));
            let n2 = int(n * n);
            let s1 = frac(3, 2) * nn1.clone() * a2.clone() + int(6) * n2.clone() * a.clone();
            let s3 = frac(3, 2) * nn1.clone() * a2.clone() - int(2) * n2.clone() * a.clone();
            let s2 = frac(1, 2) * nn1 * (a2 - b)
                + (int(1) - int(2) * n2.clone()) * a
                + frac(11, 4) * n2
                - frac(7, 4) * int(n);
            Ok(SParts { s1, s2, s3 })
        }
    }
}

/// The auxiliary sums `T1, T2` (over `x2 <= x1 <= n`) and `U0, U1, U2`
/// (over `x + y <= n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuSums {
    pub t1: RationalValue,
    pub t2: RationalValue,
    pub u0: RationalValue,
    pub u1: RationalValue,
    pub u2: RationalValue,
}

pub fn tu_sums(n: u64, mode: SumMode) -> Result<TuSums> {
    if n == 0 {
        return Err(Error::InvalidArgument("T/U sums need n >= 1".into()));
    }
    match mode {
        SumMode::Brute => {
            check_cap(n, TU_BRUTE_CAP, "T/U brute sums")?;
            let n_i = n as i64;
            let t = |j: u32| double_sum(n, move |x1, x2| (x2 <= x1).then(|| (x1 - x2).pow(j)));
            let u = |j: u32| double_sum(n, move |x, y| (x + y <= n_i).then(|| (x + y).pow(j)));
            Ok(TuSums { t1: t(1), t2: t(2), u0: u(0), u1: u(1), u2: u(2) })
        }
        SumMode::Closed => {
            let a = harmonic_a(n);
            let b = harmonic_b(n);
            let nn1 = int(n * (n + 1));
            Ok(TuSums {
                t1: int(n + 1) * a.clone() - int(2 * n),
                t2: frac(1, 2) * nn1.clone() * a.clone() - int(n * n),
                u0: a.clone() * a.clone() - b,
                u1: int(2) * (int(n) * a.clone() - int(n)),
                u2: nn1 * a - frac(1, 2) * int(n * n) - frac(3, 2) * int(n),
            })
        }
    }
}
