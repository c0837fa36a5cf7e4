//! Exponential sums and the major/minor arc dissection of the box count.
//!
//! With `m = 2 floor(Y) + 1`:
//!
//! * `K(theta) = sum_{1 <= |y| <= Y} e(theta y) = sin(pi m theta) / sin(pi theta) - 1`
//! * `f(alpha) = sum_{1 <= |x| <= X} K(alpha x)`
//! * `g_q(alpha)`: the same sum restricted to `q` not dividing `x`
//! * `w_q(gamma) = sum_{0 < |x| <= X/q} sum_{|y| <= Y} e(gamma x y)`, and `f*_q(beta) = w_q(q beta)`
//! * `v_q(gamma) = sum_{0 < |x| <= X/q} sin(pi m gamma x) / (pi gamma x)`

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{build_r_table, gcd};
use crate::error::{overflow, Error, Result};
use crate::quadrature::{sinc, uniform_breakpoints, CompensatedSum};
use crate::special::{ImproperIntegral, QuadratureConfig};

/// Below this `|sin(pi delta)|` the kernel switches to its Taylor expansion.
const KERNEL_TAYLOR_THRESHOLD: f64 = 1e-8;

/// Largest box the naive `xy = uv` count accepts.
pub const L2_NAIVE_CAP: u64 = 40;

fn width(y: f64) -> f64 {
    2.0 * y.floor() + 1.0
}

/// `sum_{1 <= |y| <= Y} e(theta y)`.
pub fn sym_kernel(theta: f64, y: f64) -> f64 {
    let m = width(y);
    // m is odd, so the Dirichlet ratio is 1-periodic in theta.
    let delta = theta - theta.round();
    let s = (PI * delta).sin();
    if s.abs() < KERNEL_TAYLOR_THRESHOLD {
        let d2 = (PI * delta).powi(2);
        m * (1.0 - (m * m - 1.0) * d2 / 6.0) - 1.0
    } else {
        (PI * m * delta).sin() / s - 1.0
    }
}

/// `f(alpha)`.
pub fn f_eval(alpha: f64, x: f64, y: f64) -> f64 {
    let n = x.floor() as i64;
    let s: CompensatedSum = (1..=n).map(|k| 2.0 * sym_kernel(alpha * k as f64, y)).collect();
    s.value()
}

/// `g_q(alpha)`: the `x` with `q` not dividing `x`.
pub fn g_q_eval(alpha: f64, q: u64, x: f64, y: f64) -> f64 {
    assert!(q >= 1);
    let n = x.floor() as u64;
    let s: CompensatedSum =
        (1..=n).filter(|k| k % q != 0).map(|k| 2.0 * sym_kernel(alpha * k as f64, y)).collect();
    s.value()
}

/// `w_q(gamma)`, the `y = 0` row included.
pub fn w_q_eval(gamma: f64, q: u64, x: f64, y: f64) -> f64 {
    assert!(q >= 1);
    let n = (x / q as f64).floor() as u64;
    let s: CompensatedSum = (1..=n).map(|k| 2.0 * (sym_kernel(gamma * k as f64, y) + 1.0)).collect();
    s.value()
}

/// `f*_q(beta) = w_q(q beta)`.
pub fn f_star_eval(beta: f64, q: u64, x: f64, y: f64) -> f64 {
    w_q_eval(q as f64 * beta, q, x, y)
}

/// `v_q(gamma)`.
pub fn v_q_eval(gamma: f64, q: u64, x: f64, y: f64) -> f64 {
    assert!(q >= 1);
    let n = (x / q as f64).floor() as u64;
    let m = width(y);
    let s: CompensatedSum = (1..=n).map(|k| 2.0 * m * sinc(PI * m * gamma * k as f64)).collect();
    s.value()
}

/// One major arc around `a / q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub q: u64,
    pub a: u64,
    pub center: f64,
    pub half_width: f64,
}

impl Arc {
    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }
}

/// Major arcs `|alpha - a/q| <= Q / (q X Y)` for `q <= Q = sqrt(XY) / 2`
/// inside the unit window `[Q/(XY), 1 + Q/(XY)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcDissection {
    pub x: f64,
    pub y: f64,
    pub q_param: f64,
    /// Sorted by left endpoint.
    pub arcs: Vec<Arc>,
    pub domain: (f64, f64),
}

impl ArcDissection {
    /// True when the sorted arcs do not overlap and all lie in the window.
    pub fn is_disjoint(&self) -> bool {
        let inside = self.arcs.iter().all(|a| a.lo() >= self.domain.0 - 1e-15 && a.hi() <= self.domain.1 + 1e-15);
        inside && self.arcs.windows(2).all(|w| w[0].hi() < w[1].lo())
    }

    /// The complement of the arcs in the window, in increasing order.
    pub fn minor_intervals(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut cursor = self.domain.0;
        for arc in &self.arcs {
            if arc.lo() > cursor {
                out.push((cursor, arc.lo()));
            }
            cursor = cursor.max(arc.hi());
        }
        if cursor < self.domain.1 {
            out.push((cursor, self.domain.1));
        }
        out
    }

    pub fn is_major(&self, alpha: f64) -> bool {
        self.arcs.iter().any(|a| (alpha - a.center).abs() <= a.half_width)
    }
}

pub fn dissect(x: f64, y: f64) -> Result<ArcDissection> {
    let xy = x * y;
    if !(xy >= 4.0) || !xy.is_finite() {
        return Err(Error::InvalidArgument(format!("dissection needs XY >= 4, got {xy}")));
    }
    let q_param = 0.5 * xy.sqrt();
    let q_max = q_param.floor() as u64;
    let mut arcs = Vec::new();
    for q in 1..=q_max {
        for a in (1..=q).filter(|&a| gcd(a, q) == 1) {
            arcs.push(Arc { q, a, center: a as f64 / q as f64, half_width: q_param / (q as f64 * xy) });
        }
    }
    arcs.sort_by(|u, v| u.lo().total_cmp(&v.lo()));
    Ok(ArcDissection { x, y, q_param, arcs, domain: (q_param / xy, 1.0 + q_param / xy) })
}

/// `int_0^1 |f|^2 = sum_{n != 0} r(n)^2 = 2 sum_{n >= 1} r(n)^2`.
pub fn l2_via_r(x: u64, y: u64) -> Result<u64> {
    let r = build_r_table(x, y)?;
    let mut s = 0u64;
    for &v in r.as_slice() {
        s = v.checked_mul(v).and_then(|sq| s.checked_add(sq)).ok_or_else(|| overflow("sum of r(n)^2"))?;
    }
    s.checked_mul(2).ok_or_else(|| overflow("sum of r(n)^2"))
}

/// Solutions of `xy = uv` with `1 <= |x|, |u| <= X` and `1 <= |y|, |v| <= Y`.
pub fn l2_naive(x: u64, y: u64) -> Result<u64> {
    if x.max(y) > L2_NAIVE_CAP {
        return Err(Error::ResourceLimit { what: "naive xy = uv count", needed: x.max(y) as u128, limit: L2_NAIVE_CAP as u128 });
    }
    let (x, y) = (x as i64, y as i64);
    let side = |b: i64| (-b..=b).filter(|&c| c != 0).collect::<Vec<_>>();
    let (xs, ys) = (side(x), side(y));
    let mut n = 0u64;
    for &a in &xs {
        for &b in &ys {
            for &c in &xs {
                n += ys.iter().filter(|&&d| a * b == c * d).count() as u64;
            }
        }
    }
    Ok(n)
}

/// Largest `|f|` over seeded uniform samples from the minor arcs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinorArcScan {
    pub samples: usize,
    pub seed: u64,
    pub max_abs_f: f64,
    pub argmax: f64,
    /// `(XY / Q) log Y`.
    pub scale: f64,
    pub ratio: f64,
}

pub fn minor_arc_scan(x: f64, y: f64, n_samples: usize, seed: u64) -> Result<MinorArcScan> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if !(y > 1.0) {
        return Err(Error::InvalidArgument(format!("minor-arc scale needs Y > 1, got {y}")));
    }
    let d = dissect(x, y)?;
    let intervals = d.minor_intervals();
    let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("minor arcs are empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas: Vec<f64> = (0..n_samples)
        .map(|_| {
            let mut u = rng.gen::<f64>() * total;
            for &(a, b) in &intervals {
                if u < b - a {
                    return a + u;
                }
                u -= b - a;
            }
            intervals.last().unwrap().1
        })
        .collect();
    let values: Vec<f64> = alphas.par_iter().map(|&a| f_eval(a, x, y).abs()).collect();
    let (i, &max_abs_f) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let scale = x * y / d.q_param * y.ln();
    Ok(MinorArcScan { samples: n_samples, seed, max_abs_f, argmax: alphas[i], scale, ratio: max_abs_f / scale })
}

/// `int_{-T}^{T} v_q(gamma)^3 d gamma` over panels between the zeros of
/// `sin(pi m gamma)`. The integrand is even, so only `[0, T]` is computed.
/// `tail_bound` is `C^3 / T^2` from `|v_q(gamma)| <= C / |gamma|`,
/// `C = (2 / pi) H(floor(X / q))`.
pub fn j_quadrature(q: u64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<ImproperIntegral> {
    if q == 0 || q as f64 > x {
        return Err(Error::InvalidArgument(format!("need 1 <= q <= X, got q = {q}, X = {x}")));
    }
    if !(cfg.truncation >= 1.0) || !(cfg.tolerance >= 1e-12) {
        return Err(Error::InvalidArgument("invalid quadrature configuration".into()));
    }
    let m = width(y);
    let pts = uniform_breakpoints(0.0, cfg.truncation, 1.0 / m);
    let integrator = crate::quadrature::PanelIntegrator::new(
        20,
        (cfg.tolerance / pts.len() as f64).max(1e-16),
        cfg.max_depth,
    );
    let f = |g: f64| v_q_eval(g, q, x, y).powi(3);
    let parts: Vec<Result<f64>> =
        pts.par_windows(2).map(|w| integrator.panel(&f, w[0], w[1])).collect();
    let mut body = CompensatedSum::new();
    for p in parts {
        body.add(p?);
    }
    let n = (x / q as f64).floor() as u64;
    let harmonic: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
    let c = 2.0 / PI * harmonic;
    Ok(ImproperIntegral {
        value: 2.0 * body.value(),
        tail: 0.0,
        tail_bound: c.powi(3) / cfg.truncation.powi(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::j_closed;

    fn brute_f(alpha: f64, x: i64, y: i64) -> f64 {
        let mut s = 0.0;
        for a in -x..=x {
            for b in -y..=y {
                if a != 0 && b != 0 {
                    s += (2.0 * PI * alpha * (a * b) as f64).cos();
                }
            }
        }
        s
    }

    fn brute_w(gamma: f64, q: i64, x: i64, y: i64) -> f64 {
        let n = x / q;
        let mut s = 0.0;
        for a in -n..=n {
            for b in -y..=y {
                if a != 0 {
                    s += (2.0 * PI * gamma * (a * b) as f64).cos();
                }
            }
        }
        s
    }

    #[test]
    fn kernel_examples() {
        assert!((sym_kernel(0.0, 2.0) - 4.0).abs() < 1e-12);
        assert!(sym_kernel(0.5, 2.0).abs() < 1e-12);
        assert!((sym_kernel(1.0 / 3.0, 1.0) + 1.0).abs() < 1e-12);
        assert!((sym_kernel(3.0, 2.5) - 4.0).abs() < 1e-12);
        assert!((sym_kernel(1e-12, 5.0) - 10.0).abs() < 1e-9);
    }

    #[test]
    fn f_matches_brute() {
        assert_eq!(f_eval(0.0, 2.0, 2.0), 16.0);
        for (x, y) in [(1, 1), (2, 5), (8, 8), (3, 7)] {
            for alpha in [0.0, 0.1234, 0.5, 1.0 / 3.0, 0.987_654, 2.25] {
                let f = f_eval(alpha, x as f64, y as f64);
                assert!((f - brute_f(alpha, x, y)).abs() < 1e-9, "({x}, {y}, {alpha})");
                assert!((f - f_eval(alpha + 1.0, x as f64, y as f64)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn g_w_v_examples() {
        assert_eq!(g_q_eval(0.3, 1, 5.0, 5.0), 0.0);
        assert!((g_q_eval(0.0, 2, 3.0, 2.0) - 16.0).abs() < 1e-12);
        assert!((f_star_eval(0.0, 1, 2.0, 2.0) - 20.0).abs() < 1e-12);
        assert!((w_q_eval(0.0, 1, 2.0, 2.0) - 20.0).abs() < 1e-12);
        assert!((v_q_eval(0.0, 1, 2.0, 2.0) - 20.0).abs() < 1e-12);
        assert_eq!(f_star_eval(0.2, 5, 4.0, 4.0), 0.0);
        for (q, x, y) in [(1, 8, 8), (2, 7, 3), (3, 8, 5)] {
            for g in [0.0, 0.01, 0.173, 0.5] {
                let w = w_q_eval(g, q as u64, x as f64, y as f64);
                assert!((w - brute_w(g, q, x, y)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn decomposition_on_major_arcs() {
        let (x, y) = (8.0, 8.0);
        let d = dissect(x, y).unwrap();
        for arc in &d.arcs {
            for t in [-1.0, -0.3, 0.0, 0.6, 1.0] {
                let beta = t * arc.half_width;
                let alpha = arc.center + beta;
                let diff = f_eval(alpha, x, y) - f_star_eval(beta, arc.q, x, y) - g_q_eval(alpha, arc.q, x, y);
                assert!(diff.abs() <= 2.0 * x + 1.0);
                assert!((diff + 2.0 * (x / arc.q as f64).floor()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dissection_examples() {
        let d = dissect(4.0, 4.0).unwrap();
        assert_eq!(d.q_param, 2.0);
        let mut qa: Vec<_> = d.arcs.iter().map(|a| (a.q, a.a, a.half_width)).collect();
        qa.sort_by_key(|t| t.0);
        assert_eq!(qa, vec![(1, 1, 0.125), (2, 1, 0.0625)]);
        assert_eq!(dissect(10.0, 10.0).unwrap().arcs.len(), 10);
        assert!(dissect(30.0, 30.0).unwrap().is_disjoint());
        assert!(dissect(1.0, 3.9).is_err());
        let d = dissect(30.0, 30.0).unwrap();
        let minor: f64 = d.minor_intervals().iter().map(|(a, b)| b - a).sum();
        let major: f64 = d.arcs.iter().map(|a| 2.0 * a.half_width).sum();
        assert!((minor + major - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parseval() {
        assert_eq!(l2_via_r(1, 1).unwrap(), 8);
        for x in 1..=8 {
            for y in 1..=8 {
                assert_eq!(l2_via_r(x, y).unwrap(), l2_naive(x, y).unwrap(), "({x}, {y})");
            }
        }
        assert!(l2_naive(41, 1).is_err());
    }

    #[test]
    fn minor_scan_deterministic() {
        let a = minor_arc_scan(20.0, 80.0, 200, 7).unwrap();
        let b = minor_arc_scan(20.0, 80.0, 200, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.ratio.is_finite());
        let d = dissect(20.0, 80.0).unwrap();
        assert!(!d.is_major(a.argmax));
    }

    #[test]
    fn v_trivial_bounds() {
        let (x, y) = (30.0, 40.0);
        for q in [1u64, 2, 5] {
            for k in 0..200 {
                let g = k as f64 * 0.013;
                let v = v_q_eval(g, q, x, y).abs();
                assert!(v <= 6.0 * x * y / q as f64);
                if g > 0.0 {
                    assert!(v <= 10.0 * x.ln() / g);
                }
            }
        }
    }

    #[test]
    fn j_bridge_small() {
        let cfg = QuadratureConfig { truncation: 200.0, tolerance: 1e-8, max_depth: 30 };
        let j = j_quadrature(1, 2.0, 2.0, &cfg).unwrap();
        assert!((j.value - 787.5).abs() < 0.01 * 787.5, "{}", j.value);
        assert!((j.value - j_closed(1, 2.0, 2.0)).abs() < 1e-3 * 787.5);
        let j2 = j_quadrature(2, 2.0, 2.0, &cfg).unwrap();
        assert!((j2.value - 150.0).abs() < 1.5);
        assert!(j_quadrature(3, 2.0, 2.0, &cfg).is_err());
    }
}
