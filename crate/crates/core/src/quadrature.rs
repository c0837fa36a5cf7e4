//! Compensated summation and Gauss–Legendre panel quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Neumaier-compensated running sum. Order of `add` calls is the order of
/// accumulation, so callers control determinism.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Fixed-order Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from the Chebyshev initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: CompensatedSum = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .collect();
        half * s.value()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection driver around a fixed Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct PanelIntegrator {
    rule: GaussLegendre,
    pub tolerance: f64,
    pub max_depth: u32,
}

impl PanelIntegrator {
    pub fn new(order: usize, tolerance: f64, max_depth: u32) -> Self {
        Self { rule: GaussLegendre::new(order), tolerance, max_depth }
    }

    /// Integrates over one panel, bisecting until the whole-vs-halves
    /// estimate differs by less than the tolerance (scaled by panel share).
    pub fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> Result<f64> {
        let whole = self.rule.integrate(f, a, b);
        self.refine(f, a, b, whole, self.tolerance, 0)
    }

    fn refine<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let left = self.rule.integrate(f, a, m);
        let right = self.rule.integrate(f, m, b);
        let both = left + right;
        if (both - whole).abs() <= tol.max(1e-15 * both.abs()) {
            return Ok(both);
        }
        if depth >= self.max_depth {
            return Err(Error::Convergence(format!(
                "panel [{a}, {b}] still off by {:e} at depth {depth}",
                (both - whole).abs()
            )));
        }
        Ok(self.refine(f, a, m, left, 0.5 * tol, depth + 1)?
            + self.refine(f, m, b, right, 0.5 * tol, depth + 1)?)
    }

    /// Sum of [`Self::panel`] over consecutive breakpoints, in ascending order.
    pub fn over_breakpoints<F: Fn(f64) -> f64>(&self, f: &F, points: &[f64]) -> Result<f64> {
        let mut s = CompensatedSum::new();
        for w in points.windows(2) {
            s.add(self.panel(f, w[0], w[1])?);
        }
        Ok(s.value())
    }
}

/// Breakpoints `a, a + h, a + 2h, ..., b` (the last step may be shorter).
pub fn uniform_breakpoints(a: f64, b: f64, h: f64) -> Vec<f64> {
    assert!(h > 0.0 && b >= a);
    let n = ((b - a) / h).floor() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|k| a + k as f64 * h).collect();
    if *pts.last().unwrap() < b - 1e-12 * h {
        pts.push(b);
    } else {
        *pts.last_mut().unwrap() = b;
    }
    pts
}

/// `sin(u) / u` with a series branch near zero.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-3 {
        let u2 = u * u;
        1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0))
    } else {
        u.sin() / u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn gauss_legendre_polynomials_exact() {
        let gl = GaussLegendre::new(10);
        let w: f64 = gl.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
        // Degree 19 is integrated exactly by a 10-point rule.
        let v = gl.integrate(&|x: f64| x.powi(18) + x.powi(19), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let v = gl.integrate(&|x: f64| x * x, 0.0, 3.0);
        assert!((v - 9.0).abs() < 1e-13);
    }

    #[test]
    fn odd_order_has_center_node() {
        let gl = GaussLegendre::new(5);
        assert!(gl.nodes[2].abs() < 1e-15);
        assert!((gl.weights[2] - 128.0 / 225.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let q = PanelIntegrator::new(20, 1e-13, 30);
        let pts = uniform_breakpoints(0.0, 100.0 * PI, PI);
        let v = q.over_breakpoints(&|x: f64| x.sin().powi(2), &pts).unwrap();
        assert!((v - 50.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn adaptive_reports_nonconvergence() {
        let q = PanelIntegrator::new(2, 1e-14, 2);
        let r = q.panel(&|x: f64| (1.0 / (x + 1e-6)).sin(), 0.0, 1.0);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }

    #[test]
    fn breakpoints_cover_interval() {
        let p = uniform_breakpoints(0.0, 1.0, 0.3);
        assert_eq!(p.len(), 5);
        assert_eq!(*p.last().unwrap(), 1.0);
        let p = uniform_breakpoints(0.0, 1.0, 0.25);
        assert_eq!(p, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn sinc_continuous_at_branch() {
        let a = sinc(0.999_999e-3);
        let b = sinc(1.000_001e-3);
        assert!((a - b).abs() < 1e-12);
        assert_eq!(sinc(0.0), 1.0);
    }
}
