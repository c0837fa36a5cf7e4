//! Integral sine, the triple-sine integral and its closed form, and the
//! cube-of-integral-sine identity.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::closed_forms::f_closed;
use crate::error::{Error, Result};
use crate::quadrature::{sinc, uniform_breakpoints, CompensatedSum, PanelIntegrator};

/// Rule order used for every panel in this module.
const PANEL_ORDER: usize = 20;

/// Truncation and accuracy settings for the improper integrals here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Upper truncation point `T` of `[0, T]`; the rest is handled analytically.
    pub truncation: f64,
    /// Absolute tolerance for the numerical part over `[0, T]`.
    pub tolerance: f64,
    /// Maximum bisection depth per panel.
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { truncation: 1e4, tolerance: 1e-10, max_depth: 30 }
    }
}

impl QuadratureConfig {
    pub fn with_truncation(truncation: f64) -> Self {
        Self { truncation, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.truncation >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "truncation must be at least 1, got {}",
                self.truncation
            )));
        }
        if !(self.tolerance >= 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be at least 1e-12, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    fn integrator(&self, panels: usize) -> PanelIntegrator {
        let per_panel = (self.tolerance / panels.max(1) as f64).max(1e-16);
        PanelIntegrator::new(PANEL_ORDER, per_panel, self.max_depth)
    }
}

/// Value of an improper integral split into the numerical part on `[0, T]`
/// (or `[-T, T]`) and an analytic tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImproperIntegral {
    /// Full estimate, tail included.
    pub value: f64,
    /// The analytic tail contribution already contained in `value`.
    pub tail: f64,
    /// Bound on what the tail model leaves out.
    pub tail_bound: f64,
}

/// `Si t = int_0^t sin(a)/a da`.
///
/// Power series for `|t| <= 2`, Gauss–Legendre panels on `[2, t]` up to
/// `t = 40`, and the auxiliary-function asymptotic expansion beyond; each
/// regime is accurate to better than `1e-13`.
pub fn si(t: f64) -> f64 {
    if t < 0.0 {
        return -si(-t);
    }
    if t <= 2.0 {
        si_series(t)
    } else if t <= 40.0 {
        let q = PanelIntegrator::new(PANEL_ORDER, 1e-15, 20);
        let pts = uniform_breakpoints(2.0, t, FRAC_PI_2);
        si_series(2.0) + q.over_breakpoints(&sinc, &pts).expect("sinc panels converge")
    } else {
        si_asymptotic(t)
    }
}

fn si_series(t: f64) -> f64 {
    let t2 = t * t;
    let mut term = t;
    let mut sum = CompensatedSum::new();
    let mut k = 0u32;
    while term.abs() > 1e-18 * t.abs().max(1e-300) || k == 0 {
        let kf = k as f64;
        sum.add(term / (2.0 * kf + 1.0));
        term *= -t2 / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
        k += 1;
        if k > 60 {
            break;
        }
    }
    sum.value()
}

/// `Si t = pi/2 - f(t) cos t - g(t) sin t` with the asymptotic series of
/// `f` and `g` truncated at their smallest term.
fn si_asymptotic(t: f64) -> f64 {
    let (f, g) = aux_fg(t);
    FRAC_PI_2 - f * t.cos() - g * t.sin()
}

fn aux_fg(t: f64) -> (f64, f64) {
    let inv2 = 1.0 / (t * t);
    // f ~ (1/t) sum (-1)^k (2k)! / t^(2k),  g ~ (1/t^2) sum (-1)^k (2k+1)! / t^(2k)
    let mut f = CompensatedSum::new();
    let mut g = CompensatedSum::new();
    let mut tf: f64 = 1.0;
    let mut tg: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60u32 {
        let size = tf.abs().max(tg.abs());
        if size > prev || size < 1e-20 {
            break;
        }
        prev = size;
        f.add(tf);
        g.add(tg);
        let a = 2.0 * k as f64;
        tf *= -(a + 1.0) * (a + 2.0) * inv2;
        tg *= -(a + 2.0) * (a + 3.0) * inv2;
    }
    (f.value() / t, g.value() * inv2)
}

/// `Box(v) = v |v|`.
pub fn box_fn(v: f64) -> f64 {
    v * v.abs()
}

fn check_frequencies(w: [f64; 3]) -> Result<()> {
    if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("frequencies must be positive, got {w:?}")));
    }
    Ok(())
}

/// Closed form of `int_R sin(w1 t) sin(w2 t) sin(w3 t) / t^3 dt`.
pub fn triple_sine_closed(w1: f64, w2: f64, w3: f64) -> Result<f64> {
    check_frequencies([w1, w2, w3])?;
    let s = w1 + w2 + w3;
    Ok(PI / 8.0
        * (s * s + box_fn(w1 - w2 - w3) + box_fn(w2 - w3 - w1) + box_fn(w3 - w1 - w2)))
}

/// `int_x^inf sin(s) / s^3 ds` for `x > 0`, via one integration by parts
/// down to the integral sine.
fn sin_over_cube_tail(x: f64) -> f64 {
    0.5 * x.sin() / (x * x) + 0.5 * (x.cos() / x - (FRAC_PI_2 - si(x)))
}

/// `int_T^inf sin(w t) / t^3 dt` for any real `w`.
fn oscillatory_tail(w: f64, t: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w.signum() * w * w * sin_over_cube_tail(w.abs() * t)
    }
}

/// Numerical value of the triple-sine integral over `[-T, T]` with the
/// tail beyond `T` added in closed form through `Si`.
pub fn triple_sine_quad(w1: f64, w2: f64, w3: f64, cfg: &QuadratureConfig) -> Result<ImproperIntegral> {
    check_frequencies([w1, w2, w3])?;
    cfg.validate()?;
    let t_max = cfg.truncation;
    let top = w1 + w2 + w3;
    let pts = uniform_breakpoints(0.0, t_max, PI / top);
    let q = cfg.integrator(pts.len());
    let prod = w1 * w2 * w3;
    let f = |t: f64| prod * sinc(w1 * t) * sinc(w2 * t) * sinc(w3 * t);
    let body = q.over_breakpoints(&f, &pts)?;
    // sin a sin b sin c = (sin(a-b+c) + sin(-a+b+c) + sin(a+b-c) - sin(a+b+c)) / 4
    let tail = 0.25
        * (oscillatory_tail(w1 - w2 + w3, t_max)
            + oscillatory_tail(-w1 + w2 + w3, t_max)
            + oscillatory_tail(w1 + w2 - w3, t_max)
            - oscillatory_tail(top, t_max));
    Ok(ImproperIntegral {
        value: 2.0 * (body + tail),
        tail: 2.0 * tail,
        tail_bound: 1e-12 * (1.0 + top * top),
    })
}

/// `33 pi / 32 - pi^3 / 32`.
pub fn si_cubed_closed() -> f64 {
    (33.0 - PI * PI) * PI / 32.0
}

/// `(Si t / t)^3`, equal to 1 at the origin.
fn si_cubed_integrand(t: f64) -> f64 {
    let r = if t < 1e-3 {
        let t2 = t * t;
        1.0 - t2 / 18.0 + t2 * t2 / 600.0
    } else {
        si(t) / t
    };
    r * r * r
}

/// `int_0^inf (Si t)^3 / t^3 dt`: panels between multiples of `pi` on
/// `[0, T]`, then the tail from `Si t = pi/2 - cos t / t - sin t / t^2 + ...`.
pub fn si_cubed_quad(cfg: &QuadratureConfig) -> Result<ImproperIntegral> {
    cfg.validate()?;
    if cfg.truncation < 100.0 {
        return Err(Error::InvalidArgument("truncation must be at least 100".into()));
    }
    let t_max = cfg.truncation;
    let pts = uniform_breakpoints(0.0, t_max, PI);
    let q = cfg.integrator(pts.len());
    let body = q.over_breakpoints(&si_cubed_integrand, &pts)?;
    let h = FRAC_PI_2;
    let t4 = t_max.powi(4);
    let tail = h.powi(3) / (2.0 * t_max * t_max) + 3.0 * h * h * t_max.sin() / t4 + 3.0 * h / (8.0 * t4);
    Ok(ImproperIntegral { value: body + tail, tail, tail_bound: 40.0 / t_max.powi(5) })
}

/// `J(q) = (2 floor(Y) + 1)^2 F(floor(X / q))`, zero once `q > X`.
pub fn j_closed(q: u64, x: f64, y: f64) -> f64 {
    assert!(q >= 1);
    let n = (x / q as f64).floor() as u64;
    let m = 2.0 * y.floor() + 1.0;
    m * m * f_closed(n).to_f64()
}
