use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Display;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cone_count::arith::{isqrt, ArithTable, DEFAULT_TABLE_BUDGET};
use cone_count::asymptotics::{
    deviation_singular_sum, deviation_thm1, fit_theorem2, main_term_thm1, singular_series_partial,
    theorem2_samples, thm2_scale, zeta3_value, ConstantSet, Theorem2Fit,
};
use cone_count::circle::{
    dissect, f_eval, f_star_eval, g_q_eval, j_quadrature, l2_naive, l2_via_r, minor_arc_scan, v_q_eval,
    w_q_eval,
};
use cone_count::closed_forms::{f_closed, f_leading_coefficient, s_brute, s_parts, tu_sums, SumMode};
use cone_count::counts::{
    m_fast_with_budget, m_naive, w_counts, HeightCounter, PairCensus, WCounts, M_NAIVE_CAP,
};
use cone_count::hyperbola::{
    quadratic_partition, sandwich_lower, sandwich_upper, telescope_constant, xi_main_term, xi_sum,
    xi_sum_by_shells,
};
use cone_count::special::{
    j_closed, si_cubed_closed, si_cubed_quad, triple_sine_closed, triple_sine_quad, QuadratureConfig,
};
use cone_count::{Calibration, Error};

use crate::report::{CheckRecord, SeedBlock, Status, VerificationReport};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identities,
    Counts,
    Thm1,
    Thm2,
    Thm3,
    Circle,
    Hyperbola,
    Boundary,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Identities,
        Suite::Counts,
        Suite::Thm1,
        Suite::Thm2,
        Suite::Thm3,
        Suite::Circle,
        Suite::Hyperbola,
        Suite::Boundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Counts => "counts",
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::Circle => "circle",
            Suite::Hyperbola => "hyperbola",
            Suite::Boundary => "boundary",
            Suite::All => "all",
        }
    }
}

/// Box pairs (`X:Y` items) and height bounds (`B` items) from `--grid`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grid {
    pub boxes: Vec<(u64, u64)>,
    pub heights: Vec<u64>,
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let mut g = Grid::default();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad grid entry '{item}'"));
        match item.split_once(':') {
            Some((x, y)) => {
                let (x, y) = (num(x)?, num(y)?);
                if x == 0 || y == 0 {
                    return Err(format!("box bounds must be positive in '{item}'"));
                }
                g.boxes.push((x, y));
            }
            None => {
                let b = num(item)?;
                if b == 0 {
                    return Err("height bounds must be positive".into());
                }
                g.heights.push(b);
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    /// Largest `X * Y` any box count may tabulate; larger boxes are skipped.
    pub budget: u64,
    pub grid: Grid,
    pub calibration: Calibration,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20_241_016,
            budget: DEFAULT_TABLE_BUDGET,
            grid: Grid::default(),
            calibration: Calibration::default(),
            jobs: 1,
        }
    }
}

/// Result of one check body before timing and bookkeeping.
struct Outcome {
    expected: String,
    actual: String,
    tolerance: String,
    status: Status,
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn exact<T: Display + PartialEq>(expected: T, actual: T) -> Outcome {
    Outcome {
        status: pass_if(expected == actual),
        expected: expected.to_string(),
        actual: actual.to_string(),
        tolerance: "exact".into(),
    }
}

fn close(expected: f64, actual: f64, tol: f64) -> Outcome {
    Outcome {
        status: pass_if((expected - actual).abs() <= tol),
        expected: expected.to_string(),
        actual: actual.to_string(),
        tolerance: tol.to_string(),
    }
}

fn relative(expected: f64, actual: f64, rel: f64) -> Outcome {
    Outcome {
        status: pass_if((actual / expected - 1.0).abs() <= rel),
        expected: expected.to_string(),
        actual: actual.to_string(),
        tolerance: format!("rel {rel}"),
    }
}

fn at_most(actual: f64, limit: f64) -> Outcome {
    Outcome {
        status: pass_if(actual <= limit),
        expected: format!("<= {limit}"),
        actual: actual.to_string(),
        tolerance: "bound".into(),
    }
}

fn skipped(reason: String) -> Outcome {
    Outcome { expected: String::new(), actual: reason, tolerance: String::new(), status: Status::Skip }
}

type Body = Box<dyn Fn(&Ctx) -> Result<Outcome, Error> + Send + Sync>;

struct Check {
    suite: &'static str,
    id: String,
    input: String,
    body: Body,
}

fn check(
    suite: &'static str,
    id: String,
    input: String,
    body: impl Fn(&Ctx) -> Result<Outcome, Error> + Send + Sync + 'static,
) -> Check {
    Check { suite, id: format!("{suite}/{id}"), input, body: Box::new(body) }
}

/// Shared, lazily built tables for one run.
struct Ctx {
    cfg: RunConfig,
    profiles: Mutex<Option<Arc<HeightCounter>>>,
    census: Mutex<Option<Arc<PairCensus>>>,
    thm2: OnceLock<Result<(Vec<(u64, u64)>, Theorem2Fit), String>>,
    f_values: OnceLock<HashMap<u64, f64>>,
}

impl Ctx {
    fn cal(&self) -> &Calibration {
        &self.cfg.calibration
    }

    /// A height profile covering `Z = isqrt(b)`, reused when large enough.
    fn profile(&self, b: u64) -> Result<Arc<HeightCounter>, Error> {
        let z = isqrt(b).max(1);
        let mut slot = self.profiles.lock().unwrap();
        if let Some(p) = slot.as_ref().filter(|p| p.zmax() >= z) {
            return Ok(p.clone());
        }
        let p = Arc::new(HeightCounter::new(z)?);
        *slot = Some(p.clone());
        Ok(p)
    }

    fn census(&self, b: u64) -> Result<Arc<PairCensus>, Error> {
        let z = isqrt(b).max(1);
        let mut slot = self.census.lock().unwrap();
        if let Some(c) = slot.as_ref().filter(|c| c.zmax() >= z) {
            return Ok(c.clone());
        }
        let c = Arc::new(PairCensus::enumerate(z)?);
        *slot = Some(c.clone());
        Ok(c)
    }

    fn m(&self, x: u64, y: u64) -> Result<u64, Error> {
        m_fast_with_budget(x, y, self.cfg.budget)
    }

    fn heights_or(&self, default: &[u64]) -> Vec<u64> {
        if self.cfg.grid.heights.is_empty() {
            default.to_vec()
        } else {
            self.cfg.grid.heights.clone()
        }
    }

    fn boxes_or(&self, default: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
        if self.cfg.grid.boxes.is_empty() {
            default
        } else {
            self.cfg.grid.boxes.clone()
        }
    }

    fn thm2_fit(&self, grid: &[u64]) -> Result<(Vec<(u64, u64)>, Theorem2Fit), Error> {
        self.thm2
            .get_or_init(|| {
                let samples = theorem2_samples(grid).map_err(|e| e.to_string())?;
                let pts: Vec<(f64, f64)> = samples.iter().map(|&(b, n)| (b as f64, n as f64)).collect();
                let fit = fit_theorem2(&pts).map_err(|e| e.to_string())?;
                Ok((samples, fit))
            })
            .clone()
            .map_err(Error::InvalidArgument)
    }

    fn f_value(&self, n: u64) -> f64 {
        self.f_values.get_or_init(|| (0..=G_SAMPLE_MAX).map(|k| (k, f_closed(k).to_f64())).collect())[&n]
    }
}

const G_SAMPLE_MAX: u64 = 200;

/// Default box grid: `1 <= X <= Y <= 10` plus ten seeded pairs with `XY <= 5000`
/// that stay inside the naive enumeration cap.
pub fn default_box_pairs(seed: u64) -> Vec<(u64, u64)> {
    let mut pairs: Vec<(u64, u64)> = (1..=10).flat_map(|x| (x..=10).map(move |y| (x, y))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut extra = 0;
    while extra < 10 {
        let x = rng.gen_range(1..=100u64);
        let y = rng.gen_range(1..=5000 / x);
        let (s, b) = (x.min(y) as u128, x.max(y) as u128);
        if s * s * s * b * b <= M_NAIVE_CAP {
            pairs.push((x, y));
            extra += 1;
        }
    }
    pairs
}

fn box_id(x: u64, y: u64) -> String {
    format!("{x:05}x{y:05}")
}

fn height_id(b: u64) -> String {
    format!("B={b:013}")
}

fn identities() -> Vec<Check> {
    const S: &str = "identities";
    let mut v = Vec::new();
    for n in 1..=60u64 {
        v.push(check(S, format!("s-closed/n={n:03}"), format!("n={n}"), move |_| {
            Ok(exact(f_closed(n).to_string(), s_brute(n)?.to_string()))
        }));
    }
    for n in 1..=40u64 {
        v.push(check(S, format!("s-parts/n={n:03}"), format!("n={n}"), move |_| {
            let fmt = |p: cone_count::closed_forms::SParts| format!("{};{};{}", p.s1, p.s2, p.s3);
            Ok(exact(fmt(s_parts(n, SumMode::Closed)?), fmt(s_parts(n, SumMode::Brute)?)))
        }));
        v.push(check(S, format!("tu-sums/n={n:03}"), format!("n={n}"), move |_| {
            let fmt = |t: cone_count::closed_forms::TuSums| format!("{};{};{};{};{}", t.t1, t.t2, t.u0, t.u1, t.u2);
            Ok(exact(fmt(tu_sums(n, SumMode::Closed)?), fmt(tu_sums(n, SumMode::Brute)?)))
        }));
    }
    v.push(check(S, "g-bound".into(), format!("t = k/16, 0 < t <= {G_SAMPLE_MAX}"), |ctx| {
        let k = f_leading_coefficient();
        let mut worst: f64 = 0.0;
        for n in 0..G_SAMPLE_MAX {
            // On [n, n+1) the ratio is extremal at the endpoints or on the sample grid.
            for j in 0..=16u64 {
                let t = n as f64 + j as f64 / 16.0 - if j == 16 { 1e-9 } else { 0.0 };
                if t <= 0.0 {
                    continue;
                }
                let g = ctx.f_value(n) - k * t * t;
                worst = worst.max(g.abs() / t.min(t * t));
            }
        }
        Ok(at_most(worst, ctx.cal().g_bound))
    }));
    v.push(check(S, "zeta3".into(), String::new(), |_| Ok(close(1.202_056_903_159_594_2, zeta3_value(), 1e-14))));
    v.push(check(S, "singular-series".into(), "Q=10000".into(), |_| {
        let t = ArithTable::new(10_000)?;
        Ok(close(ConstantSet::new().singular_series(), singular_series_partial(10_000, &t)?, 2e-4))
    }));
    v.push(check(S, "triple-sine/anchor-1-1-1".into(), "(1,1,1)".into(), |_| {
        Ok(close(0.75 * PI, triple_sine_closed(1.0, 1.0, 1.0)?, 1e-12))
    }));
    v.push(check(S, "triple-sine/anchor-2-1-1".into(), "(2,1,1)".into(), |_| {
        Ok(close(PI, triple_sine_closed(2.0, 1.0, 1.0)?, 1e-12))
    }));
    for i in 0..22usize {
        v.push(check(S, format!("triple-sine/quad-{i:02}"), String::new(), move |ctx| {
            let (a, b, c) = triple(ctx.cfg.seed, i);
            let closed = triple_sine_closed(a, b, c)?;
            let quad = triple_sine_quad(a, b, c, &QuadratureConfig::default())?.value;
            Ok(close(closed, quad, 1e-6))
        }));
    }
    v
}

/// Triple `i`: the two anchors, then seeded draws from `[0.5, 3]^3`.
fn triple(seed: u64, i: usize) -> (f64, f64, f64) {
    match i {
        0 => (1.0, 1.0, 1.0),
        1 => (2.0, 1.0, 1.0),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = (0.0, 0.0, 0.0);
            for _ in 1..i {
                t = (rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0));
            }
            t
        }
    }
}

fn counts(ctx: &Ctx) -> Vec<Check> {
    const S: &str = "counts";
    let mut v = Vec::new();
    for (x, y) in ctx.boxes_or(default_box_pairs(ctx.cfg.seed)) {
        let input = format!("X={x},Y={y}");
        v.push(check(S, format!("box/{}", box_id(x, y)), input.clone(), move |ctx| {
            let (s, b) = (x.min(y) as u128, x.max(y) as u128);
            if s * s * s * b * b > M_NAIVE_CAP {
                return Ok(skipped("naive enumeration cap".into()));
            }
            Ok(exact(m_naive(x, y)?, ctx.m(x, y)?))
        }));
        v.push(check(S, format!("sixteen/{}", box_id(x, y)), input, move |ctx| Ok(exact(0, ctx.m(x, y)? % 16))));
    }
    for b in ctx.heights_or(&[1, 2, 16, 50, 500, 1000, 5000, 10_000]) {
        let input = format!("B={b}");
        type Pick = fn(&HeightCounter, &PairCensus, u64) -> Result<(String, String), Error>;
        let picks: [(&str, Pick); 6] = [
            ("mprime", |h, c, b| Ok((c.mprime(b)?.to_string(), h.mprime(b)?.to_string()))),
            ("n0-times4", |h, c, b| Ok((c.n0_times4(b)?.to_string(), h.n0_times4_direct(b)?.to_string()))),
            ("n0-mobius", |h, c, b| Ok((c.n0_times4(b)?.to_string(), h.n0_times4(b)?.to_string()))),
            ("n-times4", |h, c, b| Ok((c.n_times4(b)?.to_string(), h.n_times4(b)?.to_string()))),
            ("w-profile", |h, c, b| Ok((w_str(c.w_counts(b)?), w_str(h.w_counts(b)?)))),
            ("w-structural", |_, c, b| Ok((w_str(c.w_counts(b)?), w_str(w_counts(b)?)))),
        ];
        for (name, pick) in picks {
            v.push(check(S, format!("height/{}/{name}", height_id(b)), input.clone(), move |ctx| {
                let census = match ctx.census(b) {
                    Err(Error::ResourceLimit { .. }) => return Ok(skipped("census cap".into())),
                    r => r?,
                };
                let (want, got) = pick(&*ctx.profile(b)?, &census, b)?;
                Ok(exact(want, got))
            }));
        }
    }
    v
}

fn w_str(w: WCounts) -> String {
    format!("{};{};{};{}", w.w1, w.w2, w.w3, w.w4)
}

fn thm1(ctx: &Ctx) -> Vec<Check> {
    const S: &str = "thm1";
    let mut v = Vec::new();
    for (x, y) in ctx.boxes_or(vec![(20, 20), (20, 100), (40, 40), (60, 60)]) {
        let input = format!("X={x},Y={y}");
        v.push(check(S, format!("deviation/{}", box_id(x, y)), input.clone(), move |ctx| {
            if x.min(y) < 2 || x * y > ctx.cfg.budget {
                return Ok(skipped("outside 3/2 <= X or over budget".into()));
            }
            let (x, y) = (x.min(y), x.max(y));
            Ok(at_most(deviation_thm1(x, y)?.deviation, ctx.cal().thm1_deviation))
        }));
        v.push(check(S, format!("singular-sum/{}", box_id(x, y)), input, move |ctx| {
            if x.min(y) < 2 || x * y > ctx.cfg.budget {
                return Ok(skipped("outside 3/2 <= X or over budget".into()));
            }
            let (x, y) = (x.min(y), x.max(y));
            Ok(at_most(deviation_singular_sum(x, y)?.deviation, ctx.cal().lemma5_deviation))
        }));
    }
    v.push(check(S, "main-term/1.6x10".into(), "X=1.6,Y=10".into(), |_| Ok(close(2400.0, main_term_thm1(1.6, 10.0)?, 1e-9))));
    v.push(check(S, "main-term/2x2".into(), "X=2,Y=2".into(), |_| Ok(close(552.0, main_term_thm1(2.0, 2.0)?, 1e-9))));
    v
}

const THM2_GRID: [u64; 10] =
    [100_000, 200_000, 300_000, 400_000, 500_000, 600_000, 700_000, 800_000, 900_000, 1_000_000];

fn thm2(ctx: &Ctx) -> Vec<Check> {
    const S: &str = "thm2";
    let grid = ctx.heights_or(&THM2_GRID);
    let input = grid.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
    let mut v = Vec::new();
    let g = grid.clone();
    v.push(check(S, "kappa".into(), format!("B={input}"), move |ctx| {
        let (_, fit) = ctx.thm2_fit(&g)?;
        Ok(relative(ConstantSet::new().kappa2, fit.kappa, ctx.cal().thm2_kappa_rel))
    }));
    for b in grid.clone() {
        let g = grid.clone();
        v.push(check(S, format!("residual/{}", height_id(b)), format!("B={b}"), move |ctx| {
            let (samples, fit) = ctx.thm2_fit(&g)?;
            let n = samples.iter().find(|s| s.0 == b).map(|s| s.1 as f64).unwrap_or(f64::NAN);
            let bf = b as f64;
            Ok(at_most((n - fit.predict(bf)).abs() / thm2_scale(bf), ctx.cal().thm2_residual))
        }));
    }
    v
}

fn thm3() -> Vec<Check> {
    vec![check("thm3", "si-cubed".into(), "T=10000".into(), |_| {
        Ok(close(si_cubed_closed(), si_cubed_quad(&QuadratureConfig::default())?.value, 1e-6))
    })]
}

fn brute_sum(alpha: f64, xs: impl Iterator<Item = i64> + Clone, y: i64, with_zero_y: bool) -> f64 {
    let mut s = 0.0;
    for a in xs {
        for b in -y..=y {
            if b != 0 || with_zero_y {
                s += (2.0 * PI * alpha * (a * b) as f64).cos();
            }
        }
    }
    s
}

const ORACLE_ALPHAS: [f64; 7] = [0.0, 0.0731, 0.25, 1.0 / 3.0, 0.618_034, 0.9, 1.5];

fn circle() -> Vec<Check> {
    const S: &str = "circle";
    let mut v = Vec::new();
    type Eval = fn(f64, u64, i64, i64) -> (f64, f64);
    let evals: [(&str, Eval); 5] = [
        ("f", |a, _, x, y| (brute_sum(a, (-x..=x).filter(|&t| t != 0), y, false), f_eval(a, x as f64, y as f64))),
        ("g", |a, q, x, y| {
            let xs = (-x..=x).filter(move |&t| t != 0 && t % q as i64 != 0);
            (brute_sum(a, xs, y, false), g_q_eval(a, q, x as f64, y as f64))
        }),
        ("w", |a, q, x, y| {
            let n = x / q as i64;
            (brute_sum(a, (-n..=n).filter(|&t| t != 0), y, true), w_q_eval(a, q, x as f64, y as f64))
        }),
        ("f-star", |a, q, x, y| {
            let n = x / q as i64;
            (brute_sum(a, (-n..=n).filter(|&t| t != 0), y, true), f_star_eval(a / q as f64, q, x as f64, y as f64))
        }),
        ("v", |a, q, x, y| {
            let n = x / q as i64;
            let m = (2 * y + 1) as f64;
            let brute: f64 = (-n..=n)
                .filter(|&t| t != 0)
                .map(|t| if a == 0.0 { m } else { (PI * m * a * t as f64).sin() / (PI * a * t as f64) })
                .sum();
            (brute, v_q_eval(a, q, x as f64, y as f64))
        }),
    ];
    for (name, eval) in evals {
        v.push(check(S, format!("oracle/{name}"), "1<=X,Y<=8, q<=3".into(), move |_| {
            let mut worst: f64 = 0.0;
            for x in 1..=8 {
                for y in 1..=8 {
                    for q in 1..=3 {
                        for a in ORACLE_ALPHAS {
                            let (want, got) = eval(a, q, x, y);
                            worst = worst.max((want - got).abs());
                        }
                    }
                }
            }
            Ok(at_most(worst, 1e-9))
        }));
    }
    v.push(check(S, "parseval".into(), "1<=X,Y<=8".into(), |_| {
        let mut bad = 0;
        for x in 1..=8 {
            for y in 1..=8 {
                bad += (l2_via_r(x, y)? != l2_naive(x, y)?) as u32;
            }
        }
        Ok(exact(0, bad))
    }));
    v.push(check(S, "parseval/1x1".into(), "X=1,Y=1".into(), |_| Ok(exact(8, l2_via_r(1, 1)?))));
    for (x, y) in [(10u64, 10u64), (10, 100), (50, 100), (100, 100)] {
        v.push(check(S, format!("l2-bound/{}", box_id(x, y)), format!("X={x},Y={y}"), move |ctx| {
            let l2 = l2_via_r(x, y)? as f64;
            Ok(at_most(l2 / ((x * y) as f64 * (x as f64).ln().max(1.0)), ctx.cal().l2_bound))
        }));
    }
    v.push(check(S, "arcs/4x4".into(), "X=4,Y=4".into(), |_| {
        let d = dissect(4.0, 4.0)?;
        let mut got: Vec<String> = d.arcs.iter().map(|a| format!("({},{},{})", a.q, a.a, a.half_width)).collect();
        got.sort();
        Ok(exact("(1,1,0.125) (2,1,0.0625)".to_string(), got.join(" ")))
    }));
    v.push(check(S, "arcs/10x10".into(), "X=10,Y=10".into(), |_| Ok(exact(10, dissect(10.0, 10.0)?.arcs.len()))));
    for (x, y) in [(30.0, 30.0), (40.0, 40.0), (20.0, 80.0)] {
        v.push(check(S, format!("arcs/disjoint-{x}x{y}"), format!("X={x},Y={y}"), move |_| {
            Ok(exact(true, dissect(x, y)?.is_disjoint()))
        }));
    }
    v.push(check(S, "minor-scan/40x40".into(), "X=40,Y=40,n=1000".into(), |ctx| {
        Ok(at_most(minor_arc_scan(40.0, 40.0, 1000, ctx.cfg.seed)?.ratio, ctx.cal().minor_arc_ratio))
    }));
    v.push(check(S, "minor-scan/20x80".into(), "X=20,Y=80,n=1000".into(), |ctx| {
        let r = minor_arc_scan(20.0, 80.0, 1000, ctx.cfg.seed)?.ratio;
        Ok(Outcome { expected: "finite".into(), actual: r.to_string(), tolerance: "bound".into(), status: pass_if(r.is_finite()) })
    }));
    v.push(check(S, "decomposition".into(), "X=Y=8, all major arcs".into(), |_| {
        let (x, y) = (8.0, 8.0);
        let mut worst: f64 = 0.0;
        for arc in dissect(x, y)?.arcs {
            for t in [-1.0, -0.5, 0.0, 0.25, 1.0] {
                let beta = t * arc.half_width;
                let alpha = arc.center + beta;
                let d = f_eval(alpha, x, y) - f_star_eval(beta, arc.q, x, y) - g_q_eval(alpha, arc.q, x, y);
                worst = worst.max(d.abs());
            }
        }
        Ok(at_most(worst, 2.0 * x + 1.0))
    }));
    for (x, y) in [(20.0, 20.0), (30.0, 50.0)] {
        v.push(check(S, format!("wv-proximity/{x}x{y}"), format!("X={x},Y={y},q<=3"), move |ctx| {
            let mut worst: f64 = 0.0;
            for q in 1..=3u64 {
                for k in 1..=100 {
                    let g = k as f64 / 100.0 / (2.0 * x);
                    let d = (w_q_eval(g, q, x, y) - v_q_eval(g, q, x, y)).abs();
                    worst = worst.max(d / (g * x * x / (q * q) as f64));
                }
            }
            Ok(at_most(worst, ctx.cal().wv_proximity))
        }));
        v.push(check(S, format!("v-trivial-box/{x}x{y}"), format!("X={x},Y={y},q<=5"), move |ctx| {
            let mut worst: f64 = 0.0;
            for q in 1..=5u64 {
                for k in 0..=400 {
                    let g = k as f64 * 0.0025;
                    worst = worst.max(v_q_eval(g, q, x, y).abs() / (x * y / q as f64));
                }
            }
            Ok(at_most(worst, ctx.cal().v_trivial_box))
        }));
        v.push(check(S, format!("v-trivial-decay/{x}x{y}"), format!("X={x},Y={y},q<=5"), move |ctx| {
            let mut worst: f64 = 0.0;
            for q in 1..=5u64 {
                for k in 1..=400 {
                    let g = k as f64 * 0.0025;
                    worst = worst.max(v_q_eval(g, q, x, y).abs() * g / x.ln().max(1.0));
                }
            }
            Ok(at_most(worst, ctx.cal().v_trivial_decay))
        }));
    }
    for (q, x, y) in [(1u64, 2.0, 2.0), (2, 2.0, 2.0), (1, 4.0, 4.0), (2, 6.0, 8.0)] {
        v.push(check(S, format!("j-bridge/q={q},X={x},Y={y}"), format!("q={q},X={x},Y={y},T=200"), move |_| {
            let cfg = QuadratureConfig { truncation: 200.0, tolerance: 1e-8, max_depth: 30 };
            Ok(relative(j_closed(q, x, y), j_quadrature(q, x, y, &cfg)?.value, 0.01))
        }));
    }
    v
}

fn hyperbola(ctx: &Ctx) -> Vec<Check> {
    const S: &str = "hyperbola";
    let mut v = Vec::new();
    for b in ctx.heights_or(&[16, 10_000, 100_000, 1_000_000]) {
        let input = format!("B={b}");
        let id = height_id(b);
        v.push(check(S, format!("partition/{id}"), input.clone(), move |_| {
            let l = quadratic_partition(b)?.l as u128;
            let ok = (l - 1).pow(8) < b as u128 && b as u128 <= l.pow(8);
            Ok(exact(true, ok))
        }));
        v.push(check(S, format!("sandwich/{id}"), input.clone(), move |ctx| {
            let (lo, hi) = (sandwich_lower(b)?, sandwich_upper(b)?);
            let exact_m = ctx.profile(b)?.mprime(b)?;
            Ok(Outcome {
                expected: format!("{lo} <= M' <= {hi}"),
                actual: exact_m.to_string(),
                tolerance: "exact".into(),
                status: pass_if(lo <= exact_m && exact_m <= hi),
            })
        }));
        v.push(check(S, format!("xi-shells/{id}"), input.clone(), move |ctx| {
            Ok(exact(xi_sum(b)?, xi_sum_by_shells(b, &*ctx.profile(b)?)?))
        }));
        v.push(check(S, format!("xi-split/{id}"), input.clone(), move |_| {
            let t = xi_main_term(b)?;
            Ok(close(t.direct, t.split(), 1e-9 * t.direct.abs().max(1.0)))
        }));
        v.push(check(S, format!("xi-deviation/{id}"), input, move |ctx| {
            Ok(at_most(cone_count::hyperbola::xi_deviation(b)?, ctx.cal().xi_deviation))
        }));
    }
    v.push(check(S, "xi-main/B=16".into(), "B=16".into(), |_| Ok(close(360.0, xi_main_term(16)?.direct, 1e-9))));
    v.push(check(S, "telescope/L=2".into(), "L=2".into(), |_| {
        Ok(close(15.0 / 16.0 - 4.0 * 2f64.ln(), telescope_constant(2)?, 1e-15))
    }));
    v.push(check(S, "telescope/rate".into(), "L=1000, 10^6".into(), |_| {
        // The remainder after L terms is close to 8 / L.
        let d = telescope_constant(1_000)? - telescope_constant(1_000_000)?;
        Ok(relative(1.0, d * 1_000.0 / 8.0, 0.02))
    }));
    v
}

fn boundary(ctx: &Ctx) -> Vec<Check> {
    const S: &str = "boundary";
    let b = ctx.heights_or(&[1_000_000]).into_iter().max().unwrap();
    let input = format!("B={b}");
    vec![
        check(S, "ratio".into(), input.clone(), move |ctx| {
            let h = ctx.profile(b)?.height_counts(b)?;
            let r = (h.n_times4 - h.n0_times4) as f64 / 4.0 / b as f64;
            Ok(relative(ConstantSet::new().boundary, r, ctx.cal().boundary_rel))
        }),
        check(S, "w3-density".into(), input.clone(), move |ctx| {
            let z = isqrt(b) as f64;
            Ok(relative(ConstantSet::new().w3_density(), w_counts(b)?.w3 as f64 / (z * z), ctx.cal().w3_rel))
        }),
        check(S, "w4".into(), input.clone(), move |_| Ok(exact(24, w_counts(b)?.w4))),
        check(S, "identity".into(), input, move |ctx| {
            let h = ctx.profile(b)?.height_counts(b)?;
            Ok(exact(h.n_times4 - h.n0_times4, w_counts(b)?.total()))
        }),
        check(S, "height-one".into(), "B=1".into(), |_| Ok(exact("96;24;48;24".to_string(), w_str(w_counts(1)?)))),
    ]
}

fn checks_for(suite: Suite, ctx: &Ctx) -> Vec<Check> {
    match suite {
        Suite::Identities => identities(),
        Suite::Counts => counts(ctx),
        Suite::Thm1 => thm1(ctx),
        Suite::Thm2 => thm2(ctx),
        Suite::Thm3 => thm3(),
        Suite::Circle => circle(),
        Suite::Hyperbola => hyperbola(ctx),
        Suite::Boundary => boundary(ctx),
        Suite::All => Suite::EACH.iter().flat_map(|&s| checks_for(s, ctx)).collect(),
    }
}

/// Runs every check of `suite` on `config.jobs` threads. A failing or
/// erroring check is recorded and the rest still run; records are sorted by id.
pub fn run_suite(suite: Suite, config: &RunConfig) -> Result<VerificationReport, CliError> {
    let ctx = Ctx {
        cfg: config.clone(),
        profiles: Mutex::new(None),
        census: Mutex::new(None),
        thm2: OnceLock::new(),
        f_values: OnceLock::new(),
    };
    let checks = checks_for(suite, &ctx);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs.max(1)).build()?;
    let mut records: Vec<CheckRecord> = pool.install(|| {
        checks
            .par_iter()
            .map(|c| {
                let t = Instant::now();
                let outcome = match (c.body)(&ctx) {
                    Ok(o) => o,
                    Err(Error::ResourceLimit { what, needed, limit }) => {
                        skipped(format!("{what}: needs {needed}, limit {limit}"))
                    }
                    Err(e) => Outcome {
                        expected: String::new(),
                        actual: format!("error: {e}"),
                        tolerance: String::new(),
                        status: Status::Fail,
                    },
                };
                CheckRecord {
                    suite: c.suite.into(),
                    check_id: c.id.clone(),
                    input: c.input.clone(),
                    expected: outcome.expected,
                    actual: outcome.actual,
                    tolerance: outcome.tolerance,
                    status: outcome.status,
                    runtime_ms: t.elapsed().as_millis() as u64,
                }
            })
            .collect()
    });
    records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(VerificationReport {
        suite: suite.name().into(),
        checks: records,
        calibration: config.calibration,
        seeds: SeedBlock { seed: config.seed },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("20:20, 20:100,16,10000").unwrap();
        assert_eq!(g.boxes, vec![(20, 20), (20, 100)]);
        assert_eq!(g.heights, vec![16, 10_000]);
        assert!(parse_grid("0:3").is_err());
        assert!(parse_grid("x").is_err());
        assert!(parse_grid("0").is_err());
        assert_eq!(parse_grid("").unwrap(), Grid::default());
    }

    #[test]
    fn default_pairs_fit_caps() {
        let p = default_box_pairs(5);
        assert_eq!(p.len(), 65);
        assert!(p.iter().all(|&(x, y)| x * y <= 5000));
        assert_eq!(p, default_box_pairs(5));
    }

    #[test]
    fn thm3_single_pass() {
        let r = run_suite(Suite::Thm3, &RunConfig::default()).unwrap();
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.checks[0].status, Status::Pass);
    }

    #[test]
    fn triples_are_seeded() {
        assert_eq!(triple(3, 0), (1.0, 1.0, 1.0));
        assert_eq!(triple(3, 5), triple(3, 5));
        let (a, b, c) = triple(3, 9);
        assert!([a, b, c].iter().all(|v| (0.5..3.0).contains(v)));
    }
}
