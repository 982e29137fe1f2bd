//! Numerical diagnostics that sit next to the exact verdicts: orbit
//! correlations, the Cesaro mixing indicator, Weyl sums and the
//! horizontal-vertical analytics.
//!
//! Everything here runs in floating point on seeded orbits. Thresholds that
//! turn numbers into yes/no answers are heuristics and reports say so.

mod hv;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::exactnum::ExactError;
use crate::flow::{Engine, FlowError};
use crate::iet::FloatIet;
use crate::surface::TranslationSurface;

pub use hv::{
    convergent_counts, fundamental_rectangle_count, fundamental_rectangle_side, hv_classify, hv_eigenvalues,
    verify_hv_eigenfunction, ConvergentCount, HvClass, HvEigenvalue,
};

/// Label carried by every report that gates on a decay threshold.
pub const HEURISTIC_NOTE: &str =
    "heuristic: decay thresholds are engineering choices; weak mixing gives no rate and a finite scan cannot rule out eigenvalues";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("({0}, {1}) is not a convergent pair 0 < n < m in lowest terms")]
    BadConvergent(i64, i64),
    #[error("observable {0} is not defined on this domain")]
    WrongDomain(String),
    #[error("cannot parse observable {0:?}")]
    BadObservable(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `e(x) = exp(2 pi i x)`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x)
}

/// Test functions. `Indicator` and `Character` live on an interval
/// `[0, |lambda|)`; `Fourier` lives on a surface chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    /// `1_[lo, hi)`
    Indicator { lo: f64, hi: f64 },
    /// `e(j x / |lambda|)`
    Character { j: i64 },
    /// `e(j x + k y)` in polygon coordinates
    Fourier { j: i64, k: i64 },
    Constant(f64),
}

impl Observable {
    pub fn on_interval(&self, x: f64, total: f64) -> Result<Complex64, SpectralError> {
        Ok(match *self {
            Observable::Indicator { lo, hi } => Complex64::new(f64::from(u8::from(lo <= x && x < hi)), 0.0),
            Observable::Character { j } => e(j as f64 * x / total),
            Observable::Constant(c) => Complex64::new(c, 0.0),
            Observable::Fourier { .. } => return Err(SpectralError::WrongDomain(self.to_string())),
        })
    }

    pub fn on_chart(&self, p: [f64; 2]) -> Result<Complex64, SpectralError> {
        Ok(match *self {
            Observable::Fourier { j, k } => e(j as f64 * p[0] + k as f64 * p[1]),
            Observable::Constant(c) => Complex64::new(c, 0.0),
            _ => return Err(SpectralError::WrongDomain(self.to_string())),
        })
    }

    /// Largest modulus, the bound on every Weyl average.
    pub fn sup_norm(&self) -> f64 {
        match *self {
            Observable::Indicator { .. } | Observable::Character { .. } | Observable::Fourier { .. } => 1.0,
            Observable::Constant(c) => c.abs(),
        }
    }

    fn check_interval(&self) -> Result<(), SpectralError> {
        self.on_interval(0.0, 1.0).map(|_| ())
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Indicator { lo, hi } => write!(f, "indicator:{lo},{hi}"),
            Observable::Character { j } => write!(f, "char:{j}"),
            Observable::Fourier { j, k } => write!(f, "fourier:{j},{k}"),
            Observable::Constant(c) => write!(f, "const:{c}"),
        }
    }
}

/// `indicator:LO,HI`, `char:J`, `fourier:J,K` or `const:C`.
impl FromStr for Observable {
    type Err = SpectralError;

    fn from_str(s: &str) -> Result<Self, SpectralError> {
        let bad = || SpectralError::BadObservable(s.to_string());
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<&str> = args.split(',').map(str::trim).collect();
        let float = |i: usize| nums.get(i).and_then(|v| v.parse::<f64>().ok()).ok_or_else(bad);
        let int = |i: usize| nums.get(i).and_then(|v| v.parse::<i64>().ok()).ok_or_else(bad);
        let (obs, arity) = match kind.trim() {
            "indicator" => (Observable::Indicator { lo: float(0)?, hi: float(1)? }, 2),
            "char" => (Observable::Character { j: int(0)? }, 1),
            "fourier" => (Observable::Fourier { j: int(0)?, k: int(1)? }, 2),
            "const" => (Observable::Constant(float(0)?), 1),
            _ => return Err(bad()),
        };
        if nums.len() != arity {
            return Err(bad());
        }
        Ok(obs)
    }
}

/// A special flow over an interval exchange: the point `(x, s)` with
/// `0 <= s < roof(x)` moves up at unit speed and jumps to `(T x, 0)`.
#[derive(Debug, Clone)]
pub struct SpecialFlow {
    pub iet: FloatIet,
    pub roof: Vec<f64>,
}

impl SpecialFlow {
    pub fn new(iet: FloatIet, roof: Vec<f64>) -> Result<Self, SpectralError> {
        if roof.len() != iet.lengths().len() || roof.iter().any(|&t| !(t > 0.0)) {
            return Err(SpectralError::BadParameters("roof needs one positive value per interval".into()));
        }
        Ok(SpecialFlow { iet, roof })
    }

    fn advance(&self, x: &mut f64, s: &mut f64, dt: f64) {
        *s += dt;
        loop {
            let t = self.roof[self.iet.locate(*x)];
            if *s < t {
                return;
            }
            *s -= t;
            *x = self.iet.apply(*x);
        }
    }
}

/// Where orbit samples come from.
#[derive(Debug, Clone, Copy)]
pub enum Dynamics<'a> {
    /// iterates of the map
    Map(&'a FloatIet),
    /// the special flow read every `dt`, observables evaluated on the base
    Flow { flow: &'a SpecialFlow, dt: f64 },
}

impl Dynamics<'_> {
    fn base(&self) -> &FloatIet {
        match self {
            Dynamics::Map(t) => t,
            Dynamics::Flow { flow, .. } => &flow.iet,
        }
    }

    /// `len` consecutive base points from a random start.
    fn orbit(&self, len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let total = self.base().total_length();
        let mut x = rng.gen_range(0.0..total);
        let mut out = Vec::with_capacity(len);
        match self {
            Dynamics::Map(t) => {
                for _ in 0..len {
                    out.push(x);
                    x = t.apply(x);
                }
            }
            Dynamics::Flow { flow, dt } => {
                let mut s = rng.gen_range(0.0..flow.roof[flow.iet.locate(x)]);
                for _ in 0..len {
                    out.push(x);
                    flow.advance(&mut x, &mut s, *dt);
                }
            }
        }
        out
    }
}

/// `C(n) = (1/M) sum_k f(x_{n+k}) conj(g(x_k))` for `n = 0..=max_lag`, with
/// the orbit means of `f` and `g` over the same `M` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlations {
    pub values: Vec<Complex64>,
    pub mean_f: Complex64,
    pub mean_g: Complex64,
    pub samples: usize,
    pub seed: u64,
}

impl Correlations {
    pub fn lags(&self) -> std::ops::Range<usize> {
        0..self.values.len()
    }
}

/// Cross-correlation of `a` against the first `m` entries of `b`, lags
/// `0..=max_lag`, through one FFT product.
fn cross_correlate(a: &[Complex64], b: &[Complex64], max_lag: usize) -> Vec<Complex64> {
    let m = b.len();
    let size = (a.len() + m).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut fa = a.to_vec();
    fa.resize(size, Complex64::default());
    let mut fb = b.to_vec();
    fb.resize(size, Complex64::default());
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    let mut prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y.conj()).collect();
    inv.process(&mut prod);
    let norm = (size * m) as f64;
    prod.truncate(max_lag + 1);
    prod.iter().map(|z| z / norm).collect()
}

/// Single-orbit estimate of the correlations of `f` against `g`.
pub fn birkhoff_correlation(
    dynamics: Dynamics<'_>,
    f: &Observable,
    g: &Observable,
    max_lag: usize,
    samples: usize,
    seed: u64,
) -> Result<Correlations, SpectralError> {
    if max_lag == 0 || samples == 0 {
        return Err(SpectralError::BadParameters("max_lag and samples must be positive".into()));
    }
    f.check_interval()?;
    g.check_interval()?;
    if let Dynamics::Flow { dt, .. } = dynamics {
        if !(dt > 0.0) {
            return Err(SpectralError::BadParameters("time step must be positive".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = dynamics.base().total_length();
    let orbit = dynamics.orbit(samples + max_lag, &mut rng);
    let fa = orbit.iter().map(|&x| f.on_interval(x, total)).collect::<Result<Vec<_>, _>>()?;
    let gb = orbit[..samples].iter().map(|&x| g.on_interval(x, total)).collect::<Result<Vec<_>, _>>()?;
    let m = samples as f64;
    let mean_f = fa[..samples].iter().sum::<Complex64>() / m;
    let mean_g = gb.iter().sum::<Complex64>() / m;
    Ok(Correlations { values: cross_correlate(&fa, &gb, max_lag), mean_f, mean_g, samples, seed })
}

/// `M(N) = (1/N) sum_{n<N} |C(n) - <f> conj(<g>)|`; entry `i` is `M(i + 1)`.
pub fn cesaro_mixing_indicator(c: &Correlations) -> Vec<f64> {
    let base = c.mean_f * c.mean_g.conj();
    let mut acc = 0.0;
    c.values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            acc += (v - base).norm();
            acc / (n + 1) as f64
        })
        .collect()
}

/// Correlations and Cesaro curve averaged over independent restarts, with
/// the spread of the Cesaro curve between restarts.
#[derive(Debug, Clone)]
pub struct MixingReport {
    pub correlations: Vec<Complex64>,
    pub cesaro: Vec<f64>,
    /// sample standard deviation of `M(N)` across restarts (0 for one run)
    pub cesaro_spread: Vec<f64>,
    pub mean_f: Complex64,
    pub mean_g: Complex64,
    pub sample_count: usize,
    pub restarts: usize,
    pub seed: u64,
    pub note: &'static str,
}

impl MixingReport {
    pub fn lags(&self) -> std::ops::Range<usize> {
        0..self.correlations.len()
    }

    /// `M(N)` for `1 <= N <= max_lag + 1`.
    pub fn cesaro_at(&self, n: usize) -> f64 {
        self.cesaro[n - 1]
    }

    /// Heuristic: the curve falls below `M(1) / factor` somewhere.
    pub fn drops_below(&self, factor: f64) -> Option<usize> {
        let target = self.cesaro[0] / factor;
        self.cesaro.iter().position(|&v| v < target).map(|i| i + 1)
    }

    /// Rows `lag, re C, im C, |C - <f><g>*|, M(lag + 1), spread`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lag,corr_re,corr_im,corr_abs_centered,cesaro,cesaro_spread\n");
        let base = self.mean_f * self.mean_g.conj();
        for (n, c) in self.correlations.iter().enumerate() {
            out.push_str(&format!(
                "{n},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                c.re,
                c.im,
                (c - base).norm(),
                self.cesaro[n],
                self.cesaro_spread[n]
            ));
        }
        out
    }
}

pub fn mixing_report(
    dynamics: Dynamics<'_>,
    f: &Observable,
    g: &Observable,
    max_lag: usize,
    samples: usize,
    restarts: usize,
    seed: u64,
) -> Result<MixingReport, SpectralError> {
    if restarts == 0 {
        return Err(SpectralError::BadParameters("at least one restart".into()));
    }
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let runs = (0..restarts)
        .map(|_| birkhoff_correlation(dynamics, f, g, max_lag, samples, seeds.gen()))
        .collect::<Result<Vec<_>, _>>()?;
    let r = restarts as f64;
    let curves: Vec<Vec<f64>> = runs.iter().map(cesaro_mixing_indicator).collect();
    let len = max_lag + 1;
    let cesaro: Vec<f64> = (0..len).map(|i| curves.iter().map(|c| c[i]).sum::<f64>() / r).collect();
    let cesaro_spread = (0..len)
        .map(|i| {
            if restarts < 2 {
                return 0.0;
            }
            let var = curves.iter().map(|c| (c[i] - cesaro[i]).powi(2)).sum::<f64>() / (r - 1.0);
            var.sqrt()
        })
        .collect();
    Ok(MixingReport {
        correlations: (0..len).map(|i| runs.iter().map(|c| c.values[i]).sum::<Complex64>() / r).collect(),
        cesaro,
        cesaro_spread,
        mean_f: runs.iter().map(|c| c.mean_f).sum::<Complex64>() / r,
        mean_g: runs.iter().map(|c| c.mean_g).sum::<Complex64>() / r,
        sample_count: samples,
        restarts,
        seed,
        note: HEURISTIC_NOTE,
    })
}

/// `|(1/N) sum_{n<N} e(-alpha S_n(x)) f(T^n x)|` averaged over `samples`
/// random starts, where `S_n = n` for a plain map and `S_n` is the roof
/// Birkhoff sum when `roof` is given. With a roof this detects eigenvalues
/// of the special flow: the twisted average keeps its size exactly when
/// `f(Tx) = e(alpha t(x)) f(x)` has a solution correlated with `f`.
pub fn weyl_sum(
    iet: &FloatIet,
    f: &Observable,
    alpha: f64,
    n: usize,
    samples: usize,
    seed: u64,
    roof: Option<&[f64]>,
) -> Result<f64, SpectralError> {
    if n == 0 || samples == 0 {
        return Err(SpectralError::BadParameters("N and samples must be positive".into()));
    }
    f.check_interval()?;
    let m = iet.lengths().len();
    if roof.is_some_and(|r| r.len() != m) {
        return Err(SpectralError::BadParameters("roof needs one value per interval".into()));
    }
    // phase increment per interval, reduced mod 1 to keep the sum accurate
    let steps: Vec<f64> = (0..m).map(|j| (alpha * roof.map_or(1.0, |r| r[j])).rem_euclid(1.0)).collect();
    let total = iet.total_length();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let mut x = rng.gen_range(0.0..total);
        let mut phase = 0.0f64;
        let mut sum = Complex64::default();
        for _ in 0..n {
            sum += e(-phase) * f.on_interval(x, total)?;
            let j = iet.locate(x);
            phase = (phase + steps[j]).rem_euclid(1.0);
            x = iet.apply(x);
        }
        acc += sum.norm() / n as f64;
    }
    Ok(acc / samples as f64)
}

/// Uniform random point of the surface: polygon by area, then rejection in
/// its bounding box.
pub(crate) fn random_point(surface: &TranslationSurface, rng: &mut ChaCha8Rng) -> (usize, [f64; 2]) {
    let areas: Vec<f64> = surface.polygons().iter().map(|p| p.area_f()).collect();
    let total: f64 = areas.iter().sum();
    let mut pick = rng.gen_range(0.0..total);
    let mut poly = areas.len() - 1;
    for (i, a) in areas.iter().enumerate() {
        if pick < *a {
            poly = i;
            break;
        }
        pick -= a;
    }
    let vs: Vec<[f64; 2]> = surface.polygons()[poly].vertices().iter().map(|v| v.to_f64()).collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in &vs {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    loop {
        let p = [rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
        if inside(&vs, p) {
            return (poly, p);
        }
    }
}

/// Even-odd rule.
fn inside(vs: &[[f64; 2]], p: [f64; 2]) -> bool {
    let mut c = false;
    for i in 0..vs.len() {
        let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
        if (a[1] > p[1]) != (b[1] > p[1]) && p[0] < a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]) {
            c = !c;
        }
    }
    c
}

/// Weyl average of a chart observable along the straight-line flow read
/// every `dt`: `|(1/N) sum_{n<N} e(-alpha n dt) f(phi_{n dt} p)|`, averaged
/// over random starts. Orbits that run into a cone point are redrawn.
#[allow(clippy::too_many_arguments)]
pub fn flow_weyl_sum(
    surface: &TranslationSurface,
    velocity: [f64; 2],
    f: &Observable,
    alpha: f64,
    dt: f64,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, SpectralError> {
    if n == 0 || samples == 0 || !(dt > 0.0) {
        return Err(SpectralError::BadParameters("N, samples and dt must be positive".into()));
    }
    f.on_chart([0.0, 0.0])?;
    let engine = Engine::new(surface);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = (alpha * dt).rem_euclid(1.0);
    let mut acc = 0.0;
    let mut done = 0;
    let mut redraws = 0;
    'sample: while done < samples {
        let (mut poly, mut p) = random_point(surface, &mut rng);
        let mut phase = 0.0f64;
        let mut sum = Complex64::default();
        for _ in 0..n {
            sum += e(-phase) * f.on_chart(p)?;
            match engine.advance(poly, p, velocity, dt) {
                Ok((q, r)) => (poly, p) = (q, r),
                Err(FlowError::SingularOrbit(_)) if redraws < 100 * samples => {
                    redraws += 1;
                    continue 'sample;
                }
                Err(err) => return Err(err.into()),
            }
            phase = (phase + step).rem_euclid(1.0);
        }
        acc += sum.norm() / n as f64;
        done += 1;
    }
    Ok(acc / samples as f64)
}
