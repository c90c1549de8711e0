//! Total-degree homotopy continuation for the corner system.
//!
//! Paths are tracked in projective space `P^4` on a random affine chart
//! `v · X = 1`, with `X = (x0, a, b, c, d)`, so that paths heading to
//! infinity stay bounded. The homotopy is
//! `H(X, t) = γ (1 - t) G(X) + t F(X)` where `G_i = X_i^{d_i} - X_0^{d_i}`
//! and `F` is the homogenized target.

use std::f64::consts::TAU;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::Curve;
use crate::poly::{ComplexPoly, RationalPoly};
use crate::squares::{
    canonicalize, corners, is_degenerate, orbit, rewritten_generators, transform_curve,
    RigidMotion, SquareParam,
};

type Vec5 = SVector<Complex64, 5>;
type Mat5 = SMatrix<Complex64, 5, 5>;
type Vec4 = SVector<Complex64, 4>;
type Mat4 = SMatrix<Complex64, 4, 4>;

/// Start systems with more paths than this are refused.
pub const MAX_START_POINTS: u64 = 1_000_000;

/// Singular endpoints farther out than this are treated as diverged: a
/// path to infinity that stalls is only accurate to about the square root
/// of the divergence threshold.
const SINGULAR_DIVERGENCE_NORM: f64 = 1e5;

/// Singular endpoints with `|c| + |d|` above this count as nondegenerate.
const SINGULAR_DEGENERATE_TOL: f64 = 1e-4;
/// Projective representatives larger than this trigger a chart change.
const RECHART_NORM: f64 = 1e3;

/// Fraction of paths that may end at nondegenerate singular points before
/// a positive-dimensional family is suspected.
const POSITIVE_DIMENSIONAL_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("{paths} paths exceed the budget of {budget}")]
    BudgetExceeded { paths: u64, budget: u64 },
    #[error("start system would have {0} points")]
    StartSystemTooLarge(u64),
    #[error("all {0} paths failed")]
    AllPathsFailed(usize),
    #[error("degrees must be at least 1")]
    ZeroDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomotopySettings {
    pub seed: u64,
    /// Overrides the seeded `γ` when set.
    pub gamma: Option<Complex64>,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    pub max_steps: usize,
    /// Step underflow closer than this to `t = 1` is handed to the
    /// endpoint polish instead of failing the path.
    pub endgame_zone: f64,
    pub endpoint_tol: f64,
    pub dedup_tol: f64,
    pub degenerate_tol: f64,
    pub reality_tol: f64,
    pub divergence_norm: f64,
    pub budget: u64,
    /// Apply a seeded rational rigid motion before solving.
    pub rotate: bool,
}

impl Default for HomotopySettings {
    fn default() -> Self {
        HomotopySettings {
            seed: 0,
            gamma: None,
            initial_step: 0.01,
            min_step: 1e-14,
            max_step: 0.05,
            corrector_tol: 1e-10,
            max_corrector_iters: 3,
            max_steps: 50_000,
            endgame_zone: 1e-3,
            endpoint_tol: 1e-8,
            dedup_tol: 1e-6,
            degenerate_tol: 1e-8,
            reality_tol: 1e-6,
            divergence_norm: 1e10,
            budget: 625,
            rotate: true,
        }
    }
}

impl HomotopySettings {
    pub fn with_seed(seed: u64) -> Self {
        HomotopySettings {
            seed,
            ..Self::default()
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Seeded unit-modulus `γ`, unless overridden.
    pub fn gamma(&self) -> Complex64 {
        self.gamma.unwrap_or_else(|| {
            let mut rng = self.rng();
            let _ = RigidMotion::random(&mut rng);
            Complex64::from_polar(1.0, rng.random_range(0.0..TAU))
        })
    }

    fn chart(&self) -> [Complex64; 5] {
        let mut rng = self.rng();
        let _ = RigidMotion::random(&mut rng);
        let _: f64 = rng.random_range(0.0..TAU);
        std::array::from_fn(|_| {
            Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..TAU))
        })
    }

    pub fn motion(&self) -> RigidMotion {
        if self.rotate {
            RigidMotion::random(&mut self.rng())
        } else {
            RigidMotion::identity()
        }
    }
}

/// Four equations in `a, b, c, d` with complex coefficients.
#[derive(Debug, Clone)]
pub struct PolySystem4 {
    pub equations: [ComplexPoly; 4],
    pub degrees: [u32; 4],
}

impl PolySystem4 {
    /// Panics if an equation is identically zero or not in four variables.
    pub fn new(equations: [ComplexPoly; 4]) -> Self {
        let degrees = equations.each_ref().map(|p| {
            assert_eq!(p.nvars(), 4, "equations must be in four variables");
            p.degree().expect("equations must be nonzero")
        });
        PolySystem4 { equations, degrees }
    }

    /// Each rational equation divided by its largest coefficient.
    pub fn from_rational(equations: &[RationalPoly; 4]) -> Self {
        PolySystem4::new(equations.each_ref().map(|p| {
            let c = p.to_complex();
            let scale = c.terms().map(|(_, v)| v.norm()).fold(0.0, f64::max);
            c.scale(&Complex64::new(1.0 / scale, 0.0))
        }))
    }

    /// `max_i |p_i(x)| / (‖p_i‖₁ · max(1, ‖x‖∞)^{d_i})`.
    pub fn residual(&self, x: &[Complex64; 4]) -> f64 {
        let norm = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
        self.equations
            .iter()
            .zip(self.degrees.iter())
            .map(|(p, &d)| {
                let v = p.evaluate(x).expect("four variables").norm();
                v / (p.coeff_norm1() * norm.powi(d as i32))
            })
            .fold(0.0, f64::max)
    }
}

/// `x_i^{d_i} - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StartSystem {
    pub degrees: [u32; 4],
}

impl StartSystem {
    pub fn as_system(&self) -> PolySystem4 {
        PolySystem4::new(std::array::from_fn(|i| {
            let xi = ComplexPoly::var(4, i).pow(self.degrees[i]);
            &xi - &ComplexPoly::constant(4, Complex64::new(1.0, 0.0))
        }))
    }
}

/// The start system and all `Π d_i` tuples of roots of unity, in
/// lexicographic order of root indices.
pub fn total_degree_start(
    degrees: [u32; 4],
) -> Result<(StartSystem, Vec<[Complex64; 4]>), SolveError> {
    if degrees.contains(&0) {
        return Err(SolveError::ZeroDegree);
    }
    let total = degrees.iter().map(|&d| d as u64).product::<u64>();
    if total > MAX_START_POINTS {
        return Err(SolveError::StartSystemTooLarge(total));
    }
    let roots: Vec<Vec<Complex64>> = degrees
        .iter()
        .map(|&d| {
            (0..d)
                .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / d as f64))
                .collect()
        })
        .collect();
    let mut points = Vec::with_capacity(total as usize);
    for r0 in &roots[0] {
        for r1 in &roots[1] {
            for r2 in &roots[2] {
                for r3 in &roots[3] {
                    points.push([*r0, *r1, *r2, *r3]);
                }
            }
        }
    }
    Ok((StartSystem { degrees }, points))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathStatus {
    Regular,
    Singular,
    Diverged,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    /// Affine endpoint `(a, b, c, d)`; meaningless for diverged paths.
    pub endpoint: [Complex64; 4],
    pub status: PathStatus,
    pub residual: f64,
    /// Ratio of successive Newton steps during the final polish.
    pub contraction: f64,
    pub steps: usize,
    /// `max |x_i| / |x_0|` of the projective endpoint.
    pub affine_norm: f64,
    /// Condition number of the Jacobian at the endpoint.
    pub condition: f64,
    /// Reached `t` before the polish.
    pub t_reached: f64,
}

/// A homogeneous polynomial in `X = (x0, a, b, c, d)`.
#[derive(Debug, Clone)]
struct HomPoly {
    terms: Vec<(Complex64, [u32; 5])>,
}

impl HomPoly {
    fn homogenize(p: &ComplexPoly, degree: u32) -> Self {
        let terms = p
            .terms()
            .map(|(e, c)| {
                let mut ex = [0u32; 5];
                for i in 0..4 {
                    ex[i + 1] = e.get(i) as u32;
                }
                ex[0] = degree - e.degree();
                (*c, ex)
            })
            .collect();
        HomPoly { terms }
    }

    /// Value and gradient.
    fn eval(&self, pows: &[Vec<Complex64>; 5]) -> (Complex64, [Complex64; 5]) {
        let mut val = Complex64::zero();
        let mut grad = [Complex64::zero(); 5];
        for (c, e) in &self.terms {
            let factors: [Complex64; 5] = std::array::from_fn(|j| pows[j][e[j] as usize]);
            val += c * factors.iter().product::<Complex64>();
            for j in 0..5 {
                if e[j] == 0 {
                    continue;
                }
                let mut g = c * Complex64::new(e[j] as f64, 0.0) * pows[j][e[j] as usize - 1];
                for (k, f) in factors.iter().enumerate() {
                    if k != j {
                        g *= f;
                    }
                }
                grad[j] += g;
            }
        }
        (val, grad)
    }
}

fn power_table(x: &Vec5, degree: u32) -> [Vec<Complex64>; 5] {
    std::array::from_fn(|j| {
        let mut v = Vec::with_capacity(degree as usize + 1);
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..=degree {
            v.push(acc);
            acc *= x[j];
        }
        v
    })
}

fn norm_inf(v: &Vec5) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Precompiled homotopy between a start system and a target.
pub struct Tracker {
    target: [HomPoly; 4],
    degrees: [u32; 4],
    max_degree: u32,
    gamma: Complex64,
    chart: Vec5,
    settings: HomotopySettings,
    affine: PolySystem4,
}

struct Eval {
    h: Vec5,
    jac: Mat5,
    ht: Vec5,
}

impl Tracker {
    pub fn new(target: &PolySystem4, start: &StartSystem, settings: &HomotopySettings) -> Self {
        assert_eq!(target.degrees, start.degrees, "start and target degrees differ");
        let max_degree = *target.degrees.iter().max().expect("four degrees");
        Tracker {
            target: std::array::from_fn(|i| {
                HomPoly::homogenize(&target.equations[i], target.degrees[i])
            }),
            degrees: target.degrees,
            max_degree,
            gamma: settings.gamma(),
            chart: Vec5::from_column_slice(&settings.chart()),
            settings: *settings,
            affine: target.clone(),
        }
    }

    fn eval(&self, x: &Vec5, t: f64, chart: &Vec5) -> Eval {
        let pows = power_table(x, self.max_degree);
        let mut h = Vec5::zeros();
        let mut jac = Mat5::zeros();
        let mut ht = Vec5::zeros();
        let s = self.gamma * (1.0 - t);
        for i in 0..4 {
            let (f, df) = self.target[i].eval(&pows);
            let d = self.degrees[i] as usize;
            let g = pows[i + 1][d] - pows[0][d];
            let dd = Complex64::new(d as f64, 0.0);
            let mut dg = [Complex64::zero(); 5];
            dg[i + 1] = dd * pows[i + 1][d - 1];
            dg[0] = -dd * pows[0][d - 1];
            h[i] = s * g + f * t;
            ht[i] = f - self.gamma * g;
            for j in 0..5 {
                jac[(i, j)] = s * dg[j] + df[j] * t;
            }
        }
        h[4] = chart.dot(x) - Complex64::new(1.0, 0.0);
        for j in 0..5 {
            jac[(4, j)] = chart[j];
        }
        Eval { h, jac, ht }
    }

    fn velocity(&self, x: &Vec5, t: f64, chart: &Vec5) -> Option<Vec5> {
        let e = self.eval(x, t, chart);
        e.jac.lu().solve(&(-e.ht))
    }

    fn predict(&self, x: &Vec5, t: f64, h: f64, chart: &Vec5) -> Option<Vec5> {
        let half = Complex64::new(h / 2.0, 0.0);
        let k1 = self.velocity(x, t, chart)?;
        let k2 = self.velocity(&(x + k1 * half), t + h / 2.0, chart)?;
        let k3 = self.velocity(&(x + k2 * half), t + h / 2.0, chart)?;
        let k4 = self.velocity(&(x + k3 * Complex64::new(h, 0.0)), t + h, chart)?;
        let two = Complex64::new(2.0, 0.0);
        let incr = (k1 + k2 * two + k3 * two + k4) * Complex64::new(h / 6.0, 0.0);
        Some(x + incr)
    }

    fn correct(&self, x: &Vec5, t: f64, chart: &Vec5) -> Option<Vec5> {
        let mut x = *x;
        let mut prev = f64::INFINITY;
        for _ in 0..self.settings.max_corrector_iters {
            let e = self.eval(&x, t, chart);
            let dx = e.jac.lu().solve(&(-e.h))?;
            x += dx;
            let n = norm_inf(&dx);
            if n <= self.settings.corrector_tol * (1.0 + norm_inf(&x)) {
                return Some(x);
            }
            if n > 0.5 * prev {
                return None;
            }
            prev = n;
        }
        None
    }

    fn start_vector(&self, start: &[Complex64; 4]) -> Vec5 {
        let x = Vec5::new(Complex64::new(1.0, 0.0), start[0], start[1], start[2], start[3]);
        let s = self.chart.dot(&x);
        x / s
    }

    /// Tracks one path from `t = 0` to `t = 1`, polishes and classifies it.
    pub fn track(&self, start: &[Complex64; 4]) -> PathResult {
        self.track_with_max_step(start, self.settings.max_step)
    }

    fn track_with_max_step(&self, start: &[Complex64; 4], max_step: f64) -> PathResult {
        let st = &self.settings;
        let mut x = self.start_vector(start);
        let mut chart = self.chart;
        let mut t = 0.0f64;
        let mut h = st.initial_step.min(max_step);
        let mut streak = 0;
        let mut steps = 0;
        let mut failed = false;
        while t < 1.0 {
            if steps >= st.max_steps {
                failed = true;
                break;
            }
            steps += 1;
            if norm_inf(&x) > RECHART_NORM {
                // the point is nearly orthogonal to the chart; move to the
                // chart tangent to the unit-norm representative
                x /= Complex64::new(x.norm(), 0.0);
                chart = x.map(|z| z.conj());
            }
            let step = h.min(1.0 - t);
            let next = self
                .predict(&x, t, step, &chart)
                .and_then(|p| self.correct(&p, t + step, &chart));
            match next {
                Some(nx) if nx.iter().all(|z| z.is_finite()) => {
                    x = nx;
                    t = if step >= 1.0 - t { 1.0 } else { t + step };
                    streak += 1;
                    if streak >= 3 {
                        h = (h * 2.0).min(max_step);
                        streak = 0;
                    }
                }
                _ => {
                    h /= 2.0;
                    streak = 0;
                    if h < st.min_step {
                        failed = 1.0 - t > st.endgame_zone;
                        break;
                    }
                }
            }
        }
        if failed {
            return self.finish(x, steps, t, true);
        }
        let x = self.polish_projective(x, &chart);
        self.finish(x, steps, t, false)
    }

    fn projective_residual(&self, x: &Vec5, chart: &Vec5) -> f64 {
        let e = self.eval(x, 1.0, chart);
        norm_inf(&e.h)
    }

    fn polish_projective(&self, x: Vec5, chart: &Vec5) -> Vec5 {
        let mut best = x;
        let mut best_res = self.projective_residual(&x, chart);
        let mut cur = x;
        for _ in 0..30 {
            let e = self.eval(&cur, 1.0, chart);
            let Some(dx) = e.jac.lu().solve(&(-e.h)) else {
                break;
            };
            cur += dx;
            if !cur.iter().all(|z| z.is_finite()) {
                break;
            }
            let r = self.projective_residual(&cur, chart);
            if r < best_res {
                best = cur;
                best_res = r;
            }
            if norm_inf(&dx) <= 1e-15 * (1.0 + norm_inf(&cur)) {
                break;
            }
        }
        best
    }

    fn affine_eval(&self, x: &Vec4) -> (Vec4, Mat4) {
        let mut v = Vec4::zeros();
        let mut jac = Mat4::zeros();
        let one = Complex64::new(1.0, 0.0);
        let xh = Vec5::new(one, x[0], x[1], x[2], x[3]);
        let pows = power_table(&xh, self.max_degree);
        for i in 0..4 {
            let (f, df) = self.target[i].eval(&pows);
            v[i] = f;
            for j in 0..4 {
                jac[(i, j)] = df[j + 1];
            }
        }
        (v, jac)
    }

    /// Affine Newton polish with a classification of the convergence.
    fn finish(&self, x: Vec5, steps: usize, t: f64, failed: bool) -> PathResult {
        let st = &self.settings;
        let x0 = x[0].norm();
        let big = (1..5).map(|i| x[i].norm()).fold(0.0, f64::max);
        let affine_norm = if x0 == 0.0 { f64::INFINITY } else { big / x0 };
        let endpoint: [Complex64; 4] = if x0 == 0.0 {
            [Complex64::new(f64::NAN, 0.0); 4]
        } else {
            std::array::from_fn(|i| x[i + 1] / x[0])
        };
        let mut result = PathResult {
            endpoint,
            status: PathStatus::Failed,
            residual: f64::INFINITY,
            contraction: f64::INFINITY,
            steps,
            affine_norm,
            condition: f64::INFINITY,
            t_reached: t,
        };
        if failed {
            if affine_norm.is_finite() {
                result.residual = self.affine.residual(&endpoint);
            }
            return result;
        }
        if affine_norm.is_nan() || affine_norm > st.divergence_norm {
            result.status = PathStatus::Diverged;
            return result;
        }
        let mut xa = Vec4::from_column_slice(&endpoint);
        let mut norms: Vec<f64> = Vec::new();
        let mut singular_jac = false;
        let mut cond = 0.0;
        for _ in 0..8 {
            let (v, jac) = self.affine_eval(&xa);
            let Some(dx) = jac.lu().solve(&(-v)) else {
                singular_jac = true;
                break;
            };
            let cand = xa + dx;
            if !cand.iter().all(|z| z.is_finite()) {
                singular_jac = true;
                break;
            }
            let n = dx.iter().map(|z| z.norm()).fold(0.0, f64::max);
            norms.push(n);
            xa = cand;
            let scale = 1.0 + xa.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if n <= 1e-15 * scale {
                break;
            }
        }
        if !singular_jac {
            let (_, jac) = self.affine_eval(&xa);
            let sv = jac.singular_values();
            let (mx, mn) = (sv.max(), sv.min());
            cond = if mn > 0.0 { mx / mn } else { f64::INFINITY };
        }
        let point: [Complex64; 4] = [xa[0], xa[1], xa[2], xa[3]];
        let residual = self.affine.residual(&point);
        let pnorm = 1.0 + point.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let floor = 1e-10 * pnorm;
        let mut contraction = 0.0f64;
        for w in norms.windows(2) {
            if w[0] > floor {
                contraction = contraction.max(w[1] / w[0]);
            }
        }
        let moved = norms.first().copied().unwrap_or(0.0);
        result.endpoint = point;
        result.residual = residual;
        result.contraction = contraction;
        result.condition = if singular_jac { f64::INFINITY } else { cond };
        result.affine_norm = point.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let regular = !singular_jac
            && residual < st.endpoint_tol
            && contraction < 0.1
            && cond < 1e8
            && moved < 1e-3 * pnorm;
        result.status = if regular {
            PathStatus::Regular
        } else if result.affine_norm > SINGULAR_DIVERGENCE_NORM {
            PathStatus::Diverged
        } else {
            PathStatus::Singular
        };
        result
    }
}

pub fn track_path(
    target: &PolySystem4,
    start: &StartSystem,
    start_point: &[Complex64; 4],
    settings: &HomotopySettings,
) -> PathResult {
    Tracker::new(target, start, settings).track(start_point)
}

fn close(x: &[Complex64; 4], y: &[Complex64; 4], tol: f64) -> bool {
    let scale = 1.0 + x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    x.iter()
        .zip(y.iter())
        .all(|(p, q)| (p - q).norm() <= tol * scale)
}

/// Tracks every path in parallel; results stay in start-point order.
/// Paths whose regular endpoints collide are retracked with smaller steps.
pub fn solve_system(
    target: &PolySystem4,
    settings: &HomotopySettings,
) -> Result<Vec<PathResult>, SolveError> {
    let (start, points) = total_degree_start(target.degrees)?;
    let tracker = Tracker::new(target, &start, settings);
    let mut results: Vec<PathResult> = points.par_iter().map(|p| tracker.track(p)).collect();
    let mut max_step = settings.max_step;
    // path jumping shows up as duplicate regular endpoints; step underflow
    // as failed paths; both are retried with a tighter step cap
    for _ in 0..3 {
        let mut dup = duplicate_regular(&results, settings.dedup_tol);
        dup.extend((0..results.len()).filter(|&i| results[i].status == PathStatus::Failed));
        dup.sort_unstable();
        dup.dedup();
        if dup.is_empty() {
            break;
        }
        max_step /= 8.0;
        let redo: Vec<(usize, PathResult)> = dup
            .par_iter()
            .map(|&i| (i, tracker.track_with_max_step(&points[i], max_step)))
            .collect();
        for (i, r) in redo {
            results[i] = r;
        }
    }
    Ok(results)
}

fn duplicate_regular(results: &[PathResult], tol: f64) -> Vec<usize> {
    let regular: Vec<usize> = (0..results.len())
        .filter(|&i| results[i].status == PathStatus::Regular)
        .collect();
    let mut dup = Vec::new();
    for (a, &i) in regular.iter().enumerate() {
        for &j in &regular[a + 1..] {
            if close(&results[i].endpoint, &results[j].endpoint, tol) {
                dup.push(i);
                dup.push(j);
            }
        }
    }
    dup.sort_unstable();
    dup.dedup();
    dup
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Generator `g_index` (1-based) vanishes identically.
    ZeroGenerator { index: usize },
    PositiveDimensional { evidence: String },
    IncompleteOrbit { square: usize, members: usize },
    FailedPaths { count: usize },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::ZeroGenerator { index } => write!(f, "g{} is identically zero", index),
            Warning::PositiveDimensional { evidence } => {
                write!(f, "suspected positive-dimensional family of squares ({})", evidence)
            }
            Warning::IncompleteOrbit { square, members } => write!(
                f,
                "square {} was found with only {} of its 4 parametrizations",
                square, members
            ),
            Warning::FailedPaths { count } => write!(f, "{} paths failed", count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareEntry {
    /// Canonical orbit representative in the input curve's coordinates.
    pub param: SquareParam,
    pub real: bool,
    /// Largest endpoint residual among the orbit members.
    pub residual: f64,
    /// Distinct parametrizations found (4 for a complete orbit).
    pub members: usize,
    /// Regular endpoints that landed on this square.
    pub cluster_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularCluster {
    pub point: SquareParam,
    pub size: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareReport {
    pub degree: u32,
    pub seed: u64,
    /// `(cos, sin, tx, ty)` of the motion applied before solving.
    pub motion: Option<[String; 4]>,
    pub n_paths: usize,
    pub n_finite: usize,
    pub n_diverged: usize,
    pub n_failed: usize,
    pub n_singular: usize,
    pub n_nondegenerate: usize,
    pub n_orbits: usize,
    pub n_real_squares: usize,
    pub squares: Vec<SquareEntry>,
    pub singular_clusters: Vec<SingularCluster>,
    pub warnings: Vec<Warning>,
}

impl SquareReport {
    pub fn has_positive_dimensional_warning(&self) -> bool {
        self.warnings
            .iter()
            .any(|w| matches!(w, Warning::PositiveDimensional { .. }))
    }
}

fn lex_key(sq: &SquareParam) -> [f64; 8] {
    let v = sq.to_array();
    [
        v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im, v[3].re, v[3].im,
    ]
}

fn lex_cmp(x: &SquareParam, y: &SquareParam) -> std::cmp::Ordering {
    let (a, b) = (lex_key(x), lex_key(y));
    a.iter()
        .zip(b.iter())
        .map(|(p, q)| p.total_cmp(q))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Lexicographic order on coordinates snapped to a grid of width `q`, so that
/// conjugate squares with equal real parts order by imaginary part regardless
/// of last-bit noise.
fn snapped_cmp(x: &SquareParam, y: &SquareParam, q: f64) -> std::cmp::Ordering {
    let snap = |k: [f64; 8]| k.map(|v| (v / q).round());
    let (a, b) = (snap(lex_key(x)), snap(lex_key(y)));
    a.iter()
        .zip(b.iter())
        .map(|(p, q)| p.total_cmp(q))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| lex_cmp(x, y))
}

fn within(x: &SquareParam, y: &SquareParam, tol: f64) -> bool {
    close(&x.to_array(), &y.to_array(), tol)
}

/// Greedy clustering of sorted points; returns `(representative, size)`.
fn cluster(mut pts: Vec<SquareParam>, tol: f64) -> Vec<(SquareParam, usize)> {
    pts.sort_by(lex_cmp);
    let mut out: Vec<(SquareParam, usize)> = Vec::new();
    for p in pts {
        match out.iter_mut().find(|(q, _)| within(&p, q, tol)) {
            Some(entry) => entry.1 += 1,
            None => out.push((p, 1)),
        }
    }
    out
}

fn motion_strings(m: &RigidMotion) -> [String; 4] {
    [&m.cos, &m.sin, &m.tx, &m.ty].map(|r| r.to_string())
}

/// Solves the corner system of `f` and groups the nondegenerate isolated
/// solutions into squares.
pub fn count_inscribed_squares(
    f: &Curve,
    settings: &HomotopySettings,
) -> Result<SquareReport, SolveError> {
    let m = f.degree();
    let bezout = (m as u64).pow(4);
    if bezout > settings.budget {
        return Err(SolveError::BudgetExceeded {
            paths: bezout,
            budget: settings.budget,
        });
    }
    let motion = settings.motion();
    let work = if motion.is_identity() {
        f.clone()
    } else {
        transform_curve(f, &motion)
    };
    let system = rewritten_generators(&work);
    let mut report = SquareReport {
        degree: m,
        seed: settings.seed,
        motion: (!motion.is_identity()).then(|| motion_strings(&motion)),
        n_paths: 0,
        n_finite: 0,
        n_diverged: 0,
        n_failed: 0,
        n_singular: 0,
        n_nondegenerate: 0,
        n_orbits: 0,
        n_real_squares: 0,
        squares: Vec::new(),
        singular_clusters: Vec::new(),
        warnings: Vec::new(),
    };
    let zeros = system.zero_generators();
    if !zeros.is_empty() {
        for &i in &zeros {
            report.warnings.push(Warning::ZeroGenerator { index: i + 1 });
        }
        report.warnings.push(Warning::PositiveDimensional {
            evidence: "a generator vanishes identically, leaving fewer equations than unknowns"
                .to_string(),
        });
        return Ok(report);
    }

    let target = PolySystem4::from_rational(&system.g);
    let results = solve_system(&target, settings)?;
    report.n_paths = results.len();
    let count = |s: PathStatus| results.iter().filter(|r| r.status == s).count();
    report.n_failed = count(PathStatus::Failed);
    report.n_diverged = count(PathStatus::Diverged);
    report.n_singular = count(PathStatus::Singular);
    report.n_finite = count(PathStatus::Regular) + report.n_singular;
    if report.n_failed == report.n_paths {
        return Err(SolveError::AllPathsFailed(report.n_paths));
    }

    let back = |r: &PathResult| motion.map_square(&SquareParam::from_array(r.endpoint));
    let regular: Vec<(SquareParam, f64)> = results
        .iter()
        .filter(|r| r.status == PathStatus::Regular)
        .map(|r| (back(r), r.residual))
        .filter(|(sq, _)| !is_degenerate(sq, settings.degenerate_tol))
        .collect();

    let solutions = cluster(regular.iter().map(|(s, _)| *s).collect(), settings.dedup_tol);
    report.n_nondegenerate = solutions.len();

    let mut orbits: Vec<(SquareParam, Vec<(SquareParam, usize)>)> = Vec::new();
    for (sol, size) in &solutions {
        let canon = canonicalize(sol);
        match orbits
            .iter_mut()
            .find(|(c, _)| within(c, &canon, settings.dedup_tol))
        {
            Some((_, members)) => members.push((*sol, *size)),
            None => orbits.push((canon, vec![(*sol, *size)])),
        }
    }
    let grid = settings.dedup_tol * 1e-2;
    orbits.sort_by(|x, y| snapped_cmp(&x.0, &y.0, grid));
    for (canon, members) in orbits {
        let residual = regular
            .iter()
            .filter(|(s, _)| orbit(&canon).iter().any(|o| within(o, s, settings.dedup_tol)))
            .map(|(_, r)| *r)
            .fold(0.0, f64::max);
        report.squares.push(SquareEntry {
            param: canon,
            real: canon.max_imag() < settings.reality_tol,
            residual,
            members: members.len(),
            cluster_size: members.iter().map(|(_, n)| n).sum(),
        });
    }
    report.n_orbits = report.squares.len();
    report.n_real_squares = report.squares.iter().filter(|s| s.real).count();
    for (i, sq) in report.squares.iter().enumerate() {
        if sq.members < 4 {
            report.warnings.push(Warning::IncompleteOrbit {
                square: i,
                members: sq.members,
            });
        }
    }

    let singular: Vec<SquareParam> = results
        .iter()
        .filter(|r| r.status == PathStatus::Singular)
        .map(back)
        .collect();
    let sqrt_tol = settings.dedup_tol.sqrt().max(SINGULAR_DEGENERATE_TOL);
    report.singular_clusters = cluster(singular, sqrt_tol)
        .into_iter()
        .map(|(point, size)| SingularCluster {
            point,
            size,
            degenerate: is_degenerate(&point, SINGULAR_DEGENERATE_TOL),
        })
        .collect();
    let nondegenerate_singular: usize = report
        .singular_clusters
        .iter()
        .filter(|c| !c.degenerate)
        .map(|c| c.size)
        .sum();
    if nondegenerate_singular as f64 > POSITIVE_DIMENSIONAL_FRACTION * report.n_paths as f64 {
        report.warnings.push(Warning::PositiveDimensional {
            evidence: format!(
                "{} of {} paths end at singular nondegenerate points",
                nondegenerate_singular, report.n_paths
            ),
        });
    }
    if report.n_failed > 0 {
        report.warnings.push(Warning::FailedPaths {
            count: report.n_failed,
        });
    }
    Ok(report)
}

/// Corners of one real square, ordered for drawing a closed polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderSquare {
    pub param: SquareParam,
    pub corners: [(f64, f64); 4],
}

/// Real squares of a report with corners in drawing order
/// `(a+c, b+d), (a-d, b+c), (a-c, b-d), (a+d, b-c)`.
pub fn reality_and_render_data(report: &SquareReport) -> Vec<RenderSquare> {
    report
        .squares
        .iter()
        .filter(|s| s.real)
        .map(|s| {
            let cs = corners(&s.param);
            let order = [cs[0], cs[3], cs[2], cs[1]];
            RenderSquare {
                param: s.param,
                corners: order.map(|(x, y)| (x.re, y.re)),
            }
        })
        .collect()
}

/// `max |f(corner)| / (‖f‖₁ · max(1, |corner|)^m)` over the four corners.
pub fn corner_residual(f: &Curve, sq: &SquareParam) -> f64 {
    let p = f.poly().to_complex();
    let norm1 = p.coeff_norm1();
    let m = f.degree() as i32;
    corners(sq)
        .iter()
        .map(|(x, y)| {
            let v = p.evaluate(&[*x, *y]).expect("two variables").norm();
            let s = x.norm().max(y.norm()).max(1.0);
            v / (norm1 * s.powi(m))
        })
        .fold(0.0, f64::max)
}

/// Largest `|coeff|` of `f` as a float, for scaling residuals.
pub fn coefficient_scale(f: &Curve) -> f64 {
    f.poly()
        .terms()
        .map(|(_, c)| c.to_f64().unwrap_or(f64::INFINITY).abs())
        .fold(0.0, f64::max)
}
