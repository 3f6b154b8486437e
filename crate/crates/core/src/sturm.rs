//! Negative-eigenvalue counting for `s·(-d²/dx² + c/x² - M)`.
//!
//! Two independent counters:
//!
//! * Prüfer angle integration. For `-u'' + q u = μ u` write `u = r sin θ`,
//!   `u' = r cos θ`; then `θ' = cos²θ + (μ - q) sin²θ` and, with Dirichlet data
//!   at both ends, the number of eigenvalues below `μ` is `⌊θ(b)/π⌋`.
//! * Sylvester inertia of the symmetric tridiagonal finite-difference matrix,
//!   via the Sturm sequence of its `LDLᵀ` pivots.
//!
//! For `c > 0` the line splits at the singularity `x = 0` into two half-lines
//! `(0, L]` (the left one reflected). Each starts at `δ` on the principal
//! solution `u ∝ x^{s₊}`, `s₊ = (1 + √(1 + 4c))/2`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{Profile1D, VariableRole};
use crate::solver::SolverConfig;

/// Singular Sturm–Liouville problem `s·(-d²/dx² + c/x² - M(x))` on `[-L, L]`
/// with Dirichlet ends.
#[derive(Debug, Clone)]
pub struct SlProblem {
    pub c: f64,
    pub m: Profile1D,
    pub truncation: f64,
    pub singular_start: f64,
    pub overall_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Prufer,
    Inertia1d,
    Lattice,
    ModeSum,
}

impl CountMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMethod::Prufer => "prufer",
            CountMethod::Inertia1d => "inertia_1d",
            CountMethod::Lattice => "lattice",
            CountMethod::ModeSum => "mode_sum",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Resolution {
    /// Final Prüfer step factor (1, 1/2, 1/4, ...).
    pub step_factor: Option<f64>,
    /// Final grid size of a discretized counter.
    pub grid_points: Option<usize>,
    /// Counts seen along the refinement ladder.
    pub ladder: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountResult {
    pub count: usize,
    /// Eigenvalues within `ε_num` below the threshold, as offsets from it.
    /// They are excluded from `count`.
    pub borderline: Vec<f64>,
    pub method: CountMethod,
    pub resolution: Resolution,
    pub per_mode: Option<std::collections::BTreeMap<i64, usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepStats {
    pub steps: usize,
    pub min_step: f64,
    pub max_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PruferTrace {
    pub theta_final: f64,
    pub node_count: usize,
    pub step_stats: StepStats,
}

struct Segment {
    a: f64,
    b: f64,
    /// Sign applied to `x` before evaluating `M`.
    mirror: f64,
    theta0: f64,
}

impl SlProblem {
    /// Problem with `δ = 10⁻⁶·L` and unit scale.
    pub fn new(c: f64, m: Profile1D, truncation: f64) -> Result<Self> {
        let p = Self {
            c,
            m,
            truncation,
            singular_start: 1e-6 * truncation,
            overall_scale: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.overall_scale = scale;
        self
    }

    pub fn with_singular_start(mut self, delta: f64) -> Self {
        self.singular_start = delta;
        self
    }

    /// Same problem on `[-L', L']`, keeping `δ/L` fixed.
    pub fn with_truncation(&self, truncation: f64) -> Self {
        let mut p = self.clone();
        p.singular_start = self.singular_start / self.truncation * truncation;
        p.truncation = truncation;
        p
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParams(format!("c must be >= 0, got {}", self.c)));
        }
        if !(self.truncation > 0.0 && self.truncation.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "truncation must be positive, got {}",
                self.truncation
            )));
        }
        if !(self.overall_scale > 0.0) {
            return Err(Error::InvalidParams(format!(
                "overall scale must be positive, got {}",
                self.overall_scale
            )));
        }
        if self.m.role() != VariableRole::Line {
            return Err(Error::InvalidParams("M must be a line profile".into()));
        }
        if self.c > 0.0 && !(self.singular_start > 0.0 && self.singular_start < self.truncation) {
            return Err(Error::SingularitySetup {
                delta: self.singular_start,
                truncation: self.truncation,
            });
        }
        Ok(())
    }

    /// Largest value of `M` on the truncated line (sampled).
    pub fn sup_m(&self) -> f64 {
        let l = self.truncation;
        self.m.max_on(-l, l, 4001)
    }

    /// `ε_num = 10⁻⁹ · s · max(1, sup M)`, in the units of the scaled operator.
    pub fn epsilon_num(&self) -> f64 {
        1e-9 * self.overall_scale * self.sup_m().max(1.0)
    }

    fn s_plus(&self) -> f64 {
        0.5 * (1.0 + (1.0 + 4.0 * self.c).sqrt())
    }

    fn segments(&self) -> Vec<Segment> {
        let l = self.truncation;
        if self.c == 0.0 {
            vec![Segment {
                a: -l,
                b: l,
                mirror: 1.0,
                theta0: 0.0,
            }]
        } else {
            let d = self.singular_start;
            let theta0 = (d / self.s_plus()).atan();
            [1.0, -1.0]
                .into_iter()
                .map(|mirror| Segment {
                    a: d,
                    b: l,
                    mirror,
                    theta0,
                })
                .collect()
        }
    }

    #[inline]
    fn q(&self, x: f64, mirror: f64) -> f64 {
        let m = self.m.eval(mirror * x);
        if self.c == 0.0 {
            -m
        } else {
            self.c / (x * x) - m
        }
    }
}

// ---------------------------------------------------------------------------
// Prüfer counter
// ---------------------------------------------------------------------------

fn integrate_segment(p: &SlProblem, seg: &Segment, mu: f64, factor: f64, max_step: f64) -> PruferTrace {
    let rhs = |x: f64, th: f64| {
        let (s, c) = th.sin_cos();
        c * c + (mu - p.q(x, seg.mirror)) * s * s
    };
    let local = |x: f64| 0.1 / (1.0 + (p.q(x, seg.mirror) - mu).abs()).sqrt();
    let singular = p.c > 0.0;
    let h_floor = 1e-14 * p.truncation;
    let mut x = seg.a;
    let mut th = seg.theta0;
    let mut stats = StepStats {
        steps: 0,
        min_step: f64::INFINITY,
        max_step: 0.0,
    };
    while x < seg.b {
        let mut h = factor * max_step.min(local(x));
        if singular {
            h = h.min(factor * 0.5 * x);
        }
        // look ahead so a well entered mid-step still limits the step
        h = h.min(factor * local((x + h).min(seg.b))).max(h_floor);
        if x + h >= seg.b {
            h = seg.b - x;
        }
        let k1 = rhs(x, th);
        let k2 = rhs(x + 0.5 * h, th + 0.5 * h * k1);
        let k3 = rhs(x + 0.5 * h, th + 0.5 * h * k2);
        let k4 = rhs(x + h, th + h * k3);
        let mut next = th + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // θ' = 1 > 0 on multiples of π, so the angle never falls back through one
        let floor = (th / PI).floor() * PI;
        if next < floor {
            next = floor;
        }
        th = next;
        x = if h == seg.b - x { seg.b } else { x + h };
        stats.steps += 1;
        stats.min_step = stats.min_step.min(h);
        stats.max_step = stats.max_step.max(h);
    }
    PruferTrace {
        theta_final: th,
        node_count: (th / PI).floor().max(0.0) as usize,
        step_stats: stats,
    }
}

/// Prüfer traces for `τu = λu` at a given step factor, one per segment
/// (one for `c = 0`, right and left half-lines for `c > 0`).
pub fn prufer_traces(problem: &SlProblem, lambda: f64, step_factor: f64, max_step: f64) -> Result<Vec<PruferTrace>> {
    problem.validate()?;
    let mu = lambda / problem.overall_scale;
    Ok(problem
        .segments()
        .iter()
        .map(|seg| integrate_segment(problem, seg, mu, step_factor, max_step))
        .collect())
}

/// Eigenvalues of the unscaled operator below `mu`, with step halving until
/// two successive counts agree.
fn prufer_count_refined(problem: &SlProblem, mu: f64, cfg: &SolverConfig) -> Result<(usize, Vec<usize>, f64)> {
    let segs = problem.segments();
    let count_at = |factor: f64| -> usize {
        segs.iter()
            .map(|s| integrate_segment(problem, s, mu, factor, cfg.prufer_max_step).node_count)
            .sum()
    };
    let mut factor = 1.0;
    let mut ladder = vec![count_at(factor)];
    for _ in 0..cfg.refinement_levels {
        factor *= 0.5;
        ladder.push(count_at(factor));
        let n = ladder.len();
        if ladder[n - 1] == ladder[n - 2] {
            return Ok((ladder[n - 1], ladder, factor));
        }
    }
    Err(Error::NonConvergence { counts: ladder })
}

/// Number of eigenvalues of the scaled operator strictly below
/// `lambda - ε_num`, by Prüfer node counting. Eigenvalues in
/// `[lambda - ε_num, lambda)` are located and reported as borderline.
pub fn count_negative_prufer(problem: &SlProblem, lambda: f64, cfg: &SolverConfig) -> Result<CountResult> {
    problem.validate()?;
    let s = problem.overall_scale;
    let eps = problem.epsilon_num() / s;
    let mu = lambda / s;
    let (count, ladder, factor) = prufer_count_refined(problem, mu - eps, cfg)?;
    let (upper, _, _) = prufer_count_refined(problem, mu, cfg)?;
    let mut borderline = Vec::new();
    for index in count..upper.max(count) {
        let e = bisect_count(
            |m| prufer_count_refined(problem, m, cfg).map(|r| r.0),
            index,
            mu - eps,
            mu,
            cfg.bisection_tolerance * eps.max(1e-300),
        )?;
        borderline.push((e - mu) * s);
    }
    Ok(CountResult {
        count,
        borderline,
        method: CountMethod::Prufer,
        resolution: Resolution {
            step_factor: Some(factor),
            grid_points: None,
            ladder,
        },
        per_mode: None,
    })
}

fn bisect_count<F>(count_below: F, index: usize, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<usize>,
{
    let n_lo = count_below(lo)?;
    let n_hi = count_below(hi)?;
    if !(n_lo <= index && index < n_hi) {
        return Err(Error::BracketInvalid {
            index,
            lo,
            hi,
            count_lo: n_lo,
            count_hi: n_hi,
        });
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid)? > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Locates eigenvalue number `index` (0-based, ascending) of the scaled
/// operator inside `bracket` by bisection on the Prüfer count.
pub fn eigenvalue_bisect(problem: &SlProblem, index: usize, bracket: (f64, f64), cfg: &SolverConfig) -> Result<f64> {
    problem.validate()?;
    let s = problem.overall_scale;
    let (lo, hi) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
    let tol = cfg.bisection_tolerance * lo.abs().max(hi.abs()).max(1.0) / s;
    bisect_count(
        |m| prufer_count_refined(problem, m, cfg).map(|r| r.0),
        index,
        lo / s,
        hi / s,
        tol,
    )
    .map(|e| e * s)
    .map_err(|e| match e {
        Error::BracketInvalid {
            index,
            count_lo,
            count_hi,
            ..
        } => Error::BracketInvalid {
            index,
            lo,
            hi,
            count_lo,
            count_hi,
        },
        other => other,
    })
}

// ---------------------------------------------------------------------------
// Tridiagonal inertia counter
// ---------------------------------------------------------------------------

/// Number of eigenvalues below `sigma` of the symmetric tridiagonal matrix
/// with diagonal `diag` and off-diagonal `off`, from the signs of the `LDLᵀ`
/// pivots of `T - σI`. Zero pivots are replaced by `-pivmin`.
pub fn sturm_count(diag: &[f64], off: &[f64], sigma: f64) -> usize {
    assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length");
    let max_off2 = off.iter().map(|e| e * e).fold(1.0_f64, f64::max);
    let pivmin = f64::MIN_POSITIVE * max_off2;
    let mut count = 0;
    let mut d = 0.0;
    for (i, &a) in diag.iter().enumerate() {
        d = if i == 0 { a - sigma } else { a - sigma - off[i - 1] * off[i - 1] / d };
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Finite-difference pieces `(diag, off)` of the scaled operator, one per
/// segment, with `n` interior nodes in total.
pub fn fd_matrices(problem: &SlProblem, grid_points: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let s = problem.overall_scale;
    problem
        .segments()
        .iter()
        .map(|seg| {
            let n = if problem.c == 0.0 { grid_points } else { grid_points / 2 };
            let h = (seg.b - seg.a) / (n + 1) as f64;
            let diag = (1..=n)
                .map(|i| {
                    let x = seg.a + i as f64 * h;
                    s * (2.0 / (h * h) + problem.q(x, seg.mirror))
                })
                .collect();
            let off = vec![-s / (h * h); n.saturating_sub(1)];
            (diag, off)
        })
        .collect()
}

fn inertia_counts(problem: &SlProblem, grid_points: usize, sigma: f64) -> usize {
    fd_matrices(problem, grid_points)
        .iter()
        .map(|(d, e)| sturm_count(d, e, sigma))
        .sum()
}

/// Count of eigenvalues of the discretized scaled operator below
/// `lambda - ε_num` on a grid of `grid_points` interior nodes
/// (split evenly between half-lines when `c > 0`).
pub fn count_below_inertia_1d(problem: &SlProblem, grid_points: usize, lambda: f64) -> Result<CountResult> {
    problem.validate()?;
    if grid_points < 16 {
        return Err(Error::InvalidParams(format!(
            "grid_points must be at least 16, got {grid_points}"
        )));
    }
    let eps = problem.epsilon_num();
    let mats = fd_matrices(problem, grid_points);
    let below = |sigma: f64| -> usize { mats.iter().map(|(d, e)| sturm_count(d, e, sigma)).sum() };
    let count = below(lambda - eps);
    let upper = below(lambda);
    let mut borderline = Vec::new();
    for index in count..upper.max(count) {
        let e = bisect_count(|x| Ok(below(x)), index, lambda - eps, lambda, 1e-6 * eps)?;
        borderline.push(e - lambda);
    }
    Ok(CountResult {
        count,
        borderline,
        method: CountMethod::Inertia1d,
        resolution: Resolution {
            step_factor: None,
            grid_points: Some(grid_points),
            ladder: vec![count],
        },
        per_mode: None,
    })
}

/// [`count_below_inertia_1d`] at `λ = 0`.
pub fn count_negative_inertia_1d(problem: &SlProblem, grid_points: usize) -> Result<CountResult> {
    count_below_inertia_1d(problem, grid_points, 0.0)
}

/// Doubles the grid from `cfg.inertia_grid_points` (or finer, so that the
/// spacing is at most 0.02) until two successive counts agree.
pub fn count_below_inertia_refined(problem: &SlProblem, lambda: f64, cfg: &SolverConfig) -> Result<CountResult> {
    problem.validate()?;
    // both layouts give spacing ≈ 2L/n
    let mut n = cfg.inertia_grid_points.max((2.0 * problem.truncation / 0.02) as usize);
    let eps = problem.epsilon_num();
    let mut ladder = vec![inertia_counts(problem, n, lambda - eps)];
    while n * 2 <= cfg.inertia_max_points {
        n *= 2;
        ladder.push(inertia_counts(problem, n, lambda - eps));
        let k = ladder.len();
        if ladder[k - 1] == ladder[k - 2] {
            let mut result = count_below_inertia_1d(problem, n, lambda)?;
            result.resolution.ladder = ladder;
            return Ok(result);
        }
    }
    Err(Error::NonConvergence { counts: ladder })
}

// ---------------------------------------------------------------------------
// Seeded instances
// ---------------------------------------------------------------------------

/// Random smooth instance: `c ∈ [0, 10]` (zero a quarter of the time) and
/// `M` a superposition of one to four Gaussian bumps, all from `seed`.
pub fn random_sl_problem(seed: u64, truncation: f64) -> SlProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = if rng.random_bool(0.25) {
        0.0
    } else {
        rng.random_range(0.0..10.0)
    };
    let bumps: Vec<(f64, f64, f64)> = (0..rng.random_range(1..=4))
        .map(|_| {
            (
                rng.random_range(0.5..8.0),
                rng.random_range(-6.0..6.0),
                rng.random_range(0.4..2.0),
            )
        })
        .collect();
    let m = Profile1D::analytic(VariableRole::Line, move |x| {
        bumps
            .iter()
            .map(|&(a, x0, w)| {
                let t = (x - x0) / w;
                a * (-t * t).exp()
            })
            .sum()
    });
    SlProblem::new(c, m, truncation).expect("generated instance is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};
    use proptest::prelude::*;

    fn sech2(depth: f64) -> Profile1D {
        Profile1D::analytic(VariableRole::Line, move |x| depth / x.cosh().powi(2))
    }

    fn dense_count(problem: &SlProblem, n: usize, sigma: f64) -> usize {
        fd_matrices(problem, n)
            .iter()
            .map(|(d, e)| {
                let m = d.len();
                let mut a = DMatrix::<f64>::zeros(m, m);
                for i in 0..m {
                    a[(i, i)] = d[i];
                    if i + 1 < m {
                        a[(i, i + 1)] = e[i];
                        a[(i + 1, i)] = e[i];
                    }
                }
                SymmetricEigen::new(a).eigenvalues.iter().filter(|&&v| v < sigma).count()
            })
            .sum()
    }

    #[test]
    fn sturm_count_on_diagonal() {
        assert_eq!(sturm_count(&[-1.0, 2.0], &[0.0], 0.0), 1);
        assert_eq!(sturm_count(&[-1.0, 2.0], &[0.0], 3.0), 2);
        assert_eq!(sturm_count(&[], &[], 0.0), 0);
    }

    #[test]
    fn free_operator_has_no_negative_states() {
        let cfg = SolverConfig::default();
        let p = SlProblem::new(0.0, Profile1D::zero(VariableRole::Line), 10.0).unwrap();
        assert_eq!(count_negative_prufer(&p, 0.0, &cfg).unwrap().count, 0);
        assert_eq!(count_negative_inertia_1d(&p, 64).unwrap().count, 0);
        let p = SlProblem::new(2.0, Profile1D::zero(VariableRole::Line), 10.0).unwrap();
        assert_eq!(count_negative_prufer(&p, 0.0, &cfg).unwrap().count, 0);
    }

    #[test]
    fn poschl_teller_three_states() {
        let cfg = SolverConfig::default();
        let p = SlProblem::new(0.0, sech2(12.0), 30.0).unwrap();
        let r = count_negative_prufer(&p, 0.0, &cfg).unwrap();
        assert_eq!(r.count, 3);
        assert!(r.borderline.is_empty());
        assert_eq!(count_below_inertia_refined(&p, 0.0, &cfg).unwrap().count, 3);
        assert_eq!(dense_count(&p, 1200, -p.epsilon_num()), 3);
        for (i, exact) in [-9.0, -4.0, -1.0].into_iter().enumerate() {
            let e = eigenvalue_bisect(&p, i, (-12.0, -0.5), &cfg).unwrap();
            assert!((e - exact).abs() < 1e-4, "level {i}: {e}");
        }
    }

    #[test]
    fn finite_square_well() {
        let cfg = SolverConfig::default();
        let m = Profile1D::analytic(VariableRole::Line, |_| 1.0).with_support(-2.0, 2.0);
        let p = SlProblem::new(0.0, m, 20.0).unwrap();
        assert_eq!(count_negative_prufer(&p, 0.0, &cfg).unwrap().count, 2);
        assert_eq!(count_below_inertia_refined(&p, 0.0, &cfg).unwrap().count, 2);
        assert_eq!(dense_count(&p, 1000, -p.epsilon_num()), 2);
    }

    #[test]
    fn bisect_rejects_empty_bracket() {
        let cfg = SolverConfig::default();
        let p = SlProblem::new(0.0, Profile1D::zero(VariableRole::Line), 10.0).unwrap();
        assert!(matches!(
            eigenvalue_bisect(&p, 0, (-5.0, -0.1), &cfg),
            Err(Error::BracketInvalid { .. })
        ));
    }

    #[test]
    fn singular_start_must_lie_inside() {
        let p = SlProblem::new(1.0, Profile1D::zero(VariableRole::Line), 5.0)
            .unwrap()
            .with_singular_start(6.0);
        assert!(matches!(p.validate(), Err(Error::SingularitySetup { .. })));
    }

    #[test]
    fn inertia_matches_dense_eigensolve_on_random_instances() {
        for seed in 0..50 {
            let p = random_sl_problem(seed, 12.0);
            let n = 400;
            let eps = p.epsilon_num();
            let fast = count_below_inertia_1d(&p, n, 0.0).unwrap().count;
            assert_eq!(fast, dense_count(&p, n, -eps), "seed {seed}");
        }
    }

    #[test]
    fn singular_half_line_levels() {
        // -u'' + c/x² u - M u with c = 2 and a deep square well on (0, 3):
        // zeros of the Bessel-type solution at threshold give the count.
        let cfg = SolverConfig::default();
        let m = Profile1D::analytic(VariableRole::Line, |_| 25.0).with_support(0.0, 3.0);
        let p = SlProblem::new(2.0, m, 15.0).unwrap();
        let prufer = count_negative_prufer(&p, 0.0, &cfg).unwrap().count;
        let fd = count_below_inertia_refined(&p, 0.0, &cfg).unwrap().count;
        assert_eq!(prufer, fd);
        assert!(prufer >= 1);
    }

    #[test]
    fn borderline_eigenvalue_is_excluded() {
        // shift λ onto the ground state of the Pöschl–Teller well
        let cfg = SolverConfig::default();
        let p = SlProblem::new(0.0, sech2(12.0), 30.0).unwrap();
        let e0 = eigenvalue_bisect(&p, 0, (-12.0, -5.0), &cfg).unwrap();
        let eps = p.epsilon_num();
        let r = count_negative_prufer(&p, e0 + 0.5 * eps, &cfg).unwrap();
        assert_eq!(r.count, 0);
        assert_eq!(r.borderline.len(), 1);
        assert!(r.borderline[0].abs() < eps);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn count_is_scale_invariant(seed in 0u64..1000) {
            let cfg = SolverConfig::default();
            let p = random_sl_problem(seed, 10.0);
            let a = count_negative_prufer(&p, 0.0, &cfg).unwrap().count;
            let b = count_negative_prufer(&p.clone().with_scale(0.25), 0.0, &cfg).unwrap().count;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn adding_a_bump_never_lowers_the_count(seed in 0u64..1000, a in 0.1f64..5.0, x0 in -5.0f64..5.0) {
            let cfg = SolverConfig::default();
            let p = random_sl_problem(seed, 10.0);
            let base = p.m.clone();
            let bigger = Profile1D::analytic(VariableRole::Line, move |x| base.eval(x) + a * (-(x - x0) * (x - x0)).exp());
            let q = SlProblem { m: bigger, ..p.clone() };
            let n0 = count_below_inertia_refined(&p, 0.0, &cfg).unwrap().count;
            let n1 = count_below_inertia_refined(&q, 0.0, &cfg).unwrap().count;
            prop_assert!(n1 >= n0);
        }

        #[test]
        fn larger_c_never_raises_the_count(seed in 0u64..1000, dc in 0.0f64..5.0) {
            let cfg = SolverConfig::default();
            let mut p = random_sl_problem(seed, 10.0);
            if p.c == 0.0 { p.c = 0.5; }
            let q = SlProblem { c: p.c + dc, ..p.clone() };
            let n0 = count_negative_prufer(&p, 0.0, &cfg).unwrap().count;
            let n1 = count_negative_prufer(&q, 0.0, &cfg).unwrap().count;
            prop_assert!(n1 <= n0);
        }
    }
}
