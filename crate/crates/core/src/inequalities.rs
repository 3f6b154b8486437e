//! Numerical checks of the Hardy-type inequalities behind the estimate.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::INTEGER_FLUX_TOLERANCE;
use crate::quadrature::{self, QuadratureConfig};
use crate::testfn::{TestFunction, TestFunctionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub admissible_constant: f64,
    pub satisfied: bool,
}

impl RatioReport {
    fn new(lhs: f64, rhs: f64, constant: f64, tol: f64) -> Self {
        let ratio = if rhs == 0.0 { 0.0 } else { lhs / rhs };
        Self {
            lhs,
            rhs,
            ratio,
            admissible_constant: constant,
            satisfied: lhs <= constant * rhs + tol,
        }
    }
}

fn integrate_pieces<F: Fn(f64) -> f64>(f: F, pts: &[f64], quad: &QuadratureConfig) -> Result<f64> {
    Ok(quadrature::integrate_with_breaks(f, pts, quad)?.value)
}

/// `∫₀^∞ (F/x)^p dx` against `∫₀^∞ f^p dx`, `F(x) = ∫₀^x f`, with the
/// constant `(p/(p-1))^p`. `f` must be nonnegative with bounded support.
pub fn hardy_1d_ratio(f: &TestFunction, p: f64, quad: &QuadratureConfig) -> Result<RatioReport> {
    if !(p > 1.0) {
        return Err(Error::InvalidParams(format!("Hardy exponent must exceed 1, got {p}")));
    }
    quad.validate()?;
    let constant = (p / (p - 1.0)).powf(p);
    let (a, b) = f.support();
    if !(b.is_finite()) || a < 0.0 {
        return Err(Error::InvalidParams("Hardy test function needs support inside [0, ∞)".into()));
    }
    if b <= a {
        return Ok(RatioReport::new(0.0, 0.0, constant, quad.absolute_tolerance));
    }
    let mut pts = f.breakpoints();
    if pts[0] > 0.0 {
        pts.insert(0, 0.0);
    }
    let rhs = integrate_pieces(|x| f.value(x).max(0.0).powf(p), &pts, quad)?;
    // F at every breakpoint, then F(x) = F(node) + ∫_node^x f
    let mut cumulative = vec![0.0; pts.len()];
    for i in 1..pts.len() {
        cumulative[i] = cumulative[i - 1] + quadrature::integrate(|x| f.value(x), pts[i - 1], pts[i], quad)?.value;
    }
    let big_f = |x: f64| -> f64 {
        let i = pts.partition_point(|&q| q <= x).saturating_sub(1);
        let inner = quadrature::integrate(|t| f.value(t), pts[i], x, quad).map_or(f64::NAN, |e| e.value);
        cumulative[i] + inner
    };
    let body = integrate_pieces(|x| (big_f(x).max(0.0) / x).powf(p), &pts, quad)?;
    let tail = cumulative[pts.len() - 1].max(0.0).powf(p) * b.powf(1.0 - p) / (p - 1.0);
    Ok(RatioReport::new(body + tail, rhs, constant, quad.absolute_tolerance))
}

/// Sharp magnetic Hardy constant `(min_k |k - α|)^{-2}`.
pub fn magnetic_hardy_constant(alpha: f64) -> Result<f64> {
    let dist = (alpha - alpha.round()).abs();
    if dist <= INTEGER_FLUX_TOLERANCE {
        return Err(Error::IntegerFlux { psi: alpha });
    }
    Ok(1.0 / (dist * dist))
}

/// Fiber `m` of the magnetic Hardy inequality for a radial `u`:
/// `∫ u² r⁻² r dr ≤ C ∫ (u'² + (m+α)² u² r⁻²) r dr`.
pub fn magnetic_hardy_mode_ratio(u: &TestFunction, m: i64, alpha: f64, quad: &QuadratureConfig) -> Result<RatioReport> {
    let constant = magnetic_hardy_constant(alpha)?;
    quad.validate()?;
    let (a, b) = u.support();
    if a < 0.0 {
        return Err(Error::InvalidParams("radial test function needs support in [0, ∞)".into()));
    }
    let shift = m as f64 + alpha;
    let lhs_f = |r: f64| {
        let v = u.value(r);
        v * v / r
    };
    let rhs_f = |r: f64| {
        let (v, dv) = (u.value(r), u.derivative(r));
        dv * dv * r + shift * shift * v * v / r
    };
    if b <= a {
        return Ok(RatioReport::new(0.0, 0.0, constant, quad.absolute_tolerance));
    }
    let (lhs, rhs) = if b.is_finite() {
        let pts = u.breakpoints();
        (integrate_pieces(lhs_f, &pts, quad)?, integrate_pieces(rhs_f, &pts, quad)?)
    } else {
        // split at 1 so the map to [0, 1) sees a smooth integrand
        let head = |g: &dyn Fn(f64) -> f64| quadrature::integrate(g, a, a.max(1.0), quad).map(|e| e.value);
        let tail = |g: &dyn Fn(f64) -> f64| quadrature::integrate_semi_infinite(g, a.max(1.0), quad).map(|e| e.value);
        (head(&lhs_f)? + tail(&lhs_f)?, head(&rhs_f)? + tail(&rhs_f)?)
    };
    let tol = quad.absolute_tolerance + quad.relative_tolerance * lhs.abs();
    Ok(RatioReport::new(lhs, rhs, constant, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FailurePoint {
    pub cutoff: f64,
    /// `∫ u² r⁻² r dr / ∫ u'² r dr` over `(ε, 1/e)`.
    pub ratio: f64,
    /// `∫ u² r⁻² dr / ∫ u'² dr`, without the radial weight.
    pub ratio_unweighted: f64,
}

/// Ratios for `u(r) = ln ln(1/r)` on `(ε, 1/e)`, one per cutoff `ε`.
/// `u` vanishes at `1/e` already, so no cap is needed there.
pub fn hardy_2d_failure_curve(cutoffs: &[f64], quad: &QuadratureConfig) -> Result<Vec<FailurePoint>> {
    quad.validate()?;
    let right = (-1.0_f64).exp();
    cutoffs
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps < right) {
                return Err(Error::InvalidParams(format!("cutoff must lie in (0, 1/e), got {eps}")));
            }
            let mut pts = vec![eps];
            let mut x = eps * 10.0;
            while x < right {
                pts.push(x);
                x *= 10.0;
            }
            pts.push(right);
            let u = |r: f64| (1.0 / r).ln().ln();
            let du2 = |r: f64| {
                let l = (1.0 / r).ln();
                1.0 / (r * r * l * l)
            };
            let num_w = integrate_pieces(|r| u(r).powi(2) / r, &pts, quad)?;
            let den_w = integrate_pieces(|r| du2(r) * r, &pts, quad)?;
            let num_u = integrate_pieces(|r| u(r).powi(2) / (r * r), &pts, quad)?;
            let den_u = integrate_pieces(du2, &pts, quad)?;
            Ok(FailurePoint {
                cutoff: eps,
                ratio: num_w / den_w,
                ratio_unweighted: num_u / den_u,
            })
        })
        .collect()
}

/// `hardy_1d_ratio` over `count` seeded bump superpositions on `[0, 8]`.
pub fn hardy_1d_sweep(first_seed: u64, count: usize, p: f64, quad: &QuadratureConfig) -> Result<Vec<RatioReport>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let f = TestFunctionSpec::bumps(first_seed.wrapping_add(i), (0.0, 8.0), true).generate()?;
            hardy_1d_ratio(&f, p, quad)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MagneticSweepEntry {
    pub seed: u64,
    pub m: i64,
    pub alpha: f64,
    pub report: RatioReport,
}

/// Magnetic Hardy fibers over seeded radial functions (alternating bump
/// superpositions on `[0, 8]` and polynomial decays) and every `(m, α)`.
pub fn magnetic_hardy_sweep(
    first_seed: u64,
    count: usize,
    ms: &[i64],
    alphas: &[f64],
    quad: &QuadratureConfig,
) -> Result<Vec<MagneticSweepEntry>> {
    let jobs: Vec<(u64, i64, f64)> = (0..count as u64)
        .flat_map(|i| {
            ms.iter()
                .flat_map(move |&m| alphas.iter().map(move |&a| (first_seed.wrapping_add(i), m, a)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(seed, m, alpha)| {
            let spec = if seed % 2 == 0 {
                TestFunctionSpec::bumps(seed, (0.0, 8.0), false)
            } else {
                TestFunctionSpec::polynomial_decay(seed)
            };
            let u = spec.generate()?;
            Ok(MagneticSweepEntry {
                seed,
                m,
                alpha,
                report: magnetic_hardy_mode_ratio(&u, m, alpha, quad)?,
            })
        })
        .collect()
}
