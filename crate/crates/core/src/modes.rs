//! Reduced flux, fiber operators `H_k` and their Sturm–Liouville reductions.
//!
//! With constant gauge `A = φ` the strip operator splits into fibers
//! `H_k = -∂² + (2φ/i)∂ + (k+φ)² - W`. Conjugating by `e^{iφx1}` gives the
//! real form `-∂² + (k+φ)² - φ² - W`, which is what the continuum counters
//! integrate.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{Profile1D, VariableRole};
use crate::solver::SolverConfig;
use crate::sturm::{self, CountMethod, CountResult, Resolution, SlProblem};

/// Integers closer than this to the flux count as integer flux.
pub const INTEGER_FLUX_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxSpec {
    pub psi: f64,
    pub phi: f64,
    pub is_integer_flux: bool,
}

/// `φ = min_k |Ψ - k|`.
pub fn reduced_flux(psi: f64) -> FluxSpec {
    let phi = (psi - psi.round()).abs().min(0.5);
    if phi <= INTEGER_FLUX_TOLERANCE {
        FluxSpec {
            psi,
            phi: 0.0,
            is_integer_flux: true,
        }
    } else {
        FluxSpec {
            psi,
            phi,
            is_integer_flux: false,
        }
    }
}

impl FluxSpec {
    pub fn require_non_integer(&self) -> Result<()> {
        if self.is_integer_flux {
            Err(Error::IntegerFlux { psi: self.psi })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModeOperator {
    pub k: i64,
    pub phi: f64,
    pub profile: Profile1D,
    pub transverse_energy: f64,
}

impl ModeOperator {
    /// `(k+φ)² - φ²`, the constant of the gauge-equivalent real form.
    pub fn gauge_offset(&self) -> f64 {
        let k = self.k as f64;
        k * (k + 2.0 * self.phi)
    }

    /// Real-form fiber `-d² + (k+φ)² - φ² - W` as an `SlProblem` with `c = 0`
    /// together with the level `λ = φ² - (k+φ)²` below which
    /// `-d² - W` must be counted.
    pub fn fiber_problem(&self, truncation: f64) -> Result<(SlProblem, f64)> {
        let p = SlProblem::new(0.0, self.profile.clone(), truncation)?;
        Ok((p, -self.gauge_offset()))
    }
}

pub fn build_mode_operator(k: i64, flux: &FluxSpec, w: &Profile1D) -> ModeOperator {
    let shift = k as f64 + flux.phi;
    ModeOperator {
        k,
        phi: flux.phi,
        profile: w.clone(),
        transverse_energy: shift * shift,
    }
}

/// `τ(k) = ¼(-d² + 4(k+φ)²/x² - 4W)`.
pub fn reduce_to_sl(mode: &ModeOperator, truncation: f64) -> Result<SlProblem> {
    Ok(SlProblem::new(4.0 * mode.transverse_energy, mode.profile.scaled(4.0), truncation)?.with_scale(0.25))
}

/// Integers grouped by `|k + a|`, nearest first; ties come out together in
/// ascending `k`.
pub fn mode_groups(a: f64) -> impl Iterator<Item = Vec<i64>> {
    let t = -a;
    let mut lo = t.floor() as i64;
    let mut hi = lo + 1;
    std::iter::from_fn(move || {
        let dl = (lo as f64 + a).abs();
        let dh = (hi as f64 + a).abs();
        let group = if dl == dh {
            let g = vec![lo, hi];
            lo -= 1;
            hi += 1;
            g
        } else if dl < dh {
            lo -= 1;
            vec![lo + 1]
        } else {
            hi += 1;
            vec![hi - 1]
        };
        Some(group)
    })
}

/// The `k` whose strip term `‖V‖/√(16(k+φ)²+1)` is at least one,
/// i.e. `16(k+φ)² + 1 ≤ ‖V‖²`, nearest first.
pub fn mode_window(flux: &FluxSpec, norm_x: f64) -> Result<Vec<i64>> {
    flux.require_non_integer()?;
    let mut out = Vec::new();
    for group in mode_groups(flux.phi) {
        let kept: Vec<i64> = group
            .into_iter()
            .filter(|&k| strip_term_retained(k, flux.phi, norm_x))
            .collect();
        if kept.is_empty() {
            break;
        }
        out.extend(kept);
    }
    Ok(out)
}

pub(crate) fn strip_term_retained(k: i64, phi: f64, norm_x: f64) -> bool {
    let s = k as f64 + phi;
    16.0 * s * s + 1.0 <= norm_x * norm_x
}

/// Which 1D counter handles each fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberCounter {
    Prufer,
    Inertia1d,
}

/// Counts one fiber in its real gauge form on `[-L, L]`.
pub fn count_fiber(mode: &ModeOperator, truncation: f64, counter: FiberCounter, cfg: &SolverConfig) -> Result<CountResult> {
    let (p, lambda) = mode.fiber_problem(truncation)?;
    let r = match counter {
        FiberCounter::Prufer => sturm::count_negative_prufer(&p, lambda, cfg),
        FiberCounter::Inertia1d => sturm::count_below_inertia_refined(&p, lambda, cfg),
    };
    r.map_err(|e| Error::Mode {
        k: mode.k,
        source: Box::new(e),
    })
}

/// `Σ_k Neg(H_k)` over `window`, fibers solved in parallel and merged by `k`.
pub fn total_mode_count(
    flux: &FluxSpec,
    w: &Profile1D,
    window: &[i64],
    truncation: f64,
    counter: FiberCounter,
    cfg: &SolverConfig,
) -> Result<CountResult> {
    if w.role() != VariableRole::Line {
        return Err(Error::InvalidParams("fiber profile must be a line profile".into()));
    }
    let results: Vec<(i64, Result<CountResult>)> = window
        .par_iter()
        .map(|&k| (k, count_fiber(&build_mode_operator(k, flux, w), truncation, counter, cfg)))
        .collect();
    let mut per_mode = BTreeMap::new();
    let mut borderline = Vec::new();
    for (k, r) in results {
        let r = r?;
        borderline.extend(r.borderline.iter().copied());
        per_mode.insert(k, r.count);
    }
    Ok(CountResult {
        count: per_mode.values().sum(),
        borderline,
        method: CountMethod::ModeSum,
        resolution: Resolution::default(),
        per_mode: Some(per_mode),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduced_flux_examples() {
        assert!((reduced_flux(2.3).phi - 0.3).abs() < 1e-12);
        let f = reduced_flux(-1.5);
        assert_eq!(f.phi, 0.5);
        assert!(!f.is_integer_flux);
        let f = reduced_flux(4.0);
        assert_eq!(f.phi, 0.0);
        assert!(f.is_integer_flux);
        assert!(f.require_non_integer().is_err());
    }

    #[test]
    fn transverse_energies() {
        let w = Profile1D::zero(VariableRole::Line);
        let f = reduced_flux(0.3);
        assert!((build_mode_operator(0, &f, &w).transverse_energy - 0.09).abs() < 1e-15);
        assert!((build_mode_operator(-1, &f, &w).transverse_energy - 0.49).abs() < 1e-15);
        assert_eq!(build_mode_operator(2, &reduced_flux(0.5), &w).transverse_energy, 6.25);
    }

    #[test]
    fn sl_reduction_coefficients() {
        let w = Profile1D::analytic(VariableRole::Line, |x| 12.0 / x.cosh().powi(2));
        let p = reduce_to_sl(&build_mode_operator(0, &reduced_flux(0.5), &w), 10.0).unwrap();
        assert_eq!(p.c, 1.0);
        assert_eq!(p.overall_scale, 0.25);
        assert!((p.m.eval(0.7) - 48.0 / 0.7_f64.cosh().powi(2)).abs() < 1e-12);
        let p = reduce_to_sl(&build_mode_operator(1, &reduced_flux(0.25), &w), 10.0).unwrap();
        assert_eq!(p.c, 6.25);
    }

    #[test]
    fn window_examples() {
        assert_eq!(mode_window(&reduced_flux(0.5), 10.0).unwrap(), vec![-1, 0, -2, 1]);
        assert!(mode_window(&reduced_flux(0.3), 0.0).unwrap().is_empty());
        assert!(mode_window(&reduced_flux(0.5), 1.0).unwrap().is_empty());
        assert!(matches!(
            mode_window(&reduced_flux(3.0), 10.0),
            Err(Error::IntegerFlux { .. })
        ));
    }

    #[test]
    fn groups_order_by_distance() {
        let g: Vec<Vec<i64>> = mode_groups(0.3).take(4).collect();
        assert_eq!(g, vec![vec![0], vec![-1], vec![1], vec![-2]]);
        let g: Vec<Vec<i64>> = mode_groups(0.5).take(2).collect();
        assert_eq!(g, vec![vec![-1, 0], vec![-2, 1]]);
    }

    #[test]
    fn mode_counts() {
        let cfg = SolverConfig::default();
        let f = reduced_flux(0.5);
        let zero = Profile1D::zero(VariableRole::Line);
        let r = total_mode_count(&f, &zero, &[-2, -1, 0, 1], 20.0, FiberCounter::Prufer, &cfg).unwrap();
        assert_eq!(r.count, 0);
        let r = total_mode_count(&f, &zero, &[], 20.0, FiberCounter::Prufer, &cfg).unwrap();
        assert_eq!(r.count, 0);
        // k = 0 at φ = ½ is -d² - W in real form: a unit well of half-width 2
        let well = Profile1D::analytic(VariableRole::Line, |_| 1.0).with_support(-2.0, 2.0);
        for counter in [FiberCounter::Prufer, FiberCounter::Inertia1d] {
            let r = total_mode_count(&f, &well, &[0], 20.0, counter, &cfg).unwrap();
            assert_eq!(r.count, 2);
            assert_eq!(r.per_mode.unwrap()[&0], 2);
        }
    }

    proptest! {
        #[test]
        fn flux_is_periodic_and_even(psi in -50.0f64..50.0, n in -20i64..20) {
            let base = reduced_flux(psi).phi;
            prop_assert!((reduced_flux(psi + n as f64).phi - base).abs() < 1e-11);
            prop_assert_eq!(reduced_flux(-psi).phi, base);
            prop_assert!((0.0..=0.5).contains(&base));
        }

        #[test]
        fn window_matches_squared_rule(phi in 0.01f64..0.5, norm in 0.0f64..60.0) {
            let f = reduced_flux(phi);
            let w = mode_window(&f, norm).unwrap();
            for k in -40i64..40 {
                prop_assert_eq!(w.contains(&k), strip_term_retained(k, f.phi, norm));
            }
        }

        #[test]
        fn gauge_offset_is_nonnegative(k in -30i64..30, phi in 0.0f64..=0.5) {
            let m = build_mode_operator(k, &reduced_flux(phi), &Profile1D::zero(VariableRole::Line));
            prop_assert!(m.gauge_offset() >= 0.0);
        }
    }
}
