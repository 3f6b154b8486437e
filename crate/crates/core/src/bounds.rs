//! Closed-form eigenvalue bounds.
//!
//! Primed sums keep only summands `≥ 1`. Summands decrease in `|k + a|`,
//! so enumeration walks the integers nearest-first and stops at the first
//! group of (tied) summands that falls below one.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{self, FluxSpec, INTEGER_FLUX_TOLERANCE};
use crate::potential::{Profile1D, ProfileKind, VariableRole};
use crate::quadrature::{self, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFormula {
    /// `Σ′_k ‖V‖_X / √(16(k+φ)² + 1)`
    StripClr,
    /// `Σ′_m I / (2|m + Φ̃|)`
    DiskBel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub value: f64,
    /// Retained terms, by mode index.
    pub per_mode_terms: BTreeMap<i64, f64>,
    /// Retained modes in enumeration order.
    pub retained: Vec<i64>,
    pub omitted_below_one: usize,
    /// The enumerated-but-dropped terms.
    pub omitted_terms: BTreeMap<i64, f64>,
    pub formula: BoundFormula,
}

/// `∫M / √(4c + 1)`, for `c ≥ 0` and `∫M ≥ 0`.
pub fn bargmann_rhs(c: f64, integral_m: f64) -> f64 {
    integral_m / (4.0 * c + 1.0).sqrt()
}

/// `‖V‖_X / √(16(k+φ)² + 1)`.
pub fn strip_term(k: i64, phi: f64, norm_x: f64) -> f64 {
    let s = k as f64 + phi;
    norm_x / (16.0 * s * s + 1.0).sqrt()
}

pub fn per_mode_bargmann_terms(flux: &FluxSpec, norm_x: f64, window: &[i64]) -> BTreeMap<i64, f64> {
    window.iter().map(|&k| (k, strip_term(k, flux.phi, norm_x))).collect()
}

fn primed_sum<T, R>(a: f64, term: T, retained: R, formula: BoundFormula) -> BoundResult
where
    T: Fn(i64) -> f64,
    R: Fn(i64) -> bool,
{
    let mut out = BoundResult {
        value: 0.0,
        per_mode_terms: BTreeMap::new(),
        retained: Vec::new(),
        omitted_below_one: 0,
        omitted_terms: BTreeMap::new(),
        formula,
    };
    for group in modes::mode_groups(a) {
        let mut any = false;
        for &k in &group {
            let t = term(k);
            if retained(k) {
                any = true;
                out.per_mode_terms.insert(k, t);
                out.retained.push(k);
                out.value += t;
            } else {
                out.omitted_below_one += 1;
                out.omitted_terms.insert(k, t);
            }
        }
        if !any {
            break;
        }
    }
    out
}

/// The strip estimate `Σ′_k ‖V‖_X / √(16(k+φ)² + 1)`.
pub fn strip_clr_bound(flux: &FluxSpec, norm_x: f64) -> Result<BoundResult> {
    flux.require_non_integer()?;
    if !(norm_x >= 0.0 && norm_x.is_finite()) {
        return Err(Error::InvalidParams(format!("norm must be finite and >= 0, got {norm_x}")));
    }
    let phi = flux.phi;
    Ok(primed_sum(
        phi,
        |k| strip_term(k, phi, norm_x),
        |k| modes::strip_term_retained(k, phi, norm_x),
        BoundFormula::StripClr,
    ))
}

/// `Σ′_m I / (2|m + Φ̃|)` for a given `I = ∫ Q(r) r dr`.
pub fn disk_bound_from_integral(total_flux: f64, radial_integral: f64) -> Result<BoundResult> {
    if (total_flux - total_flux.round()).abs() <= INTEGER_FLUX_TOLERANCE {
        return Err(Error::IntegerFlux { psi: total_flux });
    }
    if !(radial_integral >= 0.0 && radial_integral.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "radial integral must be finite and >= 0, got {radial_integral}"
        )));
    }
    let i = radial_integral;
    Ok(primed_sum(
        total_flux,
        |m| i / (2.0 * (m as f64 + total_flux).abs()),
        |m| 2.0 * (m as f64 + total_flux).abs() <= i,
        BoundFormula::DiskBel,
    ))
}

/// Disk bound with `I = ∫₀^∞ Q(r) r dr` by quadrature.
pub fn disk_bound_bel(total_flux: f64, radial_profile: &Profile1D, quad: &QuadratureConfig) -> Result<BoundResult> {
    if radial_profile.role() != VariableRole::Radial {
        return Err(Error::InvalidParams("disk bound needs a radial profile Q(r)".into()));
    }
    let integral = radial_moment(radial_profile, quad)?;
    disk_bound_from_integral(total_flux, integral)
}

/// `∫₀^∞ Q(r) r dr`.
pub fn radial_moment(q: &Profile1D, quad: &QuadratureConfig) -> Result<f64> {
    quad.validate()?;
    let f = |r: f64| q.eval(r) * r;
    let value = match (q.kind(), q.support()) {
        (ProfileKind::Sampled(s), _) => {
            // the interpolant is linear per cell, so r·Q is quadratic: Simpson is exact
            s.xs()
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0].max(0.0), w[1].max(0.0));
                    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
                })
                .sum()
        }
        (_, Some((a, b))) => quadrature::integrate(f, a.max(0.0), b.max(0.0), quad)?.value,
        (_, None) => quadrature::integrate_semi_infinite(f, 0.0, quad)?.value,
    };
    Ok(value.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{mode_window, reduced_flux};
    use proptest::prelude::*;

    #[test]
    fn bargmann_examples() {
        assert_eq!(bargmann_rhs(0.0, 3.0), 3.0);
        assert_eq!(bargmann_rhs(2.0, 6.0), 2.0);
        assert!((bargmann_rhs(6.25, 5.0) - 0.980_580_675_690_920_2).abs() < 1e-15);
    }

    #[test]
    fn strip_bound_at_half_flux() {
        let f = reduced_flux(0.5);
        let b = strip_clr_bound(&f, 10.0).unwrap();
        let expect = 2.0 * (10.0 / 5f64.sqrt() + 10.0 / 37f64.sqrt());
        assert!((b.value - expect).abs() < 1e-12);
        assert!((b.value - 12.232_25).abs() < 1e-5);
        assert_eq!(b.per_mode_terms.keys().copied().collect::<Vec<_>>(), vec![-2, -1, 0, 1]);
        assert_eq!(b.omitted_below_one, 2);
        for t in b.omitted_terms.values() {
            assert!((t - 10.0 / 101f64.sqrt()).abs() < 1e-15);
            assert!(*t < 1.0);
        }
        let b = strip_clr_bound(&f, 1.0).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(b.retained.is_empty());
        let b = strip_clr_bound(&reduced_flux(0.2), 0.0).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(matches!(strip_clr_bound(&reduced_flux(2.0), 10.0), Err(Error::IntegerFlux { .. })));
    }

    #[test]
    fn per_mode_terms() {
        let f = reduced_flux(0.5);
        let t = per_mode_bargmann_terms(&f, 10.0, &[0, 1]);
        assert!((t[&0] - 4.472_135_954_999_579).abs() < 1e-14);
        assert!((t[&1] - 1.643_989_873_053_573).abs() < 1e-14);
        let t = per_mode_bargmann_terms(&f, 0.0, &[-3, 0, 5]);
        assert!(t.values().all(|&v| v == 0.0));
    }

    #[test]
    fn disk_bound_examples() {
        let b = disk_bound_from_integral(0.5, 4.0).unwrap();
        assert!((b.value - 32.0 / 3.0).abs() < 1e-12);
        assert_eq!(b.retained.len(), 4);
        assert_eq!(b.omitted_below_one, 2);
        assert!((b.omitted_terms[&2] - 0.8).abs() < 1e-15);
        assert_eq!(disk_bound_from_integral(0.5, 0.0).unwrap().value, 0.0);
        let b = disk_bound_from_integral(0.5, 1.0).unwrap();
        assert_eq!(b.value, 2.0);
        assert_eq!(b.retained, vec![-1, 0]);
        assert!(matches!(disk_bound_from_integral(1.0, 4.0), Err(Error::IntegerFlux { .. })));
    }

    #[test]
    fn disk_bound_by_quadrature() {
        // Q = 4 e^{-r}: ∫ 4 r e^{-r} dr = 4
        let q = Profile1D::analytic(VariableRole::Radial, |r| 4.0 * (-r).exp());
        let b = disk_bound_bel(0.5, &q, &QuadratureConfig::default()).unwrap();
        assert!((b.value - 32.0 / 3.0).abs() < 1e-9);
        let line = Profile1D::zero(VariableRole::Line);
        assert!(disk_bound_bel(0.5, &line, &QuadratureConfig::default()).is_err());
    }

    proptest! {
        #[test]
        fn bound_grows_with_norm(phi in 0.01f64..=0.5, norm in 0.0f64..40.0, lam in 1.0f64..3.0) {
            let f = reduced_flux(phi);
            let a = strip_clr_bound(&f, norm).unwrap().value;
            let b = strip_clr_bound(&f, lam * norm).unwrap().value;
            prop_assert!(b >= a);
        }

        #[test]
        fn retained_set_is_the_window(phi in 0.01f64..=0.5, norm in 0.0f64..40.0) {
            let f = reduced_flux(phi);
            let b = strip_clr_bound(&f, norm).unwrap();
            prop_assert_eq!(b.retained, mode_window(&f, norm).unwrap());
            prop_assert!(b.per_mode_terms.values().all(|&t| t >= 1.0 - 1e-15));
            prop_assert!(b.omitted_terms.values().all(|&t| t < 1.0 + 1e-15));
        }

        #[test]
        fn half_flux_terms_pair_bitwise(norm in 0.0f64..100.0, k in -50i64..50) {
            let t = per_mode_bargmann_terms(&reduced_flux(0.5), norm, &[k, -k - 1]);
            prop_assert_eq!(t[&k].to_bits(), t[&(-k - 1)].to_bits());
        }

        #[test]
        fn bargmann_decreases_in_c(c in 0.0f64..100.0, dc in 1e-6f64..10.0, m in 1e-3f64..100.0) {
            prop_assert!(bargmann_rhs(c + dc, m) < bargmann_rhs(c, m));
        }
    }
}
