//! End-to-end audits: the bound next to independently computed counts.
//!
//! Verdicts are recorded, never asserted. The audited window runs past the
//! primed-sum cutoff, since fibers whose Bargmann term is below one can
//! still carry bound states.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BoundResult};
use crate::error::{Error, Result};
use crate::lattice;
use crate::modes::{self, FiberCounter, FluxSpec};
use crate::potential::{self, Potential2D, Profile1D, StripGeometry};
use crate::quadrature;
use crate::solver::SolverConfig;
use crate::sturm::{self, Resolution, SlProblem};

/// Truncation and sampling used by an audit row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditOptions {
    /// Counts are taken on `[-L, L]`; a second count on `[-2L, 2L]` is noted.
    pub half_length: f64,
    /// Samples of `W` on `[-L, L]`; the same spacing is used out to `2L`.
    pub x1_points: usize,
    /// Safety stop for the window extension, in mode groups.
    pub max_extra_groups: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            half_length: 20.0,
            x1_points: 2001,
            max_extra_groups: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow {
    pub psi: f64,
    pub phi: f64,
    pub norm_x: f64,
    pub bound_value: f64,
    pub retained_modes: Vec<i64>,
    pub audited_modes: Vec<i64>,
    pub per_mode_count: BTreeMap<i64, usize>,
    pub total_count: usize,
    pub per_mode_bargmann: BTreeMap<i64, f64>,
    pub satisfied_main: bool,
    pub satisfied_per_mode: BTreeMap<i64, bool>,
    /// Counts of the half-line reductions `τ(k)`.
    pub per_mode_tau_count: BTreeMap<i64, usize>,
    /// Total over the audited modes with the truncation doubled.
    pub total_count_double_length: usize,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub psi: f64,
    pub phi: f64,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AuditEntry {
    Ok(AuditRow),
    Error(ErrorRow),
}

impl AuditEntry {
    pub fn from_result(flux: &FluxSpec, r: Result<AuditRow>) -> Self {
        match r {
            Ok(row) => AuditEntry::Ok(row),
            Err(e) => AuditEntry::Error(ErrorRow {
                psi: flux.psi,
                phi: flux.phi,
                kind: e.kind().to_string(),
                message: e.to_string(),
            }),
        }
    }

    pub fn phi(&self) -> f64 {
        match self {
            AuditEntry::Ok(r) => r.phi,
            AuditEntry::Error(r) => r.phi,
        }
    }

    pub fn psi(&self) -> f64 {
        match self {
            AuditEntry::Ok(r) => r.psi,
            AuditEntry::Error(r) => r.psi,
        }
    }

    /// False only for completed rows whose count exceeds the bound.
    pub fn main_ok(&self) -> bool {
        match self {
            AuditEntry::Ok(r) => r.satisfied_main,
            AuditEntry::Error(_) => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub rows: Vec<AuditEntry>,
    pub config_digest: String,
    pub tool_version: String,
    pub seed: u64,
}

impl AuditReport {
    pub fn new(rows: Vec<AuditEntry>, config_digest: String, seed: u64) -> Self {
        Self {
            rows,
            config_digest,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
        }
    }

    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(AuditEntry::main_ok)
    }
}

fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// `W` sampled on `[-2L, 2L]` at the spacing of `x1_points` over `[-L, L]`.
pub fn sampled_sup(v: &Potential2D, geometry: &StripGeometry, opts: &AuditOptions, cfg: &SolverConfig) -> Result<Profile1D> {
    if opts.x1_points < 2 {
        return Err(Error::InvalidParams("x1_points must be at least 2".into()));
    }
    let l = opts.half_length;
    let grid = uniform(-2.0 * l, 2.0 * l, 2 * opts.x1_points - 1);
    potential::sup_over_width(v, geometry, &grid, &cfg.quadrature)
}

/// Cross-validated count of one fiber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeCount {
    pub k: i64,
    pub count: usize,
    /// Count of `τ(k)`.
    pub tau: usize,
    /// Count with the truncation doubled.
    pub double_length: usize,
    /// Excluded eigenvalues just below the threshold, as offsets from it.
    pub borderline: Vec<f64>,
    pub prufer: Resolution,
    pub lattice: Resolution,
}

fn audit_mode(flux: &FluxSpec, k: i64, w: &Profile1D, opts: &AuditOptions, cfg: &SolverConfig) -> Result<ModeCount> {
    let l = opts.half_length;
    let mode = modes::build_mode_operator(k, flux, w);
    let prufer = modes::count_fiber(&mode, l, FiberCounter::Prufer, cfg)?;
    let lattice = lattice::fiber_count_refined(flux, k, w, l, cfg).map_err(|e| Error::Mode {
        k,
        source: Box::new(e),
    })?;
    if prufer.count != lattice.count {
        return Err(Error::CounterDisagreement {
            k,
            prufer: prufer.count,
            lattice: lattice.count,
        });
    }
    let tau_problem = modes::reduce_to_sl(&mode, l)?;
    let tau = sturm::count_negative_prufer(&tau_problem, 0.0, cfg)
        .map_err(|e| Error::Mode { k, source: Box::new(e) })?
        .count;
    let double_length = modes::count_fiber(&mode, 2.0 * l, FiberCounter::Prufer, cfg)?.count;
    Ok(ModeCount {
        k,
        count: prufer.count,
        tau,
        double_length,
        borderline: prufer.borderline,
        prufer: prufer.resolution,
        lattice: lattice.resolution,
    })
}

/// Per-mode counts over the first `retained` modes in window order, then on
/// through further mode groups until two consecutive groups count zero.
pub fn extended_mode_counts(
    flux: &FluxSpec,
    w: &Profile1D,
    retained: usize,
    cfg: &SolverConfig,
    opts: &AuditOptions,
) -> Result<Vec<ModeCount>> {
    let mut audited: Vec<ModeCount> = Vec::new();
    let mut groups = modes::mode_groups(flux.phi);
    let mut retained_left = retained;
    let mut zero_run = 0;
    let mut extra = 0;
    while zero_run < 2 {
        let group = groups.next().expect("mode groups are unbounded");
        let results = group
            .par_iter()
            .map(|&k| audit_mode(flux, k, w, opts, cfg))
            .collect::<Result<Vec<_>>>()?;
        let level: usize = results.iter().map(|m| m.count).sum();
        audited.extend(results);
        if retained_left > 0 {
            retained_left = retained_left.saturating_sub(group.len());
            continue;
        }
        extra += 1;
        zero_run = if level == 0 { zero_run + 1 } else { 0 };
        if extra > opts.max_extra_groups {
            return Err(Error::NonConvergence {
                counts: audited.iter().map(|m| m.count).collect(),
            });
        }
    }
    Ok(audited)
}

/// Bound, per-mode Bargmann terms, cross-validated per-mode counts and the
/// verdict for one flux.
pub fn audit_strip(
    flux: &FluxSpec,
    v: &Potential2D,
    geometry: &StripGeometry,
    cfg: &SolverConfig,
    opts: &AuditOptions,
) -> Result<AuditRow> {
    flux.require_non_integer()?;
    cfg.validate()?;
    if !(opts.half_length > 0.0 && opts.half_length.is_finite()) {
        return Err(Error::InvalidParams(format!("half_length must be positive, got {}", opts.half_length)));
    }
    let norm = potential::norm_x_of_potential(v, *geometry, &cfg.quadrature)?;
    let bound: BoundResult = bounds::strip_clr_bound(flux, norm)?;
    let w = sampled_sup(v, geometry, opts, cfg)?;

    let audited = extended_mode_counts(flux, &w, bound.retained.len(), cfg, opts)?;

    let audited_modes: Vec<i64> = audited.iter().map(|m| m.k).collect();
    let per_mode_count: BTreeMap<i64, usize> = audited.iter().map(|m| (m.k, m.count)).collect();
    let per_mode_tau_count = audited.iter().map(|m| (m.k, m.tau)).collect();
    let per_mode_bargmann = bounds::per_mode_bargmann_terms(flux, norm, &audited_modes);
    let satisfied_per_mode = per_mode_count
        .iter()
        .map(|(k, &n)| (*k, n as f64 <= per_mode_bargmann[k]))
        .collect();
    let total_count: usize = per_mode_count.values().sum();
    let total_count_double_length = audited.iter().map(|m| m.double_length).sum();
    let satisfied_main = total_count as f64 <= bound.value;

    let outside: usize = audited
        .iter()
        .filter(|m| !bound.retained.contains(&m.k))
        .map(|m| m.count)
        .sum();
    let mut notes = vec![format!(
        "{} modes audited, {} retained; count outside retained window {}",
        audited_modes.len(),
        bound.retained.len(),
        outside
    )];
    let limit_circle: Vec<String> = audited_modes
        .iter()
        .filter(|&&k| 4.0 * (k as f64 + flux.phi).powi(2) < 0.75)
        .map(|k| k.to_string())
        .collect();
    if !limit_circle.is_empty() {
        notes.push(format!("tau limit-circle at 0 for k={}, principal branch used", limit_circle.join(" ")));
    }
    if total_count_double_length != total_count {
        notes.push(format!("count at 2L is {total_count_double_length}"));
    }
    let borderline: Vec<String> = audited
        .iter()
        .flat_map(|m| m.borderline.iter().map(move |b| format!("k={}:{b:e}", m.k)))
        .collect();
    if !borderline.is_empty() {
        notes.push(format!("borderline excluded [{}]", borderline.join(" ")));
    }
    if !satisfied_main {
        notes.push("count exceeds bound".into());
    }

    Ok(AuditRow {
        psi: flux.psi,
        phi: flux.phi,
        norm_x: norm,
        bound_value: bound.value,
        retained_modes: bound.retained,
        audited_modes,
        per_mode_count,
        total_count,
        per_mode_bargmann,
        satisfied_main,
        satisfied_per_mode,
        per_mode_tau_count,
        total_count_double_length,
        notes: notes.join("; "),
    })
}

/// One row per flux, errors recorded in place, sorted by `φ` then `Ψ`.
pub fn flux_sweep(
    psi_values: &[f64],
    v: &Potential2D,
    geometry: &StripGeometry,
    cfg: &SolverConfig,
    opts: &AuditOptions,
) -> Vec<AuditEntry> {
    let mut rows: Vec<AuditEntry> = psi_values
        .par_iter()
        .map(|&psi| {
            let flux = modes::reduced_flux(psi);
            let r = if psi.is_finite() {
                audit_strip(&flux, v, geometry, cfg, opts)
            } else {
                Err(Error::InvalidParams(format!("flux {psi} is not finite")))
            };
            AuditEntry::from_result(&flux, r)
        })
        .collect();
    rows.sort_by(|a, b| a.phi().total_cmp(&b.phi()).then(a.psi().total_cmp(&b.psi())));
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BargmannRow {
    pub index: usize,
    pub c: f64,
    pub integral_m: f64,
    pub count: usize,
    pub rhs: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BargmannReport {
    pub rows: Vec<BargmannRow>,
    pub satisfied_fraction: f64,
}

/// `∫M` over the region the counter sees.
fn integral_m(p: &SlProblem, cfg: &SolverConfig) -> Result<f64> {
    let l = p.truncation;
    let mut pts = if p.c > 0.0 {
        vec![-l, -p.singular_start, p.singular_start, l]
    } else {
        vec![-l, l]
    };
    if let Some(s) = p.m.as_sampled() {
        pts.extend(s.xs().iter().copied().filter(|x| x.abs() < l && (p.c == 0.0 || x.abs() > p.singular_start)));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
    }
    let f = |x: f64| p.m.eval(x);
    if p.c > 0.0 {
        let split = pts.partition_point(|&x| x < 0.0);
        let left = quadrature::integrate_with_breaks(f, &pts[..split], &cfg.quadrature)?.value;
        let right = quadrature::integrate_with_breaks(f, &pts[split..], &cfg.quadrature)?.value;
        Ok(left + right)
    } else {
        Ok(quadrature::integrate_with_breaks(f, &pts, &cfg.quadrature)?.value)
    }
}

/// Numerical count against `∫M/√(4c+1)` per instance.
pub fn audit_bargmann_family(instances: &[SlProblem], cfg: &SolverConfig) -> Result<BargmannReport> {
    let rows = instances
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let count = sturm::count_negative_prufer(p, 0.0, cfg)?.count;
            let integral = integral_m(p, cfg)?;
            let rhs = bounds::bargmann_rhs(p.c, integral);
            Ok(BargmannRow {
                index,
                c: p.c,
                integral_m: integral,
                count,
                rhs,
                satisfied: count as f64 <= rhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let satisfied_fraction = if rows.is_empty() {
        1.0
    } else {
        rows.iter().filter(|r| r.satisfied).count() as f64 / rows.len() as f64
    };
    Ok(BargmannReport { rows, satisfied_fraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::reduced_flux;
    use crate::potential::{builtin_family, VariableRole};

    fn opts() -> AuditOptions {
        AuditOptions {
            half_length: 15.0,
            x1_points: 601,
            ..AuditOptions::default()
        }
    }

    fn geometry() -> StripGeometry {
        StripGeometry::new(1.0).unwrap()
    }

    /// Gaussian ridge whose `‖V‖_X` is `norm`: `A·w·√π = norm`.
    fn ridge(norm: f64) -> Potential2D {
        let mut p = BTreeMap::new();
        p.insert("amplitude".to_string(), norm / std::f64::consts::PI.sqrt());
        builtin_family("gaussian_ridge", &p).unwrap()
    }

    #[test]
    fn zero_potential_row() {
        let row = audit_strip(&reduced_flux(0.3), &Potential2D::zero(), &geometry(), &SolverConfig::default(), &opts()).unwrap();
        assert_eq!(row.total_count, 0);
        assert_eq!(row.bound_value, 0.0);
        assert!(row.satisfied_main);
        assert!(row.retained_modes.is_empty());
        assert_eq!(row.audited_modes.len(), 2);
    }

    #[test]
    fn half_flux_ridge_row() {
        let row = audit_strip(&reduced_flux(0.5), &ridge(10.0), &geometry(), &SolverConfig::default(), &opts()).unwrap();
        assert!((row.norm_x - 10.0).abs() < 1e-7);
        assert!((row.bound_value - 12.232_25).abs() < 1e-4);
        assert_eq!(row.retained_modes, vec![-1, 0, -2, 1]);
        assert_eq!(row.total_count, row.per_mode_count.values().sum::<usize>());
        assert_eq!(row.satisfied_main, row.total_count as f64 <= row.bound_value);
        assert!(row.audited_modes.len() >= row.retained_modes.len() + 4);
        // the two modes of a tie carry the same count
        assert_eq!(row.per_mode_count[&0], row.per_mode_count[&-1]);
        let mut audited = row.audited_modes.clone();
        audited.sort();
        assert_eq!(audited, row.per_mode_bargmann.keys().copied().collect::<Vec<_>>());
    }

    #[test]
    fn integer_flux_is_error_row() {
        let rows = flux_sweep(&[1.0], &ridge(3.0), &geometry(), &SolverConfig::default(), &opts());
        assert_eq!(rows.len(), 1);
        match &rows[0] {
            AuditEntry::Error(e) => assert_eq!(e.kind, "integer_flux"),
            other => panic!("expected error row, got {other:?}"),
        }
        assert!(flux_sweep(&[], &ridge(3.0), &geometry(), &SolverConfig::default(), &opts()).is_empty());
    }

    #[test]
    fn sweep_is_sorted_and_repeatable() {
        let psis = [0.5, 1.9, 0.1, 2.3, 0.3];
        let a = flux_sweep(&psis, &ridge(4.0), &geometry(), &SolverConfig::default(), &opts());
        let b = flux_sweep(&psis, &ridge(4.0), &geometry(), &SolverConfig::default(), &opts());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let phis: Vec<f64> = a.iter().map(AuditEntry::phi).collect();
        assert!(phis.windows(2).all(|w| w[0] <= w[1]));
        assert!(a.iter().all(|r| matches!(r, AuditEntry::Ok(_))));
    }

    #[test]
    fn bargmann_family_examples() {
        let cfg = SolverConfig::default();
        let zero = SlProblem::new(0.0, Profile1D::zero(VariableRole::Line), 10.0).unwrap();
        let pt = SlProblem::new(
            0.0,
            Profile1D::analytic(VariableRole::Line, |x| 12.0 / x.cosh().powi(2)),
            20.0,
        )
        .unwrap();
        let r = audit_bargmann_family(&[zero, pt], &cfg).unwrap();
        assert_eq!(r.rows[0].count, 0);
        assert!(r.rows[0].satisfied);
        assert_eq!(r.rows[1].count, 3);
        assert!((r.rows[1].rhs - 24.0).abs() < 1e-8);
        assert_eq!(r.satisfied_fraction, 1.0);
        let random: Vec<SlProblem> = (0..50).map(|s| sturm::random_sl_problem(s, 20.0)).collect();
        let r = audit_bargmann_family(&random, &cfg).unwrap();
        assert!((0.0..=1.0).contains(&r.satisfied_fraction));
        assert_eq!(r.rows.len(), 50);
    }
}
