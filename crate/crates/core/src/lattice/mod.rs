//! Lattice model of the strip operator.
//!
//! Sites are `(x1_i, x2_j)` with `x2` varying fastest. The operator is
//!
//! ```text
//! H = (P_φ - φ_h²)⊗I + I⊗T_φ - diag(V)
//! ```
//!
//! * `P_φ` is the Peierls discretization of `(-i∂₁ + φ)²`: diagonal `2/h²`,
//!   hop to the right `-e^{iφh}/h²`, to the left `-e^{-iφh}/h²`, Dirichlet at
//!   `±L` (or gauge-covariant Neumann on a cell-centred grid).
//! * `φ_h² = 4 sin²(φh/2)/h²` is the lattice symbol of `-∂²` at frequency `φ`,
//!   so `P_φ - φ_h²` discretizes `-∂² + (2φ/i)∂`.
//! * `T_φ = C diag((k_j+φ)²) Cᵀ`, where `C` is the orthonormal cosine basis
//!   `cos(πj(i+½)/n2)` of the mirror-ghost Neumann Laplacian on `n2` cell
//!   centres, and slot `j` carries the `j`-th mode in order of `|k+φ|`.
//!
//! The fiber at transverse mode `k` is the `n2 = 1` instance with `C = [1]`.

pub mod band;

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{self, reduced_flux, FluxSpec};
use crate::potential::{Potential2D, Profile1D, StripGeometry, VariableRole};
use crate::solver::SolverConfig;
use crate::sturm::{CountMethod, CountResult, Resolution};
use band::SymBand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum X1Boundary {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGrid {
    pub n1: usize,
    pub n2: usize,
    pub half_length: f64,
    pub x1_boundary: X1Boundary,
    pub cap: usize,
}

impl LatticeGrid {
    pub fn new(n1: usize, n2: usize, half_length: f64) -> Self {
        Self {
            n1,
            n2,
            half_length,
            x1_boundary: X1Boundary::Dirichlet,
            cap: SolverConfig::default().factorization_cap,
        }
    }

    pub fn with_boundary(mut self, b: X1Boundary) -> Self {
        self.x1_boundary = b;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn unknowns(&self) -> usize {
        self.n1.saturating_mul(self.n2)
    }

    fn validate(&self) -> Result<()> {
        if self.n1 < 1 || self.n2 < 1 {
            return Err(Error::InvalidParams("lattice needs n1, n2 >= 1".into()));
        }
        if !(self.half_length > 0.0) {
            return Err(Error::InvalidParams("lattice half-length must be positive".into()));
        }
        if self.unknowns() > self.cap {
            return Err(Error::GridCap {
                requested: self.unknowns(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// `x1` nodes and spacing.
    pub fn x1_nodes(&self) -> (Vec<f64>, f64) {
        let l = self.half_length;
        match self.x1_boundary {
            X1Boundary::Dirichlet => {
                let h = 2.0 * l / (self.n1 + 1) as f64;
                ((1..=self.n1).map(|i| -l + i as f64 * h).collect(), h)
            }
            X1Boundary::Neumann => {
                let h = 2.0 * l / self.n1 as f64;
                ((0..self.n1).map(|i| -l + (i as f64 + 0.5) * h).collect(), h)
            }
        }
    }
}

/// `4 sin²(φh/2) / h²`.
pub fn lattice_phi_sq(phi: f64, h: f64) -> f64 {
    let s = (0.5 * phi * h).sin();
    4.0 * s * s / (h * h)
}

/// The first `n` transverse modes `(k, (k+φ)²)` in order of `|k+φ|`.
pub fn transverse_modes(phi: f64, n: usize) -> Vec<(i64, f64)> {
    modes::mode_groups(phi)
        .flatten()
        .take(n)
        .map(|k| {
            let s = k as f64 + phi;
            (k, s * s)
        })
        .collect()
}

/// Orthonormal cosine basis, `c[i * n + j] = C[i][j]`, site `i`, slot `j`.
pub fn cosine_basis(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let norm = if j == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
            c[i * n + j] = norm * (PI * j as f64 * (i as f64 + 0.5) / n as f64).cos();
        }
    }
    c
}

/// Banded Hermitian lattice operator, both triangles stored.
#[derive(Debug, Clone)]
pub struct LatticeOperator {
    pub n1: usize,
    pub n2: usize,
    pub h1: f64,
    pub h2: f64,
    pub phi: f64,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub boundary: X1Boundary,
    pub transverse: Vec<(i64, f64)>,
    bw: usize,
    data: Vec<Complex64>,
}

impl LatticeOperator {
    pub fn dim(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn slot(&self, r: usize, c: usize) -> Option<usize> {
        let off = c as isize - r as isize;
        if off.unsigned_abs() > self.bw {
            None
        } else {
            Some(r * (2 * self.bw + 1) + (off + self.bw as isize) as usize)
        }
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.slot(r, c).map_or(Complex64::new(0.0, 0.0), |s| self.data[s])
    }

    fn set(&mut self, r: usize, c: usize, v: Complex64) {
        let s = self.slot(r, c).expect("entry inside band");
        self.data[s] = v;
    }

    fn band_entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let n = self.dim();
        (0..n).flat_map(move |r| {
            let lo = r.saturating_sub(self.bw);
            let hi = (r + self.bw).min(n - 1);
            (lo..=hi).map(move |c| (r, c, self.entry(r, c)))
        })
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn max_abs_diag(&self) -> f64 {
        (0..self.dim()).fold(0.0_f64, |m, i| m.max(self.entry(i, i).re.abs()))
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn norm_scale(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|r| {
                let lo = r.saturating_sub(self.bw);
                let hi = (r + self.bw).min(n - 1);
                (lo..=hi).map(|c| self.entry(r, c).norm()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// `max |H - H†| / ‖H‖`.
    pub fn hermitian_defect(&self) -> f64 {
        let worst = self
            .band_entries()
            .map(|(r, c, z)| (z - self.entry(c, r).conj()).norm())
            .fold(0.0_f64, f64::max);
        worst / self.norm_scale().max(f64::MIN_POSITIVE)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (r, c, z) in self.band_entries() {
            m[(r, c)] = z;
        }
        m
    }

    /// Ascending eigenvalues by dense Hermitian eigensolve.
    pub fn eigenvalues_dense(&self, cap: usize) -> Result<Vec<f64>> {
        let n = self.dim();
        if n > cap {
            return Err(Error::GridCap { requested: n, cap });
        }
        let mut ev: Vec<f64> = if self.is_real() {
            let m = DMatrix::<f64>::from_fn(n, n, |r, c| self.entry(r, c).re);
            SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
        } else {
            SymmetricEigen::new(self.to_dense()).eigenvalues.iter().copied().collect()
        };
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// Writes nonzero entries as `row col re im` lines.
    pub fn write_coordinate<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "% {} {} hermitian", self.dim(), self.dim())?;
        for (r, c, z) in self.band_entries() {
            if z.re != 0.0 || z.im != 0.0 {
                writeln!(out, "{r} {c} {:.17e} {:.17e}", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

fn assemble<V>(
    flux: &FluxSpec,
    grid: &LatticeGrid,
    x2: Vec<f64>,
    h2: f64,
    potential: V,
    transverse: Vec<(i64, f64)>,
    basis: &[f64],
) -> Result<LatticeOperator>
where
    V: Fn(f64, f64) -> Result<f64>,
{
    grid.validate()?;
    let (n1, n2) = (grid.n1, grid.n2);
    let (x1, h1) = grid.x1_nodes();
    let phi = flux.phi;
    let bw = if n1 > 1 { n2 } else { n2 - 1 };
    let mut op = LatticeOperator {
        n1,
        n2,
        h1,
        h2,
        phi,
        x1,
        x2,
        boundary: grid.x1_boundary,
        transverse,
        bw,
        data: vec![Complex64::new(0.0, 0.0); n1 * n2 * (2 * bw + 1)],
    };
    let inv_h2 = 1.0 / (h1 * h1);
    let phi_h = lattice_phi_sq(phi, h1);
    let hop_right = -Complex64::from_polar(inv_h2, phi * h1);
    let hop_left = -Complex64::from_polar(inv_h2, -phi * h1);
    let t = |a: usize, b: usize| -> f64 {
        op.transverse
            .iter()
            .enumerate()
            .map(|(m, &(_, e))| basis[a * n2 + m] * e * basis[b * n2 + m])
            .sum()
    };
    let mut tmat = vec![0.0; n2 * n2];
    for a in 0..n2 {
        for b in 0..n2 {
            tmat[a * n2 + b] = t(a, b);
        }
    }
    for i in 0..n1 {
        let kinetic = match grid.x1_boundary {
            X1Boundary::Dirichlet => 2.0 * inv_h2,
            X1Boundary::Neumann => {
                let ends = usize::from(i == 0) + usize::from(i + 1 == n1);
                (2 - ends.min(2)) as f64 * inv_h2
            }
        };
        for a in 0..n2 {
            let s = i * n2 + a;
            let v = potential(op.x1[i], op.x2[a])?;
            for b in 0..n2 {
                let mut val = tmat[a * n2 + b];
                if a == b {
                    val += kinetic - phi_h - v;
                }
                op.set(s, i * n2 + b, Complex64::new(val, 0.0));
            }
            if i + 1 < n1 {
                op.set(s, s + n2, hop_right);
                op.set(s + n2, s, hop_left);
            }
        }
    }
    Ok(op)
}

fn cell_centres(d: f64, n2: usize) -> (Vec<f64>, f64) {
    let h2 = d / n2 as f64;
    ((0..n2).map(|j| (j as f64 + 0.5) * h2).collect(), h2)
}

/// Peierls lattice operator for an `x2`-independent profile `W`.
pub fn assemble_peierls(flux: &FluxSpec, w: &Profile1D, geometry: &StripGeometry, grid: &LatticeGrid) -> Result<LatticeOperator> {
    if w.role() != VariableRole::Line {
        return Err(Error::InvalidParams("lattice potential must be a line profile".into()));
    }
    let (x2, h2) = cell_centres(geometry.width, grid.n2);
    assemble(
        flux,
        grid,
        x2,
        h2,
        |x1, _| Ok(w.eval(x1)),
        transverse_modes(flux.phi, grid.n2),
        &cosine_basis(grid.n2),
    )
}

/// Peierls lattice operator for a full potential `V(x1, x2)`.
pub fn assemble_peierls_2d(
    flux: &FluxSpec,
    v: &Potential2D,
    geometry: &StripGeometry,
    grid: &LatticeGrid,
) -> Result<LatticeOperator> {
    let (x2, h2) = cell_centres(geometry.width, grid.n2);
    assemble(
        flux,
        grid,
        x2,
        h2,
        |x1, x2| {
            let val = v.value(x1, x2, geometry);
            if val >= 0.0 {
                Ok(val)
            } else {
                Err(Error::NegativeValue { x1, x2, value: val })
            }
        },
        transverse_modes(flux.phi, grid.n2),
        &cosine_basis(grid.n2),
    )
}

/// Single fiber `k`: the `n2 = 1` lattice with transverse energy `(k+φ)²`.
pub fn assemble_fiber(flux: &FluxSpec, k: i64, w: &Profile1D, grid: &LatticeGrid) -> Result<LatticeOperator> {
    let grid = LatticeGrid { n2: 1, ..*grid };
    let s = k as f64 + flux.phi;
    assemble(flux, &grid, vec![0.0], 1.0, |x1, _| Ok(w.eval(x1)), vec![(k, s * s)], &[1.0])
}

/// `U H U†` with `U = diag(e^{iφ x1})`, which removes the Peierls phases.
/// Imaginary parts at roundoff level are set to zero.
pub fn gauge_conjugate_real(op: &LatticeOperator) -> LatticeOperator {
    let mut out = op.clone();
    let n = op.dim();
    let n2 = op.n2;
    let cutoff = 1e-14 * op.norm_scale();
    for r in 0..n {
        let lo = r.saturating_sub(op.bw);
        let hi = (r + op.bw).min(n - 1);
        for c in lo..=hi {
            let dx = op.x1[r / n2] - op.x1[c / n2];
            let mut z = op.entry(r, c) * Complex64::from_polar(1.0, op.phi * dx);
            if z.im.abs() <= cutoff {
                z.im = 0.0;
            }
            out.set(r, c, z);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Inertia
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InertiaMethod {
    BandedLdlReal,
    BandedLdlDoubled,
    DenseEigensolve,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InertiaReport {
    pub negative: usize,
    pub zero_cluster: usize,
    pub positive: usize,
    pub epsilon: f64,
    pub method: InertiaMethod,
}

/// `ε = 10⁻⁹ · max |diag|`.
pub fn zero_epsilon(op: &LatticeOperator) -> f64 {
    1e-9 * op.max_abs_diag().max(f64::MIN_POSITIVE)
}

fn band_count_below(op: &LatticeOperator, sigma: f64) -> Result<(usize, InertiaMethod)> {
    let n = op.dim();
    let bw = op.bw;
    if op.is_real() {
        let mut a = SymBand::zeros(n, bw);
        for r in 0..n {
            for c in r.saturating_sub(bw)..=r {
                a.set(r, c, op.entry(r, c).re);
            }
        }
        return Ok((a.count_below(sigma)?, InertiaMethod::BandedLdlReal));
    }
    // [[Re, -Im], [Im, Re]] interleaved; every eigenvalue appears twice
    let mut a = SymBand::zeros(2 * n, 2 * bw + 1);
    for p in 0..n {
        for q in p.saturating_sub(bw)..=p {
            let z = op.entry(p, q);
            a.set(2 * p, 2 * q, z.re);
            a.set(2 * p + 1, 2 * q + 1, z.re);
            a.set(2 * p + 1, 2 * q, z.im);
            if p != q {
                a.set(2 * p, 2 * q + 1, -z.im);
            }
        }
    }
    let doubled = a.count_below(sigma)?;
    if doubled % 2 != 0 {
        return Err(Error::FactorizationBreakdown {
            index: doubled,
            pivot: f64::NAN,
        });
    }
    Ok((doubled / 2, InertiaMethod::BandedLdlDoubled))
}

/// Eigenvalues below `sigma`, by factorization with eigensolve fallback.
pub fn count_below(op: &LatticeOperator, sigma: f64, cfg: &SolverConfig) -> Result<(usize, InertiaMethod)> {
    if op.dim() > cfg.factorization_cap {
        return Err(Error::GridCap {
            requested: op.dim(),
            cap: cfg.factorization_cap,
        });
    }
    match band_count_below(op, sigma) {
        Ok(r) => Ok(r),
        Err(Error::FactorizationBreakdown { index, pivot }) => {
            if op.dim() <= cfg.eigensolve_cap {
                let ev = op.eigenvalues_dense(cfg.eigensolve_cap)?;
                Ok((ev.iter().filter(|&&e| e < sigma).count(), InertiaMethod::DenseEigensolve))
            } else {
                Err(Error::FactorizationBreakdown { index, pivot })
            }
        }
        Err(e) => Err(e),
    }
}

/// Inertia with the `(-ε, ε)` window as the zero cluster.
pub fn count_negative_inertia(op: &LatticeOperator, cfg: &SolverConfig) -> Result<InertiaReport> {
    let eps = zero_epsilon(op);
    let (negative, m1) = count_below(op, -eps, cfg)?;
    let (upto, m2) = count_below(op, eps, cfg)?;
    let method = if m1 == InertiaMethod::DenseEigensolve || m2 == InertiaMethod::DenseEigensolve {
        InertiaMethod::DenseEigensolve
    } else {
        m1
    };
    let zero_cluster = upto.saturating_sub(negative);
    Ok(InertiaReport {
        negative,
        zero_cluster,
        positive: op.dim() - negative - zero_cluster,
        epsilon: eps,
        method,
    })
}

/// Same report from a dense eigensolve only.
pub fn inertia_by_eigensolve(op: &LatticeOperator, cfg: &SolverConfig) -> Result<InertiaReport> {
    let eps = zero_epsilon(op);
    let ev = op.eigenvalues_dense(cfg.eigensolve_cap)?;
    let negative = ev.iter().filter(|&&e| e < -eps).count();
    let zero_cluster = ev.iter().filter(|&&e| e >= -eps && e < eps).count();
    Ok(InertiaReport {
        negative,
        zero_cluster,
        positive: ev.len() - negative - zero_cluster,
        epsilon: eps,
        method: InertiaMethod::DenseEigensolve,
    })
}

/// Smallest eigenvalue: dense when small, otherwise bisection on inertia.
pub fn smallest_eigenvalue(op: &LatticeOperator, cfg: &SolverConfig) -> Result<f64> {
    if op.dim() <= cfg.eigensolve_cap {
        return Ok(op.eigenvalues_dense(cfg.eigensolve_cap)?[0]);
    }
    let r = op.norm_scale();
    let (mut lo, mut hi) = (-r - 1.0, r + 1.0);
    while hi - lo > 1e-13 * r.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if count_below(op, mid, cfg)?.0 >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Fiber counts
// ---------------------------------------------------------------------------

/// Negative count of the lattice fiber `k`, doubling `n1` from
/// `max(cfg.inertia_grid_points, 2L/0.02)` until two counts agree.
pub fn fiber_count_refined(flux: &FluxSpec, k: i64, w: &Profile1D, half_length: f64, cfg: &SolverConfig) -> Result<CountResult> {
    let mut n1 = cfg.inertia_grid_points.max((2.0 * half_length / 0.02) as usize);
    let count_at = |n1: usize| -> Result<usize> {
        let grid = LatticeGrid::new(n1, 1, half_length).with_cap(cfg.factorization_cap);
        let op = assemble_fiber(flux, k, w, &grid)?;
        Ok(count_negative_inertia(&op, cfg)?.negative)
    };
    let mut ladder = vec![count_at(n1)?];
    while 2 * n1 <= cfg.factorization_cap {
        n1 *= 2;
        ladder.push(count_at(n1)?);
        let m = ladder.len();
        if ladder[m - 1] == ladder[m - 2] {
            return Ok(CountResult {
                count: ladder[m - 1],
                borderline: Vec::new(),
                method: CountMethod::Lattice,
                resolution: Resolution {
                    step_factor: None,
                    grid_points: Some(n1),
                    ladder,
                },
                per_mode: None,
            });
        }
    }
    Err(Error::NonConvergence { counts: ladder })
}

// ---------------------------------------------------------------------------
// Diamagnetic checks
// ---------------------------------------------------------------------------

/// Smallest eigenvalues `(e0_magnetic, e0_plain)` of the Peierls operator at
/// `flux` and at zero flux, same `W` and grid.
pub fn diamagnetic_check(
    flux: &FluxSpec,
    w: &Profile1D,
    geometry: &StripGeometry,
    grid: &LatticeGrid,
    cfg: &SolverConfig,
) -> Result<(f64, f64)> {
    let magnetic = assemble_peierls(flux, w, geometry, grid)?;
    let plain = assemble_peierls(&reduced_flux(0.0), w, geometry, grid)?;
    Ok((smallest_eigenvalue(&magnetic, cfg)?, smallest_eigenvalue(&plain, cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseDiamagnetic {
    /// Grid spacings, coarse then fine.
    pub spacing: [f64; 2],
    /// `max (|∇|f|| - |(-i∇ + A) f|)` at each spacing; positive means violated.
    pub max_violation: [f64; 2],
    pub holds: bool,
}

fn pointwise_margin<F>(f: &F, phi: f64, geometry: &StripGeometry, half_length: f64, n: usize, h: f64) -> f64
where
    F: Fn(f64, f64) -> Complex64,
{
    let d = geometry.width;
    let mut worst = 0.0_f64;
    let i_unit = Complex64::new(0.0, 1.0);
    for i in 1..n {
        for j in 1..n {
            let x = -half_length + 2.0 * half_length * i as f64 / n as f64;
            let y = d * j as f64 / n as f64;
            let (fe, fw) = (f(x + h, y), f(x - h, y));
            let (fn_, fs) = (f(x, y + h), f(x, y - h));
            let g1 = (fe - fw) / (2.0 * h);
            let g2 = (fn_ - fs) / (2.0 * h);
            let a1 = (fe.norm() - fw.norm()) / (2.0 * h);
            let a2 = (fn_.norm() - fs.norm()) / (2.0 * h);
            let lhs = a1.hypot(a2);
            let rhs = (-i_unit * g1 + phi * f(x, y)).norm().hypot(g2.norm());
            worst = worst.max(lhs - rhs);
        }
    }
    worst
}

/// Discrete check of `|∇|f|| ≤ |(-i∇ + A) f|` with `A = (φ, 0)` on an
/// `n × n` sample of `[-L, L] × [0, d]`, using central differences with step
/// `h = min(2L, d)/n` and then `h/2` at the same points.
pub fn pointwise_diamagnetic_sample<F>(f: F, flux: &FluxSpec, geometry: &StripGeometry, half_length: f64, n: usize) -> PointwiseDiamagnetic
where
    F: Fn(f64, f64) -> Complex64,
{
    let h = (2.0 * half_length).min(geometry.width) / n as f64;
    let coarse = pointwise_margin(&f, flux.phi, geometry, half_length, n, h);
    let fine = pointwise_margin(&f, flux.phi, geometry, half_length, n, 0.5 * h);
    PointwiseDiamagnetic {
        spacing: [h, 0.5 * h],
        max_violation: [coarse, fine],
        holds: fine <= 1e-12 || fine < coarse,
    }
}

/// Seeded smooth complex field: a few Gaussian bumps with linear phases.
pub fn random_smooth_field(seed: u64, geometry: &StripGeometry) -> impl Fn(f64, f64) -> Complex64 + Send + Sync {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = geometry.width;
    let bumps: Vec<[f64; 7]> = (0..rng.random_range(2..=5))
        .map(|_| {
            [
                rng.random_range(0.2..2.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.0..d),
                rng.random_range(0.4..1.5),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(0.0..2.0 * PI),
            ]
        })
        .collect();
    move |x, y| {
        bumps
            .iter()
            .map(|&[a, x0, y0, s, k1, k2, p]| {
                let r2 = ((x - x0) * (x - x0) + (y - y0) * (y - y0)) / (s * s);
                Complex64::from_polar(a * (-r2).exp(), k1 * x + k2 * y + p)
            })
            .sum()
    }
}

/// Seeded `(flux, W)` pair for lattice experiments: `Ψ ∈ (0, 5)` and `W` a
/// sum of one to three Gaussian bumps.
pub fn random_lattice_config(seed: u64) -> (FluxSpec, Profile1D) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = rng.random_range(0.05..4.95);
    let bumps: Vec<(f64, f64, f64)> = (0..rng.random_range(1..=3))
        .map(|_| {
            (
                rng.random_range(0.5..6.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.3..1.5),
            )
        })
        .collect();
    let w = Profile1D::analytic(VariableRole::Line, move |x| {
        bumps
            .iter()
            .map(|&(a, x0, s)| a * (-((x - x0) / s).powi(2)).exp())
            .sum()
    });
    (reduced_flux(psi), w)
}
