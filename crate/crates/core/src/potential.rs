//! Strip geometry, electric potentials and their width-wise supremum profile.
//!
//! The bound only sees a potential `V(x1, x2)` through
//! `W(x1) = sup_{0 < x2 <= d} V(x1, x2)` and the mixed norm
//! `‖V‖_X = ∫ W(x1) dx1`. Potentials are restricted to piecewise continuous
//! nonnegative functions so the supremum is a maximum and can be found by
//! dyadic sampling across the width.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripGeometry {
    pub width: f64,
}

impl StripGeometry {
    pub fn new(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "strip width must be positive, got {width}"
            )));
        }
        Ok(Self { width })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableRole {
    /// Coordinate `x1` along the strip; integrals use `dx1`.
    Line,
    /// Radial coordinate `r`; integrals use `r dr`.
    Radial,
}

/// Piecewise-linear samples, zero outside `[xs[0], xs[last]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    xs: Vec<f64>,
    values: Vec<f64>,
    uniform: Option<(f64, f64)>,
}

impl SampledProfile {
    fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if xs.len() != values.len() {
            return Err(Error::InvalidParams(format!(
                "{} abscissae but {} values",
                xs.len(),
                values.len()
            )));
        }
        check_increasing(&xs)?;
        for (&x, &v) in xs.iter().zip(&values) {
            if !(v >= 0.0) {
                return Err(Error::NegativeValue {
                    x1: x,
                    x2: f64::NAN,
                    value: v,
                });
            }
        }
        let uniform = if xs.len() >= 2 {
            let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
            let is_uniform = xs
                .iter()
                .enumerate()
                .all(|(i, &x)| (x - (xs[0] + i as f64 * h)).abs() <= 1e-9 * h);
            is_uniform.then_some((xs[0], h))
        } else {
            None
        };
        Ok(Self {
            xs,
            values,
            uniform,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return if x == self.xs[0] { self.values[0] } else { 0.0 };
        }
        if x < self.xs[0] || x > self.xs[n - 1] || x.is_nan() {
            return 0.0;
        }
        let i = match self.uniform {
            Some((x0, h)) => (((x - x0) / h) as usize).min(n - 2),
            None => match self.xs.partition_point(|&p| p <= x) {
                0 => 0,
                p => (p - 1).min(n - 2),
            },
        };
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// Exact integral of the interpolant.
    fn trapezoid(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
            .sum()
    }
}

#[derive(Clone)]
pub enum ProfileKind {
    Analytic(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Sampled(SampledProfile),
}

/// A nonnegative one-dimensional profile: `W(x1)` along the strip or a
/// radial profile `Q(r)`.
#[derive(Clone)]
pub struct Profile1D {
    kind: ProfileKind,
    role: VariableRole,
    support: Option<(f64, f64)>,
}

impl fmt::Debug for Profile1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            ProfileKind::Analytic(_) => "analytic".to_string(),
            ProfileKind::Sampled(s) => format!("sampled[{}]", s.xs.len()),
        };
        f.debug_struct("Profile1D")
            .field("kind", &kind)
            .field("role", &self.role)
            .field("support", &self.support)
            .finish()
    }
}

impl Profile1D {
    pub fn analytic<F>(role: VariableRole, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            kind: ProfileKind::Analytic(Arc::new(f)),
            role,
            support: None,
        }
    }

    pub fn zero(role: VariableRole) -> Self {
        Self::analytic(role, |_| 0.0).with_support(0.0, 0.0)
    }

    pub fn sampled(role: VariableRole, xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let s = SampledProfile::new(xs, values)?;
        let support = Some((s.xs[0], s.xs[s.xs.len() - 1]));
        Ok(Self {
            kind: ProfileKind::Sampled(s),
            role,
            support,
        })
    }

    /// Declares that the profile vanishes outside `[a, b]`.
    pub fn with_support(mut self, a: f64, b: f64) -> Self {
        self.support = Some((a.min(b), a.max(b)));
        self
    }

    pub fn role(&self) -> VariableRole {
        self.role
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn as_sampled(&self) -> Option<&SampledProfile> {
        match &self.kind {
            ProfileKind::Sampled(s) => Some(s),
            ProfileKind::Analytic(_) => None,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            ProfileKind::Analytic(f) => {
                if let Some((a, b)) = self.support {
                    if x < a || x > b {
                        return 0.0;
                    }
                }
                f(x)
            }
            ProfileKind::Sampled(s) => s.eval(x),
        }
    }

    /// `λ · W`, with `λ ≥ 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        let kind = match &self.kind {
            ProfileKind::Analytic(f) => {
                let f = Arc::clone(f);
                ProfileKind::Analytic(Arc::new(move |x| factor * f(x)))
            }
            ProfileKind::Sampled(s) => ProfileKind::Sampled(SampledProfile {
                xs: s.xs.clone(),
                values: s.values.iter().map(|v| factor * v).collect(),
                uniform: s.uniform,
            }),
        };
        Self {
            kind,
            role: self.role,
            support: self.support,
        }
    }

    /// Samples the profile at the given abscissae.
    pub fn resample(&self, xs: Vec<f64>) -> Result<Self> {
        let values = xs.iter().map(|&x| self.eval(x)).collect();
        Self::sampled(self.role, xs, values)
    }

    /// Largest value on a uniform `samples`-point grid of `[a, b]`
    /// (plus every node of a sampled profile inside it).
    pub fn max_on(&self, a: f64, b: f64, samples: usize) -> f64 {
        let n = samples.max(2);
        let mut m = (0..n)
            .map(|i| self.eval(a + (b - a) * i as f64 / (n - 1) as f64))
            .fold(0.0_f64, f64::max);
        if let ProfileKind::Sampled(s) = &self.kind {
            for (&x, &v) in s.xs.iter().zip(&s.values) {
                if x >= a && x <= b {
                    m = m.max(v);
                }
            }
        }
        m
    }
}

/// Analytic potential families with closed-form `‖V‖_X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `a·exp(-((x1-c)/σ)²)·(1 - t + t·x2/d)`, `t ∈ [0, 1]`; `‖V‖_X = a·σ·√π`.
    GaussianRidge {
        amplitude: f64,
        width: f64,
        center: f64,
        tilt: f64,
    },
    /// `a` on `[x1_min, x1_max] × [x2_min, x2_max]`; `‖V‖_X = a·(x1_max - x1_min)`.
    SquarePatch {
        amplitude: f64,
        x1_min: f64,
        x1_max: f64,
        x2_min: Option<f64>,
        x2_max: Option<f64>,
    },
    /// `D·sech²((x1-c)/w)`; `‖V‖_X = 2·D·w`.
    Sech2Ridge { depth: f64, width: f64, center: f64 },
    /// `a·exp(-((x1-c)/σ)²)·(1 + cos(nπx2/d))/2`; `‖V‖_X = a·σ·√π`.
    SeparableProduct {
        amplitude: f64,
        width: f64,
        center: f64,
        modes: f64,
    },
}

impl Family {
    fn value(&self, x1: f64, x2: f64, geometry: &StripGeometry) -> f64 {
        let d = geometry.width;
        match *self {
            Family::GaussianRidge {
                amplitude,
                width,
                center,
                tilt,
            } => {
                let s = (x1 - center) / width;
                amplitude * (-s * s).exp() * (1.0 - tilt + tilt * x2 / d)
            }
            Family::SquarePatch {
                amplitude,
                x1_min,
                x1_max,
                x2_min,
                x2_max,
            } => {
                let lo = x2_min.unwrap_or(0.0);
                let hi = x2_max.unwrap_or(d);
                if x1 >= x1_min && x1 <= x1_max && x2 >= lo && x2 <= hi {
                    amplitude
                } else {
                    0.0
                }
            }
            Family::Sech2Ridge {
                depth,
                width,
                center,
            } => {
                let c = ((x1 - center) / width).cosh();
                depth / (c * c)
            }
            Family::SeparableProduct {
                amplitude,
                width,
                center,
                modes,
            } => {
                let s = (x1 - center) / width;
                let transverse = 0.5 * (1.0 + (modes * std::f64::consts::PI * x2 / d).cos());
                amplitude * (-s * s).exp() * transverse
            }
        }
    }

    pub fn closed_form_norm_x(&self) -> f64 {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        match *self {
            Family::GaussianRidge {
                amplitude, width, ..
            }
            | Family::SeparableProduct {
                amplitude, width, ..
            } => amplitude * width * sqrt_pi,
            Family::SquarePatch {
                amplitude,
                x1_min,
                x1_max,
                x2_min,
                x2_max,
            } => {
                let empty = matches!((x2_min, x2_max), (Some(a), Some(b)) if b < a);
                if empty {
                    0.0
                } else {
                    amplitude * (x1_max - x1_min)
                }
            }
            Family::Sech2Ridge { depth, width, .. } => 2.0 * depth * width,
        }
    }

    fn support_hint(&self) -> Option<(f64, f64)> {
        match *self {
            Family::SquarePatch { x1_min, x1_max, .. } => Some((x1_min, x1_max)),
            _ => None,
        }
    }

    /// Breakpoints of `x1 ↦ V` where the integrand jumps.
    fn kinks(&self) -> Vec<f64> {
        match *self {
            Family::SquarePatch { x1_min, x1_max, .. } => vec![x1_min, x1_max],
            Family::GaussianRidge { center, .. }
            | Family::Sech2Ridge { center, .. }
            | Family::SeparableProduct { center, .. } => vec![center],
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            Family::GaussianRidge { width, .. }
            | Family::SeparableProduct { width, .. }
            | Family::Sech2Ridge { width, .. } => width.abs(),
            Family::SquarePatch { x1_min, x1_max, .. } => (x1_max - x1_min).abs(),
        }
    }
}

/// Potential sampled on a rectangular `(x1, x2)` grid, bilinearly
/// interpolated and zero outside the `x1` range.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    x1: Vec<f64>,
    x2: Vec<f64>,
    /// row-major, `values[i1 * x2.len() + i2]`
    values: Vec<f64>,
}

impl SampledPotential {
    pub fn new(x1: Vec<f64>, x2: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if x1.is_empty() || x2.is_empty() {
            return Err(Error::EmptyGrid);
        }
        check_increasing(&x1)?;
        check_increasing(&x2)?;
        if values.len() != x1.len() * x2.len() {
            return Err(Error::InvalidParams(format!(
                "grid {}x{} needs {} values, got {}",
                x1.len(),
                x2.len(),
                x1.len() * x2.len(),
                values.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(Error::NegativeValue {
                    x1: x1[i / x2.len()],
                    x2: x2[i % x2.len()],
                    value: v,
                });
            }
        }
        Ok(Self { x1, x2, values })
    }

    /// Reads a CSV with header `x1,x2,value` describing a full rectangular grid.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path.as_ref())?;
        let headers = reader.headers()?.clone();
        let names: Vec<&str> = headers.iter().map(str::trim).collect();
        if names != ["x1", "x2", "value"] {
            return Err(Error::Config(format!(
                "potential CSV header must be x1,x2,value, got {}",
                names.join(",")
            )));
        }
        let mut triples = Vec::new();
        for record in reader.records() {
            let record = record?;
            let parse = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("bad CSV field in record {record:?}")))
            };
            triples.push((parse(0)?, parse(1)?, parse(2)?));
        }
        Self::from_triples(&triples)
    }

    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        let mut x1: Vec<f64> = triples.iter().map(|t| t.0).collect();
        let mut x2: Vec<f64> = triples.iter().map(|t| t.1).collect();
        x1.sort_by(f64::total_cmp);
        x1.dedup();
        x2.sort_by(f64::total_cmp);
        x2.dedup();
        let (n1, n2) = (x1.len(), x2.len());
        if n1 * n2 != triples.len() {
            return Err(Error::Config(format!(
                "potential CSV is not a rectangular grid ({} rows for {n1}x{n2} nodes)",
                triples.len()
            )));
        }
        let mut values = vec![f64::NAN; n1 * n2];
        for &(a, b, v) in triples {
            let i = x1.binary_search_by(|p| p.total_cmp(&a)).unwrap_or(0);
            let j = x2.binary_search_by(|p| p.total_cmp(&b)).unwrap_or(0);
            values[i * n2 + j] = v;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Config("potential CSV has duplicate grid nodes".into()));
        }
        Self::new(x1, x2, values)
    }

    fn value(&self, x1: f64, x2: f64) -> f64 {
        let (n1, n2) = (self.x1.len(), self.x2.len());
        if x1 < self.x1[0] || x1 > self.x1[n1 - 1] {
            return 0.0;
        }
        let locate = |grid: &[f64], x: f64| -> (usize, f64) {
            if grid.len() == 1 {
                return (0, 0.0);
            }
            let x = x.clamp(grid[0], grid[grid.len() - 1]);
            let i = grid.partition_point(|&p| p <= x).saturating_sub(1).min(grid.len() - 2);
            (i, (x - grid[i]) / (grid[i + 1] - grid[i]))
        };
        let (i, s) = locate(&self.x1, x1);
        let (j, t) = locate(&self.x2, x2);
        let at = |a: usize, b: usize| self.values[a.min(n1 - 1) * n2 + b.min(n2 - 1)];
        (1.0 - s) * ((1.0 - t) * at(i, j) + t * at(i, j + 1))
            + s * ((1.0 - t) * at(i + 1, j) + t * at(i + 1, j + 1))
    }

    pub fn x1_nodes(&self) -> &[f64] {
        &self.x1
    }

    pub fn x2_nodes(&self) -> &[f64] {
        &self.x2
    }
}

/// Nonnegative electric potential on the strip `ℝ × (0, d)`.
#[derive(Clone)]
pub enum Potential2D {
    Family(Family),
    Sampled(SampledPotential),
    Custom {
        f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        support_hint: Option<(f64, f64)>,
    },
}

impl fmt::Debug for Potential2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential2D::Family(fam) => f.debug_tuple("Family").field(fam).finish(),
            Potential2D::Sampled(s) => f
                .debug_struct("Sampled")
                .field("n1", &s.x1.len())
                .field("n2", &s.x2.len())
                .finish(),
            Potential2D::Custom { support_hint, .. } => f
                .debug_struct("Custom")
                .field("support_hint", support_hint)
                .finish(),
        }
    }
}

impl Potential2D {
    pub fn custom<F>(f: F, support_hint: Option<(f64, f64)>) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Potential2D::Custom {
            f: Arc::new(f),
            support_hint,
        }
    }

    pub fn zero() -> Self {
        Potential2D::custom(|_, _| 0.0, Some((0.0, 0.0)))
    }

    pub fn value(&self, x1: f64, x2: f64, geometry: &StripGeometry) -> f64 {
        match self {
            Potential2D::Family(fam) => fam.value(x1, x2, geometry),
            Potential2D::Sampled(s) => s.value(x1, x2),
            Potential2D::Custom { f, support_hint } => match support_hint {
                Some((a, b)) if x1 < *a || x1 > *b => 0.0,
                _ => f(x1, x2),
            },
        }
    }

    pub fn support_hint(&self) -> Option<(f64, f64)> {
        match self {
            Potential2D::Family(fam) => fam.support_hint(),
            Potential2D::Sampled(s) => Some((s.x1[0], s.x1[s.x1.len() - 1])),
            Potential2D::Custom { support_hint, .. } => *support_hint,
        }
    }

    pub fn closed_form_norm_x(&self) -> Option<f64> {
        match self {
            Potential2D::Family(fam) => Some(fam.closed_form_norm_x()),
            _ => None,
        }
    }

    /// `sup_{x2 ∈ [0, d]} V(x1, x2)` by dyadic refinement of the `x2` sample.
    ///
    /// Refinement stops once two successive maxima agree to
    /// `relative_tolerance` (after at least five levels, 33 points).
    pub fn width_sup(&self, x1: f64, geometry: &StripGeometry, quad: &QuadratureConfig) -> Result<f64> {
        const MIN_LEVEL: u32 = 5;
        const MAX_LEVEL: u32 = 16;
        let d = geometry.width;
        let sample = |x2: f64| -> Result<f64> {
            let v = self.value(x1, x2, geometry);
            if v >= 0.0 {
                Ok(v)
            } else {
                Err(Error::NegativeValue { x1, x2, value: v })
            }
        };
        let mut best = sample(0.0)?.max(sample(d)?);
        if let Potential2D::Sampled(s) = self {
            for &x2 in &s.x2 {
                if (0.0..=d).contains(&x2) {
                    best = best.max(sample(x2)?);
                }
            }
        }
        let mut previous = best;
        for level in 1..=MAX_LEVEL {
            let intervals = 1u64 << level;
            // only the new odd-indexed midpoints
            for i in (1..intervals).step_by(2) {
                best = best.max(sample(d * i as f64 / intervals as f64)?);
            }
            if level >= MIN_LEVEL && (best - previous).abs() <= quad.relative_tolerance * best.abs() {
                break;
            }
            previous = best;
        }
        Ok(best)
    }

    /// Lazily evaluated `W` profile, used for norm evaluation by adaptive
    /// quadrature. Negative samples surface as NaN and fail the quadrature.
    pub fn sup_profile(&self, geometry: StripGeometry, quad: QuadratureConfig) -> Profile1D {
        let v = self.clone();
        let profile = Profile1D::analytic(VariableRole::Line, move |x1| {
            v.width_sup(x1, &geometry, &quad).unwrap_or(f64::NAN)
        });
        match self.support_hint() {
            Some((a, b)) => profile.with_support(a, b),
            None => profile,
        }
    }

    fn length_scale(&self) -> f64 {
        match self {
            Potential2D::Family(fam) => fam.scale(),
            _ => 1.0,
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match self {
            Potential2D::Family(fam) => fam.kinks(),
            _ => Vec::new(),
        }
    }
}

fn check_increasing(xs: &[f64]) -> Result<()> {
    for (i, w) in xs.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::UnorderedGrid(i + 1));
        }
    }
    Ok(())
}

/// Builds one of the analytic families by name.
///
/// | name                | parameters (defaults)                                   |
/// |---------------------|---------------------------------------------------------|
/// | `gaussian_ridge`    | `amplitude`, `width` (1), `center` (0), `tilt` (0)       |
/// | `square_patch`      | `amplitude`, `x1_min`, `x1_max`, `x2_min`, `x2_max`     |
/// | `sech2_ridge`       | `depth`, `width` (1), `center` (0)                      |
/// | `separable_product` | `amplitude`, `width` (1), `center` (0), `modes` (1)     |
pub fn builtin_family(name: &str, params: &BTreeMap<String, f64>) -> Result<Potential2D> {
    let allowed: &[&str] = match name {
        "gaussian_ridge" => &["amplitude", "width", "center", "tilt"],
        "square_patch" => &["amplitude", "x1_min", "x1_max", "x2_min", "x2_max"],
        "sech2_ridge" => &["depth", "width", "center"],
        "separable_product" => &["amplitude", "width", "center", "modes"],
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidParams(format!(
            "{name} does not take parameter '{bad}' (allowed: {})",
            allowed.join(", ")
        )));
    }
    if let Some((k, v)) = params.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidParams(format!("{name}.{k} = {v} is not finite")));
    }
    let get = |key: &str, default: Option<f64>| -> Result<f64> {
        params
            .get(key)
            .copied()
            .or(default)
            .ok_or_else(|| Error::InvalidParams(format!("{name} requires '{key}'")))
    };
    let nonneg = |key: &str, v: f64| -> Result<f64> {
        if v < 0.0 {
            Err(Error::InvalidParams(format!("{name}.{key} must be >= 0, got {v}")))
        } else {
            Ok(v)
        }
    };
    let positive = |key: &str, v: f64| -> Result<f64> {
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::InvalidParams(format!("{name}.{key} must be > 0, got {v}")))
        }
    };
    let family = match name {
        "gaussian_ridge" => {
            let tilt = get("tilt", Some(0.0))?;
            if !(0.0..=1.0).contains(&tilt) {
                return Err(Error::InvalidParams(format!(
                    "gaussian_ridge.tilt must lie in [0, 1], got {tilt}"
                )));
            }
            Family::GaussianRidge {
                amplitude: nonneg("amplitude", get("amplitude", None)?)?,
                width: positive("width", get("width", Some(1.0))?)?,
                center: get("center", Some(0.0))?,
                tilt,
            }
        }
        "square_patch" => {
            let x1_min = get("x1_min", None)?;
            let x1_max = get("x1_max", None)?;
            if x1_max < x1_min {
                return Err(Error::InvalidParams(format!(
                    "square_patch needs x1_min <= x1_max, got [{x1_min}, {x1_max}]"
                )));
            }
            Family::SquarePatch {
                amplitude: nonneg("amplitude", get("amplitude", None)?)?,
                x1_min,
                x1_max,
                x2_min: params.get("x2_min").copied(),
                x2_max: params.get("x2_max").copied(),
            }
        }
        "sech2_ridge" => Family::Sech2Ridge {
            depth: nonneg("depth", get("depth", None)?)?,
            width: positive("width", get("width", Some(1.0))?)?,
            center: get("center", Some(0.0))?,
        },
        "separable_product" => Family::SeparableProduct {
            amplitude: nonneg("amplitude", get("amplitude", None)?)?,
            width: positive("width", get("width", Some(1.0))?)?,
            center: get("center", Some(0.0))?,
            modes: nonneg("modes", get("modes", Some(1.0))?)?,
        },
        _ => unreachable!(),
    };
    Ok(Potential2D::Family(family))
}

/// Samples `W(x1) = sup_{x2} V(x1, x2)` on `x1_grid`.
pub fn sup_over_width(
    v: &Potential2D,
    geometry: &StripGeometry,
    x1_grid: &[f64],
    quad: &QuadratureConfig,
) -> Result<Profile1D> {
    if x1_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_increasing(x1_grid)?;
    let values = x1_grid
        .iter()
        .map(|&x1| v.width_sup(x1, geometry, quad))
        .collect::<Result<Vec<_>>>()?;
    Profile1D::sampled(VariableRole::Line, x1_grid.to_vec(), values)
}

/// `‖W‖ = ∫_ℝ W(x1) dx1`.
///
/// Sampled profiles are integrated exactly (piecewise linear). Analytic
/// profiles use adaptive quadrature over their support, or over `[-L, L]`
/// with `L` doubled until the added tail falls below the absolute tolerance.
pub fn norm_x(w: &Profile1D, quad: &QuadratureConfig) -> Result<f64> {
    norm_x_with_hints(w, quad, 8.0, &[])
}

/// [`norm_x`] for the width supremum of a potential, seeding the truncation
/// and breakpoints from the potential's own scales.
pub fn norm_x_of_potential(v: &Potential2D, geometry: StripGeometry, quad: &QuadratureConfig) -> Result<f64> {
    let w = v.sup_profile(geometry, *quad);
    norm_x_with_hints(&w, quad, 8.0 * v.length_scale().max(1.0), &v.kinks())
}

fn norm_x_with_hints(w: &Profile1D, quad: &QuadratureConfig, initial_half_width: f64, kinks: &[f64]) -> Result<f64> {
    quad.validate()?;
    if w.role() != VariableRole::Line {
        return Err(Error::InvalidParams(
            "norm_X is defined for line profiles W(x1)".into(),
        ));
    }
    if let ProfileKind::Sampled(s) = w.kind() {
        return Ok(s.trapezoid().max(0.0));
    }
    let f = |x: f64| w.eval(x);
    let breaks_in = |a: f64, b: f64| -> Vec<f64> {
        let mut pts = vec![a];
        pts.extend(kinks.iter().copied().filter(|&k| k > a && k < b));
        pts.push(b);
        pts
    };
    if let Some((a, b)) = w.support() {
        let est = quadrature::integrate_with_breaks(f, &breaks_in(a, b), quad)?;
        return Ok(est.value.max(0.0));
    }
    let mut half = initial_half_width;
    let mut total = quadrature::integrate_with_breaks(f, &breaks_in(-half, half), quad)?.value;
    for _ in 0..24 {
        let right = quadrature::integrate_with_breaks(f, &breaks_in(half, 2.0 * half), quad)?.value;
        let left = quadrature::integrate_with_breaks(f, &breaks_in(-2.0 * half, -half), quad)?.value;
        total += left + right;
        half *= 2.0;
        if (left + right).abs() < quad.absolute_tolerance {
            return Ok(total.max(0.0));
        }
    }
    Err(Error::QuadratureFailure {
        subdivisions: quad.max_subdivisions,
        estimate: total,
        error: f64::INFINITY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> StripGeometry {
        StripGeometry::new(1.5).unwrap()
    }

    fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn zero_potential_has_zero_profile() {
        let quad = QuadratureConfig::default();
        let w = sup_over_width(&Potential2D::zero(), &geom(), &grid(-3.0, 3.0, 13), &quad).unwrap();
        assert!(w.as_sampled().unwrap().values().iter().all(|&v| v == 0.0));
        assert_eq!(norm_x(&w, &quad).unwrap(), 0.0);
    }

    #[test]
    fn tilted_gaussian_peaks_at_far_wall() {
        let g = geom();
        let d = g.width;
        let v = Potential2D::custom(move |x1, x2| (-x1 * x1).exp() * (1.0 + x2 / d), None);
        let quad = QuadratureConfig::default();
        let xs = grid(-2.0, 2.0, 21);
        let w = sup_over_width(&v, &g, &xs, &quad).unwrap();
        for (&x, &wv) in xs.iter().zip(w.as_sampled().unwrap().values()) {
            // dense x2 sampling as the check
            let dense = (0..=4000)
                .map(|j| v.value(x, d * j as f64 / 4000.0, &g))
                .fold(0.0_f64, f64::max);
            assert!((wv - 2.0 * (-x * x).exp()).abs() < 1e-12);
            assert!(wv >= dense - 1e-15);
        }
    }

    #[test]
    fn x2_independent_patch_is_indicator() {
        let quad = QuadratureConfig::default();
        let v = builtin_family(
            "square_patch",
            &params(&[("amplitude", 1.0), ("x1_min", 0.0), ("x1_max", 1.0)]),
        )
        .unwrap();
        let xs = grid(-1.0, 2.0, 31);
        let w = sup_over_width(&v, &geom(), &xs, &quad).unwrap();
        for (&x, &wv) in xs.iter().zip(w.as_sampled().unwrap().values()) {
            let expect = if (0.0..=1.0).contains(&x) { 1.0 } else { 0.0 };
            assert_eq!(wv, expect, "x1 = {x}");
        }
        let n = norm_x_of_potential(&v, geom(), &quad).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_of_gaussian_profile() {
        let quad = QuadratureConfig::default();
        let w = Profile1D::analytic(VariableRole::Line, |x| 2.0 * (-x * x).exp());
        let n = norm_x(&w, &quad).unwrap();
        assert!((n - 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-9);
        assert!((n - 3.544_907_7).abs() < 1e-7);
    }

    #[test]
    fn indicator_norm_is_length() {
        let quad = QuadratureConfig::default();
        let w = Profile1D::analytic(VariableRole::Line, |_| 1.0).with_support(0.0, 1.0);
        assert!((norm_x(&w, &quad).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(norm_x(&Profile1D::zero(VariableRole::Line), &quad).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_family_norm_matches_closed_form() {
        let quad = QuadratureConfig::default();
        for &(a, s) in &[(1.0, 1.0), (3.0, 0.4), (0.7, 2.5)] {
            let v = builtin_family("gaussian_ridge", &params(&[("amplitude", a), ("width", s), ("tilt", 0.5)]))
                .unwrap();
            let n = norm_x_of_potential(&v, geom(), &quad).unwrap();
            let exact = a * s * std::f64::consts::PI.sqrt();
            assert!((n - exact).abs() < 1e-8 * exact, "{n} vs {exact}");
            assert_eq!(v.closed_form_norm_x(), Some(exact));
        }
    }

    #[test]
    fn sech2_family_profile() {
        let quad = QuadratureConfig::default();
        let g = geom();
        let v = builtin_family("sech2_ridge", &params(&[("depth", 12.0)])).unwrap();
        for &x in &[-3.0, -0.5, 0.0, 1.25, 4.0] {
            let w = v.width_sup(x, &g, &quad).unwrap();
            let dense = (0..=1000)
                .map(|j| v.value(x, g.width * j as f64 / 1000.0, &g))
                .fold(0.0_f64, f64::max);
            assert!((w - 12.0 / x.cosh().powi(2)).abs() < 1e-12);
            assert!((w - dense).abs() < 1e-12);
        }
        let n = norm_x_of_potential(&v, g, &quad).unwrap();
        assert!((n - 24.0).abs() < 1e-8);
    }

    #[test]
    fn separable_product_attains_max_at_wall() {
        let quad = QuadratureConfig::default();
        let g = geom();
        let v = builtin_family("separable_product", &params(&[("amplitude", 2.0), ("modes", 3.0)])).unwrap();
        let w = v.width_sup(0.3, &g, &quad).unwrap();
        assert!((w - 2.0 * (-0.09_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn family_errors() {
        assert!(matches!(
            builtin_family("lorentzian", &params(&[])),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            builtin_family("gaussian_ridge", &params(&[("amplitude", -1.0)])),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            builtin_family("sech2_ridge", &params(&[("depth", 1.0), ("sigma", 1.0)])),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn negative_and_empty_inputs_rejected() {
        let quad = QuadratureConfig::default();
        let v = Potential2D::custom(|x1, _| x1, None);
        assert!(matches!(
            sup_over_width(&v, &geom(), &[-1.0, 1.0], &quad),
            Err(Error::NegativeValue { .. })
        ));
        assert!(matches!(
            sup_over_width(&Potential2D::zero(), &geom(), &[], &quad),
            Err(Error::EmptyGrid)
        ));
        assert!(matches!(
            sup_over_width(&Potential2D::zero(), &geom(), &[1.0, 0.0], &quad),
            Err(Error::UnorderedGrid(1))
        ));
    }

    #[test]
    fn radial_profile_has_no_line_norm() {
        let w = Profile1D::zero(VariableRole::Radial);
        assert!(norm_x(&w, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn sampled_potential_bilinear_and_sup() {
        let triples: Vec<(f64, f64, f64)> = [0.0, 1.0, 2.0]
            .iter()
            .flat_map(|&a| [0.0, 0.75, 1.5].iter().map(move |&b| (a, b, a * (1.0 + b))))
            .collect();
        let s = SampledPotential::from_triples(&triples).unwrap();
        let v = Potential2D::Sampled(s);
        let g = geom();
        assert!((v.value(0.5, 0.75, &g) - 0.5 * 1.75).abs() < 1e-14);
        assert_eq!(v.value(-0.1, 0.5, &g), 0.0);
        let w = v.width_sup(1.0, &g, &QuadratureConfig::default()).unwrap();
        assert!((w - 2.5).abs() < 1e-14);
    }

    #[test]
    fn csv_loader_checks_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.csv");
        std::fs::write(&p, "x1,x2,value\n0,0,1\n0,1,2\n1,0,3\n1,1,4\n").unwrap();
        let s = SampledPotential::from_csv(&p).unwrap();
        assert_eq!(s.x1_nodes(), &[0.0, 1.0]);
        std::fs::write(&p, "a,b,c\n0,0,1\n").unwrap();
        assert!(SampledPotential::from_csv(&p).is_err());
        std::fs::write(&p, "x1,x2,value\n0,0,1\n0,1,2\n1,0,3\n").unwrap();
        assert!(SampledPotential::from_csv(&p).is_err());
    }
}
