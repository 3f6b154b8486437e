//! Numerical knobs shared by the counters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub quadrature: QuadratureConfig,
    /// Ceiling on the Prüfer step before the local `0.1/√(1+|q-λ|)` rule.
    pub prufer_max_step: f64,
    /// Step halvings allowed after the first run.
    pub refinement_levels: usize,
    /// Starting size of the 1D finite-difference grid.
    pub inertia_grid_points: usize,
    /// Largest 1D grid tried while doubling.
    pub inertia_max_points: usize,
    pub bisection_tolerance: f64,
    /// Unknowns allowed in a banded lattice factorization.
    pub factorization_cap: usize,
    /// Unknowns allowed in a dense eigensolve.
    pub eigensolve_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            prufer_max_step: 0.05,
            refinement_levels: 3,
            inertia_grid_points: 4000,
            inertia_max_points: 1 << 21,
            bisection_tolerance: 1e-10,
            factorization_cap: 200_000,
            eigensolve_cap: 5_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        let bad = |what: &str| Err(Error::InvalidParams(what.to_string()));
        if !(self.prufer_max_step > 0.0) {
            return bad("prufer_max_step must be positive");
        }
        if self.refinement_levels < 1 {
            return bad("refinement_levels must be at least 1");
        }
        if self.inertia_grid_points < 16 {
            return bad("inertia_grid_points must be at least 16");
        }
        if self.inertia_max_points < self.inertia_grid_points {
            return bad("inertia_max_points must be >= inertia_grid_points");
        }
        if !(self.bisection_tolerance > 0.0) {
            return bad("bisection_tolerance must be positive");
        }
        Ok(())
    }
}
