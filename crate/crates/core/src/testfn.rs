//! Seeded test functions for the inequality checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunctionKind {
    /// Three to seven `C^∞` bumps `exp(-1/(1-t²))` inside the support.
    BumpSuperposition,
    /// `A·r^s/(1+r²)^t` on `(0, ∞)` with `s ≥ 1` and fast enough decay.
    PolynomialDecay,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    pub seed: u64,
    pub kind: TestFunctionKind,
    /// Closed support for bumps; ignored for polynomial decay.
    pub support: (f64, f64),
    /// Only nonnegative amplitudes.
    pub nonnegative: bool,
}

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function with its derivative, vanishing outside `support`.
#[derive(Clone)]
pub struct TestFunction {
    value: Func,
    derivative: Func,
    support: (f64, f64),
    breaks: Vec<f64>,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("support", &self.support)
            .field("breaks", &self.breaks)
            .finish()
    }
}

impl TestFunction {
    pub fn explicit<F, D>(value: F, derivative: D, support: (f64, f64)) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
            support,
            breaks: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::explicit(|_| 0.0, |_| 0.0, (0.0, 0.0))
    }

    /// Declares points where the function or its derivative is not smooth.
    pub fn with_breaks(mut self, breaks: Vec<f64>) -> Self {
        self.breaks = breaks;
        self
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        if x < self.support.0 || x > self.support.1 {
            0.0
        } else {
            (self.value)(x)
        }
    }

    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        if x < self.support.0 || x > self.support.1 {
            0.0
        } else {
            (self.derivative)(x)
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Support endpoints and interior breakpoints, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.support;
        let mut pts = vec![a];
        pts.extend(self.breaks.iter().copied().filter(|&x| x > a && x < b));
        if b > a {
            pts.push(b);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

fn bump_derivative(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        let s = 1.0 - t * t;
        bump(t) * (-2.0 * t / (s * s))
    }
}

impl TestFunctionSpec {
    pub fn bumps(seed: u64, support: (f64, f64), nonnegative: bool) -> Self {
        Self {
            seed,
            kind: TestFunctionKind::BumpSuperposition,
            support,
            nonnegative,
        }
    }

    pub fn polynomial_decay(seed: u64) -> Self {
        Self {
            seed,
            kind: TestFunctionKind::PolynomialDecay,
            support: (0.0, f64::INFINITY),
            nonnegative: true,
        }
    }

    pub fn generate(&self) -> Result<TestFunction> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match self.kind {
            TestFunctionKind::BumpSuperposition => {
                let (a, b) = self.support;
                if !(a.is_finite() && b.is_finite() && b > a) {
                    return Err(Error::InvalidParams(format!(
                        "bump support must be a finite interval, got ({a}, {b})"
                    )));
                }
                let count = rng.random_range(3..=7);
                let len = b - a;
                let bumps: Vec<(f64, f64, f64)> = (0..count)
                    .map(|_| {
                        let radius = rng.random_range(0.05..0.3) * len;
                        let center = rng.random_range(a + radius..b - radius);
                        let mut amp = rng.random_range(0.2..2.0);
                        if !self.nonnegative && rng.random_bool(0.5) {
                            amp = -amp;
                        }
                        (amp, center, radius)
                    })
                    .collect();
                let breaks = bumps.iter().flat_map(|&(_, c, r)| [c - r, c + r]).collect();
                let vb = bumps.clone();
                Ok(TestFunction::explicit(
                    move |x| vb.iter().map(|&(amp, c, r)| amp * bump((x - c) / r)).sum(),
                    move |x| bumps.iter().map(|&(amp, c, r)| amp * bump_derivative((x - c) / r) / r).sum(),
                    (a, b),
                )
                .with_breaks(breaks))
            }
            TestFunctionKind::PolynomialDecay => {
                let amp = rng.random_range(0.5..2.0);
                let s = rng.random_range(1.0..3.0);
                let t = s / 2.0 + rng.random_range(1.0..3.0);
                Ok(TestFunction::explicit(
                    move |r| amp * r.powf(s) * (1.0 + r * r).powf(-t),
                    move |r| {
                        let q = 1.0 + r * r;
                        amp * (s * r.powf(s - 1.0) * q.powf(-t) - 2.0 * t * r.powf(s + 1.0) * q.powf(-t - 1.0))
                    },
                    (0.0, f64::INFINITY),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bumps_vanish_at_endpoints_and_are_deterministic() {
        let spec = TestFunctionSpec::bumps(42, (0.0, 8.0), true);
        let f = spec.generate().unwrap();
        let g = spec.generate().unwrap();
        assert_eq!(f.value(0.0), 0.0);
        assert_eq!(f.value(8.0), 0.0);
        for i in 0..100 {
            let x = 0.08 * i as f64;
            assert_eq!(f.value(x).to_bits(), g.value(x).to_bits());
            assert!(f.value(x) >= 0.0);
        }
    }

    #[test]
    fn derivatives_match_differences() {
        for spec in [
            TestFunctionSpec::bumps(3, (0.0, 5.0), false),
            TestFunctionSpec::polynomial_decay(9),
        ] {
            let f = spec.generate().unwrap();
            for i in 1..40 {
                let x = 0.123 * i as f64;
                let h = 1e-6;
                let fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
                assert!((fd - f.derivative(x)).abs() < 1e-5 * (1.0 + fd.abs()), "{spec:?} at {x}");
            }
        }
    }

    #[test]
    fn bad_support_is_rejected() {
        assert!(TestFunctionSpec::bumps(0, (1.0, 1.0), true).generate().is_err());
    }
}
