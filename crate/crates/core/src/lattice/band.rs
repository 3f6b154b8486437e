//! Real symmetric band matrices and their inertia by `LDLᵀ` without pivoting.

use crate::error::{Error, Result};

/// Symmetric matrix with half-bandwidth `b`, lower triangle stored by rows:
/// `lower[i * (b + 1) + d] = A[i][i - d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    b: usize,
    lower: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, b: usize) -> Self {
        Self {
            n,
            b,
            lower: vec![0.0; n * (b + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    /// `A[i][j]` for `j ≤ i`; zero outside the band.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        let d = i - j;
        if d > self.b {
            0.0
        } else {
            self.lower[i * (self.b + 1) + d]
        }
    }

    /// Sets `A[i][j] = A[j][i] = v`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        let d = i - j;
        assert!(d <= self.b, "entry ({i}, {j}) outside half-bandwidth {}", self.b);
        self.lower[i * (self.b + 1) + d] = v;
    }

    fn scale(&self) -> f64 {
        self.lower.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Number of eigenvalues below `sigma`, from the pivot signs of
    /// `A - σI = L D Lᵀ`. Tiny pivots or multiplier growth are reported as
    /// breakdown so the caller can fall back to an eigensolver.
    pub fn count_below(&self, sigma: f64) -> Result<usize> {
        let (n, b) = (self.n, self.b);
        let scale = self.scale().max(sigma.abs()).max(f64::MIN_POSITIVE);
        let tiny = 1e-13 * scale;
        // l[i * b + (d - 1)] = L[i][i - d], d = 1..=b
        let mut l = vec![0.0; n * b.max(1)];
        let mut dg = vec![0.0; n];
        let mut w = vec![0.0; b + 1];
        let mut negative = 0;
        for i in 0..n {
            let j0 = i.saturating_sub(b);
            // w[j - j0] = L[i][j] * D[j]
            for j in j0..i {
                let mut s = self.get(i, j);
                let k0 = j0.max(j.saturating_sub(b));
                for k in k0..j {
                    s -= w[k - j0] * l[j * b + (j - k - 1)];
                }
                w[j - j0] = s;
                let lij = s / dg[j];
                if !lij.is_finite() || lij.abs() > 1e8 {
                    return Err(Error::FactorizationBreakdown { index: j, pivot: dg[j] });
                }
                l[i * b + (i - j - 1)] = lij;
            }
            let mut d = self.get(i, i) - sigma;
            for j in j0..i {
                d -= w[j - j0] * l[i * b + (i - j - 1)];
            }
            if !d.is_finite() || d.abs() < tiny {
                return Err(Error::FactorizationBreakdown { index: i, pivot: d });
            }
            dg[i] = d;
            if d < 0.0 {
                negative += 1;
            }
        }
        Ok(negative)
    }
}
