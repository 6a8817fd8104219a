//! Truncated Hermite basis of the harmonic oscillator.

use crate::C64;

/// The first `size` Hermite modes; mode k is the eigenfunction of
/// `H0 = ½(−∂x² + x²)` with eigenvalue `k + ½`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteBasis {
    size: usize,
}

impl HermiteBasis {
    pub fn new(size: usize) -> Self {
        assert!(size >= 2, "basis needs at least two modes");
        HermiteBasis { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Eigenvalue of H0 on mode k.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        k as f64 + 0.5
    }

    /// Diagonal of H0.
    pub fn h0_diagonal(&self) -> Vec<f64> {
        (0..self.size).map(|k| self.eigenvalue(k)).collect()
    }

    /// Index above which the top 10% of modes live (truncation-edge guard).
    pub fn tail_start(&self) -> usize {
        (self.size as f64 * 0.9).floor() as usize
    }

    /// Interior block bound: modes below `0.9 N` are trusted; edge rows are
    /// diagnostics only.
    pub fn interior_end(&self) -> usize {
        self.tail_start()
    }
}

/// Values of the L²-orthonormal Hermite functions h_0..h_{m-1} at `x`.
///
/// Recurrence on the functions themselves; underflows gracefully far outside
/// the classically allowed region.
pub fn hermite_values(m: usize, x: f64) -> Vec<f64> {
    crate::quadrature::hermite_functions(m, x)
}

/// Matrix `H[k][g]` of Hermite function values on a grid (row per mode).
pub fn hermite_value_matrix(m: usize, grid: &[f64]) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0f64; grid.len()]; m];
    for (g, &x) in grid.iter().enumerate() {
        for (k, v) in hermite_values(m, x).into_iter().enumerate() {
            rows[k][g] = v;
        }
    }
    rows
}

/// Diagonal phases `e^{i τ (k + ½)}` of `e^{iτH0}` on the truncated basis.
pub fn h0_phases(basis: HermiteBasis, tau: f64) -> Vec<C64> {
    (0..basis.size())
        .map(|k| {
            let a = tau * basis.eigenvalue(k);
            C64::new(a.cos(), a.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermite_functions_are_orthonormal() {
        // ∫ h_j h_k over [-12, 12] with a composite rule
        let rule = gauss_legendre(32);
        let panels = 8;
        let width = 24.0 / panels as f64;
        let mut gram = [[0.0f64; 4]; 4];
        for p in 0..panels {
            let mid = -12.0 + (p as f64 + 0.5) * width;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let v = hermite_values(4, mid + 0.5 * width * x);
                for j in 0..4 {
                    for k in 0..4 {
                        gram[j][k] += w * 0.5 * width * v[j] * v[k];
                    }
                }
            }
        }
        for j in 0..4 {
            for k in 0..4 {
                let expect = if j == k { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(gram[j][k], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn ground_state_value() {
        let v = hermite_values(1, 0.0);
        assert_abs_diff_eq!(v[0], std::f64::consts::PI.powf(-0.25), epsilon = 1e-14);
    }
}
