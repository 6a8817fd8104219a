//! Independent quantization oracles.
//!
//! The production path computes band entries from Laguerre kernels in polar
//! coordinates. The oracle here never sees those: it discretizes the Weyl
//! integral kernel on a position grid with a uniform frequency lattice,
//!
//! `K(x, y) = (Δξ/2π) Σ_l f((x+y)/2, ξ_l) e^{i(x-y)ξ_l}`,
//!
//! and sandwiches it between numerically evaluated Hermite functions. Cost
//! O(N²·grid²); test sizes only.

use faer::Mat;

use crate::basis::{hermite_value_matrix, HermiteBasis};
use crate::operator::OperatorMatrix;
use crate::quadrature::{gauss_hermite_modified, gauss_legendre};
use crate::symbols::HarmonicSeries;
use crate::C64;

/// Discretization of the phase-space square for the oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleGrid {
    pub x_max: f64,
    pub n_x: usize,
    pub n_xi: usize,
    /// Frequencies below this pass unchanged; the window rolls off to zero
    /// at the lattice edge. S⁰ symbols decay only like 1/ξ along frequency,
    /// so a hard truncation would ring at the 1e-4 level; the smooth window
    /// changes the quantized symbol only where the basis has no mass.
    pub xi_pass: f64,
}

impl OracleGrid {
    /// Grid sized for a basis: the square contains the classically allowed
    /// region of the highest mode, the window passband covers the basis
    /// bandwidth, and the frequency lattice is fine enough that kernel
    /// periodization images sit a full domain width away.
    pub fn for_basis(basis: HermiteBasis) -> Self {
        let bandwidth = (2.0 * basis.size() as f64).sqrt();
        let x_max = bandwidth + 8.0;
        let xi_pass = bandwidth + 6.0;
        let xi_max = xi_pass + 10.0;
        let dx = std::f64::consts::PI / xi_max;
        let n_x = ((2.0 * x_max / dx).ceil() as usize).next_multiple_of(8).max(128);
        OracleGrid {
            x_max,
            n_x,
            n_xi: 2 * n_x,
            xi_pass,
        }
    }
}

/// Direct quantization of a pointwise symbol evaluator `f(x, ξ)`.
pub fn weyl_quantize_oracle(
    f: &dyn Fn(f64, f64) -> C64,
    basis: HermiteBasis,
    grid: OracleGrid,
) -> OperatorMatrix {
    let n = basis.size();
    let nx = grid.n_x;
    let dx = 2.0 * grid.x_max / nx as f64;
    let xs: Vec<f64> = (0..nx)
        .map(|g| -grid.x_max + (g as f64 + 0.5) * dx)
        .collect();
    let xi_max = std::f64::consts::PI / dx;
    let nxi = grid.n_xi;
    let dxi = 2.0 * xi_max / nxi as f64;
    let xis: Vec<f64> = (0..nxi)
        .map(|l| -xi_max + (l as f64 + 0.5) * dxi)
        .collect();

    // frequency window: 1 on |ξ| ≤ xi_pass, smooth rolldown to 0 at the edge
    let window = |xi: f64| -> f64 {
        let a = xi.abs();
        if a <= grid.xi_pass {
            1.0
        } else {
            let w = (a - grid.xi_pass) / (xi_max - grid.xi_pass).max(1e-12);
            crate::symbols::smooth_rolloff(w)
        }
    };

    // midpoints (x_g + x_h)/2 take only 2nx−1 values and the phase depends
    // on g−h alone; memoize both before assembling the kernel
    let mut fvals = vec![vec![C64::new(0.0, 0.0); nxi]; 2 * nx - 1];
    for (s, row) in fvals.iter_mut().enumerate() {
        let mid = -grid.x_max + (s as f64 + 1.0) * dx * 0.5;
        for (l, slot) in row.iter_mut().enumerate() {
            *slot = f(mid, xis[l]) * window(xis[l]);
        }
    }
    let mut phases = vec![vec![C64::new(0.0, 0.0); nxi]; 2 * nx - 1];
    for (di, row) in phases.iter_mut().enumerate() {
        let diff = (di as i64 - (nx as i64 - 1)) as f64 * dx;
        for (l, slot) in row.iter_mut().enumerate() {
            let phase = diff * xis[l];
            *slot = C64::new(phase.cos(), phase.sin());
        }
    }

    // kernel K(x_g, y_h)
    let mut kernel = Mat::<C64>::zeros(nx, nx);
    let scale = dxi / (2.0 * std::f64::consts::PI);
    for g in 0..nx {
        for h in 0..nx {
            let frow = &fvals[g + h];
            let prow = &phases[g + nx - 1 - h];
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..nxi {
                acc += frow[l] * prow[l];
            }
            kernel[(g, h)] = acc * scale;
        }
    }

    // sandwich between Hermite functions
    let hv = hermite_value_matrix(n, &xs);
    let mut hmat = Mat::<C64>::zeros(n, nx);
    for k in 0..n {
        for g in 0..nx {
            hmat[(k, g)] = C64::new(hv[k][g], 0.0);
        }
    }
    let m = &hmat * &kernel * hmat.transpose();
    let mut dense = Mat::<C64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            dense[(i, j)] = m[(i, j)] * (dx * dx);
        }
    }
    OperatorMatrix::from_dense(basis, dense)
}

/// Pointwise evaluator of the Gaussian smoothing `(a ⋆ G)(x, ξ)` with
/// `G = (1/π) e^{-(x²+ξ²)}` (the Anti-Wick ↔ Weyl bridge), by 2D
/// Gauss–Hermite quadrature.
pub fn gaussian_smoothed(
    series: &HarmonicSeries,
    gh_nodes: usize,
) -> impl Fn(f64, f64) -> C64 + '_ {
    let rule = gauss_hermite_modified(gh_nodes);
    // plain weights w = ŵ e^{-s²}
    let pts: Vec<(f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| (s, w * (-s * s).exp()))
        .collect();
    move |x0: f64, xi0: f64| {
        let mut acc = C64::new(0.0, 0.0);
        for &(sa, wa) in &pts {
            for &(sb, wb) in &pts {
                let x = x0 + sa;
                let xi = xi0 + sb;
                let action = 0.5 * (x * x + xi * xi);
                let theta = if action > 0.0 { f64::atan2(x, xi) } else { 0.0 };
                acc += wa * wb * series.evaluate(theta, action);
            }
        }
        acc / std::f64::consts::PI
    }
}

/// Projection integrals `⟨Φ_z, h_j⟩ = ∫ Φ_z(x) h_j(x) dx` computed by
/// composite quadrature on the Gaussian envelope; independent of the ladder
/// closed form it validates.
pub fn coherent_projection_oracle(q: f64, p: f64, modes: usize) -> Vec<C64> {
    let half_width = 14.0;
    // resolve the e^{ixp} oscillation: a few panels per wavelength
    let wavelengths = (2.0 * half_width * p.abs() / (2.0 * std::f64::consts::PI)).ceil() as usize;
    let panels = (2 * wavelengths).max(48);
    let rule = gauss_legendre(12);
    let norm = std::f64::consts::PI.powf(-0.25);
    let phase0 = -0.5 * p * q;
    let mut out = vec![C64::new(0.0, 0.0); modes];
    let width = 2.0 * half_width / panels as f64;
    for pa in 0..panels {
        let mid = q - half_width + (pa as f64 + 0.5) * width;
        for (xn, wn) in rule.nodes.iter().zip(&rule.weights) {
            let x = mid + 0.5 * width * xn;
            let w = wn * 0.5 * width;
            let gauss = norm * (-0.5 * (x - q) * (x - q)).exp();
            let phase = phase0 + x * p;
            let phi = gauss * C64::new(phase.cos(), phase.sin());
            let h = crate::basis::hermite_values(modes, x);
            for (j, hj) in h.into_iter().enumerate() {
                out[j] += phi * hj * w;
            }
        }
    }
    out
}
