//! Weyl and Anti-Wick quantization on the truncated Hermite basis.
//!
//! The angular harmonic `e^{inθ} ρ(I)` populates only the diagonal
//! `row − col = n`; the convention is locked by `x + iξ = √(2I)·i·e^{-iθ}`,
//! under which `(x+iξ)/√2` quantizes to the lowering ladder matrix. Band
//! entries are radial integrals of the profile against cross-Wigner Laguerre
//! kernels,
//!
//! `⟨Opw(e^{inθ}ρ) h_k, h_{k+n}⟩ = (-1)^k i^n ∫₀^∞ ρ(σ/2) ℓ_k^{(n)}(2σ) dσ`,
//!
//! with `ℓ_k^{(n)}` the orthonormal Laguerre functions, evaluated by
//! Gauss–Laguerre quadrature with modified weights. Negative harmonics come
//! from the adjoint relation `Opw(e^{inθ}ρ)* = Opw(e^{-inθ}ρ)`.

mod oracle;

pub use oracle::{
    coherent_projection_oracle, gaussian_smoothed, weyl_quantize_oracle, OracleGrid,
};

use std::collections::BTreeMap;

use crate::basis::HermiteBasis;
use crate::error::CoreError;
use crate::operator::OperatorMatrix;
use crate::quadrature::{gauss_legendre, laguerre_functions, ln_gamma};
use crate::symbols::{AngleTimeSymbol, HarmonicSeries, RadialTerm};
use crate::{Result, C64};

/// Quadrature controls for the band integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuantizeOptions {
    /// Quadrature points per zero spacing of the highest Laguerre function.
    pub points_per_spacing: f64,
    /// Recompute with 1.5× the panel density and fail on disagreement.
    pub convergence_check: bool,
    /// Tolerance for the refinement check.
    pub tol: f64,
}

impl Default for QuantizeOptions {
    fn default() -> Self {
        QuantizeOptions {
            points_per_spacing: 20.0,
            convergence_check: true,
            tol: 1e-9,
        }
    }
}

/// Radial band integrals `g_k = ∫₀^∞ ρ(σ/2) ℓ_k^{(n)}(2σ) dσ`, k = 0..count.
///
/// Substituting σ = u² makes the zeros of `ℓ_k^{(n)}(2u²)` uniformly spaced
/// in u (spacing `π/(2√(2k+n))`) and removes any half-power behaviour at the
/// origin, so a composite Gauss–Legendre rule with a fixed number of points
/// per zero spacing resolves every k at once — including the profile
/// transition region, which a plain Gauss–Laguerre rule undersamples.
fn band_integrals(
    radial: &dyn Fn(f64) -> f64,
    n_abs: usize,
    count: usize,
    points_per_spacing: f64,
) -> Vec<f64> {
    let k_max = count.saturating_sub(1);
    // turning point of ℓ_{k_max}^{(n)} in x = 2σ, with an Airy-zone pad
    let x_turn = (4 * k_max + 2 * n_abs + 2) as f64;
    let x_hi = x_turn + 12.0 * x_turn.cbrt() + 30.0;
    let u_hi = (0.5 * x_hi).sqrt();
    let spacing = std::f64::consts::PI / (2.0 * ((2 * k_max + n_abs) as f64 + 2.0).sqrt());
    let nodes_per_panel = 10usize;
    let panel_w = spacing * nodes_per_panel as f64 / points_per_spacing;
    let rule = gauss_legendre(nodes_per_panel);

    // Panel edges: uniform in u (zeros of ℓ_k(2u²) are equispaced there),
    // refined 16× across the profile transition zone — the exp(-1/w) glue is
    // Gevrey-regular only, and coarse panels across its seams stall around
    // 1e-7. In u-coordinates every canned-profile seam lies in [0.65, 1.5].
    let mut edges = Vec::new();
    let coarse = (u_hi / panel_w).ceil() as usize;
    let width = u_hi / coarse as f64;
    let (zone_lo, zone_hi) = (0.65f64, 1.5f64);
    let mut u = 0.0f64;
    edges.push(0.0);
    for _ in 0..coarse {
        let next = u + width;
        if next > zone_lo && u < zone_hi {
            let fine = width / 16.0;
            let mut v = u;
            while v < next - 0.5 * fine {
                v += fine;
                edges.push(v.min(next));
            }
            if (edges.last().unwrap() - next).abs() > 1e-12 {
                edges.push(next);
            }
        } else {
            edges.push(next);
        }
        u = next;
    }

    let mut g = vec![0.0f64; count];
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (xn, wn) in rule.nodes.iter().zip(&rule.weights) {
            let u = mid + half * xn;
            let sigma = u * u;
            let rho = radial(0.5 * sigma);
            if rho == 0.0 {
                continue;
            }
            // dσ = 2u du
            let scale = wn * half * rho * 2.0 * u;
            let ell = laguerre_functions(count, n_abs as f64, 2.0 * sigma);
            for (k, l) in ell.into_iter().enumerate() {
                g[k] += scale * l;
            }
        }
    }
    g
}

/// Quantize a time-independent harmonic series with arbitrary radial parts.
pub fn weyl_quantize_series(
    series: &HarmonicSeries,
    basis: HermiteBasis,
    opts: QuantizeOptions,
) -> Result<OperatorMatrix> {
    let n = basis.size();
    let mut bands: BTreeMap<i64, Vec<C64>> = BTreeMap::new();
    for term in &series.terms {
        let n_abs = term.n.unsigned_abs() as usize;
        if n_abs >= n {
            continue; // harmonic outside the truncation
        }
        let count = n - n_abs;
        let g = band_integrals(&|i| term.radial(i), n_abs, count, opts.points_per_spacing);
        if opts.convergence_check {
            let g_fine = band_integrals(
                &|i| term.radial(i),
                n_abs,
                count,
                1.5 * opts.points_per_spacing,
            );
            let max_delta = g
                .iter()
                .zip(&g_fine)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let scale = g.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
            if max_delta > opts.tol * scale {
                return Err(CoreError::QuadratureNonConvergence {
                    band: term.n as i64,
                    max_delta,
                    tol: opts.tol * scale,
                });
            }
        }
        // i^n for signed n (i^{-|n|} = (-i)^{|n|})
        let i_pow = C64::new(0.0, 1.0).powi(term.n);
        let slot = bands
            .entry(term.n as i64)
            .or_insert_with(|| vec![C64::new(0.0, 0.0); count]);
        for (k, gk) in g.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            slot[k] += term.coeff * i_pow * sign * gk;
        }
    }
    bands.retain(|_, v| v.iter().any(|z| z.norm() > 0.0));
    OperatorMatrix::from_bands(basis, bands)
}

/// Quantize the m-th time harmonic `Σ_n c_{m,n} e^{inθ} ρ_{m,n}(I)` of a
/// symbol. The driven Hamiltonian is assembled from these once and reused.
pub fn weyl_quantize_time_harmonic(
    symbol: &AngleTimeSymbol,
    m: i32,
    basis: HermiteBasis,
    opts: QuantizeOptions,
) -> Result<OperatorMatrix> {
    let terms: Vec<RadialTerm> = symbol
        .terms()
        .iter()
        .filter(|t| t.m == m)
        .map(|t| {
            let p1 = t.profile.clone();
            let p2 = t.profile.clone();
            RadialTerm::new(t.n, t.coeff, move |i| p1.eval(i), move |i| p2.deriv(i))
        })
        .collect();
    weyl_quantize_series(&HarmonicSeries::new(terms), basis, opts)
}

/// Weyl quantization of a symbol frozen at time `t`. Real symbols give
/// Hermitian matrices.
pub fn weyl_quantize(
    symbol: &AngleTimeSymbol,
    t: f64,
    basis: HermiteBasis,
    opts: QuantizeOptions,
) -> Result<OperatorMatrix> {
    let mut out = OperatorMatrix::zeros(basis);
    let mut ms: Vec<i32> = symbol.terms().iter().map(|term| term.m).collect();
    ms.sort_unstable();
    ms.dedup();
    for m in ms {
        let part = weyl_quantize_time_harmonic(symbol, m, basis, opts)?;
        let a = m as f64 * t;
        out = out.add(&part.scale(C64::new(a.cos(), a.sin())));
    }
    Ok(out)
}

/// Ladder-exact quantizations of the polynomial test symbols. These are not
/// in S⁰ and exist for unit tests and convention locks only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestPolynomial {
    /// x
    X,
    /// ξ
    Xi,
    /// xξ (Weyl-symmetrized)
    XXi,
    /// ½(x² + ξ²)
    H0,
    /// (x + iξ)/√2 — the lowering ladder operator, locks all conventions
    Lowering,
}

pub fn quantize_test_polynomial(poly: TestPolynomial, basis: HermiteBasis) -> OperatorMatrix {
    let n = basis.size();
    let mut bands: BTreeMap<i64, Vec<C64>> = BTreeMap::new();
    match poly {
        TestPolynomial::X => {
            let up: Vec<C64> = (0..n - 1)
                .map(|k| C64::new(((k + 1) as f64 / 2.0).sqrt(), 0.0))
                .collect();
            bands.insert(1, up.clone());
            bands.insert(-1, up);
        }
        TestPolynomial::Xi => {
            let up: Vec<C64> = (0..n - 1)
                .map(|k| C64::new(0.0, ((k + 1) as f64 / 2.0).sqrt()))
                .collect();
            let down: Vec<C64> = up.iter().map(|z| z.conj()).collect();
            bands.insert(1, up);
            bands.insert(-1, down);
        }
        TestPolynomial::XXi => {
            let up: Vec<C64> = (0..n - 2)
                .map(|k| C64::new(0.0, 0.5 * (((k + 1) * (k + 2)) as f64).sqrt()))
                .collect();
            let down: Vec<C64> = up.iter().map(|z| z.conj()).collect();
            bands.insert(2, up);
            bands.insert(-2, down);
        }
        TestPolynomial::H0 => {
            bands.insert(0, (0..n).map(|k| C64::new(k as f64 + 0.5, 0.0)).collect());
        }
        TestPolynomial::Lowering => {
            bands.insert(
                -1,
                (0..n - 1)
                    .map(|k| C64::new(((k + 1) as f64).sqrt(), 0.0))
                    .collect(),
            );
        }
    }
    OperatorMatrix::from_bands(basis, bands).expect("band lengths are consistent")
}

// ---------------------------------------------------------------------------
// Anti-Wick quantization
// ---------------------------------------------------------------------------

/// Anti-Wick quantization via coherent-state matrix elements:
/// `⟨Opaw(a) h_k, h_{k+n}⟩ = i^n/√(k!(k+n)!) ∫₀^∞ ρ(I) I^{k+n/2} e^{-I} dI`.
///
/// Positivity-preserving: each coherent projector enters with weight
/// `a(z) dz/(2π) ≥ 0` for nonnegative symbols.
pub fn anti_wick_quantize_series(
    series: &HarmonicSeries,
    basis: HermiteBasis,
) -> Result<OperatorMatrix> {
    let n = basis.size();
    let mut bands: BTreeMap<i64, Vec<C64>> = BTreeMap::new();
    for term in &series.terms {
        let n_abs = term.n.unsigned_abs() as usize;
        if n_abs >= n {
            continue;
        }
        let count = n - n_abs;
        let i_pow = C64::new(0.0, 1.0).powi(term.n);
        let slot = bands
            .entry(term.n as i64)
            .or_insert_with(|| vec![C64::new(0.0, 0.0); count]);
        for (k, s) in slot.iter_mut().enumerate() {
            let j = anti_wick_radial_integral(&|i| term.radial(i), k, n_abs);
            *s += term.coeff * i_pow * j;
        }
    }
    bands.retain(|_, v| v.iter().any(|z| z.norm() > 0.0));
    OperatorMatrix::from_bands(basis, bands)
}

pub fn anti_wick_quantize(
    symbol: &AngleTimeSymbol,
    t: f64,
    basis: HermiteBasis,
) -> Result<OperatorMatrix> {
    // freeze the time factor into the coefficients
    let frozen: Vec<RadialTerm> = symbol
        .terms()
        .iter()
        .map(|term| {
            let a = term.m as f64 * t;
            let p1 = term.profile.clone();
            let p2 = term.profile.clone();
            RadialTerm::new(
                term.n,
                term.coeff * C64::new(a.cos(), a.sin()),
                move |i| p1.eval(i),
                move |i| p2.deriv(i),
            )
        })
        .collect();
    anti_wick_quantize_series(&HarmonicSeries::new(frozen), basis)
}

/// `∫₀^∞ ρ(I) I^{k+n/2} e^{-I} dI / √(k! (k+n)!)` with the gamma-like kernel
/// carried in log space; composite Gauss–Legendre on the kernel's support.
fn anti_wick_radial_integral(radial: &dyn Fn(f64) -> f64, k: usize, n_abs: usize) -> f64 {
    let power = k as f64 + n_abs as f64 / 2.0;
    let log_norm = 0.5 * (ln_gamma(k as f64 + 1.0) + ln_gamma((k + n_abs) as f64 + 1.0));
    let center = power.max(0.5);
    let width = 9.0 * center.sqrt().max(2.0);
    let lo = (center - width).max(1e-12);
    let hi = center + width + 6.0;
    crate::quadrature::integrate_panels(
        |i| {
            let rho = radial(i);
            if rho == 0.0 {
                return 0.0;
            }
            rho * (power * i.ln() - i - log_norm).exp()
        },
        lo,
        hi,
        24,
        16,
    )
}

// ---------------------------------------------------------------------------
// coherent states
// ---------------------------------------------------------------------------

/// A coherent state Φ_z, z = (q, p), expanded on the truncated basis.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub q: f64,
    pub p: f64,
    pub coefficients: Vec<C64>,
    /// L² mass lost to truncation.
    pub tail_mass: f64,
    /// Set when more than 1% of the mass is missing.
    pub tail_warning: bool,
}

/// Expansion `⟨Φ_z, h_j⟩ = e^{-|α|²/2} α^j / √(j!)` with `α = (q+ip)/√2`;
/// the translation-operator phase `e^{-ipq/2}` cancels exactly against the
/// Gaussian completion-of-squares phase. Carried in log space so far-out
/// centers stay finite. Validated against the projection oracle in tests.
pub fn coherent_state(q: f64, p: f64, basis: HermiteBasis) -> CoherentState {
    let n = basis.size();
    let alpha_sq = 0.5 * (q * q + p * p);
    let arg = f64::atan2(p, q);
    let mut coefficients = Vec::with_capacity(n);
    let mut mass = 0.0f64;
    for j in 0..n {
        let c = if alpha_sq == 0.0 {
            if j == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        } else {
            let ln_mag =
                -0.5 * alpha_sq + 0.5 * j as f64 * alpha_sq.ln() - 0.5 * ln_gamma(j as f64 + 1.0);
            let a = j as f64 * arg;
            ln_mag.exp() * C64::new(a.cos(), a.sin())
        };
        mass += c.norm_sqr();
        coefficients.push(c);
    }
    let tail_mass = (1.0 - mass).max(0.0);
    CoherentState {
        q,
        p,
        coefficients,
        tail_mass,
        tail_warning: tail_mass > 0.01,
    }
}

// ---------------------------------------------------------------------------
// exact Egorov
// ---------------------------------------------------------------------------

/// `e^{iτH0} M e^{-iτH0}`: the band `row − col = d` picks up `e^{iτd}`.
/// Exact and cheap on banded storage.
pub fn egorov_conjugate(m: &OperatorMatrix, tau: f64) -> OperatorMatrix {
    let basis = m.basis();
    if m.is_banded() {
        let mut bands: BTreeMap<i64, Vec<C64>> = BTreeMap::new();
        for d in m.bands() {
            let a = tau * d as f64;
            let factor = C64::new(a.cos(), a.sin());
            bands.insert(d, m.band(d).unwrap().iter().map(|z| z * factor).collect());
        }
        OperatorMatrix::from_bands(basis, bands).expect("band structure preserved")
    } else {
        let n = basis.size();
        let mut dense = m.to_dense();
        for i in 0..n {
            for j in 0..n {
                let a = tau * (i as f64 - j as f64);
                dense[(i, j)] *= C64::new(a.cos(), a.sin());
            }
        }
        OperatorMatrix::from_dense(basis, dense)
    }
}

/// Residual of the exact Egorov theorem on the interior block:
/// `‖e^{iτH0} Opw(a) e^{-iτH0} − Opw(a∘φ^τ)‖_max`, with the flow applied at
/// symbol level through the coefficient shift.
pub fn verify_egorov(
    symbol: &AngleTimeSymbol,
    tau: f64,
    basis: HermiteBasis,
    opts: QuantizeOptions,
) -> Result<f64> {
    let m = weyl_quantize(symbol, 0.0, basis, opts)?;
    let lhs = egorov_conjugate(&m, tau);
    let rotated = symbol.rotate_angle(tau);
    let rhs = weyl_quantize(&rotated, 0.0, basis, opts)?;
    Ok(lhs.max_abs_diff_interior(&rhs))
}

// ---------------------------------------------------------------------------
// composition and Gårding checks
// ---------------------------------------------------------------------------

/// Dyadic-band column norms of the two composition residuals.
#[derive(Debug, Clone)]
pub struct CompositionReport {
    /// (block start mode, ‖(Opw(a)Opw(b) − Opw(ab)) columns‖)
    pub product_bands: Vec<(usize, f64)>,
    /// (block start mode, ‖(i[Opw(a),Opw(b)] − Opw({a,b})) columns‖)
    pub commutator_bands: Vec<(usize, f64)>,
}

impl CompositionReport {
    /// Order-drop signature: norms decrease (with 20% slack) along blocks.
    pub fn decreasing(&self) -> bool {
        let dec = |v: &[(usize, f64)]| v.windows(2).all(|w| w[1].1 <= w[0].1 * 1.2 + 1e-12);
        dec(&self.product_bands) && dec(&self.commutator_bands)
    }
}

/// Verify the leading-order symbolic calculus: `Opw(a)Opw(b) ≈ Opw(ab)` and
/// `i[Opw(a), Opw(b)] ≈ Opw({a,b})`, with residuals decaying on high-mode
/// blocks (the order-drop signature).
pub fn composition_check(
    a: &AngleTimeSymbol,
    b: &AngleTimeSymbol,
    basis: HermiteBasis,
    opts: QuantizeOptions,
) -> Result<CompositionReport> {
    let sa = HarmonicSeries::from_symbol(a)?;
    let sb = HarmonicSeries::from_symbol(b)?;
    let ma = weyl_quantize_series(&sa, basis, opts)?;
    let mb = weyl_quantize_series(&sb, basis, opts)?;
    let product = weyl_quantize_series(&sa.product(&sb), basis, opts)?;
    let bracket = weyl_quantize_series(&sa.poisson(&sb), basis, opts)?;

    let prod_resid = ma.matmul(&mb).sub(&product);
    let comm_resid = ma.commutator_i(&mb).sub(&bracket);

    let interior = basis.interior_end();
    let mut product_bands = Vec::new();
    let mut commutator_bands = Vec::new();
    let mut start = 8usize;
    while start < interior {
        let stop = (2 * start).min(interior);
        product_bands.push((start, column_block_norm(&prod_resid, start, stop)));
        commutator_bands.push((start, column_block_norm(&comm_resid, start, stop)));
        start *= 2;
    }
    Ok(CompositionReport {
        product_bands,
        commutator_bands,
    })
}

/// Max over columns k in [start, stop) of the l² norm of the interior rows.
fn column_block_norm(m: &OperatorMatrix, start: usize, stop: usize) -> f64 {
    let interior = m.basis().interior_end();
    let mut best = 0.0f64;
    for k in start..stop {
        let mut s = 0.0f64;
        for i in 0..interior {
            s += m.entry(i, k).norm_sqr();
        }
        best = best.max(s.sqrt());
    }
    best
}

/// Strong Gårding check for a symbol nonnegative outside a disk.
#[derive(Debug, Clone)]
pub struct GardingReport {
    /// Smallest C with `⟨Opw(a)u, u⟩ ≥ -C‖u‖_{-1}²` on the truncation
    /// (0 when the matrix is already PSD).
    pub c_bound: f64,
    /// Min eigenvalue of `Opw(a)`.
    pub min_eigenvalue: f64,
    /// Min eigenvalue of the Anti-Wick quantization (≥ 0 up to roundoff for
    /// nonnegative symbols).
    pub anti_wick_min_eigenvalue: f64,
}

pub fn garding_check(
    a: &AngleTimeSymbol,
    basis: HermiteBasis,
    opts: QuantizeOptions,
) -> Result<GardingReport> {
    // nonnegativity outside the unit disk, on a grid
    let series = HarmonicSeries::from_symbol(a)?;
    for iaction in 0..40 {
        let action = 0.5 + 0.35 * iaction as f64;
        for jt in 0..256 {
            let theta = crate::symbols::TWO_PI * jt as f64 / 256.0;
            let val = series.evaluate(theta, action);
            if val.re < -1e-12 {
                return Err(CoreError::InvalidInput(format!(
                    "symbol is negative ({:.3e}) at theta={theta:.3}, I={action:.3}",
                    val.re
                )));
            }
        }
    }
    let m = weyl_quantize_series(&series, basis, opts)?;
    let eig = m.eigendecompose()?;
    let min_eigenvalue = eig.values.first().copied().unwrap_or(0.0);

    // C* = λ_max(Λ(−Opw(a))Λ), Λ = diag(k+½): the sharpest constant with
    // ⟨Opw(a)u,u⟩ ≥ −C⟨H0^{-2}u,u⟩ on the truncation
    let n = basis.size();
    let mut weighted = m.to_dense();
    for i in 0..n {
        for j in 0..n {
            let wi = basis.eigenvalue(i);
            let wj = basis.eigenvalue(j);
            weighted[(i, j)] *= C64::new(-wi * wj, 0.0);
        }
    }
    let weig = OperatorMatrix::from_dense(basis, weighted).eigendecompose()?;
    let c_bound = weig.values.last().copied().unwrap_or(0.0).max(0.0);

    let aw = anti_wick_quantize_series(&series, basis)?;
    let aw_eig = aw.eigendecompose()?;
    let anti_wick_min_eigenvalue = aw_eig.values.first().copied().unwrap_or(0.0);

    Ok(GardingReport {
        c_bound,
        min_eigenvalue,
        anti_wick_min_eigenvalue,
    })
}

#[cfg(test)]
mod tests;
