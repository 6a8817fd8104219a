use super::*;
use crate::symbols::RadialProfile;
use approx::assert_abs_diff_eq;

fn opts_fast() -> QuantizeOptions {
    QuantizeOptions::default()
}

#[test]
fn h0_polynomial_is_exact_diagonal() {
    let basis = HermiteBasis::new(32);
    let m = quantize_test_polynomial(TestPolynomial::H0, basis);
    for k in 0..32 {
        assert_abs_diff_eq!(m.entry(k, k).re, k as f64 + 0.5, epsilon = 1e-12);
    }
}

#[test]
fn x_polynomial_matches_ladder_entries() {
    let basis = HermiteBasis::new(16);
    let m = quantize_test_polynomial(TestPolynomial::X, basis);
    for k in 0..15 {
        let expect = ((k + 1) as f64 / 2.0).sqrt();
        assert_abs_diff_eq!(m.entry(k + 1, k).re, expect, epsilon = 1e-12);
        assert_abs_diff_eq!(m.entry(k, k + 1).re, expect, epsilon = 1e-12);
    }
}

#[test]
fn lowering_convention_lock_through_radial_machinery() {
    // (x + iξ)/√2 = i √I e^{-iθ}: harmonic −1, radial √I, coefficient i.
    // Its quantization must be the lowering matrix with √k at (k−1, k):
    // one test pins every sign convention in the band formula.
    let basis = HermiteBasis::new(24);
    let series = HarmonicSeries::new(vec![RadialTerm::new(
        -1,
        C64::new(0.0, 1.0),
        |i: f64| i.sqrt(),
        |i: f64| 0.5 / i.sqrt().max(1e-300),
    )]);
    let m = weyl_quantize_series(&series, basis, opts_fast()).unwrap();
    let expect = quantize_test_polynomial(TestPolynomial::Lowering, basis);
    assert!(
        m.sub(&expect).max_abs() < 1e-9,
        "lowering mismatch {:.3e}",
        m.sub(&expect).max_abs()
    );
}

#[test]
fn xxi_convention_lock_for_second_harmonic() {
    // xξ = I sin 2θ: harmonic ±2 with radial I; must reproduce the exact
    // ladder matrix (i/2)(a†² − a²), pinning the n = 2 band conventions.
    let basis = HermiteBasis::new(24);
    let half_over_i = C64::new(0.0, -0.5);
    let series = HarmonicSeries::new(vec![
        RadialTerm::new(2, half_over_i, |i: f64| i, |_| 1.0),
        RadialTerm::new(-2, -half_over_i, |i: f64| i, |_| 1.0),
    ]);
    let m = weyl_quantize_series(&series, basis, opts_fast()).unwrap();
    let expect = quantize_test_polynomial(TestPolynomial::XXi, basis);
    assert!(
        m.sub(&expect).max_abs() < 1e-9,
        "xξ mismatch {:.3e}",
        m.sub(&expect).max_abs()
    );
}

#[test]
fn weyl_matches_grid_kernel_oracle_on_harmonic_symbol() {
    let basis = HermiteBasis::new(48);
    let sym = crate::symbols::AngleTimeSymbol::sin_ntheta(1);
    let m = weyl_quantize(&sym, 0.0, basis, opts_fast()).unwrap();
    let f = |x: f64, xi: f64| sym.evaluate(0.0, crate::symbols::PhasePoint::new(x, xi));
    let oracle = weyl_quantize_oracle(&f, basis, OracleGrid::for_basis(basis));
    let err = m.max_abs_diff_interior(&oracle);
    assert!(err < 1e-8, "weyl vs oracle: {err:.3e}");
}

#[test]
fn oracle_reproduces_h0_diagonal() {
    let basis = HermiteBasis::new(48);
    let f = |x: f64, xi: f64| C64::new(0.5 * (x * x + xi * xi), 0.0);
    let oracle = weyl_quantize_oracle(&f, basis, OracleGrid::for_basis(basis));
    let expect = quantize_test_polynomial(TestPolynomial::H0, basis);
    let err = expect.max_abs_diff_interior(&oracle);
    assert!(err < 1e-10, "oracle h0 error {err:.3e}");
}

#[test]
fn selection_rule_via_oracle() {
    // harmonic-2 symbol: oracle entries off the ±2 diagonals stay ≤ 1e-10
    let basis = HermiteBasis::new(40);
    let sym = crate::symbols::AngleTimeSymbol::sin_ntheta(2);
    let f = |x: f64, xi: f64| sym.evaluate(0.0, crate::symbols::PhasePoint::new(x, xi));
    let oracle = weyl_quantize_oracle(&f, basis, OracleGrid::for_basis(basis));
    let interior = basis.interior_end();
    for i in 0..interior {
        for j in 0..interior {
            let d = i as i64 - j as i64;
            if d.abs() != 2 {
                assert!(
                    oracle.entry(i, j).norm() < 1e-10,
                    "off-band leak at ({i},{j}): {:.3e}",
                    oracle.entry(i, j).norm()
                );
            }
        }
    }
}

#[test]
fn quantization_is_linear_in_the_symbol() {
    let basis = HermiteBasis::new(24);
    let a = crate::symbols::AngleTimeSymbol::sin_ntheta(1);
    let b = crate::symbols::AngleTimeSymbol::cos_ntheta(3);
    let sum = a.add(&b.scale(2.0));
    let m_sum = weyl_quantize(&sum, 0.0, basis, opts_fast()).unwrap();
    let m_parts = weyl_quantize(&a, 0.0, basis, opts_fast())
        .unwrap()
        .add(&weyl_quantize(&b, 0.0, basis, opts_fast()).unwrap().scale(C64::new(2.0, 0.0)));
    assert!(m_sum.sub(&m_parts).max_abs() < 1e-12);
}

#[test]
fn real_symbols_quantize_to_hermitian_matrices() {
    let basis = HermiteBasis::new(32);
    let sym = crate::symbols::AngleTimeSymbol::w0();
    for t in [0.0, 0.4, 1.9] {
        let m = weyl_quantize(&sym, t, basis, opts_fast()).unwrap();
        assert!(
            m.hermiticity_error() < 1e-12,
            "hermiticity {:.3e} at t={t}",
            m.hermiticity_error()
        );
    }
}

#[test]
fn egorov_conjugation_at_full_period_is_identity() {
    let basis = HermiteBasis::new(24);
    let m = weyl_quantize(&crate::symbols::AngleTimeSymbol::sin_ntheta(2), 0.0, basis, opts_fast())
        .unwrap();
    let back = egorov_conjugate(&m, 2.0 * std::f64::consts::PI);
    assert!(m.sub(&back).max_abs() < 1e-12);
}

#[test]
fn egorov_rotates_position_into_momentum() {
    let basis = HermiteBasis::new(24);
    let x = quantize_test_polynomial(TestPolynomial::X, basis);
    let xi = quantize_test_polynomial(TestPolynomial::Xi, basis);
    let rotated = egorov_conjugate(&x, std::f64::consts::FRAC_PI_2);
    assert!(rotated.sub(&xi).max_abs() < 1e-12);
}

#[test]
fn egorov_leaves_diagonal_matrices_alone() {
    let basis = HermiteBasis::new(16);
    let h0 = OperatorMatrix::h0(basis);
    for tau in [0.3, 1.7, 4.0] {
        assert!(egorov_conjugate(&h0, tau).sub(&h0).max_abs() < 1e-14);
    }
}

#[test]
fn verify_egorov_residuals() {
    let basis = HermiteBasis::new(64);
    let sym = crate::symbols::AngleTimeSymbol::sin_ntheta(2);
    assert!(verify_egorov(&sym, 0.0, basis, opts_fast()).unwrap() < 1e-14);
    assert!(verify_egorov(&sym, 0.7, basis, opts_fast()).unwrap() < 1e-8);
}

#[test]
fn coherent_state_at_origin_is_ground_mode() {
    let basis = HermiteBasis::new(16);
    let cs = coherent_state(0.0, 0.0, basis);
    assert_abs_diff_eq!(cs.coefficients[0].re, 1.0, epsilon = 1e-14);
    for j in 1..16 {
        assert!(cs.coefficients[j].norm() < 1e-14);
    }
    assert!(!cs.tail_warning);
}

#[test]
fn coherent_state_is_normalized_with_small_tail() {
    let basis = HermiteBasis::new(96);
    let cs = coherent_state(3.0, -2.0, basis);
    let norm: f64 = cs.coefficients.iter().map(|c| c.norm_sqr()).sum();
    assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
    assert!(cs.tail_mass < 1e-10);
}

#[test]
fn coherent_state_matches_projection_oracle() {
    let basis = HermiteBasis::new(48);
    let (q, p) = (1.3, -0.6);
    let cs = coherent_state(q, p, basis);
    let oracle = coherent_projection_oracle(q, p, 48);
    for j in 0..48 {
        let d = (cs.coefficients[j] - oracle[j]).norm();
        assert!(d < 1e-10, "mode {j}: closed form vs oracle {d:.3e}");
    }
}

#[test]
fn coherent_state_oscillator_expectation() {
    // ⟨Opw(½(x²+ξ²)) Φ_z, Φ_z⟩ = (q²+p²)/2 + ½
    let basis = HermiteBasis::new(128);
    let (q, p) = (2.0, 1.0);
    let cs = coherent_state(q, p, basis);
    let h0 = quantize_test_polynomial(TestPolynomial::H0, basis);
    let mut hv = vec![C64::new(0.0, 0.0); 128];
    h0.matvec(&cs.coefficients, &mut hv);
    let expect: C64 = cs
        .coefficients
        .iter()
        .zip(&hv)
        .map(|(c, h)| c.conj() * h)
        .sum();
    assert_abs_diff_eq!(expect.re, 0.5 * (q * q + p * p) + 0.5, epsilon = 1e-8);
    assert!(expect.im.abs() < 1e-12);
}

#[test]
fn anti_wick_of_zero_symbol_is_zero() {
    let basis = HermiteBasis::new(16);
    let m = anti_wick_quantize(&crate::symbols::AngleTimeSymbol::zero(), 0.0, basis).unwrap();
    assert_eq!(m.max_abs(), 0.0);
}

#[test]
fn anti_wick_positivity_for_nonnegative_symbol() {
    // (1 + sin2θ)/2 · CutoffOne ≥ 0
    let basis = HermiteBasis::new(64);
    let sym = crate::symbols::AngleTimeSymbol::sin_ntheta(2)
        .add(&crate::symbols::AngleTimeSymbol::constant(1.0))
        .scale(0.5);
    let m = anti_wick_quantize(&sym, 0.0, basis).unwrap();
    let eig = m.eigendecompose().unwrap();
    assert!(
        eig.values[0] >= -1e-8,
        "anti-Wick min eigenvalue {:.3e}",
        eig.values[0]
    );
}

#[test]
fn anti_wick_agrees_with_gaussian_smoothing_route() {
    // Opaw(a) = (convolution route) Opw(a ⋆ G): cross-check the two paths
    let basis = HermiteBasis::new(28);
    let sym = crate::symbols::AngleTimeSymbol::sin_ntheta(2);
    let series = HarmonicSeries::from_symbol(&sym).unwrap();
    let direct = anti_wick_quantize_series(&series, basis).unwrap();
    let smoothed = gaussian_smoothed(&series, 48);
    let via_weyl = weyl_quantize_oracle(&smoothed, basis, OracleGrid::for_basis(basis));
    let err = direct.max_abs_diff_interior(&via_weyl);
    assert!(err < 1e-6, "anti-Wick routes disagree: {err:.3e}");
}

#[test]
fn weyl_minus_anti_wick_decays_on_high_modes() {
    // a − a⋆Φ0 ∈ S^{-2}: the difference acts ever smaller on high modes
    let basis = HermiteBasis::new(384);
    let sym = crate::symbols::AngleTimeSymbol::sin_ntheta(2);
    let w = weyl_quantize(&sym, 0.0, basis, opts_fast()).unwrap();
    let aw = anti_wick_quantize(&sym, 0.0, basis).unwrap();
    let diff = w.sub(&aw);
    let mut norms = Vec::new();
    for k in [16usize, 64, 256] {
        let mut col = 0.0f64;
        for i in 0..basis.interior_end() {
            col += diff.entry(i, k).norm_sqr();
        }
        norms.push(col.sqrt());
    }
    assert!(
        norms[1] < norms[0] && norms[2] < norms[1],
        "no decay: {norms:?}"
    );
}

#[test]
fn composition_residuals_decrease_on_dyadic_blocks() {
    let basis = HermiteBasis::new(256);
    let a = crate::symbols::AngleTimeSymbol::sin_ntheta(1);
    let report = composition_check(&a, &a, basis, opts_fast()).unwrap();
    assert!(report.decreasing(), "report: {report:?}");
}

#[test]
fn composition_with_true_constant_is_exact() {
    // a radial part ≡ 1 quantizes to the identity, so the commutator with
    // anything vanishes to roundoff (the profile-backed "constant" symbol
    // carries a cutoff transition and is only asymptotically scalar)
    let basis = HermiteBasis::new(96);
    let two = HarmonicSeries::new(vec![RadialTerm::new(
        0,
        C64::new(2.0, 0.0),
        |_| 1.0,
        |_| 0.0,
    )]);
    let sb = HarmonicSeries::from_symbol(&crate::symbols::AngleTimeSymbol::sin_ntheta(2)).unwrap();
    let ma = weyl_quantize_series(&two, basis, opts_fast()).unwrap();
    let mb = weyl_quantize_series(&sb, basis, opts_fast()).unwrap();
    let comm = ma.commutator_i(&mb);
    assert!(
        comm.max_abs() < 1e-10,
        "constant commutator {:.3e}",
        comm.max_abs()
    );
}

#[test]
fn composition_commutator_matches_poisson_bracket_leading_order() {
    // {a, b} for this pair is radial and localized in the cutoff transition,
    // whose violent derivatives keep the constants of the S^{-3} remainder
    // large; what must hold at accessible mode counts is a steady decay of
    // the residual blocks, well below the bracket's own scale at the end.
    let basis = HermiteBasis::new(256);
    let a = crate::symbols::AngleTimeSymbol::sin_ntheta(2);
    let b = crate::symbols::AngleTimeSymbol::cos_ntheta(2);
    let report = composition_check(&a, &b, basis, opts_fast()).unwrap();
    assert!(report.decreasing(), "report: {report:?}");
    let first = report.commutator_bands.first().unwrap().1;
    let last = report.commutator_bands.last().unwrap().1;
    assert!(
        last < 0.4 * first,
        "no commutator residual decay: first {first:.3e}, last {last:.3e}"
    );
}

#[test]
fn garding_bound_for_nonnegative_symbols() {
    let basis = HermiteBasis::new(128);
    let sym = crate::symbols::AngleTimeSymbol::sin_ntheta(2)
        .add(&crate::symbols::AngleTimeSymbol::constant(1.0))
        .scale(0.5);
    let report = garding_check(&sym, basis, opts_fast()).unwrap();
    assert!(report.c_bound < 10.0, "C = {}", report.c_bound);
    assert!(report.anti_wick_min_eigenvalue >= -1e-8);
    // with the empirical C the shifted form is nonnegative by construction
    assert!(report.min_eigenvalue >= -report.c_bound - 1e-10);
}

#[test]
fn garding_rejects_negative_symbols() {
    let basis = HermiteBasis::new(32);
    let sym = crate::symbols::AngleTimeSymbol::sin_ntheta(1); // changes sign
    assert!(garding_check(&sym, basis, opts_fast()).is_err());
}

#[test]
fn garding_zero_symbol_needs_no_shift() {
    let basis = HermiteBasis::new(24);
    let report = garding_check(&crate::symbols::AngleTimeSymbol::zero(), basis, opts_fast())
        .unwrap();
    assert_eq!(report.c_bound, 0.0);
}

#[test]
fn quadrature_convergence_check_passes_on_canned_profiles() {
    let basis = HermiteBasis::new(64);
    let sym = crate::symbols::AngleTimeSymbol::term(
        0,
        2,
        C64::new(0.3, 0.1),
        RadialProfile::PowerDecay(1.0),
    )
    .add(&crate::symbols::AngleTimeSymbol::term(
        0,
        -2,
        C64::new(0.3, -0.1),
        RadialProfile::PowerDecay(1.0),
    ));
    let m = weyl_quantize(&sym, 0.0, basis, QuantizeOptions::default()).unwrap();
    assert!(m.is_hermitian());
}
