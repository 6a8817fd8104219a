//! Truncated bivariate Taylor arithmetic ("jets") in the phase-space
//! variables (x, ξ).
//!
//! A [`Jet2`] of order J stores all Taylor coefficients of total degree ≤ J of
//! a function expanded at a base point. Products are truncated Cauchy
//! products; analytic functions are applied by Horner composition with the
//! outer Taylor coefficients. Symbol seminorms use this to obtain every mixed
//! derivative `∂x^a ∂ξ^b f` at a grid point in one pass, exactly (up to
//! rounding), which a finite-difference stencil could never do at order 16.

use crate::C64;

/// Triangle-packed bivariate jet with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    order: usize,
    c: Vec<C64>,
}

#[inline]
fn tri(d: usize) -> usize {
    d * (d + 1) / 2
}

#[inline]
fn idx(a: usize, b: usize) -> usize {
    tri(a + b) + b
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        Jet2 {
            order,
            c: vec![C64::new(0.0, 0.0); tri(order + 2)],
        }
    }

    pub fn constant(order: usize, v: C64) -> Self {
        let mut j = Self::zero(order);
        j.c[0] = v;
        j
    }

    /// The coordinate x expanded at x0.
    pub fn var_x(order: usize, x0: f64) -> Self {
        let mut j = Self::zero(order);
        j.c[idx(0, 0)] = C64::new(x0, 0.0);
        if order >= 1 {
            j.c[idx(1, 0)] = C64::new(1.0, 0.0);
        }
        j
    }

    /// The coordinate ξ expanded at xi0.
    pub fn var_xi(order: usize, xi0: f64) -> Self {
        let mut j = Self::zero(order);
        j.c[idx(0, 0)] = C64::new(xi0, 0.0);
        if order >= 1 {
            j.c[idx(0, 1)] = C64::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> C64 {
        self.c[0]
    }

    /// Taylor coefficient of x^a ξ^b.
    pub fn coeff(&self, a: usize, b: usize) -> C64 {
        if a + b > self.order {
            C64::new(0.0, 0.0)
        } else {
            self.c[idx(a, b)]
        }
    }

    /// Mixed partial derivative ∂x^a ∂ξ^b at the base point.
    pub fn derivative(&self, a: usize, b: usize) -> C64 {
        let mut f = 1.0f64;
        for k in 2..=a {
            f *= k as f64;
        }
        for k in 2..=b {
            f *= k as f64;
        }
        self.coeff(a, b) * f
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (o, v) in out.c.iter_mut().zip(&other.c) {
            *o += v;
        }
        out
    }

    pub fn sub(&self, other: &Jet2) -> Jet2 {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (o, v) in out.c.iter_mut().zip(&other.c) {
            *o -= v;
        }
        out
    }

    pub fn scale(&self, s: C64) -> Jet2 {
        let mut out = self.clone();
        for o in out.c.iter_mut() {
            *o *= s;
        }
        out
    }

    pub fn mul(&self, other: &Jet2) -> Jet2 {
        assert_eq!(self.order, other.order);
        let j = self.order;
        let mut out = Jet2::zero(j);
        for d1 in 0..=j {
            for a1 in (0..=d1).rev() {
                let b1 = d1 - a1;
                let v1 = self.c[idx(a1, b1)];
                if v1.norm_sqr() == 0.0 {
                    continue;
                }
                for d2 in 0..=(j - d1) {
                    for a2 in (0..=d2).rev() {
                        let b2 = d2 - a2;
                        let v2 = other.c[idx(a2, b2)];
                        if v2.norm_sqr() == 0.0 {
                            continue;
                        }
                        out.c[idx(a1 + a2, b1 + b2)] += v1 * v2;
                    }
                }
            }
        }
        out
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, n: usize) -> Jet2 {
        let mut out = Jet2::constant(self.order, C64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Compose with an analytic function given its Taylor coefficients
    /// `taylor[d] = g^(d)(u0)/d!` at `u0 = self.value()`.
    pub fn compose(&self, taylor: &[C64]) -> Jet2 {
        assert!(taylor.len() >= self.order + 1);
        let mut hat = self.clone();
        hat.c[0] = C64::new(0.0, 0.0);
        let mut out = Jet2::constant(self.order, taylor[self.order]);
        for d in (0..self.order).rev() {
            out = out.mul(&hat);
            out.c[0] += taylor[d];
        }
        out
    }

    /// 1/self; requires nonzero value at the base point.
    pub fn recip(&self) -> Jet2 {
        let u0 = self.value();
        assert!(u0.norm() > 0.0, "jet reciprocal at a zero");
        let mut taylor = Vec::with_capacity(self.order + 1);
        let mut t = 1.0 / u0;
        for _ in 0..=self.order {
            taylor.push(t);
            t = -t / u0;
        }
        self.compose(&taylor)
    }

    /// √self for a jet with positive real value.
    pub fn sqrt(&self) -> Jet2 {
        let u0 = self.value();
        assert!(u0.im == 0.0 && u0.re > 0.0, "jet sqrt needs positive real base");
        self.pow_real(0.5)
    }

    /// self^p for real p, for a jet with positive real value.
    pub fn pow_real(&self, p: f64) -> Jet2 {
        let u0 = self.value().re;
        assert!(u0 > 0.0, "jet pow needs positive real base");
        let mut taylor = Vec::with_capacity(self.order + 1);
        let mut binom = 1.0f64;
        for d in 0..=self.order {
            taylor.push(C64::new(binom * u0.powf(p - d as f64), 0.0));
            binom *= (p - d as f64) / (d as f64 + 1.0);
        }
        self.compose(&taylor)
    }

    /// exp(self).
    pub fn exp(&self) -> Jet2 {
        let u0 = self.value();
        let e0 = C64::new(u0.re.exp(), 0.0) * C64::new(u0.im.cos(), u0.im.sin());
        let mut taylor = Vec::with_capacity(self.order + 1);
        let mut fact = 1.0f64;
        for d in 0..=self.order {
            if d > 0 {
                fact *= d as f64;
            }
            taylor.push(e0 / fact);
        }
        self.compose(&taylor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn polynomial_product_derivatives() {
        // f = (x² ξ + 3) at (2, -1): ∂x∂ξ f = 2x = 4, ∂x²∂ξ f = 2
        let x = Jet2::var_x(4, 2.0);
        let xi = Jet2::var_xi(4, -1.0);
        let f = x.mul(&x).mul(&xi).add(&Jet2::constant(4, c(3.0)));
        assert_abs_diff_eq!(f.value().re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.derivative(1, 1).re, 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.derivative(2, 1).re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.derivative(3, 0).re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn exp_of_quadratic_matches_closed_form() {
        // g = exp(-(x²+ξ²)) at (0.7, -0.3); ∂x g = -2x g, ∂x² g = (4x²-2) g
        let (x0, xi0) = (0.7, -0.3);
        let x = Jet2::var_x(6, x0);
        let xi = Jet2::var_xi(6, xi0);
        let u = x.mul(&x).add(&xi.mul(&xi)).scale(c(-1.0));
        let g = u.exp();
        let g0 = (-(x0 * x0 + xi0 * xi0) as f64).exp();
        assert_abs_diff_eq!(g.value().re, g0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.derivative(1, 0).re, -2.0 * x0 * g0, epsilon = 1e-13);
        assert_abs_diff_eq!(
            g.derivative(2, 0).re,
            (4.0 * x0 * x0 - 2.0) * g0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            g.derivative(1, 1).re,
            4.0 * x0 * xi0 * g0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn reciprocal_of_complex_jet() {
        // f = 1/(x + iξ) at (1, 1): ∂x f = -1/(x+iξ)²
        let x = Jet2::var_x(5, 1.0);
        let xi = Jet2::var_xi(5, 1.0);
        let w = x.add(&xi.scale(C64::new(0.0, 1.0)));
        let f = w.recip();
        let w0 = C64::new(1.0, 1.0);
        let expect = -1.0 / (w0 * w0);
        let got = f.derivative(1, 0);
        assert_abs_diff_eq!(got.re, expect.re, epsilon = 1e-13);
        assert_abs_diff_eq!(got.im, expect.im, epsilon = 1e-13);
    }

    #[test]
    fn sqrt_jet_second_derivative() {
        // r = √(x²+ξ²) at (3, 4): r = 5, ∂x r = x/r, ∂x² r = ξ²/r³
        let x = Jet2::var_x(4, 3.0);
        let xi = Jet2::var_xi(4, 4.0);
        let r = x.mul(&x).add(&xi.mul(&xi)).sqrt();
        assert_abs_diff_eq!(r.value().re, 5.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.derivative(1, 0).re, 3.0 / 5.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.derivative(2, 0).re, 16.0 / 125.0, epsilon = 1e-12);
    }

    #[test]
    fn high_order_power_matches_binomial() {
        // (1 + x)^{10} at x0 = 0: coefficient of x^k is C(10, k)
        let x = Jet2::var_x(10, 0.0);
        let f = x.add(&Jet2::constant(10, c(1.0))).powi(10);
        let mut binom = 1.0f64;
        for k in 0..=10usize {
            assert_abs_diff_eq!(f.coeff(k, 0).re, binom, epsilon = 1e-9);
            binom *= (10 - k) as f64 / (k as f64 + 1.0);
        }
    }
}
