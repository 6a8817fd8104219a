//! Time-independent angular harmonic sums with arbitrary radial parts.
//!
//! [`AngleTimeSymbol`](super::AngleTimeSymbol) keeps the radial dependence in
//! a closed set of profiles so that averaging and bracketing stay exact at
//! coefficient level. Products, general Poisson brackets and action-weighted
//! symbols (the conjugate operator `a = {⟨v0⟩, h0}·h0`) leave that set, so
//! they are carried as harmonic series with boxed radial evaluators. These
//! feed the quantizer and the grid checks; they are not serialized.

use std::sync::Arc;

use super::AngleTimeSymbol;
use crate::error::CoreError;
use crate::{Result, C64};

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One harmonic `coeff · e^{inθ} · radial(I)`.
#[derive(Clone)]
pub struct RadialTerm {
    pub n: i32,
    pub coeff: C64,
    radial: RadialFn,
    radial_deriv: RadialFn,
}

impl RadialTerm {
    pub fn new(
        n: i32,
        coeff: C64,
        radial: impl Fn(f64) -> f64 + Send + Sync + 'static,
        radial_deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        RadialTerm {
            n,
            coeff,
            radial: Arc::new(radial),
            radial_deriv: Arc::new(radial_deriv),
        }
    }

    pub fn radial(&self, action: f64) -> f64 {
        (self.radial)(action)
    }

    pub fn radial_deriv(&self, action: f64) -> f64 {
        (self.radial_deriv)(action)
    }
}

impl std::fmt::Debug for RadialTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RadialTerm(n={}, coeff={})", self.n, self.coeff)
    }
}

/// Sum of angular harmonics with evaluable radial parts (time-independent).
#[derive(Debug, Clone, Default)]
pub struct HarmonicSeries {
    pub terms: Vec<RadialTerm>,
}

impl HarmonicSeries {
    pub fn new(terms: Vec<RadialTerm>) -> Self {
        HarmonicSeries { terms }
    }

    /// Lift a time-independent [`AngleTimeSymbol`].
    pub fn from_symbol(symbol: &AngleTimeSymbol) -> Result<Self> {
        if !symbol.is_time_independent() {
            return Err(CoreError::InvalidInput(
                "HarmonicSeries::from_symbol expects a time-independent symbol".into(),
            ));
        }
        let terms = symbol
            .terms()
            .iter()
            .map(|t| {
                let p1 = t.profile.clone();
                let p2 = t.profile.clone();
                RadialTerm {
                    n: t.n,
                    coeff: t.coeff,
                    radial: Arc::new(move |i| p1.eval(i)),
                    radial_deriv: Arc::new(move |i| p2.deriv(i)),
                }
            })
            .collect();
        Ok(HarmonicSeries { terms })
    }

    pub fn evaluate(&self, theta: f64, action: f64) -> C64 {
        self.terms
            .iter()
            .map(|t| {
                let a = t.n as f64 * theta;
                t.coeff * C64::new(a.cos(), a.sin()) * t.radial(action)
            })
            .sum()
    }

    pub fn max_harmonic(&self) -> i32 {
        self.terms.iter().map(|t| t.n.abs()).max().unwrap_or(0)
    }

    /// Multiply every radial part by the action (the `· h0` factor of the
    /// conjugate-operator symbol; `h̃0 = I` exactly).
    pub fn times_action(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let r = t.radial.clone();
                let dr = t.radial_deriv.clone();
                let r2 = t.radial.clone();
                RadialTerm {
                    n: t.n,
                    coeff: t.coeff,
                    radial: Arc::new(move |i| i * r(i)),
                    radial_deriv: Arc::new(move |i| r2(i) + i * dr(i)),
                }
            })
            .collect();
        HarmonicSeries { terms }
    }

    /// Pointwise product (harmonics add, radial parts multiply).
    pub fn product(&self, other: &HarmonicSeries) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let (ra, rb) = (a.radial.clone(), b.radial.clone());
                let (ra2, rb2) = (a.radial.clone(), b.radial.clone());
                let (da, db) = (a.radial_deriv.clone(), b.radial_deriv.clone());
                terms.push(RadialTerm {
                    n: a.n + b.n,
                    coeff: a.coeff * b.coeff,
                    radial: Arc::new(move |i| ra(i) * rb(i)),
                    radial_deriv: Arc::new(move |i| da(i) * rb2(i) + ra2(i) * db(i)),
                });
            }
        }
        HarmonicSeries { terms }
    }

    /// Poisson bracket `{self, other}` in the convention
    /// `{f, g} = ∂_ξ f ∂_x g − ∂_x f ∂_ξ g`, which in action-angle variables
    /// reads `∂_I f ∂_θ g − ∂_θ f ∂_I g`.
    pub fn poisson(&self, other: &HarmonicSeries) -> Self {
        let mut terms = Vec::with_capacity(2 * self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                // ∂_I a · ∂_θ b : radial a' b, coefficient i n_b
                let (da, rb) = (a.radial_deriv.clone(), b.radial.clone());
                terms.push(RadialTerm {
                    n: a.n + b.n,
                    coeff: a.coeff * b.coeff * C64::new(0.0, b.n as f64),
                    radial: Arc::new(move |i| da(i) * rb(i)),
                    radial_deriv: Arc::new(|_| f64::NAN),
                });
                // − ∂_θ a · ∂_I b : radial a b', coefficient −i n_a
                let (ra, db) = (a.radial.clone(), b.radial_deriv.clone());
                terms.push(RadialTerm {
                    n: a.n + b.n,
                    coeff: a.coeff * b.coeff * C64::new(0.0, -(a.n as f64)),
                    radial: Arc::new(move |i| ra(i) * db(i)),
                    radial_deriv: Arc::new(|_| f64::NAN),
                });
            }
        }
        HarmonicSeries { terms }
    }

    /// `{self, h0} = −∂_θ self`: exact coefficient rule, radial parts kept.
    pub fn bracket_with_h0(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| RadialTerm {
                n: t.n,
                coeff: t.coeff * C64::new(0.0, -(t.n as f64)),
                radial: t.radial.clone(),
                radial_deriv: t.radial_deriv.clone(),
            })
            .collect();
        HarmonicSeries { terms }
    }
}
