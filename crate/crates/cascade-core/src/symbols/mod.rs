//! Classical phase-space symbols and the classical-side calculus.
//!
//! A symbol is a finite Fourier series in time `t` and angle `θ`,
//! `v(t, x, ξ) = Σ c_{m,n} e^{imt} e^{inθ} ρ_{m,n}(I)`, in the action-angle
//! coordinates `x = √(2I) sin θ`, `ξ = √(2I) cos θ`. Radial profiles are
//! canned smooth bumps, all vanishing for `I ≤ ¼`, so the angular coordinate
//! singularity at the origin never enters an evaluation.

mod general;
mod seminorm;

pub use general::{HarmonicSeries, RadialTerm};
pub use seminorm::{distance, seminorm, SeminormGrid, DISTANCE_J_MAX};

use crate::error::CoreError;
use crate::{Result, C64};
use serde::{Deserialize, Serialize};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A point (x, ξ) of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub xi: f64,
}

impl PhasePoint {
    pub fn new(x: f64, xi: f64) -> Self {
        debug_assert!(x.is_finite() && xi.is_finite());
        PhasePoint { x, xi }
    }

    /// Action I = (x² + ξ²)/2.
    pub fn action(&self) -> f64 {
        0.5 * (self.x * self.x + self.xi * self.xi)
    }
}

/// Action-angle coordinates (θ, I) with θ ∈ [0, 2π), I ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionAngle {
    theta: f64,
    action: f64,
}

impl ActionAngle {
    pub fn new(theta: f64, action: f64) -> Self {
        assert!(action >= 0.0, "action must be nonnegative");
        ActionAngle {
            theta: wrap_angle(theta),
            action,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn action(&self) -> f64 {
        self.action
    }
}

/// Wrap an angle to [0, 2π).
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TWO_PI;
    if t < 0.0 {
        t += TWO_PI;
    }
    // `%` can return exactly 2π after the correction when theta = -ε
    if t >= TWO_PI {
        t -= TWO_PI;
    }
    t
}

/// Rotation by `tau` under the harmonic flow
/// `φ^τ(x, ξ) = (x cos τ + ξ sin τ, −x sin τ + ξ cos τ)`;
/// in action-angle coordinates θ ↦ θ + τ with I fixed.
pub fn harmonic_flow(p: PhasePoint, tau: f64) -> PhasePoint {
    let (s, c) = tau.sin_cos();
    PhasePoint::new(p.x * c + p.xi * s, -p.x * s + p.xi * c)
}

/// Action-angle chart, defined away from the origin.
pub fn to_action_angle(p: PhasePoint) -> Result<ActionAngle> {
    let action = p.action();
    if action == 0.0 {
        return Err(CoreError::OriginActionAngle);
    }
    Ok(ActionAngle::new(f64::atan2(p.x, p.xi), action))
}

/// Inverse chart: x = √(2I) sin θ, ξ = √(2I) cos θ.
pub fn from_action_angle(aa: ActionAngle) -> PhasePoint {
    let r = (2.0 * aa.action).sqrt();
    PhasePoint::new(r * aa.theta.sin(), r * aa.theta.cos())
}

/// Canned radial profiles. All are smooth and vanish for I ≤ ¼.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialProfile {
    /// Smooth cutoff: ≡ 0 for I ≤ ¼, ≡ 1 for I ≥ ½ (transition on [¼, ½]).
    CutoffOne,
    /// `(1 + 2I)^{-μ}` times the cutoff; the lower-order class.
    PowerDecay(f64),
    /// Smooth bump supported in ¼ ≤ I ≤ 1, ≡ 1 on [½, ¾].
    CompactBump,
}

/// `exp(-1/w)` glue, extended by 0 for w ≤ 0.
fn glue(w: f64) -> f64 {
    if w <= 0.0 {
        0.0
    } else {
        (-1.0 / w).exp()
    }
}

/// Smooth step: 0 for w ≤ 0, 1 for w ≥ 1.
fn smoothstep(w: f64) -> f64 {
    if w <= 0.0 {
        0.0
    } else if w >= 1.0 {
        1.0
    } else {
        let a = glue(w);
        let b = glue(1.0 - w);
        a / (a + b)
    }
}

/// Smooth transition from 1 at w ≤ 0 to 0 at w ≥ 1.
pub fn smooth_rolloff(w: f64) -> f64 {
    smoothstep(1.0 - w)
}

/// Derivative of [`smoothstep`].
fn smoothstep_deriv(w: f64) -> f64 {
    if w <= 0.0 || w >= 1.0 {
        0.0
    } else {
        let a = glue(w);
        let b = glue(1.0 - w);
        let da = a / (w * w);
        let db = -b / ((1.0 - w) * (1.0 - w));
        (da * b - a * db) / ((a + b) * (a + b))
    }
}

impl RadialProfile {
    pub fn eval(&self, action: f64) -> f64 {
        match self {
            RadialProfile::CutoffOne => smoothstep(4.0 * action - 1.0),
            RadialProfile::PowerDecay(mu) => {
                (1.0 + 2.0 * action).powf(-mu) * smoothstep(4.0 * action - 1.0)
            }
            RadialProfile::CompactBump => {
                smoothstep(4.0 * action - 1.0) * smoothstep(4.0 - 4.0 * action)
            }
        }
    }

    /// d/dI of the profile.
    pub fn deriv(&self, action: f64) -> f64 {
        match self {
            RadialProfile::CutoffOne => 4.0 * smoothstep_deriv(4.0 * action - 1.0),
            RadialProfile::PowerDecay(mu) => {
                let s = smoothstep(4.0 * action - 1.0);
                let ds = 4.0 * smoothstep_deriv(4.0 * action - 1.0);
                let p = (1.0 + 2.0 * action).powf(-mu);
                let dp = -mu * 2.0 * (1.0 + 2.0 * action).powf(-mu - 1.0);
                dp * s + p * ds
            }
            RadialProfile::CompactBump => {
                let up = smoothstep(4.0 * action - 1.0);
                let dup = 4.0 * smoothstep_deriv(4.0 * action - 1.0);
                let dn = smoothstep(4.0 - 4.0 * action);
                let ddn = -4.0 * smoothstep_deriv(4.0 - 4.0 * action);
                dup * dn + up * ddn
            }
        }
    }

    /// True when the profile is identically 1 for I ≥ ½ (the homogeneous
    /// class used for principal symbols).
    pub fn is_homogeneous(&self) -> bool {
        matches!(self, RadialProfile::CutoffOne)
    }

    fn rank(&self) -> (u8, u64) {
        match self {
            RadialProfile::CutoffOne => (0, 0),
            RadialProfile::PowerDecay(mu) => (1, mu.to_bits()),
            RadialProfile::CompactBump => (2, 0),
        }
    }
}

/// One Fourier term `c e^{imt} e^{inθ} ρ(I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTerm {
    pub m: i32,
    pub n: i32,
    pub coeff: C64,
    pub profile: RadialProfile,
}

/// A classical symbol as a finite angle-time Fourier series with radial
/// profiles. Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolJson", into = "SymbolJson")]
pub struct AngleTimeSymbol {
    terms: Vec<SymbolTerm>,
}

impl AngleTimeSymbol {
    pub fn zero() -> Self {
        AngleTimeSymbol { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<SymbolTerm>) -> Self {
        let mut s = AngleTimeSymbol { terms };
        s.canonicalize();
        s
    }

    /// Single-term constructor.
    pub fn term(m: i32, n: i32, coeff: C64, profile: RadialProfile) -> Self {
        Self::from_terms(vec![SymbolTerm {
            m,
            n,
            coeff,
            profile,
        }])
    }

    /// `c · ρ(I)` with no angular or time dependence.
    pub fn constant(c: f64) -> Self {
        Self::term(0, 0, C64::new(c, 0.0), RadialProfile::CutoffOne)
    }

    /// `sin(nθ) · CutoffOne`.
    pub fn sin_ntheta(n: i32) -> Self {
        let half_over_i = C64::new(0.0, -0.5); // 1/(2i)
        Self::from_terms(vec![
            SymbolTerm {
                m: 0,
                n,
                coeff: half_over_i,
                profile: RadialProfile::CutoffOne,
            },
            SymbolTerm {
                m: 0,
                n: -n,
                coeff: -half_over_i,
                profile: RadialProfile::CutoffOne,
            },
        ])
    }

    /// `cos(nθ) · CutoffOne`.
    pub fn cos_ntheta(n: i32) -> Self {
        let half = C64::new(0.5, 0.0);
        Self::from_terms(vec![
            SymbolTerm {
                m: 0,
                n,
                coeff: half,
                profile: RadialProfile::CutoffOne,
            },
            SymbolTerm {
                m: 0,
                n: -n,
                coeff: half,
                profile: RadialProfile::CutoffOne,
            },
        ])
    }

    /// Multiply by `cos(mt)`.
    pub fn modulate_cos_time(&self, m: i32) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            for dm in [m, -m] {
                terms.push(SymbolTerm {
                    m: t.m + dm,
                    n: t.n,
                    coeff: 0.5 * t.coeff,
                    profile: t.profile.clone(),
                });
            }
        }
        Self::from_terms(terms)
    }

    /// Multiply by `sin(mt)`.
    pub fn modulate_sin_time(&self, m: i32) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            for (dm, s) in [(m, C64::new(0.0, -0.5)), (-m, C64::new(0.0, 0.5))] {
                terms.push(SymbolTerm {
                    m: t.m + dm,
                    n: t.n,
                    coeff: s * t.coeff,
                    profile: t.profile.clone(),
                });
            }
        }
        Self::from_terms(terms)
    }

    /// The density perturbation `w0 = cos(2t) · η(x,ξ) · xξ/(x²+ξ²)`,
    /// i.e. `cos(2t) · ½ sin(2θ) · CutoffOne` in angle form.
    pub fn w0() -> Self {
        Self::sin_ntheta(2).scale(0.5).modulate_cos_time(2)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(C64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| SymbolTerm {
                coeff: s * t.coeff,
                ..t.clone()
            })
            .collect();
        Self::from_terms(terms)
    }

    pub fn add(&self, other: &AngleTimeSymbol) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> &[SymbolTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_time_harmonic(&self) -> i32 {
        self.terms.iter().map(|t| t.m.abs()).max().unwrap_or(0)
    }

    pub fn max_angle_harmonic(&self) -> i32 {
        self.terms.iter().map(|t| t.n.abs()).max().unwrap_or(0)
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.iter().all(|t| t.m == 0)
    }

    /// The positively homogeneous (CutoffOne-profile) part v0; the rest is
    /// the lower-order class.
    pub fn principal_part(&self) -> Self {
        AngleTimeSymbol {
            terms: self
                .terms
                .iter()
                .filter(|t| t.profile.is_homogeneous())
                .cloned()
                .collect(),
        }
    }

    /// Reality check: `c_{-m,-n} = conj(c_{m,n})` with matching profiles.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| {
            let mirror = self
                .terms
                .iter()
                .find(|u| u.m == -t.m && u.n == -t.n && u.profile == t.profile)
                .map(|u| u.coeff)
                .unwrap_or_else(|| C64::new(0.0, 0.0));
            (mirror - t.coeff.conj()).norm() <= tol
        })
    }

    pub fn validate_real(&self) -> Result<()> {
        if self.is_real(1e-12) {
            Ok(())
        } else {
            Err(CoreError::NotRealSymbol(format!(
                "coefficient pairs violate c(-m,-n) = conj(c(m,n)) in {self:?}"
            )))
        }
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| {
            (a.m, a.n, a.profile.rank()).cmp(&(b.m, b.n, b.profile.rank()))
        });
        let mut merged: Vec<SymbolTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.m == t.m && last.n == t.n && last.profile == t.profile => {
                    last.coeff += t.coeff;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff.norm() > 0.0);
        self.terms = merged;
    }

    /// Pointwise value of the Fourier sum at time `t` and phase point `p`.
    ///
    /// Profiles vanish for I ≤ ¼, so the origin needs no special angle.
    pub fn evaluate(&self, t: f64, p: PhasePoint) -> C64 {
        let action = p.action();
        if action <= 0.25 {
            return C64::new(0.0, 0.0);
        }
        let theta = f64::atan2(p.x, p.xi);
        let mut acc = C64::new(0.0, 0.0);
        for term in &self.terms {
            let phase = term.m as f64 * t + term.n as f64 * theta;
            acc += term.coeff * C64::new(phase.cos(), phase.sin()) * term.profile.eval(action);
        }
        acc
    }

    /// Real part of [`Self::evaluate`]; exact for real symbols.
    pub fn evaluate_real(&self, t: f64, p: PhasePoint) -> f64 {
        self.evaluate(t, p).re
    }

    /// Resonant average with respect to the harmonic flow.
    ///
    /// In the rotated frame the (m, n) term carries `e^{i(m+n)t} e^{inθ}`,
    /// so the time average keeps exactly the resonant pairs m = −n:
    /// output coefficients `d_n = c_{-n,n}`, profiles unchanged, no time
    /// harmonics. Real input gives real output.
    pub fn resonant_average(&self) -> Result<AngleTimeSymbol> {
        let resonant: Vec<&SymbolTerm> = self.terms.iter().filter(|t| t.m + t.n == 0).collect();
        // mirror pairs must carry the same profile kind or the result would
        // not satisfy the reality pairing
        for t in &resonant {
            if let Some(u) = resonant
                .iter()
                .find(|u| u.m == -t.m && u.n == -t.n && u.coeff.norm() > 0.0)
            {
                if u.profile != t.profile
                    && !resonant
                        .iter()
                        .any(|w| w.m == -t.m && w.n == -t.n && w.profile == t.profile)
                {
                    return Err(CoreError::IllFormedSymbol(format!(
                        "resonant pair ({}, {}) and ({}, {}) carry different profiles",
                        t.m, t.n, u.m, u.n
                    )));
                }
            }
        }
        let terms = resonant
            .into_iter()
            .map(|t| SymbolTerm {
                m: 0,
                n: t.n,
                coeff: t.coeff,
                profile: t.profile.clone(),
            })
            .collect();
        Ok(AngleTimeSymbol::from_terms(terms))
    }

    /// Poisson bracket `{v, h0}` with the oscillator `h0 = ½(x²+ξ²)` for a
    /// time-independent symbol.
    ///
    /// In action-angle coordinates `{f, h0} = −∂_θ f` exactly — `h̃0 = I`
    /// makes the ∂_I term drop for every radial profile — so the coefficient
    /// rule `d_n = −i n c_n` holds with profiles unchanged.
    pub fn poisson_bracket_h0(&self) -> Result<AngleTimeSymbol> {
        if !self.is_time_independent() {
            return Err(CoreError::InvalidInput(
                "poisson_bracket_h0 expects a time-independent symbol".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| SymbolTerm {
                m: 0,
                n: t.n,
                coeff: C64::new(0.0, -(t.n as f64)) * t.coeff,
                profile: t.profile.clone(),
            })
            .collect();
        Ok(AngleTimeSymbol::from_terms(terms))
    }

    /// Composition with the harmonic flow φ^τ (θ ↦ θ + τ): the coefficient
    /// shift `c_n ↦ c_n e^{inτ}`.
    pub fn rotate_angle(&self, tau: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let a = t.n as f64 * tau;
                SymbolTerm {
                    coeff: t.coeff * C64::new(a.cos(), a.sin()),
                    ..t.clone()
                }
            })
            .collect();
        Self::from_terms(terms)
    }

    /// Angular restriction at I = 1 of a time-independent symbol, as the
    /// complex trig polynomial `θ ↦ Σ c_n ρ_n(1) e^{inθ}`.
    pub fn angular_polynomial(&self) -> Vec<(i32, C64)> {
        assert!(self.is_time_independent());
        self.terms
            .iter()
            .map(|t| (t.n, t.coeff * t.profile.eval(1.0)))
            .collect()
    }
}

/// Evaluate a list of angular harmonics at θ.
pub fn eval_angular(poly: &[(i32, C64)], theta: f64) -> C64 {
    poly.iter()
        .map(|(n, c)| {
            let a = *n as f64 * theta;
            c * C64::new(a.cos(), a.sin())
        })
        .sum()
}

// ---------------------------------------------------------------------------
// resonant average oracle
// ---------------------------------------------------------------------------

/// A function of θ sampled on a uniform grid at fixed action.
#[derive(Debug, Clone)]
pub struct AngleGrid {
    pub action: f64,
    pub thetas: Vec<f64>,
    pub values: Vec<C64>,
}

/// Trapezoid-rule resonant average on a uniform (t, θ) grid at fixed action.
/// Exact for trigonometric polynomials once the node counts clear the
/// bandwidth; below `4·(max harmonic)+1` nodes it refuses to run.
pub fn resonant_average_oracle(
    symbol: &AngleTimeSymbol,
    t_nodes: usize,
    theta_nodes: usize,
    action: f64,
) -> Result<AngleGrid> {
    let max_h = symbol.max_time_harmonic().max(symbol.max_angle_harmonic()) as usize;
    let needed = 4 * max_h + 1;
    if t_nodes < needed || theta_nodes < needed {
        return Err(CoreError::InsufficientNodes {
            needed,
            got: t_nodes.min(theta_nodes),
        });
    }
    let mut thetas = Vec::with_capacity(theta_nodes);
    let mut values = Vec::with_capacity(theta_nodes);
    for j in 0..theta_nodes {
        let theta = TWO_PI * j as f64 / theta_nodes as f64;
        let mut acc = C64::new(0.0, 0.0);
        for l in 0..t_nodes {
            let t = TWO_PI * l as f64 / t_nodes as f64;
            let p = from_action_angle(ActionAngle::new(theta + t, action));
            acc += symbol.evaluate(t, p);
        }
        thetas.push(theta);
        values.push(acc / t_nodes as f64);
    }
    Ok(AngleGrid {
        action,
        thetas,
        values,
    })
}

// ---------------------------------------------------------------------------
// transporter condition and genericity
// ---------------------------------------------------------------------------

/// Verdict of the transporter test.
#[derive(Debug, Clone)]
pub struct TransporterReport {
    pub verdict: bool,
    /// Angle maximizing |∂_θ ⟨v0⟩| at I = 1.
    pub witness_theta: f64,
    /// Value of |∂_θ ⟨v0⟩| at the witness.
    pub witness_value: f64,
    /// The grid maximum itself (lower bound of the true sup).
    pub rho_bound: f64,
}

pub const TRANSPORTER_TOL: f64 = 1e-8;
pub const TRANSPORTER_GRID: usize = 1024;

/// Decide whether `{⟨v0⟩, h0} ≢ 0` outside the origin: the sufficient
/// condition for unbounded Sobolev growth. Scans |∂_θ ⟨v0⟩| at I = 1 on a
/// θ grid.
pub fn is_transporter(v: &AngleTimeSymbol, tol: f64, grid: usize) -> Result<TransporterReport> {
    v.validate_real()?;
    let avg = v.principal_part().resonant_average()?;
    let bracket = avg.poisson_bracket_h0()?;
    let poly = bracket.angular_polynomial();
    let grid = grid.max(4 * (avg.max_angle_harmonic().unsigned_abs() as usize) + 1).max(16);
    let mut best = (0.0f64, 0.0f64);
    for j in 0..grid {
        let theta = TWO_PI * j as f64 / grid as f64;
        let val = eval_angular(&poly, theta).norm();
        if val > best.1 {
            best = (theta, val);
        }
    }
    Ok(TransporterReport {
        verdict: best.1 > tol,
        witness_theta: best.0,
        witness_value: best.1,
        rho_bound: best.1,
    })
}

/// Independent route to the same verdict: some resonant coefficient d_n,
/// n ≠ 0, exceeds tol/|n|.
pub fn transporter_by_coefficients(v: &AngleTimeSymbol, tol: f64) -> Result<bool> {
    let avg = v.principal_part().resonant_average()?;
    Ok(avg
        .terms()
        .iter()
        .any(|t| t.n != 0 && t.coeff.norm() * t.n.unsigned_abs() as f64 > tol))
}

/// Perturb `v` by `ε0 · w0`; for ε0 > 0 the result satisfies the transporter
/// condition whenever `v` does not (the density mechanism).
pub fn genericity_perturb(v: &AngleTimeSymbol, eps0: f64) -> AngleTimeSymbol {
    if eps0 == 0.0 {
        return v.clone();
    }
    v.add(&AngleTimeSymbol::w0().scale(eps0))
}

// ---------------------------------------------------------------------------
// modulation order (time-modulated transporters from static symbols)
// ---------------------------------------------------------------------------

/// Result of the modulation-order search.
#[derive(Debug, Clone)]
pub struct Modulation {
    pub n: i32,
    pub vplus: AngleTimeSymbol,
    pub vminus: AngleTimeSymbol,
}

/// For a time-independent real `ṽ` with a non-constant angular part, find the
/// smallest n ≥ 1 whose angular harmonics ±n are present; then
/// `cos(nt) · ṽ` satisfies the transporter condition. Returns the flow
/// Fourier components `ṽ_n^±` as symbols.
pub fn modulation_order(vtilde: &AngleTimeSymbol, tol: f64) -> Result<Modulation> {
    if !vtilde.is_time_independent() {
        return Err(CoreError::InvalidInput(
            "modulation_order expects a time-independent symbol".into(),
        ));
    }
    vtilde.validate_real()?;
    let max_n = vtilde.max_angle_harmonic();
    for n in 1..=max_n.max(0) {
        let (vplus, vminus) = modulation_components(vtilde, n);
        let weight: f64 = vplus.terms().iter().map(|t| t.coeff.norm()).sum();
        if weight <= tol {
            continue;
        }
        return Ok(Modulation { n, vplus, vminus });
    }
    Err(CoreError::NoAdmissibleModulation)
}

/// Flow Fourier components at a given order:
/// `ṽ_n^+ = ½(c_n e^{inθ} ρ_n + c_{-n} e^{-inθ} ρ_{-n})` and
/// `ṽ_n^- = (c_{-n} e^{-inθ} ρ_{-n} − c_n e^{inθ} ρ_n)/(2i)`.
pub fn modulation_components(
    vtilde: &AngleTimeSymbol,
    n: i32,
) -> (AngleTimeSymbol, AngleTimeSymbol) {
    let plus: Vec<SymbolTerm> = vtilde
        .terms()
        .iter()
        .filter(|t| t.n == n || t.n == -n)
        .map(|t| SymbolTerm {
            coeff: 0.5 * t.coeff,
            ..t.clone()
        })
        .collect();
    let minus: Vec<SymbolTerm> = vtilde
        .terms()
        .iter()
        .filter(|t| t.n == n || t.n == -n)
        .map(|t| {
            let sign = if t.n == -n { 1.0 } else { -1.0 };
            SymbolTerm {
                coeff: t.coeff * C64::new(0.0, -0.5 * sign),
                ..t.clone()
            }
        })
        .collect();
    (
        AngleTimeSymbol::from_terms(plus),
        AngleTimeSymbol::from_terms(minus),
    )
}

/// Quadrature oracle for the flow Fourier components:
/// `ṽ_n^±(p) = (1/2π) ∫ cos/sin(nt) ṽ(φ^t(p)) dt` by the trapezoid rule.
pub fn modulation_component_oracle(
    vtilde: &AngleTimeSymbol,
    n: i32,
    cosine: bool,
    t_nodes: usize,
    p: PhasePoint,
) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for l in 0..t_nodes {
        let t = TWO_PI * l as f64 / t_nodes as f64;
        let weight = if cosine {
            (n as f64 * t).cos()
        } else {
            (n as f64 * t).sin()
        };
        acc += weight * vtilde.evaluate(0.0, harmonic_flow(p, t));
    }
    acc / t_nodes as f64
}

/// Residuals of the two structural identities behind the modulation lemma:
/// `{h0, ṽ_n^+} = n ṽ_n^-` and `ṽ_n^-(p) = ṽ_n^+(φ^{π/(2n)} p)`.
#[derive(Debug, Clone)]
pub struct ModulationIdentityReport {
    pub bracket_residual: f64,
    pub shift_residual: f64,
}

pub fn verify_lemma52_identities(
    vtilde: &AngleTimeSymbol,
    n: i32,
    theta_nodes: usize,
) -> Result<ModulationIdentityReport> {
    if !vtilde.is_time_independent() {
        return Err(CoreError::InvalidInput(
            "verify_lemma52_identities expects a time-independent symbol".into(),
        ));
    }
    let (vplus, vminus) = modulation_components(vtilde, n);
    // {h0, f} = −{f, h0} = +∂_θ f
    let lhs = vplus.poisson_bracket_h0()?.scale(-1.0);
    let shift = std::f64::consts::PI / (2.0 * n as f64);
    let mut bracket_residual = 0.0f64;
    let mut shift_residual = 0.0f64;
    for &action in &[0.6, 1.0, 2.5, 7.0] {
        for j in 0..theta_nodes {
            let theta = TWO_PI * j as f64 / theta_nodes as f64;
            let p = from_action_angle(ActionAngle::new(theta, action));
            let r1 = (lhs.evaluate(0.0, p) - (n as f64) * vminus.evaluate(0.0, p)).norm();
            let r2 = (vminus.evaluate(0.0, p) - vplus.evaluate(0.0, harmonic_flow(p, shift)))
                .norm();
            bracket_residual = bracket_residual.max(r1);
            shift_residual = shift_residual.max(r2);
        }
    }
    Ok(ModulationIdentityReport {
        bracket_residual,
        shift_residual,
    })
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoeffRecord {
    m: i32,
    n: i32,
    re: f64,
    im: f64,
    profile: RadialProfile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SymbolJson {
    coeffs: Vec<CoeffRecord>,
}

impl From<AngleTimeSymbol> for SymbolJson {
    fn from(s: AngleTimeSymbol) -> Self {
        SymbolJson {
            coeffs: s
                .terms
                .into_iter()
                .map(|t| CoeffRecord {
                    m: t.m,
                    n: t.n,
                    re: t.coeff.re,
                    im: t.coeff.im,
                    profile: t.profile,
                })
                .collect(),
        }
    }
}

impl TryFrom<SymbolJson> for AngleTimeSymbol {
    type Error = CoreError;

    fn try_from(j: SymbolJson) -> Result<Self> {
        let s = AngleTimeSymbol::from_terms(
            j.coeffs
                .into_iter()
                .map(|c| SymbolTerm {
                    m: c.m,
                    n: c.n,
                    coeff: C64::new(c.re, c.im),
                    profile: c.profile,
                })
                .collect(),
        );
        s.validate_real()?;
        Ok(s)
    }
}
