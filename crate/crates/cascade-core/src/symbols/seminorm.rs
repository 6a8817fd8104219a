//! Symbol-class seminorms and the Fréchet distance between symbols.
//!
//! `℘^{k,ρ}_j(f) = Σ_{α+β≤j, ℓ≤k} sup |∂x^α ∂ξ^β ∂t^ℓ f| (1+x²+ξ²)^{(α+β)/2-ρ}`
//! is approximated by its maximum over a (t, θ, I) grid with the action
//! sampled logarithmically; reported values are lower bounds of the true
//! supremum. Phase-space derivatives come exactly from jet arithmetic, time
//! derivatives from the Fourier factors. The distance truncates the weighted
//! sum over j; the discarded tail is below `2^{-j_max}`.

use super::{from_action_angle, ActionAngle, AngleTimeSymbol, RadialProfile, TWO_PI};
use crate::jet::Jet2;
use crate::C64;
use std::collections::BTreeMap;

/// Grid on which seminorm suprema are approximated.
#[derive(Debug, Clone)]
pub struct SeminormGrid {
    pub t_nodes: usize,
    pub theta_nodes: usize,
    pub actions: Vec<f64>,
}

impl Default for SeminormGrid {
    fn default() -> Self {
        let mut actions: Vec<f64> = Vec::new();
        // transition region of the canned profiles
        let mut i = 0.26;
        while i < 0.64 {
            actions.push(i);
            i += 0.025;
        }
        actions.extend([0.7, 0.8, 0.9]);
        // logarithmic sweep up to I_max = 1e4
        let per_decade = 5usize;
        for j in 0..=(4 * per_decade) {
            actions.push(10f64.powf(j as f64 / per_decade as f64));
        }
        SeminormGrid {
            t_nodes: 24,
            theta_nodes: 32,
            actions,
        }
    }
}

fn smoothstep_jet(w: &Jet2) -> Jet2 {
    let w0 = w.value().re;
    let order = w.order();
    if w0 <= 0.0 {
        return Jet2::zero(order);
    }
    if w0 >= 1.0 {
        return Jet2::constant(order, C64::new(1.0, 0.0));
    }
    let one = Jet2::constant(order, C64::new(1.0, 0.0));
    let a = w.recip().scale(C64::new(-1.0, 0.0)).exp();
    let b = one.sub(w).recip().scale(C64::new(-1.0, 0.0)).exp();
    a.mul(&a.add(&b).recip())
}

fn profile_jet(profile: &RadialProfile, i_jet: &Jet2) -> Jet2 {
    let order = i_jet.order();
    let i0 = i_jet.value().re;
    let four_i_minus_1 = i_jet
        .scale(C64::new(4.0, 0.0))
        .sub(&Jet2::constant(order, C64::new(1.0, 0.0)));
    match profile {
        RadialProfile::CutoffOne => smoothstep_jet(&four_i_minus_1),
        RadialProfile::PowerDecay(mu) => {
            if i0 <= 0.25 {
                return Jet2::zero(order);
            }
            let base = i_jet
                .scale(C64::new(2.0, 0.0))
                .add(&Jet2::constant(order, C64::new(1.0, 0.0)));
            smoothstep_jet(&four_i_minus_1).mul(&base.pow_real(-mu))
        }
        RadialProfile::CompactBump => {
            let falling = Jet2::constant(order, C64::new(4.0, 0.0))
                .sub(&i_jet.scale(C64::new(4.0, 0.0)));
            smoothstep_jet(&four_i_minus_1).mul(&smoothstep_jet(&falling))
        }
    }
}

/// All mixed (x, ξ)-derivatives of each time harmonic of `v` at one phase
/// point, as jets keyed by the time frequency m.
fn harmonic_jets(v: &AngleTimeSymbol, order: usize, theta: f64, action: f64) -> BTreeMap<i32, Jet2> {
    let p = from_action_angle(ActionAngle::new(theta, action));
    let x = Jet2::var_x(order, p.x);
    let xi = Jet2::var_xi(order, p.xi);
    let u = x.mul(&x).add(&xi.mul(&xi)); // x² + ξ² = 2I
    let i_jet = u.scale(C64::new(0.5, 0.0));
    let r = u.sqrt();
    let w = x.add(&xi.scale(C64::new(0.0, 1.0)));
    // e^{iθ} = i r / (x + iξ)
    let e_plus = r.scale(C64::new(0.0, 1.0)).mul(&w.recip());
    let e_minus = e_plus.recip();

    let nmax = v.max_angle_harmonic().unsigned_abs() as usize;
    let mut pow_plus = Vec::with_capacity(nmax + 1);
    let mut pow_minus = Vec::with_capacity(nmax + 1);
    pow_plus.push(Jet2::constant(order, C64::new(1.0, 0.0)));
    pow_minus.push(Jet2::constant(order, C64::new(1.0, 0.0)));
    for p in 1..=nmax {
        pow_plus.push(pow_plus[p - 1].mul(&e_plus));
        pow_minus.push(pow_minus[p - 1].mul(&e_minus));
    }

    let mut profile_cache: Vec<(RadialProfile, Jet2)> = Vec::new();
    let mut out: BTreeMap<i32, Jet2> = BTreeMap::new();
    for term in v.terms() {
        let pj = match profile_cache.iter().find(|(p, _)| *p == term.profile) {
            Some((_, j)) => j.clone(),
            None => {
                let j = profile_jet(&term.profile, &i_jet);
                profile_cache.push((term.profile.clone(), j.clone()));
                j
            }
        };
        let ang = if term.n >= 0 {
            &pow_plus[term.n as usize]
        } else {
            &pow_minus[(-term.n) as usize]
        };
        let contribution = ang.mul(&pj).scale(term.coeff);
        out.entry(term.m)
            .and_modify(|j| *j = j.add(&contribution))
            .or_insert(contribution);
    }
    out
}

/// Table of grid suprema of the weighted derivatives, indexed by
/// `(α, β, ℓ)`; entries already carry the weight `(1+2I)^{(α+β)/2-ρ}`.
fn weighted_sup_table(
    v: &AngleTimeSymbol,
    j_order: usize,
    k: usize,
    rho: f64,
    grid: &SeminormGrid,
) -> BTreeMap<(usize, usize, usize), f64> {
    let mut table: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
    if v.is_zero() {
        for a in 0..=j_order {
            for b in 0..=(j_order - a) {
                for l in 0..=k {
                    table.insert((a, b, l), 0.0);
                }
            }
        }
        return table;
    }
    let time_dependent = !v.is_time_independent();
    let t_nodes = if time_dependent { grid.t_nodes } else { 1 };
    for &action in &grid.actions {
        for jt in 0..grid.theta_nodes {
            let theta = TWO_PI * jt as f64 / grid.theta_nodes as f64;
            let jets = harmonic_jets(v, j_order, theta, action);
            for a in 0..=j_order {
                for b in 0..=(j_order - a) {
                    let weight = (1.0 + 2.0 * action).powf((a + b) as f64 / 2.0 - rho);
                    // derivative of each time harmonic
                    let derivs: Vec<(i32, C64)> = jets
                        .iter()
                        .map(|(m, jet)| (*m, jet.derivative(a, b)))
                        .collect();
                    for l in 0..=k {
                        let mut sup: f64 = 0.0;
                        for lt in 0..t_nodes {
                            let t = TWO_PI * lt as f64 / t_nodes as f64;
                            let mut val = C64::new(0.0, 0.0);
                            for (m, d) in &derivs {
                                let im = C64::new(0.0, *m as f64);
                                let phase = *m as f64 * t;
                                val += im.powu(l as u32)
                                    * C64::new(phase.cos(), phase.sin())
                                    * d;
                            }
                            sup = sup.max(val.norm());
                        }
                        let entry = table.entry((a, b, l)).or_insert(0.0);
                        *entry = entry.max(sup * weight);
                    }
                }
            }
        }
    }
    table
}

/// Grid approximation (lower bound) of the seminorm `℘^{k,ρ}_j(v)`.
pub fn seminorm(v: &AngleTimeSymbol, j: usize, k: usize, rho: f64, grid: &SeminormGrid) -> f64 {
    let table = weighted_sup_table(v, j, k, rho, grid);
    table
        .iter()
        .filter(|((a, b, _), _)| a + b <= j)
        .map(|(_, s)| s)
        .sum()
}

pub const DISTANCE_J_MAX: usize = 16;

/// Fréchet distance `td^{k,ρ}(v, w) = Σ_{j≥0} 2^{-j} ℘_j/(1+℘_j)`, truncated
/// at `j_max` (tail below `2^{-j_max}`). Each summand stays below `2^{-j}`,
/// so the value is bounded by 2.
pub fn distance(
    v: &AngleTimeSymbol,
    w: &AngleTimeSymbol,
    k: usize,
    rho: f64,
    grid: &SeminormGrid,
    j_max: usize,
) -> f64 {
    let diff = v.add(&w.scale(-1.0));
    if diff.is_zero() {
        return 0.0;
    }
    let table = weighted_sup_table(&diff, j_max, k, rho, grid);
    let mut total = 0.0;
    for j in 0..=j_max {
        let pj: f64 = table
            .iter()
            .filter(|((a, b, _), _)| a + b <= j)
            .map(|(_, s)| s)
            .sum();
        total += 0.5f64.powi(j as i32) * pj / (1.0 + pj);
    }
    total
}
