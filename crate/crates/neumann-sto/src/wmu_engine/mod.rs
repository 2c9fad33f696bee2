//! `W_μ^σ(p₁, p₂; α₁, α₂)`: the large-order expansion, the `ω`/`Ω` basic
//! integrals it is built from, derivative raising of `p₂`, Kotani raising of
//! `σ`, and a direct quadrature path for low orders.

mod basic;
mod direct;
mod expansion;
mod kotani;

pub use basic::{big_omega, omega, omega_remainder_bound, BasicIntegralCache, OmegaRoute};
pub use direct::{w_direct, w_small};
pub use expansion::{big_t_coeff, tau_coeff, w_general, w_general_cached, w_large_order};
pub use kotani::{kotani_coefficients, kotani_inputs, raise_sigma_w, WTable};

use crate::error::{Error, Result};
use crate::series::{ExpansionSettings, SeriesOutcome};

/// Largest `p₁`, `p₂` accepted.
pub const P_MAX: usize = 12;

/// Index and exponent set of one `W_μ^σ(p₁, p₂; α₁, α₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WParams {
    pub p1: usize,
    pub p2: usize,
    pub sigma: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub mu: usize,
}

impl WParams {
    pub fn new(p1: usize, p2: usize, sigma: usize, alpha1: f64, alpha2: f64, mu: usize) -> Result<Self> {
        if sigma > mu {
            return Err(Error::domain("WParams", format!("sigma = {sigma} exceeds mu = {mu}")));
        }
        if p1 > P_MAX || p2 > P_MAX {
            return Err(Error::domain("WParams", format!("p1 = {p1}, p2 = {p2} exceed {P_MAX}")));
        }
        for (name, v) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain("WParams", format!("{name} = {v} must be positive")));
            }
        }
        Ok(Self { p1, p2, sigma, alpha1, alpha2, mu })
    }
}

/// `W_μ^σ(p₁,p₂)` from the large-order engine, raised from `σ = 0` by the
/// Kotani recursion. Reports the largest term count and error estimate of
/// the `σ = 0` inputs; converged only if every input converged.
pub fn w_sigma_large_order(params: &WParams, cache: &mut BasicIntegralCache, settings: &ExpansionSettings) -> Result<SeriesOutcome> {
    let WParams { p1, p2, sigma, alpha1, alpha2, mu } = *params;
    if cache.alpha1() != alpha1 || cache.alpha2() != alpha2 {
        return Err(Error::Settings(format!(
            "cache built for ({}, {}) used at ({alpha1}, {alpha2})",
            cache.alpha1(),
            cache.alpha2()
        )));
    }
    let mut targets = vec![(mu, p1, p2)];
    let mut levels = Vec::with_capacity(sigma);
    for s in (0..sigma).rev() {
        levels.push(targets.clone());
        targets = kotani_inputs(&targets, s);
    }
    let mut table = WTable::new(0);
    let mut out = SeriesOutcome { value: 0.0, terms_used: 0, converged: true, est_rel_error: 0.0 };
    for &(m, a, b) in &targets {
        let r = w_general_cached(a, b, m, cache, settings)?;
        out.terms_used = out.terms_used.max(r.terms_used);
        out.converged &= r.converged;
        out.est_rel_error = out.est_rel_error.max(r.est_rel_error);
        table.insert(m, a, b, r.value);
    }
    for level in levels.iter().rev() {
        table = raise_sigma_w(&table, level)?;
    }
    out.value = table.get(mu, p1, p2).ok_or(Error::Capacity { requested: mu, available: mu })?;
    Ok(out)
}
