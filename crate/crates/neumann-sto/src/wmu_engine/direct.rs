//! `W_μ^σ(p₁, p₂; α₁, α₂)` by direct quadrature, for low orders.

use crate::error::Result;
use crate::legendre::{legendre_q_seq, lift_order, p_assoc_u_coeffs};
use crate::quadrature::exp_sinh;
use crate::special_fn::a_moment_seq;

use super::WParams;

const QUAD_TOL: f64 = 1e-14;

/// `w_μ^σ(p₁,p₂,α₁,α₂) = ∫_1^∞ Q̂(ξ₁) ξ₁^{p₁} e^{-α₁ξ₁} ∫_1^{ξ₁} P̂(ξ₂) ξ₂^{p₂} e^{-α₂ξ₂}`
/// with `Q̂ = (ξ²-1)^σ d^σQ_μ` and `P̂` likewise.
///
/// The inner integral is exact: writing `P̂ ξ^{p₂} = Σ_k g_k u^k` with
/// `u = ξ - 1`, it equals `e^{-α₂} Σ_k g_k U^{k+1} a_k(α₂U)`.
pub fn w_small(mu: usize, sigma: usize, p1: usize, p2: usize, alpha1: f64, alpha2: f64) -> Result<f64> {
    let g = p_assoc_u_coeffs(mu, sigma, p2);
    let kmax = g.len() - 1;
    let ea2 = (-alpha2).exp();
    let r = exp_sinh(
        |u| {
            let x = 1.0 + u;
            let outer = (-alpha1 * x).exp();
            if outer == 0.0 {
                return 0.0;
            }
            let (Ok(q), Ok(a)) = (legendre_q_seq(mu, u), a_moment_seq(kmax, alpha2 * u)) else {
                return f64::NAN;
            };
            let h = lift_order(&q, sigma, u)[mu];
            let mut inner = 0.0;
            let mut upow = u;
            for (k, &gk) in g.iter().enumerate() {
                inner += gk * upow * a[k];
                upow *= u;
            }
            h * x.powi(p1 as i32) * outer * ea2 * inner
        },
        1.0 / alpha1.max(0.5),
        QUAD_TOL,
    )?;
    Ok(r.value)
}

/// `W = w(p₁,p₂,α₁,α₂) + w(p₂,p₁,α₂,α₁)` by direct quadrature.
pub fn w_direct(params: &WParams) -> Result<f64> {
    let WParams { p1, p2, sigma, alpha1, alpha2, mu } = *params;
    Ok(w_small(mu, sigma, p1, p2, alpha1, alpha2)? + w_small(mu, sigma, p2, p1, alpha2, alpha1)?)
}
