//! The Neumann series for the generic two-centre integral
//! `𝓘 = (8/R)(-1)^σ Σ_{μ≥σ} (2μ+1) W_μ^σ(p₁,p₂,α₁,α₂) i_μ^σ(q₁,β₁) i_μ^σ(q₂,β₂)`.
//!
//! Associated Legendre functions on the cut are taken without the
//! Condon–Shortley phase, `P_μ^σ(η) = (1-η²)^{σ/2} d^σP_μ/dη^σ`. Both
//! η-factors of a term carry the same phase, so the series is unaffected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::p_assoc_u_coeffs;
use crate::series::{ExpansionSettings, SeriesOutcome, SeriesSum, Step, UNIT_ROUNDOFF};
use crate::special_fn::bessel_i_seq;
use crate::wmu_engine::{w_direct, w_sigma_large_order, BasicIntegralCache, WParams};

/// Default order at which the driver switches to the large-order `W` engine.
pub const DEFAULT_MU_SWITCH: usize = 25;

/// Parameters of one generic integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenericIntegralRequest {
    pub p1: usize,
    pub q1: usize,
    pub p2: usize,
    pub q2: usize,
    pub sigma: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Internuclear distance.
    pub r: f64,
}

impl GenericIntegralRequest {
    pub fn validate(&self) -> Result<()> {
        WParams::new(self.p1, self.p2, self.sigma, self.alpha1, self.alpha2, self.sigma)?;
        for (name, beta, alpha) in [("beta1", self.beta1, self.alpha1), ("beta2", self.beta2, self.alpha2)] {
            if !(beta.is_finite() && beta.abs() <= alpha) {
                return Err(Error::domain("GenericIntegralRequest", format!("|{name}| = {} exceeds {alpha}", beta.abs())));
            }
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::domain("GenericIntegralRequest", format!("R = {} must be positive", self.r)));
        }
        Ok(())
    }
}

fn factorial_ratio(mu: usize, sigma: usize) -> f64 {
    ((mu - sigma + 1)..=(mu + sigma)).fold(1.0, |acc, j| acc / j as f64)
}

/// `∫_{-1}^{1} P_n(η) η^q e^{-βη} dη` for `n ≤ n_max`, `q ≤ q_max`, indexed `[q][n]`.
///
/// Seeded by `∫ P_n e^{-βη} = 2 i_n(-β)` and raised in `q` with
/// `ηP_n = [(n+1)P_{n+1} + nP_{n-1}]/(2n+1)`. Terms of equal parity in `n`
/// share a sign, so the recurrence combines without cancellation.
fn legendre_moments(n_max: usize, q_max: usize, beta: f64) -> Result<Vec<Vec<f64>>> {
    let top = n_max + q_max;
    let mut row: Vec<f64> = if beta == 0.0 {
        (0..=top).map(|n| if n == 0 { 2.0 } else { 0.0 }).collect()
    } else {
        let i = bessel_i_seq(top, beta.abs())?;
        i.iter()
            .enumerate()
            .map(|(n, &v)| if beta > 0.0 && n % 2 == 1 { -2.0 * v } else { 2.0 * v })
            .collect()
    };
    let mut out = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        if q > 0 {
            let len = top - q + 1;
            let next: Vec<f64> = (0..len)
                .map(|n| {
                    let lower = if n > 0 { n as f64 * row[n - 1] } else { 0.0 };
                    ((n + 1) as f64 * row[n + 1] + lower) / (2 * n + 1) as f64
                })
                .collect();
            row = next;
        }
        out.push(row[..=n_max].to_vec());
    }
    Ok(out)
}

/// `∫ f^σ_μ η^q` at `β = 0` through the ladder
/// `f^{σ+1}_μ = (1-η²) Σ_{n=μ-1,μ-3,…} (2n+1) f^σ_n`, `f^σ_μ = (1-η²)^{σ/2} P_μ^σ`.
/// Every moment is a small rational, so the ladder is exact here.
fn zero_beta_moments(mu_max: usize, sigma: usize, q: usize) -> Result<Vec<f64>> {
    let q_top = q + 2 * sigma;
    // a[q'][n] = ∫ f^s_n η^{q'}
    let mut a = legendre_moments(mu_max, q_top, 0.0)?;
    for s in 0..sigma {
        let q_keep = q_top - 2 * (s + 1);
        let mut next = vec![vec![0.0; mu_max + 1]; q_keep + 1];
        for (qq, out) in next.iter_mut().enumerate() {
            // running sums over n of one parity
            let mut run = [0.0, 0.0];
            for mu in 0..=mu_max {
                if mu >= 1 {
                    let n = mu - 1;
                    run[n % 2] += (2 * n + 1) as f64 * (a[qq][n] - a[qq + 2][n]);
                }
                out[mu] = if mu > s { run[(mu + 1) % 2] } else { 0.0 };
            }
        }
        a = next;
    }
    Ok(a.swap_remove(q))
}

/// `∫ f^σ_μ η^q e^{-βη}` for `β ≠ 0`.
///
/// Integrating by parts against `d/dη[(1-η²)^{s+1} P^{(s+1)}_n] = -(n-s)(n+s+1)(1-η²)^s P^{(s)}_n`
/// gives `g_{s+1}(n) = -(n-s)(n+s+1)/β g_s(n)` for the `q = 0` moments, and
/// `ηP_n^σ = [(n-σ+1)P_{n+1}^σ + (n+σ)P_{n-1}^σ]/(2n+1)` raises `q`. Both
/// steps combine terms of one sign.
fn associated_moments(mu_max: usize, sigma: usize, q: usize, beta: f64) -> Result<Vec<f64>> {
    let top = mu_max + q;
    let mut row = legendre_moments(top, 0, beta)?.swap_remove(0);
    for s in 0..sigma {
        for (n, v) in row.iter_mut().enumerate() {
            *v = if n > s { -(((n - s) * (n + s + 1)) as f64) / beta * *v } else { 0.0 };
        }
    }
    if row.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow { func: "eta_integral", order: top as i64, arg: beta });
    }
    let sg = sigma as f64;
    for k in 0..q {
        let len = top - k;
        row = (0..len)
            .map(|n| {
                let m = n as f64;
                let lower = if n > 0 { (m + sg) * row[n - 1] } else { 0.0 };
                ((m - sg + 1.0) * row[n + 1] + lower) / (2.0 * m + 1.0)
            })
            .collect();
    }
    row.truncate(mu_max + 1);
    Ok(row)
}

/// `i_μ^σ(q, β)` for `μ = 0..=μmax` (zero below `σ`).
pub fn eta_integral_seq(mu_max: usize, sigma: usize, q: usize, beta: f64) -> Result<Vec<f64>> {
    if !beta.is_finite() {
        return Err(Error::domain("eta_integral", format!("beta = {beta}")));
    }
    let moments = if beta == 0.0 { zero_beta_moments(mu_max, sigma, q)? } else { associated_moments(mu_max, sigma, q, beta)? };
    // at β = 0 orthogonality and parity make these vanish exactly
    let vanishes = |mu: usize| beta == 0.0 && (mu > q + sigma || (mu + q - sigma) % 2 == 1);
    Ok(moments
        .iter()
        .enumerate()
        .map(|(mu, &v)| {
            if mu < sigma || vanishes(mu) {
                0.0
            } else {
                let sign = if mu % 2 == 0 { 0.5 } else { -0.5 };
                sign * factorial_ratio(mu, sigma) * v
            }
        })
        .collect())
}

/// `i_μ^σ(q,β) = (-1)^μ/2 (μ-σ)!/(μ+σ)! ∫_{-1}^{1} P_μ^σ(η)(1-η²)^{σ/2} η^q e^{-βη} dη`.
///
/// ```
/// use neumann_sto::neumann_driver::eta_integral;
///
/// assert_eq!(eta_integral(0, 0, 0, 0.0).unwrap(), 1.0);
/// assert_eq!(eta_integral(1, 0, 0, 0.0).unwrap(), 0.0);
/// ```
pub fn eta_integral(mu: usize, sigma: usize, q: usize, beta: f64) -> Result<f64> {
    if sigma > mu {
        return Err(Error::domain("eta_integral", format!("sigma = {sigma} exceeds mu = {mu}")));
    }
    Ok(eta_integral_seq(mu, sigma, q, beta)?[mu])
}

/// `k_μ^σ(p,α) = (μ-σ)!/(μ+σ)! ∫_1^∞ P_μ^σ(ξ) ξ^p (ξ²-1)^{σ/2} e^{-αξ} dξ`.
///
/// In `u = ξ - 1` the polynomial part has non-negative coefficients `g_k`,
/// so `k = (μ-σ)!/(μ+σ)! e^{-α} Σ_k g_k k!/α^{k+1}` is a sum of positive
/// terms. The running weight is rescaled to stay finite.
pub fn k_integral(mu: usize, sigma: usize, p: usize, alpha: f64) -> Result<f64> {
    if sigma > mu {
        return Err(Error::domain("k_integral", format!("sigma = {sigma} exceeds mu = {mu}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain("k_integral", format!("alpha = {alpha} must be positive")));
    }
    const BIG: f64 = 1e150;
    let g = p_assoc_u_coeffs(mu, sigma, p);
    let mut weight = 1.0 / alpha;
    let mut sum = 0.0;
    let mut scale_pow = 0i32;
    for (k, &gk) in g.iter().enumerate() {
        if k > 0 {
            weight *= k as f64 / alpha;
        }
        if weight > BIG {
            weight /= BIG;
            sum /= BIG;
            scale_pow += 1;
        }
        sum += gk * weight;
    }
    let mut v = sum * factorial_ratio(mu, sigma) * (-alpha).exp();
    for _ in 0..scale_pow {
        v *= BIG;
    }
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { func: "k_integral", order: mu as i64, arg: alpha })
    }
}

/// Supplies `W_μ^σ(p₁,p₂)` at fixed `(α₁, α₂)`: direct quadrature below the
/// switch order, the large-order engine with Kotani raising above it.
struct WSource {
    p1: usize,
    p2: usize,
    sigma: usize,
    alpha1: f64,
    alpha2: f64,
    mu_switch: usize,
    settings: ExpansionSettings,
    cache: BasicIntegralCache,
}

impl WSource {
    fn get(&mut self, mu: usize) -> Result<f64> {
        if mu < self.mu_switch {
            return w_direct(&WParams::new(self.p1, self.p2, self.sigma, self.alpha1, self.alpha2, mu)?);
        }
        let params = WParams::new(self.p1, self.p2, self.sigma, self.alpha1, self.alpha2, mu)?;
        let out = w_sigma_large_order(&params, &mut self.cache, &self.settings)?;
        if !out.converged {
            return Err(Error::TailDivergence { mu });
        }
        Ok(out.value)
    }
}

/// Sums the Neumann series for `req`.
///
/// A vanishing `β` makes the series finite: `i_μ^σ(q, 0) = 0` for
/// `μ > q + σ`, and summation stops exactly there.
pub fn neumann_sum(req: &GenericIntegralRequest, mu_switch: usize, settings: &ExpansionSettings) -> Result<SeriesOutcome> {
    req.validate()?;
    settings.validate()?;
    let sigma = req.sigma;
    let last = [(req.beta1, req.q1), (req.beta2, req.q2)]
        .iter()
        .filter(|(b, _)| *b == 0.0)
        .map(|(_, q)| q + sigma)
        .min();
    let mu_cap = last.unwrap_or(sigma + settings.max_terms - 1);
    let eta1 = eta_integral_seq(mu_cap, sigma, req.q1, req.beta1)?;
    let eta2 = eta_integral_seq(mu_cap, sigma, req.q2, req.beta2)?;
    let mut source = WSource {
        p1: req.p1,
        p2: req.p2,
        sigma,
        alpha1: req.alpha1,
        alpha2: req.alpha2,
        mu_switch,
        settings: *settings,
        cache: BasicIntegralCache::new(req.alpha1, req.alpha2)?,
    };
    let pref = 8.0 / req.r * if sigma % 2 == 0 { 1.0 } else { -1.0 };
    let window = settings.max_terms;
    let mut sum = SeriesSum::new(&ExpansionSettings { divergence_window: window, ..*settings });
    for mu in sigma..=mu_cap {
        let eta = eta1[mu] * eta2[mu];
        let term = if eta == 0.0 { 0.0 } else { (2 * mu + 1) as f64 * source.get(mu)? * eta };
        sum.add_rounding(4.0 * UNIT_ROUNDOFF * term.abs());
        if last.is_some() {
            sum.push(term);
            continue;
        }
        match sum.push(term) {
            Step::Converged => break,
            Step::Diverged => return Err(Error::SeriesCap { terms: sum.terms() }),
            Step::Continue => {}
        }
    }
    let out = if last.is_some() { sum.finish_exact() } else { sum.finish() };
    Ok(out.scaled(pref))
}
