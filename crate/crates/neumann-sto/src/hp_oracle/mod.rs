//! Arbitrary-precision reference values.
//!
//! Every quantity is obtained by double-exponential quadrature of its
//! defining integral in MPFR arithmetic, with the special functions in the
//! integrand evaluated at the same (or higher) precision. Each result
//! carries the number of decimal digits it is certified to, taken as the
//! smaller of the quadrature convergence estimate and the digits surviving
//! cancellation against `∫|f|`. When cancellation is the limit the working
//! precision is raised and the integral repeated.
//!
//! Real parameters are taken as their exact binary values.
//!
//! ```no_run
//! use neumann_sto::hp_oracle::{oracle_l, OracleConfig};
//!
//! let v = oracle_l(30, 0, 0, 0.1, &OracleConfig::default()).unwrap();
//! assert!((v.to_f64() - 9.72733864877071e-4).abs() < 1e-18);
//! ```

mod funcs;
mod quad;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wmu_engine::WParams;

use funcs::{
    b_poly, bessel_i, bessel_k, exp_int_neg, flt, log10_abs, lower_gamma_seq, p_assoc_u_coeffs, p_derivative, q_lifted_seq,
};
use quad::{exp_sinh, tanh_sinh, Quad};

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 16;
const MAX_PRECISION_RAISES: usize = 3;

/// Precision and effort settings of the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Decimal digits carried by the arithmetic.
    pub working_digits: u32,
    /// Decimal digits each value must be certified to.
    pub target_digits: u32,
    /// Deepest step-halving level of the quadrature.
    pub max_subdivisions: u32,
    /// Extra halvings of the convergence tolerance, for self-consistency runs.
    pub tolerance_halvings: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { working_digits: 50, target_digits: 30, max_subdivisions: 10, tolerance_halvings: 0 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_digits == 0 {
            return Err(Error::Settings("target_digits must be positive".into()));
        }
        if self.working_digits < self.target_digits + 10 {
            return Err(Error::Settings(format!(
                "working_digits = {} must be at least target_digits + 10 = {}",
                self.working_digits,
                self.target_digits + 10
            )));
        }
        if !(3..=20).contains(&self.max_subdivisions) {
            return Err(Error::Settings(format!("max_subdivisions = {} outside 3..=20", self.max_subdivisions)));
        }
        Ok(())
    }

    /// The same settings with the convergence tolerance halved once more.
    pub fn halved(&self) -> Self {
        Self { tolerance_halvings: self.tolerance_halvings + 1, ..*self }
    }

    fn bits(&self) -> u32 {
        (self.working_digits as f64 * BITS_PER_DIGIT).ceil() as u32 + GUARD_BITS
    }

    fn rel_tol(&self, bits: u32) -> Float {
        let t = Float::with_val(bits, 10u32).pow(-(self.target_digits as i32 + 2));
        t >> self.tolerance_halvings
    }
}

/// A certified high-precision value.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleValue {
    pub value: Float,
    /// Significant decimal digits the value is certified to.
    pub digits: u32,
}

impl OracleValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Decimal rendering with `digits` significant figures.
    pub fn to_decimal(&self) -> String {
        if self.value.is_zero() {
            return "0".into();
        }
        self.value.to_string_radix(10, Some(self.digits.max(1) as usize))
    }

    /// `|x/value - 1|`, evaluated in the oracle's precision.
    pub fn rel_diff(&self, x: f64) -> f64 {
        if self.value.is_zero() {
            return if x == 0.0 { 0.0 } else { f64::INFINITY };
        }
        let p = self.value.prec();
        (Float::with_val(p, x - &self.value) / &self.value).abs().to_f64()
    }

    /// `|other/self - 1|` between two oracle values.
    pub fn rel_diff_mp(&self, other: &OracleValue) -> f64 {
        if self.value.is_zero() {
            return if other.value.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let p = self.value.prec().max(other.value.prec());
        (Float::with_val(p, &other.value - &self.value) / &self.value).abs().to_f64()
    }

    fn exact(value: Float, cfg: &OracleConfig) -> Self {
        Self { value, digits: cfg.working_digits }
    }

    fn scaled(self, by: &Float) -> Self {
        Self { value: self.value * by, digits: self.digits }
    }
}

/// Sum of certified values; digits lost to cancellation are subtracted.
fn sum_values(parts: &[OracleValue], cfg: &OracleConfig) -> OracleValue {
    let bits = parts.iter().map(|v| v.value.prec()).max().unwrap_or(cfg.bits());
    let mut total = Float::new(bits);
    for v in parts {
        total += &v.value;
    }
    let mut digits = cfg.working_digits as f64;
    for v in parts.iter().filter(|v| !v.value.is_zero()) {
        let d = v.digits as f64 - (log10_abs(&v.value) - log10_abs(&total)).max(0.0);
        digits = digits.min(d);
    }
    OracleValue { value: total, digits: digits.max(0.0).floor() as u32 }
}

fn digits_of(q: &Quad, bits: u32, cfg: &OracleConfig) -> f64 {
    let lv = log10_abs(&q.value);
    let quad = if q.step_change.is_zero() { f64::INFINITY } else { lv - log10_abs(&q.step_change) };
    let cancel = bits as f64 / BITS_PER_DIGIT - (log10_abs(&q.magnitude) - lv) - 3.0;
    quad.min(cancel).min(cfg.working_digits as f64)
}

/// Runs `integral` at the configured precision, raising it while
/// cancellation rather than convergence limits the certified digits.
fn certify<F>(cfg: &OracleConfig, mut integral: F) -> Result<OracleValue>
where
    F: FnMut(u32, &Float) -> Result<Quad>,
{
    cfg.validate()?;
    let target = cfg.target_digits as f64;
    let mut bits = cfg.bits();
    let mut achieved = 0.0f64;
    for _ in 0..=MAX_PRECISION_RAISES {
        let tol = cfg.rel_tol(bits);
        let q = integral(bits, &tol)?;
        let floor = Float::with_val(bits, &q.magnitude) * Float::with_val(bits, 10u32).pow(-(cfg.working_digits as i32));
        if q.converged && Float::with_val(bits, q.value.abs_ref()) <= floor {
            // below the noise floor of ∫|f|: an exact zero
            return Ok(OracleValue::exact(Float::new(bits), cfg));
        }
        let d = digits_of(&q, bits, cfg);
        achieved = d;
        if q.converged && d >= target {
            return Ok(OracleValue { value: Float::with_val(bits, &q.value), digits: d.floor() as u32 });
        }
        let lost = log10_abs(&q.magnitude) - log10_abs(&q.value);
        if !q.converged || !lost.is_finite() {
            break;
        }
        bits += ((lost + 10.0) * BITS_PER_DIGIT).ceil() as u32;
    }
    Err(Error::Precision { achieved: achieved.max(0.0).floor() as u32, target: cfg.target_digits })
}

/// Length past `start` beyond which `e^{-decay x} x^power` has fallen
/// `bits` binary orders below its maximum on `[start, ∞)`.
fn tail_cutoff(decay: f64, power: f64, start: f64, bits: u32) -> f64 {
    let log_g = |x: f64| -decay * x + power * x.ln();
    let peak_x = if power > 0.0 { (power / decay).max(start) } else { start };
    let drop = (bits as f64 + 20.0) * std::f64::consts::LN_2;
    let target = log_g(peak_x) - drop;
    let mut hi = peak_x + 1.0 / decay;
    while log_g(hi) > target {
        hi = peak_x + 2.0 * (hi - peak_x);
    }
    let mut lo = peak_x;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if log_g(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi - start
}

fn check_positive(func: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(func, format!("{name} = {v} must be positive")))
    }
}

fn inv_factorial_ratio(mu: usize, sigma: usize, bits: u32) -> Float {
    ((mu - sigma + 1)..=(mu + sigma)).fold(Float::with_val(bits, 1u32), |acc, j| acc / j as u32)
}

fn pow_u(x: &Float, n: usize) -> Float {
    Float::with_val(x.prec(), x.pow(n as u32))
}

/// `L_μ^σ(p, α) = (μ-σ)!/(μ+σ)! ∫_1^∞ (ξ²-1)^σ d^σQ_μ/dξ^σ ξ^p e^{-αξ} dξ`.
pub fn oracle_l(mu: usize, sigma: usize, p: usize, alpha: f64, cfg: &OracleConfig) -> Result<OracleValue> {
    if sigma > mu {
        return Err(Error::domain("oracle_l", format!("sigma = {sigma} exceeds mu = {mu}")));
    }
    check_positive("oracle_l", "alpha", alpha)?;
    let v = certify(cfg, |bits, tol| {
        let a = flt(bits, alpha);
        let one = Float::with_val(bits, 1u32);
        let cutoff = tail_cutoff(alpha, (p + sigma) as f64, 1.0, bits);
        exp_sinh(&one, 1.0 / alpha.max(0.5), cutoff, bits, cfg.max_subdivisions, tol, |x: &Float, u: &Float, _: &Float| {
            let h = q_lifted_seq(mu, sigma, u, bits).swap_remove(mu);
            let e = Float::with_val(bits, -(Float::with_val(bits, &a * x))).exp();
            Ok(h * pow_u(x, p) * e)
        })
    })?;
    Ok(v.scaled(&inv_factorial_ratio(mu, sigma, cfg.bits())))
}

/// `∫_1^∞ Q̂(ξ₁) ξ₁^{p₁} e^{-α₁ξ₁} ∫_1^{ξ₁} P̂(ξ₂) ξ₂^{p₂} e^{-α₂ξ₂} dξ₂ dξ₁`.
///
/// The inner integral is done exactly: with `P̂ ξ^{p₂} = Σ_k g_k u^k`, it is
/// `e^{-α₂} Σ_k g_k γ_k(α₂, ξ₁-1)` in terms of lower incomplete gamma
/// integrals, all with non-negative terms.
fn oracle_w_half(mu: usize, sigma: usize, p1: usize, p2: usize, a1: f64, a2: f64, cfg: &OracleConfig) -> Result<OracleValue> {
    certify(cfg, |bits, tol| {
        let g = p_assoc_u_coeffs(mu, sigma, p2, bits);
        let (af1, af2) = (flt(bits, a1), flt(bits, a2));
        let ea2 = Float::with_val(bits, (-af2.clone()).exp_ref());
        let one = Float::with_val(bits, 1u32);
        let cutoff = tail_cutoff(a1, (p1 + p2 + mu + sigma) as f64, 1.0, bits);
        exp_sinh(&one, 1.0 / a1.max(0.5), cutoff, bits, cfg.max_subdivisions, tol, |x: &Float, u: &Float, _: &Float| {
            let e = Float::with_val(bits, -(Float::with_val(bits, &af1 * x))).exp();
            if e.is_zero() {
                return Ok(Float::new(bits));
            }
            let h = q_lifted_seq(mu, sigma, u, bits).swap_remove(mu);
            let gam = lower_gamma_seq(g.len() - 1, &af2, u, bits);
            let mut inner = Float::new(bits);
            for (gk, ck) in g.iter().zip(&gam) {
                inner += Float::with_val(bits, gk * ck);
            }
            Ok(h * pow_u(x, p1) * e * inner * &ea2)
        })
    })
}

/// `W_μ^σ(p₁,p₂;α₁,α₂) = w(p₁,p₂,α₁,α₂) + w(p₂,p₁,α₂,α₁)`.
pub fn oracle_w(params: &WParams, cfg: &OracleConfig) -> Result<OracleValue> {
    let WParams { p1, p2, sigma, alpha1, alpha2, mu } =
        WParams::new(params.p1, params.p2, params.sigma, params.alpha1, params.alpha2, params.mu)?;
    let first = oracle_w_half(mu, sigma, p1, p2, alpha1, alpha2, cfg)?;
    let second = oracle_w_half(mu, sigma, p2, p1, alpha2, alpha1, cfg)?;
    Ok(sum_values(&[first, second], cfg))
}

/// The one-dimensional integrals the fast paths are assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BasicIntegral {
    /// `ω_np = ∫_0^1 t^n E_{-p}(α₁+α₂t) dt`.
    Omega { n: usize, p: usize, alpha1: f64, alpha2: f64 },
    /// `Ω_np = ∫_1^∞ t^n E_{-p}(α₁+α₂t) dt`.
    BigOmega { n: i64, p: usize, alpha1: f64, alpha2: f64 },
    /// `i_μ^σ(q,β) = (-1)^μ/2 (μ-σ)!/(μ+σ)! ∫_{-1}^{1} (1-η²)^σ d^σP_μ/dη^σ η^q e^{-βη} dη`.
    Eta { mu: usize, sigma: usize, q: usize, beta: f64 },
    /// `k_μ^σ(p,α) = (μ-σ)!/(μ+σ)! ∫_1^∞ (ξ²-1)^σ d^σP_μ/dξ^σ ξ^p e^{-αξ} dξ`.
    K { mu: usize, sigma: usize, p: usize, alpha: f64 },
    /// `E_n(z) = ∫_1^∞ t^{-n} e^{-zt} dt`.
    En { n: i64, z: f64 },
    /// `a_n(z) = ∫_0^1 t^n e^{-zt} dt`.
    An { n: usize, z: f64 },
    /// `𝓘_μ(α) = (2/π) ∫_0^α e^{-z} i_μ(z) dz`.
    IMu { mu: usize, alpha: f64 },
    /// `𝒦_μ(α) = (2/π) ∫_α^∞ e^{-z} k_μ(z) dz`.
    KMu { mu: usize, alpha: f64 },
    /// `λ_m^μ(α) = ∫_0^1 t^μ b_m(αt) e^{-αt} dt`.
    LambdaSmall { m: usize, mu: usize, alpha: f64 },
    /// `Λ_m^μ(α) = ∫_1^∞ t^{-μ-1} b_m(αt) e^{-αt} dt`.
    LambdaBig { m: usize, mu: usize, alpha: f64 },
    /// `τ_m^{μp} = ∫_0^1 t^μ b_m(α₂t) E_{-p}(α₁+α₂t) dt`.
    Tau { m: usize, mu: usize, p: usize, alpha1: f64, alpha2: f64 },
    /// `T_m^{μp} = ∫_1^∞ t^{-μ-1} b_m(α₂t) E_{-p}(α₁+α₂t) dt`.
    BigT { m: usize, mu: usize, p: usize, alpha1: f64, alpha2: f64 },
}

/// Evaluates one [`BasicIntegral`] by quadrature of its definition.
pub fn oracle_basic(kind: &BasicIntegral, cfg: &OracleConfig) -> Result<OracleValue> {
    let levels = cfg.max_subdivisions;
    match *kind {
        BasicIntegral::Omega { n, p, alpha1, alpha2 } => {
            check_positive("oracle_basic", "alpha1", alpha1)?;
            check_positive("oracle_basic", "alpha2", alpha2)?;
            certify(cfg, |bits, tol| {
                let (a1, a2) = (flt(bits, alpha1), flt(bits, alpha2));
                tanh_sinh(&Float::new(bits), &Float::with_val(bits, 1u32), bits, levels, tol, |t: &Float, _: &Float, _: &Float| {
                    let z = Float::with_val(bits, &a2 * t) + &a1;
                    Ok(pow_u(t, n) * exp_int_neg(p, &z, bits))
                })
            })
        }
        BasicIntegral::BigOmega { n, p, alpha1, alpha2 } => {
            check_positive("oracle_basic", "alpha1", alpha1)?;
            check_positive("oracle_basic", "alpha2", alpha2)?;
            certify(cfg, |bits, tol| {
                let (a1, a2) = (flt(bits, alpha1), flt(bits, alpha2));
                let one = Float::with_val(bits, 1u32);
                let cutoff = tail_cutoff(alpha2, n.max(0) as f64 + p as f64, 1.0, bits);
                exp_sinh(&one, 1.0 / alpha2.max(0.5), cutoff, bits, levels, tol, |t: &Float, _: &Float, _: &Float| {
                    let z = Float::with_val(bits, &a2 * t) + &a1;
                    let tn = Float::with_val(bits, t.pow(n as i32));
                    Ok(tn * exp_int_neg(p, &z, bits))
                })
            })
        }
        BasicIntegral::Eta { mu, sigma, q, beta } => {
            if sigma > mu || !beta.is_finite() {
                return Err(Error::domain("oracle_basic", format!("eta with mu = {mu}, sigma = {sigma}, beta = {beta}")));
            }
            // odd integrand, or P_μ against a polynomial of degree q + σ after σ integrations by parts
            if beta == 0.0 && ((mu + q - sigma) % 2 == 1 || mu > q + sigma) {
                return Ok(OracleValue::exact(Float::new(cfg.bits()), cfg));
            }
            let v = certify(cfg, |bits, tol| {
                let b = flt(bits, beta);
                let lo = Float::with_val(bits, -1i32);
                let hi = Float::with_val(bits, 1u32);
                tanh_sinh(&lo, &hi, bits, levels, tol, |x: &Float, da: &Float, db: &Float| {
                    let w = pow_u(&Float::with_val(bits, da * db), sigma);
                    let e = Float::with_val(bits, -(Float::with_val(bits, &b * x))).exp();
                    Ok(p_derivative(mu, sigma, x, bits) * w * pow_u(x, q) * e)
                })
            })?;
            let bits = v.value.prec();
            let mut s = inv_factorial_ratio(mu, sigma, bits) / 2u32;
            if mu % 2 == 1 {
                s = -s;
            }
            Ok(v.scaled(&s))
        }
        BasicIntegral::K { mu, sigma, p, alpha } => {
            if sigma > mu {
                return Err(Error::domain("oracle_basic", format!("k with sigma = {sigma} > mu = {mu}")));
            }
            check_positive("oracle_basic", "alpha", alpha)?;
            let v = certify(cfg, |bits, tol| {
                let a = flt(bits, alpha);
                let g = p_assoc_u_coeffs(mu, sigma, p, bits);
                let one = Float::with_val(bits, 1u32);
                let cutoff = tail_cutoff(alpha, (mu + sigma + p) as f64, 1.0, bits);
                exp_sinh(&one, 1.0 / alpha.max(0.5), cutoff, bits, levels, tol, |x: &Float, u: &Float, _: &Float| {
                    let mut poly = Float::new(bits);
                    for gk in g.iter().rev() {
                        poly = poly * u + gk;
                    }
                    let e = Float::with_val(bits, -(Float::with_val(bits, &a * x))).exp();
                    Ok(poly * e)
                })
            })?;
            let bits = v.value.prec();
            Ok(v.scaled(&inv_factorial_ratio(mu, sigma, bits)))
        }
        BasicIntegral::En { n, z } => {
            check_positive("oracle_basic", "z", z)?;
            certify(cfg, |bits, tol| {
                let zf = flt(bits, z);
                let one = Float::with_val(bits, 1u32);
                let cutoff = tail_cutoff(z, (-n).max(0) as f64, 1.0, bits);
                exp_sinh(&one, 1.0 / z.max(0.5), cutoff, bits, levels, tol, |t: &Float, _: &Float, _: &Float| {
                    let e = Float::with_val(bits, -(Float::with_val(bits, &zf * t))).exp();
                    Ok(Float::with_val(bits, t.pow(-n as i32)) * e)
                })
            })
        }
        BasicIntegral::An { n, z } => {
            if !(z >= 0.0 && z.is_finite()) {
                return Err(Error::domain("oracle_basic", format!("a_n with z = {z}")));
            }
            certify(cfg, |bits, tol| {
                let zf = flt(bits, z);
                tanh_sinh(&Float::new(bits), &Float::with_val(bits, 1u32), bits, levels, tol, |t: &Float, _: &Float, _: &Float| {
                    let e = Float::with_val(bits, -(Float::with_val(bits, &zf * t))).exp();
                    Ok(pow_u(t, n) * e)
                })
            })
        }
        BasicIntegral::IMu { mu, alpha } => {
            check_positive("oracle_basic", "alpha", alpha)?;
            let v = certify(cfg, |bits, tol| {
                tanh_sinh(&Float::new(bits), &flt(bits, alpha), bits, levels, tol, |z: &Float, _: &Float, _: &Float| {
                    let e = Float::with_val(bits, (-z.clone()).exp_ref());
                    Ok(e * bessel_i(mu, z, bits))
                })
            })?;
            let bits = v.value.prec();
            Ok(v.scaled(&two_over_pi(bits)))
        }
        BasicIntegral::KMu { mu, alpha } => {
            check_positive("oracle_basic", "alpha", alpha)?;
            let v = certify(cfg, |bits, tol| {
                let a = flt(bits, alpha);
                let cutoff = tail_cutoff(2.0, 0.0, alpha, bits);
                exp_sinh(&a, alpha.min(1.0), cutoff, bits, levels, tol, |z: &Float, _: &Float, _: &Float| {
                    let e = Float::with_val(bits, (-z.clone()).exp_ref());
                    Ok(e * bessel_k(mu, z, bits))
                })
            })?;
            let bits = v.value.prec();
            Ok(v.scaled(&two_over_pi(bits)))
        }
        BasicIntegral::LambdaSmall { m, mu, alpha } => {
            check_positive("oracle_basic", "alpha", alpha)?;
            certify(cfg, |bits, tol| {
                let a = flt(bits, alpha);
                tanh_sinh(&Float::new(bits), &Float::with_val(bits, 1u32), bits, levels, tol, |t: &Float, _: &Float, _: &Float| {
                    let z = Float::with_val(bits, &a * t);
                    let e = Float::with_val(bits, (-z.clone()).exp_ref());
                    Ok(pow_u(t, mu) * b_poly(m, &z, bits) * e)
                })
            })
        }
        BasicIntegral::LambdaBig { m, mu, alpha } => {
            check_positive("oracle_basic", "alpha", alpha)?;
            certify(cfg, |bits, tol| {
                let a = flt(bits, alpha);
                let one = Float::with_val(bits, 1u32);
                let cutoff = tail_cutoff(alpha, (2 * m) as f64, 1.0, bits);
                exp_sinh(&one, 1.0 / alpha.max(0.5), cutoff, bits, levels, tol, |t: &Float, _: &Float, _: &Float| {
                    let z = Float::with_val(bits, &a * t);
                    let e = Float::with_val(bits, (-z.clone()).exp_ref());
                    Ok(Float::with_val(bits, t.pow(-(mu as i32) - 1)) * b_poly(m, &z, bits) * e)
                })
            })
        }
        BasicIntegral::Tau { m, mu, p, alpha1, alpha2 } => {
            check_positive("oracle_basic", "alpha1", alpha1)?;
            check_positive("oracle_basic", "alpha2", alpha2)?;
            certify(cfg, |bits, tol| {
                let (a1, a2) = (flt(bits, alpha1), flt(bits, alpha2));
                tanh_sinh(&Float::new(bits), &Float::with_val(bits, 1u32), bits, levels, tol, |t: &Float, _: &Float, _: &Float| {
                    let z = Float::with_val(bits, &a2 * t);
                    let e = exp_int_neg(p, &Float::with_val(bits, &z + &a1), bits);
                    Ok(pow_u(t, mu) * b_poly(m, &z, bits) * e)
                })
            })
        }
        BasicIntegral::BigT { m, mu, p, alpha1, alpha2 } => {
            check_positive("oracle_basic", "alpha1", alpha1)?;
            check_positive("oracle_basic", "alpha2", alpha2)?;
            certify(cfg, |bits, tol| {
                let (a1, a2) = (flt(bits, alpha1), flt(bits, alpha2));
                let one = Float::with_val(bits, 1u32);
                let cutoff = tail_cutoff(alpha2, (2 * m + p) as f64, 1.0, bits);
                exp_sinh(&one, 1.0 / alpha2.max(0.5), cutoff, bits, levels, tol, |t: &Float, _: &Float, _: &Float| {
                    let z = Float::with_val(bits, &a2 * t);
                    let e = exp_int_neg(p, &Float::with_val(bits, &z + &a1), bits);
                    Ok(Float::with_val(bits, t.pow(-(mu as i32) - 1)) * b_poly(m, &z, bits) * e)
                })
            })
        }
    }
}

fn two_over_pi(bits: u32) -> Float {
    Float::with_val(bits, 2u32) / Float::with_val(bits, rug::float::Constant::Pi)
}

/// `R_N = ω_np - Σ_{k=0}^{N} n! α₂^k/(n+k+1)! E_{-p-k}(α₁+α₂)`: the error
/// of the truncated series for `ω_np`, with `ω_np` from quadrature.
pub fn oracle_omega_remainder(n: usize, p: usize, n_terms: usize, alpha1: f64, alpha2: f64, cfg: &OracleConfig) -> Result<OracleValue> {
    let omega = oracle_basic(&BasicIntegral::Omega { n, p, alpha1, alpha2 }, cfg)?;
    let bits = omega.value.prec();
    let (a1, a2) = (flt(bits, alpha1), flt(bits, alpha2));
    let beta = Float::with_val(bits, &a1 + &a2);
    // E_{-m}(β) = (e^{-β} + m E_{-m+1}(β))/β
    let eb = Float::with_val(bits, (-beta.clone()).exp_ref());
    let mut e = exp_int_neg(p, &beta, bits);
    let mut coef = Float::with_val(bits, 1u32) / (n + 1) as u32;
    let mut partial = Float::new(bits);
    for k in 0..=n_terms {
        if k > 0 {
            let m = (p + k) as u32;
            e = (Float::with_val(bits, &e * m) + &eb) / &beta;
            coef = coef * &a2 / (n + k + 1) as u32;
        }
        partial += Float::with_val(bits, &coef * &e);
    }
    let rem = Float::with_val(bits, &omega.value - &partial);
    let lost = (log10_abs(&omega.value) - log10_abs(&rem)).max(0.0);
    let digits = (omega.digits as f64 - lost).max(0.0).floor() as u32;
    Ok(OracleValue { value: rem, digits })
}

/// Parameters of one oracle Neumann-series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeumannOracleRequest {
    pub p1: usize,
    pub q1: usize,
    pub p2: usize,
    pub q2: usize,
    pub sigma: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub r: f64,
}

/// `(8/R)(-1)^σ Σ_{μ≥σ} (2μ+1) W_μ^σ i_μ^σ(q₁,β₁) i_μ^σ(q₂,β₂)` with every
/// factor from the oracle, summed until two consecutive terms fall below
/// `tail_rel` of the partial sum.
pub fn oracle_neumann_sum(req: &NeumannOracleRequest, tail_rel: f64, max_terms: usize, cfg: &OracleConfig) -> Result<OracleValue> {
    let bits = cfg.bits();
    let mut parts: Vec<OracleValue> = Vec::new();
    let mut total = Float::new(bits);
    let mut small = 0;
    let finite_at = [(req.beta1, req.q1), (req.beta2, req.q2)]
        .iter()
        .filter(|(b, _)| *b == 0.0)
        .map(|(_, q)| q + req.sigma)
        .min();
    for mu in req.sigma..req.sigma + max_terms {
        if finite_at.is_some_and(|last| mu > last) {
            break;
        }
        let eta = |q, beta| oracle_basic(&BasicIntegral::Eta { mu, sigma: req.sigma, q, beta }, cfg);
        let e1 = eta(req.q1, req.beta1)?;
        let e2 = eta(req.q2, req.beta2)?;
        let term = if e1.value.is_zero() || e2.value.is_zero() {
            OracleValue::exact(Float::new(bits), cfg)
        } else {
            let w = oracle_w(&WParams::new(req.p1, req.p2, req.sigma, req.alpha1, req.alpha2, mu)?, cfg)?;
            let digits = w.digits.min(e1.digits).min(e2.digits);
            let v = Float::with_val(bits, &w.value * &e1.value) * &e2.value * (2 * mu + 1) as u32;
            OracleValue { value: v, digits }
        };
        total += &term.value;
        let negligible = Float::with_val(bits, term.value.abs_ref()) <= Float::with_val(bits, total.abs_ref()) * tail_rel;
        parts.push(term);
        small = if negligible { small + 1 } else { 0 };
        if small >= 2 {
            let mut out = sum_values(&parts, cfg);
            out.value *= flt(bits, 8.0 / req.r) * if req.sigma % 2 == 1 { -1i32 } else { 1 };
            return Ok(out);
        }
    }
    if finite_at.is_some() {
        let mut out = sum_values(&parts, cfg);
        out.value *= flt(bits, 8.0 / req.r) * if req.sigma % 2 == 1 { -1i32 } else { 1 };
        return Ok(out);
    }
    Err(Error::SeriesCap { terms: max_terms })
}
