//! Double-exponential quadrature in MPFR precision.

use rug::float::{Constant, Special};
use rug::Float;

use crate::error::Result;

/// Result of one quadrature run.
#[derive(Debug, Clone)]
pub(super) struct Quad {
    pub value: Float,
    /// `∫|f|` at the final level.
    pub magnitude: Float,
    /// `|I_L - I_{L-1}|` at the final level.
    pub step_change: Float,
    pub converged: bool,
}

/// Integrand signature: `(x, x - a, b - x)`. The distances are exact even
/// where `x` has rounded onto an endpoint; `b - x` is `+∞` on half-lines.
pub(super) trait Integrand: FnMut(&Float, &Float, &Float) -> Result<Float> {}
impl<F: FnMut(&Float, &Float, &Float) -> Result<Float>> Integrand for F {}

struct Node {
    x: Float,
    da: Float,
    db: Float,
    weight: Float,
}

/// Sums levels `h = 2^{-L}` until two successive estimates agree to
/// `rel_tol` or `max_level` is reached. Level 0 uses every integer node.
fn run<F, N>(bits: u32, t_lo: f64, t_hi: f64, max_level: u32, rel_tol: &Float, mut node: N, mut f: F) -> Result<Quad>
where
    F: Integrand,
    N: FnMut(&Float) -> Option<Node>,
{
    let mut sum = Float::new(bits);
    let mut abs_sum = Float::new(bits);
    let mut eval = |t: f64, sum: &mut Float, abs_sum: &mut Float| -> Result<()> {
        let t = Float::with_val(bits, t);
        if let Some(Node { x, da, db, weight }) = node(&t) {
            let v = f(&x, &da, &db)? * weight;
            *abs_sum += Float::with_val(bits, v.abs_ref());
            *sum += v;
        }
        Ok(())
    };
    let k_lo = t_lo.floor() as i64;
    let k_hi = t_hi.ceil() as i64;
    for k in k_lo..=k_hi {
        eval(k as f64, &mut sum, &mut abs_sum)?;
    }
    let mut prev = sum.clone();
    let mut step_change = Float::with_val(bits, Special::Infinity);
    let mut h = 1.0f64;
    for level in 1..=max_level {
        h /= 2.0;
        let mut t = k_lo as f64 + h;
        while t < k_hi as f64 {
            eval(t, &mut sum, &mut abs_sum)?;
            t += 2.0 * h;
        }
        let est = Float::with_val(bits, &sum * h);
        step_change = Float::with_val(bits, &est - &prev).abs();
        prev = est;
        if level >= 3 && step_change <= Float::with_val(bits, prev.abs_ref()) * rel_tol {
            return Ok(Quad {
                value: prev,
                magnitude: abs_sum * h,
                step_change,
                converged: true,
            });
        }
    }
    Ok(Quad {
        magnitude: abs_sum * h,
        value: prev,
        step_change,
        converged: false,
    })
}

/// `∫_a^b f` by the tanh-sinh rule `x = c + r tanh(π/2 sinh t)`.
pub(super) fn tanh_sinh<F: Integrand>(a: &Float, b: &Float, bits: u32, max_level: u32, rel_tol: &Float, f: F) -> Result<Quad> {
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let r = Float::with_val(bits, b - a) / 2u32;
    let t_max = ((bits as f64 + 20.0) * std::f64::consts::LN_2 / std::f64::consts::PI).asinh() + 0.5;
    let node = |t: &Float| -> Option<Node> {
        let s = Float::with_val(bits, t.sinh_ref()) * &half_pi;
        // e = exp(-2|s|); 1 - tanh|s| = 2e/(1+e), 1 + tanh|s| = 2/(1+e)
        let e = (Float::with_val(bits, s.abs_ref()) * -2i32).exp();
        if e.is_zero() {
            return None;
        }
        let one_e = Float::with_val(bits, &e + 1u32);
        let near = Float::with_val(bits, &e * &r) * 2u32 / &one_e;
        let far = Float::with_val(bits, &r * 2u32) / &one_e;
        let (da, db) = if s.is_sign_negative() { (near, far) } else { (far, near) };
        let x = Float::with_val(bits, a + &da);
        let cosh_t = Float::with_val(bits, t.cosh_ref());
        let weight = Float::with_val(bits, &r * &half_pi) * cosh_t * &e * 4u32 / Float::with_val(bits, one_e.square_ref());
        Some(Node { x, da, db, weight })
    };
    run(bits, -t_max, t_max, max_level, rel_tol, node, f)
}

/// `∫_a^∞ f` by the exp-sinh rule `x = a + s exp(π/2 sinh t)`. Nodes with
/// `x - a > cutoff` are skipped; the caller guarantees the integrand is
/// negligible there.
pub(super) fn exp_sinh<F: Integrand>(
    a: &Float,
    scale: f64,
    cutoff: f64,
    bits: u32,
    max_level: u32,
    rel_tol: &Float,
    f: F,
) -> Result<Quad> {
    let half_pi_f = std::f64::consts::FRAC_PI_2;
    let tiny = (bits as f64 + 40.0) * std::f64::consts::LN_2;
    let t_lo = (-(tiny + scale.ln().max(0.0)) / half_pi_f).asinh() - 0.5;
    let t_hi = ((cutoff / scale).ln().max(0.0) / half_pi_f).asinh() + 0.5;
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let sc = Float::with_val(bits, scale);
    let cut = Float::with_val(bits, cutoff);
    let inf = Float::with_val(bits, Special::Infinity);
    let node = |t: &Float| -> Option<Node> {
        let s = Float::with_val(bits, t.sinh_ref()) * &half_pi;
        let da = Float::with_val(bits, s.exp_ref()) * &sc;
        if da > cut || da.is_zero() {
            return None;
        }
        let x = Float::with_val(bits, a + &da);
        let weight = Float::with_val(bits, &da * &half_pi) * Float::with_val(bits, t.cosh_ref());
        Some(Node { x, da, db: inf.clone(), weight })
    };
    run(bits, t_lo, t_hi, max_level, rel_tol, node, f)
}
