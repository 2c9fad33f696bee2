//! Special functions in MPFR precision.

use rug::float::Constant;
use rug::Float;

pub(super) fn flt(bits: u32, v: f64) -> Float {
    Float::with_val(bits, v)
}

fn bit_length(n: usize) -> u32 {
    usize::BITS - n.leading_zeros()
}

/// Bits lost by the upward recursion for `Q_n` up to order `mu_max` at `ξ = 1 + u`.
fn q_guard_bits(mu_max: usize, u: f64) -> u32 {
    let x = 1.0 + u;
    let growth = (u + (u * (x + 1.0)).sqrt()).ln_1p() * std::f64::consts::LOG2_E;
    (2.0 * mu_max as f64 * growth).ceil() as u32 + 2 * bit_length(mu_max) + 64
}

/// `(ξ²-1)^σ d^σQ_n/dξ^σ` for `n = 0..=mu_max` at `ξ = 1 + u`, by upward
/// recursion carried with enough guard bits to absorb the growth of `P_n`.
pub(super) fn q_lifted_seq(mu_max: usize, sigma: usize, u: &Float, bits: u32) -> Vec<Float> {
    let wb = bits + q_guard_bits(mu_max + sigma, u.to_f64());
    let u = Float::with_val(wb, u);
    let x = Float::with_val(wb, &u + 1u32);
    let two_over_u = Float::with_val(wb, 2u32 / &u);
    let q0 = two_over_u.ln_1p() / 2u32;
    let mut q = Vec::with_capacity(mu_max + 1);
    q.push(q0);
    if mu_max >= 1 {
        let q1 = Float::with_val(wb, &x * &q[0]) - 1u32;
        q.push(q1);
    }
    for n in 1..mu_max {
        let a = Float::with_val(wb, &x * &q[n]) * (2 * n + 1) as u32;
        let b = Float::with_val(wb, &q[n - 1] * n as u32);
        q.push((a - b) / (n + 1) as u32);
    }
    for s in 0..sigma {
        let mut next = vec![Float::new(wb); q.len()];
        for n in (s + 1)..q.len() {
            let a = Float::with_val(wb, &x * &q[n]) * (n - s) as u32;
            let b = Float::with_val(wb, &q[n - 1] * (n + s) as u32);
            next[n] = a - b;
        }
        q = next;
    }
    q.into_iter().map(|v| Float::with_val(bits, v)).collect()
}

/// Coefficients in `u = ξ - 1` of `(ξ²-1)^σ d^σP_μ/dξ^σ · ξ^p`.
pub(super) fn p_assoc_u_coeffs(mu: usize, sigma: usize, p: usize, bits: u32) -> Vec<Float> {
    let mut c = Vec::with_capacity(mu + 1);
    c.push(Float::with_val(bits, 1u32));
    for k in 1..=mu {
        let v = Float::with_val(bits, &c[k - 1] * ((mu + 1 - k) * (mu + k)) as u64) / (2 * k * k) as u64;
        c.push(v);
    }
    let mut out: Vec<Float> = vec![Float::new(bits); sigma];
    for (k, ck) in c.iter().enumerate().skip(sigma) {
        let fall = ((k - sigma + 1)..=k).fold(Float::with_val(bits, 1u32), |acc, j| acc * j as u64);
        out.push(fall * ck);
    }
    let mul_linear = |v: &[Float], a: u32| -> Vec<Float> {
        let mut r = vec![Float::new(bits); v.len() + 1];
        for (k, x) in v.iter().enumerate() {
            r[k] += Float::with_val(bits, x * a);
            r[k + 1] += x;
        }
        r
    };
    for _ in 0..sigma {
        out = mul_linear(&out, 2);
    }
    for _ in 0..p {
        out = mul_linear(&out, 1);
    }
    out
}

/// `d^σP_μ/dx^σ` at `x` by differentiating Bonnet's recurrence.
pub(super) fn p_derivative(mu: usize, sigma: usize, x: &Float, bits: u32) -> Float {
    if sigma > mu {
        return Float::new(bits);
    }
    let zero = Float::new(bits);
    let mut prev: Vec<Float> = Vec::new();
    for s in 0..=sigma {
        let mut row = Vec::with_capacity(mu + 1);
        for n in 0..=mu {
            let v = match n {
                0 => Float::with_val(bits, u32::from(s == 0)),
                1 => match s {
                    0 => x.clone(),
                    1 => Float::with_val(bits, 1u32),
                    _ => zero.clone(),
                },
                _ => {
                    let lower = if s > 0 { prev[n - 1].clone() * s as u32 } else { zero.clone() };
                    let a = (Float::with_val(bits, x * &row[n - 1]) + lower) * (2 * n - 1) as u32;
                    let b = Float::with_val(bits, &row[n - 2] * (n - 1) as u32);
                    (a - b) / n as u32
                }
            };
            row.push(v);
        }
        prev = row;
    }
    prev.swap_remove(mu)
}

/// `E_{-p}(z) = e^{-z} Σ_j p!/(p-j)! z^{-j-1}`.
pub(super) fn exp_int_neg(p: usize, z: &Float, bits: u32) -> Float {
    let inv = Float::with_val(bits, z.recip_ref());
    let mut term = inv.clone();
    let mut sum = term.clone();
    for j in 1..=p {
        term = term * &inv * (p + 1 - j) as u32;
        sum += &term;
    }
    sum * Float::with_val(bits, (-z.clone()).exp_ref())
}

/// `i_μ(z) = z^μ/(2μ+1)!! Σ_k (z²/2)^k / (k! (2μ+3)(2μ+5)…(2μ+2k+1))`.
pub(super) fn bessel_i(mu: usize, z: &Float, bits: u32) -> Float {
    let mut lead = Float::with_val(bits, 1u32);
    for k in 1..=mu {
        lead = lead * z / (2 * k + 1) as u32;
    }
    let y = Float::with_val(bits, z * z) / 2u32;
    let mut term = Float::with_val(bits, 1u32);
    let mut sum = term.clone();
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) - 8));
    for k in 1.. {
        term = term * &y / (k as u64 * (2 * mu + 2 * k + 1) as u64);
        sum += &term;
        if Float::with_val(bits, &term / &sum) < eps {
            break;
        }
    }
    lead * sum
}

/// `k_μ(z) = (π/2) e^{-z}/z Σ_{k=0}^{μ} (μ+k)!/(k!(μ-k)!) (2z)^{-k}`.
pub(super) fn bessel_k(mu: usize, z: &Float, bits: u32) -> Float {
    let two_z = Float::with_val(bits, z * 2u32);
    let mut term = Float::with_val(bits, 1u32);
    let mut sum = term.clone();
    for k in 1..=mu {
        term = term * ((mu + k) * (mu + 1 - k)) as u64 / k as u64 / &two_z;
        sum += &term;
    }
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let e = Float::with_val(bits, (-z.clone()).exp_ref());
    half_pi * e / z * sum
}

/// `γ_k = ∫_0^U u^k e^{-au} du` for `k = 0..=k_max`.
///
/// Upward recurrence when `aU ≥ 2 k_max`; otherwise a convergent series at
/// a top order past `2aU` followed by the downward recurrence.
pub(super) fn lower_gamma_seq(k_max: usize, a: &Float, upper: &Float, bits: u32) -> Vec<Float> {
    let z = Float::with_val(bits, a * upper);
    let ez = Float::with_val(bits, (-z.clone()).exp_ref());
    let zf = z.to_f64();
    let mut out = vec![Float::new(bits); k_max + 1];
    if zf >= 2.0 * k_max as f64 {
        // γ_k = (k γ_{k-1} - U^k e^{-aU})/a
        let em1 = Float::with_val(bits, (-z.clone()).exp_m1_ref());
        out[0] = -em1 / a;
        let mut upow = Float::with_val(bits, 1u32);
        for k in 1..=k_max {
            upow *= upper;
            let t = Float::with_val(bits, &upow * &ez);
            out[k] = (Float::with_val(bits, &out[k - 1] * k as u32) - t) / a;
        }
        return out;
    }
    let top = k_max.max((2.0 * zf).ceil() as usize + 1);
    // a_top(z) = e^{-z} Σ_j z^j / ((top+1)(top+2)…(top+j+1))
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) - 8));
    let mut term = Float::with_val(bits, 1u32) / (top + 1) as u32;
    let mut sum = term.clone();
    for j in 1.. {
        term = term * &z / (top + j + 1) as u32;
        sum += &term;
        if Float::with_val(bits, &term / &sum) < eps {
            break;
        }
    }
    // a_k(z) = ∫_0^1 t^k e^{-zt} dt; a_{k-1} = (z a_k + e^{-z})/k
    let mut ak = sum * &ez;
    let mut upow = Float::with_val(bits, upper.clone());
    for _ in 0..top {
        upow *= upper;
    }
    // upow = U^{top+1}
    for k in (0..=top).rev() {
        if k <= k_max {
            out[k] = Float::with_val(bits, &ak * &upow);
        }
        if k > 0 {
            ak = (Float::with_val(bits, &z * &ak) + &ez) / k as u32;
            upow /= upper;
        }
    }
    out
}

/// `b_m(z) = Σ_{k=1}^m (-1)^{m-k} S_mk/k! (z/2)^{2k}`, `b_0 = 1`, with guard
/// bits covering the alternating terms.
pub(super) fn b_poly(m: usize, z: &Float, bits: u32) -> Float {
    if m == 0 {
        return Float::with_val(bits, 1u32);
    }
    let zf = z.to_f64().abs();
    let guard = (2.0 * m as f64 * (1.0 + 0.5 * zf).log2()).ceil() as u32 + 64;
    let wb = bits + guard;
    // Stirling numbers of the second kind, exact in `wb` bits
    let mut row = vec![Float::with_val(wb, 1u32)];
    for n in 1..=m {
        let mut next = vec![Float::new(wb); n + 1];
        for k in 1..=n {
            let up = if k < n { Float::with_val(wb, &row[k] * k as u32) } else { Float::new(wb) };
            next[k] = Float::with_val(wb, &row[k - 1] + &up);
        }
        row = next;
    }
    let y = Float::with_val(wb, z * z) / 4u32;
    let mut w = Float::with_val(wb, 1u32);
    let mut acc = Float::new(wb);
    for (k, s) in row.iter().enumerate().skip(1) {
        w = w * &y / k as u32;
        let t = Float::with_val(wb, s * &w);
        if (m - k) % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    Float::with_val(bits, acc)
}

/// `log₁₀|x|` without overflow; `-∞` at zero.
pub(super) fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + e as f64 * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u32 = 200;

    fn rel(a: &Float, b: &Float) -> f64 {
        Float::with_val(B, a - b).to_f64().abs() / b.to_f64().abs()
    }

    #[test]
    fn q_matches_wronskian() {
        for &u in &[1e-6, 0.3, 4.0, 150.0] {
            let uf = flt(B, u);
            let q = q_lifted_seq(40, 0, &uf, B);
            let x = Float::with_val(B, &uf + 1u32);
            for mu in [1usize, 7, 40] {
                let p_mu = p_derivative(mu, 0, &x, B);
                let p_prev = p_derivative(mu - 1, 0, &x, B);
                let w = Float::with_val(B, &p_mu * &q[mu - 1]) - Float::with_val(B, &p_prev * &q[mu]);
                let want = Float::with_val(B, 1u32) / mu as u32;
                assert!(rel(&w, &want) < 1e-40, "u {u} mu {mu}");
            }
        }
    }

    #[test]
    fn bessel_wronskian() {
        // i_μ k_{μ+1} + i_{μ+1} k_μ = π/(2z²)
        for &z in &[0.1, 3.0, 45.0] {
            let zf = flt(B, z);
            for mu in [0usize, 5, 30] {
                let w = Float::with_val(B, bessel_i(mu, &zf, B) * bessel_k(mu + 1, &zf, B))
                    + Float::with_val(B, bessel_i(mu + 1, &zf, B) * bessel_k(mu, &zf, B));
                let want = Float::with_val(B, Constant::Pi) / 2u32 / Float::with_val(B, &zf * &zf);
                assert!(rel(&w, &want) < 1e-50, "z {z} mu {mu}");
            }
        }
    }

    #[test]
    fn lower_gamma_branches_agree_with_closed_form() {
        // γ_1 = (1 - e^{-z}(1+z))/a²
        for &(a, upper) in &[(2.0, 0.01), (2.0, 3.0), (50.0, 40.0)] {
            let (af, uf) = (flt(B, a), flt(B, upper));
            let g = lower_gamma_seq(6, &af, &uf, B);
            let z = Float::with_val(B, &af * &uf);
            let e = Float::with_val(B, (-z.clone()).exp_ref());
            let want = (Float::with_val(B, 1u32) - e * (z + 1u32)) / Float::with_val(B, &af * &af);
            assert!(rel(&g[1], &want) < 1e-45, "{a} {upper}");
        }
    }

    #[test]
    fn b_poly_low_orders() {
        // b_1 = z²/4, b_2 = z⁴/32 - z²/4
        let z = flt(B, 3.0);
        assert!(rel(&b_poly(1, &z, B), &flt(B, 2.25)) < 1e-55);
        assert!(rel(&b_poly(2, &z, B), &flt(B, 81.0 / 32.0 - 2.25)) < 1e-55);
    }

    #[test]
    fn exp_int_neg_low_orders() {
        let z = flt(B, 2.5);
        let e0 = exp_int_neg(0, &z, B);
        let want = Float::with_val(B, (-z.clone()).exp_ref()) / &z;
        assert!(rel(&e0, &want) < 1e-55);
    }
}
