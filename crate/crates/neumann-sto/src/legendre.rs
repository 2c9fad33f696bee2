//! Legendre functions on the cut `ξ > 1`, in binary64.
//!
//! Arguments are passed as `u = ξ - 1` so that points crowding the branch
//! point keep full relative resolution.

use crate::error::{Error, Result};

const MILLER_DAMPING_LN: f64 = 40.0;

fn check_u(func: &'static str, u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(func, format!("u = xi - 1 = {u} must be positive")))
    }
}

/// `Q_0 .. Q_{μmax}` at `ξ = 1 + u`.
///
/// Upward recursion is used while `P_μ` cannot outgrow `Q_μ` by more than a
/// few units (`μ·sqrt(2u) ≤ 2`); otherwise a backward sweep normalised by
/// `Q_0`.
pub fn legendre_q_seq(mu_max: usize, u: f64) -> Result<Vec<f64>> {
    check_u("legendre_q", u)?;
    let x = 1.0 + u;
    let q0 = 0.5 * (2.0 / u).ln_1p();
    if mu_max as f64 * (2.0 * u).sqrt() <= 2.0 {
        let mut out = Vec::with_capacity(mu_max + 1);
        out.push(q0);
        if mu_max >= 1 {
            out.push(x * q0 - 1.0);
        }
        for n in 1..mu_max {
            let next = ((2 * n + 1) as f64 * x * out[n] - n as f64 * out[n - 1]) / (n + 1) as f64;
            out.push(next);
        }
        return Ok(out);
    }
    let ln_r = (u + (u * (2.0 + u)).sqrt()).ln_1p();
    let start = mu_max + (MILLER_DAMPING_LN / (2.0 * ln_r)).ceil() as usize + 10;
    let mut kept = vec![0.0; mu_max + 1];
    let mut hi = 0.0;
    let mut cur = 1e-300;
    for n in (1..=start).rev() {
        if n <= mu_max {
            kept[n] = cur;
        }
        let lower = ((2 * n + 1) as f64 * x * cur - (n + 1) as f64 * hi) / n as f64;
        hi = cur;
        cur = lower;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            hi *= 1e-250;
            kept.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    let scale = q0 / cur;
    kept[0] = cur;
    Ok(kept.into_iter().map(|v| v * scale).collect())
}

/// `P_0 .. P_{μmax}` at `ξ = 1 + u` by the (stable) upward recursion.
pub fn legendre_p_seq(mu_max: usize, u: f64) -> Vec<f64> {
    let x = 1.0 + u;
    let mut out = Vec::with_capacity(mu_max + 1);
    out.push(1.0);
    if mu_max >= 1 {
        out.push(x);
    }
    for n in 1..mu_max {
        let next = ((2 * n + 1) as f64 * x * out[n] - n as f64 * out[n - 1]) / (n + 1) as f64;
        out.push(next);
    }
    out
}

/// Lifts `f^0_μ = F_μ` to `f^σ_μ = (ξ²-1)^σ d^σF_μ/dξ^σ` for `μ ≥ σ` using
/// `f^{s+1}_μ = (μ-s) ξ f^s_μ - (μ+s) f^s_{μ-1}`, which holds for both kinds.
///
/// Returns `f^σ_μ` for `μ = 0..=μmax`; entries with `μ < σ` are zero.
pub fn lift_order(base: &[f64], sigma: usize, u: f64) -> Vec<f64> {
    let x = 1.0 + u;
    let mut cur = base.to_vec();
    for s in 0..sigma {
        let mut next = vec![0.0; cur.len()];
        for mu in (s + 1)..cur.len() {
            next[mu] = (mu - s) as f64 * x * cur[mu] - (mu + s) as f64 * cur[mu - 1];
        }
        cur = next;
    }
    cur
}

/// Coefficients `c_k` of `(ξ²-1)^σ d^σP_μ/dξ^σ · ξ^p = Σ_k c_k u^k` with
/// `u = ξ - 1`. All coefficients are non-negative.
pub fn p_assoc_u_coeffs(mu: usize, sigma: usize, p: usize) -> Vec<f64> {
    if sigma > mu {
        return vec![0.0];
    }
    // P_μ(1+u) = Σ_k C(μ,k) C(μ+k,k) (u/2)^k
    let mut pk = Vec::with_capacity(mu + 1);
    let mut c = 1.0;
    for k in 0..=mu {
        if k > 0 {
            c *= ((mu + 1 - k) * (mu + k)) as f64 / (k * k) as f64 * 0.5;
        }
        pk.push(c);
    }
    // σ-th derivative in u
    let mut deriv: Vec<f64> = (sigma..=mu)
        .map(|k| pk[k] * ((k - sigma + 1)..=k).fold(1.0, |a, j| a * j as f64))
        .collect();
    // times u^σ (2+u)^σ (1+u)^p
    let mut shifted = vec![0.0; sigma];
    shifted.append(&mut deriv);
    let mut out = shifted;
    for _ in 0..sigma {
        out = mul_linear(&out, 2.0);
    }
    for _ in 0..p {
        out = mul_linear(&out, 1.0);
    }
    out
}

fn mul_linear(c: &[f64], a: f64) -> Vec<f64> {
    let mut out = vec![0.0; c.len() + 1];
    for (k, &v) in c.iter().enumerate() {
        out[k] += a * v;
        out[k + 1] += v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_low_orders_closed_form() {
        for &u in &[1e-30, 1e-6, 0.01, 0.5, 3.0, 40.0] {
            let x = 1.0 + u;
            let q = legendre_q_seq(2, u).unwrap();
            let q0 = 0.5 * ((2.0 + u) / u).ln();
            assert!(((q[0] - q0) / q0).abs() < 1e-14);
            let q2 = 0.5 * (3.0 * x * x - 1.0) * q0 - 1.5 * x;
            if u < 0.1 {
                assert!(((q[2] - q2) / q2).abs() < 1e-12, "u={u}");
            }
        }
    }

    #[test]
    fn miller_and_upward_agree_near_switch() {
        let u = 1e-3;
        let up = legendre_q_seq(60, u).unwrap();
        let mut mill = legendre_q_seq(89, u).unwrap();
        mill.truncate(61);
        for mu in 0..=60 {
            assert!(((up[mu] - mill[mu]) / mill[mu]).abs() < 1e-12, "mu={mu}");
        }
    }

    #[test]
    fn wronskian_p_q() {
        // P_μ Q_{μ-1} - P_{μ-1} Q_μ = 1/μ
        for &u in &[0.01, 0.3, 2.0, 15.0] {
            let p = legendre_p_seq(50, u);
            let q = legendre_q_seq(50, u).unwrap();
            for mu in 1..=50 {
                let w = p[mu] * q[mu - 1] - p[mu - 1] * q[mu];
                assert!((w * mu as f64 - 1.0).abs() < 1e-11, "mu={mu} u={u}");
            }
        }
    }

    #[test]
    fn u_coeffs_reproduce_lifted_p() {
        let u = 0.37f64;
        for sigma in 0..=3usize {
            let lifted = lift_order(&legendre_p_seq(12, u), sigma, u);
            for (mu, &l) in lifted.iter().enumerate().skip(sigma) {
                for p in 0..=2usize {
                    let c = p_assoc_u_coeffs(mu, sigma, p);
                    let v: f64 = c.iter().rev().fold(0.0, |acc, &ck| acc * u + ck);
                    let want = l * (1.0 + u).powi(p as i32);
                    assert!(((v - want) / want).abs() < 1e-12, "mu={mu} s={sigma} p={p}");
                }
            }
        }
    }
}
