use crate::error::{Error, Result};

const DAMPING_TARGET: f64 = 1e-17;
const CONSISTENCY_TOL: f64 = 1e-13;

/// Truncated exponential moment `a_n(z) = ∫_0^1 t^n e^{-zt} dt`.
pub fn a_moment(n: i64, z: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::domain("a_moment", format!("n = {n} must be non-negative")));
    }
    Ok(a_moment_seq(n as usize, z)?[n as usize])
}

/// Leading large-order behaviour `e^{-z}/(n-z)`.
pub fn a_moment_large_order(n: i64, z: f64) -> f64 {
    (-z).exp() / (n as f64 - z)
}

/// `[a_0(z), ..., a_{n_max}(z)]`.
///
/// Orders up to `⌊z⌋` follow the forward recurrence from the closed form of
/// `a_0`, where it is stable; higher orders come from a backward (Miller)
/// sweep whose start is pushed up until the seed error is damped below
/// 1e-17. Both branches must agree at the meeting order.
pub fn a_moment_seq(n_max: usize, z: f64) -> Result<Vec<f64>> {
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::domain("a_moment", format!("z = {z} must be non-negative and finite")));
    }
    if z == 0.0 {
        return Ok((0..=n_max).map(|k| 1.0 / (k as f64 + 1.0)).collect());
    }
    let ez = (-z).exp();
    let k0 = (z.floor() as usize).min(n_max);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(-(-z).exp_m1() / z);
    for k in 1..=k0 {
        let prev = out[k - 1];
        out.push((k as f64 * prev - ez) / z);
    }
    if k0 == n_max {
        return Ok(out);
    }
    let mut guard = 20usize.max((2.0 * z).ceil() as usize);
    while damping(n_max, n_max + guard, z) > DAMPING_TARGET {
        guard *= 2;
    }
    let top = n_max + guard;
    let mut a = ez / (top as f64 + 1.0 - z);
    let mut high = vec![0.0; n_max + 1 - k0];
    for k in (k0 + 1..=top).rev() {
        if k <= n_max {
            high[k - k0] = a;
        }
        a = (z * a + ez) / k as f64;
    }
    let fwd = out[k0];
    if ((a - fwd) / fwd).abs() > CONSISTENCY_TOL {
        return Err(Error::NoConvergence { func: "a_moment backward sweep", terms: top });
    }
    out.extend_from_slice(&high[1..]);
    Ok(out)
}

fn damping(from: usize, to: usize, z: f64) -> f64 {
    (from + 1..=to).fold(1.0, |acc, k| acc * (z / k as f64))
}
