use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_CAP: usize = 200;
const CF_CAP: usize = 200_000;
const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BY: f64 = 1e-150;

/// Digamma function at a positive integer, `Ψ(n) = -γ + Σ_{k<n} 1/k`.
pub fn digamma_int(n: i64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("digamma_int", format!("n = {n} must be positive")));
    }
    Ok((1..n).fold(-EULER_GAMMA, |acc, k| acc + 1.0 / k as f64))
}

/// Generalised exponential integral `E_n(z) = ∫_1^∞ t^{-n} e^{-zt} dt`.
///
/// Non-positive orders use the upward recursion from `E_0 = e^{-z}/z`;
/// positive orders use the power series for `z < 1` and the continued
/// fraction otherwise.
pub fn exp_int(n: i64, z: f64) -> Result<f64> {
    check_arg(z)?;
    if n <= 0 {
        let m = n.unsigned_abs() as usize;
        let mut e = (-z).exp() / z;
        for j in 1..=m {
            e = ((-z).exp() + j as f64 * e) / z;
            if !e.is_finite() {
                return Err(Error::Overflow { func: "exp_int", order: -(j as i64), arg: z });
            }
        }
        Ok(e)
    } else if z < 1.0 {
        series(n, z)
    } else {
        continued_fraction(n, z)
    }
}

/// `[E_0(z), E_{-1}(z), ..., E_{-m_max}(z)]`; entries past an overflow are `+inf`.
pub fn exp_int_neg_seq(m_max: usize, z: f64) -> Result<Vec<f64>> {
    check_arg(z)?;
    let ez = (-z).exp();
    let mut out = Vec::with_capacity(m_max + 1);
    let mut e = ez / z;
    out.push(e);
    for j in 1..=m_max {
        e = (ez + j as f64 * e) / z;
        out.push(e);
    }
    Ok(out)
}

/// Leading large-order behaviour `e^{-z}/(n+z)`.
pub fn exp_int_large_order(n: i64, z: f64) -> f64 {
    (-z).exp() / (n as f64 + z)
}

fn check_arg(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("exp_int", format!("z = {z} must be positive and finite")))
    }
}

fn series(n: i64, z: f64) -> Result<f64> {
    let nm1 = (n - 1) as usize;
    let special_k = nm1;
    let mut power = 1.0; // (-z)^k / k!
    let mut sum = 0.0;
    let mut special = 0.0;
    for k in 0..=nm1 + SERIES_CAP {
        if k > 0 {
            power *= -z / k as f64;
        }
        if k == special_k {
            special = power * (digamma_int(n)? - z.ln());
            continue;
        }
        let t = power / (k as f64 - nm1 as f64);
        sum -= t;
        if k > special_k && t.abs() <= 0.5 * f64::EPSILON * (sum + special).abs() {
            return Ok(sum + special);
        }
    }
    Err(Error::NoConvergence { func: "exp_int series", terms: SERIES_CAP })
}

/// `e^{-z}(1/(z+ n/(1+ 1/(z+ (n+1)/(1+ 2/(z+ ...))))))` through the forward
/// numerator/denominator recurrences, rescaled whenever they grow past 1e150.
fn continued_fraction(n: i64, z: f64) -> Result<f64> {
    let nf = n as f64;
    let (mut a_prev, mut a_cur) = (1.0_f64, 0.0_f64);
    let (mut b_prev, mut b_cur) = (0.0_f64, 1.0_f64);
    let mut last = f64::NAN;
    for k in 1..=CF_CAP {
        let (num, den) = if k == 1 {
            (1.0, z)
        } else if k % 2 == 0 {
            (nf + (k / 2 - 1) as f64, 1.0)
        } else {
            (((k - 1) / 2) as f64, z)
        };
        let a_next = den * a_cur + num * a_prev;
        let b_next = den * b_cur + num * b_prev;
        a_prev = a_cur;
        a_cur = a_next;
        b_prev = b_cur;
        b_cur = b_next;
        if b_cur.abs() > RESCALE_ABOVE || a_cur.abs() > RESCALE_ABOVE {
            a_prev *= RESCALE_BY;
            a_cur *= RESCALE_BY;
            b_prev *= RESCALE_BY;
            b_cur *= RESCALE_BY;
        }
        if k % 2 == 1 {
            let f = a_cur / b_cur;
            if (f - last).abs() <= f64::EPSILON * f.abs() {
                return Ok(f * (-z).exp());
            }
            last = f;
        }
    }
    Err(Error::NoConvergence { func: "exp_int continued fraction", terms: CF_CAP })
}

/// Memoised `E_n(z)` at a fixed argument.
#[derive(Debug, Clone)]
pub struct ExpIntTable {
    z: f64,
    neg: Vec<f64>,
    pos: Vec<Option<f64>>,
}

impl ExpIntTable {
    pub fn new(z: f64) -> Result<Self> {
        check_arg(z)?;
        Ok(Self { z, neg: vec![(-z).exp() / z], pos: Vec::new() })
    }

    pub fn arg(&self) -> f64 {
        self.z
    }

    /// `E_n(z)`; orders past the overflow threshold come back as `+inf`.
    pub fn get(&mut self, n: i64) -> Result<f64> {
        if n <= 0 {
            let m = n.unsigned_abs() as usize;
            let ez = (-self.z).exp();
            while self.neg.len() <= m {
                let j = self.neg.len();
                let prev = self.neg[j - 1];
                self.neg.push((ez + j as f64 * prev) / self.z);
            }
            Ok(self.neg[m])
        } else {
            let i = n as usize;
            if self.pos.len() <= i {
                self.pos.resize(i + 1, None);
            }
            match self.pos[i] {
                Some(v) => Ok(v),
                None => {
                    let v = exp_int(n, self.z)?;
                    self.pos[i] = Some(v);
                    Ok(v)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn closed_forms() {
        for &z in &[0.5, 1.0, 10.0] {
            assert!(rel(exp_int(0, z).unwrap(), (-z).exp() / z) < 1e-15);
        }
        assert!(rel(exp_int(-1, 1.0).unwrap(), 2.0 * (-1.0f64).exp()) < 1e-15);
    }

    #[test]
    fn series_and_fraction_meet_at_one() {
        for n in [1, 2, 5, 31] {
            let below = exp_int(n, 1.0 - 1e-12).unwrap();
            let above = exp_int(n, 1.0).unwrap();
            assert!(rel(below, above) < 1e-11, "n={n}: {below} vs {above}");
        }
    }

    #[test]
    fn order_recursion_is_satisfied() {
        // n E_{n+1}(z) = e^{-z} - z E_n(z)
        for &z in &[0.3, 1.5, 7.0, 40.0] {
            for n in 1..40 {
                let lhs = n as f64 * exp_int(n + 1, z).unwrap();
                let rhs = (-z).exp() - z * exp_int(n, z).unwrap();
                assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max((-z).exp()), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(exp_int(2, 0.0).is_err());
        assert!(exp_int(2, -1.0).is_err());
        assert!(matches!(exp_int(-400, 0.01), Err(Error::Overflow { .. })));
        assert!(digamma_int(0).is_err());
    }

    #[test]
    fn digamma_small_values() {
        assert!((digamma_int(1).unwrap() + EULER_GAMMA).abs() < 1e-16);
        assert!((digamma_int(2).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-16);
    }

    #[test]
    fn table_matches_direct_calls() {
        let mut t = ExpIntTable::new(2.5).unwrap();
        for n in [-30, -3, 0, 1, 7, 50] {
            assert_eq!(t.get(n).unwrap(), exp_int(n, 2.5).unwrap());
        }
    }
}
