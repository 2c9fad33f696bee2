use std::f64::consts::FRAC_PI_2;

use super::stirling::WeightedRows;
use crate::error::{Error, Result};
use crate::series::{ExpansionSettings, SeriesOutcome, SeriesSum, Step};

const SEED: f64 = 1e-300;
const RESCALE_ABOVE: f64 = 1e250;
const AGREEMENT_TOL: f64 = 1e-14;
const MAX_GUARD_DOUBLINGS: usize = 12;

/// `i_μ(z)` with a flag raised when the true value lies below the smallest
/// normal double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselI {
    pub value: f64,
    pub underflowed: bool,
}

fn check_arg(func: &'static str, z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(func, format!("z = {z} must be positive and finite")))
    }
}

fn sinhc(z: f64) -> f64 {
    if z < 1e-8 {
        1.0
    } else {
        z.sinh() / z
    }
}

/// `k_0 .. k_{μmax}` by upward recursion. Orders past an overflow hold `+inf`.
pub fn bessel_k_seq(mu_max: usize, z: f64) -> Result<Vec<f64>> {
    check_arg("bessel_k", z)?;
    let e = (-z).exp();
    let mut out = Vec::with_capacity(mu_max + 1);
    out.push(FRAC_PI_2 * e / z);
    if mu_max >= 1 {
        out.push(FRAC_PI_2 * e * (z + 1.0) / (z * z));
    }
    for n in 1..mu_max {
        let next = out[n - 1] + (2 * n + 1) as f64 / z * out[n];
        out.push(if next.is_finite() { next } else { f64::INFINITY });
    }
    Ok(out)
}

pub fn bessel_k(mu: usize, z: f64) -> Result<f64> {
    let v = bessel_k_seq(mu, z)?[mu];
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { func: "bessel_k", order: mu as i64, arg: z })
    }
}

/// Backward sweep from order `start` keeping orders `0..=mu_max`, unnormalised.
fn miller_sweep(mu_max: usize, start: usize, z: f64) -> Vec<f64> {
    let mut kept = vec![0.0; mu_max + 1];
    let mut hi = 0.0;
    let mut cur = SEED;
    for n in (1..=start).rev() {
        if n <= mu_max {
            kept[n] = cur;
        }
        let lower = hi + (2 * n + 1) as f64 / z * cur;
        hi = cur;
        cur = lower;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            hi /= RESCALE_ABOVE;
            for v in kept.iter_mut() {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    kept[0] = cur;
    kept
}

fn normalised(mu_max: usize, start: usize, z: f64) -> Result<Vec<f64>> {
    let raw = miller_sweep(mu_max, start, z);
    let i0 = sinhc(z);
    if !i0.is_finite() {
        return Err(Error::Overflow { func: "bessel_i", order: 0, arg: z });
    }
    let scale = i0 / raw[0];
    Ok(raw.into_iter().map(|v| v * scale).collect())
}

fn agree(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| {
        if y == 0.0 {
            x.abs() < f64::MIN_POSITIVE
        } else {
            ((x - y) / y).abs() <= AGREEMENT_TOL
        }
    })
}

/// `i_0 .. i_{μmax}` by Miller's backward recurrence normalised to
/// `i_0 = sinh z / z`. Orders that underflow come back as `0`.
pub fn bessel_i_seq(mu_max: usize, z: f64) -> Result<Vec<f64>> {
    check_arg("bessel_i", z)?;
    let mut guard = 20usize.max((2.0 * z).ceil() as usize);
    let mut prev = normalised(mu_max, mu_max + guard, z)?;
    for _ in 0..MAX_GUARD_DOUBLINGS {
        guard *= 2;
        let next = normalised(mu_max, mu_max + guard, z)?;
        if agree(&prev, &next) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence { func: "bessel_i", terms: mu_max + guard })
}

pub fn bessel_i_checked(mu: usize, z: f64) -> Result<BesselI> {
    let value = bessel_i_seq(mu, z)?[mu];
    Ok(BesselI { value, underflowed: value.abs() < f64::MIN_POSITIVE })
}

/// `i_μ(z)`; an underflowed value is returned as-is (zero or subnormal).
pub fn bessel_i(mu: usize, z: f64) -> Result<f64> {
    bessel_i_checked(mu, z).map(|b| b.value)
}

fn large_order_sum(z: f64, nu: f64, alternate: bool, settings: &ExpansionSettings) -> SeriesOutcome {
    let mut rows = WeightedRows::new(z, nu);
    let mut sum = SeriesSum::new(settings);
    for m in 0..settings.max_terms {
        let b = rows.alternating_sum(m, |_| 1.0);
        let t = if alternate && m % 2 == 1 { -b } else { b };
        if sum.push(t) != Step::Continue {
            break;
        }
    }
    sum.finish()
}

/// `i_μ(z) = z^μ/(2μ+1)!! Σ_m b_m(z)/ν^m`, `ν = μ + ½`.
pub fn bessel_i_large_order(mu: usize, z: f64, settings: &ExpansionSettings) -> Result<SeriesOutcome> {
    check_arg("bessel_i_large_order", z)?;
    settings.validate()?;
    let pref = (1..=mu).fold(1.0, |acc, k| acc * z / (2 * k + 1) as f64);
    Ok(large_order_sum(z, mu as f64 + 0.5, false, settings).scaled(pref))
}

/// `k_μ(z) = (π/2)(2μ-1)!!/z^{μ+1} Σ_m (-1)^m b_m(z)/ν^m`.
pub fn bessel_k_large_order(mu: usize, z: f64, settings: &ExpansionSettings) -> Result<SeriesOutcome> {
    check_arg("bessel_k_large_order", z)?;
    settings.validate()?;
    let pref = (1..=mu).fold(FRAC_PI_2 / z, |acc, k| acc * (2 * k - 1) as f64 / z);
    if !pref.is_finite() {
        return Err(Error::Overflow { func: "bessel_k_large_order", order: mu as i64, arg: z });
    }
    Ok(large_order_sum(z, mu as f64 + 0.5, true, settings).scaled(pref))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn closed_forms() {
        assert!(rel(bessel_i(0, 1.0).unwrap(), 1f64.sinh()) < 1e-15);
        assert!(rel(bessel_k(0, 1.0).unwrap(), FRAC_PI_2 * (-1f64).exp()) < 1e-15);
        let z = 2.5f64;
        let i1 = (z * z.cosh() - z.sinh()) / (z * z);
        assert!(rel(bessel_i(1, z).unwrap(), i1) < 1e-14);
    }

    #[test]
    fn wronskian_grid() {
        for &z in &[0.1, 0.7, 3.0, 12.0, 30.0, 50.0] {
            let i = bessel_i_seq(81, z).unwrap();
            let k = bessel_k_seq(81, z).unwrap();
            let target = -FRAC_PI_2 / (z * z);
            for mu in 1..=80usize {
                let m = mu as f64;
                let di = (m * i[mu - 1] + (m + 1.0) * i[mu + 1]) / (2.0 * m + 1.0);
                let dk = -(m * k[mu - 1] + (m + 1.0) * k[mu + 1]) / (2.0 * m + 1.0);
                let w = i[mu] * dk - di * k[mu];
                assert!(rel(w, target) < 1e-12, "mu={mu} z={z} w={w}");
            }
        }
    }

    #[test]
    fn large_order_matches_standard() {
        let s = ExpansionSettings::default();
        for &z in &[0.5, 2.0, 8.0] {
            let mu = (2.0 * z) as usize + 10;
            let i = bessel_i_large_order(mu, z, &s).unwrap();
            let k = bessel_k_large_order(mu, z, &s).unwrap();
            assert!(rel(i.value, bessel_i(mu, z).unwrap()) < 1e-12);
            assert!(rel(k.value, bessel_k(mu, z).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn underflow_is_flagged() {
        let b = bessel_i_checked(200, 0.01).unwrap();
        assert!(b.underflowed);
        assert!(matches!(bessel_i(3, 0.0), Err(Error::Domain { .. })));
    }
}
