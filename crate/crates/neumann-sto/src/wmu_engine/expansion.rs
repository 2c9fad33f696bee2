//! Large-order expansion of `W_μ(p; α₁, α₂)` and its `α₂`-derivatives.

use super::basic::BasicIntegralCache;
use super::WParams;
use crate::error::{Error, Result};
use crate::series::{ExpansionSettings, SeriesOutcome, SeriesSum, Step, UNIT_ROUNDOFF};
use crate::special_fn::WeightedRows;

/// Overflow in a basic integral is reported to the summation as an infinite
/// term, which ends it as divergent.
fn or_inf(r: Result<f64>) -> Result<f64> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::Overflow { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn falling(x: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| if i > x { 0.0 } else { acc * (x - i) as f64 })
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `τ_m^{μp} = Σ_k (-1)^{m-k} S_mk/k! (α₂/2)^{2k} ω_{μ+2k,p}`, with `τ_0 = ω_{μp}`.
pub fn tau_coeff(m: usize, mu: usize, p: usize, alpha1: f64, alpha2: f64) -> Result<f64> {
    let mut cache = BasicIntegralCache::new(alpha1, alpha2)?;
    let vals: Vec<f64> = (0..=m).map(|k| cache.omega(mu + 2 * k, p)).collect::<Result<_>>()?;
    Ok(WeightedRows::new(alpha2, 1.0).alternating_sum(m, |k| vals[k]))
}

/// `T_m^{μp} = Σ_k (-1)^{m-k} S_mk/k! (α₂/2)^{2k} Ω_{2k-μ-1,p}`, with
/// `T_0 = Ω_{-μ-1,p}`.
pub fn big_t_coeff(m: usize, mu: usize, p: usize, alpha1: f64, alpha2: f64) -> Result<f64> {
    let mut cache = BasicIntegralCache::new(alpha1, alpha2)?;
    let vals: Vec<f64> =
        (0..=m).map(|k| cache.big_omega(2 * k as i64 - mu as i64 - 1, p)).collect::<Result<_>>()?;
    Ok(WeightedRows::new(alpha2, 1.0).alternating_sum(m, |k| vals[k]))
}

/// Scaled `α₂`-derivatives of `b_m`, `τ_m`, `T_m` (each divided by `ν^m`)
/// up to order `depth`, grown one `m` at a time.
struct DerivativeStreams<'c> {
    mu: usize,
    p: usize,
    depth: usize,
    alpha2: f64,
    rows: WeightedRows,
    cache: &'c mut BasicIntegralCache,
    // [m][j]
    b: Vec<Vec<f64>>,
    tau: Vec<Vec<f64>>,
    big_t: Vec<Vec<f64>>,
}

impl<'c> DerivativeStreams<'c> {
    fn new(mu: usize, p: usize, depth: usize, cache: &'c mut BasicIntegralCache) -> Self {
        let alpha2 = cache.alpha2();
        Self {
            mu,
            p,
            depth,
            alpha2,
            rows: WeightedRows::new(alpha2, mu as f64 + 0.5),
            cache,
            b: Vec::new(),
            tau: Vec::new(),
            big_t: Vec::new(),
        }
    }

    fn extend_to(&mut self, m: usize) -> Result<()> {
        while self.b.len() <= m {
            let l = self.b.len();
            let row = self.rows.row(l).to_vec();
            let start = usize::from(l > 0);
            let depth = self.depth;
            let mut b = vec![0.0; depth + 1];
            let mut tau = vec![0.0; depth + 1];
            let mut big_t = vec![0.0; depth + 1];
            for (k, &c) in row.iter().enumerate().skip(start) {
                let s = sign(l - k);
                // ∂^r c_{l,k} = c_{l,k} (2k)_r / α₂^r
                let dc: Vec<f64> =
                    (0..=depth).map(|r| c * falling(2 * k, r) / self.alpha2.powi(r as i32)).collect();
                let mut om = Vec::with_capacity(depth + 1);
                let mut big = Vec::with_capacity(depth + 1);
                for q in 0..=depth {
                    om.push(or_inf(self.cache.omega(self.mu + 2 * k + q, self.p + q))?);
                    big.push(or_inf(self.cache.big_omega(2 * k as i64 - self.mu as i64 - 1 + q as i64, self.p + q))?);
                }
                for i in 0..=depth {
                    b[i] += s * dc[i];
                    for r in 0..=i {
                        let w = s * binom(i, r) * dc[r] * sign(i - r);
                        tau[i] += w * om[i - r];
                        big_t[i] += w * big[i - r];
                    }
                }
            }
            self.b.push(b);
            self.tau.push(tau);
            self.big_t.push(big_t);
        }
        Ok(())
    }

    /// `∂^J d_s / ν^s = Σ_l Σ_j C(J,j) b^{(j)}_{s-l} (-1)^l [T^{(J-j)}_l + (-1)^s τ^{(J-j)}_l]`,
    /// returned with the sum of the magnitudes of its contributions.
    fn term(&mut self, s: usize) -> Result<(f64, f64)> {
        self.extend_to(s)?;
        let jj = self.depth;
        let ss = sign(s);
        let mut acc = 0.0;
        let mut amp = 0.0;
        for l in 0..=s {
            let mut inner = 0.0;
            for j in 0..=jj {
                let (b, t, tau) = (self.b[s - l][j], self.big_t[l][jj - j], self.tau[l][jj - j]);
                inner += binom(jj, j) * b * (t + ss * tau);
                amp += binom(jj, j) * b.abs() * (t.abs() + tau.abs());
            }
            acc += sign(l) * inner;
        }
        Ok((acc, amp))
    }
}

fn sum_expansion(
    mu: usize,
    p: usize,
    depth: usize,
    cache: &mut BasicIntegralCache,
    settings: &ExpansionSettings,
) -> Result<SeriesOutcome> {
    settings.validate()?;
    let mut streams = DerivativeStreams::new(mu, p, depth, cache);
    let mut sum = SeriesSum::new(settings);
    for s in 0..settings.max_terms {
        let (t, amp) = streams.term(s)?;
        // the coefficient streams carry a few ulps of their inputs
        sum.add_rounding(8.0 * UNIT_ROUNDOFF * amp);
        if sum.push(t) != Step::Continue {
            break;
        }
    }
    Ok(sum.finish().scaled(sign(depth) / (2 * mu + 1) as f64))
}

/// `W_μ(p; α₁, α₂) = (2μ+1)^{-1} Σ_s d_s^{μp}/(μ+½)^s`.
pub fn w_large_order(p: usize, alpha1: f64, alpha2: f64, mu: usize, settings: &ExpansionSettings) -> Result<SeriesOutcome> {
    let params = WParams::new(p, 0, 0, alpha1, alpha2, mu)?;
    let mut cache = BasicIntegralCache::new(params.alpha1, params.alpha2)?;
    sum_expansion(mu, p, 0, &mut cache, settings)
}

/// `W_μ^0(p₁, p₂) = (-1)^{p₂} ∂^{p₂}/∂α₂^{p₂} W_μ(p₁; α₁, α₂)`, with the
/// derivative taken term by term through the expansion.
pub fn w_general(p1: usize, p2: usize, alpha1: f64, alpha2: f64, mu: usize, settings: &ExpansionSettings) -> Result<SeriesOutcome> {
    let params = WParams::new(p1, p2, 0, alpha1, alpha2, mu)?;
    let mut cache = BasicIntegralCache::new(params.alpha1, params.alpha2)?;
    w_general_cached(p1, p2, mu, &mut cache, settings)
}

/// As [`w_general`], reusing the caller's basic-integral cache.
pub fn w_general_cached(
    p1: usize,
    p2: usize,
    mu: usize,
    cache: &mut BasicIntegralCache,
    settings: &ExpansionSettings,
) -> Result<SeriesOutcome> {
    sum_expansion(mu, p1, p2, cache, settings)
}
