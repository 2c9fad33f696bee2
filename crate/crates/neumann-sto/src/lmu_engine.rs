//! `L_μ^σ(p, α)`: large-order expansion of `L_μ(α)` plus the `p`- and
//! `σ`-raising recursions.

use std::f64::consts::FRAC_2_PI;

use crate::error::{Error, Result};
use crate::legendre::{legendre_q_seq, lift_order};
use crate::quadrature::exp_sinh;
use crate::series::{ExpansionSettings, SeriesOutcome, SeriesSum, Step};
use crate::special_fn::{a_moment_seq, ExpIntTable, WeightedRows};

const DIRECT_QUAD_TOL: f64 = 1e-14;

/// Index set of one `L_μ^σ(p, α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LRequest {
    pub mu: usize,
    pub sigma: usize,
    pub p: usize,
    pub alpha: f64,
}

impl LRequest {
    pub fn new(mu: usize, sigma: usize, p: usize, alpha: f64) -> Result<Self> {
        if sigma > mu {
            return Err(Error::domain("LRequest", format!("sigma = {sigma} exceeds mu = {mu}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain("LRequest", format!("alpha = {alpha} must be positive")));
        }
        Ok(Self { mu, sigma, p, alpha })
    }
}

fn check_alpha(func: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(func, format!("alpha = {alpha} must be positive")))
    }
}

fn finite(func: &'static str, m: usize, alpha: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { func, order: m as i64, arg: alpha })
    }
}

/// `λ_m^μ(α) = ∫_0^1 t^μ b_m(αt) e^{-αt} dt`.
pub fn lambda_coeff(m: usize, mu: usize, alpha: f64) -> Result<f64> {
    check_alpha("lambda_coeff", alpha)?;
    let a = a_moment_seq(mu + 2 * m, alpha)?;
    let v = WeightedRows::new(alpha, 1.0).alternating_sum(m, |k| a[mu + 2 * k]);
    finite("lambda_coeff", m, alpha, v)
}

/// `Λ_m^μ(α) = ∫_1^∞ t^{-μ-1} b_m(αt) e^{-αt} dt`, a combination of
/// `E_{μ+1-2k}(α)`.
pub fn big_lambda_coeff(m: usize, mu: usize, alpha: f64) -> Result<f64> {
    check_alpha("big_lambda_coeff", alpha)?;
    let mut e = ExpIntTable::new(alpha)?;
    let mut vals = Vec::with_capacity(m + 1);
    for k in 0..=m {
        vals.push(e.get(mu as i64 + 1 - 2 * k as i64)?);
    }
    let v = WeightedRows::new(alpha, 1.0).alternating_sum(m, |k| vals[k]);
    finite("big_lambda_coeff", m, alpha, v)
}

/// Scaled coefficient streams `b_m/ν^m`, `λ_m/ν^m`, `Λ_m/ν^m` at fixed
/// `(μ, α)`, grown on demand.
struct ScaledCoefficients {
    mu: usize,
    rows: WeightedRows,
    a: Vec<f64>,
    e: ExpIntTable,
    b: Vec<f64>,
    lam: Vec<f64>,
    big: Vec<f64>,
}

impl ScaledCoefficients {
    fn new(mu: usize, alpha: f64, max_terms: usize) -> Result<Self> {
        Ok(Self {
            mu,
            rows: WeightedRows::new(alpha, mu as f64 + 0.5),
            a: a_moment_seq(mu + 2 * max_terms, alpha)?,
            e: ExpIntTable::new(alpha)?,
            b: Vec::new(),
            lam: Vec::new(),
            big: Vec::new(),
        })
    }

    fn extend_to(&mut self, m: usize) -> Result<()> {
        while self.b.len() <= m {
            let j = self.b.len();
            let mut ev = Vec::with_capacity(j + 1);
            for k in 0..=j {
                ev.push(self.e.get(self.mu as i64 + 1 - 2 * k as i64)?);
            }
            let a = &self.a;
            let mu = self.mu;
            self.b.push(self.rows.alternating_sum(j, |_| 1.0));
            self.lam.push(self.rows.alternating_sum(j, |k| a[mu + 2 * k]));
            self.big.push(self.rows.alternating_sum(j, |k| ev[k]));
        }
        Ok(())
    }

    /// `c_s/ν^s = Σ_l b̃_{s-l} (-1)^l [Λ̃_l + (-1)^s λ̃_l]`.
    fn term(&mut self, s: usize) -> Result<f64> {
        self.extend_to(s)?;
        let sign_s = if s % 2 == 0 { 1.0 } else { -1.0 };
        let mut acc = 0.0;
        for l in 0..=s {
            let t = self.b[s - l] * (self.big[l] + sign_s * self.lam[l]);
            acc += if l % 2 == 0 { t } else { -t };
        }
        Ok(acc)
    }
}

/// `L_μ(α) = (2μ+1)^{-1} Σ_s c_s^μ(α)/(μ+½)^s`, summed until two consecutive
/// terms fall below `rel_tol` or divergence is detected.
pub fn l_large_order(mu: usize, alpha: f64, settings: &ExpansionSettings) -> Result<SeriesOutcome> {
    check_alpha("l_large_order", alpha)?;
    settings.validate()?;
    let mut coeffs = ScaledCoefficients::new(mu, alpha, settings.max_terms)?;
    let mut sum = SeriesSum::new(settings);
    for s in 0..settings.max_terms {
        let t = coeffs.term(s)?;
        if sum.push(t) != Step::Continue {
            break;
        }
    }
    Ok(sum.finish().scaled(1.0 / (2 * mu + 1) as f64))
}

/// Closed leading behaviour `e^{-α}/(2μ+1) [1/(μ-α) + 1/(μ+α)]`, valid for
/// `μ > α`.
pub fn l_leading(mu: usize, alpha: f64) -> Result<f64> {
    check_alpha("l_leading", alpha)?;
    let m = mu as f64;
    if m <= alpha {
        return Err(Error::domain("l_leading", format!("mu = {mu} must exceed alpha = {alpha}")));
    }
    Ok((-alpha).exp() / (2.0 * m + 1.0) * (1.0 / (m - alpha) + 1.0 / (m + alpha)))
}

/// The two factors of `L_μ = 𝒦_μ i_μ + 𝓘_μ k_μ`, each from its own
/// large-order series. Returned as `(𝓘_μ, 𝒦_μ)`.
pub fn ik_split(mu: usize, alpha: f64, settings: &ExpansionSettings) -> Result<(SeriesOutcome, SeriesOutcome)> {
    check_alpha("ik_split", alpha)?;
    settings.validate()?;
    let mut coeffs = ScaledCoefficients::new(mu, alpha, settings.max_terms)?;
    let mut si = SeriesSum::new(settings);
    let mut sk = SeriesSum::new(settings);
    for m in 0..settings.max_terms {
        coeffs.extend_to(m)?;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        if si.state() == Step::Continue {
            si.push(coeffs.lam[m]);
        }
        if sk.state() == Step::Continue {
            sk.push(sign * coeffs.big[m]);
        }
        if si.state() != Step::Continue && sk.state() != Step::Continue {
            break;
        }
    }
    let pref_i = (1..=mu).fold(FRAC_2_PI * alpha, |acc, k| acc * alpha / (2 * k + 1) as f64);
    let pref_k = (1..=mu).fold(1.0, |acc, k| acc * (2 * k - 1) as f64 / alpha);
    let pref_k = finite("ik_split", mu, alpha, pref_k)?;
    Ok((si.finish().scaled(pref_i), sk.finish().scaled(pref_k)))
}

/// `L_μ^σ(p, α)` by direct exp-sinh quadrature of its defining integral.
/// Intended for low orders where the large-order series is unusable.
pub fn l_direct(req: &LRequest) -> Result<f64> {
    let LRequest { mu, sigma, p, alpha } = *req;
    let norm = ((mu - sigma + 1)..=(mu + sigma)).fold(1.0, |acc, j| acc / j as f64);
    let r = exp_sinh(
        |u| {
            let x = 1.0 + u;
            let q = match legendre_q_seq(mu, u) {
                Ok(q) => q,
                Err(_) => return f64::NAN,
            };
            let h = lift_order(&q, sigma, u)[mu];
            h * x.powi(p as i32) * (-alpha * x).exp()
        },
        1.0 / alpha,
        DIRECT_QUAD_TOL,
    )?;
    Ok(norm * r.value)
}

/// `L_μ(α)` for `μ = 0..=μmax`: large-order expansion where it converges at
/// `μ ≥ mu_switch`, direct quadrature elsewhere.
pub fn l_base_table(mu_max: usize, alpha: f64, settings: &ExpansionSettings, mu_switch: usize) -> Result<Vec<f64>> {
    check_alpha("l_base_table", alpha)?;
    let mut out = Vec::with_capacity(mu_max + 1);
    for mu in 0..=mu_max {
        let v = if mu >= mu_switch {
            let s = l_large_order(mu, alpha, settings)?;
            if s.converged {
                s.value
            } else {
                l_direct(&LRequest::new(mu, 0, 0, alpha)?)?
            }
        } else {
            l_direct(&LRequest::new(mu, 0, 0, alpha)?)?
        };
        out.push(v);
    }
    Ok(out)
}

/// `L_μ^σ(p, α)` through [`l_base_table`] and [`raise_p_and_sigma`]. The
/// term count and convergence flag are those of the large-order series at
/// `μ` itself.
pub fn l_raised(req: &LRequest, settings: &ExpansionSettings, mu_switch: usize) -> Result<SeriesOutcome> {
    let LRequest { mu, sigma, p, alpha } = *req;
    let lo = l_large_order(mu, alpha, settings)?;
    if sigma == 0 && p == 0 && lo.converged && mu >= mu_switch {
        return Ok(lo);
    }
    let base = l_base_table(mu + p + sigma, alpha, settings, mu_switch)?;
    let table = raise_p_and_sigma(&base, mu, p, sigma)?;
    let value = table.get(mu, p, sigma).ok_or(Error::Capacity { requested: mu, available: table.mu_max() })?;
    Ok(SeriesOutcome { value, ..lo })
}

/// `L_μ^σ(p, α)` over `μ ≤ mu_max`, `p ≤ p_max`, `σ ≤ min(μ, sigma_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LTable {
    mu_max: usize,
    p_max: usize,
    sigma_max: usize,
    // indexed [sigma][p][mu]
    data: Vec<Vec<Vec<f64>>>,
}

impl LTable {
    pub fn mu_max(&self) -> usize {
        self.mu_max
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn sigma_max(&self) -> usize {
        self.sigma_max
    }

    pub fn get(&self, mu: usize, p: usize, sigma: usize) -> Option<f64> {
        if mu > self.mu_max || p > self.p_max || sigma > self.sigma_max || sigma > mu {
            return None;
        }
        Some(self.data[sigma][p][mu])
    }
}

/// Fills `L_μ^σ(p, α)` from `L_μ(α)` by raising `p`
/// (`L_μ(p+1) = ((μ+1)L_{μ+1}(p) + μL_{μ-1}(p))/(2μ+1)`) and then `σ`
/// (`L_μ^{σ+1} = (L_{μ+1}^σ - L_{μ-1}^σ)/(2μ+1)`).
///
/// `base` must cover `μ = 0..=mu_max + p_max + sigma_max`.
pub fn raise_p_and_sigma(base: &[f64], mu_max: usize, p_max: usize, sigma_max: usize) -> Result<LTable> {
    let need = mu_max + p_max + sigma_max + 1;
    if base.len() < need {
        return Err(Error::Capacity { requested: need - 1, available: base.len().saturating_sub(1) });
    }
    let top = mu_max + sigma_max;
    let mut by_p: Vec<Vec<f64>> = Vec::with_capacity(p_max + 1);
    by_p.push(base[..=top + p_max].to_vec());
    for p in 1..=p_max {
        let prev = &by_p[p - 1];
        let span = top + p_max - p;
        let next: Vec<f64> = (0..=span)
            .map(|mu| {
                let m = mu as f64;
                let lower = if mu == 0 { 0.0 } else { m * prev[mu - 1] };
                ((m + 1.0) * prev[mu + 1] + lower) / (2.0 * m + 1.0)
            })
            .collect();
        by_p.push(next);
    }
    let mut data = Vec::with_capacity(sigma_max + 1);
    let mut cur: Vec<Vec<f64>> = by_p.iter().map(|v| v[..=top].to_vec()).collect();
    data.push(cur.iter().map(|v| v[..=mu_max].to_vec()).collect::<Vec<_>>());
    for s in 0..sigma_max {
        let span = top - s - 1;
        cur = cur
            .iter()
            .map(|row| {
                (0..=span)
                    .map(|mu| {
                        if mu < s + 1 {
                            0.0
                        } else {
                            (row[mu + 1] - row[mu - 1]) / (2 * mu + 1) as f64
                        }
                    })
                    .collect()
            })
            .collect();
        data.push(cur.iter().map(|v| v[..=mu_max].to_vec()).collect());
    }
    Ok(LTable { mu_max, p_max, sigma_max, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn lowest_coefficients() {
        let a30 = crate::special_fn::a_moment(30, 1.0).unwrap();
        assert_eq!(lambda_coeff(0, 30, 1.0).unwrap(), a30);
        let e31 = crate::special_fn::exp_int(31, 1.0).unwrap();
        assert_eq!(big_lambda_coeff(0, 30, 1.0).unwrap(), e31);
        let a = 2.3;
        let y = 0.25 * a * a;
        let l1 = lambda_coeff(1, 20, a).unwrap();
        assert!(rel(l1, y * crate::special_fn::a_moment(22, a).unwrap()) < 1e-15);
        let big1 = big_lambda_coeff(1, 20, a).unwrap();
        assert!(rel(big1, y * crate::special_fn::exp_int(19, a).unwrap()) < 1e-15);
    }

    #[test]
    fn leading_form_identity() {
        let (mu, a) = (40usize, 3.5f64);
        let m = mu as f64;
        let alt = (-a).exp() * 2.0 * m / ((2.0 * m + 1.0) * (m * m - a * a));
        assert!(rel(l_leading(mu, a).unwrap(), alt) < 1e-15);
        assert!(l_leading(3, 3.0).is_err());
    }

    #[test]
    fn split_recombines() {
        let s = ExpansionSettings::default();
        for &(mu, a) in &[(30usize, 0.1f64), (40, 5.0), (60, 10.0)] {
            let (i, k) = ik_split(mu, a, &s).unwrap();
            let bi = crate::special_fn::bessel_i(mu, a).unwrap();
            let bk = crate::special_fn::bessel_k(mu, a).unwrap();
            let l = l_large_order(mu, a, &s).unwrap();
            assert!(rel(k.value * bi + i.value * bk, l.value) < 1e-12, "mu={mu} a={a}");
        }
    }

    #[test]
    fn identity_raise() {
        let base: Vec<f64> = (0..10).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let t = raise_p_and_sigma(&base, 9, 0, 0).unwrap();
        for (mu, &b) in base.iter().enumerate() {
            assert_eq!(t.get(mu, 0, 0).unwrap(), b);
        }
        assert!(matches!(raise_p_and_sigma(&base, 9, 1, 0), Err(Error::Capacity { .. })));
    }

    #[test]
    fn direct_matches_expansion() {
        let s = ExpansionSettings::default();
        for &(mu, a) in &[(30usize, 0.1f64), (50, 10.0), (25, 1.0)] {
            let l = l_large_order(mu, a, &s).unwrap();
            let d = l_direct(&LRequest::new(mu, 0, 0, a).unwrap()).unwrap();
            assert!(rel(d, l.value) < 1e-11, "mu={mu} a={a} {d} {}", l.value);
        }
    }

    #[test]
    fn raised_values_match_direct() {
        let a = 1.0;
        let base: Vec<f64> = (0..=34).map(|mu| l_direct(&LRequest::new(mu, 0, 0, a).unwrap()).unwrap()).collect();
        let t = raise_p_and_sigma(&base, 30, 2, 2).unwrap();
        for &(mu, p, sg) in &[(30usize, 1usize, 0usize), (30, 0, 1), (12, 2, 2), (5, 1, 1)] {
            let d = l_direct(&LRequest::new(mu, sg, p, a).unwrap()).unwrap();
            assert!(rel(t.get(mu, p, sg).unwrap(), d) < 1e-10, "{mu} {p} {sg}");
        }
    }
}
