//! The basic integrals
//! `ω_np = ∫_0^1 t^n E_{-p}(α₁+α₂t) dt` and `Ω_np = ∫_1^∞ t^n E_{-p}(α₁+α₂t) dt`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::quadrature::exp_sinh;
use crate::special_fn::ExpIntTable;

const OMEGA_SERIES_CAP: usize = 20_000;
const SMALL_SERIES_CAP: usize = 400;
const SEED_SERIES_CAP: usize = 400;
const QUAD_TOL: f64 = 1e-15;
const TOL: f64 = 1e-17;

/// Algorithm used for one `Ω_np` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaRoute {
    /// Positive `n`, `p = 0`: `Ω_n0 = [e^{-α₁}E_{1-n}(α₂) - α₁Ω_{n-1,0}]/α₂` from `Ω_00`.
    UpwardRecursion,
    /// Positive `n`, `p = 0`, small `α₂`: expansion in powers of `α₂`.
    SmallAlpha2Series,
    /// Positive `n`: the diagonal recursion unrolled down to `n = 0`,
    /// a finite sum of positive terms.
    DiagonalSum,
    /// Negative `n`, `p = 0`, `α₂ ≤ α₁/4`: downward recursion from `Ω_00`.
    DownwardRecursion,
    /// Negative `n`, `p = 0`, `α₂ ≥ 4α₁`: upward recursion from a deep seed.
    SeededUpward,
    /// Negative `n` otherwise: exp-sinh quadrature of the defining integral.
    Quadrature,
    /// Negative `n`, `p > 0`: the `p`-raising recursion
    /// `Ω_np = (p/α₂)Ω_{n-1,p-1} - (α₁/α₂)Ω_{n-1,p} + e^{-α₁}E_{1-n}(α₂)/α₂`.
    /// Kept for comparison; it loses accuracy quickly with `|n|`.
    PRaising,
}

/// Depth of the seed for the upward negative-`n` recursion. Depends on `n`
/// only through blocks of 32 so neighbouring requests share a chain.
fn seed_depth(n: i64) -> i64 {
    let m = n.unsigned_abs() as i64 + 128;
    32 * ((m + 31) / 32)
}

/// Memoised `ω_np`, `Ω_np`, and the exponential integrals they need, at a
/// fixed `(α₁, α₂)`.
///
/// Every value is produced by a fixed computation path that depends only on
/// its own indices, so a cached entry is bit-identical to a fresh one.
#[derive(Debug, Clone)]
pub struct BasicIntegralCache {
    alpha1: f64,
    alpha2: f64,
    e_beta: ExpIntTable,
    e_a1: ExpIntTable,
    e_a2: ExpIntTable,
    omega: HashMap<(usize, usize), f64>,
    big: HashMap<(i64, usize), f64>,
    pos_chain: Vec<f64>,
    neg_chain: Vec<f64>,
}

impl BasicIntegralCache {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        for (name, v) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain("BasicIntegralCache", format!("{name} = {v} must be positive")));
            }
        }
        Ok(Self {
            alpha1,
            alpha2,
            e_beta: ExpIntTable::new(alpha1 + alpha2)?,
            e_a1: ExpIntTable::new(alpha1)?,
            e_a2: ExpIntTable::new(alpha2)?,
            omega: HashMap::new(),
            big: HashMap::new(),
            pos_chain: Vec::new(),
            neg_chain: Vec::new(),
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    fn beta(&self) -> f64 {
        self.alpha1 + self.alpha2
    }

    /// `E_n(α₁+α₂)`.
    pub fn exp_int_beta(&mut self, n: i64) -> Result<f64> {
        self.e_beta.get(n)
    }

    /// `ω_np(α₁, α₂)`, `n ≥ 0`.
    pub fn omega(&mut self, n: usize, p: usize) -> Result<f64> {
        if let Some(&v) = self.omega.get(&(n, p)) {
            return Ok(v);
        }
        let v = self.omega_series(n, p)?;
        self.omega.insert((n, p), v);
        Ok(v)
    }

    /// `ω_np = Σ_k n! α₂^k/(n+k+1)! E_{-p-k}(β)`, truncated once a rigorous
    /// bound on the tail drops below `1e-17` of the partial sum.
    ///
    /// Two tail bounds are tracked: the closed form
    /// `n!/α₁^{p+1} (α₂/α₁)^{N+1} (p+N+1)!/(n+N+2)!` and a ratio bound built
    /// from `E_{-m-1}(z)/E_{-m}(z) ≤ (m+1+z)/z`. The first is sharp when
    /// `α₂ ≪ α₁`; the second is the only useful one when `α₂ ≳ α₁`.
    fn omega_series(&mut self, n: usize, p: usize) -> Result<f64> {
        let (a1, a2, beta) = (self.alpha1, self.alpha2, self.beta());
        let nf = n as f64;
        let pf = p as f64;
        let e0 = self.e_beta.get(-(p as i64))?;
        let eb = (-beta).exp();
        // g = e^{-β}/E_{-m}(β) drives the ratio E_{-m}/E_{-m+1} = (g + m)/β
        let mut g = eb / e0;
        let mut term = e0 / (nf + 1.0);
        let mut sum = 0.0;
        let mut comp = 0.0;
        // remainder bound B_N, advanced multiplicatively
        let mut bound = (1..=p + 1).fold(a2 / ((nf + 1.0) * (nf + 2.0) * a1), |acc, j| acc * j as f64 / a1);
        let mut best = f64::INFINITY;
        for k in 0..OMEGA_SERIES_CAP {
            let kf = k as f64;
            if k > 0 {
                let m = pf + kf;
                let rho = (g + m) / beta;
                g /= rho;
                term *= a2 / (nf + kf + 1.0) * rho;
                bound *= a2 / a1 * (pf + kf + 1.0) / (nf + kf + 2.0);
            }
            if !term.is_finite() {
                return Err(Error::Overflow { func: "omega", order: n as i64, arg: a2 });
            }
            let t = sum + term;
            comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
            sum = t;
            let total = sum + comp;
            let r_next = a2 / beta * (pf + kf + 2.0 + beta) / (nf + kf + 2.0);
            let r_bar = if pf + beta <= nf + 1.0 { a2 / beta } else { r_next.max(a2 / beta) };
            let ratio_bound = if r_bar < 1.0 { term * r_bar / (1.0 - r_bar) } else { f64::INFINITY };
            let tail = bound.min(ratio_bound);
            best = best.min(tail / total);
            if tail <= TOL * total {
                return Ok(total);
            }
        }
        Err(Error::Truncation { achieved: best, target: TOL })
    }

    /// `Ω_np(α₁, α₂)` by the default route for its regime.
    pub fn big_omega(&mut self, n: i64, p: usize) -> Result<f64> {
        if let Some(&v) = self.big.get(&(n, p)) {
            return Ok(v);
        }
        let v = self.big_omega_with(n, p, self.default_route(n, p))?;
        self.big.insert((n, p), v);
        Ok(v)
    }

    pub fn default_route(&self, n: i64, p: usize) -> OmegaRoute {
        let (a1, a2) = (self.alpha1, self.alpha2);
        if n >= 0 {
            if p > 0 || n == 0 {
                OmegaRoute::DiagonalSum
            } else if a2 >= a1 {
                OmegaRoute::UpwardRecursion
            } else if a2 < 1.0_f64.min(0.5 * a1) {
                OmegaRoute::SmallAlpha2Series
            } else {
                OmegaRoute::DiagonalSum
            }
        } else if p == 0 && 4.0 * a2 <= a1 {
            OmegaRoute::DownwardRecursion
        } else if p == 0 && a2 >= 4.0 * a1 {
            OmegaRoute::SeededUpward
        } else {
            OmegaRoute::Quadrature
        }
    }

    /// `Ω_np` by an explicitly chosen route; not memoised.
    pub fn big_omega_with(&mut self, n: i64, p: usize, route: OmegaRoute) -> Result<f64> {
        let wrong = |what: &str| Err(Error::Routing(format!("route {route:?} does not cover {what} (n = {n}, p = {p})")));
        match route {
            OmegaRoute::UpwardRecursion => {
                if n < 0 || p > 0 {
                    return wrong("this index pair");
                }
                self.upward_n0(n as usize)
            }
            OmegaRoute::SmallAlpha2Series => {
                if n < 0 || p > 0 {
                    return wrong("this index pair");
                }
                self.small_alpha2_series(n as usize)
            }
            OmegaRoute::DiagonalSum => {
                if n < 0 {
                    return wrong("negative n");
                }
                if p == 0 && n > 0 {
                    return self.finite_sum(n as usize, 0);
                }
                self.diagonal(n as usize, p)
            }
            OmegaRoute::DownwardRecursion => {
                if n > 0 || p > 0 {
                    return wrong("this index pair");
                }
                self.downward_n0(n.unsigned_abs() as usize)
            }
            OmegaRoute::SeededUpward => {
                if n > 0 || p > 0 {
                    return wrong("this index pair");
                }
                self.seeded_upward(n)
            }
            OmegaRoute::Quadrature => self.quadrature(n, p),
            OmegaRoute::PRaising => {
                if n > 0 {
                    return wrong("positive n");
                }
                self.p_raising(n, p)
            }
        }
    }

    /// Positive-`n` values along the diagonal
    /// `Ω_np = (n/α₂)Ω_{n-1,p-1} + E_{1-p}(β)/α₂`, started from `Ω_{n-p,0}` or
    /// from `Ω_{0,q} = E_{1-q}(β)/α₂`.
    fn diagonal(&mut self, n: usize, p: usize) -> Result<f64> {
        let a2 = self.alpha2;
        let steps = n.min(p);
        let (n0, p0) = (n - steps, p - steps);
        let mut v = if p0 == 0 && n0 > 0 {
            self.big_omega(n0 as i64, 0)?
        } else {
            self.e_beta.get(1 - p0 as i64)? / a2
        };
        for j in 1..=steps {
            let (nj, pj) = (n0 + j, p0 + j);
            v = (nj as f64 * v + self.e_beta.get(1 - pj as i64)?) / a2;
        }
        Ok(v)
    }

    /// `Ω_np = n! Σ_{j=0}^n α₂^{j-n-1}/j! E_{n+1-p-j}(β)`.
    fn finite_sum(&mut self, n: usize, p: usize) -> Result<f64> {
        let a2 = self.alpha2;
        let mut sum = 0.0;
        // coefficient n!/j! α₂^{j-n-1}, built from j = n downward
        let mut c = 1.0 / a2;
        for j in (0..=n).rev() {
            let e = self.e_beta.get(n as i64 + 1 - p as i64 - j as i64)?;
            sum += c * e;
            c *= j as f64 / a2;
        }
        if sum.is_finite() {
            Ok(sum)
        } else {
            Err(Error::Overflow { func: "Omega", order: n as i64, arg: a2 })
        }
    }

    fn upward_n0(&mut self, n: usize) -> Result<f64> {
        let (a1, a2) = (self.alpha1, self.alpha2);
        if self.pos_chain.is_empty() {
            self.pos_chain.push(self.e_beta.get(1)? / a2);
        }
        let ea1 = (-a1).exp();
        while self.pos_chain.len() <= n {
            let k = self.pos_chain.len() as i64;
            let prev = *self.pos_chain.last().unwrap_or(&0.0);
            let v = (ea1 * self.e_a2.get(1 - k)? - a1 * prev) / a2;
            self.pos_chain.push(v);
        }
        let v = self.pos_chain[n];
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow { func: "Omega", order: n as i64, arg: a2 })
        }
    }

    /// `Ω_n0 = n!/α₂^{n+1} E_{n+1}(α₁) - Σ_k (-α₂)^k/k! E_{-k}(α₁)/(n+k+1)`;
    /// each term is bounded by `α₂^k/α₁^{k+1}`, so the series needs `α₂ < α₁`.
    fn small_alpha2_series(&mut self, n: usize) -> Result<f64> {
        let (a1, a2) = (self.alpha1, self.alpha2);
        if a2 >= a1 {
            return Err(Error::Routing(format!(
                "small-alpha2 series for Omega needs alpha2 < alpha1 (got {a2} >= {a1})"
            )));
        }
        let lead = (1..=n).fold(self.e_a1.get(n as i64 + 1)? / a2, |acc, j| acc * j as f64 / a2);
        let mut sum = 0.0;
        let mut c = 1.0;
        for k in 0..SMALL_SERIES_CAP {
            if k > 0 {
                c *= -a2 / k as f64;
            }
            let term = c * self.e_a1.get(-(k as i64))? / (n + k + 1) as f64;
            sum += term;
            let bound = (a2 / a1).powi(k as i32 + 1) / (n + k + 2) as f64 / (1.0 - a2 / a1);
            if bound <= TOL * (lead - sum).abs() {
                let v = lead - sum;
                return if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Overflow { func: "Omega", order: n as i64, arg: a2 })
                };
            }
        }
        Err(Error::NoConvergence { func: "Omega small-alpha2 series", terms: SMALL_SERIES_CAP })
    }

    fn downward_n0(&mut self, m: usize) -> Result<f64> {
        let (a1, a2) = (self.alpha1, self.alpha2);
        if self.neg_chain.is_empty() {
            self.neg_chain.push(self.e_beta.get(1)? / a2);
        }
        let ea1 = (-a1).exp();
        while self.neg_chain.len() <= m {
            // Ω_{n-1,0} = [e^{-α₁}E_{1-n}(α₂) - α₂Ω_n0]/α₁ with n = -(len-1)
            let n = 1 - self.neg_chain.len() as i64;
            let prev = *self.neg_chain.last().unwrap_or(&0.0);
            let v = (ea1 * self.e_a2.get(1 - n)? - a2 * prev) / a1;
            self.neg_chain.push(v);
        }
        Ok(self.neg_chain[m])
    }

    /// `Ω_{-N,p} = Σ_j (-α₂)^j E_{-p-j}(β) / Π_{i=1}^{j+1}(N-i)`, obtained by
    /// repeated integration by parts; asymptotic in `1/N`.
    fn deep_seed(&mut self, depth: i64, p: usize) -> Result<f64> {
        let a2 = self.alpha2;
        let mut sum = 0.0;
        let mut c = 1.0;
        let mut last = f64::INFINITY;
        for j in 0..SEED_SERIES_CAP as i64 {
            let d = (depth - 1 - j) as f64;
            if d <= 0.0 {
                break;
            }
            c /= d;
            if j > 0 {
                c *= -a2;
            }
            let term = c * self.e_beta.get(-(p as i64) - j)?;
            if term.abs() > last {
                break;
            }
            sum += term;
            last = term.abs();
            if last <= TOL * sum.abs() {
                return Ok(sum);
            }
        }
        Err(Error::Truncation { achieved: last / sum.abs(), target: TOL })
    }

    fn seeded_upward(&mut self, n: i64) -> Result<f64> {
        let (a1, a2) = (self.alpha1, self.alpha2);
        let depth = seed_depth(n);
        let ea1 = (-a1).exp();
        let mut v = self.deep_seed(depth, 0)?;
        for k in (-depth + 1)..=n {
            v = (ea1 * self.e_a2.get(1 - k)? - a1 * v) / a2;
            if k < n && seed_depth(k) == depth && k != 0 {
                self.big.entry((k, 0)).or_insert(v);
            }
        }
        Ok(v)
    }

    /// `∫_1^∞ t^n E_{-p}(α₁+α₂t) dt` by exp-sinh with `t = 1 + u`, scale
    /// `1/(α₂+|n|)`.
    fn quadrature(&mut self, n: i64, p: usize) -> Result<f64> {
        let (a1, a2) = (self.alpha1, self.alpha2);
        let scale = 1.0 / (a2 + n.unsigned_abs() as f64).max(1.0);
        let r = exp_sinh(
            |u| {
                let t = 1.0 + u;
                let z = a1 + a2 * t;
                let ez = (-z).exp();
                if ez == 0.0 {
                    return 0.0;
                }
                let mut e = ez / z;
                for j in 1..=p {
                    e = (ez + j as f64 * e) / z;
                }
                t.powi(n as i32) * e
            },
            scale,
            QUAD_TOL,
        )?;
        Ok(r.value)
    }

    /// Downward sweep from `n = 0` of
    /// `Ω_{k-1,q} = [e^{-α₁}E_{1-k}(α₂) - α₂Ω_kq + qΩ_{k-1,q-1}]/α₁`.
    fn p_raising(&mut self, n: i64, p: usize) -> Result<f64> {
        let (a1, a2) = (self.alpha1, self.alpha2);
        let ea1 = (-a1).exp();
        let mut col: Vec<f64> = (0..=p).map(|q| Ok(self.e_beta.get(1 - q as i64)? / a2)).collect::<Result<_>>()?;
        for k in (n + 1..=0).rev() {
            let src = ea1 * self.e_a2.get(1 - k)?;
            let mut next = vec![0.0; p + 1];
            for q in 0..=p {
                let lower = if q > 0 { q as f64 * next[q - 1] } else { 0.0 };
                next[q] = (src - a2 * col[q] + lower) / a1;
            }
            col = next;
        }
        Ok(col[p])
    }
}

/// Closed-form bound on the error of the `ω_np` series truncated after the
/// `k = N` term: `n!/α₁^{p+1} (α₂/α₁)^{N+1} (p+N+1)!/(n+N+2)!`.
pub fn omega_remainder_bound(n: usize, p: usize, n_terms: usize, alpha1: f64, alpha2: f64) -> f64 {
    let ln_fact = |m: usize| (2..=m).map(|j| (j as f64).ln()).sum::<f64>();
    let ln = ln_fact(n) - (p + 1) as f64 * alpha1.ln() + (n_terms + 1) as f64 * (alpha2 / alpha1).ln() + ln_fact(p + n_terms + 1)
        - ln_fact(n + n_terms + 2);
    ln.exp()
}

/// `ω_np(α₁, α₂)` with a throw-away cache.
pub fn omega(n: usize, p: usize, alpha1: f64, alpha2: f64) -> Result<f64> {
    BasicIntegralCache::new(alpha1, alpha2)?.omega(n, p)
}

/// `Ω_np(α₁, α₂)` with a throw-away cache.
pub fn big_omega(n: i64, p: usize, alpha1: f64, alpha2: f64) -> Result<f64> {
    BasicIntegralCache::new(alpha1, alpha2)?.big_omega(n, p)
}
