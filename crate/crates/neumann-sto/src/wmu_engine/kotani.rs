//! `σ`-raising of `W_μ^σ(p₁, p₂)` by Kotani's three-term relation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// `W_μ^σ(p₁, p₂; α₁, α₂)` at one `σ` and fixed `(α₁, α₂)`, keyed by `(μ, p₁, p₂)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WTable {
    pub sigma: usize,
    entries: BTreeMap<(usize, usize, usize), f64>,
}

impl WTable {
    pub fn new(sigma: usize) -> Self {
        Self { sigma, entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, mu: usize, p1: usize, p2: usize, value: f64) {
        self.entries.insert((mu, p1, p2), value);
    }

    /// Stored value; orders below `σ` vanish identically.
    pub fn get(&self, mu: usize, p1: usize, p2: usize) -> Option<f64> {
        if mu < self.sigma {
            return Some(0.0);
        }
        self.entries.get(&(mu, p1, p2)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    fn require(&self, mu: usize, p1: usize, p2: usize) -> Result<f64> {
        self.get(mu, p1, p2).ok_or_else(|| {
            let top = self.entries.keys().map(|k| k.0).max().unwrap_or(0);
            Error::Capacity { requested: mu.max(p1), available: top }
        })
    }
}

/// `(μ-σ)(μ-σ+1)²/(2μ+1)`, `-(μ-σ)(μ+σ+1)`, `(μ+σ+1)(μ+σ)²/(2μ+1)`.
pub fn kotani_coefficients(mu: usize, sigma: usize) -> [f64; 3] {
    let m = mu as f64;
    let s = sigma as f64;
    let d = 2.0 * m + 1.0;
    [
        (m - s) * (m - s + 1.0).powi(2) / d,
        -(m - s) * (m + s + 1.0),
        (m + s + 1.0) * (m + s).powi(2) / d,
    ]
}

/// `W^{σ+1}_μ(p₁,p₂) = c₊ W^σ_{μ+1}(p₁,p₂) + c₀ W^σ_μ(p₁+1,p₂+1) + c₋ W^σ_{μ-1}(p₁,p₂)`
/// for every requested `(μ, p₁, p₂)`.
pub fn raise_sigma_w(table: &WTable, targets: &[(usize, usize, usize)]) -> Result<WTable> {
    let sigma = table.sigma;
    let mut out = WTable::new(sigma + 1);
    for &(mu, p1, p2) in targets {
        if mu < sigma + 1 {
            continue;
        }
        let [cp, c0, cm] = kotani_coefficients(mu, sigma);
        let v = cp * table.require(mu + 1, p1, p2)?
            + c0 * table.require(mu, p1 + 1, p2 + 1)?
            + cm * table.require(mu - 1, p1, p2)?;
        out.insert(mu, p1, p2, v);
    }
    Ok(out)
}

/// Inputs needed at level `σ` to produce `targets` at level `σ+1`.
pub fn kotani_inputs(targets: &[(usize, usize, usize)], sigma: usize) -> Vec<(usize, usize, usize)> {
    let mut need: Vec<(usize, usize, usize)> = Vec::new();
    for &(mu, p1, p2) in targets {
        if mu < sigma + 1 {
            continue;
        }
        need.push((mu + 1, p1, p2));
        need.push((mu, p1 + 1, p2 + 1));
        if mu > sigma {
            need.push((mu - 1, p1, p2));
        }
    }
    need.sort_unstable();
    need.dedup();
    need
}
