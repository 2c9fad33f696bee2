use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Order of the process-wide table behind [`stirling2`].
pub const DEFAULT_STIRLING_ORDER: usize = 256;

/// Triangular table of Stirling numbers of the second kind, stored as `f64`.
///
/// Entries are exact integers up to `m = 25`; beyond that they carry the
/// usual binary64 rounding and eventually overflow to `+inf`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<f64>>,
}

impl StirlingTable {
    pub fn new(max_order: usize) -> Self {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(max_order + 1);
        rows.push(vec![1.0]);
        for m in 1..=max_order {
            let prev = &rows[m - 1];
            let mut row = vec![0.0; m + 1];
            for k in 1..=m {
                let left = prev[k - 1];
                let up = if k < m { k as f64 * prev[k] } else { 0.0 };
                row[k] = left + up;
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S_mk`, zero outside the triangle.
    pub fn get(&self, m: usize, k: usize) -> Result<f64> {
        if m > self.max_order() {
            return Err(Error::Capacity { requested: m, available: self.max_order() });
        }
        Ok(self.rows[m].get(k).copied().unwrap_or(0.0))
    }
}

fn shared_table() -> &'static StirlingTable {
    static TABLE: OnceLock<StirlingTable> = OnceLock::new();
    TABLE.get_or_init(|| StirlingTable::new(DEFAULT_STIRLING_ORDER))
}

/// `S_mk` from a table built once per process.
pub fn stirling2(m: usize, k: usize) -> Result<f64> {
    shared_table().get(m, k)
}

/// Rows of the weighted coefficients `c_{m,k} = S_mk (z/2)^{2k} / (k! ν^m)`.
///
/// Built by `c_{m,k} = (c_{m-1,k-1} (z/2)²/k + k c_{m-1,k}) / ν`, so neither
/// the raw Stirling numbers nor the factorials are ever formed. `c_{0,0} = 1`
/// and `c_{m,0} = 0` for `m > 0`, which lets the `m = 0` cases of the various
/// coefficient families fall out of the same alternating sum.
#[derive(Debug, Clone)]
pub struct WeightedRows {
    y: f64,
    inv_nu: f64,
    rows: Vec<Vec<f64>>,
}

impl WeightedRows {
    pub fn new(z: f64, nu: f64) -> Self {
        Self { y: 0.25 * z * z, inv_nu: 1.0 / nu, rows: vec![vec![1.0]] }
    }

    pub fn row(&mut self, m: usize) -> &[f64] {
        while self.rows.len() <= m {
            let n = self.rows.len();
            let prev = &self.rows[n - 1];
            let mut row = vec![0.0; n + 1];
            for k in 1..=n {
                let left = prev[k - 1] * self.y / k as f64;
                let up = if k < n { k as f64 * prev[k] } else { 0.0 };
                row[k] = (left + up) * self.inv_nu;
            }
            self.rows.push(row);
        }
        &self.rows[m]
    }

    /// `Σ_{k=0}^{m} (-1)^{m-k} c_{m,k} f(k)`, skipping the vanishing `k = 0`
    /// entry when `m > 0`.
    pub fn alternating_sum(&mut self, m: usize, mut f: impl FnMut(usize) -> f64) -> f64 {
        let row = self.row(m);
        let start = usize::from(m > 0);
        let mut acc = 0.0;
        for (k, &c) in row.iter().enumerate().skip(start) {
            let t = c * f(k);
            if (m - k) % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        acc
    }
}

/// `b_m(z) = Σ_{k=1}^m (-1)^{m-k} S_mk/k! (z/2)^{2k}`, with `b_0 = 1`.
pub fn b_coeff(m: usize, z: f64) -> Result<f64> {
    let v = WeightedRows::new(z, 1.0).alternating_sum(m, |_| 1.0);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { func: "b_coeff", order: m as i64, arg: z })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values() {
        let t = StirlingTable::new(30);
        assert_eq!(t.get(0, 0).unwrap(), 1.0);
        for m in 1..=30 {
            assert_eq!(t.get(m, 0).unwrap(), 0.0);
            assert_eq!(t.get(m, 1).unwrap(), 1.0);
            assert_eq!(t.get(m, m).unwrap(), 1.0);
        }
        assert_eq!(t.get(3, 2).unwrap(), 3.0);
        assert_eq!(t.get(2, 5).unwrap(), 0.0);
        assert_eq!(t.get(10, 5).unwrap(), 42525.0);
        assert!(matches!(t.get(31, 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn recursion_holds_exactly_in_integer_range() {
        let t = StirlingTable::new(25);
        for m in 1..=25 {
            for k in 1..=m {
                let lhs = t.get(m, k).unwrap();
                let rhs = t.get(m - 1, k - 1).unwrap() + k as f64 * t.get(m - 1, k).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn low_order_b() {
        let z = 1.7f64;
        let y = 0.25 * z * z;
        assert_eq!(b_coeff(0, z).unwrap(), 1.0);
        assert!((b_coeff(1, z).unwrap() - y).abs() < 1e-15);
        assert!((b_coeff(2, z).unwrap() - (0.5 * y * y - y)).abs() < 1e-15);
    }

    #[test]
    fn weighted_rows_match_table() {
        let t = StirlingTable::new(40);
        let z = 3.0f64;
        let nu = 7.5;
        let mut w = WeightedRows::new(z, nu);
        let mut fact = 1.0;
        for k in 1..=20usize {
            fact *= k as f64;
            let direct = t.get(20, k).unwrap() * (0.25 * z * z).powi(k as i32) / fact / nu.powi(20);
            let rec = w.row(20)[k];
            assert!(((rec - direct) / direct).abs() < 1e-13, "k={k}");
        }
    }
}
