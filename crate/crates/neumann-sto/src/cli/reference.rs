//! Published reference values for the three benchmark tables.

use serde::{Deserialize, Deserializer};

use crate::error::{Error, Result};

const DATA: &str = include_str!("../../data/reference_tables.csv");

/// One published row: `L_μ(α₁)` for table 1, `W_μ(p; α₁, α₂)` otherwise.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReferenceRow {
    pub table: u8,
    pub alpha1: f64,
    pub alpha2: Option<f64>,
    pub p: usize,
    pub mu: usize,
    /// The exact column.
    pub exact: f64,
    /// The large-order column; absent where the published series diverged.
    pub large_order: Option<f64>,
    /// Published term count of the large-order series.
    pub terms: Option<usize>,
    /// Large-order exponent printed inconsistently with the exact column;
    /// such rows are compared on the mantissa only.
    #[serde(deserialize_with = "flag")]
    pub suspect_exponent: bool,
}

impl ReferenceRow {
    pub fn published_divergent(&self) -> bool {
        self.large_order.is_none()
    }

    /// Relative deviation of `x` from the exact column, on mantissas for
    /// suspect rows.
    pub fn rel_deviation(&self, x: f64) -> f64 {
        if self.suspect_exponent {
            ((mantissa(x) - mantissa(self.exact)) / mantissa(self.exact)).abs()
        } else {
            ((x - self.exact) / self.exact).abs()
        }
    }
}

fn flag<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<bool, D::Error> {
    let s: Option<String> = Option::deserialize(d)?;
    Ok(matches!(s.as_deref(), Some("1") | Some("true")))
}

/// `x / 10^⌊log₁₀|x|⌋`.
pub fn mantissa(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let e = x.abs().log10().floor();
    let m = x / 10f64.powf(e);
    if m.abs() >= 10.0 {
        m / 10.0
    } else if m.abs() < 1.0 {
        m * 10.0
    } else {
        m
    }
}

/// Every embedded row, in file order.
pub fn reference_rows() -> Result<Vec<ReferenceRow>> {
    let mut rdr = csv::Reader::from_reader(DATA.as_bytes());
    rdr.deserialize().map(|r| r.map_err(|e| Error::Parse(e.to_string()))).collect()
}

/// Rows of one table.
pub fn table_rows(which: u8) -> Result<Vec<ReferenceRow>> {
    if !(1..=3).contains(&which) {
        return Err(Error::Settings(format!("table {which} does not exist; choose 1, 2 or 3")));
    }
    Ok(reference_rows()?.into_iter().filter(|r| r.table == which).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_have_expected_sizes() {
        assert_eq!(table_rows(1).unwrap().len(), 16);
        assert_eq!(table_rows(2).unwrap().len(), 40);
        assert_eq!(table_rows(3).unwrap().len(), 40);
        assert!(table_rows(4).is_err());
        let suspect: Vec<_> = reference_rows().unwrap().into_iter().filter(|r| r.suspect_exponent).collect();
        assert_eq!(suspect.len(), 2);
    }

    #[test]
    fn mantissa_normalises() {
        assert!((mantissa(4.02496564881222e-17) - 4.02496564881222).abs() < 1e-14);
        assert!((mantissa(-9.9e3) + 9.9).abs() < 1e-14);
    }
}
