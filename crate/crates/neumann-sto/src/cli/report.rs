//! Run reports and their text, CSV and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cap on [`matching_digits`] when two values agree exactly.
pub const MAX_MATCHING_DIGITS: f64 = 17.0;

/// Which basic integral a row holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    L,
    W,
}

impl Quantity {
    fn as_str(self) -> &'static str {
        match self {
            Quantity::L => "L",
            Quantity::W => "W",
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub quantity: Quantity,
    pub mu: usize,
    pub p1: usize,
    pub p2: usize,
    pub sigma: usize,
    pub alpha1: f64,
    pub alpha2: Option<f64>,
    /// Fast-path value; absent if the engine raised an error.
    pub fast_value: Option<f64>,
    /// Published value, when the point belongs to a reference table.
    pub reference_value: Option<f64>,
    pub reference_terms: Option<usize>,
    /// Oracle value as a certified decimal string.
    pub oracle_value: Option<String>,
    pub oracle_digits: Option<u32>,
    /// Agreement of the fast value with the oracle, or with the reference
    /// when no oracle value was computed.
    pub matching_digits: Option<f64>,
    pub terms_used: usize,
    pub converged: bool,
    pub wall_time_us: f64,
    pub note: String,
}

/// Rows of one command run, in grid order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
}

const HEADER: [&str; 17] = [
    "quantity",
    "mu",
    "p1",
    "p2",
    "sigma",
    "alpha1",
    "alpha2",
    "fast_value",
    "reference_value",
    "reference_terms",
    "oracle_value",
    "oracle_digits",
    "matching_digits",
    "terms_used",
    "converged",
    "wall_time_us",
    "note",
];

/// `−log₁₀` of the relative deviation, floored at 0 and capped at
/// [`MAX_MATCHING_DIGITS`].
pub fn matching_digits(value: f64, reference: f64) -> f64 {
    if value == reference {
        return MAX_MATCHING_DIGITS;
    }
    let rel = ((value - reference) / reference).abs();
    if !rel.is_finite() {
        return 0.0;
    }
    (-rel.log10()).clamp(0.0, MAX_MATCHING_DIGITS)
}

/// 15 significant digits with a bracketed two-digit exponent,
/// e.g. `9.72733864877071[-04]`.
pub fn bracket_format(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.14e}");
    let (m, e) = s.split_once('e').unwrap_or((&s, "0"));
    let e: i32 = e.parse().unwrap_or(0);
    let sign = if e < 0 { '-' } else { '+' };
    format!("{m}[{sign}{:02}]", e.abs())
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn sci(v: f64) -> String {
    format!("{v:e}")
}

fn opt_sci(v: &Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Error::Parse(format!("bad field {s:?}")))
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("bad field {s:?}")))
}

impl RunReport {
    /// The report with every wall time zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        let rows = self.rows.iter().map(|r| ReportRow { wall_time_us: 0.0, ..r.clone() }).collect();
        Self { rows }
    }

    /// CSV with a header row; reals in shortest round-trip `e` notation.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.quantity.as_str().to_string(),
                r.mu.to_string(),
                r.p1.to_string(),
                r.p2.to_string(),
                r.sigma.to_string(),
                sci(r.alpha1),
                opt_sci(&r.alpha2),
                opt_sci(&r.fast_value),
                opt_sci(&r.reference_value),
                opt(&r.reference_terms),
                r.oracle_value.clone().unwrap_or_default(),
                opt(&r.oracle_digits),
                opt_sci(&r.matching_digits),
                r.terms_used.to_string(),
                r.converged.to_string(),
                sci(r.wall_time_us),
                r.note.clone(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let header = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if header.iter().ne(HEADER.iter().copied()) {
            return Err(Error::Parse("unexpected CSV header".into()));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let f = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let quantity = match &f[0] {
                "L" => Quantity::L,
                "W" => Quantity::W,
                other => return Err(Error::Parse(format!("unknown quantity {other:?}"))),
            };
            rows.push(ReportRow {
                quantity,
                mu: parse(&f[1])?,
                p1: parse(&f[2])?,
                p2: parse(&f[3])?,
                sigma: parse(&f[4])?,
                alpha1: parse(&f[5])?,
                alpha2: parse_opt(&f[6])?,
                fast_value: parse_opt(&f[7])?,
                reference_value: parse_opt(&f[8])?,
                reference_terms: parse_opt(&f[9])?,
                oracle_value: if f[10].is_empty() { None } else { Some(f[10].to_string()) },
                oracle_digits: parse_opt(&f[11])?,
                matching_digits: parse_opt(&f[12])?,
                terms_used: parse(&f[13])?,
                converged: parse(&f[14])?,
                wall_time_us: parse(&f[15])?,
                note: f[16].to_string(),
            });
        }
        Ok(Self { rows })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Fixed-width table in the published number format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>2} {:>3} {:>2} {:>2} {:>2} {:>6} {:>6}  {:<21}  {:<21}  {:>5} {:>5}  {:>6}  note",
            "", "mu", "p1", "p2", "s", "alpha1", "alpha2", "fast", "reference", "terms", "ref", "digits"
        );
        for r in &self.rows {
            let fast = match (r.fast_value, r.converged) {
                (Some(v), true) => bracket_format(v),
                (Some(_), false) => "divergence".into(),
                (None, _) => "error".into(),
            };
            let reference = r
                .oracle_value
                .as_deref()
                .and_then(|s| s.parse::<f64>().ok())
                .or(r.reference_value)
                .map(bracket_format)
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{:>2} {:>3} {:>2} {:>2} {:>2} {:>6} {:>6}  {:<21}  {:<21}  {:>5} {:>5}  {:>6}  {}",
                r.quantity.as_str(),
                r.mu,
                r.p1,
                r.p2,
                r.sigma,
                r.alpha1,
                r.alpha2.map(|a| a.to_string()).unwrap_or_default(),
                fast,
                reference,
                r.terms_used,
                opt(&r.reference_terms),
                r.matching_digits.map(|d| format!("{d:.1}")).unwrap_or_default(),
                r.note
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        RunReport {
            rows: vec![
                ReportRow {
                    quantity: Quantity::L,
                    mu: 30,
                    p1: 0,
                    p2: 0,
                    sigma: 0,
                    alpha1: 0.1,
                    alpha2: None,
                    fast_value: Some(9.727338648770706e-4),
                    reference_value: Some(9.72733864877071e-4),
                    reference_terms: Some(9),
                    oracle_value: Some("9.7273386487707063601543240875872e-4".into()),
                    oracle_digits: Some(43),
                    matching_digits: Some(15.6),
                    terms_used: 9,
                    converged: true,
                    wall_time_us: 12.25,
                    note: String::new(),
                },
                ReportRow {
                    quantity: Quantity::W,
                    mu: 60,
                    p1: 8,
                    p2: 0,
                    sigma: 1,
                    alpha1: 50.0,
                    alpha2: Some(50.0),
                    fast_value: None,
                    reference_value: None,
                    reference_terms: None,
                    oracle_value: None,
                    oracle_digits: None,
                    matching_digits: None,
                    terms_used: 0,
                    converged: false,
                    wall_time_us: 0.1 + 0.2,
                    note: "overflow, \"quoted\"".into(),
                },
            ],
        }
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        assert_eq!(RunReport::from_csv(&r.to_csv().unwrap()).unwrap(), r);
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(RunReport::from_json(&r.to_json().unwrap()).unwrap(), r);
    }

    #[test]
    fn csv_uses_exponent_notation() {
        let csv = sample().to_csv().unwrap();
        assert!(csv.contains("9.727338648770706e-4"));
        assert!(csv.starts_with("quantity,mu,"));
    }

    #[test]
    fn published_number_format() {
        assert_eq!(bracket_format(9.72733864877071e-4), "9.72733864877071[-04]");
        assert_eq!(bracket_format(8.5798879736755e-2), "8.57988797367550[-02]");
        assert_eq!(bracket_format(1.5), "1.50000000000000[+00]");
    }

    #[test]
    fn matching_digits_floor_and_cap() {
        assert_eq!(matching_digits(2.0, 1.0), 0.0);
        assert_eq!(matching_digits(1.0, 1.0), MAX_MATCHING_DIGITS);
        assert!((matching_digits(1.0 + 1e-10, 1.0) - 10.0).abs() < 1e-5);
    }
}
