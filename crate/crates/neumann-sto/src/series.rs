//! Truncation control shared by every large-order summation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit roundoff of IEEE binary64, `2^-53`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Stopping parameters for a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSettings {
    /// A term counts as negligible once `|term| <= rel_tol * |sum|`.
    pub rel_tol: f64,
    /// Hard cap on the number of summed terms.
    pub max_terms: usize,
    /// Window length used by the divergence detector.
    pub divergence_window: usize,
}

impl Default for ExpansionSettings {
    fn default() -> Self {
        Self { rel_tol: 2e-16, max_terms: 200, divergence_window: 10 }
    }
}

impl ExpansionSettings {
    pub fn new(rel_tol: f64, max_terms: usize, divergence_window: usize) -> Result<Self> {
        let s = Self { rel_tol, max_terms, divergence_window };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol >= UNIT_ROUNDOFF) {
            return Err(Error::Settings(format!(
                "rel_tol = {:e} must be finite and at least {:e}",
                self.rel_tol, UNIT_ROUNDOFF
            )));
        }
        if self.divergence_window == 0 {
            return Err(Error::Settings("divergence_window must be positive".into()));
        }
        if self.max_terms < self.divergence_window {
            return Err(Error::Settings(format!(
                "max_terms = {} is smaller than divergence_window = {}",
                self.max_terms, self.divergence_window
            )));
        }
        Ok(())
    }
}

/// Result of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesOutcome {
    pub value: f64,
    /// Terms up to the last significant one when converged; every summed
    /// term otherwise.
    pub terms_used: usize,
    pub converged: bool,
    pub est_rel_error: f64,
}

impl SeriesOutcome {
    /// Outcome for a value obtained without truncation.
    pub fn exact(value: f64) -> Self {
        Self { value, terms_used: 1, converged: true, est_rel_error: 0.0 }
    }

    pub(crate) fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self
    }
}

/// What the caller should do after pushing a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Continue,
    Converged,
    Diverged,
}

/// Compensated accumulator with the two-small-terms stop rule and the
/// windowed divergence detector.
#[derive(Debug, Clone)]
pub struct SeriesSum {
    settings: ExpansionSettings,
    sum: f64,
    comp: f64,
    mags: Vec<f64>,
    peak_at: usize,
    small_run: usize,
    rounding: f64,
    state: Step,
}

impl SeriesSum {
    pub fn new(settings: &ExpansionSettings) -> Self {
        Self {
            settings: *settings,
            sum: 0.0,
            comp: 0.0,
            mags: Vec::with_capacity(settings.max_terms),
            peak_at: 0,
            small_run: 0,
            rounding: 0.0,
            state: Step::Continue,
        }
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn terms(&self) -> usize {
        self.mags.len()
    }

    pub fn state(&self) -> Step {
        self.state
    }

    /// Records an absolute rounding error carried by the terms; it enters
    /// only the error estimate.
    pub fn add_rounding(&mut self, abs_err: f64) {
        self.rounding += abs_err;
    }

    /// Adds one term and reports whether summation should stop.
    pub fn push(&mut self, term: f64) -> Step {
        if self.state != Step::Continue {
            return self.state;
        }
        if !term.is_finite() {
            self.state = Step::Diverged;
            return self.state;
        }
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;

        let mag = term.abs();
        if let Some(&peak) = self.mags.get(self.peak_at) {
            if mag > peak {
                self.peak_at = self.mags.len();
            }
        }
        self.mags.push(mag);

        if mag <= self.settings.rel_tol * self.value().abs() {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.state = if self.small_run >= 2 {
            Step::Converged
        } else if self.diverging() || self.mags.len() >= self.settings.max_terms {
            Step::Diverged
        } else {
            Step::Continue
        };
        self.state
    }

    fn diverging(&self) -> bool {
        let w = self.settings.divergence_window;
        let n = self.mags.len();
        if n < 2 * w || self.peak_at + 2 * w > n {
            return false;
        }
        let min = |s: &[f64]| s.iter().copied().fold(f64::INFINITY, f64::min);
        min(&self.mags[n - w..]) >= min(&self.mags[n - 2 * w..n - w])
    }

    /// Outcome for a series known to be finite, with every term pushed.
    pub fn finish_exact(&self) -> SeriesOutcome {
        let value = self.value();
        let est_rel_error = if value == 0.0 { 0.0 } else { self.rounding / value.abs() };
        SeriesOutcome { value, terms_used: self.mags.len(), converged: true, est_rel_error }
    }

    pub fn finish(&self) -> SeriesOutcome {
        let value = self.value();
        let n = self.mags.len();
        let converged = self.state == Step::Converged;
        let est_rel_error = if n == 0 {
            f64::INFINITY
        } else if value == 0.0 {
            if converged { 0.0 } else { f64::INFINITY }
        } else if converged {
            self.mags[n - 2..].iter().copied().fold(0.0, f64::max) / value.abs()
        } else {
            let w = self.settings.divergence_window.min(n);
            self.mags[n - w..].iter().copied().fold(f64::INFINITY, f64::min) / value.abs()
        };
        let est_rel_error = if value == 0.0 { est_rel_error } else { est_rel_error.max(self.rounding / value.abs()) };
        // the negligible terms that confirmed convergence are not counted
        let terms_used = if converged { n - self.small_run } else { n };
        SeriesOutcome { value, terms_used, converged, est_rel_error }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_converges() {
        let s = ExpansionSettings::default();
        let mut acc = SeriesSum::new(&s);
        let mut t = 1.0;
        while acc.push(t) == Step::Continue {
            t *= 0.5;
        }
        let out = acc.finish();
        assert!(out.converged);
        assert!((out.value - 2.0).abs() < 1e-15);
        assert!(out.est_rel_error <= s.rel_tol);
    }

    #[test]
    fn growing_terms_hit_the_cap() {
        let s = ExpansionSettings::new(1e-12, 30, 5).unwrap();
        let mut acc = SeriesSum::new(&s);
        let mut t = 1.0;
        while acc.push(t) == Step::Continue {
            t *= 1.5;
        }
        let out = acc.finish();
        assert!(!out.converged);
        assert_eq!(out.terms_used, 30);
    }

    #[test]
    fn asymptotic_blow_up_is_detected_early() {
        let s = ExpansionSettings::new(1e-15, 200, 5).unwrap();
        let mut acc = SeriesSum::new(&s);
        let mut k = 0.0;
        loop {
            let t = (0.3f64).powf(k) * (1.0 + k).powf(k / 4.0).max(1.0);
            if acc.push(t) != Step::Continue {
                break;
            }
            k += 1.0;
        }
        let out = acc.finish();
        assert!(!out.converged);
        assert!(out.terms_used < 200);
    }

    #[test]
    fn settings_reject_sub_roundoff_tolerance() {
        assert!(ExpansionSettings::new(1e-17, 200, 10).is_err());
        assert!(ExpansionSettings::new(2e-16, 5, 10).is_err());
        assert!(ExpansionSettings::default().validate().is_ok());
    }
}
