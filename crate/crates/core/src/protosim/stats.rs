//! Binomial estimates with Wilson-score intervals and CI-separated comparisons.

use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959964;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub count: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn new(count: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson(count, trials, Z95);
        let value = if trials == 0 { 0.0 } else { count as f64 / trials as f64 };
        Self { value, ci_low, ci_high, count, trials }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    /// Plug-in binomial standard error `sqrt(p(1-p)/N)`.
    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (self.value * (1.0 - self.value) / self.trials as f64).sqrt()
    }

    pub fn complement(&self) -> Self {
        Self::new(self.trials - self.count, self.trials)
    }
}

/// Wilson-score interval for `count` successes in `trials`.
pub fn wilson(count: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = count as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Outcome of comparing two estimates by their intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    /// `a < b` when the intervals separate that way, `False` when they
    /// separate the other way.
    pub fn less(a: &Estimate, b: &Estimate) -> Self {
        if a.ci_high < b.ci_low {
            Verdict::True
        } else if a.ci_low > b.ci_high {
            Verdict::False
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn greater(a: &Estimate, b: &Estimate) -> Self {
        Self::less(b, a)
    }

    /// Conjunction: `False` dominates, then `Inconclusive`.
    pub fn all(vs: impl IntoIterator<Item = Verdict>) -> Self {
        let mut out = Verdict::True;
        for v in vs {
            match v {
                Verdict::False => return Verdict::False,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::True => {}
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn wilson_reference() {
        // Standard textbook case: 81 of 263.
        let (lo, hi) = wilson(81, 263, Z95);
        assert_abs_diff_eq!(lo, 0.2553, epsilon = 1e-4);
        assert_abs_diff_eq!(hi, 0.3662, epsilon = 1e-4);
        let (lo, hi) = wilson(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert_abs_diff_eq!(hi, 0.03699, epsilon = 1e-4);
        let (lo, hi) = wilson(100, 100, Z95);
        assert_abs_diff_eq!(lo, 1.0 - 0.03699, epsilon = 1e-4);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn verdicts() {
        let a = Estimate::new(10, 1000);
        let b = Estimate::new(100, 1000);
        assert_eq!(Verdict::less(&a, &b), Verdict::True);
        assert_eq!(Verdict::greater(&a, &b), Verdict::False);
        assert_eq!(Verdict::less(&a, &Estimate::new(11, 1000)), Verdict::Inconclusive);
        assert_eq!(Verdict::all([Verdict::True, Verdict::Inconclusive]), Verdict::Inconclusive);
        assert_eq!(Verdict::all([Verdict::Inconclusive, Verdict::False]), Verdict::False);
        assert_eq!(Verdict::all([]), Verdict::True);
    }

    #[test]
    fn complement_mirrors_interval() {
        let a = Estimate::new(30, 200);
        let c = a.complement();
        assert_abs_diff_eq!(c.value, 0.85, epsilon = 1e-15);
        assert_abs_diff_eq!(c.ci_low, 1.0 - a.ci_high, epsilon = 1e-12);
    }
}
