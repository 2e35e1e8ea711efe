//! Piecewise converse bit-transmission rates, alphabet overlap and pruning.
//!
//! Cardinalities enter as `log2` values: the formulas only make sense for
//! alphabets like `|Z| >= 2^(2^ly)`, which no float can hold directly.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::num::Real;

/// `log2` cardinalities of `X`, `X*`, `Y`, `Y*` and `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphabetSizes<T> {
    pub lx: T,
    pub lx_star: T,
    pub ly: T,
    pub ly_star: T,
    pub lz: T,
}

impl<T: Real> AlphabetSizes<T> {
    pub fn new(lx: T, lx_star: T, ly: T, ly_star: T, lz: T) -> Result<Self> {
        let s = Self { lx, lx_star, ly, ly_star, lz };
        s.validate()?;
        Ok(s)
    }

    /// Unpruned sizes: `X* = X`, `Y* = Y`.
    pub fn unpruned(lx: T, ly: T, lz: T) -> Result<Self> {
        Self::new(lx, lx, ly, ly, lz)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lx", self.lx), ("lx_star", self.lx_star), ("ly", self.ly), ("ly_star", self.ly_star), ("lz", self.lz)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(invalid(format!("{name} = {} must be a positive log2 cardinality", v.to_f64())));
            }
        }
        if self.lx_star > self.lx {
            return Err(invalid("pruned lx_star exceeds lx"));
        }
        if self.ly_star > self.ly {
            return Err(invalid("pruned ly_star exceeds ly"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateResult<T> {
    Value {
        branch: u8,
        value: T,
    },
    /// `branch` is `None` when no branch could be selected.
    DomainError {
        branch: Option<u8>,
        term: String,
        condition: String,
    },
}

impl<T: Real> RateResult<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            RateResult::Value { value, .. } => Some(*value),
            RateResult::DomainError { .. } => None,
        }
    }

    pub fn branch(&self) -> Option<u8> {
        match self {
            RateResult::Value { branch, .. } => Some(*branch),
            RateResult::DomainError { branch, .. } => *branch,
        }
    }
}

/// `log2 log2 (2^num / 2^den)` written in log variables: `log2(log2 num - den)`.
fn loglog<T: Real>(branch: u8, num: T, den: T, condition: &str) -> std::result::Result<T, RateResult<T>> {
    let inner = num.log2() - den;
    if inner > T::zero() {
        Ok(inner.log2())
    } else {
        Err(RateResult::DomainError { branch: Some(branch), term: "loglog".into(), condition: condition.into() })
    }
}

const YX_STAR: &str = "log|Y*|/|X*| > 1";
const X_Y_STAR: &str = "log|X|/|Y*| > 1";

/// Evaluates one branch formula regardless of whether its guard holds.
pub fn rate_branch<T: Real>(branch: u8, s: &AlphabetSizes<T>) -> Result<RateResult<T>> {
    s.validate()?;
    let r = match branch {
        1 | 4 => loglog(branch, s.ly_star, s.lx_star, YX_STAR).map(|a| a + s.lz.log2() - s.ly_star),
        2 => loglog(branch, s.lx, s.ly_star, X_Y_STAR).map(|a| a + s.ly_star.log2() - s.lx),
        3 => loglog(branch, s.ly_star, s.lx_star, YX_STAR).map(|a| a + s.ly_star.log2() - s.lx),
        _ => return Err(invalid(format!("branch {branch} is not one of 1..4"))),
    };
    Ok(r.map(|value| RateResult::Value { branch, value }).unwrap_or_else(|e| e))
}

/// Branch whose guard holds: compares `lx` with `ly_star` and `ly_star`
/// with `lz`.
pub fn select_branch<T: Real>(s: &AlphabetSizes<T>) -> Result<u8> {
    s.validate()?;
    if s.lx == s.ly_star || s.ly_star == s.lz {
        return Err(Error::Ambiguous(format!(
            "tie among compared sizes (lx = {}, ly_star = {}, lz = {})",
            s.lx.to_f64(),
            s.ly_star.to_f64(),
            s.lz.to_f64()
        )));
    }
    Ok(match (s.lx > s.ly_star, s.ly_star > s.lz) {
        (true, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
        (false, true) => 4,
    })
}

/// `select_branch` followed by `rate_branch`; a tie becomes a domain error
/// on the `branch` term.
pub fn rate<T: Real>(s: &AlphabetSizes<T>) -> Result<RateResult<T>> {
    match select_branch(s) {
        Ok(b) => rate_branch(b, s),
        Err(Error::Ambiguous(msg)) => {
            Ok(RateResult::DomainError { branch: None, term: "branch".into(), condition: format!("strict ordering required: {msg}") })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdaptiveRates<T> {
    /// Public broadcast channel.
    pub r1: RateResult<T>,
    /// Eve's forward conceptual channel.
    pub r2: RateResult<T>,
    /// Backward conceptual channel.
    pub r3: RateResult<T>,
    pub warnings: Vec<String>,
}

pub const FORWARD_REGIME_WARNING: &str = "forward-conceptual regime |𝒳| << |X| violated";
pub const BACKWARD_REGIME_WARNING: &str = "backward-conceptual regime |𝒮𝒳| ≈ |X| violated";

pub fn adaptive_rates<T: Real>(pb: &AlphabetSizes<T>, fc: &AlphabetSizes<T>, bc: &AlphabetSizes<T>) -> Result<AdaptiveRates<T>> {
    let mut warnings = Vec::new();
    if fc.lx > pb.lx - T::one() {
        warnings.push(FORWARD_REGIME_WARNING.to_string());
    }
    if (bc.lx - pb.lx).abs() > T::one() {
        warnings.push(BACKWARD_REGIME_WARNING.to_string());
    }
    Ok(AdaptiveRates { r1: rate(pb)?, r2: rate(fc)?, r3: rate(bc)?, warnings })
}

/// Letter sets of `X`, `Y` and `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterAlphabets {
    pub x: BTreeSet<String>,
    pub y: BTreeSet<String>,
    pub z: BTreeSet<String>,
}

impl LetterAlphabets {
    pub fn new<I, S>(x: I, y: I, z: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set = |it: I| it.into_iter().map(Into::into).collect::<BTreeSet<String>>();
        let a = Self { x: set(x), y: set(y), z: set(z) };
        if a.x.is_empty() || a.y.is_empty() || a.z.is_empty() {
            return Err(invalid("alphabets must be non-empty"));
        }
        Ok(a)
    }
}

fn triple(x: &BTreeSet<String>, y: &BTreeSet<String>, z: &BTreeSet<String>) -> BTreeSet<String> {
    x.iter().filter(|s| y.contains(*s) && z.contains(*s)).cloned().collect()
}

/// `X ∩ Y ∩ Z`.
pub fn overlap(a: &LetterAlphabets) -> BTreeSet<String> {
    triple(&a.x, &a.y, &a.z)
}

/// Greedy pruning: drop the smallest overlapping letter from `Y` (then `X`
/// once `Y` has none left) until the triple intersection is empty.
pub fn prune(a: &LetterAlphabets) -> (BTreeSet<String>, BTreeSet<String>) {
    let (mut x, mut y) = (a.x.clone(), a.y.clone());
    while let Some(s) = triple(&x, &y, &a.z).into_iter().next() {
        if !y.remove(&s) {
            x.remove(&s);
        }
    }
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sizes(lx: f64, lx_star: f64, ly_star: f64, lz: f64) -> AlphabetSizes<f64> {
        AlphabetSizes::new(lx, lx_star, ly_star, ly_star, lz).unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn overlap_examples() {
        let a = LetterAlphabets::new(["a", "b"], ["b", "c"], ["b", "d"]).unwrap();
        assert_eq!(overlap(&a), set(&["b"]));
        let a = LetterAlphabets::new(["a"], ["b"], ["c"]).unwrap();
        assert!(overlap(&a).is_empty());
        let a = LetterAlphabets::new(["a", "b"], ["a", "b"], ["a", "b"]).unwrap();
        assert_eq!(overlap(&a), set(&["a", "b"]));
        assert!(LetterAlphabets::new(Vec::<&str>::new(), vec!["a"], vec!["a"]).is_err());
    }

    #[test]
    fn prune_examples() {
        let a = LetterAlphabets::new(["a", "b"], ["b", "c"], ["b", "d"]).unwrap();
        assert_eq!(prune(&a), (set(&["a", "b"]), set(&["c"])));
        let a = LetterAlphabets::new(["a"], ["b"], ["c"]).unwrap();
        assert_eq!(prune(&a), (set(&["a"]), set(&["b"])));
        let a = LetterAlphabets::new(["s"], ["s"], ["s"]).unwrap();
        assert_eq!(prune(&a), (set(&["s"]), BTreeSet::new()));
    }

    #[test]
    fn branch_examples() {
        let r = rate_branch(1, &sizes(40.0, 2.0, 32.0, 2f64.powi(40))).unwrap();
        assert_abs_diff_eq!(r.value().unwrap(), 9.584962500721156, epsilon = 1e-12);
        let r = rate_branch(2, &sizes(8.0, 8.0, 32.0, 64.0)).unwrap();
        assert_eq!(
            r,
            RateResult::DomainError { branch: Some(2), term: "loglog".into(), condition: "log|X|/|Y*| > 1".into() }
        );
        let r = rate_branch(1, &sizes(8.0, 2.0, 8.0, 64.0)).unwrap();
        assert_abs_diff_eq!(r.value().unwrap(), -2.0, epsilon = 1e-15);
        assert!(rate_branch(5, &sizes(8.0, 2.0, 8.0, 64.0)).is_err());
    }

    #[test]
    fn branch_three_and_four() {
        let s = sizes(40.0, 2.0, 32.0, 64.0);
        assert_abs_diff_eq!(rate_branch(3, &s).unwrap().value().unwrap(), 3f64.log2() + 5.0 - 40.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rate_branch(4, &s).unwrap().value().unwrap(), 3f64.log2() + 6.0 - 32.0, epsilon = 1e-12);
    }

    #[test]
    fn select_examples() {
        assert_eq!(select_branch(&sizes(40.0, 2.0, 32.0, 8.0)).unwrap(), 1);
        assert_eq!(select_branch(&sizes(8.0, 2.0, 32.0, 64.0)).unwrap(), 2);
        assert_eq!(select_branch(&sizes(40.0, 2.0, 32.0, 64.0)).unwrap(), 3);
        assert_eq!(select_branch(&sizes(8.0, 2.0, 32.0, 16.0)).unwrap(), 4);
        assert!(matches!(select_branch(&sizes(32.0, 2.0, 32.0, 8.0)), Err(Error::Ambiguous(_))));
        let r = rate(&sizes(32.0, 2.0, 32.0, 8.0)).unwrap();
        assert_eq!(r.branch(), None);
    }

    #[test]
    fn invalid_sizes() {
        assert!(AlphabetSizes::new(0.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(AlphabetSizes::new(2.0, 3.0, 1.0, 1.0, 1.0).is_err());
        assert!(AlphabetSizes::new(2.0, 1.0, 1.0, 2.0, 1.0).is_err());
        assert!(AlphabetSizes::new(2.0, 1.0, 1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn adaptive_examples() {
        let pb = sizes(40.0, 2.0, 32.0, 8.0);
        let fc = sizes(20.0, 2.0, 16.0, 8.0);
        let bc = sizes(40.5, 2.0, 32.0, 8.0);
        let a = adaptive_rates(&pb, &fc, &bc).unwrap();
        assert!(a.warnings.is_empty());
        for r in [&a.r1, &a.r2, &a.r3] {
            assert_eq!(r.branch(), Some(1));
            assert!(r.value().unwrap().is_finite());
        }

        let a = adaptive_rates(&pb, &pb, &pb).unwrap();
        assert_eq!(a.warnings, vec![FORWARD_REGIME_WARNING.to_string()]);

        let bad = sizes(40.0, 6.0, 32.0, 8.0);
        let a = adaptive_rates(&pb, &fc, &bad).unwrap();
        assert!(a.r1.value().is_some() && a.r2.value().is_some());
        assert!(matches!(a.r3, RateResult::DomainError { branch: Some(1), .. }));
    }

    #[test]
    fn domain_errors_are_reported_not_hidden() {
        // Branch 2's guard wants lx < ly_star while its formula needs log2 lx > ly_star.
        let mut found = 0;
        for lx in 1..40 {
            for ly in 1..40 {
                let s = sizes(lx as f64, 1.0, ly as f64, 64.0);
                if select_branch(&s).ok() == Some(2) {
                    assert!(rate(&s).unwrap().value().is_none());
                    found += 1;
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn serializes_with_kind_tag() {
        let v = serde_json::to_value(rate_branch(2, &sizes(8.0, 8.0, 32.0, 64.0)).unwrap()).unwrap();
        assert_eq!(v["kind"], "domain_error");
        assert_eq!(v["term"], "loglog");
    }

    proptest! {
        #[test]
        fn pruning_clears_overlap(
            x in prop::collection::btree_set("[a-f]", 1..6),
            y in prop::collection::btree_set("[a-f]", 1..6),
            z in prop::collection::btree_set("[a-f]", 1..6),
        ) {
            let a = LetterAlphabets { x, y, z };
            let (xs, ys) = prune(&a);
            prop_assert!(triple(&xs, &ys, &a.z).is_empty());
            prop_assert!(xs.is_subset(&a.x) && ys.is_subset(&a.y));
        }

        #[test]
        fn branch_one_is_locally_lipschitz(lx_star in 0.5f64..4.0, gap in 0.5f64..20.0, lz in 1.0f64..1e6) {
            let ly_star = (lx_star + gap).exp2();
            let h = 1e-6;
            let f = |a: f64, b: f64, c: f64| rate_branch(1, &sizes(100.0, a, b, c)).unwrap().value().unwrap();
            let base = f(lx_star, ly_star, lz);
            for (d, bound) in [
                (f(lx_star + h, ly_star, lz), 3.0 / gap),
                (f(lx_star, ly_star * (1.0 + h), lz), 3.0 / gap + ly_star),
                (f(lx_star, ly_star, lz * (1.0 + h)), 2.0),
            ] {
                prop_assert!(((d - base) / h).abs() < bound * 2.0 + 1.0);
            }
        }
    }
}
