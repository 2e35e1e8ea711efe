//! Secrecy capacities of the binary-symmetric wiretap broadcast model,
//! with and without public discussion.

use serde::Serialize;

use crate::channels::{cmi_unchecked, BroadcastModel};
use crate::error::Result;
use crate::info::{casc, check_half, h, Dist};
use crate::num::Real;
use crate::optimize::grid_then_golden;

/// Secrecy capacity without public discussion: `h(delta) - h(eps)` when
/// Eve's channel is noisier, else 0.
pub fn cs<T: Real>(eps: T, delta: T) -> Result<T> {
    check_half("eps", eps)?;
    check_half("delta", delta)?;
    Ok(if delta > eps { h(delta) - h(eps) } else { T::zero() })
}

/// Secrecy capacity with public discussion for BSCs:
/// `h(eps + delta - 2 eps delta) - h(eps)`.
pub fn cs_bar_bsc<T: Real>(eps: T, delta: T) -> Result<T> {
    check_half("eps", eps)?;
    check_half("delta", delta)?;
    Ok((h(casc(eps, delta)) - h(eps)).max(T::zero()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Supremum<T: Real> {
    pub value: T,
    /// Maximising input distribution `(P(X=0), P(X=1))`.
    pub input: Vec<T>,
}

/// Numerical `sup_{P_X} I(X;Y|Z)` over binary inputs.
pub fn cs_bar_upper<T: Real>(m: &BroadcastModel<T>) -> Supremum<T> {
    let (main, eve) = (m.main.crossover(), m.eve.crossover());
    let best = grid_then_golden(|p1| cmi_unchecked(main, eve, p1));
    Supremum { value: best.value, input: Dist::bernoulli(best.x).map(|d| d.weights().to_vec()).unwrap_or_default() }
}

/// Lower bound on the public-discussion capacity from the three pairwise
/// cascades; may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound<T: Real> {
    pub value: T,
    pub vacuous: bool,
}

impl<T: Real> LowerBound<T> {
    pub fn clamped(self) -> T {
        self.value.max(T::zero())
    }
}

/// `max[h(eA ⊕ eE), h(eB ⊕ eE)] - h(eA ⊕ eB)`, reported raw.
pub fn cs_bar_lower<T: Real>(ea: T, eb: T, ee: T) -> Result<LowerBound<T>> {
    check_half("ea", ea)?;
    check_half("eb", eb)?;
    check_half("ee", ee)?;
    let value = h(casc(ea, ee)).max(h(casc(eb, ee))) - h(casc(ea, eb));
    Ok(LowerBound { value, vacuous: value < T::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cs_examples() {
        assert_abs_diff_eq!(cs(0.1, 0.2).unwrap(), 0.25293250129808113, epsilon = 1e-15);
        assert_eq!(cs(0.2, 0.1).unwrap(), 0.0);
        assert_eq!(cs(0.0, 0.5).unwrap(), 1.0);
        assert!(cs(0.7, 0.1).is_err());
    }

    #[test]
    fn cs_bar_examples() {
        assert_abs_diff_eq!(cs_bar_bsc(0.1, 0.2).unwrap(), 0.35775077890333667, epsilon = 1e-14);
        assert_eq!(cs_bar_bsc(0.23, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(cs_bar_bsc(0.0, 0.3).unwrap(), 0.88129089923069262, epsilon = 1e-15);
        assert!(cs_bar_bsc(0.1, 0.6).is_err());
    }

    #[test]
    fn cs_bar_upper_examples() {
        let s = cs_bar_upper(&BroadcastModel::new(0.1, 0.2, 0.0).unwrap());
        assert_abs_diff_eq!(s.value, 0.35775077890333667, epsilon = 1e-10);
        assert_abs_diff_eq!(s.input[1], 0.5, epsilon = 1e-4);
        assert_abs_diff_eq!(cs_bar_upper(&BroadcastModel::new(0.5, 0.2, 0.0).unwrap()).value, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(cs_bar_upper(&BroadcastModel::new(0.1, 0.0, 0.0).unwrap()).value, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn cs_bar_lower_examples() {
        let b = cs_bar_lower(0.1, 0.1, 0.2).unwrap();
        assert_abs_diff_eq!(b.value, 0.14666932676433805, epsilon = 1e-14);
        assert!(!b.vacuous);
        let b = cs_bar_lower(0.0, 0.0, 0.3).unwrap();
        assert_abs_diff_eq!(b.value, h(0.3), epsilon = 1e-15);
        let b = cs_bar_lower(0.2, 0.2, 0.0).unwrap();
        assert_abs_diff_eq!(b.value, -0.18245336283713155, epsilon = 1e-14);
        assert!(b.vacuous);
        assert_eq!(b.clamped(), 0.0);
        assert!(cs_bar_lower(0.6, 0.1, 0.1).is_err());
    }

    #[test]
    fn cs_vanishes_when_eve_less_noisy() {
        for i in 0..=50 {
            for j in 0..=i {
                let (e, d) = (i as f64 / 100.0, j as f64 / 100.0);
                assert_eq!(cs(e, d).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn f32_instantiation() {
        assert!((cs_bar_bsc(0.1f32, 0.2f32).unwrap() - 0.357_750_8).abs() < 1e-5);
    }
}
