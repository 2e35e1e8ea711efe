//! Deterministic one-dimensional maximisation on `[0, 1]`.

use crate::num::{lit, Real};

pub const GRID_STEP: f64 = 1e-3;
pub const REFINE_WIDTH: f64 = 1e-8;

/// Result of a maximisation: the best argument found and its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Argmax<T> {
    pub x: T,
    pub value: T,
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_max<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, width: f64) -> Argmax<T> {
    let invphi: T = lit((5f64.sqrt() - 1.0) / 2.0);
    let width: T = lit(width);
    let mut a = hi - invphi * (hi - lo);
    let mut b = lo + invphi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    // The iteration cap only matters for f32, where 1e-8 is below resolution.
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - invphi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + invphi * (hi - lo);
            fb = f(b);
        }
    }
    if fa >= fb {
        Argmax { x: a, value: fa }
    } else {
        Argmax { x: b, value: fb }
    }
}

/// Grid scan of `[0, 1]` at [`GRID_STEP`], then golden-section refinement
/// around the best grid point. Never returns less than the best grid value.
/// Ties on the grid go to the smallest argument.
pub fn grid_then_golden<T: Real>(f: impl Fn(T) -> T) -> Argmax<T> {
    let n = (1.0 / GRID_STEP).round() as usize;
    let mut best = Argmax { x: T::zero(), value: f(T::zero()) };
    let mut best_i = 0usize;
    for i in 1..=n {
        let x: T = lit(i as f64 / n as f64);
        let v = f(x);
        if v > best.value {
            best = Argmax { x, value: v };
            best_i = i;
        }
    }
    let lo: T = lit(best_i.saturating_sub(1) as f64 / n as f64);
    let hi: T = lit((best_i + 1).min(n) as f64 / n as f64);
    let refined = golden_max(&f, lo, hi, REFINE_WIDTH);
    if refined.value > best.value {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let r = grid_then_golden(|x: f64| -(x - 0.3141592).powi(2));
        assert!((r.x - 0.3141592).abs() < 1e-7);
    }

    #[test]
    fn endpoint_maximum() {
        let r = grid_then_golden(|x: f64| x);
        assert_eq!(r.x, 1.0);
        let r = grid_then_golden(|x: f64| -x);
        assert_eq!(r.x, 0.0);
    }

    #[test]
    fn constant_prefers_smallest_argument() {
        let r = grid_then_golden(|_: f64| 2.0);
        assert_eq!(r.value, 2.0);
        assert_eq!(r.x, 0.0);
    }
}
