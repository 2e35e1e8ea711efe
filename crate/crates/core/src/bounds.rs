//! Lower bounds on Eve's error probability and optimal two-state
//! discrimination.

use rand::Rng;
use serde::Serialize;

use crate::error::{check_dim, domain, Result};
use crate::info::h;
use crate::num::{lit, CMat, Real};
use crate::qstate::{hermitian_eigen, trace_norm, DensityMatrix};

pub const FANO_TOL: f64 = 1e-10;
pub const DEFAULT_M_THRESHOLD: u64 = 16;

fn check_m(m: u64) -> Result<()> {
    if m < 2 {
        Err(domain(format!("message count M = {m} must be at least 2")))
    } else {
        Ok(())
    }
}

/// Smallest `p ∈ [0, (M-1)/M]` with `H_b(p) + p log2(M-1) ≥ log2 M - χ`,
/// by bisection on the increasing branch. Zero once `χ ≥ log2 M`.
pub fn fano_min_error<T: Real>(m: u64, chi: T) -> Result<T> {
    check_m(m)?;
    if !(chi >= T::zero()) {
        return Err(domain(format!("chi = {} must be non-negative", chi.to_f64())));
    }
    let log_m: T = lit((m as f64).log2());
    let log_m1: T = lit(((m - 1) as f64).log2());
    let target = log_m - chi;
    if target <= T::zero() {
        return Ok(T::zero());
    }
    let f = |p: T| h(p) + p * log_m1;
    let mut lo = T::zero();
    let mut hi: T = lit((m - 1) as f64 / m as f64);
    if f(hi) <= target {
        return Ok(hi);
    }
    let tol: T = lit(FANO_TOL);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) * lit(0.5);
        if f(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// A bound reported verbatim, flagged when it leaves `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Flagged<T: Real> {
    pub value: T,
    pub vacuous: bool,
}

impl<T: Real> Flagged<T> {
    fn new(value: T) -> Self {
        Self { value, vacuous: !(value >= T::zero() && value <= T::one()) }
    }

    pub fn clamped(self) -> T {
        self.value.max(T::zero()).min(T::one())
    }
}

/// `log2(1/N) · (log2 M - χ - 1)` for `N` channel uses.
pub fn blocklength_bound<T: Real>(n: u64, m: u64, chi: T) -> Result<Flagged<T>> {
    if n < 1 {
        return Err(domain("blocklength N must be at least 1"));
    }
    check_m(m)?;
    let v = lit::<T>(-(n as f64).log2()) * (lit::<T>((m as f64).log2()) - chi - T::one());
    Ok(Flagged::new(v))
}

/// `max(0, 1 - (1 + ε(M-1))/M)` for `M` states of pairwise trace distance at most `ε`.
pub fn helstrom_multistate_lower<T: Real>(m: u64, eps: T) -> Result<T> {
    check_m(m)?;
    if !(eps >= T::zero() && eps <= lit(2.0)) {
        return Err(domain(format!("eps = {} must lie in [0, 2]", eps.to_f64())));
    }
    let mm: T = lit(m as f64);
    Ok((T::one() - (T::one() + eps * (mm - T::one())) / mm).max(T::zero()))
}

/// Optimal success probability `1/2 + ||ρ0 - ρ1||₁ / 4` for equal priors.
pub fn helstrom_two_state<T: Real>(rho0: &DensityMatrix<T>, rho1: &DensityMatrix<T>) -> Result<T> {
    check_dim(rho0.dim(), rho1.dim())?;
    Ok(lit::<T>(0.5) + trace_norm(&(rho0.matrix() - rho1.matrix())) * lit(0.25))
}

/// Projective measurement onto the positive part of `ρ0 - ρ1`: outcome
/// "0" on the projector, "1" on its complement.
#[derive(Debug, Clone)]
pub struct HelstromMeasurement<T: Real> {
    p0_given0: T,
    p0_given1: T,
}

impl<T: Real> HelstromMeasurement<T> {
    pub fn new(rho0: &DensityMatrix<T>, rho1: &DensityMatrix<T>) -> Result<Self> {
        check_dim(rho0.dim(), rho1.dim())?;
        let (ev, v) = hermitian_eigen(&(rho0.matrix() - rho1.matrix()));
        let d = rho0.dim();
        let mut proj = CMat::<T>::zeros(d, d);
        for (i, &l) in ev.iter().enumerate() {
            if l > T::zero() {
                let c = v.column(i);
                proj += &c * c.adjoint();
            }
        }
        let tr = |r: &DensityMatrix<T>| (r.matrix() * &proj).trace().re.max(T::zero()).min(T::one());
        Ok(Self { p0_given0: tr(rho0), p0_given1: tr(rho1) })
    }

    /// Exact error probability with equal priors.
    pub fn error_probability(&self) -> T {
        lit::<T>(0.5) * ((T::one() - self.p0_given0) + self.p0_given1)
    }

    /// Number of misidentified shots out of `shots`, each drawing the true
    /// state uniformly and sampling the measurement outcome.
    pub fn simulate_errors<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> u64 {
        let (a, b) = (self.p0_given0.to_f64(), self.p0_given1.to_f64());
        let mut errors = 0;
        for _ in 0..shots {
            let truth = rng.random::<bool>();
            let says0 = rng.random::<f64>() < if truth { b } else { a };
            errors += (says0 == truth) as u64;
        }
        errors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "small-M")]
    SmallM,
    #[serde(rename = "large-M")]
    LargeM,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::SmallM => "small-M",
            Regime::LargeM => "large-M",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EveGap<T: Real> {
    pub value: T,
    pub regime: Regime,
    pub vacuous: bool,
}

/// Gap in Eve's false-acceptance probability: the multi-state Helstrom
/// expression for `M ≤ m_threshold`, the blocklength bound otherwise.
pub fn c_eve_gap<T: Real>(n: u64, m: u64, chi: T, eps: T, m_threshold: u64) -> Result<EveGap<T>> {
    check_m(m)?;
    if m <= m_threshold {
        let v = Flagged::new(helstrom_multistate_lower(m, eps)?);
        Ok(EveGap { value: v.value, regime: Regime::SmallM, vacuous: v.vacuous })
    } else {
        let v = blocklength_bound(n, m, chi)?;
        Ok(EveGap { value: v.value, regime: Regime::LargeM, vacuous: v.vacuous })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::random_state;
    use crate::rng::stream;
    use approx::assert_abs_diff_eq;
    use nalgebra::{Complex, DVector};

    fn plus() -> DensityMatrix<f64> {
        DensityMatrix::pure(&DVector::from_vec(vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)])).unwrap()
    }

    #[test]
    fn fano_examples() {
        assert_abs_diff_eq!(fano_min_error(2, 0.0).unwrap(), 0.5, epsilon = 1e-10);
        assert_eq!(fano_min_error(4, 2.0).unwrap(), 0.0);
        let p = fano_min_error(4, 1.0).unwrap();
        assert_abs_diff_eq!(p, 0.18928962491523176, epsilon = 1e-9);
        assert_abs_diff_eq!(p, 0.189312, epsilon = 1e-4);
        assert_abs_diff_eq!(h(p) + p * 3f64.log2(), 1.0, epsilon = 1e-9);
        assert!(fano_min_error(1, 0.0).is_err());
        assert!(fano_min_error(4, -0.5).is_err());
    }

    #[test]
    fn fano_monotone() {
        for m in [2u64, 3, 8, 100, 1 << 20] {
            let mut prev = f64::INFINITY;
            for i in 0..=40 {
                let chi = (m as f64).log2() * i as f64 / 40.0;
                let p = fano_min_error(m, chi).unwrap();
                assert!(p <= prev + 1e-12);
                prev = p;
            }
        }
        for i in 0..=20 {
            let chi = 0.1 * i as f64;
            let mut prev = 0.0;
            for m in 2u64..64 {
                let p = fano_min_error(m, chi).unwrap();
                assert!(p >= prev - 1e-10, "m={m} chi={chi}");
                prev = p;
            }
        }
    }

    #[test]
    fn blocklength_examples() {
        let b = blocklength_bound(1, 4, 0.0).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(!b.vacuous);
        let b = blocklength_bound(1024, 1 << 20, 4.0).unwrap();
        assert_abs_diff_eq!(b.value, -150.0, epsilon = 1e-12);
        assert!(b.vacuous);
        assert_eq!(b.clamped(), 0.0);
        let b = blocklength_bound(2, 4, 0.0).unwrap();
        assert_abs_diff_eq!(b.value, -1.0, epsilon = 1e-15);
        assert!(b.vacuous);
    }

    #[test]
    fn helstrom_multistate_examples() {
        assert_eq!(helstrom_multistate_lower(2, 0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(helstrom_multistate_lower(4, 0.1).unwrap(), 0.675, epsilon = 1e-15);
        for m in 2..50 {
            assert_eq!(helstrom_multistate_lower(m, 1.0).unwrap(), 0.0);
        }
        assert!(helstrom_multistate_lower(4, 2.5).is_err());
    }

    #[test]
    fn helstrom_two_state_examples() {
        let z0 = DensityMatrix::<f64>::basis(2, 0);
        let z1 = DensityMatrix::<f64>::basis(2, 1);
        assert_abs_diff_eq!(helstrom_two_state(&z0, &z1).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(helstrom_two_state(&z0, &z0).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(helstrom_two_state(&z0, &plus()).unwrap(), 0.85355339059327376, epsilon = 1e-14);
    }

    #[test]
    fn measurement_attains_bound() {
        let mut rng = stream(3, 0);
        for _ in 0..100 {
            let a = random_state::<f64, _>(2, &mut rng);
            let b = random_state::<f64, _>(2, &mut rng);
            let m = HelstromMeasurement::new(&a, &b).unwrap();
            let opt = 1.0 - helstrom_two_state(&a, &b).unwrap();
            assert_abs_diff_eq!(m.error_probability(), opt, epsilon = 1e-12);
        }
    }

    #[test]
    fn eve_gap_examples() {
        let g = c_eve_gap(7, 2, 3.0, 0.0, DEFAULT_M_THRESHOLD).unwrap();
        assert_eq!((g.value, g.regime, g.vacuous), (0.5, Regime::SmallM, false));
        let g = c_eve_gap(1024, 1 << 20, 4.0, 0.3, DEFAULT_M_THRESHOLD).unwrap();
        assert_abs_diff_eq!(g.value, -150.0, epsilon = 1e-12);
        assert_eq!(g.regime, Regime::LargeM);
        assert!(g.vacuous);
        let g = c_eve_gap(1, 1 << 10, 0.0, 0.0, DEFAULT_M_THRESHOLD).unwrap();
        assert_eq!((g.value, g.regime), (0.0, Regime::LargeM));
        assert_eq!(serde_json::to_string(&Regime::SmallM).unwrap(), "\"small-M\"");
    }
}
