//! Scalar abstraction shared by every numeric module.

use nalgebra::{Complex, DMatrix, RealField};

/// Floating-point scalar the toolkit is generic over (`f32` or `f64`).
///
/// The associated tolerances scale with the precision of the type.
pub trait Real: RealField + Copy + Send + Sync + 'static {
    /// Allowed deviation of probability and trace sums from one.
    const SUM_TOL: f64;
    /// Allowed entrywise deviation from Hermiticity / completeness.
    const HERMITIAN_TOL: f64;
    /// Most negative eigenvalue still treated as round-off.
    const NEG_EIG_TOL: f64;
    /// Eigenvalues below this are zero for entropy purposes.
    const ZERO_EIG: f64;

    fn to_f64(self) -> f64;
}

macro_rules! impl_real {
    ($t:ty, $sum:expr, $herm:expr, $neg:expr, $zero:expr) => {
        impl Real for $t {
            const SUM_TOL: f64 = $sum;
            const HERMITIAN_TOL: f64 = $herm;
            const NEG_EIG_TOL: f64 = $neg;
            const ZERO_EIG: f64 = $zero;

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f64, 1e-12, 1e-10, 1e-10, 1e-12);
impl_real!(f32, 1e-5, 1e-5, 1e-5, 1e-6);

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

pub type C<T> = Complex<T>;
pub type CMat<T> = DMatrix<Complex<T>>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `-x log2 x` with the `0 log 0 = 0` convention; negative input counts as zero.
#[inline]
pub fn neg_xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        -x * x.log2()
    }
}
