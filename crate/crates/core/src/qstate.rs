//! Density matrices, Kraus channels and the CPTP property checks.

use nalgebra::{Complex, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, domain, invalid, Error, Result};
use crate::num::{cplx, lit, neg_xlog2x, CMat, Real};

// The symmetric QR iteration occasionally yields NaN on highly degenerate
// inputs (large Kronecker powers of projectors); shifting by a multiple of
// the identity leaves eigenvectors alone and avoids it.
// Costs roughly dim * eps * shift in absolute accuracy, so PSD callers
// should prefer `singular_values`.
const SHIFTS: [f64; 4] = [0.0, 0.5, 1.0, 0.123];

fn shifted<T: Real>(m: &CMat<T>, s: T) -> CMat<T> {
    let mut a = m.clone();
    for i in 0..a.nrows() {
        a[(i, i)].re += s;
    }
    a
}

fn is_real<T: Real>(m: &CMat<T>) -> bool {
    m.iter().all(|z| z.im == T::zero())
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Matrices with no imaginary part take the (much cheaper) real symmetric path.
pub fn hermitian_eigenvalues<T: Real>(m: &CMat<T>) -> Vec<T> {
    let mut ev = Vec::new();
    for s in SHIFTS {
        let s: T = lit(s);
        let a = shifted(m, s);
        ev = if is_real(m) {
            a.map(|z| z.re).symmetric_eigenvalues().iter().map(|&l| l - s).collect()
        } else {
            a.symmetric_eigenvalues().iter().map(|&l| l - s).collect()
        };
        if ev.iter().all(|l: &T| l.is_finite()) {
            break;
        }
    }
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Singular values, descending; equal to the eigenvalues for a PSD matrix.
pub fn singular_values<T: Real>(m: &CMat<T>) -> Vec<T> {
    let mut sv: Vec<T> = if is_real(m) {
        m.map(|z| z.re).singular_values().iter().copied().collect()
    } else {
        m.clone().singular_values().iter().copied().collect()
    };
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Eigenvalues and orthonormal eigenvectors (as columns) of a Hermitian matrix.
pub fn hermitian_eigen<T: Real>(m: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let mut out = (Vec::new(), CMat::zeros(0, 0));
    for s in SHIFTS {
        let s: T = lit(s);
        let a = shifted(m, s);
        out = if is_real(m) {
            let e = a.map(|z| z.re).symmetric_eigen();
            (e.eigenvalues.iter().map(|&l| l - s).collect(), e.eigenvectors.map(cplx))
        } else {
            let e = a.symmetric_eigen();
            (e.eigenvalues.iter().map(|&l| l - s).collect::<Vec<T>>(), e.eigenvectors)
        };
        if out.0.iter().all(|l| l.is_finite()) && out.1.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            break;
        }
    }
    out
}

fn hermitize<T: Real>(m: &CMat<T>) -> CMat<T> {
    (m + m.adjoint()).scale(lit(0.5))
}

fn trace_re<T: Real>(m: &CMat<T>) -> T {
    m.diagonal().iter().fold(T::zero(), |a, z| a + z.re)
}

/// `-Σ λ log2 λ`, ignoring eigenvalues below the zero threshold.
pub fn spectrum_entropy<T: Real>(spectrum: &[T]) -> T {
    let zero: T = lit(T::ZERO_EIG);
    spectrum.iter().filter(|&&l| l > zero).fold(T::zero(), |a, &l| a + neg_xlog2x(l))
}

/// Hermitian, positive semidefinite, unit-trace complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    m: CMat<T>,
    /// Ascending eigenvalues, round-off negatives clamped to zero.
    spectrum: Vec<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(m: CMat<T>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(invalid(format!("density matrix must be square and non-empty, got {}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("non-finite entry"));
        }
        let tol: T = lit(T::HERMITIAN_TOL);
        let d = m.nrows();
        for i in 0..d {
            for j in i..d {
                if (m[(i, j)] - m[(j, i)].conj()).norm_sqr().sqrt() > tol {
                    return Err(invalid(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let m = hermitize(&m);
        let tr = trace_re(&m);
        if (tr - T::one()).abs() > tol {
            return Err(invalid(format!("trace is {}", tr.to_f64())));
        }
        Self::from_hermitian(m)
    }

    /// Accepts a matrix already known to be Hermitian with unit trace and
    /// checks only positivity.
    pub(crate) fn from_hermitian(m: CMat<T>) -> Result<Self> {
        let mut spectrum = hermitian_eigenvalues(&m);
        let neg: T = lit(-T::NEG_EIG_TOL);
        if let Some(&min) = spectrum.first() {
            if min < neg {
                return Err(invalid(format!("negative eigenvalue {}", min.to_f64())));
            }
        }
        for l in spectrum.iter_mut() {
            *l = l.max(T::zero());
        }
        Ok(Self { m, spectrum })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Result<Self> {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| cplx(x)));
        Self::new(CMat::from_diagonal(&v))
    }

    /// `|ψ⟩⟨ψ|` for a normalised copy of `psi`.
    pub fn pure(psi: &DVector<Complex<T>>) -> Result<Self> {
        let n = psi.norm();
        if n <= T::zero() || !n.is_finite() {
            return Err(invalid("state vector has zero norm"));
        }
        let v = psi.unscale(n);
        Self::new(&v * v.adjoint())
    }

    /// Computational basis state `|i⟩⟨i|`.
    pub fn basis(d: usize, i: usize) -> Self {
        assert!(i < d);
        let mut m = CMat::zeros(d, d);
        m[(i, i)] = Complex::new(T::one(), T::zero());
        let mut spectrum = vec![T::zero(); d];
        spectrum[d - 1] = T::one();
        Self { m, spectrum }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let w = T::one() / lit(d as f64);
        Self { m: CMat::identity(d, d).scale(w), spectrum: vec![w; d] }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.m
    }

    pub fn spectrum(&self) -> &[T] {
        &self.spectrum
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_cmat(&self.m)
    }

    pub fn from_json(doc: &MatrixJson) -> Result<Self> {
        Self::new(doc.to_cmat()?)
    }
}

/// `{"dim": d, "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_cmat<T: Real>(m: &CMat<T>) -> Self {
        let entries = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| [m[(i, j)].re.to_f64(), m[(i, j)].im.to_f64()])
            .collect();
        Self { dim: m.nrows(), entries }
    }

    pub fn to_cmat<T: Real>(&self) -> Result<CMat<T>> {
        check_dim(self.dim * self.dim, self.entries.len())?;
        Ok(rect_from_pairs(self.dim, self.dim, &self.entries))
    }
}

fn rect_from_pairs<T: Real>(rows: usize, cols: usize, entries: &[[f64; 2]]) -> CMat<T> {
    CMat::from_fn(rows, cols, |i, j| {
        let [re, im] = entries[i * cols + j];
        Complex::new(lit(re), lit(im))
    })
}

fn rect_to_pairs<T: Real>(m: &CMat<T>) -> Vec<[f64; 2]> {
    MatrixJson::from_cmat(m).entries
}

pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    spectrum_entropy(&rho.spectrum)
}

/// Unnormalised trace norm `||ρ - σ||₁` (at most 2).
pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dim(rho.dim(), sigma.dim())?;
    Ok(trace_norm(&(&rho.m - &sigma.m)))
}

pub(crate) fn trace_norm<T: Real>(m: &CMat<T>) -> T {
    singular_values(m).iter().fold(T::zero(), |a, &l| a + l)
}

fn sqrt_psd<T: Real>(m: &CMat<T>) -> CMat<T> {
    let (ev, v) = hermitian_eigen(m);
    let s = DVector::from_iterator(ev.len(), ev.iter().map(|l| cplx(l.max(T::zero()).sqrt())));
    &v * CMat::from_diagonal(&s) * v.adjoint()
}

/// `(Tr √(√ρ σ √ρ))²`, clipped to `[0, 1]`.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dim(rho.dim(), sigma.dim())?;
    let s = sqrt_psd(&rho.m);
    let inner = hermitize(&(&s * &sigma.m * &s));
    let root = hermitian_eigenvalues(&inner).iter().fold(T::zero(), |a, l| a + l.max(T::zero()).sqrt());
    Ok((root * root).min(T::one()).max(T::zero()))
}

/// Quantum relative entropy, which is infinite when supports are not nested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Divergence<T> {
    Finite(T),
    Infinite,
}

impl<T: Copy> Divergence<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Divergence::Finite(v) => Some(v),
            Divergence::Infinite => None,
        }
    }
}

/// `Tr ρ (log2 ρ - log2 σ)`.
pub fn relative_entropy<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<Divergence<T>> {
    check_dim(rho.dim(), sigma.dim())?;
    let (mu, v) = hermitian_eigen(&sigma.m);
    let zero: T = lit(T::ZERO_EIG);
    let mut kernel_weight = T::zero();
    let mut cross = T::zero();
    for (i, &m) in mu.iter().enumerate() {
        let col = v.column(i);
        let w = (col.adjoint() * &rho.m * col)[(0, 0)].re;
        if m > zero {
            cross += w * m.log2();
        } else {
            kernel_weight += w;
        }
    }
    if kernel_weight > lit(T::HERMITIAN_TOL) {
        return Ok(Divergence::Infinite);
    }
    Ok(Divergence::Finite(-von_neumann_entropy(rho) - cross))
}

/// Kronecker product of two states.
pub fn tensor<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> DensityMatrix<T> {
    let m = a.m.kronecker(&b.m);
    let mut spectrum: Vec<T> = a.spectrum.iter().flat_map(|&x| b.spectrum.iter().map(move |&y| x * y)).collect();
    spectrum.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    DensityMatrix { m, spectrum }
}

/// CPTP map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real> {
    ops: Vec<CMat<T>>,
    d_in: usize,
    d_out: usize,
}

/// `{"input_dim": a, "output_dim": b, "kraus": [[[re, im], ...], ...]}`,
/// each operator row-major with `output_dim` rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausJson {
    pub input_dim: usize,
    pub output_dim: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

impl<T: Real> KrausChannel<T> {
    pub fn new(ops: Vec<CMat<T>>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| invalid("channel needs at least one Kraus operator"))?;
        let (d_out, d_in) = first.shape();
        for k in &ops {
            if k.shape() != (d_out, d_in) {
                return Err(invalid("Kraus operators have inconsistent shapes"));
            }
        }
        let ch = Self { ops, d_in, d_out };
        let r = ch.completeness_residual();
        if !(r <= lit(T::HERMITIAN_TOL)) {
            return Err(invalid(format!("Σ K†K deviates from identity by {}", r.to_f64())));
        }
        Ok(ch)
    }

    /// Largest entrywise deviation of `Σ K†K` from the identity.
    pub fn completeness_residual(&self) -> T {
        let mut acc = CMat::<T>::zeros(self.d_in, self.d_in);
        for k in &self.ops {
            acc += k.adjoint() * k;
        }
        acc -= CMat::identity(self.d_in, self.d_in);
        acc.iter().fold(T::zero(), |a, z| a.max(z.norm_sqr().sqrt()))
    }

    pub fn identity(d: usize) -> Self {
        Self { ops: vec![CMat::identity(d, d)], d_in: d, d_out: d }
    }

    /// `ρ ↦ (1 - λ) ρ + λ Tr(ρ) I/d`.
    pub fn depolarizing(d: usize, lambda: T) -> Result<Self> {
        crate::info::check_prob("lambda", lambda)?;
        let mut ops = vec![CMat::identity(d, d).scale((T::one() - lambda).sqrt())];
        let w = (lambda / lit(d as f64)).sqrt();
        if lambda > T::zero() {
            for i in 0..d {
                for j in 0..d {
                    let mut k = CMat::zeros(d, d);
                    k[(i, j)] = cplx(w);
                    ops.push(k);
                }
            }
        }
        Ok(Self { ops, d_in: d, d_out: d })
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: T) -> Result<Self> {
        crate::info::check_prob("gamma", gamma)?;
        let z = T::zero();
        let k0 = CMat::from_row_slice(2, 2, &[cplx(T::one()), cplx(z), cplx(z), cplx((T::one() - gamma).sqrt())]);
        let k1 = CMat::from_row_slice(2, 2, &[cplx(z), cplx(gamma.sqrt()), cplx(z), cplx(z)]);
        Ok(Self { ops: vec![k0, k1], d_in: 2, d_out: 2 })
    }

    /// Qubit dephasing: applies Z with probability `p`.
    pub fn dephasing(p: T) -> Result<Self> {
        crate::info::check_prob("p", p)?;
        let z = T::zero();
        let k0 = CMat::identity(2, 2).scale((T::one() - p).sqrt());
        let s = p.sqrt();
        let k1 = CMat::from_row_slice(2, 2, &[cplx(s), cplx(z), cplx(z), cplx(-s)]);
        Ok(Self { ops: vec![k0, k1], d_in: 2, d_out: 2 })
    }

    pub fn input_dim(&self) -> usize {
        self.d_in
    }

    pub fn output_dim(&self) -> usize {
        self.d_out
    }

    pub fn ops(&self) -> &[CMat<T>] {
        &self.ops
    }

    pub(crate) fn apply_matrix(&self, m: &CMat<T>) -> CMat<T> {
        let mut out = CMat::zeros(self.d_out, self.d_out);
        for k in &self.ops {
            out += k * m * k.adjoint();
        }
        hermitize(&out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dim(self.d_in, other.d_out)?;
        let ops = self.ops.iter().flat_map(|a| other.ops.iter().map(move |b| a * b)).collect();
        Ok(Self { ops, d_in: other.d_in, d_out: self.d_out })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let ops = self.ops.iter().flat_map(|a| other.ops.iter().map(move |b| a.kronecker(b))).collect();
        Self { ops, d_in: self.d_in * other.d_in, d_out: self.d_out * other.d_out }
    }

    pub fn to_json(&self) -> KrausJson {
        KrausJson { input_dim: self.d_in, output_dim: self.d_out, kraus: self.ops.iter().map(rect_to_pairs).collect() }
    }

    pub fn from_json(doc: &KrausJson) -> Result<Self> {
        let mut ops = Vec::with_capacity(doc.kraus.len());
        for k in &doc.kraus {
            check_dim(doc.input_dim * doc.output_dim, k.len())?;
            ops.push(rect_from_pairs(doc.output_dim, doc.input_dim, k));
        }
        Self::new(ops)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: KrausJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&doc)
    }
}

pub fn apply_channel<T: Real>(phi: &KrausChannel<T>, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    check_dim(phi.d_in, rho.dim())?;
    DensityMatrix::from_hermitian(phi.apply_matrix(&rho.m))
}

/// `D(ρ||σ) - D(Φρ||Φσ)`; `None` when `D(ρ||σ)` is infinite, in which case
/// the inequality holds trivially.
pub fn check_dpi<T: Real>(phi: &KrausChannel<T>, rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<Option<T>> {
    check_dim(rho.dim(), sigma.dim())?;
    let before = match relative_entropy(rho, sigma)? {
        Divergence::Finite(v) => v,
        Divergence::Infinite => return Ok(None),
    };
    let after = relative_entropy(&apply_channel(phi, rho)?, &apply_channel(phi, sigma)?)?;
    match after {
        Divergence::Finite(v) => Ok(Some(before - v)),
        Divergence::Infinite => Err(domain("image divergence infinite although the pre-image divergence is finite")),
    }
}

/// `||ρ - σ||₁ - ||Φρ - Φσ||₁`.
pub fn check_contractivity<T: Real>(phi: &KrausChannel<T>, rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dim(rho.dim(), sigma.dim())?;
    check_dim(phi.d_in, rho.dim())?;
    let before = trace_norm(&(&rho.m - &sigma.m));
    let after = trace_norm(&(phi.apply_matrix(&rho.m) - phi.apply_matrix(&sigma.m)));
    Ok(before - after)
}

pub(crate) fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat<T> {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(lit(re), lit(im))
    })
}

/// Mixed state `G G† / Tr(G G†)` from a complex Gaussian `G`.
pub fn random_state<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix<T> {
    let g = ginibre::<T, R>(d, d, rng);
    let m = &g * g.adjoint();
    let tr = trace_re(&m);
    DensityMatrix::from_hermitian(hermitize(&m.unscale(tr))).expect("Gram matrix is positive")
}

pub fn random_pure<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix<T> {
    let g = ginibre::<T, R>(d, 1, rng);
    DensityMatrix::pure(&g.column(0).into_owned()).expect("Gaussian vector is non-zero")
}

/// Channel from a random isometry `C^{d_in} → C^{d_out} ⊗ C^{kraus}`.
pub fn random_channel<T: Real, R: Rng + ?Sized>(d_in: usize, d_out: usize, kraus: usize, rng: &mut R) -> Result<KrausChannel<T>> {
    if d_out * kraus < d_in {
        return Err(domain("isometry needs output_dim * kraus >= input_dim"));
    }
    let q = ginibre::<T, R>(d_out * kraus, d_in, rng).qr().q();
    let ops = (0..kraus).map(|i| q.rows(i * d_out, d_out).into_owned()).collect();
    KrausChannel::new(ops)
}
