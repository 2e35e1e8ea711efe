//! Entropies, mutual information and the binary-symmetric cascade.
//!
//! All logarithms are base 2 and `0 log 0 = 0`.

use nalgebra::DMatrix;

use crate::error::{domain, invalid, Result};
use crate::num::{lit, neg_xlog2x, Real};

pub(crate) fn check_prob<T: Real>(name: &str, p: T) -> Result<()> {
    if p.is_finite() && p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(domain(format!("{name} = {} is not a probability", p.to_f64())))
    }
}

pub(crate) fn check_half<T: Real>(name: &str, p: T) -> Result<()> {
    if p.is_finite() && p >= T::zero() && p <= lit(0.5) {
        Ok(())
    } else {
        Err(domain(format!("{name} = {} must lie in [0, 1/2]", p.to_f64())))
    }
}

/// Binary entropy without range checks.
#[inline]
pub(crate) fn h<T: Real>(p: T) -> T {
    neg_xlog2x(p) + neg_xlog2x(T::one() - p)
}

/// Crossover of two BSCs in series, unchecked.
#[inline]
pub(crate) fn casc<T: Real>(a: T, b: T) -> T {
    a + b - lit::<T>(2.0) * a * b
}

pub fn binary_entropy<T: Real>(p: T) -> Result<T> {
    check_prob("p", p)?;
    Ok(h(p))
}

/// `eps + delta - 2 eps delta`: crossover of BSC(eps) followed by BSC(delta).
pub fn cascade<T: Real>(eps: T, delta: T) -> Result<T> {
    check_prob("eps", eps)?;
    check_prob("delta", delta)?;
    Ok(casc(eps, delta))
}

/// Probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist<T: Real> {
    weights: Vec<T>,
}

impl<T: Real> Dist<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("distribution over an empty alphabet"));
        }
        let mut sum = T::zero();
        for &w in &weights {
            if !w.is_finite() || w < T::zero() {
                return Err(invalid(format!("negative or non-finite weight {}", w.to_f64())));
            }
            sum += w;
        }
        if (sum - T::one()).abs() > lit(T::SUM_TOL) {
            return Err(invalid(format!("weights sum to {}", sum.to_f64())));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs a non-empty alphabet");
        let w = T::one() / lit(n as f64);
        Self { weights: vec![w; n] }
    }

    pub fn point(n: usize, at: usize) -> Self {
        assert!(at < n);
        let mut weights = vec![T::zero(); n];
        weights[at] = T::one();
        Self { weights }
    }

    /// `(1 - p, p)` on a binary alphabet.
    pub fn bernoulli(p: T) -> Result<Self> {
        check_prob("p", p)?;
        Ok(Self { weights: vec![T::one() - p, p] })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

pub fn shannon_entropy<T: Real>(d: &Dist<T>) -> T {
    entropy_of(d.weights.iter().copied())
}

pub(crate) fn entropy_of<T: Real>(it: impl IntoIterator<Item = T>) -> T {
    it.into_iter().fold(T::zero(), |acc, p| acc + neg_xlog2x(p))
}

/// Joint law of `(X, Y)`; rows index `x`, columns index `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist<T: Real> {
    table: DMatrix<T>,
}

impl<T: Real> JointDist<T> {
    pub fn new(table: DMatrix<T>) -> Result<Self> {
        if table.is_empty() {
            return Err(invalid("empty joint table"));
        }
        if table.iter().any(|&v| !v.is_finite() || v < T::zero()) {
            return Err(invalid("joint table has negative or non-finite entries"));
        }
        let sum = table.iter().fold(T::zero(), |a, &b| a + b);
        if (sum - T::one()).abs() > lit(T::SUM_TOL) {
            return Err(invalid(format!("joint table sums to {}", sum.to_f64())));
        }
        Ok(Self { table })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(invalid("ragged joint table"));
        }
        Self::new(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    /// `P(x) P(y|x)` for an input law and a row-stochastic channel matrix.
    pub fn from_channel(input: &Dist<T>, channel: &DMatrix<T>) -> Result<Self> {
        crate::error::check_dim(channel.nrows(), input.len())?;
        let table = DMatrix::from_fn(channel.nrows(), channel.ncols(), |x, y| {
            input.weights[x] * channel[(x, y)]
        });
        Self::new(table)
    }

    pub fn table(&self) -> &DMatrix<T> {
        &self.table
    }

    pub fn marginal_x(&self) -> Vec<T> {
        self.table.row_iter().map(|r| r.sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<T> {
        self.table.column_iter().map(|c| c.sum()).collect()
    }

    pub fn joint_entropy(&self) -> T {
        entropy_of(self.table.iter().copied())
    }
}

pub fn mutual_information<T: Real>(j: &JointDist<T>) -> T {
    let mi = entropy_of(j.marginal_x()) + entropy_of(j.marginal_y()) - j.joint_entropy();
    mi.max(T::zero())
}

/// `H(Y|X) = H(X,Y) - H(X)`.
pub fn conditional_entropy<T: Real>(j: &JointDist<T>) -> T {
    (j.joint_entropy() - entropy_of(j.marginal_x())).max(T::zero())
}
