//! Holevo information of ensembles and cq channels, and the `χ_B - χ_E`
//! secrecy rate with Eve as a CPTP degradation of Bob.

use std::collections::BTreeMap;

use nalgebra::{Complex, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::info::Dist;
use crate::num::{lit, Real};
use crate::optimize::grid_then_golden;
use crate::qstate::{hermitian_eigenvalues, spectrum_entropy, DensityMatrix, KrausChannel, MatrixJson};

/// Simplex grid resolution for alphabets larger than two.
pub const SIMPLEX_STEP: f64 = 0.01;
const SIMPLEX_MAX_POINTS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<T: Real> {
    priors: Dist<T>,
    states: Vec<DensityMatrix<T>>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(priors: Dist<T>, states: Vec<DensityMatrix<T>>) -> Result<Self> {
        check_dim(priors.len(), states.len())?;
        let d = states[0].dim();
        for s in &states {
            check_dim(d, s.dim())?;
        }
        Ok(Self { priors, states })
    }

    pub fn uniform(states: Vec<DensityMatrix<T>>) -> Result<Self> {
        if states.is_empty() {
            return Err(invalid("empty ensemble"));
        }
        Self::new(Dist::uniform(states.len()), states)
    }

    pub fn priors(&self) -> &Dist<T> {
        &self.priors
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }
}

/// `S(Σ p ρ) - Σ p S(ρ)` given precomputed member entropies.
fn chi_with<T: Real>(priors: &[T], states: &[DensityMatrix<T>], entropies: &[T]) -> T {
    let d = states[0].dim();
    let mut avg = crate::num::CMat::<T>::zeros(d, d);
    let mut mean_s = T::zero();
    for ((&p, s), &e) in priors.iter().zip(states).zip(entropies) {
        if p > T::zero() {
            avg += s.matrix().scale(p);
            mean_s += p * e;
        }
    }
    let avg_s = spectrum_entropy(&hermitian_eigenvalues(&avg));
    (avg_s - mean_s).max(T::zero())
}

pub fn holevo_chi<T: Real>(e: &Ensemble<T>) -> T {
    let ent: Vec<T> = e.states.iter().map(crate::qstate::von_neumann_entropy).collect();
    chi_with(e.priors.weights(), &e.states, &ent)
}

/// Classical-quantum channel `x ↦ ρ_x` over a labelled finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct CqChannel<T: Real> {
    inputs: Vec<String>,
    states: Vec<DensityMatrix<T>>,
}

/// `{"inputs": [...], "dim": d, "states": {input: matrix-json}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CqChannelJson {
    pub inputs: Vec<serde_json::Value>,
    pub dim: usize,
    pub states: BTreeMap<String, MatrixJson>,
}

fn label(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl<T: Real> CqChannel<T> {
    pub fn new(inputs: Vec<String>, states: Vec<DensityMatrix<T>>) -> Result<Self> {
        check_dim(inputs.len(), states.len())?;
        if states.is_empty() {
            return Err(invalid("cq channel needs at least one input"));
        }
        let d = states[0].dim();
        for s in &states {
            check_dim(d, s.dim())?;
        }
        let mut seen = std::collections::BTreeSet::new();
        for x in &inputs {
            if !seen.insert(x) {
                return Err(invalid(format!("duplicate input label {x}")));
            }
        }
        Ok(Self { inputs, states })
    }

    /// Binary channel with inputs labelled `0` and `1`.
    pub fn binary(rho0: DensityMatrix<T>, rho1: DensityMatrix<T>) -> Result<Self> {
        Self::new(vec!["0".into(), "1".into()], vec![rho0, rho1])
    }

    /// `0 ↦ |0⟩`, `1 ↦ cos θ |0⟩ + sin θ |1⟩`.
    pub fn amplitude(theta: T) -> Self {
        let psi = DVector::from_vec(vec![Complex::new(theta.cos(), T::zero()), Complex::new(theta.sin(), T::zero())]);
        let one = DensityMatrix::pure(&psi).expect("unit vector");
        Self::binary(DensityMatrix::basis(2, 0), one).expect("qubit states")
    }

    /// Noiseless classical bit embedded in a qubit.
    pub fn classical_bit() -> Self {
        Self::binary(DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)).expect("qubit states")
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn ensemble(&self, prior: &Dist<T>) -> Result<Ensemble<T>> {
        Ensemble::new(prior.clone(), self.states.clone())
    }

    /// Channel `x ↦ Φ(ρ_x)`.
    pub fn map(&self, phi: &KrausChannel<T>) -> Result<Self> {
        let states = self.states.iter().map(|s| crate::qstate::apply_channel(phi, s)).collect::<Result<_>>()?;
        Ok(Self { inputs: self.inputs.clone(), states })
    }

    pub fn from_json(doc: &CqChannelJson) -> Result<Self> {
        let mut inputs = Vec::new();
        let mut states = Vec::new();
        for v in &doc.inputs {
            let x = label(v);
            let m = doc.states.get(&x).ok_or_else(|| invalid(format!("no state for input {x}")))?;
            check_dim(doc.dim, m.dim)?;
            states.push(DensityMatrix::from_json(m)?);
            inputs.push(x);
        }
        if doc.states.len() != inputs.len() {
            return Err(invalid("states map has entries for unknown inputs"));
        }
        Self::new(inputs, states)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: CqChannelJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&doc)
    }

    pub fn to_json(&self) -> CqChannelJson {
        CqChannelJson {
            inputs: self.inputs.iter().map(|x| serde_json::Value::String(x.clone())).collect(),
            dim: self.dim(),
            states: self.inputs.iter().cloned().zip(self.states.iter().map(DensityMatrix::to_json)).collect(),
        }
    }
}

/// Bob's channel and Eve's degraded copy with cached member entropies.
struct RatePair<'a, T: Real> {
    bob: &'a [DensityMatrix<T>],
    eve: Vec<DensityMatrix<T>>,
    s_bob: Vec<T>,
    s_eve: Vec<T>,
}

impl<'a, T: Real> RatePair<'a, T> {
    fn new(bob: &'a CqChannel<T>, eve_map: &KrausChannel<T>) -> Result<Self> {
        check_dim(bob.dim(), eve_map.input_dim())?;
        let eve = bob.map(eve_map)?.states;
        let s_bob = bob.states.iter().map(crate::qstate::von_neumann_entropy).collect();
        let s_eve = eve.iter().map(crate::qstate::von_neumann_entropy).collect();
        Ok(Self { bob: &bob.states, eve, s_bob, s_eve })
    }

    fn rate(&self, prior: &[T]) -> T {
        chi_with(prior, self.bob, &self.s_bob) - chi_with(prior, &self.eve, &self.s_eve)
    }
}

/// `χ_B(prior) - χ_E(prior)` with Eve's states `ℰ(ρ_x)`; may be negative.
pub fn secrecy_rate<T: Real>(bob: &CqChannel<T>, eve_map: &KrausChannel<T>, prior: &Dist<T>) -> Result<T> {
    check_dim(bob.states.len(), prior.len())?;
    Ok(RatePair::new(bob, eve_map)?.rate(prior.weights()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateOptimum<T: Real> {
    pub value: T,
    pub prior: Vec<T>,
}

/// Maximises [`secrecy_rate`] over input priors.
///
/// Binary alphabets use a fine grid plus golden-section refinement; larger
/// alphabets scan the simplex at [`SIMPLEX_STEP`], which approximates rather
/// than certifies the supremum. Ties go to the lexicographically smallest
/// prior.
pub fn optimize_secrecy_rate<T: Real>(bob: &CqChannel<T>, eve_map: &KrausChannel<T>) -> Result<RateOptimum<T>> {
    let pair = RatePair::new(bob, eve_map)?;
    let k = bob.states.len();
    match k {
        1 => Ok(RateOptimum { value: pair.rate(&[T::one()]), prior: vec![T::one()] }),
        2 => {
            // Parametrised by P(X=0) so grid ties land on the smallest prior.
            let best = grid_then_golden(|p0| pair.rate(&[p0, T::one() - p0]));
            Ok(RateOptimum { value: best.value, prior: vec![best.x, T::one() - best.x] })
        }
        _ => {
            let steps = (1.0 / SIMPLEX_STEP).round() as usize;
            let points = simplex_points(k, steps)?;
            let scale: T = lit(steps as f64);
            let best = points
                .par_iter()
                .map(|c| {
                    let prior: Vec<T> = c.iter().map(|&n| lit::<T>(n as f64) / scale).collect();
                    (pair.rate(&prior), c)
                })
                .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
                .expect("simplex grid is non-empty");
            let prior = best.1.iter().map(|&n| lit::<T>(n as f64) / scale).collect();
            Ok(RateOptimum { value: best.0, prior })
        }
    }
}

/// Compositions of `steps` into `k` non-negative parts, lexicographic order.
fn simplex_points(k: usize, steps: usize) -> Result<Vec<Vec<u16>>> {
    let mut count: f64 = 1.0;
    for i in 1..k {
        count = count * (steps + i) as f64 / i as f64;
    }
    if count > SIMPLEX_MAX_POINTS as f64 {
        return Err(Error::Capability(format!("simplex grid over {k} inputs has {count:.0} points")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0u16; k];
    fn rec(i: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i + 1 == cur.len() {
            cur[i] = left as u16;
            out.push(cur.clone());
            return;
        }
        for n in 0..=left {
            cur[i] = n as u16;
            rec(i + 1, left - n, cur, out);
        }
    }
    rec(0, steps, &mut cur, &mut out);
    Ok(out)
}
