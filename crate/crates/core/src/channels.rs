//! Binary symmetric channels, discrete memoryless channels and the
//! Alice/Bob/Eve broadcast triple.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::info::{casc, check_half, check_prob, entropy_of, Dist, JointDist};
use crate::num::{lit, Real};
use crate::rng::stream;

/// Bits handled per random stream in [`transmit`].
const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bsc<T: Real> {
    crossover: T,
}

impl<T: Real> Bsc<T> {
    /// Accepts any crossover in `[0, 1]`.
    pub fn new(crossover: T) -> Result<Self> {
        check_prob("crossover", crossover)?;
        Ok(Self { crossover })
    }

    /// Accepts crossovers in `[0, 1/2]` only.
    pub fn capacity_facing(crossover: T) -> Result<Self> {
        check_half("crossover", crossover)?;
        Ok(Self { crossover })
    }

    pub fn crossover(&self) -> T {
        self.crossover
    }

    pub fn matrix(&self) -> DMatrix<T> {
        let p = self.crossover;
        let q = T::one() - p;
        DMatrix::from_row_slice(2, 2, &[q, p, p, q])
    }
}

/// Serial composition: crossover `a + b - 2ab`.
pub fn compose<T: Real>(a: &Bsc<T>, b: &Bsc<T>) -> Bsc<T> {
    Bsc { crossover: casc(a.crossover, b.crossover) }
}

/// Flips each bit of `word` independently with the channel's crossover.
///
/// Bits are drawn in fixed-size chunks, one random stream per chunk, so the
/// output is identical for any rayon pool size.
pub fn transmit<T: Real>(c: &Bsc<T>, word: &[bool], seed: u64) -> Vec<bool> {
    let p = c.crossover.to_f64();
    let mut out = word.to_vec();
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(i, chunk)| {
        let mut rng = stream(seed, i as u64);
        for b in chunk.iter_mut() {
            if rng.random::<f64>() < p {
                *b = !*b;
            }
        }
    });
    out
}

/// Monte Carlo flip rate of `samples` bits sent through `channels` in series.
///
/// Returns the number of flipped bits.
pub fn serial_flips<T: Real>(channels: &[Bsc<T>], samples: u64, seed: u64) -> u64 {
    let ps: Vec<f64> = channels.iter().map(|c| c.crossover.to_f64()).collect();
    let chunks = samples.div_ceil(CHUNK as u64);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let len = (samples - i * CHUNK as u64).min(CHUNK as u64);
            let mut flips = 0u64;
            for _ in 0..len {
                let mut bit = false;
                for &p in &ps {
                    if rng.random::<f64>() < p {
                        bit = !bit;
                    }
                }
                flips += bit as u64;
            }
            flips
        })
        .sum()
}

/// Row-stochastic channel matrix `P(y|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc<T: Real> {
    matrix: DMatrix<T>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DmcJson {
    pub inputs: usize,
    pub outputs: usize,
    pub rows: Vec<Vec<f64>>,
}

impl<T: Real> Dmc<T> {
    pub fn new(matrix: DMatrix<T>) -> Result<Self> {
        if matrix.is_empty() {
            return Err(invalid("empty channel matrix"));
        }
        for (x, row) in matrix.row_iter().enumerate() {
            if row.iter().any(|&v| !v.is_finite() || v < T::zero()) {
                return Err(invalid(format!("row {x} has a negative or non-finite entry")));
            }
            if (row.sum() - T::one()).abs() > lit(T::SUM_TOL) {
                return Err(invalid(format!("row {x} sums to {}", row.sum().to_f64())));
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_json(doc: &DmcJson) -> Result<Self> {
        check_dim(doc.inputs, doc.rows.len())?;
        for row in &doc.rows {
            check_dim(doc.outputs, row.len())?;
        }
        Self::new(DMatrix::from_fn(doc.inputs, doc.outputs, |i, j| lit(doc.rows[i][j])))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: DmcJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&doc)
    }

    pub fn to_json(&self) -> DmcJson {
        DmcJson {
            inputs: self.inputs(),
            outputs: self.outputs(),
            rows: self.matrix.row_iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect(),
        }
    }

    pub fn inputs(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn outputs(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn joint(&self, input: &Dist<T>) -> Result<JointDist<T>> {
        JointDist::from_channel(input, &self.matrix)
    }
}

impl<T: Real> From<Bsc<T>> for Dmc<T> {
    fn from(b: Bsc<T>) -> Self {
        Self { matrix: b.matrix() }
    }
}

/// Main channel to Bob, independent channel to Eve, and the extra stage of
/// the forward conceptual channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BroadcastModel<T: Real> {
    pub main: Bsc<T>,
    pub eve: Bsc<T>,
    pub conceptual_delta: T,
}

impl<T: Real> BroadcastModel<T> {
    pub fn new(main: T, eve: T, conceptual_delta: T) -> Result<Self> {
        check_prob("conceptual_delta", conceptual_delta)?;
        Ok(Self { main: Bsc::new(main)?, eve: Bsc::new(eve)?, conceptual_delta })
    }

    /// Whether Eve's channel is less noisy than Bob's. Reported, never assumed.
    pub fn eve_superior(&self) -> bool {
        self.eve.crossover < self.main.crossover
    }
}

/// Eve's view cascaded with the conceptual stage.
pub fn forward_conceptual<T: Real>(m: &BroadcastModel<T>) -> Bsc<T> {
    compose(&m.eve, &Bsc { crossover: m.conceptual_delta })
}

/// Pairwise cascades standing in for the backward conceptual channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BackwardConceptual<T: Real> {
    pub alice_eve: T,
    pub bob_eve: T,
    pub alice_bob: T,
}

pub fn backward_conceptual<T: Real>(ea: T, eb: T, ee: T) -> Result<BackwardConceptual<T>> {
    check_prob("ea", ea)?;
    check_prob("eb", eb)?;
    check_prob("ee", ee)?;
    Ok(BackwardConceptual { alice_eve: casc(ea, ee), bob_eve: casc(eb, ee), alice_bob: casc(ea, eb) })
}

/// `I(X;Y|Z)` for a binary input law, from the joint `P(x) P(y|x) P(z|x)`.
pub fn conditional_mi_given_z<T: Real>(m: &BroadcastModel<T>, input: &Dist<T>) -> Result<T> {
    check_dim(2, input.len())?;
    Ok(cmi_unchecked(m.main.crossover, m.eve.crossover, input.weights()[1]))
}

/// `I(X;Y|Z)` with `P(X=1) = p1`; `H(XZ) + H(YZ) - H(XYZ) - H(Z)`.
pub(crate) fn cmi_unchecked<T: Real>(main: T, eve: T, p1: T) -> T {
    let px = [T::one() - p1, p1];
    let ch = |e: T, x: usize, o: usize| if x == o { T::one() - e } else { e };
    let mut xyz = [T::zero(); 8];
    let mut xz = [T::zero(); 4];
    let mut yz = [T::zero(); 4];
    let mut z = [T::zero(); 2];
    for x in 0..2 {
        for y in 0..2 {
            for zz in 0..2 {
                let v = px[x] * ch(main, x, y) * ch(eve, x, zz);
                xyz[x * 4 + y * 2 + zz] = v;
                xz[x * 2 + zz] += v;
                yz[y * 2 + zz] += v;
                z[zz] += v;
            }
        }
    }
    let v = entropy_of(xz) + entropy_of(yz) - entropy_of(xyz) - entropy_of(z);
    v.max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::h;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn transmit_edge_cases() {
        let w = vec![false, true, false, true];
        assert_eq!(transmit(&Bsc::new(0.0).unwrap(), &w, 3), w);
        assert_eq!(transmit(&Bsc::new(1.0).unwrap(), &w, 3), vec![true, false, true, false]);
    }

    #[test]
    fn transmit_flip_fraction() {
        let n = 1_000_000usize;
        let out = transmit(&Bsc::new(0.1).unwrap(), &vec![false; n], 11);
        let flips = out.iter().filter(|&&b| b).count() as f64;
        let sigma = (n as f64 * 0.1 * 0.9).sqrt();
        assert!((flips - 0.1 * n as f64).abs() < 3.0 * sigma);
        assert_eq!(out, transmit(&Bsc::new(0.1).unwrap(), &vec![false; n], 11));
    }

    #[test]
    fn transmit_is_pool_independent() {
        let w = vec![true; 100_000];
        let c = Bsc::new(0.3).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| transmit(&c, &w, 5));
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| transmit(&c, &w, 5));
        assert_eq!(one, four);
    }

    #[test]
    fn compose_examples() {
        let a = Bsc::new(0.1).unwrap();
        let b = Bsc::new(0.2).unwrap();
        assert_abs_diff_eq!(compose(&a, &b).crossover(), 0.26, epsilon = 1e-15);
        assert_eq!(compose(&a, &Bsc::new(0.0).unwrap()), a);
        assert_abs_diff_eq!(compose(&Bsc::new(0.5).unwrap(), &b).crossover(), 0.5, epsilon = 1e-15);
        let n = 1_000_000u64;
        let flips = serial_flips(&[a, b], n, 2) as f64;
        let sigma = (n as f64 * 0.26 * 0.74).sqrt();
        assert!((flips - 0.26 * n as f64).abs() < 3.0 * sigma);
    }

    #[test]
    fn forward_conceptual_examples() {
        let m = BroadcastModel::new(0.1, 0.05, 0.25).unwrap();
        assert_abs_diff_eq!(forward_conceptual(&m).crossover(), 0.275, epsilon = 1e-15);
        let m = BroadcastModel::new(0.1, 0.05, 0.0).unwrap();
        assert_eq!(forward_conceptual(&m), m.eve);
        let m = BroadcastModel::new(0.1, 0.5, 0.3).unwrap();
        assert_abs_diff_eq!(forward_conceptual(&m).crossover(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn backward_conceptual_pairs() {
        let b = backward_conceptual(0.1, 0.2, 0.05).unwrap();
        assert_abs_diff_eq!(b.alice_eve, 0.14, epsilon = 1e-15);
        assert_abs_diff_eq!(b.bob_eve, 0.23, epsilon = 1e-15);
        assert_abs_diff_eq!(b.alice_bob, 0.26, epsilon = 1e-15);
    }

    #[test]
    fn conditional_mi_examples() {
        let u = Dist::uniform(2);
        let m = BroadcastModel::new(0.1, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(conditional_mi_given_z(&m, &u).unwrap(), 0.0, epsilon = 1e-15);
        let m = BroadcastModel::new(0.5, 0.2, 0.0).unwrap();
        assert_abs_diff_eq!(conditional_mi_given_z(&m, &u).unwrap(), 0.0, epsilon = 1e-15);
        let m = BroadcastModel::new(0.1, 0.2, 0.0).unwrap();
        assert_abs_diff_eq!(conditional_mi_given_z(&m, &u).unwrap(), 0.35775077890333667, epsilon = 1e-14);
        assert!(conditional_mi_given_z(&m, &Dist::uniform(3)).is_err());
    }

    #[test]
    fn conditional_mi_matches_cascade_formula_on_grid() {
        let u = Dist::uniform(2);
        for i in 0..50 {
            for j in 0..50 {
                let (e, d) = (0.5 * i as f64 / 49.0, 0.5 * j as f64 / 49.0);
                let m = BroadcastModel::new(e, d, 0.0).unwrap();
                let v = conditional_mi_given_z(&m, &u).unwrap();
                assert!((v - (h(casc(e, d)) - h(e))).abs() <= 1e-10, "({e}, {d})");
            }
        }
    }

    #[test]
    fn dmc_json_round_trip() {
        let d = Dmc::<f64>::from_json_str(r#"{"inputs":2,"outputs":3,"rows":[[0.5,0.25,0.25],[0,0,1]]}"#).unwrap();
        assert_eq!(d.outputs(), 3);
        let back = Dmc::<f64>::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert!(Dmc::<f64>::from_json_str(r#"{"inputs":1,"outputs":2,"rows":[[0.5,0.6]]}"#).is_err());
        assert!(Dmc::<f64>::from_json_str(r#"{"inputs":2,"outputs":2,"rows":[[0.5,0.5]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn compose_commutative_associative(a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0) {
            let (a, b, c) = (Bsc::new(a).unwrap(), Bsc::new(b).unwrap(), Bsc::new(c).unwrap());
            prop_assert!((compose(&a, &b).crossover() - compose(&b, &a).crossover()).abs() <= 1e-14);
            let l = compose(&a, &compose(&b, &c)).crossover();
            let r = compose(&compose(&a, &b), &c).crossover();
            prop_assert!((l - r).abs() <= 1e-14);
        }

        #[test]
        fn conditional_mi_matches_dense_table(e in 0.0f64..=1.0, d in 0.0f64..=1.0, p in 0.0f64..=1.0) {
            // H(X|Z) - H(X|YZ) computed from the (xz) and (xyz) tables as joint laws.
            let m = BroadcastModel::new(e, d, 0.0).unwrap();
            let v = conditional_mi_given_z(&m, &Dist::bernoulli(p).unwrap()).unwrap();
            let px = [1.0 - p, p];
            let f = |c: f64, a: usize, b: usize| if a == b { 1.0 - c } else { c };
            let xz = JointDist::from_rows(&(0..2).map(|x| (0..2).map(|z| px[x] * f(d, x, z)).collect()).collect::<Vec<_>>()).unwrap();
            let xyz = JointDist::from_rows(&(0..2).map(|x| (0..4).map(|yz| px[x] * f(e, x, yz / 2) * f(d, x, yz % 2)).collect()).collect::<Vec<_>>()).unwrap();
            let hx_given_z = xz.joint_entropy() - entropy_of(xz.marginal_y());
            let hx_given_yz = xyz.joint_entropy() - entropy_of(xyz.marginal_y());
            prop_assert!((v - (hx_given_z - hx_given_yz).max(0.0)).abs() < 1e-12);
        }
    }
}
