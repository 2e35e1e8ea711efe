//! Classical-quantum polar transform on binary-input channels.
//!
//! Output states keep the classical registers introduced by `W⁺` as a
//! block-diagonal list of unnormalised quantum blocks, one per register
//! value. Entropies are sums over blocks, which is exact.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, domain, Error, Result};
use crate::holevo::CqChannel;
use crate::num::{lit, neg_xlog2x, CMat, Real};
use crate::qstate::{singular_values, KrausChannel};

/// Deepest recursion computed exactly (8 synthesized channels).
pub const MAX_DEPTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    fn symbol(self) -> char {
        match self {
            Branch::Minus => '-',
            Branch::Plus => '+',
        }
    }
}

#[derive(Debug, Clone)]
struct BlockState<T: Real> {
    /// Empty when only the spectrum was kept.
    blocks: Vec<CMat<T>>,
    spectrum: Vec<T>,
}

/// A synthesized channel `u ↦ ρ_u` for `u ∈ {0, 1}`.
#[derive(Debug, Clone)]
pub struct SynthesizedChannel<T: Real> {
    states: [BlockState<T>; 2],
    avg_spectrum: Vec<T>,
    registers: usize,
    depth: usize,
    path: String,
}

/// Entropy of an unnormalised spectrum; no small-eigenvalue cut-off so that
/// many tiny product eigenvalues are not dropped.
fn entropy<T: Real>(spectrum: &[T]) -> T {
    spectrum.iter().fold(T::zero(), |a, &l| a + neg_xlog2x(l))
}

fn block_spectrum<T: Real>(m: &CMat<T>) -> Vec<T> {
    if m.iter().all(|z| z.re == T::zero() && z.im == T::zero()) {
        return Vec::new();
    }
    // Blocks are PSD, so singular values are the eigenvalues; the SVD stays
    // accurate on the highly degenerate Kronecker blocks where the symmetric
    // eigensolver does not. Rank-deficient blocks still leave a cloud of
    // roundoff values that would each add about -x log x, so zero everything
    // below dim * eps * max.
    let mut ev = singular_values(m);
    let top = ev.iter().fold(T::zero(), |a, &l| a.max(l));
    let cut = top * lit::<T>(m.nrows() as f64) * T::default_epsilon();
    for l in ev.iter_mut() {
        if *l <= cut {
            *l = T::zero();
        }
    }
    ev
}

fn outer<T: Real>(a: &[T], b: &[T], scale: T) -> Vec<T> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| scale * x * y)).collect()
}

impl<T: Real> SynthesizedChannel<T> {
    pub fn from_cq(base: &CqChannel<T>) -> Result<Self> {
        if base.states().len() != 2 {
            return Err(domain(format!("polar transform needs a binary input alphabet, got {}", base.states().len())));
        }
        let mk = |i: usize| BlockState { blocks: vec![base.states()[i].matrix().clone()], spectrum: base.states()[i].spectrum().to_vec() };
        let avg = (base.states()[0].matrix() + base.states()[1].matrix()).scale(lit(0.5));
        Ok(Self { states: [mk(0), mk(1)], avg_spectrum: block_spectrum(&avg), registers: 0, depth: 0, path: String::new() })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn classical_registers(&self) -> usize {
        self.registers
    }

    /// Side of each quantum block.
    pub fn quantum_dim(&self) -> usize {
        self.states[0].blocks.first().map_or(0, |b| b.nrows())
    }

    /// Holevo information under the uniform input prior.
    pub fn chi(&self) -> T {
        let half: T = lit(0.5);
        let v = entropy(&self.avg_spectrum) - half * (entropy(&self.states[0].spectrum) + entropy(&self.states[1].spectrum));
        v.max(T::zero())
    }

    fn check_splittable(&self) -> Result<()> {
        if self.depth >= MAX_DEPTH {
            return Err(depth_error(self.depth + 1, self.quantum_dim()));
        }
        Ok(())
    }

    fn split(&self, branch: Branch, keep_blocks: bool) -> Self {
        let r = 1usize << self.registers;
        let a = [&self.states[0].blocks, &self.states[1].blocks];
        let half: T = lit(0.5);
        let quarter: T = lit(0.25);
        let (states, avg_spectrum, registers) = match branch {
            Branch::Minus => {
                let make = |u1: usize| {
                    let mut blocks = Vec::new();
                    let mut spectrum = Vec::new();
                    for i in 0..r {
                        for j in 0..r {
                            let b = (a[u1][i].kronecker(&a[0][j]) + a[u1 ^ 1][i].kronecker(&a[1][j])).scale(half);
                            spectrum.extend(block_spectrum(&b));
                            if keep_blocks {
                                blocks.push(b);
                            }
                        }
                    }
                    BlockState { blocks, spectrum }
                };
                let (s0, s1) = rayon::join(|| make(0), || make(1));
                // The input-averaged state is ρ̄ ⊗ ρ̄.
                ([s0, s1], outer(&self.avg_spectrum, &self.avg_spectrum, T::one()), 2 * self.registers)
            }
            Branch::Plus => {
                let both: Vec<T> = self.states[0].spectrum.iter().chain(&self.states[1].spectrum).copied().collect();
                let make = |u2: usize| {
                    let mut blocks = Vec::new();
                    if keep_blocks {
                        for u1 in 0..2 {
                            for i in 0..r {
                                for j in 0..r {
                                    blocks.push(a[u1 ^ u2][i].kronecker(&a[u2][j]).scale(half));
                                }
                            }
                        }
                    }
                    BlockState { blocks, spectrum: outer(&both, &self.states[u2].spectrum, half) }
                };
                let avg: Vec<T> = (0..2 * r * r)
                    .into_par_iter()
                    .flat_map_iter(|k| {
                        let (u1, i, j) = (k / (r * r), (k / r) % r, k % r);
                        let b = (a[u1][i].kronecker(&a[0][j]) + a[u1 ^ 1][i].kronecker(&a[1][j])).scale(quarter);
                        block_spectrum(&b)
                    })
                    .collect();
                ([make(0), make(1)], avg, 2 * self.registers + 1)
            }
        };
        let mut path = self.path.clone();
        path.push(branch.symbol());
        Self { states, avg_spectrum, registers, depth: self.depth + 1, path }
    }

    /// `χ` of a child without materialising its blocks.
    fn child_chi(&self, branch: Branch) -> T {
        self.split(branch, false).chi()
    }
}

fn depth_error(depth: usize, qdim: usize) -> Error {
    let base = if qdim == 0 { 2 } else { qdim };
    Error::Capability(format!(
        "depth {depth} exceeds the exact-computation cap of {MAX_DEPTH}: quantum blocks would grow to {base}^{} dimensions",
        1usize << (depth.saturating_sub(1).min(6))
    ))
}

/// `W⁻ : u1 ↦ ½ Σ_{u2} ρ_{u1⊕u2} ⊗ ρ_{u2}`.
pub fn split_minus<T: Real>(w: &SynthesizedChannel<T>) -> Result<SynthesizedChannel<T>> {
    w.check_splittable()?;
    Ok(w.split(Branch::Minus, true))
}

/// `W⁺ : u2 ↦ ½ Σ_{u1} |u1⟩⟨u1| ⊗ ρ_{u1⊕u2} ⊗ ρ_{u2}`.
pub fn split_plus<T: Real>(w: &SynthesizedChannel<T>) -> Result<SynthesizedChannel<T>> {
    w.check_splittable()?;
    Ok(w.split(Branch::Plus, true))
}

/// `|(χ(W⁺) + χ(W⁻))/2 - χ(W)|`.
pub fn conservation_residual<T: Real>(w: &SynthesizedChannel<T>) -> Result<T> {
    w.check_splittable()?;
    let (m, p) = rayon::join(|| w.child_chi(Branch::Minus), || w.child_chi(Branch::Plus));
    Ok(((m + p) * lit(0.5) - w.chi()).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarEntry<T: Real> {
    pub index: usize,
    pub path: String,
    pub chi: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polarization<T: Real> {
    pub depth: usize,
    /// Synthesized channels in path order, first split as the most
    /// significant index bit, `-` as 0.
    pub entries: Vec<PolarEntry<T>>,
    /// Largest conservation residual over every split in the tree.
    pub max_conservation_residual: T,
}

impl<T: Real> Polarization<T> {
    pub fn chis(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.chi).collect()
    }
}

fn recurse<T: Real>(node: &SynthesizedChannel<T>, remaining: usize) -> (Vec<(String, T)>, T) {
    let parent = node.chi();
    if remaining == 1 {
        let (m, p) = rayon::join(|| node.child_chi(Branch::Minus), || node.child_chi(Branch::Plus));
        let res = ((m + p) * lit(0.5) - parent).abs();
        let mut pm = node.path.clone();
        pm.push('-');
        let mut pp = node.path.clone();
        pp.push('+');
        return (vec![(pm, m), (pp, p)], res);
    }
    let ((lm, rm, cm), (lp, rp, cp)) = rayon::join(
        || {
            let c = node.split(Branch::Minus, true);
            let chi = c.chi();
            let (l, r) = recurse(&c, remaining - 1);
            (l, r, chi)
        },
        || {
            let c = node.split(Branch::Plus, true);
            let chi = c.chi();
            let (l, r) = recurse(&c, remaining - 1);
            (l, r, chi)
        },
    );
    let res = ((cm + cp) * lit(0.5) - parent).abs();
    let mut leaves = lm;
    leaves.extend(lp);
    (leaves, res.max(rm).max(rp))
}

/// All `2^depth` synthesized channels with exact `χ`.
pub fn polarize<T: Real>(w: &SynthesizedChannel<T>, depth: usize) -> Result<Polarization<T>> {
    if depth == 0 {
        return Err(domain("polarization depth must be at least 1"));
    }
    if w.depth + depth > MAX_DEPTH {
        return Err(depth_error(w.depth + depth, w.quantum_dim()));
    }
    let (leaves, res) = recurse(w, depth);
    let entries = leaves.into_iter().enumerate().map(|(index, (path, chi))| PolarEntry { index, path, chi }).collect();
    Ok(Polarization { depth, entries, max_conservation_residual: res })
}

/// Polarizes Bob's channel and Eve's degraded copy `x ↦ ℰ(ρ_x)`.
pub fn polarize_pair<T: Real>(bob: &CqChannel<T>, eve_map: &KrausChannel<T>, depth: usize) -> Result<(Polarization<T>, Polarization<T>)> {
    check_dim(bob.dim(), eve_map.input_dim())?;
    let eve = bob.map(eve_map)?;
    let b = SynthesizedChannel::from_cq(bob)?;
    let e = SynthesizedChannel::from_cq(&eve)?;
    let (pb, pe) = rayon::join(|| polarize(&b, depth), || polarize(&e, depth));
    Ok((pb?, pe?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSet {
    pub indices: Vec<usize>,
    pub size: usize,
    pub rate: f64,
}

/// `{i : χ_B,i ≥ 1 - θ and χ_E,i ≤ θ}` with rate `|I| / 2^depth`.
pub fn secure_index_set<T: Real>(bob: &[PolarEntry<T>], eve: &[PolarEntry<T>], theta: T) -> Result<IndexSet> {
    check_dim(bob.len(), eve.len())?;
    if !(theta > T::zero() && theta < lit(0.5)) {
        return Err(domain(format!("theta = {} must lie in (0, 1/2)", theta.to_f64())));
    }
    if bob.is_empty() || !bob.len().is_power_of_two() {
        return Err(domain("index lists must have a power-of-two length"));
    }
    let indices: Vec<usize> = bob
        .iter()
        .zip(eve)
        .filter(|(b, e)| b.chi >= T::one() - theta && e.chi <= theta)
        .map(|(b, _)| b.index)
        .collect();
    let rate = indices.len() as f64 / bob.len() as f64;
    Ok(IndexSet { size: indices.len(), indices, rate })
}

/// Unbiased sample variance.
pub fn sample_variance<T: Real>(xs: &[T]) -> T {
    let n: T = lit(xs.len() as f64);
    let mean = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    xs.iter().fold(T::zero(), |a, &x| a + (x - mean) * (x - mean)) / (n - T::one())
}
