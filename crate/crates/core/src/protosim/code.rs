//! Seeded binary linear coset codes with an exact bounded-distance decoder.

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::rng::stream;

/// Stream id reserved for code construction; trials use their index.
pub(crate) const CODE_STREAM: u64 = u64::MAX;

pub const MAX_N: usize = 128;
pub const MAX_K: usize = 63;
/// Candidate codewords a single decode may visit.
pub const MAX_DECODE_WORK: u64 = 5_000_000;

/// Code `{mG ⊕ v}` with `G = [I | A_2 | … | A_s | R]`: `s = ⌊n/k⌋` disjoint
/// information sets, each `A_j` invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    rows: Vec<u128>,
    offset: u128,
    /// Per information set: `(row i of A_j⁻¹, (row i of A_j⁻¹)·G)`.
    deltas: Vec<Vec<(u64, u128)>>,
    inverses: Vec<Vec<u64>>,
}

fn mask64(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn mask128(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Inverse over GF(2) of a `k×k` matrix given as bit rows, if it exists.
fn gf2_inverse(rows: &[u64], k: usize) -> Option<Vec<u64>> {
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..k).map(|i| 1u64 << i).collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| a[r] >> col & 1 == 1)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..k {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

fn xor_rows(rows: &[u64], v: u64) -> u64 {
    let mut acc = 0;
    let mut bits = v;
    while bits != 0 {
        acc ^= rows[bits.trailing_zeros() as usize];
        bits &= bits - 1;
    }
    acc
}

fn binom_prefix(k: usize, w: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for i in 0..=w.min(k) {
        total = total.saturating_add(c);
        c = c.saturating_mul((k - i) as u64) / (i as u64 + 1);
    }
    total
}

/// Running nearest candidate. `bound` is the distance a new candidate must
/// beat and `cap` the largest pattern weight that can still produce one.
struct Best {
    hit: Option<Decoded>,
    bound: u32,
    cap: usize,
    sets: usize,
}

impl Best {
    #[inline]
    fn offer(&mut self, message: u64, distance: u32) {
        if distance < self.bound {
            self.hit = Some(Decoded { message, distance });
            self.bound = distance;
            self.cap = self.cap.min((distance as usize).saturating_sub(1) / self.sets);
            if distance == 0 {
                self.cap = 0;
            }
        }
    }
}

/// Depth-first walk over patterns `from.. ` of weight `used + 1 ..= cap`.
fn search(d: &[(u64, u128)], from: usize, used: usize, m: u64, diff: u128, best: &mut Best) {
    if used >= best.cap {
        return;
    }
    if used + 1 == best.cap {
        for &(dm, dc) in &d[from..] {
            let dist = (diff ^ dc).count_ones();
            if dist < best.bound {
                best.offer(m ^ dm, dist);
                if used >= best.cap {
                    return;
                }
            }
        }
        return;
    }
    for (i, &(dm, dc)) in d.iter().enumerate().skip(from) {
        let nd = diff ^ dc;
        best.offer(m ^ dm, nd.count_ones());
        if used >= best.cap {
            return;
        }
        search(d, i + 1, used + 1, m ^ dm, nd, best);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decoded {
    pub message: u64,
    pub distance: u32,
}

impl LinearCode {
    /// `k = round(rate·n)` message bits; deterministic per `(n, rate, seed)`.
    pub fn build(n: usize, rate: f64, seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(domain(format!("rate = {rate} must lie in (0, 1)")));
        }
        if n < 2 || n > MAX_N {
            return Err(domain(format!("block length n = {n} must lie in [2, {MAX_N}]")));
        }
        let k = (rate * n as f64).round() as usize;
        if k < 1 || k >= n {
            return Err(domain(format!("round(rate·n) = {k} must satisfy 1 ≤ k < n = {n}")));
        }
        if k > MAX_K {
            return Err(Error::Capability(format!("k = {k} message bits exceeds the supported {MAX_K}")));
        }
        let mut rng = stream(seed, CODE_STREAM);
        let s = n / k;
        let mut rows: Vec<u128> = (0..k).map(|i| 1u128 << i).collect();
        let mut inverses = vec![(0..k).map(|i| 1u64 << i).collect::<Vec<u64>>()];
        for j in 1..s {
            let (a, inv) = loop {
                let a: Vec<u64> = (0..k).map(|_| rng.random::<u64>() & mask64(k)).collect();
                if let Some(inv) = gf2_inverse(&a, k) {
                    break (a, inv);
                }
            };
            for (row, &bits) in rows.iter_mut().zip(&a) {
                *row |= (bits as u128) << (j * k);
            }
            inverses.push(inv);
        }
        let tail = n - s * k;
        if tail > 0 {
            for row in rows.iter_mut() {
                *row |= (rng.random::<u128>() & mask128(tail)) << (s * k);
            }
        }
        let offset = rng.random::<u128>() & mask128(n);
        let mut code = Self { n, k, rows, offset, deltas: Vec::new(), inverses };
        code.deltas = code.inverses.iter().map(|inv| inv.iter().map(|&m| (m, code.encode_linear(m))).collect()).collect();
        Ok(code)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn message_count(&self) -> u64 {
        1u64 << self.k
    }

    /// Number of disjoint information sets.
    pub fn info_sets(&self) -> usize {
        self.inverses.len()
    }

    /// Generator rows, bit `i` of a row being codeword position `i`.
    pub fn generator(&self) -> &[u128] {
        &self.rows
    }

    pub fn offset(&self) -> u128 {
        self.offset
    }

    fn encode_linear(&self, m: u64) -> u128 {
        let mut acc = 0u128;
        let mut bits = m;
        while bits != 0 {
            acc ^= self.rows[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        acc
    }

    pub fn encode(&self, m: u64) -> u128 {
        self.encode_linear(m & mask64(self.k)) ^ self.offset
    }

    /// Candidate codewords visited per decode at radius `t` (worst case).
    pub fn decode_work(&self, t: usize) -> u64 {
        binom_prefix(self.k, t / self.info_sets()).saturating_mul(self.info_sets() as u64)
    }

    pub fn check_radius(&self, t: usize) -> Result<()> {
        let work = self.decode_work(t);
        if work > MAX_DECODE_WORK {
            return Err(Error::Capability(format!(
                "exact decoding at radius {t} with k = {} and {} information set(s) visits {work} candidates (limit {MAX_DECODE_WORK})",
                self.k,
                self.info_sets()
            )));
        }
        Ok(())
    }

    /// Nearest codeword within Hamming radius `t`, ties going to the first
    /// candidate found. Any codeword at distance `d ≤ t` differs from `y`
    /// in at most `⌊d/s⌋` positions of some information set, so enumerating
    /// those patterns is exhaustive.
    pub fn decode(&self, y: u128, t: usize) -> Option<Decoded> {
        let y = (y ^ self.offset) & mask128(self.n);
        let mut best = Best { hit: None, bound: t as u32 + 1, cap: t / self.info_sets(), sets: self.info_sets() };
        for j in 0..self.info_sets() {
            let yj = ((y >> (j * self.k)) as u64) & mask64(self.k);
            let m0 = xor_rows(&self.inverses[j], yj);
            let diff = self.encode_linear(m0) ^ y;
            best.offer(m0, diff.count_ones());
            if best.bound == 0 {
                break;
            }
            search(&self.deltas[j], 0, 0, m0, diff, &mut best);
        }
        best.hit
    }

    /// Smallest pairwise distance, by enumerating every non-zero message.
    pub fn min_distance(&self) -> u32 {
        (1..self.message_count()).map(|m| self.encode_linear(m).count_ones()).min().unwrap_or(0)
    }
}
