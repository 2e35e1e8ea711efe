//! XOR games: quantum bias, win probability and the classical optimum by
//! enumeration, for two and three players.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, domain, invalid, Error, Result};
use crate::num::{cplx, lit, CMat, Real};
use crate::qstate::{ginibre, hermitian_eigen};

/// Largest `|S|·|T|` accepted by [`classical_optimum`].
pub const MAX_CLASSICAL_QUESTIONS: usize = 24;
/// Slack on the upper side of the ε-optimality sandwich.
pub const EPS_CHECK_TOL: f64 = 1e-9;

fn check_weights<T: Real>(entries: &[T]) -> Result<()> {
    if entries.iter().any(|v| !v.is_finite()) {
        return Err(invalid("game entries must be finite"));
    }
    let total = entries.iter().fold(T::zero(), |a, v| a + v.abs());
    if (total - T::one()).abs() > lit(T::SUM_TOL) {
        return Err(invalid(format!("sum of |G| is {}, expected 1", total.to_f64())));
    }
    Ok(())
}

/// Two-player game table `G_st = V(s,t) π(s,t)`, normalised so `Σ|G_st| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct XorGame<T: Real> {
    g: DMatrix<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XorGameJson {
    pub s: usize,
    pub t: usize,
    pub entries: Vec<Vec<f64>>,
}

impl<T: Real> XorGame<T> {
    pub fn new(g: DMatrix<T>) -> Result<Self> {
        if g.is_empty() {
            return Err(invalid("game table is empty"));
        }
        check_weights(g.as_slice())?;
        Ok(Self { g })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let t = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != t) {
            return Err(invalid("game rows have unequal length"));
        }
        Self::new(DMatrix::from_fn(rows.len(), t, |i, j| rows[i][j]))
    }

    /// `¼ [[1, 1], [1, -1]]`: win iff `a ⊕ b = s ∧ t`, uniform questions.
    pub fn chsh() -> Self {
        let q: T = lit(0.25);
        Self { g: DMatrix::from_row_slice(2, 2, &[q, q, q, -q]) }
    }

    /// Every answer pair wins, uniform over `s × t` questions.
    pub fn trivial(s: usize, t: usize) -> Self {
        Self { g: DMatrix::from_element(s, t, lit(1.0 / (s * t) as f64)) }
    }

    pub fn questions(&self) -> (usize, usize) {
        self.g.shape()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.g
    }

    pub fn to_json(&self) -> XorGameJson {
        let (s, t) = self.questions();
        XorGameJson { s, t, entries: (0..s).map(|i| (0..t).map(|j| self.g[(i, j)].to_f64()).collect()).collect() }
    }

    pub fn from_json(j: &XorGameJson) -> Result<Self> {
        check_dim(j.s, j.entries.len())?;
        for row in &j.entries {
            check_dim(j.t, row.len())?;
        }
        let rows: Vec<Vec<T>> = j.entries.iter().map(|r| r.iter().map(|&v| lit(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: XorGameJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

fn check_observable<T: Real>(o: &CMat<T>, d: usize, who: &str) -> Result<()> {
    check_dim(d, o.nrows())?;
    check_dim(d, o.ncols())?;
    let tol: T = lit(T::HERMITIAN_TOL);
    if (o - o.adjoint()).iter().any(|z| z.norm_sqr().sqrt() > tol) {
        return Err(invalid(format!("{who} observable is not Hermitian")));
    }
    let sq = o * o - CMat::<T>::identity(d, d);
    if sq.iter().any(|z| z.norm_sqr().sqrt() > tol) {
        return Err(invalid(format!("{who} observable does not square to the identity (spectrum outside {{-1, +1}})")));
    }
    Ok(())
}

fn check_state<T: Real>(psi: &DVector<Complex<T>>, d: usize) -> Result<()> {
    check_dim(d, psi.len())?;
    let norm = psi.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
    if (norm - T::one()).abs() > lit(T::SUM_TOL) {
        return Err(invalid(format!("state norm is {}, expected 1", norm.to_f64())));
    }
    Ok(())
}

/// Shared state plus one ±1-valued observable per question and player.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumStrategy<T: Real> {
    state: DVector<Complex<T>>,
    a: Vec<CMat<T>>,
    b: Vec<CMat<T>>,
}

impl<T: Real> QuantumStrategy<T> {
    pub fn new(state: DVector<Complex<T>>, a: Vec<CMat<T>>, b: Vec<CMat<T>>) -> Result<Self> {
        let (da, db) = (a.first().map_or(0, |o| o.nrows()), b.first().map_or(0, |o| o.nrows()));
        if da == 0 || db == 0 {
            return Err(invalid("each player needs at least one observable"));
        }
        check_state(&state, da * db)?;
        for o in &a {
            check_observable(o, da, "Alice")?;
        }
        for o in &b {
            check_observable(o, db, "Bob")?;
        }
        Ok(Self { state, a, b })
    }

    /// Singlet with `A = (Z, X)` and `B_t = -(cos 2φ Z + sin 2φ X)`, `φ = ±π/8`.
    pub fn tsirelson() -> Self {
        let h: T = lit(std::f64::consts::FRAC_1_SQRT_2);
        let state = DVector::from_vec(vec![cplx(T::zero()), cplx(h), cplx(-h), cplx(T::zero())]);
        let (z, x) = (pauli_z::<T>(), pauli_x::<T>());
        let b = |phi: f64| {
            let (s, c) = (2.0 * phi).sin_cos();
            -(z.scale(lit(c)) + x.scale(lit(s)))
        };
        let eighth = std::f64::consts::FRAC_PI_8;
        Self { state, a: vec![z.clone(), x.clone()], b: vec![b(eighth), b(-eighth)] }
    }

    /// `|00⟩` with identity observables: every pair answers `+1`.
    pub fn all_plus(s: usize, t: usize) -> Self {
        let mut state = DVector::zeros(1);
        state[0] = cplx(T::one());
        let id = CMat::<T>::identity(1, 1);
        Self { state, a: vec![id.clone(); s], b: vec![id; t] }
    }

    /// Haar-like random state on `C^da ⊗ C^db` and random ±1 observables.
    pub fn random<R: Rng + ?Sized>(s: usize, t: usize, da: usize, db: usize, rng: &mut R) -> Self {
        let g = ginibre::<T, R>(da * db, 1, rng);
        let norm = g.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        let state = g.column(0).unscale(norm);
        let a = (0..s).map(|_| random_observable(da, rng)).collect();
        let b = (0..t).map(|_| random_observable(db, rng)).collect();
        Self { state, a, b }
    }

    pub fn negate_alice(&self, s: usize) -> Self {
        let mut out = self.clone();
        out.a[s] = -out.a[s].clone();
        out
    }

    pub fn questions(&self) -> (usize, usize) {
        (self.a.len(), self.b.len())
    }
}

pub(crate) fn pauli_z<T: Real>() -> CMat<T> {
    CMat::from_diagonal(&DVector::from_vec(vec![cplx(T::one()), cplx(-T::one())]))
}

pub(crate) fn pauli_x<T: Real>() -> CMat<T> {
    let (o, l) = (cplx(T::zero()), cplx(T::one()));
    CMat::from_row_slice(2, 2, &[o, l, l, o])
}

pub(crate) fn pauli_y<T: Real>() -> CMat<T> {
    let (o, i) = (cplx(T::zero()), Complex::new(T::zero(), T::one()));
    CMat::from_row_slice(2, 2, &[o, -i, i, o])
}

/// `V diag(±1) V†` from the eigenbasis of a random Hermitian matrix.
pub fn random_observable<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat<T> {
    let g = ginibre::<T, R>(d, d, rng);
    let (ev, v) = hermitian_eigen(&(&g + g.adjoint()));
    let signs = DVector::from_iterator(d, ev.iter().map(|&l| cplx(if l >= T::zero() { T::one() } else { -T::one() })));
    &v * CMat::from_diagonal(&signs) * v.adjoint()
}

fn expectation<T: Real>(psi: &DVector<Complex<T>>, op: &CMat<T>) -> T {
    (psi.adjoint() * op * psi)[(0, 0)].re
}

/// `β(G, S) = Σ_st G_st ⟨ψ| A_s ⊗ B_t |ψ⟩`.
pub fn bias<T: Real>(g: &XorGame<T>, s: &QuantumStrategy<T>) -> Result<T> {
    let (ns, nt) = g.questions();
    check_dim(ns, s.a.len())?;
    check_dim(nt, s.b.len())?;
    let mut total = T::zero();
    for (i, a) in s.a.iter().enumerate() {
        for (j, b) in s.b.iter().enumerate() {
            let w = g.g[(i, j)];
            if w != T::zero() {
                total += w * expectation(&s.state, &a.kronecker(b));
            }
        }
    }
    Ok(total)
}

/// `ω = (β + 1)/2`.
pub fn win_probability<T: Real>(beta: T) -> Result<T> {
    if !(beta >= -T::one() && beta <= T::one()) {
        return Err(domain(format!("bias {} must lie in [-1, 1]", beta.to_f64())));
    }
    Ok((beta + T::one()) * lit(0.5))
}

/// `max Σ G_st a_s b_t` over deterministic ±1 answers: every `a`, with Bob's
/// best response `b_t = sign(Σ_s G_st a_s)`.
pub fn classical_optimum<T: Real>(g: &XorGame<T>) -> Result<T> {
    let (ns, nt) = g.questions();
    if ns * nt > MAX_CLASSICAL_QUESTIONS {
        return Err(Error::Capability(format!(
            "|S|·|T| = {} exceeds the enumeration bound {MAX_CLASSICAL_QUESTIONS}",
            ns * nt
        )));
    }
    let m = if ns <= nt { g.g.clone() } else { g.g.transpose() };
    let (rows, cols) = m.shape();
    let best = (0u64..1 << rows)
        .into_par_iter()
        .map(|bits| {
            (0..cols).fold(T::zero(), |acc, j| {
                let col = (0..rows).fold(T::zero(), |c, i| if bits >> i & 1 == 1 { c - m[(i, j)] } else { c + m[(i, j)] });
                acc + col.abs()
            })
        })
        .reduce(|| T::zero(), |a, b| a.max(b));
    Ok(best)
}

/// `(1 - ε) β* ≤ β(G, S) ≤ β* + 1e-9`.
pub fn epsilon_optimality_check<T: Real>(g: &XorGame<T>, s: &QuantumStrategy<T>, beta_star: T, eps: T) -> Result<bool> {
    if !(beta_star > T::zero()) {
        return Err(domain(format!("beta_star = {} must be positive", beta_star.to_f64())));
    }
    let b = bias(g, s)?;
    Ok((T::one() - eps) * beta_star <= b && b <= beta_star + lit(EPS_CHECK_TOL))
}

/// Three-player table `G_stu`, stored with `u` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct XorGame3<T: Real> {
    dims: (usize, usize, usize),
    g: Vec<T>,
}

impl<T: Real> XorGame3<T> {
    pub fn new(dims: (usize, usize, usize), g: Vec<T>) -> Result<Self> {
        check_dim(dims.0 * dims.1 * dims.2, g.len())?;
        if g.is_empty() {
            return Err(invalid("game table is empty"));
        }
        check_weights(&g)?;
        Ok(Self { dims, g })
    }

    /// Random signed table normalised to `Σ|G| = 1`.
    pub fn random<R: Rng + ?Sized>(dims: (usize, usize, usize), rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..dims.0 * dims.1 * dims.2).map(|_| rng.random_range(-1.0..1.0)).collect();
        let total: f64 = raw.iter().map(|v| v.abs()).sum();
        Self { dims, g: raw.iter().map(|v| lit(v / total)).collect() }
    }

    /// `G ⊗ (1)`: a two-player game with a third player asked one trivial question.
    pub fn extend(two: &XorGame<T>) -> Self {
        let (s, t) = two.questions();
        Self { dims: (s, t, 1), g: (0..s).flat_map(|i| (0..t).map(move |j| two.g[(i, j)])).collect() }
    }

    pub fn get(&self, s: usize, t: usize, u: usize) -> T {
        self.g[(s * self.dims.1 + t) * self.dims.2 + u]
    }

    pub fn questions(&self) -> (usize, usize, usize) {
        self.dims
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumStrategy3<T: Real> {
    state: DVector<Complex<T>>,
    players: [Vec<CMat<T>>; 3],
}

impl<T: Real> QuantumStrategy3<T> {
    pub fn new(state: DVector<Complex<T>>, players: [Vec<CMat<T>>; 3]) -> Result<Self> {
        let dims: Vec<usize> = players.iter().map(|p| p.first().map_or(0, |o| o.nrows())).collect();
        if dims.contains(&0) {
            return Err(invalid("each player needs at least one observable"));
        }
        check_state(&state, dims.iter().product())?;
        for (p, who) in players.iter().zip(["Alice", "Bob", "Cleo"]) {
            for o in p {
                check_observable(o, p[0].nrows(), who)?;
            }
        }
        Ok(Self { state, players })
    }

    /// `(|000⟩ + |111⟩)/√2`, each player measuring `X` or `Y`.
    pub fn ghz_xy() -> Self {
        let h: T = lit(std::f64::consts::FRAC_1_SQRT_2);
        let mut state = DVector::zeros(8);
        state[0] = cplx(h);
        state[7] = cplx(h);
        let obs = vec![pauli_x::<T>(), pauli_y::<T>()];
        Self { state, players: [obs.clone(), obs.clone(), obs] }
    }

    /// Two-player strategy with a third player holding a trivial system.
    pub fn extend(two: &QuantumStrategy<T>) -> Self {
        Self { state: two.state.clone(), players: [two.a.clone(), two.b.clone(), vec![CMat::identity(1, 1)]] }
    }

    pub fn all_plus(dims: (usize, usize, usize)) -> Self {
        let mut state = DVector::zeros(1);
        state[0] = cplx(T::one());
        let id = CMat::<T>::identity(1, 1);
        Self { state, players: [vec![id.clone(); dims.0], vec![id.clone(); dims.1], vec![id; dims.2]] }
    }
}

/// `Σ_stu G_stu ⟨ψ| A_s ⊗ B_t ⊗ C_u |ψ⟩`.
pub fn multiplayer_bias<T: Real>(g: &XorGame3<T>, s: &QuantumStrategy3<T>) -> Result<T> {
    let (ns, nt, nu) = g.questions();
    check_dim(ns, s.players[0].len())?;
    check_dim(nt, s.players[1].len())?;
    check_dim(nu, s.players[2].len())?;
    let mut total = T::zero();
    for (i, a) in s.players[0].iter().enumerate() {
        for (j, b) in s.players[1].iter().enumerate() {
            let ab = a.kronecker(b);
            for (k, c) in s.players[2].iter().enumerate() {
                let w = g.get(i, j, k);
                if w != T::zero() {
                    total += w * expectation(&s.state, &ab.kronecker(c));
                }
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn bias_examples() {
        let g = XorGame::<f64>::chsh();
        assert_abs_diff_eq!(bias(&g, &QuantumStrategy::all_plus(2, 2)).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(bias(&g, &QuantumStrategy::tsirelson()).unwrap(), 0.7071067811865476, epsilon = 1e-12);
        let s = QuantumStrategy::tsirelson();
        let flipped = s.negate_alice(0).negate_alice(1);
        assert_abs_diff_eq!(bias(&g, &flipped).unwrap(), -bias(&g, &s).unwrap(), epsilon = 1e-15);
        assert!(bias(&XorGame::trivial(3, 2), &s).is_err());
    }

    #[test]
    fn win_probability_examples() {
        assert_eq!(win_probability(0.0).unwrap(), 0.5);
        assert_eq!(win_probability(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(win_probability(0.707107).unwrap(), 0.8535535, epsilon = 1e-12);
        assert!(win_probability(1.5).is_err());
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_optimum(&XorGame::<f64>::chsh()).unwrap(), 0.5);
        assert_abs_diff_eq!(classical_optimum(&XorGame::<f64>::trivial(3, 4)).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(classical_optimum(&XorGame::new(DMatrix::from_element(1, 1, 1.0)).unwrap()).unwrap(), 1.0);
        assert!(matches!(classical_optimum(&XorGame::<f64>::trivial(5, 5)), Err(Error::Capability(_))));
    }

    #[test]
    fn classical_matches_full_enumeration() {
        let mut rng = stream(4, 0);
        for _ in 0..50 {
            let (s, t) = (rng.random_range(1..5usize), rng.random_range(1..5usize));
            let raw: Vec<f64> = (0..s * t).map(|_| rng.random_range(-1.0..1.0)).collect();
            let total: f64 = raw.iter().map(|v| v.abs()).sum();
            let g = XorGame::new(DMatrix::from_row_slice(s, t, &raw.iter().map(|v| v / total).collect::<Vec<_>>())).unwrap();
            let mut brute = f64::NEG_INFINITY;
            for a in 0u32..1 << s {
                for b in 0u32..1 << t {
                    let sign = |x: u32, i: usize| if x >> i & 1 == 1 { -1.0 } else { 1.0 };
                    let v: f64 = (0..s).flat_map(|i| (0..t).map(move |j| (i, j))).map(|(i, j)| g.g[(i, j)] * sign(a, i) * sign(b, j)).sum();
                    brute = brute.max(v);
                }
            }
            assert_abs_diff_eq!(classical_optimum(&g).unwrap(), brute, epsilon = 1e-12);
        }
    }

    #[test]
    fn epsilon_check_examples() {
        let g = XorGame::<f64>::chsh();
        assert!(epsilon_optimality_check(&g, &QuantumStrategy::tsirelson(), 0.707107, 0.01).unwrap());
        assert!(!epsilon_optimality_check(&g, &QuantumStrategy::all_plus(2, 2), 0.707107, 0.01).unwrap());
        assert!(epsilon_optimality_check(&g, &QuantumStrategy::all_plus(2, 2), 0.707107, 1.0).unwrap());
        assert!(epsilon_optimality_check(&g, &QuantumStrategy::tsirelson(), 0.0, 0.1).is_err());
    }

    #[test]
    fn validation() {
        assert!(XorGame::new(DMatrix::from_element(2, 2, 0.5)).is_err());
        assert!(XorGame::<f64>::from_json_str(r#"{"s": 2, "t": 2, "entries": [[0.25, 0.25], [0.25, -0.25]]}"#).is_ok());
        assert!(XorGame::<f64>::from_json_str(r#"{"s": 2, "t": 2, "entries": [[0.25, 0.25]]}"#).is_err());
        let j = XorGame::<f64>::chsh().to_json();
        assert_eq!(XorGame::<f64>::from_json(&j).unwrap(), XorGame::chsh());
        let t = QuantumStrategy::<f64>::tsirelson();
        let bad = t.a[0].scale(2.0);
        assert!(QuantumStrategy::new(t.state.clone(), vec![bad], t.b.clone()).is_err());
        assert!(QuantumStrategy::new(t.state.scale(2.0), t.a.clone(), t.b.clone()).is_err());
        assert!(QuantumStrategy::new(t.state.clone(), t.a.clone(), t.b.clone()).is_ok());
    }

    #[test]
    fn multiplayer_examples() {
        let g = XorGame3::<f64>::new((2, 2, 2), vec![0.125; 8]).unwrap();
        assert_abs_diff_eq!(multiplayer_bias(&g, &QuantumStrategy3::all_plus((2, 2, 2))).unwrap(), 1.0, epsilon = 1e-15);
        let chsh = XorGame::<f64>::chsh();
        let s = QuantumStrategy::tsirelson();
        assert_abs_diff_eq!(
            multiplayer_bias(&XorGame3::extend(&chsh), &QuantumStrategy3::extend(&s)).unwrap(),
            bias(&chsh, &s).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn ghz_expectations() {
        // XXX = +1 and two Y's give -1; odd Y counts vanish.
        let s = QuantumStrategy3::<f64>::ghz_xy();
        let want = |i: usize, j: usize, k: usize| match i + j + k {
            0 => 1.0,
            2 => -1.0,
            _ => 0.0,
        };
        for idx in 0..8 {
            let (i, j, k) = (idx >> 2, idx >> 1 & 1, idx & 1);
            let mut g = vec![0.0; 8];
            g[idx] = 1.0;
            let b = multiplayer_bias(&XorGame3::new((2, 2, 2), g).unwrap(), &s).unwrap();
            assert_abs_diff_eq!(b, want(i, j, k), epsilon = 1e-15);
        }
    }

    #[test]
    fn tsirelson_beats_classical() {
        let g = XorGame::<f64>::chsh();
        assert!(bias(&g, &QuantumStrategy::tsirelson()).unwrap() > classical_optimum(&g).unwrap() + 0.2);
    }

    #[test]
    fn f32_instantiation() {
        assert!((bias(&XorGame::<f32>::chsh(), &QuantumStrategy::tsirelson()).unwrap() - 0.707_106_8).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn bias_bounded(seed in any::<u64>(), s in 1usize..4, t in 1usize..4, da in 1usize..3, db in 1usize..3) {
            let mut rng = stream(seed, 0);
            let raw: Vec<f64> = (0..s * t).map(|_| rng.random_range(-1.0..1.0)).collect();
            let total: f64 = raw.iter().map(|v| v.abs()).sum();
            let g = XorGame::new(DMatrix::from_row_slice(s, t, &raw.iter().map(|v| v / total).collect::<Vec<_>>())).unwrap();
            let st = QuantumStrategy::<f64>::random(s, t, da, db, &mut rng);
            prop_assert!(bias(&g, &st).unwrap().abs() <= 1.0 + 1e-12);
        }

        #[test]
        fn bias_linear_in_game(seed in any::<u64>(), alpha in 0.0f64..1.0, w in prop::array::uniform4(0.01f64..1.0)) {
            let mut rng = stream(seed, 1);
            let st = QuantumStrategy::<f64>::random(2, 2, 2, 2, &mut rng);
            // Same sign pattern as CHSH, so every convex mix keeps Σ|G| = 1.
            let total: f64 = w.iter().sum();
            let g1 = XorGame::<f64>::chsh();
            let g2 = XorGame::new(DMatrix::from_row_slice(2, 2, &[w[0] / total, w[1] / total, w[2] / total, -w[3] / total])).unwrap();
            let mix = XorGame::new(g1.matrix().scale(alpha) + g2.matrix().scale(1.0 - alpha)).unwrap();
            let lhs = alpha * bias(&g1, &st).unwrap() + (1.0 - alpha) * bias(&g2, &st).unwrap();
            prop_assert!((bias(&mix, &st).unwrap() - lhs).abs() < 1e-12);
        }
    }
}
