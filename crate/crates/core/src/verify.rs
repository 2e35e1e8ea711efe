//! The acceptance property suite.
//!
//! Each check draws from its own random streams keyed by the suite seed, so
//! a report depends only on `(seed, scale)`. Timings are left to callers.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{blocklength_bound, c_eve_gap, fano_min_error, helstrom_two_state, HelstromMeasurement, DEFAULT_M_THRESHOLD};
use crate::channels::{serial_flips, BroadcastModel, Bsc};
use crate::error::{Error, Result};
use crate::games::{bias, classical_optimum, win_probability, QuantumStrategy, XorGame};
use crate::holevo::{holevo_chi, CqChannel};
use crate::info::{cascade, Dist};
use crate::polar::{conservation_residual, polarize, sample_variance, split_minus, split_plus, SynthesizedChannel};
use crate::protosim::{
    domination_experiment, empirical_eve_information, run_transmission, ProtocolConfig, Verdict, DOMINATION_TAU,
};
use crate::qstate::{check_contractivity, check_dpi, random_channel, random_pure, random_state, DensityMatrix};
use crate::rng::{stream, StreamRng};
use crate::secrecy::{cs, cs_bar_bsc, cs_bar_upper};

/// Stream ids below `1 << 40` are per-item; each check owns a block.
const BLOCK: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// Sample sizes as stated in the acceptance criteria.
    Full,
    /// Reduced sizes for smoke runs.
    Quick,
}

impl Scale {
    fn pick<N>(self, full: N, quick: N) -> N {
        match self {
            Scale::Full => full,
            Scale::Quick => quick,
        }
    }
}

pub const CHECK_NAMES: [&str; 12] = [
    "wiretap upper bound matches closed form",
    "capacity ordering",
    "cascade law",
    "holevo-sum conservation",
    "polarization ordering and trend",
    "cptp suite",
    "helstrom achievability",
    "fano consistency",
    "chsh",
    "domination experiment",
    "determinism",
    "vacuity surfacing",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub metrics: BTreeMap<String, f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub scale: Scale,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

struct Builder {
    metrics: BTreeMap<String, f64>,
}

impl Builder {
    fn new() -> Self {
        Self { metrics: BTreeMap::new() }
    }

    fn m(mut self, k: &str, v: f64) -> Self {
        self.metrics.insert(k.to_string(), v);
        self
    }

    fn done(self, id: usize, passed: bool, detail: String) -> Check {
        Check { id, name: CHECK_NAMES[id - 1], passed, metrics: self.metrics, detail }
    }
}

fn rng_for(seed: u64, id: usize, item: u64) -> StreamRng {
    stream(seed, id as u64 * BLOCK + item)
}

fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| 0.5 * i as f64 / (points - 1) as f64).collect()
}

fn grid_pairs(points: usize) -> Vec<(f64, f64)> {
    let g = grid(points);
    g.iter().flat_map(|&e| g.iter().map(move |&d| (e, d))).collect()
}

fn upper_matches_closed_form(scale: Scale) -> Result<Check> {
    let pairs = grid_pairs(scale.pick(100, 20));
    let errs: Vec<f64> = pairs
        .par_iter()
        .map(|&(e, d)| {
            let m = BroadcastModel::new(e, d, 0.0)?;
            Ok((cs_bar_upper(&m).value - cs_bar_bsc(e, d)?).abs())
        })
        .collect::<Result<_>>()?;
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    Ok(Builder::new()
        .m("points", pairs.len() as f64)
        .m("max_abs_error", worst)
        .m("tolerance", 1e-4)
        .done(1, worst <= 1e-4, format!("max |sup - closed form| = {worst:.3e} over {} points", pairs.len())))
}

fn capacity_ordering(scale: Scale) -> Result<Check> {
    let pairs = grid_pairs(scale.pick(100, 20));
    let mut worst = f64::NEG_INFINITY;
    let mut min_cs = f64::INFINITY;
    for &(e, d) in &pairs {
        let (a, b) = (cs(e, d)?, cs_bar_bsc(e, d)?);
        worst = worst.max(a - b);
        min_cs = min_cs.min(a);
    }
    let ok = worst <= 1e-12 && min_cs >= 0.0;
    Ok(Builder::new()
        .m("points", pairs.len() as f64)
        .m("max_excess", worst)
        .m("min_cs", min_cs)
        .done(2, ok, format!("max cs - cs_bar = {worst:.3e}, min cs = {min_cs:.3e}")))
}

fn cascade_law(seed: u64, scale: Scale) -> Result<Check> {
    let samples: u64 = scale.pick(1_000_000, 100_000);
    let mut rng = rng_for(seed, 3, 0);
    let mut worst_z: f64 = 0.0;
    for i in 0..20u64 {
        let (e, d) = (rng.random_range(0.0..0.5), rng.random_range(0.0..0.5));
        let p = cascade(e, d)?;
        let flips = serial_flips(&[Bsc::new(e)?, Bsc::new(d)?], samples, stream(seed, 3 * BLOCK + 1 + i).random());
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        worst_z = worst_z.max((flips as f64 / samples as f64 - p).abs() / sigma);
    }
    Ok(Builder::new()
        .m("pairs", 20.0)
        .m("samples", samples as f64)
        .m("max_abs_z", worst_z)
        .done(3, worst_z <= 3.0, format!("largest deviation {worst_z:.3} sigma")))
}

fn random_qubit_cq(rng: &mut StreamRng) -> Result<CqChannel<f64>> {
    let draw = |r: &mut StreamRng| if r.random::<bool>() { random_pure(2, r) } else { random_state(2, r) };
    let a = draw(rng);
    let b = draw(rng);
    CqChannel::binary(a, b)
}

fn qubit_channels(seed: u64, count: u64) -> Result<Vec<CqChannel<f64>>> {
    (0..count).into_par_iter().map(|i| random_qubit_cq(&mut rng_for(seed, 4, i))).collect()
}

fn holevo_conservation(seed: u64, scale: Scale) -> Result<Check> {
    let count = scale.pick(1000, 100);
    let res: Vec<f64> = qubit_channels(seed, count)?
        .par_iter()
        .map(|c| conservation_residual(&SynthesizedChannel::from_cq(c)?))
        .collect::<Result<_>>()?;
    let worst = res.iter().cloned().fold(0.0, f64::max);
    Ok(Builder::new()
        .m("channels", count as f64)
        .m("max_residual", worst)
        .done(4, worst < 1e-9, format!("max |(chi+ + chi-)/2 - chi| = {worst:.3e}")))
}

fn polarization_ordering(seed: u64, scale: Scale) -> Result<Check> {
    let count = scale.pick(1000, 100);
    let gaps: Vec<f64> = qubit_channels(seed, count)?
        .par_iter()
        .map(|c| {
            let w = SynthesizedChannel::from_cq(c)?;
            let (lo, mid, hi) = (split_minus(&w)?.chi(), w.chi(), split_plus(&w)?.chi());
            Ok((lo - mid).max(mid - hi))
        })
        .collect::<Result<_>>()?;
    let worst = gaps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amp = SynthesizedChannel::from_cq(&CqChannel::amplitude(FRAC_PI_4))?;
    let v1 = sample_variance(&polarize(&amp, 1)?.chis());
    let v3 = sample_variance(&polarize(&amp, 3)?.chis());
    let ok = worst <= 1e-10 && v3 > v1;
    Ok(Builder::new()
        .m("channels", count as f64)
        .m("max_order_violation", worst)
        .m("variance_depth1", v1)
        .m("variance_depth3", v3)
        .done(5, ok, format!("max of chi(W-) - chi(W) and chi(W) - chi(W+) is {worst:.3e}; variance {v1:.6} at depth 1, {v3:.6} at depth 3")))
}

fn cptp_suite(seed: u64, scale: Scale) -> Result<Check> {
    let count = scale.pick(1000u64, 100);
    let rows: Vec<[f64; 3]> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 6, i);
            let kraus = rng.random_range(1..=4);
            let phi = random_channel::<f64, _>(2, 2, kraus, &mut rng)?;
            let rho = random_state(2, &mut rng);
            let sigma = random_state(2, &mut rng);
            let dpi = check_dpi(&phi, &rho, &sigma)?.unwrap_or(0.0);
            let tn = check_contractivity(&phi, &rho, &sigma)?;
            let p = rng.random_range(0.05..0.95);
            let prior = Dist::new(vec![p, 1.0 - p])?;
            let cq = CqChannel::binary(rho, sigma)?;
            let before = holevo_chi(&cq.ensemble(&prior)?);
            let after = holevo_chi(&cq.map(&phi)?.ensemble(&prior)?);
            Ok([dpi, tn, before - after])
        })
        .collect::<Result<_>>()?;
    let min = |j: usize| rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
    let (dpi, tn, chi) = (min(0), min(1), min(2));
    let ok = dpi >= -1e-10 && tn >= -1e-10 && chi >= -1e-10;
    Ok(Builder::new()
        .m("triples", count as f64)
        .m("min_dpi_residual", dpi)
        .m("min_contractivity_residual", tn)
        .m("min_holevo_residual", chi)
        .done(6, ok, format!("min residuals: relative entropy {dpi:.3e}, trace norm {tn:.3e}, holevo {chi:.3e}")))
}

/// Probability that the projector onto a pure state `v` clicks on `rho`.
fn projector_prob(v: &DensityMatrix<f64>, rho: &DensityMatrix<f64>) -> f64 {
    (v.matrix() * rho.matrix()).trace().re.clamp(0.0, 1.0)
}

fn helstrom_achievability(seed: u64, scale: Scale) -> Result<Check> {
    let (pairs, shots) = (scale.pick(500u64, 100), scale.pick(100_000u64, 20_000));
    // (exact optimal error, simulated errors, exact error of a random projective measurement)
    let rows: Vec<(f64, u64, f64)> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 7, i);
            let rho0 = random_state(2, &mut rng);
            let rho1 = random_state(2, &mut rng);
            let exact = 1.0 - helstrom_two_state(&rho0, &rho1)?;
            let errors = HelstromMeasurement::new(&rho0, &rho1)?.simulate_errors(shots, &mut rng);
            let v = random_pure(2, &mut rng);
            let other = 0.5 * (1.0 - projector_prob(&v, &rho0) + projector_prob(&v, &rho1));
            Ok((exact, errors, other.min(1.0 - other)))
        })
        .collect::<Result<_>>()?;
    let total = (pairs * shots) as f64;
    let expected: f64 = rows.iter().map(|r| r.0 * shots as f64).sum();
    let var: f64 = rows.iter().map(|r| r.0 * (1.0 - r.0) * shots as f64).sum();
    let observed = rows.iter().map(|r| r.1).sum::<u64>() as f64;
    let z_pooled = (observed - expected) / var.sqrt();
    let z: Vec<f64> =
        rows.iter().map(|&(p, e, _)| (e as f64 / shots as f64 - p) / (p * (1.0 - p) / shots as f64).sqrt()).collect();
    let outside = z.iter().filter(|z| z.abs() > 3.0).count();
    let min_z = z.iter().cloned().fold(f64::INFINITY, f64::min);
    let slack = rows.iter().map(|r| r.2 - r.0).fold(f64::INFINITY, f64::min);
    let ok = outside == 0 && min_z >= -3.0 && slack >= -1e-12;
    Ok(Builder::new()
        .m("pairs", pairs as f64)
        .m("shots", shots as f64)
        .m("pooled_error", observed / total)
        .m("pooled_expected", expected / total)
        .m("pooled_z", z_pooled)
        .m("min_pair_z", min_z)
        .m("pairs_outside_3sigma", outside as f64)
        .m("min_competitor_slack", slack)
        .done(
            7,
            ok,
            format!("pooled z = {z_pooled:.3}; lowest pair z = {min_z:.3}; {outside} of {pairs} pairs outside 3 sigma"),
        ))
}

/// Golden wiretap configuration used by the Fano check.
pub fn golden_config() -> ProtocolConfig {
    ProtocolConfig::new(64, 0.01, 0.25, 0.5, 10_000, 7).with_tau(0.13)
}

fn fano_consistency(scale: Scale) -> Result<Check> {
    let mut c = golden_config();
    c.trials = scale.pick(c.trials, 2_000);
    let r = run_transmission(&c)?;
    let eve = r.eve_error.ok_or_else(|| Error::Config("attack disabled".into()))?;
    let info = empirical_eve_information(&r).ok_or_else(|| Error::Config("no Eve statistics".into()))?;
    let m = 1u64 << r.k;
    let bound = fano_min_error(m, info)?;
    let margin = eve.value - (bound - 3.0 * eve.std_error());
    Ok(Builder::new()
        .m("eve_error", eve.value)
        .m("information_bits", info)
        .m("fano_bound", bound)
        .m("margin", margin)
        .done(8, margin >= 0.0, format!("Eve errs with {:.6}, Fano requires at least {bound:.6}", eve.value)))
}

fn chsh() -> Result<Check> {
    let g = XorGame::<f64>::chsh();
    let classical = classical_optimum(&g)?;
    let b = bias(&g, &QuantumStrategy::tsirelson())?;
    let w = win_probability(b)?;
    let ok = classical == 0.5 && (b - 0.707107).abs() <= 1e-6 && (w - 0.853553).abs() <= 1e-6;
    Ok(Builder::new()
        .m("classical_optimum", classical)
        .m("quantum_bias", b)
        .m("win_probability", w)
        .done(9, ok, format!("classical {classical}, quantum bias {b:.9}, win probability {w:.9}")))
}

/// Criterion-sized domination run.
pub fn domination_config(seed: u64, trials: u64) -> ProtocolConfig {
    ProtocolConfig::new(64, 0.0, 0.0, 0.5, trials, seed).with_tau(DOMINATION_TAU)
}

fn domination(seed: u64, scale: Scale) -> Result<Check> {
    let r = domination_experiment(0.1, 0.1, 0.05, 0.25, &domination_config(seed, scale.pick(100_000, 10_000)))?;
    let code = |v: Verdict| match v {
        Verdict::True => 1.0,
        Verdict::False => 0.0,
        Verdict::Inconclusive => 0.5,
    };
    let ok = r.group1.verdict == Verdict::True && r.group2.verdict == Verdict::True;
    Ok(Builder::new()
        .m("trials", r.trials as f64)
        .m("group1", code(r.group1.verdict))
        .m("group2", code(r.group2.verdict))
        .m("group3", code(r.group3.verdict))
        .m("public_fa_eve", r.public.eve.p_fa.value)
        .m("public_fa_alice", r.public.alice.p_fa.value)
        .m("forward_fa_eve", r.forward.eve.p_fa.value)
        .m("forward_ec_eve", r.forward.eve.p_ec.value)
        .done(
            10,
            ok,
            format!("group 1 {:?}, group 2 {:?}, group 3 {:?}", r.group1.verdict, r.group2.verdict, r.group3.verdict),
        ))
}

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::Config(e.to_string()))?;
    Ok(pool.install(f))
}

fn determinism(seed: u64) -> Result<Check> {
    let sim = ProtocolConfig::new(48, 0.02, 0.2, 0.25, 3_000, seed).with_tau(0.1);
    let dom = domination_config(seed, 1_000);
    let render = || -> Result<String> {
        let a = serde_json::to_string(&run_transmission(&sim)?).map_err(|e| Error::Parse(e.to_string()))?;
        let b = serde_json::to_string(&domination_experiment(0.1, 0.1, 0.05, 0.25, &dom)?)
            .map_err(|e| Error::Parse(e.to_string()))?;
        Ok(a + &b)
    };
    let runs = [in_pool(1, render)??, in_pool(3, render)??, in_pool(3, render)??];
    let ok = runs.iter().all(|r| r == &runs[0]);
    Ok(Builder::new().m("runs", runs.len() as f64).done(11, ok, "repeat runs under 1 and 3 threads compared byte for byte".into()))
}

fn vacuity() -> Result<Check> {
    let ns = [1u64, 2, 16, 1024, 1 << 20];
    let ms = [2u64, 4, 16, 17, 1 << 10, 1 << 20, 1 << 32];
    let chis = [0.0, 0.5, 1.0, 4.0, 10.0, 20.0, 31.0];
    let epss = [0.0, 0.25, 1.0, 2.0];
    let outside = |v: f64| !(0.0..=1.0).contains(&v);
    let (mut cases, mut misses, mut flagged) = (0u32, 0u32, 0u32);
    for &n in &ns {
        for &m in &ms {
            for &chi in &chis {
                let b = blocklength_bound(n, m, chi)?;
                cases += 1;
                misses += (b.vacuous != outside(b.value)) as u32;
                flagged += b.vacuous as u32;
                for &eps in &epss {
                    let g = c_eve_gap(n, m, chi, eps, DEFAULT_M_THRESHOLD)?;
                    cases += 1;
                    misses += (g.vacuous != outside(g.value)) as u32;
                    flagged += g.vacuous as u32;
                }
            }
        }
    }
    let ex = blocklength_bound::<f64>(1024, 1 << 20, 4.0)?;
    let ok = misses == 0 && ex.vacuous && (ex.value + 150.0).abs() < 1e-9;
    Ok(Builder::new()
        .m("cases", cases as f64)
        .m("flagged", flagged as f64)
        .m("misflagged", misses as f64)
        .m("example_value", ex.value)
        .done(12, ok, format!("{misses} misflagged of {cases}; example value {} flagged {}", ex.value, ex.vacuous)))
}

/// Runs one check by its 1-based id.
pub fn run_check(id: usize, seed: u64, scale: Scale) -> Result<Check> {
    match id {
        1 => upper_matches_closed_form(scale),
        2 => capacity_ordering(scale),
        3 => cascade_law(seed, scale),
        4 => holevo_conservation(seed, scale),
        5 => polarization_ordering(seed, scale),
        6 => cptp_suite(seed, scale),
        7 => helstrom_achievability(seed, scale),
        8 => fano_consistency(scale),
        9 => chsh(),
        10 => domination(seed, scale),
        11 => determinism(seed),
        12 => vacuity(),
        _ => Err(Error::Config(format!("no check with id {id}; ids run 1 to {}", CHECK_NAMES.len()))),
    }
}

pub fn run_all(seed: u64, scale: Scale) -> Result<VerifyReport> {
    let checks = (1..=CHECK_NAMES.len()).map(|id| run_check(id, seed, scale)).collect::<Result<Vec<_>>>()?;
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(VerifyReport { seed, scale, passed, failed: checks.len() - passed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Complex, DVector};

    #[test]
    fn unknown_id() {
        assert!(matches!(run_check(13, 1, Scale::Quick), Err(Error::Config(_))));
        assert!(run_check(0, 1, Scale::Quick).is_err());
    }

    #[test]
    fn cheap_checks_pass() {
        for id in [2, 9, 12] {
            let c = run_check(id, 1, Scale::Quick).unwrap();
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn grid_spans_the_square() {
        let g = grid(100);
        assert_eq!((g[0], g[99]), (0.0, 0.5));
        assert_eq!(grid_pairs(5).len(), 25);
    }

    #[test]
    fn projector_probabilities_sum_to_one() {
        let v = DensityMatrix::<f64>::pure(&DVector::from_vec(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)])).unwrap();
        let rho = DensityMatrix::<f64>::basis(2, 0);
        assert!((projector_prob(&v, &rho) - 0.5).abs() < 1e-12);
    }
}
