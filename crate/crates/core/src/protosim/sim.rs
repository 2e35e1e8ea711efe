//! Alice → Bob transmission over BSC(p) with Eve's substitution attack.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::code::LinearCode;
use super::stats::Estimate;
use crate::error::{domain, Result};
use crate::info::{binary_entropy, casc};
use crate::rng::stream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n: usize,
    /// Bob's crossover.
    pub p: f64,
    /// Eve's crossover, also used for the injection channel of her forgery.
    pub q: f64,
    pub rate: f64,
    /// Acceptance radius as a fraction of `n`.
    pub tau: f64,
    pub trials: u64,
    pub seed: u64,
    /// Extra BSC cascaded onto Eve's view.
    #[serde(default)]
    pub cascade_delta: f64,
    #[serde(default = "default_attack")]
    pub attack: bool,
}

fn default_attack() -> bool {
    true
}

fn check_crossover(name: &str, v: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&v) {
        return Err(domain(format!("{name} = {v} must lie in [0, 1/2]")));
    }
    Ok(())
}

impl ProtocolConfig {
    /// Config with the acceptance radius at the midpoint `(p + q)/2`.
    pub fn new(n: usize, p: f64, q: f64, rate: f64, trials: u64, seed: u64) -> Self {
        Self { n, p, q, rate, tau: 0.5 * (p + q), trials, seed, cascade_delta: 0.0, attack: true }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_attack(mut self, attack: bool) -> Self {
        self.attack = attack;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_crossover("p", self.p)?;
        check_crossover("q", self.q)?;
        check_crossover("cascade_delta", self.cascade_delta)?;
        if !(self.tau > 0.0 && self.tau < 0.5) {
            return Err(domain(format!("tau = {} must lie in (0, 1/2)", self.tau)));
        }
        if self.trials == 0 {
            return Err(domain("trials must be positive"));
        }
        Ok(())
    }

    /// Acceptance radius `⌊tau·n⌋`.
    pub fn radius(&self) -> usize {
        (self.tau * self.n as f64).floor() as usize
    }

    /// Eve's effective crossover after the optional cascade.
    pub fn eve_crossover(&self) -> f64 {
        casc(self.q, self.cascade_delta)
    }

    /// Code and radius shared by every trial.
    pub fn code(&self) -> Result<(LinearCode, usize)> {
        self.validate()?;
        let code = LinearCode::build(self.n, self.rate, self.seed)?;
        let t = self.radius();
        code.check_radius(t)?;
        Ok((code, t))
    }
}

/// `n` independent Bernoulli(`p`) flips.
pub(crate) fn bsc_noise<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> u128 {
    let mut e = 0u128;
    if p > 0.0 {
        for i in 0..n {
            if rng.random_bool(p) {
                e |= 1u128 << i;
            }
        }
    }
    e
}

fn random_message<R: Rng + ?Sized>(code: &LinearCode, rng: &mut R) -> u64 {
    rng.random_range(0..code.message_count())
}

/// Uniform message different from `avoid`.
fn other_message<R: Rng + ?Sized>(code: &LinearCode, avoid: u64, rng: &mut R) -> u64 {
    let m = rng.random_range(0..code.message_count() - 1);
    if m >= avoid {
        m + 1
    } else {
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub message: u64,
    pub bob_flips: u32,
    pub bob_accepted: bool,
    pub bob_correct: bool,
    pub eve_flips: Option<u32>,
    pub eve_correct: Option<bool>,
    pub forgery: Option<u64>,
    pub forgery_accepted: Option<bool>,
    pub false_accept: Option<bool>,
}

fn run_trial(c: &ProtocolConfig, code: &LinearCode, t: usize, trial: u64) -> TrialRecord {
    let mut rng = stream(c.seed, trial);
    let n = code.n();
    let m = random_message(code, &mut rng);
    let x = code.encode(m);

    let bob_noise = bsc_noise(n, c.p, &mut rng);
    let bob = code.decode(x ^ bob_noise, t);
    let mut rec = TrialRecord {
        trial,
        message: m,
        bob_flips: bob_noise.count_ones(),
        bob_accepted: bob.is_some(),
        bob_correct: bob.is_some_and(|d| d.message == m),
        eve_flips: None,
        eve_correct: None,
        forgery: None,
        forgery_accepted: None,
        false_accept: None,
    };
    if !c.attack {
        return rec;
    }

    let eve_noise = bsc_noise(n, c.eve_crossover(), &mut rng);
    let guess = match code.decode(x ^ eve_noise, t) {
        Some(d) => d.message,
        None => random_message(code, &mut rng),
    };
    let forged = other_message(code, guess, &mut rng);
    let injected = code.encode(forged) ^ bsc_noise(n, c.q, &mut rng);
    let verdict = code.decode(injected, t);
    rec.eve_flips = Some(eve_noise.count_ones());
    rec.eve_correct = Some(guess == m);
    rec.forgery = Some(forged);
    rec.forgery_accepted = Some(verdict.is_some());
    rec.false_accept = Some(verdict.is_some_and(|d| d.message != m));
    rec
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub n: usize,
    pub k: usize,
    pub radius: usize,
    pub trials: u64,
    pub seed: u64,
    pub attack: bool,
    pub p_de: Estimate,
    /// Absent when the attack is disabled.
    pub p_fa: Option<Estimate>,
    /// Bob accepts and decodes the genuine message.
    pub authentication: Estimate,
    /// Eve's final message estimate differs from Alice's.
    pub eve_error: Option<Estimate>,
    /// Empirical crossover of Eve's view.
    pub eve_crossover_hat: Option<f64>,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    bob_correct: u64,
    eve_correct: u64,
    false_accept: u64,
    eve_flips: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            bob_correct: self.bob_correct + o.bob_correct,
            eve_correct: self.eve_correct + o.eve_correct,
            false_accept: self.false_accept + o.false_accept,
            eve_flips: self.eve_flips + o.eve_flips,
        }
    }
}

impl Tally {
    fn of(r: &TrialRecord) -> Self {
        Tally {
            bob_correct: r.bob_correct as u64,
            eve_correct: r.eve_correct.unwrap_or(false) as u64,
            false_accept: r.false_accept.unwrap_or(false) as u64,
            eve_flips: r.eve_flips.unwrap_or(0) as u64,
        }
    }
}

fn report(c: &ProtocolConfig, code: &LinearCode, t: usize, tally: Tally) -> SimReport {
    let n = c.trials;
    let authentication = Estimate::new(tally.bob_correct, n);
    SimReport {
        n: c.n,
        k: code.k(),
        radius: t,
        trials: n,
        seed: c.seed,
        attack: c.attack,
        p_de: authentication.complement(),
        p_fa: c.attack.then(|| Estimate::new(tally.false_accept, n)),
        authentication,
        eve_error: c.attack.then(|| Estimate::new(n - tally.eve_correct, n)),
        eve_crossover_hat: c.attack.then(|| tally.eve_flips as f64 / (n as f64 * c.n as f64)),
    }
}

/// Monte Carlo estimate of `p_de` and, with the attack on, `p_fa`. Trials
/// use independent per-index streams, so results do not depend on the
/// thread count.
pub fn run_transmission(c: &ProtocolConfig) -> Result<SimReport> {
    let (code, t) = c.code()?;
    let tally = (0..c.trials).into_par_iter().map(|i| Tally::of(&run_trial(c, &code, t, i))).reduce(Tally::default, |a, b| a + b);
    Ok(report(c, &code, t, tally))
}

/// As [`run_transmission`], also returning every trial in index order.
pub fn run_transmission_trials(c: &ProtocolConfig) -> Result<(SimReport, Vec<TrialRecord>)> {
    let (code, t) = c.code()?;
    let records: Vec<TrialRecord> = (0..c.trials).into_par_iter().map(|i| run_trial(c, &code, t, i)).collect();
    let tally = records.iter().fold(Tally::default(), |a, r| a + Tally::of(r));
    Ok((report(c, &code, t, tally), records))
}

/// `max(p_de, p_fa)` on the point estimates.
pub fn resource_distance(r: &SimReport) -> f64 {
    r.p_de.value.max(r.p_fa.map_or(0.0, |e| e.value))
}

/// Sup-distance between two reports' error estimates; a pseudo-metric.
pub fn report_distance(a: &SimReport, b: &SimReport) -> f64 {
    let fa = |r: &SimReport| r.p_fa.map_or(0.0, |e| e.value);
    (a.p_de.value - b.p_de.value).abs().max((fa(a) - fa(b)).abs())
}

/// Fraction of no-attack trials in which Bob accepts the genuine message.
pub fn authentication_probability(c: &ProtocolConfig) -> Result<Estimate> {
    Ok(run_transmission(&c.clone().with_attack(false))?.authentication)
}

/// Plug-in `I(U;Z) ≈ n(1 - h(q̂))` bits, capped at the `k` message bits.
pub fn empirical_eve_information(r: &SimReport) -> Option<f64> {
    let q = r.eve_crossover_hat?.min(0.5);
    let h = binary_entropy(q).ok()?;
    Some((r.n as f64 * (1.0 - h)).min(r.k as f64))
}
