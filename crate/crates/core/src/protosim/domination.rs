//! False-acceptance and error-correction rates of Alice, Bob and Eve on the
//! public broadcast channel and on the two conceptual channels.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::code::LinearCode;
use super::sim::{bsc_noise, ProtocolConfig};
use super::stats::{Estimate, Verdict};
use crate::error::{Error, Result};
use crate::info::casc;
use crate::rng::stream;

/// Default acceptance radius fraction: `t = 7` at `n = 64`, which keeps
/// exact decoding cheap at `10⁵` trials.
pub const DOMINATION_TAU: f64 = 0.11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartyStats {
    pub crossover: f64,
    /// Accepts a message other than Alice's.
    pub p_fa: Estimate,
    /// Accepts Alice's message.
    pub p_ec: Estimate,
    pub reject: Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelStats {
    pub alice: PartyStats,
    pub bob: PartyStats,
    pub eve: PartyStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub claim: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Group {
    pub verdict: Verdict,
    pub comparisons: Vec<Comparison>,
}

impl Group {
    fn new(comparisons: Vec<Comparison>) -> Self {
        Self { verdict: Verdict::all(comparisons.iter().map(|c| c.verdict)), comparisons }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    pub ea: f64,
    pub eb: f64,
    pub ee: f64,
    pub delta: f64,
    pub n: usize,
    pub k: usize,
    pub radius: usize,
    pub trials: u64,
    pub seed: u64,
    pub public: ChannelStats,
    pub forward: ChannelStats,
    pub backward: ChannelStats,
    /// Eve superior on the public channel.
    pub group1: Group,
    /// Eve inferior on her forward conceptual channel.
    pub group2: Group,
    /// Eve on the public channel against Alice and Bob on the backward channel.
    pub group3: Group,
}

/// `[channel][party]` crossovers, parties ordered Alice, Bob, Eve.
fn crossovers(ea: f64, eb: f64, ee: f64, delta: f64) -> [[f64; 3]; 3] {
    let ab = casc(ea, eb);
    [[ea, eb, ee], [ea, eb, casc(ee, delta)], [ab, ab, casc(ea, ee).max(casc(eb, ee))]]
}

/// `[channel][party][correct, false accept, reject]`.
type Counts = [[[u64; 3]; 3]; 3];

fn add(mut a: Counts, b: Counts) -> Counts {
    for c in 0..3 {
        for p in 0..3 {
            for o in 0..3 {
                a[c][p][o] += b[c][p][o];
            }
        }
    }
    a
}

fn trial(code: &LinearCode, t: usize, x: &[[f64; 3]; 3], seed: u64, i: u64) -> Counts {
    let mut rng = stream(seed, i);
    let m = rng.random_range(0..code.message_count());
    let word = code.encode(m);
    let mut out = [[[0u64; 3]; 3]; 3];
    for (c, row) in x.iter().enumerate() {
        for (p, &e) in row.iter().enumerate() {
            let o = match code.decode(word ^ bsc_noise(code.n(), e, &mut rng), t) {
                Some(d) if d.message == m => 0,
                Some(_) => 1,
                None => 2,
            };
            out[c][p][o] += 1;
        }
    }
    out
}

fn party(crossover: f64, c: [u64; 3], n: u64) -> PartyStats {
    PartyStats { crossover, p_ec: Estimate::new(c[0], n), p_fa: Estimate::new(c[1], n), reject: Estimate::new(c[2], n) }
}

fn channel(x: [f64; 3], c: [[u64; 3]; 3], n: u64) -> ChannelStats {
    ChannelStats { alice: party(x[0], c[0], n), bob: party(x[1], c[1], n), eve: party(x[2], c[2], n) }
}

fn cmp(claim: &str, verdict: Verdict) -> Comparison {
    Comparison { claim: claim.to_string(), verdict }
}

/// Runs every party over every channel on shared messages. `base` supplies
/// `n`, `rate`, `tau`, `trials` and `seed`.
pub fn domination_experiment(ea: f64, eb: f64, ee: f64, delta: f64, base: &ProtocolConfig) -> Result<DominationReport> {
    for (name, v) in [("ea", ea), ("eb", eb), ("ee", ee)] {
        if !(0.0..=0.5).contains(&v) {
            return Err(Error::Config(format!("{name} = {v} must lie in [0, 1/2]")));
        }
    }
    if !(ee < ea.min(eb)) {
        return Err(Error::Config(format!("Eve must start superior: ee = {ee} < min(ea, eb) = {}", ea.min(eb))));
    }
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::Config(format!("delta = {delta} must lie in [0, 1/2)")));
    }
    let (code, t) = base.code()?;
    let x = crossovers(ea, eb, ee, delta);
    let n = base.trials;
    let counts = (0..n).into_par_iter().map(|i| trial(&code, t, &x, base.seed, i)).reduce(|| [[[0; 3]; 3]; 3], add);
    let [public, forward, backward] = [0, 1, 2].map(|c| channel(x[c], counts[c], n));

    let group1 = Group::new(vec![
        cmp("FA_E < FA_A (public)", Verdict::less(&public.eve.p_fa, &public.alice.p_fa)),
        cmp("FA_E < FA_B (public)", Verdict::less(&public.eve.p_fa, &public.bob.p_fa)),
        cmp("EC_E > EC_A (public)", Verdict::greater(&public.eve.p_ec, &public.alice.p_ec)),
        cmp("EC_E > EC_B (public)", Verdict::greater(&public.eve.p_ec, &public.bob.p_ec)),
    ]);
    let group2 = Group::new(vec![
        cmp("FA_E > FA_A (forward)", Verdict::greater(&forward.eve.p_fa, &forward.alice.p_fa)),
        cmp("FA_E > FA_B (forward)", Verdict::greater(&forward.eve.p_fa, &forward.bob.p_fa)),
        cmp("EC_E < EC_A (forward)", Verdict::less(&forward.eve.p_ec, &forward.alice.p_ec)),
        cmp("EC_E < EC_B (forward)", Verdict::less(&forward.eve.p_ec, &forward.bob.p_ec)),
    ]);
    let group3 = Group::new(vec![
        cmp("FA_E (public) > FA_A (backward)", Verdict::greater(&public.eve.p_fa, &backward.alice.p_fa)),
        cmp("FA_E (public) > FA_B (backward)", Verdict::greater(&public.eve.p_fa, &backward.bob.p_fa)),
        cmp("EC_E (public) < EC_A (backward)", Verdict::less(&public.eve.p_ec, &backward.alice.p_ec)),
        cmp("EC_E (public) < EC_B (backward)", Verdict::less(&public.eve.p_ec, &backward.bob.p_ec)),
    ]);

    Ok(DominationReport {
        ea,
        eb,
        ee,
        delta,
        n: code.n(),
        k: code.k(),
        radius: t,
        trials: n,
        seed: base.seed,
        public,
        forward,
        backward,
        group1,
        group2,
        group3,
    })
}
