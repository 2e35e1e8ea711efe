//! Monte Carlo simulation of authenticated transmission over binary
//! symmetric channels, with Eve's forgery and the domination experiment.

pub mod code;
pub mod domination;
pub mod sim;
pub mod stats;

pub use code::{Decoded, LinearCode};
pub use domination::{domination_experiment, ChannelStats, DominationReport, PartyStats, DOMINATION_TAU};
pub use sim::{
    authentication_probability, empirical_eve_information, report_distance, resource_distance, run_transmission,
    run_transmission_trials, ProtocolConfig, SimReport, TrialRecord,
};
pub use stats::{wilson, Estimate, Verdict, Z95};

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force nearest codeword within `t`, first message on ties.
    fn brute(code: &LinearCode, y: u128, t: usize) -> Option<Decoded> {
        let mut best: Option<Decoded> = None;
        for m in 0..code.message_count() {
            let d = (code.encode(m) ^ y).count_ones();
            if d as usize <= t && best.is_none_or(|b| d < b.distance) {
                best = Some(Decoded { message: m, distance: d });
            }
        }
        best
    }

    #[test]
    fn small_code_enumerates() {
        let c = LinearCode::build(8, 0.5, 1).unwrap();
        assert_eq!(c.k(), 4);
        let words: std::collections::BTreeSet<u128> = (0..16).map(|m| c.encode(m)).collect();
        assert_eq!(words.len(), 16);
        assert_eq!(c, LinearCode::build(8, 0.5, 1).unwrap());
        assert_ne!(c, LinearCode::build(8, 0.5, 2).unwrap());
        assert!(LinearCode::build(8, 0.05, 1).is_err());
        assert!(LinearCode::build(8, 1.0, 1).is_err());
    }

    #[test]
    fn decoder_matches_brute_force_distance() {
        use rand::Rng;
        let mut rng = crate::rng::stream(9, 0);
        for (n, rate, t) in [(12, 0.25, 3), (16, 0.5, 2), (20, 0.3, 4), (15, 0.6, 2), (24, 0.25, 5)] {
            let code = LinearCode::build(n, rate, n as u64).unwrap();
            for _ in 0..300 {
                let y = rng.random::<u128>() & ((1u128 << n) - 1);
                let fast = code.decode(y, t);
                let slow = brute(&code, y, t);
                assert_eq!(fast.map(|d| d.distance), slow.map(|d| d.distance), "n={n} y={y:b}");
                if let Some(d) = fast {
                    assert_eq!((code.encode(d.message) ^ y).count_ones(), d.distance);
                }
            }
        }
    }
}
