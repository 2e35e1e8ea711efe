use wiretap_lab::protosim::*;
use wiretap_lab::verify::golden_config;

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ball(n: u64, t: u64) -> f64 {
    (0..=t).map(|i| binom(n, i)).sum()
}

fn within_sigma(est: &Estimate, p: f64, k: f64) -> bool {
    let sigma = (p * (1.0 - p) / est.trials as f64).sqrt();
    (est.value - p).abs() <= k * sigma
}

#[test]
fn golden_run_is_frozen() {
    let r = run_transmission(&golden_config()).unwrap();
    assert_eq!((r.n, r.k, r.radius), (64, 32, 8));
    assert_eq!(r.p_de.count, 0);
    assert_eq!(r.p_fa.unwrap().count, 7040);
    assert_eq!(r.eve_error.unwrap().count, 9926);
    assert_eq!(r.eve_crossover_hat, Some(0.250209375));
    assert_eq!(resource_distance(&r), 0.704);
    assert_eq!(authentication_probability(&golden_config()).unwrap().value, 1.0 - r.p_de.value);
    let again = serde_json::to_string(&run_transmission(&golden_config()).unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&r).unwrap(), again);
}

#[test]
fn useless_eve_channel_gives_random_forgery_rate() {
    let c = ProtocolConfig::new(24, 0.05, 0.5, 0.25, 100_000, 5).with_tau(0.1);
    let (code, t) = c.code().unwrap();
    assert!(code.min_distance() as usize > 2 * t, "balls must be disjoint for the volume oracle");
    let m = code.message_count() as f64;
    let volume = ball(24, t as u64) / 2f64.powi(24);
    // Bob's view of the forgery is uniform; any codeword ball other than the genuine one counts.
    let exact = ((m - 1.0) * volume).min(1.0);
    let r = run_transmission(&c).unwrap();
    assert!(within_sigma(&r.p_fa.unwrap(), exact, 3.0), "{:?} vs {exact}", r.p_fa);
}

#[test]
fn uniform_noise_authentication_matches_enumeration() {
    let c = ProtocolConfig::new(16, 0.5, 0.5, 0.25, 200_000, 3).with_tau(1.0 / 16.0).with_attack(false);
    let (code, t) = c.code().unwrap();
    assert_eq!(t, 1);
    let decodable = (0u128..1 << 16).filter(|&y| code.decode(y, t).is_some()).count() as f64;
    let exact = decodable / (code.message_count() as f64 * 65536.0);
    if code.min_distance() as usize > 2 * t {
        assert!((exact - ball(16, 1) / 65536.0).abs() < 1e-15);
    }
    let est = authentication_probability(&c).unwrap();
    assert!(within_sigma(&est, exact, 3.0), "{est:?} vs {exact}");
}

#[test]
fn noiseless_bob_never_fails() {
    let c = ProtocolConfig::new(40, 0.0, 0.3, 0.3, 2_000, 2).with_attack(false);
    let r = run_transmission(&c).unwrap();
    assert_eq!(r.p_de.value, 0.0);
    assert_eq!(authentication_probability(&c).unwrap().value, 1.0);
}

#[test]
fn decoding_error_grows_with_bob_noise() {
    let pde: Vec<Estimate> = [0.01, 0.06, 0.12]
        .iter()
        .map(|&p| run_transmission(&ProtocolConfig::new(32, p, 0.3, 0.25, 4_000, 8).with_tau(0.1)).unwrap().p_de)
        .collect();
    for w in pde.windows(2) {
        assert_ne!(Verdict::less(&w[1], &w[0]), Verdict::True);
    }
    assert_eq!(Verdict::less(&pde[0], &pde[2]), Verdict::True);
}

#[test]
fn false_acceptance_falls_with_eve_noise() {
    let pfa: Vec<Estimate> = [0.02, 0.15, 0.4]
        .iter()
        .map(|&q| run_transmission(&ProtocolConfig::new(32, 0.01, q, 0.25, 4_000, 8).with_tau(0.1)).unwrap().p_fa.unwrap())
        .collect();
    for w in pfa.windows(2) {
        assert_ne!(Verdict::greater(&w[1], &w[0]), Verdict::True);
    }
    assert_eq!(Verdict::greater(&pfa[0], &pfa[2]), Verdict::True);
}

#[test]
fn decoding_error_falls_with_blocklength() {
    let pde: Vec<Estimate> = [16, 32, 64]
        .iter()
        .map(|&n| run_transmission(&ProtocolConfig::new(n, 0.03, 0.3, 0.25, 4_000, 4).with_tau(0.12)).unwrap().p_de)
        .collect();
    assert_eq!(Verdict::less(&pde[2], &pde[0]), Verdict::True, "{pde:?}");
    assert_ne!(Verdict::less(&pde[1], &pde[2]), Verdict::True);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let c = ProtocolConfig::new(40, 0.03, 0.2, 0.3, 3_000, 12).with_tau(0.12);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| run_transmission_trials(&c).unwrap())
    };
    let (r1, t1) = run(1);
    let (r4, t4) = run(4);
    assert_eq!(r1, r4);
    assert_eq!(serde_json::to_string(&t1).unwrap(), serde_json::to_string(&t4).unwrap());
}

#[test]
fn report_distance_is_a_pseudometric() {
    let reports: Vec<SimReport> = [(0.01, 0.1), (0.05, 0.2), (0.1, 0.3), (0.02, 0.45)]
        .iter()
        .map(|&(p, q)| run_transmission(&ProtocolConfig::new(24, p, q, 0.25, 1_000, 6).with_tau(0.1)).unwrap())
        .collect();
    for a in &reports {
        assert_eq!(report_distance(a, a), 0.0);
        assert!(resource_distance(a) <= a.p_de.value + a.p_fa.unwrap().value);
        for b in &reports {
            assert_eq!(report_distance(a, b), report_distance(b, a));
            for c in &reports {
                assert!(report_distance(a, c) <= report_distance(a, b) + report_distance(b, c) + 1e-15);
            }
        }
    }
}
