use wiretap_lab::games::{multiplayer_bias, QuantumStrategy3, XorGame3};
use wiretap_lab::rng::stream;

#[test]
fn ghz_bias_on_seeded_table() {
    let g = XorGame3::<f64>::random((2, 2, 2), &mut stream(7, 0));
    let b = multiplayer_bias(&g, &QuantumStrategy3::ghz_xy()).unwrap();
    // Only XXX (+1) and the two-Y settings (-1) have non-zero correlation.
    let analytic = g.get(0, 0, 0) - g.get(0, 1, 1) - g.get(1, 0, 1) - g.get(1, 1, 0);
    assert!((b - analytic).abs() < 1e-12);
    assert!((b - -0.005379638043245094).abs() < 1e-12);
    assert!(b.abs() <= 1.0);
}
