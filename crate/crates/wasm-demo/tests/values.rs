use taxfrontier_wasm::{linear_frontier_values, log_curve_values, two_bracket_values};

#[test]
fn linear_layout() {
    let v = linear_frontier_values(0.0, 10.0, 11, 0.0).unwrap();
    assert_eq!(v.len(), 5 + 3 * 11);
    assert_eq!(v[0], 1.0);
    assert!((v[2] - 50.0 / 3.0).abs() < 1e-12);
}

#[test]
fn two_bracket_layout() {
    let v = two_bracket_values(0.0, 10.0, 0.81, 0.69, 0.1, 0.5, 21).unwrap();
    assert_eq!(v.len(), 7 + 2 * 21);
    assert!((v[3] - 11.5167).abs() < 1e-3);
    assert!(two_bracket_values(0.0, 10.0, 1.2, 0.5, 0.1, 0.5, 21).is_err());
}

#[test]
fn log_curve_peaks_near_known_share() {
    let v = log_curve_values(1.0, 1e12, 0.01, 0.0).unwrap();
    let best = v.chunks(5).max_by(|a, b| a[2].total_cmp(&b[2])).unwrap();
    assert!((best[0] - 0.61).abs() < 0.011);
}
