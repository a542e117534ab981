//! Logarithmic-utility model against direct effort search and its scaling laws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taxfrontier::scalar::golden_max;
use taxfrontier::LogModel;

/// Best `ln(α + βnl) + A·ln(1 − l)` over a grid of `l ∈ [0, 1)` with one
/// golden refinement around the best cell.
fn searched_utility(a: f64, beta: f64, alpha: f64, n: f64) -> f64 {
    let u = |l: f64| (alpha + beta * n * l).ln() + a * (1.0 - l).ln();
    let cells = 20_000;
    let step = 1.0 / cells as f64;
    let (mut best_i, mut best) = (0, u(0.0));
    for i in 1..cells {
        let v = u(i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = (best_i as f64 - 1.0).max(0.0) * step;
    let hi = ((best_i + 1) as f64 * step).min(1.0 - step);
    best.max(golden_max(u, lo, hi, 1e-12).1)
}

#[test]
fn effort_rule_matches_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let a = rng.gen_range(0.2..4.0);
        let s = 10.0;
        let m = LogModel::new(a, s).unwrap();
        let beta = rng.gen_range(0.05..0.95);
        let alpha = rng.gen_range(0.01..3.0);
        let n = rng.gen_range(0.0..=s);
        let o = m.respond(beta, alpha, n).unwrap();
        let searched = searched_utility(a, beta, alpha, n);
        assert!(o.utility >= searched - 1e-12, "A={a} β={beta} α={alpha} n={n}");
        worst = worst.max(o.utility - searched);
        assert!(o.effort >= 0.0 && o.effort < 1.0 / (a + 1.0) + 1e-15);
    }
    assert!(worst <= 1e-6, "worst gap {worst:e}");
}

#[test]
fn balance_residuals_across_scales() {
    for s in [1.0, 1e6, 1e12] {
        let m = LogModel::new(1.0, s).unwrap();
        for i in 1..=9 {
            let b = m.balance(i as f64 / 10.0).unwrap();
            assert!(b.relative_residual <= 1e-10, "s={s}: {b:?}");
            assert!((b.alpha / b.alpha_closed_form - 1.0).abs() <= 1e-9, "s={s}: {b:?}");
        }
    }
}

#[test]
fn skill_bound_shifts_mean_utility_by_log_ratio() {
    let base = LogModel::new(1.0, 1.0).unwrap();
    for lambda in [10.0, 1e3, 1e9] {
        let scaled = LogModel::new(1.0, lambda).unwrap();
        for beta in [0.2, 0.5, 0.8] {
            let u0 = base.welfare(beta, 0.0).unwrap().welfare.mean_utility;
            let u1 = scaled.welfare(beta, 0.0).unwrap().welfare.mean_utility;
            assert!((u1 - u0 - lambda.ln()).abs() <= 1e-8, "λ={lambda} β={beta}");
        }
    }
}

#[test]
fn heavier_spread_weight_lowers_optimal_share() {
    let m = LogModel::new(1.0, 1e12).unwrap();
    let workers = taxfrontier::Parallelism(2);
    let betas: Vec<f64> = [0.0, 0.5, 1.0, 4.0]
        .iter()
        .map(|&c| m.optimize(c, 1e-3, workers).unwrap().balance.beta)
        .collect();
    assert!(betas.windows(2).all(|w| w[1] < w[0]), "{betas:?}");
}
