//! Individual labour supply under `u(c, l) = c − l²/2`.

use crate::error::{invalid, Result};
use crate::scalar::golden_max;
use crate::schedule::TaxPolicy;

/// Which piece of the budget set the optimum lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Interior of the first bracket, `l = β1·n`.
    FirstBracket,
    /// Bunching at the kink, `l = y1/n` (convex schedules only).
    Kink,
    /// Interior of the second bracket, `l = β2·n`.
    SecondBracket,
    /// Zero effort: skill below the participation threshold.
    NoEffort,
    /// Found by search rather than classification.
    Searched,
}

/// Optimal choice of one household.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HouseholdOutcome {
    pub skill: f64,
    pub effort: f64,
    /// Pre-tax income `skill · effort`.
    pub income: f64,
    pub utility: f64,
    pub tax: f64,
    pub regime: Regime,
}

impl HouseholdOutcome {
    pub(crate) fn build(policy: &TaxPolicy, skill: f64, effort: f64, regime: Regime) -> Self {
        let income = skill * effort;
        let tax = policy.tax_unchecked(income);
        Self {
            skill,
            effort,
            income,
            utility: income - tax - 0.5 * effort * effort,
            tax,
            regime,
        }
    }
}

/// Skill boundaries with IEEE semantics: zero shares push a boundary to
/// infinity instead of failing, so degenerate policies still classify.
pub(crate) fn regime_bounds(p: &TaxPolicy) -> (f64, f64, f64) {
    let n1 = (p.y1 / p.beta1).sqrt();
    let n2 = (p.y1 / p.beta2).sqrt();
    let n3 = (2.0 * p.y1 / (p.beta1 + p.beta2)).sqrt();
    let fix = |x: f64| if x.is_nan() { 0.0 } else { x };
    (fix(n1), fix(n2), fix(n3))
}

/// Regime of skill `n` under the analytic classification. Boundary points go
/// to the lower-index regime.
pub fn classify(p: &TaxPolicy, n: f64) -> Regime {
    if p.y1 == 0.0 {
        return Regime::SecondBracket;
    }
    let (n1, n2, n3) = regime_bounds(p);
    if p.beta1 <= p.beta2 {
        if n <= n3 {
            Regime::FirstBracket
        } else {
            Regime::SecondBracket
        }
    } else if n <= n1 {
        Regime::FirstBracket
    } else if n <= n2 {
        Regime::Kink
    } else {
        Regime::SecondBracket
    }
}

/// Closed-form optimum for quadratic disutility of effort.
pub fn respond_quadratic(p: &TaxPolicy, n: f64) -> Result<HouseholdOutcome> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(invalid(format!("skill must be finite and >= 0, got {n}")));
    }
    let regime = classify(p, n);
    let effort = match regime {
        Regime::FirstBracket => p.beta1 * n,
        Regime::SecondBracket => p.beta2 * n,
        Regime::Kink => p.y1 / n,
        Regime::NoEffort | Regime::Searched => unreachable!("not produced by classify"),
    };
    Ok(HouseholdOutcome::build(p, n, effort, regime))
}

/// Brute-force optimum: scans `{0, step, …, effort_cap}` and refines the
/// best cell with golden-section search.
pub fn respond_oracle(
    p: &TaxPolicy,
    n: f64,
    effort_cap: f64,
    step: f64,
) -> Result<HouseholdOutcome> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(invalid(format!("skill must be finite and >= 0, got {n}")));
    }
    if !(step > 0.0) {
        return Err(invalid(format!("grid step must be > 0, got {step}")));
    }
    let needed = p.beta1.max(p.beta2) * n + 1.0;
    if !(effort_cap >= needed) {
        return Err(invalid(format!(
            "effort cap {effort_cap} is below max(beta)·n + 1 = {needed}"
        )));
    }
    let utility = |l: f64| {
        let y = n * l;
        y - p.tax_unchecked(y) - 0.5 * l * l
    };
    let cells = (effort_cap / step).floor() as usize;
    let mut best = (0usize, utility(0.0));
    for i in 1..=cells {
        let u = utility(i as f64 * step);
        if u > best.1 {
            best = (i, u);
        }
    }
    let lo = best.0.saturating_sub(1) as f64 * step;
    let hi = ((best.0 + 1).min(cells)) as f64 * step;
    let (refined, u) = golden_max(utility, lo, hi, 1e-12);
    let l = if u >= best.1 { refined } else { best.0 as f64 * step };
    Ok(HouseholdOutcome::build(p, n, l, Regime::Searched))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn kinked() -> TaxPolicy {
        TaxPolicy::two_bracket(0.0, 0.9, 0.5, 4.0).unwrap()
    }

    #[test]
    fn kink_regime_example() {
        let o = respond_quadratic(&kinked(), 2.5).unwrap();
        assert_eq!(o.regime, Regime::Kink);
        assert_abs_diff_eq!(o.effort, 1.6, epsilon = 1e-12);
        assert_abs_diff_eq!(o.utility, 2.32, epsilon = 1e-12);
        assert_abs_diff_eq!(o.tax, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn second_bracket_example() {
        let o = respond_quadratic(&kinked(), 3.0).unwrap();
        assert_eq!(o.regime, Regime::SecondBracket);
        assert_abs_diff_eq!(o.effort, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(o.utility, 2.725, epsilon = 1e-12);
        assert_abs_diff_eq!(o.tax, 0.65, epsilon = 1e-12);
    }

    #[test]
    fn examples_agree_with_fine_grid() {
        for (n, u) in [(2.5, 2.32), (3.0, 2.725)] {
            let o = respond_oracle(&kinked(), n, 5.0, 1e-6).unwrap();
            assert_abs_diff_eq!(o.utility, u, epsilon = 1e-9);
        }
    }

    #[test]
    fn no_tax_example() {
        let o = respond_quadratic(&TaxPolicy::no_tax(), 7.0).unwrap();
        assert_eq!((o.effort, o.utility, o.tax), (7.0, 24.5, 0.0));
    }

    #[test]
    fn oracle_zero_skill() {
        let p = TaxPolicy::two_bracket(1.7, 0.8, 0.3, 2.0).unwrap();
        let o = respond_oracle(&p, 0.0, 1.0, 1e-3).unwrap();
        assert_eq!(o.effort, 0.0);
        assert_abs_diff_eq!(o.utility, 1.7, epsilon = 1e-15);
    }

    #[test]
    fn oracle_interior_linear() {
        let p = TaxPolicy::linear(0.0, 0.5).unwrap();
        let o = respond_oracle(&p, 4.0, 3.0, 1e-4).unwrap();
        assert!((o.effort - 2.0).abs() <= 1e-4);
        assert_abs_diff_eq!(o.utility, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn argument_validation() {
        assert!(respond_quadratic(&kinked(), -1.0).is_err());
        assert!(respond_oracle(&kinked(), 2.0, 1.0, 1e-3).is_err());
        assert!(respond_oracle(&kinked(), 2.0, 5.0, 0.0).is_err());
    }

    #[test]
    fn concave_indifference_point() {
        let p = TaxPolicy::two_bracket(0.2, 0.4, 0.9, 3.0).unwrap();
        let n3 = p.thresholds().unwrap().n3;
        let first = 0.2 + 0.5 * 0.4f64.powi(2) * n3 * n3;
        let second = 0.2 + 0.5 * 0.9f64.powi(2) * n3 * n3 - 3.0 * (0.9 - 0.4);
        assert_abs_diff_eq!(first, second, epsilon = 1e-9);
        let at = respond_quadratic(&p, n3).unwrap();
        assert_eq!(at.regime, Regime::FirstBracket);
        assert_abs_diff_eq!(at.utility, first, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_shares_still_respond() {
        let p = TaxPolicy::two_bracket(0.5, 0.0, 0.0, 1.0).unwrap();
        let o = respond_quadratic(&p, 3.0).unwrap();
        assert_eq!(o.effort, 0.0);
        assert_eq!(o.utility, 0.5);
        let p = TaxPolicy::two_bracket(0.0, 0.6, 0.0, 1.0).unwrap();
        let o = respond_quadratic(&p, 5.0).unwrap();
        assert_eq!(o.regime, Regime::Kink);
        assert_abs_diff_eq!(o.income, 1.0, epsilon = 1e-15);
    }

    fn policy() -> impl Strategy<Value = TaxPolicy> {
        (0.0..3.0f64, 0.05..=1.0f64, 0.05..=1.0f64, 0.01..20.0f64)
            .prop_map(|(a, b1, b2, y1)| TaxPolicy::two_bracket(a, b1, b2, y1).unwrap())
    }

    proptest! {
        #[test]
        fn outcome_identities(p in policy(), n in 0.0..10.0f64) {
            let o = respond_quadratic(&p, n).unwrap();
            prop_assert_eq!(o.income, n * o.effort);
            prop_assert!((o.utility - (o.income - o.tax - 0.5 * o.effort * o.effort)).abs() <= 1e-12);
            prop_assert!((o.tax - p.tax_at(o.income).unwrap()).abs() <= 1e-12);
        }

        #[test]
        fn utility_nondecreasing_in_skill(p in policy()) {
            let mut prev = respond_quadratic(&p, 0.0).unwrap().utility;
            for i in 1..=500 {
                let u = respond_quadratic(&p, i as f64 * 0.02).unwrap().utility;
                prop_assert!(u >= prev - 1e-12);
                prev = u;
            }
        }
    }
}
