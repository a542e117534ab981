//! Demogrant that makes total collected tax zero.

use crate::distribution::SkillDistribution;
use crate::error::{invalid, Error, Result};
use crate::household::{regime_bounds, respond_quadratic};
use crate::schedule::TaxPolicy;

/// A policy whose `alpha` balances the budget, with the quadrature check of
/// `∫ t(n) f(n) dn` at that `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedPolicy {
    pub policy: TaxPolicy,
    pub residual: f64,
}

/// Limits used for the bunching-at-the-kink term of a convex schedule.
///
/// `Thresholds` integrates over the skill interval `[n1, n2]` where households
/// sit at the kink. `ShareLiterals` integrates over `[β1, β2]` instead; it is
/// kept only as a known-wrong variant for exercising the residual check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KinkLimits {
    #[default]
    Thresholds,
    ShareLiterals,
}

fn finite_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() {
        Ok(alpha)
    } else {
        Err(Error::NumericDomain(format!("balancing demogrant is {alpha}")))
    }
}

fn check_share(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {v}")))
    }
}

/// `∫ t_max(n) f(n) dn` by adaptive quadrature, split at every regime boundary.
pub fn tax_residual(policy: &TaxPolicy, dist: &SkillDistribution) -> Result<f64> {
    let (lo, hi) = dist.support();
    let (n1, n2, n3) = regime_bounds(policy);
    dist.expect_split(
        |n| respond_quadratic(policy, n).map_or(f64::NAN, |o| o.tax),
        lo,
        hi,
        &[n1, n2, n3],
    )
}

/// Linear schedule: `α = (1−β)·β·E[N²]`.
pub fn balance_linear(beta: f64, dist: &SkillDistribution) -> Result<BalancedPolicy> {
    check_share("beta", beta)?;
    let alpha = finite_alpha((1.0 - beta) * beta * dist.moment(2)?)?;
    let policy = TaxPolicy::linear(alpha, beta)?;
    Ok(BalancedPolicy {
        policy,
        residual: tax_residual(&policy, dist)?,
    })
}

/// Two-bracket schedule, splitting the revenue integral by regime.
pub fn balance_two_bracket(
    beta1: f64,
    beta2: f64,
    y1: f64,
    dist: &SkillDistribution,
) -> Result<BalancedPolicy> {
    balance_two_bracket_with(beta1, beta2, y1, dist, KinkLimits::Thresholds)
}

pub fn balance_two_bracket_with(
    beta1: f64,
    beta2: f64,
    y1: f64,
    dist: &SkillDistribution,
    limits: KinkLimits,
) -> Result<BalancedPolicy> {
    let alpha = finite_alpha(two_bracket_alpha(beta1, beta2, y1, dist, limits)?)?;
    let policy = TaxPolicy::two_bracket(alpha, beta1, beta2, y1)?;
    Ok(BalancedPolicy {
        policy,
        residual: tax_residual(&policy, dist)?,
    })
}

/// Balancing demogrant without the residual check.
pub fn two_bracket_alpha(
    beta1: f64,
    beta2: f64,
    y1: f64,
    dist: &SkillDistribution,
    limits: KinkLimits,
) -> Result<f64> {
    check_share("beta1", beta1)?;
    check_share("beta2", beta2)?;
    if !(y1 > 0.0 && y1.is_finite()) {
        return Err(invalid(format!("kink income y1 must be finite and > 0, got {y1}")));
    }
    let shape = TaxPolicy { alpha: 0.0, beta1, beta2, y1 };
    let (n1, n2, n3) = regime_bounds(&shape);
    let inf = f64::INFINITY;
    let p = |k: i32, a: f64, b: f64| dist.power_integral(k, a, b);
    let upper_bracket = |from: f64| -> Result<f64> {
        Ok((1.0 - beta2) * beta2 * p(2, from, inf)? + (beta2 - beta1) * y1 * p(0, from, inf)?)
    };
    if beta1 <= beta2 {
        Ok((1.0 - beta1) * beta1 * p(2, 0.0, n3)? + upper_bracket(n3)?)
    } else {
        let bunched_mass = match limits {
            KinkLimits::Thresholds => p(0, n1, n2)?,
            KinkLimits::ShareLiterals => -p(0, beta2, beta1)?,
        };
        Ok((1.0 - beta1) * beta1 * p(2, 0.0, n1)?
            + (1.0 - beta1) * y1 * bunched_mass
            + upper_bracket(n2)?)
    }
}
