//! Mean utility `U`, utility dispersion `σ_u` and the scalarized objective
//! `V = U − c·σ_u` of a budget-balanced policy.

use crate::budget::{balance_linear, two_bracket_alpha, KinkLimits};
use crate::distribution::SkillDistribution;
use crate::error::{invalid, Result};
use crate::household::{regime_bounds, respond_quadratic};
use crate::schedule::TaxPolicy;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfarePoint {
    /// `U`, including the demogrant.
    pub mean_utility: f64,
    /// `σ_u`, the standard deviation of individual utility.
    pub sigma_u: f64,
    /// Inequality weight `c`.
    pub c: f64,
    /// `U − c·σ_u`.
    pub v: f64,
}

impl WelfarePoint {
    pub fn new(mean_utility: f64, sigma_u: f64, c: f64) -> Self {
        Self {
            mean_utility,
            sigma_u,
            c,
            v: mean_utility - c * sigma_u,
        }
    }

    /// Same `(U, σ_u)` scored with a different weight.
    pub fn with_weight(&self, c: f64) -> Self {
        Self::new(self.mean_utility, self.sigma_u, c)
    }
}

/// A balanced policy together with its welfare.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyEvaluation {
    pub policy: TaxPolicy,
    pub welfare: WelfarePoint,
}

/// The two population moments the linear closed forms depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMoments {
    /// `E[N²]`
    pub second: f64,
    /// `σ(N²)`
    pub sd_of_square: f64,
}

impl LinearMoments {
    pub fn of(dist: &SkillDistribution) -> Result<Self> {
        Ok(Self {
            second: dist.moment(2)?,
            sd_of_square: dist.variance_of_square()?.sqrt(),
        })
    }

    /// Unit moments; `U` and `σ_u` then come out in normalized units.
    pub fn normalized() -> Self {
        Self {
            second: 1.0,
            sd_of_square: 1.0,
        }
    }
}

pub(crate) fn check_weight(c: f64) -> Result<()> {
    if c >= 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("weight c must be finite and >= 0, got {c}")))
    }
}

/// `U = β(1 − β/2)·E[N²]`, `σ_u = β²·σ(N²)/2`.
pub fn welfare_linear_moments(beta: f64, moments: &LinearMoments, c: f64) -> Result<WelfarePoint> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("beta must lie in [0, 1], got {beta}")));
    }
    check_weight(c)?;
    Ok(WelfarePoint::new(
        beta * (1.0 - 0.5 * beta) * moments.second,
        0.5 * beta * beta * moments.sd_of_square,
        c,
    ))
}

pub fn welfare_linear(beta: f64, dist: &SkillDistribution, c: f64) -> Result<WelfarePoint> {
    welfare_linear_moments(beta, &LinearMoments::of(dist)?, c)
}

/// Linear schedule evaluated together with its balancing demogrant.
pub fn evaluate_linear(beta: f64, dist: &SkillDistribution, c: f64) -> Result<PolicyEvaluation> {
    let welfare = welfare_linear(beta, dist, c)?;
    let policy = balance_linear(beta, dist)?.policy;
    Ok(PolicyEvaluation { policy, welfare })
}

/// `E[g]` and `E[g²]` for the demogrant-free utility profile
/// `g(n) = u_max(n) − α`, integrated piecewise by regime.
fn utility_moments(p: &TaxPolicy, dist: &SkillDistribution) -> Result<(f64, f64)> {
    let (b1, b2, y1) = (p.beta1, p.beta2, p.y1);
    let (n1, n2, n3) = regime_bounds(p);
    let inf = f64::INFINITY;
    let pw = |k: i32, a: f64, b: f64| dist.power_integral(k, a, b);
    // second bracket: g = β2²n²/2 − d
    let d = y1 * (b2 - b1);
    let upper = |from: f64| -> Result<(f64, f64)> {
        let (p0, p2, p4) = (pw(0, from, inf)?, pw(2, from, inf)?, pw(4, from, inf)?);
        Ok((
            0.5 * b2 * b2 * p2 - d * p0,
            0.25 * b2.powi(4) * p4 - b2 * b2 * d * p2 + d * d * p0,
        ))
    };
    let lower = |to: f64| -> Result<(f64, f64)> {
        Ok((0.5 * b1 * b1 * pw(2, 0.0, to)?, 0.25 * b1.powi(4) * pw(4, 0.0, to)?))
    };
    if b1 <= b2 {
        let (l1, l2) = lower(n3)?;
        let (u1, u2) = upper(n3)?;
        Ok((l1 + u1, l2 + u2))
    } else {
        let (l1, l2) = lower(n1)?;
        let (u1, u2) = upper(n2)?;
        // bunching at the kink: g = β1·y1 − y1²/(2n²)
        let (k, q) = (b1 * y1, 0.5 * y1 * y1);
        let (m1, m2) = if n2 > n1 {
            let (p0, pm2, pm4) = (pw(0, n1, n2)?, pw(-2, n1, n2)?, pw(-4, n1, n2)?);
            (k * p0 - q * pm2, k * k * p0 - 2.0 * k * q * pm2 + q * q * pm4)
        } else {
            (0.0, 0.0)
        };
        Ok((l1 + m1 + u1, l2 + m2 + u2))
    }
}

/// Two-bracket welfare with the demogrant re-balanced for `(β1, β2, y1)`.
pub fn welfare_two_bracket(
    beta1: f64,
    beta2: f64,
    y1: f64,
    dist: &SkillDistribution,
    c: f64,
) -> Result<PolicyEvaluation> {
    check_weight(c)?;
    let alpha = two_bracket_alpha(beta1, beta2, y1, dist, KinkLimits::Thresholds)?;
    let policy = TaxPolicy::two_bracket(alpha, beta1, beta2, y1)?;
    let (mean, second) = utility_moments(&policy, dist)?;
    let sigma_u = (second - mean * mean).max(0.0).sqrt();
    Ok(PolicyEvaluation {
        policy,
        welfare: WelfarePoint::new(alpha + mean, sigma_u, c),
    })
}

/// Welfare from the definition: quadrature of `u_max` and `u_max²` taken
/// from the household response, with the demogrant included.
pub fn welfare_by_quadrature(policy: &TaxPolicy, dist: &SkillDistribution, c: f64) -> Result<WelfarePoint> {
    check_weight(c)?;
    let (lo, hi) = dist.support();
    let (n1, n2, n3) = regime_bounds(policy);
    let cuts = [n1, n2, n3];
    let u = |n: f64| respond_quadratic(policy, n).map_or(f64::NAN, |o| o.utility);
    let mean = dist.expect_split(u, lo, hi, &cuts)?;
    let second = dist.expect_split(|n| u(n).powi(2), lo, hi, &cuts)?;
    Ok(WelfarePoint::new(mean, (second - mean * mean).max(0.0).sqrt(), c))
}

/// Central finite differences `(∂U/∂β1, ∂U/∂β2)` with the demogrant
/// re-balanced at every evaluation. Shares are clamped to `[h, 1−h]`.
pub fn mean_utility_gradient(
    beta1: f64,
    beta2: f64,
    y1: f64,
    dist: &SkillDistribution,
    h: f64,
) -> Result<(f64, f64)> {
    if !(h > 0.0 && h < 0.5) {
        return Err(invalid(format!("step must lie in (0, 0.5), got {h}")));
    }
    let b1 = beta1.clamp(h, 1.0 - h);
    let b2 = beta2.clamp(h, 1.0 - h);
    let u = |x1: f64, x2: f64| -> Result<f64> {
        Ok(welfare_two_bracket(x1, x2, y1, dist, 0.0)?.welfare.mean_utility)
    };
    let d1 = (u(b1 + h, b2)? - u(b1 - h, b2)?) / (2.0 * h);
    let d2 = (u(b1, b2 + h)? - u(b1, b2 - h)?) / (2.0 * h);
    Ok((d1, d2))
}
