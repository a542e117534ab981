//! Linear taxation under logarithmic utility `u(c, l) = ln c + A·ln(1 − l)`
//! with skills uniform on `[0, s]`.
//!
//! The effort rule comes from the first-order condition
//! `β·n/(α + β·n·l) = A/(1 − l)`, giving
//! `l* = max(0, (β·n − A·α)/((A+1)·β·n))` and a participation threshold
//! `n0 = A·α/β`. The demogrant is found by root-finding on the budget
//! residual; the closed-form share ratio is reported alongside it.

use rayon::prelude::*;

use crate::distribution::SkillDistribution;
use crate::error::{invalid, Error, Result};
use crate::frontier::{FrontierCurve, FrontierKind, FrontierSample, Parallelism};
use crate::household::{HouseholdOutcome, Regime};
use crate::scalar::{brent_root, golden_max};
use crate::schedule::TaxPolicy;
use crate::welfare::{check_weight, WelfarePoint};

/// Preference weight on leisure and the top of the skill range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogModel {
    pub leisure_weight: f64,
    pub skill_max: f64,
}

/// Budget-balancing demogrant for a retained share, with both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBalance {
    pub beta: f64,
    /// Root of the budget residual.
    pub alpha: f64,
    /// `α` from the closed-form share ratio `α/(β·s)`.
    pub alpha_closed_form: f64,
    /// `|∫ t f| / α` at the root.
    pub relative_residual: f64,
}

/// Welfare of a balanced log-utility policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEvaluation {
    pub balance: LogBalance,
    pub welfare: WelfarePoint,
}

impl LogEvaluation {
    pub fn policy(&self) -> TaxPolicy {
        TaxPolicy {
            alpha: self.balance.alpha,
            beta1: self.balance.beta,
            beta2: self.balance.beta,
            y1: 0.0,
        }
    }
}

/// `k(A) = A·ln A − (A+1)·ln(A+1)`.
pub fn k_constant(a: f64) -> f64 {
    a * a.ln() - (a + 1.0) * (a + 1.0).ln()
}

/// Terms of the indicator decomposition of `U` and `σ_u²` (unit leisure
/// weight): `u = ln α + (k + h(n))·1{n ≥ n0}` with
/// `h(n) = ln(1 + n/(α/β)) + ln((α/β + n)/n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDecomposition {
    pub mean_utility: f64,
    /// `k²·Var(1{N ≥ n0})`
    pub indicator_variance: f64,
    /// `Var(h(N)·1{N ≥ n0})`
    pub spread_variance: f64,
    /// `2k·P(N < n0)·E[h(N)·1{N ≥ n0}]`
    pub cross_term: f64,
}

impl LogDecomposition {
    pub fn variance(&self) -> f64 {
        self.indicator_variance + self.spread_variance + self.cross_term
    }
}

impl LogModel {
    pub fn new(leisure_weight: f64, skill_max: f64) -> Result<Self> {
        if !(leisure_weight > 0.0 && leisure_weight.is_finite()) {
            return Err(invalid(format!("leisure weight A must be > 0, got {leisure_weight}")));
        }
        if !(skill_max > 0.0 && skill_max.is_finite()) {
            return Err(invalid(format!("skill bound s must be > 0, got {skill_max}")));
        }
        Ok(Self { leisure_weight, skill_max })
    }

    fn skills(&self) -> SkillDistribution {
        SkillDistribution::uniform(0.0, self.skill_max).expect("validated bound")
    }

    fn check_beta(beta: f64) -> Result<()> {
        if beta > 0.0 && beta < 1.0 {
            Ok(())
        } else {
            Err(invalid(format!("beta must lie in (0, 1), got {beta}")))
        }
    }

    /// Skill below which effort is zero, `A·α/β`.
    pub fn participation_threshold(&self, beta: f64, alpha: f64) -> f64 {
        self.leisure_weight * alpha / beta
    }

    fn effort(&self, beta: f64, alpha: f64, n: f64) -> f64 {
        let a = self.leisure_weight;
        if n <= a * alpha / beta {
            0.0
        } else {
            (beta * n - a * alpha) / ((a + 1.0) * beta * n)
        }
    }

    fn utility(&self, beta: f64, alpha: f64, n: f64) -> f64 {
        let l = self.effort(beta, alpha, n);
        if l == 0.0 {
            alpha.ln()
        } else {
            (alpha + beta * n * l).ln() + self.leisure_weight * (1.0 - l).ln()
        }
    }

    fn tax(&self, beta: f64, alpha: f64, n: f64) -> f64 {
        -alpha + (1.0 - beta) * n * self.effort(beta, alpha, n)
    }

    /// Optimal effort of a household with skill `n ∈ [0, s]`.
    pub fn respond(&self, beta: f64, alpha: f64, n: f64) -> Result<HouseholdOutcome> {
        Self::check_beta(beta)?;
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidModel(format!(
                "log utility needs a positive demogrant, got alpha = {alpha}"
            )));
        }
        if !(n >= 0.0 && n <= self.skill_max) {
            return Err(invalid(format!("skill must lie in [0, {}], got {n}", self.skill_max)));
        }
        let effort = self.effort(beta, alpha, n);
        Ok(HouseholdOutcome {
            skill: n,
            effort,
            income: n * effort,
            utility: self.utility(beta, alpha, n),
            tax: self.tax(beta, alpha, n),
            regime: if effort == 0.0 { Regime::NoEffort } else { Regime::FirstBracket },
        })
    }

    /// `∫ t(n) f(n) dn` at demogrant `alpha`.
    pub fn budget_residual(&self, beta: f64, alpha: f64) -> Result<f64> {
        let n0 = self.participation_threshold(beta, alpha);
        self.skills()
            .expect_split(|n| self.tax(beta, alpha, n), 0.0, self.skill_max, &[n0])
    }

    /// Closed-form `α/(β·s)` from the budget condition:
    /// `A/(1−β)·(1 + Aβ − √((A+1)·β·(2 + (A−1)·β)))`.
    pub fn closed_form_share_ratio(&self, beta: f64) -> f64 {
        let a = self.leisure_weight;
        a / (1.0 - beta) * (1.0 + a * beta - ((a + 1.0) * beta * (2.0 + (a - 1.0) * beta)).sqrt())
    }

    /// Demogrant that zeroes the budget residual, by bracketed root search.
    pub fn balance(&self, beta: f64) -> Result<LogBalance> {
        Self::check_beta(beta)?;
        // At α = β·s/A nobody works and the residual is −α < 0; as α → 0 it
        // tends to (1−β)·E[N]/(A+1) > 0.
        let hi = beta * self.skill_max / self.leisure_weight;
        let lo = hi * 1e-15;
        let alpha = brent_root(|x| self.budget_residual(beta, x), lo, hi, 1e-13)?;
        if !(alpha > 0.0) {
            return Err(Error::NoBalance(format!("root alpha = {alpha} is not positive")));
        }
        let residual = self.budget_residual(beta, alpha)?;
        Ok(LogBalance {
            beta,
            alpha,
            alpha_closed_form: self.closed_form_share_ratio(beta) * beta * self.skill_max,
            relative_residual: residual.abs() / alpha,
        })
    }

    /// `U = E[u*]` and `σ_u` by quadrature split at the participation threshold.
    pub fn welfare(&self, beta: f64, c: f64) -> Result<LogEvaluation> {
        check_weight(c)?;
        let balance = self.balance(beta)?;
        let welfare = self.welfare_at(beta, balance.alpha, c)?;
        Ok(LogEvaluation { balance, welfare })
    }

    /// Welfare at an arbitrary (not necessarily balancing) demogrant.
    pub fn welfare_at(&self, beta: f64, alpha: f64, c: f64) -> Result<WelfarePoint> {
        check_weight(c)?;
        Self::check_beta(beta)?;
        if !(alpha > 0.0) {
            return Err(Error::InvalidModel(format!("alpha must be > 0, got {alpha}")));
        }
        let d = self.skills();
        let s = self.skill_max;
        let cut = [self.participation_threshold(beta, alpha)];
        let u = |n: f64| self.utility(beta, alpha, n);
        let mean = d.expect_split(u, 0.0, s, &cut)?;
        let var = d.expect_split(|n| (u(n) - mean).powi(2), 0.0, s, &cut)?;
        Ok(WelfarePoint::new(mean, var.max(0.0).sqrt(), c))
    }

    /// Indicator decomposition of the utility moments; holds for `A = 1`.
    pub fn decomposition(&self, beta: f64, alpha: f64) -> Result<LogDecomposition> {
        if self.leisure_weight != 1.0 {
            return Err(Error::InvalidModel(
                "the indicator decomposition is stated for A = 1".into(),
            ));
        }
        Self::check_beta(beta)?;
        let d = self.skills();
        let s = self.skill_max;
        let ratio = alpha / beta;
        let n0 = ratio;
        let k = k_constant(1.0);
        let h = |n: f64| (1.0 + n / ratio).ln() + ((ratio + n) / n).ln();
        let working = d.expect(|_| 1.0, n0, s)?;
        let idle = 1.0 - working;
        let eh = d.expect(h, n0, s)?;
        let eh2 = d.expect(|n| h(n).powi(2), n0, s)?;
        Ok(LogDecomposition {
            mean_utility: alpha.ln() + k * working + eh,
            indicator_variance: k * k * working * idle,
            spread_variance: eh2 - eh * eh,
            cross_term: 2.0 * k * idle * eh,
        })
    }

    /// Maximizes `V = U − c·σ_u` over `β ∈ {step, 2·step, …} ⊂ (0, 1)` and
    /// refines the best cell by golden-section search.
    pub fn optimize(&self, c: f64, beta_step: f64, workers: Parallelism) -> Result<LogEvaluation> {
        check_weight(c)?;
        let sweep = self.sweep(beta_step, workers)?;
        let score = |e: &LogEvaluation| e.welfare.with_weight(c).v;
        let mut best = 0;
        for (i, e) in sweep.iter().enumerate() {
            if score(e) > score(&sweep[best]) {
                best = i;
            }
        }
        let lo = if best == 0 { sweep[0].balance.beta * 0.5 } else { sweep[best - 1].balance.beta };
        let hi = if best + 1 == sweep.len() {
            0.5 * (sweep[best].balance.beta + 1.0)
        } else {
            sweep[best + 1].balance.beta
        };
        let objective = |b: f64| self.welfare(b, c).map_or(f64::NEG_INFINITY, |e| e.welfare.v);
        let (beta, v) = golden_max(objective, lo, hi, 1e-9);
        if v > score(&sweep[best]) {
            self.welfare(beta, c)
        } else {
            Ok(LogEvaluation {
                welfare: sweep[best].welfare.with_weight(c),
                ..sweep[best]
            })
        }
    }

    /// Balanced welfare at `β = step, 2·step, …` strictly inside `(0, 1)`.
    pub fn sweep(&self, beta_step: f64, workers: Parallelism) -> Result<Vec<LogEvaluation>> {
        if !(beta_step > 0.0 && beta_step < 0.5) {
            return Err(invalid(format!("beta step must lie in (0, 0.5), got {beta_step}")));
        }
        let count = (1.0 / beta_step - 1e-9).floor() as usize;
        let betas: Vec<f64> = (1..=count)
            .map(|i| i as f64 * beta_step)
            .filter(|&b| b < 1.0)
            .collect();
        workers.install(|| {
            betas
                .par_iter()
                .map(|&b| self.welfare(b, 0.0))
                .collect::<Result<Vec<_>>>()
        })?
    }

    /// `(U, σ_u)` along the `β` sweep, truncated after the `U`-maximizing
    /// sample: larger `β` only adds dispersion at lower welfare.
    pub fn frontier(&self, beta_step: f64, workers: Parallelism) -> Result<FrontierCurve> {
        let sweep = self.sweep(beta_step, workers)?;
        let peak = peak_index(&sweep);
        let samples = sweep[..=peak]
            .iter()
            .map(|e| FrontierSample {
                sweep: e.balance.beta,
                policy: e.policy(),
                welfare: e.welfare,
            })
            .collect();
        Ok(FrontierCurve {
            kind: FrontierKind::LogBetaSweep,
            samples,
        })
    }
}

fn peak_index(sweep: &[LogEvaluation]) -> usize {
    let mut peak = 0;
    for (i, e) in sweep.iter().enumerate() {
        if e.welfare.mean_utility > sweep[peak].welfare.mean_utility {
            peak = i;
        }
    }
    peak
}

/// Indices where `U(β)` turns down and later back up, i.e. local minima
/// interior to the sweep. Empty for a unimodal curve.
pub fn unimodality_violations(sweep: &[LogEvaluation]) -> Vec<usize> {
    let u: Vec<f64> = sweep.iter().map(|e| e.welfare.mean_utility).collect();
    (1..u.len().saturating_sub(1))
        .filter(|&i| u[i] < u[i - 1] && u[i] < u[i + 1])
        .collect()
}
