//! Optimal linear and two-bracket income taxation when the planner trades
//! mean utility `U` against the standard deviation of utility `σ_u`.
//!
//! Households with skill `n` choose effort `l` to maximize
//! `u(c, l) = c − l²/2` (or `ln c + A·ln(1−l)` in [`logmodel`]) where
//! `c = n·l − t(n·l)`. The demogrant `α` of the schedule `t` is always set by
//! budget balance. Policies are scored by `V = U − c·σ_u`.
//!
//! ```
//! use taxfrontier::{welfare_two_bracket, SkillDistribution};
//!
//! let skills: SkillDistribution = "uniform:0:10".parse().unwrap();
//! let eval = welfare_two_bracket(0.81, 0.69, 0.1, &skills, 0.5).unwrap();
//! assert!((eval.welfare.v - 11.5167).abs() < 1e-3);
//! ```

pub mod budget;
pub mod distribution;
pub mod error;
pub mod frontier;
pub mod household;
pub mod logmodel;
pub mod quadrature;
pub mod scalar;
pub mod schedule;
pub mod welfare;

pub use budget::{balance_linear, balance_two_bracket, tax_residual, BalancedPolicy, KinkLimits};
pub use distribution::SkillDistribution;
pub use error::{Error, Result};
pub use frontier::{
    frontier_linear, frontier_two_bracket, optimal_linear_closed_form, optimize_two_bracket,
    AxisRange, FrontierCurve, FrontierKind, FrontierSample, GridEvaluation, GridOptimum, GridSpec,
    Parallelism,
};
pub use household::{respond_oracle, respond_quadratic, HouseholdOutcome, Regime};
pub use logmodel::{LogBalance, LogEvaluation, LogModel};
pub use schedule::{PolicySpec, RegimeThresholds, TaxPolicy};
pub use welfare::{
    welfare_linear, welfare_two_bracket, LinearMoments, PolicyEvaluation, WelfarePoint,
};
