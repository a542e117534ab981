use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use taxfrontier::{AxisRange, PolicySpec, SkillDistribution};

#[derive(Parser, Debug)]
#[command(
    name = "taxfrontier",
    version,
    about = "Linear and two-bracket income tax schedules scored by V = U - c*sigma_u",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal effort, income, utility and tax of one household
    Respond(RespondArgs),
    /// Budget-balancing demogrant for a policy shape
    Balance(PolicyArgs),
    /// U, sigma_u and V of a balanced policy
    Welfare(PolicyArgs),
    /// (U, sigma_u) along the linear-tax beta sweep
    FrontierLinear(FrontierLinearArgs),
    /// Closed-form optimal linear tax for one weight
    OptimizeLinear(OptimizeLinearArgs),
    /// Grid-search optimal two-bracket tax for one weight
    OptimizeTwoBracket(OptimizeTwoBracketArgs),
    /// Grid-search optimal two-bracket taxes for a list of weights
    FrontierTwoBracket(FrontierTwoBracketArgs),
    /// Optimal linear tax under logarithmic utility
    LogOptimize(LogOptimizeArgs),
    /// (U, sigma_u) along the beta sweep under logarithmic utility
    LogFrontier(LogFrontierArgs),
    /// Invariant checks with one pass/fail line each
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Skill distribution, `uniform:<a>:<b>`
    #[arg(long)]
    pub dist: Option<SkillDistribution>,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flat `key = value` file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Relative tolerance of adaptive quadrature
    #[arg(long = "quad-tol")]
    pub quad_tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// First-bracket retained share axis, `lo:hi:step`
    #[arg(long)]
    pub beta1: Option<AxisRange>,
    /// Second-bracket retained share axis, `lo:hi:step`
    #[arg(long)]
    pub beta2: Option<AxisRange>,
    /// Kink income axis, `lo:hi:step`
    #[arg(long)]
    pub y1: Option<AxisRange>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct RespondArgs {
    #[command(flatten)]
    pub common: Common,
    /// `linear:<beta>` or `twobracket:<beta1>:<beta2>:<y1>`
    #[arg(long)]
    pub policy: PolicySpec,
    /// Skill level
    #[arg(long)]
    pub n: f64,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct PolicyArgs {
    #[command(flatten)]
    pub common: Common,
    /// `linear:<beta>` or `twobracket:<beta1>:<beta2>:<y1>`
    #[arg(long)]
    pub policy: PolicySpec,
    /// Weight on sigma_u
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct FrontierLinearArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of beta samples on [0, 1]
    #[arg(long = "beta-steps")]
    pub beta_steps: Option<usize>,
    /// Weight used for the V column
    #[arg(long)]
    pub c: Option<f64>,
    /// Report in units where E[N^2] = sd(N^2) = 1
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct OptimizeLinearArgs {
    #[command(flatten)]
    pub common: Common,
    /// Weight on sigma_u
    #[arg(long)]
    pub c: Option<f64>,
    /// Report in units where E[N^2] = sd(N^2) = 1
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct OptimizeTwoBracketArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Weight on sigma_u
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct FrontierTwoBracketArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Comma-separated weights
    #[arg(long = "c-list", value_delimiter = ',')]
    pub c_list: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone)]
pub struct LogArgs {
    /// Leisure weight A
    #[arg(long = "A")]
    pub a: Option<f64>,
    /// Upper end s of the uniform skill support [0, s]
    #[arg(long = "s")]
    pub s: Option<f64>,
    /// Spacing of the beta sweep
    #[arg(long = "beta-step")]
    pub beta_step: Option<f64>,
    /// Output file
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flat `key = value` file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct LogOptimizeArgs {
    #[command(flatten)]
    pub model: LogArgs,
    /// Weight on sigma_u
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct LogFrontierArgs {
    #[command(flatten)]
    pub model: LogArgs,
    /// Weight used for the V column
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Only reproduce the five tabulated two-bracket optima
    #[arg(long)]
    pub table1: bool,
    /// Integrate the kink bunching term over [beta2, beta1] instead of
    /// [n1, n2]; a deliberately wrong variant the budget check must catch
    #[arg(long = "tamper-kink-limits")]
    pub tamper_kink_limits: bool,
}
