//! `taxfrontier` command-line front end. Every subcommand writes a CSV report
//! (or, for `verify`, one line per check) to standard output or `--output`.

mod args;
mod report;
mod verify;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use taxfrontier::quadrature::QuadratureOptions;
use taxfrontier::welfare::evaluate_linear;
use taxfrontier::{
    balance_linear, balance_two_bracket, frontier_linear, frontier_two_bracket,
    optimal_linear_closed_form, optimize_two_bracket, respond_quadratic, welfare_two_bracket,
    GridSpec, LinearMoments, LogModel, Parallelism, PolicyEvaluation, PolicySpec,
    SkillDistribution,
};

use args::{Cli, Command, Common, GridArgs, LogArgs};
use report::{num, Report, COLUMNS};

/// Outcome of a run that did not succeed.
enum Failure {
    Usage(String),
    Numeric(String),
    Verify(String),
}

impl From<taxfrontier::Error> for Failure {
    fn from(e: taxfrontier::Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Run = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let argv = match with_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("taxfrontier: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("taxfrontier: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("taxfrontier: numeric failure: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("taxfrontier: verify failed: {m}");
            ExitCode::from(1)
        }
    }
}

/// Splices the `key = value` lines of a `--config` file in front of the
/// command-line flags, so that flags given explicitly override them.
fn with_config(argv: Vec<String>) -> std::result::Result<Vec<String>, String> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut extra = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected `key = value`", lineno + 1))?;
        let key = key.trim().trim_start_matches("--");
        if key == "config" {
            return Err(format!("{path}:{}: config files cannot nest", lineno + 1));
        }
        match value.trim() {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            v => {
                extra.push(format!("--{key}"));
                extra.push(v.to_string());
            }
        }
    }
    // argv[0] is the program, argv[1] the subcommand
    let at = argv.len().min(2);
    let mut out = argv[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

fn emit(report: &Report, output: Option<&Path>) -> Run {
    let text = report.render();
    match output {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn skills(report: &mut Report, common: &Common) -> std::result::Result<SkillDistribution, Failure> {
    let d = report.param("dist", common.dist.clone(), SkillDistribution::uniform(0.0, 10.0)?);
    let tol = report.float("quad-tol", common.quad_tol, QuadratureOptions::default().rel_tol);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Failure::Usage(format!("quad-tol must lie in (0, 1), got {tol}")));
    }
    Ok(d.with_quadrature(QuadratureOptions::default().with_rel_tol(tol)))
}

fn grid(report: &mut Report, g: &GridArgs) -> std::result::Result<GridSpec, Failure> {
    let default = GridSpec::default();
    let spec = GridSpec {
        beta1: report.param("beta1", g.beta1, default.beta1),
        beta2: report.param("beta2", g.beta2, default.beta2),
        y1: report.param("y1", g.y1, default.y1),
    };
    spec.validate()?;
    Ok(spec)
}

fn evaluate(spec: PolicySpec, d: &SkillDistribution, c: f64) -> taxfrontier::Result<PolicyEvaluation> {
    match spec {
        PolicySpec::Linear { beta } => evaluate_linear(beta, d, c),
        PolicySpec::TwoBracket { beta1, beta2, y1 } => welfare_two_bracket(beta1, beta2, y1, d, c),
    }
}

fn log_model(
    report: &mut Report,
    m: &LogArgs,
    default_step: f64,
) -> std::result::Result<(LogModel, f64), Failure> {
    let a = report.float("A", m.a, 1.0);
    let s = report.float("s", m.s, 1e12);
    let step = report.float("beta-step", m.beta_step, default_step);
    Ok((LogModel::new(a, s)?, step))
}

fn run(command: Command) -> Run {
    let workers = Parallelism::from_env()?;
    match command {
        Command::Respond(a) => {
            let mut r = Report::new("respond");
            let d = skills(&mut r, &a.common)?;
            r.note(format_args!("policy = {}", a.policy));
            r.note(format_args!("n = {}", num(a.n)));
            let policy = match a.policy {
                PolicySpec::Linear { beta } => balance_linear(beta, &d)?,
                PolicySpec::TwoBracket { beta1, beta2, y1 } => balance_two_bracket(beta1, beta2, y1, &d)?,
            }
            .policy;
            r.note(format_args!("alpha = {} (budget balance)", num(policy.alpha)));
            let o = respond_quadratic(&policy, a.n)?;
            r.line("n,l_star,y_star,u_star,t_star,regime");
            r.line(format_args!(
                "{},{},{},{},{},{:?}",
                num(o.skill),
                num(o.effort),
                num(o.income),
                num(o.utility),
                num(o.tax),
                o.regime
            ));
            emit(&r, a.common.output.as_deref())
        }
        Command::Balance(a) => {
            let mut r = Report::new("balance");
            let d = skills(&mut r, &a.common)?;
            r.note(format_args!("policy = {}", a.policy));
            let c = r.float("c", a.c, 0.0);
            let bal = match a.policy {
                PolicySpec::Linear { beta } => balance_linear(beta, &d)?,
                PolicySpec::TwoBracket { beta1, beta2, y1 } => balance_two_bracket(beta1, beta2, y1, &d)?,
            };
            let e = evaluate(a.policy, &d, c)?;
            r.note(format_args!("budget residual = {:.3e}", bal.residual));
            r.line(COLUMNS);
            r.row(None, c, &bal.policy, &e.welfare);
            emit(&r, a.common.output.as_deref())
        }
        Command::Welfare(a) => {
            let mut r = Report::new("welfare");
            let d = skills(&mut r, &a.common)?;
            r.note(format_args!("policy = {}", a.policy));
            let c = r.float("c", a.c, 0.0);
            let e = evaluate(a.policy, &d, c)?;
            r.line(COLUMNS);
            r.row(None, c, &e.policy, &e.welfare);
            emit(&r, a.common.output.as_deref())
        }
        Command::FrontierLinear(a) => {
            let mut r = Report::new("frontier-linear");
            let steps = r.param("beta-steps", a.beta_steps, 101);
            let c = r.float("c", a.c, 0.0);
            let curve = if a.normalized {
                r.note("units = normalized, E[N^2] = sd(N^2) = 1");
                let m = LinearMoments::normalized();
                let mut curve = taxfrontier::frontier::frontier_linear_moments(&m, steps)?;
                for s in &mut curve.samples {
                    s.policy = s.policy.with_alpha((1.0 - s.sweep) * s.sweep * m.second);
                }
                curve
            } else {
                let d = skills(&mut r, &a.common)?;
                frontier_linear(&d, steps)?
            };
            r.note(format_args!("sweep = {}", curve.kind));
            r.line(format_args!("sweep_param,{COLUMNS}"));
            for s in &curve.samples {
                r.row(Some(s.sweep), c, &s.policy, &s.welfare.with_weight(c));
            }
            emit(&r, a.common.output.as_deref())
        }
        Command::OptimizeLinear(a) => {
            let mut r = Report::new("optimize-linear");
            let c = r.float("c", a.c, 0.0);
            let m = if a.normalized {
                r.note("units = normalized, E[N^2] = sd(N^2) = 1");
                LinearMoments::normalized()
            } else {
                LinearMoments::of(&skills(&mut r, &a.common)?)?
            };
            let (beta, w) = optimal_linear_closed_form(c, &m)?;
            let policy = taxfrontier::TaxPolicy::linear((1.0 - beta) * beta * m.second, beta)?;
            r.line(COLUMNS);
            r.row(None, c, &policy, &w);
            emit(&r, a.common.output.as_deref())
        }
        Command::OptimizeTwoBracket(a) => {
            let mut r = Report::new("optimize-two-bracket");
            let d = skills(&mut r, &a.common)?;
            let g = grid(&mut r, &a.grid)?;
            let c = r.float("c", a.c, 0.0);
            let best = optimize_two_bracket(c, &d, &g, workers)?;
            r.note(format_args!("grid cells = {}", g.len()));
            r.line(COLUMNS);
            r.row(None, c, &best.evaluation.policy, &best.evaluation.welfare);
            emit(&r, a.common.output.as_deref())
        }
        Command::FrontierTwoBracket(a) => {
            let mut r = Report::new("frontier-two-bracket");
            let d = skills(&mut r, &a.common)?;
            let g = grid(&mut r, &a.grid)?;
            let cs = a.c_list.clone().unwrap_or_else(|| vec![0.1, 0.2, 0.3, 0.4, 0.5]);
            let shown = cs.iter().map(|&c| num(c)).collect::<Vec<_>>().join(",");
            r.param("c-list", a.c_list.as_ref().map(|_| shown.clone()), shown.clone());
            let curve = frontier_two_bracket(&cs, &d, &g, workers)?;
            r.note(format_args!("sweep = {}", curve.kind));
            r.line(format_args!("sweep_param,{COLUMNS}"));
            for s in &curve.samples {
                r.row(Some(s.sweep), s.sweep, &s.policy, &s.welfare);
            }
            emit(&r, a.common.output.as_deref())
        }
        Command::LogOptimize(a) => {
            let mut r = Report::new("log-optimize");
            let (model, step) = log_model(&mut r, &a.model, 1e-4)?;
            let c = r.float("c", a.c, 0.0);
            let e = model.optimize(c, step, workers)?;
            r.note(format_args!("budget relative residual = {:.3e}", e.balance.relative_residual));
            r.line(COLUMNS);
            r.log_row(None, c, e.balance.beta, e.balance.alpha, &e.welfare);
            emit(&r, a.model.output.as_deref())
        }
        Command::LogFrontier(a) => {
            let mut r = Report::new("log-frontier");
            // the sweep itself is the output here, so the default spacing is coarser
            let (model, step) = log_model(&mut r, &a.model, 1e-3)?;
            let c = r.float("c", a.c, 0.0);
            let curve = model.frontier(step, workers)?;
            r.note(format_args!("sweep = {}", curve.kind));
            r.line(format_args!("sweep_param,{COLUMNS}"));
            for s in &curve.samples {
                r.log_row(Some(s.sweep), c, s.sweep, s.policy.alpha, &s.welfare.with_weight(c));
            }
            emit(&r, a.model.output.as_deref())
        }
        Command::Verify(a) => verify::run(a, workers),
    }
}
