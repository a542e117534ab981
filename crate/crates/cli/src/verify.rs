use taxfrontier::budget::{two_bracket_alpha, KinkLimits};
use taxfrontier::welfare::{mean_utility_gradient, welfare_by_quadrature};
use taxfrontier::{
    frontier_linear, optimize_two_bracket, respond_oracle, respond_quadratic, tax_residual,
    welfare_two_bracket, GridEvaluation, GridSpec, LinearMoments, Parallelism, SkillDistribution,
    TaxPolicy,
};

use crate::args::VerifyArgs;
use crate::report::{num, Report};
use crate::{emit, skills, Failure, Run};

/// `(c, β1, β2, y1, V)` of the reference two-bracket optima on uniform(0, 10).
const TABLE: [(f64, f64, f64, f64, f64); 5] = [
    (0.1, 0.95, 0.92, 0.1, 15.2982),
    (0.2, 0.91, 0.85, 0.1, 14.1376),
    (0.3, 0.87, 0.79, 0.1, 13.1407),
    (0.4, 0.84, 0.74, 0.1, 12.2749),
    (0.5, 0.81, 0.69, 0.1, 11.5167),
];

const SHARES: [f64; 6] = [0.05, 0.25, 0.45, 0.65, 0.85, 1.0];

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Kink incomes spread over the part of the income range where the regime
/// boundaries fall inside the skill support.
fn kink_incomes(d: &SkillDistribution) -> [f64; 4] {
    let (_, hi) = d.support();
    [0.0005, 0.005, 0.02, 0.05].map(|f| f * hi * hi)
}

fn budget(d: &SkillDistribution, limits: KinkLimits) -> taxfrontier::Result<Check> {
    let scale = d.moment(2)?.max(1.0);
    let mut worst = 0.0f64;
    for b1 in SHARES {
        for b2 in SHARES {
            for y1 in kink_incomes(d) {
                let alpha = two_bracket_alpha(b1, b2, y1, d, limits)?;
                // the residual is affine in alpha with slope -1
                let base = tax_residual(&TaxPolicy::two_bracket(0.0, b1, b2, y1)?, d)?;
                worst = worst.max((base - alpha).abs() / scale);
            }
        }
    }
    Ok(check(
        "budget-residual",
        worst <= 1e-9,
        format!("max |∫t f| / E[N^2] = {worst:.3e} over 144 policies (tol 1e-9)"),
    ))
}

fn oracle(d: &SkillDistribution) -> taxfrontier::Result<Check> {
    let (lo, hi) = d.support();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for b1 in SHARES {
        for b2 in SHARES {
            for y1 in kink_incomes(d) {
                let alpha = two_bracket_alpha(b1, b2, y1, d, KinkLimits::Thresholds)?.max(0.0);
                let p = TaxPolicy::two_bracket(alpha, b1, b2, y1)?;
                for k in 0..=4 {
                    let n = lo + (hi - lo) * k as f64 / 4.0;
                    let a = respond_quadratic(&p, n)?;
                    let b = respond_oracle(&p, n, b1.max(b2) * n + 1.0, 1e-3)?;
                    worst = worst.max((a.utility - b.utility).abs());
                    cases += 1;
                }
            }
        }
    }
    Ok(check(
        "oracle-equivalence",
        worst <= 1e-6,
        format!("max |u_closed - u_search| = {worst:.3e} over {cases} households (tol 1e-6)"),
    ))
}

fn variance(d: &SkillDistribution) -> taxfrontier::Result<Check> {
    let mut worst = 0.0f64;
    for b1 in SHARES {
        for b2 in SHARES {
            for y1 in kink_incomes(d) {
                let split = welfare_two_bracket(b1, b2, y1, d, 0.0)?;
                let blind = welfare_by_quadrature(&split.policy, d, 0.0)?;
                let (a, b) = (split.welfare.sigma_u.powi(2), blind.sigma_u.powi(2));
                worst = worst.max((a - b).abs() / b.max(f64::MIN_POSITIVE));
            }
        }
    }
    Ok(check(
        "variance-split",
        worst <= 1e-9,
        format!("max relative gap of sigma_u^2 vs quadrature = {worst:.3e} (tol 1e-9)"),
    ))
}

fn frontier(d: &SkillDistribution) -> taxfrontier::Result<Check> {
    let m = LinearMoments::of(d)?;
    let worst = frontier_linear(d, 1001)?
        .samples
        .iter()
        .map(|s| taxfrontier::frontier::normalized_frontier_residual(&s.welfare, &m).abs())
        .fold(0.0, f64::max);
    Ok(check(
        "frontier-identity",
        worst <= 1e-10,
        format!("max |2s - (s + u)^2| in normalized units = {worst:.3e} (tol 1e-10)"),
    ))
}

fn no_tax(d: &SkillDistribution, workers: Parallelism) -> taxfrontier::Result<Check> {
    let mut min_grad = f64::INFINITY;
    for b1 in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for b2 in [0.1, 0.3, 0.5, 0.7, 0.9] {
            for y1 in kink_incomes(d) {
                let (g1, g2) = mean_utility_gradient(b1, b2, y1, d, 1e-4)?;
                min_grad = min_grad.min(g1).min(g2);
            }
        }
    }
    let best = optimize_two_bracket(0.0, d, &GridSpec::default(), workers)?.evaluation.policy;
    Ok(check(
        "no-tax-optimum",
        min_grad > 0.0 && best.beta1 == 1.0 && best.beta2 == 1.0,
        format!(
            "min dU/dbeta = {min_grad:.3e} over 100 policies; c = 0 grid optimum (beta1, beta2) = ({}, {})",
            best.beta1, best.beta2
        ),
    ))
}

fn table(d: &SkillDistribution, workers: Parallelism) -> taxfrontier::Result<Vec<Check>> {
    let eval = GridEvaluation::evaluate(d, &GridSpec::default(), workers)?;
    TABLE
        .iter()
        .map(|&(c, b1, b2, y1, v)| {
            let at = welfare_two_bracket(b1, b2, y1, d, c)?.welfare.v;
            let best = eval.argmax(c, workers)?.evaluation;
            let passed = (at - v).abs() <= 1e-3 && best.welfare.v >= v - 1e-3;
            Ok(check(
                format!("reference-optimum c={c}"),
                passed,
                format!(
                    "V at tabulated policy = {at:.5} (|dV| = {:.1e}); grid optimum V = {:.5} at ({}, {}, {}); target {v} (tol 1e-3)",
                    (at - v).abs(),
                    best.welfare.v,
                    num(best.policy.beta1),
                    num(best.policy.beta2),
                    num(best.policy.y1)
                ),
            ))
        })
        .collect()
}

fn is_table_distribution(d: &SkillDistribution) -> bool {
    d.is_uniform() && d.support() == (0.0, 10.0)
}

pub fn run(a: VerifyArgs, workers: Parallelism) -> Run {
    let mut r = Report::new("verify");
    let d = skills(&mut r, &a.common)?;
    let limits = if a.tamper_kink_limits {
        r.note("kink limits = share literals (tampered)");
        KinkLimits::ShareLiterals
    } else {
        KinkLimits::Thresholds
    };
    let mut checks = Vec::new();
    if a.table1 {
        if !is_table_distribution(&d) {
            return Err(Failure::Usage("--table1 needs --dist uniform:0:10".into()));
        }
        checks.extend(table(&d, workers)?);
    } else {
        checks.push(budget(&d, limits)?);
        checks.push(oracle(&d)?);
        checks.push(variance(&d)?);
        checks.push(frontier(&d)?);
        checks.push(no_tax(&d, workers)?);
        if is_table_distribution(&d) {
            checks.extend(table(&d, workers)?);
        } else {
            r.line("SKIP reference-optimum: tabulated optima refer to uniform(0, 10)");
        }
    }
    for c in &checks {
        r.line(format_args!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    emit(&r, a.common.output.as_deref())?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(failed.join(", ")))
    }
}
